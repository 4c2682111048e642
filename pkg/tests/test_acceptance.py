"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line through the ``acceptance`` fixture; the
lines are repeated in the pytest terminal summary.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import subprocess
import sys
import time

from cyclicsplit.albert import (
    NotDivision,
    TitsAlgebra,
    adjoint,
    cubic_norm,
    first_order_coefficient,
    non_division_pipeline,
    trace_form,
    u_operator,
    verify_tits_report,
)
from cyclicsplit.cli import canonical_json
from cyclicsplit.cyclic import CyclicAlgebra, reduced_norm, verify_certificate
from cyclicsplit.fields import RATIONALS, Witness, prime_field
from cyclicsplit.forms import (
    DiagonalForm,
    Impossible,
    Representation,
    ValuationProfile,
    represent_search,
    valuation_obstruction,
)
from cyclicsplit.kummer import KummerExtension
from cyclicsplit.linalg import determinant
from cyclicsplit.splitting import (
    Passed,
    Split,
    SplitInstance,
    binary_form_split_pipeline,
    guard_power_check,
    norm_identity,
    verify_counterexample,
)

SOUNDNESS_CASES = [(7, 3), (13, 3), (31, 3), (11, 5)]


def _pairs(d):
    return [(r, s) for r in range(1, d) for s in range(d) if r != s]


def _naive_values(p, d, c1, c2):
    """Every nonzero value of c1 x^d + c2 y^d over F_p, by a double loop on integers."""
    return {(c1 * pow(x, d, p) + c2 * pow(y, d, p)) % p for x in range(p) for y in range(p)} - {0}


def _enumeration(p, d):
    F = prime_field(p)
    for b in range(1, p):
        if isinstance(F.dth_power_test(F(b), d), Witness):
            continue
        for a in range(1, p):
            for r, s in _pairs(d):
                yield F, b, a, r, s


def test_norm_identity_over_function_field(acceptance):
    start = time.perf_counter()
    norm, expected = norm_identity()
    elapsed = time.perf_counter() - start
    ok = norm == expected and str(norm) == "z^3*t^2 - 3*x*y*z*t + y^3*t + x^3" and elapsed < 1.0
    acceptance("norm of x + y A + z A^2 over Frac(Q[x,y,z,t]) is exact", ok, f"{elapsed:.3f}s")
    assert ok


def test_binary_form_pipeline_soundness_exhaustive(acceptance):
    start = time.perf_counter()
    failures, splits, total = [], 0, 0
    for p, d in SOUNDNESS_CASES:
        oracle = {}
        for F, b, a, r, s in _enumeration(p, d):
            total += 1
            c2 = pow(b, r, p)
            if (a, c2) not in oracle:
                oracle[(a, c2)] = _naive_values(p, d, a, c2)
            represented = pow(b, s, p) in oracle[(a, c2)]
            out = binary_form_split_pipeline(SplitInstance(F, d, b, a, r, s))
            if represented != isinstance(out, Split):
                failures.append((p, d, b, a, r, s, "oracle disagrees"))
                continue
            if not represented:
                continue
            splits += 1
            cert = out.certificate
            if cert.witness.norm() != F(a) or not verify_certificate(cert):
                failures.append((p, d, b, a, r, s, "certificate"))
            elif cert.e.is_zero() or cert.e == cert.algebra.one or cert.e * cert.e != cert.e:
                failures.append((p, d, b, a, r, s, "idempotent"))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    acceptance(
        "splitting pipeline sound and complete against a naive oracle over F_7, F_13, F_31, F_11",
        ok,
        f"{splits} certificates / {total} instances, {len(failures)} failures, {elapsed:.1f}s",
    )
    assert not failures, failures[:5]
    assert elapsed < 60


def test_guard_passes_and_x_is_never_zero(acceptance):
    exceptions = []
    checked = 0
    for p, d in SOUNDNESS_CASES:
        for F, b, a, r, s in _enumeration(p, d):
            inst = SplitInstance(F, d, b, a, r, s)
            assert inst.ext.is_field and inst.ext.omega is not None
            if not isinstance(guard_power_check(inst), Passed):
                exceptions.append((p, d, b, a, r, s, "guard"))
            out = binary_form_split_pipeline(inst)
            if isinstance(out, Split):
                checked += 1
                if out.representation.args[0].is_zero():
                    exceptions.append((p, d, b, a, r, s, "x = 0"))
            # every x = 0 solution would need b^(s-r) to be a d-th power
            for y in range(p):
                if (pow(b, r, p) * pow(y, d, p) - pow(b, s, p)) % p == 0:
                    exceptions.append((p, d, b, a, r, s, "x = 0 solves"))
    ok = not exceptions
    acceptance(
        "guard passes whenever x^d - b is irreducible; no representation has x = 0",
        ok,
        f"{checked} representations, {len(exceptions)} exceptions",
    )
    assert ok, exceptions[:5]


def test_local_asymmetry_of_one_versus_p_squared(acceptance):
    p = 7
    verdict = valuation_obstruction(ValuationProfile(((0, 0), (1, 1)), 2, 3, "order", f"{p}-adic"))
    rep = represent_search(DiagonalForm(RATIONALS, 3, [1, p]), 1)
    ok = (
        isinstance(verdict, Impossible)
        and verdict.term_classes == (0, 1)
        and verdict.target_class == 2
        and isinstance(rep, Representation)
        and [str(x) for x in rep.args] == ["1", "0"]
        and rep.verify()
    )
    acceptance("<1, p> represents 1 but p^2 is blocked by valuations mod 3", ok)
    assert ok


def test_three_obstructed_cases_of_the_counterexample(acceptance):
    start = time.perf_counter()
    report = verify_counterexample(degree_bound=4)
    elapsed = time.perf_counter() - start
    data = report.to_dict()
    cases = data["cases"]
    case3 = data["case3"]
    ok = (
        report.identity_verified
        and [c["obstruction"]["verdict"] for c in cases] == ["Impossible", "Impossible"]
        and [c["obstruction"]["term_classes"] for c in cases] == [[2, 1], [0, 1]]
        and [c["obstruction"]["target_class"] for c in cases] == [0, 2]
        and all(c["search"]["result"] == "NoSolutionFound" for c in cases)
        and all(c["search"]["degree_bound"] == 4 for c in cases)
        and case3["obstruction"]["verdict"] == "Impossible"
        and case3["obstruction"]["term_classes"] == [1, 2]
        and case3["obstruction"]["target_class"] == 0
        and case3["search_status"] == "NoSolutionFound"
        and report.converse_fails
        and elapsed < 30
    )
    acceptance(
        "split algebra over Q(t) fails all three binary-form conditions", ok, f"{elapsed:.1f}s"
    )
    assert ok


def test_cubic_norm_structure_identities(acceptance):
    start = time.perf_counter()
    F7 = prime_field(7)
    l = KummerExtension(F7, 3, 3)
    rng = random.Random(20261016)
    failures = 0
    samples = 0
    for a, c in itertools.product(range(1, 7), repeat=2):
        J = TitsAlgebra(CyclicAlgebra(l, a), c)
        for _ in range(200):
            v, w = J.random_element(rng), J.random_element(rng)
            lam = F7(rng.randrange(1, 7))
            n = cubic_norm(J, v)
            sharp = adjoint(J, v)
            checks = (
                adjoint(J, sharp) == v.scale(n),
                cubic_norm(J, v.scale(lam)) == lam**3 * n,
                u_operator(J, J.one, w) == w,
                first_order_coefficient(J, v, w) == trace_form(J, sharp, w),
            )
            samples += 1
            failures += not all(checks)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 120
    acceptance(
        "adjoint, scaling, U_1 and first-order identities on J(A, c) over F_7",
        ok,
        f"{samples} samples, {failures} failures, {elapsed:.1f}s",
    )
    assert failures == 0
    assert elapsed < 120


def _norm_by_formula(J, w):
    """n(w) from the l-coordinates, using n(x0 + x1 z) = n_l(x0) + a n_l(x1)."""
    a = J.A.a
    c0, c1, c2 = w.coords
    if c2.is_zero():
        return c0.norm() + a * c1.norm()
    if c0.is_zero():
        # w = (c1 + c2 z) z
        return (c1.norm() + a * c2.norm()) * a
    if c1.is_zero():
        # w = c0 + c2 z^2 lies in l[z^2], and z^2 generates with (z^2)^3 = a^2
        return c0.norm() + a * a * c2.norm()
    return None


def test_non_division_pipeline_over_f7(acceptance):
    start = time.perf_counter()
    F7 = prime_field(7)
    l = KummerExtension(F7, 3, 3)
    failures = []
    for a, c in itertools.product(range(1, 7), repeat=2):
        J = TitsAlgebra(CyclicAlgebra(l, a), c)
        report = non_division_pipeline(J)
        if not isinstance(report, NotDivision):
            failures.append((a, c, "no representation"))
            continue
        v = report.zero_vector
        ok = (
            cubic_norm(J, v).is_zero()
            and not v.is_zero()
            and _norm_by_formula(J, report.w) == J.c
            and reduced_norm(report.w) == J.c
            and verify_tits_report(report.to_dict())
        )
        if not ok:
            failures.append((a, c, "checks"))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    acceptance(
        "every J(A, c) over F_7 gets a nonzero element of cubic norm 0",
        ok,
        f"36 pairs, {len(failures)} failures, {elapsed:.2f}s",
    )
    assert not failures, failures
    assert elapsed < 60


def test_norm_and_reduced_norm_oracles(acceptance):
    F7 = prime_field(7)
    l = KummerExtension(F7, 3, 3)
    discrepancies = 0
    elements = 0
    for u in l.elements():
        elements += 1
        conj = u * u.sigma() * u.sigma(2)
        if not conj.in_base() or conj.coords[0] != u.norm():
            discrepancies += 1
        if u.norm() != determinant(u.multiplication_matrix(), F7.one):
            discrepancies += 1
    A = CyclicAlgebra(l, 2)
    rng = random.Random(8)
    pairs = 10_000
    for _ in range(pairs):
        x, y = A.random_element(rng), A.random_element(rng)
        if reduced_norm(x * y) != reduced_norm(x) * reduced_norm(y):
            discrepancies += 1
    ok = discrepancies == 0 and elements == 343
    acceptance(
        "conjugate-product norm equals the determinant; reduced norm is multiplicative",
        ok,
        f"{elements} elements, {pairs} pairs, {discrepancies} discrepancies",
    )
    assert ok


def _certificate_instances(count=100):
    instances = []
    for p in (7, 13, 19):
        F = prime_field(p)
        for b in range(2, p):
            if isinstance(F.dth_power_test(F(b), 3), Witness):
                continue
            for a in range(1, p):
                for r, s in _pairs(3):
                    instances.append((p, b, a, r, s))
    rng = random.Random(100)
    rng.shuffle(instances)
    return instances, count


_GENERATOR = """
import sys
from cyclicsplit.cli import canonical_json
from cyclicsplit.fields import prime_field
from cyclicsplit.splitting import Split, SplitInstance, binary_form_split_pipeline

threads = int(sys.argv[1])
out = []
for line in sys.stdin.read().split():
    p, b, a, r, s = map(int, line.split(","))
    res = binary_form_split_pipeline(SplitInstance(prime_field(p), 3, b, a, r, s), threads=threads)
    out.append(canonical_json(res.to_dict()))
sys.stdout.write("".join(out))
"""


def _generate(chosen, threads):
    payloads = []
    for p, b, a, r, s in chosen:
        res = binary_form_split_pipeline(SplitInstance(prime_field(p), 3, b, a, r, s), threads=threads)
        payloads.append(canonical_json(res.to_dict()))
    return payloads


def test_certificate_round_trip(tmp_path, acceptance):
    instances, count = _certificate_instances()
    chosen = []
    for inst in instances:
        p, b, a, r, s = inst
        if isinstance(binary_form_split_pipeline(SplitInstance(prime_field(p), 3, b, a, r, s)), Split):
            chosen.append(inst)
        if len(chosen) == count:
            break
    first = _generate(chosen, 1)
    second = _generate(chosen, 1)
    threaded = _generate(chosen, 4)
    paths = []
    for i, payload in enumerate(first):
        path = tmp_path / f"cert{i:03d}.json"
        path.write_text(payload)
        paths.append(str(path))
    env = dict(os.environ, PYTHONHASHSEED="12345")
    verify = subprocess.run(
        [sys.executable, "-m", "cyclicsplit", "verify", *paths],
        capture_output=True, text=True, timeout=600, env=env,
    )
    fresh = subprocess.run(
        [sys.executable, "-c", _GENERATOR, "2"],
        input="\n".join(",".join(map(str, inst)) for inst in chosen),
        capture_output=True, text=True, timeout=600, env=dict(os.environ, PYTHONHASHSEED="999"),
    )
    loaded_ok = all(verify_certificate_payload(text) for text in first)
    ok = (
        len(chosen) == count
        and verify.returncode == 0
        and verify.stdout.count(": OK") == count
        and first == second == threaded
        and fresh.returncode == 0
        and fresh.stdout == "".join(first)
        and loaded_ok
    )
    acceptance(
        "certificates survive JSON, a fresh process, reruns and thread counts",
        ok,
        f"{len(chosen)} certificates, verify exit {verify.returncode}",
    )
    assert ok, verify.stdout[-2000:] + verify.stderr[-2000:] + fresh.stderr[-2000:]


def verify_certificate_payload(text):
    from cyclicsplit.cyclic import SplitCertificate

    data = json.loads(text)
    return data["status"] == "Split" and verify_certificate(SplitCertificate.from_dict(data["certificate"]))
