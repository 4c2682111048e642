"""Splitting pipelines for cyclic algebras (l, a) with l = k[A]/(A^d - b).

The sufficient condition: if the binary form <a, b^r> of degree d
represents b^s (1 <= r <= d-1, 0 <= s <= d-1, r != s) then a is a norm
from l, witnessed by u = (1/x) A^s + (-y/x) A^r, and (l, a) is split.
The engine turns each hit into a :class:`SplitCertificate`; it never
claims that an algebra is *not* split.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cyclic import CyclicAlgebra, SplitCertificate, certificate_from_norm_witness, verify_certificate
from .fields import (
    RATIONALS,
    Field,
    FieldElement,
    NotAPower,
    Witness,
    cyclotomic_field,
    field_from_descriptor,
)
from .forms import (
    EXAMPLE_VARIABLES,
    SEARCH_PRIME,
    SEARCH_SPECIALIZATION,
    DiagonalForm,
    Impossible,
    RefutationReport,
    Representation,
    SearchBudget,
    ValuationProfile,
    _fp_equation,
    cubic_norm_polynomial,
    example1_case3_refute,
    polynomial_solution_search,
    profile_from_polynomials,
    represent_search,
    valuation_obstruction,
)
from .kummer import KummerExtension
from .polyring import fraction_field

CUBIC_ROWS = ((1, 0), (1, 2), (2, 0), (2, 1))


def _ordinal(n: int) -> str:
    suffix = "th" if n % 100 in (11, 12, 13) else {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


@dataclass
class SplitInstance:
    """Data (k, d, b, a, r, s) for the binary-form splitting test."""

    field: Field
    d: int
    b: FieldElement
    a: FieldElement
    r: int
    s: int

    def __post_init__(self):
        k = self.field
        k.check_degree(self.d)
        if self.d < 3 or self.d % 2 == 0:
            raise ValueError(f"degree must be odd and at least 3, got {self.d}")
        if k.primitive_root_of_unity(self.d) is None:
            raise ValueError(f"{k} contains no primitive {_ordinal(self.d)} root of unity")
        self.a, self.b = k(self.a), k(self.b)
        if self.a.is_zero() or self.b.is_zero():
            raise ValueError("a and b must be nonzero")
        if not 1 <= self.r <= self.d - 1:
            raise ValueError(f"r must lie in 1..{self.d - 1}")
        if not 0 <= self.s <= self.d - 1:
            raise ValueError(f"s must lie in 0..{self.d - 1}")
        if self.r == self.s:
            raise ValueError("r and s must differ")
        self.ext = KummerExtension(k, self.d, self.b)
        self.algebra = CyclicAlgebra(self.ext, self.a)

    @property
    def form(self) -> DiagonalForm:
        return DiagonalForm(self.field, self.d, [self.a, self.b**self.r])

    @property
    def target(self) -> FieldElement:
        return self.b**self.s


# -- guard -------------------------------------------------------------------


@dataclass(frozen=True)
class Passed:
    exponent: int

    def to_dict(self):
        return {"guard": "Passed", "exponent": self.exponent}


@dataclass(frozen=True)
class DegeneratePower:
    exponent: int
    root: FieldElement

    def to_dict(self):
        return {"guard": "DegeneratePower", "exponent": self.exponent, "root": self.root.to_json()}


@dataclass(frozen=True)
class GuardUndecided:
    exponent: int
    reason: str

    def to_dict(self):
        return {"guard": "Undecided", "exponent": self.exponent, "reason": self.reason}


def guard_power_check(inst: SplitInstance) -> Passed | DegeneratePower | GuardUndecided:
    """Is b^(s-r) a d-th power?  If not, no representation has x = 0.

    With x = 0 the equation reads b^r y^d = b^s, so b^(s-r) = y^d.
    """
    exponent = inst.s - inst.r
    res = inst.field.dth_power_test(inst.b**exponent, inst.d)
    if isinstance(res, NotAPower):
        return Passed(exponent)
    if isinstance(res, Witness):
        return DegeneratePower(exponent, res.root)
    return GuardUndecided(exponent, res.reason)


# -- pipeline outcomes ----------------------------------------------------------


@dataclass
class Split:
    certificate: SplitCertificate
    representation: Representation

    status = "Split"

    def to_dict(self):
        return {
            "status": self.status,
            "certificate": self.certificate.to_dict(),
            "representation": self.representation.to_dict(),
        }


@dataclass
class DegenerateSplit:
    """b = gamma^d: l is not a field and (l, a) is split for every a.

    ``zero_divisors`` is the pair (A - gamma, A^(d-1) + gamma A^(d-2) + ... + gamma^(d-1))
    whose product is A^d - gamma^d = 0.
    """

    reason: str
    gamma: FieldElement
    zero_divisors: tuple

    status = "DegenerateSplit"

    def verify(self) -> bool:
        u, v = self.zero_divisors
        return not u.is_zero() and not v.is_zero() and (u * v).is_zero()

    def to_dict(self):
        alg = self.zero_divisors[0].alg
        ext = alg.ext
        return {
            "status": self.status,
            "reason": self.reason,
            "field": ext.field.descriptor,
            "d": ext.d,
            "b": ext.b.to_json(),
            "a": alg.a.to_json(),
            "omega": ext.omega.to_json(),
            "gamma": self.gamma.to_json(),
            "zero_divisors": [z.to_json() for z in self.zero_divisors],
        }


def verify_degenerate(data: dict) -> bool:
    """Rebuild (l, a) and recheck gamma^d = b and that the pair multiplies to 0."""
    try:
        k = field_from_descriptor(data["field"])
        d = int(data["d"])
        ext = KummerExtension(k, d, k.from_json(data["b"]), k.from_json(data["omega"]))
        alg = CyclicAlgebra(ext, k.from_json(data["a"]))
        gamma = k.from_json(data["gamma"])
        u, v = (
            alg(tuple(ext(tuple(k.from_json(c) for c in lc)) for lc in z))
            for z in data["zero_divisors"]
        )
        return gamma**d == ext.b and DegenerateSplit("", gamma, (u, v)).verify()
    except (ArithmeticError, ValueError, KeyError, TypeError):
        return False


@dataclass
class Inconclusive:
    reason: str
    details: dict = field(default_factory=dict)

    status = "Inconclusive"

    def to_dict(self):
        return {"status": self.status, "reason": self.reason, "details": self.details}


PipelineOutcome = Split | DegenerateSplit | Inconclusive


def _degenerate(inst: SplitInstance, gamma: FieldElement) -> DegenerateSplit:
    A = inst.algebra
    ext = inst.ext
    alpha = ext.alpha
    u = alpha - gamma
    v = ext.zero
    for i in range(inst.d):
        v = v + alpha ** (inst.d - 1 - i) * gamma**i
    out = DegenerateSplit(
        reason=f"b = ({gamma})^{inst.d} is a {_ordinal(inst.d)} power; l is split etale",
        gamma=gamma,
        zero_divisors=(A.from_l(u), A.from_l(v)),
    )
    assert out.verify()
    return out


def binary_form_split_pipeline(
    inst: SplitInstance, budget: SearchBudget | None = None, threads: int = 1
) -> PipelineOutcome:
    """Search <a, b^r> for b^s and turn a hit into a splitting certificate."""
    k, d = inst.field, inst.d
    root = k.dth_power_test(inst.b, d)
    if isinstance(root, Witness):
        return _degenerate(inst, root.root)
    is_field = inst.ext.is_field
    if is_field is None:
        return Inconclusive("could not decide whether x^d - b is irreducible")
    if not is_field:
        return Inconclusive(
            "x^d - b is reducible although b is not a d-th power; not covered",
            {"d": d},
        )
    guard = guard_power_check(inst)
    if not isinstance(guard, Passed):
        # unreachable when l is a field and k holds the d-th roots of unity
        return Inconclusive("guard did not pass", guard.to_dict())
    found = represent_search(inst.form, inst.target, budget, threads=threads)
    if not isinstance(found, Representation):
        return Inconclusive("no representation found", found.to_dict())
    x, y = found.args
    assert not x.is_zero(), "guard passed but the representation has x = 0"
    ext = inst.ext
    u = ext.monomial(x.inverse(), inst.s) + ext.monomial(-y / x, inst.r)
    if u.norm() != inst.a:
        raise AssertionError(f"witness {u} has norm {u.norm()}, expected {inst.a}")
    provenance = {
        "r": inst.r,
        "s": inst.s,
        "form": [c.to_json() for c in inst.form.coeffs],
        "target": inst.target.to_json(),
        "representation": [x.to_json(), y.to_json()],
        "searched": found.searched,
    }
    cert = certificate_from_norm_witness(inst.algebra, u, provenance)
    assert verify_certificate(cert)
    return Split(cert, found)


# -- the four cubic conditions -----------------------------------------------------


@dataclass
class CubicConditionsReport:
    """One row per (r, s) in (1,0), (1,2), (2,0), (2,1): <a,b> for 1 and b^2, <a,b^2> for 1 and b."""

    rows: list[tuple[int, int, PipelineOutcome]]

    @property
    def fired(self) -> list[tuple[int, int]]:
        return [(r, s) for r, s, out in self.rows if not isinstance(out, Inconclusive)]

    @property
    def split(self) -> bool:
        return bool(self.fired)

    def best(self) -> PipelineOutcome:
        for _, _, out in self.rows:
            if not isinstance(out, Inconclusive):
                return out
        return self.rows[0][2]

    def to_dict(self):
        return {
            "kind": "cubic-conditions",
            "rows": [
                {"r": r, "s": s, "condition": row_label(r, s), **out.to_dict()}
                for r, s, out in self.rows
            ],
            "fired": [list(rs) for rs in self.fired],
            "split": self.split,
        }


def row_label(r: int, s: int) -> str:
    coeff = "b" if r == 1 else "b^2"
    target = {0: "1", 1: "b", 2: "b^2"}[s]
    return f"<a, {coeff}> represents {target}"


def cubic_split_conditions(
    k: Field, a, b, budget: SearchBudget | None = None, threads: int = 1
) -> CubicConditionsReport:
    """Run the binary-form pipeline for the four cubic rows, in parallel when threads > 1."""
    instances = [SplitInstance(k, 3, b, a, r, s) for r, s in CUBIC_ROWS]

    def run(inst):
        return binary_form_split_pipeline(inst, budget)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, 4)) as pool:
            outcomes = list(pool.map(run, instances))
    else:
        outcomes = [run(i) for i in instances]
    return CubicConditionsReport([(r, s, o) for (r, s), o in zip(CUBIC_ROWS, outcomes)])


# -- local asymmetry -------------------------------------------------------------------


def local_asymmetry(p: int = 7) -> dict:
    """<1, p> represents 1 over Q, yet p^2 is excluded by p-adic valuations mod 3.

    So "<a,b> represents 1" and "<a,b> represents b^2" are different
    conditions (a = 1, b = p).
    """
    form = DiagonalForm(RATIONALS, 3, [1, p])
    hit = represent_search(form, 1, SearchBudget(height=5, max_candidates=1000))
    profile = ValuationProfile(((0, 0), (1, 1)), 2, 3, "order", f"{p}-adic")
    obstruction = valuation_obstruction(profile)
    return {
        "p": p,
        "represents_one": hit.to_dict(),
        "represents_p_squared": obstruction.to_dict(),
        "asymmetric": isinstance(hit, Representation) and isinstance(obstruction, Impossible),
    }


# -- the t-adic counterexample ------------------------------------------------------


@dataclass
class CaseReport:
    claim: str
    profile: ValuationProfile
    verdict: Impossible | object
    search: object | None

    def to_dict(self):
        return {
            "claim": self.claim,
            "profile": self.profile.to_dict(),
            "obstruction": self.verdict.to_dict(),
            "search": None if self.search is None else self.search.to_dict(),
        }


@dataclass
class CounterexampleReport:
    witness: str
    norm: str
    expected: str
    identity_verified: bool
    paths_agree: bool
    cases: list[CaseReport]
    case3: RefutationReport

    @property
    def obstructions_confirmed(self) -> bool:
        searches_clean = all(c.search is None or not c.search.found for c in self.cases)
        return (
            all(isinstance(c.verdict, Impossible) for c in self.cases)
            and searches_clean
            and self.case3.refuted
        )

    @property
    def converse_fails(self) -> bool:
        return self.identity_verified and self.paths_agree and self.obstructions_confirmed

    def to_dict(self):
        return {
            "kind": "counterexample-report",
            "a": self.expected,
            "b": "t",
            "witness": self.witness,
            "norm": self.norm,
            "identity_verified": self.identity_verified,
            "norm_paths_agree": self.paths_agree,
            "cases": [c.to_dict() for c in self.cases],
            "case3": self.case3.to_dict(),
            "search_field": f"F_{SEARCH_PRIME}",
            "search_specialization": SEARCH_SPECIALIZATION,
            "obstructions_confirmed": self.obstructions_confirmed,
            "converse_fails": self.converse_fails,
        }


def norm_identity(witness: str = "x + y*A + z*A^2", base: Field = RATIONALS):
    """Norm of ``witness`` in Frac(base[x,y,z,t])[A]/(A^3 - t) and the polynomial a."""
    F = fraction_field(base, EXAMPLE_VARIABLES)
    ext = KummerExtension(F, 3, F.gen("t"))
    norm = ext.parse(witness).norm()
    return norm, F(cubic_norm_polynomial(F.ring))


def _conjugate_path_agrees(witness: str, rational_norm) -> bool:
    """Recompute the norm as a product of conjugates over Q(w) and compare."""
    Qw = cyclotomic_field(3)
    F = fraction_field(Qw, EXAMPLE_VARIABLES)
    ext = KummerExtension(F, 3, F.gen("t"))
    assert ext.omega is not None
    norm_w = ext.parse(witness).norm()
    lifted = rational_norm.num.map_coefficients(F.ring, lambda c: Qw(c.q))
    return norm_w.is_polynomial() and rational_norm.is_polynomial() and norm_w.num == lifted


def verify_counterexample(witness: str = "x + y*A + z*A^2", degree_bound: int = 4) -> CounterexampleReport:
    """a = n(x + yA + zA^2) is a norm from F(t^(1/3)), so (F(t^(1/3)), a) is split,
    yet none of the four binary-form conditions holds for (a, b = t)."""
    norm, expected = norm_identity(witness)
    identity = norm == expected
    agree = _conjugate_path_agrees(witness, norm)
    ring = expected.num.ring
    a = expected.num
    t = ring.gen("t")
    one = ring.one
    spec = SEARCH_SPECIALIZATION
    a_fp = a.specialize(spec)

    cases = []
    prof1 = profile_from_polynomials([a, t], one, "t", 3, "degree")
    search1 = None
    if degree_bound > 0:
        eq = _fp_equation([a_fp, t, one], [1, 1, -1])
        search1 = polynomial_solution_search(eq, 3, SEARCH_PRIME, degree_bound, "degree")
    cases.append(CaseReport("<a, t> represents 1", prof1, valuation_obstruction(prof1), search1))

    prof2 = profile_from_polynomials([a, t], t**2, "t", 3, "order")
    search2 = None
    if degree_bound > 0:
        eq = _fp_equation([a_fp, t, t**2], [1, 1, -1])
        search2 = polynomial_solution_search(eq, 3, SEARCH_PRIME, degree_bound, "order")
    cases.append(CaseReport("<a, t> represents t^2", prof2, valuation_obstruction(prof2), search2))

    case3 = example1_case3_refute(degree_bound)
    return CounterexampleReport(
        witness=witness,
        norm=str(norm),
        expected=str(expected),
        identity_verified=identity,
        paths_agree=agree,
        cases=cases,
        case3=case3,
    )
