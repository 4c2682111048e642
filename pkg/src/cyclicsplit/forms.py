"""Diagonal forms of degree d, representation search and valuation obstructions.

Search outcomes are values, never exceptions:

* :class:`Representation` -- arguments found, evaluation re-checked;
* :class:`ExhaustedNo`    -- finite field, every candidate tried, none works;
* :class:`NotFound`       -- infinite field, budget spent; says nothing.

Enumeration order is fixed.  Over a finite field the first m-1 arguments
run lexicographically through the field order and the last one is solved
for (smallest d-th root), which returns exactly the first hit of the naive
lexicographic scan.  Over Q and Q(w) the argument tuples run by increasing
height, lexicographically within a height.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .fields import Field, FieldElement, Unknown, Witness
from .kummer import KummerElement, KummerExtension
from .polyring import MultiPoly


@dataclass(frozen=True)
class SearchBudget:
    """``height`` bounds argument heights over Q and Q(w); ``max_candidates``
    caps the number of argument tuples tried.  Finite fields ignore both."""

    height: int = 50
    max_candidates: int = 100_000


class DiagonalForm:
    """<c_1, ..., c_m> of degree d: (x_1..x_m) -> sum c_i x_i^d."""

    def __init__(self, field: Field, d: int, coeffs: Sequence):
        self.field = field
        self.d = d
        self.coeffs = tuple(field(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a form needs at least one coefficient")
        if any(c.is_zero() for c in self.coeffs):
            raise ValueError("diagonal form coefficients must be nonzero")

    @property
    def arity(self):
        return len(self.coeffs)

    def evaluate(self, args: Sequence) -> FieldElement:
        if len(args) != self.arity:
            raise ValueError(f"form of arity {self.arity} given {len(args)} arguments")
        total = self.field.zero
        for c, x in zip(self.coeffs, args):
            total = total + c * self.field(x) ** self.d
        return total

    def describe(self) -> dict:
        return {
            "type": "diagonal",
            "d": self.d,
            "coefficients": [c.to_json() for c in self.coeffs],
        }

    def __str__(self):
        return "<" + ", ".join(str(c) for c in self.coeffs) + f"> (degree {self.d})"


class TensorNormForm:
    """<c_1, c_2> (x) n_{l/k}: (x, y) in l x l -> c_1 N(x) + c_2 N(y)."""

    def __init__(self, ext: KummerExtension, c1, c2):
        self.ext = ext
        self.field = ext.field
        self.d = ext.d
        self.coeffs = (self.field(c1), self.field(c2))
        if any(c.is_zero() for c in self.coeffs):
            raise ValueError("form coefficients must be nonzero")

    arity = 2

    def evaluate(self, args: Sequence) -> FieldElement:
        if len(args) != 2:
            raise ValueError("tensor norm form takes two arguments in l")
        x, y = (self.ext(a) for a in args)
        return self.coeffs[0] * x.norm() + self.coeffs[1] * y.norm()

    def describe(self) -> dict:
        return {
            "type": "tensor-norm",
            "d": self.d,
            "coefficients": [c.to_json() for c in self.coeffs],
            "b": self.ext.b.to_json(),
            "omega": None if self.ext.omega is None else self.ext.omega.to_json(),
        }

    def __str__(self):
        return f"<{self.coeffs[0]}, {self.coeffs[1]}> (x) n_l  (l = k[A]/(A^{self.d} - {self.ext.b}))"


@dataclass
class Representation:
    form: DiagonalForm | TensorNormForm
    args: tuple
    target: FieldElement
    searched: int = 0

    def verify(self) -> bool:
        return self.form.evaluate(self.args) == self.target

    def to_dict(self) -> dict:
        return {
            "kind": "representation",
            "field": self.form.field.descriptor,
            "form": self.form.describe(),
            "target": self.target.to_json(),
            "args": [a.to_json() for a in self.args],
            "searched": self.searched,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Representation":
        from .fields import field_from_descriptor

        k = field_from_descriptor(data["field"])
        spec = data["form"]
        coeffs = [k.from_json(c) for c in spec["coefficients"]]
        if spec["type"] == "diagonal":
            form = DiagonalForm(k, spec["d"], coeffs)
            args = tuple(k.from_json(a) for a in data["args"])
        else:
            omega = None if spec["omega"] is None else k.from_json(spec["omega"])
            ext = KummerExtension(k, spec["d"], k.from_json(spec["b"]), omega)
            form = TensorNormForm(ext, *coeffs)
            args = tuple(ext(tuple(k.from_json(c) for c in a)) for a in data["args"])
        return cls(form, args, k.from_json(data["target"]), data.get("searched", 0))


@dataclass(frozen=True)
class NotFound:
    """Budget exhausted over an infinite field: inconclusive."""

    searched: int
    height: int
    undecided: int = 0

    def to_dict(self):
        return {
            "kind": "not-found",
            "searched": self.searched,
            "height": self.height,
            "undecided": self.undecided,
        }


@dataclass(frozen=True)
class ExhaustedNo:
    """Every candidate over a finite field was tried; the target is not represented."""

    searched: int

    def to_dict(self):
        return {"kind": "exhausted-no", "searched": self.searched}


SearchOutcome = Representation | NotFound | ExhaustedNo


# -- enumeration helpers ---------------------------------------------------


def _height_pool(k: Field, h: int) -> list:
    if hasattr(k, "elements_of_height"):
        return list(k.elements_of_height(h))
    raise ValueError(f"no height enumeration for {k}")


def tuples_by_height(k: Field, n: int, max_height: int) -> Iterable[tuple]:
    """n-tuples over Q or Q(w), by increasing max height, lexicographic within."""
    if n == 0:
        yield ()
        return
    pool: list = []
    for h in range(max_height + 1):
        fresh = _height_pool(k, h)
        pool = sorted(pool + fresh, key=lambda x: x.sort_key())
        for tup in itertools.product(pool, repeat=n):
            if max(x.height() for x in tup) == h:
                yield tup


def _shards(items: list, n: int) -> list[tuple[int, list]]:
    n = max(1, min(n, len(items)))
    size = -(-len(items) // n)
    return [(i, items[i : i + size]) for i in range(0, len(items), size)]


# -- representation search -------------------------------------------------


def represent_search(
    form: DiagonalForm | TensorNormForm,
    target,
    budget: SearchBudget | None = None,
    *,
    nonzero_slots: Sequence[int] = (),
    threads: int = 1,
) -> SearchOutcome:
    """First representation of ``target`` in enumeration order.

    ``nonzero_slots`` restricts the listed argument slots to nonzero values.
    ``threads`` shards the first argument's range; shards are merged by
    enumeration index so the answer does not depend on the thread count.
    """
    budget = budget or SearchBudget()
    target = form.field(target)
    if target.is_zero():
        raise ValueError("target must be nonzero")
    nonzero = frozenset(nonzero_slots)
    if isinstance(form, TensorNormForm):
        if form.field.is_finite:
            return _tensor_finite(form, target, nonzero, threads)
        return _tensor_bounded(form, target, nonzero, budget)
    if form.field.is_finite:
        return _diagonal_finite(form, target, nonzero, threads)
    return _diagonal_bounded(form, target, nonzero, budget)


def _diagonal_finite(form, target, nonzero, threads):
    k, d = form.field, form.d
    elements = k.elements()
    powers = {x: x**d for x in elements}
    last = form.arity - 1
    c_last_inv = form.coeffs[-1].inverse()
    size = len(elements)

    def solve(prefix):
        rest = target
        for c, x in zip(form.coeffs, prefix):
            rest = rest - c * powers[x]
        rest = rest * c_last_inv
        if rest.is_zero():
            return None if last in nonzero else k.zero
        res = k.dth_power_test(rest, d)
        return res.root if isinstance(res, Witness) else None

    if last == 0:
        y = solve(())
        if y is None:
            return ExhaustedNo(searched=1)
        return Representation(form, (y,), target, searched=1)

    def allowed(slot):
        return [x for x in elements if not (slot in nonzero and x.is_zero())]

    head = allowed(0)
    tails = [allowed(i) for i in range(1, last)]
    tail_count = 1
    for t in tails:
        tail_count *= len(t)

    def scan(offset_and_chunk):
        offset, chunk = offset_and_chunk
        for i, x0 in enumerate(chunk):
            for j, tail in enumerate(itertools.product(*tails)):
                prefix = (x0,) + tail
                y = solve(prefix)
                if y is not None:
                    return (offset + i) * tail_count + j, prefix + (y,)
        return None

    shards = _shards(head, threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, shards))
    else:
        results = []
        for shard in shards:
            results.append(scan(shard))
            if results[-1] is not None:
                break
    hits = [r for r in results if r is not None]
    if not hits:
        return ExhaustedNo(searched=len(head) * tail_count)
    index, args = min(hits, key=lambda r: r[0])
    rep = Representation(form, args, target, searched=index + 1)
    assert rep.verify()
    del size
    return rep


def _diagonal_bounded(form, target, nonzero, budget):
    k, d = form.field, form.d
    last = form.arity - 1
    c_last_inv = form.coeffs[-1].inverse()
    searched = undecided = 0
    for prefix in tuples_by_height(k, last, budget.height):
        if any(i in nonzero and x.is_zero() for i, x in enumerate(prefix)):
            continue
        if searched >= budget.max_candidates:
            break
        searched += 1
        rest = target
        for c, x in zip(form.coeffs, prefix):
            rest = rest - c * x**d
        rest = rest * c_last_inv
        if rest.is_zero():
            if last in nonzero:
                continue
            y = k.zero
        else:
            res = k.dth_power_test(rest, d)
            if isinstance(res, Unknown):
                undecided += 1
            if not isinstance(res, Witness):
                continue
            y = res.root
        rep = Representation(form, prefix + (y,), target, searched=searched)
        assert rep.verify()
        return rep
    return NotFound(searched=searched, height=budget.height, undecided=undecided)


def _tensor_finite(form, target, nonzero, threads):
    ext = form.ext
    c1, c2 = form.coeffs
    c2_inv = c2.inverse()
    elements = list(ext.elements())
    norms = [x.norm() for x in elements]
    first_y: dict = {}
    for y, n in zip(elements, norms):
        if 1 in nonzero and y.is_zero():
            continue
        first_y.setdefault(n, y)
    indexed = [(i, x, n) for i, (x, n) in enumerate(zip(elements, norms))]
    if 0 in nonzero:
        indexed = [t for t in indexed if not t[1].is_zero()]

    def scan(offset_and_chunk):
        _, chunk = offset_and_chunk
        for i, x, n in chunk:
            y = first_y.get((target - c1 * n) * c2_inv)
            if y is not None:
                return i, (x, y)
        return None

    shards = _shards(indexed, threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, shards))
    else:
        results = []
        for shard in shards:
            results.append(scan(shard))
            if results[-1] is not None:
                break
    hits = [r for r in results if r is not None]
    if not hits:
        return ExhaustedNo(searched=len(indexed))
    index, args = min(hits, key=lambda r: r[0])
    position = next(j for j, t in enumerate(indexed) if t[0] == index)
    rep = Representation(form, args, target, searched=position + 1)
    assert rep.verify()
    return rep


def _tensor_bounded(form, target, nonzero, budget):
    ext = form.ext
    d = ext.d
    searched = 0
    for coords in tuples_by_height(form.field, 2 * d, budget.height):
        x, y = ext(coords[:d]), ext(coords[d:])
        if (0 in nonzero and x.is_zero()) or (1 in nonzero and y.is_zero()):
            continue
        if searched >= budget.max_candidates:
            break
        searched += 1
        if form.evaluate((x, y)) == target:
            return Representation(form, (x, y), target, searched=searched)
    return NotFound(searched=searched, height=budget.height)


# -- valuation obstruction ---------------------------------------------------


@dataclass(frozen=True)
class ValuationProfile:
    """Valuations of the coefficients of sum c_i x_i^d = target at one place.

    ``terms`` lists (valuation of c_i, argument slot).  Each nonzero term
    c_i x_i^d has valuation congruent to v(c_i) mod d.  ``kind`` records
    whether the numbers are orders of vanishing ("order", minimum wins) or
    degrees ("degree", maximum wins); the residue argument is the same.
    """

    terms: tuple[tuple[int, int], ...]
    target: int
    d: int
    kind: str = "order"
    place: str = ""

    def to_dict(self):
        return {
            "terms": [list(t) for t in self.terms],
            "target": self.target,
            "d": self.d,
            "kind": self.kind,
            "place": self.place,
        }


@dataclass(frozen=True)
class Impossible:
    term_classes: tuple[int, ...]
    target_class: int

    verdict = "Impossible"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "term_classes": list(self.term_classes),
            "target_class": self.target_class,
        }


@dataclass(frozen=True)
class Inconclusive:
    term_classes: tuple[int, ...]
    target_class: int
    reason: str

    verdict = "Inconclusive"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "term_classes": list(self.term_classes),
            "target_class": self.target_class,
            "reason": self.reason,
        }


def valuation_obstruction(profile: ValuationProfile) -> Impossible | Inconclusive:
    """Impossible when the term classes mod d are pairwise distinct and miss the target's.

    Then no two nonzero terms can cancel, so the valuation of the sum is
    that of a single term, whose class differs from the target's.
    """
    if profile.d < 2:
        raise ValueError("degree must be at least 2")
    if not 2 <= len(profile.terms) <= 3:
        raise ValueError("profile must be binary or ternary")
    slots = [s for _, s in profile.terms]
    if len(set(slots)) != len(slots):
        raise ValueError("each argument slot may appear once")
    if profile.kind not in ("order", "degree"):
        raise ValueError(f"unknown valuation kind {profile.kind!r}")
    classes = tuple(v % profile.d for v, _ in profile.terms)
    target_class = profile.target % profile.d
    if len(set(classes)) < len(classes):
        return Inconclusive(classes, target_class, "two terms share a class and may cancel")
    if target_class in classes:
        return Inconclusive(classes, target_class, "target class is attained by a term")
    return Impossible(classes, target_class)


def profile_from_polynomials(
    coeffs: Sequence[MultiPoly], target: MultiPoly, var: str, d: int, kind: str = "order"
) -> ValuationProfile:
    """Read the valuation data off actual polynomials (order or degree in ``var``)."""
    measure = (lambda f: f.order_in(var)) if kind == "order" else (lambda f: f.degree_in(var))
    return ValuationProfile(
        terms=tuple((int(measure(c)), i) for i, c in enumerate(coeffs)),
        target=int(measure(target)),
        d=d,
        kind=kind,
        place=(f"{var}-adic order" if kind == "order" else f"degree in {var}"),
    )


# -- bounded polynomial search --------------------------------------------


def _series_power(coeffs: list[int], d: int, upto: int, p: int) -> list[int]:
    """Coefficients 0..upto of (sum coeffs[i] t^i)^d mod p."""
    result = [1] + [0] * upto
    for _ in range(d):
        nxt = [0] * (upto + 1)
        for i, a in enumerate(result):
            if a:
                for j, b in enumerate(coeffs[: upto + 1 - i]):
                    if b:
                        nxt[i + j] = (nxt[i + j] + a * b) % p
        result = nxt
    return result


@dataclass
class PolynomialSearchReport:
    """Exhaustive search for nonzero X_i in F_p[t], deg X_i <= D, with sum e_i X_i^d = 0."""

    p: int
    d: int
    degree_bound: int
    direction: str
    equation: list[list[int]]
    solutions: list = field(default_factory=list)
    nodes: int = 0

    @property
    def found(self) -> bool:
        return bool(self.solutions)

    def to_dict(self):
        return {
            "p": self.p,
            "d": self.d,
            "degree_bound": self.degree_bound,
            "direction": self.direction,
            "equation": self.equation,
            "solutions": self.solutions,
            "nodes": self.nodes,
            "result": "SolutionFound" if self.solutions else "NoSolutionFound",
        }


def polynomial_solution_search(
    equation: Sequence[Sequence[int]],
    d: int,
    p: int,
    degree_bound: int,
    direction: str = "order",
    max_solutions: int = 1,
) -> PolynomialSearchReport:
    """Search X_1..X_m in F_p[t] of degree <= D, not all zero, with sum e_i X_i^d = 0.

    ``equation`` holds the coefficient lists of e_1..e_m (ascending in t).
    Coefficients are assigned level by level and a branch is cut as soon as
    the equation fails modulo the next power of the uniformizer:
    ``direction="order"`` lifts t-adically from the constant terms,
    ``direction="degree"`` lifts in 1/t from the leading terms (the same
    search after reversing every polynomial).  Solutions whose entries are
    all divisible by the uniformizer are skipped: dividing them out gives a
    solution of lower degree, which the search also covers.  The search is
    exhaustive over the box, so "no solution" is a statement about all
    degree-bounded tuples.
    """
    eqs = [[c % p for c in e] for e in equation]
    m = len(eqs)
    D = degree_bound
    if direction == "degree":
        top = max(len(e) - 1 for e in eqs)
        eqs = [[0] * (top - (len(e) - 1)) + list(reversed(e)) for e in eqs]
    elif direction != "order":
        raise ValueError("direction must be 'order' or 'degree'")
    report = PolynomialSearchReport(p, d, D, direction, [list(e) for e in equation])
    total_degree = max(len(e) for e in eqs) - 1 + d * D
    values = range(p)

    def contribution(e, X, k):
        pw = _series_power(X, d, k, p)
        return sum(c * pw[k - j] for j, c in enumerate(e[: k + 1]) if c) % p

    def rec(level, polys):
        report.nodes += 1
        if level > D:
            if all(
                sum(contribution(e, X, k) for e, X in zip(eqs, polys)) % p == 0
                for k in range(D + 1, total_degree + 1)
            ):
                sol = [list(X) for X in polys]
                if direction == "degree":
                    sol = [list(reversed(X)) for X in sol]
                report.solutions.append(sol)
            return
        # coefficient ``level`` of the equation splits as a sum over the slots,
        # each part depending only on that slot's new coefficient
        parts = [
            [contribution(e, X + [c], level) for c in values] for e, X in zip(eqs, polys)
        ]
        for choice in itertools.product(values, repeat=m):
            if level == 0 and not any(choice):
                continue
            if sum(part[c] for part, c in zip(parts, choice)) % p == 0:
                rec(level + 1, [X + [c] for X, c in zip(polys, choice)])
                if len(report.solutions) >= max_solutions:
                    return

    rec(0, [[] for _ in range(m)])
    return report


def poly_to_fp_list(f: MultiPoly, var: str, p: int) -> list[int]:
    """Coefficient list in ``var`` of a univariate polynomial with rational coefficients, mod p."""
    i = f.ring.index(var)
    if any(any(k for j, k in enumerate(e) if j != i) for e in f.terms):
        raise ValueError(f"{f} is not univariate in {var}")
    deg = int(f.degree_in(var)) if f.terms else 0
    out = [0] * (deg + 1)
    for e, c in f.terms.items():
        q = c.c[0] if hasattr(c, "c") else c.q
        out[e[i]] = q.numerator * pow(q.denominator, -1, p) % p
    return out


# -- the t-adic counterexample -------------------------------------------------

EXAMPLE_VARIABLES = ("x", "y", "z", "t")
# (x, y, z) -> (1, 1, 3) keeps the t-adic order 0 and the t-degree 2 of the
# norm polynomial, and 1 - t - t^2 stays irreducible over F_7.
SEARCH_PRIME = 7
SEARCH_SPECIALIZATION = {"x": 1, "y": 1, "z": 3}


def cubic_norm_polynomial(ring) -> MultiPoly:
    """x^3 + y^3 t + z^3 t^2 - 3xyzt, the norm of x + y A + z A^2 when A^3 = t."""
    x, y, z, t = (ring.gen(v) for v in EXAMPLE_VARIABLES)
    return x**3 + y**3 * t + z**3 * t**2 - 3 * x * y * z * t


def _fp_equation(polys: Sequence[MultiPoly], signs: Sequence[int]) -> list[list[int]]:
    out = []
    for f, sign in zip(polys, signs):
        out.append([sign * c % SEARCH_PRIME for c in poly_to_fp_list(f, "t", SEARCH_PRIME)])
    return out


@dataclass
class RefutationReport:
    """Specialization, valuation obstruction and a bounded search for <a, t^2> representing 1."""

    specialization: dict
    specialized: str
    profile: ValuationProfile
    obstruction: Impossible | Inconclusive
    hypothesis: str
    search: PolynomialSearchReport | None

    @property
    def refuted(self) -> bool:
        return isinstance(self.obstruction, Impossible) and not (
            self.search is not None and self.search.found
        )

    def to_dict(self):
        return {
            "kind": "refutation-report",
            "claim": "<a, t^2> represents 1",
            "specialization": self.specialization,
            "specialized_coefficient": self.specialized,
            "profile": self.profile.to_dict(),
            "obstruction": self.obstruction.to_dict(),
            "hypothesis": self.hypothesis,
            "search": None if self.search is None else self.search.to_dict(),
            "search_specialization": {
                k: v for k, v in SEARCH_SPECIALIZATION.items() if k != "x"
            },
            "search_status": "skipped" if self.search is None else self.search.to_dict()["result"],
            "refuted": self.refuted,
        }


SPECIALIZATION_HYPOTHESIS = (
    "a primitive solution (p, q, r) of a p^3 + t^2 q^3 = r^3 stays a nonzero "
    "solution after setting x = 0; assumed, not verified"
)


def example1_case3_refute(
    degree_bound: int = 4, base: Field | None = None, target_valuation: int | None = None
) -> RefutationReport:
    """Refute <a, t^2> representing 1 for a = x^3 + y^3 t + z^3 t^2 - 3xyzt.

    Setting x = 0 turns a into t y^3 + t^2 z^3, whose t-adic order is 1;
    the t^2 term has order 2 and the target 1 has order 0, three distinct
    classes mod 3.  ``target_valuation`` overrides the target's order (a
    negative control).  ``degree_bound`` 0 skips the polynomial search.
    """
    from .fields import RATIONALS
    from .polyring import polynomial_ring

    ring = polynomial_ring(base or RATIONALS, EXAMPLE_VARIABLES)
    a = cubic_norm_polynomial(ring)
    t = ring.gen("t")
    a0 = a.specialize({"x": 0})
    profile = profile_from_polynomials([a0, t**2], ring.one, "t", 3, "order")
    if target_valuation is not None:
        profile = ValuationProfile(profile.terms, target_valuation, 3, "order", profile.place)
    obstruction = valuation_obstruction(profile)
    search = None
    if degree_bound > 0:
        a1 = a0.specialize({k: v for k, v in SEARCH_SPECIALIZATION.items() if k != "x"})
        eq = _fp_equation([a1, t**2, ring.one], [1, 1, -1])
        search = polynomial_solution_search(eq, 3, SEARCH_PRIME, degree_bound, "order")
    return RefutationReport(
        specialization={"x": 0},
        specialized=str(a0),
        profile=profile,
        obstruction=obstruction,
        hypothesis=SPECIALIZATION_HYPOTHESIS,
        search=search,
    )
