"""First Tits construction J(A, c) on A + A + A for a cubic cyclic algebra A.

    N(a1, a2, a3)  = n(a1) + c n(a2) + c^-1 n(a3) - tr(a1 a2 a3)
    (a1, a2, a3)^# = (a1^# - a2 a3, c^-1 a3^# - a1 a2, c a2^# - a3 a1)
    T(v, w)        = tr(a1 b1) + tr(a2 b3) + tr(a3 b2)
    v x w          = (v + w)^# - v^# - w^#
    U_v w          = T(v, w) v - v^# x w

On A, x^# = x^2 - tr(x) x + s(x) with t^3 - tr(x) t^2 + s(x) t - n(x) the
reduced characteristic polynomial, so x x^# = n(x).  The sign in the third
adjoint component and the reading of U through T are the ones under which
(v^#)^# = N(v) v and U_1 = id hold; the tests check both.

If c is a reduced norm of A, say n(w) = c, then (-w, 1, 0) has norm
-c + c - 0 = 0 and J is not a division algebra.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclic import AlgebraElement, CyclicAlgebra, certificate_from_norm_witness
from .fields import Field, FieldElement, UnsupportedFieldError, field_from_descriptor
from .forms import Representation, SearchBudget, TensorNormForm, represent_search
from .kummer import KummerElement, KummerExtension

# -- A's degree-3 invariants ----------------------------------------------------


@dataclass(frozen=True)
class AdjointData:
    """tr(x), s(x), n(x) and x^# for x in a degree-3 algebra."""

    trace: FieldElement
    s: FieldElement
    norm: FieldElement
    adjoint: AlgebraElement


def adjoint_data(x: AlgebraElement) -> AdjointData:
    c0, c1, c2, _ = x.reduced_char_poly()
    tr, s = -c2, c1
    sharp = x * x - x.scale(tr) + x.alg.one.scale(s)
    return AdjointData(tr, s, -c0, sharp)


def algebra_adjoint(x: AlgebraElement) -> AlgebraElement:
    return adjoint_data(x).adjoint


# -- the Tits construction ---------------------------------------------------------


class TitsAlgebra:
    def __init__(self, A: CyclicAlgebra, c):
        if A.d != 3:
            raise ValueError("the first Tits construction needs a degree-3 algebra")
        c = A.field(c)
        if c.is_zero():
            raise ValueError("c must be nonzero")
        self.A = A
        self.field = A.field
        self.c = c
        self.c_inv = c.inverse()

    def __eq__(self, other):
        return isinstance(other, TitsAlgebra) and self.A == other.A and self.c == other.c

    def __hash__(self):
        return hash((self.A, self.c))

    def __repr__(self):
        return f"TitsAlgebra({self.A!r}, c={self.c})"

    def __call__(self, parts) -> "AlbertElement":
        if isinstance(parts, AlbertElement):
            return parts
        if len(parts) != 3:
            raise ValueError("an Albert element has three components")
        return AlbertElement(self, tuple(self.A(p) for p in parts))

    @property
    def zero(self):
        return AlbertElement(self, (self.A.zero,) * 3)

    @property
    def one(self):
        return AlbertElement(self, (self.A.one, self.A.zero, self.A.zero))

    def random_element(self, rng) -> "AlbertElement":
        return AlbertElement(self, tuple(self.A.random_element(rng) for _ in range(3)))

    # -- the cubic norm structure --------------------------------------------------

    def norm(self, v: "AlbertElement") -> FieldElement:
        a1, a2, a3 = v.parts
        return (
            a1.reduced_norm()
            + self.c * a2.reduced_norm()
            + self.c_inv * a3.reduced_norm()
            - (a1 * a2 * a3).reduced_trace()
        )

    def adjoint(self, v: "AlbertElement") -> "AlbertElement":
        a1, a2, a3 = v.parts
        return AlbertElement(
            self,
            (
                algebra_adjoint(a1) - a2 * a3,
                algebra_adjoint(a3).scale(self.c_inv) - a1 * a2,
                algebra_adjoint(a2).scale(self.c) - a3 * a1,
            ),
        )

    def trace_form(self, v: "AlbertElement", w: "AlbertElement") -> FieldElement:
        a1, a2, a3 = v.parts
        b1, b2, b3 = w.parts
        return (a1 * b1).reduced_trace() + (a2 * b3).reduced_trace() + (a3 * b2).reduced_trace()

    def cross(self, v: "AlbertElement", w: "AlbertElement") -> "AlbertElement":
        return self.adjoint(v + w) - self.adjoint(v) - self.adjoint(w)

    def u_operator(self, v: "AlbertElement", w: "AlbertElement") -> "AlbertElement":
        return v.scale(self.trace_form(v, w)) - self.cross(self.adjoint(v), w)

    def over_dual_numbers(self) -> tuple["TitsAlgebra", "callable"]:
        """The same construction over k[e]/(e^2), with the coefficient lift."""
        D = DualNumbers(self.field)
        ext = self.A.ext
        ext_d = KummerExtension(D, 3, D(ext.b), D(ext.omega))
        A_d = CyclicAlgebra(ext_d, D(self.A.a))
        J_d = TitsAlgebra(A_d, D(self.c))

        def lift(v: AlbertElement, eps: AlbertElement | None = None) -> AlbertElement:
            parts = []
            for i, x in enumerate(v.parts):
                coords = []
                for j, u in enumerate(x.coords):
                    inf = eps.parts[i].coords[j].coords if eps is not None else None
                    coords.append(
                        ext_d(
                            tuple(
                                DualElement(D, a, inf[k] if inf else self.field.zero)
                                for k, a in enumerate(u.coords)
                            )
                        )
                    )
                parts.append(A_d(tuple(coords)))
            return J_d(tuple(parts))

        return J_d, lift


class AlbertElement:
    __slots__ = ("J", "parts")

    def __init__(self, J: TitsAlgebra, parts: tuple):
        self.J = J
        self.parts = parts

    def __add__(self, other):
        return AlbertElement(self.J, tuple(x + y for x, y in zip(self.parts, other.parts)))

    def __sub__(self, other):
        return AlbertElement(self.J, tuple(x - y for x, y in zip(self.parts, other.parts)))

    def __neg__(self):
        return AlbertElement(self.J, tuple(-x for x in self.parts))

    def scale(self, lam) -> "AlbertElement":
        return AlbertElement(self.J, tuple(x.scale(lam) for x in self.parts))

    def __eq__(self, other):
        if not isinstance(other, AlbertElement):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def is_zero(self):
        return all(x.is_zero() for x in self.parts)

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.parts) + ")"

    def __repr__(self):
        return f"AlbertElement{self}"

    def to_json(self):
        return [x.to_json() for x in self.parts]


def cubic_norm(J: TitsAlgebra, v: AlbertElement) -> FieldElement:
    return J.norm(v)


def adjoint(J: TitsAlgebra, v: AlbertElement) -> AlbertElement:
    return J.adjoint(v)


def cross(J: TitsAlgebra, v: AlbertElement, w: AlbertElement) -> AlbertElement:
    return J.cross(v, w)


def trace_form(J: TitsAlgebra, v: AlbertElement, w: AlbertElement) -> FieldElement:
    return J.trace_form(v, w)


def u_operator(J: TitsAlgebra, v: AlbertElement, w: AlbertElement) -> AlbertElement:
    return J.u_operator(v, w)


def first_order_coefficient(J: TitsAlgebra, v: AlbertElement, w: AlbertElement) -> FieldElement:
    """The e-coefficient of N(v + e w) computed over the dual numbers k[e]/(e^2)."""
    J_d, lift = J.over_dual_numbers()
    value = J_d.norm(lift(v, w))
    return value.eps


# -- dual numbers -------------------------------------------------------------------


class DualElement(FieldElement):
    """a + b e with e^2 = 0.  Units are the elements with a != 0."""

    __slots__ = ("re", "eps")

    def __init__(self, field: "DualNumbers", re: FieldElement, eps: FieldElement):
        self.field = field
        self.re = re
        self.eps = eps

    @property
    def coords(self):
        return (self.re, self.eps)

    def _add(self, other):
        return DualElement(self.field, self.re + other.re, self.eps + other.eps)

    def _mul(self, other):
        return DualElement(self.field, self.re * other.re, self.re * other.eps + self.eps * other.re)

    def __neg__(self):
        return DualElement(self.field, -self.re, -self.eps)

    def inverse(self):
        if self.re.is_zero():
            raise ZeroDivisionError(f"{self} is not a unit")
        inv = self.re.inverse()
        return DualElement(self.field, inv, -self.eps * inv * inv)

    def is_zero(self):
        return self.re.is_zero() and self.eps.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field(other)
        if not isinstance(other, DualElement):
            return NotImplemented
        return self.re == other.re and self.eps == other.eps

    def __hash__(self):
        return hash((self.re, self.eps))

    def sort_key(self):
        return (self.re.sort_key(), self.eps.sort_key())

    def __str__(self):
        return f"{self.re} + ({self.eps})*e"

    def to_json(self):
        return [self.re.to_json(), self.eps.to_json()]


class DualNumbers(Field):
    """k[e]/(e^2); a ring, used only to differentiate polynomial maps exactly."""

    def __init__(self, base: Field):
        self.base = base
        self.characteristic = base.characteristic
        self.descriptor = f"Dual({base.descriptor})"

    def __call__(self, value) -> DualElement:
        if isinstance(value, DualElement):
            return value
        return DualElement(self, self.base(value), self.base.zero)

    def primitive_root_of_unity(self, d: int):
        root = self.base.primitive_root_of_unity(d)
        return None if root is None else self(root)


# -- non-division pipeline ------------------------------------------------------------

CONDITIONS = (
    (1, "1", "<c, a> (x) n_l represents 1"),
    (1, "a^2", "<c, a> (x) n_l represents a^2"),
    (2, "1", "<c, a^2> (x) n_l represents 1"),
    (2, "a", "<c, a^2> (x) n_l represents a"),
)

DIVISION_HYPOTHESIS = "A is assumed to be a division algebra; this is not checked"


@dataclass
class NotDivision:
    """A nonzero element of J with cubic norm 0, and how it was found."""

    J: TitsAlgebra
    condition: int
    representation: Representation
    w: AlgebraElement
    zero_vector: AlbertElement
    hypothesis_violated: bool
    checks: dict = field(default_factory=dict)
    searches: list = field(default_factory=list)

    status = "NotDivision"

    def to_dict(self):
        J = self.J
        ext = J.A.ext
        x, y = self.representation.args
        return {
            "certificate_version": 1,
            "kind": "tits-report",
            "status": self.status,
            "field": J.field.descriptor,
            "d": 3,
            "b": ext.b.to_json(),
            "a": J.A.a.to_json(),
            "c": J.c.to_json(),
            "omega": ext.omega.to_json(),
            "condition": self.condition,
            "condition_text": CONDITIONS[self.condition - 1][2],
            "representation": [x.to_json(), y.to_json()],
            "w": self.w.to_json(),
            "zero_vector": self.zero_vector.to_json(),
            "hypothesis": DIVISION_HYPOTHESIS,
            "hypothesis_violated": self.hypothesis_violated,
            "checks": self.checks,
            "searches": self.searches,
        }


@dataclass
class TitsInconclusive:
    searches: list

    status = "Inconclusive"

    def to_dict(self):
        return {
            "kind": "tits-report",
            "status": self.status,
            "hypothesis": DIVISION_HYPOTHESIS,
            "searches": self.searches,
        }


def _l_norm_formula(A: CyclicAlgebra, x0: KummerElement, x1: KummerElement, power: int):
    """n(x0 + x1 z^power) = n_l(x0) + a^power n_l(x1) in degree 3."""
    return x0.norm() + A.a**power * x1.norm()


def _witness_from_hit(J: TitsAlgebra, condition: int, x: KummerElement, y: KummerElement):
    """Element w of A with n(w) = c from c n(x) + a^e n(y) = target, x != 0."""
    A = J.A
    x_inv = x.inverse()
    x0, x1 = x_inv, -y * x_inv
    if condition == 1:
        w = A((x0, x1, A.ext.zero))
        formula = _l_norm_formula(A, x0, x1, 1)
    elif condition == 2:
        w = A((-y * x_inv, x_inv, A.ext.zero)) * A.z
        formula = _l_norm_formula(A, -y * x_inv, x_inv, 1) * A.a
    elif condition == 3:
        w = A((x0, A.ext.zero, x1))
        formula = _l_norm_formula(A, x0, x1, 2)
    else:
        w = A((x0, x1, A.ext.zero)) * A.z
        formula = _l_norm_formula(A, x0, x1, 1) * A.a
    return w, formula


def _witness_when_split(J: TitsAlgebra, condition: int, y: KummerElement):
    """x = 0: a (or a^2) is a norm from l, so A is split; c is the norm of c e + (1 - e)."""
    A = J.A
    a = A.a
    for u in (y, y.inverse(), y * a, (y * a).inverse()):
        if u.norm() == a:
            cert = certificate_from_norm_witness(A, u, {"tits-condition": condition})
            e = cert.e
            w = e.scale(J.c) + (A.one - e)
            return w, J.c
    raise AssertionError("x = 0 hit without a norm witness for a")


def non_division_pipeline(
    J: TitsAlgebra, budget: SearchBudget | None = None, threads: int = 1
) -> NotDivision | TitsInconclusive:
    """Search the four tensor-norm conditions; on a hit build (-w, 1, 0) with N = 0.

    Slot x is first searched over nonzero values so the hit yields w
    directly; only if that fails are hits with x = 0 accepted (then A was
    split after all, against the hypothesis).
    """
    A = J.A
    ext = A.ext
    a = A.a
    targets = {"1": J.field.one, "a": a, "a^2": a * a}
    forms = {1: TensorNormForm(ext, J.c, a), 2: TensorNormForm(ext, J.c, a * a)}
    searches = []
    plan = [(cond, slots) for slots in ((0,), ()) for cond in range(1, 5)]

    def run(item):
        cond, slots = item
        power, target, _ = CONDITIONS[cond - 1]
        return represent_search(forms[power], targets[target], budget, nonzero_slots=slots)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, 4)) as pool:
            first = list(pool.map(run, plan[:4]))
    else:
        first = []
    for index, item in enumerate(plan):
        cond, slots = item
        found = first[index] if index < len(first) else run(item)
        searches.append({"condition": cond, "x_nonzero": bool(slots), **found.to_dict()})
        if not isinstance(found, Representation):
            continue
        x, y = found.args
        if x.is_zero():
            w, formula = _witness_when_split(J, cond, y)
            violated = True
        else:
            w, formula = _witness_from_hit(J, cond, x, y)
            violated = False
        reduced = w.reduced_norm()
        zero_vector = J((-w, A.one, A.zero))
        checks = {
            "reduced_norm_w_equals_c": reduced == J.c,
            "norm_formula_equals_c": formula == J.c,
            "cubic_norm_zero": J.norm(zero_vector).is_zero(),
            "zero_vector_nonzero": not zero_vector.is_zero(),
        }
        if not all(checks.values()):
            raise AssertionError(f"non-division witness failed its checks: {checks}")
        return NotDivision(J, cond, found, w, zero_vector, violated, checks, searches)
    return TitsInconclusive(searches)


def verify_tits_report(data: dict) -> bool:
    """Rebuild J and the zero vector from a report and recheck N = 0."""
    try:
        if data.get("kind") != "tits-report" or data.get("status") != "NotDivision":
            return False
        k = field_from_descriptor(data["field"])
        ext = KummerExtension(k, 3, k.from_json(data["b"]), k.from_json(data["omega"]))
        A = CyclicAlgebra(ext, k.from_json(data["a"]))
        J = TitsAlgebra(A, k.from_json(data["c"]))

        def alg(coords):
            return A(tuple(ext(tuple(k.from_json(c) for c in l_coords)) for l_coords in coords))

        w = alg(data["w"])
        v = J(tuple(alg(p) for p in data["zero_vector"]))
        return (
            w.reduced_norm() == J.c
            and v == J((-w, A.one, A.zero))
            and not v.is_zero()
            and J.norm(v).is_zero()
        )
    except (ArithmeticError, ValueError, KeyError, TypeError, UnsupportedFieldError):
        return False

