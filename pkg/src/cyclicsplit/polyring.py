"""Sparse multivariate polynomials over an exact field, and their fraction fields.

A :class:`MultiPoly` maps exponent tuples to nonzero coefficients.  Printing
uses graded-lexicographic order (highest first); arithmetic does not depend
on any monomial order.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Mapping

from .expr import evaluate
from .fields import (
    Field,
    FieldElement,
    FieldMismatchError,
    NotAPower,
    PowerTest,
    Unknown,
    Witness,
)

MINUS_INFINITY = -math.inf


class PolyRing:
    def __init__(self, field: Field, variables: tuple[str, ...]):
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {variables}")
        self.field = field
        self.variables = tuple(variables)
        self.nvars = len(variables)
        self._index = {v: i for i, v in enumerate(variables)}

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.variables == other.variables
        )

    def __hash__(self):
        return hash((self.field, self.variables))

    def __repr__(self):
        return f"{self.field}[{','.join(self.variables)}]"

    def index(self, var: str) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise KeyError(f"{var!r} is not a variable of {self}") from None

    def __call__(self, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            if value.ring != self:
                raise FieldMismatchError(f"{value.ring} is not {self}")
            return value
        c = self.field(value)
        if c.is_zero():
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    @functools.cached_property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    @functools.cached_property
    def one(self) -> "MultiPoly":
        return self(1)

    def gen(self, var: str) -> "MultiPoly":
        exps = [0] * self.nvars
        exps[self.index(var)] = 1
        return MultiPoly(self, {tuple(exps): self.field.one})

    def gens(self) -> tuple["MultiPoly", ...]:
        return tuple(self.gen(v) for v in self.variables)

    def monomial(self, coeff, exps) -> "MultiPoly":
        c = self.field(coeff)
        return MultiPoly(self, {tuple(exps): c} if c else {})

    def parse(self, text: str) -> "MultiPoly":
        """Parse e.g. ``"x^3+y^3*t+z^3*t^2-3*x*y*z*t"``."""
        symbols = {name: self(value) for name, value in self.field.symbols().items()}
        symbols.update(zip(self.variables, self.gens()))
        return evaluate(text, symbols, self)


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- arithmetic --------------------------------------------------------

    def _operand(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise FieldMismatchError(f"variable lists differ: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.ring(other)
        return None

    def __add__(self, other):
        other = self._operand(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms[e] + c if e in terms else c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return MultiPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else self + (-other)

    def __rsub__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else other + (-self)

    def __mul__(self, other):
        other = self._operand(other)
        if other is None:
            return NotImplemented
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in terms:
                    c = terms[e] + c
                terms[e] = c
        return MultiPoly(self.ring, {e: c for e, c in terms.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        other = self._operand(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_constant():
            inv = other.constant_value().inverse()
            return MultiPoly(self.ring, {e: c * inv for e, c in self.terms.items()})
        q = self.exact_div(other)
        if q is None:
            raise ValueError(f"{other} does not divide {self}")
        return q

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = self.ring(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.ring.nvars in self.terms)

    def constant_value(self) -> FieldElement:
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def degree_in(self, var: str) -> int | float:
        """Highest exponent of ``var``; ``MINUS_INFINITY`` for the zero polynomial."""
        i = self.ring.index(var)
        if not self.terms:
            return MINUS_INFINITY
        return max(e[i] for e in self.terms)

    def order_in(self, var: str) -> int | float:
        """Lowest exponent of ``var`` (the ``var``-adic valuation); +inf for zero."""
        i = self.ring.index(var)
        if not self.terms:
            return math.inf
        return min(e[i] for e in self.terms)

    def total_degree(self) -> int | float:
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def specialize(self, assignments: Mapping[str, object]) -> "MultiPoly":
        """Substitute field elements or polynomials (same ring) for variables."""
        subs = {}
        for var, value in assignments.items():
            i = self.ring.index(var)
            subs[i] = value if isinstance(value, MultiPoly) else self.ring(value)
        powers: dict = {}
        result = self.ring.zero
        for e, c in self.terms.items():
            kept = list(e)
            term = self.ring.one
            for i, value in subs.items():
                if e[i]:
                    key = (i, e[i])
                    if key not in powers:
                        powers[key] = value ** e[i]
                    term = term * powers[key]
                kept[i] = 0
            result = result + term * MultiPoly(self.ring, {tuple(kept): c})
        return result

    def divide_out_variable(self, var: str) -> tuple[int, "MultiPoly"]:
        """Return ``(m, g)`` with ``self = var^m * g`` and ``var`` not dividing ``g``."""
        if not self.terms:
            raise ValueError("cannot divide the variable out of the zero polynomial")
        i = self.ring.index(var)
        m = min(e[i] for e in self.terms)
        shifted = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i] -= m
            shifted[tuple(e2)] = c
        return m, MultiPoly(self.ring, shifted)

    def monomial_content(self) -> tuple[int, ...]:
        """Exponent vector of the largest monomial dividing every term."""
        if not self.terms:
            return (0,) * self.ring.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def shift(self, exps, sign: int = -1) -> "MultiPoly":
        return MultiPoly(
            self.ring,
            {tuple(a + sign * b for a, b in zip(e, exps)): c for e, c in self.terms.items()},
        )

    def leading(self) -> tuple[tuple[int, ...], FieldElement]:
        """Leading term in lexicographic order."""
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: "MultiPoly") -> "MultiPoly | None":
        """Quotient if ``other`` divides ``self`` exactly, else None."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ge, gc = other.leading()
        ginv = gc.inverse()
        q_terms: dict = {}
        r = self
        while r.terms:
            re_, rc = r.leading()
            diff = tuple(a - b for a, b in zip(re_, ge))
            if min(diff) < 0:
                return None
            c = rc * ginv
            q_terms[diff] = c
            r = r - MultiPoly(self.ring, {diff: c}) * other
        return MultiPoly(self.ring, q_terms)

    def map_coefficients(self, ring: PolyRing, fn) -> "MultiPoly":
        terms = {}
        for e, c in self.terms.items():
            c2 = fn(c)
            if not c2.is_zero():
                terms[e] = c2
        return MultiPoly(ring, terms)

    # -- printing ----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.ring.variables, e) if k
            )
            text = str(c)
            simple = all(ch.isdigit() or ch in "-/" for ch in text)
            negative = simple and text.startswith("-")
            mag = text[1:] if negative else text
            if not simple and (mono or len(self.terms) > 1):
                mag = f"({text})"
            if mono:
                body = mono if mag == "1" else f"{mag}*{mono}"
            else:
                body = mag
            pieces.append(("-" if negative else "+", body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


# -- fraction fields --------------------------------------------------------


class FracElement(FieldElement):
    """A quotient num/den of polynomials.

    Normalization cancels exact divisions, common monomial factors and
    makes the denominator's leading coefficient 1; it does not compute a
    full multivariate gcd, so equality is decided by cross-multiplication.
    Elements with denominator 1 (all that the norm computations produce)
    are in fully canonical form.
    """

    __slots__ = ("num", "den")

    def __init__(self, field: "FractionField", num: MultiPoly, den: MultiPoly):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def make(cls, field, num: MultiPoly, den: MultiPoly) -> "FracElement":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        ring = field.ring
        if num.is_zero():
            return cls(field, num, ring.one)
        if den.is_constant():
            inv = den.constant_value().inverse()
            return cls(field, num * inv, ring.one)
        q = num.exact_div(den)
        if q is not None:
            return cls(field, q, ring.one)
        common = tuple(min(a, b) for a, b in zip(num.monomial_content(), den.monomial_content()))
        if any(common):
            num, den = num.shift(common), den.shift(common)
        lead = den.leading()[1].inverse()
        return cls(field, num * lead, den * lead)

    def _add(self, other):
        if self.den == other.den:
            return FracElement.make(self.field, self.num + other.num, self.den)
        return FracElement.make(
            self.field, self.num * other.den + other.num * self.den, self.den * other.den
        )

    def _mul(self, other):
        return FracElement.make(self.field, self.num * other.num, self.den * other.den)

    def __neg__(self):
        return FracElement(self.field, -self.num, self.den)

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero in " + self.field.descriptor)
        return FracElement.make(self.field, self.den, self.num)

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == self.field.ring.one

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or (
            isinstance(other, FieldElement) and not isinstance(other, FracElement)
        ):
            other = self.field(other)
        if not isinstance(other, FracElement):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        if self.is_polynomial():
            return hash(self.num)
        return hash(("frac", self.num.total_degree() - self.den.total_degree()))

    def sort_key(self):
        return (str(self.num), str(self.den))

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self):
        return str(self)


class FractionField(Field):
    def __init__(self, base: Field, variables: tuple[str, ...]):
        self.base = base
        self.ring = PolyRing(base, variables)
        self.characteristic = base.characteristic
        self.descriptor = f"Frac({base.descriptor})[{','.join(variables)}]"

    @property
    def variables(self):
        return self.ring.variables

    def __call__(self, value) -> FracElement:
        if isinstance(value, FracElement):
            if value.field != self:
                raise FieldMismatchError(f"{value.field} is not {self}")
            return value
        if isinstance(value, MultiPoly):
            return FracElement(self, self.ring(value), self.ring.one)
        return FracElement(self, self.ring(value), self.ring.one)

    def gen(self, var: str) -> FracElement:
        return self(self.ring.gen(var))

    def symbols(self):
        out = {name: self(value) for name, value in self.base.symbols().items()}
        out.update({v: self.gen(v) for v in self.variables})
        return out

    def primitive_root_of_unity(self, d: int):
        root = self.base.primitive_root_of_unity(d)
        return None if root is None else self(root)

    def dth_power_test(self, c: FracElement, d: int, bound: int | None = None) -> PowerTest:
        """Constants defer to the base field; otherwise a degree/order argument.

        deg_v(num) - deg_v(den) and ord_v(num) - ord_v(den) are independent of
        the representative and must be multiples of d for a d-th power.  A
        polynomial that passes both checks is reported Unknown.
        """
        if c.is_zero():
            raise ValueError("zero input to the d-th power test")
        if c.is_polynomial() and c.num.is_constant():
            res = self.base.dth_power_test(c.num.constant_value(), d, bound)
            return Witness(self(res.root)) if isinstance(res, Witness) else res
        for v in self.variables:
            if (c.num.degree_in(v) - c.den.degree_in(v)) % d:
                return NotAPower()
            if (c.num.order_in(v) - c.den.order_in(v)) % d:
                return NotAPower()
        return Unknown("polynomial d-th roots are not extracted")


@functools.lru_cache(maxsize=None)
def fraction_field(base: Field, variables: tuple[str, ...]) -> FractionField:
    return FractionField(base, variables)


def polynomial_ring(base: Field, variables) -> PolyRing:
    return PolyRing(base, tuple(variables))
