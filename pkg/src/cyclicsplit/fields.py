"""Exact base fields: prime fields, the rationals and prime cyclotomic fields.

Every element has one canonical form, so ``==`` is structural.  A total
order on elements (``sort_key``) makes every "smallest witness" choice in
the package reproducible:

* ``Fp:p``   residues ``0 < 1 < ... < p-1``;
* ``Q``      by absolute value, a positive number before its negative;
* ``QW:p``   lexicographic on power-basis coordinates, each compared as in ``Q``.

Fraction fields of polynomial rings live in :mod:`cyclicsplit.polyring`
and are reachable through :func:`field_from_descriptor`.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import gmpy2


class FieldMismatchError(TypeError):
    """Operands belong to different fields."""


class UnsupportedFieldError(ValueError):
    pass


# -- outcomes of the d-th power test ----------------------------------------


@dataclass(frozen=True)
class Witness:
    root: "FieldElement"


@dataclass(frozen=True)
class NotAPower:
    pass


@dataclass(frozen=True)
class Unknown:
    reason: str


PowerTest = Witness | NotAPower | Unknown


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


def _odd_prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


# -- elements ---------------------------------------------------------------


class FieldElement:
    __slots__ = ("field",)

    def _operand(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldMismatchError(f"cannot combine {self.field} with {other.field}")
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else self._add(-other)

    def __rsub__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else other._add(-self)

    def __mul__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else other._mul(self.inverse())

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self
        if n < 0:
            base, n = self.inverse(), -n
        result = self.field.one
        while n:
            if n & 1:
                result = result._mul(base)
            n >>= 1
            if n:
                base = base._mul(base)
        return result

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"{self.field.descriptor}({self})"

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()


class FpElement(FieldElement):
    __slots__ = ("v",)

    def __init__(self, field: "PrimeField", v: int):
        self.field = field
        self.v = v

    def _add(self, other):
        return FpElement(self.field, (self.v + other.v) % self.field.p)

    def _mul(self, other):
        return FpElement(self.field, (self.v * other.v) % self.field.p)

    # same-field shortcuts around the generic coercion in FieldElement
    def __add__(self, other):
        if type(other) is FpElement and other.field is self.field:
            return self.field.element((self.v + other.v) % self.field.p)
        return FieldElement.__add__(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is FpElement and other.field is self.field:
            return self.field.element((self.v - other.v) % self.field.p)
        return FieldElement.__sub__(self, other)

    def __mul__(self, other):
        if type(other) is FpElement and other.field is self.field:
            return self.field.element((self.v * other.v) % self.field.p)
        return FieldElement.__mul__(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(self.field, (-self.v) % self.field.p)

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero in " + self.field.descriptor)
        return FpElement(self.field, pow(self.v, -1, self.field.p))

    def is_zero(self):
        return self.v == 0

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.v == other.v and self.field.p == other.field.p
        if isinstance(other, int):
            return self.v == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.v))

    def sort_key(self):
        return (self.v,)

    def __str__(self):
        return str(self.v)

    def to_json(self):
        return self.v


def _rational_key(q: Fraction):
    return (abs(q), q < 0)


def _rational_height(q: Fraction) -> int:
    return max(abs(q.numerator), q.denominator) if q else 0


def _rational_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class QElement(FieldElement):
    __slots__ = ("q",)

    def __init__(self, field: "Rationals", q: Fraction):
        self.field = field
        self.q = q

    def _add(self, other):
        return QElement(self.field, self.q + other.q)

    def _mul(self, other):
        return QElement(self.field, self.q * other.q)

    def __neg__(self):
        return QElement(self.field, -self.q)

    def inverse(self):
        if self.q == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return QElement(self.field, 1 / self.q)

    def is_zero(self):
        return self.q == 0

    def __eq__(self, other):
        if isinstance(other, QElement):
            return self.q == other.q
        if isinstance(other, (int, Fraction)):
            return self.q == other
        return NotImplemented

    def __hash__(self):
        return hash(("Q", self.q))

    def sort_key(self):
        return _rational_key(self.q)

    def height(self):
        return _rational_height(self.q)

    def __str__(self):
        return _rational_text(self.q)

    def to_json(self):
        return _rational_text(self.q)


class CycElement(FieldElement):
    """Element of Q(w), w a primitive p-th root of unity, in the basis 1, w, ..., w^(p-2)."""

    __slots__ = ("c",)

    def __init__(self, field: "CyclotomicField", coords: tuple[Fraction, ...]):
        self.field = field
        self.c = coords

    def _add(self, other):
        return CycElement(self.field, tuple(x + y for x, y in zip(self.c, other.c)))

    def _mul(self, other):
        p = self.field.p
        acc = [Fraction(0)] * p
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        acc[(i + j) % p] += x * y
        return self.field._reduce(acc)

    def __neg__(self):
        return CycElement(self.field, tuple(-x for x in self.c))

    def conjugate(self, j: int) -> "CycElement":
        """Image under the automorphism w -> w^j (j prime to p)."""
        p = self.field.p
        acc = [Fraction(0)] * p
        for i, x in enumerate(self.c):
            acc[(i * j) % p] += x
        return self.field._reduce(acc)

    def norm(self) -> Fraction:
        """Absolute norm to Q: the product of all p-1 conjugates."""
        prod = self
        for j in range(2, self.field.p):
            prod = prod._mul(self.conjugate(j))
        assert all(x == 0 for x in prod.c[1:])
        return prod.c[0]

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in " + self.field.descriptor)
        others = self.field.one
        for j in range(2, self.field.p):
            others = others._mul(self.conjugate(j))
        n = self._mul(others).c[0]
        return CycElement(self.field, tuple(x / n for x in others.c))

    def is_zero(self):
        return not any(self.c)

    def is_rational(self):
        return not any(self.c[1:])

    def __eq__(self, other):
        if isinstance(other, CycElement):
            return self.c == other.c and self.field.p == other.field.p
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.c))

    def sort_key(self):
        return tuple(_rational_key(x) for x in self.c)

    def height(self):
        return max(_rational_height(x) for x in self.c)

    def __str__(self):
        parts = []
        for i, x in enumerate(self.c):
            if x == 0:
                continue
            mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            mag = abs(x)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{_rational_text(mag)}*{mono}"
            else:
                body = _rational_text(mag)
            parts.append(("-" if x < 0 else "+", body))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self):
        return [_rational_text(x) for x in self.c]


# -- fields -----------------------------------------------------------------


class Field:
    """Common interface.  Concrete fields are cached singletons per descriptor."""

    descriptor: str
    characteristic: int
    is_finite = False

    def __eq__(self, other):
        return isinstance(other, Field) and other.descriptor == self.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __str__(self):
        return self.descriptor

    def __repr__(self):
        return f"<field {self.descriptor}>"

    @functools.cached_property
    def zero(self):
        return self(0)

    @functools.cached_property
    def one(self):
        return self(1)

    def parse(self, text: str) -> FieldElement:
        from .expr import evaluate

        return evaluate(text, self.symbols(), self)

    def symbols(self) -> dict:
        return {}

    def from_json(self, data) -> FieldElement:
        if isinstance(data, str):
            return self.parse(data)
        return self(data)

    def check_degree(self, d: int) -> None:
        """Reject d when char k divides d."""
        if self.characteristic and d % self.characteristic == 0:
            raise UnsupportedFieldError(f"char k divides d: {self.characteristic} | {d}")


class PrimeField(Field):
    is_finite = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise UnsupportedFieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.descriptor = f"Fp:{p}"
        # small fields keep one interned element per residue
        self._interned = [FpElement(self, v) for v in range(p)] if p < 1 << 16 else None

    def element(self, v: int) -> FpElement:
        """Element for a residue already reduced mod p."""
        if self._interned is not None:
            return self._interned[v]
        return FpElement(self, v)

    def __call__(self, value) -> FpElement:
        if isinstance(value, FpElement):
            if value.field.p != self.p:
                raise FieldMismatchError(f"{value.field} is not {self}")
            return value
        if isinstance(value, Fraction):
            return FpElement(self, value.numerator * pow(value.denominator, -1, self.p) % self.p)
        if isinstance(value, int):
            return FpElement(self, value % self.p)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    @property
    def order(self) -> int:
        return self.p

    def elements(self) -> list[FpElement]:
        return [FpElement(self, v) for v in range(self.p)]

    def random_element(self, rng, nonzero=False) -> FpElement:
        return FpElement(self, rng.randrange(1 if nonzero else 0, self.p))

    def primitive_root_of_unity(self, d: int) -> FpElement | None:
        """Smallest residue of multiplicative order exactly d, or None."""
        self.check_degree(d)
        if (self.p - 1) % d:
            return None
        e = (self.p - 1) // d
        primes = _odd_prime_factors(d) if d > 1 else []
        for g in range(2, self.p):
            zeta = pow(g, e, self.p)
            if all(pow(zeta, d // q, self.p) != 1 for q in primes):
                break
        else:
            return None if d > 1 else self.one
        roots = [pow(zeta, j, self.p) for j in range(1, d) if math.gcd(j, d) == 1]
        return FpElement(self, min(roots))

    def is_dth_power(self, c: FpElement, d: int) -> bool:
        """Order criterion: c is a d-th power iff c^((p-1)/gcd(d,p-1)) = 1."""
        if c.v == 0:
            raise ValueError("zero input to the d-th power test")
        return pow(c.v, (self.p - 1) // math.gcd(d, self.p - 1), self.p) == 1

    def dth_power_test(self, c: FpElement, d: int, bound: int | None = None) -> PowerTest:
        """Order criterion for the decision, then the smallest root.

        Roots come from an exhaustive table for p below 2**18 and from
        sympy's ``nthroot_mod`` above that.
        """
        if not self.is_dth_power(c, d):
            return NotAPower()
        if self.p < 1 << 18:
            return Witness(FpElement(self, _root_table(self.p, d)[c.v]))
        from sympy.ntheory.residue_ntheory import nthroot_mod

        return Witness(FpElement(self, min(nthroot_mod(c.v, d, self.p, all_roots=True))))


@functools.lru_cache(maxsize=64)
def _root_table(p: int, d: int) -> dict[int, int]:
    table: dict[int, int] = {}
    for x in range(p):
        table.setdefault(pow(x, d, p), x)
    return table


@functools.lru_cache(maxsize=1024)
def rationals_of_height(h: int) -> tuple[Fraction, ...]:
    """All rationals of height exactly h, in the total order of ``Q``."""
    if h == 0:
        return (Fraction(0),)
    out = set()
    for m in range(1, h + 1):
        for n in (h,) if m < h else range(1, h + 1):
            if math.gcd(n, m) == 1 and max(n, m) == h:
                out.add(Fraction(n, m))
                out.add(Fraction(-n, m))
    return tuple(sorted(out, key=_rational_key))


def _integer_root(n: int, d: int) -> int | None:
    if n < 0:
        if d % 2 == 0:
            return None
        r = _integer_root(-n, d)
        return None if r is None else -r
    r, exact = gmpy2.iroot(n, d)
    return int(r) if exact else None


def rational_root(q: Fraction, d: int) -> Fraction | None:
    num = _integer_root(q.numerator, d)
    den = _integer_root(q.denominator, d)
    if num is None or den is None:
        return None
    return Fraction(num, den)


class Rationals(Field):
    characteristic = 0
    descriptor = "Q"

    def __call__(self, value) -> QElement:
        if isinstance(value, QElement):
            return value
        if isinstance(value, (int, Fraction)):
            return QElement(self, Fraction(value))
        if isinstance(value, str):
            return QElement(self, Fraction(value))
        raise TypeError(f"cannot coerce {value!r} into Q")

    def from_json(self, data):
        return self(Fraction(data))

    def elements_of_height(self, h: int) -> list[QElement]:
        return [QElement(self, q) for q in rationals_of_height(h)]

    def random_element(self, rng, nonzero=False, height=5) -> QElement:
        while True:
            q = Fraction(rng.randint(-height, height), rng.randint(1, height))
            if q or not nonzero:
                return QElement(self, q)

    def primitive_root_of_unity(self, d: int) -> QElement | None:
        self.check_degree(d)
        return self.one if d == 1 else None

    def dth_power_test(self, c: QElement, d: int, bound: int | None = None) -> PowerTest:
        """Exact: integer root extraction on numerator and denominator."""
        if c.q == 0:
            raise ValueError("zero input to the d-th power test")
        r = rational_root(c.q, d)
        return NotAPower() if r is None else Witness(QElement(self, r))


class CyclotomicField(Field):
    """Q(w) with w a primitive p-th root of unity, p an odd prime.

    Arithmetic runs in Q[x]/(x^p - 1) and folds the top coordinate back
    through 1 + w + ... + w^(p-1) = 0.
    """

    characteristic = 0

    def __init__(self, p: int):
        if p < 3 or not is_prime(p):
            raise UnsupportedFieldError(
                f"QW:{p} unsupported: cyclotomic fields are implemented for odd prime d only"
            )
        self.p = p
        self.descriptor = f"QW:{p}"

    def _reduce(self, acc: list[Fraction]) -> CycElement:
        top = acc[self.p - 1]
        if top:
            return CycElement(self, tuple(x - top for x in acc[: self.p - 1]))
        return CycElement(self, tuple(acc[: self.p - 1]))

    def __call__(self, value) -> CycElement:
        if isinstance(value, CycElement):
            if value.field.p != self.p:
                raise FieldMismatchError(f"{value.field} is not {self}")
            return value
        if isinstance(value, QElement):
            value = value.q
        if isinstance(value, (int, Fraction)):
            return CycElement(self, (Fraction(value),) + (Fraction(0),) * (self.p - 2))
        if isinstance(value, (tuple, list)):
            coords = [Fraction(x) for x in value]
            if len(coords) > self.p:
                raise ValueError("too many coordinates")
            return self._reduce(coords + [Fraction(0)] * (self.p - len(coords)))
        raise TypeError(f"cannot coerce {value!r} into {self}")

    @functools.cached_property
    def generator(self) -> CycElement:
        return self((0, 1))

    def symbols(self):
        return {"w": self.generator}

    def from_json(self, data):
        if isinstance(data, list):
            return self(tuple(Fraction(x) for x in data))
        return super().from_json(data)

    def elements_of_height(self, h: int) -> Iterator[CycElement]:
        """Elements whose largest coordinate height is exactly h, lexicographically."""
        pool = [q for k in range(h + 1) for q in rationals_of_height(k)]
        pool.sort(key=_rational_key)
        for coords in itertools.product(pool, repeat=self.p - 1):
            if max(_rational_height(x) for x in coords) == h:
                yield CycElement(self, coords)

    def random_element(self, rng, nonzero=False, height=4) -> CycElement:
        while True:
            coords = tuple(
                Fraction(rng.randint(-height, height), rng.randint(1, 2)) for _ in range(self.p - 1)
            )
            if any(coords) or not nonzero:
                return CycElement(self, coords)

    def primitive_root_of_unity(self, d: int) -> CycElement | None:
        """The adjoined generator w when d = p.

        The roots of unity in Q(w) are +-w^j, so for odd d >= 3 a primitive
        d-th root exists only when d = p; w is returned (not the
        lexicographically smallest w^j) to keep the documented choice stable.
        """
        self.check_degree(d)
        if d == 1:
            return self.one
        if d != self.p:
            return None
        return self.generator

    def dth_power_test(self, c: CycElement, d: int, bound: int | None = None) -> PowerTest:
        """Decide whether c is a d-th power in Q(w).

        1. The absolute norm of c must be a d-th power in Q; if not, NotAPower
           (sound, since N(g^d) = N(g)^d).
        2. Clear denominators: c * L^d is integral for L the lcm of the
           denominators, so any root is g / L with g in Z[w].
        3. Scan integral g with coordinates in [-bound, bound] whose norm
           matches.  No hit yields Unknown, never NotAPower.
        """
        if c.is_zero():
            raise ValueError("zero input to the d-th power test")
        n = c.norm()
        nroot = rational_root(n, d)
        if nroot is None:
            return NotAPower()
        if c.is_rational():
            r = rational_root(c.c[0], d)
            if r is not None:
                return Witness(self(r))
            if d % self.p:
                # Conjugates of a root differ by d-th roots of unity, and Q(w)
                # holds none besides 1 when p does not divide d (d odd).
                return NotAPower()
        L = math.lcm(*(x.denominator for x in c.c))
        target = CycElement(self, tuple(x * L**d for x in c.c))
        gnorm = nroot * L ** (self.p - 1)
        if bound is None:
            bound = max(1, int(10 ** (4 / (self.p - 1))) // 2)
        rng = range(-bound, bound + 1)
        best = None
        for coords in itertools.product(rng, repeat=self.p - 1):
            g = CycElement(self, tuple(Fraction(x) for x in coords))
            if g.is_zero() or g.norm() != gnorm:
                continue
            if g**d == target:
                root = CycElement(self, tuple(x / L for x in g.c))
                if best is None or root.sort_key() < best.sort_key():
                    best = root
        if best is not None:
            return Witness(best)
        return Unknown(f"no integral root with coordinates bounded by {bound}")


RATIONALS = Rationals()


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


@functools.lru_cache(maxsize=None)
def cyclotomic_field(p: int) -> CyclotomicField:
    return CyclotomicField(p)


_FRAC = re.compile(r"^Frac\((?P<base>[^()]+)\)\[(?P<vars>[^\]]*)\]$")


def field_from_descriptor(text: str) -> Field:
    """Parse ``Fp:7``, ``Q``, ``QW:3`` or ``Frac(<base>)[x,y,...]``."""
    text = text.strip().replace(" ", "")
    if text == "Q":
        return RATIONALS
    m = re.fullmatch(r"Fp:(\d+)", text)
    if m:
        return prime_field(int(m.group(1)))
    m = re.fullmatch(r"QW:(\d+)", text)
    if m:
        return cyclotomic_field(int(m.group(1)))
    m = _FRAC.match(text)
    if m:
        from .polyring import fraction_field

        names = tuple(v for v in m.group("vars").split(",") if v)
        if not names:
            raise UnsupportedFieldError(f"no variables in {text!r}")
        return fraction_field(field_from_descriptor(m.group("base")), names)
    raise UnsupportedFieldError(f"unrecognized field descriptor {text!r}")


def primitive_root_of_unity(k: Field, d: int):
    return k.primitive_root_of_unity(d)


def dth_power_test(c: FieldElement, d: int, bound: int | None = None) -> PowerTest:
    return c.field.dth_power_test(c, d, bound)
