"""The Kummer algebra l = k[A]/(A^d - b).

Elements are coordinate tuples ``(u1, ..., ud)`` meaning
``u1 + u2*A + ... + ud*A^(d-1)``.  When k holds a primitive d-th root of
unity w, the generator of the cyclic action is ``sigma(A) = w*A`` and the
norm is the product of the d conjugates.  Without w, for instance over
Q(x, y, z, t), the norm falls back to the determinant of multiplication by x.
"""

from __future__ import annotations

import functools
import itertools

from .expr import evaluate
from .fields import Field, FieldElement, PrimeField, Unknown, Witness, _odd_prime_factors
from .linalg import determinant, solve


class NotInvertibleError(ZeroDivisionError):
    pass


class KummerExtension:
    def __init__(self, field: Field, d: int, b, omega=None):
        if d < 3 or d % 2 == 0:
            raise ValueError(f"degree must be odd and at least 3, got {d}")
        field.check_degree(d)
        b = field(b)
        if b.is_zero():
            raise ValueError("radicand b must be nonzero")
        self.field = field
        self.d = d
        self.b = b
        if omega is None:
            omega = field.primitive_root_of_unity(d)
        else:
            omega = field(omega)
            if omega**d != field.one or any(omega**j == field.one for j in range(1, d)):
                raise ValueError(f"{omega} is not a primitive {d}-th root of unity")
        self.omega = omega
        self._p = field.p if isinstance(field, PrimeField) else 0
        if omega is not None:
            self._omega_powers = tuple(omega**j for j in range(d))

    def __eq__(self, other):
        return (
            isinstance(other, KummerExtension)
            and self.field == other.field
            and self.d == other.d
            and self.b == other.b
            and self.omega == other.omega
        )

    def __hash__(self):
        return hash((self.field, self.d, self.b))

    def __repr__(self):
        return f"KummerExtension({self.field}, d={self.d}, b={self.b}, w={self.omega})"

    @functools.cached_property
    def is_field(self) -> bool | None:
        """Whether x^d - b is irreducible; None when undecided (number-field bound).

        For odd d this holds iff b is not a q-th power for each prime q | d.
        """
        undecided = False
        for q in _odd_prime_factors(self.d):
            res = self.field.dth_power_test(self.b, q)
            if isinstance(res, Witness):
                return False
            if isinstance(res, Unknown):
                undecided = True
        return None if undecided else True

    # -- constructors --------------------------------------------------------

    def __call__(self, coords) -> "KummerElement":
        if isinstance(coords, KummerElement):
            if coords.ext != self:
                raise ValueError("element belongs to another extension")
            return coords
        if isinstance(coords, str):
            return self.parse(coords)
        if isinstance(coords, (list, tuple)):
            if len(coords) != self.d:
                raise ValueError(f"expected {self.d} coordinates, got {len(coords)}")
            return KummerElement(self, tuple(self.field(c) for c in coords))
        return self.from_base(coords)

    def from_base(self, c) -> "KummerElement":
        zero = self.field.zero
        return KummerElement(self, (self.field(c),) + (zero,) * (self.d - 1))

    def monomial(self, c, j: int) -> "KummerElement":
        coords = [self.field.zero] * self.d
        coords[j] = self.field(c)
        return KummerElement(self, tuple(coords))

    @functools.cached_property
    def zero(self):
        return self.from_base(0)

    @functools.cached_property
    def one(self):
        return self.from_base(1)

    @functools.cached_property
    def alpha(self):
        return self.monomial(1, 1)

    def parse(self, text: str) -> "KummerElement":
        symbols = {name: self.from_base(v) for name, v in self.field.symbols().items()}
        symbols["A"] = self.alpha
        return evaluate(text, symbols, self.from_base)

    def elements(self):
        """All elements of a finite l, by degree in A and then lexicographically.

        The highest coordinate is the most significant, so k comes first,
        then k + kA, and so on; small searches over l meet 1 before A^2.
        """
        base = self.field.elements()
        for coords in itertools.product(base, repeat=self.d):
            yield KummerElement(self, coords[::-1])

    def random_element(self, rng, nonzero=False) -> "KummerElement":
        while True:
            x = KummerElement(self, tuple(self.field.random_element(rng) for _ in range(self.d)))
            if not nonzero or not x.is_zero():
                return x


class KummerElement:
    __slots__ = ("ext", "coords")

    def __init__(self, ext: KummerExtension, coords: tuple):
        self.ext = ext
        self.coords = coords

    def _operand(self, other):
        if isinstance(other, KummerElement):
            if other.ext is not self.ext and other.ext != self.ext:
                raise ValueError("elements of different Kummer extensions")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.ext.from_base(other)
        return None

    def __add__(self, other):
        if type(other) is not KummerElement or other.ext is not self.ext:
            other = self._operand(other)
            if other is None:
                return NotImplemented
        return KummerElement(self.ext, tuple(x + y for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return KummerElement(self.ext, tuple(-x for x in self.coords))

    def __sub__(self, other):
        if type(other) is not KummerElement or other.ext is not self.ext:
            other = self._operand(other)
            if other is None:
                return NotImplemented
        return KummerElement(self.ext, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else other + (-self)

    def __mul__(self, other):
        if type(other) is not KummerElement or other.ext is not self.ext:
            if isinstance(other, (int, FieldElement)):
                c = self.ext.field(other)
                return KummerElement(self.ext, tuple(x * c for x in self.coords))
            other = self._operand(other)
            if other is None:
                return NotImplemented
        ext = self.ext
        d = ext.d
        if ext._p:
            p, bv, el = ext._p, ext.b.v, ext.field.element
            if d == 3:
                a0, a1, a2 = (c.v for c in self.coords)
                b0, b1, b2 = (c.v for c in other.coords)
                return KummerElement(
                    ext,
                    (
                        el((a0 * b0 + bv * (a1 * b2 + a2 * b1)) % p),
                        el((a0 * b1 + a1 * b0 + bv * a2 * b2) % p),
                        el((a0 * b2 + a1 * b1 + a2 * b0) % p),
                    ),
                )
            w = [c.v for c in other.coords]
            acc = [0] * d
            for i, c in enumerate(self.coords):
                x = c.v
                if x:
                    for j, y in enumerate(w):
                        k = i + j
                        if k < d:
                            acc[k] += x * y
                        else:
                            acc[k - d] += bv * x * y
            return KummerElement(ext, tuple(el(a % p) for a in acc))
        zero = ext.field.zero
        acc = [zero] * d
        high = [zero] * d
        for i, x in enumerate(self.coords):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coords):
                if y.is_zero():
                    continue
                k = i + j
                if k < d:
                    acc[k] = acc[k] + x * y
                else:
                    high[k - d] = high[k - d] + x * y
        b = ext.b
        return KummerElement(
            ext, tuple(lo if hi.is_zero() else lo + b * hi for lo, hi in zip(acc, high))
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.ext.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = self.ext.from_base(other)
        if not isinstance(other, KummerElement):
            return NotImplemented
        return self.coords == other.coords and self.ext == other.ext

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def in_base(self) -> bool:
        return all(c.is_zero() for c in self.coords[1:])

    def multiplication_matrix(self):
        """Matrix of y -> x*y on the basis 1, A, ..., A^(d-1); column j is x*A^j."""
        d = self.ext.d
        cols = []
        cur = self
        for _ in range(d):
            cols.append(cur.coords)
            cur = cur * self.ext.alpha
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def inverse(self) -> "KummerElement":
        """Solve x * y = 1 against the multiplication matrix."""
        if self.is_zero():
            raise NotInvertibleError("zero has no inverse")
        F = self.ext.field
        rhs = [F.one] + [F.zero] * (self.ext.d - 1)
        try:
            y = solve(self.multiplication_matrix(), rhs, F.one)
        except ZeroDivisionError:
            raise NotInvertibleError(f"{self} is a zero divisor in {self.ext}") from None
        return KummerElement(self.ext, tuple(y))

    def sigma(self, power: int = 1) -> "KummerElement":
        """Cyclic action A -> w*A applied ``power`` times: u_j -> w^((j-1)*power) u_j."""
        ext = self.ext
        if ext.omega is None:
            raise ValueError(f"{ext.field} has no primitive {ext.d}-th root of unity")
        d = ext.d
        wp = ext._omega_powers
        return KummerElement(
            ext, tuple(c if j == 0 else c * wp[(j * power) % d] for j, c in enumerate(self.coords))
        )

    def norm(self) -> FieldElement:
        """Field norm to k: product of the d conjugates (or det of multiplication)."""
        ext = self.ext
        if ext.omega is None:
            return determinant(self.multiplication_matrix(), ext.field.one)
        prod = self
        for i in range(1, ext.d):
            prod = prod * self.sigma(i)
        if not prod.in_base():
            raise AssertionError(f"norm of {self} left the base field: {prod}")
        return prod.coords[0]

    def trace(self) -> FieldElement:
        """Trace to k; the conjugate sum collapses to d*u1."""
        return self.coords[0] * self.ext.d

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coords):
            if c.is_zero():
                continue
            mono = "" if j == 0 else ("A" if j == 1 else f"A^{j}")
            text = str(c)
            if mono:
                if text == "1":
                    parts.append(mono)
                elif text == "-1":
                    parts.append("-" + mono)
                elif all(ch.isdigit() or ch in "-/" for ch in text):
                    parts.append(f"{text}*{mono}")
                else:
                    parts.append(f"({text})*{mono}")
            else:
                parts.append(text)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"KummerElement({self})"

    def to_json(self):
        return [c.to_json() for c in self.coords]


def field_norm(x: KummerElement) -> FieldElement:
    return x.norm()


def field_trace(x: KummerElement) -> FieldElement:
    return x.trace()


def galois_sigma(x: KummerElement, power: int = 1) -> KummerElement:
    return x.sigma(power)
