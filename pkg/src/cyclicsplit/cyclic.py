"""Cyclic algebras (l, a) = l + l z + ... + l z^(d-1) with z u = sigma(u) z, z^d = a.

Reduced norm and characteristic polynomial come from the right-regular
representation: right multiplication by x is l-linear for the *left*
l-space structure on A with basis 1, z, ..., z^(d-1).  Row i of that
matrix holds the coordinates of z^i * x.  (Using left multiplication would
compute the norm of the opposite algebra: same value, other convention.)
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .fields import FieldElement, field_from_descriptor
from .kummer import KummerElement, KummerExtension
from .linalg import charpoly

CERTIFICATE_VERSION = 1


class WitnessInvalid(ValueError):
    """The proposed norm witness does not have norm a."""


class CyclicAlgebra:
    def __init__(self, ext: KummerExtension, a):
        if ext.omega is None:
            raise ValueError(f"{ext.field} has no primitive {ext.d}-th root of unity")
        a = ext.field(a)
        if a.is_zero():
            raise ValueError("a must be nonzero")
        self.ext = ext
        self.field = ext.field
        self.d = ext.d
        self.a = a
        # idempotents need 1/d
        self.inv_d = self.field(ext.d).inverse()

    def __eq__(self, other):
        return isinstance(other, CyclicAlgebra) and self.ext == other.ext and self.a == other.a

    def __hash__(self):
        return hash((self.ext, self.a))

    def __repr__(self):
        e = self.ext
        return f"CyclicAlgebra({e.field}, d={e.d}, b={e.b}, a={self.a}, w={e.omega})"

    def __call__(self, coords) -> "AlgebraElement":
        if isinstance(coords, AlgebraElement):
            return coords
        if isinstance(coords, KummerElement):
            return self.from_l(coords)
        if isinstance(coords, (list, tuple)):
            if len(coords) != self.d:
                raise ValueError(f"expected {self.d} l-coordinates")
            return AlgebraElement(self, tuple(self.ext(c) for c in coords))
        return self.from_l(self.ext.from_base(coords))

    def from_l(self, u: KummerElement) -> "AlgebraElement":
        zero = self.ext.zero
        return AlgebraElement(self, (self.ext(u),) + (zero,) * (self.d - 1))

    @functools.cached_property
    def zero(self):
        return self.from_l(self.ext.zero)

    @functools.cached_property
    def one(self):
        return self.from_l(self.ext.one)

    @functools.cached_property
    def z(self):
        coords = [self.ext.zero] * self.d
        coords[1] = self.ext.one
        return AlgebraElement(self, tuple(coords))

    def random_element(self, rng) -> "AlgebraElement":
        return AlgebraElement(self, tuple(self.ext.random_element(rng) for _ in range(self.d)))


class AlgebraElement:
    __slots__ = ("alg", "coords")

    def __init__(self, alg: CyclicAlgebra, coords: tuple):
        self.alg = alg
        self.coords = coords

    def _operand(self, other):
        if isinstance(other, AlgebraElement):
            if other.alg is not self.alg and other.alg != self.alg:
                raise ValueError("elements of different cyclic algebras")
            return other
        if isinstance(other, (int, FieldElement, KummerElement)):
            return self.alg(other)
        return None

    def __add__(self, other):
        other = self._operand(other)
        if other is None:
            return NotImplemented
        return AlgebraElement(self.alg, tuple(x + y for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.alg, tuple(-x for x in self.coords))

    def __sub__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else self + (-other)

    def __rsub__(self, other):
        other = self._operand(other)
        return NotImplemented if other is None else other + (-self)

    def scale(self, c) -> "AlgebraElement":
        c = self.alg.field(c)
        return AlgebraElement(self.alg, tuple(x * c for x in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._operand(other)
        if other is None:
            return NotImplemented
        alg = self.alg
        d = alg.d
        out = list(alg.zero.coords)
        twisted = {}
        for i, x in enumerate(self.coords):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coords):
                if y.is_zero():
                    continue
                key = (i, j)
                if key not in twisted:
                    twisted[key] = y.sigma(i) if i else y
                term = x * twisted[key]
                k = i + j
                if k >= d:
                    k -= d
                    term = term * alg.a
                out[k] = out[k] + term
        return AlgebraElement(alg, tuple(out))

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        other = self._operand(other)
        return NotImplemented if other is None else other * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result, base = self.alg.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement, KummerElement)):
            other = self.alg(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return all(x.is_zero() for x in self.coords)

    def right_regular_matrix(self):
        """d x d matrix over l; row i is the l-coordinate vector of z^i * self."""
        alg = self.alg
        d = alg.d
        zero = alg.ext.zero
        rows = []
        for i in range(d):
            row = [zero] * d
            for j, x in enumerate(self.coords):
                entry = x.sigma(i) if i else x
                if i + j >= d:
                    entry = entry * alg.a
                row[(i + j) % d] = entry
            rows.append(row)
        return rows

    def reduced_char_poly(self) -> list[FieldElement]:
        """Coefficients c_0, ..., c_d (ascending) of the reduced characteristic polynomial."""
        coeffs = charpoly(self.right_regular_matrix(), self.alg.ext.one)
        out = []
        for c in reversed(coeffs):
            if not c.in_base():
                raise AssertionError(f"reduced characteristic polynomial left k: {c}")
            out.append(c.coords[0])
        return out

    def reduced_norm(self) -> FieldElement:
        c0 = self.reduced_char_poly()[0]
        return -c0 if self.alg.d % 2 else c0

    def reduced_trace(self) -> FieldElement:
        """Trace of the l-component x_0 (the z^i parts are traceless)."""
        return self.coords[0].trace()

    def __str__(self):
        parts = []
        for i, x in enumerate(self.coords):
            if x.is_zero():
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            parts.append(f"({x})*{mono}" if mono else f"({x})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"AlgebraElement({self})"

    def to_json(self):
        return [x.to_json() for x in self.coords]


def reduced_norm(x: AlgebraElement) -> FieldElement:
    return x.reduced_norm()


def reduced_char_poly(x: AlgebraElement) -> list[FieldElement]:
    return x.reduced_char_poly()


# -- splitting certificates -------------------------------------------------


@dataclass
class SplitCertificate:
    """A norm witness u with N(u) = a, the unit w = u^-1 z with w^d = 1, and the
    nontrivial idempotent e = (1 + w + ... + w^(d-1)) / d.  (e, 1 - e) is an
    explicit zero-divisor pair, so A is not a division algebra."""

    algebra: CyclicAlgebra
    witness: KummerElement
    w: AlgebraElement
    e: AlgebraElement
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        alg = self.algebra
        ext = alg.ext
        return {
            "certificate_version": CERTIFICATE_VERSION,
            "kind": "split-certificate",
            "field": ext.field.descriptor,
            "d": ext.d,
            "b": ext.b.to_json(),
            "a": alg.a.to_json(),
            "omega": ext.omega.to_json(),
            "witness": self.witness.to_json(),
            "w": self.w.to_json(),
            "e": self.e.to_json(),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SplitCertificate":
        if data.get("kind") != "split-certificate":
            raise ValueError("not a split certificate")
        if data.get("certificate_version") != CERTIFICATE_VERSION:
            raise ValueError(f"unsupported certificate version {data.get('certificate_version')}")
        k = field_from_descriptor(data["field"])
        ext = KummerExtension(k, int(data["d"]), k.from_json(data["b"]), k.from_json(data["omega"]))
        alg = CyclicAlgebra(ext, k.from_json(data["a"]))

        def l_elt(coords):
            return ext(tuple(k.from_json(c) for c in coords))

        return cls(
            algebra=alg,
            witness=l_elt(data["witness"]),
            w=alg(tuple(l_elt(c) for c in data["w"])),
            e=alg(tuple(l_elt(c) for c in data["e"])),
            provenance=dict(data.get("provenance", {})),
        )


def certificate_from_norm_witness(
    A: CyclicAlgebra, u, provenance: dict | None = None
) -> SplitCertificate:
    u = A.ext(u)
    if u.norm() != A.a:
        raise WitnessInvalid(f"N({u}) = {u.norm()} differs from a = {A.a}")
    w = A.from_l(u.inverse()) * A.z
    if w**A.d != A.one or w == A.one:
        raise AssertionError("w = u^-1 z must have order d")
    e = _idempotent(w)
    if e * e != e or e.is_zero() or e == A.one:
        raise AssertionError("averaging idempotent is degenerate")
    return SplitCertificate(A, u, w, e, dict(provenance or {}))


def _idempotent(w: AlgebraElement) -> AlgebraElement:
    A = w.alg
    total, power = A.zero, A.one
    for _ in range(A.d):
        total = total + power
        power = power * w
    return total.scale(A.inv_d)


def verify_certificate(cert: SplitCertificate) -> bool:
    """Recheck every identity from scratch; never raises on bad data."""
    try:
        A = cert.algebra
        u = cert.witness
        if u.ext != A.ext or u.norm() != A.a:
            return False
        if cert.w != A.from_l(u.inverse()) * A.z:
            return False
        if cert.w**A.d != A.one or cert.w == A.one:
            return False
        if cert.e != _idempotent(cert.w):
            return False
        e = cert.e
        return e * e == e and not e.is_zero() and e != A.one
    except (ArithmeticError, ValueError, AssertionError):
        return False
