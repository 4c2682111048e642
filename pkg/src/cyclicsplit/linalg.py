"""Exact dense linear algebra over arbitrary element types.

Matrices are lists of rows.  ``charpoly`` only needs ring operations, so it
also runs over the Kummer algebra when that algebra is not a field.
"""

from __future__ import annotations


def determinant(rows, one):
    """Bareiss fraction-free elimination; every division is exact in the ring."""
    n = len(rows)
    if n == 0:
        return one
    m = [list(r) for r in rows]
    sign = 1
    prev = one
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return one - one
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def charpoly(rows, one):
    """Coefficients of det(t*I - M), highest degree first; division free."""
    if len(rows) == 3:
        return _charpoly3(rows, one)
    return berkowitz(rows, one)


def berkowitz(rows, one):
    """Berkowitz' algorithm for det(t*I - M), highest degree first.

    Division free.  With M = [[a, R], [C, M1]] the characteristic polynomial
    of M is a lower-triangular Toeplitz matrix with first column
    (1, -a, -R C, -R M1 C, ...) applied to that of M1.
    """
    n = len(rows)
    zero = one - one
    if n == 0:
        return [one]
    poly = [one, -rows[n - 1][n - 1]]
    for k in range(n - 2, -1, -1):
        size = n - k
        R = rows[k][k + 1 :]
        v = [rows[i][k] for i in range(k + 1, n)]
        sub = [r[k + 1 :] for r in rows[k + 1 :]]
        col = [one, -rows[k][k]]
        for step in range(size - 1):
            acc = zero
            for x, y in zip(R, v):
                acc = acc + x * y
            col.append(-acc)
            if step < size - 2:
                v = [_dot(row, v, zero) for row in sub]
        new = []
        for i in range(size + 1):
            acc = zero
            for j in range(min(i, size - 1) + 1):
                acc = acc + col[i - j] * poly[j]
            new.append(acc)
        poly = new
    return poly


def _charpoly3(m, one):
    """3 x 3 case from principal minors: t^3 - tr t^2 + (sum of 2x2 minors) t - det."""
    (a, b, c), (d, e, f), (g, h, i) = m
    minor_a = e * i - f * h
    minor_e = a * i - c * g
    minor_i = a * e - b * d
    det = a * minor_a - b * (d * i - f * g) + c * (d * h - e * g)
    return [one, -(a + e + i), minor_a + minor_e + minor_i, -det]


def _dot(xs, ys, zero):
    acc = zero
    for x, y in zip(xs, ys):
        acc = acc + x * y
    return acc


def solve(rows, rhs, one):
    """Solve M x = rhs over a field by Gauss-Jordan; raises if M is singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[pivot] = m[pivot], m[k]
        inv = one / m[k][k]
        m[k] = [x * inv for x in m[k]]
        for i in range(n):
            if i != k and not m[i][k].is_zero():
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return [m[i][n] for i in range(n)]
