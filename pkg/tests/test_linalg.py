from __future__ import annotations

import random

import sympy

from cyclicsplit.fields import RATIONALS, prime_field
from cyclicsplit.linalg import berkowitz, charpoly, determinant, solve


def _random_matrix(rng, n, F, bound=9):
    return [[F(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)]


def test_against_sympy_over_q():
    rng = random.Random(3)
    t = sympy.Symbol("t")
    for n in range(1, 6):
        for _ in range(10):
            m = _random_matrix(rng, n, RATIONALS)
            sm = sympy.Matrix([[int(str(x)) for x in row] for row in m])
            assert determinant(m, RATIONALS.one) == RATIONALS(int(sm.det()))
            expected = sympy.Poly(sm.charpoly(t).as_expr(), t).all_coeffs()
            assert charpoly(m, RATIONALS.one) == [RATIONALS(int(c)) for c in expected]
            assert berkowitz(m, RATIONALS.one) == [RATIONALS(int(c)) for c in expected]


def test_closed_form_cubic_agrees_with_berkowitz_mod_p():
    F = prime_field(13)
    rng = random.Random(5)
    for _ in range(300):
        m = _random_matrix(rng, 3, F)
        assert charpoly(m, F.one) == berkowitz(m, F.one)


def test_singular_and_solve():
    F = prime_field(7)
    one = F.one
    m = [[F(1), F(2)], [F(2), F(4)]]
    assert determinant(m, one).is_zero()
    rng = random.Random(1)
    for _ in range(50):
        m = _random_matrix(rng, 4, F)
        if determinant(m, one).is_zero():
            continue
        rhs = [F(rng.randrange(7)) for _ in range(4)]
        x = solve(m, rhs, one)
        for row, b in zip(m, rhs):
            assert sum((a * v for a, v in zip(row, x)), F.zero) == b
