from __future__ import annotations

import itertools
import random

import pytest

from cyclicsplit.albert import (
    AlbertElement,
    NotDivision,
    TitsAlgebra,
    TitsInconclusive,
    adjoint,
    adjoint_data,
    algebra_adjoint,
    cross,
    cubic_norm,
    first_order_coefficient,
    non_division_pipeline,
    trace_form,
    u_operator,
    verify_tits_report,
)
from cyclicsplit.cyclic import CyclicAlgebra
from cyclicsplit.fields import cyclotomic_field, prime_field
from cyclicsplit.forms import SearchBudget
from cyclicsplit.kummer import KummerExtension

F7 = prime_field(7)
L7 = KummerExtension(F7, 3, 3)


def _J(a, c):
    return TitsAlgebra(CyclicAlgebra(L7, a), c)


@pytest.fixture(scope="module")
def J():
    return _J(2, 5)


def test_small_examples(J):
    A = J.A
    e1, e2 = J((A.one, A.zero, A.zero)), J((A.zero, A.one, A.zero))
    assert cubic_norm(J, e1) == 1
    assert cubic_norm(J, e2) == J.c
    assert adjoint(J, e1) == e1
    assert adjoint(J, e2) == J((A.zero, A.zero, A.one.scale(J.c)))
    assert trace_form(J, J.one, J.one) == 3
    rng = random.Random(0)
    for _ in range(20):
        w = J.random_element(rng)
        assert u_operator(J, J.one, w) == w


def test_algebra_adjoint(J):
    rng = random.Random(1)
    for _ in range(100):
        x = J.A.random_element(rng)
        data = adjoint_data(x)
        n = J.A.one.scale(data.norm)
        assert x * data.adjoint == n and data.adjoint * x == n
        assert data.norm == x.reduced_norm()


def test_adjoint_identity(J):
    rng = random.Random(2)
    for _ in range(1000):
        v = J.random_element(rng)
        assert adjoint(J, adjoint(J, v)) == v.scale(cubic_norm(J, v))


def _literal_product_adjoint(J, v):
    # third component read as c a2^# a3 a1 with no operator supplied
    a1, a2, a3 = v.parts
    return AlbertElement(
        J,
        (
            algebra_adjoint(a1) - a2 * a3,
            algebra_adjoint(a3).scale(J.c_inv) - a1 * a2,
            algebra_adjoint(a2).scale(J.c) * a3 * a1,
        ),
    )


def _plus_adjoint(J, v):
    a1, a2, a3 = v.parts
    return AlbertElement(
        J,
        (
            algebra_adjoint(a1) - a2 * a3,
            algebra_adjoint(a3).scale(J.c_inv) - a1 * a2,
            algebra_adjoint(a2).scale(J.c) + a3 * a1,
        ),
    )


@pytest.mark.parametrize("variant", [_literal_product_adjoint, _plus_adjoint])
def test_other_third_component_readings_fail(J, variant):
    rng = random.Random(3)
    failures = 0
    for _ in range(20):
        v = J.random_element(rng)
        if variant(J, variant(J, v)) != v.scale(cubic_norm(J, v)):
            failures += 1
    assert failures > 0


def test_cross_and_bilinearity(J):
    rng = random.Random(4)
    for _ in range(30):
        u, v, w = (J.random_element(rng) for _ in range(3))
        lam = F7(rng.randrange(1, 7))
        assert cross(J, v, v) == adjoint(J, v).scale(2)
        assert cross(J, u + v, w) == cross(J, u, w) + cross(J, v, w)
        assert cross(J, v.scale(lam), w) == cross(J, v, w).scale(lam)
        assert trace_form(J, u + v, w) == trace_form(J, u, w) + trace_form(J, v, w)
        assert trace_form(J, v, w) == trace_form(J, w, v)
        assert cubic_norm(J, v.scale(lam)) == lam**3 * cubic_norm(J, v)
        assert trace_form(J, v, adjoint(J, v)) == 3 * cubic_norm(J, v)


def test_first_order_coefficient(J):
    rng = random.Random(5)
    for _ in range(30):
        v, w = J.random_element(rng), J.random_element(rng)
        assert first_order_coefficient(J, v, w) == trace_form(J, adjoint(J, v), w)
        # zero direction gives zero derivative
        assert first_order_coefficient(J, v, J.zero).is_zero()


def test_rejects_bad_construction():
    with pytest.raises(ValueError):
        _J(2, 0)
    with pytest.raises(ValueError):
        TitsAlgebra(CyclicAlgebra(KummerExtension(prime_field(11), 5, 2), 3), 1)


def test_pipeline_c_equals_one():
    report = non_division_pipeline(_J(2, 1))
    assert isinstance(report, NotDivision)
    assert report.condition == 1
    assert [str(x) for x in report.representation.args] == ["1", "0"]
    assert report.w == report.J.A.one
    assert all(report.checks.values())
    assert verify_tits_report(report.to_dict())


def test_pipeline_all_pairs_and_tampering():
    for a, c in itertools.product(range(1, 7), repeat=2):
        J = _J(a, c)
        report = non_division_pipeline(J)
        assert isinstance(report, NotDivision)
        assert cubic_norm(J, report.zero_vector).is_zero()
        assert report.w.reduced_norm() == J.c
        assert not report.hypothesis_violated
        data = report.to_dict()
        assert verify_tits_report(data)
        data["c"] = (c % 6) + 1
        assert not verify_tits_report(data)


def test_pipeline_threads_match():
    J = _J(3, 4)
    assert non_division_pipeline(J, threads=4).to_dict() == non_division_pipeline(J).to_dict()


def test_pipeline_inconclusive_over_cyclotomics():
    Qw = cyclotomic_field(3)
    J = TitsAlgebra(CyclicAlgebra(KummerExtension(Qw, 3, 2), 3), 5)
    report = non_division_pipeline(J, SearchBudget(height=1, max_candidates=30))
    assert isinstance(report, TitsInconclusive)
    assert len(report.searches) == 8
    assert not verify_tits_report(report.to_dict())
