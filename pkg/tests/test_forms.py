from __future__ import annotations

import itertools

import pytest

from cyclicsplit.fields import RATIONALS, cyclotomic_field, is_prime, prime_field
from cyclicsplit.forms import (
    DiagonalForm,
    ExhaustedNo,
    Impossible,
    Inconclusive,
    NotFound,
    Representation,
    SearchBudget,
    TensorNormForm,
    ValuationProfile,
    example1_case3_refute,
    polynomial_solution_search,
    profile_from_polynomials,
    represent_search,
    valuation_obstruction,
)
from cyclicsplit.kummer import KummerExtension
from cyclicsplit.polyring import polynomial_ring

F7 = prime_field(7)


def test_evaluate_examples():
    assert DiagonalForm(F7, 3, [1, 3]).evaluate((4, 1)) == F7(4)
    assert DiagonalForm(F7, 3, [5, 2]).evaluate((1, 0)) == F7(5)
    l = KummerExtension(F7, 3, 3)
    form = TensorNormForm(l, 5, 2)
    assert form.evaluate((l.one, l.zero)) == F7(5)
    with pytest.raises(ValueError):
        DiagonalForm(F7, 3, [1, 3]).evaluate((1,))
    with pytest.raises(ValueError):
        DiagonalForm(F7, 3, [1, 0])


def test_search_examples():
    rep = represent_search(DiagonalForm(F7, 3, [1, 2]), 3)
    assert isinstance(rep, Representation) and [x.v for x in rep.args] == [1, 1]
    rep = represent_search(DiagonalForm(F7, 3, [4, 5]), 4)
    assert [x.v for x in rep.args] == [1, 0]
    assert isinstance(represent_search(DiagonalForm(F7, 3, [1, 1]), 3), ExhaustedNo)
    with pytest.raises(ValueError):
        represent_search(DiagonalForm(F7, 3, [1, 1]), 0)


def _naive_first_hits(F, d, c1, c2):
    hits = {}
    for x, y in itertools.product(range(F.p), repeat=2):
        v = (c1 * pow(x, d, F.p) + c2 * pow(y, d, F.p)) % F.p
        hits.setdefault(v, (x, y))
    return hits


@pytest.mark.parametrize("p", [q for q in range(5, 32) if is_prime(q)])
def test_search_agrees_with_naive_double_loop(p):
    F = prime_field(p)
    d = 3
    for c1, c2 in itertools.product(range(1, p), repeat=2):
        hits = _naive_first_hits(F, d, c1, c2)
        form = DiagonalForm(F, d, [c1, c2])
        for target in range(1, p):
            out = represent_search(form, target)
            if target in hits:
                assert isinstance(out, Representation)
                assert tuple(x.v for x in out.args) == hits[target]
            else:
                assert isinstance(out, ExhaustedNo)


def test_ternary_and_nonzero_slots():
    form = DiagonalForm(F7, 3, [1, 1, 1])
    rep = represent_search(form, 3, nonzero_slots=(0, 1, 2))
    assert all(not x.is_zero() for x in rep.args) and rep.verify()


def test_threads_do_not_change_the_answer():
    F = prime_field(31)
    for c1, c2, target in [(3, 5, 7), (1, 2, 30), (11, 13, 17)]:
        form = DiagonalForm(F, 3, [c1, c2])
        single = represent_search(form, target)
        for threads in (2, 3, 8):
            multi = represent_search(form, target, threads=threads)
            assert type(multi) is type(single)
            if isinstance(single, Representation):
                assert multi.args == single.args and multi.searched == single.searched


def test_rationals_budget_is_inconclusive():
    p = 7
    out = represent_search(
        DiagonalForm(RATIONALS, 3, [1, p]), p * p, SearchBudget(height=4, max_candidates=500)
    )
    assert isinstance(out, NotFound)
    assert out.to_dict()["kind"] == "not-found"


def test_rationals_trivial_representation():
    rep = represent_search(DiagonalForm(RATIONALS, 3, [5, 7]), 5)
    assert [str(x) for x in rep.args] == ["1", "0"]


def test_cyclotomic_search_finds_cube_sum():
    Qw = cyclotomic_field(3)
    rep = represent_search(DiagonalForm(Qw, 3, [1, 1]), 9, SearchBudget(height=2, max_candidates=2000))
    assert isinstance(rep, Representation) and rep.verify()


def test_tensor_form_matches_field_norms():
    l = KummerExtension(F7, 3, 3)
    form = TensorNormForm(l, 5, 2)
    for x, y in itertools.islice(itertools.product(l.elements(), repeat=2), 0, 343 * 343, 997):
        assert form.evaluate((x, y)) == 5 * x.norm() + 2 * y.norm()
    rep = represent_search(form, 1, nonzero_slots=(0,))
    assert isinstance(rep, Representation) and not rep.args[0].is_zero() and rep.verify()


def test_valuation_examples():
    assert isinstance(valuation_obstruction(ValuationProfile(((0, 0), (1, 1)), 2, 3)), Impossible)
    assert isinstance(valuation_obstruction(ValuationProfile(((0, 0), (1, 1)), 0, 3)), Inconclusive)
    assert isinstance(valuation_obstruction(ValuationProfile(((0, 0), (0, 1)), 0, 3)), Inconclusive)
    assert isinstance(valuation_obstruction(ValuationProfile(((0, 0), (3, 1)), 1, 3)), Inconclusive)
    ternary = ValuationProfile(((2, 0), (1, 1), (0, 2)), 0, 3, "degree")
    assert isinstance(valuation_obstruction(ternary), Inconclusive)


def test_valuation_malformed():
    with pytest.raises(ValueError):
        valuation_obstruction(ValuationProfile(((0, 0),), 1, 3))
    with pytest.raises(ValueError):
        valuation_obstruction(ValuationProfile(((0, 0), (1, 0)), 2, 3))
    with pytest.raises(ValueError):
        valuation_obstruction(ValuationProfile(((0, 0), (1, 1)), 2, 3, "weird"))


def test_profiles_from_polynomials():
    R = polynomial_ring(RATIONALS, ("x", "y", "z", "t"))
    a = R.parse("x^3 + y^3*t + z^3*t^2 - 3*x*y*z*t")
    t = R.gen("t")
    deg = profile_from_polynomials([a, t], R.one, "t", 3, "degree")
    assert [v for v, _ in deg.terms] == [2, 1] and deg.target == 0
    order = profile_from_polynomials([a, t], t**2, "t", 3, "order")
    assert [v for v, _ in order.terms] == [0, 1] and order.target == 2
    assert isinstance(valuation_obstruction(deg), Impossible)
    assert isinstance(valuation_obstruction(order), Impossible)


def test_polynomial_search_positive_controls():
    # U^3 + V^3 = W^3 has the solution (0, 1, 1)
    rep = polynomial_solution_search([[1], [1], [6]], 3, 7, 3)
    assert rep.found
    # t U^3 = t V^3 from the top: (1, 1, ...) and a degree-direction solution
    rep = polynomial_solution_search([[0, 1], [0, 6]], 3, 7, 2, "degree")
    assert rep.found
    U, V = rep.solutions[0]
    assert any(U) and U == V


def test_case3_refutation_report():
    report = example1_case3_refute()
    data = report.to_dict()
    assert data["obstruction"]["verdict"] == "Impossible"
    assert data["obstruction"]["term_classes"] == [1, 2]
    assert data["obstruction"]["target_class"] == 0
    assert data["search_status"] == "NoSolutionFound"
    assert data["hypothesis"] and report.refuted
    assert data["specialized_coefficient"] == "z^3*t^2 + y^3*t"


def test_case3_without_search_and_tampered():
    assert example1_case3_refute(0).to_dict()["search_status"] == "skipped"
    assert example1_case3_refute(0).refuted
    tampered = example1_case3_refute(0, target_valuation=1)
    assert isinstance(tampered.obstruction, Inconclusive) and not tampered.refuted


@pytest.mark.parametrize("direction,eq", [
    ("degree", [[1, 6, 6], [0, 1], [6]]),
    ("order", [[1, 6, 6], [0, 1], [0, 0, 6]]),
])
def test_obstructed_cases_have_no_solutions_to_degree_six(direction, eq):
    assert not polynomial_solution_search(eq, 3, 7, 6, direction).found
