import pytest
import sympy as sp

from condsym.catalog.operator_lib import operator_lib
from condsym.eqcat import HODOGRAPH_ELEMENT, V_X, V_XX
from condsym.errors import UnsupportedOperatorError
from condsym.expr import T, X
from condsym.jets import ReductionOperator, is_reduction_operator
from condsym.opcat import (GroupElement, discrete_generators,
                           gandarias_ansatz_operator, lie_generators, lie_span,
                           operators_equivalent, pair_image, potential_to_nogo,
                           push_forward, search_group_equivalence,
                           theorem1_operator)

U, V = sp.symbols('u v')


def test_case1_operator_coefficients():
    Q = theorem1_operator(1, eps=0, f='inv')
    assert Q.coefficients == (1, 0, -2/X)


@pytest.mark.parametrize('eps', [0, 1])
@pytest.mark.parametrize('f', ['inv', 'cot', 'tanh', 'coth'])
def test_case1_is_reduction_operator(potential, settings, eps, f):
    Q = theorem1_operator(1, eps=eps, f=f)
    assert is_reduction_operator(potential, Q, settings).is_zero


def test_case2_with_custom_profile(potential, settings):
    omega = sp.Symbol('omega')
    Q = theorem1_operator(2, f=-2/omega)
    assert is_reduction_operator(potential, Q, settings).is_zero


def test_case1_rejects_other_profile(potential, settings):
    omega = sp.Symbol('omega')
    Q = theorem1_operator(1, eps=0, f=omega**2)
    assert not is_reduction_operator(potential, Q, settings).is_zero


@pytest.mark.parametrize('kwargs', [dict(case=9), dict(case=1, eps=2, f='inv'),
                                    dict(case=1, f='sec'), dict(case=3)])
def test_theorem1_selector_errors(kwargs):
    with pytest.raises(ValueError):
        theorem1_operator(**kwargs)


@pytest.mark.slow
@pytest.mark.parametrize('key', sorted(operator_lib))
def test_operator_catalog(fast, potential, settings, key):
    entry = operator_lib[key]
    equation = potential if entry.equation == 'potential' else fast
    assert is_reduction_operator(equation, entry.build(), settings).is_zero


def test_lie_generators_sizes():
    assert len(lie_generators('A1')) == 4
    assert len(lie_generators('A2')) == 5
    with pytest.raises(ValueError):
        lie_generators('A3')


def test_lie_span():
    assert lie_span(ReductionOperator('v', 1, 0, 1), 'A2') == (1, 0, 1, 0, 0)
    assert lie_span(ReductionOperator('u', T, 2, U), 'A1') == (0, 2, 1, 0)
    assert lie_span(ReductionOperator('v', T**2, 0, 0), 'A2') is None
    assert lie_span(theorem1_operator(1, eps=0, f='inv'), 'A2') is None
    assert lie_span(ReductionOperator('u', 1, 0, 0), 'A2') is None


def test_hodograph_maps_v_translation_to_x_translation():
    image = push_forward(GroupElement('G2', hodograph=True), ReductionOperator('v', 0, 0, 1))
    assert image.coefficients == (0, 1, 0)


def test_scaling_push_forward():
    image = push_forward(GroupElement('G2', eps4=2), ReductionOperator('v', 1, 1, 0))
    assert image.coefficients == (1, 2, 0)


def test_push_forward_dependent_mismatch():
    with pytest.raises(ValueError):
        push_forward(GroupElement('G1'), ReductionOperator('v', 1, 0, 0))


def test_operators_equivalent():
    report = operators_equivalent(ReductionOperator('v', 2, 2*X, 2*V),
                                  ReductionOperator('v', 1, X, V))
    assert report
    assert report.multiplier == 2
    assert not operators_equivalent(ReductionOperator('v', 1, 0, 0),
                                    ReductionOperator('v', 0, 1, 0))


def test_search_group_equivalence():
    grid = [GroupElement('G2', eps3=2), GroupElement('G2', eps4=2)]
    Q1, Q2 = ReductionOperator('v', 1, 1, 0), ReductionOperator('v', 1, 2, 0)
    assert search_group_equivalence(Q1, Q2, grid) == grid[1]
    assert search_group_equivalence(Q1, Q2, grid[:1]) is None


def test_discrete_generators_are_involutions():
    Q = theorem1_operator(1, eps=1, f='tanh')
    for g in discrete_generators('G2'):
        assert operators_equivalent(push_forward(g, push_forward(g, Q)), Q)


@pytest.mark.parametrize('algebra, group', [('A1', 'G1'), ('A2', 'G2')])
def test_discrete_generators_preserve_lie_algebra(algebra, group):
    for g in discrete_generators(group):
        for Q in lie_generators(algebra):
            assert lie_span(push_forward(g, Q), algebra) is not None


def test_potential_to_nogo(fast, settings):
    Q = potential_to_nogo(ReductionOperator('v', 1, -1, -2*sp.cot(X - T)))
    assert operators_equivalent(Q, gandarias_ansatz_operator(1, -2*sp.cot(X - T)))
    assert is_reduction_operator(fast, Q, settings).is_zero


def test_potential_to_nogo_rejects_v_dependence():
    with pytest.raises(UnsupportedOperatorError):
        potential_to_nogo(theorem1_operator(2, f='inv'))


def test_pair_image_of_v_translation(potential):
    equation, Q = pair_image(HODOGRAPH_ELEMENT, potential, ReductionOperator('v', 0, 0, 1))
    assert sp.simplify(equation.rhs - V_XX/V_X) == 0
    assert Q.coefficients == (0, 1, 0)
