import pytest
import sympy as sp
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from condsym.errors import DegenerateOperatorError, OrderOverflowError
from condsym.expr import T, X, jet
from condsym.jets import (ReductionOperator, characteristic,
                          conditional_invariance_residual, evolution_adapted,
                          is_reduction_operator, prolong, total_derivative)
from condsym.opcat import gandarias_ansatz_operator, lie_generators, theorem1_operator

U, V = sp.symbols('u v')


def test_total_derivative_first_jets():
    theta = sp.Function('theta')(T, X, V)
    result = total_derivative(theta, 'x', 'v', 2)
    expected = sp.diff(theta, X) + jet('v', 0, 1)*sp.diff(theta, V)
    assert sp.simplify(result - expected) == 0


def test_total_derivative_of_jet():
    assert total_derivative(jet('v', 0, 1), 't', 'v', 2) == jet('v', 1, 1)


def test_total_derivative_product():
    result = total_derivative(U*jet('u', 0, 1), 'x', 'u', 3)
    assert sp.expand(result - jet('u', 0, 1)**2 - U*jet('u', 0, 2)) == 0


def test_total_derivative_overflow():
    with pytest.raises(OrderOverflowError):
        total_derivative(jet('u', 0, 2), 'x', 'u', 2)


@hsettings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_total_derivatives_commute(a, b):
    e = T**a*X**b*jet('u', 0, 1) + U**2*sp.sin(X)
    tx = total_derivative(total_derivative(e, 't', 'u', 3), 'x', 'u', 3)
    xt = total_derivative(total_derivative(e, 'x', 'u', 3), 't', 'u', 3)
    assert sp.expand(tx - xt) == 0


def test_characteristic():
    Q = ReductionOperator('v', 1, 1, 0)
    assert characteristic(Q) == -jet('v', 1, 0) - jet('v', 0, 1)
    Q = ReductionOperator('u', 0, 1, U**2)
    assert characteristic(Q) == U**2 - jet('u', 0, 1)
    Q = ReductionOperator('v', 1, -1, -2*sp.cot(X - T))
    assert characteristic(Q) == -2*sp.cot(X - T) - jet('v', 1, 0) + jet('v', 0, 1)


def test_degenerate_operator():
    with pytest.raises(DegenerateOperatorError):
        ReductionOperator('u', 0, 0, 0)


def test_operator_along_dependent_variable_only():
    Q = ReductionOperator('v', 0, 0, 1)
    assert Q.coefficients == (0, 0, 1)
    assert evolution_adapted(Q) is Q


def test_prolongation_of_translation_is_trivial():
    prolonged = prolong(ReductionOperator('u', 1, 0, 0), 2)
    assert all(c == 0 for c in prolonged.coefficients.values())


def test_prolongation_of_scaling():
    prolonged = prolong(ReductionOperator('u', 0, 0, U), 1)
    assert prolonged.coefficients[(0, 1)] == jet('u', 0, 1)
    assert prolonged.coefficients[(1, 0)] == jet('u', 1, 0)


def test_evolution_adapted_divides_by_tau():
    Q = evolution_adapted(ReductionOperator('u', T, 0, U))
    assert Q.tau == 1 and Q.eta == U/T


def test_time_translation_is_reduction_operator(potential):
    Q = ReductionOperator('v', 1, 0, 0)
    assert conditional_invariance_residual(potential, Q) == 0


def test_case2_operator(potential, settings):
    Q = theorem1_operator(2, f='coth')
    assert is_reduction_operator(potential, Q, settings).is_zero


def test_scaling_in_v_alone_fails(potential, settings):
    Q = ReductionOperator('v', 1, 0, V)
    assert not is_reduction_operator(potential, Q, settings).is_zero


def test_gandarias_tanh_operator(fast, settings):
    Q = ReductionOperator('u', 0, 1, U**2 - 2*sp.tanh(X - T)*U)
    assert is_reduction_operator(fast, Q, settings).is_zero
    assert is_reduction_operator(fast, gandarias_ansatz_operator(1, -2*sp.tanh(X - T)),
                                 settings).is_zero


def test_cubic_operator_fails(fast, settings):
    Q = ReductionOperator('u', 0, 1, U**3)
    assert not is_reduction_operator(fast, Q, settings).is_zero


@pytest.mark.parametrize('algebra', ['A1', 'A2'])
def test_lie_generators_pass(algebra, fast, potential, settings):
    equation = fast if algebra == 'A1' else potential
    for Q in lie_generators(algebra):
        assert is_reduction_operator(equation, Q, settings).is_zero


def test_shift_of_v_is_lie_symmetry(potential, settings):
    Q = ReductionOperator('v', 0, 0, 1)
    assert conditional_invariance_residual(potential, Q) == 0
    assert is_reduction_operator(potential, Q, settings).is_zero


def test_scaling_of_u_alone_fails(fast, settings):
    Q = ReductionOperator('u', 0, 0, U)
    assert not is_reduction_operator(fast, Q, settings).is_zero


def test_a2_has_shift_of_v():
    generators = lie_generators('A2')
    assert len(generators) == 5
    assert any(Q.coefficients == (0, 0, 1) for Q in generators)
