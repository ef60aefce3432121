import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from condsym.config import ProbeSettings
from condsym.errors import (ExpressionSyntaxError, PoleError,
                            UnboundVariableError, UnknownFunctionError)
from condsym.expr import (T, X, Verdict, differentiate, evaluate,
                          format_expression, is_zero, jet, lnabs, parse,
                          substitute)


def test_parse_power_and_product():
    assert parse('2*t/x^2') == 2*T/X**2


def test_parse_jet_variable():
    e = parse('u_xx')
    assert e == jet('u', 0, 2)
    assert parse('u_xt') == jet('u', 1, 1)


def test_parse_cotangent_difference():
    e = parse('cot(x - t) - cot(x + t)')
    assert e == sp.cot(X - T) - sp.cot(X + T)


def test_parse_rejects_python_power():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse('x**2')
    assert info.value.position == 1


def test_parse_unknown_function():
    with pytest.raises(UnknownFunctionError):
        parse('foo(x)')


def test_parse_empty():
    with pytest.raises(ExpressionSyntaxError):
        parse('   ')


def test_format_round_trip():
    e = parse('2*sin(2*t)/(cos(2*t) - cos(2*x))')
    assert parse(format_expression(e)) == e


def test_differentiate_cot():
    derivative = differentiate(parse('cot(x - t)'), 'x')
    assert is_zero(derivative - (-1 - sp.cot(X - T)**2)).is_zero


def test_differentiate_lnabs():
    assert differentiate(lnabs(X), 'x') == 1/X


def test_substitute_profile():
    omega = sp.Symbol('omega')
    e = substitute(omega**2, {omega: X + 2*T})
    assert e == (X + 2*T)**2
    g = sp.Function('g')
    e = substitute(g(omega), {g: sp.Lambda(omega, -2/omega), omega: X + T})
    assert sp.simplify(e + 2/(X + T)) == 0


def test_substitute_constant_solution(fast):
    assert fast.residual(1) == 0


def test_evaluate():
    assert evaluate('cot(x)', {'x': np.pi/4}) == pytest.approx(1.0)
    assert evaluate('2*t/(x^2 + t^2)', {'t': 1, 'x': 2}) == pytest.approx(0.4)


def test_evaluate_unbound():
    with pytest.raises(UnboundVariableError):
        evaluate('x + t', {'x': 1})


def test_evaluate_pole():
    with pytest.raises(PoleError):
        evaluate('1/x', {'x': 0})


def test_is_zero_two_wave_identity():
    a, b = X + T, X - T
    e = sp.cot(b) - sp.cot(a) - 2*sp.sin(a - b)/(sp.cos(a - b) - sp.cos(a + b))
    assert is_zero(e).is_zero


def test_is_zero_nonzero_constant():
    assert is_zero(sp.Integer(1)).verdict == Verdict.PROVED_NONZERO


def test_is_zero_f_profile():
    omega = sp.Symbol('omega')
    f = -2*sp.tanh(omega)
    assert is_zero(sp.diff(f, omega, 2) - f*sp.diff(f, omega)).is_zero


def test_is_zero_is_reproducible():
    e = sp.sin(X)**2 + sp.cos(X)**2 - 1 + 1e-3*X
    first = is_zero(e, ProbeSettings(seed=5))
    second = is_zero(e, ProbeSettings(seed=5))
    assert first == second
    assert not first.is_zero


@hsettings(max_examples=25, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5))
def test_differentiation_is_linear(a, b):
    f, g = sp.sin(X)*T, sp.exp(T*X)
    left = differentiate(a*f + b*g, 'x')
    right = a*differentiate(f, 'x') + b*differentiate(g, 'x')
    assert sp.expand(left - right) == 0


def test_is_zero_does_not_hide_residual_behind_large_summands():
    e = 10**12*sp.sin(X)**2 + 10**12*sp.cos(X)**2 - 10**12 + 1
    report = is_zero(e)
    assert not report.is_zero
    assert report.max_abs == pytest.approx(1.0, rel=1e-6)


def test_is_zero_recomputes_large_cancelling_summands():
    e = 10**12*(lnabs(X*T) - lnabs(X) - lnabs(T))
    report = is_zero(e)
    assert report.verdict == Verdict.NUMERICALLY_ZERO
    assert report.max_abs <= 1e-9


@pytest.mark.parametrize('text', ['cot(x - t)*u^2', 'exp(t)*sin(x)/u',
                                  'lnabs(u_x)*tanh(u*x)', 'arctan(x*u) + coth(t + x)'])
def test_differentiate_matches_finite_differences(text):
    e = parse(text)
    rng = np.random.default_rng(7)
    h = 1e-5
    for _ in range(10):
        point = {'t': rng.uniform(0.0, 0.5), 'x': rng.uniform(1.2, 1.5),
                 'u': rng.uniform(0.5, 1.5), 'u_x': rng.uniform(0.5, 1.5)}
        for var in [s.name for s in e.free_symbols]:
            exact = evaluate(differentiate(e, var), point)
            forward = evaluate(e, {**point, var: point[var] + h})
            backward = evaluate(e, {**point, var: point[var] - h})
            approximation = (forward - backward)/(2*h)
            assert abs(approximation - exact) <= 1e-6*max(1.0, abs(exact))
