import pytest
import sympy as sp

from condsym.catalog.invariant_lib import invariant_lib
from condsym.catalog.operator_lib import operator_lib
from condsym.errors import ReductionError
from condsym.expr import T, X
from condsym.jets import ReductionOperator
from condsym.opcat import lie_generators, theorem1_operator
from condsym.reduce import (OMEGA, PHI, InvariantPair, extract_profile,
                            f_profile_check, reduce, separation_check,
                            verify_invariants)
from condsym.solcat import lie_solution, nonlie_solution

V = sp.Symbol('v')


@pytest.mark.parametrize('key', sorted(invariant_lib))
def test_catalog_invariants(settings, key):
    report = verify_invariants(operator_lib[key].build(), invariant_lib[key], settings)
    assert report.valid


def test_invariants_of_wrong_operator(settings):
    report = verify_invariants(ReductionOperator('v', 1, 0, 0),
                               InvariantPair('v', V, T), settings)
    assert report.zeta_invariant.is_zero
    assert not report.omega_invariant.is_zero
    assert not report


def test_dependent_invariants(settings):
    report = verify_invariants(ReductionOperator('v', 1, 0, 0),
                               InvariantPair('v', V, 2*V), settings)
    assert not report.independent


def test_invariant_free_of_dependent_variable(settings):
    report = verify_invariants(ReductionOperator('v', 1, 0, 0),
                               InvariantPair('v', X, V), settings)
    assert not report.zeta_depends_on_dep


def test_translation_reduces_to_linear_profile(potential, settings):
    ode = reduce(potential, ReductionOperator('v', 1, 0, 0), InvariantPair('v', V, X), settings)
    assert ode.order == 2
    assert ode.is_solved_by(3*OMEGA + 1, settings).is_zero
    assert not ode.is_solved_by(OMEGA**2, settings).is_zero


def test_case1_reduction(potential, settings):
    key = 'thm1.case1.eps=0.f=inv'
    ode = reduce(potential, operator_lib[key].build(), invariant_lib[key], settings)
    assert ode.order == 2
    assert ode.is_solved_by(-1/OMEGA, settings).is_zero
    assert not ode.is_solved_by(sp.log(OMEGA), settings).is_zero


def test_scaling_reduction_and_profile(fast, settings):
    key = 'lie.A1.3'
    inv = invariant_lib[key]
    ode = reduce(fast, lie_generators('A1')[2], inv, settings)
    profile = extract_profile(inv, lie_solution(5).u, settings)
    assert sp.simplify(profile - 2/sp.cos(OMEGA)**2) == 0
    assert ode.is_solved_by(profile, settings).is_zero


@pytest.mark.slow
@pytest.mark.parametrize('f', ['inv', 'tanh'])
def test_case2_reduction(potential, settings, f):
    key = f'thm1.case2.f={f}'
    ode = reduce(potential, operator_lib[key].build(), invariant_lib[key], settings)
    assert ode.residual.free_symbols <= {OMEGA, *PHI}
    assert 1 <= ode.order <= 2


def test_reduction_requires_invariants(potential, settings):
    with pytest.raises(ReductionError):
        reduce(potential, ReductionOperator('v', 1, 0, 0), InvariantPair('v', V, T), settings)


def test_reduction_requires_reduction_operator(potential, settings):
    Q = theorem1_operator(1, eps=0, f=OMEGA**2)
    with pytest.raises(ReductionError):
        reduce(potential, Q, InvariantPair('v', V - T*X**2, X), settings)


def test_reduction_variable_mismatch(fast, settings):
    with pytest.raises(ValueError):
        reduce(fast, ReductionOperator('v', 1, 0, 0), InvariantPair('v', V, X), settings)


def test_profile_of_non_invariant_solution(settings):
    with pytest.raises(ReductionError):
        extract_profile(InvariantPair('u', sp.Symbol('u'), X), lie_solution(5).u, settings)


@pytest.mark.parametrize('f, expected', [(-2/OMEGA, True), (-2*sp.cot(OMEGA), True),
                                         (-2*sp.tanh(OMEGA), True), (-2*sp.coth(OMEGA), True),
                                         (OMEGA**2, False), (sp.exp(OMEGA), False)])
def test_f_profile_check(f, expected):
    assert f_profile_check(f).is_zero == expected


def test_nonlie_potential_is_difference_of_waves():
    assert separation_check(nonlie_solution('1p').v, 'additive').is_zero
    assert not separation_check(nonlie_solution('1p').v, 'multiplicative').is_zero


def test_lie_potential_separates():
    assert separation_check(lie_solution(5).v, 'multiplicative').is_zero
    assert not separation_check(lie_solution(5).v, 'additive').is_zero


def test_separation_wave_speed():
    assert separation_check(sp.sin(X - 2*T), 'additive', lam=2).is_zero
    assert not separation_check(sp.sin(X - 2*T), 'additive', lam=1).is_zero


def test_separation_mode_error():
    with pytest.raises(ValueError):
        separation_check(X*T, 'product')
