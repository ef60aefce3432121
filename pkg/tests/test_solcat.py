import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings as hsettings, strategies as st

from condsym.catalog.arrow_lib import arrow_lib
from condsym.catalog.solution_lib import build_solution, solution_lib
from condsym.errors import MonotonicityError, UnknownCatalogKeyError
from condsym.expr import T, X, is_zero
from condsym.opcat import GroupElement
from condsym.solcat import (Domain, apply_group, apply_hodograph, check_arrow,
                            domain_sampler, lie_solution, match_two_wave,
                            max_imaginary_part, nonlie_solution, pde_residual,
                            real_tuple_table, restricted, two_wave)

POTENTIAL_KEYS = sorted(k for k in solution_lib if k not in ('lie.8.mu=1', 'lie.3.mu=1'))


@pytest.mark.parametrize('key', ['lie.1.eps=1', 'lie.4.eps=0', 'lie.5', 'nonlie.1p'])
def test_solution_satisfies_equation(fast, settings, key):
    pair = build_solution(key)
    assert pde_residual(pair.u, fast, settings).is_zero
    assert all(r.is_zero for r in pair.check_potential(settings))


@pytest.mark.slow
@pytest.mark.parametrize('key', POTENTIAL_KEYS)
def test_solution_catalog(fast, potential, settings, key):
    pair = build_solution(key)
    assert pde_residual(pair.u, fast, settings).is_zero
    assert pde_residual(pair.v, potential, settings).is_zero
    assert all(r.is_zero for r in pair.check_potential(settings))


@pytest.mark.slow
def test_solution_with_quadrature_potential(fast, settings):
    pair = lie_solution(3, mu=1)
    assert pde_residual(pair.u, fast, settings).is_zero


@pytest.mark.slow
def test_implicit_profile_solution(fast, settings):
    pair = lie_solution(8)
    assert pair.v is None
    assert pde_residual(pair.u, fast, settings).is_zero


def test_nonlie_prime_spelling():
    assert nonlie_solution("2'").label == 'nonlie.2p'


@pytest.mark.parametrize('args', [dict(index=9), dict(index=1, eps=2)])
def test_lie_solution_errors(args):
    with pytest.raises(ValueError):
        lie_solution(**args)


def test_unknown_solution_key():
    with pytest.raises(UnknownCatalogKeyError):
        build_solution('lie.42')


def test_residual_of_wrong_function(fast, settings):
    pair = build_solution('lie.5')
    wrong = pair.u.__class__('u', T*sp.cos(X), pair.u.domain, 'wrong')
    report = pde_residual(wrong, fast, settings)
    assert not report.is_zero
    assert report.max_abs > 0


@hsettings(max_examples=10, deadline=None)
@given(alpha=st.integers(1, 3), beta=st.integers(1, 3),
       gamma=st.integers(-2, 2), delta=st.integers(-2, 2))
def test_two_wave_closed_form(alpha, beta, gamma, delta):
    s = two_wave(alpha, beta, gamma, delta)
    assert is_zero(s.expression - s.alternatives[0]).is_zero


def test_two_wave_solves_equation(fast, settings):
    assert pde_residual(two_wave(1, 2, 1, 0), fast, settings).is_zero


def test_two_wave_degenerate():
    with pytest.raises(ValueError):
        two_wave(0, 1)


@pytest.mark.parametrize('params', real_tuple_table())
def test_real_two_wave_tuples(params):
    assert max_imaginary_part(two_wave(*params)) <= 1e-12


def test_complex_two_wave_is_not_real():
    assert max_imaginary_part(two_wave(1, sp.I, 1, 0)) > 1e-3


def test_match_two_wave():
    assert match_two_wave((1, 1, 0, 0)) == 'nonlie.1p'
    assert match_two_wave((2, 3, 0, 0)) is None


def test_scaling_keeps_solution_4():
    pair = lie_solution(4, eps=0)
    image = apply_group(GroupElement('G2', eps3=4, eps4=2), pair)
    assert is_zero(image.u.expression - pair.u.expression).is_zero
    assert is_zero(image.v.expression - pair.v.expression).is_zero


def test_translation_image_is_solution(fast, settings):
    image = apply_group(GroupElement('G2', eps2=sp.Rational(1, 10)), lie_solution(5))
    assert is_zero(image.u.expression - 2*T/sp.cos(X + sp.Rational(1, 10))**2).is_zero
    assert pde_residual(image.u, fast, settings).is_zero
    assert all(r.is_zero for r in image.check_potential(settings))


def test_time_translation_of_solution_2():
    image = apply_group(GroupElement('G2', eps1=1), lie_solution(2))
    assert is_zero(image.v.expression - (sp.exp(X) + T + 1)).is_zero


def test_mapped_domain_follows_translation():
    image = apply_group(GroupElement('G2', eps1=1), lie_solution(2))
    t, _ = image.u.domain.sample(np.random.default_rng(0), 50)
    assert np.all((t > -0.8) & (t < 0.5))


def test_hodograph_of_exponential_solution(fast, settings):
    image = apply_hodograph(lie_solution(2))
    assert image.u.expression is not None
    sampler = domain_sampler(image.u.domain)
    assert is_zero(image.u.expression - 1/(X - T), settings, sampler).is_zero
    assert pde_residual(image.u, fast, settings).is_zero


def test_hodograph_is_an_involution(settings):
    pair = lie_solution(2)
    twice = apply_hodograph(apply_hodograph(pair))
    assert twice.u.expression is not None and twice.v.expression is not None
    sampler = domain_sampler(twice.u.domain)
    assert is_zero(twice.u.expression - pair.u.expression, settings, sampler).is_zero
    assert is_zero(twice.v.expression - pair.v.expression, settings, sampler).is_zero


def test_hodograph_requires_monotone_potential():
    with pytest.raises(MonotonicityError):
        apply_hodograph(lie_solution(1, eps=-1))


def test_hodograph_requires_potential():
    with pytest.raises(ValueError):
        apply_hodograph(lie_solution(8))


def test_restricted():
    domain = Domain(conditions=(X - T,), description='x > t')
    pair = restricted(lie_solution(2), domain)
    assert pair.u.domain == domain and pair.v.domain == domain


def test_exponential_arrow():
    report = check_arrow(arrow_lib['arrow.lie.4'])
    assert report
    assert report.samples > 0


@pytest.mark.slow
@pytest.mark.parametrize('key', sorted(arrow_lib))
def test_arrow_catalog(settings, key):
    assert check_arrow(arrow_lib[key], settings).verified
