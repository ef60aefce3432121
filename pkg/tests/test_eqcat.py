import pytest
import sympy as sp

from condsym.errors import (DegenerateTransformationError,
                            NonRationalNonlinearityError, ZeroNonlinearityError)
from condsym.eqcat import (BLUMAN_YAN_REDUCTION, HODOGRAPH_ELEMENT, V_X, V_XX,
                           EquivalenceElement, bluman_yan, derive_determining_tau1,
                           equivalence_group_apply, fast_diffusion_eta_system,
                           fujita_nonlinearity, make_equation, nogo_eta_system,
                           nogo_theta_residual, potential_fast_diffusion_system,
                           power_diffusion, systems_equivalent, xi_family_member)
from condsym.expr import T, X, is_zero, jet

U, V = sp.symbols('u v')


def test_fast_diffusion_expanded(fast):
    expected = jet('u', 0, 2)/U - jet('u', 0, 1)**2/U**2
    assert sp.simplify(fast.rhs - expected) == 0


def test_potential_equation(potential):
    assert potential.rhs == V_XX/V_X


def test_bluman_yan_equation():
    assert sp.simplify(bluman_yan().rhs - V_XX/(V_X**2 + V_X)) == 0


def test_zero_nonlinearity():
    with pytest.raises(ZeroNonlinearityError):
        make_equation('diffusion', 0)


def test_unknown_family():
    with pytest.raises(ValueError):
        make_equation('wave', 1)


def test_power_diffusion_contains_fast_diffusion(fast):
    assert sp.simplify(power_diffusion(1).rhs - fast.rhs) == 0


def test_derived_system_matches_reference():
    derived = derive_determining_tau1(1/V_X)
    assert systems_equivalent(derived.residuals,
                              potential_fast_diffusion_system().residuals)


def test_heat_equation_keeps_translations():
    system = derive_determining_tau1(1)
    reports = system.is_satisfied_by({'xi': 1, 'theta': 0})
    assert all(r.is_zero for r in reports)


def test_non_rational_nonlinearity():
    with pytest.raises(NonRationalNonlinearityError):
        derive_determining_tau1(sp.exp(V_X))


def test_v_independent_system_is_eta_system():
    derived = derive_determining_tau1(1/V_X, arguments=('t', 'x'))
    eta1, eta2 = sp.Function('eta1')(T, X), sp.Function('eta2')(T, X)
    substituted = derived.substitute({'xi': -eta1, 'theta': eta2})
    assert systems_equivalent(substituted, fast_diffusion_eta_system().residuals)


def test_reference_system_accepts_case1_operator():
    system = potential_fast_diffusion_system()
    reports = system.is_satisfied_by({'xi': 0, 'theta': -2/X})
    assert all(r.is_zero for r in reports)


@pytest.mark.parametrize('theta, vanishes', [(sp.exp(X), True), (1, True), (T, False)])
def test_nogo_theta_residual(theta, vanishes):
    assert is_zero(nogo_theta_residual(theta)).is_zero == vanishes


def test_nogo_eta_system_cot_pair():
    residuals = nogo_eta_system(1/U, 1, -2*sp.cot(X - T))
    assert all(is_zero(r).is_zero for r in residuals)


def test_nogo_eta_system_zero_pair():
    assert all(is_zero(r).is_zero for r in nogo_eta_system(1/U, 0, 0))


def test_nogo_eta_system_rejects_exponential():
    residuals = nogo_eta_system(1/U, 0, sp.exp(X))
    assert not all(is_zero(r).is_zero for r in residuals)


def test_nogo_eta_system_general_nonlinearity():
    residuals = nogo_eta_system(2/U, 1, -4*sp.tanh(X - T))
    assert all(is_zero(r).is_zero for r in residuals)


def test_hodograph_keeps_potential_equation(potential):
    image = equivalence_group_apply(HODOGRAPH_ELEMENT, potential)
    assert sp.simplify(image.rhs - V_XX/V_X) == 0


def test_bluman_yan_reduction():
    image = equivalence_group_apply(BLUMAN_YAN_REDUCTION, bluman_yan())
    assert sp.simplify(image.rhs - V_XX/V_X) == 0


def test_identity_element(potential):
    assert equivalence_group_apply(EquivalenceElement(), potential).rhs == potential.rhs


def test_inverse_components_undo_components():
    g = EquivalenceElement(e1=2, e2=1, a1=1, a2=3, a3=0, b1=1, b2=1, b3=2)
    point = dict(zip((T, X, V), g.components()))
    back = [c.subs(point, simultaneous=True) for c in g.inverse_components()]
    assert [sp.simplify(b) for b in back] == [T, X, V]


def test_degenerate_element():
    with pytest.raises(DegenerateTransformationError):
        EquivalenceElement(a1=1, a2=1, b1=1, b2=1)


def test_fujita_arctan_representative():
    assert fujita_nonlinearity(1, 0, 1) == 1/(V_X**2 + 1)


@pytest.mark.parametrize('kind', ['inv', 'cot', 'tanh', 'coth'])
def test_xi_family_solves_first_equation(kind):
    xi = xi_family_member(kind, mu=2, phi=T + X)
    assert is_zero(sp.diff(xi, V, 2) - xi*sp.diff(xi, V)).is_zero


def test_hodograph_is_an_involution():
    assert HODOGRAPH_ELEMENT.compose(HODOGRAPH_ELEMENT) == EquivalenceElement()
