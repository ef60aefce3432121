"""Equation families and determining systems.

The diffusion family is u_t = (f(u) u_x)_x and the filtration family is
v_t = f(v_x) v_xx; both are related by the potential system v_x = u,
v_t = f(u) u_x. Determining systems are kept as polynomial residuals in
derivative symbols of the unknown coefficients (`xi_v`, `theta_xx`, ...).
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp
from sympy.core.function import AppliedUndef

from condsym.config import ProbeSettings
from condsym.errors import (DegenerateTransformationError,
                            NonRationalNonlinearityError,
                            ZeroNonlinearityError)
from condsym.expr import (ExpressionLike, T, X, ZeroReport, as_expression,
                          is_zero, jet)
from condsym.jets import (EvolutionEquation, ReductionOperator,
                          conditional_invariance_residual, dependent_jets)

logger = logging.getLogger(__name__)

FAMILIES = {'diffusion': 'u', 'filtration': 'v'}
VARIABLE_ORDER = 'txuv'

U, V = sp.symbols('u v')
V_X, V_XX = jet('v', 0, 1), jet('v', 0, 2)


def _argument(family: str) -> sp.Symbol:
    if family == 'diffusion':
        return U
    if family == 'filtration':
        return V_X
    raise ValueError(f'Unknown equation family {family!r}. '
                     f'Valid families are {list(FAMILIES)}')


def _check_nonlinearity(family: str, f: sp.Expr) -> sp.Symbol:
    arg = _argument(family)
    dep = FAMILIES[family]
    foreign = {T, X} | set(dependent_jets(f, dep)) - {arg}
    if f.free_symbols & foreign:
        raise ValueError(f'Nonlinearity {f} must depend on {arg} only.')
    if f == 0 or (not f.free_symbols - {arg} and is_zero(f).is_zero):
        raise ZeroNonlinearityError(f'Nonlinearity {f} vanishes identically.')
    return arg


def make_equation(family: str, f: ExpressionLike) -> EvolutionEquation:
    """Member of the diffusion or the filtration family.

    Args:
        family (str): 'diffusion' (f in u) or 'filtration' (f in v_x).
        f: the nonlinearity.

    Returns:
        EvolutionEquation: u_t = f u_xx + f' u_x^2 or v_t = f v_xx.

    Raises:
        ZeroNonlinearityError: if f vanishes identically.
        ValueError: for an unknown family or a non-univariate f.
    """
    f = as_expression(f)
    arg = _check_nonlinearity(family, f)
    if family == 'diffusion':
        rhs = f*jet('u', 0, 2) + sp.diff(f, arg)*jet('u', 0, 1)**2
    else:
        rhs = f*V_XX
    return EvolutionEquation(FAMILIES[family], rhs, family, nonlinearity=f)


@lru_cache(maxsize=None)
def fast_diffusion() -> EvolutionEquation:
    """u_t = (u^-1 u_x)_x."""
    return make_equation('diffusion', 1/U)


@lru_cache(maxsize=None)
def potential_fast_diffusion() -> EvolutionEquation:
    """v_t = v_xx / v_x."""
    return make_equation('filtration', 1/V_X)


def power_diffusion(alpha: ExpressionLike) -> EvolutionEquation:
    """u_t = (u^-alpha u_x)_x."""
    return make_equation('diffusion', U**(-as_expression(alpha)))


def fujita_nonlinearity(a: ExpressionLike, b: ExpressionLike,
                        c: ExpressionLike) -> sp.Expr:
    """f = 1/(a v_x^2 + b v_x + c)."""
    a, b, c = (as_expression(k) for k in (a, b, c))
    return 1/(a*V_X**2 + b*V_X + c)


FUJITA_REPRESENTATIVES = {
    'linear': (0, 0, 1),
    'potential-fast-diffusion': (0, 1, 0),
    'arctan': (1, 0, 1),
}


def bluman_yan() -> EvolutionEquation:
    """v_t = v_xx/(v_x^2 + v_x)."""
    return make_equation('filtration', fujita_nonlinearity(1, 1, 0))


# --- equivalence group of the filtration class ---------------------------

@dataclass(frozen=True)
class EquivalenceElement:
    """Element of the equivalence group of the filtration class.

    t~ = e1*t + e2, x~ = a1*x + a2*v + a3, v~ = b1*x + b2*v + b3 and
    f~ = (a1 + a2*v_x)^2 f / e1.

    Raises:
        DegenerateTransformationError: if e1*(a1*b2 - a2*b1) == 0.
    """
    e1: sp.Expr = sp.Integer(1)
    e2: sp.Expr = sp.Integer(0)
    a1: sp.Expr = sp.Integer(1)
    a2: sp.Expr = sp.Integer(0)
    a3: sp.Expr = sp.Integer(0)
    b1: sp.Expr = sp.Integer(0)
    b2: sp.Expr = sp.Integer(1)
    b3: sp.Expr = sp.Integer(0)

    def __post_init__(self):
        for name in ('e1', 'e2', 'a1', 'a2', 'a3', 'b1', 'b2', 'b3'):
            object.__setattr__(self, name, as_expression(getattr(self, name)))
        if self.e1 == 0 or self.determinant == 0:
            raise DegenerateTransformationError(
                'e1*(a1*b2 - a2*b1) must not vanish.')

    @property
    def determinant(self) -> sp.Expr:
        return self.a1*self.b2 - self.a2*self.b1

    def components(self) -> Tuple[sp.Expr, sp.Expr, sp.Expr]:
        """(t~, x~, v~) as expressions in (t, x, v)."""
        return (self.e1*T + self.e2,
                self.a1*X + self.a2*V + self.a3,
                self.b1*X + self.b2*V + self.b3)

    def inverse_components(self) -> Tuple[sp.Expr, sp.Expr, sp.Expr]:
        """(t, x, v) as expressions in the new variables, written (t, x, v)."""
        det = self.determinant
        xs, vs = X - self.a3, V - self.b3
        return ((T - self.e2)/self.e1,
                (self.b2*xs - self.a2*vs)/det,
                (-self.b1*xs + self.a1*vs)/det)

    def compose(self, first: 'EquivalenceElement') -> 'EquivalenceElement':
        """The element `self` after `first`."""
        return EquivalenceElement(
            e1=self.e1*first.e1, e2=self.e1*first.e2 + self.e2,
            a1=self.a1*first.a1 + self.a2*first.b1,
            a2=self.a1*first.a2 + self.a2*first.b2,
            a3=self.a1*first.a3 + self.a2*first.b3 + self.a3,
            b1=self.b1*first.a1 + self.b2*first.b1,
            b2=self.b1*first.a2 + self.b2*first.b2,
            b3=self.b1*first.a3 + self.b2*first.b3 + self.b3)


HODOGRAPH_ELEMENT = EquivalenceElement(a1=0, a2=1, b1=1, b2=0)
BLUMAN_YAN_REDUCTION = EquivalenceElement(a1=1, a2=1, b1=0, b2=1)


def bluman_yan_reduction() -> EquivalenceElement:
    """t~ = t, x~ = x + v, v~ = v; maps the Bluman-Yan equation to v_t = v_xx/v_x."""
    return BLUMAN_YAN_REDUCTION


def equivalence_group_apply(g: EquivalenceElement,
                            equation: EvolutionEquation) -> EvolutionEquation:
    """Image of a filtration equation under an equivalence group element.

    The new nonlinearity is written in the new v_x: with w = v~_x~ the
    old slope is p = (b1 - a1*w)/(a2*w - b2).
    """
    if equation.family != 'filtration':
        raise ValueError('The equivalence group acts on the filtration family.')
    f = equation.nonlinearity
    w = sp.Dummy('w')
    p = (g.b1 - g.a1*w)/(g.a2*w - g.b2)
    transformed = ((g.a1 + g.a2*V_X)**2*f/g.e1).subs(V_X, p)
    transformed = sp.factor(sp.cancel(transformed.subs(w, V_X)))
    return make_equation('filtration', transformed)


# --- derivative symbols ------------------------------------------------------

def derivative_symbol(name: str, counts: Mapping[str, int]) -> sp.Symbol:
    """Symbol of a partial derivative of an unknown, e.g. `xi_xv`."""
    suffix = ''.join(var*int(counts.get(var, 0)) for var in VARIABLE_ORDER)
    return sp.Symbol(f'{name}_{suffix}' if suffix else name)


def symbolize(e: sp.Expr, names: Sequence[str]) -> sp.Expr:
    """Replace derivatives of the named unknown functions by symbols."""
    mapping = {}
    for d in e.atoms(sp.Derivative):
        if isinstance(d.expr, AppliedUndef) and d.expr.func.__name__ in names:
            counts = {str(var): int(n) for var, n in d.variable_count}
            mapping[d] = derivative_symbol(d.expr.func.__name__, counts)
    e = e.xreplace(mapping)
    mapping = {a: sp.Symbol(a.func.__name__) for a in e.atoms(AppliedUndef)
               if a.func.__name__ in names}
    return e.xreplace(mapping)


def _decode(symbol: sp.Symbol, unknowns: Mapping[str, Tuple[str, ...]]):
    name, _, suffix = symbol.name.partition('_')
    if name not in unknowns or set(suffix) - set(unknowns[name]):
        return None
    return name, Counter(suffix)


def _split(numerator: sp.Expr, variables: Sequence[sp.Symbol]) -> List[sp.Expr]:
    numerator = sp.expand(numerator)
    if numerator == 0:
        return []
    coefficients = sp.Poly(numerator, *variables).coeffs()
    return [sp.expand(c) for c in coefficients if sp.expand(c) != 0]


@dataclass(frozen=True)
class DeterminingSystem:
    """Residuals that vanish for the coefficients of reduction operators.

    Args:
        unknowns (dict): unknown name to its argument names, e.g.
            {'xi': ('t', 'x', 'v')}.
        residuals (tuple): polynomial expressions in derivative symbols.
    """
    unknowns: Dict[str, Tuple[str, ...]]
    residuals: Tuple[sp.Expr, ...]

    def __len__(self):
        return len(self.residuals)

    def substitute(self, values: Mapping[str, ExpressionLike]) -> List[sp.Expr]:
        """Residuals with each unknown replaced by an expression.

        Values may contain undefined functions such as `-eta1(t, x)`; their
        derivatives are turned back into symbols.
        """
        values = {name: as_expression(value) for name, value in values.items()}
        new_names = {a.func.__name__ for value in values.values()
                     for a in value.atoms(AppliedUndef)}
        results = []
        for residual in self.residuals:
            mapping = {}
            for symbol in residual.free_symbols:
                decoded = _decode(symbol, self.unknowns)
                if decoded is None or decoded[0] not in values:
                    continue
                name, counts = decoded
                derivative = values[name]
                for var, n in counts.items():
                    derivative = sp.diff(derivative, sp.Symbol(var), n)
                mapping[symbol] = derivative
            results.append(symbolize(residual.xreplace(mapping), new_names))
        return results

    def is_satisfied_by(self, values: Mapping[str, ExpressionLike],
                        settings: Optional[ProbeSettings] = None) -> List[ZeroReport]:
        return [is_zero(r, settings) for r in self.substitute(values)]


def _in_span(target: sp.Expr, basis: Sequence[sp.Expr]) -> bool:
    coefficients = sp.symbols(f'c0:{len(basis)}', cls=sp.Dummy)
    combination = sp.expand(target - sum(c*b for c, b in zip(coefficients, basis)))
    if combination == 0:
        return True
    generators = sorted(combination.free_symbols - set(coefficients), key=str)
    equations = sp.Poly(combination, *generators).coeffs() if generators else [combination]
    return len(sp.linsolve(equations, coefficients)) > 0


def systems_equivalent(first: Sequence[sp.Expr], second: Sequence[sp.Expr]) -> bool:
    """Each residual is a constant-coefficient combination of the other side's."""
    first = [sp.expand(r) for r in first]
    second = [sp.expand(r) for r in second]
    return (all(_in_span(r, second) for r in first)
            and all(_in_span(r, first) for r in second))


def derive_determining_tau1(f: ExpressionLike,
                            arguments: Tuple[str, ...] = ('t', 'x', 'v')) -> DeterminingSystem:
    """Determining system of Q = d_t + xi d_x + theta d_v for v_t = f(v_x) v_xx.

    The criterion residual is computed with xi, theta opaque, its
    denominator cleared and the numerator split with respect to v_xx and
    v_x.

    Args:
        f: nonlinearity, rational in v_x.
        arguments (tuple): arguments of xi and theta; ('t', 'x') gives the
            system of v-independent coefficients.

    Raises:
        NonRationalNonlinearityError: if f is not rational in v_x.
        ZeroNonlinearityError: if f vanishes identically.
    """
    f = as_expression(f)
    if not f.is_rational_function(V_X):
        raise NonRationalNonlinearityError(f'{f} is not rational in v_x.')
    equation = make_equation('filtration', f)
    args = [sp.Symbol(a) for a in arguments]
    xi, theta = sp.Function('xi')(*args), sp.Function('theta')(*args)
    Q = ReductionOperator('v', 1, xi, theta)
    residual = conditional_invariance_residual(equation, Q)
    residual = symbolize(residual, ('xi', 'theta'))
    numerator, _ = sp.fraction(sp.together(residual))
    residuals = _split(numerator, [V_XX, V_X])
    logger.debug('Determining system of %s: %d residuals', f, len(residuals))
    unknowns = {'xi': tuple(arguments), 'theta': tuple(arguments)}
    return DeterminingSystem(unknowns, tuple(residuals))


def _s(name: str) -> sp.Symbol:
    return sp.Symbol(name)


def potential_fast_diffusion_system() -> DeterminingSystem:
    """Reference form of the tau = 1 system for v_t = v_xx/v_x."""
    xi, theta = _s('xi'), _s('theta')
    residuals = (
        _s('xi_vv') - xi*_s('xi_v'),
        _s('xi_t') - (2*_s('xi_xv') - _s('theta_vv') - _s('theta_v')*xi
                      + theta*_s('xi_v') - xi*_s('xi_x')),
        _s('theta_xx') - theta*_s('theta_x'),
        _s('theta_t') - (2*_s('theta_xv') - _s('xi_xx') - _s('xi_x')*theta
                         + xi*_s('theta_x') - theta*_s('theta_v')),
    )
    return DeterminingSystem({'xi': ('t', 'x', 'v'), 'theta': ('t', 'x', 'v')},
                             residuals)


def fast_diffusion_eta_system() -> DeterminingSystem:
    """System on eta1, eta2 of d_x + (eta1 u + eta2) u d_u for u_t = (u_x/u)_x."""
    eta1, eta2 = _s('eta1'), _s('eta2')
    residuals = (
        _s('eta2_xx') - eta2*_s('eta2_x'),
        _s('eta2_t') - (eta2*_s('eta1_x') - eta1*_s('eta2_x') + _s('eta1_xx')),
        _s('eta1_t') - eta1*_s('eta1_x'),
    )
    return DeterminingSystem({'eta1': ('t', 'x'), 'eta2': ('t', 'x')}, residuals)


def nogo_theta_residual(theta: ExpressionLike) -> sp.Expr:
    """Left minus right side of the single tau = 0 determining equation
    theta*theta_t = theta_xx + 2 theta theta_xv + theta^2 theta_vv
    - theta_x^2/theta - 2 theta_x theta_v - theta theta_v^2.

    Raises:
        ValueError: if theta vanishes identically.
    """
    theta = as_expression(theta)
    if theta == 0 or is_zero(theta).is_zero:
        raise ValueError('theta must not vanish identically.')
    d = sp.diff
    return (theta*d(theta, T)
            - (d(theta, X, 2) + 2*theta*d(theta, X, V) + theta**2*d(theta, V, 2)
               - d(theta, X)**2/theta - 2*d(theta, X)*d(theta, V)
               - theta*d(theta, V)**2))


def nogo_eta_system(f: ExpressionLike, eta1: ExpressionLike,
                    eta2: ExpressionLike) -> List[sp.Expr]:
    """Residuals for d_x + (eta1 u + eta2)/f(u) d_u on u_t = (f u_x)_x.

    For f = 1/u these are the three equations of `fast_diffusion_eta_system`;
    otherwise the single determining equation, with its denominator
    cleared, is split with respect to u.
    """
    f = as_expression(f)
    eta1, eta2 = as_expression(eta1), as_expression(eta2)
    if sp.simplify(f - 1/U) == 0:
        return fast_diffusion_eta_system().substitute({'eta1': eta1, 'eta2': eta2})
    _check_nonlinearity('diffusion', f)
    d = sp.diff
    equation = ((eta1*U + eta2)*(d(eta1, X)*U + d(eta2, X))*d(f, U)
                - ((d(eta1, T) - 2*eta1*d(eta1, X))*U
                   + d(eta2, T) - 2*eta2*d(eta1, X))*f
                + (d(eta1, X, 2)*U + d(eta2, X, 2))*f**2)
    numerator, _ = sp.fraction(sp.together(equation))
    try:
        return _split(numerator, [U])
    except sp.PolynomialError:
        return [numerator]


def xi_family_member(kind: str, mu: ExpressionLike = 1,
                     phi: ExpressionLike = 'phi') -> sp.Expr:
    """Solutions of xi_vv = xi*xi_v with mu, phi independent of v.

    Args:
        kind (str): one of 'phi', 'inv', 'cot', 'tanh', 'coth'.
    """
    mu, phi = as_expression(mu), as_expression(phi)
    w = V + phi
    members = {
        'phi': phi,
        'inv': -2/w,
        'cot': -2*mu*sp.cot(mu*w),
        'tanh': -2*mu*sp.tanh(mu*w),
        'coth': -2*mu*sp.coth(mu*w),
    }
    if kind not in members:
        raise ValueError(f'Unknown xi-family member {kind!r}. '
                         f'Valid kinds are {list(members)}')
    return members[kind]
