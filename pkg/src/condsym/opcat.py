"""Reduction operators of the fast diffusion and potential fast diffusion
equations, their symmetry groups and the transformations between them.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import sympy as sp
from sympy.core.function import AppliedUndef

from condsym.config import ProbeSettings
from condsym.eqcat import EquivalenceElement, equivalence_group_apply
from condsym.errors import (ClosedFormUnavailableError,
                            DegenerateTransformationError,
                            UnsupportedOperatorError)
from condsym.expr import ExpressionLike, T, X, ZeroReport, as_expression, is_zero
from condsym.jets import EvolutionEquation, ReductionOperator, evolution_adapted

logger = logging.getLogger(__name__)

U, V = sp.symbols('u v')
OMEGA = sp.Symbol('omega')

F_PROFILES = {
    'inv': -2/OMEGA,
    'cot': -2*sp.cot(OMEGA),
    'tanh': -2*sp.tanh(OMEGA),
    'coth': -2*sp.coth(OMEGA),
}

CASE3_PHI = {'t+expx': T + sp.exp(X)}
CASE3_PHI.update({f't*{key}': T*f.subs(OMEGA, X) for key, f in F_PROFILES.items()})

CASE4_CHI = {
    'tan2t*tanhx': sp.tan(2*T)*sp.tanh(X),
    'coth2t*cotx': sp.coth(2*T)*sp.cot(X),
}

CASE5_CHI = {
    'tanh2t*tanhx': sp.tanh(2*T)*sp.tanh(X),
    'tanh2t*cothx': sp.tanh(2*T)*sp.coth(X),
    'coth2t*cothx': sp.coth(2*T)*sp.coth(X),
    'frac1': (sp.exp(2*X)*sp.tanh(2*T) + 1)/(sp.exp(2*X) - sp.tanh(2*T)),
    'frac2': (2 - sp.exp(2*X) - sp.exp(4*T))/(2 + sp.exp(2*X) + sp.exp(4*T)),
}


def _select(table: dict, key, what: str) -> sp.Expr:
    if isinstance(key, str):
        if key not in table:
            raise ValueError(f'Unknown {what} {key!r}. Valid values are {list(table)}')
        return table[key]
    if key is None:
        raise ValueError(f'A {what} is required.')
    return as_expression(key)


def theorem1_operator(case: int, eps: int = 0, f=None, phi=None,
                      chi=None) -> ReductionOperator:
    """Non-Lie reduction operator of v_t = v_xx/v_x with tau = 1.

    Args:
        case (int): family 1 to 5.
        eps (int): 0 or 1, the velocity of case 1.
        f: profile key of `F_PROFILES` or an expression in `omega`
            (cases 1 and 2).
        phi: key of `CASE3_PHI` or an expression in (t, x) (case 3).
        chi: key of `CASE4_CHI`/`CASE5_CHI` or an expression (cases 4, 5).

    Raises:
        ValueError: for an unknown case or selector.
    """
    if case == 1:
        if eps not in (0, 1):
            raise ValueError(f'eps must be 0 or 1, got {eps}.')
        profile = _select(F_PROFILES, f, 'f profile').subs(OMEGA, X + eps*T)
        return ReductionOperator('v', 1, eps, profile)
    if case == 2:
        profile = _select(F_PROFILES, f, 'f profile').subs(OMEGA, X + V)
        return ReductionOperator('v', 1, profile, profile)
    if case == 3:
        phi = _select(CASE3_PHI, phi, 'phi')
        xi = -2/(V + phi)
        return ReductionOperator('v', 1, xi, sp.diff(phi, T) + sp.diff(phi, X)*xi)
    if case == 4:
        chi = _select(CASE4_CHI, chi, 'chi')
        xi = -2*(1 + chi*sp.tan(V))/(sp.tan(V) - chi)
        return ReductionOperator('v', 1, xi,
                                 -(sp.diff(chi, T) + sp.diff(chi, X)*xi)/(1 + chi**2))
    if case == 5:
        chi = _select(CASE5_CHI, chi, 'chi')
        xi = -2*(1 - chi*sp.tanh(V))/(sp.tanh(V) - chi)
        return ReductionOperator('v', 1, xi,
                                 -(sp.diff(chi, T) + sp.diff(chi, X)*xi)/(1 - chi**2))
    raise ValueError(f'Case must be between 1 and 5, got {case}.')


def lie_generators(algebra: str) -> List[ReductionOperator]:
    """Basis of the Lie invariance algebra 'A1' (of u) or 'A2' (of v)."""
    if algebra == 'A1':
        basis = [(1, 0, 0), (0, 1, 0), (T, 0, U), (0, X, -2*U)]
        return [ReductionOperator('u', *c) for c in basis]
    if algebra == 'A2':
        basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (T, 0, V), (0, X, -V)]
        return [ReductionOperator('v', *c) for c in basis]
    raise ValueError(f"Algebra must be 'A1' or 'A2', got {algebra!r}.")


def lie_span(Q: ReductionOperator, algebra: str) -> Optional[Tuple[sp.Expr, ...]]:
    """Constant coordinates of Q in the basis of an algebra, or None."""
    basis = lie_generators(algebra)
    if Q.dep != basis[0].dep:
        return None
    weights = sp.symbols(f'c0:{len(basis)}', cls=sp.Dummy)
    variables = (T, X, Q.symbol)
    equations = []
    for k in range(3):
        difference = sp.expand(sp.cancel(
            Q.coefficients[k] - sum(w*b.coefficients[k] for w, b in zip(weights, basis))))
        if difference == 0:
            continue
        if not difference.is_polynomial(*variables):
            return None
        equations.extend(sp.Poly(difference, *variables).coeffs())
    solutions = sp.linsolve(equations, weights)
    if len(solutions) == 0:
        return None
    return tuple(next(iter(solutions)))


# --- point transformations ---------------------------------------------------

@dataclass(frozen=True)
class PointTransformation:
    """Point transformation (t, x, dep) -> (T, X, DEP).

    Args:
        dep (str): dependent variable.
        components (tuple): (T, X, DEP) as expressions in (t, x, dep).
        inverse (tuple, optional): (t, x, dep) as expressions in the new
            variables, which are written with the same symbols t, x, dep.

    Raises:
        DegenerateTransformationError: if the Jacobian vanishes identically.
    """
    dep: str
    components: Tuple[sp.Expr, sp.Expr, sp.Expr]
    inverse: Optional[Tuple[sp.Expr, sp.Expr, sp.Expr]] = None

    def __post_init__(self):
        object.__setattr__(self, 'components',
                           tuple(as_expression(c) for c in self.components))
        if self.inverse is not None:
            object.__setattr__(self, 'inverse',
                               tuple(as_expression(c) for c in self.inverse))
        jacobian = self.jacobian()
        if jacobian == 0 or (not jacobian.has(AppliedUndef) and is_zero(jacobian).is_zero):
            raise DegenerateTransformationError(
                f'The Jacobian of {self.components} vanishes.')

    @property
    def variables(self) -> Tuple[sp.Symbol, sp.Symbol, sp.Symbol]:
        return T, X, sp.Symbol(self.dep)

    def jacobian(self) -> sp.Expr:
        return sp.Matrix(self.components).jacobian(self.variables).det()

    def inverse_map(self) -> Tuple[sp.Expr, sp.Expr, sp.Expr]:
        """Inverse components; solved symbolically if none were declared.

        Raises:
            ClosedFormUnavailableError: if no unique closed-form inverse is found.
        """
        if self.inverse is not None:
            return self.inverse
        targets = sp.symbols('t1 x1 w1', cls=sp.Dummy)
        equations = [c - d for c, d in zip(self.components, targets)]
        try:
            solutions = sp.solve(equations, self.variables, dict=True)
        except NotImplementedError as err:
            raise ClosedFormUnavailableError(str(err)) from err
        if len(solutions) != 1:
            raise ClosedFormUnavailableError(
                f'Found {len(solutions)} inverses of {self.components}.')
        back = dict(zip(targets, self.variables))
        return tuple(solutions[0][s].subs(back, simultaneous=True)
                     for s in self.variables)

    def compose(self, first: 'PointTransformation') -> 'PointTransformation':
        """The transformation `self` after `first`."""
        if first.dep != self.dep:
            raise ValueError('Transformations act on different variables.')
        forward = dict(zip(self.variables, first.components))
        components = tuple(c.subs(forward, simultaneous=True) for c in self.components)
        inverse = None
        if self.inverse is not None and first.inverse is not None:
            backward = dict(zip(self.variables, self.inverse))
            inverse = tuple(c.subs(backward, simultaneous=True) for c in first.inverse)
        return PointTransformation(self.dep, components, inverse)


@dataclass(frozen=True)
class GroupElement:
    """Element of the point symmetry group G1 (of u) or G2 (of v).

    G1: T = eps3*t + eps1, X = eps4*x + eps2, U = eps3/eps4^2 * u.
    G2: T = eps3*t + eps1, X = eps4*x + eps2, V = eps3/eps4 * v + v_shift,
    or with `hodograph` set, X = eps3/eps4 * v + v_shift, V = eps4*x + eps2.
    Negative eps3, eps4 give the sign changes.

    Raises:
        DegenerateTransformationError: if eps3*eps4 == 0.
    """
    group: str = 'G2'
    eps1: sp.Expr = sp.Integer(0)
    eps2: sp.Expr = sp.Integer(0)
    eps3: sp.Expr = sp.Integer(1)
    eps4: sp.Expr = sp.Integer(1)
    v_shift: sp.Expr = sp.Integer(0)
    hodograph: bool = False

    def __post_init__(self):
        if self.group not in ('G1', 'G2'):
            raise ValueError(f"Group must be 'G1' or 'G2', got {self.group!r}.")
        for name in ('eps1', 'eps2', 'eps3', 'eps4', 'v_shift'):
            object.__setattr__(self, name, as_expression(getattr(self, name)))
        if self.eps3*self.eps4 == 0:
            raise DegenerateTransformationError('eps3*eps4 must not vanish.')
        if self.group == 'G1' and (self.hodograph or self.v_shift != 0):
            raise ValueError('Hodograph and v-shifts belong to G2.')

    @property
    def dep(self) -> str:
        return 'u' if self.group == 'G1' else 'v'

    def point_transformation(self) -> PointTransformation:
        e1, e2, e3, e4, s = self.eps1, self.eps2, self.eps3, self.eps4, self.v_shift
        t_new, t_old = e3*T + e1, (T - e1)/e3
        if self.group == 'G1':
            return PointTransformation('u', (t_new, e4*X + e2, e3/e4**2*U),
                                       (t_old, (X - e2)/e4, e4**2*U/e3))
        if not self.hodograph:
            return PointTransformation('v', (t_new, e4*X + e2, e3/e4*V + s),
                                       (t_old, (X - e2)/e4, e4*(V - s)/e3))
        return PointTransformation('v', (t_new, e3/e4*V + s, e4*X + e2),
                                   (t_old, (V - e2)/e4, e4*(X - s)/e3))


Transformation = Union[PointTransformation, GroupElement, EquivalenceElement]


def as_point_transformation(g: Transformation) -> PointTransformation:
    if isinstance(g, PointTransformation):
        return g
    if isinstance(g, GroupElement):
        return g.point_transformation()
    if isinstance(g, EquivalenceElement):
        return PointTransformation('v', g.components(), g.inverse_components())
    raise TypeError(f'Not a transformation: {g!r}')


def discrete_generators(group: str) -> List[GroupElement]:
    """Involutions generating G1 or G2 together with the Lie groups."""
    if group == 'G1':
        return [GroupElement('G1', eps3=-1), GroupElement('G1', eps4=-1)]
    if group == 'G2':
        return [GroupElement('G2', eps3=-1), GroupElement('G2', eps4=-1),
                GroupElement('G2', hodograph=True)]
    raise ValueError(f"Group must be 'G1' or 'G2', got {group!r}.")


def push_forward(g: Transformation, Q: ReductionOperator) -> ReductionOperator:
    """Image of an operator under a point transformation.

    The new coefficients are Q applied to (T, X, DEP), written in the new
    variables through the inverse map.

    Raises:
        ClosedFormUnavailableError: if the inverse is not available.
    """
    transformation = as_point_transformation(g)
    if transformation.dep != Q.dep:
        raise ValueError(f'Transformation acts on {transformation.dep}, '
                         f'operator on {Q.dep}.')
    back = dict(zip(transformation.variables, transformation.inverse_map()))
    coefficients = [Q.apply(c).subs(back, simultaneous=True)
                    for c in transformation.components]
    return ReductionOperator(Q.dep, *coefficients)


# --- equivalence of operators ---------------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    """Result of comparing two operators up to a nonvanishing multiplier.

    `multiplier` is lambda with Q1 = lambda*Q2 when the operators are
    equivalent.
    """
    equivalent: bool
    minors: Tuple[ZeroReport, ...]
    multiplier: Optional[sp.Expr] = None

    def __bool__(self):
        return self.equivalent


def operators_equivalent(Q1: ReductionOperator, Q2: ReductionOperator,
                         settings: Optional[ProbeSettings] = None) -> EquivalenceReport:
    """Proportionality test through the 2x2 minors of the coefficient matrix."""
    if Q1.dep != Q2.dep:
        raise ValueError(f'Operators act on {Q1.dep} and {Q2.dep}.')
    a, b = Q1.coefficients, Q2.coefficients
    minors = tuple(is_zero(a[i]*b[j] - a[j]*b[i], settings)
                   for i, j in ((0, 1), (0, 2), (1, 2)))
    if not all(m.is_zero for m in minors):
        return EquivalenceReport(False, minors)
    multiplier = None
    for ai, bi in zip(a, b):
        if bi != 0 and not is_zero(bi, settings).is_zero:
            multiplier = sp.cancel(ai/bi)
            break
    equivalent = multiplier is not None and not is_zero(multiplier, settings).is_zero
    return EquivalenceReport(equivalent, minors, multiplier)


def operators_equivalent_mod_group(g: Transformation, Q1: ReductionOperator,
                                   Q2: ReductionOperator,
                                   settings: Optional[ProbeSettings] = None) -> EquivalenceReport:
    """Whether g maps Q1 to an operator equivalent to Q2."""
    return operators_equivalent(push_forward(g, Q1), Q2, settings)


def group_grid(values: Sequence = (-2, -1, sp.Rational(-1, 2), sp.Rational(1, 2), 1, 2),
               translations: Optional[Sequence] = None,
               hodograph: Sequence[bool] = (False, True)) -> Iterator[GroupElement]:
    """G2 elements over a parameter grid.

    Args:
        values: values of eps3 and eps4.
        translations: values of eps1 and eps2; defaults to `values`.
        hodograph: hodograph flags to include.
    """
    translations = values if translations is None else translations
    for e1, e2, e3, e4, flag in itertools.product(translations, translations,
                                                  values, values, hodograph):
        yield GroupElement('G2', e1, e2, e3, e4, hodograph=flag)


def search_group_equivalence(Q1: ReductionOperator, Q2: ReductionOperator,
                             grid: Optional[Iterable[GroupElement]] = None,
                             settings: Optional[ProbeSettings] = None) -> Optional[GroupElement]:
    """First grid element mapping Q1 to an operator equivalent to Q2.

    Returns None if no element of the grid does; that is a sampled
    falsification, not a proof of inequivalence.
    """
    grid = group_grid() if grid is None else grid
    for count, g in enumerate(grid, start=1):
        if operators_equivalent_mod_group(g, Q1, Q2, settings):
            logger.info('Equivalence found after %d group elements', count)
            return g
    return None


# --- diffusion operators of Gandarias type --------------------------------------

def potential_to_nogo(Q_pot: ReductionOperator,
                      f: ExpressionLike = 'u^(-1)') -> ReductionOperator:
    """d_t + xi d_x + theta d_v  ->  d_x + (-xi*u + theta)/f(u) d_u.

    Raises:
        UnsupportedOperatorError: if xi or theta depends on v, or the
            operator has no d_t part.
    """
    if Q_pot.dep != 'v':
        raise ValueError('Expected an operator of the potential equation.')
    Q_pot = evolution_adapted(Q_pot)
    if Q_pot.tau != 1:
        raise UnsupportedOperatorError(f'{Q_pot} has no d_t part.')
    for c in (Q_pot.xi, Q_pot.eta):
        dv = sp.diff(c, V)
        if dv != 0 and not is_zero(dv).is_zero:
            raise UnsupportedOperatorError(f'Coefficient {c} depends on v.')
    f = as_expression(f)
    return ReductionOperator('u', 0, 1, (-Q_pot.xi*U + Q_pot.eta)/f)


def gandarias_ansatz_operator(eta1: ExpressionLike, eta2: ExpressionLike,
                              f: ExpressionLike = 'u^(-1)') -> ReductionOperator:
    """d_x + (eta1*u + eta2)/f(u) d_u."""
    eta1, eta2, f = (as_expression(e) for e in (eta1, eta2, f))
    return ReductionOperator('u', 0, 1, (eta1*U + eta2)/f)


def pair_image(g: EquivalenceElement, L: EvolutionEquation,
               Q: ReductionOperator) -> Tuple[EvolutionEquation, ReductionOperator]:
    """Image of an (equation, operator) pair under an equivalence group element."""
    return equivalence_group_apply(g, L), push_forward(g, Q)
