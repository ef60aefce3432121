"""Reduction of an evolution equation to an ODE along a reduction operator.

The ansatz zeta(t, x, u) = phi(omega(t, x, u)) is differentiated
implicitly; the derivatives of u are solved for in terms of the
derivatives of phi, and (t, x, u) are then eliminated in favor of omega and
phi. The invariants are supplied, not computed.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import sympy as sp

from condsym.config import DEFAULT_SETTINGS, ProbeSettings
from condsym.errors import ReductionError
from condsym.expr import (T, X, ExpressionLike, ZeroReport, as_expression,
                          is_zero, jet)
from condsym.jets import EvolutionEquation, ReductionOperator, is_reduction_operator

logger = logging.getLogger(__name__)

OMEGA = sp.Symbol('omega')
PHI = sp.symbols('phi phi_w phi_ww phi_www')
LEFTOVER_PROBES = (sp.Rational(1, 3), sp.Rational(2, 5), sp.Rational(5, 7))
SEPARATION_MODES = ('additive', 'multiplicative')


@dataclass(frozen=True)
class InvariantPair:
    """Invariants zeta, omega of an operator in (t, x, dep).

    Args:
        dep (str): dependent variable, 'u' or 'v'.
        zeta: invariant the ansatz solves for, zeta = phi(omega).
        omega: invariant independent variable of the reduced ODE.
    """
    dep: str
    zeta: sp.Expr
    omega: sp.Expr

    def __post_init__(self):
        object.__setattr__(self, 'zeta', as_expression(self.zeta))
        object.__setattr__(self, 'omega', as_expression(self.omega))

    @property
    def symbol(self) -> sp.Symbol:
        return sp.Symbol(self.dep)


@dataclass(frozen=True)
class InvariantReport:
    zeta_invariant: ZeroReport
    omega_invariant: ZeroReport
    independent: bool
    zeta_depends_on_dep: bool

    @property
    def valid(self) -> bool:
        return (self.zeta_invariant.is_zero and self.omega_invariant.is_zero
                and self.independent and self.zeta_depends_on_dep)

    def __bool__(self):
        return self.valid


def verify_invariants(Q: ReductionOperator, inv: InvariantPair,
                      settings: Optional[ProbeSettings] = None) -> InvariantReport:
    """Check Q zeta = Q omega = 0, independence and zeta_dep != 0."""
    if Q.dep != inv.dep:
        raise ValueError(f'Operator acts on {Q.dep}, invariants are in {inv.dep}.')
    variables = (T, X, inv.symbol)
    minors = [sp.diff(inv.zeta, a)*sp.diff(inv.omega, b)
              - sp.diff(inv.zeta, b)*sp.diff(inv.omega, a)
              for i, a in enumerate(variables) for b in variables[i + 1:]]
    independent = any(not is_zero(m, settings).is_zero for m in minors)
    zeta_dep = not is_zero(sp.diff(inv.zeta, inv.symbol), settings).is_zero
    return InvariantReport(is_zero(Q.apply(inv.zeta), settings),
                           is_zero(Q.apply(inv.omega), settings),
                           independent, zeta_dep)


@dataclass(frozen=True)
class ReducedODE:
    """ODE residual in omega, phi, phi_w and phi_ww."""
    residual: sp.Expr
    omega: sp.Symbol = OMEGA
    phi: Tuple[sp.Symbol, ...] = PHI

    @property
    def order(self) -> int:
        return max((k for k, p in enumerate(self.phi) if p in self.residual.free_symbols),
                   default=0)

    def substituted(self, profile: ExpressionLike) -> sp.Expr:
        """Residual with phi replaced by a function of omega."""
        profile = as_expression(profile)
        values = {p: sp.diff(profile, self.omega, k) for k, p in enumerate(self.phi)}
        return self.residual.subs(values, simultaneous=True)

    def is_solved_by(self, profile: ExpressionLike,
                     settings: Optional[ProbeSettings] = None) -> ZeroReport:
        return is_zero(self.substituted(profile), settings)

    def __str__(self):
        return f'{self.residual} = 0'


def _solve_unique(e: sp.Expr, candidates: Sequence[sp.Symbol]) -> Tuple[sp.Symbol, sp.Expr]:
    for var in candidates:
        if var not in e.free_symbols:
            continue
        try:
            roots = sp.solve(e, var)
        except (NotImplementedError, ValueError, TypeError):
            continue
        if len(roots) == 1:
            return var, roots[0]
    raise ReductionError(f'Cannot solve {e} = 0 for one of {list(candidates)}.')


def _implicit_jets(inv: InvariantPair) -> dict:
    """dep_t, dep_x and dep_xx in (t, x, dep) and the phi derivatives."""
    u, zeta, omega = inv.symbol, inv.zeta, inv.omega

    def first(var):
        return ((PHI[1]*sp.diff(omega, var) - sp.diff(zeta, var))
                / (sp.diff(zeta, u) - PHI[1]*sp.diff(omega, u)))

    def total(e, var, u_var):
        d_omega = sp.diff(omega, var) + sp.diff(omega, u)*u_var
        result = sp.diff(e, var) + sp.diff(e, u)*u_var
        for k in range(len(PHI) - 1):
            result += sp.diff(e, PHI[k])*PHI[k + 1]*d_omega
        return result

    u_t, u_x = first(T), first(X)
    return {jet(inv.dep, 1, 0): u_t, jet(inv.dep, 0, 1): u_x,
            jet(inv.dep, 0, 2): total(u_x, X, u_x)}


def _drop_leftover(e: sp.Expr, leftover: sp.Symbol,
                   settings: ProbeSettings) -> sp.Expr:
    """An expression in (omega, phi...) with the zero set of e.

    The denominator is dropped first, then the factors of the numerator
    that contain `leftover`. If no factor with phi derivatives is left, the
    numerator is evaluated at probe values of `leftover` instead, which is
    valid when it depends on `leftover` through a factor free of phi.
    """
    e, _ = sp.fraction(sp.cancel(sp.together(e)))
    if leftover not in e.free_symbols:
        return e
    try:
        _, factors = sp.factor_list(e)
    except sp.PolynomialError:
        factors = []
    kept = sp.Mul(*(f**k for f, k in factors if leftover not in f.free_symbols))
    if any(p in kept.free_symbols for p in PHI[1:]):
        return kept
    phis = [p for p in PHI if p in e.free_symbols]
    for value in LEFTOVER_PROBES:
        candidate = e.subs(leftover, value)
        if is_zero(candidate, settings).is_zero:
            continue
        ratio = e/candidate
        if all(is_zero(sp.diff(ratio, p), settings).is_zero for p in phis):
            return candidate
        break
    raise ReductionError(f'The reduced equation still depends on {leftover}.')


def reduce(L: EvolutionEquation, Q: ReductionOperator, inv: InvariantPair,
           settings: Optional[ProbeSettings] = None,
           check_operator: bool = True) -> ReducedODE:
    """Reduce L with the ansatz zeta = phi(omega) built from Q.

    Args:
        L (EvolutionEquation): equation to reduce.
        Q (ReductionOperator): operator the invariants belong to.
        inv (InvariantPair): invariants of Q.
        settings (ProbeSettings, optional): zero-test settings.
        check_operator (bool): also check that Q is a reduction operator of L.

    Returns:
        ReducedODE: residual free of t, x and the dependent variable.

    Raises:
        ReductionError: if the invariants or the operator fail their checks,
            or if the elimination leaves a dependence on t, x or dep.
    """
    settings = settings or DEFAULT_SETTINGS
    if L.dep != inv.dep:
        raise ValueError(f'Equation of {L.dep}, invariants in {inv.dep}.')
    report = verify_invariants(Q, inv, settings)
    if not report:
        raise ReductionError(f'Invalid invariants for {Q}: {report}')
    if check_operator and not is_reduction_operator(L, Q, settings).is_zero:
        raise ReductionError(f'{Q} is not a reduction operator of the equation.')

    residual = (L.lhs_symbol - L.rhs).subs(_implicit_jets(inv), simultaneous=True)
    first_var, first_value = _solve_unique(inv.zeta - PHI[0], (inv.symbol, T, X))
    rest = [s for s in (inv.symbol, T, X) if s != first_var]
    second_var, second_value = _solve_unique(
        inv.omega.subs(first_var, first_value) - OMEGA, rest)
    leftover = next(s for s in rest if s != second_var)
    residual = residual.subs(first_var, first_value).subs(second_var, second_value)
    residual = _drop_leftover(residual, leftover, settings)
    strays = residual.free_symbols - {OMEGA, *PHI}
    if strays:
        raise ReductionError(f'The reduced equation depends on {sorted(map(str, strays))}.')
    logger.info('Reduced along %s to %s = 0', Q, residual)
    return ReducedODE(residual)


def extract_profile(inv: InvariantPair, solution: ExpressionLike,
                    settings: Optional[ProbeSettings] = None) -> sp.Expr:
    """phi(omega) of an invariant solution, zeta = phi(omega) on the solution.

    Args:
        inv (InvariantPair): invariants.
        solution: expression of dep in (t, x), or an `ExactSolution`.

    Raises:
        ReductionError: if the solution is not invariant.
    """
    expression = getattr(solution, 'expression', solution)
    expression = as_expression(expression)
    zeta = inv.zeta.subs(inv.symbol, expression)
    omega = inv.omega.subs(inv.symbol, expression)
    var, value = _solve_unique(omega - OMEGA, (X, T))
    leftover = T if var == X else X
    profile = zeta.subs(var, value)
    if not is_zero(sp.diff(profile, leftover), settings).is_zero:
        raise ReductionError(f'The solution is not invariant: phi depends on {leftover}.')
    return sp.simplify(profile.subs(leftover, LEFTOVER_PROBES[0]))


def f_profile_check(f: ExpressionLike,
                    settings: Optional[ProbeSettings] = None) -> ZeroReport:
    """Zero verdict of f'' - f f' for a profile f(omega)."""
    f = as_expression(f)
    return is_zero(sp.diff(f, OMEGA, 2) - f*sp.diff(f, OMEGA), settings)


def separation_check(v: ExpressionLike, mode: str = 'additive', lam: ExpressionLike = 1,
                     settings: Optional[ProbeSettings] = None) -> ZeroReport:
    """Test v = Y(x + lam t) + Z(x - lam t) or v = A(t) B(x).

    The additive form holds iff v_xx - v_tt/lam^2 = 0, the multiplicative
    one iff v v_tx - v_t v_x = 0 away from the zeros of v.

    Args:
        v: expression in (t, x) or an `ExactSolution`.
        mode (str): 'additive' or 'multiplicative'.
        lam: wave speed of the additive form.
    """
    if mode not in SEPARATION_MODES:
        raise ValueError(f'Unknown separation mode {mode!r}. '
                         f'Valid modes are {list(SEPARATION_MODES)}')
    v = as_expression(getattr(v, 'expression', v))
    if mode == 'additive':
        lam = as_expression(lam)
        return is_zero(sp.diff(v, X, 2) - sp.diff(v, T, 2)/lam**2, settings)
    return is_zero(v*sp.diff(v, T, X) - sp.diff(v, T)*sp.diff(v, X), settings)
