"""Jet-space calculus for scalar evolution equations in (t, x).

Jet variables are the symbols built by `condsym.expr.jet`: `u`, `u_t`,
`u_x`, `u_tx`, `u_xx`, ... A `ReductionOperator` is the first-order
operator tau*d_t + xi*d_x + eta*d_u whose coefficients depend on
(t, x, u) only.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy as sp
from sympy.core.function import AppliedUndef

from condsym.config import ProbeSettings
from condsym.errors import (DegenerateOperatorError, OrderOverflowError,
                            UnsupportedOperatorError)
from condsym.expr import (ExpressionLike, Sampler, T, X, ZeroReport,
                          as_expression, is_zero, jet, jet_orders)

logger = logging.getLogger(__name__)

ELIMINATION_PASSES = 4


def _vanishes(e: sp.Expr, settings: Optional[ProbeSettings] = None) -> bool:
    """Zero test that treats unknown functions as nonzero."""
    if e == 0:
        return True
    if e.is_number:
        return e.is_zero is True
    if e.has(AppliedUndef, sp.Derivative):
        return False
    return is_zero(e, settings).is_zero


def dependent_jets(e: sp.Expr, dep: str) -> Dict[sp.Symbol, Tuple[int, int]]:
    """Jet variables of `dep` occurring in `e`, with their (alpha, beta)."""
    found = {}
    for symbol in e.free_symbols:
        if symbol.name == dep:
            found[symbol] = (0, 0)
            continue
        orders = jet_orders(symbol)
        if orders is not None and orders[0] == dep:
            found[symbol] = orders[1:]
    return found


def jet_order(e: sp.Expr, dep: str) -> int:
    return max([a + b for a, b in dependent_jets(e, dep).values()], default=0)


@dataclass(frozen=True)
class ReductionOperator:
    """First-order operator tau*d_t + xi*d_x + eta*d_dep.

    Args:
        dep (str): name of the dependent variable ('u' or 'v').
        tau, xi, eta: coefficients, expressions (or text) in t, x, dep.

    Raises:
        ValueError: if a coefficient contains derivatives of `dep`.
        DegenerateOperatorError: if tau, xi and eta all vanish.
    """
    dep: str
    tau: sp.Expr
    xi: sp.Expr
    eta: sp.Expr

    def __post_init__(self):
        for name in ('tau', 'xi', 'eta'):
            value = as_expression(getattr(self, name))
            object.__setattr__(self, name, value)
            orders = dependent_jets(value, self.dep)
            if any(a + b > 0 for a, b in orders.values()):
                raise ValueError(f'Coefficient {name} = {value} depends on '
                                 f'derivatives of {self.dep}.')
        if _vanishes(self.tau) and _vanishes(self.xi) and _vanishes(self.eta):
            raise DegenerateOperatorError('The operator vanishes identically.')

    @classmethod
    def from_strings(cls, dep: str, tau: str, xi: str, eta: str) -> 'ReductionOperator':
        return cls(dep, as_expression(tau), as_expression(xi), as_expression(eta))

    @property
    def symbol(self) -> sp.Symbol:
        return sp.Symbol(self.dep)

    @property
    def coefficients(self) -> Tuple[sp.Expr, sp.Expr, sp.Expr]:
        return self.tau, self.xi, self.eta

    def scaled(self, factor: ExpressionLike) -> 'ReductionOperator':
        """The operator multiplied by a function of (t, x, dep)."""
        factor = as_expression(factor)
        return ReductionOperator(self.dep, factor*self.tau, factor*self.xi,
                                 factor*self.eta)

    def apply(self, e: ExpressionLike) -> sp.Expr:
        """Action on a function of (t, x, dep)."""
        e = as_expression(e)
        return (self.tau*sp.diff(e, T) + self.xi*sp.diff(e, X)
                + self.eta*sp.diff(e, self.symbol))

    def __str__(self):
        return (f'({self.tau})*d_t + ({self.xi})*d_x '
                f'+ ({self.eta})*d_{self.dep}')


@dataclass(frozen=True)
class EvolutionEquation:
    """Second-order evolution equation dep_t = rhs(t, x, dep, dep_x, dep_xx).

    Args:
        dep (str): dependent variable name.
        rhs: right-hand side.
        family (str): tag such as 'diffusion' or 'filtration'.
        nonlinearity: the function f the equation was built from, if any.
    """
    dep: str
    rhs: sp.Expr
    family: str = ''
    nonlinearity: Optional[sp.Expr] = field(default=None, compare=False)

    def __post_init__(self):
        rhs = as_expression(self.rhs)
        object.__setattr__(self, 'rhs', rhs)
        for symbol, (alpha, beta) in dependent_jets(rhs, self.dep).items():
            if alpha > 0:
                raise ValueError(f'Right-hand side contains {symbol}.')
            if beta > 2:
                raise ValueError(f'Right-hand side has order {beta} > 2.')

    @property
    def lhs_symbol(self) -> sp.Symbol:
        return jet(self.dep, 1, 0)

    def residual(self, solution: ExpressionLike) -> sp.Expr:
        """dep_t - rhs evaluated on a function of (t, x)."""
        solution = as_expression(solution)
        return substitute_solution(self.lhs_symbol - self.rhs, self.dep, solution)

    def __str__(self):
        return f'{self.lhs_symbol} = {self.rhs}'


@dataclass(frozen=True)
class ProlongedOperator:
    """Prolongation of a ReductionOperator.

    `coefficients[(alpha, beta)]` is the coefficient of d/d(dep_{alpha, beta});
    the (0, 0) entry is eta of the base operator.
    """
    base: ReductionOperator
    order: int
    coefficients: Dict[Tuple[int, int], sp.Expr]

    def apply(self, e: ExpressionLike) -> sp.Expr:
        e = as_expression(e)
        result = self.base.tau*sp.diff(e, T) + self.base.xi*sp.diff(e, X)
        for (alpha, beta), coefficient in self.coefficients.items():
            result += coefficient*sp.diff(e, jet(self.base.dep, alpha, beta))
        return result


def substitute_solution(e: ExpressionLike, dep: str, solution: ExpressionLike) -> sp.Expr:
    """Replace every jet variable of `dep` by the derivative of `solution`."""
    e = as_expression(e)
    solution = as_expression(solution)
    mapping = {}
    for symbol, (alpha, beta) in dependent_jets(e, dep).items():
        derivative = solution
        if alpha > 0:
            derivative = sp.diff(derivative, T, alpha)
        if beta > 0:
            derivative = sp.diff(derivative, X, beta)
        mapping[symbol] = derivative
    return e.subs(mapping, simultaneous=True)


def total_derivative(e: ExpressionLike, direction: str, dep: str,
                     max_order: int) -> sp.Expr:
    """Total derivative D_t or D_x.

    Args:
        e: expression in t, x and the jet variables of `dep`.
        direction (str): 't' or 'x'.
        dep (str): dependent variable name.
        max_order (int): highest jet order the result may contain.

    Raises:
        OrderOverflowError: if the result needs jets beyond `max_order`.
    """
    if direction not in ('t', 'x'):
        raise ValueError(f"Direction must be 't' or 'x', got {direction!r}.")
    e = as_expression(e)
    result = sp.diff(e, T if direction == 't' else X)
    for symbol, (alpha, beta) in dependent_jets(e, dep).items():
        if direction == 't':
            alpha += 1
        else:
            beta += 1
        if alpha + beta > max_order:
            raise OrderOverflowError(
                f'D_{direction} of {symbol} exceeds order {max_order}.')
        result += sp.diff(e, symbol)*jet(dep, alpha, beta)
    return result


def characteristic(Q: ReductionOperator) -> sp.Expr:
    """Q[u] = eta - tau*u_t - xi*u_x."""
    return Q.eta - Q.tau*jet(Q.dep, 1, 0) - Q.xi*jet(Q.dep, 0, 1)


def prolong(Q: ReductionOperator, r: int) -> ProlongedOperator:
    """r-th prolongation, r in {1, 2}.

    eta^{alpha beta} = D_t^alpha D_x^beta Q[u] + tau*u_{alpha+1, beta}
    + xi*u_{alpha, beta+1}.
    """
    if r not in (1, 2):
        raise ValueError(f'Prolongation order must be 1 or 2, got {r}.')
    q = characteristic(Q)
    coefficients = {(0, 0): Q.eta}
    for alpha in range(r + 1):
        for beta in range(r + 1 - alpha):
            if alpha + beta == 0:
                continue
            derivative = q
            for _ in range(alpha):
                derivative = total_derivative(derivative, 't', Q.dep, r + 1)
            for _ in range(beta):
                derivative = total_derivative(derivative, 'x', Q.dep, r + 1)
            coefficients[(alpha, beta)] = (derivative
                                           + Q.tau*jet(Q.dep, alpha + 1, beta)
                                           + Q.xi*jet(Q.dep, alpha, beta + 1))
    return ProlongedOperator(Q, r, coefficients)


def evolution_adapted(Q: ReductionOperator,
                      settings: Optional[ProbeSettings] = None) -> ReductionOperator:
    """Scale Q to tau = 1, or to tau = 0 and xi = 1.

    An operator with tau = xi = 0 acts on the dependent variable only and is
    returned unchanged.

    Raises:
        UnsupportedOperatorError: if the scaled tau is not 0 or 1.
    """
    if _vanishes(Q.tau, settings):
        if _vanishes(Q.xi, settings):
            return Q
        if Q.xi == 1:
            return ReductionOperator(Q.dep, 0, 1, Q.eta)
        return ReductionOperator(Q.dep, 0, 1, sp.cancel(Q.eta/Q.xi))
    if Q.tau == 1:
        return Q
    if Q.tau.has(sp.Symbol(Q.dep)) and Q.tau.has(AppliedUndef):
        raise UnsupportedOperatorError(f'Cannot scale {Q} to tau = 1.')
    return ReductionOperator(Q.dep, 1, sp.cancel(Q.xi/Q.tau),
                             sp.cancel(Q.eta/Q.tau))


def _eliminate(e: sp.Expr, rules: List[Tuple[sp.Symbol, sp.Expr]]) -> sp.Expr:
    targets = [symbol for symbol, _ in rules]
    for npass in range(ELIMINATION_PASSES):
        if not e.has(*targets):
            break
        for symbol, replacement in rules:
            e = e.subs(symbol, replacement)
        logger.debug('Elimination pass %d done', npass + 1)
    return e


def _drop_cancelling_jets(e: sp.Expr, dep: str, keep: Tuple[Tuple[int, int], ...]) -> sp.Expr:
    """Set jets whose coefficients cancel identically in the criterion to 0."""
    mapping = {symbol: 0 for symbol, orders in dependent_jets(e, dep).items()
               if sum(orders) > 2 or (orders[0] > 0 and orders not in keep)}
    return e.subs(mapping) if mapping else e


def conditional_invariance_residual(L: EvolutionEquation, Q: ReductionOperator,
                                    settings: Optional[ProbeSettings] = None) -> sp.Expr:
    """Q_(2)(dep_t - F) restricted to the equation and Q[dep] = 0.

    The operator is first scaled to evolution-adapted form. For tau = 1 the
    elimination uses dep_tx = D_x(eta - xi*dep_x), dep_t = F and then solves
    F = eta - xi*dep_x for dep_xx, leaving an expression in
    (t, x, dep, dep_x). For tau = 0, xi = 1 it uses dep_x = eta and its
    consequences, leaving an expression in (t, x, dep).
    For tau = xi = 0 this is the Lie criterion, Q_(2)(dep_t - F) with
    dep_t = F and no constraint from Q[dep] = 0.

    Raises:
        UnsupportedOperatorError: if Q cannot be brought to adapted form.
    """
    if Q.dep != L.dep:
        raise ValueError(f'Operator acts on {Q.dep}, equation on {L.dep}.')
    Q = evolution_adapted(Q, settings)
    dep = Q.dep
    u = sp.Symbol(dep)
    u_t, u_x = jet(dep, 1, 0), jet(dep, 0, 1)
    u_tx, u_xx = jet(dep, 1, 1), jet(dep, 0, 2)

    residual = prolong(Q, 2).apply(u_t - L.rhs)

    if Q.tau == 0 and _vanishes(Q.xi, settings):
        return residual.subs(u_t, L.rhs)
    if Q.tau == 1:
        residual = _drop_cancelling_jets(residual, dep, keep=((1, 0), (1, 1)))
        flow = Q.eta - Q.xi*u_x
        rules = [(u_tx, total_derivative(flow, 'x', dep, 2)), (u_t, L.rhs)]
        slope = sp.diff(L.rhs, u_xx)
        if slope != 0 and not slope.has(u_xx):
            rest = sp.expand(L.rhs - slope*u_xx)
            rules.append((u_xx, sp.cancel((flow - rest)/slope)))
    else:
        residual = _drop_cancelling_jets(residual, dep, keep=((1, 0), (1, 1)))
        eta = Q.eta
        rules = [(u_tx, sp.diff(eta, T) + sp.diff(eta, u)*u_t),
                 (u_t, L.rhs),
                 (u_xx, sp.diff(eta, X) + sp.diff(eta, u)*u_x),
                 (u_x, eta)]
    return _eliminate(residual, rules)


def is_reduction_operator(L: EvolutionEquation, Q: ReductionOperator,
                          settings: Optional[ProbeSettings] = None,
                          sampler: Optional[Sampler] = None) -> ZeroReport:
    """Zero verdict of the conditional invariance residual."""
    residual = conditional_invariance_residual(L, Q, settings)
    return is_zero(residual, settings, sampler)
