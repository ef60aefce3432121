"""Exact solutions of the fast diffusion equation u_t = (u_x/u)_x and of
its potential equation v_t = v_xx/v_x, and their transformations.

A solution is a closed-form expression in (t, x), possibly through an
implicitly defined profile (solution 8) or only numerically sampled (a
hodograph image without elementary inverse). Every solution carries the
domain its formulas are valid on; residual checks only sample there.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from condsym.config import DEFAULT_SETTINGS, ProbeSettings
from condsym.errors import DomainError, MonotonicityError
from condsym.expr import (T, X, Sampler, Verdict, ZeroReport,
                          admissible_points, as_expression, default_sampler,
                          is_zero, jet, lnabs, numeric_function)
from condsym.jets import EvolutionEquation

logger = logging.getLogger(__name__)

VARTHETA = sp.Symbol('vartheta')
PROFILE_STEP = 1e-3
ROOT_TOLERANCE = 1e-12
DIFFERENCE_STEP = 1e-4
DIFFERENCE_TOLERANCE = 1e-5


# --- domains -------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """Box in (t, x) cut by strict inequalities `condition > 0`.

    Args:
        t_range (tuple): (low, high) of t.
        x_range (tuple): (low, high) of x.
        conditions (tuple): expressions in (t, x) required to be positive.
        description (str): human-readable form, e.g. 'x + t < 0'.
    """
    t_range: Tuple[float, float] = (0.2, 1.5)
    x_range: Tuple[float, float] = (-1.5, 1.5)
    conditions: Tuple[sp.Expr, ...] = ()
    description: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'conditions',
                           tuple(as_expression(c) for c in self.conditions))

    def contains(self, t: np.ndarray, x: np.ndarray) -> np.ndarray:
        t, x = np.asarray(t, dtype=float), np.asarray(x, dtype=float)
        inside = ((t > self.t_range[0]) & (t < self.t_range[1])
                  & (x > self.x_range[0]) & (x < self.x_range[1]))
        with np.errstate(all='ignore'):
            for condition in self.conditions:
                value = np.broadcast_to(numeric_function(condition, [T, X])(t, x), t.shape)
                inside &= np.real(value) > 0
        return inside

    def _draw(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        t = rng.uniform(*self.t_range, size=n)
        x = rng.uniform(*self.x_range, size=n)
        mask = self.contains(t, x)
        return t[mask], x[mask]

    def sample(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """Exactly n points of the domain (repeated if the domain is thin).

        Raises:
            DomainError: if no point of the domain is hit.
        """
        ts, xs = [], []
        for _ in range(50):
            t, x = self._draw(rng, 4*n)
            ts.append(t)
            xs.append(x)
            if sum(len(a) for a in ts) >= n:
                break
        t, x = np.concatenate(ts), np.concatenate(xs)
        if len(t) == 0:
            raise DomainError(f'No sample point in the domain {self.description!r}.')
        return np.resize(t, n), np.resize(x, n)


@dataclass(frozen=True)
class MappedDomain:
    """Image of a domain under a map of (t, x) given in numeric form."""
    source: Union[Domain, 'MappedDomain']
    forward: Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]
    description: str = ''

    def _draw(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        t, x = self.source._draw(rng, n)
        with np.errstate(all='ignore'):
            t, x = self.forward(t, x)
        t, x = np.real(np.asarray(t, dtype=complex)), np.real(np.asarray(x, dtype=complex))
        mask = np.isfinite(t) & np.isfinite(x)
        return t[mask], x[mask]

    sample = Domain.sample


def domain_sampler(domain: Union[Domain, MappedDomain]) -> Sampler:
    """Probe sampler for `expr.is_zero` restricted to a solution domain."""
    def sampler(rng: np.random.Generator, n: int) -> Dict[str, np.ndarray]:
        t, x = domain.sample(rng, n)
        return {'t': t.astype(complex), 'x': x.astype(complex)}
    return sampler


# --- implicit profiles ----------------------------------------------------------

def _rk4(slope: Callable[[float], float], y0: float, step: float, n: int) -> np.ndarray:
    values = np.empty(n + 1)
    values[0] = y0
    y = y0
    for i in range(n):
        k1 = slope(y)
        k2 = slope(y + step*k1/2)
        k3 = slope(y + step*k2/2)
        k4 = slope(y + step*k3)
        y = y + step*(k1 + 2*k2 + 2*k3 + k4)/6
        values[i + 1] = y
    return values


@dataclass(frozen=True)
class ImplicitProfile:
    """Function vartheta(omega) defined by vartheta' = slope(vartheta).

    `argument` is omega as an expression in (t, x); the numeric profile is
    integrated with a fixed-step fourth-order Runge-Kutta scheme from
    vartheta(0) = anchor over `span` and interpolated with cubic Hermite
    splines.
    """
    symbol: sp.Symbol
    argument: sp.Expr
    slope: sp.Expr
    anchor: float
    span: Tuple[float, float] = (-4.0, 4.0)

    def derivative(self, var: sp.Symbol) -> sp.Expr:
        return self.slope*sp.diff(self.argument, var)

    def substituted(self, mapping: Mapping) -> 'ImplicitProfile':
        return ImplicitProfile(self.symbol, self.argument.subs(mapping, simultaneous=True),
                               self.slope, self.anchor, self.span)

    @property
    def interpolant(self) -> CubicHermiteSpline:
        return _profile_interpolant(self.slope, self.symbol, self.anchor, self.span)

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        omega = np.real(np.asarray(omega, dtype=complex))
        values = self.interpolant(omega)
        outside = (omega < self.span[0]) | (omega > self.span[1])
        return np.where(outside, np.nan, values)


@lru_cache(maxsize=32)
def _profile_interpolant(slope: sp.Expr, symbol: sp.Symbol, anchor: float,
                         span: Tuple[float, float]) -> CubicHermiteSpline:
    g = sp.lambdify(symbol, slope, modules='math')
    n_forward = int(round(span[1]/PROFILE_STEP))
    n_backward = int(round(-span[0]/PROFILE_STEP))
    forward = _rk4(g, anchor, PROFILE_STEP, n_forward)
    backward = _rk4(g, anchor, -PROFILE_STEP, n_backward)
    omega = np.concatenate([-PROFILE_STEP*np.arange(n_backward, 0, -1),
                            PROFILE_STEP*np.arange(n_forward + 1)])
    values = np.concatenate([backward[:0:-1], forward])
    derivatives = np.array([g(y) for y in values])
    logger.debug('Integrated profile %s on %s', slope, span)
    return CubicHermiteSpline(omega, values, derivatives)


# --- solutions -------------------------------------------------------------------

@dataclass(frozen=True)
class ExactSolution:
    """Solution of the fast diffusion (dep 'u') or potential (dep 'v') equation.

    Args:
        dep (str): 'u' or 'v'.
        expression: closed form in (t, x), possibly containing the profile
            symbol; None for numerically sampled solutions.
        domain: where the formula is valid.
        label (str): catalog name.
        params (dict): parameter bindings the solution was built with.
        alternatives (tuple): other closed forms of the same function.
        profile (ImplicitProfile, optional): implicitly defined profile.
        evaluator (callable, optional): numeric evaluation when the
            expression cannot be lambdified (integrals, sampled images).
    """
    dep: str
    expression: Optional[sp.Expr]
    domain: Union[Domain, MappedDomain] = field(default_factory=Domain)
    label: str = ''
    params: Mapping = field(default_factory=dict)
    alternatives: Tuple[sp.Expr, ...] = ()
    profile: Optional[ImplicitProfile] = None
    evaluator: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    @property
    def mode(self) -> str:
        if self.expression is None:
            return 'sampled'
        if self.profile is not None:
            return 'implicit'
        return 'explicit'

    def derivative(self, e: sp.Expr, var: sp.Symbol) -> sp.Expr:
        """Derivative in t or x, through the profile if there is one."""
        result = sp.diff(e, var)
        if self.profile is not None:
            result += sp.diff(e, self.profile.symbol)*self.profile.derivative(var)
        return result

    def jets(self, order: int = 2) -> Dict[sp.Symbol, sp.Expr]:
        """Jet variables of `dep` up to `order` evaluated on the solution."""
        if self.expression is None:
            raise ValueError(f'Solution {self.label} has no closed form.')
        values = {jet(self.dep, 0, 0): self.expression}
        for total in range(1, order + 1):
            for alpha in range(total + 1):
                beta = total - alpha
                if beta > 0:
                    previous, var = values[jet(self.dep, alpha, beta - 1)], X
                else:
                    previous, var = values[jet(self.dep, alpha - 1, 0)], T
                values[jet(self.dep, alpha, beta)] = self.derivative(previous, var)
        return values

    def __call__(self, t, x) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        x = np.asarray(x, dtype=complex)
        with np.errstate(all='ignore'):
            if self.evaluator is not None:
                return np.asarray(self.evaluator(t, x), dtype=complex)
            if self.profile is not None:
                omega = numeric_function(self.profile.argument, [T, X])(t, x)
                theta = self.profile(np.broadcast_to(omega, np.broadcast(t, x).shape))
                f = numeric_function(self.expression, [T, X, self.profile.symbol])
                return np.asarray(f(t, x, theta), dtype=complex)
            f = numeric_function(self.expression, [T, X])
            return np.broadcast_to(np.asarray(f(t, x), dtype=complex),
                                   np.broadcast(t, x).shape)


@dataclass(frozen=True)
class SolutionPair:
    """Solution u of the fast diffusion equation and its potential v."""
    u: ExactSolution
    v: Optional[ExactSolution] = None
    label: str = ''

    def potential_residuals(self) -> List[sp.Expr]:
        """v_x - u and v_t - u_x/u."""
        if self.v is None or self.u.expression is None or self.v.expression is None:
            raise ValueError(f'Pair {self.label} has no closed-form potential.')
        u, v = self.u.expression, self.v.expression
        return [self.v.derivative(v, X) - u,
                self.v.derivative(v, T) - self.u.derivative(u, X)/u]

    def check_potential(self, settings: Optional[ProbeSettings] = None) -> List[ZeroReport]:
        sampler = domain_sampler(self.u.domain) if self.u.profile is None else None
        return [is_zero(r, settings, sampler) for r in self.potential_residuals()]


@dataclass(frozen=True)
class ResidualReport:
    verdict: ZeroReport
    max_abs: float
    samples: int

    @property
    def is_zero(self) -> bool:
        return self.verdict.is_zero


def _difference_residual(s: ExactSolution, L: EvolutionEquation,
                         settings: ProbeSettings, samples: int) -> ResidualReport:
    rng = np.random.default_rng(settings.seed)
    t, x = s.domain.sample(rng, samples)
    h = DIFFERENCE_STEP
    with np.errstate(all='ignore'):
        u = s(t, x)
        u_t = (s(t + h, x) - s(t - h, x))/(2*h)
        u_x = (s(t, x + h) - s(t, x - h))/(2*h)
        u_xx = (s(t, x + h) - 2*u + s(t, x - h))/h**2
        variables = [T, X, jet(s.dep, 0, 0), jet(s.dep, 0, 1), jet(s.dep, 0, 2)]
        rhs = numeric_function(L.rhs, variables)(t, x, u, u_x, u_xx)
        residual = np.broadcast_to(u_t - rhs, t.shape)
        scale = np.maximum(1.0, np.abs(u_t) + np.abs(rhs))
    valid = np.isfinite(residual)
    if not np.any(valid):
        raise DomainError(f'No admissible sample point for {s.label}.')
    relative = float(np.max(np.abs(residual[valid])/scale[valid]))
    verdict = (Verdict.NUMERICALLY_ZERO if relative <= DIFFERENCE_TOLERANCE
               else Verdict.NUMERICALLY_NONZERO)
    max_abs = float(np.max(np.abs(residual[valid])))
    return ResidualReport(ZeroReport(verdict, max_abs, int(valid.sum())), max_abs,
                          int(valid.sum()))


def pde_residual(s: ExactSolution, L: EvolutionEquation,
                 settings: Optional[ProbeSettings] = None,
                 samples: int = 100) -> ResidualReport:
    """Zero verdict of dep_t - F on the solution plus max |residual| on samples.

    Sampled solutions are checked with central differences.

    Raises:
        ValueError: if the solution and the equation use different variables.
        DomainError: if no admissible sample point is found.
    """
    settings = settings or DEFAULT_SETTINGS
    if s.dep != L.dep:
        raise ValueError(f'Solution of {s.dep} checked against an equation of {L.dep}.')
    if s.expression is None:
        return _difference_residual(s, L, settings, samples)
    jets = s.jets(2)
    residual = (L.lhs_symbol - L.rhs).subs(jets, simultaneous=True)
    if s.profile is None:
        sampler = domain_sampler(s.domain)
    else:
        symbols = sorted(residual.free_symbols, key=lambda q: q.name)
        sampler = default_sampler(symbols, settings, real_only=False)
    verdict = is_zero(residual, settings, sampler)
    _, values = admissible_points(residual, sampler, samples, settings,
                                  np.random.default_rng(settings.seed))
    if len(values) == 0:
        raise DomainError(f'No admissible sample point for {s.label}.')
    return ResidualReport(verdict, float(np.max(np.abs(values))), len(values))


# --- Lie solutions ------------------------------------------------------------------

def _largest_root(mu: float) -> Optional[float]:
    """Largest real zero of s - 1 + mu*exp(-s), None if there is none."""
    g = lambda s: s - 1 + mu*np.exp(-s)
    if mu == 0:
        return 1.0
    if mu > 0:
        if mu == 1:
            return 0.0
        if mu > 1:
            return None
        return brentq(g, np.log(mu), 60.0, xtol=ROOT_TOLERANCE)
    return brentq(g, -60.0, 60.0, xtol=ROOT_TOLERANCE)


def _solution3_potential(mu: sp.Expr, domain: Domain) -> ExactSolution:
    from scipy.integrate import quad

    mu_value = float(mu)
    floor = _largest_root(mu_value)
    lower = 1.0 if floor is None else floor + 1.0
    s = sp.Symbol('s')
    integrand = 1/(s - 1 + mu*sp.exp(-s))
    expression = lnabs(T) + sp.Integral(integrand, (s, sp.Float(lower), X/T))
    g = sp.lambdify(s, integrand, modules='math')

    def evaluate(t, x):
        t, x = np.broadcast_arrays(np.real(t), np.real(x))
        out = np.full(t.shape, np.nan)
        for i in np.ndindex(t.shape):
            out[i] = np.log(abs(t[i])) + quad(g, lower, x[i]/t[i])[0]
        return out

    return ExactSolution('v', expression, domain, 'lie.3', {'mu': mu}, evaluator=evaluate)


def lie_solution(index: int, eps=None, mu=None) -> SolutionPair:
    """Lie invariant solution pair of the fast diffusion equation.

    Args:
        index (int): 1 to 8.
        eps: parameter of solutions 1 (in {-1, 0, 1}, default 1) and 4
            (any real, default 0).
        mu: parameter of solutions 3 (default 0) and 8 (default 1).

    Returns:
        SolutionPair: solution 8 has no potential.

    Raises:
        ValueError: for an invalid index or parameter.
    """
    domain = Domain()
    label = f'lie.{index}'
    if index == 1:
        eps = 1 if eps is None else eps
        if eps not in (-1, 0, 1):
            raise ValueError(f'eps of solution 1 must be -1, 0 or 1, got {eps}.')
        u = 1/(1 + eps*sp.exp(X + T))
        v = X if eps == 0 else -lnabs(sp.exp(-X) + eps*sp.exp(T))
        params = {'eps': eps}
    elif index == 2:
        u, v, params = sp.exp(X), sp.exp(X) + T, {}
    elif index == 3:
        mu = as_expression(0 if mu is None else mu)
        u = 1/(X - T + mu*T*sp.exp(-X/T))
        params = {'mu': mu}
        if mu != 0:
            floor = _largest_root(float(mu))
            conditions = () if floor is None else (X/T - sp.Float(floor + 0.1),)
            domain = Domain(conditions=conditions, description='x/t above the singular ray')
            pair_v = _solution3_potential(mu, domain)
            return SolutionPair(ExactSolution('u', u, domain, label, params), pair_v, label)
        v = lnabs(X - T)
    elif index == 4:
        eps = as_expression(0 if eps is None else eps)
        u = 2*T/(X**2 + eps*T**2)
        k = sp.sqrt(abs(eps))
        if eps == 0:
            v = -2*T/X
        elif eps > 0:
            v = 2/k*sp.atan(X/(k*T))
        else:
            v = lnabs((X - k*T)/(X + k*T))/k
        params = {'eps': eps}
    elif index == 5:
        domain = Domain(x_range=(-1.3, 1.3))
        u, v, params = 2*T/sp.cos(X)**2, 2*T*sp.tan(X), {}
    elif index == 6:
        u, v, params = -2*T/sp.cosh(X)**2, -2*T*sp.tanh(X), {}
    elif index == 7:
        u, v, params = 2*T/sp.sinh(X)**2, -2*T*sp.coth(X), {}
    elif index == 8:
        mu = as_expression(1 if mu is None else mu)
        slope = VARTHETA - 1 + mu*sp.exp(-VARTHETA)
        floor = _largest_root(float(mu))
        anchor = 1.0 if floor is None else floor + 1.0
        profile = ImplicitProfile(VARTHETA, X - lnabs(T), slope, anchor)
        u = ExactSolution('u', T*slope, domain, label, {'mu': mu}, profile=profile)
        return SolutionPair(u, None, label)
    else:
        raise ValueError(f'Lie solution index must be between 1 and 8, got {index}.')
    return SolutionPair(ExactSolution('u', u, domain, label, params),
                        ExactSolution('v', v, domain, label, params), label)


# --- non-Lie solutions --------------------------------------------------------------

_NONLIE = {
    '1p': (2*sp.sin(2*T)/(sp.cos(2*T) - sp.cos(2*X)),
           sp.cot(X - T) - sp.cot(X + T),
           lnabs(sp.sin(X - T)/sp.sin(X + T))),
    '2p': (2*sp.sinh(2*T)/(sp.cosh(2*X) - sp.cosh(2*T)),
           sp.coth(X - T) - sp.coth(X + T),
           lnabs(sp.sinh(X - T)/sp.sinh(X + T))),
    '3p': (2*sp.cosh(2*T)/(sp.sinh(2*X) - sp.sinh(2*T)),
           sp.coth(X - T) - sp.tanh(X + T),
           lnabs(sp.sinh(X - T)/sp.cosh(X + T))),
    '4p': (-2*sp.sinh(2*T)/(sp.cosh(2*X) + sp.cosh(2*T)),
           sp.tanh(X - T) - sp.tanh(X + T),
           lnabs(sp.cosh(X - T)/sp.cosh(X + T))),
    '5p': (2*sp.sin(2*T)/(sp.cosh(2*X) - sp.cos(2*T)),
           sp.cot(sp.I*X + T) - sp.cot(sp.I*X - T),
           2*sp.atan(sp.cot(T)*sp.tanh(X))),
    '6p': (2*sp.sinh(2*T)/(sp.cosh(2*T) - sp.cos(2*X)),
           sp.I*sp.cot(X + sp.I*T) - sp.I*sp.cot(X - sp.I*T),
           2*sp.atan(sp.coth(T)*sp.tan(X))),
}

NONLIE_DOMAIN = Domain(t_range=(0.1, 0.7), x_range=(-1.2, 1.2))


def nonlie_solution(index: str) -> SolutionPair:
    """Non-Lie solution pair '1p' to '6p'.

    The closed form of u is the expression; the difference of two waves is
    kept as an alternative.
    """
    index = str(index).replace("'", 'p')
    if index not in _NONLIE:
        raise ValueError(f'Unknown non-Lie solution {index!r}. '
                         f'Valid values are {list(_NONLIE)}')
    closed, waves, v = _NONLIE[index]
    label = f'nonlie.{index}'
    return SolutionPair(
        ExactSolution('u', closed, NONLIE_DOMAIN, label, alternatives=(waves,)),
        ExactSolution('v', v, NONLIE_DOMAIN, label), label)


def two_wave(alpha, beta, gamma=0, delta=0) -> ExactSolution:
    """u = a^2/b (cot(a x - b t + d) - cot(a x + b t + c)), complex valued.

    The equivalent closed form 2 a^2/b sin(2bt + c - d)/(cos(2bt + c - d)
    - cos(2ax + c + d)) is kept as an alternative.

    Raises:
        ValueError: if alpha*beta == 0.
    """
    a, b, c, d = (as_expression(p) for p in (alpha, beta, gamma, delta))
    if a*b == 0:
        raise ValueError('alpha*beta must not vanish.')
    waves = a**2/b*(-sp.cot(a*X + b*T + c) + sp.cot(a*X - b*T + d))
    closed = (a**2/b*2*sp.sin(2*b*T + c - d)
              / (sp.cos(2*b*T + c - d) - sp.cos(2*a*X + c + d)))
    return ExactSolution('u', waves, NONLIE_DOMAIN, f'twowave({a},{b},{c},{d})',
                         {'alpha': a, 'beta': b, 'gamma': c, 'delta': d},
                         alternatives=(closed,))


def real_tuple_table() -> List[Tuple[sp.Expr, sp.Expr, sp.Expr, sp.Expr]]:
    """Representatives (alpha, beta, gamma, delta) of the real two-wave solutions."""
    i, half_pi = sp.I, sp.pi/2
    return [(1, 1, 0, 0), (i, i, 0, 0), (i, i, half_pi, 0),
            (i, i, half_pi, half_pi), (i, 1, 0, 0), (1, i, 0, 0)]


def max_imaginary_part(s: ExactSolution, n: int = 20) -> float:
    """max |Im u| over an n x n grid of the solution's domain box."""
    box = s.domain
    t, x = np.meshgrid(np.linspace(*box.t_range, n + 2)[1:-1],
                       np.linspace(*box.x_range, n + 2)[1:-1])
    values = s(t, x)
    finite = np.isfinite(values) & (np.abs(values) < 1e8)
    return float(np.max(np.abs(np.imag(values[finite])), initial=0.0))


def match_two_wave(params: Sequence, settings: Optional[ProbeSettings] = None) -> Optional[str]:
    """Key of the non-Lie solution the two-wave solution coincides with."""
    u = two_wave(*params).expression
    for index, (closed, _, _) in _NONLIE.items():
        if is_zero(u - closed, settings).is_zero:
            return f'nonlie.{index}'
    return None


# --- group and hodograph actions -----------------------------------------------------

def restricted(pair: SolutionPair, domain: Union[Domain, MappedDomain]) -> SolutionPair:
    """Same pair with both members restricted to `domain`."""
    v = None if pair.v is None else replace(pair.v, domain=domain)
    return SolutionPair(replace(pair.u, domain=domain), v, pair.label)


def _pull_back(s: ExactSolution, g, factor: float, shift: float) -> ExactSolution:
    e1, e2, e3, e4 = (float(p) for p in (g.eps1, g.eps2, g.eps3, g.eps4))
    mapping = {T: g.eps3*T + g.eps1, X: g.eps4*X + g.eps2}
    scale, offset = sp.nsimplify(factor), sp.nsimplify(shift)
    expression = None
    if s.expression is not None:
        expression = scale*s.expression.subs(mapping, simultaneous=True) + offset
    profile = None if s.profile is None else s.profile.substituted(mapping)
    evaluator = None
    if s.evaluator is not None:
        source = s.evaluator
        evaluator = lambda t, x: factor*np.asarray(source(e3*t + e1, e4*x + e2)) + shift
    domain = MappedDomain(s.domain, lambda t, x: ((t - e1)/e3, (x - e2)/e4),
                          f'pull-back of {s.domain.description!r}')
    return ExactSolution(s.dep, expression, domain, f'{s.label}*g', s.params,
                         tuple(scale*a.subs(mapping, simultaneous=True) + offset
                               for a in s.alternatives),
                         profile, evaluator)


def apply_group(g, pair: SolutionPair) -> SolutionPair:
    """Image of a solution pair under an element of G1 or G2.

    u(t, x) -> eps4^2/eps3 u(eps3 t + eps1, eps4 x + eps2) and
    v(t, x) -> eps4/eps3 v(eps3 t + eps1, eps4 x + eps2) + v_shift.
    With the hodograph flag of G2 set, the hodograph is applied first.

    Args:
        g (opcat.GroupElement): group element.
        pair (SolutionPair): source pair.

    Raises:
        MonotonicityError: for the hodograph branch on a non-monotone v.
    """
    if g.hodograph:
        pair = apply_hodograph(pair)
    e3, e4 = float(g.eps3), float(g.eps4)
    u = _pull_back(pair.u, g, e4**2/e3, 0.0)
    v = None if pair.v is None else _pull_back(pair.v, g, e4/e3, float(g.v_shift))
    logger.debug('Applied %s to %s', g, pair.label)
    return SolutionPair(u, v, f'{pair.label}*g')


def _log_variants(e: sp.Expr, limit: int = 3):
    """e with each ln|w| replaced by log(w) or log(-w)."""
    logs = sorted(e.atoms(lnabs), key=sp.default_sort_key)
    if len(logs) > limit:
        return
    for signs in product((1, -1), repeat=len(logs)):
        yield e.xreplace({q: sp.log(sign*q.args[0]) for q, sign in zip(logs, signs)})


def _restore_lnabs(e: sp.Expr) -> sp.Expr:
    return e.replace(lambda q: isinstance(q, sp.log), lambda q: lnabs(q.args[0]))


def _inverts(candidate: sp.Expr, t: np.ndarray, x: np.ndarray, w: np.ndarray) -> bool:
    with np.errstate(all='ignore'):
        values = np.asarray(numeric_function(candidate, [T, X])(t.astype(complex),
                                                                 w.astype(complex)))
    values = np.broadcast_to(values, t.shape)
    return bool(np.all(np.isfinite(values))
                and np.all(np.abs(values - x) <= 1e-8*(1 + np.abs(x))))


def _solve_for_x(v: ExactSolution, t: np.ndarray, x: np.ndarray) -> Optional[sp.Expr]:
    """Closed-form x(t, w) with v(t, x(t, w)) = w, checked on the samples."""
    if v.profile is not None or v.evaluator is not None or v.expression.has(sp.Integral):
        return None
    w_symbol = sp.Dummy('w')
    w = np.real(v(t, x))
    for variant in _log_variants(v.expression):
        try:
            roots = sp.solve(sp.Eq(variant, w_symbol), X)
        except (NotImplementedError, ValueError, TypeError):
            continue
        for root in roots:
            root = root.subs(w_symbol, X)
            for candidate in (_restore_lnabs(root), root):
                if _inverts(candidate, t, x, w):
                    return candidate
    return None


def _numeric_inverse(v: ExactSolution, x_range: Tuple[float, float],
                     grid: int = 201) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """x(t, w) by bracketing v(t, .) = w on `x_range` and refining with brentq."""
    xs = np.linspace(*x_range, grid)

    def inverse(t, w):
        t, w = np.broadcast_arrays(np.real(t), np.real(w))
        out = np.full(t.shape, np.nan)
        for i in np.ndindex(t.shape):
            g = lambda z: float(np.real(v(t[i], z))) - w[i]
            values = np.real(v(np.full_like(xs, t[i]), xs)) - w[i]
            change = np.nonzero(np.isfinite(values[:-1]) & np.isfinite(values[1:])
                                & (np.sign(values[:-1]) != np.sign(values[1:])))[0]
            if len(change) > 0:
                k = change[0]
                out[i] = brentq(g, xs[k], xs[k + 1], xtol=ROOT_TOLERANCE)
        return out

    return inverse


def _check_monotone(u: ExactSolution, rng: np.random.Generator, n: int = 200):
    t, x = u.domain.sample(rng, n)
    values = np.real(u(t, x))
    values = values[np.isfinite(values)]
    if not (np.all(values > 0) or np.all(values < 0)):
        raise MonotonicityError(
            f'v of {u.label} is not monotone in x on {u.domain.description!r}.')


def apply_hodograph(pair: SolutionPair,
                    settings: Optional[ProbeSettings] = None) -> SolutionPair:
    """Potential hodograph image t -> t, x -> v, u -> 1/u, v -> x.

    The new potential is the inverse of v in x: closed form when sympy
    finds an inverse that holds on the domain samples, otherwise sampled
    by root finding.

    Raises:
        ValueError: if the pair has no potential.
        MonotonicityError: if u changes sign on the domain.
    """
    settings = settings or DEFAULT_SETTINGS
    if pair.v is None:
        raise ValueError(f'Pair {pair.label} has no potential.')
    rng = np.random.default_rng(settings.seed)
    _check_monotone(pair.u, rng)
    t, x = pair.u.domain.sample(rng, 5)
    source_u, source_v = pair.u, pair.v
    domain = MappedDomain(source_v.domain,
                          lambda t, x: (t, np.real(source_v(t, x))),
                          f'hodograph image of {source_v.domain.description!r}')
    label = f'hodograph({pair.label})'
    root = _solve_for_x(source_v, t, x)
    if root is not None and source_u.profile is None and source_u.evaluator is None:
        u = ExactSolution('u', 1/source_u.expression.subs(X, root), domain, label,
                          source_u.params)
        v = ExactSolution('v', root, domain, label, source_v.params)
        logger.info('Hodograph of %s in closed form: v = %s', pair.label, root)
        return SolutionPair(u, v, label)
    t_all, x_all = source_v.domain.sample(rng, 400)
    inverse = _numeric_inverse(source_v, (float(x_all.min()), float(x_all.max())))
    u = ExactSolution('u', None, domain, label, source_u.params,
                      evaluator=lambda t, w: 1/source_u(t, inverse(t, w)))
    v = ExactSolution('v', None, domain, label, source_v.params, evaluator=inverse)
    logger.info('Hodograph of %s sampled numerically', pair.label)
    return SolutionPair(u, v, label)


# --- arrows --------------------------------------------------------------------------

ARROW_TOLERANCE = 1e-8
ARROW_CUTOFF = 1e4


@dataclass(frozen=True)
class Arrow:
    """Hodograph map between two catalog pairs.

    The hodograph image of `source` on `source_domain` is compared with the
    target pair rescaled as v -> (V(t + t_shift, x_factor (x + x_shift))
    - v_shift)/v_factor, u -> x_factor/v_factor U(...).
    """
    source: Callable[[], SolutionPair]
    target: Callable[[], SolutionPair]
    description: str = ''
    source_domain: Optional[Domain] = None
    t_shift: float = 0.0
    x_factor: float = 1.0
    x_shift: float = 0.0
    v_factor: float = 1.0
    v_shift: float = 0.0


@dataclass(frozen=True)
class ArrowReport:
    verified: bool
    u_error: float
    v_error: float
    v_constant: float
    samples: int

    def __bool__(self):
        return self.verified


def check_arrow(arrow: Arrow, settings: Optional[ProbeSettings] = None,
                samples: int = 200, tolerance: float = ARROW_TOLERANCE) -> ArrowReport:
    """Numeric check of a hodograph arrow up to an additive constant in v.

    Raises:
        DomainError: if no sample point survives the admissibility filter.
    """
    settings = settings or DEFAULT_SETTINGS
    source, target = arrow.source(), arrow.target()
    domain = arrow.source_domain or source.u.domain
    t, x = domain.sample(np.random.default_rng(settings.seed), samples)
    with np.errstate(all='ignore'):
        u_s, v_s = np.real(source.u(t, x)), np.real(source.v(t, x))
        t_target = t + arrow.t_shift
        x_target = arrow.x_factor*(v_s + arrow.x_shift)
        u_t = arrow.x_factor/arrow.v_factor*np.real(target.u(t_target, x_target))
        v_t = (np.real(target.v(t_target, x_target)) - arrow.v_shift)/arrow.v_factor
        image_u = 1/u_s
        keep = (np.isfinite(u_t) & np.isfinite(v_t) & np.isfinite(v_s)
                & (np.abs(u_s) < ARROW_CUTOFF) & (np.abs(image_u) < ARROW_CUTOFF))
    if not np.any(keep):
        raise DomainError(f'No admissible sample for arrow {arrow.description!r}.')
    u_error = float(np.max(np.abs(image_u[keep] - u_t[keep])/np.abs(image_u[keep])))
    difference = x[keep] - v_t[keep]
    constant = float(np.mean(difference))
    v_error = float(np.max(np.abs(difference - constant))
                    / max(1.0, float(np.max(np.abs(x[keep])))))
    verified = u_error <= tolerance and v_error <= tolerance
    logger.info('Arrow %s: u error %.3g, v error %.3g', arrow.description, u_error, v_error)
    return ArrowReport(verified, u_error, v_error, constant, int(keep.sum()))
