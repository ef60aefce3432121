"""Finite-difference runs that evolve catalog solutions from exact data.

The diffusion family u_t = (f(u) u_x)_x is discretized in the conserved
form u_t = (K(u))_xx with K' = f, i.e. (ln u)_xx for the fast diffusion
equation; the filtration family v_t = F(v_x, v_xx) with central
differences. Dirichlet data are taken from the oracle solution at every
step, so the error measured at the final time is the interior scheme error.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd
import sympy as sp
from scipy.linalg import solve_banded

from condsym.config import DEFAULT_SIMULATION_SETTINGS, SimulationSettings
from condsym.errors import NewtonConvergenceError, OracleDomainError, PositivityError
from condsym.expr import T, X, jet, numeric_function
from condsym.jets import EvolutionEquation
from condsym.solcat import ExactSolution

logger = logging.getLogger(__name__)

SCHEMES = ('explicit', 'implicit-newton')
TABLE_COLUMNS = ['level', 'h', 'dt', 'max_err', 'l2_err', 'order']
ROUNDING_LEVEL = 1e-13
ORACLE_TIME_SAMPLES = 11


@dataclass(frozen=True)
class Grid:
    """Space-time grid [x0, x1] x [t0, t1] with n nodes in space.

    Args:
        sigma (float, optional): stability factor of the explicit step
            dt = sigma h^2 / max(diffusivity); the simulation settings
            value is used if None.
        dt (float, optional): fixed time step of the implicit scheme.

    Raises:
        ValueError: if n < 8, t1 <= t0, x1 <= x0 or dt <= 0.
    """
    x0: float
    x1: float
    n: int
    t0: float
    t1: float
    sigma: Optional[float] = None
    dt: Optional[float] = None

    def __post_init__(self):
        if self.n < 8:
            raise ValueError(f'A grid needs at least 8 nodes, got {self.n}.')
        if self.t1 <= self.t0 or self.x1 <= self.x0:
            raise ValueError('Grid intervals must have positive length.')
        if self.dt is not None and self.dt <= 0:
            raise ValueError(f'Time step must be positive, got {self.dt}.')

    @property
    def h(self) -> float:
        return (self.x1 - self.x0)/(self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.n)

    def refined(self, level: int) -> 'Grid':
        """Grid with h divided by 2^level (and dt by 4^level if fixed)."""
        dt = None if self.dt is None else self.dt/4**level
        return replace(self, n=(self.n - 1)*2**level + 1, dt=dt)


@dataclass(frozen=True)
class MassBalance:
    """Change of h * sum(u) over the interior and the boundary flux integral."""
    drift: float
    flux: float

    @property
    def relative_error(self) -> float:
        return abs(self.drift - self.flux)/max(abs(self.flux), abs(self.drift), 1e-300)


@dataclass(frozen=True)
class ErrorReport:
    """Errors against the oracle at the final time.

    `table` has the columns level, h, dt, max_err, l2_err, order with one
    row per refinement level; `order` is the last observed order.
    """
    table: pd.DataFrame
    final: np.ndarray
    nodes: np.ndarray
    steps: int
    mass_balance: Optional[MassBalance] = None

    @property
    def max_err(self) -> float:
        return float(self.table['max_err'].iloc[-1])

    @property
    def l2_err(self) -> float:
        return float(self.table['l2_err'].iloc[-1])

    @property
    def order(self) -> float:
        return float(self.table['order'].iloc[-1])

    def to_csv(self, path=None) -> Optional[str]:
        return self.table.to_csv(path, index=False)


# --- discrete operators ---------------------------------------------------------

@dataclass(frozen=True)
class _Discretization:
    """Interior right-hand side, its tridiagonal Jacobian and the diffusivity."""
    rhs: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]]
    diffusivity: Callable[[np.ndarray], np.ndarray]
    potential: Optional[Callable[[np.ndarray], np.ndarray]] = None


def _discretize(L: EvolutionEquation, h: float,
                settings: SimulationSettings) -> _Discretization:
    dep = sp.Symbol(L.dep)
    if L.family == 'diffusion':
        f = L.nonlinearity.subs(sp.Symbol('u'), dep)
        potential = numeric_function(sp.integrate(f, dep), [dep])
        diffusivity = numeric_function(f, [dep])

        def K(u):
            return np.real(np.broadcast_to(potential(u.astype(complex)), u.shape))

        def D(u):
            return np.real(np.broadcast_to(diffusivity(u.astype(complex)), u.shape))

        def rhs(u):
            k = K(u)
            return (k[2:] - 2*k[1:-1] + k[:-2])/h**2

        def jacobian(u):
            d = D(u)/h**2
            return d[2:], -2*d[1:-1], d[:-2]

        return _Discretization(rhs, jacobian, D, K)

    p, q = jet(L.dep, 0, 1), jet(L.dep, 0, 2)
    if L.rhs.free_symbols - {p, q}:
        raise ValueError(f'Only autonomous equations in {p}, {q} can be simulated.')
    F = numeric_function(L.rhs, [p, q])
    F_p = numeric_function(sp.diff(L.rhs, p), [p, q])
    F_q = numeric_function(sp.diff(L.rhs, q), [p, q])

    def slopes(v):
        v_x = (v[2:] - v[:-2])/(2*h)
        if np.min(np.abs(v_x)) < settings.gradient_guard:
            raise PositivityError(f'|{p}| fell below {settings.gradient_guard}.')
        return v_x, (v[2:] - 2*v[1:-1] + v[:-2])/h**2

    def evaluate(g, v):
        v_x, v_xx = slopes(v)
        return np.real(np.broadcast_to(g(v_x.astype(complex), v_xx.astype(complex)),
                                       v_x.shape))

    def jacobian(v):
        a, b = evaluate(F_p, v), evaluate(F_q, v)
        return a/(2*h) + b/h**2, -2*b/h**2, -a/(2*h) + b/h**2

    return _Discretization(lambda v: evaluate(F, v), jacobian,
                           lambda v: np.pad(evaluate(F_q, v), 1, mode='edge'))


def _oracle_values(oracle: ExactSolution, t: float, x: np.ndarray) -> np.ndarray:
    values = oracle(np.full_like(x, t), x)
    if not np.all(np.isfinite(values)) or np.max(np.abs(np.imag(values))) > 1e-12:
        raise OracleDomainError(f'Oracle {oracle.label} is singular or complex at t={t}.')
    return np.real(values)


def _check_oracle(oracle: ExactSolution, grid: Grid):
    for t in np.linspace(grid.t0, grid.t1, ORACLE_TIME_SAMPLES):
        _oracle_values(oracle, t, grid.nodes)


def _newton_step(w_old: np.ndarray, boundary: Tuple[float, float], dt: float,
                 scheme: _Discretization, settings: SimulationSettings) -> np.ndarray:
    w = w_old.copy()
    w[0], w[-1] = boundary
    for iteration in range(settings.newton_max_iterations):
        G = w[1:-1] - w_old[1:-1] - dt*scheme.rhs(w)
        upper, diagonal, lower = scheme.jacobian(w)
        ab = np.zeros((3, len(G)))
        ab[0, 1:] = -dt*upper[:-1]
        ab[1] = 1 - dt*diagonal
        ab[2, :-1] = -dt*lower[1:]
        delta = solve_banded((1, 1), ab, -G)
        w[1:-1] += delta
        if np.max(np.abs(delta)) <= settings.newton_tolerance*max(1.0, np.max(np.abs(w))):
            logger.debug('Newton converged in %d iterations', iteration + 1)
            return w
    raise NewtonConvergenceError(
        f'No convergence in {settings.newton_max_iterations} Newton iterations.')


def simulate(L: EvolutionEquation, oracle: ExactSolution, grid: Grid,
             scheme: str = 'explicit',
             settings: SimulationSettings = DEFAULT_SIMULATION_SETTINGS) -> ErrorReport:
    """Evolve L from the oracle's data at t0 to t1 and compare at t1.

    Args:
        L (EvolutionEquation): a 'diffusion' or 'filtration' family equation.
        oracle (ExactSolution): exact solution giving initial and boundary data.
        grid (Grid): space-time grid.
        scheme (str): 'explicit' or 'implicit-newton'.
        settings (SimulationSettings): step and Newton settings.

    Returns:
        ErrorReport: single-level table.

    Raises:
        OracleDomainError: if the oracle is singular on the grid.
        PositivityError: if u leaves u > 0 (or v_x approaches 0).
        NewtonConvergenceError: if a Newton solve fails.
    """
    if scheme not in SCHEMES:
        raise ValueError(f'Unknown scheme {scheme!r}. Valid schemes are {list(SCHEMES)}')
    if oracle.dep != L.dep:
        raise ValueError(f'Oracle of {oracle.dep} for an equation of {L.dep}.')
    _check_oracle(oracle, grid)
    x, h = grid.nodes, grid.h
    sigma = grid.sigma if grid.sigma is not None else settings.sigma
    discrete = _discretize(L, h, settings)
    diffusion = L.family == 'diffusion'

    def check(w, t):
        if diffusion and np.min(w) <= 0:
            raise PositivityError(f'u <= 0 at t={t:.6g} for oracle {oracle.label}.')

    def explicit_dt(w):
        return sigma*h**2/max(np.max(np.abs(discrete.diffusivity(w))), 1e-300)

    w = _oracle_values(oracle, grid.t0, x)
    check(w, grid.t0)
    mass0 = h*np.sum(w[1:-1])
    flux = 0.0
    t, steps, smallest = grid.t0, 0, np.inf
    fixed_dt = grid.dt if grid.dt is not None else explicit_dt(w)
    while t < grid.t1 - 1e-14*max(1.0, abs(grid.t1)):
        dt = explicit_dt(w) if scheme == 'explicit' else fixed_dt
        dt = min(dt, grid.t1 - t)
        boundary = tuple(_oracle_values(oracle, t + dt, x[[0, -1]]))
        if scheme == 'explicit':
            if diffusion:
                k = discrete.potential(w)
                flux += dt*((k[-1] - k[-2]) - (k[1] - k[0]))/h
            interior = w[1:-1] + dt*discrete.rhs(w)
            w = np.concatenate([[boundary[0]], interior, [boundary[1]]])
        else:
            w = _newton_step(w, boundary, dt, discrete, settings)
            if diffusion:
                k = discrete.potential(w)
                flux += dt*((k[-1] - k[-2]) - (k[1] - k[0]))/h
        t += dt
        steps += 1
        smallest = min(smallest, dt)
        check(w, t)
    error = w - _oracle_values(oracle, grid.t1, x)
    max_err = float(np.max(np.abs(error)))
    l2_err = float(np.sqrt(h*np.sum(error**2)))
    logger.info('%s run of %s: %d steps, max error %.3e', scheme, oracle.label, steps, max_err)
    table = pd.DataFrame([[0, h, smallest, max_err, l2_err, np.nan]], columns=TABLE_COLUMNS)
    balance = MassBalance(h*np.sum(w[1:-1]) - mass0, flux) if diffusion else None
    return ErrorReport(table, w, x, steps, balance)


def convergence_study(L: EvolutionEquation, oracle: ExactSolution, base_grid: Grid,
                      levels: int = 3, scheme: str = 'explicit',
                      settings: SimulationSettings = DEFAULT_SIMULATION_SETTINGS,
                      jobs: int = 1) -> ErrorReport:
    """Run `levels` refinements, halving h each time, and report the orders.

    Orders are log2 ratios of successive max-norm errors; NaN where the
    errors are at rounding level.

    Raises:
        ValueError: if levels < 3.
    """
    if levels < 3:
        raise ValueError(f'A convergence study needs at least 3 levels, got {levels}.')
    grids = [base_grid.refined(k) for k in range(levels)]
    run = lambda g: simulate(L, oracle, g, scheme, settings)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run, grids))
    else:
        reports = [run(g) for g in grids]
    table = pd.concat([r.table for r in reports], ignore_index=True)
    table['level'] = np.arange(levels)
    errors = table['max_err'].to_numpy()
    orders = [np.nan]
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if min(coarse, fine) <= ROUNDING_LEVEL:
            orders.append(np.nan)
        else:
            orders.append(float(np.log2(coarse/fine)))
    table['order'] = orders
    last = reports[-1]
    return ErrorReport(table, last.final, last.nodes, last.steps, last.mass_balance)


def truncation_residual(L: EvolutionEquation, oracle: ExactSolution, grid: Grid,
                        t: Optional[float] = None) -> float:
    """max |discrete rhs(oracle) - exact rhs(oracle)| over the interior at time t."""
    if oracle.expression is None or oracle.profile is not None:
        raise ValueError(f'Oracle {oracle.label} has no explicit closed form.')
    t = grid.t0 if t is None else t
    x = grid.nodes
    jets = oracle.jets(2)
    exact = numeric_function(L.rhs.subs(jets, simultaneous=True), [T, X])
    settings = DEFAULT_SIMULATION_SETTINGS
    discrete = _discretize(L, grid.h, settings)
    w = _oracle_values(oracle, t, x)
    with np.errstate(all='ignore'):
        reference = np.real(np.broadcast_to(
            exact(np.full(len(x) - 2, t, dtype=complex), x[1:-1].astype(complex)),
            (len(x) - 2,)))
    return float(np.max(np.abs(discrete.rhs(w) - reference)))
