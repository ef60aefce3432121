import numpy as np
import pytest

from condsym.catalog.solution_lib import build_solution
from condsym.errors import OracleDomainError, PositivityError
from condsym.fdsim import (TABLE_COLUMNS, Grid, convergence_study, simulate,
                           truncation_residual)


@pytest.fixture
def oracle():
    return build_solution('lie.4.eps=1')


@pytest.fixture
def grid():
    return Grid(-1.0, 1.0, 11, 1.0, 1.2)


@pytest.mark.parametrize('args', [(-1.0, 1.0, 5, 0.0, 1.0), (-1.0, 1.0, 11, 1.0, 1.0),
                                  (1.0, -1.0, 11, 0.0, 1.0)])
def test_grid_validation(args):
    with pytest.raises(ValueError):
        Grid(*args)


def test_grid_rejects_nonpositive_step():
    with pytest.raises(ValueError):
        Grid(-1.0, 1.0, 11, 0.0, 1.0, dt=0.0)


def test_refined_grid(grid):
    fine = Grid(-1.0, 1.0, 11, 1.0, 1.2, dt=0.01).refined(2)
    assert fine.n == 41
    assert fine.h == pytest.approx(grid.h/4)
    assert fine.dt == pytest.approx(0.01/16)


def test_constant_solution_is_exact(fast):
    report = simulate(fast, build_solution('lie.1.eps=0').u, Grid(-1.0, 1.0, 17, 0.2, 0.5))
    assert report.max_err <= 1e-13
    assert list(report.table.columns) == TABLE_COLUMNS


def test_explicit_run(fast, oracle, grid):
    report = simulate(fast, oracle.u, grid)
    assert report.steps > 0
    assert report.max_err < 1e-2
    assert report.l2_err <= report.max_err*np.sqrt(2.0)


def test_mass_balance(fast, oracle, grid):
    report = simulate(fast, oracle.u, grid)
    assert report.mass_balance.relative_error < 1e-9


def test_implicit_run(fast, oracle):
    report = simulate(fast, oracle.u, Grid(-1.0, 1.0, 21, 1.0, 1.2, dt=0.005),
                      scheme='implicit-newton')
    assert report.max_err < 1e-2


def test_filtration_run(potential, oracle, grid):
    report = simulate(potential, oracle.v, grid)
    assert report.max_err < 1e-2
    assert report.mass_balance is None


def test_negative_data(fast):
    with pytest.raises(PositivityError):
        simulate(fast, build_solution('lie.5').u, Grid(-1.0, 1.0, 11, -1.0, 1.0))


def test_singular_oracle(fast):
    with pytest.raises(OracleDomainError):
        simulate(fast, build_solution('lie.4.eps=0').u, Grid(-1.0, 1.0, 9, 0.5, 1.0))


def test_simulation_arguments(fast, potential, oracle, grid):
    with pytest.raises(ValueError):
        simulate(fast, oracle.u, grid, scheme='leapfrog')
    with pytest.raises(ValueError):
        simulate(potential, oracle.u, grid)


def test_convergence_study_needs_three_levels(fast, oracle, grid):
    with pytest.raises(ValueError):
        convergence_study(fast, oracle.u, grid, levels=2)


@pytest.mark.slow
@pytest.mark.parametrize('scheme, dt', [('explicit', None), ('implicit-newton', 0.01)])
def test_second_order_convergence(fast, oracle, scheme, dt):
    base = Grid(-1.0, 1.0, 11, 1.0, 1.2, dt=dt)
    report = convergence_study(fast, oracle.u, base, levels=3, scheme=scheme)
    assert len(report.table) == 3
    assert np.isnan(report.table['order'].iloc[0])
    assert report.order == pytest.approx(2.0, abs=0.3)


@pytest.mark.slow
def test_parallel_study_matches_serial(fast, oracle, grid):
    serial = convergence_study(fast, oracle.u, grid, levels=3)
    parallel = convergence_study(fast, oracle.u, grid, levels=3, jobs=3)
    np.testing.assert_allclose(serial.table['max_err'], parallel.table['max_err'])


def test_study_csv(fast, oracle, grid):
    text = convergence_study(fast, oracle.u, grid, levels=3).to_csv()
    assert text.splitlines()[0] == ','.join(TABLE_COLUMNS)
    assert len(text.splitlines()) == 4


def test_truncation_error_is_second_order(fast, oracle, grid):
    coarse = truncation_residual(fast, oracle.u, grid)
    fine = truncation_residual(fast, oracle.u, grid.refined(1))
    assert coarse/fine == pytest.approx(4.0, rel=0.15)
