#!/usr/bin/env python3

import argparse
import json
import logging
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np
import pandas as pd

from condsym import __version__
from condsym.catalog import lookup
from condsym.catalog.arrow_lib import arrow_lib
from condsym.catalog.invariant_lib import invariant_lib
from condsym.catalog.operator_lib import operator_lib
from condsym.catalog.solution_lib import build_solution, solution_lib
from condsym.config import DEFAULT_SETTINGS, SimulationSettings
from condsym.eqcat import (derive_determining_tau1, fast_diffusion,
                           potential_fast_diffusion, potential_fast_diffusion_system,
                           systems_equivalent)
from condsym.errors import (DomainError, ExpressionSyntaxError,
                            NewtonConvergenceError, NonRationalNonlinearityError,
                            OracleDomainError, PositivityError, ProbeError,
                            ReductionError, UnknownCatalogKeyError,
                            ZeroNonlinearityError)
from condsym.expr import Verdict, format_expression, parse
from condsym.fdsim import Grid, convergence_study, simulate
from condsym.jets import is_reduction_operator
from condsym.reduce import reduce
from condsym.solcat import check_arrow, pde_residual

logger = logging.getLogger('condsym')

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAILURES, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
USAGE_ERRORS = (UnknownCatalogKeyError, ExpressionSyntaxError,
                NonRationalNonlinearityError, ZeroNonlinearityError)
NUMERIC_ERRORS = (PositivityError, NewtonConvergenceError, OracleDomainError,
                  ProbeError, DomainError, ReductionError)


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        description=('Check reduction operators, exact solutions and hodograph '
                     'maps of the fast diffusion equation.'))
    parser.add_argument('--seed', help='Seed of the probe points.',
                        type=int, default=DEFAULT_SETTINGS.seed)
    parser.add_argument('--tolerance', help='Relative tolerance of numeric zero verdicts.',
                        type=float, default=None)
    parser.add_argument('--probes', help='Number of probe points.',
                        type=int, default=None)
    parser.add_argument('--jobs', help='Number of worker threads.',
                        type=int, default=1)
    parser.add_argument('--json', help='Write the report as JSON to this file.',
                        type=str, default=None)
    parser.add_argument('--no-timestamps', help='Leave timestamps and wall times out of the report.',
                        action='store_true')
    parser.add_argument('-v', '--verbose', help='-v for info, -vv for debug logging.',
                        action='count', default=0)
    commands = parser.add_subparsers(dest='command', required=True)

    ops = commands.add_parser('verify-operators', help='Check catalog reduction operators.')
    ops.add_argument('pattern', nargs='?', default='*', help='Key or glob pattern.')

    sols = commands.add_parser('verify-solutions', help='Check catalog solutions.')
    sols.add_argument('pattern', nargs='?', default='*',
                      help='Key, glob pattern or twowave(a,b,c,d).')
    sols.add_argument('--eps', type=str, default=None, help='Append .eps=EPS to the key.')
    sols.add_argument('--mu', type=str, default=None, help='Append .mu=MU to the key.')

    derive = commands.add_parser('derive', help='Determining system of v_t = f(v_x) v_xx.')
    derive.add_argument('f', help="Nonlinearity in v_x, e.g. '1/vx'.")
    derive.add_argument('--v-independent', action='store_true',
                        help='Restrict xi and theta to functions of (t, x).')

    arrows = commands.add_parser('arrows', help='Check hodograph arrows.')
    arrows.add_argument('pattern', nargs='?', default='arrow.*')
    arrows.add_argument('--all', action='store_true', help='Check every arrow.')

    red = commands.add_parser('reduce', help='Reduce an equation along a catalog operator.')
    red.add_argument('key', help='Operator key with catalog invariants.')

    sim = commands.add_parser('simulate', help='Finite-difference run against an oracle.')
    sim.add_argument('--oracle', required=True, help='Solution key.')
    sim.add_argument('--equation', choices=('diffusion', 'filtration'), default='diffusion')
    sim.add_argument('--t0', type=float, required=True)
    sim.add_argument('--t1', type=float, required=True)
    sim.add_argument('--x0', type=float, default=-1.0)
    sim.add_argument('--x1', type=float, default=1.0)
    sim.add_argument('--n', type=int, default=101)
    sim.add_argument('--scheme', choices=('explicit', 'implicit-newton'), default='explicit')
    sim.add_argument('--sigma', type=float, default=None)
    sim.add_argument('--levels', type=int, default=1,
                     help='Refinement levels; 3 or more runs a convergence study.')
    sim.add_argument('--csv', type=str, default=None, help='Write the error table here.')

    cat = commands.add_parser('catalog', help='List catalog keys.')
    cat.add_argument('kind', choices=('operators', 'solutions', 'arrows', 'invariants'))
    cat.add_argument('pattern', nargs='?', default='*')
    return parser.parse_args(argv)


def make_settings(args):
    return DEFAULT_SETTINGS.with_overrides(seed=args.seed, tolerance=args.tolerance,
                                           probes=args.probes)


def _record(key, check, verdict, max_abs, samples, start, args):
    record = {'key': key, 'check': check, 'verdict': Verdict(verdict).value,
              'max_residual': float(max_abs), 'samples': int(samples)}
    if not args.no_timestamps:
        record['wall_time'] = round(time.perf_counter() - start, 6)
    return record


def _run(items, worker, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, items))
    else:
        results = [worker(item) for item in items]
    return [record for records in results for record in records]


def verify_operators(args, settings):
    equations = {'diffusion': fast_diffusion(), 'potential': potential_fast_diffusion()}

    def worker(key):
        start = time.perf_counter()
        entry = operator_lib[key]
        report = is_reduction_operator(equations[entry.equation], entry.build(), settings)
        return [_record(key, 'reduction-operator', report.verdict, report.max_abs,
                        report.probes, start, args)]

    return _run(lookup(operator_lib, args.pattern), worker, args.jobs)


def _solution_keys(args):
    pattern = args.pattern.replace(' ', '')
    if pattern.startswith('twowave('):
        return [pattern]
    if args.eps is not None:
        pattern = f'{pattern}.eps={args.eps}'
    if args.mu is not None:
        pattern = f'{pattern}.mu={args.mu}'
    if pattern not in solution_lib and not any(c in pattern for c in '*?['):
        pattern = f'{pattern}*'
    return lookup(solution_lib, pattern)


def verify_solutions(args, settings):
    equations = {'u': fast_diffusion(), 'v': potential_fast_diffusion()}

    def worker(key):
        pair = build_solution(key)
        records = []
        for member in (pair.u, pair.v):
            if member is None:
                continue
            start = time.perf_counter()
            report = pde_residual(member, equations[member.dep], settings)
            records.append(_record(key, f'pde-{member.dep}', report.verdict.verdict,
                                   report.max_abs, report.samples, start, args))
        if pair.v is not None and pair.v.expression is not None:
            for name, report in zip(('potential-vx', 'potential-vt'),
                                    pair.check_potential(settings)):
                start = time.perf_counter()
                records.append(_record(key, name, report.verdict, report.max_abs,
                                       report.probes, start, args))
        return records

    return _run(_solution_keys(args), worker, args.jobs)


def check_arrows(args, settings):
    pattern = 'arrow.*' if args.all else args.pattern

    def worker(key):
        start = time.perf_counter()
        report = check_arrow(arrow_lib[key], settings)
        verdict = Verdict.NUMERICALLY_ZERO if report else Verdict.NUMERICALLY_NONZERO
        return [_record(key, 'hodograph-arrow', verdict,
                        max(report.u_error, report.v_error), report.samples, start, args)]

    return _run(lookup(arrow_lib, pattern), worker, args.jobs)


def derive(args, settings):
    text = re.sub(r'\bvxx\b', 'v_xx', re.sub(r'\bvx\b', 'v_x', args.f))
    f = parse(text)
    arguments = ('t', 'x') if args.v_independent else ('t', 'x', 'v')
    system = derive_determining_tau1(f, arguments)
    for residual in system.residuals:
        print(f'  {format_expression(residual)} = 0')
    records = []
    if f == parse('1/v_x') and not args.v_independent:
        start = time.perf_counter()
        matches = systems_equivalent(system.residuals,
                                     potential_fast_diffusion_system().residuals)
        print(f'matches reference system: {"yes" if matches else "no"}')
        verdict = Verdict.PROVED_ZERO if matches else Verdict.PROVED_NONZERO
        records.append(_record('derive', 'reference-system', verdict, 0.0, 0, start, args))
    return records


def reduce_command(args, settings):
    if args.key not in invariant_lib:
        raise UnknownCatalogKeyError(f'No catalog invariants for {args.key!r}.')
    entry = operator_lib[args.key]
    equation = fast_diffusion() if entry.equation == 'diffusion' else potential_fast_diffusion()
    start = time.perf_counter()
    ode = reduce(equation, entry.build(), invariant_lib[args.key], settings)
    print(f'{args.key}: {format_expression(ode.residual)} = 0')
    return [_record(args.key, 'reduction', Verdict.PROVED_ZERO, 0.0, 0, start, args)]


def simulate_command(args, settings):
    pair = build_solution(args.oracle)
    if args.equation == 'diffusion':
        equation, oracle = fast_diffusion(), pair.u
    else:
        equation, oracle = potential_fast_diffusion(), pair.v
    if oracle is None:
        raise UnknownCatalogKeyError(f'{args.oracle} has no potential.')
    grid = Grid(args.x0, args.x1, args.n, args.t0, args.t1, sigma=args.sigma)
    sim_settings = SimulationSettings()
    if args.levels >= 3:
        report = convergence_study(equation, oracle, grid, args.levels, args.scheme,
                                   sim_settings, jobs=args.jobs)
    else:
        report = simulate(equation, oracle, grid, args.scheme, sim_settings)
    csv = report.to_csv()
    print(csv, end='')
    if args.csv is not None:
        report.to_csv(args.csv)
    return []


def list_catalog(args, settings):
    library = {'operators': operator_lib, 'solutions': solution_lib,
               'arrows': arrow_lib, 'invariants': invariant_lib}[args.kind]
    rows = []
    for key in lookup(library, args.pattern):
        entry = library[key]
        note = getattr(entry, 'note', None) or getattr(entry, 'description', '')
        rows.append({'key': key, 'note': note})
    with pd.option_context('display.max_rows', None, 'display.max_colwidth', 80):
        print(pd.DataFrame(rows).to_string(index=False))
    return []


COMMANDS = {
    'verify-operators': verify_operators,
    'verify-solutions': verify_solutions,
    'derive': derive,
    'arrows': check_arrows,
    'reduce': reduce_command,
    'simulate': simulate_command,
    'catalog': list_catalog,
}


def make_report(args, settings, records):
    records = sorted(records, key=lambda r: (r['key'], r['check']))
    passed = sum(Verdict(r['verdict']).is_zero for r in records)
    report = {'schema_version': SCHEMA_VERSION, 'tool': 'condsym', 'version': __version__,
              'command': args.command, 'seed': settings.seed,
              'settings': settings.as_dict(), 'records': records,
              'summary': {'total': len(records), 'passed': passed,
                          'failed': len(records) - passed}}
    if not args.no_timestamps:
        report['timestamp'] = datetime.now(timezone.utc).isoformat()
    return report


def print_summary(records):
    for r in sorted(records, key=lambda r: (r['key'], r['check'])):
        mark = 'ok  ' if Verdict(r['verdict']).is_zero else 'FAIL'
        print(f'{mark} {r["key"]:<36} {r["check"]:<20} {r["verdict"]:<20} '
              f'{r["max_residual"]:.3e}')
    if records:
        failed = sum(not Verdict(r['verdict']).is_zero for r in records)
        print(f'{len(records) - failed}/{len(records)} checks passed.')


def main(argv=None):
    try:
        args = parse_args(argv)
    except SystemExit as error:
        return EXIT_USAGE if error.code else EXIT_OK
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    settings = make_settings(args)
    np.seterr(all='ignore')
    try:
        records = COMMANDS[args.command](args, settings)
    except USAGE_ERRORS as error:
        print(f'Error: {error}', file=sys.stderr)
        return EXIT_USAGE
    except NUMERIC_ERRORS as error:
        print(f'Numeric error: {error}', file=sys.stderr)
        return EXIT_NUMERIC
    print_summary(records)
    if args.json is not None:
        with open(args.json, 'w') as file:
            json.dump(make_report(args, settings, records), file, indent=2, sort_keys=True)
    if any(not Verdict(r['verdict']).is_zero for r in records):
        return EXIT_FAILURES
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
