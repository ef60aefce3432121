## Solution library for condsym
# Stable names of the catalog solution pairs. Lie solutions carry their
# parameter in the key, non-Lie ones use 'p' for the prime. Two-wave
# solutions are built from 'twowave(alpha,beta,gamma,delta)' keys.

import re
from functools import partial
from typing import Callable, NamedTuple

from condsym import solcat
from condsym.errors import UnknownCatalogKeyError
from condsym.expr import parse


class SolutionEntry(NamedTuple):
    build: Callable[[], solcat.SolutionPair]
    note: str = ''


solution_lib = {
    'lie.1.eps=0': SolutionEntry(partial(solcat.lie_solution, 1, eps=0), 'u = 1'),
    'lie.1.eps=1': SolutionEntry(partial(solcat.lie_solution, 1, eps=1), 'u = 1/(1 + exp(x + t))'),
    'lie.1.eps=-1': SolutionEntry(partial(solcat.lie_solution, 1, eps=-1), 'u = 1/(1 - exp(x + t))'),
    'lie.2': SolutionEntry(partial(solcat.lie_solution, 2), 'u = exp(x)'),
    'lie.3.mu=0': SolutionEntry(partial(solcat.lie_solution, 3, mu=0), 'u = 1/(x - t)'),
    'lie.3.mu=1': SolutionEntry(partial(solcat.lie_solution, 3, mu=1),
                                'u = 1/(x - t + t exp(-x/t)), v by quadrature'),
    'lie.4.eps=0': SolutionEntry(partial(solcat.lie_solution, 4, eps=0), 'u = 2t/x^2'),
    'lie.4.eps=1': SolutionEntry(partial(solcat.lie_solution, 4, eps=1), 'u = 2t/(x^2 + t^2)'),
    'lie.4.eps=-1': SolutionEntry(partial(solcat.lie_solution, 4, eps=-1), 'u = 2t/(x^2 - t^2)'),
    'lie.4.eps=4': SolutionEntry(partial(solcat.lie_solution, 4, eps=4), 'u = 2t/(x^2 + 4t^2)'),
    'lie.4.eps=-4': SolutionEntry(partial(solcat.lie_solution, 4, eps=-4), 'u = 2t/(x^2 - 4t^2)'),
    'lie.5': SolutionEntry(partial(solcat.lie_solution, 5), 'u = 2t/cos(x)^2'),
    'lie.6': SolutionEntry(partial(solcat.lie_solution, 6), 'u = -2t/cosh(x)^2'),
    'lie.7': SolutionEntry(partial(solcat.lie_solution, 7), 'u = 2t/sinh(x)^2'),
    'lie.8.mu=1': SolutionEntry(partial(solcat.lie_solution, 8, mu=1),
                                'u = t(vartheta - 1 + exp(-vartheta)), implicit profile'),
}

for _index in ('1p', '2p', '3p', '4p', '5p', '6p'):
    solution_lib[f'nonlie.{_index}'] = SolutionEntry(
        partial(solcat.nonlie_solution, _index), 'difference of two waves')

_TWO_WAVE = re.compile(r'^twowave\((.+)\)$')


def build_solution(key: str) -> solcat.SolutionPair:
    """Solution pair of a catalog key or a 'twowave(a,b,c,d)' key.

    Raises:
        UnknownCatalogKeyError: for an unknown or malformed key.
    """
    match = _TWO_WAVE.match(key.replace(' ', ''))
    if match:
        params = [parse(p) for p in match.group(1).split(',')]
        if len(params) not in (2, 4):
            raise UnknownCatalogKeyError(f'twowave takes 2 or 4 parameters, got {len(params)}.')
        return solcat.SolutionPair(solcat.two_wave(*params), None, key)
    if key not in solution_lib:
        raise UnknownCatalogKeyError(f'Unknown solution {key!r}. Valid keys are {list(solution_lib)}')
    return solution_lib[key].build()
