## Operator library for condsym
# Keys are stable names used by the command line and the tests. Each entry
# says on which equation the operator is a reduction operator
# ('potential' for v_t = v_xx/v_x, 'diffusion' for u_t = (u_x/u)_x) and
# how to build it.

from functools import partial
from typing import Callable, NamedTuple

import sympy as sp

from condsym import opcat
from condsym.expr import T, X
from condsym.jets import ReductionOperator


class OperatorEntry(NamedTuple):
    equation: str
    build: Callable[[], ReductionOperator]
    note: str = ''


def _potential(xi, theta) -> ReductionOperator:
    return ReductionOperator('v', 1, xi, theta)


operator_lib = {}

for _eps in (0, 1):
    for _f in opcat.F_PROFILES:
        operator_lib[f'thm1.case1.eps={_eps}.f={_f}'] = OperatorEntry(
            'potential', partial(opcat.theorem1_operator, 1, eps=_eps, f=_f),
            'd_t + eps d_x + f(x + eps t) d_v')

for _f in opcat.F_PROFILES:
    operator_lib[f'thm1.case2.f={_f}'] = OperatorEntry(
        'potential', partial(opcat.theorem1_operator, 2, f=_f),
        'd_t + f(x + v)(d_x + d_v)')

for _phi in opcat.CASE3_PHI:
    operator_lib[f'thm1.case3.phi={_phi}'] = OperatorEntry(
        'potential', partial(opcat.theorem1_operator, 3, phi=_phi),
        'xi = -2/(v + phi)')

for _chi in opcat.CASE4_CHI:
    operator_lib[f'thm1.case4.chi={_chi}'] = OperatorEntry(
        'potential', partial(opcat.theorem1_operator, 4, chi=_chi),
        'xi = -2(1 + chi tan v)/(tan v - chi)')

for _chi in opcat.CASE5_CHI:
    operator_lib[f'thm1.case5.chi={_chi}'] = OperatorEntry(
        'potential', partial(opcat.theorem1_operator, 5, chi=_chi),
        'xi = -2(1 - chi tanh v)/(tanh v - chi)')

_GANDARIAS = {
    'cot': (1, -2*sp.cot(X - T)),
    'coth': (1, -2*sp.coth(X - T)),
    'tanh': (1, -2*sp.tanh(X - T)),
    'complex1': (sp.I, -2*sp.coth(X - sp.I*T)),
    'complex2': (-sp.I, 2*sp.I*sp.coth(T - sp.I*X)),
}

for _key, (_eta1, _eta2) in _GANDARIAS.items():
    operator_lib[f'gandarias.{_key}'] = OperatorEntry(
        'diffusion', partial(opcat.gandarias_ansatz_operator, _eta1, _eta2),
        'd_x + (eta1 u + eta2) u d_u')

for _key, _theta in (('cot', -2*sp.cot(X - T)), ('coth', -2*sp.coth(X - T)),
                     ('tanh', -2*sp.tanh(X - T))):
    operator_lib[f'potential.{_key}'] = OperatorEntry(
        'potential', partial(_potential, -1, _theta), 'd_t - d_x + theta d_v')

for _algebra, _equation in (('A1', 'diffusion'), ('A2', 'potential')):
    for _index in range(len(opcat.lie_generators(_algebra))):
        operator_lib[f'lie.{_algebra}.{_index + 1}'] = OperatorEntry(
            _equation,
            partial(lambda a, i: opcat.lie_generators(a)[i], _algebra, _index),
            'Lie symmetry')
