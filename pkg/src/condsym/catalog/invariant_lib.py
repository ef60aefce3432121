## Invariant library for condsym
# Invariant pairs (zeta, omega) of catalog operators, keyed like
# operator_lib. Only operators whose invariants are elementary are listed;
# cases 3 to 5 of the tau = 1 families reduce implicitly and are verified
# through the invariance criterion alone.

import sympy as sp

from condsym.expr import T, X, lnabs
from condsym.opcat import OMEGA, U, V
from condsym.reduce import InvariantPair

# G with G' = f/2, so that v - G(x + t) is invariant for eps = 1
_HALF_INTEGRALS = {
    'inv': -lnabs(OMEGA),
    'cot': -lnabs(sp.sin(OMEGA)),
    'tanh': -sp.log(sp.cosh(OMEGA)),
    'coth': -lnabs(sp.sinh(OMEGA)),
}

# H with H' = 1/(2f), so that t - H(x + v) is invariant in case 2
_RECIPROCAL_INTEGRALS = {
    'inv': -OMEGA**2/8,
    'cot': lnabs(sp.cos(OMEGA))/4,
    'tanh': -lnabs(sp.sinh(OMEGA))/4,
    'coth': -sp.log(sp.cosh(OMEGA))/4,
}

_PROFILES = {
    'inv': -2/OMEGA,
    'cot': -2*sp.cot(OMEGA),
    'tanh': -2*sp.tanh(OMEGA),
    'coth': -2*sp.coth(OMEGA),
}

invariant_lib = {
    'lie.A1.1': InvariantPair('u', U, X),
    'lie.A1.2': InvariantPair('u', U, T),
    'lie.A1.3': InvariantPair('u', U/T, X),
    'lie.A1.4': InvariantPair('u', X**2*U, T),
    'lie.A2.1': InvariantPair('v', V, X),
    'lie.A2.4': InvariantPair('v', V/T, X),
    'lie.A2.5': InvariantPair('v', X*V, T),
}

for _f, _profile in _PROFILES.items():
    invariant_lib[f'thm1.case1.eps=0.f={_f}'] = InvariantPair(
        'v', V - T*_profile.subs(OMEGA, X), X)
    invariant_lib[f'thm1.case1.eps=1.f={_f}'] = InvariantPair(
        'v', V - _HALF_INTEGRALS[_f].subs(OMEGA, X + T), X - T)
    invariant_lib[f'thm1.case2.f={_f}'] = InvariantPair(
        'v', T - _RECIPROCAL_INTEGRALS[_f].subs(OMEGA, X + V), X - V)
