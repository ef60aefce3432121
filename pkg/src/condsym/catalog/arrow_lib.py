## Arrow library for condsym
# Hodograph maps between catalog solutions. 'arrow.lie.k' connect Lie
# solutions, 'arrow.nonlie.k' the non-Lie ones, where the target is
# rescaled as x -> x/2, v -> 2v (and shifted) before comparison.

from functools import partial

import numpy as np
import sympy as sp

from condsym.expr import T, X
from condsym.solcat import NONLIE_DOMAIN, Arrow, Domain, lie_solution, nonlie_solution

_lie = lie_solution
_nonlie = nonlie_solution


def _nonlie_domain(condition, description):
    return Domain(NONLIE_DOMAIN.t_range, NONLIE_DOMAIN.x_range, (condition,), description)


arrow_lib = {
    'arrow.lie.1': Arrow(partial(_lie, 1, eps=0), partial(_lie, 1, eps=0), '1 eps=0 to itself'),
    'arrow.lie.2': Arrow(partial(_lie, 1, eps=1), partial(_lie, 1, eps=-1),
                         '1 eps=1 to 1 eps=-1 on x + t < 0'),
    'arrow.lie.3': Arrow(partial(_lie, 1, eps=-1), partial(_lie, 1, eps=-1),
                         '1 eps=-1 to itself on x + t > 0',
                         Domain(conditions=(X + T,), description='x + t > 0')),
    'arrow.lie.4': Arrow(partial(_lie, 2), partial(_lie, 3, mu=0), '2 to 3 mu=0 on x > t'),
    'arrow.lie.5': Arrow(partial(_lie, 4, eps=0), partial(_lie, 4, eps=0), '4 eps=0 to itself'),
    'arrow.lie.6': Arrow(partial(_lie, 5), partial(_lie, 4, eps=4), '5 to 4 eps=4'),
    'arrow.lie.7': Arrow(partial(_lie, 6), partial(_lie, 4, eps=-4),
                         '6 to 4 eps=-4 on |x| < 2|t|'),
    'arrow.lie.8': Arrow(partial(_lie, 7), partial(_lie, 4, eps=-4),
                         '7 to 4 eps=-4 on |x| > 2|t|'),
    'arrow.nonlie.1': Arrow(partial(_nonlie, '1p'), partial(_nonlie, '5p'),
                            "1' on cos 2t < cos 2x to 5', t -> t + pi/2",
                            _nonlie_domain(sp.cos(2*X) - sp.cos(2*T), 'cos 2t < cos 2x'),
                            t_shift=np.pi/2, x_factor=0.5, v_factor=2.0),
    'arrow.nonlie.2': Arrow(partial(_nonlie, '1p'), partial(_nonlie, '5p'),
                            "1' on cos 2t > cos 2x to 5', v -> 2v - pi",
                            _nonlie_domain(X - T, 'cos 2t > cos 2x, x > 0'),
                            x_factor=0.5, v_factor=2.0, v_shift=-np.pi),
    'arrow.nonlie.3': Arrow(partial(_nonlie, '2p'), partial(_nonlie, '4p'),
                            "2' on |x| < |t| to 4'",
                            _nonlie_domain(T**2 - X**2, '|x| < |t|'),
                            x_factor=0.5, v_factor=2.0),
    'arrow.nonlie.4': Arrow(partial(_nonlie, '2p'), partial(_nonlie, '2p'),
                            "2' on |x| > |t| to itself",
                            _nonlie_domain(X**2 - T**2, '|x| > |t|'),
                            x_factor=0.5, v_factor=2.0),
    'arrow.nonlie.5': Arrow(partial(_nonlie, '3p'), partial(_nonlie, '3p'),
                            "3' on x < t to itself",
                            _nonlie_domain(T - X, 'x < t'),
                            x_factor=0.5, v_factor=2.0),
    'arrow.nonlie.6': Arrow(partial(_nonlie, '3p'), partial(_nonlie, '3p'),
                            "3' on x > t to itself, x -> -x/2, v -> -2v",
                            _nonlie_domain(X - T, 'x > t'),
                            x_factor=-0.5, v_factor=-2.0),
    'arrow.nonlie.7': Arrow(partial(_nonlie, '6p'), partial(_nonlie, '6p'),
                            "6' to itself up to x -> x + pi, on x > 0",
                            _nonlie_domain(X, 'x > 0'),
                            x_factor=0.5, v_factor=2.0, x_shift=np.pi),
}
