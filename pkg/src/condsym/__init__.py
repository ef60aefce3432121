r'''# condsym
This package encodes and checks the nonclassical symmetries of the fast
diffusion equation u_t = (u_x/u)_x and of its potential equation
v_t = v_xx/v_x: reduction operators, exact solutions, the hodograph
transformation between them, reductions to ODEs and finite-difference
validation runs.
'''

import logging

from .errors import CondSymError
from .expr import is_zero, parse
from .jets import (EvolutionEquation, ReductionOperator,
                   conditional_invariance_residual, is_reduction_operator)
from .eqcat import fast_diffusion, make_equation, potential_fast_diffusion
from .solcat import ExactSolution, SolutionPair, lie_solution, nonlie_solution
from . import catalog

__version__ = '1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())
