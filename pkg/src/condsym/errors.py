"""Exceptions raised by condsym.

Errors caused by bad user input also derive from `ValueError` (or
`KeyError` for catalog lookups) so callers can catch them generically.
"""


class CondSymError(Exception):
    """Base class of every condsym error."""


# --- expressions -----------------------------------------------------------

class ExpressionSyntaxError(CondSymError, ValueError):
    """The text is not a valid expression.

    Attributes:
        position (int): 0-based offset of the offending character.
    """

    def __init__(self, message: str, position: int = 0):
        super().__init__(f'{message} (at position {position})')
        self.position = position


class UnknownFunctionError(ExpressionSyntaxError):
    """A function name outside of the supported set was used."""


class UnboundVariableError(CondSymError, ValueError):
    """Evaluation was requested with a free variable left unbound."""


class PoleError(CondSymError, ValueError):
    """Evaluation point lies on (or too close to) a pole or a log zero."""


class ProbeError(CondSymError):
    """No admissible probe point could be drawn for numeric zero testing."""


# --- jets and operators ----------------------------------------------------

class OrderOverflowError(CondSymError, ValueError):
    """A total derivative would exceed the requested jet order."""


class DegenerateOperatorError(CondSymError, ValueError):
    """Both the t- and x-coefficients of an operator vanish."""


class UnsupportedOperatorError(CondSymError, ValueError):
    """The operator cannot be brought to an evolution-adapted form."""


class ClosedFormUnavailableError(CondSymError):
    """An inverse map is not available in closed form."""


class DegenerateTransformationError(CondSymError, ValueError):
    """A group element violates its nondegeneracy condition."""


# --- equations ---------------------------------------------------------------

class ZeroNonlinearityError(CondSymError, ValueError):
    """The nonlinearity of an equation vanishes identically."""


class NonRationalNonlinearityError(CondSymError, ValueError):
    """The nonlinearity is not a rational function of its argument."""


# --- solutions and reductions ------------------------------------------------

class DomainError(CondSymError, ValueError):
    """No admissible sample point lies in the declared validity domain."""


class MonotonicityError(DomainError):
    """The potential is not strictly monotone in x on the domain."""


class ReductionError(CondSymError):
    """An ansatz did not reduce the equation to an ODE."""


# --- numerics -----------------------------------------------------------------

class PositivityError(CondSymError):
    """The fast diffusion solution left the region u > 0."""


class NewtonConvergenceError(CondSymError):
    """Newton iteration did not converge."""


class OracleDomainError(CondSymError, ValueError):
    """The oracle solution is singular or invalid on the simulation box."""


# --- catalogs -------------------------------------------------------------------

class UnknownCatalogKeyError(CondSymError, KeyError):
    """No catalog entry matches the requested key or pattern."""
