r'''Symbolic expression engine.

Expressions are `sympy` expressions restricted to the grammar of the
package: plain variables, jet variables such as `u_xx`, exact rationals,
`I`, `pi`, and the functions exp, lnabs (ln|.|), sin, cos, tan, cot,
sinh, cosh, tanh, coth, arctan and abs. sympy keeps them in canonical
form (flattened, argument-sorted sums and products, rationals in lowest
terms), so structural equality is `==`.

Zero testing is a semi-decision: a symbolic proof is attempted first and
random probing is the fallback, see `is_zero`.
'''

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import auto_number, parse_expr, rationalize
from sympy.printing.precedence import precedence
from sympy.printing.str import StrPrinter

from condsym.config import DEFAULT_SETTINGS, ProbeSettings
from condsym.errors import (ExpressionSyntaxError, PoleError, ProbeError,
                            UnboundVariableError, UnknownFunctionError)

logger = logging.getLogger(__name__)

Expression = sp.Expr
ExpressionLike = Union[sp.Expr, str, int, float, complex]
Sampler = Callable[[np.random.Generator, int], Dict[str, np.ndarray]]

T, X = sp.symbols('t x')
PRECISE_DIGITS = 40


class lnabs(sp.Function):
    """ln|w|. Its derivative is w'/w, the sign discontinuity is ignored."""
    nargs = 1

    @classmethod
    def eval(cls, arg):
        if arg.is_Number and arg.is_extended_real:
            if arg.is_zero:
                return None
            return sp.log(sp.Abs(arg))
        if arg.could_extract_minus_sign():
            return cls(-arg)
        return None

    def fdiff(self, argindex=1):
        return 1/self.args[0]

    def _eval_evalf(self, prec):
        return sp.log(sp.Abs(self.args[0]))._eval_evalf(prec)

    def _eval_is_extended_real(self):
        if self.args[0].is_extended_real and self.args[0].is_nonzero:
            return True
        return None


FUNCTIONS = {
    'exp': sp.exp,
    'lnabs': lnabs,
    'sin': sp.sin,
    'cos': sp.cos,
    'tan': sp.tan,
    'cot': sp.cot,
    'sinh': sp.sinh,
    'cosh': sp.cosh,
    'tanh': sp.tanh,
    'coth': sp.coth,
    'arctan': sp.atan,
    'abs': sp.Abs,
}

CONSTANTS = {'I': sp.I, 'pi': sp.pi}

_TOKEN = re.compile(r'''
    (?P<space>\s+)
  | (?P<number>\d+\.\d*|\.\d+|\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)?)
  | (?P<op>[-+*/^()])
''', re.VERBOSE)

_JET = re.compile(r'([A-Za-z][A-Za-z0-9]*)_([tx]+)')


# --- jet variables -------------------------------------------------------

def jet(dep: str, alpha: int, beta: int) -> sp.Symbol:
    """Jet variable of `dep` for the derivative d^(alpha+beta)/dt^alpha dx^beta.

    Suffixes are canonical: all t's before all x's (`u_tx`, never `u_xt`).
    """
    if alpha < 0 or beta < 0:
        raise ValueError('Jet orders must be non-negative.')
    if alpha == 0 and beta == 0:
        return sp.Symbol(dep)
    return sp.Symbol(f'{dep}_{"t"*alpha}{"x"*beta}')


def jet_orders(symbol: sp.Symbol) -> Optional[Tuple[str, int, int]]:
    """Inverse of `jet`: (dep, alpha, beta) or None for a plain variable."""
    match = _JET.fullmatch(symbol.name)
    if match is None:
        return None
    dep, suffix = match.groups()
    return dep, suffix.count('t'), suffix.count('x')


def canonical_symbol(name: str) -> sp.Symbol:
    match = _JET.fullmatch(name)
    if match is None:
        return sp.Symbol(name)
    dep, suffix = match.groups()
    return jet(dep, suffix.count('t'), suffix.count('x'))


# --- parsing and printing --------------------------------------------------

def parse(text: str) -> Expression:
    """Parse text of the expression grammar into a normalized expression.

    Args:
        text (str): e.g. '2*t/x^2', 'cot(x - t) - cot(x + t)', 'u_xx'.

    Raises:
        ExpressionSyntaxError: malformed text, with the offending position.
        UnknownFunctionError: a call of a function outside `FUNCTIONS`.
    """
    if not isinstance(text, str):
        raise TypeError(f'Expected a string, got {type(text).__name__}.')

    pieces: List[str] = []
    offsets: List[Tuple[int, int]] = []
    local_dict: Dict[str, object] = {}
    names: Dict[str, str] = {}
    position = 0
    rebuilt_length = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(
                f'Unexpected character {text[position]!r}', position)
        kind, token = match.lastgroup, match.group()
        if kind == 'op' and token == '*' and text.startswith('**', position):
            raise ExpressionSyntaxError("Use '^' for powers", position)
        if kind == 'name':
            following = text[match.end():].lstrip()
            if following.startswith('('):
                if token not in FUNCTIONS:
                    raise UnknownFunctionError(
                        f'Unknown function {token!r}', position)
                obj = FUNCTIONS[token]
            elif token in CONSTANTS:
                obj = CONSTANTS[token]
            elif token in FUNCTIONS:
                raise ExpressionSyntaxError(
                    f'Function {token!r} needs an argument', position)
            else:
                obj = canonical_symbol(token)
            if token not in names:
                names[token] = f'_n{len(names)}'
                local_dict[names[token]] = obj
            token = names[token]
        elif kind == 'op' and token == '^':
            token = '**'
        offsets.append((rebuilt_length, position))
        pieces.append(token)
        rebuilt_length += len(token)
        position = match.end()

    rebuilt = ''.join(pieces)
    if rebuilt.strip() == '':
        raise ExpressionSyntaxError('Empty expression', 0)
    try:
        result = parse_expr(rebuilt, local_dict=local_dict,
                            global_dict={'Integer': sp.Integer,
                                         'Float': sp.Float,
                                         'Rational': sp.Rational},
                            transformations=(auto_number, rationalize))
    except (SyntaxError, TypeError) as err:
        offset = max((getattr(err, 'offset', None) or 1) - 1, 0)
        original = 0
        for rebuilt_offset, source_offset in offsets:
            if rebuilt_offset <= offset:
                original = source_offset
        raise ExpressionSyntaxError('Invalid syntax', original) from err
    except Exception as err:
        raise ExpressionSyntaxError(f'Invalid expression: {err}', 0) from err
    if not isinstance(result, sp.Expr):
        raise ExpressionSyntaxError('Text is not an expression', 0)
    return result


class ExpressionPrinter(StrPrinter):
    """Prints expressions back in the package grammar."""

    _function_names = {'atan': 'arctan', 'Abs': 'abs'}

    def _print_Function(self, expr):
        name = expr.func.__name__
        name = self._function_names.get(name, name)
        return f'{name}({self.stringify(expr.args, ", ")})'

    _print_Abs = _print_Function

    def _print_Pow(self, expr, rational=False):
        prec = precedence(expr)
        base = self.parenthesize(expr.base, prec, strict=True)
        exponent = self.parenthesize(expr.exp, prec, strict=True)
        return f'{base}^{exponent}'

    def _print_Exp1(self, expr):
        return 'exp(1)'

    def _print_ImaginaryUnit(self, expr):
        return 'I'


def format_expression(e: ExpressionLike) -> str:
    """Text form of an expression; `parse` reads it back."""
    return ExpressionPrinter().doprint(as_expression(e))


def as_expression(value: ExpressionLike) -> Expression:
    """Coerce strings, numbers and sympy objects to an expression."""
    if isinstance(value, sp.Basic):
        return value
    if isinstance(value, str):
        return parse(value)
    if isinstance(value, bool):
        raise TypeError('Booleans are not expressions.')
    if isinstance(value, complex):
        return (sp.nsimplify(value.real, rational=True)
                + sp.I*sp.nsimplify(value.imag, rational=True))
    if isinstance(value, float):
        return sp.nsimplify(value, rational=True)
    return sp.sympify(value)


def as_symbol(var: Union[str, sp.Symbol]) -> sp.Symbol:
    if isinstance(var, sp.Symbol):
        return var
    return canonical_symbol(var)


# --- calculus ---------------------------------------------------------------

def differentiate(e: ExpressionLike, var: Union[str, sp.Symbol]) -> Expression:
    """Partial derivative; jet variables count as independent symbols."""
    return sp.diff(as_expression(e), as_symbol(var))


def substitute(e: ExpressionLike, bindings: Mapping) -> Expression:
    """Simultaneous substitution.

    Keys are variable names/symbols, or undefined function classes (e.g.
    `sympy.Function('f')`) bound to a `sympy.Lambda`; functions are
    replaced first, then variables.
    """
    result = as_expression(e)
    symbol_map = {}
    for key, value in bindings.items():
        if isinstance(key, sp.FunctionClass):
            result = result.replace(key, value)
        else:
            symbol_map[as_symbol(key)] = as_expression(value)
    if symbol_map:
        result = result.subs(symbol_map, simultaneous=True)
    return result


# --- numeric evaluation ------------------------------------------------------

_NUMERIC_NAMESPACE = {
    'cot': lambda z: 1/np.tan(z),
    'coth': lambda z: 1/np.tanh(z),
    'lnabs': lambda z: np.log(np.abs(z)),
}


def singular_kernels(e: Expression) -> List[Expression]:
    """Expressions whose zeros are poles (or log zeros) of `e`."""
    kernels = []
    for node in sp.preorder_traversal(e):
        if node.is_Pow and node.exp.is_extended_negative:
            kernels.append(node.base)
        elif isinstance(node, sp.cot):
            kernels.append(sp.sin(node.args[0]))
        elif isinstance(node, sp.coth):
            kernels.append(sp.sinh(node.args[0]))
        elif isinstance(node, sp.tan):
            kernels.append(sp.cos(node.args[0]))
        elif isinstance(node, sp.tanh):
            kernels.append(sp.cosh(node.args[0]))
        elif isinstance(node, sp.atan):
            kernels.append(1 + node.args[0]**2)
        elif isinstance(node, lnabs):
            kernels.append(node.args[0])
    unique = []
    for kernel in kernels:
        if not kernel.is_number and kernel not in unique:
            unique.append(kernel)
    return unique


def numeric_function(e: ExpressionLike, variables: Sequence) -> Callable:
    """Vectorized numpy callable of `e` over the given variables."""
    symbols = [as_symbol(v) for v in variables]
    return sp.lambdify(symbols, as_expression(e),
                       modules=[_NUMERIC_NAMESPACE, 'numpy'])


def _ordered_symbols(e: Expression) -> List[sp.Symbol]:
    return sorted(e.free_symbols, key=lambda s: s.name)


def _as_complex(value) -> complex:
    if isinstance(value, sp.Basic):
        return complex(sp.N(value))
    return complex(value)


def evaluate(e: ExpressionLike, binding: Mapping,
             settings: Optional[ProbeSettings] = None) -> complex:
    """Evaluate in double precision complex arithmetic.

    Args:
        e: expression.
        binding (dict): variable name (or symbol) to value.

    Raises:
        UnboundVariableError: a free variable has no value.
        PoleError: the point is within `pole_delta` of a singularity.
    """
    settings = settings or DEFAULT_SETTINGS
    e = as_expression(e)
    named = {(k.name if isinstance(k, sp.Symbol) else str(k)): v
             for k, v in binding.items()}
    symbols = _ordered_symbols(e)
    missing = [s.name for s in symbols if s.name not in named]
    if len(missing) > 0:
        raise UnboundVariableError(f'Unbound variables: {missing}')
    values = [_as_complex(named[s.name]) for s in symbols]

    with np.errstate(all='ignore'):
        for kernel in singular_kernels(e):
            kernel_value = complex(numeric_function(kernel, symbols)(*values))
            if abs(kernel_value) < settings.pole_delta:
                raise PoleError(f'{kernel} vanishes at {named}')
        value = complex(numeric_function(e, symbols)(*values))
    if not np.isfinite(value):
        raise PoleError(f'Non-finite value at {named}')
    return value


# --- zero testing ---------------------------------------------------------------

class Verdict(str, Enum):
    PROVED_ZERO = 'proved-zero'
    PROVED_NONZERO = 'proved-nonzero'
    NUMERICALLY_ZERO = 'numerically-zero'
    NUMERICALLY_NONZERO = 'numerically-nonzero'

    @property
    def is_zero(self) -> bool:
        return self in (Verdict.PROVED_ZERO, Verdict.NUMERICALLY_ZERO)


@dataclass(frozen=True)
class ZeroReport:
    """Outcome of `is_zero`.

    `max_abs` is the largest |value| over the probes; the verdict compares it
    with the absolute tolerance (see `is_zero`).
    """
    verdict: Verdict
    max_abs: float = 0.0
    probes: int = 0

    @property
    def is_zero(self) -> bool:
        return self.verdict.is_zero


def _exp_normal_form(e: Expression) -> Expression:
    trig = (sp.sin, sp.cos, sp.tan, sp.cot, sp.sinh, sp.cosh, sp.tanh, sp.coth)
    if not e.has(*trig):
        return e
    rewritten = e.rewrite(sp.exp)
    rewritten = sp.expand(rewritten, mul=False, multinomial=False, power_exp=True)
    return sp.cancel(sp.together(rewritten))


def _symbolic_verdict(e: Expression, settings: ProbeSettings) -> Optional[Verdict]:
    if e.is_zero is True or e == 0:
        return Verdict.PROVED_ZERO
    if e.is_number:
        try:
            value = complex(sp.N(e))
        except (TypeError, ValueError):
            return None
        return Verdict.PROVED_ZERO if value == 0 else Verdict.PROVED_NONZERO
    if e.is_zero is False:
        return Verdict.PROVED_NONZERO
    if sp.count_ops(e) > settings.symbolic_ops_limit:
        logger.debug('Skipping symbolic zero proof (%d ops)', sp.count_ops(e))
        return None
    try:
        candidate = sp.cancel(sp.together(e))
        if candidate == 0:
            return Verdict.PROVED_ZERO
        if _exp_normal_form(candidate) == 0:
            return Verdict.PROVED_ZERO
    except (sp.PolynomialError, sp.CoercionFailed, RecursionError) as err:
        logger.debug('Symbolic zero proof failed: %s', err)
    return None


def default_sampler(symbols: Sequence[sp.Symbol], settings: ProbeSettings,
                     real_only: bool) -> Sampler:
    def sampler(rng: np.random.Generator, n: int) -> Dict[str, np.ndarray]:
        points = {}
        for symbol in symbols:
            values = rng.uniform(*settings.real_box, size=n).astype(complex)
            if not real_only:
                values += 1j*rng.uniform(*settings.imag_box, size=n)
            points[symbol.name] = values
        return points
    return sampler


def admissible_points(e: Expression, sampler: Sampler, n: int,
                      settings: ProbeSettings,
                      rng: np.random.Generator) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
    """Draw up to `n` points away from the singular set of `e`.

    Returns:
        tuple: (points by variable name, values of `e` at the points).
    """
    symbols = _ordered_symbols(e)
    function = numeric_function(e, symbols)
    kernels = [numeric_function(k, symbols) for k in singular_kernels(e)]
    draws = n*settings.max_draws_factor
    points = sampler(rng, draws)
    args = [np.asarray(points[s.name], dtype=complex) for s in symbols]
    with np.errstate(all='ignore'):
        mask = np.ones(draws, dtype=bool)
        for kernel in kernels:
            mask &= np.abs(np.broadcast_to(kernel(*args), (draws,))) >= settings.pole_delta
        values = np.broadcast_to(np.asarray(function(*args), dtype=complex), (draws,))
        mask &= np.isfinite(values)
    chosen = np.flatnonzero(mask)[:n]
    return ({name: np.asarray(vals)[chosen] for name, vals in points.items()},
            values[chosen])


def _precise_abs(e: Expression, symbols: Sequence[sp.Symbol],
                 point: Sequence[complex]) -> float:
    """|e| at a point, evaluated with PRECISE_DIGITS significant digits."""
    subs = {s: sp.Float(z.real, PRECISE_DIGITS) + sp.I*sp.Float(z.imag, PRECISE_DIGITS)
            for s, z in zip(symbols, point)}
    try:
        return abs(complex(e.evalf(PRECISE_DIGITS, subs=subs)))
    except (TypeError, ValueError):
        return float('inf')


def is_zero(e: ExpressionLike, settings: Optional[ProbeSettings] = None,
            sampler: Optional[Sampler] = None) -> ZeroReport:
    """Decide whether an expression vanishes identically.

    A symbolic proof is tried first: rational normal form over the
    occurring function kernels, then the same after rewriting trigonometric
    and hyperbolic functions as exponentials. Failing that, the expression
    is probed at `settings.probes` random points (complex ones unless ln|.|,
    abs or arctan occur) drawn with a fixed seed, skipping points near
    singularities. The verdict is zero when every |value| is at most
    `settings.tolerance`. A probe above the tolerance but within
    double-precision round-off of its summands is recomputed with
    PRECISE_DIGITS digits before it counts.

    Args:
        e: expression to test.
        settings (ProbeSettings, optional): probing settings.
        sampler (callable, optional): `sampler(rng, n)` returning arrays of
            candidate values per variable name, e.g. to stay inside the
            validity domain of a solution.

    Raises:
        ProbeError: every drawn point hit a singularity.
    """
    settings = settings or DEFAULT_SETTINGS
    e = as_expression(e)
    verdict = _symbolic_verdict(e, settings)
    if verdict is not None:
        return ZeroReport(verdict)

    symbols = _ordered_symbols(e)
    real_only = e.has(lnabs, sp.Abs, sp.atan)
    if sampler is None:
        sampler = default_sampler(symbols, settings, real_only)
    rng = np.random.default_rng(settings.seed)
    points, values = admissible_points(e, sampler, settings.probes, settings, rng)
    if len(values) == 0:
        raise ProbeError(f'No admissible probe points for {e}')

    terms = sp.Add.make_args(e)
    scale = np.zeros(len(values))
    args = [points[s.name] for s in symbols]
    with np.errstate(all='ignore'):
        for term in terms:
            term_values = numeric_function(term, symbols)(*args)
            scale += np.abs(np.broadcast_to(term_values, scale.shape))
    magnitude = np.abs(values)
    roundoff = settings.tolerance*np.maximum(1.0, scale)
    suspects = np.flatnonzero((magnitude > settings.tolerance) & (magnitude <= roundoff))
    for index in suspects:
        magnitude[index] = _precise_abs(e, symbols, [a[index] for a in args])
    max_abs = float(np.max(magnitude))
    logger.debug('Probed %d points (%d recomputed), max |value| %.3e',
                 len(values), len(suspects), max_abs)
    if max_abs <= settings.tolerance:
        return ZeroReport(Verdict.NUMERICALLY_ZERO, max_abs, len(values))
    return ZeroReport(Verdict.NUMERICALLY_NONZERO, max_abs, len(values))
