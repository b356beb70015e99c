"""
Transcendental primitives that work on every scalar kind the engine knows
about. On a Weil algebra element u + n (unit part u, nilpotent part n) the
value is the Taylor polynomial sum_k f^(k)(u) / k! * n^k, which terminates at
the nilpotency index of the algebra. Unit parts may themselves be elements of
another algebra, in which case the rule recurses.
"""
import math
from fractions import Fraction
from typing import Any, Callable, Iterator

from synthdg.errors import InexactPrimitive, NotWeil
from synthdg.scalar_algebra import AlgElement

# derivatives(u) yields f(u), f'(u), f''(u), ...
Derivatives = Callable[[Any], Iterator[Any]]


def _taylor(name: str, derivatives: Derivatives, x: Any) -> Any:
    if isinstance(x, AlgElement):
        algebra = x.algebra
        if not algebra.is_weil:
            raise NotWeil(algebra, algebra.non_nilpotent_generators)
        nilpotent = x.nilpotent_part()
        base = x.unit_part()
        if _is_float_kind(x) and not isinstance(base, (AlgElement, float)):
            # a vanished unit term of a float element
            base = float(base)
        result = algebra.zero()
        power = algebra.one()
        factorial = 1
        for k, value in enumerate(derivatives(base)):
            if k:
                factorial *= k
                power = power.mul(nilpotent)
            if power.is_zero:
                return result
            result = result.add(power.scale(value * Fraction(1, factorial)))
    if isinstance(x, float):
        return next(derivatives(x))
    raise InexactPrimitive(name, x)


def _is_float_kind(x: Any) -> bool:
    if isinstance(x, AlgElement):
        return any(_is_float_kind(c) for _, c in x.terms)
    return isinstance(x, float)


def _scalar(function: Callable[[float], float], name: str, u: Any) -> Any:
    if isinstance(u, AlgElement):
        return _PRIMITIVES[name](u)
    if isinstance(u, float):
        return function(u)
    raise InexactPrimitive(name, u)


def _exp_derivatives(u: Any) -> Iterator[Any]:
    value = _scalar(math.exp, "exp", u)
    while True:
        yield value


def _sin_derivatives(u: Any) -> Iterator[Any]:
    s = _scalar(math.sin, "sin", u)
    c = _scalar(math.cos, "cos", u)
    cycle = (s, c, -s, -c)
    k = 0
    while True:
        yield cycle[k % 4]
        k += 1


def _cos_derivatives(u: Any) -> Iterator[Any]:
    s = _scalar(math.sin, "sin", u)
    c = _scalar(math.cos, "cos", u)
    cycle = (c, -s, -c, s)
    k = 0
    while True:
        yield cycle[k % 4]
        k += 1


def _log_derivatives(u: Any) -> Iterator[Any]:
    yield _scalar(math.log, "log", u)
    inverse = reciprocal(u)
    power = inverse
    k = 1
    while True:
        # d^k/du^k log(u) = (-1)^(k-1) (k-1)! / u^k
        yield power * ((-1) ** (k - 1) * math.factorial(k - 1))
        power = power * inverse
        k += 1


def exp(x: Any) -> Any:
    return _taylor("exp", _exp_derivatives, x)


def sin(x: Any) -> Any:
    return _taylor("sin", _sin_derivatives, x)


def cos(x: Any) -> Any:
    return _taylor("cos", _cos_derivatives, x)


def log(x: Any) -> Any:
    return _taylor("log", _log_derivatives, x)


def reciprocal(x: Any) -> Any:
    """1/x, exact for rationals and for units of a Weil algebra."""
    if isinstance(x, AlgElement):
        return x.inverse()
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


_PRIMITIVES = {"exp": exp, "sin": sin, "cos": cos, "log": log}
