"""
Infix expression strings over named coordinates, parsed with sympy and compiled
into scalar-generic closures. A compiled closure only uses `+`, `*`, integer
powers and the primitives of `synthdg.primitives`, so it evaluates over
Fractions, floats and Weil algebra elements alike.
"""
from fractions import Fraction
from tokenize import TokenError
from typing import Any, Callable, Dict, List, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.core.function import AppliedUndef

from synthdg import primitives
from synthdg.errors import ExpressionError, UnknownGenerator

Expression = Union[str, int, Fraction, sympy.Expr]
Compiled = Callable[[Sequence[Any]], Any]

_TRANSFORMATIONS = standard_transformations + (convert_xor,)

_PRIMITIVES: Dict[Any, Callable[[Any], Any]] = {
    sympy.exp: primitives.exp,
    sympy.sin: primitives.sin,
    sympy.cos: primitives.cos,
    sympy.log: primitives.log,
}


def symbols_for(names: Sequence[str]) -> Tuple[sympy.Symbol, ...]:
    for name in names:
        if not name.isidentifier():
            raise ExpressionError(
                f"Coordinate [{name}] cannot be used in expressions, names must be identifiers"
            )
    return tuple(sympy.Symbol(name) for name in names)


def parse(text: Expression, names: Sequence[str]) -> sympy.Expr:
    """
    parse turns `text` into a sympy expression whose free symbols are among
    `names`. Floating point literals are rejected: literals must be exact.
    """
    symbols = symbols_for(names)
    if isinstance(text, sympy.Expr):
        expr = text
    elif isinstance(text, (int, Fraction)):
        expr = sympy.Rational(text.numerator, text.denominator)
    else:
        local_dict = {str(s): s for s in symbols}
        try:
            expr = parse_expr(
                str(text), local_dict=local_dict, transformations=_TRANSFORMATIONS
            )
        except (SyntaxError, TypeError, TokenError, sympy.SympifyError) as e:
            raise ExpressionError(f"Could not parse [{text}]: {e}") from e
    if not isinstance(expr, sympy.Expr):
        raise ExpressionError(f"[{text}] is not an expression")
    if expr.atoms(sympy.Float):
        raise ExpressionError(
            f"[{text}] contains a floating point literal, use a rational such as 1/2"
        )
    for undefined in expr.atoms(AppliedUndef):
        raise ExpressionError(f"[{text}] calls unknown function [{undefined.func}]")
    known = set(symbols)
    for symbol in sorted(expr.free_symbols, key=str):
        if symbol not in known:
            raise UnknownGenerator(str(symbol), names)
    return expr


def is_polynomial(expr: sympy.Expr, names: Sequence[str]) -> bool:
    return bool(expr.is_polynomial(*symbols_for(names)))


def to_fraction(value: Any) -> Fraction:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def polynomial_terms(
    expr: sympy.Expr, names: Sequence[str]
) -> List[Tuple[Tuple[int, ...], Fraction]]:
    """Expands `expr` and returns its (exponents, coefficient) pairs."""
    if not names:
        if not expr.is_Rational:
            raise ExpressionError(f"[{expr}] is not a rational constant")
        value = to_fraction(expr)
        return [((), value)] if value != 0 else []
    try:
        poly = sympy.Poly(expr, *symbols_for(names), domain="QQ")
    except sympy.PolynomialError as e:
        raise ExpressionError(f"[{expr}] is not a polynomial in {list(names)}") from e
    return [
        (tuple(int(e) for e in exponents), to_fraction(coefficient))
        for exponents, coefficient in poly.terms()
        if coefficient != 0
    ]


def compile_expression(expr: sympy.Expr, names: Sequence[str]) -> Compiled:
    """
    compile_expression returns a closure evaluating `expr` at a sequence of
    values given in the order of `names`.
    """
    index = {name: i for i, name in enumerate(names)}
    if is_polynomial(expr, names):
        return _compile_polynomial(polynomial_terms(expr, names))
    return _compile_tree(expr, index)


def _compile_polynomial(terms: List[Tuple[Tuple[int, ...], Fraction]]) -> Compiled:
    def evaluate(values: Sequence[Any]) -> Any:
        total: Any = Fraction(0)
        for exponents, coefficient in terms:
            term: Any = coefficient
            for value, exponent in zip(values, exponents):
                if exponent:
                    term = term * value**exponent
            total = total + term
        return total

    return evaluate


def _compile_tree(expr: sympy.Expr, index: Dict[str, int]) -> Compiled:
    if isinstance(expr, sympy.Symbol):
        position = index[str(expr)]
        return lambda values: values[position]
    if isinstance(expr, sympy.Rational):
        constant = to_fraction(expr)
        return lambda values: constant
    if isinstance(expr, sympy.Add):
        parts = [_compile_tree(arg, index) for arg in expr.args]

        def add(values: Sequence[Any]) -> Any:
            total: Any = Fraction(0)
            for part in parts:
                total = total + part(values)
            return total

        return add
    if isinstance(expr, sympy.Mul):
        factors = [_compile_tree(arg, index) for arg in expr.args]

        def mul(values: Sequence[Any]) -> Any:
            product: Any = Fraction(1)
            for factor in factors:
                product = product * factor(values)
            return product

        return mul
    if isinstance(expr, sympy.Pow):
        base = _compile_tree(expr.base, index)
        exponent = expr.exp
        if not exponent.is_Integer:
            raise ExpressionError(f"Only integer powers are supported, got [{expr}]")
        power = int(exponent)
        if power >= 0:
            return lambda values: base(values) ** power
        return lambda values: primitives.reciprocal(base(values)) ** (-power)
    if expr.func in _PRIMITIVES:
        primitive = _PRIMITIVES[expr.func]
        argument = _compile_tree(expr.args[0], index)
        return lambda values: primitive(argument(values))
    raise ExpressionError(f"Unsupported expression [{expr}]")
