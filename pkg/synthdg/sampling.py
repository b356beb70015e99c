"""
Seeded random rationals, algebra elements and polynomials for the law checks.
Everything here is driven by an explicit random.Random so that reports are
reproducible from a single seed.
"""
import random
from fractions import Fraction
from typing import List, Sequence

import sympy

from synthdg import scalar_algebra as sa
from synthdg.expressions import symbols_for


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_rational(rng: random.Random, bound: int = 5, denominator: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound * denominator, bound * denominator), rng.randint(1, denominator))


def random_vector(rng: random.Random, m: int) -> List[Fraction]:
    return [random_rational(rng) for _ in range(m)]


def random_element(rng: random.Random, algebra: sa.FpAlgebra, max_degree: int = 2) -> sa.AlgElement:
    """
    A random element with a coefficient on every basis monomial of a Weil
    algebra, or on the normal monomials of degree <= max_degree otherwise.
    """
    if algebra.is_weil:
        monomials = sa.weil_basis(algebra)
    else:
        monomials = tuple(
            m for m in _monomials_up_to(algebra.rank, max_degree) if algebra.is_normal(m)
        )
    return algebra.element({m: random_rational(rng) for m in monomials})


def _monomials_up_to(rank: int, degree: int) -> List[sa.Monomial]:
    if rank == 0:
        return [sa.Monomial(())]
    result = []
    for first in range(degree + 1):
        for rest in _monomials_up_to(rank - 1, degree - first):
            result.append(sa.Monomial((first,) + rest.exponents))
    return result


def random_polynomial(
    rng: random.Random,
    names: Sequence[str],
    degree: int,
    terms: int = 3,
    constant: bool = True,
) -> sympy.Expr:
    symbols = symbols_for(names)
    expr: sympy.Expr = sympy.Integer(0)
    monomials = _monomials_up_to(len(names), degree)
    if not constant:
        monomials = [m for m in monomials if not m.is_unit]
    if not monomials:
        return expr
    for _ in range(terms):
        monomial = rng.choice(monomials)
        coefficient = random_rational(rng, bound=3, denominator=2)
        term: sympy.Expr = sympy.Rational(coefficient.numerator, coefficient.denominator)
        for symbol, exponent in zip(symbols, monomial.exponents):
            term = term * symbol**exponent
        expr = expr + term
    return sympy.expand(expr)


def random_polynomial_map(
    rng: random.Random, names: Sequence[str], codomain_dim: int, degree: int
) -> List[sympy.Expr]:
    return [random_polynomial(rng, names, degree) for _ in range(codomain_dim)]
