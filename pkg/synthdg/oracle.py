"""
Classical exterior derivative of a coefficient field, by symbolic
differentiation. Shares nothing with synthdg.exterior so that the two can be
compared.
"""
import itertools
from typing import Dict, Tuple

import sympy

from synthdg.expressions import symbols_for
from synthdg.forms import ClassicalTensorField


def classical_exterior_derivative(field: ClassicalTensorField) -> ClassicalTensorField:
    """
    For J = (j_0 < .. < j_n): (dA)_J = sum_k (-1)^k d/dx_(j_k) a_(J without j_k).
    """
    symbols = symbols_for(field.coordinates)
    coefficients: Dict[Tuple[int, ...], Tuple[sympy.Expr, ...]] = {}
    for indices in itertools.combinations(range(1, field.m + 1), field.n + 1):
        total = [sympy.Integer(0)] * field.e
        for k, j in enumerate(indices):
            rest = indices[:k] + indices[k + 1 :]
            sign = -1 if k % 2 else 1
            for axis, a in enumerate(field.coefficient(rest)):
                total[axis] += sign * sympy.diff(a, symbols[j - 1])
        expanded = tuple(sympy.expand(t) for t in total)
        if any(t != 0 for t in expanded):
            coefficients[indices] = expanded
    name = f"d({field})" if field.name else ""
    return ClassicalTensorField.create(field.n + 1, field.coordinates, coefficients, field.e, name)
