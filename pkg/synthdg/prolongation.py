"""
Prolongation T^A on the model spaces R^m.

A point of T^A R^m is an m-tuple of elements of A (a WPoint). A smooth map is
a scalar-generic program, so T^A f is simply the program evaluated with
AlgElement coordinates.
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from synthdg import sampling
from synthdg import scalar_algebra as sa
from synthdg.errors import (
    AlgebraMismatch,
    DimensionMismatch,
    FreeGeneratorRequired,
    NaturalityViolated,
    NestingMismatch,
)
from synthdg.expressions import Expression, compile_expression, is_polynomial, parse, symbols_for

logger = logging.getLogger(__name__)

Body = Callable[[Sequence[Any]], Sequence[Any]]


@dataclass(frozen=True)
class FormalSpace:
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise DimensionMismatch("a formal space", 0, self.dim)

    def __str__(self) -> str:
        return f"R^{self.dim}"


def default_variables(dim: int) -> Tuple[str, ...]:
    if dim <= 3:
        return ("x", "y", "z")[:dim]
    return tuple(f"x{i}" for i in range(1, dim + 1))


@dataclass(frozen=True, eq=False)
class SmoothMap:
    """
    SmoothMap R^domain_dim -> R^codomain_dim. Maps built from expression strings
    keep their sympy expressions, which makes them serializable, composable
    symbolically and, when polynomial, exactly liftable over the rationals.
    """

    domain_dim: int
    codomain_dim: int
    body: Body
    polynomial: bool
    variables: Tuple[str, ...] = ()
    expressions: Optional[Tuple[sympy.Expr, ...]] = None
    name: str = ""

    @staticmethod
    def from_expressions(
        components: Sequence[Expression],
        variables: Optional[Sequence[str]] = None,
        name: str = "",
    ) -> "SmoothMap":
        names = tuple(variables) if variables is not None else _infer_variables(components)
        exprs = tuple(parse(c, names) for c in components)
        compiled = [compile_expression(e, names) for e in exprs]

        def body(values: Sequence[Any]) -> List[Any]:
            return [c(values) for c in compiled]

        return SmoothMap(
            domain_dim=len(names),
            codomain_dim=len(exprs),
            body=body,
            polynomial=all(is_polynomial(e, names) for e in exprs),
            variables=names,
            expressions=exprs,
            name=name,
        )

    @staticmethod
    def from_callable(
        domain_dim: int, codomain_dim: int, body: Body, polynomial: bool = False, name: str = ""
    ) -> "SmoothMap":
        return SmoothMap(domain_dim, codomain_dim, body, polynomial, default_variables(domain_dim), None, name)

    @staticmethod
    def identity(dim: int) -> "SmoothMap":
        names = default_variables(dim)
        return SmoothMap.from_expressions(list(names), names, f"id_R^{dim}")

    def compose(self, inner: "SmoothMap") -> "SmoothMap":
        """self . inner"""
        if inner.codomain_dim != self.domain_dim:
            raise DimensionMismatch(f"composition with {self}", self.domain_dim, inner.codomain_dim)
        if self.expressions is not None and inner.expressions is not None:
            substitution = dict(zip(symbols_for(self.variables), inner.expressions))
            components = [e.xreplace(substitution) for e in self.expressions]
            return SmoothMap.from_expressions(components, inner.variables)
        outer_body, inner_body = self.body, inner.body

        def body(values: Sequence[Any]) -> Sequence[Any]:
            return outer_body(inner_body(values))

        return SmoothMap.from_callable(
            inner.domain_dim, self.codomain_dim, body, self.polynomial and inner.polynomial
        )

    def __call__(self, point: Sequence[Any]) -> List[Any]:
        if len(point) != self.domain_dim:
            raise DimensionMismatch(f"arguments of {self}", self.domain_dim, len(point))
        return list(self.body(point))

    def __str__(self) -> str:
        if self.name:
            return self.name
        if self.expressions is not None:
            body = ", ".join(str(e) for e in self.expressions)
            return f"({', '.join(self.variables)}) -> ({body})"
        return f"<map R^{self.domain_dim} -> R^{self.codomain_dim}>"


def _infer_variables(components: Sequence[Expression]) -> Tuple[str, ...]:
    symbols = set()
    for component in components:
        expr = component if isinstance(component, sympy.Expr) else sympy.sympify(str(component))
        symbols |= {str(s) for s in expr.free_symbols}
    return tuple(sorted(symbols))


@dataclass(frozen=True)
class WPoint:
    """
    WPoint is a point of T^A R^m: one AlgElement of `algebra` per coordinate.
    The coefficient view maps each monomial to the vector of its coefficients.
    """

    algebra: sa.FpAlgebra
    components: Tuple[sa.AlgElement, ...]

    @staticmethod
    def from_components(algebra: sa.FpAlgebra, components: Sequence[Any]) -> "WPoint":
        elements = []
        for component in components:
            if isinstance(component, sa.AlgElement) and component.algebra == algebra:
                elements.append(component)
            elif isinstance(component, sa.AlgElement) and component.wraps(algebra):
                raise NestingMismatch(
                    f"[{component}] is an outer level over [{algebra}], not a coordinate in it"
                )
            else:
                elements.append(algebra.constant(component))
        return WPoint(algebra, tuple(elements))

    @staticmethod
    def from_coefficients(
        algebra: sa.FpAlgebra, dim: int, coefficients: Mapping[sa.Monomial, Sequence[Any]]
    ) -> "WPoint":
        components = []
        for axis in range(dim):
            terms = {}
            for monomial, vector in coefficients.items():
                if len(vector) != dim:
                    raise DimensionMismatch(f"coefficient of {monomial.render(algebra.generators)}", dim, len(vector))
                terms[monomial] = vector[axis]
            components.append(algebra.element(terms))
        return WPoint(algebra, tuple(components))

    @staticmethod
    def random(rng: random.Random, algebra: sa.FpAlgebra, dim: int) -> "WPoint":
        return WPoint(algebra, tuple(sampling.random_element(rng, algebra) for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def space(self) -> FormalSpace:
        return FormalSpace(self.dim)

    def coefficient(self, monomial: sa.Monomial) -> Tuple[Any, ...]:
        return tuple(c.coefficient(monomial) for c in self.components)

    @property
    def coeffs(self) -> Dict[sa.Monomial, Tuple[Any, ...]]:
        monomials = sorted(
            {m for c in self.components for m, _ in c.terms}, key=sa.Monomial.sort_key
        )
        return {m: self.coefficient(m) for m in monomials}

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def prolong(f: SmoothMap, algebra: sa.FpAlgebra, p: WPoint) -> WPoint:
    """T^A f at p."""
    if p.algebra != algebra:
        raise AlgebraMismatch(algebra, p.algebra)
    if p.dim != f.domain_dim:
        raise DimensionMismatch(f"points of the domain of {f}", f.domain_dim, p.dim)
    values = f(list(p.components))
    if len(values) != f.codomain_dim:
        raise DimensionMismatch(f"values of {f}", f.codomain_dim, len(values))
    return WPoint.from_components(algebra, values)


def alpha(phi: sa.AlgebraHom, p: WPoint) -> WPoint:
    """alpha_phi = id (x) phi : T^A R^m -> T^B R^m"""
    if p.algebra != phi.source:
        raise AlgebraMismatch(phi.source, p.algebra)
    return WPoint(phi.target, tuple(sa.hom_apply(phi, c) for c in p.components))


def tau(p: WPoint) -> Tuple[Any, ...]:
    """The base point: the unit coefficients."""
    return tuple(c.unit_part() for c in p.components)


def iota(algebra: sa.FpAlgebra, q: Sequence[Any]) -> WPoint:
    """The zero section: q with no infinitesimal part."""
    return WPoint(algebra, tuple(algebra.constant(v) for v in q))


def reassociate(p: WPoint, inner: sa.FpAlgebra) -> WPoint:
    """
    reassociate flattens a point over A whose coefficients are elements of
    `inner` into a point over A (x) inner, pairing monomials.
    """
    target = sa.tensor(p.algebra, inner)
    components = []
    for component in p.components:
        terms = []
        for outer_monomial, coefficient in component.terms:
            if isinstance(coefficient, sa.AlgElement):
                if coefficient.algebra != inner:
                    raise NestingMismatch(
                        f"Coefficient [{coefficient}] is not an element of [{inner}]"
                    )
                inner_terms = coefficient.terms
            else:
                inner_terms = ((inner.unit_monomial(), coefficient),)
            for inner_monomial, value in inner_terms:
                terms.append((outer_monomial.concat(inner_monomial), value))
        components.append(sa.AlgElement.from_terms(target, terms))
    return WPoint(target, tuple(components))


def unreassociate(p: WPoint, outer: sa.FpAlgebra, inner: sa.FpAlgebra) -> WPoint:
    """The inverse of reassociate."""
    if p.algebra != sa.tensor(outer, inner):
        raise NestingMismatch(f"[{p.algebra}] is not the tensor of [{outer}] and [{inner}]")
    components = []
    for component in p.components:
        grouped: Dict[sa.Monomial, List[Tuple[sa.Monomial, Any]]] = {}
        for monomial, value in component.terms:
            outer_monomial = sa.Monomial(monomial.exponents[: outer.rank])
            inner_monomial = sa.Monomial(monomial.exponents[outer.rank :])
            grouped.setdefault(outer_monomial, []).append((inner_monomial, value))
        components.append(
            sa.AlgElement.from_terms(
                outer,
                ((m, sa.AlgElement.from_terms(inner, terms)) for m, terms in grouped.items()),
            )
        )
    return WPoint(outer, tuple(components))


def instantiate_free(p: WPoint, values: Mapping[str, Any]) -> WPoint:
    """
    instantiate_free evaluates a family over free generators at scalar values.
    The generators are dropped from the algebra.
    """
    algebra = p.algebra
    positions = {}
    for name, value in values.items():
        index = algebra.index(name)
        if any(r.exponents[index] for r in algebra.relations):
            raise FreeGeneratorRequired(name)
        positions[index] = value
    kept = [i for i in range(algebra.rank) if i not in positions]
    target = sa.FpAlgebra.create(
        [algebra.generators[i] for i in kept],
        [sa.Monomial(tuple(r.exponents[i] for i in kept)) for r in algebra.relations],
    )

    def substitute(component: sa.AlgElement) -> sa.AlgElement:
        terms = []
        for monomial, coefficient in component.terms:
            factor: Any = Fraction(1)
            for index, value in positions.items():
                exponent = monomial.exponents[index]
                if exponent:
                    factor = factor * value**exponent
            reduced = sa.Monomial(tuple(monomial.exponents[i] for i in kept))
            terms.append((reduced, coefficient * factor))
        return sa.AlgElement.from_terms(target, terms)

    return WPoint(target, tuple(substitute(c) for c in p.components))


def bimap(f: SmoothMap, phi: sa.AlgebraHom, p: WPoint) -> WPoint:
    """
    f (x) phi at p. Both ways of computing it are evaluated; they must agree.
    """
    first = alpha(phi, prolong(f, phi.source, p))
    second = prolong(f, phi.target, alpha(phi, p))
    if first != second:
        raise NaturalityViolated(f"alpha({phi}) does not commute with {f} at {p}: {first} != {second}")
    return first


def derivative(f: SmoothMap, point: Sequence[Any], direction: Optional[Sequence[Any]] = None) -> List[Any]:
    """
    derivative is the directional derivative Df(point).direction, read off the
    dual number prolongation. The direction defaults to the first axis.
    """
    if direction is None:
        direction = [1] + [0] * (len(point) - 1)
    if len(direction) != len(point):
        raise DimensionMismatch("the direction", len(point), len(direction))
    if any(isinstance(u, float) for u in point):
        direction = [float(v) for v in direction]
    w_d = sa.W_D
    x = w_d.generator("X")
    p = WPoint.from_components(w_d, [x * v + u for u, v in zip(point, direction)])
    return list(prolong(f, w_d, p).coefficient(sa.Monomial.generator(1, 0)))


def alpha_nested_check(phi: sa.AlgebraHom, inner: sa.FpAlgebra, p: WPoint) -> bool:
    """
    alpha_nested_check compares, for a point of T^A T^C R^m, applying phi to the
    outer level and flattening with flattening first and applying phi (x) id_C.
    """
    nested = reassociate(alpha(phi, p), inner)
    flat = alpha(sa.hom_tensor(phi, sa.identity(inner)), reassociate(p, inner))
    return nested == flat


def linear_map_check(algebra: sa.FpAlgebra, a: sa.AlgElement, b: sa.AlgElement) -> bool:
    """T^A R carries the ring structure of A: prolonged + and x are those of A."""
    plus = SmoothMap.from_expressions(["x + y"], ["x", "y"])
    times = SmoothMap.from_expressions(["x * y"], ["x", "y"])
    p = WPoint(algebra, (a, b))
    return (
        prolong(plus, algebra, p).components == (a + b,)
        and prolong(times, algebra, p).components == (a * b,)
    )
