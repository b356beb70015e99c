"""
The dictionary between carved spaces and their algebras.

A carved space is never represented as a point set: it is its algebra plus the
names of its coordinates, one per generator. Coordinate maps between carved
spaces are polynomial, and compile contravariantly into validated algebra
homomorphisms.
"""
import functools
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import sympy

from synthdg import scalar_algebra as sa
from synthdg.errors import ComposabilityMismatch, DimensionMismatch, IndexOutOfRange
from synthdg.expressions import Expression, parse, symbols_for
from synthdg.permutations import Permutation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CarvedSpace:
    algebra: sa.FpAlgebra
    label: str

    @property
    def coordinates(self) -> Tuple[str, ...]:
        return self.algebra.generators

    @property
    def dim(self) -> int:
        return self.algebra.rank

    def is_infinitesimal(self, coordinate: str) -> bool:
        return self.algebra.nilpotent_flags[self.algebra.index(coordinate)]

    def __str__(self) -> str:
        return self.label


def space_D(n: int = 1) -> CarvedSpace:
    """D^n, with algebra k[X1..Xn]/(X1^2..Xn^2); D itself uses the single generator X."""
    if n < 0:
        raise IndexOutOfRange(n, 0, n)
    label = "D" if n == 1 else f"D^{n}"
    return CarvedSpace(sa.weil_power(n), label)


def space_D2() -> CarvedSpace:
    """D(2) = {(x, y) in D x D | xy = 0}"""
    return CarvedSpace(sa.first_order(["X", "Y"]), "D(2)")


def space_R(n: int = 1) -> CarvedSpace:
    if n < 0:
        raise IndexOutOfRange(n, 0, n)
    label = "R" if n == 1 else f"R^{n}"
    return CarvedSpace(sa.polynomial_ring(n), label)


def space_product(a: CarvedSpace, b: CarvedSpace) -> CarvedSpace:
    """
    space_product concatenates coordinates. Names are kept when they are
    disjoint, otherwise the tensor renaming applies.
    """
    label = f"{a.label}x{b.label}"
    if set(a.coordinates) & set(b.coordinates):
        return CarvedSpace(sa.tensor(a.algebra, b.algebra), label)
    generators = a.coordinates + b.coordinates
    relations = [r.concat(sa.Monomial.unit(b.dim)) for r in a.algebra.relations] + [
        sa.Monomial.unit(a.dim).concat(r) for r in b.algebra.relations
    ]
    return CarvedSpace(sa.FpAlgebra.create(generators, relations), label)


@dataclass(frozen=True)
class CarveMap:
    """
    CarveMap is a polynomial map source -> target, one component per target
    coordinate written in the source coordinates. It only exists once its dual
    homomorphism has been validated.
    """

    source: CarvedSpace
    target: CarvedSpace
    components: Tuple[sympy.Expr, ...]
    name: str = ""

    @staticmethod
    def create(
        source: CarvedSpace,
        target: CarvedSpace,
        components: Sequence[Expression],
        name: str = "",
    ) -> "CarveMap":
        if len(components) != target.dim:
            raise DimensionMismatch(f"components of a map into {target}", target.dim, len(components))
        parsed = tuple(sympy.expand(parse(c, source.coordinates)) for c in components)
        carve_map = CarveMap(source, target, parsed, name)
        dual_hom(carve_map)
        return carve_map

    def __str__(self) -> str:
        if self.name:
            return self.name
        body = ", ".join(str(c) for c in self.components)
        return f"({', '.join(self.source.coordinates)}) -> ({body}) : {self.source} -> {self.target}"


@functools.lru_cache(maxsize=None)
def dual_hom(carve_map: CarveMap) -> sa.AlgebraHom:
    """
    dual_hom compiles a coordinate map into the homomorphism W(target) -> W(source)
    sending each target generator to the normal form of its component.
    Raises RelationViolated when the map does not land in the target.
    """
    hom = sa.hom_make(
        carve_map.target.algebra, carve_map.source.algebra, list(carve_map.components)
    )
    logger.debug("compiled %s into %s", carve_map, hom)
    return hom


def carve_compose(g: CarveMap, f: CarveMap) -> CarveMap:
    """g . f"""
    if f.target != g.source:
        raise ComposabilityMismatch(f"Cannot compose: [{f.target}] is not [{g.source}]")
    substitution = dict(zip(symbols_for(g.source.coordinates), f.components))
    components = [sympy.expand(c.xreplace(substitution)) for c in g.components]
    name = f"{g.name} . {f.name}" if g.name and f.name else ""
    return CarveMap.create(f.source, g.target, components, name)


def identity(space: CarvedSpace) -> CarveMap:
    return CarveMap.create(space, space, list(space.coordinates), f"id_{space}")


def dual_contravariance_check(f: CarveMap, g: CarveMap) -> bool:
    """dual_hom(g . f) == dual_hom(f) . dual_hom(g)"""
    composite = dual_hom(carve_compose(g, f))
    return composite == sa.hom_compose(dual_hom(f), dual_hom(g))


# Named maps


@functools.lru_cache(maxsize=None)
def first_axis() -> CarveMap:
    """d -> (d, 0) : D -> D(2)"""
    return CarveMap.create(space_D(), space_D2(), ["X", "0"], "d->(d,0)")


@functools.lru_cache(maxsize=None)
def second_axis() -> CarveMap:
    """d -> (0, d) : D -> D(2)"""
    return CarveMap.create(space_D(), space_D2(), ["0", "X"], "d->(0,d)")


@functools.lru_cache(maxsize=None)
def square_second_axis() -> CarveMap:
    """d -> (0, d) : D -> D^2"""
    return CarveMap.create(space_D(), space_D(2), ["0", "X"], "d->(0,d) in D^2")


@functools.lru_cache(maxsize=None)
def zero_point() -> CarveMap:
    """d -> (0, 0) : D -> D^2"""
    return CarveMap.create(space_D(), space_D(2), ["0", "0"], "d->(0,0)")


@functools.lru_cache(maxsize=None)
def diagonal() -> CarveMap:
    """d -> (d, d) : D -> D(2)"""
    return CarveMap.create(space_D(), space_D2(), ["X", "X"], "d->(d,d)")


@functools.lru_cache(maxsize=None)
def projection() -> CarveMap:
    """(d1, d2) -> d1 : D(2) -> D"""
    return CarveMap.create(space_D2(), space_D(), ["X"], "(d1,d2)->d1")


@functools.lru_cache(maxsize=None)
def fold_product() -> CarveMap:
    """(d1, d2) -> (d1, d1 d2) : D^2 -> D(2)"""
    return CarveMap.create(space_D(2), space_D2(), ["X1", "X1*X2"], "(d1,d2)->(d1,d1d2)")


@functools.lru_cache(maxsize=None)
def scalar_action() -> CarveMap:
    """(r, d) -> rd : R x D -> D"""
    return CarveMap.create(
        space_product(space_R(), space_D()), space_D(), ["Z*X"], "(r,d)->rd"
    )


@functools.lru_cache(maxsize=None)
def pair_scalar_action() -> CarveMap:
    """(r, d1, d2) -> (r d1, r d2) : R x D(2) -> D(2)"""
    return CarveMap.create(
        space_product(space_R(), space_D2()), space_D2(), ["Z*X", "Z*Y"], "(r,d1,d2)->(rd1,rd2)"
    )


@functools.lru_cache(maxsize=None)
def scalar_diagonal() -> CarveMap:
    """(r, d) -> (r, d, d) : R x D -> R x D(2)"""
    return CarveMap.create(
        space_product(space_R(), space_D()),
        space_product(space_R(), space_D2()),
        ["Z", "X", "X"],
        "(r,d)->(r,d,d)",
    )


@functools.lru_cache(maxsize=None)
def inclusion_d_r() -> CarveMap:
    """d -> d : D -> R"""
    return CarveMap.create(space_D(), space_R(), ["X"], "d->d")


@functools.lru_cache(maxsize=None)
def d2_inclusion() -> CarveMap:
    """(d1, d2) -> (d1, d2) : D(2) -> R^2"""
    return CarveMap.create(space_D2(), space_R(2), ["X", "Y"], "D(2)->R^2")


@functools.lru_cache(maxsize=None)
def diagonal_r() -> CarveMap:
    """r -> (r, r) : R -> R^2"""
    return CarveMap.create(space_R(), space_R(2), ["Z", "Z"], "r->(r,r)")


def _cube_coordinates(n: int) -> Tuple[str, ...]:
    return space_D(n).coordinates


@functools.lru_cache(maxsize=None)
def permutation_map(sigma: Permutation) -> CarveMap:
    """
    (d1..dn) -> (d_sigma(1)..d_sigma(n)) : D^n -> D^n. Its dual sends X_i to
    X_sigma(i), which moves the coefficient of X_S to X_sigma(S).
    """
    cube = space_D(sigma.size)
    names = cube.coordinates
    components = [names[sigma(i) - 1] for i in range(1, sigma.size + 1)]
    return CarveMap.create(cube, cube, components, f"permute{sigma}")


@functools.lru_cache(maxsize=None)
def direction_scaling(n: int, i: int) -> CarveMap:
    """(a, d1..dn) -> (d1, .., a d_i, .., dn) : R x D^n -> D^n"""
    if not 1 <= i <= n:
        raise IndexOutOfRange(i, 1, n)
    cube = space_D(n)
    names = cube.coordinates
    components = [f"Z*{x}" if k == i else x for k, x in enumerate(names, start=1)]
    return CarveMap.create(space_product(space_R(), cube), cube, components, f"scale_{i} on D^{n}")


def _cycle(n1: int, i: int) -> List[int]:
    # _cycle[k - 1] is the direction that ends up at position k
    return [k for k in range(1, n1 + 1) if k != i] + [i]


def _cycle_components(n1: int, i: int) -> List[str]:
    # the dual sends X_k to X_(position of k)
    names = space_D(n1).coordinates
    order = _cycle(n1, i)
    return [names[order.index(k)] for k in range(1, n1 + 1)]


@functools.lru_cache(maxsize=None)
def boundary_cycle(n1: int, i: int) -> CarveMap:
    """
    The carve map whose dual moves direction i of an n1-microcube last and
    keeps the order of the others: X_k goes to X_k for k < i, to X_(k-1) for
    k > i, and X_i goes to X_n1.
    """
    if not 1 <= i <= n1:
        raise IndexOutOfRange(i, 1, n1)
    cube = space_D(n1)
    return CarveMap.create(cube, cube, _cycle_components(n1, i), f"boundary_{i} on D^{n1}")


@functools.lru_cache(maxsize=None)
def identity_times_boundary(n1: int, i: int) -> CarveMap:
    """(a, d) -> (a, boundary_i(d)) : R x D^n1 -> R x D^n1"""
    if not 1 <= i <= n1:
        raise IndexOutOfRange(i, 1, n1)
    space = space_product(space_R(), space_D(n1))
    components = ["Z"] + _cycle_components(n1, i)
    return CarveMap.create(space, space, components, f"id x boundary_{i} on D^{n1}")


def named_maps() -> Dict[str, CarveMap]:
    """Every named map of fixed shape, by name."""
    maps = [
        first_axis(),
        second_axis(),
        square_second_axis(),
        zero_point(),
        diagonal(),
        projection(),
        fold_product(),
        scalar_action(),
        pair_scalar_action(),
        scalar_diagonal(),
        inclusion_d_r(),
        d2_inclusion(),
        diagonal_r(),
    ]
    for n in (1, 2, 3):
        for sigma in Permutation.all(n):
            maps.append(permutation_map(sigma))
        for i in range(1, n + 1):
            maps.append(direction_scaling(n, i))
            maps.append(boundary_cycle(n, i))
    return {m.name: m for m in maps}
