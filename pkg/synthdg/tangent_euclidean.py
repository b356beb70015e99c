"""
Tangent vectors as W_D-points, the module structure on each tangent space, and
the Euclidean-module checks for E = R^m with its coordinatewise structure.

Every check returns LawResult entries; a failing law carries the first failing
instance as its witness.
"""
import logging
import random
from fractions import Fraction
from typing import Any, Callable, List, Optional, Sequence, Tuple

from synthdg import duality
from synthdg import scalar_algebra as sa
from synthdg.errors import BaseMismatch
from synthdg.prolongation import SmoothMap, WPoint, alpha, instantiate_free, iota, reassociate, tau, unreassociate
from synthdg.report import LawResult, law
from synthdg.sampling import make_rng, random_rational, random_vector

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]
Trial = Callable[[random.Random], Optional[dict]]

_UNIT = sa.Monomial.unit(1)
_X = sa.Monomial.generator(1, 0)


def tangent(p: Sequence[Any], v: Sequence[Any]) -> WPoint:
    """The tangent vector v at p, i.e. the W_D-point p + vX."""
    x = sa.W_D.generator("X")
    return WPoint.from_components(sa.W_D, [x * b + a for a, b in zip(p, v)])


def tangent_vector(t: WPoint) -> Vector:
    return t.coefficient(_X)


def tangent_add(t1: WPoint, t2: WPoint) -> WPoint:
    """
    tangent_add glues (p, v1, v2) into a W_D(2)-point and pulls it back along
    d -> (d, d).
    """
    if tau(t1) != tau(t2):
        raise BaseMismatch(tau(t1), tau(t2))
    d2 = sa.W_D2
    x, y = d2.generator("X"), d2.generator("Y")
    glued = WPoint.from_components(
        d2,
        [x * b + y * c + a for a, b, c in zip(tau(t1), tangent_vector(t1), tangent_vector(t2))],
    )
    return alpha(duality.dual_hom(duality.diagonal()), glued)


def tangent_scale(r: Any, t: WPoint) -> WPoint:
    """
    tangent_scale pushes t along (r, d) -> rd as a family over the free
    generator Z and evaluates the family at Z = r.
    """
    family = alpha(duality.dual_hom(duality.scalar_action()), t)
    return instantiate_free(family, {"Z": r})


def _run(
    id: str, anchor: str, instance: str, trial: Trial, samples: int, rng: random.Random
) -> LawResult:
    for _ in range(samples):
        witness = trial(rng)
        if witness is not None:
            logger.info("law %s failed on %s", id, instance)
            return law(id, anchor, instance, False, **witness)
    return law(id, anchor, instance, True)


def tangent_module_check(m: int, samples: int = 100, seed: int = 0) -> List[LawResult]:
    """Abelian group and module laws of the tangent space at a random point of R^m."""
    rng = make_rng(seed)
    instance = f"R^{m}, {samples} random cases"

    def vectors(rng: random.Random, count: int) -> Tuple[Vector, List[WPoint]]:
        p = tuple(random_vector(rng, m))
        return p, [tangent(p, random_vector(rng, m)) for _ in range(count)]

    def commutative(rng: random.Random) -> Optional[dict]:
        _, (t1, t2) = vectors(rng, 2)
        if tangent_add(t1, t2) != tangent_add(t2, t1):
            return {"t1": t1, "t2": t2}
        return None

    def associative(rng: random.Random) -> Optional[dict]:
        _, (t1, t2, t3) = vectors(rng, 3)
        if tangent_add(tangent_add(t1, t2), t3) != tangent_add(t1, tangent_add(t2, t3)):
            return {"t1": t1, "t2": t2, "t3": t3}
        return None

    def zero(rng: random.Random) -> Optional[dict]:
        p, (t,) = vectors(rng, 1)
        if tangent_add(t, iota(sa.W_D, p)) != t:
            return {"t": t}
        return None

    def vector_sum(rng: random.Random) -> Optional[dict]:
        p, (t1, t2) = vectors(rng, 2)
        expected = tangent(p, [a + b for a, b in zip(tangent_vector(t1), tangent_vector(t2))])
        if tangent_add(t1, t2) != expected:
            return {"t1": t1, "t2": t2}
        return None

    def scale_associative(rng: random.Random) -> Optional[dict]:
        _, (t,) = vectors(rng, 1)
        r, s = random_rational(rng), random_rational(rng)
        if tangent_scale(r, tangent_scale(s, t)) != tangent_scale(r * s, t):
            return {"r": r, "s": s, "t": t}
        return None

    def scale_unital(rng: random.Random) -> Optional[dict]:
        p, (t,) = vectors(rng, 1)
        if tangent_scale(Fraction(1), t) != t or tangent_scale(Fraction(0), t) != iota(sa.W_D, p):
            return {"t": t}
        return None

    def distributes_over_vectors(rng: random.Random) -> Optional[dict]:
        _, (t1, t2) = vectors(rng, 2)
        r = random_rational(rng)
        left = tangent_scale(r, tangent_add(t1, t2))
        if left != tangent_add(tangent_scale(r, t1), tangent_scale(r, t2)):
            return {"r": r, "t1": t1, "t2": t2}
        return None

    def distributes_over_scalars(rng: random.Random) -> Optional[dict]:
        _, (t,) = vectors(rng, 1)
        r, s = random_rational(rng), random_rational(rng)
        if tangent_scale(r + s, t) != tangent_add(tangent_scale(r, t), tangent_scale(s, t)):
            return {"r": r, "s": s, "t": t}
        return None

    laws = [
        ("tangent.add-commutative", commutative),
        ("tangent.add-associative", associative),
        ("tangent.add-zero", zero),
        ("tangent.add-coordinates", vector_sum),
        ("tangent.scale-associative", scale_associative),
        ("tangent.scale-unital", scale_unital),
        ("tangent.distributive-vectors", distributes_over_vectors),
        ("tangent.distributive-scalars", distributes_over_scalars),
    ]
    return [_run(f"{id}.m{m}", "tangent-module", instance, trial, samples, rng) for id, trial in laws]


def euclidean_map(a: Sequence[Any], b: Sequence[Any]) -> WPoint:
    """
    euclidean_map is the bijection E x E -> E (x) W_D: the family r -> a + r b
    over the free generator Z, restricted along d -> d.
    """
    z = sa.polynomial_ring(1).generator("Z")
    family = WPoint.from_components(z.algebra, [z * y + x for x, y in zip(a, b)])
    return alpha(duality.dual_hom(duality.inclusion_d_r()), family)


def euclidean_inverse(t: WPoint) -> Tuple[Vector, Vector]:
    return t.coefficient(_UNIT), t.coefficient(_X)


def euclidean_check(m: int, samples: int = 100, seed: int = 0) -> List[LawResult]:
    """
    euclidean_check verifies that E = R^m is Euclidean: euclidean_map is a
    bijection with inverse euclidean_inverse, and the module structures it
    transports are tangent_add and tangent_scale.
    """
    rng = make_rng(seed)
    instance = f"E = R^{m}, {samples} random cases"

    def forward(rng: random.Random) -> Optional[dict]:
        a, b = tuple(random_vector(rng, m)), tuple(random_vector(rng, m))
        if euclidean_inverse(euclidean_map(a, b)) != (a, b):
            return {"a": a, "b": b}
        return None

    def backward(rng: random.Random) -> Optional[dict]:
        t = WPoint.random(rng, sa.W_D, m)
        if euclidean_map(*euclidean_inverse(t)) != t:
            return {"t": t}
        return None

    def addition(rng: random.Random) -> Optional[dict]:
        a, b, c = (tuple(random_vector(rng, m)) for _ in range(3))
        summed = euclidean_map(a, [x + y for x, y in zip(b, c)])
        if tangent_add(euclidean_map(a, b), euclidean_map(a, c)) != summed:
            return {"a": a, "b": b, "c": c}
        return None

    def scaling(rng: random.Random) -> Optional[dict]:
        a, b = tuple(random_vector(rng, m)), tuple(random_vector(rng, m))
        r = random_rational(rng)
        if tangent_scale(r, euclidean_map(a, b)) != euclidean_map(a, [r * y for y in b]):
            return {"r": r, "a": a, "b": b}
        return None

    laws = [
        ("euclidean.bijection", "euclidean-module", forward),
        ("euclidean.inverse", "euclidean-module", backward),
        ("euclidean.addition", "euclidean-identification", addition),
        ("euclidean.scaling", "euclidean-identification", scaling),
    ]
    return [_run(f"{id}.m{m}", anchor, instance, trial, samples, rng) for id, anchor, trial in laws]


def _nested_map(a: WPoint, b: WPoint) -> WPoint:
    """euclidean_map for E (x) W, with W-valued coefficients."""
    z = sa.polynomial_ring(1).generator("Z")
    components = [
        sa.AlgElement.from_terms(z.algebra, [(_UNIT, x), (_X, y)]) for x, y in zip(a.components, b.components)
    ]
    family = WPoint(z.algebra, tuple(components))
    return alpha(duality.dual_hom(duality.inclusion_d_r()), family)


def euclidean_tensor_check(m: int, w: sa.FpAlgebra, samples: int = 100, seed: int = 0) -> List[LawResult]:
    """
    euclidean_tensor_check verifies that E (x) W is Euclidean for a Weil algebra W.
    Points of E (x) W are W-points of R^m; its tangent points are flattened into
    W_D (x) W and must correspond one to one with pairs of W-points. E (x) W is
    R^(m dim W) coordinatewise, which is checked with euclidean_check as well.
    """
    dim_w = sa.dimension(w)
    rng = make_rng(seed)
    flat_algebra = sa.tensor(sa.W_D, w)
    instance = f"E = R^{m}, W = {w}, {samples} random cases"

    def forward(rng: random.Random) -> Optional[dict]:
        a, b = WPoint.random(rng, w, m), WPoint.random(rng, w, m)
        flat = reassociate(_nested_map(a, b), w)
        nested = unreassociate(flat, sa.W_D, w)
        components = [c.coefficient(_UNIT) for c in nested.components], [c.coefficient(_X) for c in nested.components]
        recovered = tuple(WPoint.from_components(w, cs) for cs in components)
        if recovered != (a, b):
            return {"a": a, "b": b, "flat": flat}
        return None

    def backward(rng: random.Random) -> Optional[dict]:
        flat = WPoint.random(rng, flat_algebra, m)
        nested = unreassociate(flat, sa.W_D, w)
        a = WPoint.from_components(w, [c.coefficient(_UNIT) for c in nested.components])
        b = WPoint.from_components(w, [c.coefficient(_X) for c in nested.components])
        if reassociate(_nested_map(a, b), w) != flat:
            return {"flat": flat}
        return None

    results = [
        _run(f"euclidean-tensor.bijection.m{m}.{w}", "euclidean-tensor", instance, forward, samples, rng),
        _run(f"euclidean-tensor.inverse.m{m}.{w}", "euclidean-tensor", instance, backward, samples, rng),
        law(
            f"euclidean-tensor.dimension.m{m}.{w}",
            "euclidean-tensor",
            instance,
            sa.dimension(flat_algebra) == 2 * dim_w,
            expected=2 * dim_w,
            actual=sa.dimension(flat_algebra),
        ),
    ]
    return results + euclidean_check(m * dim_w, samples, seed)


def fibered_tangent_check(m: int, samples: int = 100, seed: int = 0) -> List[LawResult]:
    """
    fibered_tangent_check verifies that W_D(2)-points of R^m are exactly pairs
    of tangents with a common base, the pair being obtained by pulling back
    along d -> (d, 0) and d -> (0, d).
    """
    rng = make_rng(seed)
    first = duality.dual_hom(duality.first_axis())
    second = duality.dual_hom(duality.second_axis())
    d2 = sa.W_D2
    instance = f"R^{m}, {samples} random cases"

    def split(q: WPoint) -> Tuple[WPoint, WPoint]:
        p = tau(q)
        x, y = sa.Monomial((1, 0)), sa.Monomial((0, 1))
        return tangent(p, q.coefficient(x)), tangent(p, q.coefficient(y))

    def glue(t1: WPoint, t2: WPoint) -> WPoint:
        if tau(t1) != tau(t2):
            raise BaseMismatch(tau(t1), tau(t2))
        x, y = d2.generator("X"), d2.generator("Y")
        return WPoint.from_components(
            d2, [x * b + y * c + a for a, b, c in zip(tau(t1), tangent_vector(t1), tangent_vector(t2))]
        )

    def legs(rng: random.Random) -> Optional[dict]:
        q = WPoint.random(rng, d2, m)
        if split(q) != (alpha(first, q), alpha(second, q)):
            return {"q": q}
        return None

    def round_trip(rng: random.Random) -> Optional[dict]:
        q = WPoint.random(rng, d2, m)
        t1, t2 = split(q)
        if glue(t1, t2) != q:
            return {"q": q}
        p = tuple(random_vector(rng, m))
        s1, s2 = tangent(p, random_vector(rng, m)), tangent(p, random_vector(rng, m))
        if split(glue(s1, s2)) != (s1, s2):
            return {"t1": s1, "t2": s2}
        return None

    def zero(rng: random.Random) -> Optional[dict]:
        p = tuple(random_vector(rng, m))
        if split(iota(d2, p)) != (iota(sa.W_D, p), iota(sa.W_D, p)):
            return {"p": p}
        return None

    e = duality.dual_hom(duality.fold_product())
    f = duality.dual_hom(duality.zero_point())
    g = duality.dual_hom(duality.square_second_axis())
    equalizer_dimension = len(sa.equalizer_subspace(f, g))
    return [
        _run(f"fibered.legs.m{m}", "fibered-tangent", instance, legs, samples, rng),
        _run(f"fibered.bijection.m{m}", "fibered-tangent", instance, round_trip, samples, rng),
        _run(f"fibered.zero.m{m}", "fibered-tangent", instance, zero, samples, rng),
        law(
            "fibered.equalizer",
            "equalizer",
            f"e = W[{duality.fold_product()}], f = W[{duality.zero_point()}], g = W[{duality.square_second_axis()}]",
            sa.equalizer_check(f, g, e),
        ),
        law(
            "fibered.equalizer-dimension",
            "equalizer",
            "subspace where the two legs agree",
            equalizer_dimension == sa.dimension(sa.W_D2),
            expected=sa.dimension(sa.W_D2),
            actual=equalizer_dimension,
        ),
    ]


def euclidean_d2_check(m: int, samples: int = 100, seed: int = 0) -> List[LawResult]:
    """
    euclidean_d2_check verifies E (x) W_D(2) = E x E x E through the family
    (a, b, c) -> a + Z1 b + Z2 c restricted along D(2) -> R^2, and that the sum
    of the two tangent parts is the pullback along d -> (d, d).
    """
    rng = make_rng(seed)
    plane = sa.polynomial_ring(2)
    restrict = duality.dual_hom(duality.d2_inclusion())
    to_line = duality.dual_hom(duality.diagonal_r())
    diagonal = duality.dual_hom(duality.diagonal())
    x, y = sa.Monomial((1, 0)), sa.Monomial((0, 1))
    instance = f"E = R^{m}, {samples} random cases"

    def family(a: Sequence[Any], b: Sequence[Any], c: Sequence[Any]) -> WPoint:
        z1, z2 = plane.generator("Z1"), plane.generator("Z2")
        return WPoint.from_components(plane, [z1 * u + z2 * v + s for s, u, v in zip(a, b, c)])

    def bijection(rng: random.Random) -> Optional[dict]:
        a, b, c = (tuple(random_vector(rng, m)) for _ in range(3))
        q = alpha(restrict, family(a, b, c))
        if (tau(q), q.coefficient(x), q.coefficient(y)) != (a, b, c):
            return {"a": a, "b": b, "c": c}
        return None

    def addition(rng: random.Random) -> Optional[dict]:
        a, b, c = (tuple(random_vector(rng, m)) for _ in range(3))
        q = alpha(restrict, family(a, b, c))
        if alpha(diagonal, q) != euclidean_map(a, [u + v for u, v in zip(b, c)]):
            return {"a": a, "b": b, "c": c}
        return None

    def diagonal_square(rng: random.Random) -> Optional[dict]:
        a, b, c = (tuple(random_vector(rng, m)) for _ in range(3))
        point = family(a, b, c)
        along_line = alpha(duality.dual_hom(duality.inclusion_d_r()), alpha(to_line, point))
        along_d2 = alpha(diagonal, alpha(restrict, point))
        if along_line != along_d2:
            return {"a": a, "b": b, "c": c}
        return None

    return [
        _run(f"euclidean-d2.bijection.m{m}", "euclidean-module", instance, bijection, samples, rng),
        _run(f"euclidean-d2.addition.m{m}", "euclidean-identification", instance, addition, samples, rng),
        _run(f"euclidean-d2.diagonal.m{m}", "euclidean-identification", instance, diagonal_square, samples, rng),
    ]


def distributivity_square_check(m: int, samples: int = 100, seed: int = 0) -> List[LawResult]:
    """
    distributivity_square_check reproduces the square behind distributivity of
    scaling over tangent addition: adding then scaling a W_D(2)-point agrees
    with scaling inside D(2) then adding.
    """
    rng = make_rng(seed)
    diagonal = duality.dual_hom(duality.diagonal())
    pair_action = duality.dual_hom(duality.pair_scalar_action())
    left = duality.carve_compose(duality.pair_scalar_action(), duality.scalar_diagonal())
    right = duality.carve_compose(duality.diagonal(), duality.scalar_action())

    def square(rng: random.Random) -> Optional[dict]:
        q = WPoint.random(rng, sa.W_D2, m)
        r = random_rational(rng)
        added_then_scaled = tangent_scale(r, alpha(diagonal, q))
        scaled = instantiate_free(alpha(pair_action, q), {"Z": r})
        if alpha(diagonal, scaled) != added_then_scaled:
            return {"r": r, "q": q}
        return None

    return [
        _run(f"distributivity.square.m{m}", "tangent-distributivity", f"R^{m}, {samples} random cases", square, samples, rng),
        law(
            "distributivity.maps",
            "tangent-distributivity",
            f"{duality.pair_scalar_action()} . {duality.scalar_diagonal()} = {duality.diagonal()} . {duality.scalar_action()}",
            duality.dual_hom(left) == duality.dual_hom(right),
            left=duality.dual_hom(left),
            right=duality.dual_hom(right),
        ),
    ]


def exponential_trivial_check(m: int, samples: int = 100, seed: int = 0) -> List[LawResult]:
    """
    exponential_trivial_check covers E^X for X = R^0: a map R^0 -> E is its
    single value, and evaluation at the unique point carries the tangent
    structure of E^X onto that of E.
    """
    rng = make_rng(seed)

    def constant(values: Sequence[Any]) -> SmoothMap:
        frozen = tuple(values)
        return SmoothMap.from_callable(0, m, lambda _: list(frozen), polynomial=True)

    def transported(rng: random.Random) -> Optional[dict]:
        f, g = constant(random_vector(rng, m)), constant(random_vector(rng, m))
        a, b = f([]), g([])
        x = sa.W_D.generator("X")
        evaluated = WPoint.from_components(sa.W_D, [x * v + u for u, v in zip(a, b)])
        if evaluated != euclidean_map(a, b) or euclidean_inverse(evaluated) != (tuple(a), tuple(b)):
            return {"f": a, "g": b}
        return None

    results = [
        _run(f"exponential.evaluation.m{m}", "exponential-euclidean", f"E^(R^0), E = R^{m}", transported, samples, rng)
    ]
    return results + euclidean_check(m, samples, seed)
