"""
Exterior differentiation.

The i-th partial integral of an n-form over an (n+1)-microcube moves the i-th
direction last, reads that direction as a dual number scalar e (e^2 = 0),
evaluates the form over those scalars and keeps the e-coefficient. The
exterior derivative is the alternating sum of the partial integrals.
"""
import functools
import logging
from fractions import Fraction
from typing import Any, List

from synthdg import duality
from synthdg import scalar_algebra as sa
from synthdg.errors import DimensionMismatch, IndexOutOfRange, NonGenericBody
from synthdg.forms import DifferentialForm, Microcube, integrate, make_form, scale_direction, permute_cube
from synthdg.permutations import Permutation
from synthdg.prolongation import alpha
from synthdg.report import LawResult, law
from synthdg.sampling import make_rng, random_rational

logger = logging.getLogger(__name__)


@functools.lru_cache(maxsize=None)
def dual_extension(depth: int) -> sa.FpAlgebra:
    """k[E<depth>]/(E<depth>^2), one fresh generator per nesting level."""
    return sa.weil_power(1, f"E{depth}")


_UNIT = sa.Monomial.unit(1)
_EPSILON = sa.Monomial.generator(1, 0)


def shuffle_boundary(i: int, gamma: Microcube) -> Microcube:
    """
    shuffle_boundary moves direction i of an (n+1)-microcube last, keeping the
    order of the others, and reads the last direction as a dual number e: the
    new c_S is c_S + c_(S + {n+1}) e, so the e-part of the base is c_i.
    """
    n1 = gamma.n
    if not 1 <= i <= n1:
        raise IndexOutOfRange(i, 1, n1)
    cycled = alpha(duality.dual_hom(duality.boundary_cycle(n1, i)), gamma.to_wpoint())
    moved = Microcube.from_wpoint(cycled, gamma.depth)
    depth = gamma.depth + 1
    extension = dual_extension(depth)
    last = 1 << (n1 - 1)
    vectors = []
    for mask in range(last):
        low, high = moved.vectors[mask], moved.vectors[mask | last]
        vectors.append(
            tuple(
                sa.AlgElement.from_terms(extension, [(_UNIT, a), (_EPSILON, b)])
                for a, b in zip(low, high)
            )
        )
    return Microcube(n1 - 1, gamma.m, tuple(vectors), depth)


def _epsilon_part(value: Any, extension: sa.FpAlgebra, omega: DifferentialForm) -> Any:
    if isinstance(value, sa.AlgElement):
        if value.algebra == extension:
            return value.coefficient(_EPSILON)
        if value.wraps(extension):
            raise NonGenericBody(f"{omega} returned [{value}], which lies above the dual number level")
    # no infinitesimal part
    return Fraction(0)


def integral_i(omega: DifferentialForm, gamma: Microcube, i: int) -> List[Any]:
    """The i-th partial integral of the n-form omega over the (n+1)-microcube gamma."""
    if gamma.n != omega.n + 1:
        raise DimensionMismatch(f"degree of microcubes for the partial integrals of {omega}", omega.n + 1, gamma.n)
    shuffled = shuffle_boundary(i, gamma)
    try:
        value = integrate(shuffled, omega)
    except TypeError as e:
        raise NonGenericBody(f"{omega} cannot be evaluated over dual number scalars: {e}") from e
    extension = dual_extension(shuffled.depth)
    return [_epsilon_part(v, extension, omega) for v in value]


def alternating_sum(omega: DifferentialForm, gamma: Microcube) -> List[Any]:
    """sum_i (-1)^(i+1) integral_i(omega, gamma, i)"""
    total: List[Any] = [Fraction(0)] * omega.e
    for i in range(1, gamma.n + 1):
        sign = 1 if i % 2 else -1
        total = [t + sign * v for t, v in zip(total, integral_i(omega, gamma, i))]
    return total


def delta_perm(sigma: Permutation, i: int) -> Permutation:
    """
    delta_perm is the permutation of {1..n} left when position sigma^-1(i) and
    value i are deleted from sigma in S_(n+1) and the gaps are closed. It
    satisfies sign(delta) = (-1)^(sigma^-1(i) - i) sign(sigma).
    """
    n1 = sigma.size
    if not 1 <= i <= n1:
        raise IndexOutOfRange(i, 1, n1)
    removed = sigma.inverse()(i)
    images = []
    for j in range(1, n1):
        value = sigma(j) if j < removed else sigma(j + 1)
        images.append(value if value < i else value - 1)
    return Permutation.create(images)


def exterior_derivative(
    omega: DifferentialForm, check: bool = True, trials: int = 100, seed: int = 0
) -> DifferentialForm:
    """
    exterior_derivative returns d omega, gamma -> sum_i (-1)^(i+1) integral_i(omega, gamma, i).
    With check the result is run through the form validator.
    """
    def body(gamma: Microcube) -> List[Any]:
        return alternating_sum(omega, gamma)

    logger.debug("differentiating %s", omega)
    return make_form(omega.n + 1, omega.m, omega.e, body, f"d({omega})", check, trials, seed)


def boundary_scaling_commutes(n1: int, i: int, j: int) -> bool:
    """
    boundary_scaling_commutes checks that scaling direction j and then moving
    direction i last equals moving direction i last and then scaling the
    position the coefficient of j lands on: j for j < i, j - 1 for j > i and
    n1 for j = i. Both sides are compared as carve maps and as composites of
    their dual homomorphisms.
    """
    if j < i:
        moved = j
    elif j > i:
        moved = j - 1
    else:
        moved = n1
    boundary = duality.boundary_cycle(n1, i)
    scale = duality.direction_scaling(n1, j)
    scale_moved = duality.direction_scaling(n1, moved)
    family_boundary = duality.identity_times_boundary(n1, i)
    left = duality.carve_compose(scale, family_boundary)
    right = duality.carve_compose(boundary, scale_moved)
    composed_left = sa.hom_compose(duality.dual_hom(family_boundary), duality.dual_hom(scale))
    composed_right = sa.hom_compose(duality.dual_hom(scale_moved), duality.dual_hom(boundary))
    return duality.dual_hom(left) == duality.dual_hom(right) and composed_left == composed_right


def sign_law_check(max_size: int = 5) -> List[LawResult]:
    results = []
    for n1 in range(1, max_size + 1):
        witness = None
        count = 0
        for sigma in Permutation.all(n1):
            for i in range(1, n1 + 1):
                count += 1
                delta = delta_perm(sigma, i)
                expected = (-1) ** (sigma.inverse()(i) - i) * sigma.sign
                if delta.sign != expected:
                    witness = {"sigma": sigma, "i": i, "delta": delta}
                    break
            if witness:
                break
        instance = f"all permutations of {n1} and all i ({count} cases)"
        results.append(law(f"boundary.sign-law.{n1}", "boundary-sign-law", instance, witness is None, **(witness or {})))
    return results


def partial_integral_homogeneity_check(
    omega: DifferentialForm, samples: int = 100, seed: int = 0
) -> List[LawResult]:
    """integral_i((a ._j) gamma) = a integral_i(gamma) for all i and j."""
    rng = make_rng(seed)
    n1 = omega.n + 1
    results = []
    for i in range(1, n1 + 1):
        witness = None
        for _ in range(samples):
            gamma = Microcube.random(rng, n1, omega.m)
            a = random_rational(rng)
            j = rng.randint(1, n1)
            left = integral_i(omega, scale_direction(gamma, j, a), i)
            right = [a * v for v in integral_i(omega, gamma, i)]
            if left != right:
                witness = {"gamma": gamma, "a": a, "j": j}
                break
        results.append(
            law(
                f"partial-integral.homogeneous.{omega}.{i}",
                "partial-integral-homogeneity",
                f"{omega}, i = {i}, {samples} random cases",
                witness is None,
                **(witness or {}),
            )
        )
    return results


def alternating_sum_check(omega: DifferentialForm, samples: int = 10, seed: int = 0) -> List[LawResult]:
    """
    The alternating sum of partial integrals changes by sign(sigma) under every
    permutation sigma of the n+1 directions.
    """
    rng = make_rng(seed)
    n1 = omega.n + 1
    witness = None
    for _ in range(samples):
        gamma = Microcube.random(rng, n1, omega.m)
        value = alternating_sum(omega, gamma)
        for sigma in Permutation.all(n1):
            if alternating_sum(omega, permute_cube(gamma, sigma)) != [sigma.sign * v for v in value]:
                witness = {"gamma": gamma, "sigma": sigma}
                break
        if witness:
            break
    return [
        law(
            f"partial-integral.alternating.{omega}",
            "partial-integral-alternation",
            f"{omega}, all permutations of {n1}, {samples} random cases",
            witness is None,
            **(witness or {}),
        )
    ]
