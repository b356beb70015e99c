"""
Differential n-forms on R^m with values in E = R^e.

A microcube is a point of R^m (x) W_(D^n), stored as 2^n coefficient vectors
indexed by the subsets S of {1..n} (the coefficient of prod_(i in S) X_i). A
form is a scalar-generic program on microcubes that is homogeneous in each
direction and alternating under permutations of the directions.
"""
import enum
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import sympy

from synthdg import duality
from synthdg import scalar_algebra as sa
from synthdg.errors import (
    AlgebraMismatch,
    AntisymmetryViolated,
    ConditionViolated,
    DimensionMismatch,
    IndexOutOfRange,
)
from synthdg.expressions import Expression, parse
from synthdg.permutations import Permutation
from synthdg.prolongation import SmoothMap, WPoint, alpha, instantiate_free
from synthdg.report import Report, law
from synthdg.sampling import make_rng, random_rational, random_vector

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]
Subset = Tuple[int, ...]


def subset_of(mask: int) -> Subset:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def mask_of(subset: Iterable[int]) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << (i - 1)
    return mask


@dataclass(frozen=True)
class Microcube:
    """
    vectors[mask] is the coefficient vector of the subset encoded by `mask`
    (direction i is bit i - 1). `depth` counts the dual number extensions the
    entries live in: 0 for plain scalars.
    """

    n: int
    m: int
    vectors: Tuple[Vector, ...]
    depth: int = 0

    def __post_init__(self) -> None:
        if len(self.vectors) != 1 << self.n:
            raise DimensionMismatch(f"coefficients of a {self.n}-microcube", 1 << self.n, len(self.vectors))
        for vector in self.vectors:
            if len(vector) != self.m:
                raise DimensionMismatch("a microcube coefficient", self.m, len(vector))

    @staticmethod
    def create(
        n: int,
        m: int,
        coefficients: Mapping[Union[Subset, str], Sequence[Any]],
        depth: int = 0,
    ) -> "Microcube":
        """Subsets may be given as tuples of directions or as strings such as "12"; missing ones are zero."""
        vectors: List[Vector] = [tuple(Fraction(0) for _ in range(m))] * (1 << n)
        for key, vector in coefficients.items():
            subset = tuple(int(c) for c in key) if isinstance(key, str) else tuple(key)
            for i in subset:
                if not 1 <= i <= n:
                    raise IndexOutOfRange(i, 1, n)
            vectors[mask_of(subset)] = tuple(vector)
        return Microcube(n, m, tuple(vectors), depth)

    @staticmethod
    def random(rng: random.Random, n: int, m: int) -> "Microcube":
        return Microcube(n, m, tuple(tuple(random_vector(rng, m)) for _ in range(1 << n)))

    @property
    def base(self) -> Vector:
        return self.vectors[0]

    def edge(self, i: int) -> Vector:
        """The first-order coefficient c_{i}."""
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(i, 1, self.n)
        return self.vectors[1 << (i - 1)]

    def coefficient(self, subset: Iterable[int]) -> Vector:
        return self.vectors[mask_of(subset)]

    @property
    def algebra(self) -> sa.FpAlgebra:
        return duality.space_D(self.n).algebra

    def to_wpoint(self) -> WPoint:
        algebra = self.algebra
        monomials = [sa.Monomial(tuple(mask >> i & 1 for i in range(self.n))) for mask in range(1 << self.n)]
        return WPoint.from_coefficients(algebra, self.m, dict(zip(monomials, self.vectors)))

    @staticmethod
    def from_wpoint(p: WPoint, depth: int = 0) -> "Microcube":
        n = p.algebra.rank
        if p.algebra != duality.space_D(n).algebra:
            raise AlgebraMismatch(duality.space_D(n).algebra, p.algebra)
        vectors = []
        for mask in range(1 << n):
            vectors.append(p.coefficient(sa.Monomial(tuple(mask >> i & 1 for i in range(n)))))
        return Microcube(n, p.dim, tuple(vectors), depth)

    def __str__(self) -> str:
        parts = []
        for mask, vector in enumerate(self.vectors):
            label = "".join(str(i) for i in subset_of(mask)) or "0"
            parts.append(f"c{label}=({', '.join(str(v) for v in vector)})")
        return "[" + " ".join(parts) + "]"


def scale_direction(gamma: Microcube, i: int, a: Any) -> Microcube:
    """
    (a ._i) gamma: pull gamma back along (a, d) -> (d1, .., a d_i, .., dn) and
    evaluate the family at a. Multiplies c_S by a whenever i is in S.
    """
    family = alpha(duality.dual_hom(duality.direction_scaling(gamma.n, i)), gamma.to_wpoint())
    return Microcube.from_wpoint(instantiate_free(family, {"Z": a}), gamma.depth)


def permute_cube(gamma: Microcube, sigma: Permutation) -> Microcube:
    """gamma^sigma, moving the coefficient of S to sigma(S)."""
    if sigma.size != gamma.n:
        raise DimensionMismatch("the permutation size", gamma.n, sigma.size)
    moved = alpha(duality.dual_hom(duality.permutation_map(sigma)), gamma.to_wpoint())
    return Microcube.from_wpoint(moved, gamma.depth)


class FormStatus(enum.Enum):
    VALIDATED = "validated"
    UNCHECKED = "unchecked"

    def __str__(self) -> str:
        return self.value


FormBody = Callable[[Microcube], Sequence[Any]]


@dataclass(frozen=True, eq=False)
class DifferentialForm:
    n: int
    m: int
    e: int
    body: FormBody
    status: FormStatus = FormStatus.UNCHECKED
    name: str = ""

    def __call__(self, gamma: Microcube) -> List[Any]:
        return integrate(gamma, self)

    def __str__(self) -> str:
        return self.name or f"<{self.n}-form on R^{self.m} with values in R^{self.e}>"


def integrate(gamma: Microcube, omega: DifferentialForm) -> List[Any]:
    """Infinitesimal integration of omega over gamma: the value omega(gamma) in E."""
    if gamma.n != omega.n:
        raise DimensionMismatch(f"degree of {omega}", omega.n, gamma.n)
    if gamma.m != omega.m:
        raise DimensionMismatch(f"dimension of the base of {omega}", omega.m, gamma.m)
    value = list(omega.body(gamma))
    if len(value) != omega.e:
        raise DimensionMismatch(f"values of {omega}", omega.e, len(value))
    return value


def _scaled(a: Any, value: Sequence[Any]) -> List[Any]:
    return [a * v for v in value]


def _homogeneity_values(rng: random.Random, trials: int) -> Iterable[Fraction]:
    # 0 and -1 catch constant and even bodies before the random values do
    fixed = [Fraction(0), Fraction(-1)]
    for t in range(trials):
        yield fixed[t] if t < len(fixed) else random_rational(rng)


def validate_form(omega: DifferentialForm, trials: int = 100, seed: int = 0) -> Report:
    """
    validate_form samples the two defining conditions of a form: homogeneity
    omega((a ._i) gamma) = a omega(gamma) in every direction i, and alternation
    omega(gamma^sigma) = sign(sigma) omega(gamma) for every transposition.
    """
    report = Report(f"validate {omega}", seed)
    rng = make_rng(seed)
    name = omega.name or "form"
    if omega.n == 0:
        report.extend([law(f"{name}.degree-zero", "form-definition", "no conditions in degree 0", True)])
        return report
    for i in range(1, omega.n + 1):
        instance = f"direction {i}, {trials} trials"
        result = law(f"{name}.homogeneous.{i}", "form-homogeneity", instance, True)
        for a in _homogeneity_values(rng, trials):
            gamma = Microcube.random(rng, omega.n, omega.m)
            left = integrate(scale_direction(gamma, i, a), omega)
            right = _scaled(a, integrate(gamma, omega))
            if left != right:
                result = law(
                    f"{name}.homogeneous.{i}", "form-homogeneity", instance, False,
                    a=a, gamma=gamma, scaled=left, expected=right,
                )
                break
        report.extend([result])
    for sigma in Permutation.transpositions(omega.n):
        instance = f"transposition {sigma}, {trials} trials"
        label = f"{name}.alternating.{''.join(str(i) for i in sigma.images)}"
        result = law(label, "form-alternation", instance, True)
        for _ in range(trials):
            gamma = Microcube.random(rng, omega.n, omega.m)
            left = integrate(permute_cube(gamma, sigma), omega)
            right = _scaled(sigma.sign, integrate(gamma, omega))
            if left != right:
                result = law(
                    label, "form-alternation", instance, False,
                    sigma=sigma, gamma=gamma, permuted=left, expected=right,
                )
                break
        report.extend([result])
    logger.debug("validated %s: %d failed", omega, report.failed)
    return report


def make_form(
    n: int,
    m: int,
    e: int,
    body: FormBody,
    name: str = "",
    check: bool = True,
    trials: int = 100,
    seed: int = 0,
) -> DifferentialForm:
    """
    make_form wraps a body as a form. With check, the body must pass
    validate_form, otherwise ConditionViolated carries the first failure.
    """
    omega = DifferentialForm(n, m, e, body, FormStatus.UNCHECKED, name)
    if not check:
        return omega
    report = validate_form(omega, trials, seed)
    if report.failed:
        failure = report.failures[0]
        raise ConditionViolated(f"{omega} is not a differential form: {failure.id} fails", failure.witness)
    return DifferentialForm(n, m, e, body, FormStatus.VALIDATED, name)


def determinant(rows: Sequence[Sequence[Any]]) -> Any:
    """Leibniz expansion, using only ring operations."""
    size = len(rows)
    total: Any = Fraction(0)
    for sigma in Permutation.all(size):
        term: Any = Fraction(sigma.sign)
        for k in range(size):
            term = term * rows[k][sigma(k + 1) - 1]
        total = total + term
    return total


IndexKey = Union[Sequence[int], str]


@dataclass(frozen=True, eq=False)
class ClassicalTensorField:
    """
    ClassicalTensorField is sum_I a_I dx_I over strictly increasing index tuples
    I, each a_I an E-valued polynomial (or smooth) function of the coordinates.
    """

    n: int
    coordinates: Tuple[str, ...]
    e: int
    coefficients: Tuple[Tuple[Tuple[int, ...], Tuple[sympy.Expr, ...]], ...]
    name: str = ""

    @property
    def m(self) -> int:
        return len(self.coordinates)

    @staticmethod
    def create(
        n: int,
        coordinates: Sequence[str],
        coefficients: Mapping[IndexKey, Union[Expression, Sequence[Expression]]],
        e: int = 1,
        name: str = "",
    ) -> "ClassicalTensorField":
        """
        Components on non-increasing index tuples are folded onto the increasing
        one by antisymmetry; they must agree with any component given there, and
        components on repeated indices must vanish.
        """
        names = tuple(coordinates)
        m = len(names)
        folded: Dict[Tuple[int, ...], Tuple[sympy.Expr, ...]] = {}
        for key, value in coefficients.items():
            indices = _parse_indices(key)
            if len(indices) != n:
                raise DimensionMismatch(f"index tuple {indices}", n, len(indices))
            for i in indices:
                if not 1 <= i <= m:
                    raise IndexOutOfRange(i, 1, m)
            exprs = _parse_vector(value, names, e)
            if len(set(indices)) != len(indices):
                if any(sympy.expand(x) != 0 for x in exprs):
                    raise AntisymmetryViolated(f"Component {indices} on a repeated index must vanish")
                continue
            ordered = tuple(sorted(indices))
            sign = Permutation.create([ordered.index(i) + 1 for i in indices]).sign
            signed = tuple(sympy.expand(sign * x) for x in exprs)
            if ordered in folded:
                if any(sympy.expand(a - b) != 0 for a, b in zip(folded[ordered], signed)):
                    raise AntisymmetryViolated(
                        f"Components for {ordered} and its permutations disagree: {folded[ordered]} vs {signed}"
                    )
            else:
                folded[ordered] = signed
        terms = tuple(
            (indices, exprs)
            for indices, exprs in sorted(folded.items())
            if any(x != 0 for x in exprs)
        )
        return ClassicalTensorField(n, names, e, terms, name)

    def coefficient(self, indices: Sequence[int]) -> Tuple[sympy.Expr, ...]:
        for key, exprs in self.coefficients:
            if key == tuple(indices):
                return exprs
        return tuple(sympy.Integer(0) for _ in range(self.e))

    def __str__(self) -> str:
        if self.name:
            return self.name
        if not self.coefficients:
            return "0"
        parts = []
        for indices, exprs in self.coefficients:
            wedge = "^".join(f"d{self.coordinates[i - 1]}" for i in indices)
            value = str(exprs[0]) if self.e == 1 else "(" + ", ".join(str(x) for x in exprs) + ")"
            parts.append(f"{value} {wedge}".strip())
        return " + ".join(parts)


def _parse_indices(key: IndexKey) -> Tuple[int, ...]:
    if isinstance(key, str):
        text = key.strip()
        if not text:
            return ()
        return tuple(int(part) for part in text.split(","))
    return tuple(int(i) for i in key)


def _parse_vector(
    value: Union[Expression, Sequence[Expression]], names: Tuple[str, ...], e: int
) -> Tuple[sympy.Expr, ...]:
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    if len(items) != e:
        raise DimensionMismatch("a coefficient vector", e, len(items))
    return tuple(parse(item, names) for item in items)


def from_classical(
    field: ClassicalTensorField, check: bool = True, trials: int = 100, seed: int = 0
) -> DifferentialForm:
    """
    from_classical turns sum_I a_I dx_I into the form
    gamma -> sum_I a_I(base) det[(c_{j})_(i_k)], which only reads the
    first-order coefficients of gamma.
    """
    compiled = [
        (indices, SmoothMap.from_expressions(list(exprs), field.coordinates))
        for indices, exprs in field.coefficients
    ]
    n, e = field.n, field.e

    def body(gamma: Microcube) -> List[Any]:
        total: List[Any] = [Fraction(0)] * e
        edges = [gamma.edge(j) for j in range(1, n + 1)]
        for indices, coefficient in compiled:
            rows = [[edges[j][i - 1] for j in range(n)] for i in indices]
            det = determinant(rows) if n else Fraction(1)
            values = coefficient(list(gamma.base))
            total = [t + v * det for t, v in zip(total, values)]
        return total

    form = make_form(n, field.m, e, body, str(field), check, trials, seed)
    if check:
        assert form.status is FormStatus.VALIDATED
    return form


def curry_factorize(
    phi: Callable[[Microcube, Any], Sequence[Any]],
    n: int,
    m: int,
    e: int,
    params: Sequence[Any],
    trials: int = 100,
    seed: int = 0,
) -> List[DifferentialForm]:
    """
    curry_factorize returns x -> phi(-, x) as forms, one per parameter. phi must
    satisfy both form conditions for every parameter; otherwise
    ConditionViolated names the parameter and the failing condition.
    """
    forms = []
    rng = make_rng(seed)
    for x in params:
        def body(gamma: Microcube, x: Any = x) -> Sequence[Any]:
            return phi(gamma, x)

        report = validate_form(DifferentialForm(n, m, e, body, name=f"phi(-, {x})"), trials, seed)
        if report.failed:
            failure = report.failures[0]
            witness = dict(failure.witness or {})
            witness["parameter"] = str(x)
            raise ConditionViolated(f"phi(-, {x}) is not a differential form: {failure.id} fails", witness)
        form = DifferentialForm(n, m, e, body, FormStatus.VALIDATED, f"phi(-, {x})")
        for _ in range(trials):
            gamma = Microcube.random(rng, n, m)
            assert integrate(gamma, form) == list(phi(gamma, x))
        forms.append(form)
    return forms
