"""
Exact arithmetic in pointed finitely presented k-algebras whose ideal is
generated by monomials.

Normal forms need no Groebner machinery: a monomial is in normal form iff no
relation monomial divides it, and reducing a polynomial means deleting the
monomials that are not.
"""
from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    Sequence,
    Tuple,
    Union,
)

import sympy

from synthdg.errors import (
    AlgebraMismatch,
    ComposabilityMismatch,
    NonMonomialIdeal,
    NotPointed,
    NotWeil,
    RelationViolated,
    SynthDGError,
    UnknownGenerator,
)

logger = logging.getLogger(__name__)

# Exact rationals carry the law checks; floats are only used for transcendental
# demos. Coefficients may also be AlgElements of another algebra (nesting).
Scalar = Union[Fraction, int, float]


def is_zero(value: Any) -> bool:
    return bool(value == 0)


def render_scalar(value: Any) -> str:
    if isinstance(value, AlgElement):
        return f"({value})"
    return str(value)


@dataclass(frozen=True)
class Monomial:
    """
    Monomial is a power product of generators, stored positionally: exponents[i]
    is the exponent of the i-th generator of the algebra it belongs to.
    """

    exponents: Tuple[int, ...]

    @staticmethod
    def unit(rank: int) -> Monomial:
        return Monomial((0,) * rank)

    @staticmethod
    def generator(rank: int, index: int, power: int = 1) -> Monomial:
        exponents = [0] * rank
        exponents[index] = power
        return Monomial(tuple(exponents))

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def is_unit(self) -> bool:
        return self.degree == 0

    def divides(self, other: Monomial) -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def concat(self, other: Monomial) -> Monomial:
        return Monomial(self.exponents + other.exponents)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        # graded lexicographic, the first generator being the largest
        return self.degree, tuple(-e for e in self.exponents)

    def render(self, generators: Sequence[str]) -> str:
        if self.is_unit:
            return "1"
        factors = []
        for name, exponent in zip(generators, self.exponents):
            if exponent == 1:
                factors.append(name)
            elif exponent > 1:
                factors.append(f"{name}^{exponent}")
        return "*".join(factors)


MonomialLike = Union[Monomial, Mapping[str, int]]


@dataclass(frozen=True)
class FpAlgebra:
    """
    FpAlgebra is k[generators]/(relations) for a monomial ideal. Relations are
    kept as a minimal, sorted generating set so that equal presentations compare
    equal.
    """

    generators: Tuple[str, ...]
    relations: Tuple[Monomial, ...]

    def __post_init__(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            raise SynthDGError(f"Duplicate generator names in {list(self.generators)}")
        for relation in self.relations:
            if len(relation.exponents) != self.rank:
                raise NonMonomialIdeal(
                    f"Relation {relation.exponents} does not match generators {list(self.generators)}"
                )
            if relation.is_unit:
                raise NotPointed(
                    "The unit is a relation: the augmentation cannot kill it"
                )

    @staticmethod
    def create(
        generators: Sequence[str], relations: Iterable[MonomialLike] = ()
    ) -> FpAlgebra:
        names = tuple(generators)
        monomials = [_as_monomial(names, r) for r in relations]
        return FpAlgebra(names, _minimal_relations(monomials))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def nilpotent_flags(self) -> Tuple[bool, ...]:
        flags = [False] * self.rank
        for relation in self.relations:
            support = [i for i, e in enumerate(relation.exponents) if e]
            if len(support) == 1:
                flags[support[0]] = True
        return tuple(flags)

    @property
    def is_weil(self) -> bool:
        return all(self.nilpotent_flags)

    @property
    def free_generators(self) -> Tuple[str, ...]:
        """Generators that occur in no relation."""
        return tuple(
            name
            for i, name in enumerate(self.generators)
            if all(r.exponents[i] == 0 for r in self.relations)
        )

    @property
    def non_nilpotent_generators(self) -> Tuple[str, ...]:
        return tuple(
            name
            for name, nilpotent in zip(self.generators, self.nilpotent_flags)
            if not nilpotent
        )

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise UnknownGenerator(name, self.generators)

    def is_normal(self, monomial: Monomial) -> bool:
        return not any(r.divides(monomial) for r in self.relations)

    def unit_monomial(self) -> Monomial:
        return Monomial.unit(self.rank)

    def zero(self) -> AlgElement:
        return AlgElement(self, ())

    def one(self) -> AlgElement:
        return self.constant(Fraction(1))

    def constant(self, value: Any) -> AlgElement:
        if is_zero(value):
            return self.zero()
        return AlgElement(self, ((self.unit_monomial(), value),))

    def generator(self, name: str) -> AlgElement:
        return self.element({Monomial.generator(self.rank, self.index(name)): Fraction(1)})

    def element(self, terms: Mapping[Monomial, Any]) -> AlgElement:
        return AlgElement.from_terms(self, terms.items())

    def nilpotency_index(self) -> int:
        """Smallest N with every product of N augmentation-ideal elements zero."""
        return max(m.degree for m in weil_basis(self)) + 1

    def __str__(self) -> str:
        if not self.generators:
            return "k"
        ring = f"k[{','.join(self.generators)}]"
        if not self.relations:
            return ring
        ideal = ",".join(r.render(self.generators) for r in self.relations)
        return f"{ring}/({ideal})"


def _as_monomial(generators: Tuple[str, ...], value: MonomialLike) -> Monomial:
    if isinstance(value, Monomial):
        return value
    exponents = [0] * len(generators)
    for name, exponent in value.items():
        if name not in generators:
            raise UnknownGenerator(name, generators)
        if int(exponent) < 0:
            raise NonMonomialIdeal(f"Negative exponent for [{name}] in relation {dict(value)}")
        exponents[generators.index(name)] = int(exponent)
    return Monomial(tuple(exponents))


def _minimal_relations(monomials: Iterable[Monomial]) -> Tuple[Monomial, ...]:
    unique = sorted(set(monomials), key=Monomial.sort_key)
    minimal: List[Monomial] = []
    for candidate in unique:
        if not any(m.divides(candidate) for m in minimal):
            minimal.append(candidate)
    return tuple(minimal)


K = FpAlgebra((), ())


@dataclass(frozen=True, eq=False)
class AlgElement:
    """
    AlgElement is an element of an FpAlgebra in canonical form: normal
    monomials only, no zero coefficients, graded lexicographic order.

    Arithmetic with anything that is not an AlgElement of the same algebra
    treats the other operand as a scalar coefficient, which is what lets
    algebras nest (coefficients that are themselves AlgElements).
    """

    algebra: FpAlgebra
    terms: Tuple[Tuple[Monomial, Any], ...]

    @staticmethod
    def from_terms(
        algebra: FpAlgebra, terms: Iterable[Tuple[Monomial, Any]]
    ) -> AlgElement:
        accumulated: Dict[Monomial, Any] = {}
        for monomial, coefficient in terms:
            if not algebra.is_normal(monomial):
                continue
            if monomial in accumulated:
                accumulated[monomial] = accumulated[monomial] + coefficient
            else:
                accumulated[monomial] = coefficient
        ordered = sorted(accumulated.items(), key=lambda item: item[0].sort_key())
        return AlgElement(
            algebra, tuple((m, c) for m, c in ordered if not is_zero(c))
        )

    @property
    def coeffs(self) -> Dict[Monomial, Any]:
        return dict(self.terms)

    def coefficient(self, monomial: Monomial) -> Any:
        for m, c in self.terms:
            if m == monomial:
                return c
        return Fraction(0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def unit_part(self) -> Any:
        return self.coefficient(self.algebra.unit_monomial())

    def nilpotent_part(self) -> AlgElement:
        return AlgElement(self.algebra, tuple((m, c) for m, c in self.terms if not m.is_unit))

    def _coerce(self, other: Any) -> AlgElement:
        if isinstance(other, AlgElement) and other.algebra == self.algebra:
            return other
        return self.algebra.constant(other)

    def wraps(self, algebra: FpAlgebra) -> bool:
        """Whether elements of `algebra` occur among the (nested) coefficients."""
        for _, coefficient in self.terms:
            if isinstance(coefficient, AlgElement) and (
                coefficient.algebra == algebra or coefficient.wraps(algebra)
            ):
                return True
        return False

    def _is_outer(self, other: Any) -> bool:
        return (
            isinstance(other, AlgElement)
            and other.algebra != self.algebra
            and other.wraps(self.algebra)
        )

    def add(self, other: AlgElement) -> AlgElement:
        _check_same_algebra(self, other)
        return AlgElement.from_terms(self.algebra, itertools.chain(self.terms, other.terms))

    def mul(self, other: AlgElement) -> AlgElement:
        _check_same_algebra(self, other)
        algebra = self.algebra
        products = (
            (m1 * m2, c1 * c2) for m1, c1 in self.terms for m2, c2 in other.terms
        )
        return AlgElement.from_terms(algebra, products)

    def scale(self, value: Any) -> AlgElement:
        return AlgElement.from_terms(self.algebra, ((m, c * value) for m, c in self.terms))

    # An operand whose coefficients are elements of this algebra is the outer
    # level of a nesting, this element is then one of its scalars.
    def __add__(self, other: Any) -> AlgElement:
        if self._is_outer(other):
            return other.__radd__(self)
        return self.add(self._coerce(other))

    def __radd__(self, other: Any) -> AlgElement:
        return self._coerce(other).add(self)

    def __neg__(self) -> AlgElement:
        return AlgElement(self.algebra, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: Any) -> AlgElement:
        if self._is_outer(other):
            return other.__rsub__(self)
        return self.add(-self._coerce(other))

    def __rsub__(self, other: Any) -> AlgElement:
        return self._coerce(other).add(-self)

    def __mul__(self, other: Any) -> AlgElement:
        if isinstance(other, AlgElement) and other.algebra == self.algebra:
            return self.mul(other)
        if self._is_outer(other):
            return other.__rmul__(self)
        return self.scale(other)

    def __rmul__(self, other: Any) -> AlgElement:
        if isinstance(other, AlgElement) and other.algebra == self.algebra:
            return other.mul(self)
        return AlgElement.from_terms(self.algebra, ((m, other * c) for m, c in self.terms))

    def __pow__(self, exponent: int) -> AlgElement:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.algebra.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result.mul(base)
            exponent >>= 1
            if exponent:
                base = base.mul(base)
        return result

    def inverse(self) -> AlgElement:
        """Inverse of a unit: (u + n)^-1 = sum_k (-n)^k / u^(k+1)."""
        from synthdg.primitives import reciprocal

        unit = self.unit_part()
        if is_zero(unit):
            raise ZeroDivisionError(f"[{self}] has no unit part and is not invertible")
        if not self.algebra.is_weil:
            raise NotWeil(self.algebra, self.algebra.non_nilpotent_generators)
        inverse_unit = reciprocal(unit)
        negated = -self.nilpotent_part()
        result = self.algebra.constant(inverse_unit)
        power = self.algebra.one()
        factor = inverse_unit
        while True:
            power = power.mul(negated)
            if power.is_zero:
                return result
            factor = factor * inverse_unit
            result = result.add(power.scale(factor))

    def __truediv__(self, other: Any) -> AlgElement:
        if isinstance(other, AlgElement) and other.algebra == self.algebra:
            return self.mul(other.inverse())
        if self._is_outer(other):
            return other.__rtruediv__(self)
        from synthdg.primitives import reciprocal

        return self.scale(reciprocal(other))

    def __rtruediv__(self, other: Any) -> AlgElement:
        return self.inverse().scale(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlgElement):
            if other.algebra == self.algebra:
                return self.terms == other.terms
            return False
        if isinstance(other, (int, float, Fraction)):
            if is_zero(other):
                return self.is_zero
            return self.terms == ((self.algebra.unit_monomial(), other),)
        return NotImplemented

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self) -> int:
        return hash((self.algebra, self.terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for monomial, coefficient in self.terms:
            if monomial.is_unit:
                parts.append(render_scalar(coefficient))
            elif coefficient == 1:
                parts.append(monomial.render(self.algebra.generators))
            else:
                parts.append(
                    f"{render_scalar(coefficient)}*{monomial.render(self.algebra.generators)}"
                )
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"AlgElement({self}; {self.algebra})"


def _check_same_algebra(a: AlgElement, b: AlgElement) -> None:
    if a.algebra != b.algebra:
        raise AlgebraMismatch(a.algebra, b.algebra)


PolynomialLike = Union[str, int, Fraction, sympy.Expr, Mapping[Monomial, Any], AlgElement]


def normal_form(algebra: FpAlgebra, polynomial: PolynomialLike) -> AlgElement:
    """
    normal_form expands `polynomial` in the generators of `algebra` and deletes
    every monomial divisible by a relation.
    """
    if isinstance(polynomial, AlgElement):
        if polynomial.algebra != algebra:
            raise AlgebraMismatch(algebra, polynomial.algebra)
        return polynomial
    if isinstance(polynomial, Mapping):
        return AlgElement.from_terms(algebra, polynomial.items())
    from synthdg.expressions import parse, polynomial_terms

    expr = parse(polynomial, algebra.generators)
    terms = polynomial_terms(expr, algebra.generators)
    return AlgElement.from_terms(
        algebra, ((Monomial(exponents), c) for exponents, c in terms)
    )


def add(a: AlgElement, b: AlgElement) -> AlgElement:
    return a.add(b)


def mul(a: AlgElement, b: AlgElement) -> AlgElement:
    return a.mul(b)


def scale(a: AlgElement, r: Any) -> AlgElement:
    return a.scale(r)


@functools.lru_cache(maxsize=None)
def weil_basis(algebra: FpAlgebra) -> Tuple[Monomial, ...]:
    """All normal monomials in graded lexicographic order, the unit first."""
    if not algebra.is_weil:
        raise NotWeil(algebra, algebra.non_nilpotent_generators)
    bounds = [0] * algebra.rank
    for relation in algebra.relations:
        support = [i for i, e in enumerate(relation.exponents) if e]
        if len(support) == 1:
            i = support[0]
            power = relation.exponents[i]
            bounds[i] = power if bounds[i] == 0 else min(bounds[i], power)
    candidates = (
        Monomial(tuple(exponents))
        for exponents in itertools.product(*(range(b) for b in bounds))
    )
    return tuple(sorted(filter(algebra.is_normal, candidates), key=Monomial.sort_key))


def dimension(algebra: FpAlgebra) -> int:
    return len(weil_basis(algebra))


def tensor(a: FpAlgebra, b: FpAlgebra) -> FpAlgebra:
    """
    tensor returns A (x)_k B. Generators are renamed by position, those of A get
    the suffix @1 and those of B the suffix @2.
    """
    generators = tuple(f"{g}@1" for g in a.generators) + tuple(
        f"{g}@2" for g in b.generators
    )
    left_pad = Monomial.unit(b.rank)
    right_pad = Monomial.unit(a.rank)
    relations = [r.concat(left_pad) for r in a.relations] + [
        right_pad.concat(r) for r in b.relations
    ]
    return FpAlgebra.create(generators, relations)


def embed_left(element: AlgElement, target: FpAlgebra) -> AlgElement:
    """The image of `element` under A -> A (x) B."""
    pad = Monomial.unit(target.rank - element.algebra.rank)
    return AlgElement.from_terms(target, ((m.concat(pad), c) for m, c in element.terms))


def embed_right(element: AlgElement, target: FpAlgebra) -> AlgElement:
    """The image of `element` under B -> A (x) B."""
    pad = Monomial.unit(target.rank - element.algebra.rank)
    return AlgElement.from_terms(target, ((pad.concat(m), c) for m, c in element.terms))


@dataclass(frozen=True)
class AlgebraHom:
    """
    AlgebraHom is a unital k-algebra homomorphism given by the images of the
    source generators. Instances are only built through `hom_make`, which
    checks that every relation of the source is sent to 0.
    """

    source: FpAlgebra
    target: FpAlgebra
    images: Tuple[AlgElement, ...]

    def image_of(self, name: str) -> AlgElement:
        return self.images[self.source.index(name)]

    def _monomial_image(self, monomial: Monomial) -> AlgElement:
        result = self.target.one()
        for image, exponent in zip(self.images, monomial.exponents):
            if exponent:
                result = result.mul(image**exponent)
                if result.is_zero:
                    break
        return result

    def __call__(self, element: AlgElement) -> AlgElement:
        return hom_apply(self, element)

    def __str__(self) -> str:
        mapping = ", ".join(f"{g} -> {i}" for g, i in zip(self.source.generators, self.images))
        return f"{self.source} -> {self.target}: {mapping}"


ImageLike = Union[AlgElement, str, int, Fraction, sympy.Expr]


def hom_make(
    source: FpAlgebra,
    target: FpAlgebra,
    images: Union[Mapping[str, ImageLike], Sequence[ImageLike]],
) -> AlgebraHom:
    if isinstance(images, Mapping):
        for name in images:
            source.index(name)
        missing = [g for g in source.generators if g not in images]
        if missing:
            raise SynthDGError(f"No image given for generators [{', '.join(missing)}]")
        ordered = [images[g] for g in source.generators]
    else:
        ordered = list(images)
        if len(ordered) != source.rank:
            raise SynthDGError(
                f"Expected {source.rank} images for {source}, got {len(ordered)}"
            )
    hom = AlgebraHom(source, target, tuple(normal_form(target, i) for i in ordered))
    for relation in source.relations:
        value = hom._monomial_image(relation)
        if not value.is_zero:
            raise RelationViolated(relation.render(source.generators), value)
    return hom


def hom_apply(hom: AlgebraHom, element: AlgElement) -> AlgElement:
    if element.algebra != hom.source:
        raise AlgebraMismatch(hom.source, element.algebra)
    result = hom.target.zero()
    for monomial, coefficient in element.terms:
        image = hom._monomial_image(monomial)
        if not image.is_zero:
            result = result.add(image.scale(coefficient))
    return result


def hom_compose(psi: AlgebraHom, phi: AlgebraHom) -> AlgebraHom:
    """psi . phi"""
    if phi.target != psi.source:
        raise ComposabilityMismatch(
            f"Cannot compose: [{phi.target}] is not the source [{psi.source}]"
        )
    return AlgebraHom(phi.source, psi.target, tuple(hom_apply(psi, i) for i in phi.images))


def identity(algebra: FpAlgebra) -> AlgebraHom:
    return AlgebraHom(
        algebra, algebra, tuple(algebra.generator(g) for g in algebra.generators)
    )


def augmentation(algebra: FpAlgebra) -> AlgebraHom:
    """A -> k, every generator to 0."""
    return AlgebraHom(algebra, K, tuple(K.zero() for _ in algebra.generators))


def unit(algebra: FpAlgebra) -> AlgebraHom:
    """k -> A, the inclusion of constants."""
    return AlgebraHom(K, algebra, ())


def hom_tensor(phi: AlgebraHom, psi: AlgebraHom) -> AlgebraHom:
    """phi (x) psi : A (x) C -> B (x) D."""
    source = tensor(phi.source, psi.source)
    target = tensor(phi.target, psi.target)
    images = [embed_left(i, target) for i in phi.images] + [
        embed_right(i, target) for i in psi.images
    ]
    return hom_make(source, target, images)


def tensor_associator(a: FpAlgebra, b: FpAlgebra, c: FpAlgebra) -> AlgebraHom:
    """(A (x) B) (x) C -> A (x) (B (x) C), generator i to generator i."""
    source = tensor(tensor(a, b), c)
    target = tensor(a, tensor(b, c))
    images = [target.generator(g) for g in target.generators]
    return hom_make(source, target, images)


def coordinates(element: AlgElement) -> List[sympy.Rational]:
    """Exact coordinates of `element` on the Weil basis of its algebra."""
    result = []
    for monomial in weil_basis(element.algebra):
        value = element.coefficient(monomial)
        if not isinstance(value, (int, Fraction)):
            raise SynthDGError(f"Coordinates need rational coefficients, got [{value}]")
        result.append(sympy.Rational(value.numerator, value.denominator))
    return result


def hom_matrix(hom: AlgebraHom) -> sympy.Matrix:
    """Columns are the images of the source basis in target coordinates."""
    columns = [
        coordinates(hom_apply(hom, hom.source.element({m: Fraction(1)})))
        for m in weil_basis(hom.source)
    ]
    rows = dimension(hom.target)
    return sympy.Matrix(rows, len(columns), lambda i, j: columns[j][i])


def equalizer_subspace(f: AlgebraHom, g: AlgebraHom) -> List[Tuple[Fraction, ...]]:
    """A basis of {a in A : f(a) = g(a)} in Weil basis coordinates of A."""
    if f.source != g.source or f.target != g.target:
        raise ComposabilityMismatch("The equalizer needs a parallel pair of homomorphisms")
    kernel = (hom_matrix(f) - hom_matrix(g)).nullspace()
    return [tuple(Fraction(int(x.p), int(x.q)) for x in v) for v in kernel]


def equalizer_check(f: AlgebraHom, g: AlgebraHom, e: AlgebraHom) -> bool:
    """
    equalizer_check decides whether e : E -> A is the equalizer of f, g : A -> B
    in the category of Weil algebras: f.e = g.e, e is injective and the image of
    e is the whole subspace where f and g agree.
    """
    if e.target != f.source:
        raise ComposabilityMismatch(
            f"[{e.target}] is not the common source [{f.source}] of the pair"
        )
    kernel_dimension = len(equalizer_subspace(f, g))
    m_e = hom_matrix(e)
    composites_agree = hom_matrix(f) * m_e == hom_matrix(g) * m_e
    rank = m_e.rank()
    injective = rank == dimension(e.source)
    spans = rank == kernel_dimension
    logger.debug(
        "equalizer check: agree=%s injective=%s rank=%d kernel=%d",
        composites_agree,
        injective,
        rank,
        kernel_dimension,
    )
    return bool(composites_agree and injective and spans)


def weil_power(n: int, name: str = "X") -> FpAlgebra:
    """k[X1..Xn]/(X1^2..Xn^2), or k[X]/(X^2) for n = 1."""
    generators = [name] if n == 1 else [f"{name}{i}" for i in range(1, n + 1)]
    return FpAlgebra.create(generators, [{g: 2} for g in generators])


def polynomial_ring(n: int, name: str = "Z") -> FpAlgebra:
    generators = [name] if n == 1 else [f"{name}{i}" for i in range(1, n + 1)]
    return FpAlgebra.create(generators)


def first_order(generators: Sequence[str]) -> FpAlgebra:
    """k[generators]/(all degree two monomials), e.g. D(2) for two generators."""
    relations: List[Dict[str, int]] = []
    for i, a in enumerate(generators):
        relations.append({a: 2})
        for b in generators[i + 1 :]:
            relations.append({a: 1, b: 1})
    return FpAlgebra.create(generators, relations)


W_D = weil_power(1)
W_D2 = first_order(["X", "Y"])