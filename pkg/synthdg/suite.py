"""
The full law suite behind `check all`.

Each section gets its own sub-seed derived from the suite seed and the section
name, so sections can be reordered or skipped without changing the others.
"""
import itertools
import logging
import random
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from synthdg import duality
from synthdg import exterior
from synthdg import forms
from synthdg import prolongation as pr
from synthdg import scalar_algebra as sa
from synthdg import tangent_euclidean as te
from synthdg.dev_config import SuiteConfig
from synthdg.document import Document
from synthdg.errors import ConditionViolated, SynthDGError
from synthdg.oracle import classical_exterior_derivative
from synthdg.report import LawResult, Report, derive_seed, law
from synthdg.sampling import make_rng, random_element, random_polynomial, random_polynomial_map, random_vector

logger = logging.getLogger(__name__)

Section = Callable[[int, SuiteConfig, Document], List[LawResult]]


def _sample(
    id: str,
    anchor: str,
    instance: str,
    samples: int,
    rng: random.Random,
    trial: Callable[[random.Random], Optional[Dict[str, Any]]],
) -> LawResult:
    for _ in range(samples):
        witness = trial(rng)
        if witness is not None:
            return law(id, anchor, instance, False, **witness)
    return law(id, anchor, instance, True)


SECOND_ORDER = sa.FpAlgebra.create(["X"], [{"X": 3}])


def _weil_algebras(document: Document) -> List[sa.FpAlgebra]:
    """Weil algebras of the document with at most 8 basis elements."""
    return [a for a in document.algebras.values() if a.is_weil and sa.dimension(a) <= 8]


def _homs(document: Document) -> List[sa.AlgebraHom]:
    """Document homomorphisms and the duals of the named maps, without repeats."""
    homs = list(document.homs.values()) + [duality.dual_hom(m) for m in duality.named_maps().values()]
    unique: Dict[str, sa.AlgebraHom] = {}
    for hom in homs:
        unique.setdefault(str(hom), hom)
    return list(unique.values())


def _random_map(rng: random.Random, domain_dim: int, codomain_dim: int, degree: int) -> pr.SmoothMap:
    names = pr.default_variables(domain_dim)
    return pr.SmoothMap.from_expressions(random_polynomial_map(rng, names, codomain_dim, degree), names)


def algebra_section(seed: int, config: SuiteConfig, document: Document) -> List[LawResult]:
    results = []
    expected = [("W_D", sa.W_D, 2), ("W_D(2)", sa.W_D2, 3), ("W_D(x)W_D", sa.tensor(sa.W_D, sa.W_D), 4)]
    expected += [(f"W_D^{n}", sa.weil_power(n), 2**n) for n in range(1, 5)]
    for label, algebra, dim in expected:
        actual = sa.dimension(algebra)
        results.append(
            law(f"algebra.dimension.{label}", "weil-basis", str(algebra), actual == dim, expected=dim, actual=actual)
        )

    rng = make_rng(seed)
    algebras = [sa.W_D, sa.W_D2, sa.weil_power(2), sa.weil_power(3), SECOND_ORDER] + _weil_algebras(document)
    samples = config.samples

    for algebra in algebras:
        names = algebra.generators

        def normal_form(rng: random.Random) -> Optional[Dict[str, Any]]:
            p = random_polynomial(rng, names, config.max_degree)
            q = random_polynomial(rng, names, config.max_degree)
            direct = sa.normal_form(algebra, p * q)
            if sa.normal_form(algebra, dict(direct.terms)) != direct:
                return {"p": p, "q": q, "reason": "not idempotent"}
            if direct != sa.normal_form(algebra, p) * sa.normal_form(algebra, q):
                return {"p": p, "q": q}
            return None

        results.append(
            _sample(f"algebra.normal-form.{algebra}", "normal-form", f"{samples} random products", samples, rng, normal_form)
        )
        results.append(
            law(
                f"algebra.augmentation-unit.{algebra}",
                "augmentation",
                str(algebra),
                sa.hom_compose(sa.augmentation(algebra), sa.unit(algebra)) == sa.identity(sa.K),
            )
        )

    homs = _homs(document)
    for hom in homs:

        def respects(rng: random.Random) -> Optional[Dict[str, Any]]:
            a, b = random_element(rng, hom.source), random_element(rng, hom.source)
            if hom(a + b) != hom(a) + hom(b) or hom(a * b) != hom(a) * hom(b):
                return {"a": a, "b": b}
            if hom(hom.source.one()) != hom.target.one():
                return {"one": hom(hom.source.one())}
            return None

        units = (
            sa.hom_compose(hom, sa.identity(hom.source)) == hom
            and sa.hom_compose(sa.identity(hom.target), hom) == hom
        )
        results.append(
            _sample(f"hom.ring-structure.{hom}", "hom-apply", f"{samples // 10} random pairs", samples // 10, rng, respects)
        )
        results.append(law(f"hom.identity-units.{hom}", "hom-identity", str(hom), units))

    composable = [(f, g, h) for f, g, h in itertools.product(homs, repeat=3) if f.target == g.source and g.target == h.source]
    for f, g, h in composable[:40]:
        left = sa.hom_compose(h, sa.hom_compose(g, f))
        right = sa.hom_compose(sa.hom_compose(h, g), f)
        results.append(law(f"hom.compose-associative.{f}|{g}|{h}", "hom-composition", "exact", left == right))
    return results


def tensor_section(seed: int, config: SuiteConfig, document: Document) -> List[LawResult]:
    results = []
    weil = [sa.K, sa.W_D, sa.W_D2, sa.weil_power(2), SECOND_ORDER] + _weil_algebras(document)
    for a, b in itertools.product(weil, repeat=2):
        if sa.dimension(a) * sa.dimension(b) > 16:
            continue
        product = sa.tensor(a, b)
        results.append(
            law(
                f"tensor.dimension.{a}.{b}",
                "tensor",
                str(product),
                sa.dimension(product) == sa.dimension(a) * sa.dimension(b),
                expected=sa.dimension(a) * sa.dimension(b),
                actual=sa.dimension(product),
            )
        )
    for a, b, c in [(sa.W_D, sa.W_D, sa.W_D), (sa.W_D2, sa.W_D, sa.K), (sa.W_D, sa.W_D2, sa.W_D)]:
        forward = sa.tensor_associator(a, b, c)
        dims_agree = sa.dimension(forward.source) == sa.dimension(forward.target)
        invertible = sa.hom_matrix(forward).rank() == sa.dimension(forward.source)
        results.append(
            law(f"tensor.associator.{a}.{b}.{c}", "tensor", str(forward), dims_agree and invertible)
        )
    for name, phi in document.homs.items():
        for label, psi in [("identity", sa.identity(sa.W_D)), ("augmentation", sa.augmentation(sa.W_D))]:
            try:
                combined = sa.hom_tensor(phi, psi)
                results.append(law(f"tensor.hom.{name}.{label}", "tensor", str(combined), True))
            except SynthDGError as e:
                results.append(law(f"tensor.hom.{name}.{label}", "tensor", str(phi), False, error=e))
    return results


def duality_section(seed: int, config: SuiteConfig, document: Document) -> List[LawResult]:
    results = []
    maps = duality.named_maps()
    for name, carve_map in sorted(maps.items()):
        try:
            duality.dual_hom(carve_map)
            results.append(law(f"duality.validates.{name}", "dual-hom", str(carve_map), True))
        except SynthDGError as e:
            results.append(law(f"duality.validates.{name}", "dual-hom", str(carve_map), False, error=e))

    candidates = list(maps.values()) + list(document.carve_maps.values())
    candidates += [duality.identity(s) for s in (duality.space_D(), duality.space_D2(), duality.space_D(2))]
    pairs = [(f, g) for f, g in itertools.product(candidates, repeat=2) if f.target == g.source]
    for f, g in pairs:
        results.append(
            law(
                f"duality.contravariant.{g.name}|{f.name}",
                "dual-contravariance",
                f"{g} after {f}",
                duality.dual_contravariance_check(f, g),
            )
        )

    rng = make_rng(seed)
    spaces = [duality.space_D(), duality.space_D2()]
    for k in range(config.samples // 2):
        f = _random_carve_map(rng, rng.choice(spaces), rng.choice(spaces))
        g = _random_carve_map(rng, f.target, rng.choice(spaces))
        results.append(
            law(
                f"duality.contravariant.random.{k:03d}",
                "dual-contravariance",
                f"{g} after {f}",
                duality.dual_contravariance_check(f, g),
            )
        )
    return results


def _random_carve_map(rng: random.Random, source: duality.CarvedSpace, target: duality.CarvedSpace) -> duality.CarveMap:
    """Over first-order sources, components without constant terms land in any infinitesimal target."""
    components = [random_polynomial(rng, source.coordinates, 2, terms=2, constant=False) for _ in range(target.dim)]
    return duality.CarveMap.create(source, target, components)


def prolongation_section(seed: int, config: SuiteConfig, document: Document) -> List[LawResult]:
    rng = make_rng(seed)
    samples = config.samples
    results = []
    algebras = [sa.W_D, sa.W_D2, sa.weil_power(2), SECOND_ORDER] + _weil_algebras(document)
    max_dim, degree = config.max_dim, config.max_degree

    def functorial(rng: random.Random) -> Optional[Dict[str, Any]]:
        l, m, n = (rng.randint(1, max_dim) for _ in range(3))
        f, g = _random_map(rng, l, m, degree), _random_map(rng, m, n, degree)
        algebra = rng.choice(algebras)
        p = pr.WPoint.random(rng, algebra, l)
        composed = pr.prolong(g.compose(f), algebra, p)
        if composed != pr.prolong(g, algebra, pr.prolong(f, algebra, p)):
            return {"f": f, "g": g, "p": p}
        if pr.prolong(pr.SmoothMap.identity(l), algebra, p) != p:
            return {"identity": pr.SmoothMap.identity(l), "p": p}
        return None

    results.append(
        _sample("prolong.functorial", "functor-composition", f"{samples} random polynomial pairs", samples, rng, functorial)
    )

    homs = _homs(document)
    for hom in homs:

        def natural(rng: random.Random) -> Optional[Dict[str, Any]]:
            n = rng.randint(1, max_dim)
            f = _random_map(rng, n, rng.randint(1, max_dim), 2)
            p = pr.WPoint.random(rng, hom.source, n)
            try:
                pr.bimap(f, hom, p)
            except SynthDGError as e:
                return {"f": f, "p": p, "error": e}
            return None

        results.append(
            _sample(f"prolong.natural.{hom}", "alpha-naturality", f"{samples // 2} random maps and points", samples // 2, rng, natural)
        )

        def nested(rng: random.Random) -> Optional[Dict[str, Any]]:
            inner = rng.choice([sa.W_D, sa.W_D2])
            p = _random_nested_point(rng, hom.source, inner, rng.randint(1, 2))
            if not pr.alpha_nested_check(hom, inner, p):
                return {"p": p, "inner": inner}
            return None

        if hom.source.is_weil:
            results.append(
                _sample(f"prolong.alpha-nested.{hom}", "alpha-coherence", f"{samples // 10} random nested points", samples // 10, rng, nested)
            )

    maps = list(duality.named_maps().values())
    for f, g in itertools.product(maps, repeat=2):
        if f.target != g.source:
            continue
        phi, psi = duality.dual_hom(g), duality.dual_hom(f)

        def composes(rng: random.Random) -> Optional[Dict[str, Any]]:
            p = pr.WPoint.random(rng, phi.source, rng.randint(1, max_dim))
            if pr.alpha(psi, pr.alpha(phi, p)) != pr.alpha(sa.hom_compose(psi, phi), p):
                return {"p": p}
            return None

        results.append(
            _sample(f"alpha.compose.{g.name}|{f.name}", "alpha-composition", f"{samples // 10} random points", samples // 10, rng, composes)
        )

    for algebra in algebras + [sa.polynomial_ring(2), sa.K]:

        def identity(rng: random.Random) -> Optional[Dict[str, Any]]:
            p = pr.WPoint.random(rng, algebra, rng.randint(0, max_dim))
            if pr.alpha(sa.identity(algebra), p) != p:
                return {"p": p}
            if pr.alpha(sa.augmentation(algebra), p) != pr.iota(sa.K, pr.tau(p)):
                return {"p": p, "reason": "augmentation is not the base point"}
            q = tuple(random_vector(rng, p.dim))
            if pr.tau(pr.iota(algebra, q)) != q:
                return {"q": q}
            return None

        results.append(
            _sample(f"alpha.identity.{algebra}", "alpha-identity", f"{samples // 2} random points", samples // 2, rng, identity)
        )

        def zero_section(rng: random.Random) -> Optional[Dict[str, Any]]:
            n = rng.randint(1, max_dim)
            f = _random_map(rng, n, rng.randint(1, max_dim), degree)
            q = random_vector(rng, n)
            if pr.prolong(f, algebra, pr.iota(algebra, q)) != pr.iota(algebra, f(q)):
                return {"f": f, "q": q}
            return None

        results.append(
            _sample(f"prolong.zero-section.{algebra}", "zero-section", f"{samples // 2} random maps", samples // 2, rng, zero_section)
        )

        if algebra.is_weil:

            def ring(rng: random.Random) -> Optional[Dict[str, Any]]:
                a, b = random_element(rng, algebra), random_element(rng, algebra)
                if not pr.linear_map_check(algebra, a, b):
                    return {"a": a, "b": b}
                return None

            results.append(
                _sample(f"prolong.line-ring.{algebra}", "line-object", f"{samples // 2} random pairs", samples // 2, rng, ring)
            )

    for outer, inner in [(sa.W_D, sa.W_D), (sa.W_D2, sa.W_D), (sa.W_D, sa.W_D2), (sa.K, sa.W_D)]:

        def reassociates(rng: random.Random) -> Optional[Dict[str, Any]]:
            n = rng.randint(1, max_dim)
            f = _random_map(rng, n, rng.randint(1, max_dim), degree)
            p = _random_nested_point(rng, outer, inner, n)
            flat = pr.reassociate(p, inner)
            if pr.unreassociate(flat, outer, inner) != p:
                return {"p": p, "reason": "round trip"}
            if pr.reassociate(pr.prolong(f, outer, p), inner) != pr.prolong(f, flat.algebra, flat):
                return {"f": f, "p": p}
            return None

        results.append(
            _sample(f"prolong.reassociate.{outer}.{inner}", "composite-prolongation", f"{samples} random maps", samples, rng, reassociates)
        )

    def triple(rng: random.Random) -> Optional[Dict[str, Any]]:
        a, b, c = sa.W_D, sa.W_D, sa.W_D
        p = _random_triple_point(rng, a, b, c, rng.randint(1, 2))
        outer_first = pr.reassociate(pr.reassociate(p, b), c)
        inner_first = pr.reassociate(
            pr.WPoint(a, tuple(_flatten_coefficients(x, b, c) for x in p.components)), sa.tensor(b, c)
        )
        if pr.alpha(sa.tensor_associator(a, b, c), outer_first) != inner_first:
            return {"p": p}
        return None

    results.append(
        _sample("prolong.reassociate.triple", "composite-prolongation", f"{samples} random points of W_D^3 nesting", samples, rng, triple)
    )

    def instantiate(rng: random.Random) -> Optional[Dict[str, Any]]:
        t = te.tangent(random_vector(rng, 2), random_vector(rng, 2))
        r = Fraction(rng.randint(-4, 4))
        family = pr.alpha(duality.dual_hom(duality.scalar_action()), t)
        scaled = pr.instantiate_free(family, {"Z": r})
        expected = te.tangent(pr.tau(t), [r * v for v in te.tangent_vector(t)])
        if scaled != expected:
            return {"t": t, "r": r}
        return None

    results.append(
        _sample("prolong.instantiate.scaling", "tangent-scaling", f"{samples} random tangents", samples, rng, instantiate)
    )
    return results


def _random_nested_point(rng: random.Random, outer: sa.FpAlgebra, inner: sa.FpAlgebra, dim: int) -> pr.WPoint:
    components = []
    for _ in range(dim):
        terms = [(m, random_element(rng, inner)) for m in sa.weil_basis(outer)]
        components.append(sa.AlgElement.from_terms(outer, terms))
    return pr.WPoint(outer, tuple(components))


def _random_triple_point(
    rng: random.Random, a: sa.FpAlgebra, b: sa.FpAlgebra, c: sa.FpAlgebra, dim: int
) -> pr.WPoint:
    components = []
    for _ in range(dim):
        terms = []
        for m in sa.weil_basis(a):
            middle = [(k, random_element(rng, c)) for k in sa.weil_basis(b)]
            terms.append((m, sa.AlgElement.from_terms(b, middle)))
        components.append(sa.AlgElement.from_terms(a, terms))
    return pr.WPoint(a, tuple(components))


def _flatten_coefficients(element: sa.AlgElement, inner: sa.FpAlgebra, innermost: sa.FpAlgebra) -> sa.AlgElement:
    """Rewrites the inner-algebra coefficients of `element` as elements of inner (x) innermost."""
    terms = []
    for monomial, coefficient in element.terms:
        if not isinstance(coefficient, sa.AlgElement):
            coefficient = inner.constant(coefficient)
        flat = pr.reassociate(pr.WPoint(inner, (coefficient,)), innermost)
        terms.append((monomial, flat.components[0]))
    return sa.AlgElement.from_terms(element.algebra, terms)


def tangent_section(seed: int, config: SuiteConfig, document: Document) -> List[LawResult]:
    samples = config.samples
    results = []
    for m in range(0, 5):
        if 1 <= m <= 3:
            results += te.tangent_module_check(m, samples, derive_seed(seed, f"tangent.{m}"))
        results += te.euclidean_check(m, samples, derive_seed(seed, f"euclidean.{m}"))
    for w in [sa.K, sa.W_D, sa.W_D2]:
        for m in (1, 2):
            results += te.euclidean_tensor_check(m, w, samples // 2, derive_seed(seed, f"euclidean-tensor.{m}.{w}"))
    for m in range(0, 4):
        results += te.fibered_tangent_check(m, samples, derive_seed(seed, f"fibered.{m}"))
    for m in (1, 2, 3):
        results += te.euclidean_d2_check(m, samples, derive_seed(seed, f"euclidean-d2.{m}"))
        results += te.distributivity_square_check(m, samples, derive_seed(seed, f"distributivity.{m}"))
        results += te.exponential_trivial_check(m, samples, derive_seed(seed, f"exponential.{m}"))
    return _unique(results)


def _unique(results: List[LawResult]) -> List[LawResult]:
    """Entries repeated by several checks (such as the equalizer) are kept once."""
    seen = set()
    unique = []
    for result in results:
        key = (result.id, result.passed)
        if key not in seen:
            seen.add(key)
            unique.append(result)
    return unique


def forms_section(seed: int, config: SuiteConfig, document: Document) -> List[LawResult]:
    results = []
    trials = config.trials
    for field in _field_corpus(document, config):
        omega = forms.from_classical(field, check=False)
        report = forms.validate_form(omega, trials, derive_seed(seed, str(field)))
        results += [_prefixed(entry, "form.") for entry in report.entries]

    field = document.classical_field("x_dy") if "x_dy" in document.fields else None
    if field is not None:
        omega = forms.from_classical(field, check=False)

        def phi(gamma: forms.Microcube, x: Any) -> List[Any]:
            return [x * v for v in omega(gamma)]

        params = [Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(3)]
        try:
            curried = forms.curry_factorize(phi, omega.n, omega.m, omega.e, params, trials // 10 or 1, seed)
            results.append(law("form.curry.x_dy", "form-currying", f"{len(curried)} parameters", True))
        except ConditionViolated as e:
            results.append(law("form.curry.x_dy", "form-currying", f"{len(params)} parameters", False, **e.witness))
    return results


def _prefixed(entry: LawResult, prefix: str) -> LawResult:
    return LawResult(prefix + entry.id, entry.anchor, entry.instance, entry.passed, entry.witness)


def _field_corpus(document: Document, config: SuiteConfig) -> List[forms.ClassicalTensorField]:
    """The document fields followed by one random monomial field per (n, I) on R^3 with n <= 3."""
    rng = make_rng(derive_seed(config.seed, "fields"))
    corpus = list(document.fields.values())
    coordinates = ("x", "y", "z")
    for n in range(0, 4):
        for indices in itertools.combinations(range(1, 4), n):
            coefficient = random_polynomial(rng, coordinates, config.max_degree, terms=3)
            if coefficient == 0:
                coefficient = random_polynomial(rng, coordinates, 1, terms=1) + 1
            label = ",".join(str(i) for i in indices) or "0"
            name = f"random[{n}:{label}]"
            corpus.append(forms.ClassicalTensorField.create(n, coordinates, {indices: coefficient}, 1, name))
    return corpus


def exterior_section(seed: int, config: SuiteConfig, document: Document) -> List[LawResult]:
    results = exterior.sign_law_check(config.max_perm_size)
    for n1 in range(1, 5):
        for i, j in itertools.product(range(1, n1 + 1), repeat=2):
            results.append(
                law(
                    f"boundary.scaling.{n1}.{i}.{j}",
                    "boundary-scaling",
                    f"moving direction {i} of {n1} last against scaling direction {j}",
                    exterior.boundary_scaling_commutes(n1, i, j),
                )
            )
    samples = max(config.samples // 10, 1)
    for field in _field_corpus(document, config):
        omega = forms.from_classical(field, check=False)
        field_seed = derive_seed(seed, f"exterior.{field}")
        results += exterior.partial_integral_homogeneity_check(omega, samples, field_seed)
        if omega.n + 1 <= 4:
            results += exterior.alternating_sum_check(omega, max(samples // 2, 1), field_seed)
        results += oracle_check(field, omega, config.samples, field_seed)
    return results


def oracle_check(
    field: forms.ClassicalTensorField, omega: forms.DifferentialForm, samples: int, seed: int
) -> List[LawResult]:
    """d omega against the classical derivative, d omega as a form, and d d omega = 0."""
    rng = make_rng(seed)
    d_omega = exterior.exterior_derivative(omega, check=False)
    expected = forms.from_classical(classical_exterior_derivative(field), check=False)
    n1 = omega.n + 1
    results = []

    def matches(rng: random.Random) -> Optional[Dict[str, Any]]:
        gamma = forms.Microcube.random(rng, n1, omega.m)
        if d_omega(gamma) != expected(gamma):
            return {"gamma": gamma, "synthetic": d_omega(gamma), "classical": expected(gamma)}
        return None

    instance = f"{field} on R^{omega.m}, {samples} random microcubes"
    results.append(_sample(f"oracle.matches.{field}", "exterior-derivative", instance, samples, rng, matches))
    if n1 <= omega.m:
        report = forms.validate_form(d_omega, max(samples // 2, 1), seed)
        results.append(
            law(
                f"oracle.is-form.{field}",
                "exterior-derivative",
                f"d({field}) through the form validator",
                report.failed == 0,
                **({"failure": report.failures[0].id} if report.failed else {}),
            )
        )
    if n1 + 1 <= omega.m:
        dd_omega = exterior.exterior_derivative(d_omega, check=False)

        def vanishes(rng: random.Random) -> Optional[Dict[str, Any]]:
            gamma = forms.Microcube.random(rng, n1 + 1, omega.m)
            value = dd_omega(gamma)
            if any(v != 0 for v in value):
                return {"gamma": gamma, "value": value}
            return None

        results.append(
            _sample(f"oracle.dd-zero.{field}", "exterior-derivative", instance, max(samples // 2, 1), rng, vanishes)
        )
    return results


def document_section(seed: int, config: SuiteConfig, document: Document) -> List[LawResult]:
    return document.validation_results()


SECTIONS: Sequence[Tuple[str, Section]] = (
    ("algebra", algebra_section),
    ("tensor", tensor_section),
    ("duality", duality_section),
    ("prolongation", prolongation_section),
    ("tangent", tangent_section),
    ("forms", forms_section),
    ("exterior", exterior_section),
    ("document", document_section),
)


def run_suite(config: SuiteConfig, document: Document, progress: bool = False) -> Report:
    """
    run_suite runs every section and collects its entries into one report.
    A section that raises contributes a single failed entry instead.
    """
    report = Report("check all", config.seed)
    sections = tqdm(SECTIONS, desc="check all", disable=not progress, leave=False)
    for name, section in sections:
        sections.set_postfix_str(name)
        logger.info("running section %s", name)
        try:
            report.extend(section(derive_seed(config.seed, name), config, document))
        except SynthDGError as e:
            logger.error("section %s failed: %s", name, e)
            report.extend([law(f"{name}.error", "suite", f"section {name}", False, error=e)])
    logger.info("check all: %d passed, %d failed", report.passed, report.failed)
    return report
