"""
Input documents: named algebras, homomorphisms, carve maps, smooth maps and
classical fields, all written with expression strings.

Structural problems (missing keys, unparsable expressions, unknown names)
raise DocumentError with the path of the offending entry. Objects that parse
but fail their own validation (a homomorphism violating a relation, a field
that is not antisymmetric) are kept as rejected entries so that checks can
report them.
"""
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, TypeVar

import yaml

from synthdg import duality
from synthdg import scalar_algebra as sa
from synthdg.errors import (
    AntisymmetryViolated,
    DocumentError,
    NonMonomialIdeal,
    NotPointed,
    RelationViolated,
    SynthDGError,
)
from synthdg.forms import ClassicalTensorField
from synthdg.prolongation import SmoothMap
from synthdg.report import LawResult, law

logger = logging.getLogger(__name__)

SUPPORTED_VERSIONS = (1,)
BUILTIN_DOCUMENT = Path(__file__).parent / "data" / "builtin.yaml"

T = TypeVar("T")


@dataclass
class Rejected:
    path: str
    error: SynthDGError


@dataclass
class Document:
    version: int
    algebras: Dict[str, sa.FpAlgebra] = field(default_factory=dict)
    homs: Dict[str, sa.AlgebraHom] = field(default_factory=dict)
    carve_maps: Dict[str, duality.CarveMap] = field(default_factory=dict)
    smooth_maps: Dict[str, SmoothMap] = field(default_factory=dict)
    fields: Dict[str, ClassicalTensorField] = field(default_factory=dict)
    rejected: List[Rejected] = field(default_factory=list)
    source: str = "<document>"

    def algebra(self, name: str) -> sa.FpAlgebra:
        return _lookup(self.algebras, name, "algebras")

    def hom(self, name: str) -> sa.AlgebraHom:
        if name not in self.homs:
            self._raise_if_rejected("homs", name)
        return _lookup(self.homs, name, "homs")

    def smooth_map(self, name: str) -> SmoothMap:
        return _lookup(self.smooth_maps, name, "smooth_maps")

    def classical_field(self, name: str) -> ClassicalTensorField:
        if name not in self.fields:
            self._raise_if_rejected("fields", name)
        return _lookup(self.fields, name, "fields")

    def _raise_if_rejected(self, section: str, name: str) -> None:
        for rejected in self.rejected:
            if rejected.path == f"{section}.{name}":
                raise rejected.error

    def validation_results(self) -> List[LawResult]:
        """One entry per object of the document, failed for rejected objects."""
        results = []
        for section in ("algebras", "homs", "carve_maps", "smooth_maps", "fields"):
            for name in getattr(self, section):
                results.append(law(f"document.{section}.{name}", "document", f"{self.source}: {section}.{name}", True))
        for rejected in self.rejected:
            results.append(
                law(
                    f"document.{rejected.path}",
                    "document",
                    f"{self.source}: {rejected.path}",
                    False,
                    error=rejected.error,
                    **({"relation": rejected.error.relation} if isinstance(rejected.error, RelationViolated) else {}),
                )
            )
        return results


def _lookup(table: Dict[str, T], name: str, section: str) -> T:
    if name not in table:
        known = ", ".join(sorted(table))
        raise DocumentError(f"{section}.{name}", f"not defined, known names are [{known}]")
    return table[name]


def _load_yaml_file(path: str) -> Any:
    try:
        with open(path, "r") as f:
            return yaml.safe_load(f.read())
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        position = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else path
        raise DocumentError(position, str(e.problem)) from e
    except yaml.YAMLError as e:
        raise DocumentError(path, str(e)) from e


def load_document(path: str) -> Document:
    """load_document reads a YAML or JSON document from `path`."""
    data = _load_yaml_file(path)
    logger.info("loaded document %s", path)
    return build_document(data, path)


def builtin_document() -> Document:
    data = _load_yaml_file(str(BUILTIN_DOCUMENT))
    return build_document(data, "builtin")


def build_document(data: Any, source: str = "<document>") -> Document:
    if not isinstance(data, dict):
        raise DocumentError(source, "the document must be a mapping")
    version = data.get("version")
    if version not in SUPPORTED_VERSIONS:
        raise DocumentError("version", f"unsupported version [{version}], expected one of {list(SUPPORTED_VERSIONS)}")
    unknown = set(data) - {"version", "algebras", "homs", "carve_maps", "smooth_maps", "fields"}
    if unknown:
        raise DocumentError(", ".join(sorted(unknown)), "unknown section")
    document = Document(version, source=source)
    for name, entry in _section(data, "algebras"):
        document.algebras[name] = _build(document, f"algebras.{name}", lambda: _algebra(entry, f"algebras.{name}"))
    for name, entry in _section(data, "homs"):
        built = _build(document, f"homs.{name}", lambda: _hom(document, entry, f"homs.{name}"))
        if built is not None:
            document.homs[name] = built
    for name, entry in _section(data, "carve_maps"):
        built = _build(document, f"carve_maps.{name}", lambda: _carve_map(document, entry, f"carve_maps.{name}", name))
        if built is not None:
            document.carve_maps[name] = built
    for name, entry in _section(data, "smooth_maps"):
        document.smooth_maps[name] = _build(
            document, f"smooth_maps.{name}", lambda: _smooth_map(entry, f"smooth_maps.{name}", name)
        )
    for name, entry in _section(data, "fields"):
        built = _build(document, f"fields.{name}", lambda: _field(entry, f"fields.{name}", name))
        if built is not None:
            document.fields[name] = built
    return document


def _section(data: Dict[str, Any], section: str) -> List[Tuple[str, Dict[str, Any]]]:
    entries = data.get(section) or {}
    if not isinstance(entries, dict):
        raise DocumentError(section, "must be a mapping from names to entries")
    result = []
    for name, entry in entries.items():
        if not isinstance(entry, dict):
            raise DocumentError(f"{section}.{name}", "must be a mapping")
        result.append((str(name), entry))
    return result


def _build(document: Document, path: str, build: Callable[[], T]) -> Any:
    """Rejections are recorded, other domain errors become DocumentErrors at `path`."""
    try:
        return build()
    except (RelationViolated, AntisymmetryViolated) as e:
        logger.info("rejected %s: %s", path, e)
        document.rejected.append(Rejected(path, e))
        return None
    except DocumentError:
        raise
    except SynthDGError as e:
        raise DocumentError(path, str(e)) from e


def _require(entry: Dict[str, Any], key: str, path: str) -> Any:
    if key not in entry:
        raise DocumentError(f"{path}.{key}", "missing")
    return entry[key]


def _algebra(entry: Dict[str, Any], path: str) -> sa.FpAlgebra:
    generators = [str(g) for g in _require(entry, "generators", path) or []]
    relations = entry.get("relations") or []
    for index, relation in enumerate(relations):
        if not isinstance(relation, dict):
            raise DocumentError(
                f"{path}.relations[{index}]", "relations are exponent maps such as {X: 2}"
            )
    try:
        return sa.FpAlgebra.create(generators, [{str(k): int(v) for k, v in r.items()} for r in relations])
    except (NonMonomialIdeal, NotPointed) as e:
        raise DocumentError(f"{path}.relations", str(e)) from e


_POWER = re.compile(r"^(D|R)\^(\d+)$")


def resolve_space(document: Document, name: str, path: str) -> duality.CarvedSpace:
    """
    Spaces are document algebras by name, or D, D(2), D^n, R, R^n and products
    of those written with x, such as RxD(2).
    """
    if name in document.algebras:
        return duality.CarvedSpace(document.algebras[name], name)
    builtin = _builtin_space(name)
    if builtin is not None:
        return builtin
    parts = name.split("x")
    spaces = [_builtin_space(p) for p in parts]
    if len(parts) > 1 and all(s is not None for s in spaces):
        result = spaces[0]
        for space in spaces[1:]:
            result = duality.space_product(result, space)  # type: ignore
        return result  # type: ignore
    raise DocumentError(path, f"unknown space [{name}]")


def _builtin_space(name: str) -> Optional[duality.CarvedSpace]:
    if name == "D":
        return duality.space_D(1)
    if name == "D(2)":
        return duality.space_D2()
    if name == "R":
        return duality.space_R(1)
    match = _POWER.match(name)
    if match:
        n = int(match.group(2))
        return duality.space_D(n) if match.group(1) == "D" else duality.space_R(n)
    return None


def _hom(document: Document, entry: Dict[str, Any], path: str) -> sa.AlgebraHom:
    source = document.algebra(str(_require(entry, "source", path)))
    target = document.algebra(str(_require(entry, "target", path)))
    images = _require(entry, "images", path)
    if isinstance(images, dict):
        images = {str(k): str(v) for k, v in images.items()}
    elif isinstance(images, list):
        images = [str(v) for v in images]
    else:
        raise DocumentError(f"{path}.images", "must be a mapping or a list of expressions")
    return sa.hom_make(source, target, images)


def _carve_map(document: Document, entry: Dict[str, Any], path: str, name: str) -> duality.CarveMap:
    source = resolve_space(document, str(_require(entry, "source", path)), f"{path}.source")
    target = resolve_space(document, str(_require(entry, "target", path)), f"{path}.target")
    components = [str(c) for c in _require(entry, "components", path)]
    return duality.CarveMap.create(source, target, components, name)


def _smooth_map(entry: Dict[str, Any], path: str, name: str) -> SmoothMap:
    variables = [str(v) for v in _require(entry, "variables", path)]
    components = [str(c) for c in _require(entry, "components", path)]
    return SmoothMap.from_expressions(components, variables, name)


def _field(entry: Dict[str, Any], path: str, name: str) -> ClassicalTensorField:
    n = int(_require(entry, "n", path))
    coordinates = [str(c) for c in _require(entry, "coordinates", path)]
    coefficients = _require(entry, "coefficients", path)
    if not isinstance(coefficients, dict):
        raise DocumentError(f"{path}.coefficients", "must map index tuples such as \"1,2\" to expressions")
    e = int(entry.get("e", 1))
    parsed = {
        str(k): ([str(x) for x in v] if isinstance(v, list) else str(v)) for k, v in coefficients.items()
    }
    return ClassicalTensorField.create(n, coordinates, parsed, e, name)
