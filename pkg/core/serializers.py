"""
JSON documents read and written by the toric_kring command.

FanDocument      {"rank", "rays", "max_cones", "v"?}, ray indices 0-based
ClassDocument    {"rank", "components": [[{"exponent", "coefficient"}, ...], ...]}
BasisDocument    {"rank", "classes": [components, ...]}
ResultDocument   {"kind", "payload", "tool_version"}

Output is rendered with sorted keys so identical inputs give identical bytes.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence, TypedDict

from core.conf import kring_setting
from core.exceptions import DocumentError
from core.fan.fan import Fan
from core.kring.gkm import KClass
from core.util.lattice import LatticeVector, primitive
from core.util.laurent import LaurentPoly, TermContext

logger = logging.getLogger(__name__)

RESULT_KINDS = (
    "validation",
    "completeness",
    "cellular-certificate",
    "rejection",
    "gkm-graph",
    "plp",
    "basis",
    "coordinates",
    "structure-constants",
)


class FanDocumentContext(TypedDict, total=False):
    rank: int
    rays: list[list[int]]
    max_cones: list[list[int]]
    v: list[int]


class ClassDocumentContext(TypedDict):
    rank: int
    components: list[list[TermContext]]


class BasisDocumentContext(TypedDict):
    rank: int
    classes: list[list[list[TermContext]]]


class ResultDocument(TypedDict):
    kind: str
    payload: Any
    tool_version: str


@dataclass(frozen=True)
class FanDocument:
    rank: int
    rays: tuple[LatticeVector, ...]
    max_cones: tuple[tuple[int, ...], ...]
    v: Optional[LatticeVector] = None

    def to_fan(self) -> Fan:
        return Fan.from_rays(self.rank, self.rays, self.max_cones)

    def context(self) -> FanDocumentContext:
        doc: FanDocumentContext = {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }
        if self.v is not None:
            doc["v"] = list(self.v)
        return doc


def resolve_document(value: str) -> Path:
    """An existing path, or the name of a bundled fixture."""
    path = Path(value)
    if path.is_file():
        return path
    fixture = Path(kring_setting("FIXTURE_DIR")) / f"{value}.json"
    if fixture.is_file():
        return fixture
    raise DocumentError(f"No such document or fixture: {value}")


def read_document(value: str) -> Any:
    path = resolve_document(value)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"Cannot read {path}: {e.strerror}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"Invalid JSON in {path.name}: {e.msg}", line=e.lineno) from e


def _expect_keys(data: Any, required: Sequence[str], optional: Sequence[str] = ()):
    if not isinstance(data, dict):
        raise DocumentError("expected a JSON object")
    for key in required:
        if key not in data:
            raise DocumentError("missing field", field=key)
    for key in data:
        if key not in required and key not in optional:
            raise DocumentError("unknown field", field=key)


def _integer(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError("expected an integer", field=field)
    return value


def _vector(value: Any, rank: int, field: str) -> LatticeVector:
    if not isinstance(value, list):
        raise DocumentError("expected a list of integers", field=field)
    if len(value) != rank:
        raise DocumentError(f"expected {rank} entries, got {len(value)}", field=field)
    return tuple(_integer(x, f"{field}[{k}]") for k, x in enumerate(value))


def _rank(data: dict) -> int:
    rank = _integer(data["rank"], "rank")
    if rank <= 0:
        raise DocumentError("rank must be positive", field="rank")
    return rank


def _list(value: Any, field: str) -> list:
    if not isinstance(value, list):
        raise DocumentError("expected a list", field=field)
    return value


def parse_fan_document(data: Any) -> FanDocument:
    _expect_keys(data, ("rank", "rays", "max_cones"), ("v",))
    rank = _rank(data)
    rays = []
    for k, item in enumerate(_list(data["rays"], "rays")):
        ray = _vector(item, rank, f"rays[{k}]")
        if any(ray) and primitive(ray) != ray:
            logger.warning("Ray %d %s normalized to %s", k, ray, primitive(ray))
            ray = primitive(ray)
        rays.append(ray)
    cones = []
    for i, item in enumerate(_list(data["max_cones"], "max_cones")):
        indices = []
        for k, x in enumerate(_list(item, f"max_cones[{i}]")):
            index = _integer(x, f"max_cones[{i}][{k}]")
            if not 0 <= index < len(rays):
                raise DocumentError("ray index out of range", field=f"max_cones[{i}][{k}]")
            indices.append(index)
        cones.append(tuple(sorted(indices)))
    v = _vector(data["v"], rank, "v") if "v" in data else None
    return FanDocument(rank, tuple(rays), tuple(cones), v)


def parse_terms(items: Any, rank: int, field: str) -> LaurentPoly:
    terms = []
    for k, item in enumerate(_list(items, field)):
        where = f"{field}[{k}]"
        if not isinstance(item, dict) or set(item) != {"exponent", "coefficient"}:
            raise DocumentError("expected {exponent, coefficient}", field=where)
        exponent = _vector(item["exponent"], rank, f"{where}.exponent")
        terms.append((exponent, _integer(item["coefficient"], f"{where}.coefficient")))
    return LaurentPoly.from_terms(rank, terms)


def _components(items: Any, rank: int, field: str) -> list[LaurentPoly]:
    return [
        parse_terms(component, rank, f"{field}[{i}]")
        for i, component in enumerate(_list(items, field))
    ]


def parse_class_document(data: Any) -> tuple[int, list[LaurentPoly]]:
    _expect_keys(data, ("rank", "components"))
    rank = _rank(data)
    return rank, _components(data["components"], rank, "components")


def parse_basis_document(data: Any) -> tuple[int, list[list[LaurentPoly]]]:
    _expect_keys(data, ("rank", "classes"))
    rank = _rank(data)
    classes = [
        _components(item, rank, f"classes[{k}]")
        for k, item in enumerate(_list(data["classes"], "classes"))
    ]
    return rank, classes


def class_document(a: KClass) -> ClassDocumentContext:
    return {"rank": a.rank, "components": a.context()}


def basis_document(classes: Sequence[KClass]) -> BasisDocumentContext:
    return {"rank": classes[0].rank, "classes": [a.context() for a in classes]}


def result_document(kind: str, payload: Any) -> ResultDocument:
    if kind not in RESULT_KINDS:
        raise ValueError(f"Unknown result kind: {kind}")
    return {"kind": kind, "payload": payload, "tool_version": kring_setting("TOOL_VERSION")}


def render_document(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=kring_setting("OUTPUT_INDENT")) + "\n"


def parse_result_document(text: str) -> ResultDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"Invalid JSON: {e.msg}", line=e.lineno) from e
    _expect_keys(data, ("kind", "payload", "tool_version"))
    if data["kind"] not in RESULT_KINDS:
        raise DocumentError(f"unknown result kind {data['kind']!r}", field="kind")
    return data
