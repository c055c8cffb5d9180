"""Contract-statement hypergraph model with authoring-time validation.

A statement pairs an ordered parameter list with two vertex layers —
parameter-value groups carrying keyword sets, and response labels — plus
hyperedge rules that connect at most one vertex per parameter to exactly
one response. Every structural rule maps to a stable violation code so
authoring tools can reject a bad edit the moment it happens instead of
persisting a broken graph.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

MIN_LABEL_LENGTH = 2

_DOCUMENT_KEYS = frozenset({"id", "name", "parameters", "vertices", "edges"})
_PARAMETER_VERTEX_KEYS = frozenset({"id", "kind", "parameter", "keywords"})
_RESPONSE_VERTEX_KEYS = frozenset({"id", "kind", "label"})
_EDGE_KEYS = frozenset({"id", "vertices"})


def canonical(text: str) -> str:
    """Collapse whitespace runs, trim, and lowercase for comparison.

    Matching is literal but case- and whitespace-insensitive; anything
    smarter (typo tolerance, synonyms) is deliberately out of scope.
    """
    return " ".join(text.split()).lower()


class DocumentError(ValueError):
    """A statement document too malformed to parse into the model at all."""


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


class ViolationCode(enum.Enum):
    SELF_REFERENCE = "SELF_REFERENCE"
    SAME_LAYER = "SAME_LAYER"
    DUPLICATE_RULE = "DUPLICATE_RULE"
    NO_RESPONSE_VERTEX = "NO_RESPONSE_VERTEX"
    MULTIPLE_RESPONSE_VERTICES = "MULTIPLE_RESPONSE_VERTICES"
    DUPLICATE_KEYWORD = "DUPLICATE_KEYWORD"
    DUPLICATE_RESPONSE_LABEL = "DUPLICATE_RESPONSE_LABEL"
    EMPTY_KEYWORDS = "EMPTY_KEYWORDS"
    BAD_LABEL_LENGTH = "BAD_LABEL_LENGTH"
    DANGLING_VERTEX_REF = "DANGLING_VERTEX_REF"
    UNKNOWN_PARAMETER = "UNKNOWN_PARAMETER"
    AMBIGUOUS_EDGE_PAIR = "AMBIGUOUS_EDGE_PAIR"

    @property
    def severity(self) -> Severity:
        if self in _WARNING_CODES:
            return Severity.WARNING
        return Severity.ERROR


_WARNING_CODES = frozenset({ViolationCode.AMBIGUOUS_EDGE_PAIR})


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    message: str
    ids: tuple[str, ...] = ()

    @property
    def severity(self) -> Severity:
        return self.code.severity

    def to_doc(self) -> dict[str, Any]:
        return {
            "code": self.code.value,
            "message": self.message,
            "ids": list(self.ids),
            "severity": self.severity.value,
        }


@dataclass(frozen=True)
class ValidationReport:
    """Complete, deterministically ordered outcome of validating a statement."""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        """True when no error-severity violation is present (warnings allowed)."""
        return not self.errors

    @property
    def errors(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity is Severity.WARNING)

    def codes(self) -> set[ViolationCode]:
        return {v.code for v in self.violations}

    def to_doc(self) -> dict[str, Any]:
        return {
            "valid": self.ok,
            "violations": [v.to_doc() for v in self.violations],
        }


@dataclass(frozen=True)
class ParameterVertex:
    """A group of interchangeable values for one parameter.

    ``keywords`` keeps the authored spelling and order; comparisons and
    matching always go through :func:`canonical`.
    """

    id: str
    parameter: str
    keywords: tuple[str, ...]

    @cached_property
    def canonical_keywords(self) -> frozenset[str]:
        return frozenset(canonical(k) for k in self.keywords)


@dataclass(frozen=True)
class ResponseVertex:
    id: str
    label: str


@dataclass(frozen=True)
class Hyperedge:
    """One rule: a set of vertex ids, authored order preserved for round-trips."""

    id: str
    vertices: tuple[str, ...]

    @cached_property
    def vertex_id_set(self) -> frozenset[str]:
        return frozenset(self.vertices)


@dataclass(frozen=True)
class Statement:
    """A validated (or about-to-be-validated) contract statement hypergraph."""

    id: str
    name: str
    parameters: tuple[str, ...]
    parameter_vertices: tuple[ParameterVertex, ...]
    response_vertices: tuple[ResponseVertex, ...]
    edges: tuple[Hyperedge, ...]

    @cached_property
    def vertices_by_id(self) -> dict[str, ParameterVertex | ResponseVertex]:
        index: dict[str, ParameterVertex | ResponseVertex] = {}
        for vertex in self.parameter_vertices:
            index[vertex.id] = vertex
        for vertex in self.response_vertices:
            index[vertex.id] = vertex
        return index

    @cached_property
    def canonical_parameters(self) -> dict[str, str]:
        """canonical name -> declared name, first declaration wins."""
        index: dict[str, str] = {}
        for name in self.parameters:
            index.setdefault(canonical(name), name)
        return index

    @cached_property
    def keyword_index(self) -> dict[str, dict[str, ParameterVertex]]:
        """canonical parameter -> canonical keyword -> owning vertex.

        Built tolerantly (first vertex wins) so it is usable even while a
        statement is still being validated.
        """
        index: dict[str, dict[str, ParameterVertex]] = {}
        for vertex in self.parameter_vertices:
            bucket = index.setdefault(canonical(vertex.parameter), {})
            for keyword in vertex.keywords:
                bucket.setdefault(canonical(keyword), vertex)
        return index

    def vertices_for(self, parameter: str) -> tuple[ParameterVertex, ...]:
        wanted = canonical(parameter)
        return tuple(
            v for v in self.parameter_vertices if canonical(v.parameter) == wanted
        )

    def is_response(self, vertex_id: str) -> bool:
        return isinstance(self.vertices_by_id.get(vertex_id), ResponseVertex)

    def edge_parameter_vertex_ids(self, edge: Hyperedge) -> frozenset[str]:
        return frozenset(
            vid
            for vid in edge.vertex_id_set
            if isinstance(self.vertices_by_id.get(vid), ParameterVertex)
        )

    def edge_response(self, edge: Hyperedge) -> ResponseVertex | None:
        for vid in edge.vertices:
            vertex = self.vertices_by_id.get(vid)
            if isinstance(vertex, ResponseVertex):
                return vertex
        return None


# ---------------------------------------------------------------------------
# Document parsing and serialization (the wire/file schema)
# ---------------------------------------------------------------------------


def _require_str(value: Any, what: str) -> str:
    if not isinstance(value, str):
        raise DocumentError(f"{what} must be a string, got {type(value).__name__}")
    return value


def _require_list(value: Any, what: str) -> list[Any]:
    if not isinstance(value, list):
        raise DocumentError(f"{what} must be a list, got {type(value).__name__}")
    return value


def statement_from_doc(doc: Mapping[str, Any]) -> Statement:
    """Parse a statement document into the model without validating invariants.

    Raises DocumentError for structural problems (wrong types, unknown keys,
    duplicate ids); semantic rule violations are left to validate_statement.
    """
    if not isinstance(doc, Mapping):
        raise DocumentError(f"document must be an object, got {type(doc).__name__}")
    unknown = set(doc) - _DOCUMENT_KEYS
    if unknown:
        raise DocumentError(f"unknown top-level keys: {sorted(unknown)}")
    missing = _DOCUMENT_KEYS - set(doc)
    if missing:
        raise DocumentError(f"missing top-level keys: {sorted(missing)}")

    stmt_id = _require_str(doc["id"], "id")
    if not stmt_id:
        raise DocumentError("id must be non-empty")
    name = _require_str(doc["name"], "name")
    parameters = tuple(
        _require_str(p, "parameters entry") for p in _require_list(doc["parameters"], "parameters")
    )

    parameter_vertices: list[ParameterVertex] = []
    response_vertices: list[ResponseVertex] = []
    seen_vertex_ids: set[str] = set()
    for i, raw in enumerate(_require_list(doc["vertices"], "vertices")):
        if not isinstance(raw, Mapping):
            raise DocumentError(f"vertices[{i}] must be an object")
        kind = raw.get("kind")
        if kind == "parameter":
            unknown = set(raw) - _PARAMETER_VERTEX_KEYS
            if unknown:
                raise DocumentError(f"vertices[{i}]: unknown keys {sorted(unknown)}")
            missing = _PARAMETER_VERTEX_KEYS - set(raw)
            if missing:
                raise DocumentError(f"vertices[{i}]: missing keys {sorted(missing)}")
            vid = _require_str(raw["id"], f"vertices[{i}].id")
            keywords = tuple(
                _require_str(k, f"vertices[{i}] keyword")
                for k in _require_list(raw["keywords"], f"vertices[{i}].keywords")
            )
            parameter_vertices.append(
                ParameterVertex(
                    id=vid,
                    parameter=_require_str(raw["parameter"], f"vertices[{i}].parameter"),
                    keywords=keywords,
                )
            )
        elif kind == "response":
            unknown = set(raw) - _RESPONSE_VERTEX_KEYS
            if unknown:
                raise DocumentError(f"vertices[{i}]: unknown keys {sorted(unknown)}")
            missing = _RESPONSE_VERTEX_KEYS - set(raw)
            if missing:
                raise DocumentError(f"vertices[{i}]: missing keys {sorted(missing)}")
            vid = _require_str(raw["id"], f"vertices[{i}].id")
            response_vertices.append(
                ResponseVertex(id=vid, label=_require_str(raw["label"], f"vertices[{i}].label"))
            )
        else:
            raise DocumentError(f"vertices[{i}].kind must be 'parameter' or 'response'")
        if not vid:
            raise DocumentError(f"vertices[{i}].id must be non-empty")
        if vid in seen_vertex_ids:
            raise DocumentError(f"duplicate vertex id {vid!r}")
        seen_vertex_ids.add(vid)

    edges: list[Hyperedge] = []
    seen_edge_ids: set[str] = set()
    for i, raw in enumerate(_require_list(doc["edges"], "edges")):
        if not isinstance(raw, Mapping):
            raise DocumentError(f"edges[{i}] must be an object")
        unknown = set(raw) - _EDGE_KEYS
        if unknown:
            raise DocumentError(f"edges[{i}]: unknown keys {sorted(unknown)}")
        missing = _EDGE_KEYS - set(raw)
        if missing:
            raise DocumentError(f"edges[{i}]: missing keys {sorted(missing)}")
        eid = _require_str(raw["id"], f"edges[{i}].id")
        if not eid:
            raise DocumentError(f"edges[{i}].id must be non-empty")
        if eid in seen_edge_ids:
            raise DocumentError(f"duplicate edge id {eid!r}")
        seen_edge_ids.add(eid)
        vertices = tuple(
            _require_str(v, f"edges[{i}] vertex ref")
            for v in _require_list(raw["vertices"], f"edges[{i}].vertices")
        )
        edges.append(Hyperedge(id=eid, vertices=vertices))

    return Statement(
        id=stmt_id,
        name=name,
        parameters=parameters,
        parameter_vertices=tuple(parameter_vertices),
        response_vertices=tuple(response_vertices),
        edges=tuple(edges),
    )


def statement_to_doc(stmt: Statement) -> dict[str, Any]:
    """Serialize to the document schema shared by the file store and the API."""
    vertices: list[dict[str, Any]] = []
    for vertex in stmt.parameter_vertices:
        vertices.append(
            {
                "id": vertex.id,
                "kind": "parameter",
                "parameter": vertex.parameter,
                "keywords": list(vertex.keywords),
            }
        )
    for vertex in stmt.response_vertices:
        vertices.append({"id": vertex.id, "kind": "response", "label": vertex.label})
    return {
        "id": stmt.id,
        "name": stmt.name,
        "parameters": list(stmt.parameters),
        "vertices": vertices,
        "edges": [{"id": e.id, "vertices": list(e.vertices)} for e in stmt.edges],
    }


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _label_ok(text: str) -> bool:
    return len(canonical(text)) >= MIN_LABEL_LENGTH


def validate_statement(stmt: Statement) -> ValidationReport:
    """Check every structural invariant; returns all violations, sorted."""
    found: list[Violation] = []

    def add(code: ViolationCode, message: str, *ids: str) -> None:
        found.append(Violation(code=code, message=message, ids=tuple(ids)))

    # Parameter declarations. The closed code set has no dedicated codes for
    # declaration-level problems, so every break in the parameters <-> vertex
    # cross-reference reports UNKNOWN_PARAMETER with a disambiguating message.
    if not stmt.parameters:
        add(ViolationCode.UNKNOWN_PARAMETER, "statement declares no parameters")
    seen_params: dict[str, str] = {}
    for name in stmt.parameters:
        if not _label_ok(name):
            add(
                ViolationCode.BAD_LABEL_LENGTH,
                f"parameter name {name!r} is shorter than {MIN_LABEL_LENGTH} characters",
                name,
            )
        key = canonical(name)
        if key in seen_params:
            add(
                ViolationCode.UNKNOWN_PARAMETER,
                f"parameter {name!r} declared more than once",
                name,
            )
        seen_params[key] = name

    declared = set(seen_params)

    # Parameter vertices.
    keywords_seen: dict[tuple[str, str], str] = {}  # (param, keyword) -> vertex id
    referenced_params: set[str] = set()
    for vertex in stmt.parameter_vertices:
        param_key = canonical(vertex.parameter)
        referenced_params.add(param_key)
        if param_key not in declared:
            add(
                ViolationCode.UNKNOWN_PARAMETER,
                f"vertex {vertex.id!r} references undeclared parameter {vertex.parameter!r}",
                vertex.id,
            )
        if not vertex.keywords:
            add(
                ViolationCode.EMPTY_KEYWORDS,
                f"vertex {vertex.id!r} has no keywords",
                vertex.id,
            )
        local_seen: set[str] = set()
        for keyword in vertex.keywords:
            if not _label_ok(keyword):
                add(
                    ViolationCode.BAD_LABEL_LENGTH,
                    f"keyword {keyword!r} on vertex {vertex.id!r} is shorter than "
                    f"{MIN_LABEL_LENGTH} characters",
                    vertex.id,
                )
            key = canonical(keyword)
            if key in local_seen:
                add(
                    ViolationCode.DUPLICATE_KEYWORD,
                    f"keyword {keyword!r} repeated within vertex {vertex.id!r}",
                    vertex.id,
                )
                continue
            local_seen.add(key)
            owner = keywords_seen.get((param_key, key))
            if owner is not None:
                add(
                    ViolationCode.DUPLICATE_KEYWORD,
                    f"keyword {keyword!r} used by vertices {owner!r} and {vertex.id!r} "
                    f"of parameter {vertex.parameter!r}",
                    owner,
                    vertex.id,
                )
            else:
                keywords_seen[(param_key, key)] = vertex.id

    for key in sorted(declared - referenced_params):
        add(
            ViolationCode.UNKNOWN_PARAMETER,
            f"parameter {seen_params[key]!r} has no vertices",
            seen_params[key],
        )

    # Response vertices.
    labels_seen: dict[str, str] = {}
    for vertex in stmt.response_vertices:
        if not _label_ok(vertex.label):
            add(
                ViolationCode.BAD_LABEL_LENGTH,
                f"response label {vertex.label!r} on vertex {vertex.id!r} is shorter "
                f"than {MIN_LABEL_LENGTH} characters",
                vertex.id,
            )
        key = canonical(vertex.label)
        owner = labels_seen.get(key)
        if owner is not None:
            add(
                ViolationCode.DUPLICATE_RESPONSE_LABEL,
                f"response label {vertex.label!r} used by vertices {owner!r} and {vertex.id!r}",
                owner,
                vertex.id,
            )
        else:
            labels_seen[key] = vertex.id

    # Edges.
    param_sets_seen: dict[frozenset[str], str] = {}
    for edge in stmt.edges:
        dangling = [vid for vid in edge.vertices if vid not in stmt.vertices_by_id]
        for vid in dangling:
            add(
                ViolationCode.DANGLING_VERTEX_REF,
                f"edge {edge.id!r} references unknown vertex {vid!r}",
                edge.id,
                vid,
            )
        if dangling:
            continue
        if len(edge.vertices) != len(edge.vertex_id_set) or len(edge.vertex_id_set) == 1:
            add(
                ViolationCode.SELF_REFERENCE,
                f"edge {edge.id!r} connects a vertex to itself",
                edge.id,
            )
        responses = [vid for vid in edge.vertices if stmt.is_response(vid)]
        if not responses:
            add(
                ViolationCode.NO_RESPONSE_VERTEX,
                f"edge {edge.id!r} has no response vertex",
                edge.id,
            )
        elif len(set(responses)) > 1:
            add(
                ViolationCode.MULTIPLE_RESPONSE_VERTICES,
                f"edge {edge.id!r} has {len(set(responses))} response vertices",
                edge.id,
            )
        by_param: dict[str, list[str]] = {}
        for vid in sorted(edge.vertex_id_set):
            vertex = stmt.vertices_by_id[vid]
            if isinstance(vertex, ParameterVertex):
                by_param.setdefault(canonical(vertex.parameter), []).append(vid)
        for param_key, vids in sorted(by_param.items()):
            if len(vids) > 1:
                add(
                    ViolationCode.SAME_LAYER,
                    f"edge {edge.id!r} connects {len(vids)} vertices of parameter "
                    f"{param_key!r}",
                    edge.id,
                    *vids,
                )
        param_set = stmt.edge_parameter_vertex_ids(edge)
        if param_set:
            owner = param_sets_seen.get(param_set)
            if owner is not None:
                add(
                    ViolationCode.DUPLICATE_RULE,
                    f"edges {owner!r} and {edge.id!r} cover the same parameter vertices",
                    owner,
                    edge.id,
                )
            else:
                param_sets_seen[param_set] = edge.id

    for pair in lint_ambiguities(stmt):
        add(
            ViolationCode.AMBIGUOUS_EDGE_PAIR,
            f"edges {pair[0]!r} and {pair[1]!r} can compete for the same query",
            *pair,
        )

    ordered = sorted(
        found,
        key=lambda v: (v.severity is Severity.WARNING, v.code.value, v.ids, v.message),
    )
    return ValidationReport(violations=tuple(ordered))


def validate_definition(doc: Mapping[str, Any]) -> ValidationReport:
    return validate_statement(statement_from_doc(doc))


def build_statement(doc: Mapping[str, Any]) -> Statement | ValidationReport:
    """Parse and validate a statement document.

    Returns the Statement when no error-severity violation exists, the full
    ValidationReport otherwise. Structurally unparseable input raises
    DocumentError.
    """
    stmt = statement_from_doc(doc)
    report = validate_statement(stmt)
    if report.ok:
        return stmt
    return report


# ---------------------------------------------------------------------------
# Incremental (editor-gesture) edge validation
# ---------------------------------------------------------------------------


def _as_id_tuple(side: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(side, str):
        return (side,)
    return tuple(side)


def validate_edge_addition(
    stmt: Statement,
    side_a: str | Sequence[str],
    side_b: str | Sequence[str],
) -> ViolationCode | None:
    """Judge a draw-an-edge gesture connecting two groups of vertices.

    Either side may be a single vertex or the vertex set of an edge under
    construction. Returns None when the connection is acceptable. Partial
    edges without a response vertex are fine here; completeness is enforced
    by whole-statement validation at save time.
    """
    a = _as_id_tuple(side_a)
    b = _as_id_tuple(side_b)
    if not a or not b:
        raise ValueError("both draft sides must name at least one vertex")
    set_a, set_b = frozenset(a), frozenset(b)
    union = set_a | set_b

    if any(vid not in stmt.vertices_by_id for vid in union):
        return ViolationCode.DANGLING_VERTEX_REF
    if set_a & set_b:
        return ViolationCode.SELF_REFERENCE

    params_in_union: dict[str, set[str]] = {}
    response_count = 0
    for vid in union:
        vertex = stmt.vertices_by_id[vid]
        if isinstance(vertex, ParameterVertex):
            params_in_union.setdefault(canonical(vertex.parameter), set()).add(vid)
        else:
            response_count += 1

    if any(len(vids) > 1 for vids in params_in_union.values()):
        return ViolationCode.SAME_LAYER
    if response_count == len(union):
        return ViolationCode.SAME_LAYER

    draft_params = frozenset(
        vid for vid in union if isinstance(stmt.vertices_by_id[vid], ParameterVertex)
    )
    if draft_params:
        for edge in stmt.edges:
            # A side that equals an existing edge is that edge being extended,
            # so it does not count as a duplicate of itself.
            if edge.vertex_id_set in (set_a, set_b):
                continue
            if stmt.edge_parameter_vertex_ids(edge) == draft_params:
                return ViolationCode.DUPLICATE_RULE

    if response_count > 1:
        return ViolationCode.MULTIPLE_RESPONSE_VERTICES
    return None


# ---------------------------------------------------------------------------
# Ambiguity lint
# ---------------------------------------------------------------------------


def lint_ambiguities(stmt: Statement) -> list[tuple[str, str]]:
    """Find edge pairs that can compete for a single query.

    Flags (a, b) when a's parameter-vertex set is a strict subset of b's, or
    when the two sets are incomparable but some query makes both maximal
    candidates at once. Warnings only; the matcher resolves such overlaps
    deterministically.
    """
    usable = [
        (edge, stmt.edge_parameter_vertex_ids(edge))
        for edge in stmt.edges
        if stmt.edge_parameter_vertex_ids(edge)
    ]
    pairs: set[tuple[str, str]] = set()
    for i, (edge_a, set_a) in enumerate(usable):
        for edge_b, set_b in usable[i + 1 :]:
            if set_a == set_b:
                continue  # a duplicate-rule error, not an ambiguity
            if set_a < set_b:
                pairs.add((edge_a.id, edge_b.id))
                continue
            if set_b < set_a:
                pairs.add((edge_b.id, edge_a.id))
                continue
            if len(set_a) != len(set_b):
                continue
            if not _compatible(stmt, set_a, set_b):
                continue
            union = set_a | set_b
            masked = any(
                other_set <= union and len(other_set) > len(set_a)
                for other, other_set in usable
                if other.id not in (edge_a.id, edge_b.id)
            )
            if not masked:
                first, second = sorted((edge_a.id, edge_b.id))
                pairs.add((first, second))
    return sorted(pairs)


def _compatible(stmt: Statement, set_a: frozenset[str], set_b: frozenset[str]) -> bool:
    """True when one query can select every vertex of both edges."""
    chosen: dict[str, str] = {}
    for vid in set_a | set_b:
        vertex = stmt.vertices_by_id[vid]
        assert isinstance(vertex, ParameterVertex)
        key = canonical(vertex.parameter)
        if chosen.setdefault(key, vid) != vid:
            return False
    return True
