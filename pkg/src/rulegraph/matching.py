"""Query resolution against a statement: the knowledge service's core loop.

A query is an ordered list of (parameter, value) pairs, exactly as a chatbot
framework (or the CLI) sent them. Matching either answers from a rule,
reports that no rule covers the combination, prompts for the next missing
parameter, or rejects the query as invalid — each outcome carrying the HTTP
status the service contract prescribes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import ClassVar, Iterable

from .model import Hyperedge, ParameterVertex, Statement, canonical


@dataclass(frozen=True)
class Query:
    """Ordered multimap of parameter name -> raw value, unvalidated."""

    pairs: tuple[tuple[str, str], ...] = ()

    @classmethod
    def from_items(cls, items: Iterable[tuple[str, str]]) -> Query:
        return cls(pairs=tuple((str(k), str(v)) for k, v in items))

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.pairs)

    def with_pair(self, name: str, value: str) -> Query:
        return Query(pairs=self.pairs + ((name, value),))


class InvalidReason(enum.Enum):
    MULTI_VALUE = "MULTI_VALUE"
    UNKNOWN_PARAMETER = "UNKNOWN_PARAMETER"
    UNKNOWN_KEYWORD = "UNKNOWN_KEYWORD"


@dataclass(frozen=True)
class Answer:
    label: str
    http_status: ClassVar[int] = 200


@dataclass(frozen=True)
class NoRule:
    """No rule covers the supplied combination; the payload is boolean false."""

    http_status: ClassVar[int] = 200


@dataclass(frozen=True)
class MissingParameter:
    parameter: str
    http_status: ClassVar[int] = 422


@dataclass(frozen=True)
class InvalidQuery:
    reason: InvalidReason
    detail: str
    http_status: ClassVar[int] = 400


MatchResult = Answer | NoRule | MissingParameter | InvalidQuery


def match(stmt: Statement, query: Query) -> MatchResult:
    """Resolve a query against a valid statement.

    Steps, in contract order:

    1. Reject multi-valued parameters, unknown parameter names, and values
       that match no keyword of their parameter (status 400).
    2. Map each pair to the unique parameter vertex whose keyword set holds
       the value (unique by keyword disjointness).
    3. Pick the rule whose parameter vertices are all matched, preferring the
       most specific (largest) edge; ties break on smallest edge id.
    4. Otherwise prompt for the first undeclared-in-query parameter in
       declaration order (status 422), or report no-rule when the query
       already covers every parameter (status 200).

    The result is deterministic and insensitive to pair order for
    repeat-free queries.
    """
    seen: dict[str, int] = {}
    for name in query.names():
        key = canonical(name)
        seen[key] = seen.get(key, 0) + 1
    repeated = sorted(key for key, count in seen.items() if count > 1)
    if repeated:
        return InvalidQuery(
            reason=InvalidReason.MULTI_VALUE,
            detail="multiple values for: " + ", ".join(repeated),
        )

    unknown_names = sorted(
        {
            canonical(name)
            for name, _ in query.pairs
            if canonical(name) not in stmt.canonical_parameters
        }
    )
    if unknown_names:
        return InvalidQuery(
            reason=InvalidReason.UNKNOWN_PARAMETER,
            detail="unknown parameters: " + ", ".join(unknown_names),
        )

    matched_vertices: list[ParameterVertex] = []
    unknown_values: list[str] = []
    for name, value in query.pairs:
        param_key = canonical(name)
        vertex = stmt.keyword_index.get(param_key, {}).get(canonical(value))
        if vertex is None:
            unknown_values.append(f"{param_key}={canonical(value)}")
        else:
            matched_vertices.append(vertex)
    if unknown_values:
        return InvalidQuery(
            reason=InvalidReason.UNKNOWN_KEYWORD,
            detail="no keyword matches: " + ", ".join(sorted(unknown_values)),
        )

    edge = select_edge(stmt, (v.id for v in matched_vertices))
    if edge is not None:
        response = stmt.edge_response(edge)
        assert response is not None  # guaranteed for valid statements
        return Answer(label=response.label)

    supplied = {canonical(name) for name, _ in query.pairs}
    for name in stmt.parameters:
        if canonical(name) not in supplied:
            return MissingParameter(parameter=name)
    return NoRule()


def select_edge(stmt: Statement, matched_vertex_ids: Iterable[str]) -> Hyperedge | None:
    """Pick the most specific rule whose parameter vertices are all matched.

    Candidates are edges whose parameter-vertex set is a subset of the
    matched set (rules may span only some parameters). Largest candidate
    wins; equal-sized candidates tie-break on lexicographically smallest
    edge id so resolution is total and deterministic.
    """
    matched = frozenset(matched_vertex_ids)
    best: Hyperedge | None = None
    best_size = 0
    for edge in stmt.edges:
        params = stmt.edge_parameter_vertex_ids(edge)
        if not params or not params <= matched:
            continue
        size = len(params)
        if size > best_size or (size == best_size and best is not None and edge.id < best.id):
            best = edge
            best_size = size
    return best


def extract_query(stmt: Statement, utterance: str) -> Query:
    """Literal keyword scan over free text, as minimal stand-in for NER.

    Finds word-boundary-aligned occurrences of the statement's keywords in
    the canonicalized utterance. Overlaps resolve longest-keyword-first,
    then earliest occurrence. Pairs come out in parameter declaration order
    (occurrence order within a parameter), carrying the keyword as authored.
    A parameter matching two distinct keywords yields two pairs, which
    match() then rejects as multi-valued.
    """
    text = canonical(utterance)
    candidates: list[tuple[int, int, int, str, str]] = []
    for param_index, name in enumerate(stmt.parameters):
        for vertex in stmt.vertices_for(name):
            for keyword in vertex.keywords:
                needle = canonical(keyword)
                if not needle:
                    continue
                start = text.find(needle)
                while start != -1:
                    end = start + len(needle)
                    before_ok = start == 0 or not text[start - 1].isalnum()
                    after_ok = end == len(text) or not text[end].isalnum()
                    if before_ok and after_ok:
                        candidates.append((start, end, param_index, name, keyword))
                    start = text.find(needle, start + 1)

    candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0], c[2], c[4]))
    taken: list[tuple[int, int]] = []
    accepted: list[tuple[int, int, str, str]] = []
    for start, end, param_index, name, keyword in candidates:
        if any(start < t_end and t_start < end for t_start, t_end in taken):
            continue
        taken.append((start, end))
        accepted.append((param_index, start, name, keyword))

    accepted.sort()
    pairs: list[tuple[str, str]] = []
    emitted: set[tuple[int, str]] = set()
    for param_index, _, name, keyword in accepted:
        key = (param_index, canonical(keyword))
        if key in emitted:
            continue
        emitted.add(key)
        pairs.append((name, keyword))
    return Query(pairs=tuple(pairs))
