"""Complexity-reduction metrics for statement hypergraphs.

Two numbers summarize how much static FAQ authoring one statement replaces:

* z — the ceiling: every well-formed question the statement could answer,
  i.e. each non-empty choice of parameters crossed with each choice of one
  keyword per chosen parameter. Equal to prod(1 + c) - 1 over the
  per-parameter keyword totals, which is the power-set sum with the empty
  subset excluded.
* t — the floor actually covered: per existing rule, the product of its
  vertices' keyword-set sizes, summed over rules.

Both are exact big integers; keyword counts in the thousands are expected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import ParameterVertex, Statement, canonical


@dataclass(frozen=True)
class StatementMetrics:
    sigma: tuple[int, ...]
    z: int
    t: int
    coverage_ratio: Fraction


def sigma(stmt: Statement) -> tuple[int, ...]:
    """Per-parameter keyword totals, in declaration order, duplicates kept.

    Collapsing equal totals would undercount z, so this is a multiset
    carried as a tuple.
    """
    totals: dict[str, int] = {canonical(name): 0 for name in stmt.parameters}
    for vertex in stmt.parameter_vertices:
        key = canonical(vertex.parameter)
        if key in totals:
            totals[key] += len(vertex.keywords)
    return tuple(totals[canonical(name)] for name in stmt.parameters)


def expressivity_from_sigma(counts: Sequence[int]) -> int:
    """Sum of products over all non-empty subsets of the keyword totals."""
    z = 1
    for count in counts:
        z *= 1 + count
    return z - 1


def statement_expressivity(stmt: Statement) -> int:
    """Maximum number of static question-answer pairs the statement replaces."""
    return expressivity_from_sigma(sigma(stmt))


def total_questions_covered(stmt: Statement) -> int:
    """Questions answerable through the rules that actually exist."""
    total = 0
    for edge in stmt.edges:
        product = 1
        for vid in edge.vertex_id_set:
            vertex = stmt.vertices_by_id.get(vid)
            if isinstance(vertex, ParameterVertex):
                product *= len(vertex.keywords)
        total += product
    return total


def statement_metrics(stmt: Statement) -> StatementMetrics:
    s = sigma(stmt)
    z = expressivity_from_sigma(s)
    t = total_questions_covered(stmt)
    ratio = Fraction(t, z) if z else Fraction(0)
    return StatementMetrics(sigma=s, z=z, t=t, coverage_ratio=ratio)


def expressivity_scenario(
    param_count: int,
    vertices_per_param: int,
    response_count: int,
    k_values: Iterable[int],
) -> list[tuple[int, int]]:
    """Tabulate z while growing the keywords-per-vertex count.

    Each row fixes sigma to param_count copies of vertices_per_param * k.
    response_count only labels the scenario; it does not influence z.
    """
    if param_count < 1 or vertices_per_param < 1 or response_count < 1:
        raise ValueError("scenario counts must all be >= 1")
    ks = list(k_values)
    if not ks:
        raise ValueError("scenario needs at least one keywords-per-vertex value")
    if any(k < 1 for k in ks):
        raise ValueError("keywords-per-vertex values must be >= 1")
    rows: list[tuple[int, int]] = []
    for k in ks:
        counts = [vertices_per_param * k] * param_count
        rows.append((k, expressivity_from_sigma(counts)))
    return rows
