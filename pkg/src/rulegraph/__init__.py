"""Knowledge service that models contract statements as rule hypergraphs."""

from .matching import (
    Answer,
    InvalidQuery,
    InvalidReason,
    MatchResult,
    MissingParameter,
    NoRule,
    Query,
    extract_query,
    match,
    select_edge,
)
from .metrics import (
    StatementMetrics,
    expressivity_from_sigma,
    expressivity_scenario,
    sigma,
    statement_expressivity,
    statement_metrics,
    total_questions_covered,
)
from .model import (
    DocumentError,
    Hyperedge,
    ParameterVertex,
    ResponseVertex,
    Severity,
    Statement,
    ValidationReport,
    Violation,
    ViolationCode,
    build_statement,
    canonical,
    lint_ambiguities,
    statement_from_doc,
    statement_to_doc,
    validate_definition,
    validate_edge_addition,
    validate_statement,
)
from .store import (
    NotFoundError,
    StatementStore,
    StatementSummary,
    StoreError,
    StoreRecord,
    ValidationFailedError,
    VersionConflictError,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "DocumentError",
    "Hyperedge",
    "InvalidQuery",
    "InvalidReason",
    "MatchResult",
    "MissingParameter",
    "NoRule",
    "NotFoundError",
    "ParameterVertex",
    "Query",
    "ResponseVertex",
    "Severity",
    "Statement",
    "StatementMetrics",
    "StatementStore",
    "StatementSummary",
    "StoreError",
    "StoreRecord",
    "ValidationFailedError",
    "ValidationReport",
    "VersionConflictError",
    "Violation",
    "ViolationCode",
    "build_statement",
    "canonical",
    "expressivity_from_sigma",
    "expressivity_scenario",
    "extract_query",
    "lint_ambiguities",
    "match",
    "select_edge",
    "sigma",
    "statement_expressivity",
    "statement_from_doc",
    "statement_metrics",
    "statement_to_doc",
    "total_questions_covered",
    "validate_definition",
    "validate_edge_addition",
    "validate_statement",
]
