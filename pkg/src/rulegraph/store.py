"""File-backed multi-tenant statement store with optimistic versioning.

Layout: one JSON document per statement (the same schema the API speaks)
plus an index file carrying versions and timestamps. No database — the
store is meant to be inspectable with a text editor.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import quote

from . import metrics
from .model import (
    Statement,
    ValidationReport,
    statement_from_doc,
    statement_to_doc,
    validate_statement,
)

INDEX_FILE = "index.json"


class StoreError(Exception):
    pass


class NotFoundError(StoreError):
    def __init__(self, statement_id: str):
        super().__init__(f"no statement with id {statement_id!r}")
        self.statement_id = statement_id


class VersionConflictError(StoreError):
    def __init__(self, statement_id: str, expected: int, actual: int | None):
        super().__init__(
            f"statement {statement_id!r}: expected version {expected}, found {actual}"
        )
        self.statement_id = statement_id
        self.expected = expected
        self.actual = actual


class ValidationFailedError(StoreError):
    def __init__(self, report: ValidationReport):
        codes = ", ".join(sorted(c.value for c in report.codes()))
        super().__init__(f"statement failed validation: {codes}")
        self.report = report


@dataclass(frozen=True)
class StoreRecord:
    statement: Statement
    version: int
    updated_at: datetime


@dataclass(frozen=True)
class StatementSummary:
    id: str
    name: str
    parameter_count: int
    z: int
    t: int


def _doc_filename(statement_id: str) -> str:
    # Percent-encoding keeps arbitrary ids filesystem-safe and reversible.
    return quote(statement_id, safe="") + ".json"


class StatementStore:
    """Statements on disk; reads are lock-free, writes serialized.

    Statement values are immutable, so records handed out stay consistent
    even while another thread writes a newer version.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise StoreError(f"store directory {self.root} does not exist")
        self._lock = threading.Lock()
        self._records: dict[str, StoreRecord] = {}
        self._load()

    def _load(self) -> None:
        index_path = self.root / INDEX_FILE
        index: dict[str, dict] = {}
        if index_path.exists():
            index = json.loads(index_path.read_text(encoding="utf-8")).get("statements", {})
        for path in sorted(self.root.glob("*.json")):
            if path.name == INDEX_FILE:
                continue
            doc = json.loads(path.read_text(encoding="utf-8"))
            stmt = statement_from_doc(doc)
            meta = index.get(stmt.id, {})
            updated_raw = meta.get("updated_at")
            updated_at = (
                datetime.fromisoformat(updated_raw)
                if updated_raw
                else datetime.now(timezone.utc)
            )
            self._records[stmt.id] = StoreRecord(
                statement=stmt,
                version=int(meta.get("version", 1)),
                updated_at=updated_at,
            )

    def _write_index(self) -> None:
        payload = {
            "statements": {
                record.statement.id: {
                    "file": _doc_filename(record.statement.id),
                    "version": record.version,
                    "updated_at": record.updated_at.isoformat(),
                }
                for record in self._records.values()
            }
        }
        self._atomic_write(self.root / INDEX_FILE, json.dumps(payload, indent=2, sort_keys=True))

    def _atomic_write(self, path: Path, text: str) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)

    def save(self, stmt: Statement, expected_version: int | None = None) -> StoreRecord:
        """Create or replace a statement; version bumps by exactly one.

        With expected_version set, the write only lands when it matches the
        stored version (optimistic concurrency). Statements are re-validated
        on the way in, so hand-constructed invalid values cannot reach disk.
        """
        report = validate_statement(stmt)
        if not report.ok:
            raise ValidationFailedError(report)
        with self._lock:
            current = self._records.get(stmt.id)
            if expected_version is not None:
                actual = current.version if current else None
                if actual != expected_version:
                    raise VersionConflictError(stmt.id, expected_version, actual)
            version = (current.version + 1) if current else 1
            record = StoreRecord(
                statement=stmt,
                version=version,
                updated_at=datetime.now(timezone.utc),
            )
            doc = statement_to_doc(stmt)
            self._atomic_write(
                self.root / _doc_filename(stmt.id),
                json.dumps(doc, indent=2, ensure_ascii=False),
            )
            self._records[stmt.id] = record
            self._write_index()
            return record

    def load(self, statement_id: str) -> StoreRecord:
        record = self._records.get(statement_id)
        if record is None:
            raise NotFoundError(statement_id)
        return record

    def exists(self, statement_id: str) -> bool:
        return statement_id in self._records

    def list(self) -> list[StatementSummary]:
        summaries = []
        for record in self._records.values():
            stmt = record.statement
            m = metrics.statement_metrics(stmt)
            summaries.append(
                StatementSummary(
                    id=stmt.id,
                    name=stmt.name,
                    parameter_count=len(stmt.parameters),
                    z=m.z,
                    t=m.t,
                )
            )
        return sorted(summaries, key=lambda s: s.id)

    def delete(self, statement_id: str) -> None:
        with self._lock:
            if statement_id not in self._records:
                raise NotFoundError(statement_id)
            del self._records[statement_id]
            path = self.root / _doc_filename(statement_id)
            if path.exists():
                path.unlink()
            self._write_index()
