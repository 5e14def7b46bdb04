"""Filesystem-backed dataset store: raw CSV bytes plus a JSON manifest.

Datasets are immutable once uploaded.  Bytes live under a content-addressed
path (sha256); the manifest records id, name, timestamps and schema.
Manifest mutations are serialized through a single lock so concurrent
uploads never lose updates.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import PayloadTooLargeError, UnknownDatasetError
from .jsoncodec import schema_to_json
from .table import ParseOptions, Table, parse_csv, schema

DEFAULT_MAX_UPLOAD_BYTES = 64 * 1024 * 1024


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    name: str
    created_at: str
    byte_size: int
    schema: dict
    sha256: str
    parse_options: dict

    def to_json(self) -> dict:
        return {
            "id": self.id, "name": self.name, "created_at": self.created_at,
            "byte_size": self.byte_size, "schema": self.schema,
            "sha256": self.sha256, "parse_options": self.parse_options,
        }


class DatasetStore:
    """Persistent dataset registry rooted at `data_dir`."""

    def __init__(self, data_dir, max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES):
        self.data_dir = Path(data_dir)
        self.blob_dir = self.data_dir / "blobs"
        self.manifest_path = self.data_dir / "manifest.json"
        self.max_upload_bytes = max_upload_bytes
        self._lock = threading.Lock()
        self._records = {}
        self._tables = {}
        self.blob_dir.mkdir(parents=True, exist_ok=True)
        self._load_manifest()

    def _load_manifest(self) -> None:
        if not self.manifest_path.exists():
            return
        raw = json.loads(self.manifest_path.read_text("utf-8"))
        for entry in raw.get("datasets", []):
            rec = DatasetRecord(**entry)
            self._records[rec.id] = rec

    def _write_manifest(self) -> None:
        payload = {"datasets": [r.to_json() for r in self._records.values()]}
        tmp = self.manifest_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, indent=2), "utf-8")
        tmp.replace(self.manifest_path)

    def store(self, data: bytes, name: str,
              options: ParseOptions = ParseOptions()) -> DatasetRecord:
        """Parse eagerly, persist bytes + manifest entry, return the record."""
        if len(data) > self.max_upload_bytes:
            raise PayloadTooLargeError(
                f"payload of {len(data)} bytes exceeds limit of "
                f"{self.max_upload_bytes}"
            )
        table = parse_csv(data, options, name=name)
        digest = hashlib.sha256(data).hexdigest()
        blob_path = self.blob_dir / digest
        if not blob_path.exists():
            blob_path.write_bytes(data)
        record = DatasetRecord(
            id=secrets.token_urlsafe(16),
            name=name,
            created_at=datetime.now(timezone.utc).isoformat(),
            byte_size=len(data),
            schema=schema_to_json(schema(table)),
            sha256=digest,
            parse_options={
                "delimiter": options.delimiter,
                "has_header": options.has_header,
                "na_tokens": sorted(options.na_tokens),
            },
        )
        with self._lock:
            self._records[record.id] = record
            self._tables[record.id] = table
            self._write_manifest()
        return record

    def list(self) -> list:
        return sorted(self._records.values(), key=lambda r: r.created_at)

    def record(self, dataset_id: str) -> DatasetRecord:
        try:
            return self._records[dataset_id]
        except KeyError:
            raise UnknownDatasetError(dataset_id) from None

    def raw_bytes(self, dataset_id: str) -> bytes:
        rec = self.record(dataset_id)
        return (self.blob_dir / rec.sha256).read_bytes()

    def table(self, dataset_id: str) -> Table:
        rec = self.record(dataset_id)
        if dataset_id not in self._tables:
            opts = ParseOptions(
                delimiter=rec.parse_options["delimiter"],
                has_header=rec.parse_options["has_header"],
                na_tokens=frozenset(rec.parse_options["na_tokens"]),
            )
            self._tables[dataset_id] = parse_csv(
                self.raw_bytes(dataset_id), opts, name=rec.name
            )
        return self._tables[dataset_id]
