"""Line-delimited checkpoint records for resumable scans.

One JSON object per line, one line per finished work item::

    {"checksum":"<sha256>","hi":...,"kind":"wilson","lo":...,"params":{...},
     "payload":[...],"schema":1}

Keys are sorted and separators are compact, so the same work always
serializes to the same bytes. The checksum is the SHA-256 of the record
serialized without its checksum key. On load, lines that fail to parse
or to verify (such as a line cut short by an interrupt) are dropped.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any

SCHEMA_VERSION = 1

log = logging.getLogger(__name__)


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _digest(record: dict) -> str:
    body = {k: v for k, v in record.items() if k != "checksum"}
    return hashlib.sha256(canonical(body).encode()).hexdigest()


def make_record(kind: str, params: dict, lo: int, hi: int, payload: Any) -> dict:
    record = {"schema": SCHEMA_VERSION, "kind": kind, "params": params, "lo": lo, "hi": hi, "payload": payload}
    record["checksum"] = _digest(record)
    return record


def verify_record(record: Any) -> bool:
    return (
        isinstance(record, dict)
        and record.get("schema") == SCHEMA_VERSION
        and isinstance(record.get("checksum"), str)
        and record["checksum"] == _digest(record)
    )


class Checkpoint:
    """Append-only record file. Not shared between processes; the parent writes."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.records: list[dict] = []
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        raw = self.path.read_bytes()
        good: list[str] = []
        for line in raw.split(b"\n"):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except ValueError:
                log.warning("discarding unreadable checkpoint line in %s", self.path)
                continue
            if not verify_record(record):
                log.warning("discarding checkpoint record with bad checksum in %s", self.path)
                continue
            self.records.append(record)
            good.append(canonical(record))
        # rewrite without the damaged lines so later appends start on a clean line
        text = "".join(line + "\n" for line in good)
        if text.encode() != raw:
            tmp = self.path.with_name(self.path.name + ".tmp")
            tmp.write_text(text)
            os.replace(tmp, self.path)

    def completed(self, kind: str, params: dict) -> dict[tuple[int, int], Any]:
        """Payloads of finished items for this scan, keyed by (lo, hi)."""
        key = canonical(params)
        return {
            (r["lo"], r["hi"]): r["payload"]
            for r in self.records
            if r["kind"] == kind and canonical(r["params"]) == key
        }

    def append(self, kind: str, params: dict, lo: int, hi: int, payload: Any) -> None:
        record = make_record(kind, params, lo, hi, payload)
        with self.path.open("a") as fh:
            fh.write(canonical(record) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self.records.append(record)
