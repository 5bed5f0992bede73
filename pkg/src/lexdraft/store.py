"""File-backed session persistence.

A record stores exactly the config id and the canonical answer map;
everything else is recomputed on load, so a record can never disagree
with the pipeline. Writes go through a temp file and an atomic replace.
Records that fail to parse are quarantined rather than deleted.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import CorruptRecordError, StoreError

RECORD_VERSION = 1

_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")


@dataclass(frozen=True)
class StoredRecord:
    session_id: str
    config_id: str
    answers: dict[int, str]


def _check_id(session_id: str) -> str:
    if not _ID_RE.match(session_id):
        raise StoreError(f"unusable session id: {session_id!r}")
    return session_id


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreError(f"cannot create store at {self.root}: {exc}") from exc

    def _path(self, session_id: str) -> Path:
        return self.root / f"{_check_id(session_id)}.json"

    def save(self, session_id: str, config_id: str, answers: dict[int, str]) -> None:
        record = {
            "version": RECORD_VERSION,
            "config_id": config_id,
            "answers": {str(order): value for order, value in sorted(answers.items())},
        }
        path = self._path(session_id)
        tmp = path.with_suffix(".json.tmp")
        try:
            tmp.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
            os.replace(tmp, path)
        except OSError as exc:
            raise StoreError(f"cannot write {path}: {exc}") from exc

    def load(self, session_id: str) -> StoredRecord:
        path = self._path(session_id)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise StoreError(f"no record for session {session_id}") from None
        except OSError as exc:
            raise StoreError(f"cannot read {path}: {exc}") from exc
        return self._decode(session_id, raw)

    def _decode(self, session_id: str, raw: str) -> StoredRecord:
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorruptRecordError(
                f"session {session_id}: record is not JSON: {exc}"
            ) from exc
        if not isinstance(data, dict) or data.get("version") != RECORD_VERSION:
            raise CorruptRecordError(
                f"session {session_id}: unknown record version"
            )
        config_id = data.get("config_id")
        answers = data.get("answers")
        if not isinstance(config_id, str) or not isinstance(answers, dict):
            raise CorruptRecordError(f"session {session_id}: record shape is wrong")
        decoded: dict[int, str] = {}
        for key, value in answers.items():
            if not isinstance(value, str) or not key.isdigit():
                raise CorruptRecordError(
                    f"session {session_id}: answer map entry {key!r} is unusable"
                )
            decoded[int(key)] = value
        return StoredRecord(session_id, config_id, decoded)

    def list_ids(self) -> list[str]:
        return sorted(
            path.stem for path in self.root.glob("*.json") if path.is_file()
        )

    def delete(self, session_id: str) -> None:
        try:
            self._path(session_id).unlink(missing_ok=True)
        except OSError as exc:
            raise StoreError(f"cannot delete session {session_id}: {exc}") from exc

    def quarantine(self, session_id: str) -> None:
        """Move a bad record aside so restarts stop tripping over it."""
        target_dir = self.root / "quarantine"
        try:
            target_dir.mkdir(exist_ok=True)
            os.replace(self._path(session_id), target_dir / f"{session_id}.json")
        except OSError as exc:
            raise StoreError(
                f"cannot quarantine session {session_id}: {exc}"
            ) from exc

    def load_all(self) -> tuple[list[StoredRecord], list[str]]:
        """All readable records plus the ids of quarantined ones."""
        records: list[StoredRecord] = []
        corrupt: list[str] = []
        for session_id in self.list_ids():
            try:
                records.append(self.load(session_id))
            except CorruptRecordError:
                self.quarantine(session_id)
                corrupt.append(session_id)
        return records, corrupt
