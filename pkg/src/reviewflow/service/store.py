"""Append-only event log, one JSONL file per submission.

Appends carry the writer's expected version; a mismatch with the file's
actual record count rejects the write, so two writers cannot silently
interleave histories.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import VersionConflict

_BAD_ID = set('/\\<>:"|?*')


def _check_id(submission_id: str) -> str:
    if not submission_id or any(ch in _BAD_ID for ch in submission_id):
        raise ValueError(f"unusable submission id {submission_id!r}")
    return submission_id


class EventStore:
    def __init__(self, root: Path | str) -> None:
        self.root = Path(root)
        (self.root / "submissions").mkdir(parents=True, exist_ok=True)

    def _path(self, submission_id: str) -> Path:
        return self.root / "submissions" / f"{_check_id(submission_id)}.jsonl"

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "submissions").glob("*.jsonl"))

    def exists(self, submission_id: str) -> bool:
        return self._path(submission_id).exists()

    def read(self, submission_id: str) -> list[dict]:
        path = self._path(submission_id)
        if not path.exists():
            return []
        return [json.loads(line) for line in path.read_text().splitlines() if line]

    def version(self, submission_id: str) -> int:
        return len(self.read(submission_id))

    def append(self, submission_id: str, expected_version: int, event: dict) -> int:
        current = self.version(submission_id)
        if current != expected_version:
            raise VersionConflict(
                f"{submission_id} is at version {current}, writer expected {expected_version}"
            )
        record = dict(event)
        record["seq"] = current + 1
        line = json.dumps(record, sort_keys=True, separators=(",", ":"))
        with self._path(submission_id).open("a") as handle:
            handle.write(line + "\n")
        return current + 1
