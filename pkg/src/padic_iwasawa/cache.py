"""On-disk cache of computed objects and check reports.

One JSON file per record.  Payloads hold integers and rationals as decimal
strings; a sha256 digest over the canonical payload detects tampering.
"""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

SCHEMA_VERSION = 1
ENV_VAR = "PADIC_IWASAWA_CACHE"


class CacheError(Exception):
    pass


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "padic_iwasawa"


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(payload) -> str:
    return hashlib.sha256(canonical(payload).encode()).hexdigest()


def make_key(kind: str, params: dict) -> str:
    """kind + canonical parameter encoding (values stringified)."""
    return kind + ":" + canonical({str(k): str(v) for k, v in sorted(params.items())})


class Cache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.dir = Path(directory) if directory else default_dir()

    def _path(self, key: str) -> Path:
        return self.dir / (hashlib.sha256(key.encode()).hexdigest()[:32] + ".json")

    def put(self, key: str, payload, precision=None) -> dict:
        self.dir.mkdir(parents=True, exist_ok=True)
        record = {"schema": SCHEMA_VERSION, "key": key, "payload": payload,
                  "precision": None if precision is None else str(precision),
                  "digest": digest(payload)}
        path = self._path(key)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(canonical(record))
        tmp.replace(path)
        return record

    def get(self, key: str):
        """Payload for key, or None.  Raises CacheError on a bad record."""
        path = self._path(key)
        if not path.exists():
            return None
        record = self._load(path)
        if record["key"] != key:
            raise CacheError(f"key collision in {path.name}")
        return record["payload"]

    def _load(self, path: Path) -> dict:
        try:
            record = json.loads(path.read_text())
        except (OSError, ValueError) as exc:
            raise CacheError(f"{path.name}: unreadable ({exc})") from exc
        if record.get("schema") != SCHEMA_VERSION:
            raise CacheError(f"{path.name}: schema {record.get('schema')} != {SCHEMA_VERSION}")
        if digest(record.get("payload")) != record.get("digest"):
            raise CacheError(f"{path.name}: digest mismatch")
        return record

    def records(self):
        if not self.dir.exists():
            return []
        return sorted(self.dir.glob("*.json"))

    def list(self):
        out = []
        for path in self.records():
            try:
                rec = self._load(path)
                out.append((path.name, rec["key"], "ok"))
            except CacheError as exc:
                out.append((path.name, None, str(exc)))
        return out

    def verify(self):
        """(number of records, list of problems)."""
        problems = []
        paths = self.records()
        for path in paths:
            try:
                self._load(path)
            except CacheError as exc:
                problems.append(str(exc))
        return len(paths), problems

    def prune(self, bad_only: bool = True) -> int:
        removed = 0
        for path in self.records():
            if bad_only:
                try:
                    self._load(path)
                    continue
                except CacheError:
                    pass
            path.unlink()
            removed += 1
        return removed
