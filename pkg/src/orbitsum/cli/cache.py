"""Content-addressed store for command results.

Keys hash the canonical problem text, the command and its configuration.
Entries are JSON documents written atomically; unreadable entries count as
misses and are overwritten.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

ENV_VAR = "ORBITSUM_CACHE_DIR"
FORMAT = "orbitsum-cache-1"


def cache_key(*parts) -> str:
    h = hashlib.sha256()
    h.update(FORMAT.encode())
    for p in parts:
        data = p if isinstance(p, str) else json.dumps(p, sort_keys=True)
        h.update(b"\0" + data.encode("utf-8"))
    return h.hexdigest()


class Cache:
    def __init__(self, directory: str | None):
        self.directory = directory

    @classmethod
    def from_args(cls, cache_dir=None, disabled=False) -> "Cache":
        if disabled:
            return cls(None)
        return cls(cache_dir or os.environ.get(ENV_VAR) or None)

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def _path(self, key):
        return os.path.join(self.directory, key + ".json")

    def get(self, key):
        if not self.enabled:
            return None
        try:
            with open(self._path(key), encoding="utf-8") as fh:
                entry = json.load(fh)
        except (OSError, ValueError):
            return None
        if not isinstance(entry, dict) or entry.get("key") != key or "value" not in entry:
            return None
        return entry["value"]

    def put(self, key, value):
        if not self.enabled:
            return
        os.makedirs(self.directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"key": key, "value": value}, fh, sort_keys=True)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def memo(self, key, compute):
        """Cached value for ``key``, computing and storing it on a miss."""
        hit = self.get(key)
        if hit is not None:
            return hit, True
        value = compute()
        self.put(key, value)
        return value, False
