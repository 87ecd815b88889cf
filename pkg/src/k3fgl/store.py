"""Run configuration and the on-disk results cache."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .exact import DomainError

CACHE_ENV = "K3FGL_CACHE_DIR"
SCHEMA = 1


@dataclass(frozen=True)
class RunConfig:
    N: int = 4
    D: int = 12
    s_max: int = 3
    mu_max: int = 3
    cache: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.N < 2:
            raise DomainError(f"precision N must be at least 2, got {self.N}")
        if self.D < 8:
            raise DomainError(f"degree cutoff D must be at least 8, got {self.D}")
        if self.s_max < 1 or self.mu_max < 1:
            raise DomainError("s_max and mu_max must be positive")

    def fingerprint(self) -> dict:
        """The fields that can change a computed result (the cache path cannot)."""
        d = asdict(self)
        d.pop("cache")
        return d

    def with_overrides(self, **kw) -> RunConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_INT_KEYS = {f.name for f in fields(RunConfig) if f.name != "cache"}


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in _INT_KEYS:
            try:
                out[key] = int(value)
            except ValueError:
                raise DomainError(f"config line {lineno}: {key} needs an integer") from None
        elif key == "cache":
            out[key] = value or None
        else:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
    return out


def load_config(path: str | None, **overrides) -> RunConfig:
    base = {}
    if path:
        base = parse_config_text(Path(path).read_text())
    env = os.environ.get(CACHE_ENV)
    if env:
        base["cache"] = env
    return RunConfig(**base).with_overrides(**overrides)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_key(*parts) -> str:
    return hashlib.sha256(canonical_json(list(parts)).encode()).hexdigest()


class ResultStore:
    """Directory of JSON documents named by the hash of what produced them.

    Writes go through a temporary file and an atomic rename, so a reader
    never sees a partial document; there is a single writer per process.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str):
        p = self.path(key)
        if not p.exists():
            return None
        try:
            return json.loads(p.read_text())
        except json.JSONDecodeError:
            return None

    def put(self, key: str, value) -> Path:
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(canonical_json(value))
        os.replace(tmp, self.path(key))
        return self.path(key)
