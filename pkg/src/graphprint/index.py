"""Append-only fingerprint store for database pre-filtering.

The file is UTF-8 TSV. The first line is a version header; every other line
is one record::

    method <TAB> digest64 <TAB> wide|- <TAB> graph id <TAB> source

Matching records are only candidates: equal fingerprints do not prove
isomorphism, so callers should confirm with an exact check.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from . import hashing
from .slabel import Fingerprint

HEADER_TAG = "#graphprint-index"
STORE_VERSION = "v1"
STORE_ENV = "GRAPHPRINT_STORE"


class StoreError(ValueError):
    pass


@dataclass(frozen=True)
class IndexRecord:
    method: str
    digest64: str
    wide: str | None
    graph_id: str
    source: str = ""

    def to_line(self) -> str:
        for part in (self.method, self.graph_id, self.source):
            if "\t" in part or "\n" in part:
                raise StoreError(f"record field {part!r} contains a tab or newline")
        return "\t".join([self.method, self.digest64, self.wide or "-", self.graph_id, self.source])

    @classmethod
    def from_fingerprint(cls, fp: Fingerprint, graph_id: str, source: str = "") -> "IndexRecord":
        wide = fp.wide.hex() if fp.wide is not None else None
        return cls(fp.method, hashing.hex64(fp.digest64), wide, graph_id, source)

    def matches(self, fp: Fingerprint) -> bool:
        if self.method != fp.method or self.digest64 != hashing.hex64(fp.digest64):
            return False
        if self.wide is not None and fp.wide is not None:
            return self.wide == fp.wide.hex()
        return True


def default_store_path() -> Path | None:
    value = os.environ.get(STORE_ENV)
    return Path(value) if value else None


class IndexStore:
    """Single-writer append store; readers parse an immutable snapshot."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)

    @property
    def header(self) -> str:
        return f"{HEADER_TAG}\t{STORE_VERSION}\thash={hashing.HASH_VERSION}"

    def _check_header(self, line: str) -> None:
        parts = line.rstrip("\n").split("\t")
        if not parts or parts[0] != HEADER_TAG:
            raise StoreError(f"{self.path}:1: not a fingerprint index")
        if parts[1:] != [STORE_VERSION, f"hash={hashing.HASH_VERSION}"]:
            raise StoreError(
                f"{self.path}:1: version mismatch: store has {' '.join(parts[1:])}, "
                f"this build writes {STORE_VERSION} hash={hashing.HASH_VERSION}"
            )

    def append(self, records: Iterable[IndexRecord]) -> int:
        lines = [r.to_line() for r in records]
        exists = self.path.exists() and self.path.stat().st_size > 0
        if exists:
            with self.path.open("r", encoding="utf-8") as fh:
                self._check_header(fh.readline())
        with self.path.open("a", encoding="utf-8") as fh:
            if not exists:
                fh.write(self.header + "\n")
            for line in lines:
                fh.write(line + "\n")
        return len(lines)

    def records(self) -> list[IndexRecord]:
        if not self.path.exists():
            raise StoreError(f"{self.path}: no such store")
        out = []
        with self.path.open("r", encoding="utf-8") as fh:
            first = fh.readline()
            if not first:
                raise StoreError(f"{self.path}:1: empty store")
            self._check_header(first)
            for lineno, line in enumerate(fh, start=2):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 5:
                    raise StoreError(f"{self.path}:{lineno}: corrupt record (expected 5 fields, got {len(parts)})")
                method, d64, wide, gid, source = parts
                try:
                    int(d64, 16)
                    if wide != "-":
                        bytes.fromhex(wide)
                except ValueError:
                    raise StoreError(f"{self.path}:{lineno}: corrupt digest") from None
                if len(d64) != 16:
                    raise StoreError(f"{self.path}:{lineno}: corrupt digest")
                out.append(IndexRecord(method, d64, None if wide == "-" else wide, gid, source))
        return out

    def query(self, fp: Fingerprint) -> list[str]:
        """Ids of every stored record matching ``fp``, in store order."""
        return [r.graph_id for r in self.records() if r.matches(fp)]
