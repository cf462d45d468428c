"""Vectorised 64-bit structural hashing and the wide (SHA-256) digest.

The 64-bit hash is a murmur-style finaliser chained over the fields of a
label. It is only ever used as a fast filter; anything reported equal is
re-checked with the wide digest or with exact interning.
"""

from __future__ import annotations

import hashlib

import numpy as np

HASH_VERSION = "1"

_M1 = np.uint64(0xFF51AFD7ED558CCD)
_M2 = np.uint64(0xC4CEB9FE1A85EC53)
_MUL = np.uint64(0x9E3779B97F4A7C15)
_S33 = np.uint64(33)
MASK64 = (1 << 64) - 1
PAD = np.uint64(MASK64)  # sorts after every real digest

# Domain tags keep seed, node, tuple and fold digests from colliding across
# levels of the nested structure.
TAG_SEED = 0x5EED
TAG_NODE = 0x40DE
TAG_TUPLE = 0x7AB1
TAG_SFOLD = 0x5F00  # + q
TAG_TFOLD = 0x7F00  # + q
TAG_TTOP = 0x7F7F
TAG_WALK = 0x3A1C
TAG_WLABEL = 0x3A1D


def fmix64(h: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        h = h ^ (h >> _S33)
        h = h * _M1
        h = h ^ (h >> _S33)
        h = h * _M2
        return h ^ (h >> _S33)


def combine(h: np.ndarray, x) -> np.ndarray:
    """Absorb ``x`` into running state ``h`` (bijective in each argument)."""
    with np.errstate(over="ignore"):
        return fmix64((h * _MUL) ^ x)


def start(tag: int, shape=()) -> np.ndarray:
    return fmix64(np.full(shape, tag, dtype=np.uint64))


def seed_digests(values: np.ndarray) -> np.ndarray:
    return combine(start(TAG_SEED, np.shape(values)), np.asarray(values, dtype=np.uint64))


def fold_rows(tag: int, rows: np.ndarray) -> np.ndarray:
    """Digest of each row of ``rows`` read as a multiset.

    Rows are sorted here, so callers may pass members in any order.
    """
    rows = np.sort(np.asarray(rows, dtype=np.uint64), axis=-1)
    h = start(tag, rows.shape[:-1])
    h = combine(h, np.uint64(rows.shape[-1]))
    for c in range(rows.shape[-1]):
        h = combine(h, rows[..., c])
    return h


def node_digests(own: np.ndarray, nbrs_sorted: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """One refinement step: ``own`` previous digest plus sorted neighbour digests.

    ``nbrs_sorted`` is padded with ``PAD`` beyond ``counts`` entries.
    """
    h = combine(start(TAG_NODE, own.shape), own)
    h = combine(h, counts.astype(np.uint64))
    for c in range(nbrs_sorted.shape[-1]):
        live = c < counts
        h = np.where(live, combine(h, nbrs_sorted[..., c]), h)
    return h


def hex64(value) -> str:
    return f"{int(value) & MASK64:016x}"


def wide_hash(*parts: bytes) -> bytes:
    """SHA-256 over length-prefixed parts."""
    h = hashlib.sha256()
    for p in parts:
        h.update(len(p).to_bytes(8, "big"))
        h.update(p)
    return h.digest()
