"""graph6, sparse6 and a plain edge-list text format.

graph6/sparse6 follow the nauty ``formats.txt`` layout: printable bytes
63..126 carrying 6 bits each, with the ``N(n)`` size header. The edge list
format is ``n`` on the first line followed by one ``i j`` pair per line
(``i == j`` is a loop, duplicates are rejected).
"""

from __future__ import annotations

from .graph import Graph

FORMATS = ("graph6", "sparse6", "edgelist")


class FormatError(ValueError):
    """Malformed input; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class UnsupportedFeatureError(ValueError):
    pass


# 6-bit helpers -------------------------------------------------------------


def _encode_n(n: int) -> bytes:
    if n < 0:
        raise UnsupportedFeatureError("negative node count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise UnsupportedFeatureError("graph too large for graph6/sparse6")


def _decode_n(data: bytes, pos: int) -> tuple[int, int]:
    def sextet(p: int) -> int:
        if p >= len(data):
            raise FormatError("truncated size header", p)
        return data[p] - 63

    if pos >= len(data):
        raise FormatError("missing size header", pos)
    if data[pos] != 126:
        return sextet(pos), pos + 1
    if pos + 1 < len(data) and data[pos + 1] == 126:
        value = 0
        for p in range(pos + 2, pos + 8):
            value = (value << 6) | sextet(p)
        return value, pos + 8
    value = 0
    for p in range(pos + 1, pos + 4):
        value = (value << 6) | sextet(p)
    return value, pos + 4


def _check_payload(data: bytes, start: int) -> None:
    for p in range(start, len(data)):
        if not 63 <= data[p] <= 126:
            raise FormatError(f"byte {data[p]!r} outside the printable 6-bit range", p)


def _pack_bits(bits: list[int]) -> bytes:
    out = bytearray()
    for p in range(0, len(bits), 6):
        chunk = bits[p : p + 6]
        value = 0
        for b in chunk:
            value = (value << 1) | b
        value <<= 6 - len(chunk)
        out.append(value + 63)
    return bytes(out)


def _unpack_bits(data: bytes, start: int) -> list[int]:
    bits = []
    for byte in data[start:]:
        value = byte - 63
        bits.extend((value >> s) & 1 for s in range(5, -1, -1))
    return bits


# graph6 ----------------------------------------------------------------------


def _strip(data: bytes, header: bytes) -> bytes:
    data = data.strip(b"\r\n")
    if data.startswith(header):
        data = data[len(header) :]
    return data


def _parse_graph6(raw: bytes) -> Graph:
    data = _strip(raw, b">>graph6<<")
    _check_payload(data, 0)
    n, pos = _decode_n(data, 0)
    need = n * (n - 1) // 2
    nbytes = (need + 5) // 6
    if len(data) - pos != nbytes:
        raise FormatError(f"expected {nbytes} payload bytes for n={n}, got {len(data) - pos}", pos)
    bits = _unpack_bits(data, pos)
    edges, k = [], 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def _serialize_graph6(g: Graph) -> bytes:
    if g.has_loops:
        raise UnsupportedFeatureError("graph6 cannot represent loops")
    bits = [int(g.has_edge(i, j)) for j in range(1, g.n) for i in range(j)]
    return _encode_n(g.n) + _pack_bits(bits)


# sparse6 ---------------------------------------------------------------------


def _sparse6_width(n: int) -> int:
    k = 1
    while (1 << k) < n:
        k += 1
    return k


def _parse_sparse6(raw: bytes) -> Graph:
    data = _strip(raw, b">>sparse6<<")
    if not data.startswith(b":"):
        raise FormatError("sparse6 data must start with ':'", 0)
    _check_payload(data, 1)
    n, pos = _decode_n(data, 1)
    k = _sparse6_width(n)
    bits = _unpack_bits(data, pos)
    edges = []
    seen = set()
    v = 0
    p = 0
    while p + 1 + k <= len(bits):
        b = bits[p]
        x = 0
        for t in range(k):
            x = (x << 1) | bits[p + 1 + t]
        p += 1 + k
        if b:
            v += 1
        if x >= n or v >= n:
            break
        if x > v:
            v = x
        else:
            if (x, v) in seen:
                raise FormatError(f"repeated edge {x}-{v}", pos + (p - 1) // 6)
            seen.add((x, v))
            edges.append((x, v))
    return Graph.from_edges(n, edges)


def _serialize_sparse6(g: Graph) -> bytes:
    n = g.n
    k = _sparse6_width(n)

    def enc(x: int) -> list[int]:
        return [(x >> s) & 1 for s in range(k - 1, -1, -1)]

    pairs = sorted(
        [(j, i) for i, j in g.edges()] + [(i, i) for i in range(n) if g.loops[i]]
    )
    bits: list[int] = []
    cur = 0
    for v, u in pairs:
        if v == cur:
            bits += [0] + enc(u)
        elif v == cur + 1:
            cur = v
            bits += [1] + enc(u)
        else:
            cur = v
            bits += [1] + enc(v) + [0] + enc(u)
    if k < 6 and n == (1 << k) and (-len(bits)) % 6 >= k and cur < n - 1:
        bits.append(0)
    bits += [1] * ((-len(bits)) % 6)
    return b":" + _encode_n(n) + _pack_bits(bits)


# edge list -------------------------------------------------------------------


def _parse_edgelist(raw: bytes) -> Graph:
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise FormatError("edge list must be ASCII", exc.start) from None
    offset = 0
    lines = []
    for line in text.splitlines(keepends=True):
        if line.strip():
            lines.append((offset, line.strip()))
        offset += len(line)
    if not lines:
        raise FormatError("empty edge list", 0)
    off, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise FormatError(f"bad node count {head!r}", off) from None
    if n < 0:
        raise FormatError("negative node count", off)
    seen = set()
    edges = []
    for off, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected 'i j', got {line!r}", off)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"non-integer node in {line!r}", off) from None
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"node index out of range in {line!r}", off)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise FormatError(f"duplicate edge {line!r}", off)
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges)


def _serialize_edgelist(g: Graph) -> bytes:
    pairs = sorted(g.edges() + [(i, i) for i in range(g.n) if g.loops[i]])
    lines = [str(g.n)] + [f"{i} {j}" for i, j in pairs]
    return ("\n".join(lines) + "\n").encode("ascii")


# public entry points -----------------------------------------------------------

_PARSERS = {"graph6": _parse_graph6, "sparse6": _parse_sparse6, "edgelist": _parse_edgelist}
_WRITERS = {"graph6": _serialize_graph6, "sparse6": _serialize_sparse6, "edgelist": _serialize_edgelist}


def parse_graph(data: bytes | str, format: str) -> Graph:
    if format not in _PARSERS:
        raise ValueError(f"unknown format {format!r}; choose from {FORMATS}")
    if isinstance(data, str):
        try:
            data = data.encode("ascii")
        except UnicodeEncodeError as exc:
            raise FormatError("non-ASCII payload", exc.start) from None
    return _PARSERS[format](data)


def serialize_graph(g: Graph, format: str) -> bytes:
    if format not in _WRITERS:
        raise ValueError(f"unknown format {format!r}; choose from {FORMATS}")
    return _WRITERS[format](g)


def guess_format(line: bytes) -> str:
    return "sparse6" if line.lstrip().startswith((b":", b">>sparse6<<")) else "graph6"
