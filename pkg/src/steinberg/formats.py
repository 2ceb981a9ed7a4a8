"""Codecs: graph6, DIMACS edge lists, and a JSON gadget format.

graph6 and DIMACS carry only the vertex count and the edge set; labels
survive only the JSON format.  All encoders are deterministic byte for
byte.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import FormatError
from .graphs import Graph, build_graph

FORMATS = ("graph6", "dimacs", "json")

_G6_HEADER = b">>graph6<<"


def _g6_encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([63 + n])
    if n <= 258047:
        return b"~" + bytes(
            [63 + ((n >> 12) & 63), 63 + ((n >> 6) & 63), 63 + (n & 63)]
        )
    raise FormatError(f"graph6 encoder limited to 258047 vertices, got {n}")


def encode_graph6(g: Graph) -> bytes:
    """Standard graph6: header byte(s), then the upper triangle of the
    adjacency matrix in column order, six bits per output byte."""
    out = bytearray(_g6_encode_n(g.n))
    edge_set = g.edge_set
    acc = 0
    nbits = 0
    for v in range(1, g.n):
        for u in range(v):
            acc = (acc << 1) | (1 if (u, v) in edge_set else 0)
            nbits += 1
            if nbits == 6:
                out.append(63 + acc)
                acc = 0
                nbits = 0
    if nbits:
        acc <<= 6 - nbits
        out.append(63 + acc)
    return bytes(out)


def decode_graph6(data: bytes) -> Graph:
    pos = 0
    if data.startswith(_G6_HEADER):
        pos = len(_G6_HEADER)
    data = data.rstrip(b"\n")
    if pos >= len(data):
        raise FormatError("empty graph6 payload", offset=pos)
    if data[pos] == ord("~"):
        if pos + 4 > len(data):
            raise FormatError("truncated graph6 vertex count", offset=pos)
        chunk = data[pos + 1 : pos + 4]
        for i, b in enumerate(chunk):
            if not (63 <= b <= 126):
                raise FormatError(
                    f"invalid graph6 byte {b!r}", offset=pos + 1 + i
                )
        n = ((chunk[0] - 63) << 12) | ((chunk[1] - 63) << 6) | (chunk[2] - 63)
        pos += 4
    else:
        b = data[pos]
        if not (63 <= b <= 126):
            raise FormatError(f"invalid graph6 byte {b!r}", offset=pos)
        n = b - 63
        pos += 1
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - pos != nbytes:
        raise FormatError(
            f"graph6 body for n={n} needs {nbytes} bytes, got {len(data) - pos}",
            offset=pos,
        )
    bits: list[int] = []
    for i in range(nbytes):
        b = data[pos + i]
        if not (63 <= b <= 126):
            raise FormatError(f"invalid graph6 byte {b!r}", offset=pos + i)
        x = b - 63
        for k in range(5, -1, -1):
            bits.append((x >> k) & 1)
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                edges.append((u, v))
            idx += 1
    if any(bits[nbits:]):
        raise FormatError("nonzero padding bits in graph6 body", offset=pos)
    return build_graph(n, edges)


def encode_dimacs(g: Graph) -> bytes:
    lines = [f"p edge {g.n} {g.m}"]
    for u, v in g.edges:
        lines.append(f"e {u + 1} {v + 1}")
    return ("\n".join(lines) + "\n").encode("ascii")


def decode_dimacs(data: bytes) -> Graph:
    n = None
    m = None
    edges: list[tuple[int, int]] = []
    offset = 0
    for raw in data.split(b"\n"):
        line = raw.decode("ascii", errors="replace").strip()
        if not line or line.startswith("c"):
            offset += len(raw) + 1
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise FormatError("duplicate problem line", offset=offset)
            if len(parts) != 4 or parts[1] != "edge":
                raise FormatError(
                    f"expected 'p edge <n> <m>', got {line!r}", offset=offset
                )
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(
                    f"non-integer problem line {line!r}", offset=offset
                ) from None
        elif parts[0] == "e":
            if n is None:
                raise FormatError("edge line before problem line", offset=offset)
            if len(parts) != 3:
                raise FormatError(f"malformed edge line {line!r}", offset=offset)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise FormatError(
                    f"non-integer edge line {line!r}", offset=offset
                ) from None
            if not (1 <= u <= n) or not (1 <= v <= n):
                raise FormatError(
                    f"edge ({u}, {v}) outside 1..{n}", offset=offset
                )
            edges.append((u - 1, v - 1))
        else:
            raise FormatError(f"unknown line kind {parts[0]!r}", offset=offset)
        offset += len(raw) + 1
    if n is None:
        raise FormatError("missing problem line", offset=0)
    if m is not None and m != len(edges):
        raise FormatError(
            f"problem line declares {m} edges, file has {len(edges)}", offset=0
        )
    return build_graph(n, edges)


def graph_to_json_dict(g: Graph) -> dict[str, Any]:
    d: dict[str, Any] = {"n": g.n, "edges": [list(e) for e in g.edges]}
    if g.labels:
        d["labels"] = {str(v): s for v, s in g.labels}
    return d


def graph_from_json_dict(d: dict[str, Any]) -> Graph:
    if not isinstance(d, dict) or "n" not in d or "edges" not in d:
        raise FormatError("JSON gadget object needs 'n' and 'edges'")
    labels = None
    if "labels" in d and d["labels"] is not None:
        try:
            labels = {int(k): str(v) for k, v in d["labels"].items()}
        except (TypeError, ValueError, AttributeError):
            raise FormatError("'labels' must map vertex ids to strings") from None
    try:
        edges = [(int(u), int(v)) for u, v in d["edges"]]
    except (TypeError, ValueError):
        raise FormatError("'edges' must be a list of pairs") from None
    return build_graph(int(d["n"]), edges, labels)


def encode_json(g: Graph) -> bytes:
    text = json.dumps(graph_to_json_dict(g), indent=2, sort_keys=True)
    return (text + "\n").encode("ascii")


def parse_json_payload(data: bytes) -> dict[str, Any]:
    try:
        payload = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise FormatError("gadget JSON is not UTF-8", offset=exc.start) from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad JSON: {exc.msg}", offset=exc.pos) from None
    if not isinstance(payload, dict):
        raise FormatError("gadget JSON must be an object")
    return payload


def decode_json(data: bytes) -> Graph:
    return graph_from_json_dict(parse_json_payload(data))


def encode(g: Graph, fmt: str) -> bytes:
    if fmt == "graph6":
        return encode_graph6(g)
    if fmt == "dimacs":
        return encode_dimacs(g)
    if fmt == "json":
        return encode_json(g)
    raise FormatError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def decode(data: bytes, fmt: str) -> Graph:
    if fmt == "graph6":
        return decode_graph6(data)
    if fmt == "dimacs":
        return decode_dimacs(data)
    if fmt == "json":
        return decode_json(data)
    raise FormatError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def sniff_format(path_name: str) -> str:
    lower = path_name.lower()
    if lower.endswith((".g6", ".graph6")):
        return "graph6"
    if lower.endswith((".col", ".dimacs")):
        return "dimacs"
    if lower.endswith(".json"):
        return "json"
    raise FormatError(
        f"cannot infer format from file name {path_name!r}; pass it explicitly"
    )
