"""Text and JSON formats for graphs, orderings, matrices and reports.

Edge lists hold one edge per line as two whitespace-separated labels;
``#`` starts a comment and ``vertex <label>`` declares an isolated vertex.
Matrix Market files are read with scipy: ``coordinate pattern`` files as
graphs (indices become labels ``"1".."n"``), ``array`` and ``coordinate real``
files as float matrices.
"""

from __future__ import annotations

import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy.io

from .errors import ParseError
from .graph import Graph
from .matrix import FLOAT, KINDS, RATIONAL, Matrix, format_scalar
from .structure import VertexOrdering

MM_HEADER = "%%MatrixMarket"


def parse_edge_list(text: str) -> Graph:
    vertices: dict[str, None] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'vertex <label>'")
            vertices.setdefault(parts[1])
            continue
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected two labels, got {len(parts)} fields")
        a, b = parts
        if a == b:
            raise ParseError(f"line {lineno}: self-loop on {a!r}")
        vertices.setdefault(a)
        vertices.setdefault(b)
        edges.append((a, b))
    return Graph(list(vertices), edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{a} {b}" for a, b in g.edges()]
    touched = {v for e in g.edges() for v in e}
    lines += [f"vertex {v}" for v in sorted(g.vertices) if v not in touched]
    return "\n".join(lines) + "\n"


def _mmread(text: str):
    try:
        return scipy.io.mmread(io.BytesIO(text.encode()))
    except Exception as exc:  # scipy raises ValueError/IndexError on malformed input
        raise ParseError(f"malformed Matrix Market data: {exc}") from exc


def parse_matrix_market_graph(text: str) -> Graph:
    header = text.lstrip().splitlines()[0].lower().split()
    if len(header) < 5 or header[1] != "matrix" or header[2] != "coordinate":
        raise ParseError("graph Matrix Market files must be 'matrix coordinate'")
    m = _mmread(text).tocoo()
    n = m.shape[0]
    if m.shape != (n, n):
        raise ParseError(f"adjacency must be square, got {m.shape}")
    edges = {(min(i, j) + 1, max(i, j) + 1) for i, j in zip(m.row.tolist(), m.col.tolist()) if i != j}
    return Graph([str(i) for i in range(1, n + 1)], [(str(a), str(b)) for a, b in sorted(edges)])


def parse_graph(text: str) -> Graph:
    try:
        if text.lstrip().startswith(MM_HEADER):
            return parse_matrix_market_graph(text)
        return parse_edge_list(text)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def parse_ordering(text: str) -> VertexOrdering:
    positions = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected '<label> <position>'")
        try:
            pos = int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: position {parts[1]!r} is not an integer") from None
        if parts[0] in positions:
            raise ParseError(f"line {lineno}: label {parts[0]!r} repeated")
        positions[parts[0]] = pos
    try:
        return VertexOrdering.from_positions(positions)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def read_ordering(path) -> VertexOrdering:
    return parse_ordering(Path(path).read_text())


def matrix_to_dict(m: Matrix) -> dict:
    return {"kind": m.kind, "n": m.shape[0], "rows": [[format_scalar(x) for x in r] for r in m.rows()]}


def matrix_from_dict(d: dict) -> Matrix:
    try:
        kind = d.get("kind", RATIONAL)
        if kind not in KINDS:
            raise ParseError(f"unknown matrix kind {kind!r}")
        rows = d["rows"]
        n = d.get("n", len(rows))
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ParseError(f"matrix must be {n}x{n}")
        if kind == RATIONAL:
            rows = [[Fraction(x) for x in r] for r in rows]
        return Matrix(rows, kind)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed matrix JSON: {exc}") from exc


def parse_matrix(text: str) -> Matrix:
    if text.lstrip().startswith(MM_HEADER):
        header = text.lstrip().splitlines()[0].lower().split()
        if len(header) < 5 or header[3] not in ("real", "integer"):
            raise ParseError("only real or integer Matrix Market matrices are supported")
        m = _mmread(text)
        arr = m.toarray() if hasattr(m, "toarray") else np.asarray(m)
        return Matrix(arr.astype(float).tolist(), FLOAT)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"matrix file is neither JSON nor Matrix Market: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("matrix JSON must be an object")
    return matrix_from_dict(data)


def read_matrix(path) -> Matrix:
    return parse_matrix(Path(path).read_text())


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
