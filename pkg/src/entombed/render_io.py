"""Maze file format, renderers and JSON export.

Maze files are LF-separated text::

    MAZE2 <W> <H>            MAZE3 <V> <U> <Z>
    <H lines of W digits>    <Z blocks of U lines of V digits, blank line between>
"""

from __future__ import annotations

import json
import re

import numpy as np

from .grid import Maze, Maze2D, Maze3D, code_to_string
from .rules import LookupTable


class MazeFormatError(ValueError):
    """Malformed maze file; ``kind`` is one of malformed-header, shape-mismatch, illegal-character."""

    def __init__(self, kind: str, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {kind}: {message}")
        self.kind = kind
        self.line = line
        self.column = column


def serialize(maze: Maze) -> bytes:
    c = maze.cells
    rows = lambda layer: ["".join("1" if x else "0" for x in r) for r in layer]
    if c.ndim == 2:
        h, w = c.shape
        lines = [f"MAZE2 {w} {h}"] + rows(c)
    else:
        z, u, v = c.shape
        lines = [f"MAZE3 {v} {u} {z}"]
        for n, layer in enumerate(c):
            if n:
                lines.append("")
            lines.extend(rows(layer))
    return ("\n".join(lines) + "\n").encode("ascii")


_HEADER = re.compile(r"MAZE([23])((?: [1-9][0-9]*)+)")


def parse(data) -> Maze:
    if isinstance(data, (bytes, bytearray)):
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError as exc:
            line = data[: exc.start].count(b"\n") + 1
            col = exc.start - (data.rfind(b"\n", 0, exc.start) + 1) + 1
            raise MazeFormatError("illegal-character", line, col, "non-ASCII byte") from None
    else:
        text = data
    if not text:
        raise MazeFormatError("malformed-header", 1, 1, "empty input")
    lines = text.split("\n")
    header = lines[0]
    m = _HEADER.fullmatch(header)
    if not m:
        raise MazeFormatError("malformed-header", 1, 1, f"expected 'MAZE2 W H' or 'MAZE3 V U Z', got {header!r}")
    dim = int(m.group(1))
    dims = [int(n) for n in m.group(2).split()]
    if len(dims) != dim:
        raise MazeFormatError("malformed-header", 1, 1, f"MAZE{dim} needs {dim} sizes, got {len(dims)}")
    if lines[-1] != "":
        raise MazeFormatError("shape-mismatch", len(lines), len(lines[-1]) + 1, "missing trailing newline")
    body = lines[1:-1]
    if dim == 2:
        width, height = dims
        layout = [False] * height
    else:
        width, rows, depth = dims
        layout = ([True] + [False] * rows) * depth
        layout = layout[1:]
    rows_out = []
    for lineno, (text_line, separator) in enumerate(zip(body, layout), start=2):
        if separator:
            if text_line != "":
                raise MazeFormatError("shape-mismatch", lineno, 1, "expected blank line between layers")
            continue
        for col, ch in enumerate(text_line, start=1):
            if ch not in "01":
                raise MazeFormatError("illegal-character", lineno, col, f"unexpected {ch!r}")
        if len(text_line) != width:
            raise MazeFormatError(
                "shape-mismatch", lineno, min(len(text_line), width) + 1,
                f"expected {width} cells, found {len(text_line)}",
            )
        rows_out.append([1 if ch == "1" else 0 for ch in text_line])
    if len(body) != len(layout):
        raise MazeFormatError(
            "shape-mismatch", 2 + min(len(body), len(layout)), 1,
            f"expected {len(layout)} body lines, found {len(body)}",
        )
    cells = np.array(rows_out, dtype=np.uint8)
    if dim == 2:
        return Maze2D(cells.reshape(height, width))
    return Maze3D(cells.reshape(depth, rows, width))


def render_ascii(maze: Maze, glyphs=("#", ".")) -> str:
    """Walls as ``glyphs[0]``, paths as ``glyphs[1]``; 3D layers separated by blank lines."""
    wall, path = glyphs
    c = maze.cells
    layers = [c] if c.ndim == 2 else list(c)
    blocks = ["\n".join("".join(wall if x else path for x in row) for row in layer) for layer in layers]
    return "\n\n".join(blocks)


def render_pgm(maze: Maze2D, scale: int = 1) -> bytes:
    """Binary P5 greymap: walls black, paths white, ``scale`` pixels per cell."""
    if maze.cells.ndim != 2:
        raise ValueError("PGM rendering needs a 2D maze")
    if scale < 1:
        raise ValueError("scale must be >= 1")
    pixels = np.where(maze.cells == 1, 0, 255).astype(np.uint8)
    pixels = np.repeat(np.repeat(pixels, scale, axis=0), scale, axis=1)
    h, w = pixels.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()


_CUBE = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
# two triangles per face, vertex index = 4x + 2y + z (1-based below)
_FACES = [
    (0, 1, 3), (0, 3, 2),  # x = 0
    (4, 6, 7), (4, 7, 5),  # x = 1
    (0, 4, 5), (0, 5, 1),  # y = 0
    (2, 3, 7), (2, 7, 6),  # y = 1
    (0, 2, 6), (0, 6, 4),  # z = 0
    (1, 5, 7), (1, 7, 3),  # z = 1
]


def export_obj(maze: Maze3D) -> str:
    """Wavefront OBJ with one unit cube per wall voxel at ``(v, u, w)``."""
    if maze.cells.ndim != 3:
        raise ValueError("OBJ export needs a 3D maze")
    verts, faces = [], []
    for w, u, v in np.argwhere(maze.cells == 1):
        base = len(verts)
        verts.extend(f"v {v + dx} {u + dy} {w + dz}" for dx, dy, dz in _CUBE)
        faces.extend(f"f {base + a + 1} {base + b + 1} {base + c + 1}" for a, b, c in _FACES)
    lines = verts + faces
    return "\n".join(lines) + "\n" if lines else ""


def table_document(table: LookupTable) -> dict:
    return {
        "dimension": table.dimension,
        "table_id": table.table_id,
        "entries": [
            {
                "code": e.code,
                "pattern_string": code_to_string(e.code, table.width),
                "value": e.symbol,
                "rules": list(e.rules),
                "conflicted": e.conflicted,
            }
            for e in table.entries
        ],
    }


def dump_table_document(doc: dict) -> bytes:
    """Top-level keys indented, one compact entry per line."""
    head = {k: v for k, v in doc.items() if k != "entries"}
    parts = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in head.items()]
    entries = ",\n".join("    " + json.dumps(e) for e in doc["entries"])
    parts.append('  "entries": [\n' + entries + "\n  ]")
    return ("{\n" + ",\n".join(parts) + "\n}\n").encode("utf-8")


def export_table_json(table: LookupTable) -> bytes:
    return dump_table_document(table_document(table))


def export_report_json(report) -> bytes:
    """Any report object with ``to_dict`` (verify, stats, conflicts)."""
    doc = report.to_dict() if hasattr(report, "to_dict") else report
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
