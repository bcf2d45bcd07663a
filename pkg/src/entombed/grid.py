"""Binary maze grids and boundary-aware context extraction.

Cells are 1 for wall and 0 for path.  A 2D maze is stored as an ``(H, W)``
uint8 array indexed ``[i, j]`` (row, column).  A 3D maze is stored as a
``(Z, U, V)`` array indexed ``[w, u, v]`` where ``w`` is the layer axis that
generation walks first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple, Union

import numpy as np

FIXED0 = 0
FIXED1 = 1
RANDOM = "R"

VARS_2D = ("a", "b", "c", "d", "e")
VARS_3D = ("a", "b", "c", "d", "e", "f", "g", "h", "j", "k")

# Offset of each context variable relative to the cell being placed.
# 2D offsets are (di, dj); 3D offsets are (dw, du, dv).
OFFSETS_2D: Dict[str, Tuple[int, int]] = {
    "a": (0, -2),
    "b": (0, -1),
    "c": (-1, -1),
    "d": (-1, 0),
    "e": (-1, 1),
}
OFFSETS_3D: Dict[str, Tuple[int, int, int]] = {
    "a": (-1, 0, -1),
    "b": (-1, 0, 0),
    "c": (-1, 0, 1),
    "d": (-1, 1, 0),
    "e": (-1, -1, 0),
    "f": (0, -2, 0),
    "g": (0, -1, 0),
    "h": (0, -1, 1),
    "j": (0, -1, -1),
    "k": (0, 0, -1),
}


def variables(dimension: int) -> Tuple[str, ...]:
    if dimension == 2:
        return VARS_2D
    if dimension == 3:
        return VARS_3D
    raise ValueError(f"unsupported dimension {dimension}")


def offsets(dimension: int) -> Dict[str, tuple]:
    return OFFSETS_2D if dimension == 2 else OFFSETS_3D


def precedes_in_scan(offset: tuple) -> bool:
    """True if a cell at ``offset`` is generated before the origin cell.

    Scan order is lexicographic over the offset tuple, so this is a plain
    tuple comparison against the zero offset.
    """
    return tuple(offset) < (0,) * len(offset)


class _MazeBase:
    cells: np.ndarray
    meta: dict

    def get(self, coords) -> int:
        self._check(coords)
        return int(self.cells[tuple(coords)])

    def set(self, coords, value: int) -> None:
        self._check(coords)
        if value not in (0, 1):
            raise ValueError(f"cell value must be 0 or 1, got {value!r}")
        self.cells[tuple(coords)] = value

    def in_bounds(self, coords) -> bool:
        return all(0 <= c < n for c, n in zip(coords, self.cells.shape))

    def _check(self, coords):
        if len(coords) != self.cells.ndim or not self.in_bounds(coords):
            raise IndexError(f"coordinates {tuple(coords)} outside maze of shape {self.cells.shape}")

    def __eq__(self, other):
        return type(self) is type(other) and np.array_equal(self.cells, other.cells)

    def copy(self):
        return type(self)(self.cells.copy(), dict(self.meta))


@dataclass(eq=False)
class Maze2D(_MazeBase):
    cells: np.ndarray
    meta: dict = field(default_factory=dict)
    dimension = 2

    def __post_init__(self):
        self.cells = _as_bits(self.cells, 2)

    @classmethod
    def empty(cls, width: int, height: int, **meta) -> "Maze2D":
        if width < 1 or height < 1:
            raise ValueError("maze sizes must be >= 1")
        return cls(np.zeros((height, width), dtype=np.uint8), meta)

    @classmethod
    def from_rows(cls, rows, **meta) -> "Maze2D":
        """Build from strings like ``"010"`` or nested int sequences."""
        return cls(np.array([[int(ch) for ch in row] for row in rows], dtype=np.uint8), meta)

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def width(self) -> int:
        return self.cells.shape[1]


@dataclass(eq=False)
class Maze3D(_MazeBase):
    cells: np.ndarray
    meta: dict = field(default_factory=dict)
    dimension = 3

    def __post_init__(self):
        self.cells = _as_bits(self.cells, 3)

    @classmethod
    def empty(cls, cols: int, rows: int, depth: int, **meta) -> "Maze3D":
        if cols < 1 or rows < 1 or depth < 1:
            raise ValueError("maze sizes must be >= 1")
        return cls(np.zeros((depth, rows, cols), dtype=np.uint8), meta)

    @property
    def depth(self) -> int:
        return self.cells.shape[0]

    @property
    def rows(self) -> int:
        return self.cells.shape[1]

    @property
    def cols(self) -> int:
        return self.cells.shape[2]


Maze = Union[Maze2D, Maze3D]


def _as_bits(cells, ndim: int) -> np.ndarray:
    arr = np.asarray(cells)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional cell array, got shape {arr.shape}")
    if any(n < 1 for n in arr.shape):
        raise ValueError("maze sizes must be >= 1")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("cells must be 0 or 1")
    return np.ascontiguousarray(arr, dtype=np.uint8)


PRESETS_2D = {
    "atari2d": dict(a=FIXED0, b=FIXED1, c=RANDOM, d=RANDOM, e=RANDOM),
    "solid": dict.fromkeys(VARS_2D, FIXED1),
    "open": dict.fromkeys(VARS_2D, FIXED0),
    "random": dict.fromkeys(VARS_2D, RANDOM),
}
PRESETS_3D = {
    "solid": dict.fromkeys(VARS_3D, FIXED1),
    "open": dict.fromkeys(VARS_3D, FIXED0),
    "random": dict.fromkeys(VARS_3D, RANDOM),
}


@dataclass(frozen=True)
class BoundaryPolicy:
    """Out-of-bounds substitution for each context variable.

    Each value is ``0``, ``1`` or ``RANDOM``.  Random substitutions draw one
    bit per out-of-bounds read, in alphabetical variable order.
    """

    dimension: int
    subs: Tuple[Union[int, str], ...]
    name: str = "custom"

    def __post_init__(self):
        names = variables(self.dimension)
        if len(self.subs) != len(names):
            raise ValueError(f"{self.dimension}D boundary policy needs {len(names)} substitutions")
        for s in self.subs:
            if s not in (FIXED0, FIXED1, RANDOM):
                raise ValueError(f"invalid substitution {s!r}")

    @classmethod
    def from_mapping(cls, dimension: int, mapping: Mapping[str, Union[int, str]], name="custom"):
        names = variables(dimension)
        missing = set(names) - set(mapping)
        if missing:
            raise ValueError(f"no substitution for variables {sorted(missing)}")
        return cls(dimension, tuple(mapping[v] for v in names), name)

    @classmethod
    def preset(cls, name: str, dimension: int = 2) -> "BoundaryPolicy":
        table = PRESETS_2D if dimension == 2 else PRESETS_3D
        if name not in table:
            raise ValueError(f"unknown {dimension}D boundary preset {name!r}; choose from {sorted(table)}")
        return cls.from_mapping(dimension, table[name], name)

    @classmethod
    def parse(cls, text: str, dimension: int = 2) -> "BoundaryPolicy":
        """Accept a preset name or a digit string such as ``"11RR1"``."""
        names = variables(dimension)
        if len(text) == len(names) and set(text) <= set("01R"):
            subs = tuple(RANDOM if ch == "R" else int(ch) for ch in text)
            return cls(dimension, subs, text)
        return cls.preset(text, dimension)

    def as_string(self) -> str:
        return "".join(str(s) for s in self.subs)

    def sub(self, var: str):
        return self.subs[variables(self.dimension).index(var)]

    @property
    def has_random(self) -> bool:
        return RANDOM in self.subs


def _context(cells: np.ndarray, origin, offs, policy: BoundaryPolicy, rng) -> Tuple[int, ...]:
    shape = cells.shape
    out = []
    for off, sub in zip(offs, policy.subs):
        pos = tuple(o + d for o, d in zip(origin, off))
        if all(0 <= p < n for p, n in zip(pos, shape)):
            out.append(int(cells[pos]))
        elif sub == RANDOM:
            out.append(rng.next_bit())
        else:
            out.append(sub)
    return tuple(out)


def context2d(maze: Maze2D, i: int, j: int, policy: BoundaryPolicy, rng=None) -> Tuple[int, ...]:
    """Return ``(a, b, c, d, e)`` for the cell at row ``i``, column ``j``."""
    if not (0 <= i < maze.height and 0 <= j < maze.width):
        raise IndexError(f"position ({i}, {j}) outside {maze.height}x{maze.width} maze")
    if policy.dimension != 2:
        raise ValueError("context2d needs a 2D boundary policy")
    return _context(maze.cells, (i, j), OFFSETS_2D.values(), policy, rng)


def context3d(maze: Maze3D, w: int, u: int, v: int, policy: BoundaryPolicy, rng=None) -> Tuple[int, ...]:
    """Return ``(a, b, c, d, e, f, g, h, j, k)`` for the cell at ``(w, u, v)``."""
    if not maze.in_bounds((w, u, v)):
        raise IndexError(f"position ({w}, {u}, {v}) outside maze of shape {maze.cells.shape}")
    if policy.dimension != 3:
        raise ValueError("context3d needs a 3D boundary policy")
    return _context(maze.cells, (w, u, v), OFFSETS_3D.values(), policy, rng)


def pack(bits) -> int:
    """Pack a context tuple MSB-first, so ``(0,1,0,0,1)`` packs to ``0b01001``."""
    code = 0
    for b in bits:
        code = (code << 1) | b
    return code


def unpack(code: int, width: int) -> Tuple[int, ...]:
    return tuple((code >> (width - 1 - n)) & 1 for n in range(width))


def code_to_string(code: int, width: int) -> str:
    return format(code, f"0{width}b")


def make_maze(dimension: int, size, meta: Optional[dict] = None) -> Maze:
    meta = meta or {}
    if dimension == 2:
        return Maze2D.empty(*size, **meta)
    return Maze3D.empty(*size, **meta)
