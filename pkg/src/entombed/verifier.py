"""Invariant checks, solvability search and Monte Carlo statistics.

The checks accept any grid, generated or hand-built.  The three invariants:

1. no 2x2 block of equal cells;
2. no wall or path run of horizontal width one may start or end (top-down);
3. every path run in a line touches a path cell in the next line.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage

from .grid import Maze, Maze2D, Maze3D

INV3_SEMANTICS = {
    2: "each maximal horizontal run of path cells in row i < H-1 has a path cell directly below it; "
    "a failing run is reported at its rightmost cell",
    3: "each 4-connected component of path cells in layer w < Z-1 has a path cell directly beneath it "
    "in layer w+1; a failing component is reported at its last cell in scan order",
}
INV3_CELL_SEMANTICS = {
    2: "each path cell in row i < H-1 has a path cell below it or to its right",
    3: "each path cell in layer w < Z-1 has a path cell beneath it or at +u / +v in its layer",
}


@dataclass(frozen=True)
class Violation:
    invariant: int
    location: Tuple[int, ...]
    kind: str
    detail: str = ""

    def to_dict(self):
        return {"invariant": self.invariant, "location": list(self.location), "kind": self.kind, "detail": self.detail}


def _kind(value: int, event: str) -> str:
    return f"width1-{'wall' if value else 'path'}-{event}"


def check_invariant1(maze: Maze) -> List[Violation]:
    """Every 2x2 window of equal cells, keyed by its minimal corner.

    In 3D the windows are taken in the (u, v), (w, v) and (w, u) planes.
    """
    c = maze.cells.astype(np.int16)
    if c.ndim == 2:
        planes = [((0, 1), None)]
    else:
        planes = [((1, 2), "uv"), ((0, 2), "wv"), ((0, 1), "wu")]
    found = []
    for axes, tag in planes:
        x, y = axes
        total = np.zeros(tuple(n - (k in axes) for k, n in enumerate(c.shape)), dtype=np.int16)
        if 0 in total.shape:
            continue
        for dx in (0, 1):
            for dy in (0, 1):
                sl = [slice(None)] * c.ndim
                sl[x] = slice(dx, c.shape[x] - 1 + dx)
                sl[y] = slice(dy, c.shape[y] - 1 + dy)
                total += c[tuple(sl)]
        for value, kind in ((4, "2x2-walls"), (0, "2x2-paths")):
            for loc in np.argwhere(total == value):
                found.append(Violation(1, tuple(int(n) for n in loc), kind, f"plane {tag}" if tag else ""))
    found.sort(key=lambda v: (v.location, v.kind, v.detail))
    return found


def check_invariant2(maze: Maze, interior_only: bool = True) -> List[Violation]:
    """Cells of a width-one run that starts or ends at that cell.

    2D: width one means both horizontal neighbours have the other type;
    start/end compare with the cells above and below.  3D: all four
    neighbours in the layer have the other type; start/end compare along w.
    Without ``interior_only`` the grid is treated as framed by walls.
    """
    c = maze.cells
    padded = np.pad(c, 1, constant_values=1)
    inner = (slice(1, -1),) * c.ndim

    def shifted(axis, step):
        sl = list(inner)
        sl[axis] = slice(1 + step, padded.shape[axis] - 1 + step)
        return padded[tuple(sl)]

    lateral = (1,) if c.ndim == 2 else (1, 2)
    narrow = np.ones(c.shape, dtype=bool)
    for axis in lateral:
        narrow &= (shifted(axis, -1) != c) & (shifted(axis, 1) != c)
    starts = narrow & (shifted(0, -1) != c)
    ends = narrow & (shifted(0, 1) != c)
    if interior_only:
        keep = np.zeros(c.shape, dtype=bool)
        keep[(slice(1, -1),) * c.ndim] = True
        starts &= keep
        ends &= keep
    found = []
    for mask, event in ((starts, "start"), (ends, "end")):
        for loc in np.argwhere(mask):
            loc = tuple(int(n) for n in loc)
            found.append(Violation(2, loc, _kind(int(c[loc]), event)))
    found.sort(key=lambda v: (v.location, v.kind))
    return found


def check_invariant3(maze: Maze, mode: str = "run") -> List[Violation]:
    """Path cells with no onward connection to the next line (or layer).

    ``mode="run"`` checks whole connected path stretches of a line, which is
    what the lookup table maintains.  ``mode="cell"`` demands that every
    single path cell continues downward or forward on its own; the table's
    01001 resolution deliberately breaks that stricter form.
    """
    if mode == "cell":
        return _inv3_cell(maze)
    if mode != "run":
        raise ValueError(f"unknown invariant-3 mode {mode!r}")
    c = maze.cells
    found = []
    if c.ndim == 2:
        for i in range(c.shape[0] - 1):
            row, below = c[i], c[i + 1]
            j, width = 0, c.shape[1]
            while j < width:
                if row[j]:
                    j += 1
                    continue
                start = j
                while j < width and row[j] == 0:
                    j += 1
                if not (below[start:j] == 0).any():
                    found.append(Violation(3, (i, j - 1), "disconnected-path", f"run {start}..{j - 1}"))
    else:
        for w in range(c.shape[0] - 1):
            labels, count = ndimage.label(c[w] == 0)
            if not count:
                continue
            through = np.unique(labels[(c[w] == 0) & (c[w + 1] == 0)])
            for lab in sorted(set(range(1, count + 1)) - set(through.tolist())):
                cells = np.argwhere(labels == lab)
                u, v = (int(n) for n in cells[-1])
                found.append(Violation(3, (w, u, v), "disconnected-path", f"component of {len(cells)} cells"))
    return found


def _inv3_cell(maze: Maze) -> List[Violation]:
    c = maze.cells
    found = []
    for loc in np.argwhere(c == 0):
        loc = tuple(int(n) for n in loc)
        if loc[0] == c.shape[0] - 1:
            continue
        onward = [(loc[0] + 1,) + loc[1:]]
        for axis in range(1, c.ndim):
            step = list(loc)
            step[axis] += 1
            if step[axis] < c.shape[axis]:
                onward.append(tuple(step))
        if not any(c[p] == 0 for p in onward):
            found.append(Violation(3, loc, "disconnected-path", "cell-level"))
    return found


@dataclass
class Solvability:
    solvable: bool
    path: List[Tuple[int, ...]] = field(default_factory=list)

    def __bool__(self):
        return self.solvable


def solvability(maze: Maze) -> Solvability:
    """Shortest route of path cells from the first line (layer) to the last.

    Breadth-first search from every path cell on the entry side; moves are
    4-connected in 2D and 6-connected in 3D.
    """
    c = maze.cells
    shape = c.shape
    last = shape[0] - 1
    parent: Dict[tuple, Optional[tuple]] = {}
    queue = deque()
    for loc in np.argwhere(c[0] == 0):
        start = (0,) + tuple(int(n) for n in loc)
        parent[start] = None
        queue.append(start)
    steps = []
    for axis in range(c.ndim):
        for d in (1, -1):
            s = [0] * c.ndim
            s[axis] = d
            steps.append(tuple(s))
    while queue:
        cur = queue.popleft()
        if cur[0] == last:
            path = []
            while cur is not None:
                path.append(cur)
                cur = parent[cur]
            return Solvability(True, path[::-1])
        for s in steps:
            nxt = tuple(a + b for a, b in zip(cur, s))
            if nxt in parent or not all(0 <= p < n for p, n in zip(nxt, shape)):
                continue
            if c[nxt] == 0:
                parent[nxt] = cur
                queue.append(nxt)
    return Solvability(False)


@dataclass
class VerifyReport:
    meta: dict
    dimension: int
    shape: Tuple[int, ...]
    interior_only: bool
    violations: Dict[int, List[Violation]]
    solvable: bool
    witness: List[Tuple[int, ...]]
    inv3_semantics: str

    @property
    def counts(self) -> Dict[int, int]:
        return {k: len(v) for k, v in self.violations.items()}

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def clean(self) -> bool:
        return self.total == 0

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "shape": list(self.shape),
            "meta": self.meta,
            "interior_only": self.interior_only,
            "inv3_semantics": self.inv3_semantics,
            "counts": {str(k): n for k, n in self.counts.items()},
            "solvable": self.solvable,
            "witness_length": len(self.witness),
            "witness": [list(p) for p in self.witness],
            "violations": {str(k): [v.to_dict() for v in vs] for k, vs in self.violations.items()},
        }

    def summary(self) -> str:
        dims = "x".join(str(n) for n in reversed(self.shape))
        lines = [
            f"{self.dimension}D maze {dims}" + (f" seed {self.meta['seed']}" if "seed" in self.meta else ""),
            f"invariant 3 semantics: {self.inv3_semantics}",
        ]
        names = {1: "no 2x2 blocks", 2: "no width-1 starts/ends", 3: "paths continue"}
        for k in (1, 2, 3):
            scope = " (interior only)" if k == 2 and self.interior_only else ""
            lines.append(f"invariant {k} [{names[k]}]{scope}: {self.counts[k]} violations")
            for v in self.violations[k][:10]:
                lines.append(f"  {v.kind} at {v.location}" + (f" ({v.detail})" if v.detail else ""))
            if self.counts[k] > 10:
                lines.append(f"  ... {self.counts[k] - 10} more")
        lines.append(f"solvable: {'yes' if self.solvable else 'no'}" + (f" (path of {len(self.witness)} cells)" if self.solvable else ""))
        return "\n".join(lines)


def verify(maze: Maze, interior_only: bool = True) -> VerifyReport:
    sol = solvability(maze)
    return VerifyReport(
        meta=dict(maze.meta),
        dimension=maze.cells.ndim,
        shape=tuple(maze.cells.shape),
        interior_only=interior_only,
        violations={
            1: check_invariant1(maze),
            2: check_invariant2(maze, interior_only),
            3: check_invariant3(maze),
        },
        solvable=sol.solvable,
        witness=sol.path,
        inv3_semantics=INV3_SEMANTICS[maze.cells.ndim],
    )


# --- Monte Carlo -------------------------------------------------------------

_METRICS = ("inv1", "inv2", "inv3", "table_draws", "boundary_draws", "conflicted_hits", "base_conflict_hits")


@dataclass
class StatsReport:
    dimension: int
    size: Tuple[int, ...]
    boundary: str
    seed0: int
    trials: int
    interior_only: bool
    rows: List[dict]
    static: dict

    def _column(self, key):
        return [r[key] for r in self.rows]

    def aggregate(self) -> dict:
        out = {}
        for key in _METRICS:
            col = self._column(key)
            out[key] = {"mean": float(np.mean(col)), "min": int(min(col)), "max": int(max(col))}
        steps = sum(self._column("steps"))
        out["solvable_fraction"] = float(np.mean(self._column("solvable")))
        out["disconnected_maze_fraction"] = float(np.mean([r["inv3"] > 0 for r in self.rows]))
        out["conflicted_hit_fraction"] = sum(self._column("conflicted_hits")) / steps
        out["base_conflict_hit_fraction"] = sum(self._column("base_conflict_hits")) / steps
        return out

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "size": list(self.size),
            "boundary": self.boundary,
            "seed0": self.seed0,
            "trials": self.trials,
            "interior_only": self.interior_only,
            "static": self.static,
            "aggregate": self.aggregate(),
            "rows": self.rows,
        }

    def summary(self) -> str:
        agg = self.aggregate()
        dims = "x".join(str(n) for n in self.size)
        lines = [f"{self.trials} trials of {self.dimension}D {dims} mazes, boundary {self.boundary}, seeds {self.seed0}..{self.seed0 + self.trials - 1}"]
        for key in _METRICS:
            a = agg[key]
            lines.append(f"{key:>20}: mean {a['mean']:.3f}  min {a['min']}  max {a['max']}")
        lines.append(f"{'solvable fraction':>20}: {agg['solvable_fraction']:.4f}")
        lines.append(f"{'disconnected mazes':>20}: {agg['disconnected_maze_fraction']:.4f}")
        lines.append(f"{'conflicted hits':>20}: {agg['conflicted_hit_fraction']:.5f} of steps "
                     f"(static conflicted contexts {self.static['conflicted_context_fraction']:.5f})")
        lines.append(f"{'base conflict hits':>20}: {agg['base_conflict_hit_fraction']:.5f} of steps "
                     f"(static residual contexts {self.static['residual_context_fraction']:.5f})")
        lines.append("")
        lines.append("seed inv1 inv2 inv3 solvable conflicted_hits")
        for r in self.rows:
            lines.append(f"{r['seed']} {r['inv1']} {r['inv2']} {r['inv3']} {int(r['solvable'])} {r['conflicted_hits']}")
        return "\n".join(lines)


def monte_carlo(cfg, trials: int, seed0: int = 0, interior_only: bool = True) -> StatsReport:
    """Generate and verify ``trials`` mazes with seeds ``seed0, seed0 + 1, ...``."""
    from .generator import generate
    from .rules import builtin_rules, enumerate_conflicts

    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    for seed in range(seed0, seed0 + trials):
        maze = generate(cfg.with_seed(seed))
        rep = verify(maze, interior_only)
        row = {"seed": seed}
        row.update({f"inv{k}": n for k, n in rep.counts.items()})
        row["solvable"] = rep.solvable
        row.update(maze.meta["stats"])
        rows.append(row)
    table = cfg.table
    static = {
        "table_size": len(table),
        "conflicted_context_fraction": len(table.conflicted_codes()) / len(table),
        "base_conflict_context_fraction": len(table.base_conflict_codes()) / len(table),
    }
    if table.table_id.startswith("builtin"):
        static["residual_context_fraction"] = enumerate_conflicts(builtin_rules(cfg.dimension)).residual_fraction
    else:
        static["residual_context_fraction"] = static["base_conflict_context_fraction"]
    return StatsReport(cfg.dimension, cfg.size, cfg.boundary.name, seed0, trials, interior_only, rows, static)
