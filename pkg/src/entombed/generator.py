"""Seeded scanline generation of 2D and 3D mazes from a compiled lookup table."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .grid import OFFSETS_2D, OFFSETS_3D, RANDOM, BoundaryPolicy, Maze2D, Maze3D
from .rng import SplitMix64
from .rules import RANDOM_ENTRY, LookupTable, builtin_table


class InvalidConfig(ValueError):
    pass


class RetriesExhausted(RuntimeError):
    def __init__(self, message, maze=None, seed=None, retries=0):
        super().__init__(message)
        self.maze = maze
        self.seed = seed
        self.retries = retries


@dataclass
class GenConfig:
    """Generation parameters.

    ``size`` is ``(W, H)`` in 2D and ``(V, U, Z)`` in 3D.  ``boundary`` is a
    preset name, a digit string like ``"11RR1"``, or a ``BoundaryPolicy``.
    """

    dimension: int = 2
    size: Tuple[int, ...] = (8, 16)
    seed: int = 0
    boundary: Union[str, BoundaryPolicy, None] = None
    mirror: bool = False
    table: Optional[LookupTable] = None

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise InvalidConfig(f"dimension must be 2 or 3, got {self.dimension}")
        self.size = tuple(int(n) for n in self.size)
        if len(self.size) != self.dimension:
            raise InvalidConfig(f"{self.dimension}D generation needs {self.dimension} sizes, got {self.size}")
        if any(n < 1 for n in self.size):
            raise InvalidConfig(f"sizes must be >= 1, got {self.size}")
        if self.mirror and self.dimension != 2:
            raise InvalidConfig("mirroring is only defined for 2D mazes")
        if self.boundary is None:
            self.boundary = "atari2d" if self.dimension == 2 else "random"
        if not isinstance(self.boundary, BoundaryPolicy):
            try:
                self.boundary = BoundaryPolicy.parse(self.boundary, self.dimension)
            except ValueError as exc:
                raise InvalidConfig(str(exc)) from None
        if self.boundary.dimension != self.dimension:
            raise InvalidConfig("boundary policy dimension does not match")
        if self.table is None:
            self.table = builtin_table(self.dimension)
        if self.table.dimension != self.dimension:
            raise InvalidConfig("lookup table dimension does not match")

    def with_seed(self, seed: int) -> "GenConfig":
        return GenConfig(self.dimension, self.size, seed, self.boundary, self.mirror, self.table)


@dataclass
class GenStats:
    steps: int = 0
    table_draws: int = 0
    boundary_draws: int = 0
    conflicted_hits: int = 0
    base_conflict_hits: int = 0

    @property
    def draws(self) -> int:
        return self.table_draws + self.boundary_draws

    def to_dict(self):
        return {
            "steps": self.steps,
            "table_draws": self.table_draws,
            "boundary_draws": self.boundary_draws,
            "conflicted_hits": self.conflicted_hits,
            "base_conflict_hits": self.base_conflict_hits,
        }


def _meta(cfg: GenConfig, stats: GenStats) -> dict:
    return {
        "seed": cfg.seed,
        "boundary": cfg.boundary.name,
        "boundary_subs": cfg.boundary.as_string(),
        "table_id": cfg.table.table_id,
        "mirror": cfg.mirror,
        "stats": stats.to_dict(),
    }


def _flags(table: LookupTable):
    conflicted = bytearray(len(table))
    base = bytearray(len(table))
    for e in table.entries:
        conflicted[e.code] = e.conflicted
        base[e.code] = e.base_conflict
    return conflicted, base


def _scan2d(width: int, height: int, table: LookupTable, policy: BoundaryPolicy, rng: SplitMix64, stats: GenStats):
    values = table.values
    conflicted, base = _flags(table)
    subs = policy.subs
    offs = list(OFFSETS_2D.values())
    rows = []
    prev = None
    for i in range(height):
        row = [0] * width
        for j in range(width):
            if prev is not None and 2 <= j <= width - 2:
                code = (row[j - 2] << 4) | (row[j - 1] << 3) | (prev[j - 1] << 2) | (prev[j] << 1) | prev[j + 1]
            else:
                code = 0
                for (di, dj), sub in zip(offs, subs):
                    ii, jj = i + di, j + dj
                    if ii >= 0 and 0 <= jj < width:
                        bit = (row if di == 0 else prev)[jj]
                    elif sub == RANDOM:
                        bit = rng.next_bit()
                        stats.boundary_draws += 1
                    else:
                        bit = sub
                    code = (code << 1) | bit
            value = values[code]
            if value == RANDOM_ENTRY:
                value = rng.next_bit()
                stats.table_draws += 1
            elif conflicted[code]:
                stats.conflicted_hits += 1
            if base[code]:
                stats.base_conflict_hits += 1
            row[j] = value
        rows.append(row)
        prev = row
    stats.steps += width * height
    return rows


def generate2d(cfg: GenConfig) -> Maze2D:
    if cfg.dimension != 2:
        raise InvalidConfig("generate2d needs a 2D configuration")
    width, height = cfg.size
    rng = SplitMix64(cfg.seed)
    stats = GenStats()
    half = (width + 1) // 2 if cfg.mirror else width
    rows = _scan2d(half, height, cfg.table, cfg.boundary, rng, stats)
    cells = np.array(rows, dtype=np.uint8)
    if cfg.mirror:
        full = np.empty((height, width), dtype=np.uint8)
        full[:, :half] = cells
        full[:, width - half :] = cells[:, ::-1]
        cells = full
    return Maze2D(cells, _meta(cfg, stats))


def generate3d(cfg: GenConfig) -> Maze3D:
    if cfg.dimension != 3:
        raise InvalidConfig("generate3d needs a 3D configuration")
    V, U, Z = cfg.size
    rng = SplitMix64(cfg.seed)
    stats = GenStats()
    table = cfg.table
    values = table.values
    conflicted, base = _flags(table)
    subs = cfg.boundary.subs
    offs = list(OFFSETS_3D.values())
    layer_size = U * V
    cells = [0] * (Z * layer_size)
    # flat-index strides for the interior fast path, in a..k order
    sa, sb, sc = -layer_size - 1, -layer_size, -layer_size + 1
    sd, se = -layer_size + V, -layer_size - V
    sf, sg, sh, sj, sk = -2 * V, -V, -V + 1, -V - 1, -1
    for w in range(Z):
        for u in range(U):
            interior_row = w >= 1 and 2 <= u <= U - 2
            base_idx = w * layer_size + u * V
            for v in range(V):
                n = base_idx + v
                if interior_row and 1 <= v <= V - 2:
                    code = (
                        (cells[n + sa] << 9)
                        | (cells[n + sb] << 8)
                        | (cells[n + sc] << 7)
                        | (cells[n + sd] << 6)
                        | (cells[n + se] << 5)
                        | (cells[n + sf] << 4)
                        | (cells[n + sg] << 3)
                        | (cells[n + sh] << 2)
                        | (cells[n + sj] << 1)
                        | cells[n + sk]
                    )
                else:
                    code = 0
                    for (dw, du, dv), sub in zip(offs, subs):
                        ww, uu, vv = w + dw, u + du, v + dv
                        if ww >= 0 and 0 <= uu < U and 0 <= vv < V:
                            bit = cells[ww * layer_size + uu * V + vv]
                        elif sub == RANDOM:
                            bit = rng.next_bit()
                            stats.boundary_draws += 1
                        else:
                            bit = sub
                        code = (code << 1) | bit
                value = values[code]
                if value == RANDOM_ENTRY:
                    value = rng.next_bit()
                    stats.table_draws += 1
                elif conflicted[code]:
                    stats.conflicted_hits += 1
                if base[code]:
                    stats.base_conflict_hits += 1
                cells[n] = value
    stats.steps = Z * layer_size
    arr = np.array(cells, dtype=np.uint8).reshape(Z, U, V)
    return Maze3D(arr, _meta(cfg, stats))


def generate(cfg: GenConfig):
    return generate2d(cfg) if cfg.dimension == 2 else generate3d(cfg)


def generate_until_clean(cfg: GenConfig, max_retries: int, interior_only: bool = True):
    """Regenerate with ``seed + 1`` until the verifier finds no violations.

    Returns ``(maze, seed_used, retries)``; raises ``RetriesExhausted`` when
    ``max_retries`` re-runs all produced violations.
    """
    from .verifier import verify

    seed = cfg.seed
    maze = None
    for attempt in range(max_retries + 1):
        maze = generate(cfg.with_seed(seed))
        if verify(maze, interior_only=interior_only).clean:
            return maze, seed, attempt
        seed += 1
    raise RetriesExhausted(
        f"no clean maze after {max_retries} retries (seeds {cfg.seed}..{seed - 1})", maze, seed - 1, max_retries
    )
