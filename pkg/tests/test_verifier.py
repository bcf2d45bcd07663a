import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entombed.generator import GenConfig, generate2d, generate3d
from entombed.grid import Maze2D, Maze3D
from entombed.verifier import (
    check_invariant1,
    check_invariant2,
    check_invariant3,
    monte_carlo,
    solvability,
    verify,
)
from reference import all_grids, oracle_row_runs_connected


def grid(*rows):
    return Maze2D.from_rows(rows)


def test_inv1_examples():
    v = check_invariant1(grid("11", "11"))
    assert [(x.location, x.kind) for x in v] == [((0, 0), "2x2-walls")]
    checker = Maze2D(np.indices((6, 7)).sum(axis=0) % 2)
    assert check_invariant1(checker) == []
    assert [x.kind for x in check_invariant1(grid("000", "000"))] == ["2x2-paths", "2x2-paths"]


def test_inv1_3d_planes():
    cells = np.zeros((2, 2, 2), dtype=np.uint8)
    cells[0] = 1
    v = check_invariant1(Maze3D(cells))
    details = sorted((x.kind, x.detail) for x in v)
    assert details == [("2x2-paths", "plane uv"), ("2x2-walls", "plane uv")]
    # a checkerboard in 3D has no equal 2x2 window in any plane
    assert check_invariant1(Maze3D(np.indices((4, 4, 4)).sum(axis=0) % 2)) == []


def test_inv2_examples():
    v = check_invariant2(grid("000", "010", "000"))
    assert sorted((x.location, x.kind) for x in v) == [((1, 1), "width1-wall-end"), ((1, 1), "width1-wall-start")]
    assert check_invariant2(grid("010", "010", "010"), interior_only=True) == []


def test_inv2_framed_mode_sees_the_rim():
    # a lone path cell at the top edge starts below the wall frame
    m = grid("101", "111", "111")
    assert check_invariant2(m, interior_only=True) == []
    kinds = {x.kind for x in check_invariant2(m, interior_only=False)}
    assert kinds == {"width1-path-start", "width1-path-end"}


def test_inv2_3d():
    cells = np.zeros((3, 3, 3), dtype=np.uint8)
    cells[1, 1, 1] = 1
    v = check_invariant2(Maze3D(cells))
    assert sorted(x.kind for x in v) == ["width1-wall-end", "width1-wall-start"]
    cells[:, 1, 1] = 1
    assert check_invariant2(Maze3D(cells)) == []


def test_inv3_examples():
    v = check_invariant3(grid("00", "11"))
    assert [(x.location, x.kind) for x in v] == [((0, 1), "disconnected-path")]
    assert check_invariant3(grid("00", "01")) == []


def test_inv3_cell_mode_is_stricter():
    # the run continues below through (0,0), but (0,1) alone has no exit
    m = grid("00", "01")
    assert check_invariant3(m) == []
    assert [x.location for x in check_invariant3(m, mode="cell")] == [(0, 1)]
    with pytest.raises(ValueError):
        check_invariant3(m, mode="component")


def test_inv3_run_semantics_match_flood_fill_on_all_two_row_grids():
    for g in all_grids(2, 6):
        got = [v.location[1] for v in check_invariant3(Maze2D(g))]
        assert got == oracle_row_runs_connected(g[0], g[1]), g


def test_inv3_3d_components():
    cells = np.ones((2, 3, 3), dtype=np.uint8)
    cells[0, 0, :] = 0  # a path stripe
    assert len(check_invariant3(Maze3D(cells))) == 1
    cells[1, 0, 2] = 0  # now it continues into the next layer
    assert check_invariant3(Maze3D(cells)) == []


def test_solvability_examples():
    sol = solvability(Maze2D.empty(4, 5))
    assert sol.solvable and len(sol.path) == 5
    assert not solvability(Maze2D(np.ones((3, 3), dtype=np.uint8)))
    assert solvability(Maze3D.empty(2, 2, 3)).path[-1][0] == 2


def _check_witness(maze, path):
    c = maze.cells
    assert path[0][0] == 0 and path[-1][0] == c.shape[0] - 1
    for p in path:
        assert c[p] == 0
    for p, q in zip(path, path[1:]):
        assert sum(abs(a - b) for a, b in zip(p, q)) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["atari2d", "open", "random"]))
def test_witness_is_a_valid_path(seed, boundary):
    m = generate2d(GenConfig(2, (10, 14), seed, boundary))
    sol = solvability(m)
    if sol:
        _check_witness(m, sol.path)


def test_witness_3d():
    m = generate3d(GenConfig(3, (6, 6, 6), 4))
    sol = solvability(m)
    assert sol
    _check_witness(m, sol.path)


def test_verifier_accepts_handmade_counterexample():
    m = grid("0000", "0110", "0110", "0000")
    rep = verify(m)
    assert [(v.location, v.kind) for v in rep.violations[1]] == [((1, 1), "2x2-walls")]
    assert rep.total == sum(rep.counts.values())
    assert not rep.clean


@pytest.mark.parametrize("seed", range(100))
def test_solid_boundary_keeps_invariants_1_and_2(seed):
    m = generate2d(GenConfig(2, (20, 40), seed, "solid"))
    assert check_invariant1(m) == []
    assert check_invariant2(m, interior_only=True) == []


def test_monte_carlo_single_trial_equals_verify():
    cfg = GenConfig(2, (12, 20), 0, "atari2d")
    stats = monte_carlo(cfg, 1, 31)
    rep = verify(generate2d(cfg.with_seed(31)))
    row = stats.rows[0]
    assert row["seed"] == 31
    assert [row["inv1"], row["inv2"], row["inv3"]] == [rep.counts[1], rep.counts[2], rep.counts[3]]
    assert row["solvable"] == rep.solvable
    with pytest.raises(ValueError):
        monte_carlo(cfg, 0)


def test_monte_carlo_rows_and_aggregates():
    stats = monte_carlo(GenConfig(3, (8, 8, 8), 0), 5, 100)
    assert [r["seed"] for r in stats.rows] == list(range(100, 105))
    agg = stats.aggregate()
    assert 0 <= agg["conflicted_hit_fraction"] < 1
    assert stats.static["residual_context_fraction"] == pytest.approx(7 / 1024)
    assert "conflicted hits" in stats.summary()
