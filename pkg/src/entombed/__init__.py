"""Entombed-style maze generation from hyper-local lookup tables.

Each cell is chosen from a handful of already-generated neighbours through a
precompiled table.  Every table entry follows from three maze invariants;
entries no invariant constrains are filled at random.
"""

from .generator import GenConfig, InvalidConfig, RetriesExhausted, generate, generate2d, generate3d, generate_until_clean
from .grid import BoundaryPolicy, Maze2D, Maze3D, context2d, context3d
from .render_io import MazeFormatError, export_obj, export_report_json, export_table_json, parse, render_ascii, render_pgm, serialize
from .rng import SplitMix64
from .rules import (
    LookupTable,
    Rule,
    RuleSet,
    builtin_rules,
    builtin_rules_2d,
    builtin_rules_3d,
    builtin_table,
    compile_table,
    enumerate_conflicts,
    table_entry,
)
from .verifier import check_invariant1, check_invariant2, check_invariant3, monte_carlo, solvability, verify

__version__ = "0.1.0"
