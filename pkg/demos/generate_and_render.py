"""Generate a few 2D mazes, print them, and save one as a PGM image.

The atari2d boundary reproduces the original cartridge's maze look, mirrored
down the middle. Expect the occasional dead end: the table alone does not
guarantee every path carries on to the next row.
"""

import sys
from pathlib import Path

from entombed import GenConfig, generate, render_ascii, render_pgm, solvability, verify

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")

cfg = GenConfig(dimension=2, size=(32, 24), seed=2024, boundary="atari2d", mirror=True)
maze = generate(cfg)
print(render_ascii(maze, glyphs=("██", "  ")))
print()
print(verify(maze).summary())
print("solvable:", bool(solvability(maze)))

target = out_dir / "maze.pgm"
target.write_bytes(render_pgm(maze, scale=8))
print(f"wrote {target}")

# with walls substituted on three sides, every path run stays connected downward
solid_ish = generate(GenConfig(2, (20, 16), 5, "11RR1"))
print()
print(render_ascii(solid_ish))
print(verify(solid_ish).summary())
