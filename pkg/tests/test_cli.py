import json

import pytest

from entombed.cli import main
from entombed.generator import GenConfig, generate2d
from entombed.render_io import parse, serialize


def run(capsysbinary, *argv):
    code = main(list(argv))
    out, err = capsysbinary.readouterr()
    return code, out, err


def test_table(capsysbinary):
    code, out, _ = run(capsysbinary, "table", "--dim", "2")
    assert code == 0
    assert b'"code": 9, "pattern_string": "01001", "value": "1"' in out
    code, out, _ = run(capsysbinary, "table", "--dim", "3")
    assert len(json.loads(out)["entries"]) == 1024


def test_table_to_file(tmp_path, capsysbinary):
    target = tmp_path / "t.json"
    assert run(capsysbinary, "table", "--dim", "2", "--out", str(target))[0] == 0
    assert len(json.loads(target.read_bytes())["entries"]) == 32


def test_bad_dim_is_usage_error(capsysbinary):
    with pytest.raises(SystemExit) as info:
        main(["table", "--dim", "4"])
    assert info.value.code == 2
    assert b"usage" in capsysbinary.readouterr().err


def test_unknown_flag(capsysbinary):
    with pytest.raises(SystemExit) as info:
        main(["gen", "--colour", "red"])
    assert info.value.code == 2


def test_gen_reproducible(capsysbinary):
    argv = ("gen", "--dim", "2", "--size", "12x20", "--seed", "7", "--boundary", "solid", "--render", "text")
    code, first, err = run(capsysbinary, *argv)
    assert code == 0 and b"seed 7 retries 0" in err
    assert run(capsysbinary, *argv)[1] == first
    m = parse(first)
    assert (m.width, m.height) == (12, 20)
    assert m == generate2d(GenConfig(2, (12, 20), 7, "solid"))


def test_gen_mirror(capsysbinary):
    _, out, _ = run(capsysbinary, "gen", "--size", "15x10", "--mirror", "--seed", "3")
    m = parse(out)
    assert (m.cells == m.cells[:, ::-1]).all()


def test_gen_renderings(capsysbinary):
    _, out, _ = run(capsysbinary, "gen", "--dim", "3", "--size", "5x5x5", "--render", "obj")
    assert out.startswith(b"v ")
    _, out, _ = run(capsysbinary, "gen", "--size", "4x3", "--render", "pgm", "--scale", "2")
    assert out.startswith(b"P5\n8 6\n255\n")
    _, out, _ = run(capsysbinary, "gen", "--size", "4x3", "--render", "ascii")
    assert len(out.splitlines()) == 3
    assert run(capsysbinary, "gen", "--dim", "3", "--render", "pgm")[0] == 2
    assert run(capsysbinary, "gen", "--size", "4x3", "--render", "obj")[0] == 2
    assert run(capsysbinary, "gen", "--dim", "3", "--size", "4x3")[0] == 2
    assert run(capsysbinary, "gen", "--dim", "3", "--mirror")[0] == 2


def test_gen_retries(capsysbinary):
    code, out, err = run(capsysbinary, "gen", "--size", "8x8", "--max-retries", "20")
    assert code == 0 and b"seed 13 retries 13" in err
    code, out, err = run(capsysbinary, "gen", "--size", "8x8", "--max-retries", "3")
    assert code == 3 and out == b""


def test_verify(tmp_path, capsysbinary):
    paths = tmp_path / "open.maze"
    paths.write_bytes(b"MAZE2 2 2\n00\n00\n")
    code, out, _ = run(capsysbinary, "verify", str(paths))
    assert code == 1 and b"invariant 1" in out

    solid = tmp_path / "solid.maze"
    solid.write_bytes(serialize(generate2d(GenConfig(2, (20, 40), 5, "solid"))))
    assert run(capsysbinary, "verify", str(solid), "--interior-only")[0] == 0
    code, out, _ = run(capsysbinary, "verify", str(solid), "--interior-only", "--json")
    assert json.loads(out)["counts"] == {"1": 0, "2": 0, "3": 0}

    bad = tmp_path / "bad.maze"
    bad.write_bytes(b"MAZE2 3 1\n01\n")
    code, _, err = run(capsysbinary, "verify", str(bad))
    assert code == 2 and b"line 2" in err
    assert run(capsysbinary, "verify", str(tmp_path / "missing"))[0] == 2


def test_stats(tmp_path, capsysbinary):
    code, out, _ = run(capsysbinary, "stats", "--size", "12x20", "--trials", "1", "--seed0", "4", "--json")
    row = json.loads(out)["rows"][0]
    m = tmp_path / "m.maze"
    m.write_bytes(serialize(generate2d(GenConfig(2, (12, 20), 4, "atari2d"))))
    _, vout, _ = run(capsysbinary, "verify", str(m), "--json")
    counts = json.loads(vout)["counts"]
    assert [row["inv1"], row["inv2"], row["inv3"]] == [counts["1"], counts["2"], counts["3"]]

    code, out, _ = run(capsysbinary, "stats", "--size", "16x30", "--trials", "25", "--json")
    doc = json.loads(out)
    assert len(doc["rows"]) == 25
    assert doc["aggregate"]["inv3"]["mean"] > 0
    assert run(capsysbinary, "stats", "--trials", "0")[0] == 2
    assert b"solvable fraction" in run(capsysbinary, "stats", "--trials", "2")[1]


def test_conflicts(capsysbinary):
    _, out, _ = run(capsysbinary, "conflicts", "--dim", "2")
    assert b"conflicting contexts: 1 of 32" in out
    _, out, _ = run(capsysbinary, "conflicts", "--dim", "3")
    assert b"conflicting contexts: 19 of 1024" in out and b"75.00% of targeted" in out
    _, out, _ = run(capsysbinary, "conflicts", "--dim", "3", "--include-prevention")
    assert b"[prevention rule involved]" in out
    _, out, _ = run(capsysbinary, "conflicts", "--dim", "3", "--json")
    doc = json.loads(out)
    assert doc["base_conflict_contexts"] == 19 and doc["prevented_fraction"] == 0.75
