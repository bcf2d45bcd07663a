import itertools

import pytest

from entombed.grid import unpack
from entombed.rng import SplitMix64
from entombed.rules import (
    PATH,
    RANDOM_ENTRY,
    WALL,
    Rule,
    RuleSet,
    builtin_rules_2d,
    builtin_rules_3d,
    compile_table,
    enumerate_conflicts,
    table_entry,
)
from reference import ORACLE_ADDED_PATTERN, ORACLE_OVERRIDE, forbidden_outputs_2d

T2 = compile_table(builtin_rules_2d())
T3 = compile_table(builtin_rules_3d())


def _matches(pattern, ctx):
    return all(p == "*" or p == c for p, c in zip(pattern, ctx))


def test_builtin_2d_contents():
    rs = builtin_rules_2d()
    assert [(r.pattern, r.output) for r in rs.rules] == [
        ("*000*", 1), ("*111*", 0),
        ("**010", 1), ("**101", 0), ("010**", 1), ("101**", 0),
        ("*1001", 0),
        ("*0100", 0),
    ]
    assert rs.overrides == ((0b01001, 1),)


def test_builtin_3d_contents():
    rs = builtin_rules_3d()
    kinds = [r.kind for r in rs.rules]
    assert kinds.count("inv1") == 6 and kinds.count("inv2") == 4 and kinds.count("inv3") == 3
    assert kinds.count("prevent") == 5 and len(rs.rules) == 18
    assert (rs.rules[0].pattern, rs.rules[0].output) == ("00*******0", 1)
    assert (rs.rules[13].pattern, rs.rules[13].output) == ("*11***01**", 0)


def test_rule_validation():
    with pytest.raises(ValueError):
        Rule("01x**", 1, "inv1")
    with pytest.raises(ValueError):
        RuleSet(2, (Rule("0**", 1, "inv1"),))
    # an override needs a genuine clash to resolve
    with pytest.raises(ValueError):
        RuleSet(2, (Rule("*000*", 1, "inv1"),), ((0, 1),))


def test_compile_stated_entries():
    assert T2.lookup("00100").value == PATH
    assert T2.lookup("00100").rules == ("added:*0100->0",)
    e = T2.lookup("01001")
    assert e.value == WALL and e.overridden and not e.conflicted
    assert T2.lookup("00000").value == WALL


def test_random_set_by_brute_force():
    rs = builtin_rules_2d()
    brute = []
    for code in range(32):
        ctx = format(code, "05b")
        if not any(_matches(r.pattern, ctx) for r in rs.rules) and ctx not in ORACLE_OVERRIDE:
            brute.append(ctx)
    assert brute == ["00011", "00110", "00111", "01100", "10011", "11000", "11011", "11100"]
    assert [format(c, "05b") for c in T2.random_codes()] == brute


def test_table_matches_window_oracle():
    added_pattern, added_value = ORACLE_ADDED_PATTERN
    for code in range(32):
        ctx = format(code, "05b")
        forbidden = forbidden_outputs_2d(*unpack(code, 5))
        if ctx in ORACLE_OVERRIDE:
            assert forbidden == {0, 1}
            forbidden = {1 - ORACLE_OVERRIDE[ctx]}
        elif _matches(added_pattern, ctx):
            forbidden = forbidden | {1 - added_value}
        value = T2[code].value
        table_forbids = set() if value == RANDOM_ENTRY else {1 - value}
        assert table_forbids == forbidden, ctx


def test_provenance_consistency():
    for table in (T2, T3):
        assert len(table) == 1 << table.width
        for e in table.entries:
            assert bool(e.rules) == (e.value != RANDOM_ENTRY)


def test_compile_is_deterministic():
    assert compile_table(builtin_rules_3d()) == T3
    assert compile_table(builtin_rules_2d()).values == T2.values


def test_unresolved_conflicts_take_earliest_rule():
    for e in T3.entries:
        if e.conflicted:
            first = next(r for r in builtin_rules_3d().rules if r.label == e.rules[0])
            assert e.value == first.output


def test_table_entry():
    rng = SplitMix64(0)
    assert table_entry(T2, 0b11110, rng) == 0
    assert rng.draws == 0
    # find a seed whose first bit is 1
    seed = next(s for s in range(100) if SplitMix64(s).next_bit() == 1)
    assert table_entry(T2, 0b11011, SplitMix64(seed)) == 1
    # 3D: a = b = k = 1 and nothing opposing
    code = int("1110100001", 2)
    assert T3[code].value == PATH and not T3[code].conflicted
    assert table_entry(T3, code, SplitMix64(1)) == 0


def test_3d_abk_walls_force_path():
    for code in range(1024):
        ctx = format(code, "010b")
        if ctx[0] == ctx[1] == ctx[9] == "1" and not T3[code].conflicted:
            assert T3[code].value == PATH, ctx


def test_conflicts_2d():
    rep = enumerate_conflicts(builtin_rules_2d())
    assert [c.pattern_string for c in rep.conflicts] == ["01001"]
    assert set(rep.conflicts[0].rules) == {"inv2:010**->1", "inv3:*1001->0"}
    assert rep.conflicts[0].resolved_by_override
    assert rep.residual_contexts == 0
    assert enumerate_conflicts(builtin_rules_2d(), True).n_contexts == 1


def test_conflicts_3d_reported_family():
    rep = enumerate_conflicts(builtin_rules_3d())
    found = {c.pattern_string for c in rep.conflicts}
    family = {ctx for ctx in ("".join(p) for p in itertools.product("01", repeat=10)) if _matches("11**001001", ctx)}
    assert family <= found
    for c in rep.conflicts:
        if c.pattern_string in family:
            assert set(c.rules) == {"inv1:11*******1->0", "inv2:****00100*->1"}


def test_conflict_report_is_complete():
    # every context where matching rules disagree is listed, for both rule scopes
    rs = builtin_rules_3d()
    for include in (False, True):
        rules = rs.rules if include else [r for r in rs.rules if r.is_base]
        brute = [
            code for code in range(1024)
            if len({r.output for r in rules if _matches(r.pattern, format(code, "010b"))}) > 1
        ]
        assert [c.code for c in enumerate_conflicts(rs, include).conflicts] == brute


def test_prevention_rules_clash_with_invariant_rules():
    rep = enumerate_conflicts(builtin_rules_3d(), True)
    assert any(c.involves_prevention for c in rep.conflicts)
    assert rep.n_contexts > enumerate_conflicts(builtin_rules_3d()).n_contexts


def test_prevention_records():
    rep = enumerate_conflicts(builtin_rules_3d())
    by_ctx = {p.pattern_string: p for p in rep.prevention}
    rec = by_ctx["1100001001"]
    assert rec.cell == "k" and rec.rule == "prevent:*11***01**->0"
    assert (rec.unopposed, rec.completions) == (48, 64)
    # the *01100100* family has no prevention rule that applies statically
    assert by_ctx["0011001001"].rule is None
