"""Wildcard rules, the builtin rule sets, and lookup-table compilation.

A rule pattern is a string over ``0``, ``1`` and ``*`` that reads left to
right in context order (``abcde`` in 2D, ``abcdefghjk`` in 3D).  Context
codes pack the same digits MSB-first, so pattern ``01001`` is code 9.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .grid import code_to_string, offsets, variables

PATH = 0
WALL = 1
RANDOM_ENTRY = 2

BASE_KINDS = ("inv1", "inv2", "inv3")
PREVENTION_KINDS = ("added", "prevent")


@dataclass(frozen=True)
class Rule:
    pattern: str
    output: int
    kind: str

    def __post_init__(self):
        if not self.pattern or set(self.pattern) - set("01*"):
            raise ValueError(f"bad rule pattern {self.pattern!r}")
        if self.output not in (0, 1):
            raise ValueError("rules emit 0 or 1; Random is the absence of a rule")
        width = len(self.pattern)
        mask = value = 0
        for n, ch in enumerate(self.pattern):
            if ch != "*":
                bit = 1 << (width - 1 - n)
                mask |= bit
                if ch == "1":
                    value |= bit
        object.__setattr__(self, "_mask", mask)
        object.__setattr__(self, "_value", value)

    @property
    def label(self) -> str:
        return f"{self.kind}:{self.pattern}->{self.output}"

    @property
    def is_base(self) -> bool:
        return self.kind in BASE_KINDS

    def matches(self, code: int) -> bool:
        return code & self._mask == self._value

    def fixed(self) -> Dict[int, str]:
        """Positions (0-based, context order) this pattern pins down."""
        return {n: ch for n, ch in enumerate(self.pattern) if ch != "*"}


@dataclass(frozen=True)
class RuleSet:
    dimension: int
    rules: Tuple[Rule, ...]
    overrides: Tuple[Tuple[int, int], ...] = ()
    name: str = "custom"

    def __post_init__(self):
        width = self.width
        for r in self.rules:
            if len(r.pattern) != width:
                raise ValueError(f"rule {r.label} has length {len(r.pattern)}, expected {width}")
        for code, value in self.overrides:
            outs = {r.output for r in self.rules if r.matches(code)}
            if outs != {0, 1}:
                raise ValueError(
                    f"override {code_to_string(code, width)} does not resolve a rule conflict"
                )
            if value not in (0, 1):
                raise ValueError("override values are 0 or 1")

    @property
    def width(self) -> int:
        return len(variables(self.dimension))

    @property
    def size(self) -> int:
        return 1 << self.width

    def base(self) -> "RuleSet":
        """The invariant rules alone, without added/prevention rules or overrides."""
        rules = tuple(r for r in self.rules if r.is_base)
        return RuleSet(self.dimension, rules, (), self.name + "-base")

    def prevention_rules(self) -> Tuple[Rule, ...]:
        return tuple(r for r in self.rules if not r.is_base)


def _rules(kind: str, rows: Sequence[Tuple[str, int]]) -> List[Rule]:
    return [Rule(p, o, kind) for p, o in rows]


def builtin_rules_2d() -> RuleSet:
    rules = (
        _rules("inv1", [("*000*", 1), ("*111*", 0)])
        + _rules("inv2", [("**010", 1), ("**101", 0), ("010**", 1), ("101**", 0)])
        # **101 -> 0 also enforces connectivity; it is not repeated here.
        + _rules("inv3", [("*1001", 0)])
        + _rules("added", [("*0100", 0)])
    )
    return RuleSet(2, tuple(rules), ((0b01001, 1),), "builtin-2d")


def builtin_rules_3d() -> RuleSet:
    rules = (
        _rules(
            "inv1",
            [
                ("00*******0", 1),
                ("11*******1", 0),
                ("******0*00", 1),
                ("******1*11", 0),
                ("*0**0*0***", 1),
                ("*1**1*1***", 0),
            ],
        )
        + _rules(
            "inv2",
            [
                ("01000*****", 1),
                ("10111*****", 0),
                ("****00100*", 1),
                ("****11011*", 0),
            ],
        )
        + _rules(
            "inv3",
            [
                ("00111****1", 0),
                ("10110*1***", 0),
                ("00110*1**1", 0),
            ],
        )
        + _rules(
            "prevent",
            [
                ("*11***01**", 0),
                ("*00***10**", 1),
                ("*01***11**", 0),
                ("*10***00**", 1),
                ("**011*01**", 0),
            ],
        )
    )
    return RuleSet(3, tuple(rules), (), "builtin-3d")


def builtin_rules(dimension: int) -> RuleSet:
    if dimension == 2:
        return builtin_rules_2d()
    if dimension == 3:
        return builtin_rules_3d()
    raise ValueError(f"no builtin rule set for dimension {dimension}")


# --- compilation -----------------------------------------------------------


@dataclass(frozen=True)
class TableEntry:
    code: int
    value: int  # PATH, WALL or RANDOM_ENTRY
    rules: Tuple[str, ...]
    conflicted: bool = False
    overridden: bool = False
    # invariant rules alone disagree here, whatever the final value
    base_conflict: bool = False

    @property
    def symbol(self) -> str:
        return "R" if self.value == RANDOM_ENTRY else str(self.value)


@dataclass(frozen=True)
class LookupTable:
    dimension: int
    entries: Tuple[TableEntry, ...]
    table_id: str = "custom"
    values: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(e.value for e in self.entries))

    @property
    def width(self) -> int:
        return len(variables(self.dimension))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, code: int) -> TableEntry:
        return self.entries[code]

    def lookup(self, pattern: str) -> TableEntry:
        return self.entries[int(pattern, 2)]

    def random_codes(self) -> List[int]:
        return [e.code for e in self.entries if e.value == RANDOM_ENTRY]

    def conflicted_codes(self) -> List[int]:
        return [e.code for e in self.entries if e.conflicted]

    def base_conflict_codes(self) -> List[int]:
        return [e.code for e in self.entries if e.base_conflict]


def compile_table(rs: RuleSet) -> LookupTable:
    """Compile a rule set into one entry per concrete context.

    Overrides win; otherwise agreeing rules give the value; no matching rule
    gives Random; disagreeing rules give the earliest-listed rule's output
    and flag the entry as conflicted.
    """
    overrides = dict(rs.overrides)
    entries = []
    for code in range(rs.size):
        matching = [r for r in rs.rules if r.matches(code)]
        labels = tuple(r.label for r in matching)
        outs = {r.output for r in matching}
        base_outs = {r.output for r in matching if r.is_base}
        base_conflict = len(base_outs) > 1
        if code in overrides:
            entries.append(TableEntry(code, overrides[code], labels + ("override",), False, True, base_conflict))
        elif not matching:
            entries.append(TableEntry(code, RANDOM_ENTRY, ()))
        elif len(outs) == 1:
            entries.append(TableEntry(code, matching[0].output, labels, False, False, base_conflict))
        else:
            entries.append(TableEntry(code, matching[0].output, labels, True, False, base_conflict))
    return LookupTable(rs.dimension, tuple(entries), rs.name)


_TABLE_CACHE: Dict[int, LookupTable] = {}


def builtin_table(dimension: int) -> LookupTable:
    """Compiled builtin table, cached per dimension (tables are immutable)."""
    if dimension not in _TABLE_CACHE:
        _TABLE_CACHE[dimension] = compile_table(builtin_rules(dimension))
    return _TABLE_CACHE[dimension]


def table_entry(table: LookupTable, code: int, rng) -> int:
    value = table.values[code]
    if value == RANDOM_ENTRY:
        return rng.next_bit()
    return value


# --- conflict analysis -----------------------------------------------------


@dataclass(frozen=True)
class Conflict:
    code: int
    pattern_string: str
    rules: Tuple[str, ...]
    clashing_pairs: int
    resolved_by_override: bool = False
    involves_prevention: bool = False

    def to_dict(self):
        return {
            "code": self.code,
            "pattern_string": self.pattern_string,
            "rules": list(self.rules),
            "clashing_pairs": self.clashing_pairs,
            "resolved_by_override": self.resolved_by_override,
            "involves_prevention": self.involves_prevention,
        }


@dataclass(frozen=True)
class PreventionRecord:
    """How well one base conflict is kept from arising.

    ``cell`` is the earlier-generated context cell whose own placement the
    prevention ``rule`` forces to the opposite value.  ``weight`` is the share
    of that cell's possible contexts where no invariant rule opposes the
    prevention rule.
    """

    code: int
    pattern_string: str
    cell: Optional[str]
    rule: Optional[str]
    unopposed: int
    completions: int

    @property
    def weight(self) -> float:
        return self.unopposed / self.completions if self.completions else 0.0

    def to_dict(self):
        return {
            "code": self.code,
            "pattern_string": self.pattern_string,
            "cell": self.cell,
            "rule": self.rule,
            "unopposed": self.unopposed,
            "completions": self.completions,
            "weight": self.weight,
        }


PREVENTION_METHOD = (
    "A base conflict context C is targeted when some earlier-generated cell X of C "
    "(one of its context cells) has a prevention rule P whose fixed positions are all "
    "determined by C and whose output differs from C[X]. Over every completion of the "
    "unknown positions of X's own context, P is effective when no invariant rule "
    "demands C[X] there. The weight of C is the effective share (best X, P). "
    "prevented = sum of weights; prevented_fraction = prevented / targeted; "
    "residual = base conflicts - prevented."
)


@dataclass
class ConflictReport:
    dimension: int
    include_prevention: bool
    table_size: int
    conflicts: List[Conflict]
    base_conflicts: List[Conflict]
    context_rule_pairs: int
    pattern_pairs: List[Tuple[str, str]]
    prevention: List[PreventionRecord]
    method: str = PREVENTION_METHOD

    @property
    def n_contexts(self) -> int:
        return len(self.conflicts)

    @property
    def n_base(self) -> int:
        return len(self.base_conflicts)

    @property
    def targeted(self) -> int:
        return sum(1 for p in self.prevention if p.rule is not None)

    @property
    def prevented(self) -> float:
        return sum(p.weight for p in self.prevention)

    @property
    def prevented_fraction(self) -> Optional[float]:
        return self.prevented / self.targeted if self.targeted else None

    @property
    def prevented_fraction_all(self) -> Optional[float]:
        return self.prevented / self.n_base if self.n_base else None

    @property
    def residual_contexts(self) -> float:
        unresolved = sum(1 for c in self.base_conflicts if not c.resolved_by_override)
        return unresolved - self.prevented

    @property
    def residual_fraction(self) -> float:
        return self.residual_contexts / self.table_size

    def unprevented(self) -> List[PreventionRecord]:
        return [p for p in self.prevention if p.weight < 1.0]

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "include_prevention": self.include_prevention,
            "table_size": self.table_size,
            "conflict_contexts": self.n_contexts,
            "context_rule_pairs": self.context_rule_pairs,
            "pattern_pairs": len(self.pattern_pairs),
            "base_conflict_contexts": self.n_base,
            "targeted": self.targeted,
            "prevented": self.prevented,
            "prevented_fraction": self.prevented_fraction,
            "prevented_fraction_all": self.prevented_fraction_all,
            "residual_contexts": self.residual_contexts,
            "residual_fraction": self.residual_fraction,
            "method": self.method,
            "conflicts": [c.to_dict() for c in self.conflicts],
            "prevention": [p.to_dict() for p in self.prevention],
        }


def _find_conflicts(rs: RuleSet, rules: Sequence[Rule]) -> List[Conflict]:
    overrides = dict(rs.overrides)
    found = []
    for code in range(rs.size):
        matching = [r for r in rules if r.matches(code)]
        if len({r.output for r in matching}) < 2:
            continue
        pairs = sum(1 for x, y in itertools.combinations(matching, 2) if x.output != y.output)
        found.append(
            Conflict(
                code,
                code_to_string(code, rs.width),
                tuple(r.label for r in matching),
                pairs,
                code in overrides,
                any(not r.is_base for r in matching),
            )
        )
    return found


def _overlap(p: Rule, q: Rule) -> bool:
    return p.output != q.output and all(a == "*" or b == "*" or a == b for a, b in zip(p.pattern, q.pattern))


def _predecessor_views(dimension: int):
    """For each context cell X, map X's context variables onto the current context.

    Returns ``{X: {var_of_X_context: var_of_current_context}}`` covering the
    positions both contexts share.
    """
    offs = offsets(dimension)
    where = {off: name for name, off in offs.items()}
    views = {}
    for cell, cell_off in offs.items():
        shared = {}
        for var, var_off in offs.items():
            pos = tuple(a + b for a, b in zip(cell_off, var_off))
            if pos in where:
                shared[var] = where[pos]
        views[cell] = shared
    return views


def _prevention_record(rs: RuleSet, conflict: Conflict, views) -> PreventionRecord:
    names = variables(rs.dimension)
    index = {v: n for n, v in enumerate(names)}
    ctx = conflict.pattern_string
    base = [r for r in rs.rules if r.is_base]
    best = PreventionRecord(conflict.code, ctx, None, None, 0, 0)
    for cell, shared in views.items():
        need = int(ctx[index[cell]])
        known = {index[var]: ctx[index[cur]] for var, cur in shared.items()}
        unknown = [n for n in range(len(names)) if n not in known]
        for rule in rs.prevention_rules():
            if rule.output == need:
                continue
            if any(known.get(pos) != ch for pos, ch in rule.fixed().items()):
                continue
            opposers = [r for r in base if r.output == need]
            unopposed = 0
            for bits in itertools.product("01", repeat=len(unknown)):
                digits = dict(known)
                digits.update(zip(unknown, bits))
                code = int("".join(digits[n] for n in range(len(names))), 2)
                if not any(r.matches(code) for r in opposers):
                    unopposed += 1
            rec = PreventionRecord(conflict.code, ctx, cell, rule.label, unopposed, 1 << len(unknown))
            if best.rule is None or rec.weight > best.weight:
                best = rec
    return best


def enumerate_conflicts(rs: RuleSet, include_prevention: bool = False) -> ConflictReport:
    """Every context where matching rules disagree, plus the prevention analysis.

    With ``include_prevention`` false only the invariant rules are considered;
    otherwise added/prevention rules take part too, which exposes the contexts
    where prevention rules themselves clash with invariant rules.
    """
    base_rules = [r for r in rs.rules if r.is_base]
    chosen = list(rs.rules) if include_prevention else base_rules
    base_conflicts = _find_conflicts(rs, base_rules)
    conflicts = _find_conflicts(rs, chosen) if include_prevention else list(base_conflicts)
    pattern_pairs = [(p.label, q.label) for p, q in itertools.combinations(chosen, 2) if _overlap(p, q)]
    views = _predecessor_views(rs.dimension)
    prevention = [_prevention_record(rs, c, views) for c in base_conflicts if not c.resolved_by_override]
    return ConflictReport(
        dimension=rs.dimension,
        include_prevention=include_prevention,
        table_size=rs.size,
        conflicts=conflicts,
        base_conflicts=base_conflicts,
        context_rule_pairs=sum(c.clashing_pairs for c in conflicts),
        pattern_pairs=pattern_pairs,
        prevention=prevention,
    )
