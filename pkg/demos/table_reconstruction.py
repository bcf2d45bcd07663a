"""Rebuild the 2D lookup table from the three invariants and look at what is left over.

Every context that no rule matches comes out Random. The single clash between
rules, at 01001, is settled by an override, and the extra rule *0100 -> 0 keeps
that context from ever disconnecting a path.
"""

from entombed import builtin_rules, compile_table, enumerate_conflicts

rules = builtin_rules(2)
table = compile_table(rules)

print("rules:")
for r in rules.rules:
    print(f"  {r.label}")

print("\ntable (context -> value, rules that fired):")
for e in table.entries:
    print(f"  {e.code:2d} {format(e.code, '05b')} -> {e.symbol}  {', '.join(e.rules)}")

report = enumerate_conflicts(rules)
print(f"\nconflicting contexts: {report.n_contexts}")
for c in report.conflicts:
    print(f"  {c.pattern_string}: {', '.join(c.rules)}")
