"""Walk through the 3D rule set: base conflicts, what the prevention rules buy, and what remains.

A prevention rule works one step early. It fixes the value of the cell that
later shows up as ``k`` in the conflicting context, so the bad context cannot
form. That only works when nothing else has already decided that cell, and
the report weighs each prevention by how often it is left unopposed.
"""

from entombed import builtin_rules, enumerate_conflicts

rules = builtin_rules(3)
base = enumerate_conflicts(rules)
print(f"{base.n_contexts} of 1024 contexts are claimed by disagreeing invariant rules")
for c in base.conflicts:
    print(f"  {c.pattern_string}  {', '.join(c.rules)}")

print("\nprevention:")
for p in base.prevention:
    rule = p.rule or "(none applies)"
    print(f"  {p.pattern_string}  via {rule:<28} unopposed in {p.unopposed}/{p.completions}")

print(f"\nprevented {base.prevented:.1f} of {base.targeted} targeted ({base.prevented_fraction:.0%})")
print(f"residual: {base.residual_contexts:.1f} contexts, {base.residual_fraction:.2%} of the table")

full = enumerate_conflicts(rules, include_prevention=True)
print(f"\ncounting the prevention rules too: {full.n_contexts} conflicting contexts")
