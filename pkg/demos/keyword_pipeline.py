"""From attribute bits to per-item keywords, scored against human judgments.

A naming table maps bit indices to human-readable names ("striped",
"metallic", ...).  Names are compared case-insensitively, duplicate-named
bits are OR-merged, and each item emits the keywords whose bits fire.
Hit rate is the fraction of emitted (item, keyword) pairs a human judge
marked suitable.
"""

import numpy as np

from attrmeaning import (
    NamingTable,
    TruthTable,
    evaluate_hit_rate,
    generate_keywords,
    merge_duplicates,
    nameable_count,
)

# Six clips, five discovered bits.  An annotator could only name four of
# them -- bit 4 stays anonymous and never reaches the keyword stage.
Z = np.array(
    [
        [+1, -1, +1, -1, +1],
        [-1, +1, -1, -1, -1],
        [+1, +1, -1, +1, +1],
        [-1, -1, -1, -1, +1],
        [+1, -1, +1, +1, -1],
        [-1, -1, -1, +1, -1],
    ],
    dtype=np.int8,
)
names = NamingTable({0: "Running", 1: "carrying bag", 2: "running", 3: "standing still"})
print("bits:", Z.shape[1], " nameable:", nameable_count(names))

# bits 0 and 2 both mean "running" (case-insensitive), so they merge: the
# merged bit fires when either original fires, and keeps the first surface
# form ("Running").
Zm, merged = merge_duplicates(Z, names)
print("after merge:", Zm.shape[1], "bits (the unnamed one survives), names:",
      [merged.entries[i] for i in sorted(merged.entries)])

clips = ["clip-%02d" % i for i in range(1, 7)]
report = generate_keywords(Z, names, item_ids=clips)
print()
print("vocabulary:", list(report.vocabulary))
for clip in clips:
    print("  %s: %s" % (clip, ", ".join(report.items[clip]) or "(none)"))

# merge-first and direct generation agree -- emission is per name, not per bit
assert generate_keywords(Zm, merged, item_ids=clips).items == report.items

# --- human evaluation -------------------------------------------------------
# A judge looks at every emitted (clip, keyword) pair and marks it suitable
# (1) or not (0).  Every emitted pair needs a judgment; missing ones raise.

judgments = {}
for clip, kws in report.items.items():
    for kw in kws:
        judgments[(clip, kw)] = 1
# the judge disagrees with a few emissions
judgments[("clip-03", "carrying bag")] = 0
judgments[("clip-05", "standing still")] = 0

actions = {
    "clip-01": "walk", "clip-02": "walk", "clip-03": "run",
    "clip-04": "run", "clip-05": "fight", "clip-06": "fight",
}
truth = TruthTable(judgments, actions=actions)
hits = evaluate_hit_rate(report, truth)

print()
print("overall hit rate: %.3f  (%d suitable / %d emitted)"
      % (hits.overall, hits.suitable, hits.emitted))
print("per keyword:")
for kw in report.vocabulary:
    rate = hits.per_keyword[kw]
    print("  %-16s %s" % (kw, "never emitted" if rate is None else "%.3f" % rate))
print("per action:")
for action in sorted(set(actions.values())):
    print("  %-16s %.3f" % (action, hits.per_action[action]))
