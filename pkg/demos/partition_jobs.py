"""Split one search among jobs and watch how the crossings are dealt out.

Every job rebuilds the tree above the split depth and keeps only its own
crossings; unsatisfiable verdicts need every job, satisfiable ones only one.
"""

import io

from ltlpar import JobSpec, gen, GenConfig, orchestrate, render, run_job, solve
from ltlpar.partition import CrossingCounter

f = gen(GenConfig(20, 123))
d, n = 20, 4
print(render(f))

cc = CrossingCounter(d)
serial = solve(f, hooks=[cc])
print(f"serial: {serial.outcome}, {serial.stats.vertices_expanded} vertices, {cc.width} crossings of depth {d}")

for j in range(0, n + 1):
    out = run_job(f, JobSpec(j, n, d))
    kept = out.decline.kept
    print(f"job {j}/{n}@{d}: {out.outcome:14s} {out.stats.vertices_expanded:7d} vertices, "
          f"keeps {len(kept)} crossings, {out.decline.below} below the split")

print("vote:", end=" ")
v = orchestrate(f, n, d, workers=n, report=io.StringIO())
print(v.outcome)
