"""Record one serial trace, then ask how well different splits would have done."""

from ltlpar import gen, GenConfig
from ltlpar.profiler import estimate_jobs, format_sweep, measure_overhead, record_trace, sweep, width_profile

f = gen(GenConfig(20, 123))
verdict, trace = record_trace(f)
print(f"{verdict.outcome}: {len(trace)} vertices traced")

widths = width_profile(trace)
print("widest depth:", max(widths, key=widths.get), "with", max(widths.values()), "vertices")

for d in (8, 16, 24, 32):
    print(f"job 0 at split depth {d}: {measure_overhead(f, d)[1]} vertices of pure overhead")

est = estimate_jobs(trace, 8, 24)
print("8 jobs at depth 24, predicted per-job work:", est.per_job_cost)
print(f"predicted makespan {est.makespan} vs serial {len(trace)}")

print(format_sweep(sweep({"f": trace}, [1, 2, 4, 8], [12, 18, 24, 30]), [1, 2, 4, 8], [12, 18, 24, 30]))
