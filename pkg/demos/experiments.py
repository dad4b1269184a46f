"""Small versions of the equivariance and row-count harnesses."""

import json

from prismcanon import collect_rbound, run_equivariance

rep = run_equivariance(graphs=20, trials=3, seed=0)
print(f"equivariance: {rep.failures} failures in {rep.graphs * rep.trials} trials, max deviation {rep.max_deviation:.1e}")

stats = collect_rbound(count=50, n=16, seed=0)
print(json.dumps(stats.summary(), indent=2))
