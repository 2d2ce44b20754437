"""Tabu search on the two benchmark functions.

Ten seeded runs each, started from random points. Rastrigin has a single
global minimum of -2 at the origin surrounded by a grid of local minima;
the 10-D Schwefel function hides its minimum near the corner of the box.
"""

import numpy as np

from fluidtabu import BENCHMARKS, SearchConfig, run

for name in ("rastrigin", "schwefel"):
    spec = BENCHMARKS[name]()
    values, evals = [], []
    for seed in range(10):
        res = run(spec.space, spec.schedule, spec.evaluator, SearchConfig(seed=seed))
        values.append(res.best.value)
        evals.append(res.evaluations_used)
    print(f"{name}: known minimum {spec.known_optimum_value:.4f}")
    for seed, (v, e) in enumerate(zip(values, evals)):
        print(f"  seed {seed}: {v:11.4f} after {e} evaluations")
    print(f"  mean evaluations {np.mean(evals):.0f}\n")
