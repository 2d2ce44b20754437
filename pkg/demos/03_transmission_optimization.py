"""Choose pump and motor displacements for 300 r/min at 100 N m.

Each candidate design is simulated for five seconds; the objective is the
squared steady speed error scaled by the share of pump flow lost over the
relief valve. Writes the speed trace of the best design to a CSV.
"""

import sys

from fluidtabu import SearchConfig, run, transmission_problem
from fluidtabu.experiment import export_trace

problem = transmission_problem()
res = run(problem.space, problem.schedule, problem, SearchConfig(seed=0))
d_p, d_m = res.best.point
print(f"pump {d_p:.0f} cc/rev, motor {d_m:.0f} cc/rev after {res.evaluations_used} evaluations")
for k, v in problem.describe(res.best.point).items():
    print(f"  {k}: {v}")

out = sys.argv[1] if len(sys.argv) > 1 else "transmission_best.csv"
trace = problem.simulate(problem.build(res.best.point))
export_trace(trace, out, interval=0.01)
print(f"trace written to {out}")
