"""Two motors fed through pressure-compensated flow valves.

Five parameters: pump and motor displacements plus the two valve flow
settings. Targets are 120 and 60 r/min under 600 N m on each motor.
One seeded run takes a minute or two.
"""

from fluidtabu import SearchConfig, run, two_motor_problem

problem = two_motor_problem()
res = run(problem.space, problem.schedule, problem, SearchConfig(seed=0))
for name, unit, v in zip(problem.space.names, problem.space.units, res.best.point):
    print(f"{name:22s}{v:8.1f} {unit}")
print(f"objective {res.best.value:.6f} after {res.evaluations_used} evaluations")
for k, v in problem.describe(res.best.point).items():
    print(f"  {k}: {v}")
