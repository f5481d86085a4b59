"""
Sharp bounds on G/A when some numbers are known
===============================================

Evaluate the sharp bound in both modes, see which completion attains it,
and check that the weighted family of bounds bottoms out at the same value.
"""

import numpy as np

from amgm_bounds import (
    KnownRatios,
    extremal_completion,
    mean_ratio,
    objective_f,
    optimal_lambdas_am,
    validate,
    xia_bound,
)

# Ten positive numbers; one is 5 times their arithmetic mean, another equals it.
inst = KnownRatios(10, "am", [5, 1])
print(validate(inst))
report = xia_bound(inst)
print("bound on G/A:", report.value)

# The bound is attained when the eight unknown numbers are all equal.
completion = extremal_completion(inst)
print("extremal completion:", completion.values)
print("its G/A:", mean_ratio(completion.values))

# Same question, but the known numbers are measured against the geometric mean.
gm = KnownRatios(10, "gm", [5, 1])
print("GM-mode bound:", xia_bound(gm).value)
print("GM-mode completion:", extremal_completion(gm).values)

# Any positive weight vector gives a valid (looser) bound; the optimum is sharp.
rng = np.random.default_rng(0)
best = optimal_lambdas_am(inst)
print("optimal weights:", best, "->", objective_f(inst, best))
for _ in range(3):
    lam = best * np.exp(rng.normal(scale=0.3, size=2))
    print("weights", lam.round(4), "->", objective_f(inst, lam))

# Infeasible instances come back with a reason instead of a number.
print(validate(KnownRatios(3, "am", [2, 2])))
