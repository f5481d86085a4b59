"""
Checking the closed form numerically
====================================

The oracle maximizes G/A directly over all completions of an instance,
without using the closed form.  Agreement certifies the bound is both
sound (never exceeded) and sharp (attained).
"""

from amgm_bounds import KnownRatios, OracleConfig, maximize_ratio, soundness_sweep

for inst in [KnownRatios(10, "am", [5, 1]), KnownRatios(10, "gm", [5, 1]), KnownRatios(7, "gm", [0.2, 3, 1.5])]:
    res = maximize_ratio(inst, OracleConfig(restarts=8, seed=1))
    print(inst)
    print("  closed form :", res.closed_form_bound)
    print("  oracle max  :", res.max_ratio, "converged" if res.converged else "NOT converged")
    print("  free block  :", res.argmax.free_block.round(6))

    # Random completions never exceed the bound.
    sweep = soundness_sweep(inst, 100_000, seed=2)
    print("  violations in 1e5 random completions:", sweep.violations,
          "(largest ratio seen", sweep.worst_ratio, ")")
