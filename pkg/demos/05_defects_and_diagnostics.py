#!/usr/bin/env python3
"""One-step defects and the diagnostic norms.

Part 1 measures the L2 defect of a single filtered step against a
reference flow that keeps the same cutoff but steps 64 times finer.
For s-smooth rough data the defect shrinks like tau^{1 + s/2}, one
order better than the global error.

Part 2 evaluates the weighted space-time norm of a short sequence of
fields (the discrete analogue of a dispersive space-time norm, with
weight <k>^s <d_tau(sigma - |k|^2)>^b), demonstrating its monotonicity
in both indices and its (0,0) identity with the l2_tau L2 norm.

Part 3 queries the admissible-parameter checker across dimensions.
"""

from dataclasses import replace

from torusnls import (
    RegimeQuery,
    RoughDataSpec,
    SequenceSample,
    StepperConfig,
    discrete_bourgain_norm,
    evolve,
    lp_tau_norm,
    make_grid,
    regime_check,
    rough_data,
    run_local_error,
    load_plan,
)

import os

here = os.path.dirname(__file__) or "."

# Part 1: one-step defect orders (reduced ladder for speed).
plan = load_plan(os.path.join(here, "..", "plans", "desk_d1_local_error.json"))
plan = replace(plan, seeds=(0,))
report = run_local_error(plan)
print("one-step defect against the fixed-cutoff reference (L2 proxy):")
for c in report.curves:
    print(f"  s={c.s:g}: fitted slope {c.slope:.3f}, predicted {c.theoretical_slope:g}")
    for tau, d in c.samples:
        print(f"     tau={tau:<10g} mean defect {d:.3e}")

# Part 2: space-time norms of an error-style sequence.
grid = make_grid(1, 64)
tau = 2.0 ** -5
cfg = StepperConfig(grid=grid, tau=tau, mu=-1)
u0 = rough_data(RoughDataSpec(grid=grid, s=1.0, seed=9))
traj = evolve(u0, cfg, 7)
seq = SequenceSample(tau=tau, fields=traj.fields)
print(f"\nsequence of {seq.length} snapshots, tau = {tau:g}:")
print(f"  l2_tau L2 norm           : {lp_tau_norm(seq, 2, 0.0):.6e}")
print(f"  weighted norm (s=0, b=0) : {discrete_bourgain_norm(seq, 0.0, 0.0):.6e}")
print("  monotonicity in (s, b):")
for s in (0.0, 0.5, 1.0):
    row = [discrete_bourgain_norm(seq, s, b) for b in (-0.5, 0.0, 0.5, 1.0)]
    print(f"    s={s:<4g} " + "  ".join(f"{v:.6e}" for v in row))

# Part 3: where the order-s/2 theory applies.
print("\nadmissible smoothness window per dimension (s0 must exceed max(0, d/2 - 1)):")
for d in range(1, 6):
    r = regime_check(RegimeQuery(d, 1.0))
    status = "admissible" if r.admissible else "inadmissible"
    print(f"  d={d}: s0=1 is {status}; b0 interval {r.b0_interval}, "
          f"empty={r.b0_interval_empty}")
r = regime_check(RegimeQuery(3, 0.7, b0=0.56))
print(f"  d=3, s0=0.7: case {r.table1_row.case} of the parameter table, "
      f"p={r.table1_row.p:g}, q={r.table1_row.q:.4f}; "
      f"b0=0.56 admissible: {r.b0_admissible}, b1={r.b1}")
