# %% [markdown]
# # Counting zeros with the argument principle
#
# Every nonzero root in the closed right half-plane lies in a disc of radius
# `R`, which follows from the bound `|Psi| <= Psi(0)`.  We wind `D` around the
# half disc with a small indentation at the origin and around a small full
# circle.  Stability means the pair of winding numbers is `(0, 1)`.

# %%
from majda_znd import P0, P1, Tolerances, verify_condition_D
from majda_znd.stability import SweepSpec, all_stable, parameter_sweep

report = verify_condition_D(P0)
print(report.radius_derivation)
print(report.verdict.value, report.winding_open_half_plane, report.winding_small_circle, report.evaluations)

# %% [markdown]
# Halving the indentation and doubling the samples leaves the count alone.

# %%
finer = verify_condition_D(P0, Tolerances(n0=128), indent_r=0.5 * report.indent_r)
print(finer.winding_open_half_plane, finer.winding_small_circle)

# %% [markdown]
# A 27-point sweep over `u_plus`, heat release and rate.

# %%
rows = parameter_sweep(SweepSpec([0.0, 0.2, 0.5], [2.0], [0.1, 0.5, 0.9], [0.1, 1.0, 10.0]))
print(sum(r.report.verdict.value == "StableConditionD" for r in rows), "of", len(rows), "stable")
print("all stable:", all_stable(rows))
print(verify_condition_D(P1).to_dict()["verdict"])
