# %% [markdown]
# # Cross-checking the closed form by shooting
#
# The eigenvalue problem is a 2x2 first-order system.  The decaying solution
# is seeded on the unstable eigenvector of the limiting matrix behind the
# reaction zone and carried forward to the shock.

# %%
from majda_znd import P0, P1, compare_methods, det_closed_form, det_ode
from majda_znd.evans import rectangle_grid

lam = 2.0 - 3.0j
print(det_closed_form(P0, lam))
print(det_ode(P0, lam, 40.0))

# %% [markdown]
# On a 9x9 grid in the right half-plane the two methods agree to rounding.

# %%
grid = rectangle_grid((0.0, 5.0), (-5.0, 5.0), 9, 9)
for name, p in (("P0", P0), ("P1", P1)):
    table = compare_methods(p, grid, 40.0)
    print(f"{name}: max rel {table.max_relative:.2e}, median {table.median_relative:.2e}, at 0: {table.max_absolute:.1e}")

# %% [markdown]
# Truncating the domain at `L` costs `exp(-gap L)`.  Doubling `L` is a quick
# check that the domain is long enough.

# %%
for L in (10.0, 20.0, 40.0, 80.0):
    print(L, abs(det_ode(P0, 0.1 + 4j, L) - det_closed_form(P0, 0.1 + 4j)))
