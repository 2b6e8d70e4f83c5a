# %% [markdown]
# # The Lopatinski determinant in closed form
#
# All of the spectral information reduces to one tail integral `Psi(lam)`.
# After the substitution `t = exp(k xi / s)` it is a Laplace transform of a
# positive density, so `|Psi(lam)| <= Psi(0)` on the closed right half-plane.

# %%
import numpy as np

from majda_znd import P0, det_closed_form, evaluate, psi, psi_abscissa
from majda_znd.stability import coeff_floor, psi_max

value, err = psi(P0, 0.0)
print(f"Psi(0) by quadrature = {value.real:.16f} (error estimate {err:.1e})")
print(f"Psi(0) closed form   = {psi_max(P0):.16f}")

# %% [markdown]
# `Psi` converges only right of `-k c / (c + s)`, where `c = u_minus - s`.
# That is a narrower strip than the pole of `k / (k + lam)` alone suggests.

# %%
print(f"abscissa for P0: {psi_abscissa(P0):.6f}")

# %% [markdown]
# One evaluation returns `Psi`, `Z1(0)`, the jump vector and `D`.  The
# determinant is checked against `det(Z(0), jump)`.

# %%
ev = evaluate(P0, 1.0 + 2.0j)
print(ev)

# %% [markdown]
# `D` vanishes at the origin with slope equal to the coefficient floor.

# %%
h = 1e-3
slope = sum(det_closed_form(P0, h * w, 1e-13) / w for w in (1, 1j, -1, -1j)) / (4 * h)
print(f"D'(0) = {slope.real:.12f}, floor = {coeff_floor(P0):.12f}")

# %% [markdown]
# Along the imaginary axis `|Psi|` decays, and `D` grows linearly.

# %%
for y in (0.0, 1.0, 5.0, 20.0, 60.0):
    v, _ = psi(P0, 1j * y)
    print(f"lam = {y:>5}i: |Psi| = {abs(v):.6f}, |D| = {abs(det_closed_form(P0, 1j * y)):.6f}")
