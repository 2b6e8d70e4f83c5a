"""ZND travelling-wave profile of the step-ignition Majda model.

Co-moving coordinate ``xi = x - s t``.  The Neumann shock sits at ``xi = 0``;
``xi = 0`` itself belongs to the quiescent side, and :func:`profile_left_limit`
gives the burnt-side limit ``(u_star, 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SingularityError
from .numerics import DEFAULT_RTOL, integrate_ode
from .params import DetonationParams, ignition


@dataclass(frozen=True)
class ProfilePoint:
    xi: float
    u_bar: float
    z_bar: float


def profile_at(params: DetonationParams, xi: float) -> ProfilePoint:
    if xi >= 0.0:
        return ProfilePoint(xi, params.u_plus, 1.0)
    z = math.exp(xi / params.reaction_length)
    return ProfilePoint(xi, params.s + math.sqrt(params.radicand(z)), z)


def profile_left_limit(params: DetonationParams) -> ProfilePoint:
    """Value just behind the shock, ``(u_star, 1)`` at ``xi = 0-``."""
    return ProfilePoint(0.0, params.s + math.sqrt(params.radicand(1.0)), 1.0)


def profile_arrays(params: DetonationParams, xi) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`profile_at`; returns ``(u_bar, z_bar)`` arrays."""
    xi = np.asarray(xi, dtype=float)
    z = np.where(xi < 0.0, np.exp(np.minimum(xi, 0.0) / params.reaction_length), 1.0)
    rad = (params.s - params.u_plus) ** 2 - 2.0 * params.q * params.s * (1.0 - z)
    u = np.where(xi < 0.0, params.s + np.sqrt(np.maximum(rad, 0.0)), params.u_plus)
    return u, z


def profile_ode_rhs(params: DetonationParams, point: ProfilePoint, min_gap: float = 1e-12) -> tuple[float, float]:
    """Right-hand side of the profile ODE solved for ``(u', z')``.

    From ``-s z' + k phi z = 0`` and ``(u - s) u' = s q z'``.
    """
    gap = point.u_bar - params.s
    if abs(gap) < min_gap:
        raise SingularityError(f"u_bar={point.u_bar} too close to the wave speed s={params.s}")
    rate = params.k * ignition(params, point.u_bar) * point.z_bar
    return params.q * rate / gap, rate / params.s


def integrate_profile_oracle(
    params: DetonationParams,
    L: float,
    rel_tol: float = DEFAULT_RTOL,
    samples: int | Sequence[float] = 301,
) -> list[ProfilePoint]:
    """Integrate the profile ODE from ``xi = -L`` up to ``xi = 0-``.

    The start value is taken from the closed form, since the burnt
    equilibrium repels in the direction we integrate.  ``samples`` is a count
    of equispaced output points on ``[-L, 0]`` or an explicit grid.
    """
    if not L > 0:
        raise ValueError("L must be positive")
    if isinstance(samples, int):
        grid = np.linspace(-L, 0.0, samples)
    else:
        grid = np.asarray(samples, dtype=float)
    start = profile_at(params, -L)

    def rhs(xi, y):
        du, dz = profile_ode_rhs(params, ProfilePoint(xi, y[0].real, y[1].real))
        return np.array([du, dz], dtype=complex)

    # z starts exponentially small, so the absolute floor must scale with it
    atol = 1e-3 * rel_tol * min(1.0, start.z_bar)
    res = integrate_ode(rhs, [start.u_bar, start.z_bar], -L, 0.0, rel_tol=rel_tol, abs_tol=atol, t_eval=grid)
    return [ProfilePoint(float(x), float(y[0].real), float(y[1].real)) for x, y in zip(res.t_eval, res.y_eval)]


def rh_residual(params: DetonationParams) -> float:
    """Rankine-Hugoniot defect at the Neumann shock.

    Returns ``|s (u_plus - u_star) - (u_plus^2 - u_star^2)/2|``; a mismatch of
    the reactant fraction across the shock is added to it.
    """
    s, up, us = params.s, params.u_plus, params.u_star
    mass = abs(s * (up - us) - (up * up - us * us) / 2.0)
    z_jump = abs(profile_left_limit(params).z_bar - profile_at(params, 0.0).z_bar)
    return mass + z_jump


def conserved_quantity(params: DetonationParams, point: ProfilePoint) -> float:
    """``s (u + q z) - u^2/2``, constant along the profile on each smooth piece."""
    return params.s * (point.u_bar + params.q * point.z_bar) - 0.5 * point.u_bar ** 2
