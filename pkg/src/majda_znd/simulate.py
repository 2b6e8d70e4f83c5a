"""Finite-volume simulation of the inviscid model in the co-moving frame.

In ``xi = x - s t`` the system reads

    w_t + (u^2/2 - s w)_xi = 0,      w = u + q z,
    z_t - s z_xi = -k phi(u) z,

so the ZND profile is a steady state.  One time step is a Strang splitting:
half a reaction step (exact exponential decay of ``z`` at fixed ``w``), a
transport step (local Lax-Friedrichs for ``w``, upwind for ``z``), and
another half reaction step.

Boundaries: at the right end both characteristic speeds ``u_plus - s`` and
``-s`` are negative, so the quiescent state ``(u_plus, 1)`` is imposed as
inflow.  At the left end the cells are extrapolated (zero gradient).
This is a plausibility check for orbital stability, nothing more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from .errors import CflViolation, GridError, NonFiniteState
from .params import DetonationParams
from .profile import profile_arrays


@dataclass(frozen=True)
class GridSpec:
    n_cells: int = 2000
    x_left: float = -20.0
    x_right: float = 5.0

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.n_cells

    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class Perturbation:
    amplitude: float = 0.05
    width: float = 1.0
    center: float = -3.0

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        return self.amplitude * np.exp(-(((xi - self.center) / self.width) ** 2))


@dataclass
class SimState:
    xi: np.ndarray
    u: np.ndarray
    z: np.ndarray
    t: float
    dx: float
    cfl: float
    mass0: float = 0.0
    boundary_flux: float = 0.0  # time integral of (flux out right - flux in left)
    steps: int = 0

    def mass(self, q: float) -> float:
        return float(np.sum(self.u + q * self.z) * self.dx)

    def mass_residual(self, q: float) -> float:
        return abs(self.mass(q) - self.mass0 + self.boundary_flux)


MIN_CELLS_PER_REACTION_LENGTH = 20


def init_state(
    params: DetonationParams,
    grid: GridSpec = GridSpec(),
    perturbation: Perturbation | None = None,
    cfl: float = 0.4,
) -> SimState:
    """Sample the profile at cell centres and add a bump to ``u``."""
    if not 0 < cfl < 1:
        raise CflViolation(f"cfl must lie in (0, 1), got {cfl}")
    if grid.n_cells * params.reaction_length / (grid.x_right - grid.x_left) < MIN_CELLS_PER_REACTION_LENGTH:
        raise GridError(
            f"dx={grid.dx:.4g} does not resolve the reaction length s/k={params.reaction_length:.4g} "
            f"with {MIN_CELLS_PER_REACTION_LENGTH} cells"
        )
    xi = grid.centers()
    u, z = profile_arrays(params, xi)
    if perturbation is not None:
        u = u + perturbation(xi)
    state = SimState(xi, u.copy(), z.copy(), 0.0, grid.dx, cfl)
    state.mass0 = state.mass(params.q)
    return state


def _react(u, z, params: DetonationParams, dt: float):
    w = u + params.q * z
    burning = u >= params.u_i
    z_new = np.where(burning, z * math.exp(-params.k * dt), z)
    return w - params.q * z_new, z_new


def time_step(state: SimState, params: DetonationParams) -> float:
    speed = max(float(np.max(np.abs(state.u - params.s))), params.s)
    return state.cfl * state.dx / speed


def step(state: SimState, params: DetonationParams, dt: float | None = None) -> SimState:
    """Advance one Strang-split step; returns a new state."""
    s, q = params.s, params.q
    if dt is None:
        dt = time_step(state, params)
    speed = max(float(np.max(np.abs(state.u - s))), s)
    if dt * speed > state.dx * (1 + 1e-12):
        raise CflViolation(f"dt={dt} exceeds the CFL limit {state.dx / speed}")

    u, z = _react(state.u, state.z, params, 0.5 * dt)

    ug = np.concatenate([[u[0]], u, [params.u_plus]])
    zg = np.concatenate([[z[0]], z, [1.0]])
    wg = ug + q * zg
    fw = 0.5 * ug * ug - s * wg
    uL, uR = ug[:-1], ug[1:]
    alpha = np.maximum(np.abs(uL - s), np.abs(uR - s))
    flux_w = 0.5 * (fw[:-1] + fw[1:]) - 0.5 * alpha * (wg[1:] - wg[:-1])
    flux_z = -s * zg[1:]  # both z characteristics move left: take the right state
    lam = dt / state.dx
    w = wg[1:-1] - lam * (flux_w[1:] - flux_w[:-1])
    z = zg[1:-1] - lam * (flux_z[1:] - flux_z[:-1])
    u = w - q * z

    u, z = _react(u, z, params, 0.5 * dt)
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(z))):
        raise NonFiniteState(f"non-finite cell values at t={state.t + dt}")
    return replace(
        state,
        u=u,
        z=z,
        t=state.t + dt,
        boundary_flux=state.boundary_flux + dt * float(flux_w[-1] - flux_w[0]),
        steps=state.steps + 1,
    )


def _l1(state: SimState, params: DetonationParams, shift: float) -> float:
    u_ref, _ = profile_arrays(params, state.xi - shift)
    return float(np.sum(np.abs(state.u - u_ref)) * state.dx)


def orbit_fit(state: SimState, params: DetonationParams, window: float = 2.0, tol: float = 1e-9) -> tuple[float, float]:
    """Smallest L1 distance from ``state.u`` to a translate of the profile, and that shift.

    A scan over ``[-window, window]`` at cell spacing brackets the minimum;
    golden-section search then refines it.
    """
    shifts = np.arange(-window, window + 0.5 * state.dx, state.dx)
    dists = [_l1(state, params, d) for d in shifts]
    j = int(np.argmin(dists))
    a = shifts[max(j - 1, 0)]
    b = shifts[min(j + 1, len(shifts) - 1)]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = _l1(state, params, c), _l1(state, params, d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = _l1(state, params, c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = _l1(state, params, d)
    best = 0.5 * (a + b)
    candidates = [(dists[j], float(shifts[j])), (_l1(state, params, best), best)]
    dist, shift = min(candidates)
    return dist, shift


def distance_to_orbit(state: SimState, params: DetonationParams, window: float = 2.0) -> float:
    return orbit_fit(state, params, window)[0]


@dataclass(frozen=True)
class Sample:
    t: float
    distance: float
    shift: float
    mass_residual: float


def iterate(state: SimState, params: DetonationParams, horizon: float) -> Iterator[SimState]:
    """Yield states until ``t`` reaches ``horizon``; the last step is shortened to land on it."""
    while state.t < horizon - 1e-12:
        dt = min(time_step(state, params), horizon - state.t)
        state = step(state, params, dt)
        yield state


def run_experiment(
    params: DetonationParams,
    grid: GridSpec = GridSpec(),
    perturbation: Perturbation | None = Perturbation(),
    horizon: float = 30.0,
    cfl: float = 0.4,
    record_every: int = 100,
    snapshot_every: int = 0,
) -> tuple[list[Sample], list[tuple[float, np.ndarray, np.ndarray, np.ndarray]], float]:
    """Run to ``horizon`` and record orbit distance and mass balance.

    Returns ``(samples, snapshots, max_step_residual)`` where the last entry
    is the largest per-step change of the conservation residual.
    """
    state = init_state(params, grid, perturbation, cfl)
    dist, shift = orbit_fit(state, params)
    samples = [Sample(0.0, dist, shift, 0.0)]
    snapshots = [(0.0, state.xi, state.u, state.z)] if snapshot_every else []
    prev_res = 0.0
    max_step_res = 0.0
    for state in iterate(state, params, horizon):
        res = state.mass_residual(params.q)
        max_step_res = max(max_step_res, abs(res - prev_res))
        prev_res = res
        last = state.t >= horizon - 1e-12
        if state.steps % record_every == 0 or last:
            dist, shift = orbit_fit(state, params)
            samples.append(Sample(state.t, dist, shift, res))
        if snapshot_every and (state.steps % snapshot_every == 0 or last):
            snapshots.append((state.t, state.xi, state.u, state.z))
    return samples, snapshots, max_step_res
