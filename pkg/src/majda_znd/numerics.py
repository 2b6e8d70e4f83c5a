"""Adaptive Gauss-Kronrod quadrature and Dormand-Prince integration.

Both routines work on complex data.  The quadrature is vectorised: the
integrand is called once per refinement round with every pending node, so
the integrand must accept a 1-d float array and return an array of the same
length (complex or real).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, NonFiniteState, StepSizeUnderflow

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
SWEEP_TOL = 1e-6

_EPS = np.finfo(float).eps

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 constants).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full symmetric node set on [-1, 1] and the matching weight vectors.
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]


@dataclass
class QuadResult:
    value: complex
    error_estimate: float
    evaluations: int
    intervals: int = 1


def _gk15(f: Callable, left: np.ndarray, right: np.ndarray):
    """Apply the 15-point rule to every interval at once."""
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    kron = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    mean = kron / np.where(half != 0.0, 2.0 * half, 1.0)
    resasc = half * (np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS)
    resabs = half * (np.abs(fx) @ KRONROD_WEIGHTS)
    err = np.abs(kron - gauss)
    # QUADPACK scaling: sharpens the raw Gauss/Kronrod difference on smooth integrands.
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0.0) & (err != 0.0), scaled, err)
    floor = 50.0 * _EPS * resabs
    return kron, np.maximum(err, floor), floor


def adaptive_quad(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rel_tol: float = DEFAULT_RTOL,
    abs_tol: float = DEFAULT_ATOL,
    max_intervals: int = 20000,
    min_width: float = 1e-14,
) -> QuadResult:
    """Integrate a vectorised, possibly complex, integrand over ``[a, b]``.

    Globally adaptive bisection: each round splits the intervals carrying the
    largest error estimates until the remaining ones fit inside half of the
    requested tolerance.  Intervals narrower than ``min_width`` are frozen.
    The result is summed in left-to-right interval order, so it only depends
    on the integrand values, not on the refinement history.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or a > b:
        raise ValueError(f"need finite a <= b, got [{a}, {b}]")
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    if a == b:
        return QuadResult(0j, 0.0, 0, 0)

    left = np.array([a], dtype=float)
    right = np.array([b], dtype=float)
    vals, errs, floors = _gk15(f, left, right)
    nevals = 15
    frozen = np.zeros(1, dtype=bool)

    while True:
        total = vals.sum()
        tol = max(abs_tol, rel_tol * abs(total))
        err_total = errs.sum()
        if not np.isfinite(err_total) or not np.isfinite(total):
            raise ConvergenceError("non-finite integrand values", None)
        if err_total <= tol:
            break
        if floors.sum() > tol:
            raise ConvergenceError(
                f"tolerance {tol:.3e} is below the rounding floor {floors.sum():.3e} of the integrand",
                None,
            )
        err_frozen = float(errs[frozen].sum())
        if err_frozen > 0.5 * tol:
            # bisection cannot reduce error sitting in intervals at the width floor
            worst = int(np.flatnonzero(frozen)[np.argmax(errs[frozen])])
            raise ConvergenceError(
                f"error {err_frozen:.3e} is stuck in intervals narrower than {min_width:g} (tol {tol:.3e})",
                (float(left[worst]), float(right[worst])),
            )
        candidates = np.flatnonzero(~frozen)
        order = candidates[np.argsort(-errs[candidates], kind="stable")]
        # smallest set of worst intervals whose removal leaves <= tol/2
        remaining = err_total - np.cumsum(errs[order])
        nsplit = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        split = np.sort(order[:nsplit])
        if left.size + split.size > max_intervals:
            worst = int(order[0])
            raise ConvergenceError(
                f"subdivision budget of {max_intervals} intervals exhausted "
                f"(error {err_total:.3e} > tol {tol:.3e})",
                (float(left[worst]), float(right[worst])),
            )
        mid = 0.5 * (left[split] + right[split])
        new_left = np.concatenate([left[split], mid])
        new_right = np.concatenate([mid, right[split]])
        new_vals, new_errs, new_floors = _gk15(f, new_left, new_right)
        nevals += 15 * new_left.size

        keep = np.ones(left.size, dtype=bool)
        keep[split] = False
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        vals = np.concatenate([vals[keep], new_vals])
        errs = np.concatenate([errs[keep], new_errs])
        floors = np.concatenate([floors[keep], new_floors])
        order = np.argsort(left, kind="stable")
        left, right, vals, errs, floors = left[order], right[order], vals[order], errs[order], floors[order]
        frozen = (right - left) < min_width

    return QuadResult(complex(vals.sum()), float(errs.sum()), nevals, int(left.size))


# Dormand-Prince 5(4) tableau.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B_LOW = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B - _B_LOW
_A_ROWS = [np.array(row) for row in _A]
ORDER = 5


@dataclass
class OdeResult:
    final_state: np.ndarray
    steps_accepted: int
    steps_rejected: int
    t_eval: np.ndarray = field(default_factory=lambda: np.empty(0))
    y_eval: np.ndarray = field(default_factory=lambda: np.empty((0, 0), dtype=complex))


def _initial_step(rhs, t0, y0, f0, direction, rtol, atol, span):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + direction * h0 * f0
    f1 = rhs(t0 + direction * h0, y1)
    d2 = np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / ORDER)
    return min(100 * h0, h1)


def integrate_ode(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0: Sequence[complex] | np.ndarray,
    t0: float,
    t1: float,
    rel_tol: float = DEFAULT_RTOL,
    abs_tol: float = DEFAULT_ATOL,
    t_eval: Sequence[float] | None = None,
    max_steps: int = 1_000_000,
    first_step: float | None = None,
    norm: str = "rms",
) -> OdeResult:
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1`` (either direction).

    Dormand-Prince 5(4) with a PI step-size controller and local
    extrapolation.  ``t_eval`` points are hit exactly by shortening steps,
    so no interpolant is involved in the reported samples.

    ``norm="max"`` controls every component separately instead of the
    root-mean-square; use it when stacking independent systems into one
    state vector.
    """
    if norm not in ("rms", "max"):
        raise ValueError(f"unknown norm {norm!r}")
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    y = np.array(y0, dtype=complex)
    t = float(t0)
    t1 = float(t1)
    direction = 1.0 if t1 >= t else -1.0
    targets = [] if t_eval is None else sorted((float(x) for x in t_eval), reverse=direction < 0)
    for x in targets:
        if (x - t) * direction < 0 or (x - t1) * direction > 0:
            raise ValueError(f"t_eval point {x} outside [{t0}, {t1}]")
    out_t: list[float] = []
    out_y: list[np.ndarray] = []
    ti = 0
    while ti < len(targets) and targets[ti] == t:
        out_t.append(t)
        out_y.append(y.copy())
        ti += 1
    if t == t1:
        return OdeResult(y, 0, 0, np.array(out_t), np.array(out_y, dtype=complex).reshape(len(out_t), y.size))

    f = np.asarray(rhs(t, y), dtype=complex)
    h = first_step if first_step is not None else _initial_step(rhs, t, y, f, direction, rel_tol, abs_tol, abs(t1 - t))
    h = min(abs(h), abs(t1 - t))
    accepted = rejected = 0
    err_prev = 1e-4
    safety, fac_min, fac_max = 0.9, 0.2, 10.0
    alpha, beta = 0.7 / ORDER, 0.4 / ORDER
    K = np.empty((7, y.size), dtype=complex)
    K[0] = f

    while (t1 - t) * direction > 0:
        if accepted + rejected >= max_steps:
            raise StepSizeUnderflow(f"step budget {max_steps} exhausted at t={t}")
        if h < 16 * _EPS * max(1.0, abs(t)):
            raise StepSizeUnderflow(f"required step {h:.3e} below machine scale at t={t}")
        stop = targets[ti] if ti < len(targets) else t1
        hit = False
        if h >= abs(stop - t):
            h = abs(stop - t)
            hit = True
        hs = direction * h
        for i in range(1, 7):
            yi = y + hs * (_A_ROWS[i] @ K[:i])
            K[i] = rhs(t + _C[i] * hs, yi)
        y_new = yi  # last stage argument is the 5th-order solution (FSAL)
        err_vec = hs * (_E @ K)
        scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        r = err_vec / scale
        if norm == "max":
            err = float(np.max(np.abs(r)))
        else:
            err = math.sqrt((r.real @ r.real + r.imag @ r.imag) / r.size)
        if not math.isfinite(abs(y_new.sum())):
            if h < 1e-8 * max(1.0, abs(t1 - t0)):
                raise NonFiniteState(f"non-finite state at t={t}")
            err = math.inf
        if err <= 1.0:
            t = stop if hit else t + hs
            y = y_new
            K[0] = K[6]
            accepted += 1
            if hit and ti < len(targets):
                out_t.append(t)
                out_y.append(y.copy())
                ti += 1
                while ti < len(targets) and targets[ti] == t:
                    out_t.append(t)
                    out_y.append(y.copy())
                    ti += 1
            if err == 0.0:
                fac = fac_max
            else:
                fac = min(fac_max, max(fac_min, safety * err ** -alpha * err_prev ** beta))
            err_prev = max(err, 1e-4)
            h *= fac
        else:
            rejected += 1
            fac = 0.2 if not math.isfinite(err) else max(fac_min, safety * err ** -(1.0 / ORDER))
            h *= fac
    return OdeResult(
        y,
        accepted,
        rejected,
        np.array(out_t),
        np.array(out_y, dtype=complex).reshape(len(out_t), y.size),
    )
