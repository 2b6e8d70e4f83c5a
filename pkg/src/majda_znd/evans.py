"""Lopatinski determinant by shooting the first-order eigenvalue system.

Independent of the closed form: the decaying solution of ``Z' = G(xi) Z`` is
seeded on the unstable eigenvector of the limiting matrix at ``xi = -L`` and
integrated numerically up to the shock.  To keep the solution bounded we
integrate ``Y = Z exp(-mu xi)`` where ``mu = (k + lam)/s`` is the growth rate
of the seeded mode.
"""

from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DegenerateError, DomainError, MajdaZNDError, TruncationWarning
from .lopatinski import det_closed_form, jump_vector, psi_abscissa
from .numerics import DEFAULT_RTOL, integrate_ode
from .params import DetonationParams
from .profile import profile_at


@dataclass(frozen=True)
class EigenSystemEval:
    lam: complex
    L: float
    z_at_zero: tuple[complex, complex]
    det_value: complex
    normalization: complex
    steps: int = 0


def default_length(params: DetonationParams) -> float:
    return 40.0 * params.reaction_length


def g_matrix(params: DetonationParams, lam: complex, xi: float) -> np.ndarray:
    """``G = (E - lam I) A^{-1}`` on the reaction tail (``xi -> 0-`` at ``xi = 0``)."""
    if xi > 0:
        raise DomainError("G is only integrated on xi <= 0")
    lam = complex(lam)
    if xi == 0.0:
        u_bar = params.u_star
    elif math.isinf(xi):
        u_bar = params.u_minus
    else:
        u_bar = profile_at(params, xi).u_bar
    return np.array(
        [
            [-lam / (u_bar - params.s), -params.q * params.k / params.s],
            [0.0, (params.k + lam) / params.s],
        ],
        dtype=complex,
    )


def unstable_mode_at_minus_infinity(params: DetonationParams, lam: complex) -> tuple[complex, np.ndarray]:
    """Growth rate and eigenvector (second entry 1) of the limiting ``G`` at ``xi = -inf``.

    This mode is the one that decays as ``xi -> -inf``.
    """
    lam = complex(lam)
    mu = (params.k + lam) / params.s
    if not mu.real > 0:
        raise DomainError(f"need Re(lam) > -k, got lam={lam}")
    denom = mu + lam / params.c_minus
    if abs(denom) < 1e-14 * max(1.0, abs(mu)):
        raise DegenerateError(f"modes resonate at lam={lam}")
    return mu, np.array([-(params.q * params.k / params.s) / denom, 1.0], dtype=complex)


def decay_gap(params: DetonationParams, lam: complex) -> float:
    """Rate at which the complementary mode is damped along the forward integration."""
    lam = complex(lam)
    mu = (params.k + lam) / params.s
    return min(mu.real, lam.real / params.c_minus + mu.real)


def stripped_rhs(params: DetonationParams, lams: np.ndarray):
    """Right-hand side of ``Y' = (G(xi) - mu I) Y`` for a stack of ``lam`` values.

    The state is ``[Y1 for each lam] + [Y2 for each lam]``.  ``G`` is
    evaluated on the closed-form profile, exactly as :func:`g_matrix` does.
    """
    lams = np.asarray(lams, dtype=complex)
    mus = (params.k + lams) / params.s
    n = lams.size
    qk_s = params.q * params.k / params.s
    s, ell = params.s, params.reaction_length
    c2, two_qs = (s - params.u_plus) ** 2 - 2 * params.q * s, 2 * params.q * s

    def rhs(xi, y):
        gap = math.sqrt(c2 + two_qs * math.exp(xi / ell))  # u_bar - s
        out = np.zeros(2 * n, dtype=complex)
        out[:n] = (-lams / gap - mus) * y[:n] - qk_s * y[n:]
        return out

    return rhs


def _shoot(params, lams, L, rel_tol, initial_scales):
    lams = np.asarray(lams, dtype=complex)
    n = lams.size
    y0 = np.empty(2 * n, dtype=complex)
    for i, (lam, scale) in enumerate(zip(lams, initial_scales)):
        _, v = unstable_mode_at_minus_infinity(params, lam)
        y0[i], y0[n + i] = complex(scale) * v
    atol = rel_tol * 1e-3 * float(np.min(np.abs(y0[n:])))
    res = integrate_ode(stripped_rhs(params, lams), y0, -L, 0.0, rel_tol=rel_tol, abs_tol=atol, norm="max")
    return res.final_state[:n], res.final_state[n:], res.steps_accepted


def _check_lambda(params, lam, L, rel_tol):
    if not lam.real > psi_abscissa(params):
        raise DomainError(f"decaying subspace is not separated at lam={lam}")
    gap = decay_gap(params, lam)
    if gap * L < math.log(1.0 / rel_tol):
        warnings.warn(
            f"thin decay-gap margin at lam={lam}: exp(-gap*L)={math.exp(-gap * L):.2e}", TruncationWarning, stacklevel=3
        )


def _assemble(params, lam, L, y1, y2, steps):
    if y2 == 0:
        raise DegenerateError("reactant component vanished at the shock")
    z = (complex(y1 / y2), 1.0 + 0j)
    j1, j2 = jump_vector(params, lam)
    return EigenSystemEval(lam, float(L), z, z[0] * j2 - z[1] * j1, complex(y2), steps)


def eigen_system_eval(
    params: DetonationParams,
    lam: complex,
    L: float | None = None,
    rel_tol: float = DEFAULT_RTOL,
    initial_scale: complex = 1.0,
) -> EigenSystemEval:
    """Shoot from ``xi = -L`` with the seed ``initial_scale * v`` and normalise ``Z2(0) = 1``."""
    lam = complex(lam)
    L = default_length(params) if L is None else float(L)
    _check_lambda(params, lam, L, rel_tol)
    y1, y2, steps = _shoot(params, [lam], L, rel_tol, [initial_scale])
    return _assemble(params, lam, L, y1[0], y2[0], steps)


def eigen_system_eval_batch(
    params: DetonationParams,
    lams: Iterable[complex],
    L: float | None = None,
    rel_tol: float = DEFAULT_RTOL,
) -> list[EigenSystemEval]:
    """Shoot many ``lam`` at once as one stacked system sharing the step sequence."""
    lams = [complex(x) for x in lams]
    if not lams:
        return []
    L = default_length(params) if L is None else float(L)
    for lam in lams:
        _check_lambda(params, lam, L, rel_tol)
    y1, y2, steps = _shoot(params, lams, L, rel_tol, [1.0] * len(lams))
    return [_assemble(params, lam, L, a, b, steps) for lam, a, b in zip(lams, y1, y2)]


def det_ode(params: DetonationParams, lam: complex, L: float | None = None, rel_tol: float = DEFAULT_RTOL) -> complex:
    """Lopatinski determinant from the shooting solution, normalised by ``Z2(0) = 1``."""
    return eigen_system_eval(params, lam, L, rel_tol).det_value


@dataclass
class DiscrepancyRow:
    lam: complex
    d_closed: complex | None
    d_ode: complex | None
    error: float
    absolute: bool
    failure: str | None = None


@dataclass
class DiscrepancyTable:
    rows: list[DiscrepancyRow] = field(default_factory=list)

    @property
    def relative_errors(self) -> list[float]:
        return [r.error for r in self.rows if r.failure is None and not r.absolute]

    @property
    def absolute_errors(self) -> list[float]:
        return [r.error for r in self.rows if r.failure is None and r.absolute]

    @property
    def max_relative(self) -> float:
        return max(self.relative_errors, default=0.0)

    @property
    def median_relative(self) -> float:
        errs = self.relative_errors
        return statistics.median(errs) if errs else 0.0

    @property
    def max_absolute(self) -> float:
        return max(self.absolute_errors, default=0.0)

    @property
    def failures(self) -> list[DiscrepancyRow]:
        return [r for r in self.rows if r.failure is not None]


def compare_methods(
    params: DetonationParams,
    lambda_grid: Iterable[complex],
    L: float | None = None,
    rel_tol: float = DEFAULT_RTOL,
    floor: float = 1e-6,
) -> DiscrepancyTable:
    """Closed form against shooting on a grid of ``lam``.

    Where ``|D_closed| < floor`` (in practice only at ``lam = 0``) the
    discrepancy is reported as an absolute difference.
    """
    lams = [complex(x) for x in lambda_grid]
    table = DiscrepancyTable()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        try:
            d_odes: list = [e.det_value for e in eigen_system_eval_batch(params, lams, L, rel_tol)]
        except (MajdaZNDError, ArithmeticError):
            # isolate the offending points
            d_odes = []
            for lam in lams:
                try:
                    d_odes.append(det_ode(params, lam, L, rel_tol))
                except (MajdaZNDError, ArithmeticError) as exc:
                    d_odes.append(exc)
    for lam, d_ode in zip(lams, d_odes):
        try:
            if isinstance(d_ode, Exception):
                raise d_ode
            d_closed = det_closed_form(params, lam, rel_tol)
        except (MajdaZNDError, ArithmeticError) as exc:
            table.rows.append(DiscrepancyRow(lam, None, None, math.nan, False, f"{type(exc).__name__}: {exc}"))
            continue
        diff = abs(d_ode - d_closed)
        if abs(d_closed) < floor:
            table.rows.append(DiscrepancyRow(lam, d_closed, d_ode, diff, True))
        else:
            table.rows.append(DiscrepancyRow(lam, d_closed, d_ode, diff / abs(d_closed), False))
    return table


def rectangle_grid(re_range: tuple[float, float], im_range: tuple[float, float], n_re: int, n_im: int) -> list[complex]:
    """Row-major grid of ``lam`` values (real part varies slowest)."""
    res = np.linspace(*re_range, n_re)
    ims = np.linspace(*im_range, n_im)
    return [complex(a, b) for a in res for b in ims]
