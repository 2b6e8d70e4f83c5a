"""Closed-form Lopatinski determinant of the ZND wave.

With the decaying solution of the eigenvalue system normalised so that its
reactant component equals 1 at the shock, the determinant reduces to

    D(lam) = ((u_star - u_plus) lam + (u_star - u_plus - q - q k Psi(lam)) k) * lam / (k + lam)

where ``Psi`` is a one-dimensional integral over the reaction tail.  In the
variable ``t = exp(k xi / s)`` the integrand is ``(s/k) exp(lam g(t)) / r(t)``
with ``r(t) = sqrt(c^2 + 2 q s t)`` (``c = u_minus - s``) and

    g(t) = (2 s / (k c)) * log((s - u_plus + c) sqrt(t) / (r(t) + c)) + log(t) / k,

a real, increasing function with ``g(1) = 0`` that tends to ``-inf`` as
``t -> 0``.  So ``Psi`` is a Laplace transform of a positive density, which is
where the bound ``|Psi(lam)| <= Psi(0)`` on the closed right half-plane comes
from.

Notes on the source formulas: the radicand of ``P`` is ``... + u_plus^2 - 2 s
u_plus`` (one printed occurrence has ``u_minus`` in place of the last
``u_plus``, which is inconsistent with the antiderivative used right after
it), and the inner dummy integration variable of ``Psi`` is unrelated to the
wave speed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import DEFAULT_ATOL, DEFAULT_RTOL, adaptive_quad, integrate_ode
from .params import DetonationParams

#: above this ratio |Im lam| / k the tail integral is evaluated by ODE instead of quadrature
OSCILLATION_SWITCH = 50.0
IDENTITY_RTOL = 1e-12


@dataclass(frozen=True)
class LopatinskiEval:
    lam: complex
    psi: complex
    z1_at_zero: complex
    jump: tuple[complex, complex]
    d_value: complex
    quad_error: float
    identity_residual: float
    method: str = "quadrature"


def psi_abscissa(params: DetonationParams) -> float:
    """Left edge of the half-plane where the tail integral converges.

    The integrand behaves like ``t**(lam (1 + s/c) / k)`` near ``t = 0``, so
    ``Psi`` is analytic for ``Re lam > -k c / (c + s)``; this is stricter
    than the pole of ``k / (k + lam)`` at ``-k``.
    """
    c = params.c_minus
    return -params.k * c / (c + params.s)


def _radicand_xi(params: DetonationParams, xi):
    return (params.s - params.u_plus) ** 2 - 2.0 * params.q * params.s * (1.0 - np.exp(np.asarray(xi) / params.reaction_length))


def p_coeff(params: DetonationParams, lam: complex, xi: float) -> complex:
    """``P(xi) = lam / (u_bar(xi) - s)`` on the reaction tail ``xi <= 0``."""
    if xi > 0:
        raise DomainError("P is only defined on xi <= 0")
    return complex(lam) / math.sqrt(_radicand_xi(params, xi))


def p_antiderivative(params: DetonationParams, lam: complex, xi: float) -> complex:
    """Closed-form antiderivative of :func:`p_coeff` in ``xi``."""
    if xi > 0:
        raise DomainError("P is only defined on xi <= 0")
    s, q, k, c = params.s, params.q, params.k, params.c_minus
    e = math.exp(xi / params.reaction_length)
    log_term = math.log(math.sqrt(_radicand_xi(params, xi)) + c) - 0.5 * math.log(2.0 * q * s * e)
    return -(2.0 * complex(lam) * s / (k * c)) * log_term


def tail_exponent(params: DetonationParams, log_t: np.ndarray) -> np.ndarray:
    """``g(t)`` evaluated from ``log t``; see the module docstring."""
    s, q, k, c = params.s, params.q, params.k, params.c_minus
    a0 = s - params.u_plus
    r = np.sqrt(c * c + 2.0 * q * s * np.exp(log_t))
    return (2.0 * s / (k * c)) * (math.log(a0 + c) - np.log(r + c)) + (s / (k * c) + 1.0 / k) * log_t


def _psi_quadrature(params: DetonationParams, lam: complex, rel_tol: float, abs_tol: float):
    s, q, k, c = params.s, params.q, params.k, params.c_minus
    growth = (1.0 + s / c) / k  # integrand ~ t**(growth * lam)
    # t = tau**m makes the endpoint behaviour at tau = 0 at least linear
    m = 2.0 / (1.0 + growth * min(lam.real, 0.0))
    pref = m * s / k

    def integrand(tau):
        log_tau = np.log(tau)
        log_t = m * log_tau
        r = np.sqrt(c * c + 2.0 * q * s * np.exp(log_t))
        return pref * np.exp(lam * tail_exponent(params, log_t) + (m - 1.0) * log_tau) / r

    res = adaptive_quad(integrand, 0.0, 1.0, rel_tol=rel_tol, abs_tol=abs_tol)
    return res.value, res.error_estimate


def _z1_by_ode(params: DetonationParams, lam: complex, rel_tol: float) -> complex:
    """``Z1(lam, 0)`` by forward integration of ``Z1' = -P Z1 + Q``.

    Works with ``Y = Z1 exp(-mu xi)``, ``mu = (k + lam)/s``, which stays
    bounded on the tail; started on the decaying mode of the limiting system.
    """
    s, q, k, c = params.s, params.q, params.k, params.c_minus
    mu = (k + lam) / s
    L = params.reaction_length * math.log(1.0 / np.finfo(float).eps)
    y0 = -(q * k / s) / (mu + lam / c)

    def rhs(xi, y):
        return (-(lam / math.sqrt(_radicand_xi(params, xi))) - mu) * y - q * k / s

    res = integrate_ode(rhs, [y0], -L, 0.0, rel_tol=rel_tol, abs_tol=rel_tol * 1e-3)
    return complex(res.final_state[0])


def psi(
    params: DetonationParams,
    lam: complex,
    rel_tol: float = DEFAULT_RTOL,
    abs_tol: float = DEFAULT_ATOL,
) -> tuple[complex, float]:
    """Tail integral ``Psi(lam)`` and an error estimate.

    Beyond ``|Im lam| > 50 k`` the value is recovered from an ODE solve of
    ``Z1`` through the identity ``Z1(0) = -(q k / (k + lam)) (1 - lam Psi)``;
    the returned error estimate is then the tolerance-scaled magnitude.
    """
    lam = complex(lam)
    if not lam.real > psi_abscissa(params):
        raise DomainError(
            f"Psi diverges for Re(lam) <= {psi_abscissa(params):.6g}; got lam={lam}"
        )
    if abs(lam.imag) > OSCILLATION_SWITCH * params.k:
        z1 = _z1_by_ode(params, lam, rel_tol)
        value = (1.0 + (params.k + lam) * z1 / (params.q * params.k)) / lam
        return value, rel_tol * abs(value)
    return _psi_quadrature(params, lam, rel_tol, abs_tol)


def jump_vector(params: DetonationParams, lam: complex) -> tuple[complex, complex]:
    """``lam [W] - [A W']`` across the Neumann shock."""
    lam = complex(lam)
    return lam * (params.u_plus - params.u_star) + params.q * params.k, complex(-params.k)


def z1_from_psi(params: DetonationParams, lam: complex, psi_value: complex) -> complex:
    lam = complex(lam)
    return -(params.q * params.k / (params.k + lam)) * (1.0 - lam * psi_value)


def z1_at_zero(params: DetonationParams, lam: complex, rel_tol: float = DEFAULT_RTOL) -> complex:
    """First component of the decaying eigen-solution at ``xi = 0-`` (``Z2(0) = 1``)."""
    lam = complex(lam)
    if lam == -params.k:
        raise DomainError("lam = -k is a pole")
    return z1_from_psi(params, lam, psi(params, lam, rel_tol)[0])


def det_from_psi(params: DetonationParams, lam: complex, psi_value: complex) -> complex:
    lam = complex(lam)
    du = params.u_star - params.u_plus
    k, q = params.k, params.q
    return (du * lam + (du - q - q * k * psi_value) * k) * lam / (k + lam)


def evaluate(params: DetonationParams, lam: complex, rel_tol: float = DEFAULT_RTOL) -> LopatinskiEval:
    """Evaluate ``Psi``, ``Z1(0)``, the jump vector and ``D`` at one ``lam``.

    ``D`` is formed from ``Psi`` directly and cross-checked against the
    determinant ``det(Z(0), jump)``; the relative mismatch is stored.
    """
    lam = complex(lam)
    if lam == -params.k:
        raise DomainError("lam = -k is a pole")
    method = "ode" if abs(lam.imag) > OSCILLATION_SWITCH * params.k else "quadrature"
    psi_value, err = psi(params, lam, rel_tol)
    z1 = z1_from_psi(params, lam, psi_value)
    jump = jump_vector(params, lam)
    d = det_from_psi(params, lam, psi_value)
    d_det = z1 * jump[1] - 1.0 * jump[0]
    scale = abs(params.k * z1) + abs(lam) * (params.u_star - params.u_plus) + params.q * params.k
    residual = abs(d - d_det) / scale
    if residual > 1e3 * IDENTITY_RTOL:
        raise ArithmeticError(f"determinant identity violated at lam={lam}: residual {residual:.3e}")
    return LopatinskiEval(lam, psi_value, z1, jump, d, err, residual, method)


def det_closed_form(params: DetonationParams, lam: complex, rel_tol: float = DEFAULT_RTOL) -> complex:
    """Lopatinski determinant ``D(lam)``, normalised by ``Z2(lam, 0) = 1``."""
    return evaluate(params, lam, rel_tol).d_value
