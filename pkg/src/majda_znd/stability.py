"""Certification of the spectral stability condition by zero counting.

Condition (D): the Lopatinski determinant has exactly one zero in the closed
right half-plane, a simple zero at the origin.  We count zeros with the
argument principle on two contours,

* the boundary of the half annulus ``{Re lam >= 0, r <= |lam| <= R}``,
  indented into the right half-plane around the origin, and
* the full circle ``|lam| = r``,

where ``R`` comes from an a-priori bound on the modulus of any right
half-plane zero, and check the analytic bound chain (``|Psi| <= Psi(0)`` and
positivity of the real part of the coefficient multiplying ``k``) on a sample
of the region.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    AdmissibilityError,
    GeometryError,
    MajdaZNDError,
    RefinementExhausted,
    ZeroOnContour,
)
from .lopatinski import det_closed_form, psi, psi_abscissa
from .numerics import DEFAULT_RTOL, SWEEP_TOL
from .params import DetonationParams, q_max


class Verdict(str, enum.Enum):
    STABLE = "StableConditionD"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


def psi_max(params: DetonationParams) -> float:
    """Upper bound of ``|Psi|`` on ``Re lam >= 0``; attained at ``lam = 0``."""
    return ((params.s - params.u_plus) - params.c_minus) / (params.q * params.k)


def coeff_floor(params: DetonationParams) -> float:
    """Lower bound of ``Re(u_star - u_plus - q - q k Psi)`` on ``Re lam >= 0``."""
    return params.s - params.u_plus - params.q + params.c_minus


RADIUS_SAFETY = 2.0


def radius_bound_base(params: DetonationParams) -> float:
    du = params.u_star - params.u_plus
    return params.k * (du + params.q + params.q * params.k * psi_max(params)) / du


def radius_bound(params: DetonationParams) -> float:
    """Radius of a half-disc containing every nonzero root of ``D`` with ``Re lam >= 0``, times 2.

    A zero off the origin solves ``(u_star - u_plus) lam = -k (u_star - u_plus - q - q k Psi)``,
    so ``|lam| <= k (u_star - u_plus + q + q k psi_max) / (u_star - u_plus)``.
    """
    return RADIUS_SAFETY * radius_bound_base(params)


def radius_derivation(params: DetonationParams) -> str:
    return (
        "nonzero roots with Re(lam)>=0 satisfy (u_star-u_plus)|lam| <= k(u_star-u_plus+q+q*k*psi_max); "
        f"base R = {radius_bound_base(params)!r}, safety factor {RADIUS_SAFETY}, R = {radius_bound(params)!r}"
    )


# --------------------------------------------------------------------------- contours


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return self.start + (self.end - self.start) * u


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return self.center + self.radius * np.exp(1j * (self.theta0 + (self.theta1 - self.theta0) * u))


@dataclass
class Contour:
    """Closed, positively oriented path built from pieces.

    A position on the path is a real ``tau``: its integer part picks the
    piece and its fractional part the location on that piece.  Refinement
    happens in ``tau``, so arcs stay arcs.
    """

    pieces: list
    taus: np.ndarray
    refinement_depth: int = 0
    min_abs_on_contour: float = math.nan

    def at(self, taus) -> np.ndarray:
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        idx = np.minimum(np.floor(taus).astype(int), len(self.pieces) - 1)
        frac = taus - idx
        out = np.empty(taus.shape, dtype=complex)
        for i, piece in enumerate(self.pieces):
            sel = idx == i
            if sel.any():
                out[sel] = piece(frac[sel])
        return out

    @property
    def points(self) -> np.ndarray:
        pts = self.at(self.taus)
        pts[-1] = pts[0]
        return pts

    def signed_area(self) -> float:
        p = self.points
        return 0.5 * float(np.sum(p.real[:-1] * p.imag[1:] - p.real[1:] * p.imag[:-1]))


def _taus_for(lengths: Sequence[float], n0: int) -> np.ndarray:
    total = sum(lengths)
    taus = []
    for i, ell in enumerate(lengths):
        n = max(4, int(math.ceil(n0 * ell / total)))
        taus.append(i + np.arange(n) / n)
    taus.append(np.array([float(len(lengths))]))
    return np.concatenate(taus)


def build_contours(params: DetonationParams, r: float, R: float, n0: int = 64) -> tuple[Contour, Contour]:
    """Indented half-annulus boundary and the small circle around the origin."""
    if not 0 < r < R:
        raise GeometryError(f"need 0 < r < R, got r={r}, R={R}")
    if r >= params.k:
        raise GeometryError(f"indent radius r={r} must stay below k={params.k}")
    if r >= -psi_abscissa(params):
        raise GeometryError(
            f"indent radius r={r} reaches the convergence abscissa {psi_abscissa(params):.6g} of the tail integral"
        )
    if n0 < 16:
        raise GeometryError("need at least 16 initial samples")
    half_pi = 0.5 * math.pi
    pieces = [
        Arc(0j, R, -half_pi, half_pi),  # -iR -> R -> iR
        Line(1j * R, 1j * r),
        Arc(0j, r, half_pi, -half_pi),  # ir -> r -> -ir, into Re lam > 0
        Line(-1j * r, -1j * R),
    ]
    lengths = [math.pi * R, R - r, math.pi * r, R - r]
    half = Contour(pieces, _taus_for(lengths, n0))
    circle = Contour([Arc(0j, r, -math.pi, math.pi)], _taus_for([2 * math.pi * r], n0))
    return half, circle


# --------------------------------------------------------------------------- winding


@dataclass
class WindingDiagnostics:
    evaluations: int
    samples: int
    max_depth_used: int
    max_abs_step: float
    min_abs_value: float
    max_abs_value: float
    trace: list[tuple[complex, complex, float]] = field(default_factory=list)


PHASE_STEP = 0.5 * math.pi
DYNAMIC_FLOOR = 1e-10
ABSOLUTE_FLOOR = 1e-13


def winding_number(
    evaluator: Callable[[complex], complex],
    contour: Contour,
    max_depth: int = 14,
    keep_trace: bool = False,
) -> tuple[int, WindingDiagnostics]:
    """Winding number of ``evaluator`` around 0 along ``contour``.

    Consecutive samples are bisected (in the contour parameter) until every
    phase increment is below pi/2 and neither endpoint sits below
    ``1e-10 * max|f|``.  The contour object is updated with the final
    samples.
    """
    taus = list(contour.taus)
    vals = [complex(evaluator(complex(z))) for z in contour.at(taus)]
    vals[-1] = vals[0]  # closed path; last tau maps onto the first point
    depth = [0] * len(taus)  # depth of the segment starting at each sample
    evaluations = len(vals) - 1
    i = 0
    max_used = 0
    scale = max(abs(v) for v in vals)
    while i < len(taus) - 1:
        a, b = vals[i], vals[i + 1]
        for v, t in ((a, taus[i]), (b, taus[i + 1])):
            if abs(v) <= ABSOLUTE_FLOOR * scale or v == 0:
                raise ZeroOnContour(f"|f| = {abs(v):.3e} on the contour", complex(contour.at([t])[0]))
        step = abs(math.atan2((b / a).imag, (b / a).real))
        low = min(abs(a), abs(b)) < DYNAMIC_FLOOR * scale
        if step >= PHASE_STEP or low:
            if depth[i] >= max_depth:
                raise RefinementExhausted(
                    f"segment at tau={taus[i]:.6f} still has phase step {step:.3f} after {max_depth} bisections"
                )
            t_mid = 0.5 * (taus[i] + taus[i + 1])
            v_mid = complex(evaluator(complex(contour.at([t_mid])[0])))
            evaluations += 1
            scale = max(scale, abs(v_mid))
            taus.insert(i + 1, t_mid)
            vals.insert(i + 1, v_mid)
            depth[i] += 1
            depth.insert(i + 1, depth[i])
            max_used = max(max_used, depth[i])
            continue
        i += 1

    vals_arr = np.array(vals)
    steps = np.angle(vals_arr[1:] / vals_arr[:-1])
    total = float(np.sum(steps)) / (2.0 * math.pi)
    w = int(round(total))
    if abs(total - w) > 1e-6:
        raise RefinementExhausted(f"accumulated phase {total} is not an integer")

    contour.taus = np.array(taus)
    contour.refinement_depth = max_used
    absvals = np.abs(vals_arr)
    contour.min_abs_on_contour = float(absvals.min())
    trace = []
    if keep_trace:
        pts = contour.points
        cum = np.concatenate([[0.0], np.cumsum(steps)])
        trace = [(complex(p), complex(v), float(c)) for p, v, c in zip(pts, vals_arr, cum)]
    diag = WindingDiagnostics(
        evaluations,
        len(taus),
        max_used,
        float(np.max(np.abs(steps))),
        float(absvals.min()),
        float(absvals.max()),
        trace,
    )
    return w, diag


# --------------------------------------------------------------------------- verification


@dataclass(frozen=True)
class Tolerances:
    quad_rel_tol: float = DEFAULT_RTOL
    n0: int = 64
    max_depth: int = 14
    indent_fraction: float = 0.05
    sample_grid: int = 9
    psi_slack: float = 1e-9


@dataclass
class StabilityReport:
    params: DetonationParams
    winding_open_half_plane: int | None
    winding_small_circle: int | None
    radius_R: float
    indent_r: float
    psi_max: float
    coeff_floor: float
    min_abs_D: float
    verdict: Verdict
    radius_derivation: str = ""
    min_re_coefficient: float = math.nan
    max_abs_psi: float = math.nan
    evaluations: int = 0
    diagnostics: list[str] = field(default_factory=list)
    trace: list[tuple[str, complex, complex, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "winding_open_half_plane": self.winding_open_half_plane,
            "winding_small_circle": self.winding_small_circle,
            "radius_R": self.radius_R,
            "indent_r": self.indent_r,
            "psi_max": self.psi_max,
            "coeff_floor": self.coeff_floor,
            "min_abs_D": self.min_abs_D,
            "min_re_coefficient": self.min_re_coefficient,
            "max_abs_psi": self.max_abs_psi,
            "radius_derivation": self.radius_derivation,
            "evaluations": self.evaluations,
            "verdict": self.verdict.value,
            "diagnostics": list(self.diagnostics),
        }


def default_indent(params: DetonationParams, R: float, fraction: float = 0.05) -> float:
    """``min(0.05 k, 0.05 R)``, further kept inside half the convergence strip of ``Psi``."""
    return min(fraction * params.k, fraction * R, 0.5 * -psi_abscissa(params))


def sample_region(R: float, n: int) -> list[complex]:
    return [complex(a, b) for a in np.linspace(0.0, R, n) for b in np.linspace(-R, R, n)]


def verify_condition_D(
    params: DetonationParams,
    tol: Tolerances = Tolerances(),
    indent_r: float | None = None,
    keep_trace: bool = False,
) -> StabilityReport:
    """Count zeros of ``D`` in the closed right half-plane and check the bound chain."""
    pm = psi_max(params)
    floor = coeff_floor(params)
    R = radius_bound(params)
    r = default_indent(params, R, tol.indent_fraction) if indent_r is None else indent_r
    report = StabilityReport(
        params, None, None, R, r, pm, floor, math.nan, Verdict.INCONCLUSIVE, radius_derivation(params)
    )

    def D(lam: complex) -> complex:
        return det_closed_form(params, lam, tol.quad_rel_tol)

    try:
        half, circle = build_contours(params, r, R, tol.n0)
        w_half, d_half = winding_number(D, half, tol.max_depth, keep_trace)
        w_small, d_small = winding_number(D, circle, tol.max_depth, keep_trace)
    except (MajdaZNDError, ArithmeticError) as exc:
        report.diagnostics.append(f"{type(exc).__name__}: {exc}")
        return report
    report.winding_open_half_plane = w_half
    report.winding_small_circle = w_small
    report.min_abs_D = min(d_half.min_abs_value, d_small.min_abs_value)
    report.evaluations = d_half.evaluations + d_small.evaluations
    if keep_trace:
        report.trace = [("half_plane",) + row for row in d_half.trace] + [("small_circle",) + row for row in d_small.trace]

    # pointwise bound chain on a sample of the half-disc region
    coeffs, moduli = [], []
    du = params.u_star - params.u_plus
    try:
        for lam in sample_region(R, tol.sample_grid):
            value, _ = psi(params, lam, tol.quad_rel_tol)
            moduli.append(abs(value))
            coeffs.append((du - params.q - params.q * params.k * value).real)
    except (MajdaZNDError, ArithmeticError) as exc:
        report.diagnostics.append(f"bound-chain sample failed: {type(exc).__name__}: {exc}")
        return report
    report.min_re_coefficient = min(coeffs)
    report.max_abs_psi = max(moduli)

    if report.max_abs_psi > pm + tol.psi_slack:
        report.diagnostics.append(f"|Psi| = {report.max_abs_psi!r} exceeds psi_max = {pm!r}")
    if report.min_re_coefficient <= 0:
        report.diagnostics.append(f"Re(u_star-u_plus-q-qk*Psi) = {report.min_re_coefficient!r} is not positive")

    if w_half == 0 and w_small == 1 and floor > 0:
        report.verdict = Verdict.STABLE if not report.diagnostics else Verdict.INCONCLUSIVE
    else:
        report.verdict = Verdict.VIOLATED
        report.diagnostics.append(f"winding pair ({w_half}, {w_small}) differs from (0, 1) or floor {floor!r} <= 0")
    return report


# --------------------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepSpec:
    u_plus: Sequence[float]
    u_star: Sequence[float]
    q_fraction: Sequence[float]
    k: Sequence[float]
    u_i_fraction: float = 0.5

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        allowed = {"u_plus", "u_star", "q_fraction", "k", "u_i_fraction"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown sweep fields: {sorted(unknown)}")
        return cls(
            tuple(data["u_plus"]),
            tuple(data["u_star"]),
            tuple(data["q_fraction"]),
            tuple(data["k"]),
            float(data.get("u_i_fraction", 0.5)),
        )

    def points(self) -> list[tuple[float, float, float, float]]:
        return list(itertools.product(self.u_plus, self.u_star, self.q_fraction, self.k))


@dataclass
class SweepRow:
    u_plus: float
    u_star: float
    q_fraction: float
    k: float
    report: StabilityReport | None
    error: str | None = None


def params_from_fractions(u_plus: float, u_star: float, q_fraction: float, k: float, u_i_fraction: float = 0.5) -> DetonationParams:
    """Admissible params with ``q = q_fraction * q_max`` and ``u_i`` placed between ``u_plus`` and ``u_minus``."""
    try:
        qm = q_max(u_plus, u_star)
    except ValueError as exc:
        raise AdmissibilityError(str(exc)) from exc
    q = q_fraction * qm
    s = 0.5 * (u_plus + u_star)
    rad = (s - u_plus) ** 2 - 2 * q * s
    u_minus = s + math.sqrt(rad) if rad > 0 else s
    return DetonationParams(u_plus, u_star, q, k, u_plus + u_i_fraction * (u_minus - u_plus))


def _sweep_point(args) -> SweepRow:
    point, u_i_fraction, tol = args
    try:
        p = params_from_fractions(*point, u_i_fraction)
    except AdmissibilityError as exc:
        return SweepRow(*point, None, f"AdmissibilityError: {exc}")
    return SweepRow(*point, verify_condition_D(p, tol))


def parameter_sweep(spec: SweepSpec, tol: Tolerances | None = None, workers: int = 1) -> list[SweepRow]:
    """One stability report per grid point, in grid order; bad points carry their error.

    Sweeps default to the looser quadrature tolerance ``SWEEP_TOL``.
    """
    tol = Tolerances(quad_rel_tol=SWEEP_TOL) if tol is None else tol
    jobs = [(pt, spec.u_i_fraction, tol) for pt in spec.points()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, jobs))
    return [_sweep_point(j) for j in jobs]


def all_stable(rows: Iterable[SweepRow]) -> bool:
    return all(r.report is not None and r.report.verdict is Verdict.STABLE for r in rows)


# --------------------------------------------------------------------------- randomised bound chain


def random_params(rng: np.random.Generator) -> DetonationParams:
    """Draw admissible parameters over a few decades of ``k`` and the whole ``q`` range."""
    u_plus = rng.uniform(0.0, 2.0)
    u_star = u_plus + rng.uniform(0.05, 4.0)
    q_fraction = rng.uniform(1e-3, 1.0 - 1e-3)
    k = 10.0 ** rng.uniform(-2.0, 2.0)
    return params_from_fractions(u_plus, u_star, q_fraction, k, rng.uniform(0.05, 0.95))


def random_right_half_plane(rng: np.random.Generator, radius: float, n: int) -> np.ndarray:
    """``n`` points uniform on the half disc ``Re lam >= 0``, ``|lam| <= radius``."""
    r = radius * np.sqrt(rng.uniform(size=n))
    theta = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size=n)
    return r * np.exp(1j * theta)


@dataclass
class BoundChainResult:
    draws: int
    evaluations: int
    max_psi_excess: float  # max over samples of |Psi(lam)| - Psi(0)
    min_re_coefficient: float  # min over samples of Re(u_star - u_plus - q - q k Psi)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def bound_chain_check(
    rng: np.random.Generator,
    draws: int = 1000,
    lambdas_per_draw: int = 25,
    radius_over_k: float = 10.0,
    slack: float = 1e-9,
    rel_tol: float = DEFAULT_RTOL,
) -> BoundChainResult:
    """Check ``|Psi(lam)| <= Psi(0) + slack`` and ``Re(u_star-u_plus-q-qk Psi(lam)) > 0`` at random points."""
    res = BoundChainResult(0, 0, -math.inf, math.inf)
    for _ in range(draws):
        p = random_params(rng)
        pm = psi_max(p)
        du = p.u_star - p.u_plus
        res.draws += 1
        for lam in random_right_half_plane(rng, radius_over_k * p.k, lambdas_per_draw):
            value, _ = psi(p, complex(lam), rel_tol)
            res.evaluations += 1
            excess = abs(value) - pm
            coeff = (du - p.q - p.q * p.k * value).real
            res.max_psi_excess = max(res.max_psi_excess, excess)
            res.min_re_coefficient = min(res.min_re_coefficient, coeff)
            if excess > slack or not coeff > 0:
                res.failures.append(f"{p.to_dict()} lam={complex(lam)}: |Psi|-Psi(0)={excess:.3e}, Re coeff={coeff:.3e}")
    return res
