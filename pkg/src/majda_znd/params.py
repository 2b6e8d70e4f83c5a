"""Detonation parameters: admissibility checks and derived quantities.

A strong ZND detonation of Majda's model is fixed by the quiescent state
``u_plus``, the Neumann-shock peak ``u_star``, the heat release ``q``, the
reaction rate ``k`` and the ignition threshold ``u_i``.  The wave speed and
the burnt end state follow from the Rankine-Hugoniot relation and the
integrated profile equations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from .errors import AdmissibilityError, DomainError

INPUT_FIELDS = ("u_plus", "u_star", "q", "k", "u_i")
DERIVED_FIELDS = ("s", "u_minus")
DERIVED_RTOL = 1e-10


def q_max(u_plus: float, u_star: float) -> float:
    """Upper end of the admissible heat-release range, ``(u_star - s)**2 / (2 s)``."""
    if not (0.0 <= u_plus < u_star):
        raise DomainError(f"need 0 <= u_plus < u_star, got u_plus={u_plus!r}, u_star={u_star!r}")
    s = 0.5 * (u_plus + u_star)
    return (u_star - s) ** 2 / (2.0 * s)


@dataclass(frozen=True)
class DetonationParams:
    u_plus: float
    u_star: float
    q: float
    k: float
    u_i: float
    s: float = field(init=False)
    u_minus: float = field(init=False)

    def __post_init__(self) -> None:
        vals = {name: getattr(self, name) for name in INPUT_FIELDS}
        for name, v in vals.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise AdmissibilityError(f"{name} must be a finite real, got {v!r}")
            object.__setattr__(self, name, float(v))

        u_plus, u_star, q, k, u_i = (getattr(self, n) for n in INPUT_FIELDS)
        if u_plus < 0.0:
            raise AdmissibilityError(f"Lax order: need u_plus >= 0, got {u_plus}")
        if not u_plus < u_star:
            raise AdmissibilityError(f"Lax order: need u_plus < u_star, got {u_plus} >= {u_star}")
        s = 0.5 * (u_plus + u_star)
        qm = (u_star - s) ** 2 / (2.0 * s)
        if not 0.0 < q < qm:
            raise AdmissibilityError(f"q range: need 0 < q < q_max={qm!r}, got q={q!r}")
        if not k > 0.0:
            raise AdmissibilityError(f"k sign: need k > 0, got {k}")
        radicand = (s - u_plus) ** 2 - 2.0 * q * s
        u_minus = s + math.sqrt(radicand)
        if not s < u_minus < u_star:
            # unreachable when q is in range, kept for roundoff at the boundary
            raise AdmissibilityError(f"Lax order: need s < u_minus < u_star, got u_minus={u_minus}")
        if not u_plus < u_i < u_minus:
            raise AdmissibilityError(
                f"ignition placement: need u_plus < u_i < u_minus={u_minus!r}, got u_i={u_i!r}"
            )
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "u_minus", u_minus)

    @property
    def c_minus(self) -> float:
        """``u_minus - s``; the square root of the profile radicand at the burnt end."""
        return self.u_minus - self.s

    @property
    def q_max(self) -> float:
        return q_max(self.u_plus, self.u_star)

    @property
    def reaction_length(self) -> float:
        """e-folding length ``s / k`` of the reaction tail."""
        return self.s / self.k

    def radicand(self, z_bar: float) -> float:
        """``s^2 - 2 q s (1 - z) + u_plus^2 - 2 s u_plus`` at reactant fraction ``z``."""
        return (self.s - self.u_plus) ** 2 - 2.0 * self.q * self.s * (1.0 - z_bar)

    def to_dict(self) -> dict[str, float]:
        return {n: getattr(self, n) for n in INPUT_FIELDS + DERIVED_FIELDS}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DetonationParams":
        """Build from a mapping; derived fields, if present, must agree with the inputs."""
        unknown = set(data) - set(INPUT_FIELDS) - set(DERIVED_FIELDS)
        if unknown:
            raise AdmissibilityError(f"unknown parameter fields: {sorted(unknown)}")
        missing = [n for n in INPUT_FIELDS if n not in data]
        if missing:
            raise AdmissibilityError(f"missing parameter fields: {missing}")
        p = cls(**{n: data[n] for n in INPUT_FIELDS})
        for name in DERIVED_FIELDS:
            if name in data:
                given = data[name]
                ours = getattr(p, name)
                if not isinstance(given, (int, float)) or abs(given - ours) > DERIVED_RTOL * max(1.0, abs(ours)):
                    raise AdmissibilityError(f"derived field {name}={given!r} inconsistent with inputs ({ours!r})")
        return p

    @classmethod
    def from_json(cls, text: str) -> "DetonationParams":
        return cls.from_dict(json.loads(text))


def build_params(u_plus: float, u_star: float, q: float, k: float, u_i: float) -> DetonationParams:
    return DetonationParams(u_plus, u_star, q, k, u_i)


def ignition(params: DetonationParams, u: float) -> int:
    """Step ignition function: 0 below ``u_i``, 1 at and above it."""
    return 1 if u >= params.u_i else 0


#: Canonical parameter sets used by tests, docs and the reproduce driver.
P0 = DetonationParams(u_plus=0.0, u_star=2.0, q=0.3, k=1.0, u_i=1.2)
P1 = DetonationParams(u_plus=0.5, u_star=1.5, q=0.1, k=2.0, u_i=1.0)
