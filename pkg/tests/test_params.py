from __future__ import annotations

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from majda_znd import P0, P1, AdmissibilityError, DetonationParams, DomainError, build_params, ignition, q_max


def test_p0_derived_values():
    assert P0.s == 1.0
    assert P0.u_minus == pytest.approx(1.0 + math.sqrt(0.4), abs=1e-15)
    assert P0.q_max == pytest.approx(0.5)


def test_p1_derived_values():
    assert P1.s == 1.0
    assert P1.u_minus == pytest.approx(1.0 + math.sqrt(0.05), abs=1e-15)
    assert P1.q_max == pytest.approx(0.125)


@pytest.mark.parametrize(
    "fields, needle",
    [
        ((1.0, 0.5, 0.1, 1.0, 0.8), "u_star"),  # Lax order reversed
        ((0.0, 2.0, 0.5, 1.0, 1.2), "q"),  # q at q_max
        ((0.0, 2.0, -0.1, 1.0, 1.2), "q"),
        ((0.0, 2.0, 0.3, 0.0, 1.2), "k"),
        ((0.0, 2.0, 0.3, 1.0, 0.0), "u_i"),  # ignites the cold state
        ((0.0, 2.0, 0.3, 1.0, 1.9), "u_i"),  # burnt state unignited
    ],
)
def test_inadmissible_parameters_name_the_condition(fields, needle):
    with pytest.raises(AdmissibilityError, match=needle):
        build_params(*fields)


def test_q_max_requires_ordering():
    assert q_max(0.0, 2.0) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        q_max(2.0, 1.0)


def test_ignition_is_a_step_closed_at_threshold():
    assert ignition(P0, P0.u_i) == 1
    assert ignition(P0, P0.u_i - 1e-12) == 0
    assert ignition(P0, P0.u_plus) == 0
    assert ignition(P0, P0.u_star) == 1


def test_dict_round_trip_and_unknown_fields():
    d = P1.to_dict()
    assert DetonationParams.from_dict(d) == P1
    assert DetonationParams.from_json(json.dumps(d)) == P1
    with pytest.raises((AdmissibilityError, ValueError)):
        DetonationParams.from_dict({**d, "gamma": 1.4})


def test_inconsistent_derived_field_rejected():
    d = {**P0.to_dict(), "s": 1.5}
    with pytest.raises((AdmissibilityError, ValueError)):
        DetonationParams.from_dict(d)


@given(
    u_plus=st.floats(0.0, 3.0),
    gap=st.floats(0.05, 5.0),
    frac=st.floats(0.01, 0.99),
    k=st.floats(1e-2, 1e2),
)
def test_admissible_draws_satisfy_lax_and_rh(u_plus, gap, frac, k):
    u_star = u_plus + gap
    q = frac * q_max(u_plus, u_star)
    s = 0.5 * (u_plus + u_star)
    p = build_params(u_plus, u_star, q, k, u_plus + 0.5 * (s - u_plus))
    assert p.u_minus > p.s > p.u_plus
    # RH across the Neumann shock and the burnt state balance
    assert abs(p.s * (p.u_plus - p.u_star) - 0.5 * (p.u_plus**2 - p.u_star**2)) <= 1e-12 * (1 + p.u_star**2)
    lhs = p.s * p.u_minus - 0.5 * p.u_minus**2
    rhs = p.s * (p.u_plus + p.q) - 0.5 * p.u_plus**2
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)
