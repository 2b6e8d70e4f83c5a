from __future__ import annotations

import json

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from majda_znd import DetonationParams, det_closed_form, psi
from majda_znd.reports import canonical_json
from majda_znd.stability import coeff_floor, params_from_fractions, psi_max, radius_bound

admissible = st.builds(
    params_from_fractions,
    u_plus=st.floats(0.0, 2.0),
    u_star=st.floats(2.1, 5.0),
    q_fraction=st.floats(1e-3, 0.999),
    k=st.floats(1e-2, 1e2),
    u_i_fraction=st.floats(0.05, 0.95),
)


@settings(max_examples=200, deadline=None)
@given(admissible)
def test_floor_and_bounds_are_positive(p):
    assert coeff_floor(p) > 0
    assert psi_max(p) > 0
    assert radius_bound(p) > 0
    # the floor is the real part of the coefficient at its worst
    assert coeff_floor(p) == (p.u_star - p.u_plus - p.q - p.q * p.k * psi_max(p)) or abs(
        coeff_floor(p) - (p.u_star - p.u_plus - p.q - p.q * p.k * psi_max(p))
    ) <= 1e-12 * (p.u_star - p.u_plus)


@settings(max_examples=40, deadline=None)
@given(admissible)
def test_quadrature_hits_psi_at_zero(p):
    value, _ = psi(p, 0.0)
    assert abs(value - psi_max(p)) <= 1e-10 * psi_max(p)


@settings(max_examples=30, deadline=None)
@given(admissible, st.floats(0.0, 10.0), st.floats(-10.0, 10.0))
def test_conjugate_symmetry_random_params(p, a, b):
    lam = complex(a * p.k, b * p.k)
    d = det_closed_form(p, lam)
    assert abs(det_closed_form(p, lam.conjugate()) - d.conjugate()) <= 1e-12 * (1 + abs(d))


@settings(max_examples=30, deadline=None)
@given(admissible, st.floats(0.05, 10.0), st.floats(-10.0, 10.0))
def test_no_zero_off_origin_in_right_half_plane(p, a, b):
    lam = complex(a * p.k, b * p.k)
    assert abs(det_closed_form(p, lam)) > 0


@settings(max_examples=100, deadline=None)
@given(admissible)
def test_params_serialisation_is_idempotent(p):
    text = canonical_json(p.to_dict())
    again = DetonationParams.from_dict(json.loads(text))
    assert again == p
    assert canonical_json(again.to_dict()) == text


@given(st.recursive(st.none() | st.booleans() | st.integers() | st.floats(allow_nan=False) | st.text(),
                    lambda c: st.lists(c) | st.dictionaries(st.text(), c), max_leaves=20))
def test_canonical_json_round_trips(obj):
    text = canonical_json(obj)
    assert canonical_json(json.loads(text)) == text


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(-5.0, 5.0), st.floats(0.1, 5.0))
def test_psi_scales_with_k(a, b, scale):
    # Psi(lam; k) = Psi(lam / scale; k / scale) / scale
    p = params_from_fractions(0.0, 2.0, 0.6, 1.0)
    p2 = params_from_fractions(0.0, 2.0, 0.6, scale)
    lam = complex(a, b)
    v1 = psi(p, lam)[0]
    v2 = psi(p2, lam * scale)[0]
    assert np.isclose(v1, v2 * scale, rtol=1e-9)
