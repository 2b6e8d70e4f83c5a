from __future__ import annotations

import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from majda_znd import P0, P1, det_closed_form, evaluate, psi, psi_abscissa
from majda_znd.errors import DomainError
from majda_znd.lopatinski import OSCILLATION_SWITCH, _psi_quadrature, _z1_by_ode, jump_vector, p_antiderivative, p_coeff
from majda_znd.stability import coeff_floor, psi_max

PSI0 = {"P0": 1.2251482265544138, "P1": 1.3819660112501053}


@pytest.mark.parametrize("p, name", [(P0, "P0"), (P1, "P1")])
def test_psi_at_zero(p, name):
    value, err = psi(p, 0.0)
    exact = ((p.s - p.u_plus) - p.c_minus) / (p.q * p.k)
    assert abs(value - exact) <= 1e-10 * exact
    assert value.real == pytest.approx(PSI0[name], rel=1e-12)
    assert err <= 1e-10 * exact


def test_det_vanishes_at_zero_and_matches_value_at_one():
    assert det_closed_form(P0, 0.0) == 0
    assert det_closed_form(P0, 1.0).real == pytest.approx(1.7971148950023406, rel=1e-10)


def test_antiderivative_by_finite_differences(reference_params):
    p = reference_params
    lam = 0.7 - 1.3j
    h = 1e-5
    for xi in (-5.0, -1.0, -0.1):
        fd = (p_antiderivative(p, lam, xi + h) - p_antiderivative(p, lam, xi - h)) / (2 * h)
        assert abs(fd - p_coeff(p, lam, xi)) <= 1e-8 * abs(p_coeff(p, lam, xi))


def test_jump_vector():
    j1, j2 = jump_vector(P0, 2.0)
    assert j1 == pytest.approx(2.0 * (P0.u_plus - P0.u_star) + P0.q * P0.k)
    assert j2 == -P0.k


def test_domain_left_of_abscissa():
    a = psi_abscissa(P0)
    assert -P0.k < a < 0
    with pytest.raises(DomainError):
        psi(P0, complex(a - 1e-3, 0.0))
    # just inside the strip the integral still converges
    value, _ = psi(P0, complex(0.5 * a, 0.0))
    assert np.isfinite(value)


def test_identity_residual_recorded():
    ev = evaluate(P1, 1.0 + 2.0j)
    assert ev.identity_residual <= 1e-9
    assert ev.method == "quadrature"


def test_high_frequency_switch_agrees_with_quadrature():
    lam = complex(0.3, OSCILLATION_SWITCH * P0.k + 1.0)
    quad, _ = _psi_quadrature(P0, lam, 1e-12, 1e-13)
    ode, _ = psi(P0, lam)
    assert abs(quad - ode) <= 1e-8 * abs(quad)
    z1 = _z1_by_ode(P0, lam, 1e-10)
    assert np.isfinite(z1)


def test_derivative_at_zero_matches_floor(reference_params):
    p = reference_params
    h = 1e-3
    # four-point stencil on a circle: exact through degree 4
    d = sum(det_closed_form(p, h * w, 1e-13) / w for w in (1, 1j, -1, -1j)) / (4 * h)
    assert abs(d - coeff_floor(p)) <= 1e-8 * coeff_floor(p)


finite = st.floats(-1.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(re=st.floats(0.0, 8.0), im=st.floats(-8.0, 8.0))
def test_conjugate_symmetry(re, im):
    lam = complex(re, im)
    d = det_closed_form(P0, lam)
    d_bar = det_closed_form(P0, lam.conjugate())
    assert abs(d_bar - d.conjugate()) <= 1e-12 * (1 + abs(d))


@settings(max_examples=40, deadline=None)
@given(re=st.floats(0.0, 10.0), im=st.floats(-10.0, 10.0))
def test_psi_bounded_by_value_at_zero(re, im):
    value, _ = psi(P1, complex(re, im))
    assert abs(value) <= psi_max(P1) + 1e-9


@settings(max_examples=25, deadline=None)
@given(re=st.floats(0.01, 3.0), im=st.floats(-3.0, 3.0))
def test_psi_is_laplace_transform_decreasing_in_real_part(re, im):
    # a Laplace transform of a positive density: |Psi| decreases to the right
    lam = complex(re, im)
    assert abs(psi(P0, lam + 0.5)[0]) <= abs(psi(P0, lam)[0]) + 1e-12


def test_psi_is_analytic_cauchy_riemann():
    lam, h = 0.8 + 0.4j, 1e-5
    dx = (psi(P0, lam + h)[0] - psi(P0, lam - h)[0]) / (2 * h)
    dy = (psi(P0, lam + 1j * h)[0] - psi(P0, lam - 1j * h)[0]) / (2j * h)
    assert cmath.isclose(dx, dy, rel_tol=1e-6)
