"""Small tip-pendulum expansion: closed-form oracles for the first-order
outer correction, slaving formulas for the tip angle, series reconstruction
invariants, and the numerical order-extraction machinery."""
import dataclasses

import numpy as np
import pytest

from pendulon.params import ConfiningPotential
from pendulon.perturbation import (ExpansionParams, _forcing_coefficient,
                                   build_perturbative, coefficient_B,
                                   compose_series, kink_grid, kink_parameter,
                                   mu_hat, order1_phi, order1_theta,
                                   order2_phi, project_zero_mode,
                                   residual_scaling, sg_kink, taylor_extract,
                                   export_scaling_csv)
from pendulon.travelwave import tw_residual
from pendulon._stencils import derivative


def test_kink_parameter_value(exp_params):
    p = exp_params
    k = kink_parameter(p)
    assert k == pytest.approx(
        np.sqrt(p.Mhat * p.g / (p.A * (p.Khat - p.Mhat * p.v0**2))), rel=1e-14)
    assert mu_hat(p) < 0


def test_sonic_base_speed_rejected():
    fast = ExpansionParams(A=1.0, Mhat=1.0, Khat=1.0, g=1.0, v0=1.0)
    with pytest.raises(ValueError):
        kink_parameter(fast)


def test_sg_kink_self_consistency(exp_params):
    p = exp_params
    k = kink_parameter(p)
    z = np.linspace(-30.0 / k, 30.0 / k, 3001)
    kin = sg_kink(z, p)
    assert np.max(np.abs(np.sin(kin.theta0) - kin.sin_theta0)) < 1e-13
    assert np.max(np.abs(np.cos(kin.theta0) - kin.cos_theta0)) < 1e-13
    dz = z[1] - z[0]
    assert np.max(np.abs(derivative(kin.theta0, dz, 1)
                         - kin.theta0_z)) < 1e-6
    assert np.max(np.abs(derivative(kin.theta0_z, dz, 1)
                         - kin.theta0_zz)) < 1e-6


def test_sg_kink_tails_keep_relative_accuracy(exp_params):
    p = exp_params
    k = kink_parameter(p)
    for u in (-30.0, -22.0):
        th = sg_kink(np.array([u / k]), p).theta0[0]
        assert th == pytest.approx(4.0 * np.exp(u), rel=1e-10)
    th_right = sg_kink(np.array([30.0 / k]), p).theta0[0]
    assert 2 * np.pi - th_right == pytest.approx(4.0 * np.exp(-30.0),
                                                 rel=1e-8)


def test_order1_theta_closed_form(exp_params, exp_params_wide):
    # the forced linearization has the exact odd solution (C_f/k) z sech(kz)
    for p in (exp_params, exp_params_wide):
        k = kink_parameter(p)
        z = kink_grid(p)
        theta1 = order1_theta(p, z)
        exact = (_forcing_coefficient(p) / k) * z / np.cosh(k * z)
        assert np.max(np.abs(theta1 - exact)) < 1e-8


def test_order1_theta_is_odd_and_mode_free(exp_params):
    p = exp_params
    z = kink_grid(p)
    theta1 = order1_theta(p, z)
    assert np.max(np.abs(theta1 + theta1[::-1])) < 1e-8
    kin = sg_kink(z, p)
    overlap = np.trapezoid(theta1 * kin.theta0_z, z) \
        / np.trapezoid(kin.theta0_z**2, z)
    assert abs(overlap) < 1e-10


def test_order1_theta_grid_guards(exp_params):
    p = exp_params
    k = kink_parameter(p)
    with pytest.raises(ValueError, match="grid too short"):
        order1_theta(p, np.linspace(-5.0 / k, 5.0 / k, 500))
    uneven = np.concatenate([np.linspace(-30 / k, 0, 200),
                             np.linspace(0.01, 30 / k, 300)])
    with pytest.raises(ValueError):
        order1_theta(p, uneven)


def test_order1_phi_shape_and_sign(exp_params):
    p = exp_params
    z = kink_grid(p)
    phi1 = order1_phi(p, z)
    kin = sg_kink(z, p)
    coeff = p.A * p.Khat * p.r1 * kink_parameter(p) ** 2 / p.h_spec.d2h(0.0)
    assert coeff > 0
    assert np.max(np.abs(phi1 - coeff * kin.sin_theta0)) < 1e-14


def test_order2_phi_h3_term():
    # same geometry, synthetic cubic stiffness enters as -h3 phi1^2 / (2 h2)
    from pendulon.perturbation import _phi2
    p = ExpansionParams(A=1.0, Mhat=1.0, Khat=1.0, g=1.0, v0=0.3, r1=0.4,
                        h_spec=ConfiningPotential(family="quadratic", c2=2.0))
    z = kink_grid(p, n=1601)
    theta1 = order1_theta(p, z)
    phi1 = order1_phi(p, z)
    h2 = 2.0
    base = _phi2(p, theta1, phi1, z, h2, 0.0)
    bent = _phi2(p, theta1, phi1, z, h2, 0.7)
    assert np.allclose(bent - base, -0.7 * phi1**2 / (2 * h2), atol=1e-13)


def test_compose_series_order0_is_bare_kink(exp_params):
    p = exp_params
    sol = build_perturbative(p)
    prof = compose_series(sol, 0.0, 2)
    kin = sg_kink(sol.z, p)
    assert np.array_equal(prof.theta, kin.theta0)
    assert np.all(prof.phi == 0.0)
    assert prof.tw.v == p.v0


def test_compose_series_residual_improves_with_order(exp_params):
    p = exp_params
    sol = build_perturbative(p)
    eps = 0.05
    chain = p.to_chain_params(eps=eps)
    norms = []
    for order in (0, 1, 2):
        r1, r2 = tw_residual(compose_series(sol, eps, order), chain)
        norms.append(np.max(np.abs(r1)) + np.max(np.abs(r2)))
    assert norms[2] < norms[1] < norms[0]


def test_reconstruction_identities(exp_params):
    # bare parameters recombine to the hatted totals at every eps
    p = exp_params
    for eps in (0.0, 0.03, 0.17):
        c = p.to_chain_params(eps=eps)
        assert c.M + c.m == pytest.approx(p.Mhat, abs=1e-14)
        assert c.R + c.r == pytest.approx(p.A, abs=1e-14)
        assert c.Ks + c.Kt == pytest.approx(p.Khat, abs=1e-14)
        assert c.r == pytest.approx(eps * p.r1 + eps**2 * p.r2, abs=1e-14)
        assert c.Kt == pytest.approx(eps * p.k1 + eps**2 * p.k2, abs=1e-14)


def test_mu_series_truncation_is_cubic(exp_params):
    p = exp_params
    mu1 = -(p.k1 + p.m1 * p.v0**2)
    mu2 = -(p.k2 + p.m2 * p.v0**2 + 2 * p.m1 * p.v0 * p.v1)

    def gap(eps):
        c = p.to_chain_params(eps=eps)
        mu = c.Ks - c.m * p.speed(eps) ** 2
        return mu - (p.Khat + eps * mu1 + eps**2 * mu2)

    g1, g2 = gap(0.02), gap(0.04)
    assert abs(g2 / g1) == pytest.approx(8.0, rel=0.15)


def test_coefficient_B_special_zero():
    p = ExpansionParams(A=1.0, Mhat=1.2, Khat=1.1, g=0.9, v0=0.3,
                        r1=0.0, k1=0.0, v1=0.0, m1=0.5)
    assert coefficient_B(p) == 0.0


def test_project_zero_mode_removes_translation(exp_params):
    p = exp_params
    z = kink_grid(p)
    kin = sg_kink(z, p)
    f = 0.3 * kin.theta0_z + 0.1 * np.tanh(z) * kin.theta0_z**2
    g = project_zero_mode(f, z, p)
    overlap = np.trapezoid(g * kin.theta0_z, z)
    assert abs(overlap) < 1e-10 * np.trapezoid(kin.theta0_z**2, z)


def test_taylor_extract_validations(exp_params):
    p = exp_params
    z = kink_grid(p, n=801, half_width=20.0)
    with pytest.raises(ValueError):
        taylor_extract(p, 3, "phi", z)
    with pytest.raises(ValueError):
        taylor_extract(p, 1, "psi", z)
    with pytest.raises(ValueError):
        taylor_extract(p, 2, "phi", z, n_points=3)


def test_residual_scaling_requires_positive_eps(exp_params):
    with pytest.raises(ValueError):
        residual_scaling(exp_params, [0.0], 0)
    with pytest.raises(ValueError):
        residual_scaling(exp_params, [0.01, -0.02], 0)


def test_export_scaling_csv(tmp_path, exp_params):
    study = residual_scaling(exp_params, [0.02, 0.05], 0)
    path = tmp_path / "scaling.csv"
    export_scaling_csv(study, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# schema: residual-scaling v1"
    assert lines[1] == "eps,res_eq1_L2,res_eq2_L2"
    row = np.loadtxt(lines[2:], delimiter=",")
    assert row.shape == (2, 3)
    assert row[0, 0] == 0.02


def test_speed_polynomial(exp_params):
    p = exp_params
    assert p.speed(0.1) == pytest.approx(p.v0 + 0.1 * p.v1, abs=1e-15)
    q = dataclasses.replace(p, v2=0.7)
    assert q.speed(0.1) == pytest.approx(p.v0 + 0.1 * p.v1 + 0.007, abs=1e-15)
