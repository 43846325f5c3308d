"""Discrete-chain mechanics: per-site energies, forces, and the Lagrangian.

Site i carries two angles: theta (outer beam, measured from the downward
vertical) and phi (inner beam, measured relative to the outer one). The inner
bob tip sits at

    x = R cos(theta) + r cos(theta + phi)
    y = R sin(theta) + r sin(theta + phi)

Neighboring sites couple through a torsional spring in theta and a harmonic
"stacking" spring between tips.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ChainParams


@dataclass(frozen=True)
class LatticeState:
    """Angles and angular velocities of every site at one instant."""

    theta: np.ndarray
    phi: np.ndarray
    theta_dot: np.ndarray
    phi_dot: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        arrays = [np.asarray(a, dtype=float)
                  for a in (self.theta, self.phi, self.theta_dot, self.phi_dot)]
        n = arrays[0].shape[0]
        if any(a.shape != (n,) for a in arrays):
            raise ValueError("state arrays must share a common length")
        for name, a in zip(("theta", "phi", "theta_dot", "phi_dot"), arrays):
            object.__setattr__(self, name, a)

    @property
    def n_sites(self):
        return self.theta.shape[0]


def alpha_beta(phi, params: ChainParams):
    """Dimensionless mass-matrix factors alpha(phi), beta(phi).

    alpha = 1 + (R/r) cos phi, beta = 1 + (R/r)^2 + 2 (R/r) cos phi.
    Undefined at r = 0.
    """
    if params.r == 0:
        raise ValueError("alpha/beta undefined at r = 0 (R/r ratio)")
    q = params.R / params.r
    c = np.cos(phi)
    return 1.0 + q * c, 1.0 + q * q + 2.0 * q * c


def tip_position(theta, phi, params: ChainParams):
    """Cartesian position of the inner bob tip."""
    x = params.R * np.cos(theta) + params.r * np.cos(theta + phi)
    y = params.R * np.sin(theta) + params.r * np.sin(theta + phi)
    return x, y


def kinetic_energy_site(theta_dot, phi, phi_dot, params: ChainParams):
    """Kinetic energy of one site; independent of theta itself."""
    M, m, R, r = params.M, params.m, params.R, params.r
    td, pd = np.asarray(theta_dot, float), np.asarray(phi_dot, float)
    return (0.5 * M * R**2 * td**2
            + 0.5 * m * (R**2 * td**2
                         + 2 * R * r * np.cos(phi) * (td**2 + td * pd)
                         + r**2 * (td + pd) ** 2))


def torsional_potential(theta_i, theta_ip1, params: ChainParams):
    return params.kappa_t * (1.0 - np.cos(np.asarray(theta_ip1) - theta_i))


def stacking_potential(theta_i, phi_i, theta_ip1, phi_ip1, params: ChainParams):
    """Harmonic tip-tip bond energy, written in angle variables.

    Equal to (kappa_s/2) |tip_{i+1} - tip_i|^2; the Cartesian form is kept as
    a test oracle, not used here.
    """
    R, r = params.R, params.r
    dth = np.asarray(theta_ip1, float) - theta_i
    sq = (2 * R**2 * (1 - np.cos(dth))
          + 2 * r**2 * (1 - np.cos(dth + phi_ip1 - phi_i))
          + 2 * R * r * (np.cos(phi_ip1) + np.cos(phi_i)
                         - np.cos(dth - phi_i) - np.cos(dth + phi_ip1)))
    return 0.5 * params.kappa_s * sq


def external_potential(theta, phi, params: ChainParams):
    """Gravitational energy relative to the rest configuration."""
    M, m, R, r, g = params.M, params.m, params.R, params.r, params.g
    return g * (M * R * (1 - np.cos(theta))
                + m * (R + r - R * np.cos(theta) - r * np.cos(phi + theta)))


def mass_matrix(phi, params: ChainParams):
    """Entries (m11, m12, m22) of the per-site 2x2 kinetic matrix.

    m11 = M R^2 + m r^2 beta(phi), m12 = m r^2 alpha(phi), m22 = m r^2,
    written via the products r^2 alpha = r (r + R cos phi) and
    r^2 beta = r^2 + R^2 + 2 r R cos phi so that r = 0 stays finite.
    """
    M, m, R, r = params.M, params.m, params.R, params.r
    c = np.cos(phi)
    r2a = r * (r + R * c)
    r2b = r * r + R * R + 2 * r * R * c
    return M * R**2 + m * r2b, m * r2a, np.full_like(np.asarray(phi, float), m * r**2)


def _bond_pairs(n, topology):
    i = np.arange(n - 1)
    j = i + 1
    if topology == "periodic":
        i = np.concatenate([i, [n - 1]])
        j = np.concatenate([j, [0]])
    return i, j


def potential_energy(state: LatticeState, params: ChainParams):
    """Total potential: torsional + stacking bonds, gravity, confinement."""
    th, ph = state.theta, state.phi
    i, j = _bond_pairs(state.n_sites, params.topology)
    u = np.sum(torsional_potential(th[i], th[j], params))
    u += np.sum(stacking_potential(th[i], ph[i], th[j], ph[j], params))
    u += np.sum(external_potential(th, ph, params))
    u += np.sum(params.h_spec.h(ph))
    return float(u)


def kinetic_energy(state: LatticeState, params: ChainParams):
    return float(np.sum(kinetic_energy_site(
        state.theta_dot, state.phi, state.phi_dot, params)))


def discrete_lagrangian(state: LatticeState, params: ChainParams):
    """L = T - (U_t + U_s + U_p + U_c) summed over the chain."""
    if state.n_sites < 2:
        raise ValueError("need at least two sites")
    return kinetic_energy(state, params) - potential_energy(state, params)


def _potential_gradient(state: LatticeState, params: ChainParams):
    """(dU/dtheta_i, dU/dphi_i) for the full potential, analytically."""
    th, ph = state.theta, state.phi
    n = state.n_sites
    M, m, R, r, g = params.M, params.m, params.R, params.r, params.g

    gth = g * (M * R * np.sin(th) + m * (R * np.sin(th) + r * np.sin(ph + th)))
    gph = g * m * r * np.sin(ph + th) + params.h_spec.dh(ph)

    i, j = _bond_pairs(n, params.topology)
    # torsional bonds
    s = params.kappa_t * np.sin(th[j] - th[i])
    np.add.at(gth, i, -s)
    np.add.at(gth, j, s)
    # stacking bonds, via the Cartesian chain rule:
    # dU/dq = -kappa_s (tip_j - tip_i) . d tip_i/dq  (and + for site j)
    xi, yi = tip_position(th[i], ph[i], params)
    xj, yj = tip_position(th[j], ph[j], params)
    dx, dy = xj - xi, yj - yi
    ks = params.kappa_s
    # d tip/d theta = (-y, x); d tip/d phi = (-r sin(th+ph), r cos(th+ph))
    np.add.at(gth, i, -ks * (dx * (-yi) + dy * xi))
    np.add.at(gth, j, ks * (dx * (-yj) + dy * xj))
    np.add.at(gph, i, -ks * r * (-dx * np.sin(th[i] + ph[i]) + dy * np.cos(th[i] + ph[i])))
    np.add.at(gph, j, ks * r * (-dx * np.sin(th[j] + ph[j]) + dy * np.cos(th[j] + ph[j])))
    return gth, gph


def lagrangian_coordinate_gradient(state: LatticeState, params: ChainParams):
    """(dL/dtheta_i, dL/dphi_i) at fixed velocities.

    The kinetic part contributes only through phi (the cos(phi) coupling).
    """
    gth, gph = _potential_gradient(state, params)
    m, R, r = params.m, params.R, params.r
    td, pd = state.theta_dot, state.phi_dot
    dT_dphi = -m * R * r * np.sin(state.phi) * (td**2 + td * pd)
    return -gth, dT_dphi - gph


def discrete_forces(state: LatticeState, params: ChainParams):
    """Generalized accelerations (theta_ddot, phi_ddot) per site.

    Solves the per-site 2x2 system  M(phi) qdd = b  with
      b_theta = -dU/dtheta + m r R sin(phi) (phi_dot^2 + 2 theta_dot phi_dot)
      b_phi   = -dU/dphi   - m r R sin(phi) theta_dot^2.
    At r = 0 the second angle carries no inertia and is reported frozen
    (phi_ddot = 0); theta follows the single-angle chain.
    """
    params.require_dynamic()
    gth, gph = _potential_gradient(state, params)
    m, R, r = params.m, params.R, params.r
    td, pd = state.theta_dot, state.phi_dot
    sphi = np.sin(state.phi)
    b_th = -gth + m * r * R * sphi * (pd**2 + 2 * td * pd)
    b_ph = -gph - m * r * R * sphi * td**2
    m11, m12, m22 = mass_matrix(state.phi, params)
    if m * r**2 == 0:
        return b_th / m11, np.zeros_like(b_ph)
    det = m11 * m22 - m12 * m12  # = m r^2 R^2 (M + m sin^2 phi) > 0
    return (m22 * b_th - m12 * b_ph) / det, (m11 * b_ph - m12 * b_th) / det
