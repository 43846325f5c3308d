"""Continuum limit: the two coupled field equations as a method-of-lines IVP.

Fields Theta(x, t), Phi(x, t) obey

    [[M R^2 + m r^2 beta, m r^2 alpha], [m r^2 alpha, m r^2]] (Theta_tt, Phi_tt)^T
        = (S1, S2)

with the same 2x2 kinetic matrix as the discrete chain and source terms

    S1 = (K_t + K_s r^2 beta) Theta_xx + K_s r^2 alpha Phi_xx
         + r R (m Phi_t (Phi_t + 2 Theta_t) - K_s Phi_x (Phi_x + 2 Theta_x)) sin Phi
         - g (R (M + m) sin Theta + m r sin(Phi + Theta))
    S2 = K_s r^2 (Phi_xx + alpha Theta_xx) - h'(Phi)
         - r R (m Theta_t^2 - K_s Theta_x^2) sin Phi - g m r sin(Phi + Theta)

where K_s = kappa_s delta^2, K_t = kappa_t delta^2. Spatial derivatives are
4th-order finite differences; evolve() clamps the two boundary nodes
(Dirichlet far-field values).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._stencils import derivative
from .params import ChainParams


class PDEInstabilityError(RuntimeError):
    pass


@dataclass(frozen=True)
class FieldGrid:
    x: np.ndarray
    Theta: np.ndarray
    Phi: np.ndarray
    Theta_t: np.ndarray
    Phi_t: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        arrays = [np.asarray(a, dtype=float)
                  for a in (self.x, self.Theta, self.Phi, self.Theta_t, self.Phi_t)]
        n = arrays[0].shape[0]
        if n < 6:
            raise ValueError("grid too short")
        if any(a.shape != (n,) for a in arrays):
            raise ValueError("field arrays must match the grid length")
        dx = np.diff(arrays[0])
        if np.any(np.abs(dx - dx[0]) > 1e-12 * abs(dx[0])):
            raise ValueError("grid must be uniform")
        for name, a in zip(("x", "Theta", "Phi", "Theta_t", "Phi_t"), arrays):
            object.__setattr__(self, name, a)

    @property
    def dx(self):
        return float(self.x[1] - self.x[0])

    @property
    def n(self):
        return self.x.shape[0]


def _sources(Theta, Phi, Theta_t, Phi_t, Theta_x, Phi_x, Theta_xx, Phi_xx,
             params: ChainParams):
    M, m, R, r, g = params.M, params.m, params.R, params.r, params.g
    Ks, Kt = params.Ks, params.Kt
    c, s = np.cos(Phi), np.sin(Phi)
    r2a = r * (r + R * c)
    r2b = r * r + R * R + 2 * r * R * c
    S1 = ((Kt + Ks * r2b) * Theta_xx + Ks * r2a * Phi_xx
          + r * R * (m * Phi_t * (Phi_t + 2 * Theta_t)
                     - Ks * Phi_x * (Phi_x + 2 * Theta_x)) * s
          - g * (R * (M + m) * np.sin(Theta) + m * r * np.sin(Phi + Theta)))
    S2 = (Ks * r * r * Phi_xx + Ks * r2a * Theta_xx - params.h_spec.dh(Phi)
          - r * R * (m * Theta_t**2 - Ks * Theta_x**2) * s
          - g * m * r * np.sin(Phi + Theta))
    return S1, S2, r2a, r2b


def pde_rhs(grid: FieldGrid, params: ChainParams):
    """Pointwise accelerations (Theta_tt, Phi_tt).

    Degenerate m r^2 = 0: Phi carries no inertia; its acceleration is
    reported as zero and Theta follows the single-field equation.
    """
    params.require_dynamic()
    dx = grid.dx
    Theta_x = derivative(grid.Theta, dx, 1)
    Phi_x = derivative(grid.Phi, dx, 1)
    Theta_xx = derivative(grid.Theta, dx, 2)
    Phi_xx = derivative(grid.Phi, dx, 2)
    S1, S2, r2a, r2b = _sources(grid.Theta, grid.Phi, grid.Theta_t, grid.Phi_t,
                                Theta_x, Phi_x, Theta_xx, Phi_xx, params)
    M, m, R, r = params.M, params.m, params.R, params.r
    m11 = M * R**2 + m * r2b
    m12 = m * r2a
    m22 = m * r * r
    if m22 == 0:
        return S1 / m11, np.zeros_like(S2)
    det = m11 * m22 - m12 * m12
    return (m22 * S1 - m12 * S2) / det, (m11 * S2 - m12 * S1) / det


def max_wave_speed(params: ChainParams):
    """Crude upper bound on the linear signal speed, for CFL checks."""
    M, m, R, r = params.M, params.m, params.R, params.r
    c2 = (params.Kt + params.Ks * (r + R) ** 2) / (M * R**2)
    if m > 0 and r > 0:
        c2 = max(c2, params.Ks / m)
    return float(np.sqrt(c2))


def evolve(grid: FieldGrid, t_end, dt, params: ChainParams, snapshot_every=None):
    """RK4 method-of-lines evolution with clamped (Dirichlet) end nodes."""
    if not (t_end > 0 and dt > 0):
        raise ValueError("t_end and dt must be positive")
    cmax = max_wave_speed(params)
    if dt > 0.5 * grid.dx / cmax:
        raise ValueError(
            f"dt = {dt} violates the stability bound 0.5 dx / c_max = "
            f"{0.5 * grid.dx / cmax}")
    n_steps = max(1, int(round(t_end / dt)))
    if snapshot_every is None:
        snapshot_every = n_steps

    def rhs(y, t):
        Theta, Phi, Theta_t, Phi_t = y
        acc = pde_rhs(FieldGrid(grid.x, Theta, Phi, Theta_t, Phi_t, t), params)
        out = [Theta_t.copy(), Phi_t.copy(), acc[0], acc[1]]
        for a in out:  # clamp boundary nodes
            a[0] = a[-1] = 0.0
        return out

    y = [grid.Theta.copy(), grid.Phi.copy(), grid.Theta_t.copy(), grid.Phi_t.copy()]
    t = grid.t
    snaps = [grid]
    for i in range(n_steps):
        k1 = rhs(y, t)
        k2 = rhs([a + 0.5 * dt * b for a, b in zip(y, k1)], t + 0.5 * dt)
        k3 = rhs([a + 0.5 * dt * b for a, b in zip(y, k2)], t + 0.5 * dt)
        k4 = rhs([a + dt * b for a, b in zip(y, k3)], t + dt)
        y = [a + dt / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
             for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]
        t = grid.t + (i + 1) * dt
        if max(np.max(np.abs(y[0])), np.max(np.abs(y[1]))) > 1e6:
            raise PDEInstabilityError(f"fields blew up at t = {t}")
        if (i + 1) % snapshot_every == 0 or i == n_steps - 1:
            snaps.append(FieldGrid(grid.x, *[a.copy() for a in y], t=t))
    return snaps


def energy_density(grid: FieldGrid, params: ChainParams):
    """H = T + U_t + U_s + U_p + U_c per unit length."""
    M, m, R, r, g = params.M, params.m, params.R, params.r, params.g
    Ks, Kt = params.Ks, params.Kt
    dx = grid.dx
    Theta_x = derivative(grid.Theta, dx, 1)
    Phi_x = derivative(grid.Phi, dx, 1)
    c = np.cos(grid.Phi)
    r2a = r * (r + R * c)
    r2b = r * r + R * R + 2 * r * R * c
    T = (0.5 * (M * R**2 + m * r2b) * grid.Theta_t**2
         + 0.5 * m * r * r * grid.Phi_t**2 + m * r2a * grid.Theta_t * grid.Phi_t)
    U_grad = (0.5 * Kt * Theta_x**2
              + 0.5 * Ks * (r * r * Phi_x**2 + 2 * r2a * Theta_x * Phi_x
                            + r2b * Theta_x**2))
    U_p = g * ((M + m) * R * (1 - np.cos(grid.Theta))
               + m * r * (1 - np.cos(grid.Phi + grid.Theta)))
    U_c = params.h_spec.h(grid.Phi)
    return T + U_grad + U_p + U_c


def energy_total(grid: FieldGrid, params: ChainParams):
    return float(np.trapezoid(energy_density(grid, params), grid.x))


def topological_charge(grid: FieldGrid):
    """Round((Theta(end) - Theta(start)) / 2 pi); rejects ragged boundary data."""
    w = (grid.Theta[-1] - grid.Theta[0]) / (2 * np.pi)
    n = round(float(w))
    if abs(w - n) >= 0.25:
        raise ValueError("non-topological boundary data")
    return int(n)


def kink_field_grid(params: ChainParams, k, v, x, center=None, index=1):
    """Travelling-kink initial data sampled on grid x."""
    x = np.asarray(x, dtype=float)
    if center is None:
        center = 0.5 * (x[0] + x[-1])
    u = k * (x - center)
    e = np.exp(-np.abs(u))
    half = 4.0 * np.arctan(e)  # mirrored form: tail-exact, no overflow
    Theta = index * np.where(u <= 0.0, half, 2.0 * np.pi - half)
    sech = 2.0 * e / (1.0 + e * e)
    Theta_t = index * (-v) * 2.0 * k * sech
    z = np.zeros_like(x)
    return FieldGrid(x, Theta, z, Theta_t, z.copy(), 0.0)


def export_fields_csv(snaps, path):
    with open(path, "w") as f:
        f.write("# schema: pde-fields v1\n")
        f.write("t,x,Theta,Phi,Theta_t,Phi_t\n")
        for g in snaps:
            for j in range(g.n):
                f.write(f"{float(g.t)!r},{float(g.x[j])!r},"
                        f"{float(g.Theta[j])!r},{float(g.Phi[j])!r},"
                        f"{float(g.Theta_t[j])!r},{float(g.Phi_t[j])!r}\n")


def export_energy_csv(snaps, params: ChainParams, path):
    with open(path, "w") as f:
        f.write("# schema: pde-energy v1\n")
        f.write("t,E,N\n")
        for g in snaps:
            try:
                q = str(topological_charge(g))
            except ValueError:
                q = ""  # boundary data carries no clean winding number
            f.write(f"{float(g.t)!r},{float(energy_total(g, params))!r},{q}\n")
