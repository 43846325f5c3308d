"""Travelling-wave reduction: residuals, Lagrangian density, first integral,
and a collocation Newton solver for the two-point boundary-value problem.

With z = x - v t and mu = K_s - m v^2 the profile equations are

    res1 = mu r^2 alpha(phi) phi'' + (K_t - M R^2 v^2 + mu r^2 beta(phi)) theta''
           - mu r R phi' (phi' + 2 theta') sin(phi)
           - g (R (M + m) sin(theta) + m r sin(phi + theta))
    res2 = mu r^2 phi'' + mu r^2 alpha(phi) theta'' - h'(phi)
           + mu r R theta'^2 sin(phi) - m g r sin(phi + theta)

written throughout via the products r^2 alpha = r (r + R cos phi) and
r^2 beta = r^2 + R^2 + 2 r R cos phi so the r = 0 limit stays regular.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ._stencils import derivative, derivative_matrix
from .params import ChainParams


class TWSolveError(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class TWParams:
    """Wave speed and the derived combination mu = K_s - m v^2."""

    v: float
    mu: float

    @classmethod
    def for_speed(cls, v, params: ChainParams):
        return cls(float(v), float(params.Ks - params.m * v * v))

    def check(self, params: ChainParams):
        expect = params.Ks - params.m * self.v**2
        scale = abs(expect) + abs(self.mu) + 1.0
        if abs(self.mu - expect) > 1e-14 * scale:
            raise ValueError("mu inconsistent with v for these chain parameters")


@dataclass(frozen=True)
class TWProfile:
    """Profiles on a uniform z-grid. theta_zz/phi_zz are optional exact
    curvature samples; when absent, residuals fall back to finite differences.
    """

    z: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    theta_z: np.ndarray
    phi_z: np.ndarray
    tw: TWParams
    N: int = 1
    theta_zz: Optional[np.ndarray] = None
    phi_zz: Optional[np.ndarray] = None

    @property
    def dz(self):
        return float(self.z[1] - self.z[0])


def _residual_core(theta, phi, theta_z, phi_z, theta_zz, phi_zz, mu, v,
                   params: ChainParams):
    M, m, R, r, g = params.M, params.m, params.R, params.r, params.g
    c, s = np.cos(phi), np.sin(phi)
    r2a = r * (r + R * c)
    r2b = r * r + R * R + 2 * r * R * c
    res1 = (mu * r2a * phi_zz
            + (params.Kt - M * R**2 * v**2 + mu * r2b) * theta_zz
            - mu * r * R * phi_z * (phi_z + 2 * theta_z) * s
            - g * (R * (M + m) * np.sin(theta) + m * r * np.sin(phi + theta)))
    res2 = (mu * r * r * phi_zz + mu * r2a * theta_zz
            - params.h_spec.dh(phi)
            + mu * r * R * theta_z**2 * s
            - m * g * r * np.sin(phi + theta))
    return res1, res2


def tw_residual(profile: TWProfile, params: ChainParams):
    """Left-hand sides of the two profile equations along z.

    First derivatives come from the profile (its builder is responsible for
    their consistency); second derivatives use stored exact samples when the
    profile carries them and 4th-order finite differences otherwise.
    """
    profile.tw.check(params)
    dz = profile.dz
    tzz = profile.theta_zz
    pzz = profile.phi_zz
    if tzz is None:
        tzz = derivative(profile.theta, dz, 2)
    if pzz is None:
        pzz = derivative(profile.phi, dz, 2)
    return _residual_core(profile.theta, profile.phi, profile.theta_z,
                          profile.phi_z, tzz, pzz, profile.tw.mu,
                          profile.tw.v, params)


def _density_raw(theta, phi, theta_z, phi_z, v, mu, M, m, R, r, Kt, g, h_spec):
    """Lagrangian density from bare coefficient values (callers may pass
    algebraic continuations that no valid ChainParams represents)."""
    c = np.cos(phi)
    r2a = r * (r + R * c)
    r2b = r * r + R * R + 2 * r * R * c
    C_theta = M * R**2 * v**2 - Kt - mu * r2b
    return (0.5 * C_theta * theta_z**2 - 0.5 * mu * r * r * phi_z**2
            - mu * r2a * theta_z * phi_z
            + g * ((M + m) * R * np.cos(theta) + m * r * np.cos(phi + theta))
            - h_spec.h(phi))


def tw_lagrangian_density(theta, phi, theta_z, phi_z, tw: TWParams,
                          params: ChainParams):
    """Density whose Euler-Lagrange equations are the profile equations.

    L = 1/2 (M R^2 v^2 - K_t - mu r^2 beta) theta'^2 - (mu r^2 / 2) phi'^2
        - mu r^2 alpha theta' phi'
        + g ((M + m) R cos theta + m r cos(phi + theta)) - h(phi)
    """
    return _density_raw(theta, phi, theta_z, phi_z, tw.v, tw.mu,
                        params.M, params.m, params.R, params.r,
                        params.Kt, params.g, params.h_spec)


def tw_first_integral(profile: TWProfile, params: ChainParams):
    """E = theta' dL/dtheta' + phi' dL/dphi' - L; constant on exact solutions."""
    th, ph = profile.theta, profile.phi
    thz, phz = profile.theta_z, profile.phi_z
    M, m, R, r, g = params.M, params.m, params.R, params.r, params.g
    mu, v = profile.tw.mu, profile.tw.v
    c = np.cos(ph)
    r2a = r * (r + R * c)
    r2b = r * r + R * R + 2 * r * R * c
    C_theta = M * R**2 * v**2 - params.Kt - mu * r2b
    return (0.5 * C_theta * thz**2 - 0.5 * mu * r * r * phz**2
            - mu * r2a * thz * phz
            - g * ((M + m) * R * np.cos(th) + m * r * np.cos(ph + th))
            + params.h_spec.h(ph))


def kink_profile(z, k, v, params: ChainParams, pi_shift=False,
                 with_curvature=True, index=1):
    """Analytic single-kink profile (phi = 0) usable as data or solver guess.

    pi_shift moves the connection to (-pi, pi) instead of (0, 2 pi).
    """
    z = np.asarray(z, dtype=float)
    u = k * z
    e = np.exp(-np.abs(u))
    sech = 2.0 * e / (1.0 + e * e)
    tanh = np.tanh(u)
    half = 4.0 * np.arctan(e)  # mirrored form: tail-exact, no overflow
    base = np.where(u <= 0.0, half, 2.0 * np.pi - half)
    theta = index * base - (np.pi if pi_shift else 0.0)
    theta_z = index * 2.0 * k * sech
    zeros = np.zeros_like(z)
    tzz = index * (-2.0) * k * k * sech * tanh if with_curvature else None
    pzz = zeros.copy() if with_curvature else None
    return TWProfile(z, theta, zeros, theta_z, zeros.copy(),
                     TWParams.for_speed(v, params), N=index,
                     theta_zz=tzz, phi_zz=pzz)


def _jacobian_blocks(theta, phi, theta_z, phi_z, theta_zz, phi_zz, mu, v,
                     params: ChainParams):
    """Pointwise d(res)/d(field, field', field'') coefficients."""
    M, m, R, r, g = params.M, params.m, params.R, params.r, params.g
    c, s = np.cos(phi), np.sin(phi)
    r2a = r * (r + R * c)
    r2b = r * r + R * R + 2 * r * R * c
    d_r2a = -r * R * s
    d_r2b = -2 * r * R * s

    j = {}
    j["r1_t0"] = -g * (R * (M + m) * np.cos(theta) + m * r * np.cos(phi + theta))
    j["r1_t1"] = -2 * mu * r * R * phi_z * s
    j["r1_t2"] = params.Kt - M * R**2 * v**2 + mu * r2b
    j["r1_p0"] = (mu * d_r2a * phi_zz + mu * d_r2b * theta_zz
                  - mu * r * R * phi_z * (phi_z + 2 * theta_z) * c
                  - g * m * r * np.cos(phi + theta))
    j["r1_p1"] = -2 * mu * r * R * (phi_z + theta_z) * s
    j["r1_p2"] = mu * r2a

    j["r2_t0"] = -m * g * r * np.cos(phi + theta)
    j["r2_t1"] = 2 * mu * r * R * theta_z * s
    j["r2_t2"] = mu * r2a
    j["r2_p0"] = (mu * d_r2a * theta_zz - params.h_spec.d2h(phi)
                  + mu * r * R * theta_z**2 * c - m * g * r * np.cos(phi + theta))
    j["r2_p1"] = np.zeros_like(theta)
    j["r2_p2"] = np.full_like(theta, mu * r * r)
    return j


def solve_tw_bvp(guess: TWProfile, params: ChainParams, tw: TWParams,
                 tol=1e-10, max_iter=60) -> TWProfile:
    """Damped Newton on the 4th-order collocation system.

    Dirichlet values are taken from the ends of the guess (so 0 -> 2 pi N and
    pi-shifted connections are both supported); the translation zero mode is
    removed by a bordered pinning row theta(z_mid) = mean of the end values.
    Raises TWSolveError on non-convergence, with the final residual attached.
    """
    params.require_dynamic()
    tw.check(params)
    if tw.mu == 0:
        raise TWSolveError("mu = 0: profile equations are degenerate")
    z = guess.z
    n = z.shape[0]
    dz = guess.dz
    D1 = derivative_matrix(n, dz, 1)
    D2 = derivative_matrix(n, dz, 2)
    th_l, th_r = guess.theta[0], guess.theta[-1]
    ph_l, ph_r = guess.phi[0], guess.phi[-1]
    mid = n // 2
    pin_target = 0.5 * (th_l + th_r)

    theta = guess.theta.copy()
    phi = guess.phi.copy()

    def full_residual(theta, phi):
        tz, pz = D1 @ theta, D1 @ phi
        tzz, pzz = D2 @ theta, D2 @ phi
        r1, r2 = _residual_core(theta, phi, tz, pz, tzz, pzz, tw.mu, tw.v, params)
        return r1, r2, tz, pz, tzz, pzz

    def packed(theta, phi, r1, r2):
        F = np.empty(2 * n + 1)
        F[0:2 * n:2] = r1
        F[1:2 * n:2] = r2
        # boundary rows replace the outermost collocation equations
        F[0], F[1] = theta[0] - th_l, phi[0] - ph_l
        F[2 * n - 2], F[2 * n - 1] = theta[-1] - th_r, phi[-1] - ph_r
        F[2 * n] = theta[mid] - pin_target
        return F

    def norm(F):
        return float(np.max(np.abs(F)))

    r1, r2, tz, pz, tzz, pzz = full_residual(theta, phi)
    F = packed(theta, phi, r1, r2)
    best = norm(F)

    for iteration in range(max_iter):
        if best < tol:
            break
        jb = _jacobian_blocks(theta, phi, tz, pz, tzz, pzz, tw.mu, tw.v, params)
        eye = sp.identity(n, format="csr")

        def block(c0, c1, c2):
            return (sp.diags(c0) @ eye + sp.diags(c1) @ D1 + sp.diags(c2) @ D2)

        J11 = block(jb["r1_t0"], jb["r1_t1"], jb["r1_t2"])
        J12 = block(jb["r1_p0"], jb["r1_p1"], jb["r1_p2"])
        J21 = block(jb["r2_t0"], jb["r2_t1"], jb["r2_t2"])
        J22 = block(jb["r2_p0"], jb["r2_p1"], jb["r2_p2"])

        # interleave fields: unknown vector is (theta_0, phi_0, theta_1, ...)
        perm = np.empty(2 * n, dtype=int)
        perm[0:2 * n:2] = np.arange(n)
        perm[1:2 * n:2] = np.arange(n) + n
        J = sp.bmat([[J11, J12], [J21, J22]], format="csr")
        P = sp.csr_matrix((np.ones(2 * n), (np.arange(2 * n), perm)),
                          shape=(2 * n, 2 * n))
        J = P @ J @ P.T

        J = J.tolil()
        for row, col in ((0, 0), (1, 1), (2 * n - 2, 2 * n - 2), (2 * n - 1, 2 * n - 1)):
            J.rows[row] = [col]
            J.data[row] = [1.0]
        J = J.tocsr()

        # border: pin row theta(mid); column is the translation direction
        tangent = np.zeros(2 * n)
        tangent[0:2 * n:2] = tz
        tangent[1:2 * n:2] = pz
        tangent[[0, 1, 2 * n - 2, 2 * n - 1]] = 0.0
        pin_row = np.zeros(2 * n)
        pin_row[2 * mid] = 1.0
        A = sp.bmat([[J, tangent[:, None]], [pin_row[None, :], None]],
                    format="csc")
        try:
            lu = splu(A)
        except RuntimeError as exc:
            raise TWSolveError(f"singular Jacobian: {exc}", best) from exc
        delta = lu.solve(-F)

        lam = 1.0
        while lam >= 1e-3:
            th_new = theta + lam * delta[0:2 * n:2]
            ph_new = phi + lam * delta[1:2 * n:2]
            r1n, r2n, tzn, pzn, tzzn, pzzn = full_residual(th_new, ph_new)
            Fn = packed(th_new, ph_new, r1n, r2n)
            if norm(Fn) < best:
                theta, phi = th_new, ph_new
                r1, r2, tz, pz, tzz, pzz = r1n, r2n, tzn, pzn, tzzn, pzzn
                F, best = Fn, norm(Fn)
                break
            lam *= 0.5
        else:
            raise TWSolveError(
                f"line search stalled at residual {best:.3e}", best)
    else:
        raise TWSolveError(
            f"no convergence after {max_iter} iterations "
            f"(residual {best:.3e})", best)

    return TWProfile(z, theta, phi, D1 @ theta, D1 @ phi, tw, N=guess.N)


def export_profile_csv(profile: TWProfile, params: ChainParams, path):
    res1, res2 = tw_residual(profile, params)
    E = tw_first_integral(profile, params)
    with open(path, "w") as f:
        f.write("# schema: tw-profile v1\n")
        f.write("z,theta,phi,theta_z,phi_z,res1,res2,E_tw\n")
        for j in range(profile.z.shape[0]):
            row = (profile.z[j], profile.theta[j], profile.phi[j],
                   profile.theta_z[j], profile.phi_z[j], res1[j], res2[j],
                   E[j])
            f.write(",".join(repr(float(x)) for x in row) + "\n")
