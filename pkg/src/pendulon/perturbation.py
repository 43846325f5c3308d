"""Singular expansion of the travelling-wave problem about the sine-Gordon
kink.

The outer angle carries the kink. The inner angle never acquires its own
differential equation: at each order in eps the second profile equation is an
algebraic relation that slaves it to the kink fields, and this module builds
those orders explicitly and verifies the structure against a brute-force
extraction oracle that differentiates full BVP solutions in eps.

Series conventions: r = eps r1 + eps^2 r2, R = A - r, m = eps m1 + eps^2 m2,
M = Mhat - m, K_t = eps k1 + eps^2 k2, K_s = Khat - K_t,
v = v0 + eps v1 + eps^2 v2; the base state has r = m = 0 and phi identically
zero.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ._stencils import derivative, derivative_matrix
from .params import ChainParams, ConfiningPotential
from .travelwave import (TWParams, TWProfile, kink_profile, solve_tw_bvp,
                         tw_residual)


@dataclass(frozen=True)
class ExpansionParams:
    """Base-state constants and series coefficients of the expansion."""

    A: float
    Mhat: float
    Khat: float
    g: float
    eps: float = 0.0
    r1: float = 0.0
    r2: float = 0.0
    m1: float = 0.0
    m2: float = 0.0
    k1: float = 0.0
    k2: float = 0.0
    v0: float = 0.0
    v1: float = 0.0
    v2: float = 0.0
    h_spec: ConfiningPotential = field(default_factory=ConfiningPotential)

    def __post_init__(self):
        for name in ("A", "Mhat", "Khat", "g"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")

    def speed(self, eps: Optional[float] = None) -> float:
        e = self.eps if eps is None else eps
        return self.v0 + e * self.v1 + e * e * self.v2

    def to_chain_params(self, eps: Optional[float] = None,
                        delta: float = 1.0) -> ChainParams:
        e = self.eps if eps is None else eps
        r = e * self.r1 + e * e * self.r2
        m = e * self.m1 + e * e * self.m2
        Kt = e * self.k1 + e * e * self.k2
        Ks = self.Khat - Kt
        return ChainParams(M=self.Mhat - m, m=m, R=self.A - r, r=r,
                           kappa_t=Kt / delta**2, kappa_s=Ks / delta**2,
                           g=self.g, delta=delta, h_spec=self.h_spec)


class KinkArrays(NamedTuple):
    theta0: np.ndarray
    theta0_z: np.ndarray
    theta0_zz: np.ndarray
    sin_theta0: np.ndarray
    cos_theta0: np.ndarray


def mu_hat(params: ExpansionParams) -> float:
    """Mhat v0^2 - Khat; negative for every subsonic base state."""
    return params.Mhat * params.v0**2 - params.Khat


def kink_parameter(params: ExpansionParams) -> float:
    """Inverse width k = sqrt(Mhat g / (A (Khat - Mhat v0^2)))."""
    mh = mu_hat(params)
    if mh >= 0:
        raise ValueError("no kink at sonic or supersonic base speed")
    return float(np.sqrt(params.Mhat * params.g / (params.A * (-mh))))


def sg_kink(z, params: ExpansionParams) -> KinkArrays:
    """Kink closed forms: theta0 = 4 arctan(e^{kz}) together with its first
    two derivatives and sin/cos, all evaluated without composing trig with
    arctan (stable for arbitrarily large |kz|).
    """
    k = kink_parameter(params)
    u = k * np.asarray(z, dtype=float)
    e = np.exp(-np.abs(u))
    sech = 2.0 * e / (1.0 + e * e)
    tanh = np.tanh(u)
    # mirrored arctan keeps the exponentially small tails of theta0 exact;
    # arcsin(tanh u) would saturate once tanh rounds to +-1
    half = 4.0 * np.arctan(e)
    theta0 = np.where(u <= 0.0, half, 2.0 * np.pi - half)
    return KinkArrays(theta0,
                      2.0 * k * sech,
                      -2.0 * k * k * sech * tanh,
                      -2.0 * tanh * sech,
                      1.0 - 2.0 * sech * sech)


def coefficient_B(params: ExpansionParams) -> float:
    """Scalar combination of first-order coefficients reported alongside the
    order-1 problem; vanishes when r1, k1, v1 all vanish."""
    p = params
    k = kink_parameter(p)
    return (p.A**2 * k * p.r1
            - p.Mhat * p.g * ((1 - p.A**2) * p.k1
                              + 2 * p.A * p.Mhat * p.v0 * (p.r1 * p.v0 - p.A * p.v1)))


def _forcing_coefficient(params: ExpansionParams) -> float:
    """C_f in theta1'' - k^2 cos(theta0) theta1 = C_f sin(theta0)."""
    p = params
    k2 = kink_parameter(p) ** 2
    W1 = (1 - p.A**2) * p.k1 + 2 * p.A * p.Mhat * p.v0 * (p.r1 * p.v0 - p.A * p.v1)
    return (W1 * k2 + p.Mhat * p.g * p.r1) / (p.A**2 * mu_hat(p))


def _check_uniform(z):
    z = np.asarray(z, dtype=float)
    dz = np.diff(z)
    if z.shape[0] < 8 or np.max(np.abs(dz - dz[0])) > 1e-12 * abs(dz[0]):
        raise ValueError("need a uniform grid with at least 8 points")
    return z, float(dz[0])


def order1_theta(params: ExpansionParams, z) -> np.ndarray:
    """Order-1 outer correction from the linear two-point problem

        theta1'' - k^2 cos(theta0) theta1 = C_f sin(theta0),
        theta1(+-z_max) = 0,  <theta1, theta0'> = 0.

    The homogeneous operator annihilates the translation mode theta0', so the
    system is solved in bordered form; the constraint picks the member of the
    solution family orthogonal to that mode. The forcing is odd while the mode
    is even, hence the solvability integral vanishes and is checked, not
    assumed.
    """
    z, dz = _check_uniform(z)
    n = z.shape[0]
    k = kink_parameter(params)
    kin = sg_kink(z, params)
    Cf = _forcing_coefficient(params)
    f = Cf * kin.sin_theta0

    tail = max(abs(f[0]), abs(f[-1]))
    if tail > 1e-10:
        raise ValueError(
            f"grid too short: forcing still {tail:.2e} at the ends")
    overlap = np.trapezoid(f * kin.theta0_z, z)
    scale = np.trapezoid(np.abs(f * kin.theta0_z), z) + 1.0
    if abs(overlap) > 1e-8 * scale:
        raise RuntimeError("solvability integral unexpectedly nonzero")

    L = (derivative_matrix(n, dz, 2)
         - sp.diags(k * k * kin.cos_theta0)).tolil()
    rhs = f.copy()
    for row in (0, n - 1):
        L.rows[row] = [row]
        L.data[row] = [1.0]
        rhs[row] = 0.0

    mode = kin.theta0_z.copy()
    mode[0] = mode[-1] = 0.0
    w = np.full(n, dz)
    w[0] = w[-1] = 0.5 * dz
    A = sp.bmat([[L.tocsr(), mode[:, None]],
                 [(w * kin.theta0_z)[None, :], None]], format="csc")
    sol = splu(A).solve(np.concatenate([rhs, [0.0]]))
    return sol[:n]


def _phi1_coefficient(params: ExpansionParams) -> float:
    h2 = params.h_spec.d2h(0.0)
    if h2 <= 0:
        raise ValueError("slaving requires h''(0) > 0")
    k2 = kink_parameter(params) ** 2
    return params.A * params.Khat * params.r1 * k2 / h2


def order1_phi(params: ExpansionParams, z) -> np.ndarray:
    """Order-1 inner field by algebraic slaving: no linear solve.

    phi1 = (A Khat r1 / h''(0)) theta0'' = (A Khat r1 k^2 / h''(0)) sin(theta0).
    """
    kin = sg_kink(np.asarray(z, dtype=float), params)
    return _phi1_coefficient(params) * kin.sin_theta0


def _phi2(params: ExpansionParams, theta1, phi1, z, h2, h3) -> np.ndarray:
    if h2 <= 0:
        raise ValueError("slaving requires h''(0) > 0")
    p = params
    kin = sg_kink(np.asarray(z, dtype=float), p)
    k2 = kink_parameter(p) ** 2
    # curvature of theta1 taken in ODE form: no differentiation of samples
    theta1_zz = k2 * kin.cos_theta0 * theta1 + _forcing_coefficient(p) * kin.sin_theta0
    mu1 = -(p.k1 + p.m1 * p.v0**2)
    num = (p.A * p.Khat * p.r1 * theta1_zz
           + p.A * (p.Khat * p.r2 + mu1 * p.r1) * kin.theta0_zz
           + p.A * p.Khat * p.r1 * phi1 * kin.theta0_z**2
           - p.g * p.m1 * p.r1 * kin.sin_theta0
           - 0.5 * h3 * phi1**2)
    return num / h2


def order2_phi(params: ExpansionParams, theta1, phi1, z) -> np.ndarray:
    """Order-2 inner field, again purely algebraic given theta1 and phi1."""
    return _phi2(params, np.asarray(theta1, dtype=float),
                 np.asarray(phi1, dtype=float), z,
                 params.h_spec.d2h(0.0), params.h_spec.d3h(0.0))


@dataclass(frozen=True)
class PerturbativeSolution:
    """Sampled expansion data on a fixed uniform z-grid."""

    z: np.ndarray
    k: float
    theta0: np.ndarray
    theta1: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    B: float
    params: ExpansionParams
    theta1_z: np.ndarray
    phi1_z: np.ndarray
    phi2_z: np.ndarray


def kink_grid(params: ExpansionParams, n: int = 4001,
              half_width: float = 25.0) -> np.ndarray:
    """Uniform grid wide enough for all order-1 tail checks."""
    L = half_width / kink_parameter(params)
    return np.linspace(-L, L, n)


def build_perturbative(params: ExpansionParams, z=None) -> PerturbativeSolution:
    if z is None:
        z = kink_grid(params)
    z, dz = _check_uniform(z)
    kin = sg_kink(z, params)
    theta1 = order1_theta(params, z)
    phi1 = order1_phi(params, z)
    phi2 = order2_phi(params, theta1, phi1, z)
    phi1_z = _phi1_coefficient(params) * kin.cos_theta0 * kin.theta0_z
    return PerturbativeSolution(
        z=z, k=kink_parameter(params), theta0=kin.theta0, theta1=theta1,
        phi1=phi1, phi2=phi2, B=coefficient_B(params), params=params,
        theta1_z=derivative(theta1, dz, 1), phi1_z=phi1_z,
        phi2_z=derivative(phi2, dz, 1))


def compose_series(sol: PerturbativeSolution, eps: float,
                   order: int) -> TWProfile:
    """Assemble theta = theta0 + eps theta1, phi = eps phi1 + eps^2 phi2 as a
    travelling-wave profile at the reconstructed chain parameters and speed.

    Curvature samples are attached analytically (ODE form for theta1), so the
    residual of the composition measures the expansion error rather than any
    finite-difference floor. order=0 keeps the bare kink; there is no order-2
    outer correction by construction.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    p = sol.params
    z = sol.z
    kin = sg_kink(z, p)
    k2 = sol.k**2

    theta = kin.theta0.copy()
    theta_z = kin.theta0_z.copy()
    theta_zz = kin.theta0_zz.copy()
    phi = np.zeros_like(z)
    phi_z = np.zeros_like(z)
    phi_zz = np.zeros_like(z)

    if order >= 1:
        Cf = _forcing_coefficient(p)
        c1 = _phi1_coefficient(p)
        theta = theta + eps * sol.theta1
        theta_z = theta_z + eps * sol.theta1_z
        theta_zz = theta_zz + eps * (k2 * kin.cos_theta0 * sol.theta1
                                     + Cf * kin.sin_theta0)
        phi = phi + eps * sol.phi1
        phi_z = phi_z + eps * sol.phi1_z
        phi_zz = phi_zz + eps * c1 * (kin.cos_theta0 * kin.theta0_zz
                                      - kin.sin_theta0 * kin.theta0_z**2)
    if order == 2:
        dz = float(z[1] - z[0])
        phi = phi + eps * eps * sol.phi2
        phi_z = phi_z + eps * eps * sol.phi2_z
        phi_zz = phi_zz + eps * eps * derivative(sol.phi2, dz, 2)

    chain = p.to_chain_params(eps=eps)
    tw = TWParams.for_speed(p.speed(eps), chain)
    return TWProfile(z, theta, phi, theta_z, phi_z, tw,
                     theta_zz=theta_zz, phi_zz=phi_zz)


def project_zero_mode(f, z, params: ExpansionParams) -> np.ndarray:
    """Remove the translation-mode component <f, theta0'>/<theta0', theta0'>."""
    f = np.asarray(f, dtype=float)
    kin = sg_kink(np.asarray(z, dtype=float), params)
    mode = kin.theta0_z
    return f - (np.trapezoid(f * mode, z) / np.trapezoid(mode * mode, z)) * mode


def taylor_extract(params: ExpansionParams, order: int, field: str, z,
                   h_eps: float = 0.02, n_points: int = 6) -> np.ndarray:
    """Coefficient of eps^order in the exact travelling-wave family, by
    differencing full BVP solutions in eps.

    Solves the nonlinear problem at eps = 0, h, ..., (n_points-1) h on one
    shared grid, all pinned at the same midpoint value, then inverts the
    normalized Vandermonde system per grid node. One-sided in eps because
    eps < 0 reconstructs negative rod lengths.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if field not in ("theta", "phi"):
        raise ValueError("field must be 'theta' or 'phi'")
    if n_points < order + 2:
        raise ValueError("not enough eps samples for requested order")
    z, _ = _check_uniform(z)
    k = kink_parameter(params)

    samples = []
    for j in range(n_points):
        e = j * h_eps
        chain = params.to_chain_params(eps=e)
        v = params.speed(e)
        guess = kink_profile(z, k, v, chain, with_curvature=False)
        solved = solve_tw_bvp(guess, chain, TWParams.for_speed(v, chain))
        samples.append(solved.theta if field == "theta" else solved.phi)

    V = np.vander(np.arange(n_points, dtype=float), n_points, increasing=True)
    cond = np.linalg.cond(V)
    if cond > 1e8:
        warnings.warn(f"eps-extraction poorly conditioned (cond={cond:.2e})",
                      RuntimeWarning, stacklevel=2)
    coeffs = np.linalg.solve(V, np.asarray(samples))
    return coeffs[order] / h_eps**order


@dataclass(frozen=True)
class ScalingStudy:
    eps: np.ndarray
    res1_l2: np.ndarray
    res2_l2: np.ndarray
    slope1: float
    slope2: float


def residual_scaling(params: ExpansionParams, eps_list, order: int,
                     z=None) -> ScalingStudy:
    """L2 norms of both profile-equation residuals for the order-truncated
    composition, over a sweep of eps, with fitted log-log slopes.

    The completed equation gains one order of smallness per series order; the
    first equation plateaus at slope 2 for order=2 because no order-2 outer
    correction is constructed.
    """
    eps_arr = np.asarray(sorted(float(e) for e in eps_list))
    if eps_arr.size < 2 or np.any(eps_arr <= 0):
        raise ValueError("need at least two positive eps values")
    sol = build_perturbative(params, z)
    res1, res2 = [], []
    for e in eps_arr:
        prof = compose_series(sol, e, order)
        r1, r2 = tw_residual(prof, params.to_chain_params(eps=e))
        res1.append(float(np.sqrt(np.trapezoid(r1 * r1, sol.z))))
        res2.append(float(np.sqrt(np.trapezoid(r2 * r2, sol.z))))
    res1 = np.asarray(res1)
    res2 = np.asarray(res2)

    def slope(vals):
        if np.any(vals <= 0):
            return float("inf")
        return float(np.polyfit(np.log(eps_arr), np.log(vals), 1)[0])

    return ScalingStudy(eps_arr, res1, res2, slope(res1), slope(res2))


def export_scaling_csv(study: ScalingStudy, path) -> None:
    with open(path, "w") as f:
        f.write("# schema: residual-scaling v1\n")
        f.write("eps,res_eq1_L2,res_eq2_L2\n")
        for j in range(study.eps.size):
            f.write(f"{float(study.eps[j])!r},{float(study.res1_l2[j])!r},"
                    f"{float(study.res2_l2[j])!r}\n")
