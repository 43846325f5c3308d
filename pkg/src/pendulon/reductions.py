"""Frozen-inner-angle limit of the travelling-wave system.

With phi held at 0 and no torsional coupling the two profile equations both
collapse onto pendulum equations for theta alone; they are compatible only at
one speed, which is therefore selected. The stiff-confinement experiment
shows the full system approaching that frozen limit as h''(0) grows.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from ._stencils import derivative
from .params import ChainParams
from .travelwave import (TWParams, TWProfile, TWSolveError, kink_profile,
                         solve_tw_bvp, tw_residual)


@dataclass(frozen=True)
class SpeedSelection:
    """Selected speed (positive member of the +- pair) and the value of
    mu = K_s - m v^2 it induces."""

    mu_star: float
    v_star: float


def compatibility_mu(params: ChainParams) -> float:
    """Value of mu forced by requiring both frozen-phi equations to determine
    the same theta'': mu = -K_s R / r."""
    if params.r <= 0:
        raise ValueError("r = 0 leaves the second equation trivially satisfied")
    return -params.Ks * params.R / params.r


def selected_speed(params: ChainParams) -> SpeedSelection:
    """v* = sqrt(K_s (r + R) / (m r)), the unique speed at which the frozen
    system is consistent; supersonic with respect to sqrt(K_s/m)."""
    if params.r <= 0 or params.m <= 0:
        raise ValueError("speed selection needs r > 0 and m > 0")
    v_star = float(np.sqrt(params.Ks * (params.r + params.R)
                           / (params.m * params.r)))
    mu_star = -params.Ks * params.R / params.r
    consistency = params.Ks - params.m * v_star**2
    if abs(mu_star - consistency) > 1e-12 * (abs(mu_star) + 1.0):
        raise RuntimeError("mu*/v* consistency lost to rounding")
    return SpeedSelection(mu_star=mu_star, v_star=v_star)


def reduced_equations_residual(theta, z, params: ChainParams, v: float):
    """Both frozen-phi equation residuals for a sampled theta(z).

    Requires the regime in which the reduction is derived: no torsional
    coupling and a confining potential with no force at phi = 0. Second
    derivatives are taken by 4th-order finite differences.
    """
    if params.Kt != 0:
        raise ValueError("reduction assumes kappa_t = 0")
    if abs(params.h_spec.dh(0.0)) > 1e-12:
        raise ValueError("reduction assumes h'(0) = 0")
    theta = np.asarray(theta, dtype=float)
    z = np.asarray(z, dtype=float)
    theta_zz = derivative(theta, float(z[1] - z[0]), 2)
    M, m, R, r, g = params.M, params.m, params.R, params.r, params.g
    mu = params.Ks - m * v * v
    s = np.sin(theta)
    res1 = (mu * (r + R) ** 2 - M * R**2 * v**2) * theta_zz \
        - g * (m * r + (M + m) * R) * s
    res2 = mu * r * (r + R) * theta_zz - m * g * r * s
    return res1, res2


def reduced_proportionality_gap(theta, z, params: ChainParams, v: float):
    """How far the two frozen-phi equations are from imposing the same ODE.

    Rescales the second equation so the curvature coefficients match and
    returns the remaining pointwise gap normalized by the pendant-force
    scale. The curvature samples cancel exactly, so the gap measures only
    the coefficient mismatch: zero at the selected speed, order one off it.
    """
    res1, res2 = reduced_equations_residual(theta, z, params, v)
    M, m, R, r = params.M, params.m, params.R, params.r
    mu = params.Ks - m * v * v
    c1 = mu * (r + R) ** 2 - M * R**2 * v**2
    c2 = mu * r * (r + R)
    if c2 == 0.0:
        raise ValueError("second equation loses its curvature term (mu = 0)")
    scale = params.g * (m * r + (M + m) * R)
    return float(np.max(np.abs(res1 - (c1 / c2) * res2)) / scale)


def selected_kink_width(params: ChainParams) -> float:
    """Inverse width of the kink the frozen system supports at v*."""
    if params.R <= 0:
        raise ValueError("selected kink needs R > 0")
    return float(np.sqrt(params.g * params.m * params.r
                         / (params.Ks * params.R * (params.r + params.R))))


def selected_speed_kink(params: ChainParams, z) -> TWProfile:
    """The travelling kink at the selected speed.

    At v* the frozen equations read theta'' = -kappa^2 sin(theta) (mu* < 0
    flips the usual sign), whose heteroclinic orbit connects -pi to pi; the
    profile is the pi-shifted kink. With h'(0) = 0 it solves the FULL
    travelling-wave system, phi identically zero included.
    """
    sel = selected_speed(params)
    kappa = selected_kink_width(params)
    return kink_profile(np.asarray(z, dtype=float), kappa, sel.v_star, params,
                        pi_shift=True)


@dataclass(frozen=True)
class StiffCell:
    h2: float
    v: float
    converged: bool
    max_abs_phi: float
    residual: float

    @property
    def max_constraint_torque(self) -> float:
        """Peak linearized confining torque h''(0) * max|phi|; vanishes with
        the selected speed, stays O(1) off it."""
        return self.h2 * self.max_abs_phi


@dataclass(frozen=True)
class StiffReport:
    v_star: float
    cells: tuple

    def at_speed(self, v: float):
        return [c for c in self.cells if c.v == v]


def stiff_limit_experiment(params: ChainParams,
                           stiffness_ladder: Optional[Sequence[float]] = None,
                           v_probe: Optional[Sequence[float]] = None,
                           z: Optional[np.ndarray] = None,
                           n_points: int = 2001) -> StiffReport:
    """Solve the full travelling-wave problem along a rising ladder of
    confinement stiffnesses h''(0), at each probe speed, and record how far
    the inner angle is pushed from zero.

    Individual solve failures are recorded as non-converged cells, not raised.
    Cells are ordered ladder-major, probe-speed-minor, deterministically.
    """
    sel = selected_speed(params)
    if stiffness_ladder is None:
        base = (params.M + params.m) * params.g
        stiffness_ladder = [10.0 * base, 100.0 * base,
                            1000.0 * base, 10000.0 * base]
    ladder = [float(h) for h in stiffness_ladder]
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("stiffness ladder must be strictly increasing")
    if v_probe is None:
        v_probe = [sel.v_star]
    kappa = selected_kink_width(params)
    if z is None:
        z = np.linspace(-20.0 / kappa, 20.0 / kappa, n_points)

    cells = []
    for h2 in ladder:
        stiff = replace(params, h_spec=params.h_spec.with_stiffness(h2))
        for v in v_probe:
            guess = kink_profile(z, kappa, v, stiff, pi_shift=True,
                                 with_curvature=False)
            tw = TWParams.for_speed(v, stiff)
            try:
                prof = solve_tw_bvp(guess, stiff, tw)
            except TWSolveError as exc:
                bad = exc.residual if exc.residual is not None else float("nan")
                cells.append(StiffCell(h2, float(v), False, float("nan"),
                                       float(bad)))
                continue
            r1, r2 = tw_residual(prof, stiff)
            res = max(float(np.max(np.abs(r1))), float(np.max(np.abs(r2))))
            cells.append(StiffCell(h2, float(v), True,
                                   float(np.max(np.abs(prof.phi))), res))
    return StiffReport(v_star=sel.v_star, cells=tuple(cells))


def export_stiff_csv(report: StiffReport, path) -> None:
    with open(path, "w") as f:
        f.write("# schema: stiff-limit v1\n")
        f.write("h2,v,converged,max_abs_phi,residual\n")
        for c in report.cells:
            f.write(f"{float(c.h2)!r},{float(c.v)!r},{int(c.converged)},"
                    f"{float(c.max_abs_phi)!r},{float(c.residual)!r}\n")
