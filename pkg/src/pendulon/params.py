"""Physical parameters of the chain and the confining-potential families."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

_FAMILIES = ("quadratic", "tangent-barrier")


@dataclass(frozen=True)
class ConfiningPotential:
    """Even potential h(phi) keeping the second pendulum inside |phi| < phi0.

    Two families:
      quadratic        h = (c2/2) phi^2 (phi0 is a nominal range marker only)
      tangent-barrier  h = (c2 (2 phi0/pi)^2 / 2) tan^2(pi phi/(2 phi0))
                           + b tan^4(pi phi/(2 phi0)), diverging at +-phi0

    Both satisfy h(0) = 0, h'(0) = 0, h''(0) = c2, h'''(0) = 0.
    """

    family: str = "quadratic"
    phi0: float = np.pi / 2
    c2: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown confining family {self.family!r}")
        if not self.phi0 > 0:
            raise ValueError("phi0 must be positive")
        if not self.c2 > 0:
            raise ValueError("c2 must be positive (h''(0) > 0)")
        if self.b < 0:
            raise ValueError("b must be nonnegative")

    # tan argument scale
    @property
    def _c(self):
        return np.pi / (2 * self.phi0)

    @property
    def _a2(self):
        # tan^2 amplitude chosen so h''(0) = c2
        return 0.5 * self.c2 * (2 * self.phi0 / np.pi) ** 2

    def h(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.family == "quadratic":
            return 0.5 * self.c2 * phi**2
        t = np.tan(self._c * phi)
        return self._a2 * t**2 + self.b * t**4

    def dh(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.family == "quadratic":
            return self.c2 * phi
        t = np.tan(self._c * phi)
        return self._c * (2 * self._a2 * t + 4 * self.b * t**3) * (1 + t**2)

    def d2h(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.family == "quadratic":
            return np.full_like(phi, self.c2)
        t = np.tan(self._c * phi)
        P = 2 * self._a2 * t + 4 * self.b * t**3
        dP = 2 * self._a2 + 12 * self.b * t**2
        return self._c**2 * (1 + t**2) * (dP * (1 + t**2) + 2 * t * P)

    def d3h(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.family == "quadratic":
            return np.zeros_like(phi)
        t = np.tan(self._c * phi)
        P = 2 * self._a2 * t + 4 * self.b * t**3
        dP = 2 * self._a2 + 12 * self.b * t**2
        ddP = 24 * self.b * t
        inner = dP * (1 + t**2) + 2 * t * P
        return self._c**3 * (1 + t**2) * (
            2 * t * inner + (1 + t**2) * (ddP * (1 + t**2) + 4 * t * dP + 2 * P)
        )

    def with_stiffness(self, c2):
        """Same family and range, different curvature at the origin."""
        return dataclasses.replace(self, c2=float(c2))


@dataclass(frozen=True)
class ChainParams:
    """Constants of the double-pendulum chain.

    M, R:  outer bob mass and beam length
    m, r:  inner (tip) bob mass and beam length
    kappa_t, kappa_s: torsional / stacking spring constants
    g: gravity, delta: lattice spacing, h_spec: confining potential
    topology: 'open' or 'periodic' neighbor coupling
    """

    M: float
    m: float
    R: float
    r: float
    kappa_t: float
    kappa_s: float
    g: float
    delta: float
    h_spec: ConfiningPotential = ConfiningPotential()
    topology: str = "open"

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("M must be positive")
        if self.m < 0 or self.r < 0 or self.R < 0:
            raise ValueError("m, r, R must be nonnegative")
        if self.r > 0 and not self.m > 0:
            # massless second bob on a finite beam has a singular mass matrix
            raise ValueError("r > 0 requires m > 0")
        if self.kappa_t < 0 or self.kappa_s < 0 or self.g < 0:
            raise ValueError("kappa_t, kappa_s, g must be nonnegative")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.topology not in ("open", "periodic"):
            raise ValueError("topology must be 'open' or 'periodic'")

    @property
    def lam(self):
        """Aspect ratio r/R."""
        if self.R == 0:
            raise ValueError("lambda undefined at R = 0")
        return self.r / self.R

    @property
    def rho(self):
        """Mass ratio M/m."""
        if self.m == 0:
            raise ValueError("rho undefined at m = 0")
        return self.M / self.m

    @property
    def Ks(self):
        return self.kappa_s * self.delta**2

    @property
    def Kt(self):
        return self.kappa_t * self.delta**2

    def require_dynamic(self):
        """Raise unless the configuration supports full 2-angle dynamics."""
        if self.R == 0:
            raise ValueError("R = 0: dynamics not defined for this operation")
