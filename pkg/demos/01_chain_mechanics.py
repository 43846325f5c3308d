"""Tour of the per-site mechanics: mass matrix, energies, force checks.

Run from the repo root:  python3 demos/01_chain_mechanics.py
"""
import numpy as np

from pendulon import ChainParams, ConfiningPotential
from pendulon.chain import (LatticeState, discrete_forces,
                            discrete_lagrangian, kinetic_energy,
                            lagrangian_coordinate_gradient, mass_matrix,
                            potential_energy, tip_position)

params = ChainParams(M=1.3, m=0.6, R=1.1, r=0.5, kappa_t=0.7, kappa_s=1.9,
                     g=0.9, delta=0.8,
                     h_spec=ConfiningPotential(family="quadratic", c2=2.0))

print("chain constants:", params)
print()

# mass matrix across a sweep of the inner angle
print("phi        m11        m12        m22     det / (m r^2 R^2)")
for phi in (0.0, 0.5, np.pi / 2, np.pi):
    m11, m12, m22 = mass_matrix(np.array([phi]), params)
    det = float(m11[0] * m22[0] - m12[0] ** 2)
    norm = det / (params.m * params.r**2 * params.R**2)
    print(f"{phi:4.2f}  {m11[0]:9.4f}  {m12[0]:9.4f}  {m22[0]:9.4f}   "
          f"{norm:.6f}  (= M + m sin^2 phi)")
print()

rng = np.random.default_rng(0)
n = 6
state = LatticeState(theta=rng.uniform(-np.pi, np.pi, n),
                     phi=rng.uniform(-1.0, 1.0, n),
                     theta_dot=rng.uniform(-1.0, 1.0, n),
                     phi_dot=rng.uniform(-1.0, 1.0, n), t=0.0)

print(f"random {n}-site state:")
print(f"  kinetic energy    {kinetic_energy(state, params):.6f}")
print(f"  potential energy  {potential_energy(state, params):.6f}")
print(f"  Lagrangian        {discrete_lagrangian(state, params):.6f}")

x, y = tip_position(state.theta, state.phi, params)
print(f"  inner-tip radius range: {np.hypot(x, y).min():.4f} .. "
      f"{np.hypot(x, y).max():.4f} (max = R + r = {params.R + params.r})")
print()

# the reported accelerations satisfy the equations of motion; cross-check the
# configuration gradient against central differences of the Lagrangian
gth, gph = lagrangian_coordinate_gradient(state, params)
h = 1e-6
worst = 0.0
for i in range(n):
    for name, grad in (("theta", gth), ("phi", gph)):
        arr = getattr(state, name).copy()
        bumped = {f: getattr(state, f) for f in
                  ("theta", "phi", "theta_dot", "phi_dot", "t")}
        arr[i] += h
        bumped[name] = arr
        plus = discrete_lagrangian(LatticeState(**bumped), params)
        arr = arr.copy()
        arr[i] -= 2 * h
        bumped[name] = arr
        minus = discrete_lagrangian(LatticeState(**bumped), params)
        worst = max(worst, abs((plus - minus) / (2 * h) - grad[i]))
print(f"coordinate gradient vs central differences: max abs gap {worst:.2e}")

acc_th, acc_ph = discrete_forces(state, params)
print(f"accelerations at this state: |theta..| up to {np.max(np.abs(acc_th)):.4f}, "
      f"|phi..| up to {np.max(np.abs(acc_ph)):.4f}")
