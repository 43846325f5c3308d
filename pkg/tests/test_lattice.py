import os

import numpy as np
import pytest

from pendulon import lattice
from pendulon.chain import LatticeState
from pendulon.lattice import (IntegrationError, kink_center,
                              moving_kink_state, simulate, total_energy)
from pendulon.params import ChainParams


def _smooth_state(rng, n, amp=0.4):
    x = np.linspace(0, 2 * np.pi, n)
    return LatticeState(amp * np.sin(x) + 0.1 * rng.normal(0, 1e-2, n),
                        amp * 0.5 * np.cos(2 * x),
                        amp * np.cos(x), amp * 0.3 * np.sin(x), 0.0)


def test_energy_conserved(generic_chain, rng):
    st = _smooth_state(rng, 24)
    rep = simulate(st, 2.0, 1e-3, generic_chain)
    assert rep.max_energy_drift < 1e-10


def test_rk4_energy_drift_is_fourth_order(generic_chain, rng):
    st = _smooth_state(rng, 16, amp=0.8)
    d1 = simulate(st, 1.0, 4e-3, generic_chain).max_energy_drift
    d2 = simulate(st, 1.0, 2e-3, generic_chain).max_energy_drift
    assert d1 / d2 > 10.0  # ~16 for a clean 4th-order method


def test_snapshot_cadence(generic_chain, rng):
    st = _smooth_state(rng, 10)
    rep = simulate(st, 0.1, 1e-2, generic_chain, snapshot_every=2)
    # initial + every 2nd of 10 steps
    assert len(rep.trajectory) == 6
    assert rep.energy_series.shape == (11, 2)
    assert rep.trajectory[-1].t == pytest.approx(0.1, abs=1e-12)


def test_kink_transport_speed():
    # single-angle chain: the discretized kink should travel at v
    p = ChainParams(M=1.0, m=0.0, R=1.0, r=0.0, kappa_t=0.0,
                    kappa_s=1.0 / 0.1**2, g=1.0, delta=0.1)
    k = np.sqrt(1.0 / (1.0 - 0.5**2))
    st = moving_kink_state(p, k, 0.5, 400)
    rep = simulate(st, 2.0, 2e-3, p, snapshot_every=10**9)
    moved = kink_center(rep.trajectory[-1], p) - kink_center(st, p)
    assert moved == pytest.approx(1.0, rel=2e-2)
    assert rep.max_energy_drift < 1e-9


def test_phi_stays_frozen_at_r_zero():
    p = ChainParams(M=1.0, m=0.0, R=1.0, r=0.0, kappa_t=0.1, kappa_s=100.0,
                    g=1.0, delta=0.1)
    st = moving_kink_state(p, 1.0, 0.3, 50)
    rep = simulate(st, 0.5, 1e-3, p, snapshot_every=10**9)
    assert np.all(rep.trajectory[-1].phi == 0.0)
    assert np.all(rep.trajectory[-1].phi_dot == 0.0)


def test_moving_kink_tail_values():
    p = ChainParams(M=1.0, m=0.0, R=1.0, r=0.0, kappa_t=0.0, kappa_s=100.0,
                    g=1.0, delta=0.1)
    st = moving_kink_state(p, 1.0, 0.0, 1200)
    # ends of a wide chain sit exponentially close to the two vacua
    assert abs(st.theta[0]) < 1e-15
    assert abs(st.theta[-1] - 2 * np.pi) < 1e-12
    assert st.theta[0] >= 0.0  # tail does not overshoot through zero


def test_nonpositive_dt_rejected(generic_chain, rng):
    st = _smooth_state(rng, 8)
    with pytest.raises(ValueError):
        simulate(st, 1.0, -0.1, generic_chain)
    with pytest.raises(ValueError):
        simulate(st, 0.0, 0.1, generic_chain)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_unstable_step_raises(generic_chain, rng):
    st = _smooth_state(rng, 8, amp=3.0)
    with pytest.raises(IntegrationError):
        simulate(st, 2000.0, 9.0, generic_chain)


def test_exports_and_reproducibility(tmp_path, generic_chain, rng):
    st = _smooth_state(rng, 6)
    rep = simulate(st, 0.05, 1e-2, generic_chain, snapshot_every=2)
    t1 = tmp_path / "traj1.csv"
    t2 = tmp_path / "traj2.csv"
    lattice.export_trajectory_csv(rep, t1)
    lattice.export_trajectory_csv(rep, t2)
    assert t1.read_bytes() == t2.read_bytes()
    head = t1.read_text().splitlines()[0]
    assert head == "# schema: lattice-trajectory v1"
    e = tmp_path / "energy.csv"
    lattice.export_energy_csv(rep, e)
    assert e.read_text().splitlines()[0] == "# schema: lattice-energy v1"
    s = tmp_path / "summary.json"
    lattice.write_summary_json(rep, generic_chain, s)
    text = s.read_text()
    assert text.endswith("\n")
    assert "max_energy_drift" in text
