import numpy as np
import pytest

from diracpolar.algebra import ETA
from diracpolar.errors import ImmediateSingularity
from diracpolar.fieldconn import (
    Background,
    BoxWindow,
    PlaneWaveComponent,
    PlaneWaveField,
    plane_wave,
    superpose,
)
from diracpolar.trajectories import (
    batch_integrate,
    integrate,
    sup_divergence,
    velocity_field,
)

MASS = 1.0


def boosted_wave(basis, v3, spin, amp=1.0):
    v3 = np.asarray(v3, dtype=float)
    p = np.concatenate([[MASS * np.sqrt(1 + v3 @ v3)], MASS * v3])
    return plane_wave(p, MASS, np.asarray(spin, dtype=float), amp, basis)


def two_wave(basis):
    return superpose(
        boosted_wave(basis, (0.25, -0.1, 0.05), (0.1, 0.2, 1.0)),
        boosted_wave(basis, (0.1, 0.15, -0.08), (-0.1, 0.1, 1.0), amp=0.3),
    )


def test_plane_wave_straight_line(basis):
    fld = boosted_wave(basis, (0.3, -0.2, 0.1), (0.0, 0.2, 1.0))
    bg = Background(mass=MASS)
    p = fld.components[0].momentum
    tr = integrate(fld, bg, basis, np.zeros(4), tau_max=10.0, h_tau=0.1)
    assert tr.completed
    assert len(tr.tau) == 101
    expected = np.outer(tr.tau, p / MASS)
    assert np.abs(tr.x - expected).max() < 1e-10
    assert tr.diagnostics["max_unit_violation"] < 1e-12


def test_both_modes_unit_velocity(basis):
    fld = two_wave(basis)
    bg = Background(mass=MASS)
    for mode in ("kinematic", "guidance"):
        tr = integrate(
            fld, bg, basis, np.array([0.0, 0.1, -0.1, 0.2]), 2.0, 0.1, mode=mode
        )
        assert tr.completed
        norms = np.einsum("na,ab,nb->n", tr.u, ETA, tr.u)
        assert np.abs(norms - 1.0).max() < 1e-6


def test_mode_divergence_small_on_solution(basis):
    fld = two_wave(basis)
    bg = Background(mass=MASS)
    x0 = np.array([0.0, 0.05, -0.1, 0.15])
    tr_k = integrate(fld, bg, basis, x0, 10.0, 0.1, mode="kinematic")
    tr_g = integrate(fld, bg, basis, x0, 10.0, 0.1, mode="guidance")
    assert tr_k.completed and tr_g.completed
    assert sup_divergence(tr_k, tr_g) < 1e-5


def test_rk4_order(basis):
    # needs a velocity field rough enough that the step error clears the
    # round-off floor; a gentle two-wave mix integrates exactly to 1e-15
    fld = superpose(
        boosted_wave(basis, (0.8, 0.0, 0.0), (0.0, 0.0, 1.0)),
        boosted_wave(basis, (-0.5, 0.3, 0.0), (0.2, 0.0, 1.0), amp=0.5),
    )
    bg = Background(mass=MASS)
    x0 = np.array([0.0, 0.1, 0.05, -0.1])
    ref = integrate(fld, bg, basis, x0, 2.0, 0.0125).x[-1]
    e1 = np.abs(integrate(fld, bg, basis, x0, 2.0, 0.1).x[-1] - ref).max()
    e2 = np.abs(integrate(fld, bg, basis, x0, 2.0, 0.05).x[-1] - ref).max()
    assert e1 > 1e-11
    order = np.log2(e1 / e2)
    assert 3.5 < order < 4.5, (e1, e2, order)


def test_seed_on_singular_point_raises(basis):
    # equal and opposite components null the field at the origin exactly
    f1 = boosted_wave(basis, (0.2, 0.0, 0.0), (0.0, 0.0, 1.0))
    comp = f1.components[0]
    f2 = PlaneWaveField(
        [PlaneWaveComponent(np.array([MASS, 0, 0, 0]) * np.sqrt(1.0), -comp.amplitude)]
    )
    fld = superpose(f1, f2)
    assert np.abs(fld.evaluate(np.zeros(4))).max() < 1e-15
    bg = Background(mass=MASS)
    with pytest.raises(ImmediateSingularity):
        integrate(fld, bg, basis, np.zeros(4), 1.0, 0.1)


def test_windowed_trajectory_aborts_at_boundary(basis):
    fld = two_wave(basis)
    bg = Background(mass=MASS)
    # narrow slab in time: the curve must march out of it and stop cleanly
    window = BoxWindow(fld, np.full(4, -1.0), np.full(4, 1.0))
    tr = integrate(window, bg, basis, np.zeros(4), 5.0, 0.05)
    assert not tr.completed
    assert "OutOfDomain" in tr.status
    assert len(tr.tau) >= 2
    assert tr.tau[-1] < 5.0
    # the recorded arc stayed inside
    assert tr.x.max() <= 1.0 and tr.x.min() >= -1.0


def test_batch_integrate_mixed_seeds(basis):
    f1 = boosted_wave(basis, (0.2, 0.0, 0.0), (0.0, 0.0, 1.0))
    comp = f1.components[0]
    f2 = PlaneWaveField([PlaneWaveComponent(np.array([MASS, 0, 0, 0.0]), -comp.amplitude)])
    fld = superpose(f1, f2)
    bg = Background(mass=MASS)
    seeds = [np.zeros(4), np.array([0.0, 0.9, 0.4, 0.3])]
    out = batch_integrate(fld, bg, basis, seeds, 1.0, 0.1)
    assert len(out) == 2
    assert out[0].status.startswith("failed")
    assert len(out[0].tau) == 0
    assert out[1].completed


def test_velocity_field_rejects_unknown_mode(basis):
    fld = two_wave(basis)
    with pytest.raises(ValueError):
        velocity_field(fld, Background(mass=MASS), basis, mode="ballistic")


def test_sup_divergence_guards_mismatched_tau(basis):
    fld = two_wave(basis)
    bg = Background(mass=MASS)
    a = integrate(fld, bg, basis, np.zeros(4), 1.0, 0.1)
    b = integrate(fld, bg, basis, np.zeros(4), 1.0, 0.05)
    with pytest.raises(ValueError):
        sup_divergence(a, b)
