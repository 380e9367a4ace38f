"""Polar variables of a regular Dirac spinor.

Any spinor whose scalar and pseudoscalar densities do not both vanish can be
written as

  psi = density * exp(-i * chiral_angle * pi / 2)
        * l_spin^-1 @ rest_seed * exp(-i * residual_phase)

where rest_seed = (1, 0, 1, 0) and l_spin is the spin representation of the
Lorentz transformation built as rotation @ boost: the boost reaches the unit
velocity u, the rotation then aligns the rest-frame spin direction with z.
The inverse vector representation carries e_0 to u and e_3 to s, so the polar
data stores the same information as the bilinears plus the phase.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import SEED_SPINOR, boost_params, lorentz_exp, rot_z_to_params
from .bilinears import compute_bilinears, require_regular


def wrap_angle(a):
    """Wrap to the half-open interval (-pi, pi]."""
    out = np.mod(-np.asarray(a) + np.pi, 2 * np.pi)
    return -(out - np.pi)


@dataclass
class PolarData:
    density: float          # module field, strictly positive
    chiral_angle: float
    velocity: np.ndarray    # unit timelike, raised index
    spin: np.ndarray        # unit spacelike, raised index, orthogonal to velocity
    l_spin: np.ndarray
    l_vec: np.ndarray
    residual_phase: float
    fit_residual: float = 0.0


def polar_decompose(psi, basis) -> PolarData:
    psi = np.asarray(psi, dtype=complex)
    bil = compute_bilinears(psi, basis)
    require_regular(bil)

    mod2 = np.hypot(bil.scalar, bil.pseudoscalar)
    density = np.sqrt(mod2 / 2.0)
    chiral_angle = np.arctan2(bil.pseudoscalar, bil.scalar)
    u = bil.vector / mod2
    s = bil.axial / mod2

    boost = lorentz_exp(boost_params(u), basis)
    s_rest = boost.vec_rep @ s
    rot = lorentz_exp(rot_z_to_params(s_rest[1:]), basis)
    l_spin = rot.spin_rep @ boost.spin_rep
    l_vec = rot.vec_rep @ boost.vec_rep

    reference = _assemble(density, chiral_angle, l_spin, basis)
    k = int(np.argmax(np.abs(reference)))
    phase = -np.angle(psi[k] / reference[k])
    fit = np.linalg.norm(psi - reference * np.exp(-1j * phase))

    return PolarData(
        density=float(density),
        chiral_angle=float(chiral_angle),
        velocity=u,
        spin=s,
        l_spin=l_spin,
        l_vec=l_vec,
        residual_phase=float(phase),
        fit_residual=float(fit / np.linalg.norm(psi)),
    )


def _assemble(density, chiral_angle, l_spin, basis):
    chiral = np.cos(chiral_angle / 2) * basis.identity - 1j * np.sin(
        chiral_angle / 2
    ) * basis.pi
    return density * chiral @ np.linalg.inv(l_spin) @ SEED_SPINOR


def polar_reconstruct(pd: PolarData, basis) -> np.ndarray:
    psi = _assemble(pd.density, pd.chiral_angle, pd.l_spin, basis)
    return psi * np.exp(-1j * pd.residual_phase)


def kinematic_velocity(pd: PolarData) -> np.ndarray:
    """Unit velocity read off the frame field alone: first column of l_vec^-1."""
    return np.linalg.inv(pd.l_vec)[:, 0]
