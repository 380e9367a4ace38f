"""Momentum from velocity and back again.

The momentum covector of a polar field splits along the frame as

  p^a = (xs eta^{ak} + y^k s^a + z_i s_j eps^{ijka}) u_k,
  xs  = mass cos(chiral) - y.s

where y and z collect the chiral-angle gradient, the connection and the
density gradient.  The map u -> p is linear and, remarkably, invertible
without knowing y: the inverse matrix annihilates s, so the y.u admixture
drops out.  Both directions are implemented, plus the slow-motion limit
p_vec = m v + grad(log density) x spin used as a sanity anchor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import ETA
from .errors import DegenerateInversion, DegenerateX
from .fieldconn import Background, PolarJet

X_GUARD = 1e-12
INVERSION_GUARD = 1e-10


@dataclass
class CompactForms:
    y: np.ndarray        # lowered components
    z: np.ndarray        # lowered components
    xs: float
    mass_cos: float      # mass times cosine of the chiral angle


def compact_forms(jet: PolarJet, bg: Background) -> CompactForms:
    w_low = ETA @ bg.w_value(jet.x)
    y = jet.tc.axial_dual() - bg.torsion_coupling * w_low + 0.5 * jet.dchiral
    z = -jet.dlogdensity - jet.tc.trace_contraction()
    mass_cos = bg.mass * np.cos(jet.pd.chiral_angle)
    xs = mass_cos - y @ jet.pd.spin
    if abs(xs) < X_GUARD * max(1.0, abs(bg.mass)):
        raise DegenerateX("effective mass scale %.3e too close to zero" % xs)
    return CompactForms(y=y, z=z, xs=float(xs), mass_cos=float(mass_cos))


def momentum_from_velocity(u, s, forms: CompactForms, basis) -> np.ndarray:
    """Raised momentum from the unit velocity, spin direction and potentials."""
    u = np.asarray(u, dtype=float)
    s = np.asarray(s, dtype=float)
    u_low, s_low = ETA @ u, ETA @ s
    return (
        forms.xs * u
        + (forms.y @ u) * s
        + np.einsum("i,j,k,ijka->a", forms.z, s_low, u_low, basis.eps_upper)
    )


def momentum_long_form(u, s, forms: CompactForms, basis) -> np.ndarray:
    """Same momentum written without the xs shorthand; kept as a cross-check."""
    u = np.asarray(u, dtype=float)
    s = np.asarray(s, dtype=float)
    u_low, s_low = ETA @ u, ETA @ s
    return (
        forms.mass_cos * u
        + (forms.y @ u) * s
        - (forms.y @ s) * u
        - np.einsum("m,j,k,jkma->a", forms.z, u_low, s_low, basis.eps_upper)
    )


def velocity_from_momentum(p, s, forms: CompactForms, basis) -> np.ndarray:
    """Invert the momentum map; only z, s and xs enter.

    The inverse matrix annihilates s, so whatever multiple of s the momentum
    carries (the y.u part) cannot and need not be recovered.
    """
    p = np.asarray(p, dtype=float)
    s = np.asarray(s, dtype=float)
    if abs(forms.xs) < X_GUARD:
        raise DegenerateX("effective mass scale %.3e too close to zero" % forms.xs)
    zeta_low = forms.z / forms.xs
    zeta = ETA @ zeta_low
    s_low = ETA @ s
    zs = zeta_low @ s
    z2 = zeta_low @ zeta
    denom = 1.0 + z2 + zs**2
    if abs(denom) < INVERSION_GUARD:
        raise DegenerateInversion("inversion denominator %.3e vanishes" % denom)
    b = ETA + np.outer(s, s) * (1 + zs**2)
    b = b + np.outer(zeta, zeta)
    b = b + (np.outer(zeta, s) + np.outer(s, zeta)) * zs
    b = b + np.einsum("i,j,ijka->ka", zeta_low, s_low, basis.eps_upper)
    return (b @ (ETA @ p)) / (forms.xs * denom)


def nonrel_limit_momentum(velocity3, spin3, grad_log_density3, mass) -> np.ndarray:
    """Slow-motion spatial momentum: m v plus the density-gradient spin curl."""
    velocity3 = np.asarray(velocity3, dtype=float)
    spin3 = np.asarray(spin3, dtype=float)
    grad_log_density3 = np.asarray(grad_log_density3, dtype=float)
    return mass * velocity3 + np.cross(grad_log_density3, spin3)
