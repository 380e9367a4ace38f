"""Integral curves of the velocity field carried by a spinor field.

Two velocity modes are available at every regular point:

  kinematic: the normalized vector density u = U / sqrt(theta^2 + phi^2),
             read directly from the bilinears, no derivatives involved
  guidance:  the velocity recovered by inverting the momentum map, which
             needs the local jet (momentum covector, z potential, spin)

On an exact solution the two coincide, so their trajectory divergence is a
practical integration diagnostic.  Curves are parametrized by proper time
and advanced with a fixed-step fourth-order Runge-Kutta rule.  A failure at
the seed point raises immediately; a failure later on truncates the curve
and reports the reason instead of raising.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import ETA
from .bilinears import compute_bilinears, require_regular
from .errors import DiracPolarError, ImmediateSingularity
from .fieldconn import Background, polar_jet
from .guidance import compact_forms, velocity_from_momentum

MODES = ("kinematic", "guidance")


def velocity_field(fld, bg: Background, basis, mode="kinematic", h_field=1e-3):
    """Callable x -> unit velocity, in the requested mode."""
    if mode == "kinematic":

        def evaluate(x):
            bil = compute_bilinears(fld.evaluate(np.asarray(x, dtype=float)), basis)
            require_regular(bil)
            return bil.vector / np.hypot(bil.scalar, bil.pseudoscalar)

    elif mode == "guidance":

        def evaluate(x):
            jet = polar_jet(fld, bg, basis, x, h_field)
            forms = compact_forms(jet, bg)
            return velocity_from_momentum(
                ETA @ jet.tc.p, jet.pd.spin, forms, basis
            )

    else:
        raise ValueError("mode must be one of %s" % (MODES,))
    return evaluate


@dataclass
class Trajectory:
    tau: np.ndarray
    x: np.ndarray
    u: np.ndarray
    mode: str
    h_tau: float
    status: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def completed(self) -> bool:
        return self.status == "completed"


def integrate(
    fld,
    bg: Background,
    basis,
    x0,
    tau_max,
    h_tau=0.05,
    mode="kinematic",
    h_field=1e-3,
) -> Trajectory:
    """Fixed-step fourth-order curve of the chosen velocity field from x0."""
    vel = velocity_field(fld, bg, basis, mode, h_field)
    x0 = np.asarray(x0, dtype=float)
    try:
        u0 = vel(x0)
    except DiracPolarError as exc:
        raise ImmediateSingularity(
            "velocity undefined at the seed point: %s" % exc
        ) from exc

    n_steps = int(round(tau_max / h_tau))
    taus = [0.0]
    xs = [x0]
    us = [u0]
    status = "completed"
    unit_violation = abs(ETA @ u0 @ u0 - 1.0)
    evals = 1
    x = x0
    for k in range(n_steps):
        try:
            k1 = us[-1]
            k2 = vel(x + 0.5 * h_tau * k1)
            k3 = vel(x + 0.5 * h_tau * k2)
            k4 = vel(x + h_tau * k3)
            x = x + (h_tau / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            u_here = vel(x)
            evals += 4
        except DiracPolarError as exc:
            status = "aborted at tau=%.6g: %s: %s" % (
                taus[-1],
                type(exc).__name__,
                exc,
            )
            break
        taus.append((k + 1) * h_tau)
        xs.append(x)
        us.append(u_here)
        unit_violation = max(unit_violation, abs(ETA @ u_here @ u_here - 1.0))
    return Trajectory(
        tau=np.array(taus),
        x=np.array(xs),
        u=np.array(us),
        mode=mode,
        h_tau=h_tau,
        status=status,
        diagnostics={"max_unit_violation": float(unit_violation), "velocity_evals": evals},
    )


def batch_integrate(fld, bg, basis, seeds, tau_max, h_tau=0.05, mode="kinematic", h_field=1e-3):
    """Integrate from many seeds; a bad seed yields a failed record, not a raise."""
    out = []
    for x0 in seeds:
        try:
            out.append(
                integrate(fld, bg, basis, x0, tau_max, h_tau, mode, h_field)
            )
        except ImmediateSingularity as exc:
            out.append(
                Trajectory(
                    tau=np.zeros(0),
                    x=np.zeros((0, 4)),
                    u=np.zeros((0, 4)),
                    mode=mode,
                    h_tau=h_tau,
                    status="failed: %s" % exc,
                    diagnostics={},
                )
            )
    return out


def sup_divergence(a: Trajectory, b: Trajectory) -> float:
    """Largest pointwise gap between two curves over their shared arc."""
    n = min(len(a.tau), len(b.tau))
    if n == 0:
        return float("nan")
    if np.abs(a.tau[:n] - b.tau[:n]).max() > 1e-12:
        raise ValueError("trajectories sample different proper times")
    return float(np.abs(a.x[:n] - b.x[:n]).max())
