"""Real balance equations carried by the densities of a Dirac field.

Splitting the field equation into real and imaginary, even and odd parts
under the chiral involution yields ten real equations among the densities
and their first derivatives.  Rewriting the same content through the polar
variables produces two effective covectors

  e_mu = dual connection - coupling * w + d(chiral)/2 + mass * s * cos(chiral)
  f_mu = connection trace + d(log density) + mass * s * sin(chiral)

and four equivalent groups of projection identities linking e, f, the
momentum covector and the frame.  Group d is the momentum decomposition
itself and is equivalent to the field equation point by point, which the
equivalence probe exercises in both directions.

Every residual returned here is normalized by the local density u^0, so
amplitudes drop out.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import ETA
from .bilinears import adjoint, compute_bilinears
from .fieldconn import Background, PolarJet, covariant_derivative, polar_jet


def _density_derivatives(fld, bg, basis, x):
    """First derivatives of all sixteen densities via the product rule."""
    psi = fld.evaluate(np.asarray(x, dtype=float))
    grad = covariant_derivative(fld, bg, x)
    adj_psi = adjoint(psi, basis)
    adj_grad = np.array([adjoint(grad[mu], basis) for mu in range(4)])

    def dbil(mat):
        return np.array(
            [adj_grad[mu] @ mat @ psi + adj_psi @ mat @ grad[mu] for mu in range(4)]
        )

    d_scalar = dbil(basis.identity)
    d_pseudo = 1j * dbil(basis.pi)
    d_vec = np.stack([dbil(basis.gamma[a]) for a in range(4)], axis=1)
    d_ax = np.stack([dbil(basis.gamma[a] @ basis.pi) for a in range(4)], axis=1)
    d_tens = np.zeros((4, 4, 4), dtype=complex)
    for a in range(4):
        for b in range(a + 1, 4):
            col = 2j * dbil(basis.sigma_lower[a, b])
            d_tens[:, a, b] = col
            d_tens[:, b, a] = -col
    return psi, grad, adj_psi, adj_grad, d_scalar, d_pseudo, d_vec, d_ax, d_tens


def residual_bilinear_gordon(fld, bg: Background, basis, x) -> dict:
    """Max-abs residual of each of the ten density balance equations."""
    (
        psi,
        grad,
        adj_psi,
        adj_grad,
        d_scalar,
        d_pseudo,
        d_vec,
        d_ax,
        d_tens,
    ) = _density_derivatives(fld, bg, basis, x)
    bil = compute_bilinears(psi, basis)
    m = bg.mass
    coup = bg.torsion_coupling
    w = bg.w_value(x)
    w_low = ETA @ w
    u, s = bil.vector, bil.axial
    u_low, s_low = ETA @ u, ETA @ s
    m_low = bil.tensor
    m_up = ETA @ m_low @ ETA
    eps_up = basis.eps_upper
    scale = bil.vector[0]

    gam, pi = basis.gamma, basis.pi
    gam_low = basis.gamma_lower

    def pair(mat, mu):
        # psi-bar mat nabla_mu psi and its reversed partner
        return adj_psi @ mat @ grad[mu], adj_grad[mu] @ mat @ psi

    out = {}

    out["vector_divergence"] = abs(np.trace(d_vec)) / scale

    acc = 0.0
    for mu in range(4):
        a, b = pair(gam[mu] @ pi, mu)
        acc += 0.5j * (a - b)
    out["pseudoscalar_kinetic"] = abs(acc - coup * (w_low @ u)) / scale

    dur = ETA @ d_vec
    curl_u = (dur - dur.T).astype(complex)
    for mu in range(4):
        for rho in range(4):
            a, b = pair(gam_low[rho] @ pi, mu)
            curl_u += 1j * eps_up[:, :, mu, rho] * (a - b)
    curl_u -= 2 * coup * np.einsum("ansr,s,r->an", eps_up, w_low, u_low)
    curl_u -= 2 * m * m_up
    out["vector_curl"] = np.abs(curl_u).max() / scale

    out["axial_divergence"] = abs(np.trace(d_ax) - 2 * m * bil.pseudoscalar) / scale

    acc = 0.0
    for mu in range(4):
        a, b = pair(gam[mu], mu)
        acc += 0.5j * (a - b)
    out["scalar_kinetic"] = abs(acc - coup * (w_low @ s) - m * bil.scalar) / scale

    ds_low = np.einsum("mq,qa->ma", d_ax, ETA)
    curl_s = np.einsum("anmq,mq->an", eps_up, ds_low).astype(complex)
    grad_up = ETA @ grad
    adj_grad_up = np.einsum("nm,mi->ni", ETA, adj_grad)
    k = np.zeros((4, 4), dtype=complex)
    for al in range(4):
        for nu in range(4):
            k[al, nu] = adj_psi @ gam[al] @ grad_up[nu] - adj_grad_up[nu] @ gam[
                al
            ] @ psi
    curl_s += 1j * (k - k.T)
    curl_s += 2 * coup * (np.outer(w, s) - np.outer(s, w))
    out["axial_curl"] = np.abs(curl_s).max() / scale

    vr = np.zeros(4, dtype=complex)
    for al in range(4):
        vr[al] = 1j * (adj_psi @ grad_up[al] - adj_grad_up[al] @ psi)
    d_tens_up = np.einsum("mab,ai,bj->mij", d_tens, ETA, ETA)
    vr += np.einsum("mam->a", d_tens_up)
    vr += coup * np.einsum("amrs,m,rs->a", eps_up, w_low, m_low)
    vr -= 2 * m * u
    out["vector_recovery"] = np.abs(vr).max() / scale

    ai = np.zeros(4, dtype=complex)
    for al in range(4):
        ai[al] = adj_psi @ pi @ grad_up[al] - adj_grad_up[al] @ pi @ psi
    ai -= 0.5 * np.einsum("amrs,mrs->a", eps_up, d_tens)
    ai += 2 * coup * (m_up @ w_low)
    out["axial_recovery"] = np.abs(ai).max() / scale

    vi = (ETA @ d_scalar).astype(complex)
    for al in range(4):
        acc = 0.0
        for mu in range(4):
            a, b = pair(basis.sigma_upper[al, mu], mu)
            acc += 2 * (a - b)
        vi[al] += acc
    vi += 2 * coup * w * bil.pseudoscalar
    out["scalar_gradient"] = np.abs(vi).max() / scale

    ar = (ETA @ d_pseudo).astype(complex)
    for al in range(4):
        acc = 0.0
        for mu in range(4):
            a, b = pair(basis.sigma_upper[al, mu] @ pi, mu)
            acc += 2j * (a - b)
        ar[al] += acc
    ar -= 2 * coup * w * bil.scalar
    ar += 2 * m * s
    out["pseudoscalar_gradient"] = np.abs(ar).max() / scale

    return out


def dirac_residual(fld, bg: Background, basis, x) -> float:
    """Norm of the field equation applied to the field, per unit spinor norm."""
    psi = fld.evaluate(np.asarray(x, dtype=float))
    grad = covariant_derivative(fld, bg, x)
    w_low = ETA @ bg.w_value(x)
    op = np.zeros(4, dtype=complex)
    for mu in range(4):
        op += 1j * basis.gamma[mu] @ grad[mu]
    op -= bg.torsion_coupling * np.einsum(
        "a,aij,jk,k->i", w_low, basis.gamma, basis.pi, psi
    )
    op -= bg.mass * psi
    return float(np.linalg.norm(op) / np.linalg.norm(psi))


@dataclass
class QuantumPotentials:
    e: np.ndarray   # lowered components
    f: np.ndarray


def compute_potentials(jet: PolarJet, bg: Background) -> QuantumPotentials:
    w_low = ETA @ bg.w_value(jet.x)
    s_low = ETA @ jet.pd.spin
    beta = jet.pd.chiral_angle
    e = (
        jet.tc.axial_dual()
        - bg.torsion_coupling * w_low
        + 0.5 * jet.dchiral
        + bg.mass * s_low * np.cos(beta)
    )
    f = jet.tc.trace_contraction() + jet.dlogdensity + bg.mass * s_low * np.sin(beta)
    return QuantumPotentials(e=e, f=f)


def residual_polar_groups(jet: PolarJet, bg: Background, basis) -> dict:
    """All four projection groups of the polar field equations.

    Groups a and b project along the velocity and spin, group c solves for
    the momentum covector, group d is the momentum decomposition itself.
    """
    pot = compute_potentials(jet, bg)
    e, f = pot.e, pot.f
    p = jet.tc.p
    u = jet.pd.velocity
    s = jet.pd.spin
    u_low, s_low = ETA @ u, ETA @ s
    e_up, f_up, p_up = ETA @ e, ETA @ f, ETA @ p
    eps_up = basis.eps_upper
    eps_low = basis.eps_lower

    out = {}
    out["a1"] = abs(f @ u)
    out["a2"] = abs(e @ u + p @ s)
    a3 = (
        np.einsum("anmr,m,r->an", eps_up, e, u_low)
        + np.outer(f_up, u) - np.outer(u, f_up)
        + np.einsum("anmr,m,r->an", eps_up, p, s_low)
    )
    out["a3"] = np.abs(a3).max()

    out["b1"] = abs(f @ s)
    out["b2"] = abs(e @ s + p @ u)
    b3 = (
        np.einsum("anmr,m,r->an", eps_up, e, s_low)
        + np.outer(f_up, s) - np.outer(s, f_up)
        + np.einsum("anmr,m,r->an", eps_up, p, u_low)
    )
    out["b3"] = np.abs(b3).max()

    c1 = (
        np.einsum("m,j,k,jkma->a", f, u_low, s_low, eps_up)
        + (e @ u) * s - (e @ s) * u - p_up
    )
    out["c1"] = np.abs(c1).max()
    c2 = (
        (f @ u) * s - (f @ s) * u
        - np.einsum("m,j,k,jkma->a", e, u_low, s_low, eps_up)
    )
    out["c2"] = np.abs(c2).max()

    d1 = f - np.einsum("mrna,r,n,a->m", eps_low, p_up, u, s)
    out["d1"] = np.abs(d1).max()
    d2 = e - (p @ u) * s_low + (p @ s) * u_low
    out["d2"] = np.abs(d2).max()
    return out


def group_d_residual(jet: PolarJet, bg: Background, basis) -> float:
    groups = residual_polar_groups(jet, bg, basis)
    return max(groups["d1"], groups["d2"])


def equivalence_probe(fld, bg: Background, basis, points, h=1e-3):
    """Field-equation residual next to the group-d residual at each point.

    Both are intensive mass-scale numbers, so on a solution both sit at the
    finite-difference floor and on a non-solution both are visibly nonzero,
    within a common factor.
    """
    rows = []
    for x in points:
        jet = polar_jet(fld, bg, basis, x, h)
        rows.append(
            {
                "point": np.asarray(x, dtype=float),
                "dirac": dirac_residual(fld, bg, basis, x),
                "group_d": group_d_residual(jet, bg, basis),
            }
        )
    return rows
