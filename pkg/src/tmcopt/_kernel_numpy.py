"""Vectorized numpy implementation of the element integration kernel.

This is the reference/fallback twin of the compiled kernel in
``_corekernel.pyx``; both evaluate exactly the same quantities.  See
``kernels.element_batch`` for the contract.
"""

import numpy as np


def element_batch(u, edof, gammas, lam0, mu0, kr, B0, G, H, HtH, wdetj):
    nel = edof.shape[0]
    nq = wdetj.shape[0]
    ue = u[edof]  # (nel, 8)

    th = np.einsum("qaj,ej->qea", G, ue)  # (nq, nel, 4)
    F11 = 1.0 + th[..., 0]
    F12 = th[..., 1]
    F21 = th[..., 2]
    F22 = 1.0 + th[..., 3]
    J = F11 * F22 - F12 * F21
    if np.any(J <= 0.0):
        bad = int(np.flatnonzero(np.any(J <= 0.0, axis=0))[0])
        return None, None, None, None, bad

    lnj = np.log(J)
    ij2 = 1.0 / (J * J)
    C11 = F11 * F11 + F21 * F21
    C12 = F11 * F12 + F21 * F22
    C22 = F12 * F12 + F22 * F22
    Ci11 = C22 * ij2
    Ci12 = -C12 * ij2
    Ci22 = C11 * ij2

    llnj = lam0 * lnj
    s11 = llnj * Ci11 + mu0 * (1.0 - Ci11)
    s22 = llnj * Ci22 + mu0 * (1.0 - Ci22)
    s12 = (llnj - mu0) * Ci12

    co = mu0 - llnj
    lam2co = lam0 + 2.0 * co
    D00 = lam2co * Ci11 * Ci11
    D01 = lam0 * Ci11 * Ci22 + 2.0 * co * Ci12 * Ci12
    D02 = lam2co * Ci11 * Ci12
    D11 = lam2co * Ci22 * Ci22
    D12 = lam2co * Ci22 * Ci12
    D22 = lam0 * Ci12 * Ci12 + co * (Ci11 * Ci22 + Ci12 * Ci12)

    # nonlinear strain-displacement matrix B_gamma = B0 + A(grad u) G
    Bg = np.broadcast_to(B0[:, None], (nq, nel, 3, 8)).copy()
    g0, g1, g2, g3 = G[:, None, 0], G[:, None, 1], G[:, None, 2], G[:, None, 3]
    t0, t1 = th[..., 0, None], th[..., 1, None]
    t2, t3 = th[..., 2, None], th[..., 3, None]
    Bg[:, :, 0] += t0 * g0 + t2 * g2
    Bg[:, :, 1] += t1 * g1 + t3 * g3
    Bg[:, :, 2] += t1 * g0 + t0 * g1 + t3 * g2 + t2 * g3

    # material internal force at gamma = 1 (the adjoint needs it raw)
    Sv = np.stack([s11, s22, s12], axis=-1)  # (nq, nel, 3)
    fmat = np.einsum("qeaj,qea,q->ej", Bg, Sv, wdetj)

    # material tangent
    DB = np.empty_like(Bg)
    DB[:, :, 0] = D00[..., None] * Bg[:, :, 0] + D01[..., None] * Bg[:, :, 1] + D02[..., None] * Bg[:, :, 2]
    DB[:, :, 1] = D01[..., None] * Bg[:, :, 0] + D11[..., None] * Bg[:, :, 1] + D12[..., None] * Bg[:, :, 2]
    DB[:, :, 2] = D02[..., None] * Bg[:, :, 0] + D12[..., None] * Bg[:, :, 1] + D22[..., None] * Bg[:, :, 2]
    Kmat = np.einsum("qeai,qeaj,q->eij", Bg, DB, wdetj)

    # geometric tangent: same 2x2 stress block for both displacement components
    SG0 = s11[..., None] * g0 + s12[..., None] * g1
    SG1 = s12[..., None] * g0 + s22[..., None] * g1
    SG2 = s11[..., None] * g2 + s12[..., None] * g3
    SG3 = s12[..., None] * g2 + s22[..., None] * g3
    Kgeo = (
        np.einsum("qi,qej,q->eij", G[:, 0], SG0, wdetj)
        + np.einsum("qi,qej,q->eij", G[:, 1], SG1, wdetj)
        + np.einsum("qi,qej,q->eij", G[:, 2], SG2, wdetj)
        + np.einsum("qi,qej,q->eij", G[:, 3], SG3, wdetj)
    )

    # Hessian (HuHu) regularization, gated by exp(-5 det F)
    hu = np.einsum("qrj,ej->qer", H, ue)  # (nq, nel, 6)
    a = np.einsum("qrj,qer->qej", H, hu)  # H^T (H u)
    wexp = kr * np.exp(-5.0 * J) * wdetj[:, None]  # (nq, nel)
    fh = np.einsum("qe,qej->ej", wexp, a)
    b = F22[..., None] * g0 - F21[..., None] * g1 - F12[..., None] * g2 + F11[..., None] * g3
    Kh = np.einsum("qe,qij->eij", wexp, HtH) - 5.0 * np.einsum("qe,qei,qej->eij", wexp, a, b)

    gam = np.asarray(gammas, dtype=float)
    fe = gam[:, None] * fmat + fh
    Ke = gam[:, None, None] * (Kmat + Kgeo) + Kh

    # volume-averaged energy density per element (material + gated penalty)
    W = 0.5 * lam0 * lnj * lnj + 0.5 * mu0 * (C11 + C22 - 2.0) - mu0 * lnj
    hsq = np.einsum("qer,qer->qe", hu, hu)
    dens = gam[None, :] * W + 0.5 * kr * np.exp(-5.0 * J) * hsq
    sed = np.einsum("qe,q->e", dens, wdetj) / wdetj.sum()

    return Ke, fe, fmat, sed, -1


def total_energy(u, edof, gammas, lam0, mu0, kr, G, H, wdetj, exp_from=None):
    """Discrete energy: sum of gamma*W plus the Hessian penalty.

    The exp(-5 J) gate is evaluated at ``exp_from`` (defaults to ``u``);
    freezing it at a reference state makes the expression the exact
    potential of the internal-force formula at that state, which is what
    the finite-difference consistency tests differentiate.
    """
    ue = u[edof]
    th = np.einsum("qaj,ej->qea", G, ue)
    F11, F12 = 1.0 + th[..., 0], th[..., 1]
    F21, F22 = th[..., 2], 1.0 + th[..., 3]
    J = F11 * F22 - F12 * F21
    if np.any(J <= 0.0):
        raise ValueError("inverted element in energy evaluation")
    lnj = np.log(J)
    trc = F11**2 + F12**2 + F21**2 + F22**2
    W = 0.5 * lam0 * lnj * lnj + 0.5 * mu0 * (trc - 2.0) - mu0 * lnj

    if exp_from is None:
        Jgate = J
    else:
        tg = np.einsum("qaj,ej->qea", G, exp_from[edof])
        Jgate = (1.0 + tg[..., 0]) * (1.0 + tg[..., 3]) - tg[..., 1] * tg[..., 2]
    hu = np.einsum("qrj,ej->qer", H, ue)
    hsq = np.einsum("qer,qer->qe", hu, hu)

    gam = np.asarray(gammas, dtype=float)
    dens = gam[None, :] * W + 0.5 * kr * np.exp(-5.0 * Jgate) * hsq
    return float(np.einsum("qe,q->", dens, wdetj))
