# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled element integration kernel (hot loop of every Newton iteration).

Scalar twin of ``_kernel_numpy.element_batch``; the Python wrapper in
``kernels.py`` selects whichever is available.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

cnp.import_array()


def element_batch(const double[::1] u,
                  const cnp.int64_t[:, ::1] edof,
                  const double[::1] gammas,
                  double lam0, double mu0, double kr,
                  const double[:, :, ::1] B0,
                  const double[:, :, ::1] G,
                  const double[:, :, ::1] H,
                  const double[:, :, ::1] HtH,
                  const double[::1] wdetj):
    cdef Py_ssize_t nel = edof.shape[0]
    cdef Py_ssize_t nq = wdetj.shape[0]

    Ke_np = np.zeros((nel, 8, 8))
    fe_np = np.zeros((nel, 8))
    fmat_np = np.zeros((nel, 8))
    sed_np = np.zeros(nel)
    cdef double[:, :, ::1] Ke = Ke_np
    cdef double[:, ::1] fe = fe_np
    cdef double[:, ::1] fmat = fmat_np
    cdef double[::1] sed = sed_np

    cdef double area = 0.0
    cdef Py_ssize_t e, q, i, j, r
    for q in range(nq):
        area += wdetj[q]

    cdef double ue[8]
    cdef double th[4]
    cdef double Bg[3][8]
    cdef double DB[3][8]
    cdef double hu[6]
    cdef double av[8]
    cdef double bv[8]
    cdef double fq[8]
    cdef double gam, w, wg, wexp
    cdef double F11, F12, F21, F22, J, lnj, ij2
    cdef double C11, C12, C22, Ci11, Ci12, Ci22
    cdef double s11, s22, s12, co, lam2co, llnj
    cdef double D00, D01, D02, D11, D12, D22
    cdef double W, hsq, kij, geo, sede

    for e in range(nel):
        gam = gammas[e]
        for j in range(8):
            ue[j] = u[edof[e, j]]
        sede = 0.0
        for q in range(nq):
            w = wdetj[q]
            for i in range(4):
                th[i] = 0.0
                for j in range(8):
                    th[i] += G[q, i, j] * ue[j]
            F11 = 1.0 + th[0]
            F12 = th[1]
            F21 = th[2]
            F22 = 1.0 + th[3]
            J = F11 * F22 - F12 * F21
            if J <= 0.0:
                return None, None, None, None, e

            lnj = log(J)
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

            for j in range(8):
                Bg[0][j] = B0[q, 0, j] + th[0] * G[q, 0, j] + th[2] * G[q, 2, j]
                Bg[1][j] = B0[q, 1, j] + th[1] * G[q, 1, j] + th[3] * G[q, 3, j]
                Bg[2][j] = (B0[q, 2, j] + th[1] * G[q, 0, j] + th[0] * G[q, 1, j]
                            + th[3] * G[q, 2, j] + th[2] * G[q, 3, j])
                DB[0][j] = D00 * Bg[0][j] + D01 * Bg[1][j] + D02 * Bg[2][j]
                DB[1][j] = D01 * Bg[0][j] + D11 * Bg[1][j] + D12 * Bg[2][j]
                DB[2][j] = D02 * Bg[0][j] + D12 * Bg[1][j] + D22 * Bg[2][j]

            for j in range(8):
                fq[j] = Bg[0][j] * s11 + Bg[1][j] * s22 + Bg[2][j] * s12
                fmat[e, j] += w * fq[j]

            wg = w * gam
            for i in range(8):
                for j in range(8):
                    kij = (Bg[0][i] * DB[0][j] + Bg[1][i] * DB[1][j]
                           + Bg[2][i] * DB[2][j])
                    geo = (s11 * (G[q, 0, i] * G[q, 0, j] + G[q, 2, i] * G[q, 2, j])
                           + s22 * (G[q, 1, i] * G[q, 1, j] + G[q, 3, i] * G[q, 3, j])
                           + s12 * (G[q, 0, i] * G[q, 1, j] + G[q, 1, i] * G[q, 0, j]
                                    + G[q, 2, i] * G[q, 3, j] + G[q, 3, i] * G[q, 2, j]))
                    Ke[e, i, j] += wg * (kij + geo)

            # Hessian penalty, gated by exp(-5 J); tangent carries the
            # rank-1 cross term from linearizing the gate, which makes
            # the matrix nonsymmetric
            hsq = 0.0
            for r in range(6):
                hu[r] = 0.0
                for j in range(8):
                    hu[r] += H[q, r, j] * ue[j]
                hsq += hu[r] * hu[r]
            for j in range(8):
                av[j] = 0.0
                for r in range(6):
                    av[j] += H[q, r, j] * hu[r]
                bv[j] = (F22 * G[q, 0, j] - F21 * G[q, 1, j]
                         - F12 * G[q, 2, j] + F11 * G[q, 3, j])
            wexp = kr * exp(-5.0 * J) * w
            for i in range(8):
                fe[e, i] += gam * w * fq[i] + wexp * av[i]
                for j in range(8):
                    Ke[e, i, j] += wexp * (HtH[q, i, j] - 5.0 * av[i] * bv[j])

            W = 0.5 * lam0 * lnj * lnj + 0.5 * mu0 * (C11 + C22 - 2.0) - mu0 * lnj
            sede += w * (gam * W + 0.5 * kr * exp(-5.0 * J) * hsq)
        sed[e] = sede / area

    return Ke_np, fe_np, fmat_np, sed_np, -1
