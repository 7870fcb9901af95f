"""Design- and state-independent operators of the bilinear quad.

For the rectangular element the map from the logical square [-1, 1]^2 is
affine, so the Jacobian is constant and the operators are identical for
every element of a uniform grid; they are built once per mesh.

Local node order matches the mesh convention (UL, LL, LR, UR), i.e. the
logical corners (-1, +1), (-1, -1), (+1, -1), (+1, +1).
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadOperators", "shape_eval", "build_operators"]

# logical corner coordinates per local node
_XI = np.array([-1.0, -1.0, 1.0, 1.0])
_ZETA = np.array([1.0, -1.0, -1.0, 1.0])


def shape_eval(xi, zeta):
    """Bilinear shape functions and their logical-coordinate derivatives.

    Returns
    -------
    N : (4,) values
    dN : (2, 4) rows (d/dxi, d/dzeta)
    d2N : (3, 4) rows (d2/dxi2, d2/dxi dzeta, d2/dzeta2); the pure second
        derivatives vanish identically for the bilinear basis.
    """
    if not (-1.0 <= xi <= 1.0 and -1.0 <= zeta <= 1.0):
        raise ValueError(f"logical coordinates out of [-1,1]^2: ({xi}, {zeta})")
    N = 0.25 * (1.0 + xi * _XI) * (1.0 + zeta * _ZETA)
    dN = np.vstack([0.25 * _XI * (1.0 + zeta * _ZETA), 0.25 * _ZETA * (1.0 + xi * _XI)])
    d2N = np.vstack([np.zeros(4), 0.25 * _XI * _ZETA, np.zeros(4)])
    return N, dN, d2N


@dataclass(frozen=True)
class QuadOperators:
    """Per-quadrature-point element operators for one rectangle size.

    B0 maps nodal displacements to the linear strain (exx, eyy, gxy).
    G stacks the displacement gradient rows (ux,x  ux,y  uy,x  uy,y).
    H stacks three second derivatives per displacement component,
    (u,xx  u,xy  u,yy), with the mixed row scaled by sqrt(2) so that
    H^T H reproduces the full Hessian self-contraction (the mixed term
    appears twice in the tensor sum).
    """

    points: np.ndarray  # (nq, 2) logical coordinates
    weights: np.ndarray  # (nq,)
    B0: np.ndarray  # (nq, 3, 8)
    G: np.ndarray  # (nq, 4, 8)
    H: np.ndarray  # (nq, 6, 8)
    detJ: np.ndarray  # (nq,)
    HtH: np.ndarray  # (nq, 8, 8), precomputed H^T H
    elem_width: float
    elem_height: float

    @property
    def wdetj(self):
        return self.weights * self.detJ

    @property
    def area(self):
        return float(np.sum(self.weights * self.detJ))


def build_operators(elem_width, elem_height, n_gauss_1d=2):
    """Assemble B0, G, H and quadrature data for a w x h rectangle.

    2x2 Gauss integration is the default: it integrates the bilinear
    material stiffness exactly.
    """
    if elem_width <= 0.0 or elem_height <= 0.0:
        raise ValueError(
            f"degenerate element ({elem_width} x {elem_height}): singular Jacobian"
        )
    if n_gauss_1d < 2:
        raise ValueError("need at least a 2x2 Gauss rule")

    gp, gw = np.polynomial.legendre.leggauss(n_gauss_1d)
    w, h = float(elem_width), float(elem_height)
    # affine map: x = xc + (w/2) xi, y = yc + (h/2) zeta
    sx, sy = 2.0 / w, 2.0 / h
    detj = (w / 2.0) * (h / 2.0)

    pts, wts, B0s, Gs, Hs = [], [], [], [], []
    for zeta, wz in zip(gp, gw):
        for xi, wx in zip(gp, gw):
            pts.append((xi, zeta))
            wts.append(wx * wz)
    for xi, zeta in pts:
        _, dN, d2N = shape_eval(xi, zeta)
        dndx, dndy = sx * dN[0], sy * dN[1]
        G = np.zeros((4, 8))
        G[0, 0::2] = dndx
        G[1, 0::2] = dndy
        G[2, 1::2] = dndx
        G[3, 1::2] = dndy
        B0 = np.zeros((3, 8))
        B0[0, 0::2] = dndx
        B0[1, 1::2] = dndy
        B0[2, 0::2] = dndy
        B0[2, 1::2] = dndx
        d2xx = sx * sx * d2N[0]
        d2xy = sx * sy * d2N[1]
        d2yy = sy * sy * d2N[2]
        H = np.zeros((6, 8))
        H[0, 0::2] = d2xx
        H[1, 0::2] = np.sqrt(2.0) * d2xy
        H[2, 0::2] = d2yy
        H[3, 1::2] = d2xx
        H[4, 1::2] = np.sqrt(2.0) * d2xy
        H[5, 1::2] = d2yy
        Gs.append(G)
        B0s.append(B0)
        Hs.append(H)

    points = np.array(pts)
    weights = np.array(wts)
    B0a, Ga, Ha = np.array(B0s), np.array(Gs), np.array(Hs)
    HtH = np.einsum("qri,qrj->qij", Ha, Ha)
    detJ = np.full(len(pts), detj)
    for arr in (points, weights, B0a, Ga, Ha, HtH, detJ):
        arr.setflags(write=False)
    return QuadOperators(points, weights, B0a, Ga, Ha, detJ, HtH, w, h)
