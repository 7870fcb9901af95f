"""Density filtering, Heaviside projection and the reverse chain rule.

The minimum-length-scale filter is the screened-Poisson problem
(-l^2 lap + 1) rho_tilde = rho, discretized on the element-centroid grid
with a 5-point stencil and mirrored (homogeneous Neumann) boundaries.
The operator is symmetric positive definite, factorized once, and
self-adjoint, so the same solve maps sensitivities back.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

__all__ = ["DensityFilter", "DesignState", "build_filter", "project",
           "project_deriv", "chain_rule"]


class DensityFilter:
    """Factorized screened-Poisson smoother on the element grid."""

    def __init__(self, mesh, rmin):
        if rmin <= 0:
            raise ValueError("rmin must be positive")
        if rmin < max(mesh.dx, mesh.dy):
            warnings.warn(
                f"filter radius {rmin} below the element size "
                f"({mesh.dx:.3g} x {mesh.dy:.3g}); filtering is near-identity"
            )
        self.rmin = float(rmin)
        # standard conversion from a convolution radius to the PDE length
        self.length = float(rmin) / (2.0 * np.sqrt(3.0))
        self.mesh = mesh

        def second_diff(n, h):
            main = np.full(n, 2.0)
            main[0] = main[-1] = 1.0  # mirrored ghost cell
            T = sp.diags([main, -np.ones(n - 1), -np.ones(n - 1)], [0, -1, 1])
            return T / (h * h)

        lx = second_diff(mesh.nelx, mesh.dx)
        ly = second_diff(mesh.nely, mesh.dy)
        # flat element index is column-major (x slow, y fast)
        lap = sp.kron(lx, sp.identity(mesh.nely)) + sp.kron(sp.identity(mesh.nelx), ly)
        A = (sp.identity(mesh.n_elems) + self.length**2 * lap).tocsc()
        self._lu = spla.splu(A)

    def apply(self, rho):
        """Solve (I + l^2 L) x = rho; self-adjoint in the element basis."""
        rho = np.asarray(rho, dtype=float)
        if rho.shape != (self.mesh.n_elems,):
            raise ValueError("field size does not match the element count")
        return self._lu.solve(rho)


def build_filter(mesh, rmin):
    return DensityFilter(mesh, rmin)


def project(x_tilde, beta, eta):
    """Relaxed Heaviside projection; fixes 0 -> 0 and 1 -> 1."""
    x_tilde = np.asarray(x_tilde, dtype=float)
    num = np.tanh(beta * eta) + np.tanh(beta * (x_tilde - eta))
    return num / (np.tanh(beta * eta) + np.tanh(beta * (1.0 - eta)))


def project_deriv(x_tilde, beta, eta):
    """d(project)/d(x_tilde)."""
    x_tilde = np.asarray(x_tilde, dtype=float)
    sech2 = 1.0 - np.tanh(beta * (x_tilde - eta)) ** 2
    return beta * sech2 / (np.tanh(beta * eta) + np.tanh(beta * (1.0 - eta)))


@dataclass
class DesignState:
    """Raw, filtered and projected density fields of one redesign step."""

    x: np.ndarray
    x_tilde: np.ndarray
    x_hat: np.ndarray
    x_hat_dilated: np.ndarray
    pasS: np.ndarray  # frozen-solid element indices
    pasV: np.ndarray  # frozen-void element indices
    beta: float
    eta_b: float
    eta_d: float
    filt: DensityFilter

    @property
    def l_filter(self):
        return self.filt.length

    @classmethod
    def compute(cls, x, filt, beta, eta_b, eta_d, pasS, pasV):
        """Clamp passives, filter, then project at both thresholds."""
        x = np.array(x, dtype=float, copy=True)
        x[pasS] = 1.0
        x[pasV] = 0.0
        xt = filt.apply(x)
        return cls(x, xt, project(xt, beta, eta_b), project(xt, beta, eta_d),
                   np.asarray(pasS, dtype=np.int64), np.asarray(pasV, dtype=np.int64),
                   float(beta), float(eta_b), float(eta_d), filt)


def chain_rule(dfdx_hat, state, dilated=False):
    """Pull a sensitivity w.r.t. the projected field back to the raw design.

    Multiplies by the projection slope, applies the (self-adjoint) filter
    solve, and zeroes passive elements.
    """
    eta = state.eta_d if dilated else state.eta_b
    dfdx_tilde = np.asarray(dfdx_hat, dtype=float) * project_deriv(
        state.x_tilde, state.beta, eta
    )
    dfdx = state.filt.apply(dfdx_tilde)
    dfdx[state.pasS] = 0.0
    dfdx[state.pasV] = 0.0
    return dfdx
