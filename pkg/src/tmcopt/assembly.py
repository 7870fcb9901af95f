"""Global assembly of the tangent stiffness and internal force.

Element contributions come from the selected kernel backend and are
scattered by triplets (duplicate entries summed on conversion), with no
symmetry shortcuts: the exp-gated Hessian penalty makes the tangent
nonsymmetric whenever void elements carry skew deformation.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import kernels

__all__ = [
    "ElementState",
    "SparseSystem",
    "element_tangent_force",
    "assemble_global",
    "total_energy",
    "ReducedPattern",
]


@dataclass
class ElementState:
    """Displacements and stiffness scale of one element."""

    u_e: np.ndarray  # (8,)
    gamma_e: float = 1.0


@dataclass
class SparseSystem:
    """Assembled global system plus per-element extras.

    ``fmat_unit`` holds each element's material internal force evaluated
    at gamma = 1 (the derivative of f_int w.r.t. the element's stiffness
    scale); ``elem_sed`` the volume-averaged energy density.
    """

    K: sp.csc_matrix
    f_int: np.ndarray
    fmat_unit: np.ndarray = field(default=None, repr=False)
    elem_sed: np.ndarray = field(default=None, repr=False)


def element_tangent_force(state, ops, mat):
    """Tangent stiffness (8x8) and internal force (8,) of one element."""
    u_e = np.asarray(state.u_e, dtype=float)
    edof = np.arange(8, dtype=np.int64)[None, :]
    gam = np.array([float(state.gamma_e)])
    Ke, fe, _, _ = kernels.element_batch(
        u_e, edof, gam, mat.lambda0, mat.mu0, mat.kr, ops
    )
    return Ke[0], fe[0]


def _triplet_pattern(mesh):
    edof = mesh.elem_dof_map
    iK = np.repeat(edof, 8, axis=1).ravel()
    jK = np.tile(edof, (1, 8)).ravel()
    return iK, jK


def assemble_global(u, gammas, mesh, ops, mat):
    """Assemble the full tangent and internal force at displacement ``u``."""
    u = np.asarray(u, dtype=float)
    if u.shape != (mesh.n_dof,):
        raise ValueError(f"displacement vector must have shape ({mesh.n_dof},)")
    gammas = np.ascontiguousarray(gammas, dtype=float)
    Ke, fe, fmat, sed = kernels.element_batch(
        u, mesh.elem_dof_map, gammas, mat.lambda0, mat.mu0, mat.kr, ops
    )
    iK, jK = _triplet_pattern(mesh)
    K = sp.coo_matrix((Ke.ravel(), (iK, jK)), shape=(mesh.n_dof, mesh.n_dof)).tocsc()
    f_int = np.bincount(
        mesh.elem_dof_map.ravel(), weights=fe.ravel(), minlength=mesh.n_dof
    )
    return SparseSystem(K, f_int, fmat, sed)


def total_energy(u, gammas, mesh, ops, mat, exp_from=None):
    """Discrete total energy; see kernels.total_energy for the exp gate."""
    return kernels.total_energy(
        np.asarray(u, dtype=float),
        mesh.elem_dof_map,
        np.asarray(gammas, dtype=float),
        mat.lambda0,
        mat.mu0,
        mat.kr,
        ops.G,
        ops.H,
        ops.wdetj,
        exp_from=exp_from,
    )


class ReducedPattern:
    """Precomputed scatter pattern restricted to the free DOFs.

    Dirichlet DOFs are eliminated rather than penalized; the pattern is
    built once per boundary-condition set and reused by every Newton
    iteration, skipping the full-matrix detour.
    """

    def __init__(self, mesh, fixed_dofs):
        fixed = np.unique(np.asarray(fixed_dofs, dtype=np.int64))
        if fixed.size and (fixed.min() < 0 or fixed.max() >= mesh.n_dof):
            raise ValueError("fixed DOF index out of range")
        self.n_dof = mesh.n_dof
        self.free = np.setdiff1d(np.arange(mesh.n_dof, dtype=np.int64), fixed)
        self.fixed = fixed
        red = np.full(mesh.n_dof, -1, dtype=np.int64)
        red[self.free] = np.arange(self.free.size)
        iK, jK = _triplet_pattern(mesh)
        self._keep = (red[iK] >= 0) & (red[jK] >= 0)
        self._ir = red[iK[self._keep]]
        self._jr = red[jK[self._keep]]
        self.n_free = self.free.size

    def reduced_matrix(self, Ke):
        """Free-DOF tangent from the stacked element matrices."""
        return sp.coo_matrix(
            (Ke.ravel()[self._keep], (self._ir, self._jr)),
            shape=(self.n_free, self.n_free),
        ).tocsc()
