"""Load-controlled incremental-iterative Newton equilibrium solver.

Pure Newton, no damping or line search: each increment raises the load
multiplier by a uniform step and restores equilibrium from the previous
converged state.  Failures (non-convergence, element inversion) abort
the increment immediately and surface as NonlinearSolveError carrying
the partial history.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import kernels
from .assembly import ReducedPattern
from .errors import InvertedElementError, LinearSolveError, NonlinearSolveError

__all__ = [
    "SolverSettings",
    "AnalysisHistory",
    "linear_solve",
    "newton_step",
    "incremental_solve",
]


@dataclass(frozen=True)
class SolverSettings:
    n_incr: int = 200
    max_iter: int = 50
    tol_rel_res: float = 1e-6
    lambda_max: float = 1.0  # end value of the reported load multiplier

    def __post_init__(self):
        if self.n_incr < 1:
            raise ValueError("n_incr must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.tol_rel_res <= 0:
            raise ValueError("tol_rel_res must be positive")
        if self.lambda_max <= 0:
            raise ValueError("lambda_max must be positive")


@dataclass
class AnalysisHistory:
    """Per-increment record of a load-stepping run."""

    lambdas: list = field(default_factory=list)
    iterations: list = field(default_factory=list)
    residuals: list = field(default_factory=list)  # final relative residual
    residual_traces: list = field(default_factory=list)
    displacements: list = field(default_factory=list)

    @property
    def u_end(self):
        return self.displacements[-1] if self.displacements else None

    def __len__(self):
        return len(self.lambdas)


def linear_solve(K_reduced, rhs, transpose=False):
    """Direct sparse LU (partial pivoting) on a square nonsymmetric matrix."""
    rhs = np.asarray(rhs, dtype=float)
    K = sp.csc_matrix(K_reduced)
    if K.shape[0] != K.shape[1] or K.shape[0] != rhs.shape[0]:
        raise ValueError("matrix/rhs size mismatch")
    try:
        lu = spla.splu(K)
        x = lu.solve(rhs, trans="T" if transpose else "N")
    except RuntimeError as exc:  # singular factor / zero pivot
        raise LinearSolveError(f"sparse LU failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise LinearSolveError("sparse LU produced non-finite solution")
    return x


def _relative_residual(r_free, denom):
    rn = float(np.linalg.norm(r_free))
    if denom > 0.0:
        return rn / denom
    return 0.0 if rn == 0.0 else np.inf


def newton_step(u, lam, f0, fixed_dofs, mesh, ops, mat, gammas, f_ref_norm=None):
    """One Newton update at load multiplier ``lam``.

    Returns the updated displacement vector and the residual norm before
    the update, relative to the reference (end) load: the convergence
    bar is a uniform absolute force accuracy across the whole ladder,
    which is why restoring equilibrium gets harder as the load grows.
    Fixed DOFs are untouched.
    """
    pattern = ReducedPattern(mesh, fixed_dofs)
    Ke, fe, _, _ = kernels.element_batch(
        np.asarray(u, dtype=float), mesh.elem_dof_map,
        np.ascontiguousarray(gammas, dtype=float), mat.lambda0, mat.mu0, mat.kr, ops,
    )
    f_int = np.bincount(mesh.elem_dof_map.ravel(), weights=fe.ravel(),
                        minlength=mesh.n_dof)
    r = lam * f0 - f_int
    if f_ref_norm is None:
        f_ref_norm = np.linalg.norm(f0[pattern.free])
    rel = _relative_residual(r[pattern.free], f_ref_norm)
    du = linear_solve(pattern.reduced_matrix(Ke), r[pattern.free])
    u_new = np.array(u, dtype=float, copy=True)
    u_new[pattern.free] += du
    return u_new, rel


def incremental_solve(settings, mesh, ops, mat, gammas, fixed_dofs, f0,
                      on_increment=None):
    """March the load multiplier from 0 to lambda_max in uniform steps.

    The reported multiplier is normalized to [0, 1]; the applied load is
    ``lam * lambda_max * f0``.  ``on_increment(incr, lam, u, iters, res)``
    is called after each converged increment (history sink).
    """
    f0 = np.asarray(f0, dtype=float)
    gammas = np.ascontiguousarray(gammas, dtype=float)
    pattern = ReducedPattern(mesh, fixed_dofs)
    if np.any(f0[pattern.fixed] != 0.0):
        raise ValueError("reference load must vanish on fixed DOFs")

    u = np.zeros(mesh.n_dof)
    history = AnalysisHistory()
    edof_flat = mesh.elem_dof_map.ravel()
    # residuals are measured against the end load of the run: a uniform
    # absolute force tolerance over the whole ladder
    denom = settings.lambda_max * np.linalg.norm(f0[pattern.free])

    for i in range(1, settings.n_incr + 1):
        lam = i / settings.n_incr
        fext = (lam * settings.lambda_max) * f0
        iters = 0
        trace = []
        while True:
            try:
                Ke, fe, _, _ = kernels.element_batch(
                    u, mesh.elem_dof_map, gammas, mat.lambda0, mat.mu0, mat.kr, ops
                )
            except InvertedElementError as exc:
                raise NonlinearSolveError(
                    f"element {exc.element} inverted in increment {i}",
                    increment=i, residual=trace[-1] if trace else None,
                    history=history,
                ) from exc
            f_int = np.bincount(edof_flat, weights=fe.ravel(), minlength=mesh.n_dof)
            r = fext - f_int
            rel = _relative_residual(r[pattern.free], denom)
            trace.append(rel)
            if rel <= settings.tol_rel_res:
                break
            if iters >= settings.max_iter:
                raise NonlinearSolveError(
                    f"no convergence in increment {i} "
                    f"after {iters} iterations (residual {rel:.3e})",
                    increment=i, residual=rel, history=history,
                )
            try:
                du = linear_solve(pattern.reduced_matrix(Ke), r[pattern.free])
            except LinearSolveError as exc:
                raise NonlinearSolveError(
                    f"linear solve failed in increment {i}: {exc}",
                    increment=i, residual=rel, history=history,
                ) from exc
            u[pattern.free] += du
            iters += 1

        history.lambdas.append(lam)
        history.iterations.append(iters)
        history.residuals.append(trace[-1])
        history.residual_traces.append(trace)
        history.displacements.append(u.copy())
        if on_increment is not None:
            on_increment(i, lam, u, iters, trace[-1])

    return history
