"""End-compliance minimization with adjoint sensitivities.

The nested loop: project the design, solve the nonlinear equilibrium to
the end load, evaluate compliance and its adjoint gradient, pull both
the objective and the dilated-volume constraint back through projection
and filter, then update the design with a single-constraint MMA-like
dual step under sharpness continuation.
"""

from dataclasses import dataclass, field

import numpy as np

from .assembly import ReducedPattern
from .design import DesignState, chain_rule
from .errors import NonlinearSolveError, OptimizationError
from .material import ramp, ramp_deriv
from .solver import SolverSettings, incremental_solve, linear_solve
from . import kernels

__all__ = [
    "OptSettings",
    "end_compliance",
    "adjoint_sensitivity",
    "volume_constraint",
    "mma_like_update",
    "beta_schedule",
    "optimize",
]


@dataclass(frozen=True)
class OptSettings:
    volfrac: float = 0.25
    max_outer_iters: int = 300
    move_limit: float = 0.2
    beta_start: float = 1.0
    beta_cap: float = 15.0
    beta_incr_start: int = 60  # first outer iteration that doubles beta
    beta_incr_every: int = 30
    ramp_p: float = 4.0
    lambda_end: float = 1.0
    change_tol: float = 1e-3
    n_incr: int = 20  # load increments of each forward analysis
    max_iter: int = 50
    tol_rel_res: float = 1e-6

    def __post_init__(self):
        if not (0.0 < self.volfrac < 1.0):
            raise ValueError("volfrac must be in (0, 1)")
        if not (0.0 < self.move_limit <= 1.0):
            raise ValueError("move_limit must be in (0, 1]")


def end_compliance(u_end, f0, lambda_end):
    """Work-like objective at the final load level (N mm)."""
    return float(lambda_end * np.dot(f0, u_end))


def adjoint_sensitivity(u_end, gammas, dgamma_dxhat, f0, lambda_end, mesh, ops,
                        mat, fixed_dofs):
    """d(compliance)/d(projected density), one transposed tangent solve.

    The adjoint solves K_T^T theta = lambda_end * f0 on the free DOFs
    (the tangent is nonsymmetric, so the transpose matters); the
    per-element sensitivity is -theta_e . f_mat,e * dgamma/drho_hat,
    where f_mat,e is the material internal force at unit stiffness scale
    (the Hessian penalty does not depend on the design).
    """
    pattern = ReducedPattern(mesh, fixed_dofs)
    Ke, _, fmat, _ = kernels.element_batch(
        np.asarray(u_end, dtype=float), mesh.elem_dof_map,
        np.ascontiguousarray(gammas, dtype=float),
        mat.lambda0, mat.mu0, mat.kr, ops,
    )
    rhs = lambda_end * np.asarray(f0, dtype=float)[pattern.free]
    theta_free = linear_solve(pattern.reduced_matrix(Ke), rhs, transpose=True)
    theta = np.zeros(mesh.n_dof)
    theta[pattern.free] = theta_free
    dc_dgamma = -np.einsum("ej,ej->e", theta[mesh.elem_dof_map], fmat)
    return dc_dgamma * np.asarray(dgamma_dxhat, dtype=float)


def volume_constraint(x_hat_dilated, pasS, pasV, volfrac):
    """Dilated volume fraction constraint g <= 0 and its gradient.

    g is the mean over the design domain divided by the allowed
    fraction, minus one; passive elements are excluded from the mean and
    get zero gradient.
    """
    x_hat_dilated = np.asarray(x_hat_dilated, dtype=float)
    n = x_hat_dilated.shape[0]
    design = np.setdiff1d(np.arange(n), np.union1d(pasS, pasV))
    g = float(x_hat_dilated[design].mean() / volfrac - 1.0)
    dg = np.zeros(n)
    dg[design] = 1.0 / (design.size * volfrac)
    return g, dg


def mma_like_update(x, dc, dg, g, move_limit, lower=0.0, upper=1.0):
    """Single-constraint convex-separable dual update.

    Asymptotes sit at twice the move limit on either side of the current
    point; the Lagrange multiplier is found by bisection so that the
    linearized constraint is active, unless the unconstrained minimizer
    is already feasible.
    """
    x = np.asarray(x, dtype=float)
    dc = np.asarray(dc, dtype=float)
    dg = np.asarray(dg, dtype=float)
    if not (np.all(np.isfinite(dc)) and np.all(np.isfinite(dg))):
        raise ValueError("non-finite sensitivities in design update")
    if np.any(dg <= 0.0):
        raise ValueError("constraint gradient must be elementwise positive")

    xL = np.maximum(lower, x - move_limit)
    xU = np.minimum(upper, x + move_limit)
    asy = 2.0 * move_limit
    low, upp = x - asy, x + asy

    p0 = np.maximum(dc, 0.0) * (upp - x) ** 2
    q0 = np.maximum(-dc, 0.0) * (x - low) ** 2
    p1 = dg * (upp - x) ** 2  # dg > 0, so the constraint has no q-part

    def primal(lm):
        p = p0 + lm * p1
        sp_, sq = np.sqrt(p), np.sqrt(q0)
        denom = sp_ + sq
        xs = np.where(denom > 0.0, (sp_ * low + sq * upp) / np.where(denom > 0, denom, 1.0), x)
        return np.clip(xs, xL, xU)

    def glin(lm):
        return g + float(np.dot(dg, primal(lm) - x))

    if glin(0.0) <= 0.0:
        return primal(0.0)

    l1, l2 = 0.0, 1.0
    while glin(l2) > 0.0:
        l2 *= 2.0
        if l2 > 1e40:
            return primal(l2)  # constraint cannot be met within move limits
    for _ in range(200):
        lm = 0.5 * (l1 + l2)
        if glin(lm) > 0.0:
            l1 = lm
        else:
            l2 = lm
        if l2 - l1 <= 1e-14 * max(1.0, l2):
            break
    return primal(0.5 * (l1 + l2))


def beta_schedule(it, settings):
    """Projection sharpness at outer iteration ``it`` (1-based)."""
    if it < settings.beta_incr_start:
        return min(settings.beta_start, settings.beta_cap)
    doublings = (it - settings.beta_incr_start) // settings.beta_incr_every + 1
    return min(settings.beta_start * 2.0**doublings, settings.beta_cap)


@dataclass
class OptTrace:
    iters: list = field(default_factory=list)
    compliance: list = field(default_factory=list)
    constraint: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    change: list = field(default_factory=list)
    newton_total: list = field(default_factory=list)


def optimize(scenario, settings=None, x0=None, on_iteration=None):
    """Run the redesign loop; returns (final DesignState, u_end, OptTrace).

    ``on_iteration(it, c, g, beta, change, newton)`` streams the trace.
    Aborts with OptimizationError (carrying the last design) if a
    forward analysis fails.
    """
    settings = settings or scenario.opt
    mesh, ops, mat = scenario.mesh, scenario.ops, scenario.mat
    filt = scenario.filt
    pasS, pasV = scenario.pasS, scenario.pasV
    design = np.setdiff1d(np.arange(mesh.n_elems), np.union1d(pasS, pasV))

    x = np.zeros(mesh.n_elems) if x0 is None else np.array(x0, dtype=float)
    if x0 is None:
        x[design] = settings.volfrac

    trace = OptTrace()
    state, u_end = None, None

    def forward(gam, it):
        # soft intermediate designs can slam through the contact barrier
        # on a coarse ladder; retry deterministically with finer uniform
        # ladders before giving up
        err = None
        for refine in (1, 4, 16):
            fwd = SolverSettings(
                n_incr=settings.n_incr * refine, max_iter=settings.max_iter,
                tol_rel_res=settings.tol_rel_res, lambda_max=settings.lambda_end,
            )
            try:
                return incremental_solve(fwd, mesh, ops, mat, gam,
                                         scenario.fixed_dofs, scenario.f0)
            except NonlinearSolveError as exc:
                err = exc
        raise OptimizationError(
            f"forward analysis failed at outer iteration {it}: {err}",
            design=state, iteration=it,
        ) from err

    for it in range(1, settings.max_outer_iters + 1):
        beta = beta_schedule(it, settings)
        state = DesignState.compute(x, filt, beta, scenario.eta_b, scenario.eta_d,
                                    pasS, pasV)
        gam = ramp(state.x_hat, mat.gamma0, settings.ramp_p)
        hist = forward(gam, it)
        u_end = hist.u_end
        c = end_compliance(u_end, scenario.f0, settings.lambda_end)

        dgam = ramp_deriv(state.x_hat, mat.gamma0, settings.ramp_p)
        dc_dxhat = adjoint_sensitivity(u_end, gam, dgam, scenario.f0,
                                       settings.lambda_end, mesh, ops, mat,
                                       scenario.fixed_dofs)
        dc_dx = chain_rule(dc_dxhat, state, dilated=False)

        g, dg_dxhd = volume_constraint(state.x_hat_dilated, pasS, pasV,
                                       settings.volfrac)
        dg_dx = chain_rule(dg_dxhd, state, dilated=True)

        x_new = mma_like_update(x[design], dc_dx[design], dg_dx[design], g,
                                settings.move_limit)
        change = float(np.max(np.abs(x_new - x[design]))) if design.size else 0.0
        x[design] = x_new

        newton = int(np.sum(hist.iterations))
        trace.iters.append(it)
        trace.compliance.append(c)
        trace.constraint.append(g)
        trace.beta.append(beta)
        trace.change.append(change)
        trace.newton_total.append(newton)
        if on_iteration is not None:
            on_iteration(it, c, g, beta, change, newton)

        # the change tolerance only ends the run once continuation is done,
        # otherwise pending beta doublings would never happen
        if change < settings.change_tol and beta >= settings.beta_cap:
            break

    return state, u_end, trace
