"""Scenario runners: drive an analysis or optimization and write artifacts."""

import os

import numpy as np

from .assembly import assemble_global
from .errors import NonlinearSolveError, OptimizationError
from .material import ramp
from .optim import optimize
from .scenarios import build_cshape, build_topopt, probe_gap, probe_point_displacement
from .solver import incremental_solve
from .vtkio import export_vtk, sed_log_rel, write_csv

__all__ = ["run_cshape", "run_topopt"]

HISTORY_HEADER = ["increment", "lambda", "gap", "point_disp", "newton_iters",
                  "rel_residual"]
TRACE_HEADER = ["iter", "compliance", "constraint", "beta", "change",
                "newton_iters"]


def _snapshot(scenario, u, gammas, density, path):
    sysm = assemble_global(u, gammas, scenario.mesh, scenario.ops, scenario.mat)
    fields = {
        "density": density,
        "sed": sysm.elem_sed,
        "sed_log_rel": sed_log_rel(sysm.elem_sed),
    }
    export_vtk(scenario.mesh, u, fields, path)
    return path


def run_cshape(config):
    """Run the contact analysis; returns (exit_status, artifact paths)."""
    os.makedirs(config.out_dir, exist_ok=True)
    scenario = build_cshape(config.params)
    snapshots = sorted(set(config.snapshots))
    rows = []
    artifacts = {"history": os.path.join(config.out_dir, "history.csv")}
    done = [0.0]  # last multiplier seen, for snapshot crossing detection

    def on_increment(incr, lam, u, iters, res):
        rows.append((incr, lam, probe_gap(u, scenario),
                     probe_point_displacement(u, scenario), iters, res))
        for s in snapshots:
            if done[0] < s <= lam + 1e-12:
                path = os.path.join(config.out_dir, f"snapshot_lam{s:.3f}.vtk")
                _snapshot(scenario, u, scenario.gammas, scenario.gammas, path)
                artifacts[f"snapshot_{s:.3f}"] = path
        done[0] = lam

    status = 0
    try:
        incremental_solve(scenario.solver, scenario.mesh, scenario.ops,
                          scenario.mat, scenario.gammas, scenario.fixed_dofs,
                          scenario.f0, on_increment=on_increment)
    except NonlinearSolveError as exc:
        status = 2
        print(f"solver failed: {exc}")
    write_csv(artifacts["history"], HISTORY_HEADER, rows)
    return status, artifacts


def run_topopt(config):
    """Run the end-compliance design loop; returns (exit_status, artifacts)."""
    os.makedirs(config.out_dir, exist_ok=True)
    scenario = build_topopt(config.params, config.variant)
    rows = []
    artifacts = {"trace": os.path.join(config.out_dir, "trace.csv")}

    def on_iteration(it, c, g, beta, change, newton):
        rows.append((it, c, g, beta, change, newton))

    status = 0
    try:
        state, u_end, _ = optimize(scenario, on_iteration=on_iteration)
        gam = ramp(state.x_hat, scenario.mat.gamma0, scenario.opt.ramp_p)
        path = os.path.join(config.out_dir, "design_final.vtk")
        sysm = assemble_global(u_end, gam, scenario.mesh, scenario.ops, scenario.mat)
        export_vtk(scenario.mesh, u_end, {
            "density": state.x_hat,
            "density_dilated": state.x_hat_dilated,
            "sed": sysm.elem_sed,
            "sed_log_rel": sed_log_rel(sysm.elem_sed),
        }, path)
        artifacts["design"] = path
    except OptimizationError as exc:
        status = 2
        print(f"optimization failed: {exc}")
        if exc.design is not None:
            path = os.path.join(config.out_dir, "design_failed.vtk")
            export_vtk(scenario.mesh, np.zeros(scenario.mesh.n_dof), {
                "density": exc.design.x_hat,
                "density_dilated": exc.design.x_hat_dilated,
            }, path)
            artifacts["design_failed"] = path
    write_csv(artifacts["trace"], TRACE_HEADER, rows)
    return status, artifacts
