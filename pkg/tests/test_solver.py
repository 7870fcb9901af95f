import numpy as np
import pytest
import scipy.sparse as sp

from tmcopt.assembly import ReducedPattern, assemble_global
from tmcopt.element import build_operators
from tmcopt.errors import LinearSolveError, NonlinearSolveError
from tmcopt.material import HyperelasticMaterial, lame_from_engineering
from tmcopt.mesh import build_grid, select_nodes
from tmcopt.solver import (
    AnalysisHistory,
    SolverSettings,
    incremental_solve,
    linear_solve,
    newton_step,
)

LAM, MU = lame_from_engineering(100.0, 0.3)


def cantilever(nelx=4, nely=2, Lx=4.0, Ly=2.0, kr=0.5):
    mesh = build_grid(nelx, nely, Lx, Ly)
    ops = build_operators(mesh.dx, mesh.dy)
    mat = HyperelasticMaterial(100.0, 0.3, LAM, MU, 1e-6, 1e-6, kr)
    left = select_nodes(mesh, lambda x, y: x == 0.0)
    fixed = np.sort(np.concatenate([2 * left, 2 * left + 1]))
    f0 = np.zeros(mesh.n_dof)
    tip = mesh.node_id(nelx, 0)  # top-right corner
    f0[2 * tip + 1] = -1.0
    gammas = np.ones(mesh.n_elems)
    return mesh, ops, mat, gammas, fixed, f0


class TestLinearSolve:
    def test_identity(self):
        rhs = np.array([1.0, -2.0, 3.0])
        x = linear_solve(sp.identity(3, format="csc"), rhs)
        np.testing.assert_allclose(x, rhs)

    def test_hand_elimination(self):
        K = sp.csc_matrix(np.array([[2.0, 1.0], [1.0, 3.0]]))
        x = linear_solve(K, np.array([3.0, 5.0]))
        np.testing.assert_allclose(x, [0.8, 1.4], rtol=1e-14)

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(17)
        A = rng.standard_normal((50, 50))
        K = A @ A.T + 50 * np.eye(50)  # SPD
        rhs = rng.standard_normal(50)
        x = linear_solve(sp.csc_matrix(K), rhs)
        np.testing.assert_allclose(x, np.linalg.solve(K, rhs), rtol=1e-10)
        res = np.linalg.norm(K @ x - rhs) / np.linalg.norm(rhs)
        assert res < 1e-10

    def test_transpose_solve(self):
        rng = np.random.default_rng(18)
        K = rng.standard_normal((20, 20)) + 20 * np.eye(20)
        rhs = rng.standard_normal(20)
        x = linear_solve(sp.csc_matrix(K), rhs, transpose=True)
        np.testing.assert_allclose(x, np.linalg.solve(K.T, rhs), rtol=1e-10)

    def test_singular_rejected(self):
        K = sp.csc_matrix(np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(LinearSolveError):
            linear_solve(K, np.array([1.0, 0.0]))


class TestNewtonStep:
    def test_trivial_equilibrium(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        u = np.zeros(mesh.n_dof)
        u2, res = newton_step(u, 0.0, f0, fixed, mesh, ops, mat, gammas)
        np.testing.assert_allclose(u2, 0.0, atol=1e-15)
        assert res == 0.0

    def test_small_load_matches_linear_oracle(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        pattern = ReducedPattern(mesh, fixed)
        K0 = assemble_global(np.zeros(mesh.n_dof), gammas, mesh, ops, mat).K
        lam = 1e-4  # tip displacement ~ 1e-5 of the span
        u_lin = np.zeros(mesh.n_dof)
        u_lin[pattern.free] = linear_solve(
            K0[np.ix_(pattern.free, pattern.free)], lam * f0[pattern.free])
        settings = SolverSettings(n_incr=1, max_iter=20, tol_rel_res=1e-8,
                                  lambda_max=lam)
        hist = incremental_solve(settings, mesh, ops, mat, gammas, fixed, f0)
        err = (np.linalg.norm(hist.u_end - u_lin)
               / np.linalg.norm(u_lin))
        assert err < 1e-3

    def test_fixed_dofs_untouched(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        u = np.zeros(mesh.n_dof)
        u2, _ = newton_step(u, 0.5, f0, fixed, mesh, ops, mat, gammas)
        np.testing.assert_array_equal(u2[fixed], 0.0)
        assert np.linalg.norm(u2) > 0


class TestIncrementalSolve:
    def test_zero_load_program(self):
        mesh, ops, mat, gammas, fixed, _ = cantilever()
        settings = SolverSettings(n_incr=5, max_iter=5, tol_rel_res=1e-8)
        hist = incremental_solve(settings, mesh, ops, mat, gammas, fixed,
                                 np.zeros(mesh.n_dof))
        assert all(it <= 1 for it in hist.iterations)
        np.testing.assert_allclose(hist.u_end, 0.0)

    def test_reported_multiplier_normalized_and_increasing(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        settings = SolverSettings(n_incr=4, max_iter=30, tol_rel_res=1e-8,
                                  lambda_max=5.0)
        hist = incremental_solve(settings, mesh, ops, mat, gammas, fixed, f0)
        assert hist.lambdas == [0.25, 0.5, 0.75, 1.0]
        assert all(b > a for a, b in zip(hist.lambdas, hist.lambdas[1:]))

    def test_dirichlet_exact_at_every_increment(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        settings = SolverSettings(n_incr=3, max_iter=30, tol_rel_res=1e-8,
                                  lambda_max=4.0)
        hist = incremental_solve(settings, mesh, ops, mat, gammas, fixed, f0)
        for u in hist.displacements:
            np.testing.assert_array_equal(u[fixed], 0.0)

    def test_warm_start_reduces_iterations(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        settings = SolverSettings(n_incr=10, max_iter=30, tol_rel_res=1e-8,
                                  lambda_max=6.0)
        hist = incremental_solve(settings, mesh, ops, mat, gammas, fixed, f0)
        # warm-started late increments should not need more iterations
        # than the whole ladder would in one shot
        assert max(hist.iterations[1:]) <= hist.iterations[0] + 3

    def test_near_quadratic_terminal_convergence(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        settings = SolverSettings(n_incr=4, max_iter=40, tol_rel_res=1e-12,
                                  lambda_max=6.0)
        hist = incremental_solve(settings, mesh, ops, mat, gammas, fixed, f0)
        trace = hist.residual_traces[-1]
        assert len(trace) >= 3
        # the last reduction before hitting the tolerance is strong
        assert trace[-1] / trace[-2] < 1e-2

    def test_failure_carries_partial_history(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        settings = SolverSettings(n_incr=4, max_iter=1, tol_rel_res=1e-14,
                                  lambda_max=8.0)
        with pytest.raises(NonlinearSolveError) as exc:
            incremental_solve(settings, mesh, ops, mat, gammas, fixed, f0)
        assert isinstance(exc.value.history, AnalysisHistory)
        assert exc.value.increment is not None

    def test_bitwise_determinism(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        settings = SolverSettings(n_incr=4, max_iter=30, tol_rel_res=1e-9,
                                  lambda_max=5.0)
        h1 = incremental_solve(settings, mesh, ops, mat, gammas, fixed, f0)
        h2 = incremental_solve(settings, mesh, ops, mat, gammas, fixed, f0)
        for u1, u2 in zip(h1.displacements, h2.displacements):
            assert np.array_equal(u1, u2)
        assert h1.iterations == h2.iterations

    def test_load_on_fixed_dof_rejected(self):
        mesh, ops, mat, gammas, fixed, f0 = cantilever()
        bad = f0.copy()
        bad[fixed[0]] = 1.0
        settings = SolverSettings(n_incr=1, max_iter=5, tol_rel_res=1e-6)
        with pytest.raises(ValueError):
            incremental_solve(settings, mesh, ops, mat, gammas, fixed, bad)


def test_settings_validation():
    with pytest.raises(ValueError):
        SolverSettings(n_incr=0)
    with pytest.raises(ValueError):
        SolverSettings(max_iter=0)
    with pytest.raises(ValueError):
        SolverSettings(tol_rel_res=0.0)
