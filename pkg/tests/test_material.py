import math

import numpy as np
import pytest

from tmcopt.errors import InvertedElementError
from tmcopt.material import (
    HyperelasticMaterial,
    bulk_modulus,
    lame_from_engineering,
    p_wave_modulus,
    piola2,
    ramp,
    ramp_deriv,
    strain_energy,
    tangent_moduli,
)

# ---------------------------------------------------------------------------
# independent closed-form oracle: W as a function of C = 2E + I
# ---------------------------------------------------------------------------


def energy_of_E(E, lam, mu):
    C = 2.0 * np.asarray(E) + np.eye(2)
    detC = C[0, 0] * C[1, 1] - C[0, 1] * C[1, 0]
    lnj = 0.5 * math.log(detC)
    return 0.5 * lam * lnj**2 + 0.5 * mu * (C[0, 0] + C[1, 1] - 2.0) - mu * lnj


def F_of_E(E):
    C = 2.0 * np.asarray(E) + np.eye(2)
    L = np.linalg.cholesky(C)
    return L.T  # F^T F = C


def random_admissible_F(rng):
    while True:
        F = np.eye(2) + 0.8 * rng.standard_normal((2, 2))
        if 0.2 <= np.linalg.det(F) <= 3.0:
            return F


def fd_stress(E, lam, mu, eps=1e-6):
    """Central differences of the energy oracle along symmetric directions."""
    dirs = [np.array([[1.0, 0], [0, 0]]), np.array([[0, 0], [0, 1.0]]),
            np.array([[0, 0.5], [0.5, 0]])]
    S = np.zeros((2, 2))
    g = [(energy_of_E(E + eps * d, lam, mu) - energy_of_E(E - eps * d, lam, mu))
         / (2 * eps) for d in dirs]
    S[0, 0], S[1, 1] = g[0], g[1]
    S[0, 1] = S[1, 0] = g[2]
    return S


def fd_moduli(E, lam, mu, eps=1e-6):
    """Central differences of piola2 in Voigt form (xx, yy, xy)."""
    dirs = [np.array([[1.0, 0], [0, 0]]), np.array([[0, 0], [0, 1.0]]),
            np.array([[0, 0.5], [0.5, 0]])]
    cols = []
    for d in dirs:
        Sp = piola2(F_of_E(E + eps * d), lam, mu)
        Sm = piola2(F_of_E(E - eps * d), lam, mu)
        dS = (Sp - Sm) / (2 * eps)
        cols.append([dS[0, 0], dS[1, 1], dS[0, 1]])
    return np.array(cols).T


LAM, MU = lame_from_engineering(100.0, 0.3)


class TestLame:
    def test_paper_values(self):
        lam, mu = lame_from_engineering(100.0, 0.3)
        assert lam == pytest.approx(57.692, abs=5e-4)
        assert mu == pytest.approx(38.462, abs=5e-4)

    def test_zero_poisson(self):
        assert lame_from_engineering(1.0, 0.0) == pytest.approx((0.0, 0.5))

    def test_incompressible_rejected(self):
        with pytest.raises(ValueError):
            lame_from_engineering(100.0, 0.5)
        with pytest.raises(ValueError):
            lame_from_engineering(-1.0, 0.3)

    def test_bulk_and_longitudinal(self):
        assert bulk_modulus(100.0, 0.3) == pytest.approx(83.333, abs=5e-4)
        assert p_wave_modulus(100.0, 0.3) == pytest.approx(134.615, abs=5e-4)


class TestStrainEnergy:
    def test_reference_is_stress_free(self):
        assert strain_energy(np.eye(2), LAM, MU) == 0.0

    def test_direct_evaluation(self):
        F = np.diag([2.0, 1.0])
        expected = (LAM / 2 * math.log(2) ** 2 + MU / 2 * (5 - 2)
                    - MU * math.log(2))
        assert strain_energy(F, LAM, MU) == pytest.approx(expected, rel=1e-12)

    def test_barrier_as_volume_vanishes(self):
        # fixed tr(F^T F) = 2, det -> 0 along a = eps
        vals = []
        for eps in [0.5, 0.2, 0.05, 0.01]:
            F = np.diag([eps, math.sqrt(2.0 - eps**2)])
            vals.append(strain_energy(F, LAM, MU))
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 1e2

    def test_objectivity(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            F = random_admissible_F(rng)
            th = rng.uniform(0, 2 * math.pi)
            R = np.array([[math.cos(th), -math.sin(th)],
                          [math.sin(th), math.cos(th)]])
            assert strain_energy(R @ F, LAM, MU) == pytest.approx(
                strain_energy(F, LAM, MU), rel=1e-10)

    def test_inverted_rejected(self):
        with pytest.raises(InvertedElementError):
            strain_energy(np.diag([-1.0, 1.0]), LAM, MU)


class TestPiola2:
    def test_reference(self):
        np.testing.assert_allclose(piola2(np.eye(2), LAM, MU), 0.0, atol=1e-14)

    def test_symmetry_exact(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            S = piola2(random_admissible_F(rng), LAM, MU)
            assert S[0, 1] == S[1, 0]

    def test_matches_energy_gradient(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            F = random_admissible_F(rng)
            E = 0.5 * (F.T @ F - np.eye(2))
            S = piola2(F, LAM, MU)
            S_fd = fd_stress(E, LAM, MU)
            assert np.linalg.norm(S - S_fd) / np.linalg.norm(S_fd) < 1e-6

    def test_consistent_with_first_piola(self):
        rng = np.random.default_rng(4)
        F = random_admissible_F(rng)
        J = np.linalg.det(F)
        P = LAM * math.log(J) * np.linalg.inv(F).T + MU * (F - np.linalg.inv(F).T)
        np.testing.assert_allclose(F @ piola2(F, LAM, MU), P, rtol=1e-12)

    def test_inverted_rejected(self):
        with pytest.raises(InvertedElementError):
            piola2(np.diag([1e-9, -2.0]), LAM, MU)


class TestTangentModuli:
    def test_reference_is_plane_strain_stiffness(self):
        D = tangent_moduli(np.eye(2), LAM, MU)
        expected = np.array([[LAM + 2 * MU, LAM, 0],
                             [LAM, LAM + 2 * MU, 0],
                             [0, 0, MU]])
        np.testing.assert_allclose(D, expected, atol=1e-12)

    def test_major_symmetry(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            D = tangent_moduli(random_admissible_F(rng), LAM, MU)
            np.testing.assert_allclose(D, D.T, rtol=1e-13)

    def test_matches_stress_derivative(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            F = random_admissible_F(rng)
            E = 0.5 * (F.T @ F - np.eye(2))
            D = tangent_moduli(F, LAM, MU)
            D_fd = fd_moduli(E, LAM, MU)
            assert np.linalg.norm(D - D_fd) / np.linalg.norm(D_fd) < 1e-5

    def test_linear_in_moduli(self):
        rng = np.random.default_rng(8)
        F = random_admissible_F(rng)
        np.testing.assert_allclose(tangent_moduli(F, 3 * LAM, 3 * MU),
                                   3 * tangent_moduli(F, LAM, MU), rtol=1e-12)


class TestRamp:
    def test_endpoints(self):
        assert ramp(1.0, 1e-6, 4.0) == pytest.approx(1.0)
        assert ramp(0.0, 1e-6, 4.0) == pytest.approx(1e-6)

    def test_midpoint_value(self):
        assert ramp(0.5, 0.0, 4.0) == pytest.approx(1.0 / 6.0, rel=1e-12)

    def test_monotone(self):
        x = np.linspace(0, 1, 101)
        g = ramp(x, 1e-6, 4.0)
        assert np.all(np.diff(g) > 0)

    def test_derivative_matches_fd(self):
        rng = np.random.default_rng(9)
        eps = 1e-7
        for _ in range(20):
            r = rng.uniform(0.01, 0.99)
            fd = (ramp(r + eps, 1e-6, 4.0) - ramp(r - eps, 1e-6, 4.0)) / (2 * eps)
            assert ramp_deriv(r, 1e-6, 4.0) == pytest.approx(fd, rel=1e-8)


class TestHyperelasticMaterial:
    def test_from_engineering(self):
        mat = HyperelasticMaterial.from_engineering(100.0, 0.3, 1e-6, 1e-6,
                                                    char_length=105.0)
        assert mat.kr == pytest.approx(1e-6 * 105.0**2 * 134.6153846, rel=1e-6)
        assert mat.gamma0 == mat.kv

    def test_validation(self):
        with pytest.raises(ValueError):
            HyperelasticMaterial.from_engineering(100.0, 0.3, 2.0, 1e-6,
                                                  char_length=1.0)
