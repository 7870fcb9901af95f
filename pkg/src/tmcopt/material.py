"""Neo-Hookean constitutive law (plane strain) and design interpolation.

Energy density for a 2D deformation gradient F with J = det F:

    W = lambda/2 * ln(J)^2 + mu/2 * (tr(F^T F) - 2) - mu * ln(J)

The "-2" is the plane-strain reduction of the 3D law under unit
out-of-plane stretch, so W(I) = 0.  The ln(J)^2 term provides the
stiffening barrier as the local volume shrinks, which is what lets a
soft third medium transmit contact forces.

All stress/tangent quantities are total-Lagrangian: S is the second
Piola-Kirchhoff stress, work-conjugate to the Green-Lagrange strain E,
and the tangent is dS/dE in Voigt form (xx, yy, xy) with engineering
shear.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HyperelasticMaterial",
    "lame_from_engineering",
    "bulk_modulus",
    "p_wave_modulus",
    "strain_energy",
    "piola2",
    "tangent_moduli",
    "ramp",
    "ramp_deriv",
]


def lame_from_engineering(E, nu):
    """Lame parameters (lambda, mu) from Young's modulus and Poisson ratio."""
    if E <= 0:
        raise ValueError(f"Young's modulus must be positive, got {E}")
    if nu >= 0.5:
        raise ValueError(f"nu = {nu} is incompressible (or beyond); need nu < 0.5")
    if nu <= -1.0:
        raise ValueError(f"nu = {nu} out of range; need nu > -1")
    lam = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))
    mu = E / (2.0 * (1.0 + nu))
    return lam, mu


def bulk_modulus(E, nu):
    return E / (3.0 * (1.0 - 2.0 * nu))


def p_wave_modulus(E, nu):
    """Longitudinal modulus M = K + 4/3 mu (uniaxial-strain stiffness)."""
    _, mu = lame_from_engineering(E, nu)
    return bulk_modulus(E, nu) + 4.0 / 3.0 * mu


@dataclass(frozen=True)
class HyperelasticMaterial:
    """Solid material constants plus third-medium / interpolation data.

    kr is the Hessian-penalty stiffness used to stabilize void elements:
    kr = alpha * L^2 * M with L a characteristic domain length and M the
    P-wave modulus; void regions near contact undergo uniaxial
    compression, which is why M rather than the bulk modulus sets the
    scale.
    """

    E0: float
    nu: float
    lambda0: float
    mu0: float
    kv: float  # third-medium contrast, scales the solid law in voids
    alpha: float  # regularization coefficient
    kr: float  # alpha * L^2 * (K + 4/3 mu), units N
    ramp_p: float = 4.0
    gamma0: float = None  # void property scaling; defaults to kv

    def __post_init__(self):
        if self.gamma0 is None:
            object.__setattr__(self, "gamma0", self.kv)
        if not (0.0 < self.kv < 1.0):
            raise ValueError(f"kv must be in (0, 1), got {self.kv}")
        if not (0.0 < self.gamma0 <= 1.0):
            raise ValueError(f"gamma0 must be in (0, 1], got {self.gamma0}")
        if self.kr <= 0.0:
            raise ValueError(f"kr must be positive, got {self.kr}")

    @classmethod
    def from_engineering(cls, E0, nu, kv, alpha, char_length, ramp_p=4.0, gamma0=None):
        lam, mu = lame_from_engineering(E0, nu)
        kr = alpha * char_length**2 * p_wave_modulus(E0, nu)
        return cls(E0, nu, lam, mu, kv, alpha, kr, ramp_p, gamma0)


def _check_F(F):
    F = np.asarray(F, dtype=float)
    J = F[0, 0] * F[1, 1] - F[0, 1] * F[1, 0]
    if J <= 0.0:
        from .errors import InvertedElementError

        raise InvertedElementError(-1, f"det F = {J} <= 0")
    return F, J


def strain_energy(F, lam, mu):
    """Plane-strain neo-Hookean energy density (MPa)."""
    F, J = _check_F(F)
    lnj = np.log(J)
    trc = F[0, 0] ** 2 + F[0, 1] ** 2 + F[1, 0] ** 2 + F[1, 1] ** 2
    return 0.5 * lam * lnj**2 + 0.5 * mu * (trc - 2.0) - mu * lnj


def _inv_cauchy_green(F, J):
    """Closed-form inverse of C = F^T F; exactly symmetric by construction."""
    C = F.T @ F
    det = J * J
    return np.array([[C[1, 1], -C[0, 1]], [-C[0, 1], C[0, 0]]]) / det


def piola2(F, lam, mu):
    """Second Piola-Kirchhoff stress S = lam ln(J) C^-1 + mu (I - C^-1)."""
    F, J = _check_F(F)
    lnj = np.log(J)
    Cinv = _inv_cauchy_green(F, J)
    return lam * lnj * Cinv + mu * (np.eye(2) - Cinv)


def tangent_moduli(F, lam, mu):
    """Material tangent dS/dE, Voigt 3x3 (xx, yy, xy; engineering shear)."""
    F, J = _check_F(F)
    lnj = np.log(J)
    Ci = _inv_cauchy_green(F, J)
    co = mu - lam * lnj
    # C_ijkl = lam Ci_ij Ci_kl + co (Ci_ik Ci_jl + Ci_il Ci_jk)
    idx = [(0, 0), (1, 1), (0, 1)]
    D = np.empty((3, 3))
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            D[a, b] = lam * Ci[i, j] * Ci[k, l] + co * (
                Ci[i, k] * Ci[j, l] + Ci[i, l] * Ci[j, k]
            )
    return D


def ramp(rho_hat, gamma0, p):
    """Rational density-to-stiffness interpolation on [0, 1].

    Maps 0 -> gamma0 and 1 -> 1, with penalization p >= 0 flattening the
    low-density end.
    """
    rho_hat = np.asarray(rho_hat, dtype=float)
    return gamma0 + (1.0 - gamma0) * rho_hat / (1.0 + p * (1.0 - rho_hat))


def ramp_deriv(rho_hat, gamma0, p):
    """d(ramp)/d(rho_hat)."""
    rho_hat = np.asarray(rho_hat, dtype=float)
    return (1.0 - gamma0) * (1.0 + p) / (1.0 + p * (1.0 - rho_hat)) ** 2
