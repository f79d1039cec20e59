"""Lossless two-mode squeezing under a classical SQUID drive.

Operators are ordered B = (b_L, b_L^dag, b_R, b_R^dag). A Heisenberg map S
sends B(0) to B(t) = S B(0). Second moments are kept as the matrix
G_ij = <B_i B_j>, which transforms as G -> S G S^T.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

# [B_i, B_j] for B = (b_L, b_L^dag, b_R, b_R^dag)
COMMUTATOR = np.array([[0, 1, 0, 0],
                       [-1, 0, 0, 0],
                       [0, 0, 0, 1],
                       [0, 0, -1, 0]], dtype=complex)


@dataclass(frozen=True)
class BogoliubovMap:
    gamma: float
    phi_drive: float
    matrix: np.ndarray

    def is_symplectic(self, atol: float = 1e-12) -> bool:
        S = self.matrix
        return bool(np.max(np.abs(S @ COMMUTATOR @ S.T - COMMUTATOR)) <= atol)

    def __matmul__(self, other: "BogoliubovMap") -> "BogoliubovMap":
        return BogoliubovMap(self.gamma + other.gamma, self.phi_drive, self.matrix @ other.matrix)


def evolve_bogoliubov(gamma: float, phi_drive: float) -> BogoliubovMap:
    """Heisenberg map generated by |alpha| eta (e^{i phi} b_L b_R + h.c.) with gamma = |alpha| eta t.

    Entries are kept in extended precision: at |gamma| = 5 the float64
    rounding of cosh and sinh alone breaks cosh^2 - sinh^2 = 1 by ~1e-12.
    """
    g = np.longdouble(gamma)
    c = np.cosh(g)
    s = np.sinh(g)
    ph = np.longdouble(phi_drive)
    # -i e^{-i phi} = -sin(phi) - i cos(phi)
    u = np.clongdouble(-np.sin(ph) * s - 1j * (np.cos(ph) * s))
    S = np.array([[c, 0, 0, u],
                  [0, c, np.conj(u), 0],
                  [0, u, c, 0],
                  [np.conj(u), 0, 0, c]], dtype=np.clongdouble)
    return BogoliubovMap(gamma, phi_drive, S)


@dataclass(frozen=True)
class GaussianMoments:
    """First moments m_i = <B_i> and second moments G_ij = <B_i B_j>."""

    mean: np.ndarray
    second: np.ndarray

    @classmethod
    def vacuum(cls) -> "GaussianMoments":
        return cls.thermal(0.0, 0.0)

    @classmethod
    def thermal(cls, n_L: float, n_R: float) -> "GaussianMoments":
        G = np.zeros((4, 4), dtype=complex)
        for k, n in ((0, n_L), (2, n_R)):
            G[k, k + 1] = n + 1      # <b b^dag>
            G[k + 1, k] = n          # <b^dag b>
        return cls(np.zeros(4, dtype=complex), G)

    @classmethod
    def coherent(cls, beta_L: complex, beta_R: complex) -> "GaussianMoments":
        m = np.array([beta_L, np.conj(beta_L), beta_R, np.conj(beta_R)], dtype=complex)
        return cls(m, GaussianMoments.vacuum().second + np.outer(m, m))

    def transformed(self, bmap: BogoliubovMap) -> "GaussianMoments":
        S = bmap.matrix
        return GaussianMoments((S @ self.mean).astype(complex),
                               (S @ self.second @ S.T).astype(complex))


@dataclass(frozen=True)
class QuadratureStats:
    var_XT: float
    var_PT: float
    product: float
    # sqrt(var_XT var_PT) / (delta_X zeta_P); equals product / hbar
    normalized_product: float
    var_XT_over_deltaX2: float


def _variance(coeffs: np.ndarray, moments: GaussianMoments) -> float:
    mean = coeffs @ moments.mean
    second = coeffs @ moments.second @ coeffs
    return float((second - mean**2).real)


def collective_variance(bmap: BogoliubovMap, derived,
                        initial: GaussianMoments | None = None) -> QuadratureStats:
    """Variances of X_T = X_L + X_R and P_T = P_L + P_R after the map.

    ``derived`` supplies delta_L, delta_R (m) and zeta_L, zeta_R (kg m / s).
    """
    if not math.isclose(derived.delta_L, derived.delta_R, rel_tol=1e-12):
        warnings.warn("delta_L != delta_R: the exp(2 gamma) squeezing law assumes equal "
                      "zero-point spreads", RuntimeWarning, stacklevel=2)
    moments = (initial or GaussianMoments.vacuum()).transformed(bmap)
    dL, dR = derived.delta_L, derived.delta_R
    zL, zR = derived.zeta_L, derived.zeta_R
    x_coeffs = np.array([dL, dL, dR, dR], dtype=complex)
    p_coeffs = -1j * np.array([zL, -zL, zR, -zR], dtype=complex)
    var_x = _variance(x_coeffs, moments)
    var_p = _variance(p_coeffs, moments)
    delta_X2 = dL**2 + dR**2
    zeta_P2 = zL**2 + zR**2
    product = math.sqrt(var_x * var_p)
    return QuadratureStats(
        var_XT=var_x,
        var_PT=var_p,
        product=product,
        normalized_product=product / math.sqrt(delta_X2 * zeta_P2),
        var_XT_over_deltaX2=var_x / delta_X2,
    )


def uncertainty_law(gamma: float, phi_drive: float) -> float:
    """|cosh^2 gamma + e^{2 i phi} sinh^2 gamma|."""
    return abs(math.cosh(gamma) ** 2 + np.exp(2j * phi_drive) * math.sinh(gamma) ** 2)


def duan_sum(bmap: BogoliubovMap, initial: GaussianMoments | None = None) -> float:
    """Var(x_L + x_R) + Var(p_L - p_R) in vacuum units (x = b + b^dag); < 2 certifies entanglement.

    Valid for the phi = -pi/2 drive, where x_L + x_R is the squeezed pair.
    """
    moments = (initial or GaussianMoments.vacuum()).transformed(bmap)
    x_sum = np.array([1, 1, 1, 1], dtype=complex)
    p_diff = -1j * np.array([1, -1, -1, 1], dtype=complex)
    return 0.5 * (_variance(x_sum, moments) + _variance(p_diff, moments))


def ideal_curve(gammas, phi_drive: float, derived) -> list[tuple[float, float, float]]:
    """(gamma, var_XT / delta_X^2, normalized uncertainty product) along a gamma grid."""
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for g in gammas:
            st = collective_variance(evolve_bogoliubov(float(g), phi_drive), derived)
            out.append((float(g), st.var_XT_over_deltaX2, st.normalized_product))
    return out
