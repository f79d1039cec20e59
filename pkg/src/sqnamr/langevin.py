"""Damped two-mode squeezing from the Heisenberg-Langevin moment equations.

With phi = -pi/2 the resonator operators obey

    d b_L / dt = -xi b_R^dag - (kappa_L / 2) b_L + F_L
    d b_R / dt = -xi b_L^dag - (kappa_R / 2) b_R + F_R

with zero-temperature Markov noise. The first moments and the ten bilinear
moments (L1..L3, R1..R3, C1..C4) form a closed linear system, integrated by
the kernels in :mod:`sqnamr.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._errors import IntegrationError  # noqa: F401  (re-exported)

MOMENT_FIELDS = ("bL", "bR", "L1", "L2", "L3", "R1", "R2", "R3", "C1", "C2", "C3", "C4")

RTOL = 1e-10
ATOL = 1e-12
DERIV_TOL = 1e-10


class RegimeError(ValueError):
    """Parameters lie outside the overdamped region where the closed form holds."""


@dataclass(frozen=True)
class DampingParams:
    xi: float
    kappa_L: float
    kappa_R: float

    def __post_init__(self):
        if self.xi < 0 or self.kappa_L < 0 or self.kappa_R < 0:
            raise ValueError("xi and damping rates must be non-negative")

    @property
    def regime_ok(self) -> bool:
        return self.xi < self.kappa_L / 2 and self.xi < self.kappa_R / 2

    def violated_thresholds(self) -> list[str]:
        out = []
        if not self.xi < self.kappa_L / 2:
            out.append("xi >= kappa_L/2")
        if not self.xi < self.kappa_R / 2:
            out.append("xi >= kappa_R/2")
        return out

    @property
    def stable(self) -> bool:
        """Drift matrix positive-stable, i.e. a steady state exists."""
        return (self.kappa_L + self.kappa_R > 0
                and self.kappa_L * self.kappa_R > 4 * self.xi**2)


@dataclass(frozen=True)
class MomentState:
    """First moments <b_L>, <b_R> and the bilinear set L1..L3, R1..R3, C1..C4."""

    bL: complex = 0j
    bR: complex = 0j
    L1: complex = 0j
    L2: complex = 1 + 0j
    L3: complex = 0j
    R1: complex = 0j
    R2: complex = 1 + 0j
    R3: complex = 0j
    C1: complex = 0j
    C2: complex = 0j
    C3: complex = 0j
    C4: complex = 0j

    @classmethod
    def vacuum(cls) -> "MomentState":
        return cls()

    @classmethod
    def from_vector(cls, v) -> "MomentState":
        return cls(*(complex(z) for z in v))

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in MOMENT_FIELDS], dtype=complex)

    @classmethod
    def from_gaussian(cls, mean, second) -> "MomentState":
        """From <B_i> and <B_i B_j> with B = (b_L, b_L^dag, b_R, b_R^dag)."""
        G = np.asarray(second)
        return cls(
            bL=mean[0], bR=mean[2],
            L1=G[0, 0], L2=G[1, 0] + G[0, 1], L3=G[1, 1],
            R1=G[2, 2], R2=G[3, 2] + G[2, 3], R3=G[3, 3],
            C1=G[0, 2] + G[2, 0], C2=G[0, 3] + G[3, 0],
            C3=G[1, 2] + G[2, 1], C4=G[1, 3] + G[3, 1],
        )

    def is_conjugation_consistent(self, atol: float = 1e-12) -> bool:
        return (abs(self.L3 - np.conj(self.L1)) <= atol
                and abs(self.R3 - np.conj(self.R1)) <= atol
                and abs(self.C4 - np.conj(self.C1)) <= atol
                and abs(self.C3 - np.conj(self.C2)) <= atol)

    @property
    def n_L(self) -> float:
        return float((self.L2.real - 1) / 2)

    @property
    def n_R(self) -> float:
        return float((self.R2.real - 1) / 2)

    def xt_variance(self, delta_L: float, delta_R: float) -> float:
        """Var(X_T) with X_i = delta_i (b_i + b_i^dag)."""
        second = (delta_L**2 * (self.L1 + self.L2 + self.L3)
                  + delta_R**2 * (self.R1 + self.R2 + self.R3)
                  + delta_L * delta_R * (self.C1 + self.C2 + self.C3 + self.C4))
        mean = 2 * delta_L * self.bL.real + 2 * delta_R * self.bR.real
        return float(second.real - mean**2)

    def quadrature_covariance(self) -> np.ndarray:
        """Symmetrized covariance of (x_L, p_L, x_R, p_R), x = b + b^dag, p = -i(b - b^dag).

        The vacuum gives the identity.
        """
        L1, L2, L3 = self.L1, self.L2, self.L3
        R1, R2, R3 = self.R1, self.R2, self.R3
        C1, C2, C3, C4 = self.C1, self.C2, self.C3, self.C4
        xL, pL = 2 * self.bL.real, 2 * self.bL.imag
        xR, pR = 2 * self.bR.real, 2 * self.bR.imag
        V = np.empty((4, 4))
        V[0, 0] = (L1 + L2 + L3).real - xL**2
        V[1, 1] = (L2 - L1 - L3).real - pL**2
        V[0, 1] = V[1, 0] = (-1j * (L1 - L3)).real - xL * pL
        V[2, 2] = (R1 + R2 + R3).real - xR**2
        V[3, 3] = (R2 - R1 - R3).real - pR**2
        V[2, 3] = V[3, 2] = (-1j * (R1 - R3)).real - xR * pR
        V[0, 2] = V[2, 0] = (0.5 * (C1 + C2 + C3 + C4)).real - xL * xR
        V[1, 3] = V[3, 1] = (-0.5 * (C1 - C2 - C3 + C4)).real - pL * pR
        V[0, 3] = V[3, 0] = (-0.5j * (C1 - C2 + C3 - C4)).real - xL * pR
        V[1, 2] = V[2, 1] = (-0.5j * (C1 + C2 - C3 - C4)).real - pL * xR
        return V

    def max_abs_diff(self, other: "MomentState") -> float:
        return float(np.max(np.abs(self.to_vector() - other.to_vector())))


def symplectic_eigenvalues(V: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a (x1, p1, x2, p2)-ordered covariance; physical states give >= 1."""
    n = V.shape[0] // 2
    omega = np.kron(np.eye(n), np.array([[0, 1], [-1, 0]]))
    ev = np.abs(np.linalg.eigvals(1j * omega @ V))
    return np.sort(ev)[::2]


def drift_matrix(params: DampingParams) -> np.ndarray:
    """M in dB/dt = -M B + F, B = (b_L, b_L^dag, b_R, b_R^dag)."""
    kL, kR, xi = params.kappa_L / 2, params.kappa_R / 2, params.xi
    return np.array([[kL, 0, 0, xi],
                     [0, kL, xi, 0],
                     [0, xi, kR, 0],
                     [xi, 0, 0, kR]], dtype=float)


def first_moments_closed_form(bL0: complex, bR0: complex, params: DampingParams, t):
    """Exact <b_L>(t), <b_R>(t) from the 2x2 block of the drift matrix.

    For kappa_L = kappa_R = kappa this is
    e^{-kappa t / 2} [b_L(0) cosh(xi t) - b_R(0)^* sinh(xi t)] and its mirror.
    """
    t = np.asarray(t, dtype=float)
    kbar = (params.kappa_L + params.kappa_R) / 4
    d = (params.kappa_L - params.kappa_R) / 4
    xi = params.xi
    w = math.hypot(d, xi)
    ch = np.cosh(w * t)
    sh_over_w = np.sinh(w * t) / w if w > 0 else t
    decay = np.exp(-kbar * t)
    bR0c = np.conj(bR0)
    bL = decay * (ch * bL0 - sh_over_w * (d * bL0 + xi * bR0c))
    bRc = decay * (ch * bR0c - sh_over_w * (xi * bL0 - d * bR0c))
    return bL, np.conj(bRc)


def integrate_moments(initial: MomentState, params: DampingParams, t_grid,
                      rtol: float = RTOL, atol: float = ATOL) -> list[MomentState]:
    """Trajectory of the moment set on ``t_grid`` (must be increasing)."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    Y, _ = kernels.integrate_moments(initial.to_vector(), params.xi, params.kappa_L,
                                     params.kappa_R, t_grid, rtol, atol)
    return [MomentState.from_vector(y) for y in Y]


def integrate_to_steady(initial: MomentState, params: DampingParams,
                        rtol: float = RTOL, atol: float = ATOL,
                        deriv_tol: float = DERIV_TOL) -> tuple[MomentState, float]:
    """Run the moment equations until the derivative criterion is met; returns (state, t)."""
    if not params.stable:
        raise RegimeError("drift matrix is not positive-stable; no steady state exists")
    y, t, _ = kernels.integrate_to_steady(initial.to_vector(), params.xi, params.kappa_L,
                                          params.kappa_R, rtol, atol, deriv_tol)
    return MomentState.from_vector(y), t


@dataclass(frozen=True)
class SteadyStateResult:
    moments: MomentState
    var_XT: float
    var_ratio: float
    Delta_xi: float
    kappa_plus: float
    kappa_minus: float


def steady_moments(params: DampingParams) -> MomentState:
    if not params.regime_ok:
        raise RegimeError("closed-form steady state needs xi < kappa_L/2 and xi < kappa_R/2; "
                          "violated: " + ", ".join(params.violated_thresholds()))
    kL, kR, xi = params.kappa_L, params.kappa_R, params.xi
    kp, km = kL + kR, kL - kR
    D = kL * kR / (kL * kR - 4 * xi**2)
    C = -4 * xi * D / kp
    return MomentState(L2=km / kp + 2 * kR * D / kp, R2=-km / kp + 2 * kL * D / kp,
                       C1=C, C4=C)


def closed_form_steady_state(params: DampingParams, derived) -> SteadyStateResult:
    """Steady state below threshold; ``derived`` supplies delta_L, delta_R."""
    m = steady_moments(params)
    dL, dR = derived.delta_L, derived.delta_R
    var = (dL**2 * m.L2 + dR**2 * m.R2 + dL * dR * (m.C1 + m.C4)).real
    kL, kR, xi = params.kappa_L, params.kappa_R, params.xi
    return SteadyStateResult(
        moments=m,
        var_XT=float(var),
        var_ratio=float(var / (dL**2 + dR**2)),
        Delta_xi=kL * kR / (kL * kR - 4 * xi**2),
        kappa_plus=kL + kR,
        kappa_minus=kL - kR,
    )


def equal_delta_display(params: DampingParams) -> float:
    """(1/4) Delta_xi (1 - 4 xi / kappa_+): the equal-spread expression with a delta_X^2 / 4
    prefactor, in units of delta_X^2. It is 1/4 at xi = 0, where the exact value is 1."""
    kL, kR, xi = params.kappa_L, params.kappa_R, params.xi
    D = kL * kR / (kL * kR - 4 * xi**2)
    return 0.25 * D * (1 - 4 * xi / (kL + kR))


def variance_ratio(kappa_L_over_xi, kappa_R_over_xi, delta_L: float = 1.0,
                   delta_R: float = 1.0):
    """Steady-state Var(X_T) / Var(X_T)|_{xi=0} on arrays of kappa / xi.

    Points outside the overdamped region come back as NaN.
    """
    kL = np.asarray(kappa_L_over_xi, dtype=float)
    kR = np.asarray(kappa_R_over_xi, dtype=float)
    ok = (kL > 2) & (kR > 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        kp, km = kL + kR, kL - kR
        D = kL * kR / (kL * kR - 4)
        L2 = km / kp + 2 * kR * D / kp
        R2 = -km / kp + 2 * kL * D / kp
        C = -4 * D / kp
        var = delta_L**2 * L2 + delta_R**2 * R2 + 2 * delta_L * delta_R * C
        ratio = var / (delta_L**2 + delta_R**2)
    return np.where(ok, ratio, np.nan)


@dataclass
class SurfacePoint:
    kappaL_over_xi: float
    kappaR_over_xi: float
    var_ratio: float
    var_XT_over_deltaX2: float
    in_regime: str


SWEEP_HEADER = "kappaL_over_xi,kappaR_over_xi,var_ratio,var_XT_over_deltaX2,in_regime"


def variance_surface(kappaL_over_xi, kappaR_over_xi, delta_L: float = 1.0,
                     delta_R: float = 1.0) -> list[SurfacePoint]:
    """Steady-state variance on the outer product grid of kappa_L/xi and kappa_R/xi.

    ``var_XT_over_deltaX2`` normalizes by delta_X^2 = delta_L^2 + delta_R^2 and
    ``var_ratio`` by the xi = 0 variance; with vacuum noise the two coincide.
    """
    kL = np.asarray(kappaL_over_xi, dtype=float)
    kR = np.asarray(kappaR_over_xi, dtype=float)
    KL, KR = np.meshgrid(kL, kR, indexing="ij")
    ratio = variance_ratio(KL, KR, delta_L, delta_R)
    var = ratio * (delta_L**2 + delta_R**2)
    out = []
    for i in range(KL.shape[0]):
        for j in range(KL.shape[1]):
            params = DampingParams(1.0, float(KL[i, j]), float(KR[i, j]))
            reasons = params.violated_thresholds()
            out.append(SurfacePoint(
                float(KL[i, j]), float(KR[i, j]), float(ratio[i, j]),
                float(var[i, j] / (delta_L**2 + delta_R**2)),
                "true" if not reasons else "false:" + "&".join(reasons)))
    return out
