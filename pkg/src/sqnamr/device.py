"""Device model: dc-SQUID with two suspended beams as flux-coupled resonators.

All energies are stored as angular frequencies (E / hbar, rad/s). Inputs are SI.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
from scipy import constants

HBAR = constants.hbar
PLANCK = constants.h
PHI_0 = constants.h / (2 * constants.e)

# |Phi_b mod 2 Phi_0| tolerance (in units of Phi_0) for the harmonic expansion.
BIAS_FLUX_TOL = 1e-6


class ConfigError(ValueError):
    """Invalid or incomplete device configuration."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class PhysicalConfig:
    """Raw device parameters in SI units (energies as rad/s)."""

    m_L: float
    m_R: float
    omega_L: float
    omega_R: float
    l_eff: float
    B_L: float
    B_R: float
    I_c: float
    I_b: float
    Phi_b: float
    E_C: float
    E_J: float
    kappa_L: float
    kappa_R: float
    alpha_mag: float
    phi_drive: float

    def __post_init__(self):
        for name in ("m_L", "m_R", "omega_L", "omega_R", "l_eff", "B_L", "B_R",
                     "I_c", "E_C", "E_J", "kappa_L", "kappa_R"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ConfigError(f"{name} must be strictly positive, got {value!r}", name)
        if not abs(self.I_b) < 2 * self.I_c:
            raise ConfigError(
                f"|I_b| must be below 2*I_c (got I_b={self.I_b!r}, I_c={self.I_c!r})", "I_b")
        if not self.alpha_mag >= 0:
            raise ConfigError("alpha_mag must be non-negative", "alpha_mag")
        if not -math.pi <= self.phi_drive < math.pi:
            raise ConfigError("phi_drive must lie in [-pi, pi)", "phi_drive")
        if not math.isfinite(self.Phi_b):
            raise ConfigError("Phi_b must be finite", "Phi_b")

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: dict) -> "PhysicalConfig":
        names = cls.field_names()
        missing = [n for n in names if n not in data]
        if missing:
            raise ConfigError(f"missing config field: {missing[0]}", missing[0])
        unknown = sorted(set(data) - set(names))
        if unknown:
            raise ConfigError(f"unknown config field: {unknown[0]}", unknown[0])
        values = {}
        for n in names:
            try:
                values[n] = float(data[n])
            except (TypeError, ValueError):
                raise ConfigError(f"config field {n} is not a number: {data[n]!r}", n) from None
        return cls(**values)

    def to_dict(self) -> dict:
        return asdict(self)

    def replace(self, **changes) -> "PhysicalConfig":
        data = self.to_dict()
        data.update(changes)
        return PhysicalConfig(**data)


def load_config(path) -> PhysicalConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return PhysicalConfig.from_dict(data)


@dataclass(frozen=True)
class DerivedQuantities:
    """Effective Hamiltonian parameters (rates in rad/s, lengths in m)."""

    q_0: float
    E_J_prime: float
    Omega: float
    Delta_U: float
    N_max: float
    g_L: float
    g_R: float
    c_1: float
    c_2: float
    eta: float
    xi: float
    delta_L: float
    delta_R: float
    delta_X: float
    zeta_L: float
    zeta_R: float
    zeta_P: float
    omega_L: float
    omega_R: float

    def to_dict(self) -> dict:
        return asdict(self)


def zero_point(mass: float, omega: float, hbar: float = HBAR) -> float:
    """Ground-state position spread sqrt(hbar / (2 m omega))."""
    return math.sqrt(hbar / (2 * mass * omega))


def barrier_height(E_J: float, q_0: float) -> float:
    """Height of the tilted-washboard barrier seen from the well at q_0."""
    return 2 * E_J * (2 * math.cos(q_0) + math.sin(q_0) * (2 * q_0 - math.pi))


def derive(config: PhysicalConfig) -> DerivedQuantities:
    c = config
    q_0 = math.asin(c.I_b / (2 * c.I_c))
    E_J_prime = c.E_J * math.cos(q_0)
    Omega = math.sqrt(c.E_C * E_J_prime)
    Delta_U = barrier_height(c.E_J, q_0)

    delta_L = zero_point(c.m_L, c.omega_L)
    delta_R = zero_point(c.m_R, c.omega_R)
    g_L = math.pi * c.B_L * c.l_eff / PHI_0 * delta_L
    g_R = math.pi * c.B_R * c.l_eff / PHI_0 * delta_R

    c_1 = 0.5 * Omega * math.tan(q_0) * (E_J_prime / c.E_C) ** 0.25
    c_2 = Omega / 8
    eta = -c_1 * g_L * g_R

    # zeta_i = hbar / (2 delta_i): the momentum spread of the ground state
    zeta_L = HBAR / (2 * delta_L)
    zeta_R = HBAR / (2 * delta_R)
    return DerivedQuantities(
        q_0=q_0,
        E_J_prime=E_J_prime,
        Omega=Omega,
        Delta_U=Delta_U,
        N_max=Delta_U / Omega,
        g_L=g_L,
        g_R=g_R,
        c_1=c_1,
        c_2=c_2,
        eta=eta,
        xi=c.alpha_mag * abs(eta),
        delta_L=delta_L,
        delta_R=delta_R,
        delta_X=math.hypot(delta_L, delta_R),
        zeta_L=zeta_L,
        zeta_R=zeta_R,
        zeta_P=math.hypot(zeta_L, zeta_R),
        omega_L=c.omega_L,
        omega_R=c.omega_R,
    )


def potential(phi, Phi_X, config: PhysicalConfig):
    """SQUID potential U(phi, Phi_X) in rad/s; accepts scalars or arrays."""
    phi = np.asarray(phi, dtype=float)
    Phi_X = np.asarray(Phi_X, dtype=float)
    flux_phase = np.pi * config.Phi_b / PHI_0 + np.pi * Phi_X / PHI_0
    U = (-2 * config.E_J * np.cos(flux_phase) * np.cos(phi)
         - (config.I_b / config.I_c) * config.E_J * phi)
    return U if U.ndim else float(U)


def check_bias_flux(config: PhysicalConfig) -> None:
    """Raise unless Phi_b is an even number of flux quanta."""
    ratio = config.Phi_b / PHI_0
    offset = ratio - 2 * round(ratio / 2)
    if abs(offset) > BIAS_FLUX_TOL:
        raise ValueError(
            f"harmonic expansion requires Phi_b = 2n*Phi_0; Phi_b/Phi_0 = {ratio:.9g}")


def expansion_coefficients(config: PhysicalConfig) -> dict[str, float]:
    """Coefficients of the harmonic expansion around (q_0, 0).

    Keys name the monomials in phi (measured from q_0) and
    x = pi * Phi_X / Phi_0: ``phi2``, ``x2``, ``phi_x2``, ``phi2_x2``.
    The ``x2`` coefficient is E_J cos(q_0), which is what the exact potential
    gives; ``legacy_x2_coefficient`` returns the -E_J (1 - cos q_0) variant.
    """
    check_bias_flux(config)
    q_0 = math.asin(config.I_b / (2 * config.I_c))
    E_J = config.E_J
    return {
        "phi2": E_J * math.cos(q_0),
        "x2": E_J * math.cos(q_0),
        "phi_x2": -E_J * math.sin(q_0),
        "phi2_x2": -0.5 * E_J * math.cos(q_0),
    }


def legacy_x2_coefficient(config: PhysicalConfig) -> float:
    """Pure-flux coefficient -E_J (1 - cos q_0); differs from the exact one by -E_J."""
    q_0 = math.asin(config.I_b / (2 * config.I_c))
    return -config.E_J * (1 - math.cos(q_0))


def quadratic_expansion(phi, Phi_X, config: PhysicalConfig):
    """Harmonic expansion of the potential; phi is measured from q_0, constants dropped."""
    k = expansion_coefficients(config)
    phi = np.asarray(phi, dtype=float)
    x = np.pi * np.asarray(Phi_X, dtype=float) / PHI_0
    U = (k["phi2"] * phi**2 + k["x2"] * x**2
         + (k["phi_x2"] * phi + k["phi2_x2"] * phi**2) * x**2)
    return U if U.ndim else float(U)


def flux_from_displacement(X_L, X_R, config: PhysicalConfig):
    """Extra loop flux (Wb) for beam displacements X_L, X_R (m)."""
    return config.B_L * X_L * config.l_eff + config.B_R * X_R * config.l_eff


def potential_scan(config: PhysicalConfig, phi_range=(-math.pi, 3 * math.pi),
                   flux_range=(-0.1, 0.1), n_phi=201, n_flux=101):
    """Grid of U / E_J over phi and Phi_X / Phi_0.

    Returns ``(phi, flux_over_phi0, U_over_EJ)`` with the last of shape
    ``(n_phi, n_flux)``.
    """
    from .kernels import potential_grid

    phi = np.linspace(*phi_range, n_phi)
    flux = np.linspace(*flux_range, n_flux)
    U = potential_grid(phi, flux, config.I_b / config.I_c, config.Phi_b / PHI_0)
    return phi, flux, U


def bias_for_frequency(Omega_target: float, E_C: float, E_J: float) -> float:
    """I_b / I_c that tunes the SQUID plasma frequency to Omega_target."""
    cos_q0 = Omega_target**2 / (E_C * E_J)
    if not 0 < cos_q0 <= 1:
        raise ValueError("target frequency not reachable by current bias")
    return 2 * math.sin(math.acos(cos_q0))


def critical_current_for(E_J: float) -> float:
    """I_c (A) consistent with a Josephson energy given in rad/s."""
    return 2 * constants.e * E_J


def reference_config(alpha_mag: float = 100.0) -> PhysicalConfig:
    """Feasibility parameter set; 'GHz' read as 1e9 rad/s, 'MHz' as 1e6 rad/s.

    The bias current is chosen so that Omega = omega_L + omega_R.
    """
    E_C, E_J = 0.061e9, 120e9
    omega_L, omega_R = 1.5e9, 1.2e9
    I_c = critical_current_for(E_J)
    I_b = I_c * bias_for_frequency(omega_L + omega_R, E_C, E_J)
    return PhysicalConfig(
        m_L=1e-18, m_R=1e-18, omega_L=omega_L, omega_R=omega_R, l_eff=10e-6,
        B_L=1.0, B_R=1.0, I_c=I_c, I_b=I_b, Phi_b=0.0, E_C=E_C, E_J=E_J,
        kappa_L=2e6, kappa_R=2e6, alpha_mag=alpha_mag, phi_drive=-math.pi / 2,
    )


def rescale_frequencies(config: PhysicalConfig, factor: float) -> PhysicalConfig:
    """Multiply every rate-valued input by ``factor`` (e.g. 2*pi for GHz as cycles/s).

    I_c follows E_J so the two stay consistent; I_b / I_c is kept.
    """
    ratio = config.I_b / config.I_c
    I_c = critical_current_for(config.E_J * factor)
    return config.replace(
        omega_L=config.omega_L * factor, omega_R=config.omega_R * factor,
        E_C=config.E_C * factor, E_J=config.E_J * factor,
        kappa_L=config.kappa_L * factor, kappa_R=config.kappa_R * factor,
        I_c=I_c, I_b=ratio * I_c,
    )


def feasibility(config: PhysicalConfig) -> dict:
    """Numbers behind the experimental-feasibility argument.

    Flux ratios are evaluated with each beam displaced by its zero-point
    spread. Both readings of 'GHz' are reported, plus the value obtained
    with Planck's h in place of hbar in the zero-point spread.
    """
    d = derive(config)
    alt = derive(rescale_frequencies(config, 2 * math.pi))
    flux = flux_from_displacement(d.delta_L, d.delta_R, config) / PHI_0
    flux_alt = flux_from_displacement(alt.delta_L, alt.delta_R, config) / PHI_0
    h_delta_L = zero_point(config.m_L, config.omega_L, hbar=PLANCK)
    h_delta_R = zero_point(config.m_R, config.omega_R, hbar=PLANCK)
    flux_h = flux_from_displacement(h_delta_L, h_delta_R, config) / PHI_0
    if d.eta == 0:
        warnings.warn("no three-mode coupling: I_b = 0 gives eta = 0", RuntimeWarning)
    target_n_max = 150.0
    return {
        "derived": d.to_dict(),
        "Phi_X_over_Phi0": flux,
        "Phi_X_over_Phi0_alt_convention": flux_alt,
        "Phi_X_over_Phi0_planck_h": flux_h,
        "N_max": d.N_max,
        "N_max_alt_convention": alt.N_max,
        "N_max_within_factor2_of_150": {
            "declared": target_n_max / 2 <= d.N_max <= 2 * target_n_max,
            "alt": target_n_max / 2 <= alt.N_max <= 2 * target_n_max,
        },
        "resonance_mismatch": d.Omega - (config.omega_L + config.omega_R),
        "xi": d.xi,
        "regime_ok": d.xi < config.kappa_L / 2 and d.xi < config.kappa_R / 2,
        "E_J_vs_I_c_consistency": config.E_J / (config.I_c / (2 * constants.e)),
    }
