"""Brute-force oracle on a truncated Fock space.

Two-mode runs use the ordering (b_L, b_R); three-mode runs append the SQUID
mode a as (b_L, b_R, a). Hamiltonians are in rad/s with hbar = 1. Loss is the
zero-temperature Lindblad form with jump operators sqrt(kappa_i) b_i, and
density matrices are vectorized column-major: vec(A rho B) = (B^T kron A) vec(rho).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp
from scipy.linalg import eigh, expm
from scipy.sparse.linalg import expm_multiply, spsolve

from . import rwa
from ._errors import UntrustedResult
from .langevin import DampingParams, MomentState

DEFAULT_LEAKAGE_BOUND = 1e-6
MAX_DIMENSION = 10_000
DENSE_LIOUVILLIAN_MAX = 400

HAMILTONIANS = ("V_I", "V_r", "V_prime", "V_full")


@dataclass(frozen=True)
class TruncationSpec:
    n_max: int                      # levels per resonator mode (0 .. n_max-1)
    modes: int = 2
    n_squid: int | None = None      # levels of the SQUID mode when modes == 3
    leakage_bound: float = DEFAULT_LEAKAGE_BOUND
    max_dimension: int = MAX_DIMENSION

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if self.modes not in (2, 3):
            raise ValueError("modes must be 2 or 3")
        if self.modes == 3 and (self.n_squid or self.n_max) < 2:
            raise ValueError("n_squid must be >= 2")

    @property
    def dims(self) -> tuple[int, ...]:
        if self.modes == 2:
            return (self.n_max, self.n_max)
        return (self.n_max, self.n_max, self.n_squid or self.n_max)

    @property
    def dimension(self) -> int:
        return int(np.prod(self.dims))


def destroy(n: int) -> sparse.csr_matrix:
    return sparse.diags(np.sqrt(np.arange(1, n, dtype=float)), 1, format="csr",
                        dtype=complex)


def mode_operator(k: int, dims, op: sparse.spmatrix | None = None) -> sparse.csr_matrix:
    """Embed ``op`` (default: annihilation) acting on mode ``k`` into the product space."""
    out = None
    for j, n in enumerate(dims):
        factor = (op if op is not None else destroy(n)) if j == k else sparse.identity(n, dtype=complex)
        out = factor if out is None else sparse.kron(out, factor)
    return sparse.csr_matrix(out)


def basis_ket(dims, levels) -> np.ndarray:
    psi = np.zeros(int(np.prod(dims)), dtype=complex)
    psi[np.ravel_multi_index(tuple(levels), dims)] = 1.0
    return psi


def coherent_amplitudes(n: int, beta: complex) -> np.ndarray:
    k = np.arange(n)
    logfact = np.array([math.lgamma(j + 1) for j in k])
    mag = np.exp(-abs(beta) ** 2 / 2 + k * math.log(abs(beta)) - 0.5 * logfact) if beta else (k == 0) * 1.0
    return mag * np.exp(1j * k * np.angle(beta)) if beta else mag.astype(complex)


@dataclass
class TruncatedState:
    """Ket (1-D) or density matrix (2-D) on the truncated product space."""

    data: np.ndarray
    dims: tuple[int, ...]

    @classmethod
    def vacuum(cls, dims) -> "TruncatedState":
        return cls(basis_ket(dims, [0] * len(dims)), tuple(dims))

    @classmethod
    def fock(cls, dims, levels) -> "TruncatedState":
        return cls(basis_ket(dims, levels), tuple(dims))

    @classmethod
    def coherent(cls, dims, betas) -> "TruncatedState":
        psi = np.array([1.0 + 0j])
        for n, b in zip(dims, betas):
            psi = np.kron(psi, coherent_amplitudes(n, b))
        return cls(psi / np.linalg.norm(psi), tuple(dims))

    @classmethod
    def thermal(cls, dims, occupations) -> "TruncatedState":
        diag = np.array([1.0])
        for n, nbar in zip(dims, occupations):
            p = (nbar / (1 + nbar)) ** np.arange(n) if nbar > 0 else (np.arange(n) == 0) * 1.0
            diag = np.kron(diag, p / p.sum())
        return cls(np.diag(diag.astype(complex)), tuple(dims))

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def expect(self, op) -> complex:
        if self.is_pure:
            return complex(np.vdot(self.data, op @ self.data))
        return complex((op.multiply(self.data.T)).sum()) if sparse.issparse(op) \
            else complex(np.sum(op * self.data.T))

    def populations(self) -> np.ndarray:
        if self.is_pure:
            return np.abs(self.data) ** 2
        return np.real(np.diag(self.data))

    def marginal_populations(self, k: int) -> np.ndarray:
        p = self.populations().reshape(self.dims)
        axes = tuple(j for j in range(len(self.dims)) if j != k)
        return p.sum(axis=axes)

    def leakage(self) -> float:
        """Largest population held in the top two levels of any single mode."""
        return max(float(self.marginal_populations(k)[-2:].sum()) for k in range(len(self.dims)))

    def violations(self, trace_tol=1e-10, herm_tol=1e-12, pos_tol=1e-10) -> list[str]:
        out = []
        if self.is_pure:
            if abs(np.vdot(self.data, self.data).real - 1) > trace_tol:
                out.append("norm")
            return out
        rho = self.data
        if abs(np.trace(rho) - 1) > trace_tol:
            out.append(f"trace {np.trace(rho).real:.3e}")
        if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
            out.append("hermiticity")
        lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        if lam[0] < -pos_tol:
            out.append(f"min eigenvalue {lam[0]:.3e}")
        return out


@dataclass(frozen=True)
class GeneratorSpec:
    """Which Hamiltonian to build and which loss channels to attach.

    ``coupling`` overrides |alpha| eta for V_I (and |alpha|^2 c_2 g_L g_R for
    V_r); ``alpha`` is the coherent SQUID amplitude magnitude for the
    classical-drive models. Rates are in the same units as the Hamiltonian.
    """

    hamiltonian: str = "V_I"
    include_H0: bool = False
    kappa_L: float = 0.0
    kappa_R: float = 0.0
    phi_drive: float = -math.pi / 2
    coupling: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.hamiltonian not in HAMILTONIANS:
            raise ValueError(f"unknown hamiltonian {self.hamiltonian!r}; choose from {HAMILTONIANS}")
        if self.kappa_L < 0 or self.kappa_R < 0:
            raise ValueError("damping rates must be non-negative")

    @classmethod
    def from_damping(cls, params: DampingParams) -> "GeneratorSpec":
        """V_I at phi = -pi/2 with the sign convention eta < 0, i.e. |alpha| eta = -xi."""
        return cls("V_I", kappa_L=params.kappa_L, kappa_R=params.kappa_R,
                   phi_drive=-math.pi / 2, coupling=-params.xi)


@dataclass
class Generator:
    H: sparse.csr_matrix
    c_ops: list
    dims: tuple[int, ...]
    spec: GeneratorSpec

    @property
    def lossless(self) -> bool:
        return not self.c_ops

    @cached_property
    def liouvillian(self) -> sparse.csr_matrix:
        d = self.H.shape[0]
        eye = sparse.identity(d, dtype=complex, format="csr")
        L = -1j * (sparse.kron(eye, self.H) - sparse.kron(self.H.T, eye))
        for c in self.c_ops:
            cdc = (c.conj().T @ c).tocsr()
            L = L + sparse.kron(c.conj(), c) - 0.5 * sparse.kron(eye, cdc) \
                - 0.5 * sparse.kron(cdc.T, eye)
        return sparse.csr_matrix(L)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """d rho / dt for a dense density matrix."""
        out = -1j * (self.H @ rho - (self.H.T @ rho.T).T)
        for c in self.c_ops:
            cdc = c.conj().T @ c
            out = out + c @ rho @ c.conj().T - 0.5 * (cdc @ rho + (cdc.T @ rho.T).T)
        return np.asarray(out)


def _signature_operator(sig: rwa.OperatorSignature, dims) -> sparse.csr_matrix:
    """Normal-ordered operator for a signature on (b_L, b_R, a)."""
    a, ad, bl, bld, br, brd = sig.powers
    out = None
    for k, (ann, cre) in enumerate(((bl, bld), (br, brd), (a, ad))):
        n = dims[k]
        b = destroy(n)
        op = sparse.identity(n, dtype=complex, format="csr")
        for _ in range(cre):
            op = op @ b.conj().T
        for _ in range(ann):
            op = op @ b
        out = op if out is None else sparse.kron(out, op)
    return sparse.csr_matrix(out)


def signature_operator(sig: rwa.OperatorSignature, dims) -> sparse.csr_matrix:
    if len(dims) != 3:
        raise ValueError("signature operators need the three-mode space")
    return _signature_operator(sig, dims)


def free_hamiltonian(dims, omega_L: float, omega_R: float, Omega: float = 0.0) -> sparse.csr_matrix:
    freqs = (omega_L, omega_R, Omega)
    H = sparse.csr_matrix((int(np.prod(dims)),) * 2, dtype=complex)
    for k in range(len(dims)):
        b = mode_operator(k, dims)
        H = H + freqs[k] * (b.conj().T @ b)
    return H.tocsr()


def _terms_operator(components, dims) -> sparse.csr_matrix:
    H = sparse.csr_matrix((int(np.prod(dims)),) * 2, dtype=complex)
    for sig, value in components:
        H = H + value * _signature_operator(sig, dims)
    return H.tocsr()


def full_coupling(derived, dims) -> sparse.csr_matrix:
    """Exact V = -(x)^2 (c_1 (a + a^dag) + c_2 (a + a^dag)^2), x = g_L(b_L + b_L^dag) + g_R(b_R + b_R^dag)."""
    bl, br, a = (mode_operator(k, dims) for k in range(3))
    x = derived.g_L * (bl + bl.conj().T) + derived.g_R * (br + br.conj().T)
    A = a + a.conj().T
    return sparse.csr_matrix(-(x @ x) @ (derived.c_1 * A + derived.c_2 * (A @ A)))


def build_generator(spec: GeneratorSpec, derived, trunc: TruncationSpec) -> Generator:
    dims = trunc.dims
    if trunc.dimension > trunc.max_dimension:
        raise ValueError(f"Hilbert dimension {trunc.dimension} exceeds guard {trunc.max_dimension}")
    name = spec.hamiltonian
    if name in ("V_I", "V_r"):
        if trunc.modes != 2:
            raise ValueError(f"{name} is a two-mode Hamiltonian")
        bl, br = mode_operator(0, dims), mode_operator(1, dims)
        if name == "V_I":
            chi = spec.coupling
            if chi is None:
                alpha = derived.xi / abs(derived.eta) if spec.alpha is None and derived.eta else spec.alpha
                chi = (alpha or 0.0) * derived.eta
            T = np.exp(1j * spec.phi_drive) * chi * (bl @ br)
        else:
            # c_2 g_L g_R b_R^dag b_L a^dag a with a^dag a -> |alpha|^2
            chi = spec.coupling
            if chi is None:
                chi = (spec.alpha if spec.alpha is not None else derived.xi / abs(derived.eta)) ** 2 \
                    * derived.c_2 * derived.g_L * derived.g_R
            T = chi * (br.conj().T @ bl)
        H = T + T.conj().T
        if spec.include_H0:
            H = H + free_hamiltonian(dims, derived.omega_L, derived.omega_R)
    else:
        if trunc.modes != 3:
            raise ValueError(f"{name} needs the three-mode space")
        if name == "V_prime":
            bl, br, a = (mode_operator(k, dims) for k in range(3))
            T = derived.eta * (a.conj().T @ bl @ br)
            H = T + T.conj().T
        else:
            H = full_coupling(derived, dims)
        if spec.include_H0:
            H = H + free_hamiltonian(dims, derived.omega_L, derived.omega_R, derived.Omega)
    H = sparse.csr_matrix(H)
    if H.nnz and abs(H - H.conj().T).max() > 1e-12 * max(1.0, abs(H).max()):
        raise ValueError("constructed Hamiltonian is not Hermitian")
    c_ops = []
    for k, kappa in ((0, spec.kappa_L), (1, spec.kappa_R)):
        if kappa > 0:
            c_ops.append(math.sqrt(kappa) * mode_operator(k, dims))
    return Generator(H, c_ops, dims, spec)


@dataclass
class EvolutionResult:
    times: np.ndarray
    states: list[TruncatedState]
    leakage: list[float]
    trusted: bool
    method: str

    def require_trusted(self):
        if not self.trusted:
            raise UntrustedResult(f"leakage {max(self.leakage):.2e} exceeds bound")
        return self


def evolve(state: TruncatedState, generator: Generator, t, trunc: TruncationSpec | None = None,
           method: str = "auto", rtol: float = 1e-10, atol: float = 1e-12) -> EvolutionResult:
    """Evolve to each time in ``t`` (scalar or increasing array, starting from t = 0).

    method: 'auto', 'ket' (lossless pure states), 'dense' (Liouvillian
    exponential), 'sparse' (action of the sparse Liouvillian exponential) or
    'ode' (adaptive DOP853 on the vectorized master equation). 'auto' never
    picks 'ode': its local error control lets Hermiticity and positivity
    drift by ~1e-8 over long runs.
    """
    bound = trunc.leakage_bound if trunc else DEFAULT_LEAKAGE_BOUND
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.diff(times) < 0) or times[0] < 0:
        raise ValueError("times must be non-negative and increasing")
    leak0 = state.leakage()
    if leak0 > bound:
        raise UntrustedResult(f"initial leakage {leak0:.2e} exceeds bound {bound:.1e}")
    d2 = int(np.prod(generator.dims)) ** 2
    if method == "auto":
        if generator.lossless and state.is_pure:
            method = "ket"
        elif d2 <= DENSE_LIOUVILLIAN_MAX:
            method = "dense"
        else:
            method = "sparse"
    states = []
    if method == "ket":
        if not (generator.lossless and state.is_pure):
            raise ValueError("ket propagation needs a pure state and no loss")
        A = (-1j * generator.H).tocsc()
        psi, t_prev = state.data, 0.0
        for tk in times:
            psi = expm_multiply(A * (tk - t_prev), psi) if tk > t_prev else psi
            t_prev = tk
            states.append(TruncatedState(psi / np.linalg.norm(psi), state.dims))
    elif method == "dense":
        L = generator.liouvillian.toarray()
        v = state.density().reshape(-1, order="F")
        for tk in times:
            rho = (expm(L * tk) @ v).reshape(state.density().shape, order="F")
            states.append(TruncatedState(rho, state.dims))
    elif method == "sparse":
        L = generator.liouvillian.tocsc()
        shape = (int(np.prod(state.dims)),) * 2
        v, t_prev = state.density().reshape(-1, order="F"), 0.0
        for tk in times:
            v = expm_multiply(L * (tk - t_prev), v) if tk > t_prev else v
            t_prev = tk
            states.append(TruncatedState(v.reshape(shape, order="F"), state.dims))
    elif method == "ode":
        L = generator.liouvillian
        v0 = state.density().reshape(-1, order="F")
        if times[-1] == 0:
            sol_y = np.repeat(v0[:, None], len(times), axis=1)
        else:
            sol = solve_ivp(lambda _t, v: L @ v, (0.0, float(times[-1])), v0, method="DOP853",
                            t_eval=times, rtol=rtol, atol=atol)
            if not sol.success:
                raise RuntimeError(f"master-equation integration failed: {sol.message}")
            sol_y = sol.y
        shape = (int(np.prod(state.dims)),) * 2
        for k in range(len(times)):
            states.append(TruncatedState(sol_y[:, k].reshape(shape, order="F"), state.dims))
    else:
        raise ValueError(f"unknown method {method!r}")
    leaks = [s.leakage() for s in states]
    return EvolutionResult(times, states, leaks, max(leaks + [leak0]) <= bound, method)


def steady_state(generator: Generator, trunc: TruncationSpec | None = None) -> TruncatedState:
    """Null vector of the Liouvillian with the trace constraint replacing one row."""
    if generator.lossless:
        raise ValueError("steady state needs at least one loss channel")
    d = int(np.prod(generator.dims))
    L = generator.liouvillian.tolil()
    trace_row = np.zeros(d * d, dtype=complex)
    trace_row[np.arange(d) * (d + 1)] = 1.0
    L[0, :] = trace_row
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    v = spsolve(L.tocsc(), rhs)
    rho = v.reshape((d, d), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    st = TruncatedState(rho, generator.dims)
    bound = trunc.leakage_bound if trunc else DEFAULT_LEAKAGE_BOUND
    if st.leakage() > bound:
        raise UntrustedResult(f"steady-state leakage {st.leakage():.2e} exceeds bound {bound:.1e}")
    return st


@dataclass
class MeasuredMoments:
    moments: MomentState
    var_XT: float | None
    leakage: float
    extra: dict = field(default_factory=dict)


def measure_moments(state: TruncatedState, derived=None) -> MeasuredMoments:
    """Moment set of the two resonator modes; var_XT in m^2 if ``derived`` is given.

    With ``derived=None`` the spreads are taken as delta_L = delta_R = 1.
    """
    dims = state.dims
    bl, br = mode_operator(0, dims), mode_operator(1, dims)
    bld, brd = bl.conj().T, br.conj().T
    E = state.expect
    ms = MomentState(
        bL=E(bl), bR=E(br),
        L1=E(bl @ bl), L2=E(bld @ bl + bl @ bld), L3=E(bld @ bld),
        R1=E(br @ br), R2=E(brd @ br + br @ brd), R3=E(brd @ brd),
        C1=2 * E(bl @ br), C2=2 * E(bl @ brd), C3=2 * E(bld @ br), C4=2 * E(bld @ brd),
    )
    dL, dR = (derived.delta_L, derived.delta_R) if derived is not None else (1.0, 1.0)
    return MeasuredMoments(ms, ms.xt_variance(dL, dR), state.leakage())


def collective_stats(state: TruncatedState) -> dict:
    """Var(x_L + x_R), Var(p_L + p_R) in vacuum units (x = b + b^dag) and the normalized product.

    Equal zero-point spreads are assumed, so Var(X_T)/delta_X^2 = Var(x_L + x_R)/2.
    """
    dims = state.dims
    bl, br = mode_operator(0, dims), mode_operator(1, dims)
    x = bl + bl.conj().T + br + br.conj().T
    p = -1j * (bl - bl.conj().T + br - br.conj().T)
    vx = (state.expect(x @ x) - state.expect(x) ** 2).real
    vp = (state.expect(p @ p) - state.expect(p) ** 2).real
    return {"var_XT_over_deltaX2": vx / 2, "var_PT_over_zetaP2": vp / 2,
            "normalized_product": math.sqrt(vx * vp) / 2}


def squeeze_rate(times, var_ratio) -> float:
    """Rate r in Var(X_T)/delta_X^2 = exp(-2 r t), from a log-linear least-squares fit."""
    slope = np.polyfit(np.asarray(times, float), np.log(np.asarray(var_ratio, float)), 1)[0]
    return float(-slope / 2)


def bell_probe(coupling: float, t, n_max: int = 12, hamiltonian: str = "V_I",
               phi_drive: float = -math.pi / 2) -> dict:
    """Start from |0>|1> and report the weight on |01>, |10> and everything else."""
    trunc = TruncationSpec(n_max)
    spec = GeneratorSpec(hamiltonian, phi_drive=phi_drive, coupling=coupling)
    gen = build_generator(spec, None, trunc)
    res = evolve(TruncatedState.fock(trunc.dims, (0, 1)), gen, t, trunc)
    out = []
    for tk, st in zip(res.times, res.states):
        pops = st.populations().reshape(trunc.dims)
        w01, w10 = float(pops[0, 1]), float(pops[1, 0])
        top = np.argsort(pops.ravel())[::-1][:4]
        out.append({"t": float(tk), "p01": w01, "p10": w10,
                    "p_other": float(1 - w01 - w10),
                    "dominant": [[list(map(int, np.unravel_index(i, trunc.dims))),
                                  float(pops.ravel()[i])] for i in top]})
    return {"hamiltonian": hamiltonian, "coupling": coupling, "trusted": res.trusted,
            "trajectory": out}


def frequency_audit(terms, derived, n_levels: int = 4) -> list[dict]:
    """Check [H_0, T] = -f T for every table operator T, with f its tabulated rotation rate.

    The table lists f such that T(t) = T exp(-i f t) in the interaction picture.
    """
    dims = (n_levels,) * 3
    H0 = free_hamiltonian(dims, derived.omega_L, derived.omega_R, derived.Omega)
    out = []
    for term in terms:
        for comp in term.components:
            for sig in (comp.signature, comp.signature.conjugate()):
                T = _signature_operator(sig, dims)
                kL, kR, kO = sig.frequency_combo()
                f = kL * derived.omega_L + kR * derived.omega_R + kO * derived.Omega
                resid = sparse.linalg.norm(H0 @ T - T @ H0 + f * T)
                scale = max(sparse.linalg.norm(T), 1e-300) * max(1.0, abs(H0).max())
                out.append({"row": term.index, "operator": sig.label(), "frequency": f,
                            "relative_residual": float(resid / scale)})
    return out


@dataclass
class RwaProbeReport:
    times: np.ndarray
    var_full: np.ndarray
    var_reduced: np.ndarray
    n_full: np.ndarray
    n_reduced: np.ndarray
    max_relative_deviation: float
    kept_rows: list[int]
    leakage: float
    squeeze_rate_reduced: float | None = None

    def to_dict(self) -> dict:
        return {"times": self.times.tolist(), "var_full": self.var_full.tolist(),
                "var_reduced": self.var_reduced.tolist(), "n_full": self.n_full.tolist(),
                "n_reduced": self.n_reduced.tolist(),
                "max_relative_deviation": self.max_relative_deviation,
                "kept_rows": self.kept_rows, "leakage": self.leakage}


def rwa_error_probe(derived, trunc: TruncationSpec, t, alpha: float = 2.0,
                    phi_drive: float = -math.pi / 2, Omega: float | None = None,
                    tol: float | None = None) -> RwaProbeReport:
    """Full coupling V against its resonant reduction, both under the same H_0.

    The SQUID mode starts in the coherent state |alpha e^{-i phi}>, the
    resonators in vacuum. Both Hamiltonians are time independent in the lab
    frame and are diagonalized once; moments are reported in the frame
    rotating with H_0, where var_XT is measured in units of delta_X^2.
    """
    if trunc.modes != 3:
        raise ValueError("the RWA probe needs a three-mode truncation")
    dims = trunc.dims
    Om = derived.Omega if Omega is None else Omega
    terms = rwa.enumerate_terms(derived)
    if tol is None:
        tol = 1e-6 * Om
    with warnings.catch_warnings():
        # row 0 plus the tuned resonance is the intended V' selection
        warnings.simplefilter("ignore", rwa.DegenerateSelectionWarning)
        reduced = rwa.select_resonant(terms, Om, derived.omega_L, derived.omega_R, tol)
    H0 = free_hamiltonian(dims, derived.omega_L, derived.omega_R, Om)
    H_full = (H0 + full_coupling(derived, dims)).toarray()
    H_red = (H0 + _terms_operator(list(reduced.hermitian_components("expansion")), dims)).toarray()
    psi0 = np.kron(np.kron(coherent_amplitudes(dims[0], 0), coherent_amplitudes(dims[1], 0)),
                   coherent_amplitudes(dims[2], alpha * np.exp(-1j * phi_drive)))
    psi0 = psi0 / np.linalg.norm(psi0)
    h0 = np.real(H0.diagonal())
    bl, br = mode_operator(0, dims), mode_operator(1, dims)
    x = bl + bl.conj().T + br + br.conj().T
    nL = bl.conj().T @ bl
    times = np.atleast_1d(np.asarray(t, float))
    results = {}
    leak = 0.0
    for name, H in (("full", H_full), ("reduced", H_red)):
        w, U = eigh(H)
        c = U.conj().T @ psi0
        var, occ = [], []
        for tk in times:
            psi = U @ (np.exp(-1j * w * tk) * c)
            psi_rot = np.exp(1j * h0 * tk) * psi
            st = TruncatedState(psi_rot, dims)
            leak = max(leak, st.leakage())
            var.append((st.expect(x @ x) - st.expect(x) ** 2).real / 2)
            occ.append(st.expect(nL).real)
        results[name] = (np.array(var), np.array(occ))
    vf, nf = results["full"]
    vr, nr = results["reduced"]
    dev = float(np.max(np.abs(vf - vr) / np.abs(vr)))
    return RwaProbeReport(times, vf, vr, nf, nr, dev, reduced.indices, leak)
