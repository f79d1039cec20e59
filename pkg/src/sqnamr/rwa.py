"""Term catalog of the SQUID-resonator coupling and rotating-wave selection.

The coupling

    V = -[g_L (b_L + b_L^dag) + g_R (b_R + b_R^dag)]^2 [c_1 (a + a^dag) + c_2 (a + a^dag)^2]

is expanded exactly in normal order, and each operator monomial is labelled
by its interaction-picture rotation frequency. A term T evolves under the
free Hamiltonian as T exp(-i f t) with

    f = sum over modes of (annihilation power - creation power) * mode frequency,

so [T, H_0] = f T (hbar = 1).
"""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

# Operator order inside a signature: (a, a^dag, b_L, b_L^dag, b_R, b_R^dag).
_MODE_SLOTS = {"a": (0, 1), "b_L": (2, 3), "b_R": (4, 5)}
# Coefficient monomials are exponent tuples over (c1, c2, gL, gR).
_SYMBOLS = ("c1", "c2", "gL", "gR")


class DegenerateSelectionWarning(UserWarning):
    """Several distinct frequency combinations fell inside the RWA window."""


@dataclass(frozen=True, order=True)
class OperatorSignature:
    """Normal-ordered operator monomial, as powers of (a, a^dag, b_L, b_L^dag, b_R, b_R^dag)."""

    powers: tuple[int, int, int, int, int, int]
    normal_ordered: bool = True

    def __post_init__(self):
        if len(self.powers) != 6 or any(p < 0 for p in self.powers):
            raise ValueError(f"bad operator powers {self.powers!r}")

    @property
    def a_degree(self) -> int:
        return self.powers[0] + self.powers[1]

    @property
    def b_degree(self) -> int:
        return sum(self.powers[2:])

    def conjugate(self) -> "OperatorSignature":
        p = self.powers
        return OperatorSignature((p[1], p[0], p[3], p[2], p[5], p[4]))

    def is_hermitian(self) -> bool:
        return self.conjugate() == self

    def frequency_combo(self) -> tuple[int, int, int]:
        """Integer weights of (omega_L, omega_R, Omega) in the rotation frequency."""
        p = self.powers
        return (p[2] - p[3], p[4] - p[5], p[0] - p[1])

    def label(self) -> str:
        parts = []
        for mode in ("b_L", "b_R", "a"):
            ann, cre = (self.powers[i] for i in _MODE_SLOTS[mode])
            if cre:
                parts.append(f"{mode}^dag" + (f"^{cre}" if cre > 1 else ""))
            if ann:
                parts.append(mode + (f"^{ann}" if ann > 1 else ""))
        return " ".join(parts) if parts else "1"


def signature(**powers) -> OperatorSignature:
    """Build a signature from keyword powers, e.g. ``signature(b_L=1, b_R=1, a_dag=1)``."""
    order = ("a", "a_dag", "b_L", "b_L_dag", "b_R", "b_R_dag")
    unknown = set(powers) - set(order)
    if unknown:
        raise ValueError(f"unknown operator names {sorted(unknown)}")
    return OperatorSignature(tuple(powers.get(k, 0) for k in order))


def frequency_expr(combo: tuple[int, int, int]) -> str:
    out = ""
    for weight, name in zip(combo, ("omega_L", "omega_R", "Omega")):
        if weight == 0:
            continue
        mag = abs(weight)
        term = name if mag == 1 else f"{mag}*{name}"
        if not out:
            out = term if weight > 0 else f"-{term}"
        else:
            out += f"+{term}" if weight > 0 else f"-{term}"
    return out or "0"


def coefficient_expr(factor: Fraction, mono: tuple[int, int, int, int]) -> str:
    syms = [s if e == 1 else f"{s}^{e}" for s, e in zip(_SYMBOLS, mono) if e]
    body = "*".join(syms) or "1"
    if factor == 1:
        return body
    if factor == -1:
        return "-" + body
    return f"{factor}*{body}"


def coefficient_value(factor: Fraction, mono, values: dict[str, float]) -> float:
    out = float(factor)
    for s, e in zip(_SYMBOLS, mono):
        out *= values[s] ** e
    return out


# ---------------------------------------------------------------------------
# normal-ordered polynomial algebra (fixed to this three-mode family)


def _mode_product(left: tuple[int, int], right: tuple[int, int]):
    """(a^dag^p1 a^q1)(a^dag^p2 a^q2) in normal order as {(ann, cre): multiplicity}.

    Arguments are (annihilation power, creation power) pairs.
    """
    q1, p1 = left
    q2, p2 = right
    out = {}
    for k in range(min(q1, p2) + 1):
        mult = math.comb(q1, k) * math.comb(p2, k) * math.factorial(k)
        out[(q1 + q2 - k, p1 + p2 - k)] = mult
    return out


class NormalPoly:
    """Polynomial in bosonic ladder operators with symbolic (c1, c2, gL, gR) coefficients."""

    def __init__(self, terms=None):
        self.terms: dict[tuple[OperatorSignature, tuple], Fraction] = {}
        for key, value in (terms or {}).items():
            if value:
                self.terms[key] = Fraction(value)

    @classmethod
    def ladder(cls, mode: str, dagger: bool = False, coeff=(0, 0, 0, 0)):
        powers = [0] * 6
        powers[_MODE_SLOTS[mode][1 if dagger else 0]] = 1
        return cls({(OperatorSignature(tuple(powers)), tuple(coeff)): 1})

    @classmethod
    def scalar(cls, value=1, coeff=(0, 0, 0, 0)):
        return cls({(OperatorSignature((0,) * 6), tuple(coeff)): value})

    def __add__(self, other: "NormalPoly") -> "NormalPoly":
        out = dict(self.terms)
        for key, value in other.terms.items():
            out[key] = out.get(key, 0) + value
        return NormalPoly(out)

    def __neg__(self) -> "NormalPoly":
        return NormalPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "NormalPoly") -> "NormalPoly":
        out: dict = defaultdict(Fraction)
        for (sig1, c1), v1 in self.terms.items():
            for (sig2, c2), v2 in other.terms.items():
                coeff = tuple(x + y for x, y in zip(c1, c2))
                partial = {(): v1 * v2}
                for mode in ("a", "b_L", "b_R"):
                    i, j = _MODE_SLOTS[mode]
                    prod = _mode_product((sig1.powers[i], sig1.powers[j]),
                                         (sig2.powers[i], sig2.powers[j]))
                    partial = {key + pw: val * m
                               for key, val in partial.items() for pw, m in prod.items()}
                for pw, val in partial.items():
                    out[(OperatorSignature(pw), coeff)] += val
        return NormalPoly({k: v for k, v in out.items() if v})

    def by_signature(self) -> dict[OperatorSignature, list[tuple[tuple, Fraction]]]:
        grouped = defaultdict(list)
        for (sig, coeff), value in sorted(self.terms.items()):
            grouped[sig].append((coeff, value))
        return dict(grouped)

    def is_hermitian(self) -> bool:
        return all(self.terms.get((sig.conjugate(), c), 0) == v
                   for (sig, c), v in self.terms.items())

    def __eq__(self, other):
        return isinstance(other, NormalPoly) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)


def expand_coupling() -> NormalPoly:
    """Exact normal-ordered expansion of the SQUID-resonator coupling V."""
    L = NormalPoly.ladder
    x = (L("b_L", coeff=(0, 0, 1, 0)) + L("b_L", True, coeff=(0, 0, 1, 0))
         + L("b_R", coeff=(0, 0, 0, 1)) + L("b_R", True, coeff=(0, 0, 0, 1)))
    A = L("a") + L("a", True)
    squid = A * NormalPoly.scalar(coeff=(1, 0, 0, 0)) + A * A * NormalPoly.scalar(coeff=(0, 1, 0, 0))
    return -(x * x * squid)


# ---------------------------------------------------------------------------
# the 23-row term table

_h = Fraction(1, 2)
_C2L2, _C2R2, _C2LR = (0, 1, 2, 0), (0, 1, 0, 2), (0, 1, 1, 1)
_C1L2, _C1R2, _C1LR = (1, 0, 2, 0), (1, 0, 0, 2), (1, 0, 1, 1)
_S = signature

# Each row: list of (factor, coefficient monomial, operator signature).
TABLE_ROWS: tuple[tuple[tuple[Fraction, tuple, OperatorSignature], ...], ...] = (
    ((_h, _C2L2, _S(b_L_dag=1, b_L=1, a_dag=1, a=1)),
     (_h, _C2R2, _S(b_R_dag=1, b_R=1, a_dag=1, a=1))),
    ((1, _C2L2, _S(b_L=2, a_dag=1, a=1)),),
    ((1, _C2R2, _S(b_R=2, a_dag=1, a=1)),),
    ((1, _C2LR, _S(b_L=1, b_R=1, a_dag=1, a=1)),),
    ((1, _C2LR, _S(b_R_dag=1, b_L=1, a_dag=1, a=1)),),
    ((1, _C2L2, _S(b_L_dag=1, b_L=1, a=2)),
     (1, _C2R2, _S(b_R_dag=1, b_R=1, a=2))),
    ((1, _C1L2, _S(b_L_dag=1, b_L=1, a=1)),
     (1, _C1R2, _S(b_R_dag=1, b_R=1, a=1))),
    ((1, _C2L2, _S(b_L=2, a=2)),),
    ((1, _C2L2, _S(b_L=2, a_dag=2)),),
    ((1, _C2R2, _S(b_R=2, a=2)),),
    ((1, _C2R2, _S(b_R=2, a_dag=2)),),
    ((1, _C2LR, _S(b_L=1, b_R=1, a=2)),),
    ((1, _C2LR, _S(b_L=1, b_R=1, a_dag=2)),),
    ((1, _C2LR, _S(b_L=1, b_R_dag=1, a=2)),),
    ((1, _C2LR, _S(b_L=1, b_R_dag=1, a_dag=2)),),
    ((1, _C1L2, _S(b_L=2, a=1)),),
    ((1, _C1L2, _S(b_L=2, a_dag=1)),),
    ((1, _C1R2, _S(b_R=2, a=1)),),
    ((1, _C1R2, _S(b_R=2, a_dag=1)),),
    ((1, _C1LR, _S(b_L=1, b_R=1, a=1)),),
    ((1, _C1LR, _S(b_L=1, b_R=1, a_dag=1)),),
    ((1, _C1LR, _S(b_L=1, b_R_dag=1, a=1)),),
    ((1, _C1LR, _S(b_L=1, b_R_dag=1, a_dag=1)),),
)


@dataclass(frozen=True)
class TermComponent:
    signature: OperatorSignature
    factor: Fraction
    monomial: tuple[int, int, int, int]
    # Prefactor of the same operator in the exact expansion of V.
    expansion_factor: Fraction

    @property
    def coefficient_expr(self) -> str:
        return coefficient_expr(self.factor, self.monomial)


@dataclass(frozen=True)
class InteractionTerm:
    """One table row: a group of operator monomials sharing a rotation frequency.

    Each row stands for itself plus its Hermitian conjugate (frequency -f).
    """

    index: int
    components: tuple[TermComponent, ...]
    frequency_combo: tuple[int, int, int]
    frequency: float
    values: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def frequency_expr(self) -> str:
        return frequency_expr(self.frequency_combo)

    @property
    def coefficient_expr(self) -> str:
        return " | ".join(c.coefficient_expr for c in self.components)

    @property
    def operators(self) -> str:
        return " | ".join(c.signature.label() for c in self.components)

    def coefficient_values(self, source: str = "table") -> list[float]:
        """Numeric coefficient (rad/s) of each component; ``source`` is 'table' or 'expansion'."""
        out = []
        for c in self.components:
            factor = c.factor if source == "table" else c.expansion_factor
            out.append(coefficient_value(factor, c.monomial, self.values))
        return out

    def frequency_at(self, omega_L: float, omega_R: float, Omega: float) -> float:
        kL, kR, kO = self.frequency_combo
        return kL * omega_L + kR * omega_R + kO * Omega

    def hermitian_components(self, source: str = "table"):
        """Yield (signature, value) for every component and its conjugate partner."""
        for comp, value in zip(self.components, self.coefficient_values(source)):
            yield comp.signature, value
            if not comp.signature.is_hermitian():
                yield comp.signature.conjugate(), value


@dataclass
class CompletenessReport:
    """Comparison of the term table with the exact expansion of V."""

    missing_from_table: list[OperatorSignature]
    missing_from_expansion: list[OperatorSignature]
    symbol_mismatches: list[tuple[int, OperatorSignature, tuple, tuple]]
    prefactor_ratios: dict[int, list[Fraction]]
    residue: NormalPoly
    expansion_hermitian: bool

    @property
    def closes(self) -> bool:
        return not (self.missing_from_table or self.missing_from_expansion
                    or self.symbol_mismatches) and self.expansion_hermitian

    def summary(self) -> str:
        lines = [f"completeness: {'closed' if self.closes else 'OPEN'}",
                 f"  operators in V not covered by the table: {len(self.missing_from_table)}",
                 f"  table operators absent from V: {len(self.missing_from_expansion)}",
                 f"  coefficient-symbol mismatches: {len(self.symbol_mismatches)}",
                 "  prefactor ratio (exact expansion / table) per row:"]
        for idx, ratios in self.prefactor_ratios.items():
            lines.append(f"    row {idx:2d}: " + ", ".join(str(r) for r in ratios))
        lines.append(f"  reordering / non-coupling residue terms: {len(self.residue)}")
        for (sig, mono), v in sorted(self.residue.terms.items()):
            lines.append(f"    {coefficient_expr(v, mono)}  {sig.label()}")
        return "\n".join(lines)


def _is_interaction(sig: OperatorSignature) -> bool:
    return sig.b_degree == 2 and sig.a_degree >= 1


def _match_table(expansion: NormalPoly):
    """Map each table component signature to its (monomial, factor) in the expansion."""
    found = {}
    for (sig, mono), value in expansion.terms.items():
        found.setdefault(sig, []).append((mono, value))
    return found


def completeness_check(expansion: NormalPoly | None = None) -> CompletenessReport:
    expansion = expansion if expansion is not None else expand_coupling()
    found = _match_table(expansion)
    covered = set()
    missing_from_expansion, mismatches = [], []
    ratios: dict[int, list[Fraction]] = {}
    for idx, row in enumerate(TABLE_ROWS):
        ratios[idx] = []
        for factor, mono, sig in row:
            for s in {sig, sig.conjugate()}:
                covered.add(s)
            entries = found.get(sig, [])
            if not entries:
                missing_from_expansion.append(sig)
                continue
            for emono, evalue in entries:
                if emono != mono:
                    mismatches.append((idx, sig, mono, emono))
                else:
                    ratios[idx].append(evalue / Fraction(factor))
    missing_from_table = sorted(
        {sig for (sig, _), _ in expansion.terms.items()
         if _is_interaction(sig) and sig not in covered})
    residue = NormalPoly({k: v for k, v in expansion.terms.items() if not _is_interaction(k[0])})
    return CompletenessReport(
        missing_from_table=missing_from_table,
        missing_from_expansion=missing_from_expansion,
        symbol_mismatches=mismatches,
        prefactor_ratios=ratios,
        residue=residue,
        expansion_hermitian=expansion.is_hermitian(),
    )


def _expansion_factor(expansion: NormalPoly, sig: OperatorSignature, mono) -> Fraction:
    return expansion.terms.get((sig, mono), Fraction(0))


def coefficient_values_of(derived) -> dict[str, float]:
    return {"c1": derived.c_1, "c2": derived.c_2, "gL": derived.g_L, "gR": derived.g_R}


def enumerate_terms(derived, omega_L: float | None = None,
                    omega_R: float | None = None) -> list[InteractionTerm]:
    """The 23 representative rows with symbolic and numeric data.

    Frequencies use ``derived.Omega`` and the resonator frequencies (taken
    from ``derived`` unless given).
    """
    omega_L = derived.omega_L if omega_L is None else omega_L
    omega_R = derived.omega_R if omega_R is None else omega_R
    expansion = expand_coupling()
    values = coefficient_values_of(derived)
    terms = []
    for idx, row in enumerate(TABLE_ROWS):
        comps = tuple(
            TermComponent(sig, Fraction(factor), mono, _expansion_factor(expansion, sig, mono))
            for factor, mono, sig in row)
        combos = {c.signature.frequency_combo() for c in comps}
        assert len(combos) == 1, f"row {idx} mixes frequencies"
        combo = combos.pop()
        kL, kR, kO = combo
        terms.append(InteractionTerm(
            index=idx, components=comps, frequency_combo=combo,
            frequency=kL * omega_L + kR * omega_R + kO * derived.Omega, values=values))
    return terms


@dataclass
class ReducedHamiltonian:
    terms: list[InteractionTerm]
    description: str

    @property
    def indices(self) -> list[int]:
        return [t.index for t in self.terms]

    def hermitian_components(self, source: str = "table"):
        for t in self.terms:
            yield from t.hermitian_components(source)


def select_resonant(terms, Omega_eff: float, omega_L: float, omega_R: float,
                    tol: float) -> ReducedHamiltonian:
    """Keep rows whose rotation frequency satisfies |f| <= tol.

    Rows carry their conjugates, so partners stay together. A
    ``DegenerateSelectionWarning`` is issued when more than one distinct
    frequency combination survives.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    kept = [t for t in terms if abs(t.frequency_at(omega_L, omega_R, Omega_eff)) <= tol]
    combos = sorted({t.frequency_combo for t in kept})
    if len(combos) > 1:
        warnings.warn(
            "RWA window holds several frequency combinations: "
            + ", ".join(frequency_expr(c) for c in combos),
            DegenerateSelectionWarning, stacklevel=2)
    desc = (f"|f| <= {tol:g} at Omega={Omega_eff:g}, omega_L={omega_L:g}, "
            f"omega_R={omega_R:g}: rows {[t.index for t in kept]}")
    return ReducedHamiltonian(kept, desc)


def default_tolerance(kappa_L: float, kappa_R: float) -> float:
    return 10 * max(kappa_L, kappa_R)


def resonance_shift(derived, n_L: float, n_R: float) -> tuple[float, float]:
    """Stark shift of the SQUID mode from resonator occupations; returns (delta_LR, Omega')."""
    if n_L < 0 or n_R < 0:
        raise ValueError("occupations must be non-negative")
    delta = derived.c_2 * (derived.g_R**2 * n_R + derived.g_L**2 * n_L)
    return delta, derived.Omega - delta


CSV_HEADER = "index,frequency_expr,frequency_value,coefficient_expr,operators"


def table_csv_rows(terms) -> list[list[str]]:
    return [[str(t.index), t.frequency_expr, repr(float(t.frequency)),
             t.coefficient_expr, t.operators] for t in terms]


def format_table(terms) -> str:
    rows = [("#", "frequency", "value (rad/s)", "coefficient", "operators")]
    rows += [(str(t.index), t.frequency_expr, f"{t.frequency:.6g}", t.coefficient_expr,
              t.operators) for t in terms]
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)
