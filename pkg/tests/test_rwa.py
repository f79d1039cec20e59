import csv
import math
import time
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import sparse

from sqnamr import device, fock, rwa

GOLDEN = Path(__file__).parent / "data" / "table1.csv"


def golden_rows():
    with GOLDEN.open() as fh:
        return list(csv.DictReader(fh))


def test_table_matches_golden(reference_derived):
    terms = rwa.enumerate_terms(reference_derived)
    assert len(terms) == 23
    for t, g in zip(terms, golden_rows()):
        assert str(t.index) == g["index"]
        assert t.frequency_expr == g["frequency_expr"]
        assert t.coefficient_expr == g["coefficient_expr"]
        assert t.operators == g["operators"]


def test_named_rows(reference_derived):
    terms = rwa.enumerate_terms(reference_derived)
    assert terms[3].coefficient_expr == "c2*gL*gR" and terms[3].frequency_expr == "omega_L+omega_R"
    assert terms[20].coefficient_expr == "c1*gL*gR"
    assert terms[20].frequency_expr == "omega_L+omega_R-Omega"
    assert terms[0].frequency == 0.0


def test_completeness_closes():
    rep = rwa.completeness_check()
    assert rep.closes
    assert not rep.missing_from_table and not rep.missing_from_expansion
    assert not rep.symbol_mismatches
    # the table drops numeric prefactors; they are reported, not guessed
    assert rep.prefactor_ratios[0] == [Fraction(-8)] * 2
    assert rep.prefactor_ratios[20] == [Fraction(-2)]
    assert rep.prefactor_ratios[5] == [Fraction(-2)] * 2


def _matrix_of(components, dims):
    H = sparse.csr_matrix((int(np.prod(dims)),) * 2, dtype=complex)
    for sig, value in components:
        H = H + value * fock.signature_operator(sig, dims)
    return H


def test_expansion_reconstructs_coupling_numerically(reference_derived):
    """Rows (with exact prefactors) + conjugates + residue equal V built from sparse matrices."""
    dims = (4, 4, 5)
    terms = rwa.enumerate_terms(reference_derived)
    comps = [c for t in terms for c in t.hermitian_components("expansion")]
    values = rwa.coefficient_values_of(reference_derived)
    rep = rwa.completeness_check()
    comps += [(sig, rwa.coefficient_value(v, mono, values)) for (sig, mono), v in rep.residue.terms.items()]
    H = _matrix_of(comps, dims).toarray()
    V = fock.full_coupling(reference_derived, dims).toarray()
    # products of truncated matrices are exact only away from the top levels
    levels = np.array(np.unravel_index(np.arange(H.shape[0]), dims)).T
    low = np.all(levels <= np.array(dims) - 3, axis=1)
    block = np.ix_(low, low)
    assert low.sum() > 10
    assert np.max(np.abs(H[block] - V[block])) <= 1e-12 * np.max(np.abs(V))


def test_rows_are_hermitian_closed(reference_derived):
    dims = (3, 3, 3)
    for t in rwa.enumerate_terms(reference_derived):
        H = _matrix_of(list(t.hermitian_components()), dims)
        assert abs(H - H.conj().T).max() <= 1e-12 * max(1.0, abs(H).max())


def test_frequency_audit(reference_derived):
    audit = fock.frequency_audit(rwa.enumerate_terms(reference_derived), reference_derived)
    assert max(a["relative_residual"] for a in audit) <= 1e-10


def test_catalog_runtime(reference_derived):
    t0 = time.perf_counter()
    rwa.enumerate_terms(reference_derived)
    rwa.completeness_check()
    assert time.perf_counter() - t0 < 1.0


# --- selection ----------------------------------------------------------------

def test_equal_frequencies_selects_vr(reference_derived):
    w = 1.3e9
    terms = rwa.enumerate_terms(reference_derived, omega_L=w, omega_R=w)
    with pytest.warns(rwa.DegenerateSelectionWarning):
        red = rwa.select_resonant(terms, 2.37e9, w, w, tol=1e3)
    assert red.indices == [0, 4]


def test_tuned_resonance_selects_vprime(reference_derived):
    d = reference_derived
    terms = rwa.enumerate_terms(d)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", rwa.DegenerateSelectionWarning)
        red = rwa.select_resonant(terms, d.omega_L + d.omega_R, d.omega_L, d.omega_R,
                                  rwa.default_tolerance(2e6, 2e6))
    assert red.indices == [0, 20]


def test_zero_tolerance_keeps_only_row0(reference_derived):
    wL, wR, Om = 1.0e9, math.sqrt(2) * 1e9, math.pi * 1e9
    terms = rwa.enumerate_terms(reference_derived, omega_L=wL, omega_R=wR)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        red = rwa.select_resonant(terms, Om, wL, wR, tol=0.0)
    assert red.indices == [0]


def test_reduced_is_hermitian_closed(reference_derived):
    d = reference_derived
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        red = rwa.select_resonant(rwa.enumerate_terms(d), d.Omega, d.omega_L, d.omega_R, 1e6)
    H = _matrix_of(list(red.hermitian_components()), (3, 3, 3))
    assert abs(H - H.conj().T).max() <= 1e-12 * abs(H).max()


@given(st.floats(0, 5e9), st.floats(0, 5e9))
def test_selection_monotone_in_tol(reference_derived, t1, t2):
    lo, hi = sorted((t1, t2))
    d = reference_derived
    terms = rwa.enumerate_terms(d)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = rwa.select_resonant(terms, 2.0e9, d.omega_L, d.omega_R, lo)
        b = rwa.select_resonant(terms, 2.0e9, d.omega_L, d.omega_R, hi)
    assert set(a.indices) <= set(b.indices)


def test_resonance_shift(reference_derived):
    d = reference_derived
    assert rwa.resonance_shift(d, 0, 0) == (0.0, d.Omega)
    delta, Om = rwa.resonance_shift(d, 1, 1)
    assert delta / d.Omega < 1e-4
    assert Om == pytest.approx(d.Omega - delta)
    with pytest.raises(ValueError):
        rwa.resonance_shift(d, -1, 0)


def test_resonance_shift_quadratic_in_g(reference_config):
    a = device.derive(reference_config)
    b = device.derive(reference_config.replace(B_L=2 * reference_config.B_L, B_R=2 * reference_config.B_R))
    assert rwa.resonance_shift(b, 1, 2)[0] == pytest.approx(4 * rwa.resonance_shift(a, 1, 2)[0], rel=1e-12)


def test_signature_invariants(reference_derived):
    with pytest.raises(ValueError):
        rwa.OperatorSignature((1, 0, -1, 0, 0, 0))
    for t in rwa.enumerate_terms(reference_derived):
        for c in t.components:
            assert c.signature.b_degree == 2
            assert c.signature.a_degree in (1, 2)
    s = rwa.signature(b_L=1, b_R=1, a_dag=1)
    assert s.frequency_combo() == (1, 1, -1)
    assert s.conjugate().conjugate() == s
