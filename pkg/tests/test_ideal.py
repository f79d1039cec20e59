import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sqnamr import device, fock, ideal


def test_identity_at_zero():
    assert np.allclose(ideal.evolve_bogoliubov(0.0, 0.7).matrix, np.eye(4))


def test_real_coefficients_at_minus_half_pi():
    S = ideal.evolve_bogoliubov(-0.3, -math.pi / 2).matrix
    assert S[0, 0] == pytest.approx(math.cosh(0.3))
    assert S[0, 3] == pytest.approx(-math.sinh(0.3))
    assert abs(S[0, 3].imag) < 1e-15


@given(st.floats(-5, 5), st.floats(-math.pi, math.pi))
def test_symplectic(gamma, phi):
    assert ideal.evolve_bogoliubov(gamma, phi).is_symplectic(atol=1e-12)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-math.pi, math.pi))
def test_group_composition(g1, g2, phi):
    a = ideal.evolve_bogoliubov(g1, phi) @ ideal.evolve_bogoliubov(g2, phi)
    b = ideal.evolve_bogoliubov(g1 + g2, phi)
    assert np.allclose(a.matrix, b.matrix, rtol=1e-12, atol=1e-12 * np.abs(b.matrix).max())


def test_vacuum_stats(unit_spreads):
    st_ = ideal.collective_variance(ideal.evolve_bogoliubov(0.0, 0.0), unit_spreads)
    assert st_.var_XT_over_deltaX2 == pytest.approx(1.0)
    assert st_.normalized_product == pytest.approx(1.0)


@given(st.floats(-3, 3))
def test_squeezing_law(unit_spreads, gamma):
    st_ = ideal.collective_variance(ideal.evolve_bogoliubov(gamma, -math.pi / 2), unit_spreads)
    assert st_.var_XT_over_deltaX2 == pytest.approx(math.exp(2 * gamma), rel=1e-10)
    assert st_.normalized_product == pytest.approx(1.0, rel=1e-10)
    assert st_.var_PT * st_.var_XT == pytest.approx(4.0, rel=1e-10)


@given(st.floats(-2, 2), st.floats(-math.pi, math.pi))
def test_uncertainty_product_general_phase(unit_spreads, gamma, phi):
    st_ = ideal.collective_variance(ideal.evolve_bogoliubov(gamma, phi), unit_spreads)
    assert st_.normalized_product == pytest.approx(ideal.uncertainty_law(gamma, phi), rel=1e-9)


def test_physical_units(symmetric_config):
    d = device.derive(symmetric_config)
    st_ = ideal.collective_variance(ideal.evolve_bogoliubov(-0.5, -math.pi / 2), d)
    assert st_.var_XT == pytest.approx(d.delta_X**2 * math.exp(-1), rel=1e-12)
    assert math.sqrt(st_.var_XT * st_.var_PT) == pytest.approx(d.delta_X * d.zeta_P, rel=1e-12)
    # with zeta = hbar / (2 delta) the product is hbar
    assert d.zeta_L == pytest.approx(device.HBAR / (2 * d.delta_L), rel=1e-12)


def test_unequal_spreads_warn(reference_derived):
    with pytest.warns(RuntimeWarning, match="delta_L != delta_R"):
        ideal.collective_variance(ideal.evolve_bogoliubov(-0.1, -math.pi / 2), reference_derived)


def test_gamma_negative_for_reference_tilt(reference_config, reference_derived):
    assert reference_config.alpha_mag * reference_derived.eta * 1e-6 < 0


@pytest.mark.parametrize("gamma", [-0.1, -0.3, -0.5, -0.8])
def test_oracle_equivalence_all_moments(gamma):
    """Bogoliubov moments agree with Fock-space propagation of V_I."""
    bmap = ideal.evolve_bogoliubov(gamma, -math.pi / 2)
    G = ideal.GaussianMoments.coherent(0.4 + 0.1j, -0.2j).transformed(bmap)
    trunc = fock.TruncationSpec(40)
    gen = fock.build_generator(fock.GeneratorSpec("V_I", coupling=gamma), None, trunc)
    psi0 = fock.TruncatedState.coherent(trunc.dims, (0.4 + 0.1j, -0.2j))
    st_ = fock.evolve(psi0, gen, 1.0, trunc).require_trusted().states[-1]
    bl, br = fock.mode_operator(0, trunc.dims), fock.mode_operator(1, trunc.dims)
    B = [bl, bl.conj().T, br, br.conj().T]
    for i in range(4):
        assert st_.expect(B[i]) == pytest.approx(G.mean[i], abs=1e-8)
        for j in range(4):
            assert st_.expect(B[i] @ B[j]) == pytest.approx(G.second[i, j], rel=1e-4, abs=1e-8)


def test_coherent_and_thermal_inputs_get_entangled():
    """Two-mode squeezing of coherent or thermal inputs still passes the Duan witness."""
    bmap = ideal.evolve_bogoliubov(-0.5, -math.pi / 2)
    assert ideal.duan_sum(bmap) < 2
    assert ideal.duan_sum(bmap, ideal.GaussianMoments.coherent(1.0, 0.5j)) == pytest.approx(
        ideal.duan_sum(bmap))
    assert ideal.duan_sum(bmap, ideal.GaussianMoments.thermal(0.3, 0.3)) < 2
    # separable input never violates the bound
    assert ideal.duan_sum(ideal.evolve_bogoliubov(0.0, 0.0),
                          ideal.GaussianMoments.thermal(0.3, 0.3)) >= 2


def test_ideal_curve(unit_spreads):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        curve = ideal.ideal_curve([0.0, -0.5], -math.pi / 2, unit_spreads)
    assert curve[1][1] == pytest.approx(math.exp(-1))
