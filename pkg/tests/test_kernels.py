import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp

from sqnamr import kernels
from sqnamr.langevin import MomentState

BACKENDS = kernels.backends()


def test_compiled_backend_present():
    assert "python" in BACKENDS
    if os.environ.get("SQNAMR_PURE_PYTHON") != "1":
        assert kernels.BACKEND == "cython"


def test_pure_python_env_switch():
    out = subprocess.run([sys.executable, "-c", "from sqnamr import kernels; print(kernels.BACKEND)"],
                         env={**os.environ, "SQNAMR_PURE_PYTHON": "1"}, capture_output=True,
                         text=True, check=True)
    assert out.stdout.strip() == "python"


def _random_state(rng):
    return rng.normal(size=12) + 1j * rng.normal(size=12)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_rhs_matches_hand_formula(name):
    rng = np.random.default_rng(1)
    y = _random_state(rng)
    xi, kL, kR = 0.3, 1.1, 1.7
    bL, bR, L1, L2, L3, R1, R2, R3, C1, C2, C3, C4 = y
    kp2 = (kL + kR) / 2
    expect = [-kL / 2 * bL - xi * np.conj(bR), -kR / 2 * bR - xi * np.conj(bL),
              -kL * L1 - xi * C2, -kL * L2 - xi * (C1 + C4) + kL, -kL * L3 - xi * C3,
              -kR * R1 - xi * C3, -kR * R2 - xi * (C1 + C4) + kR, -kR * R3 - xi * C2,
              -kp2 * C1 - xi * (L2 + R2), -kp2 * C2 - 2 * xi * (R3 + L1),
              -kp2 * C3 - 2 * xi * (R1 + L3), -kp2 * C4 - xi * (L2 + R2)]
    assert np.allclose(BACKENDS[name].moment_rhs(y, xi, kL, kR), expect, rtol=1e-15, atol=1e-15)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_against_solve_ivp(name):
    rng = np.random.default_rng(7)
    y0 = _random_state(rng)
    xi, kL, kR = 0.35, 0.9, 1.4
    grid = np.linspace(0, 6, 13)
    traj, info = BACKENDS[name].integrate_moments(y0, xi, kL, kR, grid)
    mod = BACKENDS[name]
    ref = solve_ivp(lambda t, y: mod.moment_rhs(y, xi, kL, kR), (0, 6), y0, method="DOP853",
                    t_eval=grid, rtol=1e-12, atol=1e-14)
    assert np.allclose(traj, ref.y.T, rtol=1e-8, atol=1e-10)
    assert info["steps"] > 0


def test_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    y0 = MomentState(bL=0.3j, L2=1.4).to_vector()
    grid = np.linspace(0, 20, 41)
    a, _ = BACKENDS["cython"].integrate_moments(y0, 0.2, 1.0, 0.8, grid)
    b, _ = BACKENDS["python"].integrate_moments(y0, 0.2, 1.0, 0.8, grid)
    assert np.max(np.abs(a - b)) < 1e-12
    pa = BACKENDS["cython"].potential_grid(np.linspace(0, 6, 9), np.linspace(-.1, .1, 5), 0.3, 0.0)
    pb = BACKENDS["python"].potential_grid(np.linspace(0, 6, 9), np.linspace(-.1, .1, 5), 0.3, 0.0)
    assert np.allclose(pa, pb, rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_step_budget_reported(name):
    y0 = MomentState.vacuum().to_vector()
    with pytest.raises(kernels.IntegrationError, match="budget"):
        BACKENDS[name].integrate_moments(y0, 0.3, 1.0, 1.0, [0.0, 1e3], max_steps=5)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_unstable_never_reaches_steady(name):
    y0 = MomentState.vacuum().to_vector()
    with pytest.raises(kernels.IntegrationError):
        BACKENDS[name].integrate_to_steady(y0, 2.0, 1.0, 1.0, t_max=20.0)


@given(st.floats(0, 0.45), st.floats(1.0, 3.0), st.floats(1.0, 3.0))
def test_vacuum_at_zero_coupling_is_fixed_point(xi, kL, kR):
    y0 = MomentState.vacuum().to_vector()
    traj, _ = kernels.integrate_moments(y0, 0.0, kL, kR, [0.0, 1.0, 5.0])
    assert np.allclose(traj, y0[None, :], atol=1e-12)
