import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sturmian.baselines import (
    WKB1_QUARTIC,
    OracleConfig,
    conventional_sturmian_order0,
    delta_limit_pair,
    gaussian_asymptotics,
    gaussian_weak_limit,
    oracle_spectrum,
    perturbation_gaussian_ground,
    perturbation_qao,
    quartic_action_constant,
    quartic_action_numeric,
    wkb_quartic_order0,
)
from sturmian.basis import SystemParams
from sturmian.errors import BoundaryLeak, DomainError
from sturmian.potentials import Gaussian, Harmonic, PureQuartic, QuarticAnharmonic
from sturmian.variational import (
    minimize_script_e,
    order0_energy,
    solve_gaussian_ground_order0,
    solve_order0_general,
    solve_qao_order0,
    solve_quartic_order0,
)

UNITS = SystemParams(hbar=1.0, mass=0.5)
QAO = QuarticAnharmonic(2.0, 0.1)


def gaussian_eps_for_r(lam, r, sys=UNITS):
    # r = (lam / p)^2 with p = hbar^2 eps / (4 m)
    return 4.0 * sys.mass * lam / (sys.hbar**2 * math.sqrt(r))


def test_perturbation_qao_examples():
    assert perturbation_qao(UNITS, 2.0, 0.1, 0, 1) == pytest.approx(1.075, abs=1e-12)
    assert perturbation_qao(UNITS, 2.0, 0.1, 4, 0) == pytest.approx(9.0, abs=1e-12)
    assert perturbation_qao(UNITS, 2.0, 0.1, 9, 1) == pytest.approx(32.575, abs=1e-12)
    assert perturbation_qao(UNITS, 2.0, 0.1, 0, 1, eps_power=2) == pytest.approx(1.0075, abs=1e-12)
    assert perturbation_qao(UNITS, 2.0, 0.1, 1, 1, eps_power=2) == pytest.approx(3.0375, abs=1e-12)
    with pytest.raises(DomainError):
        perturbation_qao(UNITS, 2.0, 0.1, 0, 2)
    with pytest.raises(DomainError):
        perturbation_qao(UNITS, 0.0, 0.1, 0, 0)


def test_perturbation_gaussian_examples():
    lam = 1.7
    assert perturbation_gaussian_ground(UNITS, lam, gaussian_eps_for_r(lam, 1.0), 0) == pytest.approx(0.0, abs=1e-15)
    eps16 = gaussian_eps_for_r(lam, 16.0)
    assert perturbation_gaussian_ground(UNITS, lam, eps16, 0) == pytest.approx(-lam / 2, rel=1e-14)
    assert perturbation_gaussian_ground(UNITS, lam, eps16, 1) == pytest.approx(-lam * 1.5**-0.5, rel=1e-14)
    r = 1e8
    rho = r**-0.25
    e1 = perturbation_gaussian_ground(UNITS, 1.0, gaussian_eps_for_r(1.0, r), 1)
    assert abs(e1 + (1 - rho / 2 + 3 * rho**2 / 8 - 5 * rho**3 / 16)) < r**-1
    with pytest.raises(DomainError):
        perturbation_gaussian_ground(UNITS, 1.0, 1.0, 2)


@pytest.mark.parametrize("n", range(5))
def test_csa_harmonic_limit(n):
    assert conventional_sturmian_order0(UNITS, 2.0, n, Harmonic(2.0)) == pytest.approx(2 * (n + 0.5), rel=1e-12)


@pytest.mark.parametrize("n", range(5))
def test_csa_is_self_consistent(n):
    e = conventional_sturmian_order0(UNITS, 2.0, n, QAO)
    assert order0_energy(UNITS, e, n, QAO, 2.0) == pytest.approx(e, rel=1e-11)


def test_csa_values():
    expected = (1.06792, 3.32148, 5.78199, 8.41622, 11.20143)
    got = [conventional_sturmian_order0(UNITS, 2.0, n, QAO) for n in range(5)]
    assert got == pytest.approx(expected, abs=5e-6)


def test_csa_gaussian_shift():
    lam, eps = 3.0, 1.0
    e = conventional_sturmian_order0(UNITS, lam * eps, 0, Gaussian(lam, eps))
    assert -lam < e < 0


def test_wkb_examples():
    assert wkb_quartic_order0(UNITS, 1.0, 0) == pytest.approx(0.87, abs=5e-3)
    assert wkb_quartic_order0(UNITS, 1.0, 2) == pytest.approx(7.4140, abs=5e-4)
    assert wkb_quartic_order0(UNITS, 1.0, 10) == pytest.approx(50.240152, abs=5e-4)
    assert quartic_action_constant() == pytest.approx(1.7480383695, rel=1e-9)
    with pytest.raises(DomainError):
        wkb_quartic_order0(UNITS, 0.0, 1)


@pytest.mark.parametrize("n", [0, 1, 4, 10])
@pytest.mark.parametrize("sys", [UNITS, SystemParams(hbar=1.3, mass=2.0)])
def test_wkb_action_by_quadrature(n, sys):
    eps = 0.7
    e = wkb_quartic_order0(sys, eps, n)
    action = quartic_action_numeric(sys, eps, e)
    assert action == pytest.approx(2 * math.pi * sys.hbar * (n + 0.5), rel=1e-10)


def test_wkb1_constants_are_references():
    assert set(WKB1_QUARTIC) == {0, 2, 4, 6, 8, 10}


def test_gaussian_series_examples():
    r = 1e8
    expected = -(1 - 1e-2 + 3 / 8 * 1e-4 - 1 / 32 * 1e-6 - 1 / 128 * 1e-8)
    assert gaussian_asymptotics(1.0, r, "large_r") == pytest.approx(expected, rel=1e-15)
    small = -0.05 * (1 - 0.01 + 3e-4 - 13e-6 + 68e-8)
    assert gaussian_asymptotics(1.0, 0.01, "small_r") == pytest.approx(small, rel=1e-14)
    with pytest.raises(DomainError):
        gaussian_asymptotics(1.0, 1e4, "middle")
    with pytest.raises(DomainError):
        gaussian_asymptotics(1.0, -1.0, "large_r")


def test_gaussian_series_warns_between_regimes():
    with pytest.warns(RuntimeWarning):
        gaussian_asymptotics(1.0, 1.0, "large_r")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gaussian_asymptotics(1.0, 100.0, "large_r")


@settings(max_examples=60, deadline=None)
@given(st.floats(6.0, 12.0), st.floats(0.1, 10.0))
def test_gaussian_large_r_series_accuracy(log_r, lam):
    r = 10.0**log_r
    e = solve_gaussian_ground_order0(UNITS, lam, gaussian_eps_for_r(lam, r)).energy
    series = gaussian_asymptotics(lam, r, "large_r")
    assert abs(e - series) / abs(series) < 10 * r**-1.25


@settings(max_examples=60, deadline=None)
@given(st.floats(-12.0, -3.0), st.floats(0.1, 10.0))
def test_gaussian_small_r_series_accuracy(log_r, lam):
    r = 10.0**log_r
    e = solve_gaussian_ground_order0(UNITS, lam, gaussian_eps_for_r(lam, r)).energy
    series = gaussian_asymptotics(lam, r, "small_r")
    assert abs(e - series) / abs(series) < 10 * r


def test_gaussian_limits():
    # deep well: E0 -> -lam
    lam = 1.0
    e = solve_gaussian_ground_order0(UNITS, lam, gaussian_eps_for_r(lam, 1e16)).energy
    assert e == pytest.approx(-lam, rel=1e-3)
    # weak coupling: E0 -> -2 m lam^2 / (hbar^2 eps)
    for sys in (UNITS, SystemParams(hbar=0.8, mass=1.7)):
        lam, eps = 1e-5, 1.0
        e = solve_gaussian_ground_order0(sys, lam, eps).energy
        assert e == pytest.approx(gaussian_weak_limit(sys, lam, eps), rel=1e-4)
    # narrow-well limit with fixed lam: E0 -> 0
    assert abs(solve_gaussian_ground_order0(UNITS, 1.0, 1e12).energy) < 1e-5


def test_delta_limit():
    approx, exact = delta_limit_pair(UNITS, 1.0)
    assert approx == pytest.approx(-1 / (2 * math.pi))
    assert exact == pytest.approx(-0.25)
    assert approx / exact == pytest.approx(2 / math.pi, rel=1e-15)
    a, eps = 1.0, 1e8
    lam = a * math.sqrt(eps / (2 * math.pi))
    e = solve_gaussian_ground_order0(UNITS, lam, eps).energy
    assert e == pytest.approx(approx, rel=1e-3)
    assert e / exact == pytest.approx(2 / math.pi, rel=1e-3)
    with pytest.raises(DomainError):
        delta_limit_pair(UNITS, 0.0)


@settings(max_examples=50)
@given(st.floats(0.01, 100.0), st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_delta_ratio_any_inputs(a, hbar, mass):
    approx, exact = delta_limit_pair(SystemParams(hbar=hbar, mass=mass), a)
    assert approx / exact == pytest.approx(2 / math.pi, rel=1e-14)


def test_oracle_harmonic():
    spec = oracle_spectrum(UNITS, Harmonic(2.0), OracleConfig(levels=6))
    assert spec.energies == pytest.approx([2 * (n + 0.5) for n in range(6)], abs=1e-6)
    assert all(err < 1e-4 for err in spec.errors)


def test_oracle_grid_convergence():
    exact = np.array([2 * (n + 0.5) for n in range(6)])
    spec = oracle_spectrum(UNITS, Harmonic(2.0), OracleConfig(x_max=12.0, n_points=801, levels=6))
    coarse = np.abs(np.array(spec.coarse) - exact)
    fine = np.abs(np.array(spec.fine) - exact)
    assert np.all(coarse / fine >= 3.5)
    assert np.all(np.abs(np.array(spec.energies) - exact) < fine)


def test_oracle_reference_values():
    qao = oracle_spectrum(UNITS, QAO, OracleConfig(levels=10))
    assert qao.energies[0] == pytest.approx(1.065286, rel=1e-4)
    quartic = oracle_spectrum(UNITS, PureQuartic(1.0), OracleConfig(levels=17))
    assert quartic.energies[0] == pytest.approx(1.060362, rel=1e-4)


def test_oracle_boundary_leak():
    with pytest.raises(BoundaryLeak):
        oracle_spectrum(UNITS, Harmonic(2.0), OracleConfig(x_max=2.0, n_points=400, levels=3))


def test_oracle_config_validation():
    with pytest.raises(DomainError):
        OracleConfig(n_points=100)
    with pytest.raises(DomainError):
        OracleConfig(levels=0)
    with pytest.raises(DomainError):
        OracleConfig(x_max=-1.0)


def test_variational_upper_bound():
    cases = [
        (QAO, 2.0, [solve_qao_order0(UNITS, 2.0, 0.1, 0, "stationary").energy,
                    solve_qao_order0(UNITS, 2.0, 0.1, 0).energy]),
        (PureQuartic(1.0), 1.0, [solve_quartic_order0(UNITS, 1.0, 0).energy]),
        (Gaussian(1.0, 2.0), 2.0, [solve_gaussian_ground_order0(UNITS, 1.0, 2.0).energy]),
    ]
    for v, k0, energies in cases:
        energies = list(energies)
        energies.append(minimize_script_e(UNITS, k0, (0, 2), v, select="nearest").energies[0])
        energies.append(minimize_script_e(UNITS, k0, (0, 2, 4), v, select="nearest").energies[0])
        spec = oracle_spectrum(UNITS, v, OracleConfig(levels=2))
        for e in energies:
            assert e >= spec.energies[0] - spec.errors[0]


def test_gaussian_ordering():
    lam, eps = 1.0, gaussian_eps_for_r(1.0, 100.0)
    vsa = solve_gaussian_ground_order0(UNITS, lam, eps).energy
    assert perturbation_gaussian_ground(UNITS, lam, eps, 1) < vsa < perturbation_gaussian_ground(UNITS, lam, eps, 0)


def test_qao_ordering():
    exact = oracle_spectrum(UNITS, QAO, OracleConfig(levels=10)).energies
    vsa = [solve_qao_order0(UNITS, 2.0, 0.1, n).energy for n in range(10)]
    assert perturbation_qao(UNITS, 2.0, 0.1, 0, 0) < exact[0] < vsa[0] < perturbation_qao(UNITS, 2.0, 0.1, 0, 1)
    for n in range(10):
        assert perturbation_qao(UNITS, 2.0, 0.1, n, 0) < vsa[n] < perturbation_qao(UNITS, 2.0, 0.1, n, 1)


def test_harmonic_limits_all_methods():
    for n in range(4):
        e = 2 * (n + 0.5)
        assert solve_order0_general(UNITS, 2.0, n, Harmonic(2.0)).energy == pytest.approx(e, rel=1e-12)
        assert perturbation_qao(UNITS, 2.0, 0.0, n, 1) == pytest.approx(e, rel=1e-15)
        assert conventional_sturmian_order0(UNITS, 2.0, n, Harmonic(2.0)) == pytest.approx(e, rel=1e-12)
