import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sturmian.algebra import depressed_positive_root
from sturmian.baselines import gaussian_asymptotics
from sturmian.basis import SystemParams
from sturmian.errors import DomainError, MultipleMinima, NoPositiveMinimum, NoPositiveSolution
from sturmian.potentials import (
    Custom,
    Gaussian,
    GaussianTilde,
    Harmonic,
    PureQuartic,
    QuarticAnharmonic,
)
from sturmian.variational import (
    eta_by_bisection,
    fix_script_e_order0_general,
    gaussian_p_r,
    minimize_all_branches,
    minimize_script_e,
    order0_derivative,
    order0_energy,
    order0_energy_from_elements,
    qao_energy_from_angle,
    quartic_legacy_ground,
    quartic_legacy_ratio,
    solve_gaussian_ground_order0,
    solve_order0_general,
    solve_qao_order0,
    solve_quartic_order0,
)

UNITS = SystemParams(hbar=1.0, mass=0.5)
QAO = QuarticAnharmonic(2.0, 0.1)
QUARTIC = PureQuartic(1.0)
TABLE1 = (1.06692, 3.31182, 5.75052, 8.34985, 11.0881, 13.9499, 16.9235, 19.9998, 23.1715, 26.4322)
TABLE4 = {0: 1.10243, 1: 3.86929, 2: 7.46048, 3: 11.6007, 4: 16.1691, 6: 26.3349, 8: 37.6218, 10: 49.8404, 16: 91.0012}


@pytest.mark.parametrize("n", range(10))
def test_qao_order0_table(n):
    sol = solve_qao_order0(UNITS, 2.0, 0.1, n)
    assert sol.energy == pytest.approx(TABLE1[n], abs=5e-5)
    assert sol.method_tag == "closed_form_cubic"
    assert sol.script_e_star > 0
    assert sol.diagnostics["cubic_residual"] < 1e-12


def test_qao_cubic_root_ground():
    sol = solve_qao_order0(UNITS, 2.0, 0.1, 0)
    params = sol.diagnostics["cubic"]
    assert (params.p, params.q) == pytest.approx((1.0, 0.2))
    e = sol.script_e_star
    assert e**3 - e - 0.2 == pytest.approx(0.0, abs=1e-13)
    grid = np.linspace(1e-6, 10.0, 100001)
    f = grid**3 - grid - 0.2
    assert np.count_nonzero(np.diff(np.sign(f))) == 1


@pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
def test_energy_from_angle(n):
    sol = solve_qao_order0(UNITS, 2.0, 0.1, n)
    cos_third = sol.diagnostics["cubic"].cos_phi_third
    assert qao_energy_from_angle(UNITS, 2.0, 0.1, n, cos_third) == pytest.approx(sol.energy, rel=1e-12)


@pytest.mark.parametrize("n", range(6))
def test_qao_harmonic_limit(n):
    sol = solve_qao_order0(UNITS, 2.0, 1e-10, n)
    assert sol.energy == pytest.approx(2.0 * (n + 0.5), rel=1e-6)


@pytest.mark.parametrize("n", sorted(TABLE4))
def test_quartic_order0_table(n):
    assert solve_quartic_order0(UNITS, 1.0, n).energy == pytest.approx(TABLE4[n], abs=5e-5)


def test_quartic_ground_closed_form():
    e0 = solve_quartic_order0(UNITS, 1.0, 0).energy
    assert e0 == pytest.approx(0.875 * 2 ** (1 / 3), rel=1e-14)
    assert quartic_legacy_ground(UNITS, 1.0) == pytest.approx(e0, rel=1e-14)


@pytest.mark.parametrize("n", range(12))
def test_quartic_legacy_ratio(n):
    e0 = quartic_legacy_ground(UNITS, 1.0)
    assert solve_quartic_order0(UNITS, 1.0, n).energy == pytest.approx(quartic_legacy_ratio(n) * e0, rel=1e-12)


def test_order0_domain_errors():
    with pytest.raises(DomainError):
        solve_qao_order0(UNITS, 0.0, 0.1, 0)
    with pytest.raises(DomainError):
        solve_qao_order0(UNITS, 2.0, 0.0, 0)
    with pytest.raises(DomainError):
        solve_quartic_order0(UNITS, -1.0, 0)
    with pytest.raises(DomainError):
        solve_qao_order0(UNITS, 2.0, 0.1, -1)
    with pytest.raises(DomainError):
        solve_gaussian_ground_order0(UNITS, 0.0, 1.0)


@settings(max_examples=1000, deadline=None)
@given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
def test_positive_cubic_root_unique(p, q):
    x, _ = depressed_positive_root(p, q)
    assert x > 0
    assert abs(x**3 - p * x - q) <= 1e-11 * max(x**3, p * x, q)
    roots = np.roots([1.0, 0.0, -p, -q])
    positive = [r for r in roots if abs(r.imag) <= 1e-9 * abs(r) and r.real > 1e-9 * x]
    assert len(positive) == 1


@pytest.mark.parametrize("n", [0, 1, 2, 3, 6])
def test_stationary_convention_matches_self_consistent(n):
    sol = solve_qao_order0(UNITS, 2.0, 0.1, n, convention="stationary")
    e = fix_script_e_order0_general(UNITS, 2.0, n, QAO)
    assert e == pytest.approx(sol.script_e_star, rel=1e-10)
    assert abs(order0_derivative(UNITS, e, n, QAO, 2.0)) < 1e-10
    quartic = solve_quartic_order0(UNITS, 1.0, n, convention="stationary")
    assert fix_script_e_order0_general(UNITS, 1.0, n, QUARTIC) == pytest.approx(quartic.script_e_star, rel=1e-10)


def test_legacy_convention_not_stationary():
    sol = solve_qao_order0(UNITS, 2.0, 0.1, 0)
    d = order0_derivative(UNITS, sol.script_e_star, 0, QAO, 2.0)
    assert 1e-3 < abs(d) < 0.1
    stationary = solve_qao_order0(UNITS, 2.0, 0.1, 0, convention="stationary")
    assert stationary.energy < sol.energy


@pytest.mark.parametrize("n", range(5))
def test_harmonic_self_consistent(n):
    for k in (0.5, 2.0, 7.0):
        e = fix_script_e_order0_general(UNITS, k, n, Harmonic(k))
        assert e == pytest.approx(math.sqrt(k / 0.5) * (n + 0.5), rel=1e-10)


def test_analytic_derivative_matches_difference():
    for e in (0.7, 1.3, 4.0):
        h = 1e-6 * e
        fd = (order0_energy(UNITS, e + h, 1, QAO, 2.0) - order0_energy(UNITS, e - h, 1, QAO, 2.0)) / (2 * h)
        assert order0_derivative(UNITS, e, 1, QAO, 2.0) == pytest.approx(fd, rel=1e-7)


@pytest.mark.parametrize(
    "v,k0,n",
    [(v, k0, n) for v, k0 in ((QAO, 2.0), (QUARTIC, 1.0)) for n in (0, 1, 2, 4)]
    + [(GaussianTilde(1.0, 2.0), 2.0, 0), (GaussianTilde(8.0, 1.0), 8.0, 1)],
)
def test_energy_from_elements_at_stationary_point(v, k0, n):
    e = fix_script_e_order0_general(UNITS, k0, n, v)
    assert order0_energy_from_elements(UNITS, e, n, v, k0) == pytest.approx(
        order0_energy(UNITS, e, n, v, k0), rel=1e-10, abs=1e-12
    )


def test_gaussian_example():
    sol = solve_gaussian_ground_order0(UNITS, 1.0, 2.0)
    d = sol.diagnostics
    assert (d["p"], d["r"]) == (1.0, 1.0)
    assert d["eta"] == pytest.approx(1.380278, abs=1e-6)
    assert sol.energy == pytest.approx(-0.334749, abs=1e-6)
    assert not d["bisection_fallback"]
    assert sol.method_tag == "closed_form_quartic_eta"


def test_gaussian_matches_self_consistent_tilde():
    for lam, eps in [(1.0, 2.0), (3.0, 0.5), (0.2, 4.0)]:
        sol = solve_gaussian_ground_order0(UNITS, lam, eps)
        tilde = GaussianTilde(lam, eps)
        e = fix_script_e_order0_general(UNITS, lam * eps, 0, tilde)
        p = sol.diagnostics["p"]
        assert e == pytest.approx(p * (sol.diagnostics["eta"] - 1.0), rel=1e-10)
        assert order0_energy(UNITS, e, 0, tilde, lam * eps) - lam == pytest.approx(sol.energy, rel=1e-10)
        shifted = solve_order0_general(UNITS, lam * eps, 0, Gaussian(lam, eps))
        assert shifted.energy == pytest.approx(sol.energy, rel=1e-10)


@settings(max_examples=300, deadline=None)
@given(st.floats(-8.0, 8.0))
def test_eta_closed_form_vs_bisection(log_r):
    r = 10.0**log_r
    lam = 1.0
    eps = 4.0 * 0.5 * lam / math.sqrt(r)
    sol = solve_gaussian_ground_order0(UNITS, lam, eps)
    assert sol.diagnostics["r"] == pytest.approx(r, rel=1e-12)
    eta = sol.diagnostics["eta"]
    assert eta > 1.0
    assert eta == pytest.approx(eta_by_bisection(sol.diagnostics["r"]), rel=1e-11)
    assert not sol.diagnostics["bisection_fallback"]


def test_eta_small_r_limit():
    etas = [solve_gaussian_ground_order0(UNITS, 1.0, 2.0 / math.sqrt(r)).diagnostics["eta"] for r in (1e-2, 1e-5, 1e-8)]
    assert etas[0] > etas[1] > etas[2] > 1.0
    assert etas[2] - 1.0 < 2e-8


def test_gaussian_large_r_series():
    r = 1e8
    lam = 1.0
    eps = 2.0 / math.sqrt(r)
    sol = solve_gaussian_ground_order0(UNITS, lam, eps)
    assert gaussian_p_r(UNITS, lam, eps)[1] == pytest.approx(r)
    series = gaussian_asymptotics(lam, r, "large_r")
    assert abs(sol.energy - series) / abs(series) < 10 * r**-1.25


def test_k0_invariance():
    for k0 in (0.3, 1.0, 5.0):
        assert fix_script_e_order0_general(UNITS, k0, 2, QUARTIC) == pytest.approx(
            fix_script_e_order0_general(UNITS, 1.0, 2, QUARTIC), rel=1e-10
        )
    a = minimize_all_branches(UNITS, 1.0, (0, 2), QUARTIC, select="nearest")
    b = minimize_all_branches(UNITS, 3.0, (0, 2), QUARTIC, select="nearest")
    for n in (0, 2):
        assert a[n].energies[n] == pytest.approx(b[n].energies[n], rel=1e-9)


@pytest.mark.parametrize(
    "v,indices,expected",
    [
        (QAO, (0, 2), {0: 1.06614, 2: 5.76117}),
        (QAO, (1, 3), {1: 3.30922, 3: 8.37284}),
        (QUARTIC, (0, 2), {0: 1.08110, 2: 7.60884}),
        (QUARTIC, (0, 2, 4), {2: 7.56528, 4: 16.5670}),
    ],
)
def test_numeric_minima_examples(v, indices, expected):
    sols = minimize_all_branches(UNITS, 2.0 if v is QAO else 1.0, indices, v, select="nearest")
    for n, value in expected.items():
        sol = sols[n]
        assert sol.energies[n] == pytest.approx(value, abs=5e-5)
        assert sol.method_tag == "numeric_minimize"
        assert sol.order == len(indices) - 1
        chosen = sol.diagnostics["chosen"]
        energy = sol.energies[n]
        assert abs(chosen["derivative"]) < 1e-7 * abs(energy)
        assert chosen["second_difference"] > 0
        assert sol.diagnostics["residual_ok"]
        assert sol.script_e_star > 0


def test_order1_ground_below_order0():
    sol = minimize_script_e(UNITS, 2.0, (0, 2), QAO, branch=0)
    assert sol.energies[0] < solve_qao_order0(UNITS, 2.0, 0.1, 0, convention="stationary").energy


def test_branch_assignment():
    sol = minimize_script_e(UNITS, 2.0, (3, 1), QAO, branch=1)
    assert sol.indices == (1, 3)
    assert list(sol.energies) == [3]


def test_opposite_parity_pair_collapses_to_order0():
    sols = minimize_all_branches(UNITS, 2.0, (0, 1), QAO)
    for n in (0, 1):
        ref = solve_order0_general(UNITS, 2.0, n, QAO)
        assert sols[n].energies[n] == pytest.approx(ref.energy, rel=1e-8)


def test_no_positive_minimum_for_flat_potential():
    flat = Custom(lambda x: 0.0 * x, parity="even", degree=0)
    with pytest.raises(NoPositiveMinimum):
        minimize_script_e(UNITS, 1.0, (0, 2), flat)
    with pytest.raises(NoPositiveSolution):
        fix_script_e_order0_general(UNITS, 1.0, 0, flat)


def test_multiple_minima_surface():
    double_well = Custom(lambda x: -x**2 + 0.05 * x**4, parity="even", degree=4)
    with pytest.raises(MultipleMinima) as info:
        minimize_script_e(UNITS, 2.0, (0, 2), double_well, branch=0)
    assert len(info.value.candidates) == 2
    barrier = Custom(lambda x: x**2 + 20.0 * np.exp(-x * x), parity="even")
    with pytest.raises(MultipleMinima):
        minimize_script_e(UNITS, 2.0, (0, 2), barrier, branch=0)
    lowest = minimize_script_e(UNITS, 2.0, (0, 2), double_well, branch=0, select="lowest")
    energies = [c["energy"] for c in lowest.diagnostics["candidates"]]
    assert lowest.energies[0] == pytest.approx(min(energies))


def test_bad_arguments():
    with pytest.raises(DomainError):
        minimize_script_e(UNITS, 2.0, (0,), QAO)
    with pytest.raises(DomainError):
        minimize_script_e(UNITS, 2.0, (0, 2), QAO, branch=2)
    with pytest.raises(DomainError):
        minimize_script_e(UNITS, 2.0, (0, 2), QAO, order=2)
