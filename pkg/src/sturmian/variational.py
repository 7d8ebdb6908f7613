"""Fixing script_e by stationarity of E(script_e).

Order 0 has closed forms for the quartic anharmonic oscillator, the pure
quartic and the Gaussian ground state, plus a self-consistent solver for any
potential.  Orders 1 and 2 are minimised numerically, one secular root
(branch) at a time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .algebra import bisect, depressed_positive_root, gaussian_eta_star
from .basis import QUAD_RTOL, level_element, make_slice, x2_element, x4_element
from .errors import (
    ComplexRootError,
    DegenerateOverlapError,
    DomainError,
    MultipleMinima,
    NoPositiveMinimum,
    NoPositiveSolution,
    QuadratureError,
    SingularOverlapError,
)
from .secular import build_system, residual_ok, solve

CONVENTIONS = ("legacy", "stationary")
SCAN_POINTS = 400
SCAN_SPAN = (1e-3, 1e3)
FD_STEP = 1e-6
SECOND_DIFF_STEP = 1e-3
GOLDEN_RTOL = 1e-10
ETA_GUARD = 1e-9


@dataclass(frozen=True)
class CubicParams:
    """``script_e^3 - p script_e - q = 0`` with ``r = 4 p^3 / (27 q^2)``."""

    p: float
    q: float
    r: float
    cos_phi_third: float


@dataclass(frozen=True)
class EnergySolution:
    order: int
    indices: tuple
    script_e_star: float
    energies: dict
    coefficients: dict
    method_tag: str
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def energy(self):
        """The single energy when the solution holds one level."""
        if len(self.energies) != 1:
            raise ValueError("solution holds several levels")
        return next(iter(self.energies.values()))


def _check_level(n):
    if n < 0 or int(n) != n:
        raise DomainError("level must be a nonnegative integer")
    return int(n)


def _quartic_poly(n, convention):
    if convention == "legacy":
        return 11 * n * n + 9 * n + 4
    if convention == "stationary":
        return 6 * (2 * n * n + 2 * n + 1)
    raise DomainError(f"convention must be one of {CONVENTIONS}")


def order0_energy(sys, script_e, n, v, k0=1.0):
    """``E = <n|V|n> + script_e / 2`` for the Sturmian ``n`` at ``script_e``."""
    s = make_slice(sys, k0, n, script_e)
    return level_element(s, n, v) + 0.5 * script_e


def order0_rhs(sys, script_e, n, v, k0=1.0):
    """Right-hand side of the order-0 stationarity condition ``script_e = F``."""
    s = make_slice(sys, k0, n, script_e)
    up = math.sqrt((n + 1) * (n + 2)) * level_element(s, n + 2, v)
    down = math.sqrt(n * (n - 1)) * level_element(s, n - 2, v) if n >= 2 else 0.0
    return up - down


def order0_derivative(sys, script_e, n, v, k0=1.0):
    """Analytic ``dE/d script_e`` at order 0."""
    return 0.5 - order0_rhs(sys, script_e, n, v, k0) / (2.0 * script_e)


def order0_energy_from_elements(sys, script_e, n, v, k0=1.0):
    """Energy written through the three level elements; valid at a stationary point."""
    s = make_slice(sys, k0, n, script_e)
    return level_element(s, n, v) + 0.5 * order0_rhs(sys, script_e, n, v, k0)


def qao_cubic_params(sys, k, eps, n, convention="legacy"):
    if not k > 0:
        raise DomainError("k must be positive (use solve_quartic_order0 for k = 0)")
    if not eps > 0:
        raise DomainError("eps must be positive (use the harmonic closed form for eps = 0)")
    n = _check_level(n)
    h2m = sys.hbar**2 / sys.mass
    p = h2m * k * (n + 0.5) ** 2
    q = 0.5 * h2m * h2m * eps * (n + 0.5) ** 2 * _quartic_poly(n, convention)
    _, cos_third = depressed_positive_root(p, q)
    return CubicParams(p, q, 4.0 * p**3 / (27.0 * q * q), cos_third)


def qao_energy_from_angle(sys, k, eps, n, cos_third):
    """Energy as a function of ``cos(phi/3)``, with ``tan^2 = 1/cos^2 - 1``."""
    h, m = sys.hbar, sys.mass
    tan2 = 1.0 / cos_third**2 - 1.0
    first = (h / 24.0) * math.sqrt(3.0 * k / m) * (2 * n + 1) * (7.0 + 3.0 * tan2) * cos_third
    second = (9.0 * h * h * eps / (16.0 * m * k)) * (2 * n * n + 2 * n + 1) * (1.0 + tan2)
    return first + second


def _poly_level_energy(sys, k, eps, n, script_e):
    s = make_slice(sys, 1.0, n, script_e)
    w = 0.5 * k * x2_element(s, n) + eps * x4_element(s, n)
    return w + 0.5 * script_e, s.alpha


def solve_qao_order0(sys, k, eps, n, convention="legacy"):
    """Order-0 level of ``V = (k/2) x^2 + eps x^4`` in closed form.

    ``convention="legacy"`` uses the cubic whose constant term carries the
    polynomial ``11 n^2 + 9 n + 4``; it reproduces the reference order-0
    table.  ``convention="stationary"`` uses ``6 (2 n^2 + 2 n + 1)``, the
    value that makes ``dE/d script_e`` vanish exactly.
    """
    n = _check_level(n)
    params = qao_cubic_params(sys, k, eps, n, convention)
    script_e, _ = depressed_positive_root(params.p, params.q)
    residual = abs(script_e**3 - params.p * script_e - params.q) / params.q
    energy, alpha = _poly_level_energy(sys, k, eps, n, script_e)
    return EnergySolution(
        order=0,
        indices=(n,),
        script_e_star=script_e,
        energies={n: energy},
        coefficients={n: (1.0,)},
        method_tag="closed_form_cubic",
        diagnostics={
            "cubic": params,
            "alpha": alpha,
            "cubic_residual": residual,
            "convention": convention,
        },
    )


def quartic_legacy_ratio(n):
    """Legacy ``E_n / E_0`` for the pure quartic at order 0."""
    return ((8 * n + 4) / (11 * n * n + 9 * n + 4)) ** (2.0 / 3.0) * (
        17.0 * n * n / 7.0 + 15.0 * n / 7.0 + 1.0
    )


def quartic_legacy_ground(sys, eps):
    """``E_0 = (7 hbar / 8) (hbar eps / (2 m^2))^(1/3)``."""
    h, m = sys.hbar, sys.mass
    return 0.875 * h * (h * eps / (2.0 * m * m)) ** (1.0 / 3.0)


def solve_quartic_order0(sys, eps, n, convention="legacy"):
    """Order-0 level of ``V = eps x^4``: ``script_e = q_n^(1/3)``."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    n = _check_level(n)
    h2m = sys.hbar**2 / sys.mass
    q = 0.5 * h2m * h2m * eps * (n + 0.5) ** 2 * _quartic_poly(n, convention)
    script_e = q ** (1.0 / 3.0)
    energy, alpha = _poly_level_energy(sys, 0.0, eps, n, script_e)
    return EnergySolution(
        order=0,
        indices=(n,),
        script_e_star=script_e,
        energies={n: energy},
        coefficients={n: (1.0,)},
        method_tag="closed_form_cubic",
        diagnostics={"q": q, "alpha": alpha, "convention": convention},
    )


def gaussian_p_r(sys, lam, eps):
    if not (lam > 0 and eps > 0):
        raise DomainError("lambda and eps must be positive")
    p = sys.hbar**2 * eps / (4.0 * sys.mass)
    return p, (lam / p) ** 2


def eta_by_bisection(r):
    f = lambda eta: eta**3 * (eta - 1.0) - r
    return bisect(f, 1.0, 2.0 + r**0.25)


def solve_gaussian_ground_order0(sys, lam, eps):
    """Order-0 ground state of ``V = -lam exp(-eps x^2 / 2)``.

    ``eta`` is the root above 1 of ``eta^4 - eta^3 = r``; then
    ``script_e = p (eta - 1)`` and the energy includes the ``-lam`` shift.
    """
    p, r = gaussian_p_r(sys, lam, eps)
    eta = gaussian_eta_star(r)
    eta_check = eta_by_bisection(r)
    used_fallback = abs(eta - eta_check) > ETA_GUARD * eta_check
    if used_fallback:
        eta = eta_check
    script_e = p * r / eta**3
    # 1 - 1/eta = r / eta^4 exactly; avoids rounding below zero as r -> 0
    w_tilde = lam / (eta * (1.0 + math.sqrt(r) / (eta * eta)))
    energy = -lam * math.sqrt(r) * (2.0 * eta - 1.0) / (2.0 * eta**3)
    return EnergySolution(
        order=0,
        indices=(0,),
        script_e_star=script_e,
        energies={0: energy},
        coefficients={0: (1.0,)},
        method_tag="closed_form_quartic_eta",
        diagnostics={
            "p": p,
            "r": r,
            "eta": eta,
            "eta_bisection": eta_check,
            "w_tilde": w_tilde,
            "bisection_fallback": used_fallback,
        },
    )


def default_scale(sys, k0, n):
    return sys.hbar * math.sqrt(k0 / sys.mass) * (n + 0.5)


def fix_script_e_order0_general(sys, k0, n, v, rtol=1e-12, damping=0.5, max_iter=200):
    """Solve ``script_e = F(script_e)`` for order 0 with any potential."""
    n = _check_level(n)
    scale = default_scale(sys, k0, n)
    x = scale
    history = []
    for _ in range(max_iter):
        try:
            fx = order0_rhs(sys, x, n, v, k0)
        except DomainError:
            break
        nxt = (1.0 - damping) * x + damping * fx
        history.append(nxt)
        if not (nxt > 0 and math.isfinite(nxt)):
            break
        if abs(nxt - x) <= rtol * nxt:
            return nxt
        x = nxt
    g = lambda e: e - order0_rhs(sys, e, n, v, k0)
    grid = np.geomspace(1e-6, 1e6, 241) * scale
    prev_e, prev_g = None, None
    for e in grid:
        ge = g(e)
        if prev_g is not None and math.isfinite(ge) and (prev_g > 0) != (ge > 0):
            return brentq(g, prev_e, e, xtol=1e-300, rtol=4 * np.finfo(float).eps)
        prev_e, prev_g = e, ge
    raise NoPositiveSolution(
        f"no positive solution of the order-0 condition for level {n} "
        f"within {grid[-1]:.3g}"
    )


def solve_order0_general(sys, k0, n, v):
    script_e = fix_script_e_order0_general(sys, k0, n, v)
    energy = order0_energy(sys, script_e, n, v, k0)
    return EnergySolution(
        order=0,
        indices=(n,),
        script_e_star=script_e,
        energies={n: energy},
        coefficients={n: (1.0,)},
        method_tag="self_consistent_order0",
        diagnostics={"derivative": order0_derivative(sys, script_e, n, v, k0)},
    )


def _roots(sys, k0, indices, v, script_e, quad_rtol=QUAD_RTOL):
    try:
        return solve(build_system(sys, k0, indices, script_e, v, quad_rtol)).roots
    except (ComplexRootError, DegenerateOverlapError, SingularOverlapError, QuadratureError):
        # a gap in the scan; the final solve at script_e* re-raises
        return (math.nan,) * len(indices)


def golden_section(f, a, b, rtol=GOLDEN_RTOL, max_iter=200):
    """Minimise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x), iterations)``."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > rtol * 0.5 * (a + b) and it < max_iter:
        it += 1
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x), it


def scan_script_e(sys, k0, indices, v, points=SCAN_POINTS, span=SCAN_SPAN, quad_rtol=QUAD_RTOL):
    """Secular roots on the logarithmic scan grid; rows follow the grid."""
    idx = tuple(sorted(indices))
    scale = default_scale(sys, k0, idx[-1])
    grid = np.geomspace(span[0], span[1], points) * scale
    values = np.array([_roots(sys, k0, idx, v, e, quad_rtol) for e in grid])
    return grid, values


def _bracket_minima(grid, values):
    out = []
    for i in range(1, len(grid) - 1):
        lo, mid, hi = values[i - 1], values[i], values[i + 1]
        if not (np.isfinite(lo) and np.isfinite(mid) and np.isfinite(hi)):
            continue
        tiny = 1e-13 * (abs(mid) + 1.0)
        # backward slope negative, forward slope nonnegative
        if lo - mid > tiny and hi - mid >= -tiny and hi >= mid:
            out.append((grid[i - 1], grid[i + 1]))
    return out


def _refine(sys, k0, idx, v, branch, bracket, rtol, quad_rtol):
    f = lambda e: _roots(sys, k0, idx, v, e, quad_rtol)[branch]
    x, fx, iterations = golden_section(f, *bracket, rtol=rtol)
    h = FD_STEP * x
    derivative = (f(x + h) - f(x - h)) / (2.0 * h)
    h2 = SECOND_DIFF_STEP * x
    second = f(x + h2) - 2.0 * fx + f(x - h2)
    return {
        "script_e": x,
        "energy": fx,
        "bracket": tuple(float(b) for b in bracket),
        "iterations": iterations,
        "derivative": derivative,
        "second_difference": second,
    }


def _select(candidates, select, sys, k0, level, v):
    if len(candidates) == 1:
        return candidates[0], None
    if select == "unique":
        raise MultipleMinima(
            f"{len(candidates)} local minima for level {level}: "
            + ", ".join(f"E={c['energy']:.8g} at script_e={c['script_e']:.6g}" for c in candidates),
            candidates,
        )
    if select == "lowest":
        return min(candidates, key=lambda c: c["energy"]), None
    if select == "nearest":
        ref = fix_script_e_order0_general(sys, k0, level, v)
        best = min(candidates, key=lambda c: abs(math.log(c["script_e"] / ref)))
        return best, ref
    raise DomainError("select must be 'unique', 'nearest' or 'lowest'")


def _minimize_from_scan(sys, k0, idx, v, branch, select, grid, values, rtol, quad_rtol):
    level = idx[branch]
    brackets = _bracket_minima(grid, values[:, branch])
    if not brackets:
        raise NoPositiveMinimum(
            f"E(script_e) for level {level} of {set(idx)} has no interior minimum "
            f"on [{grid[0]:.3g}, {grid[-1]:.3g}]"
        )
    candidates = [_refine(sys, k0, idx, v, branch, b, rtol, quad_rtol) for b in brackets]
    chosen, ref = _select(candidates, select, sys, k0, level, v)
    script_e = chosen["script_e"]
    system = build_system(sys, k0, idx, script_e, v, quad_rtol)
    cand = solve(system)
    return EnergySolution(
        order=len(idx) - 1,
        indices=idx,
        script_e_star=script_e,
        energies={level: cand.roots[branch]},
        coefficients={level: cand.coefficients[branch]},
        method_tag="numeric_minimize",
        diagnostics={
            "branch": branch,
            "candidates": candidates,
            "chosen": chosen,
            "reference_script_e": ref,
            "residual": cand.residuals[branch],
            "residual_ok": residual_ok(system, cand),
            "select": select,
        },
    )


def _prepare(indices, order):
    idx = tuple(sorted(int(i) for i in indices))
    if order is None:
        order = len(idx) - 1
    if order not in (1, 2) or len(idx) != order + 1:
        raise DomainError("numeric minimisation needs order 1 or 2 with matching indices")
    return idx


def minimize_script_e(
    sys, k0, indices, v, order=None, branch=0, select="unique", rtol=GOLDEN_RTOL, quad_rtol=QUAD_RTOL
):
    """Minimise one secular root over script_e.

    ``branch`` is the position of the root in ascending order (0 is ``E_-``),
    which is assigned to ``sorted(indices)[branch]``.
    """
    idx = _prepare(indices, order)
    if not 0 <= branch < len(idx):
        raise DomainError("branch out of range")
    grid, values = scan_script_e(sys, k0, idx, v, quad_rtol=quad_rtol)
    return _minimize_from_scan(sys, k0, idx, v, branch, select, grid, values, rtol, quad_rtol)


def minimize_all_branches(
    sys, k0, indices, v, order=None, select="unique", rtol=GOLDEN_RTOL, quad_rtol=QUAD_RTOL
):
    """Every branch of an index set from one shared scan; keyed by level."""
    idx = _prepare(indices, order)
    grid, values = scan_script_e(sys, k0, idx, v, quad_rtol=quad_rtol)
    return {
        idx[b]: _minimize_from_scan(sys, k0, idx, v, b, select, grid, values, rtol, quad_rtol)
        for b in range(len(idx))
    }
