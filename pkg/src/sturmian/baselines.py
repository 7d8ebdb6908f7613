"""Reference methods: perturbation theory, conventional Sturmians, WKB,
Gaussian asymptotics, the delta-function limit and a finite-difference
eigensolver used as an independent oracle."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq
from scipy.special import beta as beta_fn

from .errors import BoundaryLeak, DomainError, NoFixedPoint, UnsupportedPotential
from .potentials import natural_v0
from .variational import default_scale, gaussian_p_r, order0_energy

# First-order WKB reference values for p^2 + x^4 (hbar = 1, m = 1/2); stored, not computed.
WKB1_QUARTIC = {0: 0.98, 2: 7.4558, 4: 16.261937, 6: 26.528513, 8: 37.923021, 10: 50.256266}


def perturbation_qao(sys, k, eps, n, order, eps_power=1):
    """Zero- or first-order perturbation theory for ``(k/2) x^2 + eps x^4``.

    The first-order shift is ``3 hbar^2 eps (2n^2+2n+1) / (4 m k)``;
    ``eps_power=2`` squares ``eps`` in that shift instead.
    """
    if not k > 0:
        raise DomainError("k must be positive")
    if order not in (0, 1):
        raise DomainError("order must be 0 or 1")
    if eps_power not in (1, 2):
        raise DomainError("eps_power must be 1 or 2")
    h, m = sys.hbar, sys.mass
    e0 = h * math.sqrt(k / m) * (n + 0.5)
    if order == 0:
        return e0
    return e0 + 3.0 * h * h * eps**eps_power * (2 * n * n + 2 * n + 1) / (4.0 * m * k)


def perturbation_gaussian_ground(sys, lam, eps, order):
    _, r = gaussian_p_r(sys, lam, eps)
    rho = r**-0.25
    if order == 0:
        return -lam * (1.0 - rho)
    if order == 1:
        return -lam / math.sqrt(1.0 + rho)
    raise DomainError("order must be 0 or 1")


def conventional_sturmian_order0(sys, k0, n, v, shift=None, damping=0.5, rtol=1e-12, max_iter=500):
    """Order-0 energy with the self-consistent choice ``script_e = E``.

    With ``E = W + script_e/2`` this is the fixed point ``script_e = 2 W``.
    ``W`` is taken for ``V - shift`` (default: the shift paired with ``V0``)
    and the shift is added back to the energy.
    """
    if shift is None:
        try:
            shift = natural_v0(v)[1]
        except UnsupportedPotential:
            shift = 0.0
    w = lambda e: order0_energy(sys, e, n, v, k0) - 0.5 * e - shift
    scale = default_scale(sys, k0, n)
    x = scale
    for _ in range(max_iter):
        nxt = (1.0 - damping) * x + damping * 2.0 * w(x)
        if not (nxt > 0 and math.isfinite(nxt)):
            break
        if abs(nxt - x) <= rtol * nxt:
            return nxt + shift
        x = nxt
    g = lambda e: e - 2.0 * w(e)
    grid = np.geomspace(1e-6, 1e6, 241) * scale
    prev = None
    for e in grid:
        ge = g(e)
        if prev is not None and (prev[1] > 0) != (ge > 0):
            root = brentq(g, prev[0], e, xtol=1e-300, rtol=4 * np.finfo(float).eps)
            return root + shift
        prev = (e, ge)
    raise NoFixedPoint(f"no positive fixed point script_e = 2W for level {n}")


def quartic_action_constant():
    """``2 * int_0^1 sqrt(1 - u^4) du``."""
    return 0.5 * beta_fn(0.25, 1.5)


def wkb_quartic_order0(sys, eps, n):
    """Leading-order WKB level of ``p^2/2m + eps x^4``.

    The action ``oint p dx = 2 sqrt(2m) C E^(3/4) eps^(-1/4)`` is set equal
    to ``2 pi hbar (n + 1/2)``.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    c = quartic_action_constant()
    rhs = math.pi * sys.hbar * (n + 0.5) * eps**0.25 / (math.sqrt(2.0 * sys.mass) * c)
    return float(rhs ** (4.0 / 3.0))


def quartic_action_numeric(sys, eps, energy):
    """``oint p dx`` for ``p^2/2m + eps x^4`` by adaptive quadrature."""
    a = (energy / eps) ** 0.25
    f = lambda x: math.sqrt(max(2.0 * sys.mass * (energy - eps * x**4), 0.0))
    val, _ = quad(f, 0.0, a, epsabs=0.0, epsrel=1e-13, limit=200)
    return 4.0 * val


LARGE_R = (1.0, -1.0, 3.0 / 8.0, -1.0 / 32.0, -1.0 / 128.0)
SMALL_R = (1.0, -1.0, 3.0, -13.0, 68.0)


def gaussian_asymptotics(lam, r, regime):
    """Truncated ground-energy series for the Gaussian well.

    ``large_r``: ``-lam sum c_j r^(-j/4)``, j = 0..4.
    ``small_r``: ``-(lam sqrt(r)/2) sum c_j r^j``, j = 0..4.
    """
    if not r > 0:
        raise DomainError("r must be positive")
    if 0.1 <= r <= 10.0:
        warnings.warn(f"r = {r:g} lies between the asymptotic regimes", RuntimeWarning, stacklevel=2)
    if regime == "large_r":
        rho = r**-0.25
        return -lam * sum(c * rho**j for j, c in enumerate(LARGE_R))
    if regime == "small_r":
        return -0.5 * lam * math.sqrt(r) * sum(c * r**j for j, c in enumerate(SMALL_R))
    raise DomainError("regime must be 'large_r' or 'small_r'")


def gaussian_weak_limit(sys, lam, eps):
    """Leading small-``r`` behaviour ``-2 m lam^2 / (hbar^2 eps)``."""
    return -2.0 * sys.mass * lam**2 / (sys.hbar**2 * eps)


def delta_limit_pair(sys, a):
    """(order-0 Sturmian, exact) ground energies of ``-a delta(x)``."""
    if not a > 0:
        raise DomainError("a must be positive")
    base = sys.mass * a * a / sys.hbar**2
    return -base / math.pi, -0.5 * base


@dataclass(frozen=True)
class OracleConfig:
    x_max: float | None = None
    n_points: int = 4001
    levels: int = 10

    def __post_init__(self):
        if self.n_points < 200:
            raise DomainError("n_points must be at least 200")
        if self.levels < 1:
            raise DomainError("levels must be positive")
        if self.x_max is not None and not self.x_max > 0:
            raise DomainError("x_max must be positive")


@dataclass(frozen=True)
class OracleSpectrum:
    energies: tuple
    errors: tuple
    coarse: tuple
    fine: tuple
    x_max: float
    n_points: int


def _fd_levels(sys, v, x_max, n_points, levels, vectors=False):
    h = 2.0 * x_max / (n_points + 1)
    x = -x_max + h * np.arange(1, n_points + 1)
    kin = sys.hbar**2 / (2.0 * sys.mass * h * h)
    diag = 2.0 * kin + np.asarray(v(x), dtype=float)
    off = np.full(n_points - 1, -kin)
    sel = (0, min(levels, n_points) - 1)
    if vectors:
        w, vec = eigh_tridiagonal(diag, off, select="i", select_range=sel)
        return w, vec / math.sqrt(h)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=sel), None


def _outer_turning_point(v, energy, start):
    """Largest ``x > 0`` with ``V(x) <= energy``, located on a grid."""
    reach = start
    for _ in range(60):
        x = np.linspace(0.0, reach, 4001)[1:]
        inside = np.flatnonzero(np.asarray(v(x), dtype=float) <= energy)
        if inside.size == 0:
            return x[0]
        if inside[-1] < x.size - 1:
            return float(x[inside[-1] + 1])
        reach *= 2.0
    return float(reach)


def default_x_max(sys, v, levels, probe=None):
    """Box half-width from the turning point of the highest requested level."""
    if probe is None:
        try:
            k0 = natural_v0(v)[0]
        except UnsupportedPotential:
            k0 = 1.0
        probe = 12.0 * (sys.hbar**2 / (sys.mass * k0)) ** 0.25 * math.sqrt(levels + 1)
    e_top = _fd_levels(sys, v, probe, 801, levels)[0][-1]
    tp = _outer_turning_point(v, e_top, probe)
    far = float(v(np.array([3.0 * max(tp, 1e-12)]))[0])
    gap = max(far - e_top, 1e-300)
    decay = sys.hbar / math.sqrt(2.0 * sys.mass * gap)
    return max(6.0 * tp, tp + 25.0 * decay)


def oracle_spectrum(sys, v, cfg=None):
    """Lowest ``cfg.levels`` eigenvalues of ``-(hbar^2/2m) d^2/dx^2 + V``.

    Three-point differences with Dirichlet walls at ``+-x_max`` on two grids
    (spacing ``h`` and ``h/2``), combined by Richardson extrapolation.  The
    reported error is the distance between the extrapolated and fine values.
    """
    cfg = cfg or OracleConfig()
    x_max = cfg.x_max if cfg.x_max is not None else default_x_max(sys, v, cfg.levels)
    coarse, _ = _fd_levels(sys, v, x_max, cfg.n_points, cfg.levels)
    fine, vecs = _fd_levels(sys, v, x_max, 2 * cfg.n_points + 1, cfg.levels, vectors=True)
    edge = np.maximum(np.abs(vecs[0]), np.abs(vecs[-1]))
    leaking = np.flatnonzero(edge > 1e-8)
    if leaking.size:
        raise BoundaryLeak(
            f"level {int(leaking[0])} has amplitude {edge[leaking[0]]:.2e} at x_max = {x_max:.4g}"
        )
    extrap = (4.0 * fine - coarse) / 3.0
    return OracleSpectrum(
        energies=tuple(float(e) for e in extrap),
        errors=tuple(float(abs(e - f)) for e, f in zip(extrap, fine)),
        coarse=tuple(float(e) for e in coarse),
        fine=tuple(float(e) for e in fine),
        x_max=float(x_max),
        n_points=cfg.n_points,
    )
