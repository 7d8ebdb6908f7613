"""Harmonic-oscillator Sturmians and their matrix elements.

For a reference oscillator ``V0 = (k0/2) x^2`` and a fixed parameter
``script_e`` the Sturmian of index ``nu`` is the ``nu``-th oscillator
eigenfunction whose frequency is tuned so that its level sits exactly at
``script_e``.  All widths follow from ``alpha_nu = alpha_0 / (2 nu + 1)`` with
``alpha_0 = 2 m script_e / hbar^2``; ``k0`` only enters the coupling ``beta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureError
from .quadrature import gauss_hermite

QUAD_RTOL = 1e-10
MAX_NODES = 2048


@dataclass(frozen=True)
class SystemParams:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise DomainError("hbar and mass must be positive")


@dataclass(frozen=True)
class SturmianSlice:
    nu: int
    script_e: float
    k0: float
    omega: float
    alpha: float
    beta: float
    hbar: float = 1.0
    mass: float = 1.0

    @property
    def n_term(self):
        """``beta_nu <phi_nu|V0|phi_nu>``; equals ``script_e / 2``."""
        return self.beta * 0.5 * self.k0 * x2_element(self, self.nu)


def make_slice(sys, k0, nu, script_e):
    if not script_e > 0:
        raise DomainError(f"script_e must be positive, got {script_e!r}")
    if not k0 > 0:
        raise DomainError(f"k0 must be positive, got {k0!r}")
    if nu < 0 or int(nu) != nu:
        raise DomainError("nu must be a nonnegative integer")
    nu = int(nu)
    h, m = sys.hbar, sys.mass
    odd = 2 * nu + 1
    return SturmianSlice(
        nu=nu,
        script_e=float(script_e),
        k0=float(k0),
        omega=2.0 * script_e / (h * odd),
        alpha=2.0 * m * script_e / (h * h * odd),
        beta=4.0 * m * script_e**2 / (h * h * k0 * odd * odd),
        hbar=h,
        mass=m,
    )


def _hermite_rows(nmax, alpha, x, weighted):
    """Orthonormal oscillator functions 0..nmax of width ``alpha`` at ``x``.

    With ``weighted=False`` the common factor ``exp(-alpha x^2 / 2)`` is left
    out, which is what Gauss-Hermite quadrature needs.
    """
    y = math.sqrt(alpha) * np.asarray(x, dtype=float)
    rows = np.empty((nmax + 1,) + y.shape)
    rows[0] = (alpha / math.pi) ** 0.25
    if weighted:
        rows[0] = rows[0] * np.exp(-0.5 * y * y)
    if nmax >= 1:
        rows[1] = math.sqrt(2.0) * y * rows[0]
    for k in range(2, nmax + 1):
        rows[k] = math.sqrt(2.0 / k) * y * rows[k - 1] - math.sqrt((k - 1) / k) * rows[k - 2]
    return rows


def oscillator_function(alpha, ell, x):
    return _hermite_rows(ell, alpha, x, weighted=True)[ell]


def eval_sturmian(slice_, ell, x):
    """``<x|ell>_nu``: oscillator function ``ell`` at the slice's width."""
    if ell < 0:
        raise DomainError("ell must be nonnegative")
    out = oscillator_function(slice_.alpha, int(ell), x)
    return float(out) if np.ndim(out) == 0 else out


def _x2(alpha, n, ell):
    if ell == n:
        return (2 * n + 1) / (2.0 * alpha)
    lo = min(n, ell)
    if abs(ell - n) == 2:
        return math.sqrt((lo + 1) * (lo + 2)) / (2.0 * alpha)
    return 0.0


def _x4(alpha, n, ell):
    lo, d = min(n, ell), abs(ell - n)
    scale = 1.0 / (4.0 * alpha * alpha)
    if d == 0:
        return 3.0 * (2 * n * n + 2 * n + 1) * scale
    if d == 2:
        return (4 * lo + 6) * math.sqrt((lo + 1) * (lo + 2)) * scale
    if d == 4:
        return math.sqrt((lo + 1) * (lo + 2) * (lo + 3) * (lo + 4)) * scale
    return 0.0


def x2_element(slice_, ell):
    """``<ell|x^2|nu>_nu`` in the slice's own oscillator basis."""
    if ell < 0:
        raise DomainError("ell must be nonnegative")
    return _x2(slice_.alpha, slice_.nu, int(ell))


def x4_element(slice_, ell):
    """``<nu|x^4|ell>_nu`` in the slice's own oscillator basis."""
    if ell < 0:
        raise DomainError("ell must be nonnegative")
    return _x4(slice_.alpha, slice_.nu, int(ell))


def _poly_element(poly, alpha, n, ell):
    total = 0.0
    for power, c in poly.items():
        if power == 0:
            total += c if n == ell else 0.0
        elif power == 2:
            total += c * _x2(alpha, n, ell)
        elif power == 4:
            total += c * _x4(alpha, n, ell)
        else:
            return None
    return total


def _parity_zero(parity, n, ell):
    if parity == "even":
        return (n + ell) % 2 == 1
    if parity == "odd":
        return (n + ell) % 2 == 0
    return False


def _gauss_integral(alpha_a, ia, alpha_b, ib, g, c, degree, rtol):
    exponent = 0.5 * (alpha_a + alpha_b) + c
    n = ia + ib + 8
    exact = degree is not None and ia + ib + degree <= 2 * n - 1
    previous = None
    while True:
        rule = gauss_hermite(n, exponent)
        x = rule.nodes
        pa = _hermite_rows(ia, alpha_a, x, weighted=False)[ia]
        pb = _hermite_rows(ib, alpha_b, x, weighted=False)[ib]
        values = rule.weights * pa * pb * g(x)
        value = float(np.sum(values))
        if exact:
            return value
        if previous is not None:
            scale = max(abs(value), float(np.sum(np.abs(values))) * 1e-6)
            if abs(value - previous) <= rtol * scale:
                return value
        if 2 * n > MAX_NODES:
            raise QuadratureError(
                f"quadrature for <{ia}|V|{ib}> did not converge (last change "
                f"{abs(value - previous):.3e} at {n} nodes)"
            )
        previous, n = value, 2 * n


def element(alpha_a, ia, alpha_b, ib, v, rtol=QUAD_RTOL):
    """``<ia, width alpha_a | V | ib, width alpha_b>`` for any potential."""
    if _parity_zero(getattr(v, "parity", "none"), ia, ib):
        return 0.0
    poly = getattr(v, "polynomial", None)
    if poly is not None and alpha_a == alpha_b:
        value = _poly_element(poly, alpha_a, ia, ib)
        if value is not None:
            return value
    return sum(
        _gauss_integral(alpha_a, ia, alpha_b, ib, g, c, degree, rtol)
        for g, c, degree in v.terms()
    )


def _check_compatible(a, b):
    if not math.isclose(a.script_e, b.script_e, rel_tol=1e-12) or a.k0 != b.k0:
        raise DomainError("slices must share script_e and k0")


def cross_overlap(a, b, rtol=QUAD_RTOL):
    """``<phi_a|phi_b>`` for two Sturmians of the same script_e."""
    _check_compatible(a, b)
    if a.nu == b.nu:
        return 1.0
    if (a.nu + b.nu) % 2:
        return 0.0
    one = lambda x: np.ones_like(x)
    return _gauss_integral(a.alpha, a.nu, b.alpha, b.nu, one, 0.0, 0, rtol)


def potential_element(a, b, v, rtol=QUAD_RTOL):
    """``<phi_a|V|phi_b>`` for two Sturmians of the same script_e."""
    _check_compatible(a, b)
    return element(a.alpha, a.nu, b.alpha, b.nu, v, rtol)


def level_element(slice_, ell, v, rtol=QUAD_RTOL):
    """``<nu|V|ell>_nu``: both functions at the width of ``slice_``."""
    if ell < 0:
        raise DomainError("ell must be nonnegative")
    return element(slice_.alpha, slice_.nu, slice_.alpha, int(ell), v, rtol)
