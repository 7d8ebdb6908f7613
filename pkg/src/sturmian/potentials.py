"""Potential catalogue.

Every potential is an immutable, vectorised callable ``V(x)``.  Besides point
evaluation each one describes itself to the quadrature layer through
:meth:`Potential.terms`: a list of ``(g, c, degree)`` triples meaning

    V(x) = sum_j g_j(x) * exp(-c_j x^2)

with ``g_j`` a polynomial of the given degree, or ``degree=None`` when ``g_j``
is not polynomial (and quadrature must be refined until it converges).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .basis import SystemParams
from .errors import DomainError, PoleError, UnsupportedPotential

PARITIES = ("even", "odd", "none")


class Potential:
    parity = "even"
    # {power: coefficient} for polynomial potentials, else None
    polynomial = None

    def __call__(self, x):
        raise NotImplementedError

    def terms(self):
        return [(self, 0.0, None)]


def _poly(coeffs):
    def g(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for power, c in coeffs.items():
            out = out + c * x**power
        return out

    return g


def _const(value):
    def g(x):
        return np.full(np.shape(x), value, dtype=float)

    return g


@dataclass(frozen=True)
class Harmonic(Potential):
    """``V = (k/2) x^2``."""

    k: float

    def __post_init__(self):
        if self.k <= 0:
            raise DomainError("Harmonic requires k > 0")

    @property
    def polynomial(self):
        return {2: 0.5 * self.k}

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.k * x * x

    def terms(self):
        return [(_poly(self.polynomial), 0.0, 2)]


@dataclass(frozen=True)
class QuarticAnharmonic(Potential):
    """``V = (k/2) x^2 + eps x^4``."""

    k: float
    eps: float

    def __post_init__(self):
        if self.k <= 0 or self.eps <= 0:
            raise DomainError("QuarticAnharmonic requires k > 0 and eps > 0")

    @property
    def polynomial(self):
        return {2: 0.5 * self.k, 4: self.eps}

    def __call__(self, x):
        x2 = np.asarray(x, dtype=float) ** 2
        return 0.5 * self.k * x2 + self.eps * x2 * x2

    def terms(self):
        return [(_poly(self.polynomial), 0.0, 4)]


@dataclass(frozen=True)
class PureQuartic(Potential):
    """``V = eps x^4``."""

    eps: float

    def __post_init__(self):
        if self.eps <= 0:
            raise DomainError("PureQuartic requires eps > 0")

    @property
    def polynomial(self):
        return {4: self.eps}

    def __call__(self, x):
        x2 = np.asarray(x, dtype=float) ** 2
        return self.eps * x2 * x2

    def terms(self):
        return [(_poly(self.polynomial), 0.0, 4)]


@dataclass(frozen=True)
class Gaussian(Potential):
    """``V = -lam exp(-eps x^2 / 2)``."""

    lam: float
    eps: float

    def __post_init__(self):
        if self.lam <= 0 or self.eps <= 0:
            raise DomainError("Gaussian requires lam > 0 and eps > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return -self.lam * np.exp(-0.5 * self.eps * x * x)

    def terms(self):
        return [(_const(-self.lam), 0.5 * self.eps, 0)]


@dataclass(frozen=True)
class GaussianTilde(Potential):
    """Gaussian well lifted by ``lam``: ``V = lam (1 - exp(-eps x^2 / 2))``."""

    lam: float
    eps: float

    def __post_init__(self):
        if self.lam <= 0 or self.eps <= 0:
            raise DomainError("GaussianTilde requires lam > 0 and eps > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return -self.lam * np.expm1(-0.5 * self.eps * x * x)

    def terms(self):
        return [(_const(self.lam), 0.0, 0), (_const(-self.lam), 0.5 * self.eps, 0)]


@dataclass(frozen=True)
class ExactFamilyOrder1(Potential):
    """Potential whose ground state is exactly ``C0 phi_0 + C2 phi_2``.

    With ``s = alpha0 x^2`` and ``e = exp(-2 s / 5)``::

        V = E - hbar^2 alpha0 / 2m
              + (hbar^2 alpha0^2 / 2m) x^2 (e + (zeta/5)(2s - 5)) / (e + 5 zeta (2s - 5))

    The denominator is proportional to the eigenfunction, so it vanishes (and
    ``V`` has poles) wherever that function has nodes: for ``zeta < 0`` and
    for ``zeta > 1/25``.
    """

    alpha0: float
    zeta: float
    e_target: float
    hbar: float = 1.0
    mass: float = 1.0
    pole_tol: float = 1e-12

    def __post_init__(self):
        if self.alpha0 <= 0:
            raise DomainError("ExactFamilyOrder1 requires alpha0 > 0")

    @property
    def script_e(self):
        """The Sturmian parameter at which the {0, 2} expansion is exact."""
        return self.hbar**2 * self.alpha0 / (2.0 * self.mass)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s = self.alpha0 * x * x
        e = np.exp(-0.4 * s)
        if self.zeta == 0:
            bracket = np.ones_like(s)
        else:
            poly = 2.0 * s - 5.0
            num = e + (self.zeta / 5.0) * poly
            den = e + 5.0 * self.zeta * poly
            if np.any(np.abs(den) < self.pole_tol * (e + np.abs(5.0 * self.zeta * poly))):
                raise PoleError("ExactFamilyOrder1 evaluated at a pole")
            bracket = num / den
        scale = self.hbar**2 / (2.0 * self.mass)
        return self.e_target - scale * self.alpha0 + scale * self.alpha0**2 * x * x * bracket


@dataclass(frozen=True)
class Custom(Potential):
    """User-supplied vectorised callable.

    ``parity`` must be declared; it drives the zero-element shortcuts.
    ``degree`` may be given when ``func`` is a polynomial, which lets
    quadrature stop at the first exact rule.
    """

    func: Callable = field(compare=False)
    parity: str = "none"
    degree: int | None = None

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise DomainError(f"parity must be one of {PARITIES}")

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)

    def terms(self):
        return [(self, 0.0, self.degree)]


PotentialSpec = Union[
    Harmonic, QuarticAnharmonic, PureQuartic, Gaussian, GaussianTilde, ExactFamilyOrder1, Custom
]


def evaluate(v, x):
    """Point value(s) of ``v`` at ``x``."""
    return v(x)


def natural_v0(v):
    """Reference oscillator ``V0 = (k0/2) x^2 + shift`` paired with ``v``.

    Returns ``(k0, shift)``.  For :class:`PureQuartic` any positive ``k0``
    gives identical results (it is absorbed into the Sturmian couplings), and
    ``1`` is returned.
    """
    if isinstance(v, (Harmonic, QuarticAnharmonic)):
        return v.k, 0.0
    if isinstance(v, PureQuartic):
        return 1.0, 0.0
    if isinstance(v, Gaussian):
        return v.lam * v.eps, -v.lam
    if isinstance(v, GaussianTilde):
        return v.lam * v.eps, 0.0
    if isinstance(v, ExactFamilyOrder1):
        # large-|x| spring constant; the bracket tends to 1/25 unless zeta == 0
        ratio = 1.0 if v.zeta == 0 else 1.0 / 25.0
        return ratio * v.hbar**2 * v.alpha0**2 / v.mass, 0.0
    raise UnsupportedPotential(f"no natural V0 for {type(v).__name__}; pass k0 explicitly")


def make_exact_family(alpha0, zeta, e_target, sys=None):
    sys = sys or SystemParams()
    return ExactFamilyOrder1(alpha0, zeta, e_target, hbar=sys.hbar, mass=sys.mass)


def harmonic_energy(sys, k, n):
    return sys.hbar * math.sqrt(k / sys.mass) * (n + 0.5)
