"""Closed-form polynomial roots used by the order-0/1/2 solvers."""
from __future__ import annotations

import math

from .errors import ComplexRootError, DomainError


def bisect(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500):
    """Plain bisection for a sign change of ``f`` on ``[lo, hi]``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise DomainError("bisect: no sign change on the bracket")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol + rtol * abs(mid):
            return mid
        fmid = f(mid)
        if fmid == 0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_quadratic(a, b, c, disc_tol=1e-12):
    """Real roots of ``a y^2 + b y + c``, ascending."""
    if a == 0:
        raise DomainError("leading coefficient vanishes")
    disc = b * b - 4.0 * a * c
    if disc < 0:
        if disc < -disc_tol * max(b * b, abs(4.0 * a * c), 1e-300):
            raise ComplexRootError(f"quadratic discriminant {disc:.3e} < 0")
        disc = 0.0
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0:
        return [0.0, 0.0]
    return sorted([q / a, c / q])


def _polish(coeffs, y, steps=2):
    a, b, c, d = coeffs
    for _ in range(steps):
        f = ((a * y + b) * y + c) * y + d
        df = (3 * a * y + 2 * b) * y + c
        if df == 0:
            break
        step = f / df
        y_new = y - step
        if not math.isfinite(y_new):
            break
        y = y_new
    return y


def solve_cubic(a, b, c, d, disc_tol=1e-10):
    """Real roots of ``a y^3 + b y^2 + c y + d``, ascending.

    Uses the trigonometric form when all three roots are real and Cardano's
    formula otherwise; in the latter case :class:`ComplexRootError` is raised
    because callers here always need three real roots.
    """
    if a == 0:
        raise DomainError("leading coefficient vanishes")
    b, c, d = b / a, c / a, d / a
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    scale = max(abs(b), math.sqrt(abs(c)), abs(d) ** (1.0 / 3.0), 1e-300)
    # discriminant of y^3 + p y + q, sign convention: > 0 means complex pair
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > disc_tol * scale**6:
        u = math.copysign(abs(-q / 2.0 + math.sqrt(disc)) ** (1.0 / 3.0), -q / 2.0 + math.sqrt(disc))
        v = math.copysign(abs(-q / 2.0 - math.sqrt(disc)) ** (1.0 / 3.0), -q / 2.0 - math.sqrt(disc))
        raise ComplexRootError(
            f"cubic has one real root {u + v - shift:.6g} and a complex pair"
        )
    if p >= 0:
        # only possible here with a (numerically) triple root
        ys = [-math.copysign(abs(q) ** (1.0 / 3.0), q)] * 3
    else:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        ys = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
    roots = [_polish((1.0, b, c, d), y - shift) for y in ys]
    return sorted(roots)


def depressed_positive_root(p, q):
    """The unique positive root of ``x^3 - p x - q = 0`` for ``p >= 0, q > 0``.

    Written as ``x = 2 sqrt(p/3) cos(phi/3)`` with ``phi = arctan(sqrt(r - 1))``
    and ``r = 4 p^3 / (27 q^2)``.  For ``r < 1`` the angle is imaginary and the
    cosine becomes ``cosh(artanh(sqrt(1 - r)) / 3)``.  Returns ``(x, cos_third)``
    where ``cos_third`` is the real value of ``cos(phi/3)`` (``inf`` for p = 0).
    """
    if q <= 0 or p < 0:
        raise DomainError("need p >= 0 and q > 0")
    if p == 0:
        return q ** (1.0 / 3.0), math.inf
    r = 4.0 * p**3 / (27.0 * q * q)
    if r >= 1.0:
        cos_third = math.cos(math.atan(math.sqrt(r - 1.0)) / 3.0)
    else:
        s = math.sqrt(1.0 - r)
        # artanh(s) = log((1+s)^2 / r) / 2 without the 1 - s cancellation
        cos_third = math.cosh(0.5 * math.log((1.0 + s) ** 2 / r) / 3.0)
    x = 2.0 * math.sqrt(p / 3.0) * cos_third
    x = _polish((1.0, 0.0, -p, -q), x)
    return x, cos_third


def gaussian_eta_star(r):
    """Root ``eta > 1`` of ``eta^4 - eta^3 - r = 0`` in closed form.

    With ``zeta = (4/3) (4 r)^(1/3)``, ``s = sqrt(1 + zeta^3)``,
    ``u = (1 + s)^(1/3)`` and ``v = (s - 1)^(1/3)`` one has ``u v = zeta``, so
    the auxiliary ``xi = sqrt(1 - a + b) / 2`` collapses to
    ``(u^2 + u v + v^2)^(-3/2)`` with no cancellation at any ``r``.
    """
    if not r > 0:
        raise DomainError("r must be positive")
    zeta = (4.0 / 3.0) * (4.0 * r) ** (1.0 / 3.0)
    z3 = zeta**3
    s = math.sqrt(1.0 + z3)
    u = (1.0 + s) ** (1.0 / 3.0)
    v = (z3 / (1.0 + s)) ** (1.0 / 3.0)
    big_d = u * u + u * v + v * v
    xi = big_d**-1.5
    return 0.25 * (1.0 + 2.0 * xi + math.sqrt(3.0 - 4.0 * xi * xi + 1.0 / xi))


def gaussian_eta_star_textbook(r):
    """Same root from the unsimplified auxiliary quantities ``a`` and ``b``.

    Kept for comparison only: ``1 - a + b`` cancels catastrophically once
    ``r`` exceeds about 1e3.
    """
    zeta = (4.0 / 3.0) * (4.0 * r) ** (1.0 / 3.0)
    s = math.sqrt(1.0 + zeta**3)
    a = 1.5 * zeta * (1.0 + s) ** (1.0 / 3.0)
    b = 1.5 * zeta * (s - 1.0) ** (1.0 / 3.0)
    xi = 0.5 * math.sqrt(max(1.0 - a + b, 0.0))
    return 0.25 * (1.0 + 2.0 * xi + math.sqrt(3.0 - 4.0 * xi * xi + 1.0 / xi))
