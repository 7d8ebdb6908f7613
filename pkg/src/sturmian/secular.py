"""Truncated Sturmian secular systems at fixed script_e.

Expanding ``|E> = sum_N C_N |phi_N>`` over Sturmians of one common
``script_e`` and using their ``V0``-orthogonality gives the pencil

    [(E - script_e) T - S] C = 0,   S = W - diag(beta_N N_N),

with ``T`` the overlap matrix, ``W`` the potential matrix and
``beta_N N_N = script_e / 2``.  Writing ``y = E - script_e/2`` this is
``det(y T - X) = 0`` where ``X = W + (script_e/2)(T - I)``: diagonal ``v``
and off-diagonal ``xi = t script_e/2 + w``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .algebra import solve_cubic, solve_quadratic
from .basis import QUAD_RTOL, cross_overlap, make_slice, potential_element
from .errors import DegenerateOverlapError, DomainError, SingularOverlapError

OVERLAP_LIMIT = 1.0 - 1e-12
DET_T_MIN = 1e-12
RESIDUAL_RTOL = 1e-9


@dataclass(frozen=True)
class SecularSystem:
    indices: tuple
    script_e: float
    T: np.ndarray
    W: np.ndarray
    n_terms: tuple

    @property
    def order(self):
        return len(self.indices) - 1

    @property
    def S(self):
        return self.W - np.diag(self.n_terms)

    @property
    def X(self):
        """Matrix of the reduced pencil ``det(y T - X) = 0``."""
        return self.S + 0.5 * self.script_e * self.T

    @property
    def v_diag(self):
        return tuple(float(x) for x in np.diag(self.W))

    def _pairs(self, m):
        if len(self.indices) == 2:
            return (float(m[0, 1]),)
        if len(self.indices) == 3:
            # label l pairs the two indices other than n_l
            return (float(m[1, 2]), float(m[0, 2]), float(m[0, 1]))
        return ()

    @property
    def t_offdiag(self):
        return self._pairs(self.T)

    @property
    def w_offdiag(self):
        return self._pairs(self.W)

    @property
    def xi_offdiag(self):
        return self._pairs(self.X)


@dataclass(frozen=True)
class CandidateEnergies:
    roots: tuple
    coefficients: tuple
    residuals: tuple = field(default=())


def build_system(sys, k0, indices, script_e, v, rtol=QUAD_RTOL):
    idx = tuple(sorted(int(i) for i in indices))
    if len(set(idx)) != len(idx) or not 1 <= len(idx) <= 3:
        raise DomainError("indices must be 1 to 3 distinct integers")
    if idx[0] < 0:
        raise DomainError("indices must be nonnegative")
    slices = [make_slice(sys, k0, nu, script_e) for nu in idx]
    size = len(idx)
    T = np.eye(size)
    W = np.empty((size, size))
    for i in range(size):
        W[i, i] = potential_element(slices[i], slices[i], v, rtol)
        for j in range(i + 1, size):
            T[i, j] = T[j, i] = cross_overlap(slices[i], slices[j], rtol)
            W[i, j] = W[j, i] = potential_element(slices[i], slices[j], v, rtol)
    n_terms = tuple(s.n_term for s in slices)
    return SecularSystem(idx, float(script_e), T, W, n_terms)


def null_vector(matrix):
    """Unit null direction of a (numerically) singular square matrix."""
    _, _, vt = np.linalg.svd(matrix)
    c = vt[-1]
    nz = np.flatnonzero(np.abs(c) > 1e-14)
    if nz.size and c[nz[0]] < 0:
        c = -c
    return c / np.linalg.norm(c)


def _finish(system, ys):
    half = 0.5 * system.script_e
    roots, coeffs, residuals = [], [], []
    S, T = system.S, system.T
    for y in sorted(ys):
        e = y + half
        m = (e - system.script_e) * T - S
        c = null_vector(m)
        roots.append(float(e))
        coeffs.append(tuple(float(x) for x in c))
        residuals.append(float(np.linalg.norm(m @ c)))
    return CandidateEnergies(tuple(roots), tuple(coeffs), tuple(residuals))


def residual_ok(system, cand):
    bound = RESIDUAL_RTOL * (1.0 + np.linalg.norm(system.S, 2))
    return all(r <= bound for r in cand.residuals)


def solve_order0(system):
    if len(system.indices) != 1:
        raise DomainError("order 0 needs a single index")
    e = float(system.W[0, 0]) + 0.5 * system.script_e
    return CandidateEnergies((e,), ((1.0,),), (0.0,))


def order1_coefficients(system):
    """``(A, B, C)`` of the quadratic in ``y = E - script_e/2``."""
    (t,), (w,) = system.t_offdiag, system.w_offdiag
    vn, vm = system.v_diag
    xi = 0.5 * t * system.script_e + w
    a = 1.0 - t * t
    b = t * (t * system.script_e + 2.0 * w) - (vn + vm)
    c = vn * vm - xi * xi
    return a, b, c


def solve_order1(system):
    """``E_-`` and ``E_+`` (ascending); ``E_-`` belongs to the lower index."""
    if len(system.indices) != 2:
        raise DomainError("order 1 needs two indices")
    (t,) = system.t_offdiag
    if abs(t) >= OVERLAP_LIMIT:
        raise DegenerateOverlapError(f"|t| = {abs(t):.16g} too close to 1")
    return _finish(system, solve_quadratic(*order1_coefficients(system)))


def order2_coefficients(system):
    """``(A, B, C, D)`` of the cubic in ``y = E - script_e/2``.

    Labels: ``t_l``, ``w_l``, ``xi_l`` couple the two indices other than
    ``n_l``; ``v_l`` belongs to ``n_l``.
    """
    t1, t2, t3 = system.t_offdiag
    x1, x2, x3 = system.xi_offdiag
    v1, v2, v3 = system.v_diag
    a = 1.0 - (t1 * t1 + t2 * t2 + t3 * t3) + 2.0 * t1 * t2 * t3
    b = (
        (t1 * t1 - 1.0) * v1 + 2.0 * t1 * x1
        + (t2 * t2 - 1.0) * v2 + 2.0 * t2 * x2
        + (t3 * t3 - 1.0) * v3 + 2.0 * t3 * x3
        - 2.0 * (t1 * t2 * x3 + t3 * t1 * x2 + t2 * t3 * x1)
    )
    c = (
        v1 * v2 + v2 * v3 + v3 * v1
        + 2.0 * (t1 * x2 * x3 + t3 * x1 * x2 + t2 * x3 * x1)
        - (x1 * x1 + 2.0 * t1 * v1 * x1)
        - (x2 * x2 + 2.0 * t2 * v2 * x2)
        - (x3 * x3 + 2.0 * t3 * v3 * x3)
    )
    d = v1 * x1 * x1 + v2 * x2 * x2 + v3 * x3 * x3 - 2.0 * x1 * x2 * x3 - v1 * v2 * v3
    return a, b, c, d


def solve_order2(system):
    if len(system.indices) != 3:
        raise DomainError("order 2 needs three indices")
    det_t = float(np.linalg.det(system.T))
    if det_t < DET_T_MIN:
        raise SingularOverlapError(f"det T = {det_t:.3e}")
    return _finish(system, solve_cubic(*order2_coefficients(system)))


def solve_generic(system):
    """Generalized symmetric eigenproblem ``X c = y T c``; any size."""
    ys = scipy.linalg.eigh(system.X, system.T, eigvals_only=True)
    return _finish(system, [float(y) for y in ys])


def solve(system):
    n = len(system.indices)
    if n == 1:
        return solve_order0(system)
    if n == 2:
        return solve_order1(system)
    return solve_order2(system)


def secular_determinant(system, energy):
    """``det[(E - script_e) T - S]`` at a trial energy."""
    return float(np.linalg.det((energy - system.script_e) * system.T - system.S))


def decoupled(system, atol=0.0):
    """True when all overlaps and couplings between indices vanish."""
    return all(abs(t) <= atol for t in system.t_offdiag) and all(
        abs(w) <= atol for w in system.w_offdiag
    )

