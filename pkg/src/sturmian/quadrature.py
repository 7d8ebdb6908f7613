"""Gauss-Hermite rules for integrands of the form poly(x) * exp(-a x^2)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_hermite


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights integrating ``f(x) exp(-exponent_scale x^2)`` over R.

    A rule with ``len(nodes)`` points is exact for ``f`` a polynomial of
    degree ``2*len(nodes) - 1``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exponent_scale: float

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values):
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=256)
def _standard_rule(n):
    if n < 1:
        raise ValueError("node count must be >= 1")
    nodes, weights = roots_hermite(n)
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_hermite(n, exponent_scale=1.0):
    """Return the ``n``-point rule for the weight ``exp(-exponent_scale x^2)``."""
    if exponent_scale <= 0:
        raise ValueError("exponent_scale must be positive")
    t, w = _standard_rule(int(n))
    s = math.sqrt(exponent_scale)
    nodes = t / s
    weights = w / s
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, float(exponent_scale))
