"""Gauss-Legendre quadrature on the reference interval [-1, 1]."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConfigurationError

MAX_POINTS = 12


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of an n-point Gauss-Legendre rule.

    The rule integrates polynomials of degree <= 2n-1 exactly; weights sum
    to 2, the measure of [-1, 1]. Nodes are symmetric about 0.
    """

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def npts(self) -> int:
        return self.nodes.size

    def integrate(self, values: np.ndarray, axis: int = -1) -> np.ndarray:
        """Integrate sampled values over [-1, 1] along ``axis``."""
        return np.tensordot(values, self.weights, axes=([axis], [0]))


@lru_cache(maxsize=None)
def gauss_rule(n: int) -> QuadratureRule:
    """Return the n-point Gauss-Legendre rule, 1 <= n <= 12."""
    if not 1 <= n <= MAX_POINTS:
        raise ConfigurationError(f"gauss_rule: n={n} outside [1, {MAX_POINTS}]")
    nodes, weights = leggauss(n)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(nodes=nodes, weights=weights)
