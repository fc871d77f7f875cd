"""Gauss-Legendre rules on [-1,1]^d, tensorized for boxes, restricted to faces.

Nodes are computed by Newton iteration on the Legendre recurrence to 1e-15 and
cached per point count; an n-point rule integrates polynomials of degree
2n-1 exactly.  Everything is pure and stateless.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .geometry import Element, Face

_NEWTON_TOL = 1e-15


@dataclass(frozen=True)
class QuadRule:
    """Reference-cell rule: nodes (n_pts, d) in [-1,1]^d, positive weights summing to 2^d."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]


def _legendre_and_derivative(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_n'(x) via the three-term recurrence."""
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev, np.zeros_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=None)
def _gauss_nodes_weights(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n < 1:
        raise ValueError("quadrature point count must be >= 1")
    if n == 1:
        return np.array([0.0]), np.array([2.0])
    i = np.arange(n)
    x = np.cos(np.pi * (i + 0.75) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    # enforce exact +/- symmetry about the midpoint
    x = 0.5 * (x - x[::-1])
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int) -> QuadRule:
    """Classical 1-d Gauss-Legendre rule on [-1, 1]."""
    x, w = _gauss_nodes_weights(n)
    return QuadRule(nodes=x[:, None].copy(), weights=w.copy())


def tensor_rule(n_per_axis: Sequence[int]) -> QuadRule:
    """Tensor product of 1-d rules on [-1,1]^d (C-order over axes)."""
    axes = [_gauss_nodes_weights(int(n)) for n in n_per_axis]
    grids = np.meshgrid(*[x for x, _ in axes], indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.ones(nodes.shape[0])
    for a, (_, w) in enumerate(axes):
        shape = [1] * len(axes)
        shape[a] = len(w)
        weights = weights * np.broadcast_to(
            w.reshape(shape), [len(ax[0]) for ax in axes]
        ).ravel()
    return QuadRule(nodes=nodes, weights=weights)


def map_to_element(rule: QuadRule, element: Element) -> tuple[np.ndarray, np.ndarray]:
    """Affine map of a reference rule onto an element: physical nodes, scaled weights."""
    lo = np.array([b[0] for b in element.bounds])
    hi = np.array([b[1] for b in element.bounds])
    pts = 0.5 * (hi - lo) * (rule.nodes + 1.0) + lo
    jac = float(np.prod(0.5 * (hi - lo)))
    return pts, rule.weights * jac


def face_rule(face: Face, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature on a face: the single point (weight 1) in 1-d, a mapped
    1-d rule along the edge in 2-d."""
    if n < 1:
        raise ValueError("quadrature point count must be >= 1")
    if face.dim == 1:
        return np.array([[face.coord]]), np.array([1.0])
    free_axis = 1 - face.axis
    lo, hi = face.bounds[free_axis]
    x, w = _gauss_nodes_weights(n)
    pts = np.empty((n, 2))
    pts[:, face.axis] = face.coord
    pts[:, free_axis] = 0.5 * (hi - lo) * (x + 1.0) + lo
    return pts, w * 0.5 * (hi - lo)
