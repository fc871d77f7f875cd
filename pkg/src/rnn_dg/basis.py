"""Per-element feature maps.

Two kinds of local basis:

* ``FeatureBasis`` - a randomized single-hidden-layer network
  ``phi_j(x) = sigma(w_j . x + b_j)`` whose hidden parameters are drawn once
  from U[-w0, w0] by a counter-based generator keyed on
  (global_seed, element_id) and never retrained.  Only the linear output layer
  is solved for downstream.
* ``PolyBasis`` - monomials of total degree <= p in element-local coordinates
  scaled to [-1,1]^d, with analytic gradients.  This is the exact-reproduction
  oracle used by the test suites.

Both expose ``eval(points) -> FeatureEval`` with values (n, M) and gradients
(n, M, d) taken with respect to raw physical coordinates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .geometry import Element, Partition

logger = logging.getLogger(__name__)

ACTIVATIONS = ("tanh", "sin")


@dataclass(frozen=True)
class FeatureEval:
    values: np.ndarray     # (n_points, M)
    gradients: np.ndarray  # (n_points, M, d)


@dataclass(frozen=True)
class FeatureBasis:
    """Fixed random hidden layer of one element's local network."""

    element_id: int
    weights: np.ndarray   # (M, d)
    biases: np.ndarray    # (M,)
    activation: str
    w0: float
    seed: int
    normalize: bool = False
    bounds: tuple[tuple[float, float], ...] | None = None

    @property
    def n_features(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def eval(self, points: np.ndarray) -> FeatureEval:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if self.normalize:
            lo = np.array([b[0] for b in self.bounds])
            hi = np.array([b[1] for b in self.bounds])
            scale = 2.0 / (hi - lo)
            pts = (2.0 * pts - lo - hi) / (hi - lo)
        else:
            scale = np.ones(self.dim)
        z = pts @ self.weights.T + self.biases
        values, gradients = _kernels.activation_eval(self.activation, z, self.weights, scale)
        return FeatureEval(values=values, gradients=gradients)


def sample_basis(
    global_seed: int,
    element: Element,
    m: int,
    w0: float,
    activation: str = "tanh",
    normalize: bool = True,
) -> FeatureBasis:
    """Draw the fixed hidden layer for one element.

    Deterministic in (global_seed, element.id, m, w0, activation): a Philox
    counter-based stream keyed by (seed, element id) hands out the M*(d+1)
    parameters in a fixed index order, so results do not depend on element
    visit order or thread count.

    ``normalize=True`` (the default) feeds the network element-local
    coordinates scaled to [-1,1]^d; without it the features of small elements
    are nearly affine at the published init ranges and the attainable accuracy
    collapses by several decades.  ``normalize=False`` evaluates on raw
    physical coordinates.
    """
    if m < 1:
        raise ValueError("hidden width M must be >= 1")
    if w0 <= 0:
        raise ValueError("init range half-width w0 must be > 0")
    if activation not in ACTIVATIONS:
        raise ValueError(f"unknown activation {activation!r}; pick one of {ACTIVATIONS}")
    key = np.array([np.uint64(global_seed), np.uint64(element.id)], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    d = element.dim
    weights = gen.uniform(-w0, w0, size=(m, d))
    biases = gen.uniform(-w0, w0, size=m)
    return FeatureBasis(
        element_id=element.id,
        weights=weights,
        biases=biases,
        activation=activation,
        w0=float(w0),
        seed=int(global_seed),
        normalize=normalize,
        bounds=element.bounds if normalize else None,
    )


def sample_bases(
    partition: Partition,
    global_seed: int,
    m: int,
    w0: float,
    activation: str = "tanh",
    normalize: bool = True,
) -> list[FeatureBasis]:
    """One fixed random basis per element of the partition."""
    return [
        sample_basis(global_seed, e, m, w0, activation, normalize)
        for e in partition.elements
    ]


def _total_degree_exponents(degree: int, dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([[k] for k in range(degree + 1)], dtype=np.int64)
    exps = [
        (a, t - a)
        for t in range(degree + 1)
        for a in range(t, -1, -1)
    ]
    return np.array(exps, dtype=np.int64)


@dataclass(frozen=True)
class PolyBasis:
    """Scaled-monomial local basis of total degree <= p (testing oracle)."""

    element_id: int
    exponents: np.ndarray  # (M, d)
    bounds: tuple[tuple[float, float], ...]

    @property
    def n_features(self) -> int:
        return self.exponents.shape[0]

    @property
    def dim(self) -> int:
        return self.exponents.shape[1]

    def eval(self, points: np.ndarray) -> FeatureEval:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        lo = np.array([b[0] for b in self.bounds])
        hi = np.array([b[1] for b in self.bounds])
        xhat = (2.0 * pts - lo - hi) / (hi - lo)   # (n, d)
        scale = 2.0 / (hi - lo)
        n, d = xhat.shape
        m = self.n_features
        # per-axis monomial powers up to the max exponent
        max_e = int(self.exponents.max())
        powers = np.ones((d, max_e + 1, n))
        for e in range(1, max_e + 1):
            powers[:, e, :] = powers[:, e - 1, :] * xhat.T
        values = np.ones((n, m))
        gradients = np.zeros((n, m, d))
        for j in range(m):
            exps = self.exponents[j]
            for a in range(d):
                values[:, j] *= powers[a, exps[a], :]
            for a in range(d):
                if exps[a] == 0:
                    continue
                g = exps[a] * powers[a, exps[a] - 1, :] * scale[a]
                for b in range(d):
                    if b != a:
                        g = g * powers[b, exps[b], :]
                gradients[:, j, a] = g
        return FeatureEval(values=values, gradients=gradients)


def polynomial_features(element: Element, degree: int) -> PolyBasis:
    """Monomial feature map of total degree <= degree on one element."""
    if degree < 0:
        raise ValueError("polynomial degree must be >= 0")
    return PolyBasis(
        element_id=element.id,
        exponents=_total_degree_exponents(degree, element.dim),
        bounds=element.bounds,
    )


def polynomial_bases(partition: Partition, degree: int) -> list[PolyBasis]:
    return [polynomial_features(e, degree) for e in partition.elements]


def empirical_feature_rank(
    basis, bounds, n_points: int | None = None, rng_seed: int = 0
) -> tuple[int, int]:
    """Numerical rank of sampled feature columns (linear-independence check).

    Samples ``n_points`` (default 10*M) uniform points in the box ``bounds``,
    computes the singular values of the (n_points, M) feature matrix and counts
    those above 1e-10 * sigma_max.  A deficient rank is logged, not raised:
    linear independence of random features is probabilistic.
    """
    m = basis.n_features
    if n_points is None:
        n_points = 10 * m
    rng = np.random.default_rng(rng_seed)
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    pts = rng.uniform(lo, hi, size=(n_points, len(bounds)))
    sv = np.linalg.svd(basis.eval(pts).values, compute_uv=False)
    rank = int(np.sum(sv > 1e-10 * sv[0]))
    if rank < m:
        logger.warning(
            "feature columns numerically rank-deficient: rank %d < M=%d "
            "(element %s)", rank, m, basis.element_id,
        )
    return rank, m
