"""Collocation point sets for the constraint rows of the C0/C1 schemes.

Default placement is N equally spaced points in the open face (endpoints
excluded, so corners are never double-counted); Gauss-Lobatto nodes are
available as an alternative.  1-d point faces carry exactly one point.
Final-time faces of space-time slabs get no points: nothing is collocated
there in any scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import BOUNDARY, FINAL, INTERIOR, Face, Partition

RULES = ("uniform", "gauss_lobatto")


def _lobatto_nodes(n: int) -> np.ndarray:
    """n Gauss-Lobatto nodes on [-1, 1] (endpoints included)."""
    if n < 2:
        return np.array([0.0])
    if n == 2:
        return np.array([-1.0, 1.0])
    coeffs = np.zeros(n)
    coeffs[n - 1] = 1.0
    interior = np.polynomial.legendre.legroots(np.polynomial.legendre.legder(coeffs))
    return np.concatenate(([-1.0], np.sort(interior), [1.0]))


def face_points(face: Face, n: int, rule: str = "uniform") -> np.ndarray:
    """Ordered collocation points on one face, shape (n_pts, dim)."""
    if face.dim == 1:
        return np.array([[face.coord]])
    free_axis = 1 - face.axis
    lo, hi = face.bounds[free_axis]
    if rule == "uniform":
        t = np.arange(1, n + 1) / (n + 1)
        coords = lo + t * (hi - lo)
    elif rule == "gauss_lobatto":
        coords = 0.5 * (hi - lo) * (_lobatto_nodes(n) + 1.0) + lo
    else:
        raise ValueError(f"unknown collocation rule {rule!r}")
    pts = np.empty((len(coords), 2))
    pts[:, face.axis] = face.coord
    pts[:, free_axis] = coords
    return pts


@dataclass(frozen=True)
class CollocationSet:
    """Per-face ordered point lists plus boundary/interior totals."""

    points: dict[int, np.ndarray]   # face id -> (n_pts, dim)
    n_boundary: int
    n_interior: int
    rule: str = "uniform"

    def for_face(self, face: Face) -> np.ndarray:
        try:
            return self.points[face.id]
        except KeyError:
            raise ValueError(f"face {face.id} has no collocation points") from None


def build_collocation(
    partition: Partition, n_per_face: int, rule: str = "uniform"
) -> CollocationSet:
    """Collocation points on every face except final-time faces."""
    if n_per_face < 1:
        raise ValueError("need at least one collocation point per face")
    points: dict[int, np.ndarray] = {}
    n_boundary = 0
    n_interior = 0
    for face in partition.faces:
        if face.face_class == FINAL:
            continue
        pts = face_points(face, n_per_face, rule)
        points[face.id] = pts
        if face.kind == BOUNDARY:
            n_boundary += len(pts)
        elif face.kind == INTERIOR:
            n_interior += len(pts)
    return CollocationSet(points=points, n_boundary=n_boundary,
                          n_interior=n_interior, rule=rule)
