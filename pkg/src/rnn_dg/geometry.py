"""Uniform Cartesian partitions of intervals, rectangles and space-time slabs.

Elements are axis-aligned boxes indexed in C order (axis 0 slowest).  Faces are
enumerated once, deduplicated, and carry orientation, measure, neighbour links
and a penalty length scale h_f.  For space-time domains axis 0 is time and
faces are classified as spatial / temporal / initial / final.

Conventions
-----------
* On an interior face the element with the smaller index is the "plus" side
  and the unit normal ``normal_plus`` points from plus to minus (so it is
  always the positive coordinate direction of the face's normal axis).
* On a boundary face ``normal_plus`` points outward from the domain.
* 1-d faces are points; their measure is 1 by convention and h_f is the
  average diameter of the adjacent elements (single diameter on the boundary).
  2-d faces are edges with measure = h_f = edge length.

Everything here is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

INTERIOR = "interior"
BOUNDARY = "boundary"

# face classes (space-time partitions; plain partitions use SPATIAL throughout)
SPATIAL = "spatial"
TEMPORAL = "temporal"
INITIAL = "initial"
FINAL = "final"


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box domain; ``temporal`` marks axis 0 as time."""

    bounds: tuple[tuple[float, float], ...]
    temporal: bool = False

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        if self.dim not in (1, 2):
            raise ValueError(f"only 1-d and 2-d domains supported, got dim={self.dim}")
        for lo, hi in bounds:
            if not lo < hi:
                raise ValueError(f"degenerate axis bounds ({lo}, {hi})")
        if self.temporal and self.dim != 2:
            raise ValueError("temporal domains must be 2-d (time x 1-d space)")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def volume(self) -> float:
        return float(np.prod([hi - lo for lo, hi in self.bounds]))


@dataclass(frozen=True)
class Element:
    """One axis-aligned cell of the partition."""

    id: int
    bounds: tuple[tuple[float, float], ...]

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def sizes(self) -> tuple[float, ...]:
        return tuple(hi - lo for lo, hi in self.bounds)

    @property
    def diameter(self) -> float:
        return float(np.sqrt(sum(s * s for s in self.sizes)))

    @property
    def volume(self) -> float:
        return float(np.prod(self.sizes))

    @property
    def center(self) -> tuple[float, ...]:
        return tuple(0.5 * (lo + hi) for lo, hi in self.bounds)


@dataclass(frozen=True)
class Face:
    """Face of the partition: a point in 1-d, an axis-aligned edge in 2-d.

    ``bounds`` is degenerate along ``axis`` (the normal direction).
    ``minus_element`` is None on boundary faces.
    """

    id: int
    kind: str
    axis: int
    bounds: tuple[tuple[float, float], ...]
    plus_element: int
    minus_element: int | None
    normal_plus: np.ndarray
    measure: float
    h_f: float
    face_class: str = SPATIAL

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def coord(self) -> float:
        """Position along the normal axis."""
        return self.bounds[self.axis][0]

    @property
    def is_interior(self) -> bool:
        return self.kind == INTERIOR


@dataclass(frozen=True)
class Partition:
    """Uniform tensor-product partition with full face topology."""

    domain: Domain
    cells_per_axis: tuple[int, ...]
    elements: tuple[Element, ...]
    faces: tuple[Face, ...]
    h: float
    _element_faces: tuple[tuple[tuple[int, str], ...], ...] = field(repr=False)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def n_t(self) -> int | None:
        """Number of time slabs (space-time partitions only)."""
        return self.cells_per_axis[0] if self.domain.temporal else None

    @property
    def n_s(self) -> int | None:
        """Number of spatial cells per slab (space-time partitions only)."""
        return self.cells_per_axis[1] if self.domain.temporal else None

    def faces_of(self, element_id: int) -> list[tuple[Face, str]]:
        """All faces bounding the element, each with the element's side."""
        if not 0 <= element_id < self.n_elements:
            raise ValueError(f"invalid element id {element_id}")
        return [(self.faces[fid], side) for fid, side in self._element_faces[element_id]]

    def interior_faces(self) -> list[Face]:
        return [f for f in self.faces if f.kind == INTERIOR]

    def boundary_faces(self) -> list[Face]:
        return [f for f in self.faces if f.kind == BOUNDARY]


def _face_class(domain: Domain, axis: int, layer: int, n_layers: int) -> str:
    if not domain.temporal:
        return SPATIAL
    if axis != 0:
        return SPATIAL
    if layer == 0:
        return INITIAL
    if layer == n_layers:
        return FINAL
    return TEMPORAL


def build_partition(domain: Domain, cells_per_axis: Sequence[int]) -> Partition:
    """Build the uniform grid and its complete, deduplicated face list."""
    cells = tuple(int(n) for n in cells_per_axis)
    if len(cells) != domain.dim:
        raise ValueError(f"expected {domain.dim} cell counts, got {len(cells)}")
    if any(n < 1 for n in cells):
        raise ValueError(f"need at least one cell per axis, got {cells}")

    dim = domain.dim
    lows = [lo for lo, _ in domain.bounds]
    steps = [(hi - lo) / n for (lo, hi), n in zip(domain.bounds, cells)]

    def cell_interval(axis: int, i: int) -> tuple[float, float]:
        return (lows[axis] + i * steps[axis], lows[axis] + (i + 1) * steps[axis])

    elements: list[Element] = []
    if dim == 1:
        for i in range(cells[0]):
            elements.append(Element(i, (cell_interval(0, i),)))
    else:
        for i0 in range(cells[0]):
            for i1 in range(cells[1]):
                eid = i0 * cells[1] + i1
                elements.append(Element(eid, (cell_interval(0, i0), cell_interval(1, i1))))

    def elem_id(idx: tuple[int, ...]) -> int:
        if dim == 1:
            return idx[0]
        return idx[0] * cells[1] + idx[1]

    faces: list[Face] = []
    elem_faces: list[list[tuple[int, str]]] = [[] for _ in elements]

    for axis in range(dim):
        n_layers = cells[axis]
        cross_axes = [a for a in range(dim) if a != axis]
        cross_counts = [cells[a] for a in cross_axes]
        n_cross = int(np.prod(cross_counts)) if cross_counts else 1
        for layer in range(n_layers + 1):
            coord = lows[axis] + layer * steps[axis]
            for k in range(n_cross):
                bounds = [None] * dim
                bounds[axis] = (coord, coord)
                idx_lo = [0] * dim
                for a, count in zip(cross_axes, cross_counts):
                    bounds[a] = cell_interval(a, k % count)
                    idx_lo[a] = k % count
                fid = len(faces)
                normal = np.zeros(dim)
                measure = 1.0 if dim == 1 else steps[cross_axes[0]]
                fclass = _face_class(domain, axis, layer, n_layers)
                if layer == 0 or layer == n_layers:
                    # boundary face: single adjacent element, outward normal
                    inside = layer == n_layers
                    idx_lo[axis] = n_layers - 1 if inside else 0
                    plus = elem_id(tuple(idx_lo))
                    normal[axis] = 1.0 if inside else -1.0
                    h_f = elements[plus].diameter if dim == 1 else measure
                    faces.append(
                        Face(fid, BOUNDARY, axis, tuple(bounds), plus, None,
                             normal, measure, h_f, fclass)
                    )
                    elem_faces[plus].append((fid, "plus"))
                else:
                    idx_lo[axis] = layer - 1
                    lower = elem_id(tuple(idx_lo))
                    idx_lo[axis] = layer
                    upper = elem_id(tuple(idx_lo))
                    # lower layer index is the smaller element id: plus side
                    normal[axis] = 1.0
                    if dim == 1:
                        h_f = 0.5 * (elements[lower].diameter + elements[upper].diameter)
                    else:
                        h_f = measure
                    faces.append(
                        Face(fid, INTERIOR, axis, tuple(bounds), lower, upper,
                             normal, measure, h_f, fclass)
                    )
                    elem_faces[lower].append((fid, "plus"))
                    elem_faces[upper].append((fid, "minus"))

    h = max(e.diameter for e in elements)
    return Partition(
        domain=domain,
        cells_per_axis=cells,
        elements=tuple(elements),
        faces=tuple(faces),
        h=h,
        _element_faces=tuple(tuple(fs) for fs in elem_faces),
    )


def faces_of(partition: Partition, element_id: int) -> list[tuple[Face, str]]:
    return partition.faces_of(element_id)
