"""Stationary schemes for -Laplace(u) + c*u = F with Dirichlet data g.

Three assemblies over a shared partition/basis layer:

* ``assemble_lrnn_dg``   - interior-penalty Galerkin system (square, symmetric;
  intended SPD for large enough penalty).  Volume term grad.grad + c-mass;
  face terms -{grad u}.[[v]] - [[u]].{grad v} + eta [[u]].[[v]] with
  eta = eta_e / h_f, single-sided conventions on the boundary.
* ``assemble_lrnn_c0dg`` - penalty-free Galerkin block plus pointwise
  constraint rows: continuity [[u]] = 0 at interior collocation points and
  u = g at boundary ones.  ``symmetric=False`` drops the -[[u]].{grad v}
  symmetrization term (and with it the boundary g-flux term on the rhs).
* ``assemble_lrnn_c1dg`` - per-element weak rows (the element's own trace
  only, so the Galerkin block is block-diagonal) plus continuity, normal-flux
  jump and Dirichlet constraint rows.

All problem callables are vectorized: they take points of shape (n, d) and
return values of shape (n,).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .collocation import CollocationSet
from .geometry import Domain, Partition
from .quadrature import face_rule, map_to_element, tensor_rule

logger = logging.getLogger(__name__)

DIRICHLET = "dirichlet"
C0_JUMP = "c0-jump"
FLUX_JUMP = "flux-jump"
INITIAL_VALUE = "initial"


@dataclass(frozen=True)
class EllipticProblem:
    """-Laplace(u) + reaction*u = source on the domain, u = dirichlet on its boundary.

    A Helmholtz problem written as u'' - lam*u = f maps to
    reaction = lam, source = -f.
    """

    domain: Domain
    source: Callable[[np.ndarray], np.ndarray]
    dirichlet: Callable[[np.ndarray], np.ndarray]
    reaction: float = 0.0
    exact: Callable[[np.ndarray], np.ndarray] | None = None
    exact_grad: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.reaction < 0:
            raise ValueError("reaction coefficient must be >= 0")


@dataclass(frozen=True)
class PenaltySpec:
    """Per-face penalty eta = eta_e / h_f."""

    eta_e: float

    def __post_init__(self):
        if self.eta_e <= 0:
            raise ValueError("penalty constant eta_e must be > 0")

    def eta(self, face) -> float:
        return self.eta_e / face.h_f


@dataclass
class AssembledSystem:
    """Square Galerkin block (a1, l1) and stacked constraint block (a2, l2).

    For constraint schemes a1 and a2 are views into one contiguous stacked
    buffer (``stacked``), so the solver can hand the system to LAPACK without
    a second full-size copy; ``rebuild`` re-runs the assembly (deterministic)
    when the solver consumed the buffer destructively and still needs the
    exact residual.
    """

    a1: np.ndarray
    l1: np.ndarray
    a2: np.ndarray
    l2: np.ndarray
    row_labels: list[tuple[int, int, str]]
    scheme: str
    n_elements: int
    m: int
    symmetric: bool = False
    meta: dict = field(default_factory=dict)
    stacked: np.ndarray | None = field(default=None, repr=False)
    rebuild: object = field(default=None, repr=False)

    @property
    def stacked_rhs(self) -> np.ndarray:
        return np.concatenate([self.l1, self.l2])


def _check_bases(partition: Partition, bases) -> int:
    if len(bases) != partition.n_elements:
        raise ValueError(
            f"need one basis per element: got {len(bases)} for "
            f"{partition.n_elements} elements"
        )
    m = bases[0].n_features
    for k, b in enumerate(bases):
        if b.element_id != k:
            raise ValueError(f"basis {k} carries element_id {b.element_id}")
        if b.n_features != m:
            raise ValueError("all elements must share the same hidden width M")
    return m


def _warn_quadrature_resolution(m: int, quad_n: int):
    if m > 2 * quad_n:
        logger.warning(
            "hidden width M=%d exceeds 2x quadrature points per axis (%d); "
            "Gram matrices are quadrature-rank-limited", m, quad_n,
        )


def _wdot(x: np.ndarray, w: np.ndarray, y: np.ndarray) -> np.ndarray:
    """sum_q w_q x[q,i] y[q,j] -> (M_x, M_y)."""
    # strided views (gradient-component slices) would knock matmul off the
    # BLAS fast path; one contiguous copy is far cheaper
    if not x.flags.c_contiguous:
        x = np.ascontiguousarray(x)
    return x.T @ (w[:, None] * y)


def _volume_terms(problem, partition, bases, quad_n, out_a1, out_l1, m):
    """grad.grad + reaction-mass blocks and the source load, per element."""
    rule = tensor_rule([quad_n] * partition.domain.dim)
    c = problem.reaction
    for k, elem in enumerate(partition.elements):
        pts, w = map_to_element(rule, elem)
        ev = bases[k].eval(pts)
        sl = slice(k * m, (k + 1) * m)
        block = np.zeros((m, m))
        for a in range(partition.domain.dim):
            da = np.ascontiguousarray(ev.gradients[:, :, a])
            block += _wdot(da, w, da)
        if c != 0.0:
            block += c * _wdot(ev.values, w, ev.values)
        out_a1[sl, sl] += block
        out_l1[sl] += ev.values.T @ (w * problem.source(pts))


def _face_sides(face, bases, pts):
    """(element_id, sign, values, normal_derivative) for each side of a face."""
    n = face.normal_plus
    ev_p = bases[face.plus_element].eval(pts)
    sides = [(face.plus_element, 1.0, ev_p.values, ev_p.gradients @ n)]
    if face.minus_element is not None:
        ev_m = bases[face.minus_element].eval(pts)
        sides.append((face.minus_element, -1.0, ev_m.values, ev_m.gradients @ n))
    return sides


def assemble_lrnn_dg(
    problem: EllipticProblem,
    partition: Partition,
    bases,
    penalty: PenaltySpec,
    quad_n: int = 70,
) -> AssembledSystem:
    """Interior-penalty scheme: one square symmetric system, no constraint rows."""
    m = _check_bases(partition, bases)
    _warn_quadrature_resolution(m, quad_n)
    n = partition.n_elements * m
    a1 = np.zeros((n, n))
    l1 = np.zeros(n)
    _volume_terms(problem, partition, bases, quad_n, a1, l1, m)

    for face in partition.faces:
        pts, w = face_rule(face, quad_n)
        eta = penalty.eta(face)
        sides = _face_sides(face, bases, pts)
        if face.kind == "boundary":
            _, _, phi, dn = sides[0]
            sl = slice(face.plus_element * m, (face.plus_element + 1) * m)
            a1[sl, sl] += -_wdot(phi, w, dn) - _wdot(dn, w, phi) + eta * _wdot(phi, w, phi)
            g = problem.dirichlet(pts)
            l1[sl] += -dn.T @ (w * g) + eta * phi.T @ (w * g)
        else:
            for kb, sb, phib, dnb in sides:
                rows = slice(kb * m, (kb + 1) * m)
                for ka, sa, phia, dna in sides:
                    cols = slice(ka * m, (ka + 1) * m)
                    a1[rows, cols] += (
                        -0.5 * sb * _wdot(phib, w, dna)
                        - 0.5 * sa * _wdot(dnb, w, phia)
                        + eta * sa * sb * _wdot(phib, w, phia)
                    )
    return AssembledSystem(
        a1=a1, l1=l1, a2=np.zeros((0, n)), l2=np.zeros(0), row_labels=[],
        scheme="dg", n_elements=partition.n_elements, m=m, symmetric=True,
    )


def assemble_jump_penalty_gram(
    partition: Partition, bases, penalty: PenaltySpec, quad_n: int = 70
) -> np.ndarray:
    """The pure penalty term sum_f eta int [[phi_j]].[[phi_i]] alone (all faces)."""
    m = _check_bases(partition, bases)
    n = partition.n_elements * m
    a = np.zeros((n, n))
    for face in partition.faces:
        pts, w = face_rule(face, quad_n)
        eta = penalty.eta(face)
        sides = _face_sides(face, bases, pts)
        for kb, sb, phib, _ in sides:
            rows = slice(kb * m, (kb + 1) * m)
            for ka, sa, phia, _ in sides:
                cols = slice(ka * m, (ka + 1) * m)
                a[rows, cols] += eta * sa * sb * _wdot(phib, w, phia)
    return a


def count_constraint_rows(partition: Partition, colloc: CollocationSet,
                          include_flux: bool, flux_class: str | None = None) -> int:
    """Row count of the constraint block (final-time faces carry none)."""
    total = 0
    for face in partition.faces:
        if face.face_class == "final":
            continue
        npts = len(colloc.for_face(face))
        if npts == 0:
            raise ValueError(f"face {face.id} has an empty collocation set")
        total += npts
        if (include_flux and face.kind == "interior"
                and (flux_class is None or face.face_class == flux_class)):
            total += npts
    return total


def _stacked_buffers(partition, m, n_rows):
    """One contiguous [A1; A2] buffer with the two blocks as views."""
    n = partition.n_elements * m
    stacked = np.zeros((n + n_rows, n))
    return stacked, stacked[:n], stacked[n:], np.zeros(n), np.zeros(n_rows)


def _fill_constraint_rows_elliptic(partition, bases, colloc, m, dirichlet,
                                   include_flux, a2, l2, scale=1.0):
    labels: list[tuple[int, int, str]] = []
    i = 0
    for face in partition.faces:
        pts = colloc.for_face(face)
        if face.kind == "boundary":
            phi = bases[face.plus_element].eval(pts).values
            g = dirichlet(pts)
            cols = slice(face.plus_element * m, (face.plus_element + 1) * m)
            for j in range(len(pts)):
                a2[i, cols] = scale * phi[j]
                l2[i] = scale * float(g[j])
                labels.append((face.id, j, DIRICHLET))
                i += 1
        else:
            sides = _face_sides(face, bases, pts)
            (kp, _, phip, dnp), (km, _, phim, dnm) = sides
            for j in range(len(pts)):
                a2[i, kp * m:(kp + 1) * m] = scale * phip[j]
                a2[i, km * m:(km + 1) * m] = -scale * phim[j]
                labels.append((face.id, j, C0_JUMP))
                i += 1
            if include_flux:
                # [grad u].n = dn_plus - dn_minus, both taken along normal_plus
                for j in range(len(pts)):
                    a2[i, kp * m:(kp + 1) * m] = scale * dnp[j]
                    a2[i, km * m:(km + 1) * m] = -scale * dnm[j]
                    labels.append((face.id, j, FLUX_JUMP))
                    i += 1
    return labels


def assemble_lrnn_c0dg(
    problem: EllipticProblem,
    partition: Partition,
    bases,
    colloc: CollocationSet,
    quad_n: int = 70,
    symmetric: bool = True,
    constraint_scale: float = 1.0,
) -> AssembledSystem:
    """Penalty-free Galerkin block stacked on continuity/boundary collocation rows."""
    m = _check_bases(partition, bases)
    _warn_quadrature_resolution(m, quad_n)
    n_rows = count_constraint_rows(partition, colloc, include_flux=False)
    stacked, a1, a2, l1, l2 = _stacked_buffers(partition, m, n_rows)
    _volume_terms(problem, partition, bases, quad_n, a1, l1, m)

    for face in partition.faces:
        pts, w = face_rule(face, quad_n)
        sides = _face_sides(face, bases, pts)
        if face.kind == "boundary":
            _, _, phi, dn = sides[0]
            sl = slice(face.plus_element * m, (face.plus_element + 1) * m)
            a1[sl, sl] += -_wdot(phi, w, dn)
            if symmetric:
                a1[sl, sl] += -_wdot(dn, w, phi)
                l1[sl] += -dn.T @ (w * problem.dirichlet(pts))
        else:
            for kb, sb, phib, dnb in sides:
                rows = slice(kb * m, (kb + 1) * m)
                for ka, sa, phia, dna in sides:
                    cols = slice(ka * m, (ka + 1) * m)
                    block = -0.5 * sb * _wdot(phib, w, dna)
                    if symmetric:
                        block = block - 0.5 * sa * _wdot(dnb, w, phia)
                    a1[rows, cols] += block

    labels = _fill_constraint_rows_elliptic(
        partition, bases, colloc, m, problem.dirichlet, include_flux=False,
        a2=a2, l2=l2, scale=constraint_scale,
    )
    return AssembledSystem(
        a1=a1, l1=l1, a2=a2, l2=l2, row_labels=labels,
        scheme="c0dg" if symmetric else "c0dg_nonsym",
        n_elements=partition.n_elements, m=m, symmetric=symmetric,
        stacked=stacked,
        rebuild=lambda: assemble_lrnn_c0dg(problem, partition, bases, colloc,
                                           quad_n, symmetric, constraint_scale),
    )


def c1dg_galerkin_block(
    problem: EllipticProblem, partition: Partition, bases, quad_n: int = 70
) -> tuple[np.ndarray, np.ndarray]:
    """The collocation-free part of the C1 scheme: per-element weak rows.

    Independent of the collocation set, so sweeps over collocation counts can
    assemble it once.
    """
    m = _check_bases(partition, bases)
    _warn_quadrature_resolution(m, quad_n)
    n = partition.n_elements * m
    a1 = np.zeros((n, n))
    l1 = np.zeros(n)
    _volume_terms(problem, partition, bases, quad_n, a1, l1, m)

    for k in range(partition.n_elements):
        sl = slice(k * m, (k + 1) * m)
        for face, side in partition.faces_of(k):
            pts, w = face_rule(face, quad_n)
            s = 1.0 if side == "plus" else -1.0  # n_K = s * normal_plus
            ev = bases[k].eval(pts)
            dn = ev.gradients @ face.normal_plus
            a1[sl, sl] += -s * _wdot(ev.values, w, dn)
    return a1, l1


def assemble_lrnn_c1dg(
    problem: EllipticProblem,
    partition: Partition,
    bases,
    colloc: CollocationSet,
    quad_n: int = 70,
    galerkin: tuple[np.ndarray, np.ndarray] | None = None,
    constraint_scale: float = 1.0,
) -> AssembledSystem:
    """Per-element weak rows plus continuity, flux-jump and Dirichlet rows.

    Row block K tests only K's own features; the boundary integral uses the
    element's own trace, so a1 is block-diagonal and all cross-element
    coupling lives in the constraint block.  ``galerkin`` accepts a
    precomputed ``c1dg_galerkin_block`` result.
    """
    m = _check_bases(partition, bases)
    n_rows = count_constraint_rows(partition, colloc, include_flux=True)
    stacked, a1, a2, l1, l2 = _stacked_buffers(partition, m, n_rows)
    if galerkin is None:
        g_a1, g_l1 = c1dg_galerkin_block(problem, partition, bases, quad_n)
    else:
        g_a1, g_l1 = galerkin
    a1[:] = g_a1
    l1[:] = g_l1
    labels = _fill_constraint_rows_elliptic(
        partition, bases, colloc, m, problem.dirichlet, include_flux=True,
        a2=a2, l2=l2, scale=constraint_scale,
    )
    return AssembledSystem(
        a1=a1, l1=l1, a2=a2, l2=l2, row_labels=labels, scheme="c1dg",
        n_elements=partition.n_elements, m=m, symmetric=False,
        stacked=stacked,
        rebuild=lambda: assemble_lrnn_c1dg(problem, partition, bases, colloc,
                                           quad_n, None, constraint_scale),
    )
