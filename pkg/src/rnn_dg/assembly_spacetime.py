"""Space-time schemes for u_t - lam * u_xx = f on a slab grid of I x Omega.

Axis 0 is time, axis 1 the (single) space dimension; each element is a slab
sigma = I_i x K carrying its own 2-input local basis.  One global system is
assembled per run; there is no time marching, and the solution is queryable at
any (t, x).

Scheme shapes mirror the elliptic module:

* ``assemble_st_lrnn_dg``  - square system.  Volume u_t*v + lam grad.grad;
  upwind-flavoured temporal face terms (jump/average coupling at slab
  interfaces plus a temporal penalty whose sign is configurable, see below;
  the t=0 cross-section contributes u(0+)v(0+) to the matrix and the initial
  load to the rhs; nothing is added at t=T); interior-penalty spatial face
  terms with the fluxes scaled by lam.
* ``assemble_st_lrnn_c0dg`` - no temporal/penalty face terms at all; those
  continuity requirements move into collocation rows (Dirichlet, initial
  value, continuity across spatial and temporal interfaces).
* ``assemble_st_lrnn_c1dg`` - per-slab weak rows (own trace on the slab's
  spatial sides only) plus collocation rows including spatial normal-flux
  jumps; no flux rows across temporal faces.

``temporal_penalty_sign=+1`` keeps the temporal penalty term with the sign the
derivation prints (a minus in front of eta*[[u]]*[[v]] summed over interior
time cross-sections); ``-1`` flips it.  An energy argument marks the printed
sign as anti-dissipative, but under rank-truncated least squares both signs
converge on the published test cases and the printed one is the default;
reproduction of exact in-span solutions holds either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .assembly_elliptic import (
    AssembledSystem,
    C0_JUMP,
    DIRICHLET,
    FLUX_JUMP,
    INITIAL_VALUE,
    PenaltySpec,
    _check_bases,
    _face_sides,
    _stacked_buffers,
    _warn_quadrature_resolution,
    _wdot,
    count_constraint_rows,
)
from .collocation import CollocationSet
from .geometry import BOUNDARY, FINAL, INITIAL, SPATIAL, TEMPORAL, Domain, Partition
from .quadrature import face_rule, map_to_element, tensor_rule


@dataclass(frozen=True)
class HeatProblem:
    """u_t - diffusivity * u_xx = source on I x Omega with initial and Dirichlet data."""

    domain: Domain
    diffusivity: float
    source: Callable[[np.ndarray], np.ndarray]
    initial: Callable[[np.ndarray], np.ndarray]   # spatial points (n, 1)
    boundary: Callable[[np.ndarray], np.ndarray]  # space-time points (n, 2)
    exact: Callable[[np.ndarray], np.ndarray] | None = None
    exact_grad: Callable[[np.ndarray], np.ndarray] | None = None  # (n, 2): (d/dt, d/dx)

    def __post_init__(self):
        if self.diffusivity <= 0:
            raise ValueError("diffusivity must be > 0")
        if not self.domain.temporal:
            raise ValueError("heat problems need a temporal (space-time) domain")


def _require_slab(partition: Partition):
    if not partition.domain.temporal:
        raise ValueError("expected a space-time slab partition (domain.temporal=True)")


def _volume_terms_st(problem, partition, bases, quad_n, a1, l1, m):
    rule = tensor_rule([quad_n, quad_n])
    lam = problem.diffusivity
    for k, elem in enumerate(partition.elements):
        pts, w = map_to_element(rule, elem)
        ev = bases[k].eval(pts)
        dt = np.ascontiguousarray(ev.gradients[:, :, 0])
        dx = np.ascontiguousarray(ev.gradients[:, :, 1])
        sl = slice(k * m, (k + 1) * m)
        a1[sl, sl] += _wdot(ev.values, w, dt) + lam * _wdot(dx, w, dx)
        l1[sl] += ev.values.T @ (w * problem.source(pts))


def assemble_st_lrnn_dg(
    problem: HeatProblem,
    partition: Partition,
    bases,
    penalty: PenaltySpec,
    quad_n: int = 70,
    temporal_penalty_sign: int = +1,
) -> AssembledSystem:
    """One square space-time system; solved in a single least-squares shot."""
    _require_slab(partition)
    if temporal_penalty_sign not in (+1, -1):
        raise ValueError("temporal_penalty_sign must be +1 or -1")
    m = _check_bases(partition, bases)
    _warn_quadrature_resolution(m, quad_n)
    lam = problem.diffusivity
    n = partition.n_elements * m
    a1 = np.zeros((n, n))
    l1 = np.zeros(n)
    _volume_terms_st(problem, partition, bases, quad_n, a1, l1, m)

    for face in partition.faces:
        if face.face_class == FINAL:
            continue  # the t=T trace is the solution itself: no contribution
        pts, w = face_rule(face, quad_n)
        if face.face_class == INITIAL:
            k = face.plus_element
            sl = slice(k * m, (k + 1) * m)
            phi = bases[k].eval(pts).values
            a1[sl, sl] += _wdot(phi, w, phi)
            l1[sl] += phi.T @ (w * problem.initial(pts[:, 1:]))
        elif face.face_class == TEMPORAL:
            eta = penalty.eta(face)
            sides = _face_sides(face, bases, pts)
            for kb, sb, phib, _ in sides:
                rows = slice(kb * m, (kb + 1) * m)
                for ka, sa, phia, _ in sides:
                    cols = slice(ka * m, (ka + 1) * m)
                    a1[rows, cols] += (
                        -0.5 * sa * _wdot(phib, w, phia)
                        - temporal_penalty_sign * eta * sa * sb * _wdot(phib, w, phia)
                    )
        else:  # spatial faces
            eta = penalty.eta(face)
            sides = _face_sides(face, bases, pts)
            if face.kind == BOUNDARY:
                _, _, phi, dn = sides[0]
                sl = slice(face.plus_element * m, (face.plus_element + 1) * m)
                a1[sl, sl] += (
                    -lam * _wdot(phi, w, dn) - lam * _wdot(dn, w, phi)
                    + eta * _wdot(phi, w, phi)
                )
                g = problem.boundary(pts)
                l1[sl] += -lam * dn.T @ (w * g) + eta * phi.T @ (w * g)
            else:
                for kb, sb, phib, dnb in sides:
                    rows = slice(kb * m, (kb + 1) * m)
                    for ka, sa, phia, dna in sides:
                        cols = slice(ka * m, (ka + 1) * m)
                        a1[rows, cols] += (
                            -0.5 * lam * sb * _wdot(phib, w, dna)
                            - 0.5 * lam * sa * _wdot(dnb, w, phia)
                            + eta * sa * sb * _wdot(phib, w, phia)
                        )
    return AssembledSystem(
        a1=a1, l1=l1, a2=np.zeros((0, n)), l2=np.zeros(0), row_labels=[],
        scheme="dg", n_elements=partition.n_elements, m=m, symmetric=False,
        meta={"temporal_penalty_sign": temporal_penalty_sign},
    )


def _fill_constraint_rows_st(partition, bases, colloc, m, problem, include_flux,
                             a2, l2, scale=1.0):
    labels: list[tuple[int, int, str]] = []
    i = 0
    for face in partition.faces:
        if face.face_class == FINAL:
            continue
        pts = colloc.for_face(face)
        if face.kind == BOUNDARY:
            k = face.plus_element
            phi = bases[k].eval(pts).values
            if face.face_class == INITIAL:
                vals = problem.initial(pts[:, 1:])
                kind = INITIAL_VALUE
            else:
                vals = problem.boundary(pts)
                kind = DIRICHLET
            cols = slice(k * m, (k + 1) * m)
            for j in range(len(pts)):
                a2[i, cols] = scale * phi[j]
                l2[i] = scale * float(vals[j])
                labels.append((face.id, j, kind))
                i += 1
        else:
            sides = _face_sides(face, bases, pts)
            (kp, _, phip, dnp), (km, _, phim, dnm) = sides
            for j in range(len(pts)):
                a2[i, kp * m:(kp + 1) * m] = scale * phip[j]
                a2[i, km * m:(km + 1) * m] = -scale * phim[j]
                labels.append((face.id, j, C0_JUMP))
                i += 1
            if include_flux and face.face_class == SPATIAL:
                for j in range(len(pts)):
                    a2[i, kp * m:(kp + 1) * m] = scale * dnp[j]
                    a2[i, km * m:(km + 1) * m] = -scale * dnm[j]
                    labels.append((face.id, j, FLUX_JUMP))
                    i += 1
    return labels


def assemble_st_lrnn_c0dg(
    problem: HeatProblem,
    partition: Partition,
    bases,
    colloc: CollocationSet,
    quad_n: int = 70,
    symmetric: bool = True,
    constraint_scale: float = 1.0,
) -> AssembledSystem:
    """Penalty-free space-time Galerkin block plus collocation constraints."""
    _require_slab(partition)
    m = _check_bases(partition, bases)
    _warn_quadrature_resolution(m, quad_n)
    lam = problem.diffusivity
    n_rows = count_constraint_rows(partition, colloc, include_flux=False)
    stacked, a1, a2, l1, l2 = _stacked_buffers(partition, m, n_rows)
    _volume_terms_st(problem, partition, bases, quad_n, a1, l1, m)

    for face in partition.faces:
        if face.face_class != SPATIAL:
            continue  # temporal coupling is enforced by the constraint rows
        pts, w = face_rule(face, quad_n)
        sides = _face_sides(face, bases, pts)
        if face.kind == BOUNDARY:
            _, _, phi, dn = sides[0]
            sl = slice(face.plus_element * m, (face.plus_element + 1) * m)
            a1[sl, sl] += -lam * _wdot(phi, w, dn)
            if symmetric:
                a1[sl, sl] += -lam * _wdot(dn, w, phi)
                l1[sl] += -lam * dn.T @ (w * problem.boundary(pts))
        else:
            for kb, sb, phib, dnb in sides:
                rows = slice(kb * m, (kb + 1) * m)
                for ka, sa, phia, dna in sides:
                    cols = slice(ka * m, (ka + 1) * m)
                    block = -0.5 * lam * sb * _wdot(phib, w, dna)
                    if symmetric:
                        block = block - 0.5 * lam * sa * _wdot(dnb, w, phia)
                    a1[rows, cols] += block

    labels = _fill_constraint_rows_st(partition, bases, colloc, m, problem,
                                      include_flux=False, a2=a2, l2=l2,
                                      scale=constraint_scale)
    return AssembledSystem(
        a1=a1, l1=l1, a2=a2, l2=l2, row_labels=labels,
        scheme="c0dg" if symmetric else "c0dg_nonsym",
        n_elements=partition.n_elements, m=m, symmetric=False,
        stacked=stacked,
        rebuild=lambda: assemble_st_lrnn_c0dg(problem, partition, bases, colloc,
                                              quad_n, symmetric, constraint_scale),
    )


def assemble_st_lrnn_c1dg(
    problem: HeatProblem,
    partition: Partition,
    bases,
    colloc: CollocationSet,
    quad_n: int = 70,
    constraint_scale: float = 1.0,
) -> AssembledSystem:
    """Per-slab weak rows plus continuity/flux/boundary/initial collocation rows."""
    _require_slab(partition)
    m = _check_bases(partition, bases)
    _warn_quadrature_resolution(m, quad_n)
    lam = problem.diffusivity
    n_rows = count_constraint_rows(partition, colloc, include_flux=True,
                                   flux_class=SPATIAL)
    stacked, a1, a2, l1, l2 = _stacked_buffers(partition, m, n_rows)
    _volume_terms_st(problem, partition, bases, quad_n, a1, l1, m)

    for k in range(partition.n_elements):
        sl = slice(k * m, (k + 1) * m)
        for face, side in partition.faces_of(k):
            if face.face_class != SPATIAL:
                continue  # I_i x dK: the slab's spatial sides only
            pts, w = face_rule(face, quad_n)
            s = 1.0 if side == "plus" else -1.0
            ev = bases[k].eval(pts)
            dn = ev.gradients @ face.normal_plus
            a1[sl, sl] += -lam * s * _wdot(ev.values, w, dn)

    labels = _fill_constraint_rows_st(partition, bases, colloc, m, problem,
                                      include_flux=True, a2=a2, l2=l2,
                                      scale=constraint_scale)
    return AssembledSystem(
        a1=a1, l1=l1, a2=a2, l2=l2, row_labels=labels, scheme="c1dg",
        n_elements=partition.n_elements, m=m, symmetric=False,
        stacked=stacked,
        rebuild=lambda: assemble_st_lrnn_c1dg(problem, partition, bases, colloc,
                                              quad_n, constraint_scale),
    )
