"""Solution evaluation and the reported metrics.

A solved run is a Solution: the partition, the per-element bases and the
output-layer coefficient vectors.  Metrics: broken L2 / H1-seminorm errors
over the whole domain, final-time spatial slices for space-time runs, and
per-face jump / flux-jump / boundary-mismatch norms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import BOUNDARY, INTERIOR, Face, Partition
from .linsolve import LstsqReport
from .quadrature import face_rule, gauss_legendre, map_to_element, tensor_rule


@dataclass
class Solution:
    """Per-element output-layer coefficients over a partition's local bases."""

    partition: Partition
    bases: list
    coefficients: np.ndarray  # (N_e * M,) flat, element-major
    scheme: str
    report: LstsqReport | None = None

    def __post_init__(self):
        m = self.bases[0].n_features
        expected = self.partition.n_elements * m
        if self.coefficients.shape[0] != expected:
            raise ValueError(
                f"coefficient count {self.coefficients.shape[0]} != N_e*M = {expected}"
            )
        self.m = m

    def coeffs_of(self, element_id: int) -> np.ndarray:
        return self.coefficients[element_id * self.m:(element_id + 1) * self.m]

    def evaluate(self, element_id: int, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """u_h and grad u_h at points lying in the closure of the element."""
        if not 0 <= element_id < self.partition.n_elements:
            raise ValueError(f"invalid element id {element_id}")
        ev = self.bases[element_id].eval(points)
        c = self.coeffs_of(element_id)
        return ev.values @ c, np.einsum("qjd,j->qd", ev.gradients, c)


@dataclass
class ErrorReport:
    l2: float
    h1_semi: float
    per_face_jump_l2: dict[int, float] = field(default_factory=dict)
    per_face_flux_jump_l2: dict[int, float] = field(default_factory=dict)
    boundary_mismatch_l2: dict[int, float] = field(default_factory=dict)
    effective_rank: int | None = None
    residual_norm: float | None = None
    solver_path: str | None = None


def build_error_report(
    solution: Solution,
    exact,
    exact_grad,
    quad_n: int = 70,
    boundary_data=None,
    include_face_norms: bool = False,
) -> ErrorReport:
    """Bundle the reported metrics for one solved run.

    Face norms (jumps, flux jumps, boundary mismatch) are optional since they
    cost one face sweep; solver diagnostics are copied from the attached
    report when present.
    """
    if solution.partition.domain.temporal:
        l2, h1 = final_time_error_norms(solution, exact, exact_grad, quad_n)
    else:
        l2, h1 = error_norms(solution, exact, exact_grad, quad_n)
    report = ErrorReport(l2=l2, h1_semi=h1)
    if include_face_norms:
        for face in solution.partition.interior_faces():
            jump, flux = jump_norms(solution, face, quad_n)
            report.per_face_jump_l2[face.id] = jump
            report.per_face_flux_jump_l2[face.id] = flux
        if boundary_data is not None:
            for face in solution.partition.boundary_faces():
                report.boundary_mismatch_l2[face.id] = boundary_mismatch(
                    solution, face, boundary_data, quad_n
                )
    if solution.report is not None:
        report.effective_rank = solution.report.effective_rank
        report.residual_norm = solution.report.residual_norm
        report.solver_path = solution.report.method
    return report


def error_norms(solution: Solution, exact, exact_grad, quad_n: int = 70) -> tuple[float, float]:
    """Broken L2 error and H1-seminorm error against vectorized exact callables."""
    part = solution.partition
    rule = tensor_rule([quad_n] * part.domain.dim)
    l2_sq = 0.0
    h1_sq = 0.0
    for elem in part.elements:
        pts, w = map_to_element(rule, elem)
        uh, guh = solution.evaluate(elem.id, pts)
        diff = exact(pts) - uh
        l2_sq += float(w @ (diff * diff))
        if exact_grad is not None:
            gdiff = exact_grad(pts) - guh
            h1_sq += float(w @ np.sum(gdiff * gdiff, axis=1))
    return float(np.sqrt(l2_sq)), float(np.sqrt(h1_sq))


def final_time_error_norms(
    solution: Solution, exact, exact_grad, quad_n: int = 70
) -> tuple[float, float]:
    """L2 and spatial-H1 errors on the t = T slice of a space-time solution.

    The H1 seminorm uses the spatial derivative only, matching how the heat
    results are reported; ``exact_grad`` returns (d/dt, d/dx) rows.
    """
    part = solution.partition
    if not part.domain.temporal:
        raise ValueError("final-time norms need a space-time solution")
    t_final = part.domain.bounds[0][1]
    n_t, n_s = part.cells_per_axis
    rule = gauss_legendre(quad_n)
    l2_sq = 0.0
    h1_sq = 0.0
    for i_s in range(n_s):
        eid = (n_t - 1) * n_s + i_s
        elem = part.elements[eid]
        lo, hi = elem.bounds[1]
        x = 0.5 * (hi - lo) * (rule.nodes[:, 0] + 1.0) + lo
        w = rule.weights * 0.5 * (hi - lo)
        pts = np.column_stack([np.full_like(x, t_final), x])
        uh, guh = solution.evaluate(eid, pts)
        diff = exact(pts) - uh
        l2_sq += float(w @ (diff * diff))
        if exact_grad is not None:
            gdiff = exact_grad(pts)[:, 1] - guh[:, 1]
            h1_sq += float(w @ (gdiff * gdiff))
    return float(np.sqrt(l2_sq)), float(np.sqrt(h1_sq))


def jump_norms(solution: Solution, face: Face, n_quad: int = 70) -> tuple[float, float]:
    """L2(face) norms of the solution jump and the scalar normal-flux jump.

    1-d point faces return plain absolute values at the point.
    """
    if face.kind != INTERIOR:
        raise ValueError("jump norms are defined on interior faces")
    pts, w = face_rule(face, n_quad)
    up, gup = solution.evaluate(face.plus_element, pts)
    um, gum = solution.evaluate(face.minus_element, pts)
    jump = up - um
    flux_jump = (gup - gum) @ face.normal_plus
    if face.dim == 1:
        return float(abs(jump[0])), float(abs(flux_jump[0]))
    return (
        float(np.sqrt(w @ (jump * jump))),
        float(np.sqrt(w @ (flux_jump * flux_jump))),
    )


def boundary_mismatch(solution: Solution, face: Face, g, n_quad: int = 70) -> float:
    """L2(face) norm of u_h - g on a boundary face (absolute value in 1-d)."""
    if face.kind != BOUNDARY:
        raise ValueError("boundary mismatch is defined on boundary faces")
    pts, w = face_rule(face, n_quad)
    uh, _ = solution.evaluate(face.plus_element, pts)
    diff = uh - g(pts)
    if face.dim == 1:
        return float(abs(diff[0]))
    return float(np.sqrt(w @ (diff * diff)))
