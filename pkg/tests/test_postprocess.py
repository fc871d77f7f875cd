import numpy as np
import pytest

import rnn_dg as rd
from rnn_dg.basis import FeatureBasis

from conftest import median_l2, solve_to_solution


def make_solution(part, bases, coeffs):
    return rd.Solution(partition=part, bases=bases,
                       coefficients=np.asarray(coeffs, dtype=float), scheme="dg")


def test_zero_coefficients_evaluate_to_zero():
    part = rd.build_partition(rd.Domain(((0.0, 1.0),)), (2,))
    bases = rd.sample_bases(part, 1, 4, 1.0)
    sol = make_solution(part, bases, np.zeros(8))
    vals, grads = sol.evaluate(1, np.array([[0.6], [0.9]]))
    assert np.all(vals == 0.0)
    assert np.all(grads == 0.0)


def test_single_sine_feature_scaling():
    part = rd.build_partition(rd.Domain(((0.0, 1.0),)), (1,))
    basis = FeatureBasis(element_id=0, weights=np.array([[1.0]]),
                         biases=np.array([0.0]), activation="sin", w0=1.0, seed=0)
    sol = make_solution(part, [basis], [2.0])
    x = np.array([[0.3], [0.7]])
    vals, grads = sol.evaluate(0, x)
    assert np.allclose(vals, 2 * np.sin(x[:, 0]))
    assert np.allclose(grads[:, 0], 2 * np.cos(x[:, 0]))


def test_poly_solution_gradient():
    # reproduction case: u = x^2 exactly representable, gradient 2x
    dom = rd.Domain(((0.0, 1.0),))
    part = rd.build_partition(dom, (2,))
    bases = rd.polynomial_bases(part, 2)
    exact = lambda p: p[:, 0] ** 2
    grad = lambda p: (2 * p[:, 0])[:, None]
    prob = rd.EllipticProblem(domain=dom, source=lambda p: np.full(len(p), -2.0),
                              dirichlet=exact, exact=exact, exact_grad=grad)
    system = rd.assemble_lrnn_dg(prob, part, bases, rd.PenaltySpec(10.0), 20)
    sol = solve_to_solution(system, part, bases)
    x = np.array([[0.3], [0.45]])
    _, grads = sol.evaluate(0, x)
    assert np.allclose(grads[:, 0], 2 * x[:, 0], atol=1e-10)
    l2, h1 = rd.error_norms(sol, exact, grad, 20)
    assert l2 <= 1e-9 and h1 <= 1e-9


def test_error_norm_closed_form():
    # u_h = 0 against exact = sin(pi x): L2 error sqrt(1/2)
    part = rd.build_partition(rd.Domain(((0.0, 1.0),)), (4,))
    bases = rd.polynomial_bases(part, 1)
    sol = make_solution(part, bases, np.zeros(8))
    l2, h1 = rd.error_norms(sol, lambda p: np.sin(np.pi * p[:, 0]),
                            lambda p: (np.pi * np.cos(np.pi * p[:, 0]))[:, None], 40)
    assert l2 == pytest.approx(np.sqrt(0.5), abs=1e-10)
    assert h1 == pytest.approx(np.pi * np.sqrt(0.5), abs=1e-9)


def test_bad_element_id():
    part = rd.build_partition(rd.Domain(((0.0, 1.0),)), (2,))
    bases = rd.polynomial_bases(part, 1)
    sol = make_solution(part, bases, np.zeros(4))
    with pytest.raises(ValueError):
        sol.evaluate(5, np.array([[0.1]]))


def test_coefficient_count_validated():
    part = rd.build_partition(rd.Domain(((0.0, 1.0),)), (2,))
    bases = rd.polynomial_bases(part, 1)
    with pytest.raises(ValueError):
        make_solution(part, bases, np.zeros(5))


def test_jump_norms_continuous_reproduction():
    # a globally continuous solved field has machine-zero jumps
    dom = rd.Domain(((0.0, 1.0),))
    exact = lambda p: p[:, 0] * (1 - p[:, 0])
    grad = lambda p: (1 - 2 * p[:, 0])[:, None]
    prob = rd.EllipticProblem(domain=dom, source=lambda p: np.full(len(p), 2.0),
                              dirichlet=exact, exact=exact, exact_grad=grad)
    part = rd.build_partition(dom, (4,))
    bases = rd.polynomial_bases(part, 2)
    system = rd.assemble_lrnn_dg(prob, part, bases, rd.PenaltySpec(10.0), 20)
    sol = solve_to_solution(system, part, bases)
    for face in part.interior_faces():
        jump, flux = rd.jump_norms(sol, face, 20)
        assert jump <= 1e-10
        assert flux <= 1e-9
    for face in part.boundary_faces():
        assert rd.boundary_mismatch(sol, face, exact, 20) <= 1e-10


def test_point_face_jump_of_step_field():
    # element 0 carries u=0, element 1 carries u=1: point-face jump is 1
    part = rd.build_partition(rd.Domain(((0.0, 1.0),)), (2,))
    bases = rd.polynomial_bases(part, 0)
    sol = make_solution(part, bases, [0.0, 1.0])
    face = part.interior_faces()[0]
    jump, flux = rd.jump_norms(sol, face, 10)
    assert jump == pytest.approx(1.0)
    assert flux == pytest.approx(0.0)


def test_jump_norm_invariant_under_side_swap():
    # |u+ - u-| computed against the stored orientation equals the value
    # computed with the roles of the neighbors exchanged
    part = rd.build_partition(rd.Domain(((0.0, 1.0), (0.0, 1.0))), (2, 1))
    bases = rd.sample_bases(part, 9, 5, 1.0)
    rng = np.random.default_rng(0)
    sol = make_solution(part, bases, rng.normal(size=10))
    face = part.interior_faces()[0]
    jump, flux = rd.jump_norms(sol, face, 15)
    pts, w = rd.face_rule(face, 15)
    up, gup = sol.evaluate(face.plus_element, pts)
    um, gum = sol.evaluate(face.minus_element, pts)
    jump_swapped = float(np.sqrt(w @ (um - up) ** 2))
    flux_swapped = float(np.sqrt(w @ ((gum - gup) @ (-face.normal_plus)) ** 2))
    assert jump == pytest.approx(jump_swapped, rel=1e-12)
    assert flux == pytest.approx(flux_swapped, rel=1e-12)


def test_jump_norms_kind_validation():
    part = rd.build_partition(rd.Domain(((0.0, 1.0),)), (2,))
    bases = rd.polynomial_bases(part, 0)
    sol = make_solution(part, bases, [0.0, 1.0])
    with pytest.raises(ValueError):
        rd.jump_norms(sol, part.boundary_faces()[0], 5)
    with pytest.raises(ValueError):
        rd.boundary_mismatch(sol, part.interior_faces()[0], lambda p: np.zeros(len(p)), 5)


def test_final_time_norms_match_slice():
    # space-time reproduction: final-time norms vanish for an in-span solution
    prob_dom = rd.Domain(((0.0, 1.0), (0.0, 1.0)), temporal=True)
    exact = lambda p: p[:, 1] * (1 - p[:, 1])
    grad = lambda p: np.column_stack([np.zeros(len(p)), 1 - 2 * p[:, 1]])
    prob = rd.HeatProblem(domain=prob_dom, diffusivity=2.0,
                          source=lambda p: np.full(len(p), 4.0),
                          initial=lambda x: x[:, 0] * (1 - x[:, 0]),
                          boundary=lambda p: np.zeros(len(p)),
                          exact=exact, exact_grad=grad)
    part = rd.build_partition(prob_dom, (2, 2))
    bases = rd.polynomial_bases(part, 2)
    colloc = rd.build_collocation(part, 5)
    system = rd.assemble_st_lrnn_c0dg(prob, part, bases, colloc, 20)
    sol = solve_to_solution(system, part, bases)
    l2, h1 = rd.final_time_error_norms(sol, exact, grad, 30)
    assert l2 <= 1e-10 and h1 <= 1e-9
    with pytest.raises(ValueError):
        flat_part = rd.build_partition(rd.Domain(((0.0, 1.0),)), (2,))
        flat_bases = rd.polynomial_bases(flat_part, 1)
        rd.final_time_error_norms(make_solution(flat_part, flat_bases, np.zeros(4)),
                                  exact, grad, 10)


def test_build_error_report_bundles_everything():
    dom = rd.Domain(((0.0, 1.0),))
    exact = lambda p: p[:, 0] * (1 - p[:, 0])
    grad = lambda p: (1 - 2 * p[:, 0])[:, None]
    prob = rd.EllipticProblem(domain=dom, source=lambda p: np.full(len(p), 2.0),
                              dirichlet=exact, exact=exact, exact_grad=grad)
    part = rd.build_partition(dom, (4,))
    bases = rd.polynomial_bases(part, 2)
    system = rd.assemble_lrnn_dg(prob, part, bases, rd.PenaltySpec(10.0), 20)
    sol = solve_to_solution(system, part, bases)
    report = rd.build_error_report(sol, exact, grad, 20, boundary_data=exact,
                                   include_face_norms=True)
    assert report.l2 <= 1e-10
    assert set(report.per_face_jump_l2) == {f.id for f in part.interior_faces()}
    assert set(report.boundary_mismatch_l2) == {f.id for f in part.boundary_faces()}
    assert all(v >= 0 for v in report.per_face_jump_l2.values())
    assert report.solver_path in ("spd", "least_squares")
    assert report.effective_rank is not None


def test_constraint_scale_multiplies_rows():
    dom = rd.Domain(((0.0, 1.0),))
    exact = lambda p: p[:, 0] * (1 - p[:, 0])
    prob = rd.EllipticProblem(domain=dom, source=lambda p: np.full(len(p), 2.0),
                              dirichlet=exact)
    part = rd.build_partition(dom, (3,))
    bases = rd.polynomial_bases(part, 2)
    colloc = rd.build_collocation(part, 3)
    base = rd.assemble_lrnn_c0dg(prob, part, bases, colloc, 20)
    scaled = rd.assemble_lrnn_c0dg(prob, part, bases, colloc, 20, constraint_scale=2.0)
    assert np.allclose(scaled.a2, 2.0 * base.a2)
    assert np.allclose(scaled.l2, 2.0 * base.l2)
    assert np.array_equal(scaled.a1, base.a1)


@pytest.mark.slow
def test_paper_error_norms_window_1d_dg():
    # lambda=10, h=2^-4, M=80 (published value 2.84e-10)
    prob = rd.helmholtz_1d(10.0)
    part = rd.build_partition(prob.domain, (16,))
    errs = []
    for seed in (1, 2, 3, 4, 5):
        bases = rd.sample_bases(part, seed, 80, 5.5)
        system = rd.assemble_lrnn_dg(prob, part, bases, rd.PenaltySpec(0.0625), 70)
        sol = solve_to_solution(system, part, bases)
        errs.append(rd.error_norms(sol, prob.exact, prob.exact_grad, 70)[0])
    assert 1e-11 <= median_l2(errs) <= 1e-8, errs
