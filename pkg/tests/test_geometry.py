import pytest

from rnn_dg.geometry import (
    BOUNDARY,
    Domain,
    FINAL,
    INITIAL,
    INTERIOR,
    SPATIAL,
    TEMPORAL,
    build_partition,
    faces_of,
)


def test_domain_validation():
    with pytest.raises(ValueError):
        Domain(((1.0, 0.0),))
    with pytest.raises(ValueError):
        Domain(((0.0, 1.0),), temporal=True)
    with pytest.raises(ValueError):
        Domain(((0.0, 1.0), (0.0, 1.0), (0.0, 1.0)))


def test_1d_four_cells():
    part = build_partition(Domain(((0.0, 1.0),)), (4,))
    assert part.n_elements == 4
    assert all(abs(e.volume - 0.25) < 1e-15 for e in part.elements)
    interior = part.interior_faces()
    boundary = part.boundary_faces()
    assert len(interior) == 3
    assert len(boundary) == 2
    assert part.h == pytest.approx(0.25)


def test_2d_2x2_counts():
    part = build_partition(Domain(((0.0, 1.0), (0.0, 1.0))), (2, 2))
    assert part.n_elements == 4
    assert len(part.interior_faces()) == 4
    assert len(part.boundary_faces()) == 8


def test_spacetime_2x2_classification():
    dom = Domain(((0.0, 1.0), (0.0, 1.0)), temporal=True)
    part = build_partition(dom, (2, 2))
    assert part.n_elements == 4
    assert part.n_t == 2 and part.n_s == 2
    by_class = {}
    for f in part.faces:
        key = (f.kind, f.face_class)
        by_class[key] = by_class.get(key, 0) + 1
    assert by_class[(INTERIOR, TEMPORAL)] == 2   # at t = 0.5
    assert by_class[(INTERIOR, SPATIAL)] == 2    # at x = 0.5
    assert by_class[(BOUNDARY, INITIAL)] == 2
    assert by_class[(BOUNDARY, FINAL)] == 2
    assert by_class[(BOUNDARY, SPATIAL)] == 4
    for f in part.faces:
        if f.face_class == TEMPORAL:
            assert f.bounds[0] == (0.5, 0.5)


def test_zero_cells_rejected():
    with pytest.raises(ValueError):
        build_partition(Domain(((0.0, 1.0),)), (0,))
    with pytest.raises(ValueError):
        build_partition(Domain(((0.0, 1.0), (0.0, 1.0))), (2,))


def test_faces_of_element_zero_1d():
    part = build_partition(Domain(((0.0, 1.0),)), (4,))
    got = faces_of(part, 0)
    kinds = sorted((f.kind, side) for f, side in got)
    assert kinds == [(BOUNDARY, "plus"), (INTERIOR, "plus")]
    interior = [f for f, _ in got if f.kind == INTERIOR][0]
    assert interior.coord == pytest.approx(0.25)
    bdry = [f for f, _ in got if f.kind == BOUNDARY][0]
    assert bdry.coord == pytest.approx(0.0)
    assert bdry.normal_plus[0] == -1.0  # outward


def test_faces_of_element_zero_2d():
    part = build_partition(Domain(((0.0, 1.0), (0.0, 1.0))), (2, 2))
    got = faces_of(part, 0)
    kinds = [f.kind for f, _ in got]
    assert kinds.count(BOUNDARY) == 2
    assert kinds.count(INTERIOR) == 2


@pytest.mark.parametrize("cells,dim", [((4,), 1), ((3, 5), 2), ((2, 2), 2)])
def test_incidence_count(cells, dim):
    bounds = tuple([(0.0, 1.0)] * dim)
    part = build_partition(Domain(bounds), cells)
    total = sum(len(part.faces_of(e.id)) for e in part.elements)
    assert total == 2 * dim * part.n_elements


@pytest.mark.parametrize("cells,bounds", [
    ((7,), ((0.0, 2.0),)),
    ((3, 4), ((0.0, 1.0), (-1.0, 2.0))),
])
def test_volume_sums(cells, bounds):
    dom = Domain(bounds)
    part = build_partition(dom, cells)
    total = sum(e.volume for e in part.elements)
    assert abs(total - dom.volume) <= 1e-12 * dom.volume


def test_interior_face_neighbors_distinct_and_sides():
    part = build_partition(Domain(((0.0, 1.0), (0.0, 1.0))), (3, 3))
    for f in part.interior_faces():
        assert f.minus_element is not None
        assert f.plus_element != f.minus_element
        # plus side is the smaller element index; normal points plus -> minus
        assert f.plus_element < f.minus_element
        assert f.normal_plus[f.axis] == 1.0
    for f in part.boundary_faces():
        assert f.minus_element is None
        lo, hi = part.domain.bounds[f.axis]
        assert f.normal_plus[f.axis] == (1.0 if f.coord == hi else -1.0)


def test_h_f_point_faces_average_of_neighbors():
    part = build_partition(Domain(((0.0, 1.0),)), (4,))
    for f in part.interior_faces():
        assert f.h_f == pytest.approx(0.25)
        assert f.measure == 1.0
    for f in part.boundary_faces():
        assert f.h_f == pytest.approx(0.25)


def test_h_f_edges_are_lengths():
    part = build_partition(Domain(((0.0, 1.0), (0.0, 2.0))), (2, 2))
    for f in part.faces:
        free = 1 - f.axis
        lo, hi = f.bounds[free]
        assert f.h_f == pytest.approx(hi - lo)
        assert f.measure == pytest.approx(hi - lo)


def test_bad_element_id():
    part = build_partition(Domain(((0.0, 1.0),)), (4,))
    with pytest.raises(ValueError):
        part.faces_of(4)
    with pytest.raises(ValueError):
        part.faces_of(-1)
