import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treegh import (
    FiniteMetricSpace,
    MetricValidationError,
    four_point_defect,
    hausdorff_distance,
    restrict,
    validate_metric,
)
from conftest import random_tree


def euclidean(pts):
    pts = np.asarray(pts, float)
    return np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))


def test_valid_space_reports_ok():
    x = FiniteMetricSpace.from_matrix(euclidean([[0, 0], [1, 0], [0, 1]]))
    rep = validate_metric(x)
    assert rep.ok
    assert rep.category == "ok"
    assert rep.worst_violation == 0.0


def test_construction_rejects_shape_and_label_errors():
    with pytest.raises(MetricValidationError):
        FiniteMetricSpace(("a",), np.zeros((1, 2)))
    with pytest.raises(MetricValidationError):
        FiniteMetricSpace(("a", "a"), np.zeros((2, 2)))
    with pytest.raises(MetricValidationError):
        FiniteMetricSpace(("a", "b", "c"), np.zeros((2, 2)))


def test_triangle_violation_detected():
    d = np.array([[0.0, 5.0, 1.0], [5.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    rep = validate_metric(FiniteMetricSpace(("a", "b", "c"), d))
    assert not rep.ok
    assert rep.category == "triangle"
    assert rep.worst_violation == pytest.approx(3.0)


def test_symmetry_violation_detected():
    d = np.array([[0.0, 1.0], [2.0, 0.0]])
    rep = validate_metric(FiniteMetricSpace(("a", "b"), d))
    assert not rep.ok
    assert rep.category == "symmetry"


def test_vanishing_off_diagonal_detected():
    d = np.zeros((2, 2))
    rep = validate_metric(FiniteMetricSpace(("a", "b"), d))
    assert not rep.ok


def test_nonzero_diagonal_detected():
    d = np.array([[0.5, 1.0], [1.0, 0.0]])
    rep = validate_metric(FiniteMetricSpace(("a", "b"), d))
    assert not rep.ok


def test_diameter_and_eccentricities():
    x = FiniteMetricSpace.from_matrix(euclidean([[0], [1], [3]]))
    assert x.diameter() == 3.0
    assert list(x.eccentricities()) == [3.0, 2.0, 3.0]


def test_restrict_keeps_submatrix():
    x = FiniteMetricSpace.from_matrix(euclidean([[0], [1], [3]]), labels=("a", "b", "c"))
    sub = restrict(x, [0, 2])
    assert sub.labels == ("a", "c")
    assert sub.dist[0, 1] == 3.0


def test_hausdorff_on_line_subsets():
    x = FiniteMetricSpace.from_matrix(euclidean([[0], [1], [3]]))
    assert hausdorff_distance(x, [0, 1, 2], [0, 1, 2]) == 0.0
    assert hausdorff_distance(x, [0], [0, 1, 2]) == 3.0
    assert hausdorff_distance(x, [0, 1], [2]) == pytest.approx(3.0)


def test_four_point_defect_on_cycle_and_tree():
    # unit 4-cycle: the two diagonal sums are 4 and 2, so the defect is 2
    d = np.array(
        [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]], dtype=float
    )
    c4 = FiniteMetricSpace(("a", "b", "c", "d"), d)
    assert four_point_defect(c4) == pytest.approx(2.0)

    rng = np.random.default_rng(3)
    t = random_tree(rng, n_lo=5, n_hi=9)
    assert four_point_defect(t.as_space()) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.floats(-5, 5, allow_nan=False), st.floats(-5, 5, allow_nan=False)
        ),
        min_size=1,
        max_size=8,
        unique=True,
    )
)
def test_euclidean_sets_always_validate(pts):
    d = euclidean(pts)
    x = FiniteMetricSpace.from_matrix(d)
    rep = validate_metric(x, tol=1e-7)
    # distinct planar points may still coincide after rounding; only a
    # genuine triangle/symmetry failure would be a bug
    assert rep.category in ("ok", "positivity")
