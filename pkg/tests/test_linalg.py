import numpy as np
import pytest

from narxiv.errors import (
    DimensionMismatchError,
    InvalidIntervalError,
    RankDeficientError,
    SingularMatrixError,
    VerificationFailedError,
)
from narxiv.interval import Interval
from narxiv.linalg import (
    IntervalMatrix,
    IntervalVector,
    interval_least_squares,
    load_interval_matrix_csv,
    load_interval_vector_csv,
    mat_mul,
    mat_vec,
    point_least_squares,
    save_interval_matrix_csv,
    save_interval_vector_csv,
    solve_verified,
)


# -- containers ---------------------------------------------------------------


def test_vector_validates_ordering():
    with pytest.raises(InvalidIntervalError):
        IntervalVector([1.0], [0.5])


def test_vector_roundtrip_items():
    v = IntervalVector.from_intervals([Interval(0, 1), Interval(-2, -1)])
    assert v[0] == Interval(0, 1)
    assert list(v)[1] == Interval(-2, -1)


def test_matrix_shape_checks():
    with pytest.raises(DimensionMismatchError):
        mat_mul(IntervalMatrix.from_points(np.ones((2, 3))), IntervalMatrix.from_points(np.ones((2, 2))))


def test_entries_are_immutable():
    m = IntervalMatrix.from_points(np.ones((2, 2)))
    with pytest.raises(ValueError):
        m.lo[0, 0] = 5.0


# -- mat_mul -------------------------------------------------------------------


def test_identity_product_encloses_operand():
    rng = np.random.default_rng(0)
    blo = rng.uniform(-1, 1, (4, 4))
    b = IntervalMatrix(blo, blo + 0.1)
    product = mat_mul(IntervalMatrix.identity(4), b)
    assert np.all(product.lo <= b.lo) and np.all(b.hi <= product.hi)


def test_one_by_one_reduces_to_interval_mul():
    a = IntervalMatrix(np.array([[-1.0]]), np.array([[2.0]]))
    b = IntervalMatrix(np.array([[3.0]]), np.array([[4.0]]))
    c = mat_mul(a, b)
    assert c[0, 0] == Interval(-4, 8)


def test_mat_vec_identity_encloses_operand():
    v = IntervalVector([1.0, -0.5], [2.0, 0.5])
    out = mat_vec(IntervalMatrix.identity(2), v)
    assert out.encloses(v)
    with pytest.raises(DimensionMismatchError):
        mat_vec(IntervalMatrix.identity(3), v)


def test_degenerate_product_encloses_point_product():
    rng = np.random.default_rng(1)
    a = rng.uniform(-1, 1, (5, 7))
    b = rng.uniform(-1, 1, (7, 3))
    product = mat_mul(IntervalMatrix.from_points(a), IntervalMatrix.from_points(b))
    point = a @ b
    assert product.contains(point)
    assert product.widths().max() < 1e-13


def test_mat_mul_member_sampling():
    rng = np.random.default_rng(2)
    alo = rng.uniform(-1, 1, (3, 4))
    ahi = alo + rng.uniform(0, 0.2, (3, 4))
    blo = rng.uniform(-1, 1, (4, 2))
    bhi = blo + rng.uniform(0, 0.2, (4, 2))
    product = mat_mul(IntervalMatrix(alo, ahi), IntervalMatrix(blo, bhi))
    for _ in range(300):
        a = rng.uniform(alo, ahi)
        b = rng.uniform(blo, bhi)
        assert product.contains(a @ b)


# -- solve_verified ------------------------------------------------------------


def test_solve_identity_encloses_rhs():
    b = IntervalVector([1.0, -2.0, 0.5], [1.5, -1.0, 0.5])
    x = solve_verified(IntervalMatrix.identity(3), b)
    assert x.encloses(b)


def test_solve_exact_two_by_two():
    a = IntervalMatrix.from_points([[1.0, 1.0], [1.0, -1.0]])
    b = IntervalVector.from_points([3.0, 1.0])
    x = solve_verified(a, b)
    assert x.contains([2.0, 1.0])


def test_solve_monte_carlo_members():
    rng = np.random.default_rng(3)
    mid = rng.uniform(-1, 1, (3, 3)) + 3 * np.eye(3)
    rad = 0.01 * np.abs(mid)
    a = IntervalMatrix(mid - rad, mid + rad)
    bm = rng.uniform(-1, 1, 3)
    b = IntervalVector(bm - 0.01, bm + 0.01)
    box = solve_verified(a, b)
    samples_a = rng.uniform(a.lo, a.hi, (1000, 3, 3))
    samples_b = rng.uniform(b.lo, b.hi, (1000, 3))
    solutions = np.linalg.solve(samples_a, samples_b[:, :, None])[:, :, 0]
    assert np.all(solutions >= box.lo) and np.all(solutions <= box.hi)


def test_solve_rejects_singular_midpoint():
    a = IntervalMatrix.from_points([[1.0, 2.0], [2.0, 4.0]])
    b = IntervalVector.from_points([1.0, 2.0])
    with pytest.raises(SingularMatrixError):
        solve_verified(a, b)


def test_solve_fails_loudly_on_hopeless_widths():
    # entries this wide include singular members; certification must fail
    a = IntervalMatrix(np.eye(2) - 2.0, np.eye(2) + 2.0)
    b = IntervalVector.from_points([1.0, 1.0])
    with pytest.raises(VerificationFailedError):
        solve_verified(a, b)


def test_solve_requires_square():
    a = IntervalMatrix.from_points(np.ones((3, 2)))
    b = IntervalVector.from_points([1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatchError):
        solve_verified(a, b)


# -- point least squares ---------------------------------------------------------


def test_point_ls_identity():
    psi = np.eye(4)
    y = np.array([1.0, 2.0, 3.0, 4.0])
    assert np.allclose(point_least_squares(psi, y), y)


def test_point_ls_single_column_ratio():
    psi = np.array([[1.0], [2.0], [3.0]])
    y = np.array([2.0, 4.0, 6.0])
    np.testing.assert_allclose(point_least_squares(psi, y), [2.0], atol=1e-14)


def test_point_ls_recovers_known_coefficients():
    rng = np.random.default_rng(4)
    psi = rng.uniform(-1, 1, (50, 4))
    truth = np.array([0.5, -1.5, 2.0, 0.25])
    solution = point_least_squares(psi, psi @ truth)
    np.testing.assert_allclose(solution, truth, atol=1e-10)


def test_point_ls_rank_error():
    psi = np.column_stack([np.ones(10), np.ones(10)])
    with pytest.raises(RankDeficientError):
        point_least_squares(psi, np.arange(10.0))


# -- interval least squares -------------------------------------------------------


def test_interval_ls_degenerate_contains_point_solution():
    rng = np.random.default_rng(5)
    psi = rng.uniform(-1, 1, (20, 3))
    y = psi @ np.array([0.5, -1.0, 2.0]) + rng.normal(0, 0.01, 20)
    box = interval_least_squares(
        IntervalMatrix.from_points(psi), IntervalVector.from_points(y)
    )
    assert box.contains(point_least_squares(psi, y))


def test_interval_ls_widened_member_sampling():
    rng = np.random.default_rng(6)
    psi = rng.uniform(-1, 1, (20, 3))
    y = psi @ np.array([1.0, 0.5, -0.5]) + rng.normal(0, 0.05, 20)
    rad = 1e-4
    box = interval_least_squares(
        IntervalMatrix(psi - rad, psi + rad), IntervalVector(y - rad, y + rad)
    )
    for _ in range(500):
        psi_s = rng.uniform(psi - rad, psi + rad)
        y_s = rng.uniform(y - rad, y + rad)
        exact = np.linalg.lstsq(psi_s, y_s, rcond=None)[0]
        assert box.contains(exact)


def test_interval_ls_width_shrinks_with_input_width():
    rng = np.random.default_rng(7)
    psi = rng.uniform(-1, 1, (30, 3)) + np.column_stack([np.zeros((30, 2)), np.ones(30)])
    y = psi @ np.array([0.3, -0.2, 1.0])
    wide = interval_least_squares(
        IntervalMatrix(psi - 1e-6, psi + 1e-6), IntervalVector(y - 1e-6, y + 1e-6)
    )
    tight = interval_least_squares(
        IntervalMatrix.from_points(psi), IntervalVector.from_points(y)
    )
    assert tight.widths().max() < 1e-8  # rounding-level on degenerate input
    assert tight.widths().max() < wide.widths().max()


def test_interval_ls_rank_check():
    psi = np.column_stack([np.ones(10), np.ones(10)])
    with pytest.raises(RankDeficientError):
        interval_least_squares(
            IntervalMatrix.from_points(psi), IntervalVector.from_points(np.arange(10.0))
        )


# -- serialization -----------------------------------------------------------------


def test_matrix_csv_round_trip(tmp_path):
    rng = np.random.default_rng(8)
    lo = rng.uniform(-2, 2, (3, 4))
    hi = lo + rng.uniform(0, 1, (3, 4))
    hi[1, 2] = lo[1, 2]  # degenerate cell serializes as a single number
    m = IntervalMatrix(lo, hi)
    path = tmp_path / "m.csv"
    save_interval_matrix_csv(path, m)
    back = load_interval_matrix_csv(path)
    assert np.array_equal(back.lo, m.lo) and np.array_equal(back.hi, m.hi)
    text = path.read_text()
    assert ":" in text.splitlines()[1]
    cells = text.splitlines()[2].split(",")
    assert ":" not in cells[2]


def test_vector_csv_round_trip(tmp_path):
    v = IntervalVector([0.5, -1.0, 0.25], [0.75, -1.0, 0.5])
    path = tmp_path / "v.csv"
    save_interval_vector_csv(path, v)
    back = load_interval_vector_csv(path)
    assert np.array_equal(back.lo, v.lo) and np.array_equal(back.hi, v.hi)
