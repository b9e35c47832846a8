"""Exact arithmetic backbone: products, inverses, nullspaces, lattice forms."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fanrep.exactnum import (
    IntMatrix,
    NotCompletableError,
    NotInvertibleError,
    RatMatrix,
    complete_to_unimodular,
    format_rational,
    hermite_row_transform,
    invert,
    mat_mul,
    parse_rational,
    smith_normal_form,
    solve_nullspace,
)


def rat(rows):
    return RatMatrix.from_rows(rows)


class TestRationalStrings:
    def test_roundtrip(self):
        for text in ["0", "5", "-3", "1/2", "-7/3"]:
            assert format_rational(parse_rational(text)) == text

    def test_normalisation(self):
        assert parse_rational("4/8") == Fraction(1, 2)
        assert format_rational(Fraction(-4, 8)) == "-1/2"

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            RatMatrix(1, 1, [0.5])


class TestMatMul:
    def test_identity(self):
        x = rat([[1, 2], [3, 4]])
        assert mat_mul(RatMatrix.identity(2), x) == x

    def test_zero(self):
        assert mat_mul(rat([[0]]), rat([[5]])) == rat([[0]])

    def test_hand_product(self):
        a = rat([[1, 1], [0, 1]])
        b = rat([[1, 0], [1, 1]])
        assert mat_mul(a, b) == rat([[2, 1], [1, 1]])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mat_mul(rat([[1, 2]]), rat([[1, 2]]))

    def test_empty_shapes(self):
        a = RatMatrix.zeros(0, 2)
        b = RatMatrix.zeros(2, 3)
        assert mat_mul(a, b).shape == (0, 3)
        c = RatMatrix.zeros(2, 0)
        assert mat_mul(c, RatMatrix.zeros(0, 2)) == RatMatrix.zeros(2, 2)


class TestInvert:
    def test_identity(self):
        assert invert(RatMatrix.identity(3)) == RatMatrix.identity(3)

    def test_scalar(self):
        assert invert(rat([[2]])) == rat([[Fraction(1, 2)]])

    def test_singular(self):
        with pytest.raises(NotInvertibleError):
            invert(rat([[1, 1], [1, 1]]))

    def test_non_square(self):
        with pytest.raises(NotInvertibleError):
            invert(rat([[1, 0]]))

    def test_dimension_zero(self):
        assert invert(RatMatrix.zeros(0, 0)) == RatMatrix.zeros(0, 0)
        assert RatMatrix.zeros(0, 0).is_invertible()


class TestNullspace:
    def test_identity_has_trivial_kernel(self):
        assert solve_nullspace(RatMatrix.identity(2)) == []

    def test_zero_map(self):
        basis = solve_nullspace(RatMatrix.zeros(1, 2))
        assert basis == [RatMatrix.column([1, 0]), RatMatrix.column([0, 1])]

    def test_hand_solve(self):
        basis = solve_nullspace(rat([[1, -1]]))
        assert basis == [RatMatrix.column([1, 1])]

    def test_members_are_in_kernel(self):
        a = rat([[2, 1, 3], [4, 2, 6]])
        for vec in solve_nullspace(a):
            assert mat_mul(a, vec).is_zero()


class TestSmith:
    def test_identity(self):
        _, d, _ = smith_normal_form(IntMatrix.identity(2))
        assert d == IntMatrix.identity(2)

    def test_hand_elimination(self):
        _, d, _ = smith_normal_form(IntMatrix.from_rows([[1, 1], [0, 2]]))
        assert d == IntMatrix.from_rows([[1, 0], [0, 2]])

    def test_degenerate_columns(self):
        u, d, v = smith_normal_form(IntMatrix(2, 0, []))
        assert d.shape == (2, 0)
        assert u.is_unimodular() and v.shape == (0, 0)


class TestCompleteToUnimodular:
    def test_standard_vector(self):
        assert complete_to_unimodular([(1, 0)], 2) == IntMatrix.identity(2)

    def test_non_saturated(self):
        with pytest.raises(NotCompletableError):
            complete_to_unimodular([(1, 0), (1, 2)], 2)

    def test_diagonal_vector(self):
        out = complete_to_unimodular([(1, 1)], 2)
        assert out.col(0) == (1, 1)
        assert abs(out.det()) == 1

    def test_dependent_vectors(self):
        with pytest.raises(NotCompletableError):
            complete_to_unimodular([(1, 0), (2, 0)], 2)

    def test_empty_input(self):
        assert complete_to_unimodular([], 3) == IntMatrix.identity(3)

    def test_too_many_vectors(self):
        with pytest.raises(NotCompletableError):
            complete_to_unimodular([(1,), (0,)], 1)


small_entries = st.integers(min_value=-6, max_value=6)


@st.composite
def int_matrices(draw, max_dim=4):
    r = draw(st.integers(min_value=1, max_value=max_dim))
    c = draw(st.integers(min_value=1, max_value=max_dim))
    rows = draw(
        st.lists(
            st.lists(small_entries, min_size=c, max_size=c), min_size=r, max_size=r
        )
    )
    return IntMatrix.from_rows(rows)


@st.composite
def rat_matrices(draw, rows, cols, entries=small_entries):
    data = draw(
        st.lists(entries, min_size=rows * cols, max_size=rows * cols)
    )
    return RatMatrix(rows, cols, data)


@given(int_matrices())
def test_snf_properties(a):
    u, d, v = smith_normal_form(a)
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    assert u.mul(a).mul(v) == d
    diag = [d.entry(i, i) for i in range(min(d.rows, d.cols))]
    assert all(x >= 0 for x in diag)
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d.entry(i, j) == 0
    for x, y in zip(diag, diag[1:]):
        if x == 0:
            assert y == 0
        else:
            assert y % x == 0


@given(int_matrices(max_dim=4))
def test_hermite_transform_consistency(a):
    u, uinv, h, pivots = hermite_row_transform(a)
    assert u.mul(a) == h
    assert u.mul(uinv) == IntMatrix.identity(a.rows)
    assert abs(u.det()) == 1
    for r, c in enumerate(pivots):
        assert h.entry(r, c) > 0
        for i in range(r + 1, h.rows):
            assert h.entry(i, c) == 0


@given(st.data())
def test_complete_to_unimodular_prefix_and_det(data):
    n = data.draw(st.integers(min_value=1, max_value=4))
    k = data.draw(st.integers(min_value=0, max_value=n))
    vectors = [
        tuple(data.draw(small_entries) for _ in range(n)) for _ in range(k)
    ]
    try:
        out = complete_to_unimodular(vectors, n)
    except NotCompletableError:
        # the inputs must then fail saturation: some SNF diagonal != 1
        if k:
            _, d, _ = smith_normal_form(IntMatrix.from_columns(vectors, n))
            diag = [d.entry(i, i) for i in range(min(d.rows, d.cols))]
            assert any(x != 1 for x in diag[:k]) or len([x for x in diag if x != 0]) < k
        return
    assert abs(out.det()) == 1
    for j, vec in enumerate(vectors):
        assert out.col(j) == vec


@given(st.data())
@settings(max_examples=60)
def test_vu_plus_id_invertible_iff_uv_plus_id(data):
    n = data.draw(st.integers(min_value=0, max_value=4))
    m = data.draw(st.integers(min_value=0, max_value=4))
    u = data.draw(rat_matrices(m, n, st.integers(min_value=-3, max_value=3)))
    v = data.draw(rat_matrices(n, m, st.integers(min_value=-3, max_value=3)))
    vu = mat_mul(v, u).add(RatMatrix.identity(n))
    uv = mat_mul(u, v).add(RatMatrix.identity(m))
    assert vu.is_invertible() == uv.is_invertible()


@given(st.data())
@settings(max_examples=60)
def test_invert_roundtrip(data):
    n = data.draw(st.integers(min_value=1, max_value=4))
    a = data.draw(rat_matrices(n, n))
    try:
        inv = invert(a)
    except NotInvertibleError:
        assert a.det() == 0
        return
    assert mat_mul(inv, a) == RatMatrix.identity(n)
    assert mat_mul(a, inv) == RatMatrix.identity(n)


@given(st.data())
@settings(max_examples=40)
def test_nullspace_dimension_matches_rank(data):
    r = data.draw(st.integers(min_value=1, max_value=4))
    c = data.draw(st.integers(min_value=1, max_value=4))
    a = data.draw(rat_matrices(r, c))
    basis = solve_nullspace(a)
    from fanrep.exactnum import rank

    assert len(basis) == c - rank(a)
    for vec in basis:
        assert mat_mul(a, vec).is_zero()


def test_power_negative_exponent():
    a = rat([[2]])
    assert a.power(-2) == rat([[Fraction(1, 4)]])
    b = rat([[1, 1], [0, 1]])
    assert b.power(-1) == rat([[1, -1], [0, 1]])
    assert b.power(0) == RatMatrix.identity(2)
