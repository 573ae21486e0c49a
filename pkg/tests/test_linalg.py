from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from diffcoh.groups import GroupDescriptor
from diffcoh.linalg import (
    DimensionError,
    NotSublatticeError,
    SNFResourceError,
    SparseIntMatrix,
    determinant,
    in_lattice_image,
    quotient_structure,
    rational_rank,
    smith_normal_form,
    solve_integer,
)
from diffcoh.corpus import builtin


def mm(A, B, ncols):
    """Plain product; ncols is the column count of B (B may have no rows)."""
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(ncols)] for i in range(len(A))]


def dense(rows, cols=None):
    return SparseIntMatrix.from_dense(rows, cols=cols if cols is not None else (len(rows[0]) if rows else 0))


def matrices(max_dim=6, lo=-9, hi=9):
    return st.integers(0, max_dim).flatmap(
        lambda r: st.integers(0, max_dim).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r).map(
                lambda rows: (rows, c)
            )
        )
    )


def check_snf(rows, cols):
    M = dense(rows, cols)
    res = smith_normal_form(M)
    assert mm(mm(res.U, rows, cols), res.V, cols) == res.D
    diag = res.diagonal
    assert all(d > 0 for d in diag)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))
    for i, row in enumerate(res.D):
        for j, v in enumerate(row):
            if i != j or i >= len(diag):
                assert v == 0
    if res.U:
        assert abs(determinant(res.U)) == 1
    if res.V:
        assert abs(determinant(res.V)) == 1
    return res


class TestSmithNormalForm:
    def test_empty(self):
        res = smith_normal_form(SparseIntMatrix(0, 0))
        assert res.D == [] and res.U == [] and res.V == []

    def test_one_by_one(self):
        assert smith_normal_form(dense([[2]])).D == [[2]]

    def test_two_by_two(self):
        res = check_snf([[2, 4], [6, 8]], 2)
        assert res.diagonal == [2, 4]

    def test_bit_guard(self):
        rows = [[2**40 + 1, 3], [5, 2**41 + 7]]
        with pytest.raises(SNFResourceError):
            smith_normal_form(dense(rows), max_bits=8)
        assert smith_normal_form(dense(rows)).rank == 2

    def test_deterministic(self):
        rows = [[3, 6, 9], [2, 4, 7], [1, 1, 1]]
        a, b = smith_normal_form(dense(rows)), smith_normal_form(dense(rows))
        assert (a.U, a.D, a.V) == (b.U, b.D, b.V)

    @given(matrices())
    def test_invariants(self, m):
        rows, cols = m
        res = check_snf(rows, cols)
        assert res.rank == rational_rank(dense(rows, cols))
        if rows and cols:
            assert res.diagonal == oracle._factors(rows, cols)


class TestSolveInteger:
    def test_examples(self):
        assert solve_integer(dense([[2]]), [4]) == [2]
        assert solve_integer(dense([[2]]), [3]) is None

    def test_circle_primitive(self):
        X = builtin("circle")
        assert X.simplices(1) == ((0, 1), (0, 2), (1, 2))
        d0 = X.coboundary(0)
        rows = d0.to_dense()
        for b in ([1, 2, 1], [1, 1, 1], [0, 3, 3], [2, -1, 0]):
            loop = b[0] + b[2] - b[1]
            x = solve_integer(d0, b)
            assert (x is not None) == (loop == 0) == (oracle.solve_in_box(rows, b) is not None)
            if x is not None:
                assert [sum(r[k] * x[k] for k in range(3)) for r in rows] == b

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            solve_integer(dense([[1, 2]]), [1, 2])

    def test_parametrized(self):
        sol = solve_integer(dense([[1, 1, 0]]), [5], parametrize=True)
        assert sum(sol.particular[:2]) == 5
        assert len(sol.kernel) == 2
        for k in sol.kernel:
            assert k[0] + k[1] == 0

    @given(matrices(max_dim=3, lo=-3, hi=3), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
    def test_against_box_search(self, m, b):
        rows, cols = m
        if not rows or not cols:
            return
        b = b[: len(rows)]
        x = solve_integer(dense(rows, cols), b)
        if x is not None:
            assert [sum(r[k] * x[k] for k in range(cols)) for r in rows] == b
        else:
            assert oracle.solve_in_box(rows, b, bound=4) is None


class TestQuotientStructure:
    def test_examples(self):
        assert quotient_structure(dense([[1]]), dense([[2]])) == GroupDescriptor(invariant_factors=(2,))
        assert quotient_structure(dense([[1, 0], [0, 1]]), SparseIntMatrix(2, 0)) == GroupDescriptor(free_rank=2)

    def test_rp2_degree_two(self):
        X = builtin("rp2")
        d1 = X.coboundary(1)
        # cocycles of degree 2 are everything (top degree); boundaries are im d1
        Z = dense([[int(i == j) for j in range(X.count(2))] for i in range(X.count(2))])
        assert quotient_structure(Z, d1) == GroupDescriptor(invariant_factors=(2,))

    def test_not_sublattice(self):
        with pytest.raises(NotSublatticeError):
            quotient_structure(dense([[2]]), dense([[1]]))

    @given(
        st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=2, max_size=2),
        st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2),
    )
    def test_unimodular_invariance(self, P, Q):
        Zm = [[1, 0], [0, 1], [1, 1]]
        Bm = mm(Zm, [[2, 0], [0, 6]], 2)
        if abs(determinant(P)) != 1:
            P = [[1, 0], [0, 1]]
        Z2 = mm(Zm, P, 2)
        B2 = mm(Bm, Q, 2)
        base = quotient_structure(dense(Zm), dense(B2))
        assert quotient_structure(dense(Z2), dense(B2)) == base


class TestInLatticeImage:
    def test_examples(self):
        assert in_lattice_image([0], [[1]], [])
        assert not in_lattice_image([Fraction(1, 2)], [[1]], [])
        assert in_lattice_image([Fraction(1, 2)], [[1]], [[Fraction(1, 4)]])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            in_lattice_image([1, 2], [[1]], [])

    @given(st.integers(-5, 5), st.integers(1, 6), st.integers(-3, 3))
    def test_membership_matches_definition(self, a, den, num):
        # L = [[2],[0]], W = [[0],[1]]: v = (2a, anything)
        v = [Fraction(num, den), Fraction(a, 3)]
        first = Fraction(num, den)
        expected = first.denominator == 1 and first.numerator % 2 == 0
        assert in_lattice_image(v, [[2], [0]], [[0], [1]]) == expected
