import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from diffcoh.cochains import Cochain, pullback
from diffcoh.complexes import (
    RINGS,
    ComplexError,
    SimplicialMap,
    coboundary_matrix,
    identity_map,
    parse_complex,
    product,
    projections,
    suspension,
)
from diffcoh.corpus import UnknownSpaceError, builtin
from diffcoh.io import space
from diffcoh.linalg import rational_rank
from sampling_helpers import random_values

CORPUS = ["point", "circle", "sphere(2)", "sphere(3)", "torus", "klein", "rp2", "rp3"]

# (vertex count, Euler characteristic), frozen from tests/oracle.py
FROZEN_SHAPE = {
    "point": (1, 1),
    "circle": (3, 0),
    "sphere(2)": (4, 2),
    "sphere(3)": (5, 0),
    "torus": (7, 0),
    "klein": (9, 0),
    "rp2": (6, 1),
    "rp3": (11, 0),
    "rp(4)": (31, 1),
}


class TestParse:
    def test_point(self):
        X = parse_complex('{"vertex_count":1,"facets":[[0]]}')
        assert X.dim == 0 and X.count(0) == 1

    def test_triangle_circle(self):
        X = parse_complex({"vertex_count": 3, "facets": [[0, 1], [1, 2], [0, 2]]})
        assert [X.count(k) for k in range(2)] == [3, 3]
        assert oracle.integral_cohomology(X, 1) == (1, [])

    def test_unordered_facet(self):
        with pytest.raises(ComplexError, match="not strictly increasing"):
            parse_complex({"vertex_count": 3, "facets": [[2, 1]]})

    @pytest.mark.parametrize(
        "doc, fragment",
        [
            ("{", "line 1"),
            ('{"facets": []}', "vertex_count"),
            ('{"vertex_count": 3, "facets": [[0, 1], [1, 5]]}', "facets[1]"),
            ('{"vertex_count": 3, "facets": [[0, 1]]}', "do not belong"),
            ('{"vertex_count": 2, "facets": [[0, 1], [0, 1]]}', "duplicate"),
            ('{"vertex_count": 2, "facets": [["a"]]}', "facets[0]"),
        ],
    )
    def test_errors_name_location(self, doc, fragment):
        with pytest.raises(ComplexError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
            parse_complex(doc)

    def test_round_trip(self):
        X = builtin("rp2")
        Y = parse_complex(X.to_json())
        assert Y.content_hash == X.content_hash


class TestBuiltin:
    @pytest.mark.parametrize("name", list(FROZEN_SHAPE))
    def test_shape(self, name):
        X = builtin(name)
        assert (X.vertex_count, oracle.euler_characteristic(X)) == FROZEN_SHAPE[name]

    def test_point(self):
        X = builtin("point")
        assert X.vertex_count == 1 and len(X.facets) == 1

    def test_rp2(self):
        X = builtin("rp2")
        assert X.vertex_count == 6 and X.count(2) == 10

    def test_rp4_vertex_count(self):
        assert builtin("rp(4)").vertex_count == (2**6 - 2) // 2

    def test_spelling(self):
        assert builtin("rp5").content_hash == builtin("rp(5)").content_hash
        assert builtin("sphere2").content_hash == builtin("sphere(2)").content_hash

    def test_unknown(self):
        with pytest.raises(UnknownSpaceError):
            builtin("foo")

    @pytest.mark.parametrize("name", CORPUS + ["rp(4)"])
    def test_downward_closed_and_sorted(self, name):
        X = builtin(name)
        for n in range(1, X.dim + 1):
            lower = set(X.simplices(n - 1))
            table = X.simplices(n)
            assert list(table) == sorted(table)
            for s in table:
                assert all(b > a for a, b in zip(s, s[1:]))
                for k in range(len(s)):
                    assert s[:k] + s[k + 1:] in lower


class TestCoboundary:
    def test_point(self):
        M = coboundary_matrix(builtin("point"), 0)
        assert (M.rows, M.cols) == (0, 1)

    def test_circle(self):
        M = coboundary_matrix(builtin("circle"), 0)
        assert (M.rows, M.cols) == (3, 3) and rational_rank(M) == 2
        assert M.to_dense() == oracle.coboundary_dense(builtin("circle"), 0)

    @pytest.mark.parametrize("name", CORPUS + ["circle*circle", "rp2*circle"])
    @pytest.mark.parametrize("ring", RINGS)
    def test_delta_squared(self, name, ring):
        X = space(name)
        for n in range(X.dim - 1):
            A = coboundary_matrix(X, n, ring).to_dense()
            B = coboundary_matrix(X, n + 1, ring).to_dense()
            prod = [[sum(B[i][k] * A[k][j] for k in range(len(A))) for j in range(X.count(n))] for i in range(len(B))]
            if ring == "Z2":
                prod = [[x % 2 for x in r] for r in prod]
            assert not any(any(r) for r in prod)

    def test_mod2_drops_signs(self):
        M = coboundary_matrix(builtin("circle"), 0, "Z2")
        assert all(v == 1 for _, _, v in M.entries)

    def test_degree_out_of_range(self):
        with pytest.raises(ComplexError):
            coboundary_matrix(builtin("circle"), 5)


def _f_vector(X):
    return [X.count(k) for k in range(X.dim + 1)]


class TestProduct:
    def test_edge_times_edge(self):
        E = parse_complex({"vertex_count": 2, "facets": [[0, 1]]})
        P = product(E, E)
        assert P.dim == 2 and P.count(2) == 2

    def test_circle_squared(self):
        P = product(builtin("circle"), builtin("circle"))
        assert oracle.euler_characteristic(P) == 0

    def test_times_point(self):
        X = builtin("rp2")
        P = product(X, builtin("point"))
        assert _f_vector(P) == _f_vector(X)
        assert P.simplices(2) == X.simplices(2)

    @pytest.mark.parametrize("a, b", [("circle", "circle"), ("rp2", "circle"), ("sphere(2)", "circle"), ("klein", "point")])
    def test_euler_multiplies(self, a, b):
        X, Y = builtin(a), builtin(b)
        assert oracle.euler_characteristic(product(X, Y)) == oracle.euler_characteristic(X) * oracle.euler_characteristic(Y)

    def test_associative_up_to_relabeling(self):
        C = builtin("circle")
        E = parse_complex({"vertex_count": 2, "facets": [[0, 1]]})
        left = product(product(C, E), E)
        right = product(C, product(E, E))
        assert _f_vector(left) == _f_vector(right)
        # vertex (x, y, z) is x*4 + y*2 + z in both orders
        assert left.simplices(left.dim) == right.simplices(right.dim)

    def test_projections_are_maps(self):
        X, Y = builtin("circle"), builtin("rp2")
        P = product(X, Y)
        px, py = projections(X, Y, P)
        assert px.target is X and py.target is Y

    def test_skeleton(self):
        P = product(builtin("rp2"), builtin("rp2"), max_dim=2)
        assert P.dim == 2


class TestSuspension:
    def test_s0(self):
        S0 = parse_complex({"vertex_count": 2, "facets": [[0], [1]]})
        S = suspension(S0)
        assert S.vertex_count == 4 and S.dim == 1 and S.count(1) == 4
        assert oracle.integral_cohomology(S, 1) == (1, [])

    def test_circle(self):
        S = suspension(builtin("circle"))
        assert oracle.integral_cohomology(S, 2) == (1, [])

    def test_rp2(self):
        S = suspension(builtin("rp2"))
        assert oracle.integral_cohomology(S, 3) == (0, [2])

    def test_apex_order(self):
        X = builtin("torus")
        S = suspension(X)
        assert S.vertex_count == X.vertex_count + 2
        assert all(f[-1] >= X.vertex_count for f in S.facets)

    @pytest.mark.parametrize("name", ["circle", "torus", "klein", "rp2", "sphere(2)"])
    def test_reduced_betti_shift(self, name):
        X = builtin(name)
        S = suspension(X)

        def reduced(Y, k):
            free = oracle.integral_cohomology(Y, k)[0]
            return free - 1 if k == 0 else free

        for k in range(X.dim + 1):
            assert reduced(S, k + 1) == reduced(X, k)


class TestPullback:
    def test_identity(self):
        X = builtin("torus")
        u = Cochain(X, 1, "Z", range(X.count(1)))
        assert pullback(identity_map(X), u) == u

    def test_constant(self):
        X, Y = builtin("torus"), builtin("circle")
        f = SimplicialMap(X, Y, [0] * X.vertex_count)
        u = Cochain(Y, 1, "Z", [1, 2, 3])
        assert not pullback(f, u).nonzero()

    def test_mismatch(self):
        X, Y = builtin("torus"), builtin("circle")
        f = SimplicialMap(X, Y, [0] * X.vertex_count)
        with pytest.raises(Exception):
            pullback(f, Cochain.zero(X, 1, "Z"))

    def test_bad_map(self):
        with pytest.raises(ComplexError):
            SimplicialMap(builtin("circle"), builtin("circle"), [0, 1])

    @given(st.randoms(use_true_random=False), st.sampled_from(["Z", "Z2", "Q", "QZ"]), st.sampled_from([0, 1]))
    def test_chain_map_on_projection(self, rnd, ring, n):
        X, Y = builtin("circle"), builtin("circle")
        P = product(X, Y)
        px, _ = projections(X, Y, P)
        u = Cochain(X, n, ring, random_values(rnd, X.count(n), ring))
        assert pullback(px, u.delta()) == pullback(px, u).delta()
        if u.is_cocycle():
            assert pullback(px, u).is_cocycle()

    def test_composition(self):
        C = builtin("circle")
        P = product(C, C)
        Q = product(P, C)
        pq, _ = projections(P, C, Q)
        px, _ = projections(C, C, P)
        comp = px.compose(pq)
        u = Cochain(C, 1, "Z", [1, -2, 5])
        assert pullback(comp, u) == pullback(pq, pullback(px, u))
