import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from diffcoh.cochains import Cochain
from diffcoh.cohomology import CohomologyClass, cohomology_group, pullback_class, rho2
from diffcoh.complexes import projections
from diffcoh.corpus import builtin
from diffcoh.io import space
from diffcoh.sampling import random_class, random_coboundary
from diffcoh.steenrod import (
    CupIOperator,
    EvenSquareError,
    adem_terms,
    cup,
    cup_i,
    interval_table,
    sq,
    sq_integral,
)
from sampling_helpers import random_values

SMALL = ["circle", "sphere(2)", "torus", "klein", "rp2", "rp3", "circle*circle", "rp2*circle"]


def gen(X, n, ring, k=0):
    return cohomology_group(X, n, ring)[1][k].cls


def square(x):
    return CohomologyClass(cup(x.representative, x.representative))


class TestCup:
    def test_unit(self):
        X = builtin("torus")
        one = Cochain(X, 0, "Z", [1] * X.count(0))
        u = Cochain(X, 1, "Z", range(X.count(1)))
        assert cup(one, u) == u and cup(u, one) == u

    def test_torus_generators(self):
        X = builtin("torus")
        a, b = gen(X, 1, "Z", 0), gen(X, 1, "Z", 1)
        top = gen(X, 2, "Z")
        ab = CohomologyClass(cup(a.representative, b.representative))
        assert ab == top or ab == -top

    def test_rp2_square(self):
        X = builtin("rp2")
        assert square(gen(X, 1, "Z2")) == gen(X, 2, "Z2")

    def test_matches_oracle(self):
        X = builtin("rp2")
        u = Cochain(X, 1, "Z", range(1, X.count(1) + 1))
        v = Cochain(X, 1, "Z", [(-1) ** k for k in range(X.count(1))])
        expected = oracle.cup_values(X, dict(zip(X.simplices(1), u.values)), dict(zip(X.simplices(1), v.values)), 1, 1)
        got = {s: val for s, val in zip(X.simplices(2), cup(u, v).values) if val}
        assert got == expected

    def test_promotions(self):
        X = builtin("circle")
        z = Cochain(X, 0, "Z", [1, 2, 3])
        q = Cochain(X, 1, "Q", [1, 2, 3])
        qz = Cochain(X, 1, "QZ", [0, 0, 0])
        assert cup(z, q).ring == "Q"
        assert cup(z, qz).ring == "QZ"

    def test_complex_mismatch(self):
        with pytest.raises(Exception):
            cup(Cochain.zero(builtin("circle"), 0, "Z"), Cochain.zero(builtin("torus"), 0, "Z"))

    @given(st.randoms(use_true_random=False), st.sampled_from(["torus", "klein", "rp2"]), st.sampled_from(["Z", "Q"]))
    def test_leibniz(self, rnd, name, ring):
        X = builtin(name)
        for p in range(X.dim):
            q = X.dim - 1 - p
            u = Cochain(X, p, ring, random_values(rnd, X.count(p), ring))
            v = Cochain(X, q, ring, random_values(rnd, X.count(q), ring))
            sign = -1 if p % 2 else 1
            assert cup(u, v).delta() == cup(u.delta(), v) + cup(u, v.delta()).scale(sign)


class TestCupI:
    def test_cup0_is_cup(self):
        X = builtin("torus")
        u = Cochain(X, 1, "Z2", [k % 2 for k in range(X.count(1))])
        assert cup_i(u, u, 0) == cup(u, u)

    def test_above_range(self):
        X = builtin("torus")
        u = Cochain(X, 1, "Z2", [1] * X.count(1))
        assert not cup_i(u, u, 3).nonzero()
        assert interval_table(1, 1, 3) == ()

    def test_rp2_cup1_square_is_identity(self):
        X = builtin("rp2")
        a = gen(X, 1, "Z2")
        assert CohomologyClass(cup_i(a.representative, a.representative, 1)) == a

    def test_operator(self):
        X = builtin("rp2")
        a = gen(X, 1, "Z2").representative
        assert CupIOperator(1)(a, a) == cup_i(a, a, 1)
        assert not CupIOperator(-1)(a, a).nonzero()
        assert CupIOperator(-1).table(1, 1) == ()

    @given(st.randoms(use_true_random=False), st.sampled_from(SMALL), st.integers(1, 3))
    def test_coboundary_identity(self, rnd, name, i):
        X = space(name)
        p = rnd.randint(0, X.dim)
        q = rnd.randint(0, X.dim)
        if p + q - i + 1 > X.dim or p + q - i < 0:
            return
        u = Cochain(X, p, "Z2", random_values(rnd, X.count(p), "Z2"))
        v = Cochain(X, q, "Z2", random_values(rnd, X.count(q), "Z2"))
        lhs = cup_i(u, v, i).delta()
        rhs = cup_i(u.delta(), v, i) + cup_i(u, v.delta(), i) + cup_i(u, v, i - 1) + cup_i(v, u, i - 1)
        assert lhs == rhs


class TestSq:
    @pytest.mark.parametrize("name", SMALL)
    def test_axioms(self, name):
        X = space(name)
        for n in range(X.dim + 1):
            for b in cohomology_group(X, n, "Z2")[1]:
                x = b.cls
                assert sq(0, x) == x
                if 2 * n <= X.dim:
                    assert sq(n, x) == square(x)
                assert sq(n + 1, x).is_zero()

    def test_rp4_sq2_of_square(self):
        X = builtin("rp(4)")
        a = gen(X, 1, "Z2")
        a2 = square(a)
        a4 = CohomologyClass(cup(a2.representative, a2.representative))
        assert not a4.is_zero()
        assert sq(2, a2) == a4

    @given(st.randoms(use_true_random=False), st.sampled_from(["rp2", "klein", "rp3", "rp2*circle"]), st.integers(0, 2))
    def test_representative_independence_and_linearity(self, rnd, name, k):
        X = space(name)
        n = rnd.randint(1, X.dim)
        x = random_class(rnd, X, n, "Z2")
        y = random_class(rnd, X, n, "Z2")
        moved = CohomologyClass(x.representative + random_coboundary(rnd, X, n, "Z2"))
        assert sq(k, moved) == sq(k, x)
        assert sq(k, x + y) == sq(k, x) + sq(k, y)

    def test_cartan_on_torus(self):
        X = builtin("torus")
        a, b = gen(X, 1, "Z2", 0), gen(X, 1, "Z2", 1)
        ab = CohomologyClass(cup(a.representative, b.representative))
        for k in range(3):
            total = CohomologyClass(Cochain.zero(X, 2 + k, "Z2")) if 2 + k <= X.dim else None
            if total is None:
                continue
            for i in range(k + 1):
                total = total + CohomologyClass(cup(sq(i, a).representative, sq(k - i, b).representative))
            assert sq(k, ab) == total

    def test_adem_sq1sq1(self):
        X = builtin("rp3")
        a = gen(X, 1, "Z2")
        assert sq(1, sq(1, a)).is_zero()
        assert adem_terms(1, 1) == []

    def test_adem_sq1sq2_on_rp_product(self):
        # Sq^1 Sq^2 = Sq^3 on the degree-2 class a x b of rp2 x rp2
        X = space("rp2*rp2")
        for b in cohomology_group(X, 2, "Z2")[1]:
            assert sq(1, sq(2, b.cls)) == sq(3, b.cls)
        assert adem_terms(1, 2) == [(3, 0)]

    def test_natural(self):
        X, Y = builtin("rp2"), builtin("circle")
        px, _ = projections(X, Y, space("rp2*circle"))
        a = gen(X, 1, "Z2")
        assert pullback_class(px, sq(1, a)) == sq(1, pullback_class(px, a))


class TestSqIntegral:
    def test_sq1_vanishes(self):
        for name in ["torus", "klein", "rp3", "rp2*circle"]:
            X = space(name)
            for n in range(X.dim):
                for b in cohomology_group(X, n, "Z")[1]:
                    assert sq_integral(1, b.cls).is_zero()

    def test_rp5_sq3(self):
        X = builtin("rp(5)")
        assert sq_integral(3, gen(X, 2, "Z")).is_zero()

    def test_even_rejected(self):
        X = builtin("rp2")
        with pytest.raises(EvenSquareError, match="even Steenrod squares do not lift"):
            sq_integral(2, gen(X, 2, "Z"))

    @pytest.mark.parametrize("name", ["rp2", "klein", "rp3", "rp2*circle"])
    def test_reduction_and_two_torsion(self, name):
        X = space(name)
        for n in range(X.dim + 1):
            for b in cohomology_group(X, n, "Z")[1]:
                for k in (1, 3):
                    y = sq_integral(k, b.cls)
                    assert rho2(y) == sq(k, rho2(b.cls))
                    assert y.scale(2).is_zero()
