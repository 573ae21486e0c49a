from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from diffcoh.cochains import Cochain, RingError
from diffcoh.cohomology import (
    CohomologyClass,
    NotACocycleError,
    bockstein_beta,
    bockstein_beta2,
    bockstein_exp,
    cohomology_group,
    descriptor,
    gamma2,
    is_cohomologous,
    pullback_class,
    rational_to_qz,
    rho2,
)
from diffcoh.complexes import projections
from diffcoh.corpus import builtin
from diffcoh.groups import GroupDescriptor
from diffcoh.io import space
from diffcoh.sampling import random_class, random_coboundary
from diffcoh.steenrod import cup, sq

CORPUS = ["point", "circle", "sphere(2)", "sphere(3)", "torus", "klein", "rp2", "rp3", "circle*circle", "rp2*circle"]

# H^n(X; Z) as (free rank, torsion), frozen from the sympy oracle
FROZEN_Z = {
    "point": [(1, [])],
    "circle": [(1, []), (1, [])],
    "sphere(2)": [(1, []), (0, []), (1, [])],
    "sphere(3)": [(1, []), (0, []), (0, []), (1, [])],
    "torus": [(1, []), (2, []), (1, [])],
    "klein": [(1, []), (1, []), (0, [2])],
    "rp2": [(1, []), (0, []), (0, [2])],
    "rp3": [(1, []), (0, []), (0, [2]), (1, [])],
    "circle*circle": [(1, []), (2, []), (1, [])],
    "rp2*circle": [(1, []), (1, []), (0, [2]), (0, [2])],
}


def gen(X, n, ring, k=0):
    return cohomology_group(X, n, ring)[1][k].cls


class TestGroups:
    @pytest.mark.parametrize("name", CORPUS)
    def test_integral_matches_frozen(self, name):
        X = space(name)
        got = [(descriptor(X, n, "Z").free_rank, list(descriptor(X, n, "Z").invariant_factors)) for n in range(X.dim + 1)]
        assert got == FROZEN_Z[name]

    @pytest.mark.parametrize("name", ["circle", "klein", "rp2", "rp3"])
    def test_frozen_matches_oracle(self, name):
        X = space(name)
        assert [oracle.integral_cohomology(X, n) for n in range(X.dim + 1)] == FROZEN_Z[name]

    def test_circle(self):
        assert descriptor(builtin("circle"), 1, "Z") == GroupDescriptor(free_rank=1)

    def test_rp5_ring_groups(self):
        X = builtin("rp(5)")
        got = [descriptor(X, k, "Z") for k in range(6)]
        z, z2 = GroupDescriptor(free_rank=1), GroupDescriptor(invariant_factors=(2,))
        assert got == [z, GroupDescriptor(), z2, GroupDescriptor(), z2, z]

    def test_rp2_qz(self):
        assert descriptor(builtin("rp2"), 1, "QZ") == GroupDescriptor(invariant_factors=(2,))

    def test_above_dimension(self):
        assert descriptor(builtin("circle"), 4, "Z").is_zero
        assert cohomology_group(builtin("circle"), 4, "Z")[1] == []

    @pytest.mark.parametrize("name", CORPUS)
    def test_universal_coefficients(self, name):
        X = space(name)
        for n in range(X.dim + 1):
            free, tors = FROZEN_Z[name][n]
            nxt = FROZEN_Z[name][n + 1][1] if n + 1 <= X.dim else []
            mod2 = free + sum(1 for d in tors if d % 2 == 0) + sum(1 for d in nxt if d % 2 == 0)
            assert descriptor(X, n, "Z2") == GroupDescriptor(invariant_factors=(2,) * mod2)
            assert oracle.mod2_dimension(X, n) == mod2
            # Hom(H_n, Q/Z): free part of H_n and torsion of H_n (= torsion of H^{n+1})
            assert descriptor(X, n, "QZ") == GroupDescriptor(0, tuple(nxt), free)
            assert descriptor(X, n, "Q") == GroupDescriptor(free_rank=free)


class TestIsCohomologous:
    def test_equal(self):
        X = builtin("rp2")
        g = gen(X, 2, "Z")
        assert is_cohomologous(g.representative, g.representative)

    def test_shifted_representative(self):
        X = builtin("rp2")
        g = gen(X, 2, "Z").representative
        shifted = g + Cochain(X, 1, "Z", range(X.count(1))).delta()
        assert is_cohomologous(g, shifted)

    def test_generator_not_zero(self):
        X = builtin("rp2")
        g = gen(X, 2, "Z").representative
        assert not is_cohomologous(g, Cochain.zero(X, 2, "Z"))

    def test_requires_cocycles(self):
        X = builtin("circle")
        u = Cochain(X, 0, "Z", [1, 0, 0])
        with pytest.raises(NotACocycleError):
            is_cohomologous(u, u)

    def test_qz_divisible(self):
        X = builtin("circle")
        g = gen(X, 1, "QZ").representative
        assert not is_cohomologous(g.scale(Fraction(1, 3)).to_ring("QZ"), Cochain.zero(X, 1, "QZ"))
        assert is_cohomologous(g.scale(Fraction(4, 3)).to_ring("QZ"), g.scale(Fraction(1, 3)).to_ring("QZ"))

    @given(st.randoms(use_true_random=False), st.sampled_from(["Z", "Z2", "Q", "QZ"]), st.sampled_from(["torus", "klein", "rp2"]))
    def test_coboundary_invariance(self, rnd, ring, name):
        X = builtin(name)
        for n in range(X.dim + 1):
            x = random_class(rnd, X, n, ring)
            y = x.representative + random_coboundary(rnd, X, n, ring)
            assert is_cohomologous(x.representative, y)


class TestCoefficientMaps:
    def test_rho2_zero(self):
        X = builtin("rp2")
        assert rho2(CohomologyClass(Cochain.zero(X, 2, "Z"))).is_zero()

    def test_rho2_rp5_generator_is_square(self):
        X = builtin("rp(5)")
        a = gen(X, 1, "Z2")
        assert rho2(gen(X, 2, "Z")) == CohomologyClass(cup(a.representative, a.representative))

    def test_rho2_kills_even(self):
        X = builtin("torus")
        y = gen(X, 1, "Z")
        assert rho2(y.scale(2)).is_zero()

    def test_ring_mismatch(self):
        X = builtin("rp2")
        with pytest.raises(RingError):
            rho2(gen(X, 1, "Z2"))
        with pytest.raises(RingError):
            gamma2(gen(X, 2, "Z"))

    def test_gamma2_values(self):
        X = builtin("circle")
        u = Cochain(X, 1, "Z2", [1, 0, 0])
        assert gamma2(CohomologyClass(u)).representative.values == (Fraction(1, 2), 0, 0)
        assert gamma2(CohomologyClass(Cochain.zero(X, 1, "Z2"))).is_zero()

    def test_gamma2_on_klein_ext_class(self):
        X = builtin("klein")
        integral = rho2(gen(X, 1, "Z"))
        basis = [b.cls for b in cohomology_group(X, 1, "Z2")[1]]
        ext = next(b for b in basis if not bockstein_beta(b).is_zero())
        assert ext != integral
        # beta-tilde(gamma2(ext)) = beta(ext) != 0, so gamma2(ext) != 0
        assert not gamma2(ext).is_zero()


class TestBocksteins:
    def test_beta_of_reduction(self):
        X = builtin("torus")
        assert bockstein_beta(rho2(gen(X, 1, "Z"))).is_zero()

    def test_beta_rp2(self):
        X = builtin("rp2")
        assert bockstein_beta(gen(X, 1, "Z2")) == gen(X, 2, "Z")

    @pytest.mark.parametrize("name", ["rp2", "klein", "rp3", "rp2*circle"])
    def test_rho2_beta_is_sq1(self, name):
        X = space(name)
        for n in range(X.dim):
            for b in cohomology_group(X, n, "Z2")[1]:
                assert rho2(bockstein_beta(b.cls)) == sq(1, b.cls)

    def test_beta2_rp2(self):
        X = builtin("rp2")
        a = gen(X, 1, "Z2")
        assert bockstein_beta2(a) == CohomologyClass(cup(a.representative, a.representative))

    @pytest.mark.parametrize("name", ["rp2", "klein", "rp3", "rp2*circle"])
    def test_beta2_squared(self, name):
        X = space(name)
        for n in range(X.dim - 1):
            for b in cohomology_group(X, n, "Z2")[1]:
                assert bockstein_beta2(bockstein_beta2(b.cls)).is_zero()

    def test_beta2_rp5_even_power(self):
        X = builtin("rp(5)")
        assert bockstein_beta2(rho2(gen(X, 2, "Z"))).is_zero()

    @given(st.randoms(use_true_random=False))
    def test_beta_lift_independence(self, rnd):
        X = builtin("rp2")
        a = gen(X, 1, "Z2")
        lift = a.representative.lift() + Cochain(X, 1, "Z", [2 * rnd.randint(-2, 2) for _ in range(X.count(1))])
        assert bockstein_beta(a, lift=lift) == bockstein_beta(a)

    def test_exp_of_rational_image(self):
        X = builtin("circle")
        q = gen(X, 1, "Q").scale(Fraction(3, 7))
        assert bockstein_exp(rational_to_qz(q)).is_zero()

    @pytest.mark.parametrize("name", ["rp2", "klein", "rp3", "torus"])
    def test_exp_gamma2_is_beta(self, name):
        X = builtin(name)
        for n in range(X.dim):
            for b in cohomology_group(X, n, "Z2")[1]:
                assert bockstein_exp(gamma2(b.cls)) == bockstein_beta(b.cls)

    def test_exp_half_on_circle(self):
        X = builtin("circle")
        u = gen(X, 1, "QZ").representative.scale(Fraction(1, 2)).to_ring("QZ")
        assert bockstein_exp(CohomologyClass(u)).is_zero()


class TestNaturality:
    def test_coefficient_maps_commute_with_pullback(self):
        X, Y = builtin("rp2"), builtin("circle")
        P = space("rp2*circle")
        px, _ = projections(X, Y, P)
        a = gen(X, 1, "Z2")
        x = gen(X, 2, "Z")
        assert pullback_class(px, bockstein_beta(a)) == bockstein_beta(pullback_class(px, a))
        assert pullback_class(px, rho2(x)) == rho2(pullback_class(px, x))
        assert pullback_class(px, gamma2(a)) == gamma2(pullback_class(px, a))
