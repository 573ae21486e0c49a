"""Differential cocycles (c, h, omega) and the maps around them.

A differential cocycle of degree m is an integral cocycle c, a rational
(m-1)-cochain h and a rational cocycle omega with delta h = omega - c.
Rationals stand in for real differential forms.  Two cocycles are equal
when their difference is D(b, k) = (delta b, -b - delta k, 0) for an
integral b and a rational k.  So the curvature omega is an invariant of
the class, and a flat cocycle (omega = 0) is trivial exactly when h mod 1
is trivial in H^{m-1}(Q/Z).

The product refines the cup product of c and a graded-commutative product
of curvatures, ``star(w1, w2) = (w1 cup w2 + (-1)^(pq) w2 cup w1) / 2``.
That product plays the role of the wedge product of forms.  The h-part is
corrected by a rational cup-1 term so that the triple stays closed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cochains import Cochain, CochainError
from .cohomology import (
    CohomologyClass,
    bockstein_exp,
    descriptor,
    engine_for,
    gamma2,
    rho2,
)
from .complexes import SimplicialComplex
from .groups import GroupDescriptor
from .linalg import SparseIntMatrix, rational_rank
from .steenrod import EvenSquareError, cup, cup1, sq

HALF = Fraction(1, 2)


class DiffCocycleError(CochainError):
    pass


class DegreeError(ValueError):
    pass


class DiffCocycle:
    """Triple (c, h, omega) with delta h = omega - c."""

    __slots__ = ("c", "h", "omega")

    def __init__(self, c: Cochain, h: Cochain, omega: Cochain, *, check: bool = True):
        if c.ring != "Z":
            raise DiffCocycleError("c must be an integral cochain")
        h = h.to_ring("Q") if h.ring == "Z" else h
        omega = omega.to_ring("Q") if omega.ring == "Z" else omega
        if h.ring != "Q" or omega.ring != "Q":
            raise DiffCocycleError("h and omega must be rational cochains")
        m = c.degree
        if m < 1:
            raise DegreeError("differential cocycles have degree >= 1")
        if omega.degree != m or h.degree != m - 1:
            raise DegreeError(f"degrees (c={c.degree}, h={h.degree}, omega={omega.degree}) are inconsistent")
        self.c, self.h, self.omega = c, h, omega
        if check:
            if h.delta() != omega - c.to_ring("Q"):
                raise DiffCocycleError("delta h != omega - c")
            if omega.delta().nonzero():
                raise DiffCocycleError("omega is not closed")

    @property
    def complex(self) -> SimplicialComplex:
        return self.c.complex

    @property
    def degree(self) -> int:
        return self.c.degree

    @classmethod
    def zero(cls, X: SimplicialComplex, m: int) -> "DiffCocycle":
        return cls(Cochain.zero(X, m, "Z"), Cochain.zero(X, m - 1, "Q"), Cochain.zero(X, m, "Q"), check=False)

    @classmethod
    def from_integral(cls, c: Cochain) -> "DiffCocycle":
        """(c, 0, c) for an integral cocycle c."""
        if not c.is_cocycle():
            raise DiffCocycleError("c is not a cocycle")
        X, m = c.complex, c.degree
        return cls(c, Cochain.zero(X, m - 1, "Q"), c.to_ring("Q"), check=False)

    def __add__(self, other: "DiffCocycle") -> "DiffCocycle":
        return DiffCocycle(self.c + other.c, self.h + other.h, self.omega + other.omega, check=False)

    def __sub__(self, other: "DiffCocycle") -> "DiffCocycle":
        return DiffCocycle(self.c - other.c, self.h - other.h, self.omega - other.omega, check=False)

    def __neg__(self) -> "DiffCocycle":
        return DiffCocycle(-self.c, -self.h, -self.omega, check=False)

    def scale(self, k: int) -> "DiffCocycle":
        return DiffCocycle(self.c.scale(k), self.h.scale(k), self.omega.scale(k), check=False)

    def __rmul__(self, k: int) -> "DiffCocycle":
        return self.scale(k)

    def is_closed(self) -> bool:
        return not any(part.nonzero() for part in differential(self.c, self.h, self.omega))

    def __repr__(self) -> str:
        return f"DiffCocycle({self.complex.name}, deg={self.degree}, c={self.c.support()}, h={self.h.support()}, omega={self.omega.support()})"


def differential(c: Cochain, h: Cochain, omega: Cochain) -> tuple[Cochain, Cochain, Cochain]:
    """Total differential D(c, h, omega) = (delta c, omega - c - delta h, delta omega)."""
    if c.degree != omega.degree or h.degree != c.degree - 1:
        raise DegreeError("degrees are inconsistent")
    cq = c.to_ring("Q") if c.ring == "Z" else c
    return c.delta(), omega.to_ring("Q") - cq - h.to_ring("Q").delta(), omega.delta()


# ---------------------------------------------------------------------------
# the four maps


def I(x: DiffCocycle) -> CohomologyClass:  # noqa: E743 - conventional name
    """Underlying integral class."""
    return CohomologyClass(x.c, check=False)


def R(x: DiffCocycle) -> Cochain:
    """Curvature cochain."""
    return x.omega


# Sign convention for the flat inclusion: j(u) = (-delta h, h, 0) with h the
# [0, 1) lift of u, so I(j(u)) = J_SIGN * bockstein_exp(u).
J_SIGN = -1


def j(u: CohomologyClass) -> DiffCocycle:
    """Flat inclusion of a Q/Z class of degree m-1 into degree m."""
    if u.ring != "QZ":
        raise DiffCocycleError("j takes a Q/Z class")
    h = u.representative.lift()
    dh = h.delta()
    c = Cochain(h.complex, h.degree + 1, "Z", (J_SIGN * v for v in dh.values))
    return DiffCocycle(c, h, Cochain.zero(h.complex, h.degree + 1, "Q"), check=False)


def a(eta: Cochain) -> DiffCocycle:
    """Topologically trivial cocycle (0, eta, delta eta)."""
    eta = eta.to_ring("Q") if eta.ring == "Z" else eta
    X, m = eta.complex, eta.degree + 1
    return DiffCocycle(Cochain.zero(X, m, "Z"), eta, eta.delta(), check=False)


def flat_class(x: DiffCocycle) -> CohomologyClass:
    """For a flat cocycle, the Q/Z class of h mod 1 (its holonomy)."""
    if x.omega.nonzero():
        raise DiffCocycleError("cocycle is not flat")
    return CohomologyClass(x.h.to_ring("QZ"), check=False)


def holonomy(x: DiffCocycle) -> list:
    """Coordinates of the flat class in the computed basis of H^{m-1}(Q/Z)."""
    return flat_class(x).coordinates()


def is_trivial(x: DiffCocycle) -> bool:
    """Decide whether x = D(b, k) for integral b and rational k.

    Such a difference has zero curvature, so omega must vanish as a
    cochain; then x is trivial iff h mod 1 is trivial in H^{m-1}(Q/Z).
    """
    if x.omega.nonzero():
        return False
    return flat_class(x).is_zero()


def equal(x: DiffCocycle, y: DiffCocycle) -> bool:
    return is_trivial(x - y)


def is_two_torsion(x: DiffCocycle) -> bool:
    return is_trivial(x.scale(2))


# ---------------------------------------------------------------------------
# products and operations


def star(w1: Cochain, w2: Cochain) -> Cochain:
    """Graded-commutative product of curvature cochains."""
    p, q = w1.degree, w2.degree
    sign = -1 if (p * q) % 2 else 1
    return (cup(w1, w2) + cup(w2, w1).scale(sign)).scale(HALF)


def curvature_power(w: Cochain, m: int) -> Cochain:
    out = w
    for _ in range(m - 1):
        out = star(out, w)
    return out


def db_cup(x: DiffCocycle, y: DiffCocycle) -> DiffCocycle:
    """Product of differential cocycles.

    (c1 cup c2, (-1)^p c1 cup h2 + h1 cup w2 + (-1)^(p+q) (w1 cup_1 w2)/2, star(w1, w2))
    """
    if x.complex is not y.complex and x.complex.content_hash != y.complex.content_hash:
        raise DiffCocycleError("cocycles live on different complexes")
    p, q = x.degree, y.degree
    c = cup(x.c, y.c)
    sign_p = -1 if p % 2 else 1
    h = cup(x.c, y.h).scale(sign_p) + cup(x.h, y.omega)
    if x.omega.nonzero() and y.omega.nonzero():
        corr = cup1(x.omega, y.omega).scale(HALF if (p + q) % 2 == 0 else -HALF)
        h = h + corr
    omega = star(x.omega, y.omega)
    return DiffCocycle(c, h, omega, check=False)


def dd_power(x: DiffCocycle, m: int) -> DiffCocycle:
    """Left-nested m-fold product; m = 1 is the identity."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = x
    for _ in range(m - 1):
        out = db_cup(out, x)
    return out


def refined_sq(k: int, x: DiffCocycle) -> DiffCocycle:
    """Refined odd square j Gamma_2 Sq^{k-1} rho_2 I."""
    if k % 2 == 0:
        raise EvenSquareError("even refinement does not exist")
    if k < 1:
        raise ValueError("k must be a positive odd number")
    return j(gamma2(sq(k - 1, rho2(I(x)))))


# ---------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class DiffProfile:
    flat_part: GroupDescriptor
    integral_image: GroupDescriptor
    form_ambiguity_dim: int

    def to_json(self) -> dict:
        return {
            "flat_part": self.flat_part.to_json(),
            "integral_image": self.integral_image.to_json(),
            "form_ambiguity_dim": self.form_ambiguity_dim,
        }


def coboundary_rank(X: SimplicialComplex, n: int) -> int:
    """Rank of delta^n over Q (unit pivots plus the reduced remainder)."""
    if n < 0 or n >= X.dim:
        return 0
    red = engine_for(X).reduction
    small = red.small_matrix(n)
    return len(red.steps[n]) + rational_rank(SparseIntMatrix.from_dense(small, cols=red.small_size(n)))


def diff_profile(X: SimplicialComplex, m: int) -> DiffProfile:
    flat = descriptor(X, m - 1, "QZ") if m >= 1 else GroupDescriptor()
    return DiffProfile(flat, descriptor(X, m, "Z"), coboundary_rank(X, m - 1))


def bockstein_check_sign(u: CohomologyClass) -> bool:
    """I(j(u)) equals J_SIGN times the exponential Bockstein."""
    lhs = I(j(u))
    rhs = bockstein_exp(u)
    return lhs == rhs.scale(J_SIGN)


def pullback_diff(f, x: DiffCocycle) -> DiffCocycle:
    """Componentwise pullback along a simplicial map."""
    return DiffCocycle(x.c.pullback(f), x.h.pullback(f), x.omega.pullback(f), check=False)
