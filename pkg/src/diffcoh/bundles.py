"""Explicit differential cocycles for line bundles and gerbes.

``line_bundle(X, k)`` on a closed oriented surface spreads curvature k
uniformly over the fundamental cycle and solves for the connection part, so
that (c, h, omega) carries Chern number k.  ``winding_circle()`` is the
degree-1 cocycle of the identity map to U(1) on the 3-vertex circle.
"""

from __future__ import annotations

from fractions import Fraction

from .cochains import Cochain
from .cohomology import cohomology_group, primitive
from .complexes import SimplicialComplex
from .corpus import builtin
from .differential import DiffCocycle, DiffCocycleError
from .linalg import solve_integer


def fundamental_cycle(X: SimplicialComplex) -> list[int]:
    """An integral top-dimensional cycle with entries +-1, if X is a closed
    oriented pseudomanifold."""
    n = X.dim
    if n == 0:
        raise DiffCocycleError("a point has no fundamental cycle of positive degree")
    sol = solve_integer(X.coboundary(n - 1).transpose(), [0] * X.count(n - 1), parametrize=True)
    kernel = sol.kernel if sol is not None else []
    if len(kernel) != 1 or any(abs(v) != 1 for v in kernel[0]):
        raise DiffCocycleError(f"{X.name} is not a closed oriented pseudomanifold")
    return list(kernel[0])


def top_generator(X: SimplicialComplex) -> tuple[Cochain, list[int]]:
    """Generator of H^top(X; Z) normalized to pair to +1 with the returned cycle."""
    z = fundamental_cycle(X)
    _, basis = cohomology_group(X, X.dim, "Z")
    free = [b for b in basis if b.kind == "free"]
    if len(free) != 1:
        raise DiffCocycleError("top cohomology is not Z")
    g = free[0].cls.representative
    pairing = sum(v * w for v, w in zip(g.values, z))
    if abs(pairing) != 1:
        raise DiffCocycleError("generator does not pair to a unit with the fundamental cycle")
    return g, [pairing * v for v in z]


def line_bundle(X: SimplicialComplex, k: int) -> DiffCocycle:
    """Degree-top cocycle with Chern number k and uniform curvature."""
    g, z = top_generator(X)
    n = X.dim
    T = len(z)
    c = g.scale(k)
    omega = Cochain(X, n, "Q", (Fraction(k * s, T) for s in z))
    diff = omega - c.to_ring("Q")
    h = primitive(diff) if diff.nonzero() else Cochain.zero(X, n - 1, "Q")
    if h is None:
        raise DiffCocycleError("curvature is not cohomologous to the Chern class")
    return DiffCocycle(c, h, omega)


def winding_circle() -> DiffCocycle:
    """(c, 0, c) for the H^1(circle; Z) generator."""
    X = builtin("circle")
    _, basis = cohomology_group(X, 1, "Z")
    return DiffCocycle.from_integral(basis[0].cls.representative)
