"""Seeded random cochains, classes and differential cocycles.

All generators draw from a ``random.Random`` passed in by the caller, so a
verification run is reproducible from its seed.  Random classes are random
integer combinations of the computed basis plus a random coboundary, which
keeps representatives away from the canonical ones.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .cochains import Cochain
from .cohomology import CohomologyClass, cohomology_group
from .complexes import SimplicialComplex
from .differential import DiffCocycle, a, j

DENOMINATORS = (1, 2, 3, 4, 6)


def random_cochain(rng: random.Random, X: SimplicialComplex, n: int, ring: str, density: float = 0.5) -> Cochain:
    vals = []
    for _ in range(X.count(n)):
        if rng.random() >= density:
            vals.append(0)
        elif ring in ("Z2",):
            vals.append(1)
        elif ring == "Z":
            vals.append(rng.choice((-2, -1, 1, 2)))
        else:
            vals.append(Fraction(rng.randint(-5, 5), rng.choice(DENOMINATORS)))
    return Cochain(X, n, ring, vals)


def random_coboundary(rng: random.Random, X: SimplicialComplex, n: int, ring: str) -> Cochain:
    if n == 0:
        return Cochain.zero(X, 0, ring)
    return random_cochain(rng, X, n - 1, ring, density=0.3).delta()


def random_class(rng: random.Random, X: SimplicialComplex, n: int, ring: str, perturb: bool = True) -> CohomologyClass:
    _, basis = cohomology_group(X, n, ring)
    acc = Cochain.zero(X, n, ring)
    for b in basis:
        rep = b.cls.representative
        if ring == "QZ" and b.kind == "divisible":
            acc = acc + rep.scale(Fraction(rng.randint(0, 11), 12)).to_ring("QZ")
        elif ring == "Q":
            acc = acc + rep.scale(Fraction(rng.randint(-4, 4), rng.choice(DENOMINATORS)))
        else:
            acc = acc + rep.scale(rng.randint(-2, 2))
    if perturb and n <= X.dim:
        acc = acc + random_coboundary(rng, X, n, ring)
    return CohomologyClass(acc, check=False)


def random_diff_cocycle(rng: random.Random, X: SimplicialComplex, m: int) -> DiffCocycle:
    """(c, 0, c) for a random integral cocycle, plus a(eta) and a flat j-term."""
    c = random_class(rng, X, m, "Z").representative
    x = DiffCocycle.from_integral(c)
    x = x + a(random_cochain(rng, X, m - 1, "Q", density=0.4))
    if m - 1 <= X.dim:
        x = x + j(random_class(rng, X, m - 1, "QZ"))
    return x


def generator_diff_cocycles(X: SimplicialComplex, m: int) -> list[tuple[str, DiffCocycle]]:
    """Named differential cocycles built from the integral and Q/Z bases."""
    out = []
    _, zbasis = cohomology_group(X, m, "Z")
    for k, b in enumerate(zbasis):
        out.append((f"I{k}", DiffCocycle.from_integral(b.cls.representative)))
    _, qbasis = cohomology_group(X, m - 1, "QZ")
    for k, b in enumerate(qbasis):
        rep = b.cls.representative
        if b.kind == "divisible":
            rep = rep.scale(Fraction(1, 2)).to_ring("QZ")
        out.append((f"J{k}", j(CohomologyClass(rep, check=False))))
    return out
