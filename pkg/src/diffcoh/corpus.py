"""Built-in triangulations."""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import permutations

from .complexes import SimplicialComplex


class UnknownSpaceError(KeyError):
    pass


# Mobius' 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
TORUS_FACETS = tuple(
    sorted(
        tuple(sorted(((i + a) % 7, (i + b) % 7, (i + c) % 7)))
        for i in range(7)
        for a, b, c in ((0, 1, 3), (0, 2, 3))
    )
)

# 6-vertex real projective plane (hemi-icosahedron).
RP2_FACETS = (
    (0, 1, 3), (0, 1, 5), (0, 2, 4), (0, 2, 5), (0, 3, 4),
    (1, 2, 3), (1, 2, 4), (1, 4, 5), (2, 3, 5), (3, 4, 5),
)

# 11-vertex real projective 3-space, obtained from the 15-vertex antipodal
# quotient by bistellar moves (scripts/reduce_rp3.py).
RP3_FACETS = (
    (0, 1, 2, 4), (0, 1, 2, 10), (0, 1, 3, 4), (0, 1, 3, 9), (0, 1, 9, 10),
    (0, 2, 4, 6), (0, 2, 6, 7), (0, 2, 7, 10), (0, 3, 4, 6), (0, 3, 5, 6),
    (0, 3, 5, 9), (0, 5, 6, 7), (0, 5, 7, 8), (0, 5, 8, 9), (0, 7, 8, 10),
    (0, 8, 9, 10), (1, 2, 4, 8), (1, 2, 5, 8), (1, 2, 5, 10), (1, 3, 4, 8),
    (1, 3, 7, 8), (1, 3, 7, 9), (1, 5, 6, 7), (1, 5, 6, 10), (1, 5, 7, 8),
    (1, 6, 7, 9), (1, 6, 9, 10), (2, 3, 5, 9), (2, 3, 5, 10), (2, 3, 7, 9),
    (2, 3, 7, 10), (2, 4, 6, 8), (2, 5, 8, 9), (2, 6, 7, 9), (2, 6, 8, 9),
    (3, 4, 6, 8), (3, 5, 6, 10), (3, 6, 8, 10), (3, 7, 8, 10), (6, 8, 9, 10),
)


def _klein_facets():
    """3x3 grid with the second coordinate reflected across one seam."""

    def label(a, b):
        if a == 3:
            a, b = 0, -b
        return 3 * (a % 3) + (b % 3)

    out = set()
    for i in range(3):
        for j in range(3):
            p00, p10 = label(i, j), label(i + 1, j)
            p01, p11 = label(i, j + 1), label(i + 1, j + 1)
            out.add(tuple(sorted((p00, p10, p11))))
            out.add(tuple(sorted((p00, p01, p11))))
    return tuple(sorted(out))


KLEIN_FACETS = _klein_facets()


def point() -> SimplicialComplex:
    return SimplicialComplex("point", 1, [(0,)])


def sphere(n: int) -> SimplicialComplex:
    if n < 0:
        raise UnknownSpaceError(f"sphere({n})")
    if n == 0:
        return SimplicialComplex("sphere(0)", 2, [(0,), (1,)])
    verts = range(n + 2)
    facets = [tuple(v for v in verts if v != k) for k in verts]
    return SimplicialComplex(f"sphere({n})", n + 2, facets)


def circle() -> SimplicialComplex:
    return sphere(1).renamed("circle")


def torus() -> SimplicialComplex:
    return SimplicialComplex("torus", 7, TORUS_FACETS)


def klein() -> SimplicialComplex:
    return SimplicialComplex("klein", 9, KLEIN_FACETS)


def rp2() -> SimplicialComplex:
    return SimplicialComplex("rp2", 6, RP2_FACETS)


def rp3() -> SimplicialComplex:
    return SimplicialComplex("rp3", 11, RP3_FACETS)


def rp_quotient(n: int) -> SimplicialComplex:
    """Barycentric subdivision of the boundary of the (n+1)-simplex modulo F -> complement.

    A face F of the (n+1)-simplex on {0..n+1} is identified with its
    complement; each orbit is represented by the member avoiding n+1.
    Vertex labels follow (size, sorted members) of the representatives.
    """
    top = n + 1
    full = frozenset(range(n + 2))

    def rep(face):
        return face if top not in face else full - face

    reps = sorted({rep(frozenset(s)) for s in _proper_faces(n + 2)}, key=lambda f: (len(f), sorted(f)))
    label = {f: i for i, f in enumerate(reps)}
    facets = set()
    for perm in permutations(range(n + 2)):
        chain = [frozenset(perm[: k + 1]) for k in range(n + 1)]
        facets.add(tuple(sorted(label[rep(f)] for f in chain)))
    return SimplicialComplex(f"rp({n})", len(reps), sorted(facets))


def _proper_faces(m):
    for mask in range(1, (1 << m) - 1):
        yield [i for i in range(m) if mask >> i & 1]


@lru_cache(maxsize=None)
def _builtin_cached(tag: str) -> SimplicialComplex:
    if tag == "point":
        return point()
    if tag == "circle":
        return circle()
    if tag == "torus":
        return torus()
    if tag == "klein":
        return klein()
    m = re.fullmatch(r"sphere\(?(\d+)\)?", tag)
    if m:
        return sphere(int(m.group(1)))
    m = re.fullmatch(r"rp\(?(\d+)\)?", tag)
    if m:
        k = int(m.group(1))
        if k == 1:
            return circle().renamed("rp(1)")
        if k == 2:
            return rp2()
        if k == 3:
            return rp3()
        if k >= 4:
            return rp_quotient(k)
    raise UnknownSpaceError(tag)


def builtin(name: str) -> SimplicialComplex:
    """Look up a built-in space by tag, e.g. ``torus``, ``sphere(2)``, ``rp5``."""
    tag = name.strip().lower().replace(" ", "")
    return _builtin_cached(tag)


SMALL_CORPUS = ("point", "circle", "sphere(2)", "sphere(3)", "torus", "klein", "rp2", "rp3")
