"""Finite ordered simplicial complexes, simplicial maps and coboundaries."""

from __future__ import annotations

import hashlib
import json
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .linalg import SparseIntMatrix

RINGS = ("Z", "Z2", "Q", "QZ")


class ComplexError(ValueError):
    """Raised for malformed or invalid complex descriptions."""


class SimplicialComplex:
    """A finite simplicial complex on vertices ``0..vertex_count-1``.

    Simplices are strictly increasing vertex tuples; per-dimension tables
    are sorted lexicographically and that order fixes every sign and every
    front/back face used by cup products.
    """

    def __init__(self, name: str, vertex_count: int, facets: Iterable[Sequence[int]], *, _table=None):
        self.name = name
        self.vertex_count = int(vertex_count)
        if _table is None:
            facet_list = [tuple(f) for f in facets]
            for f in facet_list:
                _check_simplex(f, self.vertex_count)
            faces: list[set] = []
            for f in set(facet_list):
                for k in range(len(f)):
                    while len(faces) <= k:
                        faces.append(set())
                    faces[k].update(combinations(f, k + 1))
            table = [tuple(sorted(s)) for s in faces]
        else:
            table = [tuple(t) for t in _table]
        while table and not table[-1]:
            table.pop()
        self._table = tuple(table)
        self._index = None
        covered = {s[0] for s in self._table[0]} if self._table else set()
        if covered != set(range(self.vertex_count)):
            missing = sorted(set(range(self.vertex_count)) - covered)
            raise ComplexError(f"vertices {missing} do not belong to any facet")

    # -- tables ------------------------------------------------------------

    @classmethod
    def from_table(cls, name: str, vertex_count: int, table: Sequence[Sequence[tuple]]) -> "SimplicialComplex":
        """Build from a complete, downward-closed per-dimension simplex table."""
        sorted_table = [tuple(sorted(tuple(s) for s in t)) for t in table]
        return cls(name, vertex_count, (), _table=sorted_table)

    @property
    def dim(self) -> int:
        return len(self._table) - 1

    def simplices(self, n: int) -> tuple:
        if 0 <= n < len(self._table):
            return self._table[n]
        return ()

    def count(self, n: int) -> int:
        return len(self.simplices(n))

    @property
    def f_vector(self) -> tuple:
        return tuple(len(t) for t in self._table)

    def index(self, n: int) -> dict:
        if self._index is None:
            self._index = [{s: i for i, s in enumerate(t)} for t in self._table]
        if 0 <= n < len(self._index):
            return self._index[n]
        return {}

    def index_of(self, simplex: Sequence[int]) -> int:
        s = tuple(simplex)
        try:
            return self.index(len(s) - 1)[s]
        except KeyError:
            raise ComplexError(f"{list(s)} is not a simplex of {self.name}") from None

    @cached_property
    def facets(self) -> tuple:
        out = []
        for n, t in enumerate(self._table):
            higher = set()
            if n + 1 < len(self._table):
                for s in self._table[n + 1]:
                    higher.update(s[:i] + s[i + 1:] for i in range(len(s)))
            out += [s for s in t if s not in higher]
        return tuple(sorted(out))

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(t) for n, t in enumerate(self._table))

    @cached_property
    def content_hash(self) -> str:
        payload = json.dumps([self.vertex_count, [list(map(list, t)) for t in self._table]], separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex.from_table(f"{self.name}^({k})", self.vertex_count, self._table[: k + 1])

    def renamed(self, name: str) -> "SimplicialComplex":
        return SimplicialComplex.from_table(name, self.vertex_count, self._table)

    # -- coboundaries --------------------------------------------------------

    def coboundary(self, n: int) -> SparseIntMatrix:
        """Integer matrix of delta: C^n -> C^{n+1} (rows index (n+1)-simplices)."""
        cache = self.__dict__.setdefault("_cob", {})
        if n not in cache:
            if n < -1:
                raise ComplexError(f"degree {n} out of range")
            rows = self.simplices(n + 1)
            cols = self.simplices(n) if n >= 0 else ()
            if n == -1:
                mat = SparseIntMatrix(len(rows), 0)
            else:
                idx = self.index(n)
                entries = []
                for r, s in enumerate(rows):
                    for i in range(len(s)):
                        entries.append((r, idx[s[:i] + s[i + 1:]], -1 if i % 2 else 1))
                entries.sort()
                mat = SparseIntMatrix(len(rows), len(cols), tuple(entries))
            cache[n] = mat
        return cache[n]

    def face_table(self, n: int) -> list[list[int]]:
        """For each (n)-simplex, the indices of its (n-1)-faces in removal order."""
        cache = self.__dict__.setdefault("_faces", {})
        if n not in cache:
            idx = self.index(n - 1)
            cache[n] = [[idx[s[:i] + s[i + 1:]] for i in range(len(s))] for s in self.simplices(n)]
        return cache[n]

    def __repr__(self) -> str:
        return f"SimplicialComplex({self.name!r}, vertices={self.vertex_count}, f={self.f_vector})"

    def to_json(self) -> dict:
        return {"name": self.name, "vertex_count": self.vertex_count, "facets": [list(f) for f in self.facets]}


def _check_simplex(f: tuple, vertex_count: int) -> None:
    if not f:
        raise ComplexError("empty facet")
    for a, b in zip(f, f[1:]):
        if a >= b:
            raise ComplexError(f"facet {list(f)} is not strictly increasing")
    if f[0] < 0 or f[-1] >= vertex_count:
        raise ComplexError(f"facet {list(f)} has a vertex outside 0..{vertex_count - 1}")


def coboundary_matrix(X: SimplicialComplex, n: int, ring: str = "Z"):
    """Matrix of delta^n over the given ring.

    Over Z, Q and Q/Z this is the integer matrix (Q/Z cochains are acted on
    by integers); over Z/2 entries are reduced mod 2.
    """
    if ring not in RINGS:
        raise ValueError(f"unknown ring {ring!r}")
    if n < 0 or n > max(X.dim, 0):
        raise ComplexError(f"degree {n} outside 0..{X.dim}")
    M = X.coboundary(n)
    if ring == "Z2":
        return SparseIntMatrix(M.rows, M.cols, tuple((r, c, 1) for r, c, v in M.entries if v % 2))
    return M


# ---------------------------------------------------------------------------
# constructions


def _staircase_paths(p: int, q: int, steps: int | None):
    """Monotone lattice paths (0,0)->(p,q) with steps in {(1,0),(0,1),(1,1)}.

    Yields tuples of grid points.  ``steps=None`` restricts to unit steps
    (the maximal staircase simplices).
    """
    moves = ((1, 0), (0, 1)) if steps is None else ((1, 0), (0, 1), (1, 1))
    target = p + q if steps is None else steps

    def rec(path):
        x, y = path[-1]
        if len(path) - 1 == target:
            if (x, y) == (p, q):
                yield tuple(path)
            return
        for dx, dy in moves:
            nx, ny = x + dx, y + dy
            if nx <= p and ny <= q:
                path.append((nx, ny))
                yield from rec(path)
                path.pop()

    yield from rec([(0, 0)])


def _factor_name(X: SimplicialComplex) -> str:
    return f"({X.name})" if "*" in X.name else X.name


def product(X: SimplicialComplex, Y: SimplicialComplex, max_dim: int | None = None, name: str | None = None) -> SimplicialComplex:
    """Staircase triangulation of X x Y; vertex (x, y) gets label x*|V(Y)| + y.

    With ``max_dim`` only the ``max_dim``-skeleton is built, which is what
    low-degree cohomology needs and is much cheaper for large factors.
    """
    ny = Y.vertex_count
    label = name or f"{_factor_name(X)}*{_factor_name(Y)}" + ("" if max_dim is None else f"[{max_dim}]")
    if max_dim is None:
        facets = set()
        for s in X.facets:
            for t in Y.facets:
                for path in _staircase_paths(len(s) - 1, len(t) - 1, None):
                    facets.add(tuple(s[i] * ny + t[j] for i, j in path))
        return SimplicialComplex(label, X.vertex_count * ny, sorted(facets))
    table = [[] for _ in range(max_dim + 1)]
    path_cache: dict = {}
    for p in range(min(X.dim, max_dim) + 1):
        for q in range(min(Y.dim, max_dim) + 1):
            for d in range(max(p, q), min(p + q, max_dim) + 1):
                paths = path_cache.setdefault((p, q, d), list(_staircase_paths(p, q, d)))
                if not paths:
                    continue
                for s in X.simplices(p):
                    for t in Y.simplices(q):
                        for path in paths:
                            table[d].append(tuple(s[i] * ny + t[j] for i, j in path))
    return SimplicialComplex.from_table(label, X.vertex_count * ny, table)


def suspension(X: SimplicialComplex, name: str | None = None) -> SimplicialComplex:
    """Join with two apex vertices labelled after all vertices of X."""
    north, south = X.vertex_count, X.vertex_count + 1
    facets = [tuple(f) + (north,) for f in X.facets] + [tuple(f) + (south,) for f in X.facets]
    return SimplicialComplex(name or f"S({X.name})", X.vertex_count + 2, facets)


class SimplicialMap:
    """Vertex map that sends simplices to simplices (repeats allowed)."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_images: Sequence[int]):
        if len(vertex_images) != source.vertex_count:
            raise ComplexError("vertex map has the wrong length")
        self.source = source
        self.target = target
        self.vertex_images = tuple(int(v) for v in vertex_images)
        for f in source.facets:
            image = tuple(sorted({self.vertex_images[v] for v in f}))
            if image not in target.index(len(image) - 1):
                raise ComplexError(f"image of facet {list(f)} is not a simplex of {target.name}")

    def image(self, simplex: Sequence[int]) -> tuple | None:
        """The image simplex, or None if it is degenerate."""
        img = [self.vertex_images[v] for v in simplex]
        if len(set(img)) < len(img):
            return None
        return tuple(img)

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """self after other."""
        return SimplicialMap(other.source, self.target, [self.vertex_images[v] for v in other.vertex_images])


def identity_map(X: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(X, X, range(X.vertex_count))


def projections(X: SimplicialComplex, Y: SimplicialComplex, P: SimplicialComplex) -> tuple[SimplicialMap, SimplicialMap]:
    ny = Y.vertex_count
    px = SimplicialMap(P, X, [v // ny for v in range(P.vertex_count)])
    py = SimplicialMap(P, Y, [v % ny for v in range(P.vertex_count)])
    return px, py


def parse_complex(document: str | dict) -> SimplicialComplex:
    """Parse and validate a complex description given as JSON text or a dict."""
    if isinstance(document, str):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ComplexError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    else:
        data = document
    if not isinstance(data, dict):
        raise ComplexError("complex document must be an object")
    if "vertex_count" not in data or "facets" not in data:
        raise ComplexError("complex document needs 'vertex_count' and 'facets'")
    n = data["vertex_count"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ComplexError("field 'vertex_count' must be a positive integer")
    facets = data["facets"]
    if not isinstance(facets, list):
        raise ComplexError("field 'facets' must be a list")
    clean = []
    for k, f in enumerate(facets):
        if not isinstance(f, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in f):
            raise ComplexError(f"facets[{k}] must be a list of integers")
        try:
            _check_simplex(tuple(f), n)
        except ComplexError as exc:
            raise ComplexError(f"facets[{k}]: {exc}") from None
        clean.append(tuple(f))
    if len(set(clean)) != len(clean):
        raise ComplexError("duplicate facet")
    return SimplicialComplex(str(data.get("name", "complex")), n, clean)
