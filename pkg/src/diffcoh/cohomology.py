"""Cohomology groups, classes, coefficient maps and Bocksteins.

Every computation runs on the reduced cochain complex of ``reduction``.
For degree n, with SNF ``U delta'^{n-1} V = D`` and ``y = U u'`` for a
reduced cocycle ``u'``, the first ``s = rank`` coordinates of y carry the
A/d_i A summands.  The remaining coordinates are acted on by
``N = delta'^n U^{-1}`` restricted to its last columns; a second SNF of N
splits them into the d-torsion of A (from the torsion of H^{n+1}(Z)) and
free copies of A.  This yields descriptors, bases and exact coordinates
for A in {Z, Z/2, Q, Q/Z} from the same two integer SNFs.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from . import cache
from .cochains import Cochain, CochainError, RingError
from .complexes import SimplicialComplex
from .groups import GroupDescriptor
from .linalg import SNFLog, SparseIntMatrix, f2_rank, snf_log
from .reduction import Reduction


class NotACocycleError(CochainError):
    pass


# ---------------------------------------------------------------------------
# engine


@dataclass
class _DegreeData:
    m: int
    log1: SNFLog
    log2: SNFLog

    @property
    def d1(self):
        return self.log1.diagonal

    @property
    def s(self):
        return self.log1.rank

    @property
    def d2(self):
        return self.log2.diagonal

    @property
    def s2(self):
        return self.log2.rank


class Engine:
    """Per-complex cohomology engine; build through ``engine_for``."""

    def __init__(self, X: SimplicialComplex):
        self.X = X
        self._lock = threading.Lock()
        self._reduction = None
        self._degrees: dict[int, _DegreeData] = {}

    @property
    def reduction(self) -> Reduction:
        if self._reduction is None:
            with self._lock:
                if self._reduction is None:
                    key = self.X.content_hash
                    state = cache.load(key)
                    if state is not None:
                        red = Reduction(self.X, steps=state["steps"], small_rows=state["small_rows"])
                    else:
                        red = Reduction(self.X)
                        cache.store(key, red.to_state())
                    self._reduction = red
        return self._reduction

    def degree(self, n: int) -> _DegreeData:
        data = self._degrees.get(n)
        if data is None:
            red = self.reduction
            m = red.small_size(n)
            prev = red.small_matrix(n - 1) if n >= 1 else [[] for _ in range(m)]
            log1 = snf_log(SparseIntMatrix.from_dense(prev, cols=red.small_size(n - 1)))
            nxt = red.small_matrix(n)
            s = log1.rank
            # N = delta'^n U^{-1}; only columns s.. can be nonzero
            cols = []
            for k in range(s, m):
                e = [0] * m
                e[k] = 1
                cols.append(_matvec(nxt, log1.apply_U_inv(e)))
            for k in range(s):
                e = [0] * m
                e[k] = 1
                assert not any(_matvec(nxt, log1.apply_U_inv(e))), "delta^2 != 0 on reduced complex"
            rows = len(nxt)
            dense = [[cols[j][i] for j in range(len(cols))] for i in range(rows)]
            log2 = snf_log(SparseIntMatrix.from_dense(dense, cols=m - s))
            data = _DegreeData(m=m, log1=log1, log2=log2)
            with self._lock:
                self._degrees.setdefault(n, data)
                data = self._degrees[n]
        return data

    # -- per-ring structure --------------------------------------------------

    def slots(self, n: int, ring: str) -> list[tuple]:
        """Basis slots as (kind, index, order).

        kind is "t" (from D1), "k" (from D2) or "f" (free copy of the ring).
        """
        if n < 0 or n > self.X.dim:
            return []
        dd = self.degree(n)
        out = []
        for i, d in enumerate(dd.d1):
            if ring == "Z" and d > 1:
                out.append(("t", i, d))
            elif ring == "Z2" and d % 2 == 0:
                out.append(("t", i, 2))
        for j, d in enumerate(dd.d2):
            if ring == "Z2" and d % 2 == 0:
                out.append(("k", j, 2))
            elif ring == "QZ" and d > 1:
                out.append(("k", j, d))
        for j in range(dd.s2, dd.m - dd.s):
            out.append(("f", j, None))
        return out

    def descriptor(self, n: int, ring: str) -> GroupDescriptor:
        slots = self.slots(n, ring)
        free = sum(1 for k, _, _ in slots if k == "f")
        orders = tuple(o for k, _, o in slots if k != "f")
        if ring == "QZ":
            return GroupDescriptor(0, orders, free)
        if ring == "Z2":
            return GroupDescriptor(0, orders + (2,) * free, 0)
        return GroupDescriptor(free, orders, 0)

    def reduced_coordinates(self, y_full: list, n: int, ring: str) -> list:
        """Coordinates of a reduced cocycle (already multiplied by U)."""
        dd = self.degree(n)
        s = dd.s
        out = []
        z = dd.log2.apply_V_inv(y_full[s:]) if dd.m - s else []
        for kind, idx, order in self.slots(n, ring):
            if kind == "t":
                out.append(int(y_full[idx]) % order)
            elif kind == "k":
                if ring == "Z2":
                    out.append(int(z[idx]) % 2)
                else:
                    scaled = z[idx] * dd.d2[idx]
                    out.append(int(scaled) % order)
            else:
                out.append(_ring_value(z[idx], ring))
        return out

    def coordinates(self, u: Cochain) -> list:
        n, ring = u.degree, u.ring
        if n < 0 or n > self.X.dim:
            return []
        red = self.reduction
        lifted = u.lift().support()
        reduced = red.project(lifted, n)
        y = self.degree(n).log1.apply_U(reduced)
        return self.reduced_coordinates(y, n, ring)

    def generator(self, n: int, ring: str, slot: tuple) -> Cochain:
        """Cocycle for one basis slot.  Q/Z free slots return the integral
        cocycle whose Q/Z multiples form the summand (ring Q)."""
        dd = self.degree(n)
        kind, idx, order = slot
        y = [0] * dd.m
        if kind == "t":
            y[idx] = 1
        else:
            z = [0] * (dd.m - dd.s)
            z[idx] = Fraction(1, dd.d2[idx]) if (kind == "k" and ring == "QZ") else 1
            y[dd.s:] = dd.log2.apply_V(z)
        reduced = dd.log1.apply_U_inv(y)
        full = self.reduction.include(reduced, n)
        target = "Q" if (ring == "QZ" and kind == "f") else ring
        return Cochain.from_dict(self.X, n, target, full)

    def primitive(self, u: Cochain) -> Cochain | None:
        """A cochain x with delta x = u over u's ring, or None if u is not exact."""
        n, ring = u.degree, u.ring
        X = self.X
        if n == 0:
            return None
        coords = self.coordinates(u)
        if any(coords):
            return None
        red = self.reduction
        lifted = u.lift().support()
        reduced = red.project(lifted, n)
        dd = self.degree(n)
        y = dd.log1.apply_U(reduced)
        z = []
        for i, d in enumerate(dd.d1):
            if ring == "Z":
                if y[i] % d:
                    return None
                z.append(y[i] // d)
            elif ring == "Z2":
                z.append(y[i] % 2 if d % 2 else 0)
            else:
                z.append(Fraction(y[i], 1) / d)
        z += [0] * (red.small_size(n - 1) - len(z))
        xr = dd.log1.apply_V(z)
        gx = red.include(xr, n - 1)
        hu = red.homotopy(lifted, n)
        out = dict(gx)
        for k, v in hu.items():
            out[k] = out.get(k, 0) - v
        x = Cochain.from_dict(X, n - 1, ring, out)
        if ring in ("Z", "Q") and x.delta() != u:
            raise ArithmeticError("primitive check failed")
        return x


def _matvec(mat, vec):
    return [sum(a * b for a, b in zip(row, vec) if a) for row in mat]


def _ring_value(v, ring):
    if ring == "Z":
        return int(v)
    if ring == "Z2":
        return int(v) % 2
    if ring == "Q":
        return Fraction(v)
    return Fraction(v) % 1


_registry: dict[str, Engine] = {}
_registry_lock = threading.Lock()


def engine_for(X: SimplicialComplex) -> Engine:
    key = X.content_hash
    eng = _registry.get(key)
    if eng is None:
        with _registry_lock:
            eng = _registry.get(key)
            if eng is None:
                eng = Engine(X)
                _registry[key] = eng
    return eng


def clear_memo() -> None:
    with _registry_lock:
        _registry.clear()


# ---------------------------------------------------------------------------
# classes


class CohomologyClass:
    """A cohomology class given by a cocycle representative.

    Equality is cohomology, decided exactly.
    """

    __hash__ = None

    def __init__(self, representative: Cochain, *, check: bool = True):
        if check and not representative.is_cocycle():
            raise NotACocycleError(f"representative of degree {representative.degree} is not a cocycle")
        self.representative = representative
        self._coords = None

    @property
    def complex(self) -> SimplicialComplex:
        return self.representative.complex

    @property
    def degree(self) -> int:
        return self.representative.degree

    @property
    def ring(self) -> str:
        return self.representative.ring

    def coordinates(self) -> list:
        if self._coords is None:
            self._coords = engine_for(self.complex).coordinates(self.representative)
        return list(self._coords)

    def is_zero(self) -> bool:
        return not any(self.coordinates())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return is_cohomologous(self.representative, other.representative)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        return CohomologyClass(self.representative + other.representative, check=False)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return CohomologyClass(self.representative - other.representative, check=False)

    def __neg__(self) -> "CohomologyClass":
        return CohomologyClass(-self.representative, check=False)

    def scale(self, k) -> "CohomologyClass":
        return CohomologyClass(self.representative.scale(k), check=False)

    def __rmul__(self, k) -> "CohomologyClass":
        return self.scale(k)

    def __repr__(self) -> str:
        return f"CohomologyClass({self.complex.name}, H^{self.degree}({self.ring}), coords={self.coordinates()})"


@dataclass(frozen=True)
class BasisElement:
    kind: str  # "free", "torsion" or "divisible"
    order: int | None
    cls: CohomologyClass


def cohomology_group(X: SimplicialComplex, n: int, ring: str) -> tuple[GroupDescriptor, list[BasisElement]]:
    """Descriptor and generators of H^n(X; ring).

    Torsion generators come first in slot order, then free generators.  For
    Q/Z the divisible summands are presented by integral cocycles z; the
    summand consists of the classes of t*z mod 1 for t in Q/Z.
    """
    if ring not in ("Z", "Z2", "Q", "QZ"):
        raise RingError(f"unknown ring {ring!r}")
    if n < 0 or n > X.dim:
        return GroupDescriptor(), []
    eng = engine_for(X)
    basis = []
    for slot in eng.slots(n, ring):
        rep = eng.generator(n, ring, slot)
        kind = slot[0]
        if kind == "f":
            kind_name = "divisible" if ring == "QZ" else ("torsion" if ring == "Z2" else "free")
            order = 2 if ring == "Z2" else None
        else:
            kind_name, order = "torsion", slot[2]
        basis.append(BasisElement(kind_name, order, CohomologyClass(rep, check=False)))
    return eng.descriptor(n, ring), basis


def descriptor(X: SimplicialComplex, n: int, ring: str) -> GroupDescriptor:
    if n < 0 or n > X.dim:
        return GroupDescriptor()
    return engine_for(X).descriptor(n, ring)


def class_from_coordinates(X: SimplicialComplex, n: int, ring: str, coords: list) -> CohomologyClass:
    """Combination of basis generators; Q/Z divisible coordinates are fractions."""
    _, basis = cohomology_group(X, n, ring)
    if len(coords) != len(basis):
        raise ValueError(f"expected {len(basis)} coordinates, got {len(coords)}")
    acc = Cochain.zero(X, n, ring)
    for c, b in zip(coords, basis):
        rep = b.cls.representative
        if ring == "QZ" and b.kind == "divisible":
            acc = acc + rep.scale(Fraction(c)).to_ring("QZ")
        else:
            acc = acc + rep.scale(c)
    return CohomologyClass(acc, check=False)


def is_cohomologous(u: Cochain, v: Cochain) -> bool:
    if u.degree != v.degree or u.ring != v.ring:
        raise RingError("classes differ in degree or ring")
    for w in (u, v):
        if not w.is_cocycle():
            raise NotACocycleError("not a cocycle")
    diff = u - v
    return not any(engine_for(u.complex).coordinates(diff))


def primitive(u: Cochain) -> Cochain | None:
    """Solve delta x = u over u's ring; None if u is not a coboundary."""
    if u.degree == 0:
        return None
    return engine_for(u.complex).primitive(u)


# ---------------------------------------------------------------------------
# coefficient maps and Bocksteins


def _require(x: CohomologyClass, ring: str):
    if x.ring != ring:
        raise RingError(f"expected a class over {ring}, got {x.ring}")


def rho2(x: CohomologyClass) -> CohomologyClass:
    _require(x, "Z")
    return CohomologyClass(x.representative.to_ring("Z2"), check=False)


def gamma2(x: CohomologyClass) -> CohomologyClass:
    _require(x, "Z2")
    return CohomologyClass(x.representative.to_ring("QZ"), check=False)


def to_rational(x: CohomologyClass) -> CohomologyClass:
    _require(x, "Z")
    return CohomologyClass(x.representative.to_ring("Q"), check=False)


def rational_to_qz(x: CohomologyClass) -> CohomologyClass:
    _require(x, "Q")
    return CohomologyClass(x.representative.to_ring("QZ"), check=False)


def bockstein_beta(x: CohomologyClass, lift: Cochain | None = None) -> CohomologyClass:
    """Bockstein of 0 -> Z -> Z -> Z/2 -> 0: class of delta(lift)/2."""
    _require(x, "Z2")
    c = lift if lift is not None else x.representative.lift()
    dc = c.delta()
    if any(v % 2 for v in dc.values):
        raise AssertionError("coboundary of the lift has an odd entry")
    return CohomologyClass(Cochain(c.complex, c.degree + 1, "Z", (v // 2 for v in dc.values)), check=False)


def bockstein_beta2(x: CohomologyClass) -> CohomologyClass:
    """Bockstein of 0 -> Z/2 -> Z/4 -> Z/2 -> 0."""
    _require(x, "Z2")
    c = x.representative.lift()
    dc = [v % 4 for v in c.delta().values]
    if any(v % 2 for v in dc):
        raise AssertionError("coboundary of the lift is odd")
    return CohomologyClass(Cochain(c.complex, c.degree + 1, "Z2", (v // 2 for v in dc)), check=False)


def bockstein_exp(u: CohomologyClass, lift: Cochain | None = None) -> CohomologyClass:
    """Bockstein of 0 -> Z -> Q -> Q/Z -> 0: class of delta of the [0,1) lift."""
    _require(u, "QZ")
    c = lift if lift is not None else u.representative.lift()
    dc = c.delta()
    if any(v.denominator != 1 for v in dc.values):
        raise AssertionError("coboundary of the lift is not integral")
    return CohomologyClass(Cochain(c.complex, c.degree + 1, "Z", dc.values), check=False)


def pullback_class(f, x: CohomologyClass) -> CohomologyClass:
    return CohomologyClass(x.representative.pullback(f), check=False)


# ---------------------------------------------------------------------------
# independent cross-checks


def homology_group(X: SimplicialComplex, n: int) -> GroupDescriptor:
    """H_n(X; Z) from SNFs of the full boundary matrices."""
    if n < 0 or n > X.dim:
        return GroupDescriptor()
    dn = snf_log(X.coboundary(n - 1).transpose()) if n >= 1 else None
    dn1 = snf_log(X.coboundary(n).transpose()) if n < X.dim else None
    rank_n = dn.rank if dn else 0
    rank_n1 = dn1.rank if dn1 else 0
    torsion = tuple(d for d in (dn1.diagonal if dn1 else []) if d > 1)
    return GroupDescriptor(X.count(n) - rank_n - rank_n1, torsion)


def mod2_betti(X: SimplicialComplex, n: int) -> int:
    """dim H^n(X; Z/2) from GF(2) ranks of the full coboundaries."""
    if n < 0 or n > X.dim:
        return 0
    r_out = f2_rank(X.coboundary(n)) if n < X.dim else 0
    r_in = f2_rank(X.coboundary(n - 1)) if n >= 1 else 0
    return X.count(n) - r_out - r_in
