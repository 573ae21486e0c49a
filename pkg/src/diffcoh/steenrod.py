"""Cup and cup-i products, Steenrod squares and their integral lifts.

cup-i products use Steenrod's overlapping-interval formula.  For an
n-simplex with n = p + q - i, choose breakpoints 0 <= j_0 < ... < j_i <= n;
these cut [0, n] into the intervals [0, j_0], [j_0, j_1], ..., [j_i, n],
consecutive ones sharing an endpoint.  The first cochain is evaluated on
the union of the even-numbered intervals, the second on the odd-numbered
ones.  Over Z/2 the sum of these terms satisfies

    delta(u cup_i v) = du cup_i v + u cup_i dv + u cup_{i-1} v + v cup_{i-1} u.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

from ._accel import kernels
from .cochains import Cochain, RingError, promote
from .cohomology import CohomologyClass, bockstein_beta, rho2


class EvenSquareError(ValueError):
    """Raised when an integral lift of an even square is requested."""


@lru_cache(maxsize=None)
def _interval_table(p: int, q: int, i: int) -> tuple:
    n = p + q - i
    if i < 0 or n < 0 or p < 0 or q < 0:
        return ()
    out = []
    for breaks in combinations(range(n + 1), i + 1):
        cuts = (0,) + breaks + (n,)
        upos, vpos = [], []
        for k in range(len(cuts) - 1):
            seg = range(cuts[k], cuts[k + 1] + 1)
            (upos if k % 2 == 0 else vpos).extend(seg)
        if len(upos) == p + 1 and len(vpos) == q + 1:
            out.append((1, tuple(upos), tuple(vpos)))
    return tuple(out)


@lru_cache(maxsize=None)
def _signed_cup1_table(p: int, q: int) -> tuple:
    """Integral cup-1: u on [0, j] + [j+q, n], v on [j, j+q], n = p + q - 1.

    The sign (-1)^((p - j)(q + 1)) makes

        delta(u cup_1 v) = (-1)^(p+q-1) u cup v + (-1)^(p+q+pq) v cup u
                           + du cup_1 v + (-1)^p u cup_1 dv.
    """
    n = p + q - 1
    if p < 1 or q < 1:
        return ()
    out = []
    for j in range(0, p):
        k = j + q
        upos = tuple(range(0, j + 1)) + tuple(range(k, n + 1))
        vpos = tuple(range(j, k + 1))
        sign = -1 if ((p - j) * (q + 1)) % 2 else 1
        out.append((sign, upos, vpos))
    return tuple(out)


# Tables can be swapped out to inject faults in verification runs.
_table_overrides: dict = {}


def interval_table(p: int, q: int, i: int) -> tuple:
    key = ("cup_i", p, q, i)
    if key in _table_overrides:
        return _table_overrides[key]
    return _interval_table(p, q, i)


def signed_cup1_table(p: int, q: int) -> tuple:
    key = ("cup1", p, q)
    if key in _table_overrides:
        return _table_overrides[key]
    return _signed_cup1_table(p, q)


def set_table_override(key: tuple, table) -> None:
    """Replace one table (for fault injection); ``table=None`` restores it."""
    if table is None:
        _table_overrides.pop(key, None)
    else:
        _table_overrides[key] = tuple(table)


def clear_table_overrides() -> None:
    _table_overrides.clear()
    _fault_specs.clear()


_fault_specs: list = []


class FaultSpecError(ValueError):
    pass


def parse_fault(spec: str) -> tuple:
    """``cup_i/p/q/i/k`` or ``cup1/p/q/k``: the table key and entry index k."""
    parts = spec.strip().split("/")
    try:
        nums = [int(x) for x in parts[1:]]
    except ValueError:
        raise FaultSpecError(f"bad fault spec {spec!r}") from None
    if parts[0] == "cup_i" and len(nums) == 4:
        return ("cup_i", *nums[:3]), nums[3]
    if parts[0] == "cup1" and len(nums) == 3:
        return ("cup1", *nums[:2]), nums[2]
    raise FaultSpecError(f"bad fault spec {spec!r}; expected cup_i/p/q/i/k or cup1/p/q/k")


def inject_fault(spec: str) -> None:
    """Drop entry k of one product table, for testing the verifiers."""
    key, k = parse_fault(spec)
    base = _interval_table(*key[1:]) if key[0] == "cup_i" else _signed_cup1_table(*key[1:])
    if not 0 <= k < len(base):
        raise FaultSpecError(f"table {key} has {len(base)} entries; no entry {k}")
    set_table_override(key, base[:k] + base[k + 1:])
    _fault_specs.append(spec.strip())


def active_faults() -> list[str]:
    return list(_fault_specs)


def _check_same_complex(u: Cochain, v: Cochain):
    if u.complex is not v.complex and u.complex.content_hash != v.complex.content_hash:
        raise RingError("cochains live on different complexes")


def _evaluate(table, u: Cochain, v: Cochain, n: int, ring: str) -> Cochain:
    X = u.complex
    if n > X.dim or n < 0 or not table:
        return Cochain.zero(X, n, ring)
    modulus = 2 if ring == "Z2" else 0
    lookups = (X.index(u.degree), X.index(v.degree))
    vals = kernels.cup_table_eval(table, X.simplices(n), lookups, list(u.values), list(v.values), modulus)
    return Cochain(X, n, ring, vals)


def cup(u: Cochain, v: Cochain) -> Cochain:
    """Alexander-Whitney cup product."""
    _check_same_complex(u, v)
    ring = promote(u.ring, v.ring)
    if ring == "Z2" and u.ring != v.ring:
        u, v = u.to_ring("Z2") if u.ring == "Z" else u, v.to_ring("Z2") if v.ring == "Z" else v
    p, q = u.degree, v.degree
    n = p + q
    table = ((1, tuple(range(p + 1)), tuple(range(p, n + 1))),)
    return _evaluate(table, u, v, n, ring)


def cup_i(u: Cochain, v: Cochain, i: int) -> Cochain:
    """Mod-2 cup-i product; zero for i < 0."""
    _check_same_complex(u, v)
    if u.ring != "Z2" or v.ring != "Z2":
        raise RingError("cup_i is defined on Z/2 cochains")
    n = u.degree + v.degree - i
    if i < 0 or n < 0:
        return Cochain.zero(u.complex, n, "Z2")
    return _evaluate(interval_table(u.degree, v.degree, i), u, v, n, "Z2")


@dataclass(frozen=True)
class CupIOperator:
    """The product u, v -> u cup_i v at a fixed level i; i < 0 gives zero."""

    i: int

    def __call__(self, u: Cochain, v: Cochain) -> Cochain:
        return cup_i(u, v, self.i)

    def table(self, p: int, q: int) -> tuple:
        return interval_table(p, q, self.i) if self.i >= 0 else ()


def cup1(u: Cochain, v: Cochain) -> Cochain:
    """Integral (or rational) cup-1 product with the signs of ``_signed_cup1_table``."""
    _check_same_complex(u, v)
    ring = promote(u.ring, v.ring)
    n = u.degree + v.degree - 1
    if n < 0:
        return Cochain.zero(u.complex, n, ring)
    return _evaluate(signed_cup1_table(u.degree, v.degree), u, v, n, ring)


def cup_power(u: Cochain, m: int) -> Cochain:
    out = u
    for _ in range(m - 1):
        out = cup(out, u)
    return out


def class_cup(x: CohomologyClass, y: CohomologyClass) -> CohomologyClass:
    return CohomologyClass(cup(x.representative, y.representative), check=False)


def sq(k: int, x: CohomologyClass) -> CohomologyClass:
    """Steenrod square Sq^k(x) = x cup_{n-k} x on a Z/2 class of degree n."""
    if x.ring != "Z2":
        raise RingError(f"Sq^k acts on Z/2 classes, got {x.ring}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = x.degree
    r = x.representative
    if k > n:
        return CohomologyClass(Cochain.zero(x.complex, n + k, "Z2"), check=False)
    return CohomologyClass(cup_i(r, r, n - k), check=False)


def sq_integral(k: int, x: CohomologyClass) -> CohomologyClass:
    """Integral lift Sq_Z^k = beta Sq^{k-1} rho_2 for odd k."""
    if k % 2 == 0:
        raise EvenSquareError("even Steenrod squares do not lift")
    if x.ring != "Z":
        raise RingError(f"Sq_Z acts on integral classes, got {x.ring}")
    return bockstein_beta(sq(k - 1, rho2(x)))


def adem_terms(a: int, b: int) -> list[tuple[int, int]]:
    """Right-hand side of Sq^a Sq^b for 0 < a < 2b as pairs (a+b-c, c) mod 2."""
    out = []
    for c in range(a // 2 + 1):
        top, bottom = b - c - 1, a - 2 * c
        if top < 0 or bottom < 0 or bottom > top:
            continue
        if comb(top, bottom) % 2:
            out.append((a + b - c, c))
    return out
