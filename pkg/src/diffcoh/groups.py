"""Finitely generated abelian groups, optionally with Q/Z summands.

A ``GroupDescriptor`` is ``Z^free + Z/d1 + ... + Z/dk + (Q/Z)^divisible``
with ``d1 | d2 | ... | dk``.  The small algebra below (sums, tensor, Tor,
torsion parts) is what the Kunneth checks need.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Iterable


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Canonical invariant factors of a direct sum of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n < 1:
            raise ValueError(f"cyclic order must be positive, got {n}")
        for p, k in _prime_powers(n):
            by_prime.setdefault(p, []).append(k)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    factors = [1] * length
    for p, exps in by_prime.items():
        exps = sorted(exps)
        # right-align: largest exponents go to the last factors
        for i, k in enumerate(exps):
            factors[length - len(exps) + i] *= p**k
    return tuple(factors)


@dataclass(frozen=True)
class GroupDescriptor:
    free_rank: int = 0
    invariant_factors: tuple = ()
    divisible_rank: int = 0

    def __post_init__(self):
        canon = invariant_factors(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", canon)

    @classmethod
    def zero(cls) -> "GroupDescriptor":
        return cls()

    @classmethod
    def cyclic(cls, n: int) -> "GroupDescriptor":
        if n == 0:
            return cls(free_rank=1)
        return cls(invariant_factors=(n,) if n > 1 else ())

    @property
    def is_zero(self) -> bool:
        return not (self.free_rank or self.invariant_factors or self.divisible_rank)

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __add__(self, other: "GroupDescriptor") -> "GroupDescriptor":
        return GroupDescriptor(
            self.free_rank + other.free_rank,
            self.invariant_factors + other.invariant_factors,
            self.divisible_rank + other.divisible_rank,
        )

    def torsion_and_divisible(self) -> "GroupDescriptor":
        """Drop the free part."""
        return GroupDescriptor(0, self.invariant_factors, self.divisible_rank)

    def torsion(self) -> "GroupDescriptor":
        return GroupDescriptor(0, self.invariant_factors, 0)

    def n_torsion(self, n: int) -> "GroupDescriptor":
        """Subgroup of elements killed by n."""
        orders = [gcd(d, n) for d in self.invariant_factors]
        orders += [n] * self.divisible_rank
        return GroupDescriptor(0, tuple(o for o in orders if o > 1), 0)

    def mod(self, n: int) -> "GroupDescriptor":
        """G / nG, i.e. G tensor Z/n."""
        return tensor(self, GroupDescriptor.cyclic(n))

    def primary_parts(self) -> Counter:
        c: Counter = Counter()
        for d in self.invariant_factors:
            for p, k in _prime_powers(d):
                c[p**k] += 1
        return c

    def to_json(self) -> dict:
        out = {"free_rank": self.free_rank, "torsion": list(self.invariant_factors)}
        if self.divisible_rank:
            out["divisible_rank"] = self.divisible_rank
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        if self.divisible_rank:
            parts.append("Q/Z" if self.divisible_rank == 1 else f"(Q/Z)^{self.divisible_rank}")
        return " + ".join(parts) if parts else "0"


def direct_sum(groups: Iterable[GroupDescriptor]) -> GroupDescriptor:
    out = GroupDescriptor()
    for g in groups:
        out = out + g
    return out


def _summands(G: GroupDescriptor) -> list:
    # ("Z", 0) for Z, ("C", n) for Z/n, ("D", 0) for Q/Z
    return [("Z", 0)] * G.free_rank + [("C", d) for d in G.invariant_factors] + [("D", 0)] * G.divisible_rank


def _from_summands(items) -> GroupDescriptor:
    free = sum(1 for k, _ in items if k == "Z")
    div = sum(1 for k, _ in items if k == "D")
    cyc = tuple(n for k, n in items if k == "C" and n > 1)
    return GroupDescriptor(free, cyc, div)


def _tensor_cyclic(a, b):
    ka, na = a
    kb, nb = b
    if ka == "Z":
        return [b]
    if kb == "Z":
        return [a]
    if ka == "C" and kb == "C":
        return [("C", gcd(na, nb))]
    # Q/Z tensor anything torsion or divisible vanishes
    return []


def _tor_cyclic(a, b):
    ka, na = a
    kb, nb = b
    if ka == "Z" or kb == "Z":
        return []
    if ka == "C" and kb == "C":
        return [("C", gcd(na, nb))]
    if ka == "C":
        return [("C", na)]
    if kb == "C":
        return [("C", nb)]
    return [("D", 0)]


def tensor(G: GroupDescriptor, H: GroupDescriptor) -> GroupDescriptor:
    return _from_summands([s for a in _summands(G) for b in _summands(H) for s in _tensor_cyclic(a, b)])


def tor(G: GroupDescriptor, H: GroupDescriptor) -> GroupDescriptor:
    return _from_summands([s for a in _summands(G) for b in _summands(H) for s in _tor_cyclic(a, b)])
