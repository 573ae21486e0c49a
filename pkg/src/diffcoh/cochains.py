"""Cochains with coefficients in Z, Z/2, Q or Q/Z.

Values are stored densely in the simplex order of the complex.  Q values
are ``Fraction`` objects, Q/Z values are fractions reduced into [0, 1),
Z/2 values are 0 or 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .complexes import RINGS, SimplicialComplex


class RingError(ValueError):
    pass


class CochainError(ValueError):
    pass


def normalize(value, ring: str):
    if ring == "Z":
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise RingError(f"{value} is not an integer")
            return int(value)
        return int(value)
    if ring == "Z2":
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise RingError(f"{value} is not an integer mod 2")
            value = int(value)
        return int(value) % 2
    if ring == "Q":
        return Fraction(value)
    if ring == "QZ":
        return Fraction(value) % 1
    raise RingError(f"unknown ring {ring!r}")


def parse_coefficient(text: str, ring: str):
    try:
        return normalize(Fraction(text.strip()), ring)
    except (ValueError, ZeroDivisionError) as exc:
        raise CochainError(f"bad coefficient {text!r}: {exc}") from None


def format_coefficient(value) -> str:
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return str(value)


def promote(r1: str, r2: str) -> str:
    """Coefficient ring of a product of cochains over r1 and r2."""
    if r1 == r2:
        return r1
    pair = {r1, r2}
    if pair == {"Z", "Q"}:
        return "Q"
    if pair == {"Z", "QZ"}:
        return "QZ"
    if pair == {"Z", "Z2"}:
        return "Z2"
    raise RingError(f"no product between {r1} and {r2} cochains")


class Cochain:
    """A degree-n cochain on a simplicial complex."""

    __slots__ = ("complex", "degree", "ring", "values")

    def __init__(self, complex: SimplicialComplex, degree: int, ring: str, values: Iterable, *, _trusted: bool = False):
        if ring not in RINGS:
            raise RingError(f"unknown ring {ring!r}")
        self.complex = complex
        self.degree = degree
        self.ring = ring
        if _trusted:
            self.values = tuple(values)
        else:
            vals = tuple(normalize(v, ring) for v in values)
            if len(vals) != complex.count(degree):
                raise CochainError(
                    f"degree-{degree} cochain on {complex.name} needs {complex.count(degree)} values, got {len(vals)}"
                )
            self.values = vals

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, X: SimplicialComplex, degree: int, ring: str) -> "Cochain":
        z = normalize(0, ring)
        return cls(X, degree, ring, [z] * X.count(degree), _trusted=True)

    @classmethod
    def from_dict(cls, X: SimplicialComplex, degree: int, ring: str, data: Mapping) -> "Cochain":
        """Keys are simplex tuples or simplex indices; missing entries are zero."""
        vals = [normalize(0, ring)] * X.count(degree)
        idx = X.index(degree)
        for key, v in data.items():
            if isinstance(key, int):
                k = key
                if not 0 <= k < len(vals):
                    raise CochainError(f"simplex index {k} out of range")
            else:
                key = tuple(key)
                if len(key) != degree + 1 or key not in idx:
                    raise CochainError(f"{list(key)} is not a {degree}-simplex of {X.name}")
                k = idx[key]
            vals[k] = normalize(v, ring)
        return cls(X, degree, ring, vals, _trusted=True)

    @classmethod
    def indicator(cls, X: SimplicialComplex, simplex, ring: str = "Z") -> "Cochain":
        return cls.from_dict(X, len(simplex) - 1, ring, {tuple(simplex): 1})

    # -- views -------------------------------------------------------------

    def support(self) -> dict:
        return {i: v for i, v in enumerate(self.values) if v}

    def nonzero(self) -> bool:
        return any(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, simplex):
        if isinstance(simplex, int):
            return self.values[simplex]
        return self.values[self.complex.index_of(simplex)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.complex is other.complex or self.complex.content_hash == other.complex.content_hash
        ) and self.degree == other.degree and self.ring == other.ring and self.values == other.values

    def __hash__(self):
        return hash((self.degree, self.ring, self.values))

    def __repr__(self) -> str:
        supp = {self.complex.simplices(self.degree)[i]: format_coefficient(v) for i, v in self.support().items()}
        return f"Cochain({self.complex.name}, deg={self.degree}, ring={self.ring}, {supp})"

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "Cochain"):
        if self.degree != other.degree:
            raise CochainError(f"degree mismatch {self.degree} vs {other.degree}")
        if self.complex is not other.complex and self.complex.content_hash != other.complex.content_hash:
            raise CochainError("cochains live on different complexes")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_compatible(other)
        ring = self.ring if self.ring == other.ring else promote(self.ring, other.ring)
        return Cochain(self.complex, self.degree, ring, (a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check_compatible(other)
        ring = self.ring if self.ring == other.ring else promote(self.ring, other.ring)
        return Cochain(self.complex, self.degree, ring, (a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "Cochain":
        return Cochain(self.complex, self.degree, self.ring, (-a for a in self.values))

    def scale(self, k) -> "Cochain":
        ring = self.ring
        if isinstance(k, Fraction) and k.denominator != 1 and ring == "Z":
            ring = "Q"
        return Cochain(self.complex, self.degree, ring, (k * a for a in self.values))

    def __rmul__(self, k) -> "Cochain":
        return self.scale(k)

    def to_ring(self, ring: str) -> "Cochain":
        """Coefficient change along the canonical maps.

        Z -> Z2 (reduce), Z -> Q, Q -> QZ, Z -> QZ, Z2 -> QZ (1 -> 1/2).
        Z2 -> Z and QZ -> Q pick the lifts with entries in {0,1} and [0,1).
        """
        src = self.ring
        if src == ring:
            return self
        if src == "Z2" and ring == "QZ":
            return Cochain(self.complex, self.degree, ring, (Fraction(v, 2) for v in self.values))
        if src == "Z2" and ring in ("Z", "Q"):
            return Cochain(self.complex, self.degree, ring, self.values)
        if src == "QZ" and ring == "Q":
            return Cochain(self.complex, self.degree, ring, self.values)
        if src == "Q" and ring == "Z":
            return Cochain(self.complex, self.degree, ring, self.values)
        if src in ("Z", "Q") and ring in ("Q", "QZ"):
            return Cochain(self.complex, self.degree, ring, self.values)
        if src == "Z" and ring == "Z2":
            return Cochain(self.complex, self.degree, ring, self.values)
        raise RingError(f"no coefficient map {src} -> {ring}")

    def lift(self) -> "Cochain":
        """Canonical lift: Z2 -> Z with values 0/1, QZ -> Q with values in [0,1)."""
        if self.ring == "Z2":
            return self.to_ring("Z")
        if self.ring == "QZ":
            return self.to_ring("Q")
        return self

    def delta(self) -> "Cochain":
        X = self.complex
        n = self.degree
        ring = self.ring
        if n + 1 > X.dim:
            return Cochain.zero(X, n + 1, ring)
        vals = self.values
        out = []
        for faces in X.face_table(n + 1):
            acc = 0
            for i, f in enumerate(faces):
                v = vals[f]
                if v:
                    acc = acc - v if i % 2 else acc + v
            out.append(acc)
        return Cochain(X, n + 1, ring, out)

    def is_cocycle(self) -> bool:
        return not self.delta().nonzero()

    def pullback(self, f) -> "Cochain":
        """Pull back along a SimplicialMap whose target carries this cochain."""
        if f.target is not self.complex and f.target.content_hash != self.complex.content_hash:
            raise CochainError("map target does not match the cochain's complex")
        S = f.source
        idx = self.complex.index(self.degree)
        out = []
        zero = normalize(0, self.ring)
        for s in S.simplices(self.degree):
            img = f.image(s)
            if img is None:
                out.append(zero)
                continue
            key = tuple(sorted(img))
            sign = _permutation_sign(img)
            out.append(sign * self.values[idx[key]])
        return Cochain(S, self.degree, self.ring, out)


def _permutation_sign(seq) -> int:
    """Sign of the permutation sorting a sequence of distinct items."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def pullback(f, u: Cochain) -> Cochain:
    """f*u; simplices collapsed by f get 0."""
    return u.pullback(f)
