"""Exact integer and rational linear algebra.

Everything here works with Python integers and ``fractions.Fraction``;
there is no floating point anywhere.  The central routine is a Smith
normal form that records its elementary operations, so the transforms
can either be materialized as dense matrices or applied lazily to
vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .groups import GroupDescriptor


class SNFResourceError(ArithmeticError):
    """Intermediate entries grew past the configured bit bound."""


class DimensionError(ValueError):
    pass


class NotSublatticeError(ValueError):
    pass


@dataclass(frozen=True)
class SparseIntMatrix:
    """Immutable sparse integer matrix stored as sorted (row, col, value) triples."""

    rows: int
    cols: int
    entries: tuple = ()

    def __post_init__(self):
        seen = set()
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v == 0:
                raise ValueError(f"stored zero at ({r}, {c})")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            seen.add((r, c))

    @classmethod
    def from_dict(cls, rows: int, cols: int, data: dict) -> "SparseIntMatrix":
        entries = tuple(sorted((r, c, int(v)) for (r, c), v in data.items() if v))
        return cls(rows, cols, entries)

    @classmethod
    def from_rows(cls, rows: int, cols: int, row_dicts: dict) -> "SparseIntMatrix":
        entries = tuple(
            (r, c, int(v))
            for r in sorted(row_dicts)
            for c, v in sorted(row_dicts[r].items())
            if v
        )
        return cls(rows, cols, entries)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: int | None = None) -> "SparseIntMatrix":
        nrows = len(dense)
        ncols = cols if cols is not None else (len(dense[0]) if nrows else 0)
        entries = tuple(
            (r, c, int(v)) for r, row in enumerate(dense) for c, v in enumerate(row) if v
        )
        return cls(nrows, ncols, entries)

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, tuple((i, i, 1) for i in range(n)))

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return len(self.entries)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    def row_dicts(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for r, c, v in self.entries:
            out.setdefault(r, {})[c] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(
            self.cols, self.rows, tuple(sorted((c, r, v) for r, c, v in self.entries))
        )

    def matvec(self, x: Sequence) -> list:
        if len(x) != self.cols:
            raise DimensionError(f"vector of length {len(x)} for {self.rows}x{self.cols} matrix")
        out = [0] * self.rows
        for r, c, v in self.entries:
            if x[c]:
                out[r] += v * x[c]
        return out

    def rmatvec(self, y: Sequence) -> list:
        """Return y^T M."""
        if len(y) != self.rows:
            raise DimensionError(f"vector of length {len(y)} for {self.rows}x{self.cols} matrix")
        out = [0] * self.cols
        for r, c, v in self.entries:
            if y[r]:
                out[c] += v * y[r]
        return out

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise DimensionError("inner dimensions differ")
        rhs = other.row_dicts()
        acc: dict = {}
        for r, k, v in self.entries:
            for c, w in rhs.get(k, {}).items():
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseIntMatrix.from_dict(self.rows, other.cols, acc)


def _as_sparse(M) -> SparseIntMatrix:
    if isinstance(M, SparseIntMatrix):
        return M
    return SparseIntMatrix.from_dense(M)


def dense_matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    if len(A[0]) != inner:
        raise DimensionError("inner dimensions differ")
    out = []
    for row in A:
        acc = [0] * ncols
        for k, a in enumerate(row):
            if a:
                brow = B[k]
                for c in range(ncols):
                    if brow[c]:
                        acc[c] += a * brow[c]
        out.append(acc)
    return out


def dense_identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def determinant(A: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [list(map(Fraction, row)) for row in A]
    sign = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for r in range(k + 1, n):
            f = M[r][k] / M[k][k]
            if f:
                for c in range(k, n):
                    M[r][c] -= f * M[k][c]
    det = Fraction(sign)
    for k in range(n):
        det *= M[k][k]
    return det


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNFLog:
    """Smith normal form of an m x n matrix kept as an operation log.

    ``row_ops`` and ``col_ops`` are lists of ``(target, source, factor)``;
    ``source is None`` means negate the target.  ``row_perm[k]`` is the
    original row that ends up in position ``k`` (pivot rows first), and
    likewise ``col_perm``.  With U and V the accumulated transforms,
    ``U M V = diag(diagonal) padded with zeros``.
    """

    nrows: int
    ncols: int
    diagonal: list
    row_ops: list = field(default_factory=list)
    col_ops: list = field(default_factory=list)
    row_perm: list = field(default_factory=list)
    col_perm: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def apply_U(self, vec: Sequence) -> list:
        v = list(vec)
        for t, s, f in self.row_ops:
            if s is None:
                v[t] = -v[t]
            elif v[s]:
                v[t] += f * v[s]
        return [v[r] for r in self.row_perm]

    def apply_U_inv(self, vec: Sequence) -> list:
        v = [0] * self.nrows
        for k, r in enumerate(self.row_perm):
            v[r] = vec[k]
        for t, s, f in reversed(self.row_ops):
            if s is None:
                v[t] = -v[t]
            elif v[s]:
                v[t] -= f * v[s]
        return v

    def apply_V(self, vec: Sequence) -> list:
        x = [0] * self.ncols
        for k, c in enumerate(self.col_perm):
            x[c] = vec[k]
        for t, s, f in reversed(self.col_ops):
            if s is None:
                x[t] = -x[t]
            elif x[t]:
                x[s] += f * x[t]
        return x

    def apply_V_inv(self, vec: Sequence) -> list:
        x = list(vec)
        for t, s, f in self.col_ops:
            if s is None:
                x[t] = -x[t]
            elif x[t]:
                x[s] -= f * x[t]
        return [x[c] for c in self.col_perm]

    def U(self) -> list[list[int]]:
        cols = [self.apply_U([int(i == j) for i in range(self.nrows)]) for j in range(self.nrows)]
        return [[cols[j][i] for j in range(self.nrows)] for i in range(self.nrows)]

    def U_inv(self) -> list[list[int]]:
        cols = [self.apply_U_inv([int(i == j) for i in range(self.nrows)]) for j in range(self.nrows)]
        return [[cols[j][i] for j in range(self.nrows)] for i in range(self.nrows)]

    def V(self) -> list[list[int]]:
        cols = [self.apply_V([int(i == j) for i in range(self.ncols)]) for j in range(self.ncols)]
        return [[cols[j][i] for j in range(self.ncols)] for i in range(self.ncols)]

    def V_inv(self) -> list[list[int]]:
        cols = [self.apply_V_inv([int(i == j) for i in range(self.ncols)]) for j in range(self.ncols)]
        return [[cols[j][i] for j in range(self.ncols)] for i in range(self.ncols)]


def snf_log(M, max_bits: int | None = None) -> SNFLog:
    """Compute the Smith normal form of ``M`` as an operation log.

    Pivots are chosen by smallest magnitude among the active entries,
    ties broken row-major.  ``max_bits`` bounds the bit length of any
    intermediate entry.
    """
    M = _as_sparse(M)
    m, n = M.rows, M.cols
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for r, c, v in M.entries:
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, {})[r] = v

    row_ops: list = []
    col_ops: list = []
    diagonal: list = []
    pivot_rows: list = []
    pivot_cols: list = []

    def check(v):
        if max_bits is not None and v.bit_length() > max_bits:
            raise SNFResourceError(f"entry exceeded {max_bits} bits during elimination")

    def set_entry(r, c, v):
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, {})[r] = v
        else:
            rr = rows.get(r)
            if rr is not None:
                rr.pop(c, None)
                if not rr:
                    del rows[r]
            cc = cols.get(c)
            if cc is not None:
                cc.pop(r, None)
                if not cc:
                    del cols[c]

    def add_row(t, s, f):
        # row t += f * row s
        for c, v in list(rows.get(s, {}).items()):
            nv = rows.get(t, {}).get(c, 0) + f * v
            check(nv)
            set_entry(t, c, nv)
        row_ops.append((t, s, f))

    def add_col(t, s, f):
        # col t += f * col s
        for r, v in list(cols.get(s, {}).items()):
            nv = cols.get(t, {}).get(r, 0) + f * v
            check(nv)
            set_entry(r, t, nv)
        col_ops.append((t, s, f))

    def smallest(cells):
        best = None
        for r, c, v in cells:
            key = (abs(v), r, c)
            if best is None or key < best:
                best = key
        return best

    while rows:
        key = smallest((r, c, v) for r, rr in rows.items() for c, v in rr.items())
        _, pr, pc = key
        while True:
            p = rows[pr][pc]
            clean = True
            for r2 in sorted(cols[pc]):
                if r2 == pr:
                    continue
                q = cols[pc][r2] // p
                if q:
                    add_row(r2, pr, -q)
                if cols[pc].get(r2):
                    clean = False
            for c2 in sorted(rows[pr]):
                if c2 == pc:
                    continue
                q = rows[pr][c2] // p
                if q:
                    add_col(c2, pc, -q)
                if rows[pr].get(c2):
                    clean = False
            if not clean:
                cells = [(r, pc, v) for r, v in cols[pc].items()]
                cells += [(pr, c, v) for c, v in rows[pr].items()]
                _, pr, pc = smallest(cells)
                continue
            # pivot is alone in its row and column; enforce divisibility
            bad = None
            for r in sorted(rows):
                if r == pr:
                    continue
                for c, v in sorted(rows[r].items()):
                    if v % p:
                        bad = r
                        break
                if bad is not None:
                    break
            if bad is not None:
                add_row(pr, bad, 1)
                continue
            if p < 0:
                for c, v in list(rows[pr].items()):
                    set_entry(pr, c, -v)
                row_ops.append((pr, None, -1))
                p = -p
            diagonal.append(p)
            pivot_rows.append(pr)
            pivot_cols.append(pc)
            set_entry(pr, pc, 0)
            break

    rest_rows = [r for r in range(m) if r not in set(pivot_rows)]
    rest_cols = [c for c in range(n) if c not in set(pivot_cols)]
    return SNFLog(
        nrows=m,
        ncols=n,
        diagonal=diagonal,
        row_ops=row_ops,
        col_ops=col_ops,
        row_perm=pivot_rows + rest_rows,
        col_perm=pivot_cols + rest_cols,
    )


@dataclass(frozen=True)
class SNFResult:
    """U, D, V with U M V = D; all dense nested lists of ints."""

    U: list
    D: list
    V: list

    @property
    def diagonal(self) -> list:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(k) if self.D[i][i]]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith_normal_form(M, max_bits: int | None = None) -> SNFResult:
    M = _as_sparse(M)
    log = snf_log(M, max_bits=max_bits)
    D = [[0] * M.cols for _ in range(M.rows)]
    for i, d in enumerate(log.diagonal):
        D[i][i] = d
    return SNFResult(U=log.U(), D=D, V=log.V())


# ---------------------------------------------------------------------------
# Solvers


@dataclass(frozen=True)
class IntegerSolution:
    particular: list
    kernel: list  # list of integer vectors spanning the integer kernel


def solve_integer(M, b: Sequence[int], parametrize: bool = False):
    """Find an integer x with M x = b, or return None.

    With ``parametrize=True`` the result is an ``IntegerSolution`` carrying a
    kernel basis as well.
    """
    M = _as_sparse(M)
    if len(b) != M.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {M.rows} rows")
    log = snf_log(M)
    y = log.apply_U([int(v) for v in b])
    z = []
    for i, d in enumerate(log.diagonal):
        if y[i] % d:
            return None
        z.append(y[i] // d)
    if any(y[log.rank:]):
        return None
    z += [0] * (M.cols - log.rank)
    x = log.apply_V(z)
    if not parametrize:
        return x
    kernel = []
    for k in range(log.rank, M.cols):
        e = [0] * M.cols
        e[k] = 1
        kernel.append(log.apply_V(e))
    return IntegerSolution(particular=x, kernel=kernel)


def rational_rank(M) -> int:
    """Rank over Q by fraction Gaussian elimination."""
    M = _as_sparse(M)
    rows = [{c: Fraction(v) for c, v in r.items()} for _, r in sorted(M.row_dicts().items())]
    rank = 0
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            if c in pivots:
                prow = pivots[c]
                f = row[c] / prow[c]
                for cc, v in prow.items():
                    nv = row.get(cc, 0) - f * v
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
            else:
                pivots[c] = row
                rank += 1
                break
    return rank


def solve_rational(M, b: Sequence) -> list | None:
    """Find a rational x with M x = b, or None."""
    M = _as_sparse(M)
    if len(b) != M.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {M.rows} rows")
    dense = M.to_dense()
    aug = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(dense)]
    n = M.cols
    pivcols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * p for a, p in zip(aug[i], aug[r])]
        pivcols.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivcols):
        x[c] = aug[i][n]
    return x


def f2_rank(M) -> int:
    """Rank over GF(2), rows packed into Python integers as bitsets."""
    M = _as_sparse(M)
    pivots: dict[int, int] = {}
    for _, row in sorted(M.row_dicts().items()):
        bits = 0
        for c, v in row.items():
            if v % 2:
                bits |= 1 << c
        while bits:
            top = bits.bit_length() - 1
            if top in pivots:
                bits ^= pivots[top]
            else:
                pivots[top] = bits
                break
    return len(pivots)


def quotient_structure(Z, B) -> GroupDescriptor:
    """Isomorphism type of span(Z) / span(B) for integer column matrices.

    Raises ``NotSublatticeError`` if some column of B is not an integer
    combination of the columns of Z.
    """
    Z = _as_sparse(Z)
    B = _as_sparse(B)
    if B.cols and B.rows != Z.rows:
        raise DimensionError("Z and B have different ambient dimension")
    zlog = snf_log(Z)
    r = zlog.rank
    # coordinates of B's columns in the basis of span(Z) given by the SNF
    coords = []
    for col in _columns(B):
        y = zlog.apply_U(col)
        if any(y[r:]):
            raise NotSublatticeError("a column of B lies outside span(Z) over Q")
        w = []
        for i, d in enumerate(zlog.diagonal):
            if y[i] % d:
                raise NotSublatticeError("a column of B is not an integer combination of Z")
            w.append(y[i] // d)
        coords.append(w)
    # span(Z) has basis U^{-1} e_i d_i (i < r); B columns in that basis are w
    if not coords:
        return GroupDescriptor(free_rank=r)
    Bw = SparseIntMatrix.from_dense([[coords[j][i] for j in range(len(coords))] for i in range(r)], cols=len(coords))
    blog = snf_log(Bw)
    factors = [d for d in blog.diagonal if d > 1]
    return GroupDescriptor(free_rank=r - blog.rank, invariant_factors=tuple(factors))


def _columns(M: SparseIntMatrix) -> list[list[int]]:
    out = [[0] * M.rows for _ in range(M.cols)]
    for r, c, v in M.entries:
        out[c][r] = v
    return out


def in_lattice_image(v: Sequence, L, W) -> bool:
    """Decide whether v = L a + W b with a integral and b rational.

    ``L`` is an integer matrix (list of rows or SparseIntMatrix) and ``W``
    a rational matrix given as a list of rows (or an integer
    SparseIntMatrix).  Empty matrices may be
    passed as ``[]`` or ``[[]]``-style lists with zero columns.
    """
    v = [Fraction(x) for x in v]
    m = len(v)
    Lrows = _as_sparse(L).to_dense() if isinstance(L, SparseIntMatrix) else [list(r) for r in L]
    if isinstance(W, SparseIntMatrix):
        W = W.to_dense()
    Wrows = [list(map(Fraction, r)) for r in W] if W else []
    lcols = len(Lrows[0]) if Lrows and Lrows[0] else 0
    wcols = len(Wrows[0]) if Wrows and Wrows[0] else 0
    if lcols and len(Lrows) != m:
        raise DimensionError("L has the wrong number of rows")
    if wcols and len(Wrows) != m:
        raise DimensionError("W has the wrong number of rows")
    if not any(v):
        return True
    # project away span(W): find rational P whose kernel is span(W)
    basis = _rational_complement_projector(Wrows, m, wcols)
    pv = [sum(p[i] * v[i] for i in range(m)) for p in basis]
    pL = [[sum(p[i] * Lrows[i][k] for i in range(m)) for k in range(lcols)] for p in basis]
    # clear denominators row by row
    ints, rhs = [], []
    for row, target in zip(pL, pv):
        den = 1
        for x in list(row) + [target]:
            den = den * x.denominator // gcd(den, x.denominator)
        ints.append([int(x * den) for x in row])
        rhs.append(target * den)
    if any(t.denominator != 1 for t in rhs):
        return False
    if not ints:
        return True
    return solve_integer(SparseIntMatrix.from_dense(ints, cols=lcols), [int(t) for t in rhs]) is not None


def _rational_complement_projector(Wrows, m, wcols) -> list[list[Fraction]]:
    """Rows p_1..p_k spanning the annihilator of span(W) in Q^m."""
    if not wcols:
        return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    # annihilator = left kernel of W = kernel of W^T
    WT = [[Wrows[i][c] for i in range(m)] for c in range(wcols)]
    return _rational_kernel(WT, m)


def _rational_kernel(A: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    rows = [list(r) for r in A]
    pivcols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivcols.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivcols]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivcols):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


def lcm_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for x in values:
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    return den
