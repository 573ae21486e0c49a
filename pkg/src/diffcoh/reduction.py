"""Cochain complex reduction by unit pivots.

Eliminating a pair (a, b) with ``delta[b][a] = +-1`` replaces the cochain
complex by a smaller homotopy-equivalent one.  Repeating this over every
degree shrinks a simplicial cochain complex to a handful of cells.  The
elimination steps are kept, so the projection ``f``, the inclusion ``g``
and the homotopy ``h`` with ``g f - 1 = delta h + h delta`` can be applied
to sparse cochains (dicts mapping simplex index to value) on demand.
All maps are integral, so they serve every coefficient ring at once.
"""

from __future__ import annotations

from ._accel import kernels
from .complexes import SimplicialComplex


class Reduction:
    """Reduced cochain complex of ``X`` together with the transfer maps."""

    def __init__(self, X: SimplicialComplex, steps=None, small_rows=None):
        self.dim = X.dim
        self.sizes = [X.count(n) for n in range(self.dim + 1)]
        if steps is None:
            steps, small_rows = _reduce(X)
        self.steps = steps
        removed = [set() for _ in range(self.dim + 1)]
        for n, level in enumerate(steps):
            for a, b, *_ in level:
                removed[n].add(a)
                removed[n + 1].add(b)
        self.cells = [[c for c in range(self.sizes[n]) if c not in removed[n]] for n in range(self.dim + 1)]
        self.position = [{c: i for i, c in enumerate(cells)} for cells in self.cells]
        self._small_rows = small_rows
        self.small = []
        for n in range(self.dim):
            rows_n = small_rows[n]
            pos_src, pos_dst = self.position[n], self.position[n + 1]
            mat = [[0] * len(self.cells[n]) for _ in self.cells[n + 1]]
            for b, row in rows_n.items():
                if b in pos_dst:
                    for a, v in row.items():
                        mat[pos_dst[b]][pos_src[a]] = v
            self.small.append(mat)

    def small_size(self, n: int) -> int:
        if 0 <= n <= self.dim:
            return len(self.cells[n])
        return 0

    def small_matrix(self, n: int) -> list[list[int]]:
        """Dense reduced coboundary C'^n -> C'^{n+1}; empty shapes outside range."""
        if 0 <= n < self.dim:
            return self.small[n]
        return [[0] * self.small_size(n) for _ in range(self.small_size(n + 1))]

    # -- transfer maps -----------------------------------------------------

    def project(self, u: dict, d: int) -> list:
        """f: full degree-d cochain -> reduced cochain as a dense list."""
        u = dict(u)
        if 1 <= d <= self.dim:
            for a, b, lam, col_items, _ in self.steps[d - 1]:
                ub = u.pop(b, 0)
                if ub:
                    coef = ub * lam
                    for t, y in col_items:
                        u[t] = u.get(t, 0) - coef * y
        if not 0 <= d <= self.dim:
            return []
        return [u.get(c, 0) for c in self.cells[d]]

    def include(self, w, d: int) -> dict:
        """g: reduced cochain (dense list) -> full degree-d cochain dict."""
        if not 0 <= d <= self.dim:
            return {}
        out = {c: x for c, x in zip(self.cells[d], w) if x}
        if d < self.dim:
            for a, b, lam, _, row_items in reversed(self.steps[d]):
                s = 0
                for sigma, x in row_items:
                    val = out.get(sigma)
                    if val:
                        s += val * x
                if s:
                    out[a] = -lam * s
        return out

    def homotopy(self, u: dict, d: int) -> dict:
        """h: full degree-d cochain -> full degree-(d-1) cochain."""
        if not 1 <= d <= self.dim:
            return {}
        v = dict(u)
        level = self.steps[d - 1]
        coeffs = []
        for a, b, lam, col_items, _ in level:
            vb = v.pop(b, 0)
            if vb:
                coef = vb * lam
                for t, y in col_items:
                    v[t] = v.get(t, 0) - coef * y
                coeffs.append(-coef)
            else:
                coeffs.append(0)
        out: dict = {}
        for (a, b, lam, _, row_items), c in zip(reversed(level), reversed(coeffs)):
            s = 0
            for sigma, x in row_items:
                val = out.get(sigma)
                if val:
                    s += val * x
            val = c - lam * s
            if val:
                out[a] = val
        return out

    def to_state(self):
        return {"steps": self.steps, "small_rows": self._small_rows}


def _reduce(X: SimplicialComplex):
    dim = X.dim
    alive = [set(range(X.count(n))) for n in range(dim + 1)]
    steps = []
    small_rows = []
    for n in range(dim):
        M = X.coboundary(n)
        rows: dict = {}
        cols_alive = alive[n]
        for r, c, v in M.entries:
            if c in cols_alive:
                rows.setdefault(r, {})[c] = v
        level, remaining = kernels.reduce_level(rows)
        for a, b, *_ in level:
            alive[n].discard(a)
            alive[n + 1].discard(b)
        steps.append(level)
        small_rows.append(remaining)
    return steps, small_rows
