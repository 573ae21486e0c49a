"""Pure-Python hot kernels.

``reduce_level`` eliminates unit pivots from one coboundary matrix and
``cup_table_eval`` evaluates interval tables for cup-i products.  The
compiled module ``_kernels`` implements the same functions with identical
results; ``diffcoh._accel`` picks one at import time.
"""

from heapq import heapify, heappop, heappush


def reduce_level(rows_in):
    """Eliminate +-1 pivots from a sparse integer matrix.

    ``rows_in`` maps row -> {col: value}.  Pivots are taken in order of
    Markowitz cost (row count - 1) * (col count - 1), ties broken by
    (row, col), with lazily refreshed costs.  Returns ``(steps, rows)``:
    each step is ``(col, row, pivot, col_items, row_items)`` where
    ``col_items`` lists the other nonzeros of the pivot column and
    ``row_items`` the other nonzeros of the pivot row, both sorted and taken
    just before elimination; ``rows`` is the remaining matrix with rows and
    entries in increasing order.
    """
    rows = {}
    cols = {}
    for b in sorted(rows_in):
        r = rows_in[b]
        if not r:
            continue
        rows[b] = dict(r)
        for a, v in r.items():
            cols.setdefault(a, {})[b] = v
    heap = []
    for b in sorted(rows):
        rb = rows[b]
        nb = len(rb) - 1
        for a in sorted(rb):
            v = rb[a]
            if v == 1 or v == -1:
                heap.append((nb * (len(cols[a]) - 1), b, a))
    heapify(heap)
    steps = []
    while heap:
        cost, b, a = heappop(heap)
        row = rows.get(b)
        if row is None:
            continue
        lam = row.get(a)
        if lam is None or (lam != 1 and lam != -1):
            continue
        col = cols[a]
        cur = (len(row) - 1) * (len(col) - 1)
        if cur > cost:
            heappush(heap, (cur, b, a))
            continue
        row_items = sorted((s, x) for s, x in row.items() if s != a)
        col_items = sorted((t, y) for t, y in col.items() if t != b)
        steps.append((a, b, lam, col_items, row_items))
        for s, _ in row_items:
            del cols[s][b]
        del rows[b]
        for t, _ in col_items:
            del rows[t][a]
        del cols[a]
        for t, y in col_items:
            factor = y * lam
            rt = rows[t]
            for s, x in row_items:
                nv = rt.get(s, 0) - factor * x
                cs = cols[s]
                if nv:
                    rt[s] = nv
                    cs[t] = nv
                    if nv == 1 or nv == -1:
                        heappush(heap, ((len(rt) - 1) * (len(cs) - 1), t, s))
                else:
                    del rt[s]
                    del cs[t]
            if not rt:
                del rows[t]
        for s, _ in row_items:
            if not cols[s]:
                del cols[s]
    return steps, {b: dict(sorted(rows[b].items())) for b in sorted(rows)}


def cup_table_eval(table, simplices, lookups, u, v, modulus):
    """Evaluate sum over table entries of u(front) * v(back) on each simplex.

    ``table`` holds ``(sign, upos, vpos)`` with position tuples into the
    simplex; ``lookups`` is a pair of dicts (simplex tuple -> index) for the
    degrees of u and v; ``u`` and ``v`` are dense value lists.  With
    ``modulus`` nonzero results are reduced.
    """
    ulook, vlook = lookups
    out = []
    for s in simplices:
        acc = 0
        for sign, upos, vpos in table:
            x = u[ulook[tuple([s[k] for k in upos])]]
            if not x:
                continue
            y = v[vlook[tuple([s[k] for k in vpos])]]
            if y:
                acc += sign * x * y
        if modulus:
            acc %= modulus
        out.append(acc)
    return out
