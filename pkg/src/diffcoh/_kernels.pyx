# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled hot kernels.

Same functions and results as ``_kernels_py``.  Arithmetic is int64 with
overflow checks; any input outside that range (big integers, fractions,
simplices too wide to pack into a 64-bit key) is handed to the pure-Python
version, so results never depend on the backend.
"""

from libc.stdint cimport int64_t, uint64_t
from libcpp.algorithm cimport sort
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

from . import _kernels_py

cdef extern from *:
    """
    static inline int dc_mulsub(long long acc, long long f, long long x, long long *out) {
        long long p;
        if (__builtin_mul_overflow(f, x, &p)) return 1;
        return __builtin_sub_overflow(acc, p, out);
    }
    static inline int dc_muladd(long long acc, long long f, long long x, long long *out) {
        long long p;
        if (__builtin_mul_overflow(f, x, &p)) return 1;
        return __builtin_add_overflow(acc, p, out);
    }
    """
    int dc_mulsub(long long acc, long long f, long long x, long long *out) nogil
    int dc_muladd(long long acc, long long f, long long x, long long *out) nogil

ctypedef long long i64
ctypedef unordered_map[i64, i64] Line
ctypedef pair[i64, pair[i64, i64]] Entry


class _Overflow(Exception):
    pass


cdef inline Entry _entry(i64 cost, i64 b, i64 a):
    # priority_queue pops the largest element; negating gives heapq order
    return Entry(-cost, pair[i64, i64](-b, -a))


cdef list _sorted_items(Line& line, i64 skip):
    cdef vector[pair[i64, i64]] items
    for kv in line:
        if kv.first != skip:
            items.push_back(pair[i64, i64](kv.first, kv.second))
    sort(items.begin(), items.end())
    return [(kv.first, kv.second) for kv in items]


def reduce_level(rows_in):
    """Eliminate +-1 pivots; see ``_kernels_py.reduce_level``."""
    try:
        return _reduce_level(rows_in)
    except (_Overflow, OverflowError):
        return _kernels_py.reduce_level(rows_in)


cdef _reduce_level(rows_in):
    cdef unordered_map[i64, Line] rows
    cdef unordered_map[i64, Line] cols
    cdef priority_queue[Entry] heap
    cdef i64 a, b, s, t, x, y, v, nv, lam, cost, cur, factor, nb
    cdef Entry top
    cdef vector[pair[i64, i64]] row_vec, col_vec
    cdef size_t ri, ci

    for b_obj in sorted(rows_in):
        r = rows_in[b_obj]
        if not r:
            continue
        b = b_obj
        for a_obj, v_obj in r.items():
            a = a_obj
            v = v_obj
            rows[b][a] = v
            cols[a][b] = v
    for kv in rows:
        b = kv.first
        nb = <i64>kv.second.size() - 1
        for e in kv.second:
            if e.second == 1 or e.second == -1:
                heap.push(_entry(nb * (<i64>cols[e.first].size() - 1), b, e.first))

    steps = []
    while not heap.empty():
        top = heap.top()
        heap.pop()
        cost = -top.first
        b = -top.second.first
        a = -top.second.second
        if rows.count(b) == 0 or rows[b].count(a) == 0:
            continue
        lam = rows[b][a]
        if lam != 1 and lam != -1:
            continue
        cur = (<i64>rows[b].size() - 1) * (<i64>cols[a].size() - 1)
        if cur > cost:
            heap.push(_entry(cur, b, a))
            continue
        row_items = _sorted_items(rows[b], a)
        col_items = _sorted_items(cols[a], b)
        steps.append((a, b, lam, col_items, row_items))
        row_vec.clear()
        col_vec.clear()
        for s_obj, x_obj in row_items:
            row_vec.push_back(pair[i64, i64](s_obj, x_obj))
        for t_obj, y_obj in col_items:
            col_vec.push_back(pair[i64, i64](t_obj, y_obj))
        for ri in range(row_vec.size()):
            cols[row_vec[ri].first].erase(b)
        rows.erase(b)
        for ci in range(col_vec.size()):
            rows[col_vec[ci].first].erase(a)
        cols.erase(a)
        for ci in range(col_vec.size()):
            t = col_vec[ci].first
            factor = col_vec[ci].second * lam
            for ri in range(row_vec.size()):
                s = row_vec[ri].first
                x = row_vec[ri].second
                v = rows[t][s] if rows[t].count(s) else 0
                if dc_mulsub(v, factor, x, &nv):
                    raise _Overflow()
                if nv != 0:
                    rows[t][s] = nv
                    cols[s][t] = nv
                    if nv == 1 or nv == -1:
                        heap.push(_entry((<i64>rows[t].size() - 1) * (<i64>cols[s].size() - 1), t, s))
                else:
                    rows[t].erase(s)
                    cols[s].erase(t)
            if rows[t].empty():
                rows.erase(t)
        for ri in range(row_vec.size()):
            s = row_vec[ri].first
            if cols[s].empty():
                cols.erase(s)

    remaining = {}
    cdef vector[i64] keys
    for kv in rows:
        keys.push_back(kv.first)
    sort(keys.begin(), keys.end())
    for ri in range(keys.size()):
        b = keys[ri]
        remaining[b] = dict(_sorted_items(rows[b], -1))  # indices are >= 0
    return steps, remaining


cdef bint _small_ints(values, vector[i64]& out):
    out.clear()
    out.reserve(len(values))
    for val in values:
        if type(val) is not int and type(val) is not bool:
            return False
        try:
            out.push_back(<i64>val)
        except OverflowError:
            return False
    return True


cdef inline uint64_t _pack(tuple_or_list, int width):
    cdef uint64_t key = 0
    for vert in tuple_or_list:
        key = (key << width) | <uint64_t>(<i64>vert + 1)
    return key


def cup_table_eval(table, simplices, lookups, u, v, modulus):
    """Table evaluation of a cup-i type product; see ``_kernels_py``."""
    cdef vector[i64] uval, vval
    if not table or not simplices:
        return _kernels_py.cup_table_eval(table, simplices, lookups, u, v, modulus)
    if not (_small_ints(u, uval) and _small_ints(v, vval)):
        return _kernels_py.cup_table_eval(table, simplices, lookups, u, v, modulus)
    ulook, vlook = lookups
    cdef i64 top = -1
    for s in simplices:
        for vert in s:
            if vert > top:
                top = vert
    cdef int width = 1
    while (1 << width) <= top + 1:
        width += 1
    if len(simplices[0]) * width > 64:
        return _kernels_py.cup_table_eval(table, simplices, lookups, u, v, modulus)
    try:
        return _cup_eval(table, simplices, ulook, vlook, uval, vval, modulus, width)
    except _Overflow:
        return _kernels_py.cup_table_eval(table, simplices, lookups, u, v, modulus)


cdef list _cup_eval(table, simplices, ulook, vlook, vector[i64]& uval, vector[i64]& vval, i64 modulus, int width):
    cdef unordered_map[uint64_t, i64] umap, vmap
    for simplex, idx in ulook.items():
        umap[_pack(simplex, width)] = idx
    for simplex, idx in vlook.items():
        vmap[_pack(simplex, width)] = idx
    cdef vector[i64] signs
    cdef vector[vector[int]] upos, vpos
    cdef vector[int] tmp
    for sign, up, vp in table:
        signs.push_back(sign)
        tmp.clear()
        for pos in up:
            tmp.push_back(pos)
        upos.push_back(tmp)
        tmp.clear()
        for pos in vp:
            tmp.push_back(pos)
        vpos.push_back(tmp)
    cdef vector[i64] verts
    cdef size_t e, k, ntab = signs.size()
    cdef uint64_t key
    cdef i64 acc, x, y, xy
    out = []
    for s in simplices:
        verts.clear()
        for vert in s:
            verts.push_back(<i64>vert + 1)
        acc = 0
        for e in range(ntab):
            key = 0
            for k in range(upos[e].size()):
                key = (key << width) | <uint64_t>verts[upos[e][k]]
            x = uval[umap[key]]
            if x == 0:
                continue
            key = 0
            for k in range(vpos[e].size()):
                key = (key << width) | <uint64_t>verts[vpos[e][k]]
            y = vval[vmap[key]]
            if y == 0:
                continue
            if dc_muladd(0, signs[e], x, &xy) or dc_muladd(acc, xy, y, &acc):
                raise _Overflow()
        if modulus:
            acc %= modulus
            if acc < 0:
                acc += modulus
        out.append(acc)
    return out
