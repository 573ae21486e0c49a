"""Search for a small triangulation of RP^3 by bistellar moves.

Starts from the 15-vertex antipodal quotient of the subdivided boundary of
the 4-simplex and applies random 2-3 / 3-2 moves, removing degree-4
vertices (4-1 moves) whenever possible.  Prints the relabelled facet list
once the target vertex count is reached.  Used once to produce the
shipped rp3 table.
"""

import random
import sys
from itertools import combinations

from diffcoh.corpus import rp_quotient


def edges_of(facets):
    out = {}
    for f in facets:
        for e in combinations(sorted(f), 2):
            out.setdefault(e, []).append(f)
    return out


def triangles_of(facets):
    out = {}
    for f in facets:
        for t in combinations(sorted(f), 3):
            out.setdefault(t, []).append(f)
    return out


def try_remove_vertex(facets):
    star = {}
    for f in facets:
        for v in f:
            star.setdefault(v, []).append(f)
    for v, tets in sorted(star.items()):
        if len(tets) == 4:
            link = frozenset().union(*tets) - {v}
            if len(link) == 4 and link not in facets:
                return (facets - set(tets)) | {link}
    return None


def random_move(facets, rng, allow_23):
    tri = triangles_of(facets)
    edg = edges_of(facets)
    moves = []
    for e, tets in edg.items():
        if len(tets) == 3:
            link = frozenset().union(*tets) - set(e)
            if len(link) == 3 and tuple(sorted(link)) not in tri:
                moves.append(("32", e, tets, link))
    if allow_23:
        for t, tets in tri.items():
            x = next(iter(tets[0] - set(t)))
            y = next(iter(tets[1] - set(t)))
            if tuple(sorted((x, y))) not in edg:
                moves.append(("23", t, tets, (x, y)))
    if not moves:
        return None
    kind, key, tets, extra = rng.choice(moves)
    new = set(facets) - set(tets)
    if kind == "32":
        x, y = key
        new |= {frozenset(extra | {x}), frozenset(extra | {y})}
    else:
        x, y = extra
        for pair in combinations(key, 2):
            new.add(frozenset(set(pair) | {x, y}))
    return frozenset(new)


def main(target=11, seed=0, budget=200000):
    rng = random.Random(seed)
    X = rp_quotient(3)
    facets = frozenset(frozenset(f) for f in X.facets)
    for it in range(budget):
        while True:
            smaller = try_remove_vertex(facets)
            if smaller is None:
                break
            facets = frozenset(smaller)
        nverts = len(frozenset().union(*facets))
        if nverts <= target:
            break
        moved = random_move(facets, rng, allow_23=rng.random() < 0.4)
        if moved is not None:
            facets = moved
    verts = sorted(frozenset().union(*facets))
    relabel = {v: i for i, v in enumerate(verts)}
    out = sorted(tuple(sorted(relabel[v] for v in f)) for f in facets)
    print(len(verts), len(out), file=sys.stderr)
    print(out)


if __name__ == "__main__":
    main(seed=int(sys.argv[1]) if len(sys.argv) > 1 else 0)
