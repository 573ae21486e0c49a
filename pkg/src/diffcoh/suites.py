"""Verification batteries behind ``diffcoh verify``.

Every suite yields cases with a stable id, a pass/fail status and the
expected and actual values.  A failing case carries a witness: the inputs in
file form plus the CLI invocations that reproduce the actual value.  Cases
are generated from ``random.Random`` streams seeded by (seed, suite, tag),
so reports are a pure function of (suite, seed, scale).
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from itertools import product as iproduct
from math import comb, gcd
from typing import Callable, Iterator

from . import checks
from .bundles import line_bundle, winding_circle
from .cochains import Cochain, format_coefficient
from .cohomology import (
    CohomologyClass,
    bockstein_beta,
    bockstein_beta2,
    bockstein_exp,
    cohomology_group,
    descriptor,
    engine_for,
    gamma2,
    homology_group,
    mod2_betti,
    pullback_class,
    rational_to_qz,
    rho2,
    to_rational,
)
from .complexes import coboundary_matrix, product, projections
from .corpus import builtin
from .differential import (
    DegreeError,
    DiffCocycle,
    I,
    R,
    curvature_power,
    db_cup,
    differential,
    dd_power,
    equal,
    holonomy,
    is_trivial,
    pullback_diff,
    refined_sq,
)
from .groups import GroupDescriptor
from .io import cochain_to_json, diff_to_json, space
from .linalg import (
    NotSublatticeError,
    SparseIntMatrix,
    determinant,
    dense_matmul,
    f2_rank,
    in_lattice_image,
    quotient_structure,
    rational_rank,
    smith_normal_form,
    solve_integer,
)
from .sampling import generator_diff_cocycles, random_class, random_cochain, random_diff_cocycle
from .steenrod import (
    EvenSquareError,
    active_faults,
    adem_terms,
    cup,
    cup_i,
    sq,
    sq_integral,
)

SCALES = ("tiny", "full")


@dataclass
class Case:
    id: str
    ok: bool
    expected: object = "pass"
    actual: object = None
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "status": "pass" if self.ok else "fail",
            "expected": self.expected,
            "actual": self.actual if self.actual is not None else ("pass" if self.ok else "fail"),
            "witness": self.witness,
        }


@dataclass
class Context:
    seed: int
    scale: str

    @property
    def full(self) -> bool:
        return self.scale == "full"

    def rng(self, *tag) -> random.Random:
        return random.Random(":".join(map(str, (self.seed,) + tag)))


# ---------------------------------------------------------------------------
# helpers


def _coords(x: CohomologyClass) -> list[str]:
    return [format_coefficient(c) for c in x.coordinates()]


def _compact(doc) -> str:
    return json.dumps(doc, separators=(",", ":"))


def _argv(*parts) -> list[str]:
    faults = active_faults()
    head = []
    for f in faults:
        head += ["--inject-fault", f]
    return head + [str(p) for p in parts]


def _cochain_arg(u: Cochain) -> str:
    return _compact(cochain_to_json(u))


def _diff_arg(x: DiffCocycle) -> str:
    return _compact(diff_to_json(x))


def _class_case(cid, actual: CohomologyClass, expected: CohomologyClass, witness: Callable[[], dict], field: str = "output.coordinates") -> Case:
    """Compare classes; on failure the last replay command prints ``actual``
    at ``field`` of its JSON output."""
    ok = actual == expected
    if ok:
        return Case(cid, True, _coords(expected), _coords(actual))
    w = witness()
    w.setdefault("check", {"field": field, "value": _coords(actual)})
    return Case(cid, False, _coords(expected), _coords(actual), w)


def _ops(*steps) -> Callable[[], dict]:
    """Witness replaying a chain of single operations on classes.

    Each step is (op, x, flags...); every command is self-contained, and the
    last one reproduces the failing value.
    """

    def make():
        return {
            "input": cochain_to_json(steps[0][1].representative),
            "replay": [_argv("operation", op, *flags, "--in", _cochain_arg(x.representative)) for op, x, *flags in steps],
        }

    return make


def _sq_witness(k: int, x: CohomologyClass, extra: dict | None = None) -> Callable[[], dict]:
    def make():
        w = {"input": cochain_to_json(x.representative), "replay": [_argv("operation", "sq", "--k", k, "--in", _cochain_arg(x.representative))]}
        if extra:
            w.update(extra)
        return w

    return make


def _corpus(ctx: Context) -> list[str]:
    names = ["point", "circle", "sphere(2)", "sphere(3)", "torus", "klein", "rp2", "rp3", "circle*circle", "rp2*circle"]
    if ctx.full:
        names += ["rp(4)", "rp2*rp2", "sphere(2)*circle"]
    return names


def _space(name: str):

    return space(name)


def _bit_vector(x: CohomologyClass) -> list[int]:
    return [int(c) % 2 for c in x.coordinates()]


def _two_torsion_vector(y: CohomologyClass) -> list[int] | None:
    """F_2 coordinates of an element of H(Z)[2], or None if y is not 2-torsion."""

    out = []
    for (kind, _, order), c in zip(engine_for(y.complex).slots(y.degree, "Z"), y.coordinates()):
        if kind == "f" or order % 2:
            if c:
                return None
            continue
        half = order // 2
        if c % half:
            return None
        out.append((c // half) % 2)
    return out


def _f2_rank(vectors: list[list[int]], width: int) -> int:
    if not vectors or not width:
        return 0
    data = {(i, j): v for j, vec in enumerate(vectors) for i, v in enumerate(vec) if v % 2}
    return f2_rank(SparseIntMatrix.from_dict(width, len(vectors), data))


def _subgroup_order(vectors: list[list[int]], orders: list[int]) -> int:
    """Order of the subgroup of the product of Z/d_i generated by vectors."""
    k = len(orders)
    if k == 0:
        return 1
    cols = [list(v) for v in vectors] + [[orders[i] if r == i else 0 for r in range(k)] for i in range(k)]
    Z = SparseIntMatrix.from_dense([[col[r] for col in cols] for r in range(k)], cols=len(cols))
    B = SparseIntMatrix.from_dense([[orders[i] if r == i else 0 for i in range(k)] for r in range(k)], cols=k)
    return quotient_structure(Z, B).torsion_order


# ---------------------------------------------------------------------------
# linalg


def suite_linalg(ctx: Context) -> Iterator[Case]:
    rng = ctx.rng("linalg")
    n_random = 300 if ctx.full else 120
    for t in range(n_random):
        r, c = rng.randint(0, 6), rng.randint(0, 6)
        dense = [[rng.randint(-9, 9) if rng.random() < 0.7 else 0 for _ in range(c)] for _ in range(r)]
        M = SparseIntMatrix.from_dense(dense, cols=c)
        res = smith_normal_form(M)
        UMV = dense_matmul(dense_matmul(res.U, dense), res.V) if r and c else []
        diag = res.diagonal
        ok = UMV == res.D if r and c else True
        ok = ok and all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1) if diag[i + 1])
        ok = ok and all(d > 0 for d in diag if d) and len([d for d in diag if d]) == res.rank
        ok = ok and res.rank == rational_rank(M)
        ok = ok and (not r or abs(determinant(res.U)) == 1) and (not c or abs(determinant(res.V)) == 1)
        yield Case(f"snf:random{t:03d}", ok, "UMV=D, d_i | d_i+1, rank agrees", "ok" if ok else {"matrix": dense, "diagonal": diag})
    for t in range(n_random // 2):
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        dense = [[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)]
        b = [rng.randint(-6, 6) for _ in range(r)]
        M = SparseIntMatrix.from_dense(dense, cols=c)
        x = solve_integer(M, b)
        box = range(-12, 13)
        brute = None
        for cand in iproduct(box, repeat=c):
            if all(sum(dense[i][j] * cand[j] for j in range(c)) == b[i] for i in range(r)):
                brute = list(cand)
                break
        if x is not None:
            ok = M.matvec(x) == b
        else:
            ok = brute is None
        yield Case(f"solve:random{t:03d}", ok, "consistent with brute force", "ok" if ok else {"matrix": dense, "b": b, "x": x, "brute": brute})
    for t in range(n_random // 4):
        k = rng.randint(1, 4)
        Zd = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(k)]
        if determinant(Zd) == 0:
            Zd = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
        ncols = rng.randint(0, 3)
        mult = [[rng.randint(-3, 3) for _ in range(ncols)] for _ in range(k)]
        Bd = dense_matmul(Zd, mult) if ncols else [[] for _ in range(k)]
        G1 = quotient_structure(SparseIntMatrix.from_dense(Zd, cols=k), SparseIntMatrix.from_dense(Bd, cols=ncols))
        Zt = dense_matmul(Zd, _random_unimodular(rng, k))
        Bt = dense_matmul(Bd, _random_unimodular(rng, ncols)) if ncols else Bd
        G2 = quotient_structure(SparseIntMatrix.from_dense(Zt, cols=k), SparseIntMatrix.from_dense(Bt, cols=ncols))
        yield Case(f"quotient:invariance{t:03d}", G1 == G2, str(G1), str(G2))
    # fixed examples
    res = smith_normal_form(SparseIntMatrix.from_dense([[2, 4], [6, 8]]))
    yield Case("snf:example-2-4-6-8", res.diagonal == [2, 4], [2, 4], res.diagonal)
    res = smith_normal_form(SparseIntMatrix(0, 0, ()))
    yield Case("snf:example-empty", res.diagonal == [] and res.U == [] and res.V == [], [], res.diagonal)
    yield Case("solve:example-4", solve_integer(SparseIntMatrix.from_dense([[2]]), [4]) == [2], [2], solve_integer(SparseIntMatrix.from_dense([[2]]), [4]))
    yield Case("solve:example-3", solve_integer(SparseIntMatrix.from_dense([[2]]), [3]) is None, None, solve_integer(SparseIntMatrix.from_dense([[2]]), [3]))
    one = SparseIntMatrix.from_dense([[1]])
    empty = SparseIntMatrix(1, 0, ())
    v = in_lattice_image([Fraction(1, 2)], one, empty)
    yield Case("lattice:example-half", v is False, False, v)
    v = in_lattice_image([Fraction(1, 2)], one, [[Fraction(1, 4)]])
    yield Case("lattice:example-quarter", v is True, True, v)
    G = quotient_structure(SparseIntMatrix.identity(1), SparseIntMatrix.from_dense([[2]]))
    yield Case("quotient:example-z2", str(G) == "Z/2", "Z/2", str(G))
    try:
        quotient_structure(SparseIntMatrix.from_dense([[2]]), SparseIntMatrix.from_dense([[1]]))
        yield Case("quotient:not-sublattice", False, "NotSublatticeError", "no error")
    except NotSublatticeError:
        yield Case("quotient:not-sublattice", True, "NotSublatticeError", "NotSublatticeError")
    # complexes: delta delta = 0, Euler characteristics multiply
    for name in _corpus(ctx):
        X = _space(name)
        for ring in ("Z", "Z2"):
            ok = True
            for n in range(X.dim - 1):
                A = coboundary_matrix(X, n, ring)
                B = coboundary_matrix(X, n + 1, ring)
                prod_ = (B @ A).to_dense()
                if ring == "Z2":
                    prod_ = [[v % 2 for v in row] for row in prod_]
                ok = ok and not any(any(row) for row in prod_)
            yield Case(f"complex:{name}:dd-zero:{ring}", ok)
    for a, b in (("circle", "circle"), ("rp2", "circle"), ("torus", "sphere(2)")):
        X, Y = builtin(a), builtin(b)
        P = product(X, Y)
        exp_chi = X.euler_characteristic * Y.euler_characteristic
        yield Case(f"complex:{a}*{b}:euler", P.euler_characteristic == exp_chi, exp_chi, P.euler_characteristic)


def _random_unimodular(rng: random.Random, k: int) -> list[list[int]]:
    M = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    for _ in range(3 * k):
        if k < 2:
            break
        i, j = rng.sample(range(k), 2)
        f = rng.randint(-2, 2)
        for r in range(k):
            M[r][j] += f * M[r][i]
    return M


# ---------------------------------------------------------------------------
# classical squares


def _z2_classes(ctx: Context, X, n: int, tag: str, randoms: int = 2):
    _, basis = cohomology_group(X, n, "Z2")
    out = [(f"g{k}", b.cls) for k, b in enumerate(basis)]
    rng = ctx.rng("classes", tag, X.name, n)
    if basis:
        for s in range(randoms):
            out.append((f"r{s}", random_class(rng, X, n, "Z2")))
    return out


def suite_classical_sq(ctx: Context) -> Iterator[Case]:
    yield from _rp_ring_cases(ctx)
    for name in _corpus(ctx):
        X = _space(name)
        for n in range(X.dim + 1):
            classes = _z2_classes(ctx, X, n, "sq")
            for label, x in classes:
                base = f"{name}:H{n}:{label}"
                yield _class_case(f"sq0:{base}", sq(0, x), x, _sq_witness(0, x))
                yield _class_case(f"sq-top:{base}", sq(n, x), CohomologyClass(cup(x.representative, x.representative), check=False), _sq_witness(n, x))
                zero = CohomologyClass(Cochain.zero(X, 2 * n + 1, "Z2"), check=False)
                yield _class_case(f"sq-above:{base}", sq(n + 1, x), zero, _sq_witness(n + 1, x))
                if n >= 1:
                    rng = ctx.rng("perturb", base)
                    shifted = CohomologyClass(x.representative + random_cochain(rng, X, n - 1, "Z2", 0.5).delta(), check=False)
                    for k in range(n + 1):
                        if n + k > X.dim:
                            continue
                        yield _class_case(f"sq-rep:{base}:k{k}", sq(k, shifted), sq(k, x), _sq_witness(k, shifted))
            gens = [(l, x) for l, x in classes if l.startswith("g")]
            for (la, xa), (lb, xb) in combinations(gens, 2):
                s = xa + xb
                for k in range(n + 1):
                    if n + k > X.dim:
                        continue
                    yield _class_case(f"sq-linear:{name}:H{n}:{la}+{lb}:k{k}", sq(k, s), sq(k, xa) + sq(k, xb), _sq_witness(k, s))
            for la, x in gens:
                yield from _adem_cases(name, X, n, la, x)
        yield from _cartan_cases(ctx, name, X)
    yield from _cup_i_identity_cases(ctx)
    yield from _naturality_cases(ctx)


def _adem_cases(name: str, X, n: int, label: str, x: CohomologyClass) -> Iterator[Case]:
    for a, b in _adem_pairs(n, X.dim):
        lhs = sq(a, sq(b, x))
        rhs = CohomologyClass(Cochain.zero(X, n + a + b, "Z2"), check=False)
        for top, c in adem_terms(a, b):
            rhs = rhs + sq(top, sq(c, x))
        yield _class_case(f"adem:{name}:H{n}:{label}:Sq{a}Sq{b}", lhs, rhs, _sq_witness(a, sq(b, x)))


def _adem_pairs(n: int, dim: int):
    for b in range(1, 7):
        for a in range(1, 2 * b):
            if a + b <= 6 and n + a + b <= dim and b <= n:
                yield a, b


def _rp_ring_cases(ctx: Context) -> Iterator[Case]:
    X = builtin("rp(5)")
    expected = ["Z", "0", "Z/2", "0", "Z/2", "Z"]
    actual = [str(descriptor(X, k, "Z")) for k in range(6)]
    yield Case("rp-ring:rp(5):groups", actual == expected, expected, actual)
    _, b2 = cohomology_group(X, 2, "Z")
    x = b2[0].cls
    x2 = CohomologyClass(cup(x.representative, x.representative), check=False)
    yield Case("rp-ring:rp(5):x-squared-nonzero", not x2.is_zero(), "nonzero", _coords(x2))
    yield Case("rp-ring:rp(5):2x-zero", x.scale(2).is_zero(), "zero", _coords(x.scale(2)))
    _, a1 = cohomology_group(X, 1, "Z2")
    a = a1[0].cls
    a2 = CohomologyClass(cup(a.representative, a.representative), check=False)
    yield _class_case("rp-ring:rp(5):rho2-x-is-a2", rho2(x), a2, _ops(("rho2", x)))
    a4 = CohomologyClass(cup(a2.representative, a2.representative), check=False)
    yield _class_case("rp-ring:rp(5):sq2-a2-is-a4", sq(2, a2), a4, _sq_witness(2, a2))
    yield Case("rp-ring:rp(5):a4-nonzero", not a4.is_zero(), "nonzero", _coords(a4))
    # the only tiny-scale space of dimension 5, so the only home of Sq1Sq2
    power = a
    for n in range(1, X.dim):
        yield from _adem_cases("rp(5)", X, n, "g0", power)
        power = CohomologyClass(cup(power.representative, a.representative), check=False)
    if ctx.full:
        Y = builtin("rp(4)")
        _, a1 = cohomology_group(Y, 1, "Z2")
        a = a1[0].cls
        a2 = CohomologyClass(cup(a.representative, a.representative), check=False)
        a4 = CohomologyClass(cup(a2.representative, a2.representative), check=False)
        got = sq(2, a2)
        yield _class_case("rp-ring:rp(4):sq2-a2-is-a4", got, a4, _sq_witness(2, a2))
        yield Case("rp-ring:rp(4):a4-nonzero", not a4.is_zero(), "nonzero", _coords(a4))


def _cartan_cases(ctx: Context, name: str, X) -> Iterator[Case]:
    for p in range(1, X.dim + 1):
        for q in range(p, X.dim + 1 - p):
            _, bp = cohomology_group(X, p, "Z2")
            _, bq = cohomology_group(X, q, "Z2")
            for i, xp in enumerate(bp):
                for j, yq in enumerate(bq):
                    x, y = xp.cls, yq.cls
                    xy = CohomologyClass(cup(x.representative, y.representative), check=False)
                    for k in range(p + q + 1):
                        if p + q + k > X.dim:
                            continue
                        rhs = CohomologyClass(Cochain.zero(X, p + q + k, "Z2"), check=False)
                        for t in range(k + 1):
                            rhs = rhs + CohomologyClass(cup(sq(t, x).representative, sq(k - t, y).representative), check=False)
                        yield _class_case(f"cartan:{name}:H{p}g{i}*H{q}g{j}:k{k}", sq(k, xy), rhs, _sq_witness(k, xy))


def _cup_i_identity_cases(ctx: Context) -> Iterator[Case]:
    rng = ctx.rng("cup-i-identity")
    names = [n for n in _corpus(ctx) if n != "point"]
    for t in range(200):
        X = _space(rng.choice(names))
        p = rng.randint(0, X.dim)
        q = rng.randint(0, X.dim)
        i = rng.randint(1, p + q) if p + q >= 1 else 1
        if p + q - i + 1 > X.dim or p + q - i < 0:
            i = p + q
        u = random_cochain(rng, X, p, "Z2", 0.5)
        v = random_cochain(rng, X, q, "Z2", 0.5)
        lhs = cup_i(u, v, i).delta()
        rhs = cup_i(u.delta(), v, i) + cup_i(u, v.delta(), i) + cup_i(u, v, i - 1) + cup_i(v, u, i - 1)
        ok = lhs == rhs
        witness = None
        if not ok:
            defect = lhs - rhs
            witness = {
                "u": cochain_to_json(u),
                "v": cochain_to_json(v),
                "i": i,
                "defect": cochain_to_json(defect, with_complex=False),
                "replay": [_argv("operation", "cup-i-identity", "--i", i, "--in", _cochain_arg(u), "--in2", _cochain_arg(v))],
                "check": {"field": "holds", "value": False},
            }
        yield Case(f"cup-i-identity:{t:03d}:{X.name}:p{p}q{q}i{i}", ok, "holds", "holds" if ok else "defect", witness)


def _naturality_cases(ctx: Context) -> Iterator[Case]:
    for a, b in (("circle", "circle"), ("rp2", "circle")):
        X, Y = builtin(a), builtin(b)
        P = _space(f"{a}*{b}")
        px, py = projections(X, Y, P)
        for f, Z, tag in ((px, X, "pr1"), (py, Y, "pr2")):
            for n in range(1, Z.dim + 1):
                _, basis = cohomology_group(Z, n, "Z2")
                for g, bcls in enumerate(basis):
                    x = bcls.cls
                    for k in range(n + 1):
                        yield _class_case(
                            f"sq-natural:{P.name}:{tag}:H{n}g{g}:k{k}",
                            sq(k, pullback_class(f, x)),
                            pullback_class(f, sq(k, x)),
                            _sq_witness(k, pullback_class(f, x)),
                        )


# ---------------------------------------------------------------------------
# Bocksteins and coefficient maps


def suite_bockstein(ctx: Context) -> Iterator[Case]:
    for name in _corpus(ctx):
        X = _space(name)
        for n in range(X.dim + 1):
            tag = f"{name}:H{n}"
            # universal coefficients against independent oracles
            dz2 = descriptor(X, n, "Z2")
            betti = mod2_betti(X, n)
            uct = len(dz2.invariant_factors)
            yield Case(f"uct-z2:{tag}", uct == betti, betti, uct)
            hn = homology_group(X, n)
            dqz = descriptor(X, n, "QZ")
            exp = GroupDescriptor(0, hn.invariant_factors, hn.free_rank)
            yield Case(f"uct-qz:{tag}", dqz == exp, str(exp), str(dqz))
            yield from _mod2_les(X, n, tag)
            yield from _exp_les(ctx, X, n, tag)
            _, bz2 = cohomology_group(X, n, "Z2")
            for g, b in enumerate(bz2):
                x = b.cls
                if n + 1 <= X.dim:
                    yield _class_case(f"rho2-beta-sq1:{tag}:g{g}", rho2(bockstein_beta(x)), sq(1, x), _ops(("bockstein", x, "--kind", "beta"), ("rho2", bockstein_beta(x))))
                    yield _class_case(f"exp-gamma2:{tag}:g{g}", bockstein_exp(gamma2(x)), bockstein_beta(x), _ops(("bockstein", gamma2(x), "--kind", "exp")))
                    yield _class_case(f"beta2-rho2-beta:{tag}:g{g}", bockstein_beta2(x), rho2(bockstein_beta(x)), _ops(("bockstein", x, "--kind", "beta2")))
                    y = bockstein_beta2(x)
                    zero = CohomologyClass(Cochain.zero(X, n + 2, "Z2"), check=False)
                    yield _class_case(f"beta2-squared:{tag}:g{g}", bockstein_beta2(y), zero, _ops(("bockstein", y, "--kind", "beta2")))
                    rng = ctx.rng("lift", tag, g)
                    lift = x.representative.lift() + random_cochain(rng, X, n, "Z", 0.5).scale(2)
                    yield _class_case(f"beta-lift-independent:{tag}:g{g}", bockstein_beta(x, lift=lift), bockstein_beta(x), _ops(("bockstein", CohomologyClass(lift, check=False), "--kind", "beta")))
            _, bz = cohomology_group(X, n, "Z")
            for g, b in enumerate(bz):
                x = b.cls
                for k in (1, 3, 5):
                    if n + k > X.dim:
                        continue
                    yield _class_case(
                        f"rho2-sqz:{tag}:g{g}:k{k}",
                        rho2(sq_integral(k, x)),
                        sq(k, rho2(x)),
                        _ops(("sq-int", x, "--k", k), ("rho2", sq_integral(k, x))),
                    )
                    two = sq_integral(k, x).scale(2)
                    yield Case(f"sqz-two-torsion:{tag}:g{g}:k{k}", two.is_zero(), "zero", _coords(two))
            if bz:
                x = bz[0].cls
                for k in (0, 2, 4):
                    try:
                        sq_integral(k, x)
                        yield Case(f"sqz-even-rejected:{tag}:k{k}", False, "EvenSquareError", "accepted", _ops(("sq-int", x, "--k", k))())
                    except EvenSquareError as exc:
                        yield Case(f"sqz-even-rejected:{tag}:k{k}", True, "EvenSquareError", str(exc))
    yield from _coefficient_naturality(ctx)


def _mod2_les(X, n: int, tag: str) -> Iterator[Case]:
    """0 -> H^n(Z)/2 -> H^n(Z/2) -> H^{n+1}(Z)[2] -> 0 via rho2 and beta."""
    _, bz = cohomology_group(X, n, "Z")
    _, bz2 = cohomology_group(X, n, "Z2")
    dim2 = len(bz2)
    even = [b for b in bz if b.kind == "free" or b.order % 2 == 0]
    odd = [b for b in bz if b.kind == "torsion" and b.order % 2]
    images = [_bit_vector(rho2(b.cls)) for b in even]
    r_rho = _f2_rank(images, dim2)
    yield Case(f"les-mod2:ker-rho2=im-2:{tag}", r_rho == len(even) and all(rho2(b.cls).is_zero() for b in odd), len(even), r_rho)
    beta_vecs = []
    ok_torsion = True
    for b in bz2:
        y = bockstein_beta(b.cls)
        vec = _two_torsion_vector(y) if n + 1 <= X.dim else []
        if vec is None:
            ok_torsion = False
            continue
        beta_vecs.append(vec)
    width = len(beta_vecs[0]) if beta_vecs else 0
    r_beta = _f2_rank(beta_vecs, width)
    composite = all(bockstein_beta(rho2(b.cls)).is_zero() for b in bz)
    yield Case(f"les-mod2:ker-beta=im-rho2:{tag}", composite and ok_torsion and r_beta == dim2 - r_rho, dim2 - r_rho, r_beta)
    top = descriptor(X, n + 1, "Z") if n + 1 <= X.dim else GroupDescriptor()
    two_rank = sum(1 for d in top.invariant_factors if d % 2 == 0)
    yield Case(f"les-mod2:im-beta=ker-2:{tag}", r_beta == two_rank, two_rank, r_beta)


def _exp_les(ctx: Context, X, n: int, tag: str) -> Iterator[Case]:
    """H^n(Z) -> H^n(Q) -> H^n(Q/Z) -> H^{n+1}(Z) -> H^{n+1}(Q)."""
    _, bz = cohomology_group(X, n, "Z")
    free = [b.cls for b in bz if b.kind == "free"]
    qdim = descriptor(X, n, "Q").free_rank
    rational = [to_rational(z).coordinates() for z in free]
    rank = _rank_q(rational, qdim)
    in_kernel = all(rational_to_qz(to_rational(z)).is_zero() for z in free)
    primitive_ok = all(not rational_to_qz(to_rational(z).scale(Fraction(1, p))).is_zero() for z in free for p in (2, 3))
    yield Case(f"les-exp:im-Z=ker-QZ:{tag}", in_kernel and primitive_ok and rank == qdim, qdim, rank)
    _, bq = cohomology_group(X, n, "QZ")
    rng = ctx.rng("les-exp", tag)
    ok_div = True
    for b in bq:
        if b.kind == "divisible":
            u = b.cls.representative.scale(Fraction(rng.randint(1, 11), 12)).to_ring("QZ")
            ok_div = ok_div and bockstein_exp(CohomologyClass(u, check=False)).is_zero()
    torsion_gens = [b for b in bq if b.kind == "torsion"]
    top = descriptor(X, n + 1, "Z") if n + 1 <= X.dim else GroupDescriptor()

    vecs = []
    ok_free = True
    if n + 1 <= X.dim:
        slots = engine_for(X).slots(n + 1, "Z")
        orders = [o for k, _, o in slots if k != "f"]
        for b in torsion_gens:
            y = bockstein_exp(b.cls)
            coords = y.coordinates()
            ok_free = ok_free and all(c == 0 for (k, _, _), c in zip(slots, coords) if k == "f")
            vecs.append([int(c) for (k, _, _), c in zip(slots, coords) if k != "f"])
        order = _subgroup_order(vecs, orders)
    else:
        order = 1
    source_order = 1
    for b in torsion_gens:
        source_order *= b.order
    target_order = top.torsion_order
    yield Case(f"les-exp:ker-beta=im-Q:{tag}", ok_div and order == source_order, source_order, order)
    yield Case(f"les-exp:im-beta=torsion:{tag}", ok_free and order == target_order, target_order, order)


def _rank_q(vectors, width) -> int:
    if not vectors or not width:
        return 0
    den = 1
    for v in vectors:
        for c in v:
            den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
    dense = [[int(Fraction(vectors[j][i]) * den) for j in range(len(vectors))] for i in range(width)]
    return rational_rank(SparseIntMatrix.from_dense(dense, cols=len(vectors)))


def _gcd(a, b):

    return gcd(a, b)


def _coefficient_naturality(ctx: Context) -> Iterator[Case]:
    X, Y = builtin("rp2"), builtin("circle")
    P = _space("rp2*circle")
    px, _ = projections(X, Y, P)
    for n in range(X.dim + 1):
        for g, b in enumerate(cohomology_group(X, n, "Z")[1]):
            x = b.cls
            yield _class_case(f"natural:rho2:{P.name}:H{n}g{g}", rho2(pullback_class(px, x)), pullback_class(px, rho2(x)), _ops(("rho2", pullback_class(px, x))))
        for g, b in enumerate(cohomology_group(X, n, "Z2")[1]):
            x = b.cls
            yield _class_case(f"natural:gamma2:{P.name}:H{n}g{g}", gamma2(pullback_class(px, x)), pullback_class(px, gamma2(x)), _ops(("gamma2", pullback_class(px, x))))
            yield _class_case(f"natural:beta:{P.name}:H{n}g{g}", bockstein_beta(pullback_class(px, x)), pullback_class(px, bockstein_beta(x)), _ops(("bockstein", pullback_class(px, x), "--kind", "beta")))


# ---------------------------------------------------------------------------
# refined operations


def _diff_witness(op: str, x: DiffCocycle, *flags, check: tuple | None = None) -> Callable[[], dict]:
    def make():
        w = {"input": diff_to_json(x), "replay": [_argv("diff", op, *flags, "--in", _diff_arg(x))]}
        if check:
            w["check"] = {"field": check[0], "value": check[1]}
        return w

    return make


def _refined_then_rho2(x: DiffCocycle, k: int, y: DiffCocycle) -> Callable[[], dict]:
    def make():
        return {
            "input": diff_to_json(x),
            "replay": [_argv("diff", "refined-sq", "--k", k, "--in", _diff_arg(x)), _argv("operation", "rho2", "--in", _cochain_arg(y.c))],
        }

    return make


def _diff_equal_case(cid: str, lhs: DiffCocycle, rhs: DiffCocycle, expected: str = "equal", sources: tuple = ()) -> Case:
    """``sources`` holds argv that rebuild lhs and rhs; when a side fails to be
    D-closed the witness replays its construction instead of the comparison,
    since a non-closed triple is not valid input."""
    ok = equal(lhs, rhs)
    witness = None
    if not ok:
        for side, argv in zip((lhs, rhs), sources):
            if not side.is_closed():
                witness = {"replay": [_argv(*argv)], "check": {"field": "diagnostics.closed", "value": False}}
                break
        else:
            witness = {
                "a": diff_to_json(lhs),
                "b": diff_to_json(rhs),
                "replay": [_argv("diff", "equal", "--a", _diff_arg(lhs), "--b", _diff_arg(rhs))],
                "check": {"field": "equal", "value": False},
            }
    return Case(cid, ok, expected, "equal" if ok else "different", witness)


def _refined_inputs(ctx: Context) -> list[tuple[str, DiffCocycle]]:
    names = [n for n in _corpus(ctx) if n != "point"]
    out = []
    for name in names:
        X = _space(name)
        for m in range(1, X.dim + 1):
            for label, x in generator_diff_cocycles(X, m):
                out.append((f"{name}:m{m}:{label}", x))
    rng = ctx.rng("refined-random")
    for t in range(100):
        X = _space(names[t % len(names)])
        m = rng.randint(1, X.dim)
        out.append((f"{X.name}:m{m}:random{t:03d}", random_diff_cocycle(rng, X, m)))
    return out


def suite_refined(ctx: Context) -> Iterator[Case]:
    inputs = _refined_inputs(ctx)
    for label, x in inputs:
        X, m = x.complex, x.degree
        for k in (1, 3, 5):
            if m + k - 1 > X.dim and k - 1 <= m:
                continue
            y = refined_sq(k, x)
            base = f"{label}:k{k}"
            ok = not R(y).nonzero()
            yield Case(f"flat:{base}", ok, "R = 0", "R = 0" if ok else "nonzero", None if ok else _diff_witness("refined-sq", x, "--k", k, check=("diagnostics.flat", False))())
            yield Case(f"closed:{base}", y.is_closed(), "D-closed", "D-closed" if y.is_closed() else "not closed", None if y.is_closed() else _diff_witness("refined-sq", x, "--k", k, check=("diagnostics.closed", False))())
            two = y.scale(2)
            ok = is_trivial(two)
            yield Case(f"two-torsion:{base}", ok, "trivial", "trivial" if ok else "nontrivial", None if ok else _diff_witness("refined-sq", x, "--k", k, check=("diagnostics.two_torsion", False))())
            Ix = I(x)
            yield _class_case(f"rho-hat:{base}", rho2(I(y)), sq(k, rho2(Ix)), _refined_then_rho2(x, k, y))
            yield _class_case(f"I-refines:{base}", I(y), sq_integral(k, Ix), _diff_witness("refined-sq", x, "--k", k), field="diagnostics.I")
            if sq(k - 1, rho2(Ix)).is_zero():
                ok = is_trivial(y)
                yield Case(f"finiteness:{base}", ok, "trivial", "trivial" if ok else "nontrivial", None if ok else _diff_witness("refined-sq", x, "--k", k, check=("diagnostics.trivial", False))())
    # linearity on pairs of the same degree
    by_key: dict = {}
    for label, x in inputs:
        by_key.setdefault((x.complex.name, x.degree), []).append((label, x))
    for key in sorted(by_key):
        group = by_key[key]
        rng = ctx.rng("linear", *key)
        pairs = [(group[i], group[j]) for i in range(len(group)) for j in range(i + 1, len(group))]
        rng.shuffle(pairs)
        for (la, xa), (lb, xb) in pairs[:4]:
            X, m = xa.complex, xa.degree
            for k in (1, 3):
                if m + k - 1 > X.dim:
                    continue
                lhs = refined_sq(k, xa + xb)
                rhs = refined_sq(k, xa) + refined_sq(k, xb)
                yield _diff_equal_case(f"linear:{la}+{lb.split(':')[-1]}:k{k}", lhs, rhs)
    # refined Adem relations with odd a, b; higher instances need room above
    adem_inputs = [(l, x) for l, x in inputs if "random" not in l]
    for name in ("rp(5)", "rp2*rp2"):
        if name in _corpus(ctx):
            continue
        X = _space(name)
        for m in (1, 2):
            adem_inputs += [(f"{name}:m{m}:{lab}", x) for lab, x in generator_diff_cocycles(X, m)]
    for label, x in adem_inputs:
        X, m = x.complex, x.degree
        for a, b in ((1, 1), (1, 3), (3, 3), (3, 5), (1, 5)):
            if a >= 2 * b or m + a + b - 1 > X.dim:
                continue
            lhs = refined_sq(a, refined_sq(b, x))
            rhs = DiffCocycle.zero(X, m + a + b)
            for c in range(1, a // 2 + 1, 2):
                top, bottom = b - c - 1, a - 2 * c
                if 0 <= bottom <= top and comb(top, bottom) % 2:
                    rhs = rhs + refined_sq(a + b - c, refined_sq(c, x))
            yield _diff_equal_case(f"adem:{label}:Sq{a}Sq{b}", lhs, rhs)
    # even squares have no refinement
    label, x = inputs[0]
    try:
        refined_sq(2, x)
        yield Case("even-rejected:k2", False, "EvenSquareError", "accepted", _diff_witness("refined-sq", x, "--k", 2)())
    except EvenSquareError as exc:
        yield Case("even-rejected:k2", True, "EvenSquareError", str(exc))
    # naturality along a projection
    X, Y = builtin("rp2"), builtin("circle")
    P = _space("rp2*circle")
    px, _ = projections(X, Y, P)
    for m in (1, 2):
        for lab, x in generator_diff_cocycles(X, m):
            for k in (1,):
                yield _diff_equal_case(f"natural:{P.name}:m{m}:{lab}:k{k}", refined_sq(k, pullback_diff(px, x)), pullback_diff(px, refined_sq(k, x)))


# ---------------------------------------------------------------------------
# squaring and trapezoid


def suite_squaring(ctx: Context) -> Iterator[Case]:
    w = winding_circle()
    sq_hat = refined_sq(1, w)
    square = dd_power(w, 2)
    yield _diff_equal_case(
        "winding:square-equals-refined",
        square,
        sq_hat,
        sources=(("diff", "dd-power", "--m", 2, "--in", _diff_arg(w)), ("diff", "refined-sq", "--k", 1, "--in", _diff_arg(w))),
    )

    hol = [format_coefficient(v) for v in holonomy(sq_hat)]
    yield Case("winding:holonomy", hol == ["1/2"], ["1/2"], hol, None if hol == ["1/2"] else _diff_witness("refined-sq", w, "--k", 1, check=("diagnostics.holonomy", hol[0] if len(hol) == 1 else hol))())
    hol2 = [format_coefficient(v) for v in holonomy(square)] if not square.omega.nonzero() else "not flat"
    yield Case("winding:square-holonomy", hol2 == ["1/2"], ["1/2"], hol2, None if hol2 == ["1/2"] else _diff_witness("dd-power", w, "--m", 2, check=("diagnostics.flat", False) if hol2 == "not flat" else ("diagnostics.holonomy", hol2[0] if len(hol2) == 1 else hol2))())
    T = builtin("torus")
    for k in range(-2, 6):
        x = line_bundle(T, k)
        y = refined_sq(1, x)
        nontrivial = not is_trivial(y)
        expected = k % 2 == 1
        yield Case(f"chern:torus:k{k}", nontrivial == expected, "nontrivial" if expected else "trivial", "nontrivial" if nontrivial else "trivial", None if nontrivial == expected else _diff_witness("refined-sq", x, "--k", 1, check=("diagnostics.trivial", not nontrivial))())
    names = [n for n in _corpus(ctx) if n != "point"]
    rng = ctx.rng("trapezoid")
    for name in names:
        X = _space(name)
        for m in (1, 3):
            if m > X.dim:
                continue
            inputs = generator_diff_cocycles(X, m) + [(f"random{s}", random_diff_cocycle(rng, X, m)) for s in range(2)]
            for label, x in inputs:
                rep = checks.trapezoid_check(X, x)
                cid = f"trapezoid:{name}:m{m}:{label}"
                ok_a, ok_b = rep["I_vanishes"], rep["flat_comparison"]
                wit_a = None if ok_a else _diff_witness("trapezoid", x, check=("diagnostics.I_vanishes", False))()
                wit_b = None if ok_b else _diff_witness("trapezoid", x, check=("diagnostics.flat_comparison", False))()
                yield Case(f"{cid}:I", ok_a, "I(d) = 0", "I(d) = 0" if ok_a else "I(d) != 0", wit_a)
                yield Case(f"{cid}:flat", ok_b, "d - a(eta) trivial", "trivial" if ok_b else "nontrivial", wit_b)
    x = line_bundle(T, 1)
    try:
        checks.trapezoid_check(T, x)
        yield Case("trapezoid:even-degree-rejected", False, "DegreeError", "accepted")
    except DegreeError as exc:
        yield Case("trapezoid:even-degree-rejected", True, "DegreeError", str(exc))


# ---------------------------------------------------------------------------
# exactness, products and commutativity


def suite_exactness(ctx: Context) -> Iterator[Case]:
    names = [n for n in _corpus(ctx) if n != "point"] + ["point"]
    for name in names:
        X = _space(name)
        for m in range(1, 5):
            rep = checks.exactness_check(X, m, seed=ctx.seed)
            for c in rep["cases"]:
                yield Case(f"diamond:{c['id']}", c["ok"], c["expected"], c["actual"], c["witness"])
    rng = ctx.rng("closure")
    for t in range(30):
        X = _space(names[t % (len(names) - 1)])
        p = rng.randint(1, X.dim)
        q = rng.randint(1, X.dim)
        x = random_diff_cocycle(rng, X, p)
        y = random_diff_cocycle(rng, X, q)
        prod_ = db_cup(x, y)
        ok = prod_.is_closed()
        wit = None if ok else {
            "replay": [_argv("diff", "db-cup", "--a", _diff_arg(x), "--b", _diff_arg(y))],
            "check": {"field": "diagnostics.closed", "value": False},
        }
        yield Case(f"db-cup-closed:{t:03d}:{X.name}:p{p}q{q}", ok, "D-closed", "D-closed" if ok else "not closed", wit)
        c = random_cochain(rng, X, p, "Z", 0.4)
        h = random_cochain(rng, X, p - 1, "Q", 0.4)
        w = random_cochain(rng, X, p, "Q", 0.4)
        dd = differential(*differential(c, h, w))
        yield Case(f"DD-zero:{t:03d}:{X.name}:p{p}", not any(part.nonzero() for part in dd))
        sign = -1 if (p * q) % 2 else 1
        yield _diff_equal_case(
            f"graded-commutative:{t:03d}:{X.name}:p{p}q{q}",
            prod_,
            db_cup(y, x).scale(sign),
            sources=(("diff", "db-cup", "--a", _diff_arg(x), "--b", _diff_arg(y)), ("diff", "db-cup", "--a", _diff_arg(y), "--b", _diff_arg(x))),
        )
    for t in range(10):
        X = _space(names[t % (len(names) - 1)])
        x = random_diff_cocycle(rng, X, 1)
        for k in (1, 2, 3):
            p = dd_power(x, k)

            ok = R(p) == curvature_power(x.omega, k)
            yield Case(f"dd-power-curvature:{t:03d}:{X.name}:m{k}", ok, "R(x^m) = R(x)^m", "equal" if ok else "different", None if ok else _diff_witness("dd-power", x, "--m", k)())
        yield _diff_equal_case(f"dd-power-one:{t:03d}:{X.name}", dd_power(x, 1), x)


def suite_kunneth(ctx: Context) -> Iterator[Case]:
    pairs = [("circle", "circle"), ("rp2", "circle"), ("rp2", "rp2"), ("rp2", "point"), ("torus", "point")]
    for a, b in pairs:
        X, Y = builtin(a), builtin(b)
        for m in range(1, 5):
            rep = checks.kunneth_check(X, Y, m)
            exp = [rep["predicted"]["flat_part"]["text"], rep["predicted"]["integral_image"]["text"]]
            act = [rep["direct"]["flat_part"]["text"], rep["direct"]["integral_image"]["text"]]
            wit = None if rep["ok"] else {"report": rep, "replay": [_argv("diff", "profile", "--space", f"{a}*{b}", "--deg", m)]}
            yield Case(f"kunneth:{a}*{b}:m{m}", rep["ok"], exp, act, wit)
    for name in ("point", "circle", "rp2"):
        rep = checks.bz2_kunneth_check(builtin(name), 1, 4)
        wit = None if rep["ok"] else {"report": rep, "replay": [_argv("cohomology", "--space", f"{name}*rp(4)[2]", "--deg", 1, "--ring", "QZ")]}
        yield Case(f"bz2:{name}:n1:N4", rep["ok"], rep["predicted"]["text"], rep["direct"]["text"], wit)
    try:
        checks.bz2_kunneth_check(builtin("point"), 2, 4)
        yield Case("bz2:truncation-too-small-rejected", False, "ValueError", "accepted")
    except ValueError as exc:
        yield Case("bz2:truncation-too-small-rejected", True, "ValueError", str(exc))


# ---------------------------------------------------------------------------
# stability


def suspend_cochain(u: Cochain, SX) -> Cochain:
    """Cochain on the suspension: u(tau) on tau + north, zero elsewhere.

    For a reduced cocycle this represents the image under the suspension
    isomorphism H^n(X) -> H^{n+1}(SX).
    """
    X = u.complex
    north = X.vertex_count
    data = {}
    for k, v in enumerate(u.values):
        if v:
            tau = X.simplices(u.degree)[k]
            data[tuple(tau) + (north,)] = v
    return Cochain.from_dict(SX, u.degree + 1, u.ring, data)


def suite_stability(ctx: Context) -> Iterator[Case]:
    names = [n for n in _corpus(ctx) if "*" not in n] + ["circle*circle"]
    for name in names:
        X = _space(name)
        SX = _space(f"S({name})")
        for n in range(1, X.dim + 1):
            _, basis = cohomology_group(X, n, "Z2")
            images = [CohomologyClass(suspend_cochain(b.cls.representative, SX), check=False) for b in basis]
            dim_target = len(descriptor(SX, n + 1, "Z2").invariant_factors)
            rank = _f2_rank([_bit_vector(y) for y in images], dim_target)
            yield Case(f"suspension-iso:{name}:H{n}", rank == len(basis) == dim_target, len(basis), [rank, dim_target])
            for g, b in enumerate(basis):
                x = b.cls
                for k in range(n + 1):
                    lhs = sq(k, images[g])
                    rhs = CohomologyClass(suspend_cochain(sq(k, x).representative, SX), check=False)
                    yield _class_case(f"stable:{name}:H{n}g{g}:k{k}", lhs, rhs, _sq_witness(k, images[g]))
            _, bz = cohomology_group(X, n, "Z")
            for g, b in enumerate(bz):
                x = b.cls
                sx = CohomologyClass(suspend_cochain(x.representative, SX), check=False)
                for k in (1, 3):
                    if n + k > X.dim:
                        continue
                    lhs = sq_integral(k, sx)
                    rhs = CohomologyClass(suspend_cochain(sq_integral(k, x).representative, SX), check=False)
                    yield _class_case(f"stable-integral:{name}:H{n}g{g}:k{k}", lhs, rhs, _ops(("sq-int", sx, "--k", k)))


# ---------------------------------------------------------------------------
# driver


SUITES: dict[str, Callable[[Context], Iterator[Case]]] = {
    "linalg": suite_linalg,
    "classical-sq": suite_classical_sq,
    "bockstein": suite_bockstein,
    "refined": suite_refined,
    "squaring": suite_squaring,
    "kunneth": suite_kunneth,
    "exactness": suite_exactness,
    "stability": suite_stability,
}

SUITE_NAMES = tuple(SUITES) + ("all",)


@dataclass
class Report:
    suite: str
    seed: int
    scale: str
    cases: list[Case] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def failed(self) -> list[Case]:
        return [c for c in self.cases if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self, with_timing: bool = False) -> dict:
        doc = {
            "suite": self.suite,
            "seed": self.seed,
            "scale": self.scale,
            "faults": active_faults(),
            "summary": {"cases": len(self.cases), "passed": len(self.cases) - len(self.failed), "failed": len(self.failed)},
            "cases": [c.to_json() for c in self.cases],
        }
        if with_timing:
            doc["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return doc


def run_suite(name: str, seed: int = 0, scale: str = "tiny", progress: Callable[[str], None] | None = None) -> Report:
    """Run one suite (or ``all``) and return a report sorted by case id."""
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {', '.join(SCALES)}")
    if name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    ctx = Context(seed, scale)
    names = list(SUITES) if name == "all" else [name]
    report = Report(name, seed, scale)
    seen = set()
    for sname in names:
        t0 = time.perf_counter()
        for case in SUITES[sname](ctx):
            cid = f"{sname}/{case.id}" if name == "all" else case.id
            if cid in seen:
                raise RuntimeError(f"duplicate case id {cid}")
            seen.add(cid)
            case.id = cid
            report.cases.append(case)
        report.timing[sname] = time.perf_counter() - t0
        if progress:
            progress(f"{sname}: {report.timing[sname]:.1f}s")
    report.cases.sort(key=lambda c: c.id)
    return report
