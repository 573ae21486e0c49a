"""Structural verifiers: Kunneth, the BZ/2 product formula, diamond exactness
and the squaring comparison.

Each returns a plain dict report with an ``ok`` flag so the CLI can
serialize it directly.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .cochains import Cochain, format_coefficient
from .cohomology import (
    CohomologyClass,
    bockstein_exp,
    cohomology_group,
    descriptor,
    primitive,
)
from .complexes import SimplicialComplex, product
from .corpus import builtin
from .differential import (
    DegreeError,
    DiffCocycle,
    I,
    J_SIGN,
    R,
    a,
    curvature_power,
    dd_power,
    diff_profile,
    equal,
    holonomy,
    is_trivial,
    j,
    refined_sq,
)
from .groups import GroupDescriptor, direct_sum, tensor, tor
from .io import diff_to_json
from .sampling import random_class, random_cochain, random_diff_cocycle
from .steenrod import active_faults, cup_power, sq_integral


def _desc(G: GroupDescriptor) -> dict:
    return {**G.to_json(), "text": str(G)}


def _product_for(X: SimplicialComplex, Y: SimplicialComplex, top: int) -> SimplicialComplex:
    full = X.dim + Y.dim
    return product(X, Y, max_dim=min(full, top))


# ---------------------------------------------------------------------------
# Kunneth


def flat_kunneth_terms(X: SimplicialComplex, Y: SimplicialComplex, m: int) -> list[dict]:
    """Terms predicting H^{m-1}(X x Y; Q/Z) from the factors.

    C(X x Y; Q/Z) is chain equivalent to C(X; Q/Z) tensor C(Y; Z) with the
    second factor free, so the algebraic Kunneth theorem gives
    sum_{i+j=m-1} H^i(X;Q/Z) (x) H^j(Y) + sum_{i+j=m} Tor(H^i(X;Q/Z), H^j(Y)).
    """
    k = m - 1
    terms = []
    for i in range(0, k + 1):
        jj = k - i
        A = descriptor(X, i, "QZ")
        B = descriptor(Y, jj, "Z")
        terms.append({"term": f"H^{i}(X;Q/Z) (x) H^{jj}(Y;Z)", "group": tensor(A, B)})
    for i in range(0, k + 2):
        jj = k + 1 - i
        A = descriptor(X, i, "QZ")
        B = descriptor(Y, jj, "Z")
        terms.append({"term": f"Tor(H^{i}(X;Q/Z), H^{jj}(Y;Z))", "group": tor(A, B)})
    return terms


def integral_kunneth_terms(X: SimplicialComplex, Y: SimplicialComplex, m: int) -> list[dict]:
    terms = []
    for i in range(0, m + 1):
        terms.append({"term": f"H^{i}(X) (x) H^{m - i}(Y)", "group": tensor(descriptor(X, i, "Z"), descriptor(Y, m - i, "Z"))})
    for i in range(0, m + 2):
        terms.append({"term": f"Tor(H^{i}(X), H^{m + 1 - i}(Y))", "group": tor(descriptor(X, i, "Z"), descriptor(Y, m + 1 - i, "Z"))})
    return terms


def kunneth_check(X: SimplicialComplex, Y: SimplicialComplex, m: int) -> dict:
    """Compare the torsion and divisible invariants of the differential group
    of X x Y in degree m with the prediction from the factors."""
    P = _product_for(X, Y, m + 1)
    direct = diff_profile(P, m)
    flat_terms = flat_kunneth_terms(X, Y, m)
    int_terms = integral_kunneth_terms(X, Y, m)
    predicted_flat = direct_sum(t["group"] for t in flat_terms)
    predicted_int = direct_sum(t["group"] for t in int_terms)
    flat_ok = predicted_flat.torsion_and_divisible() == direct.flat_part.torsion_and_divisible()
    int_ok = predicted_int == direct.integral_image
    notes = []
    for i in range(0, m + 1):
        g = descriptor(X, i, "QZ").mod(2)
        if not g.is_zero:
            notes.append(f"H^{i}(X;Q/Z) (x) Z/2 = {g} (nonzero)")
    return {
        "check": "kunneth",
        "X": X.name,
        "Y": Y.name,
        "degree": m,
        "direct": {"flat_part": _desc(direct.flat_part), "integral_image": _desc(direct.integral_image)},
        "predicted": {"flat_part": _desc(predicted_flat), "integral_image": _desc(predicted_int)},
        "terms": [{"term": t["term"], "group": str(t["group"])} for t in flat_terms + int_terms if not t["group"].is_zero],
        "flat_agree": flat_ok,
        "integral_agree": int_ok,
        "notes": notes,
        "ok": flat_ok and int_ok,
    }


def two_torsion_term(X: SimplicialComplex, jdeg: int) -> GroupDescriptor:
    """2-torsion of H^j(X; Q/Z)."""
    return descriptor(X, jdeg, "QZ").n_torsion(2)


def bz2_kunneth_check(X: SimplicialComplex, n: int, N: int) -> dict:
    """Compare the flat part of degree 2n on X x rp(N) with that of X plus
    the 2-torsion summands indexed by even j < 2n."""
    if N < 2 * n + 2:
        raise ValueError(f"truncation rp({N}) too small for degree {2 * n}; need N >= {2 * n + 2}")
    P = _product_for(X, builtin(f"rp({N})"), 2 * n)
    lhs = descriptor(P, 2 * n - 1, "QZ")
    summands = [{"summand": f"flat part of degree {2 * n} on {X.name}", "group": descriptor(X, 2 * n - 1, "QZ")}]
    for jdeg in range(0, 2 * n, 2):
        summands.append({"summand": f"T2^{jdeg} = 2-torsion of H^{jdeg}(X;Q/Z)", "group": two_torsion_term(X, jdeg)})
    rhs = direct_sum(s["group"] for s in summands)
    ok = lhs.torsion_and_divisible() == rhs.torsion_and_divisible()
    return {
        "check": "bz2-kunneth",
        "X": X.name,
        "n": n,
        "N": N,
        "direct": _desc(lhs),
        "predicted": _desc(rhs),
        "summands": [{"summand": s["summand"], "group": str(s["group"])} for s in summands],
        "ok": ok,
    }


# ---------------------------------------------------------------------------
# diamond exactness


def _case(cases: list, cid: str, ok: bool, witness=None):
    """Record a case; ``witness`` is a thunk evaluated only on failure."""
    cases.append({"id": cid, "ok": bool(ok), "expected": "pass", "actual": "pass" if ok else "fail", "witness": None if ok or witness is None else witness()})


def _diff_arg(x: DiffCocycle) -> str:
    return json.dumps(diff_to_json(x), separators=(",", ":"))


def _faults() -> list:
    out = []
    for f in active_faults():
        out += ["--inject-fault", f]
    return out


def _equal_witness(x: DiffCocycle, y: DiffCocycle, value: bool):
    return lambda: {
        "a": diff_to_json(x),
        "b": diff_to_json(y),
        "replay": [_faults() + ["diff", "equal", "--a", _diff_arg(x), "--b", _diff_arg(y)]],
        "check": {"field": "equal", "value": value},
    }


def _show_witness(x: DiffCocycle, sub: str = "dd-power", flags: tuple = ("--m", "1"), check=None):
    def make():
        w = {"input": diff_to_json(x), "replay": [_faults() + ["diff", sub, *flags, "--in", _diff_arg(x)]]}
        if check is not None:
            w["check"] = {"field": check[0], "value": check[1]}
        return w

    return make


def _coords(x: CohomologyClass) -> list[str]:
    return [format_coefficient(c) for c in x.coordinates()]


def exactness_check(X: SimplicialComplex, m: int, seed: int = 0, samples: int = 3, power: int = 2) -> dict:
    """Check the exact sequences around the differential group in degree m
    and the refinement identities of the squaring operations."""
    if m < 1:
        raise DegreeError("degree must be >= 1")
    rng = random.Random(f"exactness:{X.name}:{m}:{seed}")
    cases: list = []
    tag = f"{X.name}:m{m}"

    # (i) flat classes are exactly the j-images
    _, qbasis = cohomology_group(X, m - 1, "QZ")
    for k, b in enumerate(qbasis):
        rep = b.cls.representative
        if b.kind == "divisible":
            rep = rep.scale(Fraction(1, 3)).to_ring("QZ")
        x = j(CohomologyClass(rep, check=False))
        zero = DiffCocycle.zero(X, m)
        _case(cases, f"{tag}:ker-R:gen{k}", not R(x).nonzero() and not is_trivial(x), _equal_witness(x, zero, True))
    for s in range(samples):
        u = random_class(rng, X, m - 1, "QZ")
        h = u.representative.lift()
        h = h + random_cochain(rng, X, m - 1, "Z", density=0.3).to_ring("Q")
        if m >= 2:
            h = h + random_cochain(rng, X, m - 2, "Q", density=0.3).delta()
        flat = DiffCocycle(h.delta().scale(-1).to_ring("Z"), h, Cochain.zero(X, m, "Q"))
        target = j(CohomologyClass(h.to_ring("QZ"), check=False))
        _case(cases, f"{tag}:ker-R:random{s}", equal(flat, target), _equal_witness(flat, target, False))

    # (ii) kernel of I is the image of a
    for s in range(samples):
        eta = random_cochain(rng, X, m - 1, "Q", density=0.5)
        ae = a(eta)
        _case(cases, f"{tag}:I-a:random{s}", I(ae).is_zero(), _show_witness(ae, check=("diagnostics.I", _coords(I(ae)))))
        b = random_cochain(rng, X, m - 1, "Z", density=0.5)
        x = random_diff_cocycle(rng, X, m)
        # I(y) = 0, so y must equal a(h + b)
        y = DiffCocycle(b.delta(), x.h, x.h.delta() + b.delta().to_ring("Q"))
        target = a(x.h + b.to_ring("Q"))
        _case(cases, f"{tag}:ker-I:random{s}", equal(y, target), _equal_witness(y, target, False))

    # (iii) I is onto
    _, zbasis = cohomology_group(X, m, "Z")
    for k, b in enumerate(zbasis):
        z = b.cls
        lifted = DiffCocycle.from_integral(z.representative)
        _case(cases, f"{tag}:I-onto:gen{k}", I(lifted) == z, _show_witness(lifted, check=("diagnostics.I", _coords(I(lifted)))))

    # (iv) refinement identities
    for s in range(samples):
        x = random_diff_cocycle(rng, X, m)
        p = dd_power(x, power)
        ok_i = I(p) == CohomologyClass(cup_power(x.c, power), check=False)
        ok_r = R(p) == curvature_power(x.omega, power)
        pw = ("--m", str(power))
        _case(cases, f"{tag}:power{power}:I:random{s}", ok_i, _show_witness(x, "dd-power", pw, check=("diagnostics.I", _coords(I(p)))))
        _case(cases, f"{tag}:power{power}:R:random{s}", ok_r, _show_witness(x, "dd-power", pw))
        for k in (1, 3):
            if m + k > X.dim + 1:
                continue
            y = refined_sq(k, x)
            ok_i = I(y) == sq_integral(k, I(x))
            ok_r = not R(y).nonzero()
            kf = ("--k", str(k))
            _case(cases, f"{tag}:sq{k}:I:random{s}", ok_i, _show_witness(x, "refined-sq", kf, check=("diagnostics.I", _coords(I(y)))))
            _case(cases, f"{tag}:sq{k}:R:random{s}", ok_r, _show_witness(x, "refined-sq", kf, check=("diagnostics.flat", False)))

    # j and the exponential Bockstein
    for s in range(samples):
        u = random_class(rng, X, m - 1, "QZ")
        ju = j(u)
        _case(cases, f"{tag}:I-j:random{s}", I(ju) == bockstein_exp(u).scale(J_SIGN), _show_witness(ju, check=("diagnostics.I", _coords(I(ju)))))

    return {"check": "exactness", "X": X.name, "degree": m, "cases": cases, "ok": all(c["ok"] for c in cases)}


# ---------------------------------------------------------------------------
# squaring comparison


def trapezoid_check(X: SimplicialComplex, x: DiffCocycle) -> dict:
    """Compare the square of an odd-degree cocycle with its refined square.

    d = x*x - Sq^(2n+1)(x).  (a) asks I(d) = 0.  (b) solves R(d) = delta eta
    over Q and asks that d - a(eta) be trivial.  eta is only determined up to
    rational cocycles; the dimension of that ambiguity is reported.
    """
    m = x.degree
    if m % 2 == 0:
        raise DegreeError("trapezoid comparison needs an odd-degree cocycle")
    k = m
    sq_hat = refined_sq(k, x)
    square = dd_power(x, 2)
    d = square - sq_hat
    a_ok = I(d).is_zero()
    curvature = R(d)
    eta = primitive(curvature) if curvature.nonzero() else Cochain.zero(X, 2 * m - 1, "Q")
    b_ok = eta is not None and is_trivial(d - a(eta))
    ambiguity = descriptor(X, 2 * m - 1, "Q").free_rank
    return {
        "check": "trapezoid",
        "X": X.name,
        "degree": m,
        "I_vanishes": a_ok,
        "flat_comparison": b_ok,
        "curvature_of_difference_zero": not curvature.nonzero(),
        "residual_ambiguity_dim": ambiguity,
        "square_holonomy": _holonomy_or_none(square),
        "refined_holonomy": _holonomy_or_none(sq_hat),
        "ok": a_ok and b_ok,
    }


def _holonomy_or_none(x: DiffCocycle):
    if x.omega.nonzero():
        return None
    return [str(v) for v in holonomy(x)]
