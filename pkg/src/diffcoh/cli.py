"""Command-line interface.

JSON goes to stdout and a one-line summary to stderr.  Exit codes: 0 on
success, 1 when a verification case fails, 2 for invalid input, 3 for an
unknown built-in space or missing file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import cache
from ._accel import backend_name
from .cochains import CochainError, RingError, format_coefficient
from .cohomology import (
    CohomologyClass,
    NotACocycleError,
    bockstein_beta,
    bockstein_beta2,
    bockstein_exp,
    class_from_coordinates,
    cohomology_group,
    gamma2,
    rho2,
)
from .checks import trapezoid_check
from .complexes import ComplexError
from .corpus import UnknownSpaceError
from .differential import (
    DegreeError,
    DiffCocycle,
    DiffCocycleError,
    I,
    db_cup,
    dd_power,
    diff_profile,
    equal,
    holonomy,
    is_trivial,
    is_two_torsion,
    refined_sq,
)
from .io import (
    class_to_json,
    cochain_from_json,
    cochain_to_json,
    complex_ref,
    diff_from_json,
    diff_to_json,
    load_json_file,
    resolve_complex,
)
from .linalg import DimensionError, SNFResourceError
from .steenrod import EvenSquareError, FaultSpecError, clear_table_overrides, cup, cup_i, inject_fault, sq, sq_integral
from .suites import SCALES, SUITE_NAMES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

FAULT_ENV = "DIFFCOH_FAULT"


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _document(arg: str):
    """Inline JSON (starting with '{') or a path to a JSON file."""
    text = arg.lstrip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"inline JSON: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return load_json_file(arg)


def _diff_input(arg: str) -> DiffCocycle:
    """A triple document, or the output of another ``diff`` command."""
    doc = _document(arg)
    if isinstance(doc, dict) and "complex" not in doc and isinstance(doc.get("result"), dict):
        doc = doc["result"]
    return diff_from_json(doc)


def _selector(X, n: int, ring: str, sel: str) -> CohomologyClass:
    """``gK`` picks generator K; ``a`` is g0; a comma list gives coordinates."""
    _, basis = cohomology_group(X, n, ring)
    sel = sel.strip()
    if sel == "a":
        sel = "g0"
    if sel.startswith("g") and sel[1:].isdigit():
        k = int(sel[1:])
        if k >= len(basis):
            raise InputError(f"H^{n}({X.name}; {ring}) has {len(basis)} generators; no {sel}")
        return basis[k].cls
    try:
        coords = [Fraction(c) for c in sel.split(",")]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad class selector {sel!r}") from None
    try:
        return class_from_coordinates(X, n, ring, coords)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _input_class(args, ring: str, suffix: str = "") -> CohomologyClass:
    src = getattr(args, "in" + suffix)
    if src is not None:
        u = cochain_from_json(_document(src))
        if u.ring != ring:
            if u.ring == "Z" and ring in ("Z2", "Q", "QZ"):
                u = u.to_ring(ring)
            else:
                raise RingError(f"expected a {ring} cochain, got {u.ring}")
        if not u.is_cocycle():
            raise NotACocycleError("input cochain is not a cocycle")
        return CohomologyClass(u, check=False)
    if args.space is None:
        raise InputError("give --in or --space with --deg and --class")
    X = resolve_complex(args.space)
    deg = getattr(args, "deg" + suffix)
    sel = getattr(args, "class" + suffix)
    return _selector(X, deg, ring, sel)


def _integral_lift(args):
    """An integral cochain given to ``bockstein --kind beta`` is used as the lift."""
    src = getattr(args, "in")
    if src is None:
        return None
    u = cochain_from_json(_document(src))
    return u if u.ring == "Z" else None


def _class_doc(x: CohomologyClass) -> dict:
    doc = class_to_json(x)
    doc["complex"] = complex_ref(x.complex)
    return doc


def _diff_doc(x: DiffCocycle) -> dict:
    flat = not x.omega.nonzero()
    diag = {
        "I": [format_coefficient(c) for c in I(x).coordinates()],
        "R_zero": flat,
        "flat": flat,
        "two_torsion": is_two_torsion(x),
        "trivial": is_trivial(x),
        "closed": x.is_closed(),
    }
    if flat:
        hol = holonomy(x)
        diag["holonomy"] = format_coefficient(hol[0]) if len(hol) == 1 else [format_coefficient(h) for h in hol]
    return {"result": diff_to_json(x), "diagnostics": diag}


def _emit(doc, args) -> None:
    text = json.dumps(doc, indent=2 if args.pretty else None, separators=None if args.pretty else (",", ":"))
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _say(msg: str) -> None:
    sys.stderr.write(msg + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_cohomology(args) -> int:
    X = resolve_complex(args.space)
    G, basis = cohomology_group(X, args.deg, args.ring)
    doc = {
        **G.to_json(),
        "complex": complex_ref(X),
        "degree": args.deg,
        "ring": args.ring,
        "generators": [
            {"kind": b.kind, "order": b.order, "representative": cochain_to_json(b.cls.representative, with_complex=False)}
            for b in basis
        ],
    }
    _emit(doc, args)
    _say(f"H^{args.deg}({X.name}; {args.ring}) = {G}")
    return EXIT_OK


def cmd_operation(args) -> int:
    op = args.op
    if op == "sq":
        x = _input_class(args, "Z2")
        y = sq(args.k, x)
        label = f"Sq^{args.k}"
    elif op == "sq-int":
        if args.k % 2 == 0:
            raise EvenSquareError("even Steenrod squares do not lift")
        x = _input_class(args, "Z")
        y = sq_integral(args.k, x)
        label = f"Sq_Z^{args.k}"
    elif op == "bockstein":
        ring = "QZ" if args.kind == "exp" else "Z2"
        lift = _integral_lift(args) if args.kind == "beta" else None
        x = _input_class(args, ring)
        y = bockstein_beta(x, lift=lift) if lift is not None else {"beta": bockstein_beta, "beta2": bockstein_beta2, "exp": bockstein_exp}[args.kind](x)
        label = args.kind
    elif op in ("rho2", "gamma2"):
        x = _input_class(args, "Z" if op == "rho2" else "Z2")
        y = rho2(x) if op == "rho2" else gamma2(x)
        label = op
    elif op == "cup":
        ring = args.ring
        x = _input_class(args, ring)
        x2 = _input_class(args, ring, "2")
        if args.i:
            y = CohomologyClass(cup_i(x.representative.to_ring("Z2"), x2.representative.to_ring("Z2"), args.i), check=False)
            label = f"cup_{args.i}"
        else:
            y = CohomologyClass(cup(x.representative, x2.representative), check=False)
            label = "cup"
        if not y.representative.is_cocycle():
            doc = {"op": label, "output": {"cochain": cochain_to_json(y.representative), "cocycle": False}}
            _emit(doc, args)
            _say(f"{label}: result is not a cocycle")
            return EXIT_OK
    elif op == "cup-i-identity":
        u = cochain_from_json(_document(getattr(args, "in")))
        v = cochain_from_json(_document(args.in2))
        i = args.i
        lhs = cup_i(u, v, i).delta()
        rhs = cup_i(u.delta(), v, i) + cup_i(u, v.delta(), i) + cup_i(u, v, i - 1) + cup_i(v, u, i - 1)
        defect = lhs - rhs
        _emit({"op": op, "i": i, "holds": not defect.nonzero(), "defect": cochain_to_json(defect, with_complex=False)}, args)
        _say(f"cup_{i} coboundary identity {'holds' if not defect.nonzero() else 'fails'}")
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown operation {op}")
    doc = {"op": label, "input": _class_doc(x), "output": _class_doc(y)}
    _emit(doc, args)
    _say(f"{label}: coordinates {doc['output']['coordinates']}")
    return EXIT_OK


def cmd_diff(args) -> int:
    sub = args.sub
    if sub == "profile":
        X = resolve_complex(args.space)
        if args.deg < 1:
            raise DegreeError("differential cocycles have degree >= 1")
        P = diff_profile(X, args.deg)
        doc = {"complex": complex_ref(X), "degree": args.deg, **P.to_json()}
        _emit(doc, args)
        _say(f"flat part {P.flat_part}, integral image {P.integral_image}")
        return EXIT_OK
    if sub == "equal":
        a = _diff_input(args.a)
        b = _diff_input(args.b)
        if a.degree != b.degree:
            raise DegreeError("cocycles have different degrees")
        eq = equal(a, b)
        _emit({"equal": eq}, args)
        _say("equal" if eq else "different")
        return EXIT_OK
    if sub == "trapezoid":
        x = _diff_input(getattr(args, "in"))
        rep = trapezoid_check(x.complex, x)
        _emit({"diagnostics": rep}, args)
        _say(f"trapezoid: I vanishes {rep['I_vanishes']}, flat comparison {rep['flat_comparison']}")
        return EXIT_OK
    if sub == "from-integral":
        x = _input_class(args, "Z")
        y = DiffCocycle.from_integral(x.representative)
    elif sub == "refined-sq":
        x = _diff_input(getattr(args, "in"))
        y = refined_sq(args.k, x)
    elif sub == "dd-power":
        x = _diff_input(getattr(args, "in"))
        y = dd_power(x, args.m)
    elif sub == "db-cup":
        y = db_cup(_diff_input(args.a), _diff_input(args.b))
    else:  # pragma: no cover
        raise InputError(f"unknown subcommand {sub}")
    doc = _diff_doc(y)
    _emit(doc, args)
    d = doc["diagnostics"]
    _say(f"{sub}: I={d['I']} flat={d['flat']} trivial={d['trivial']}" + (f" holonomy={d['holonomy']}" if "holonomy" in d else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    report = run_suite(args.suite, seed=args.seed, scale=args.scale, progress=_say if args.verbose else None)
    _emit(report.to_json(with_timing=args.timing), args)
    failed = report.failed
    _say(
        f"suite {args.suite} seed {args.seed} scale {args.scale}: "
        f"{len(report.cases) - len(failed)}/{len(report.cases)} passed in {time.perf_counter() - t0:.1f}s"
    )
    for c in failed[:10]:
        _say(f"  FAIL {c.id}")
    return EXIT_OK if not failed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _add_class_args(p, suffix: str = "") -> None:
    p.add_argument(f"--in{suffix}", dest=f"in{suffix}", help="cochain file or inline JSON")
    p.add_argument(f"--deg{suffix}", dest=f"deg{suffix}", type=int, default=1, help="degree of the selected class")
    p.add_argument(f"--class{suffix}", dest=f"class{suffix}", default="g0", help="gK, a (= g0), or comma-separated coordinates")


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; SUPPRESS keeps
    # the subparser from overwriting a value given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-cache", action="store_true", default=argparse.SUPPRESS, help="do not read or write the reduction cache")
    common.add_argument("--inject-fault", action="append", default=argparse.SUPPRESS, metavar="SPEC", help="drop a product-table entry, e.g. cup_i/1/1/1/0")
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS, help="indent JSON output")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write JSON to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="diffcoh", description="Exact cohomology, Steenrod squares and differential cocycles.", parents=[common])
    parser.add_argument("--version", action="version", version=f"diffcoh (backend: {backend_name()})")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("cohomology", parents=[common], help="cohomology group and generators")
    p.add_argument("--space", required=True, help="corpus tag, space expression or complex file")
    p.add_argument("--deg", type=int, required=True)
    p.add_argument("--ring", choices=("Z", "Z2", "Q", "QZ"), default="Z")
    p.set_defaults(func=cmd_cohomology)

    p = subs.add_parser("operation", parents=[common], help="apply an operation to a class")
    p.add_argument("op", choices=("sq", "sq-int", "bockstein", "cup", "rho2", "gamma2", "cup-i-identity"))
    p.add_argument("--k", type=int, default=0, help="square index")
    p.add_argument("--kind", choices=("beta", "beta2", "exp"), default="beta", help="which Bockstein")
    p.add_argument("--i", type=int, default=0, help="cup-i level (mod 2)")
    p.add_argument("--ring", choices=("Z", "Z2", "Q", "QZ"), default="Z2", help="ring for cup")
    p.add_argument("--space")
    _add_class_args(p)
    _add_class_args(p, "2")
    p.set_defaults(func=cmd_operation)

    p = subs.add_parser("diff", parents=[common], help="differential cocycle operations")
    p.add_argument("sub", choices=("refined-sq", "db-cup", "dd-power", "equal", "profile", "from-integral", "trapezoid"))
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--space")
    _add_class_args(p)
    p.set_defaults(func=cmd_diff)

    p = subs.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITE_NAMES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", choices=SCALES, default="tiny")
    p.add_argument("--timing", action="store_true", help="include per-suite timing in the report")
    p.add_argument("--verbose", action="store_true", help="progress on stderr")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("no_cache", False), ("inject_fault", None), ("pretty", False), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.no_cache:
        cache.configure(enabled=False)
    else:
        cache.configure(enabled=True)
    faults = list(args.inject_fault or [])
    if os.environ.get(FAULT_ENV):
        faults += [f for f in os.environ[FAULT_ENV].split(",") if f.strip()]
    try:
        for f in faults:
            inject_fault(f)
        return args.func(args)
    except (UnknownSpaceError, FileNotFoundError) as exc:
        _say(f"error: {_message(exc)}")
        return EXIT_RESOURCE
    except (
        InputError,
        ComplexError,
        CochainError,
        RingError,
        DimensionError,
        DegreeError,
        DiffCocycleError,
        EvenSquareError,
        FaultSpecError,
        NotACocycleError,
        ValueError,
    ) as exc:
        _say(f"error: {_message(exc)}")
        return EXIT_INPUT
    except SNFResourceError as exc:
        _say(f"error: {exc}")
        return EXIT_RESOURCE
    finally:
        if faults:
            clear_table_overrides()


def _message(exc: BaseException) -> str:
    if isinstance(exc, UnknownSpaceError):
        return f"unknown space {exc.args[0]!r}"
    return str(exc.args[0]) if exc.args else type(exc).__name__


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
