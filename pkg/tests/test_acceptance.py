"""Acceptance criteria, one reported line each.

All arithmetic is exact, so every comparison has tolerance zero.  Each test
records ``AC<n> PASS|FAIL`` with elapsed time against its budget; the lines
are printed in the pytest terminal summary and also when this file is run
directly with ``python3 tests/test_acceptance.py``.
"""

import json
import os
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

import conftest
from diffcoh.bundles import line_bundle, winding_circle
from diffcoh.cli import main
from diffcoh.cochains import format_coefficient
from diffcoh.cohomology import CohomologyClass, cohomology_group
from diffcoh.corpus import builtin
from diffcoh.differential import dd_power, equal, holonomy, is_trivial, refined_sq
from diffcoh.steenrod import cup
from diffcoh.suites import run_suite

SEED = 7
FAULTS = ["cup_i/1/1/1/0", "cup1/1/1/0", "cup_i/2/1/1/1"]


@contextmanager
def criterion(n: int, title: str, budget: float):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        dt = time.perf_counter() - t0
        within = dt <= budget
        if not within:
            status = "FAIL"
        line = f"AC{n} {status}: {title} | tolerance: exact | {dt:.1f}s of {budget:.0f}s budget"
        conftest.ACCEPTANCE_LINES.append(line)
        print(line)
    assert within, f"AC{n} exceeded its {budget:.0f}s budget ({dt:.1f}s)"


def suite_ok(name: str, scale: str = "tiny", seed: int = SEED):
    report = run_suite(name, seed=seed, scale=scale)
    failed = [c.id for c in report.failed]
    assert report.cases, f"suite {name} produced no cases"
    assert not failed, f"{len(failed)} failures, first: {failed[:5]}"
    return report


def ids(report, needle: str) -> list[str]:
    return [c.id for c in report.cases if needle in c.id]


def test_ac1_rp5_ring():
    with criterion(1, "rp(5): H^2 = H^4 = Z/2 and x cup x != 0 in H^4", 300):
        X = builtin("rp(5)")
        for n in (2, 4):
            desc, _ = cohomology_group(X, n, "Z")
            assert desc.free_rank == 0 and desc.invariant_factors == (2,), (n, desc)
        x = cohomology_group(X, 2, "Z")[1][0].cls
        x2 = CohomologyClass(cup(x.representative, x.representative), check=False)
        assert not x2.is_zero()
        assert x2.scale(2).is_zero()


def test_ac2_classical_sq_tiny():
    with criterion(2, "classical Steenrod suite, tiny corpus", 180):
        report = suite_ok("classical-sq")
        for tag in ("adem", "cartan", "cup-i-identity", "sq0", "sq-top", "sq-above"):
            assert ids(report, tag), f"no {tag} cases"
        assert len(ids(report, "cup-i-identity")) >= 200
        assert ids(report, "Sq1Sq1") and ids(report, "Sq1Sq2")


def test_ac2_classical_sq_full():
    with criterion(2, "classical Steenrod suite, full corpus with rp(4)", 1800):
        report = suite_ok("classical-sq", scale="full")
        assert ids(report, "rp(4)")


def test_ac3_bockstein():
    with criterion(3, "Bockstein and coefficient suite", 120):
        report = suite_ok("bockstein", scale="full")
        assert ids(report, "even")


def test_ac4_refined():
    with criterion(4, "refined operation suite", 300):
        report = suite_ok("refined", scale="full")
        assert len({c.split(":random")[1].split(":")[0] for c in ids(report, ":random")}) >= 100


def test_ac5_squaring():
    with criterion(5, "winding square, Chern-k parity, trapezoid suite", 120):
        w = winding_circle()
        sq2, ref = dd_power(w, 2), refined_sq(1, w)
        assert equal(sq2, ref)
        assert [format_coefficient(h) for h in holonomy(sq2)] == ["1/2"]
        T = builtin("torus")
        for k in range(-3, 6):
            assert is_trivial(refined_sq(1, line_bundle(T, k))) == (k % 2 == 0), k
        suite_ok("squaring", scale="full")


def test_ac6_kunneth():
    with criterion(6, "Kunneth for circle*circle, rp2*circle, rp2*rp2 and X*BZ/2", 600):
        report = suite_ok("kunneth", scale="full")
        for pair in ("circle*circle", "rp2*circle", "rp2*rp2"):
            assert len(ids(report, f"kunneth:{pair}:")) == 4, pair
        for X in ("point", "circle", "rp2"):
            assert ids(report, f"bz2:{X}:n1:N4")


def test_ac7_exactness():
    with criterion(7, "diamond exactness and refinement triples", 180):
        report = suite_ok("exactness", scale="full")
        assert ids(report, "power") and ids(report, "sq1")


def test_ac8_stability():
    with criterion(8, "Sq commutes with suspension", 60):
        suite_ok("stability", scale="full")


def _cli(*argv, env=None):
    return subprocess.run(
        [sys.executable, "-m", "diffcoh", *argv],
        capture_output=True,
        env={**os.environ, **(env or {})},
    )


def _field(doc, path: str):
    for key in path.split("."):
        doc = doc[key]
    return doc


def _replay(witness, tmp: Path):
    out = tmp / "replay.json"
    for argv in witness["replay"]:
        if out.exists():
            out.unlink()
        main([*argv, "--out", str(out)])
    return json.loads(out.read_text())


def test_ac9_determinism_and_replay(tmp_path):
    with criterion(9, "byte-identical reports and replayable fault witnesses", 600):
        args = ["verify", "--suite", "all", "--scale", "tiny", "--seed", str(SEED)]
        first = _cli(*args, env={"DIFFCOH_CACHE": str(tmp_path / "c1")})
        second = _cli(*args, "--no-cache")
        assert first.returncode == 0, first.stderr.decode()[-2000:]
        assert first.stdout == second.stdout
        for fault in FAULTS:
            run = _cli("--inject-fault", fault, *args)
            assert run.returncode == 1, fault
            doc = json.loads(run.stdout)
            assert doc["faults"] == [fault]
            failed = [c for c in doc["cases"] if c["status"] == "fail"]
            assert failed
            for case in failed:
                w = case["witness"]
                assert w and w["replay"] and w.get("check"), case["id"]
                got = _replay(w, tmp_path)
                assert _field(got, w["check"]["field"]) == w["check"]["value"], case["id"]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", *sys.argv[1:]]))
