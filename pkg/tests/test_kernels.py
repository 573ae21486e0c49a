import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffcoh import _accel, _kernels_py
from diffcoh.io import space
from diffcoh.steenrod import interval_table

compiled = pytest.importorskip("diffcoh._kernels", reason="compiled kernels not built")

entries = st.one_of(st.sampled_from([1, -1, 2, -3]), st.integers(-(2**62), 2**62).filter(bool))


@st.composite
def sparse_matrices(draw, big=False):
    nrows = draw(st.integers(0, 12))
    ncols = draw(st.integers(1, 12))
    vals = entries if big else st.sampled_from([1, -1, 1, -1, 2, -2, 3])
    rows = {}
    for r in range(nrows):
        cols = draw(st.sets(st.integers(0, ncols - 1), max_size=ncols))
        rows[r] = {c: draw(vals) for c in sorted(cols)}
    return rows


@given(sparse_matrices())
def test_reduce_level_agrees(rows):
    assert compiled.reduce_level(rows) == _kernels_py.reduce_level(rows)


@given(sparse_matrices(big=True))
@settings(max_examples=60)
def test_reduce_level_overflow_falls_back(rows):
    assert compiled.reduce_level(rows) == _kernels_py.reduce_level(rows)


def test_reduce_level_result_shape():
    steps, rest = _kernels_py.reduce_level({0: {0: 1, 1: 2}, 1: {0: 1, 1: 4}})
    assert steps == [(0, 0, 1, [(1, 1)], [(1, 2)])]
    assert rest == {1: {1: 2}}


def _cup_case(X, p, q, i, u, v, modulus):
    return (interval_table(p, q, i), X.simplices(p + q - i), (X.index(p), X.index(q)), u, v, modulus)


@given(st.randoms(use_true_random=False), st.sampled_from(["torus", "rp2", "rp3", "rp2*circle"]), st.sampled_from([0, 2]))
def test_cup_eval_agrees(rnd, name, modulus):
    X = space(name)
    p, q = rnd.randint(0, X.dim), rnd.randint(0, X.dim)
    i = rnd.randint(0, min(p, q))
    if p + q - i > X.dim:
        return
    u = [rnd.randint(-3, 3) for _ in range(X.count(p))]
    v = [rnd.randint(-3, 3) for _ in range(X.count(q))]
    args = _cup_case(X, p, q, i, u, v, modulus)
    assert compiled.cup_table_eval(*args) == _kernels_py.cup_table_eval(*args)


@pytest.mark.parametrize("u0", [Fraction(1, 2), 2**70, 2**62])
def test_cup_eval_fallbacks(u0):
    X = space("torus")
    u = [u0] + [1] * (X.count(1) - 1)
    v = [3] * X.count(1)
    args = _cup_case(X, 1, 1, 0, u, v, 0)
    assert compiled.cup_table_eval(*args) == _kernels_py.cup_table_eval(*args)


@pytest.mark.skipif(os.environ.get("DIFFCOH_PURE_PYTHON") == "1", reason="pure-Python run requested")
def test_backend_selection():
    assert _accel.backend_name() == "compiled"
    env = {**os.environ, "DIFFCOH_PURE_PYTHON": "1"}
    out = subprocess.run(
        [sys.executable, "-c", "from diffcoh._accel import backend_name; print(backend_name())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
