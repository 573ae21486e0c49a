import json
import pathlib
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diffcoh.bundles import line_bundle
from diffcoh.cochains import Cochain, CochainError
from diffcoh.cohomology import cohomology_group
from diffcoh.complexes import product
from diffcoh.corpus import UnknownSpaceError, builtin
from diffcoh.differential import DiffCocycleError, equal
from diffcoh.io import (
    SpaceSyntaxError,
    class_to_json,
    cochain_from_json,
    cochain_to_json,
    complex_ref,
    diff_from_json,
    diff_to_json,
    resolve_complex,
    space,
)
from diffcoh.sampling import random_diff_cocycle
from sampling_helpers import random_values

EXPRESSIONS = ["rp2*circle", "S(circle)", "(circle*circle)*point", "S(S(point))", "rp(4)", "torus*circle[2]"]


@pytest.mark.parametrize("expr", EXPRESSIONS)
def test_expression_names_rebuild(expr):
    X = space(expr)
    assert space(X.name).content_hash == X.content_hash
    assert complex_ref(X) == X.name


def test_skeleton_suffix():
    full, cut = space("torus*circle"), space("torus*circle[2]")
    assert full.dim == 3 and cut.dim == 2
    assert cut.simplices(2) == full.simplices(2)


@pytest.mark.parametrize("bad", ["rp2*", "S(circle", "circle)", "circle[2]", "3torus", "rp2 circle"])
def test_expression_syntax_errors(bad):
    with pytest.raises(SpaceSyntaxError):
        space(bad)


def test_unknown_tag():
    with pytest.raises(UnknownSpaceError):
        space("lens(5)")


def test_inline_complex_ref():
    X = builtin("torus")
    Y = product(X, builtin("circle")).renamed("nameless")
    ref = complex_ref(Y)
    assert isinstance(ref, dict)
    assert resolve_complex(ref).content_hash == Y.content_hash


def test_complex_file(tmp_path):
    X = builtin("rp2")
    path = tmp_path / "x.json"
    path.write_text(json.dumps(X.to_json()))
    assert resolve_complex(str(path)).content_hash == X.content_hash
    with pytest.raises(FileNotFoundError):
        resolve_complex(str(tmp_path / "missing.json"))


@given(st.randoms(use_true_random=False), st.sampled_from(["circle", "rp2", "torus*circle"]), st.sampled_from(["Z", "Z2", "Q", "QZ"]))
def test_cochain_round_trip(rnd, name, ring):
    X = space(name)
    n = rnd.randint(0, X.dim)
    u = Cochain(X, n, ring, random_values(rnd, X.count(n), ring))
    doc = json.loads(json.dumps(cochain_to_json(u)))
    assert cochain_from_json(doc) == u
    assert cochain_from_json(cochain_to_json(u, with_complex=False), X) == u


@pytest.mark.parametrize(
    "doc, msg",
    [
        ([], "must be an object"),
        ({"ring": "Z", "degree": 0}, "needs 'complex'"),
        ({"complex": "circle", "ring": "R", "degree": 0}, "ring"),
        ({"complex": "circle", "ring": "Z", "degree": -1}, "degree"),
        ({"complex": "circle", "ring": "Z", "degree": 1, "values": [[[0, 1], "1"], [[0, 1], "2"]]}, "duplicate"),
        ({"complex": "circle", "ring": "Z", "degree": 1, "values": [[[0, 3], "1"]]}, "values"),
        ({"complex": "circle", "ring": "Z", "degree": 1, "values": [[0, "1"]]}, r"values\[0\]"),
    ],
)
def test_cochain_rejects(doc, msg):
    with pytest.raises(CochainError, match=msg):
        cochain_from_json(doc)


def test_coefficients_are_strings():
    X = builtin("circle")
    u = Cochain(X, 1, "Q", [Fraction(1, 3), 0, Fraction(-5, 2)])
    assert cochain_to_json(u)["values"] == [[[0, 1], "1/3"], [[1, 2], "-5/2"]]


def test_class_document():
    x = cohomology_group(builtin("rp2"), 1, "Z2")[1][0].cls
    doc = class_to_json(x)
    assert doc["coordinates"] == ["1"] and doc["zero"] is False and doc["ring"] == "Z2"


@given(st.randoms(use_true_random=False), st.sampled_from(["circle", "rp2", "torus", "rp2*circle"]))
def test_diff_round_trip(rnd, name):
    X = space(name)
    x = random_diff_cocycle(rnd, X, rnd.randint(1, X.dim))
    y = diff_from_json(json.loads(json.dumps(diff_to_json(x))))
    assert (y.c, y.h, y.omega) == (x.c, x.h, x.omega)
    assert equal(x, y)


def test_diff_load_validation():
    doc = diff_to_json(line_bundle(builtin("torus"), 1))
    for field in ("complex", "degree", "c", "h", "omega"):
        broken = {k: v for k, v in doc.items() if k != field}
        with pytest.raises(DiffCocycleError, match=field):
            diff_from_json(broken)
    bad = json.loads(json.dumps(doc))
    bad["h"]["values"] = [[[0, 1], "1"]]
    with pytest.raises(DiffCocycleError, match="delta h != omega - c"):
        diff_from_json(bad)
    bad = json.loads(json.dumps(doc))
    bad["h"]["degree"] = 2
    with pytest.raises(DiffCocycleError, match="degree 1"):
        diff_from_json(bad)


def test_data_files_load():
    root = pathlib.Path(__file__).resolve().parent.parent / "data"
    docs = sorted(root.glob("*.json"))
    assert docs
    for p in docs:
        doc = json.loads(p.read_text())
        if "c" in doc:
            assert diff_from_json(doc).is_closed()
        else:
            assert resolve_complex(str(p)).dim >= 1
