"""JSON forms of complexes, cochains, classes and differential cocycles.

A complex reference is either an inline complex object, a path to a complex
file, or a space expression built from corpus tags:

    expr   := term ("*" term)* ["[" k "]"]
    term   := tag | "S(" expr ")" | "(" expr ")"

``*`` is the staircase product, ``S(...)`` the suspension and a trailing
``[k]`` keeps only the k-skeleton of a product.  These are exactly the names
that ``product`` and ``suspension`` assign, so every complex built by the
verification suites can be named in a witness and rebuilt on replay.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from pathlib import Path

from .cochains import Cochain, CochainError, format_coefficient, parse_coefficient
from .cohomology import CohomologyClass
from .complexes import RINGS, ComplexError, SimplicialComplex, parse_complex, product, suspension
from .corpus import UnknownSpaceError, builtin
from .differential import DiffCocycle, DiffCocycleError
from .groups import GroupDescriptor


class SpaceSyntaxError(ComplexError):
    pass


_TOKEN = re.compile(r"\s*(S\(|\(|\)|\*|\[\d+\]|[A-Za-z][A-Za-z0-9_]*(?:\(\d+\))?)")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpaceSyntaxError(f"bad space expression {text!r} at column {pos + 1}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise SpaceSyntaxError(f"bad space expression {self.text!r}: expected {expected or 'a term'}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self) -> SimplicialComplex:
        X = self.term()
        factors = [X]
        while self.peek() == "*":
            self.take("*")
            factors.append(self.term())
        skel = None
        if self.peek() is not None and self.peek().startswith("["):
            skel = int(self.take()[1:-1])
        if len(factors) == 1:
            if skel is not None:
                raise SpaceSyntaxError("a skeleton suffix needs a product")
            return X
        out = factors[0]
        for k, Y in enumerate(factors[1:], start=1):
            last = k == len(factors) - 1
            out = _product(out, Y, skel if last else None)
        return out

    def term(self) -> SimplicialComplex:
        tok = self.take()
        if tok == "S(":
            X = self.expr()
            self.take(")")
            return _suspension(X)
        if tok == "(":
            X = self.expr()
            self.take(")")
            return X
        return builtin(tok)

    def parse(self) -> SimplicialComplex:
        X = self.expr()
        if self.peek() is not None:
            raise SpaceSyntaxError(f"trailing input {self.peek()!r} in {self.text!r}")
        return X


@lru_cache(maxsize=64)
def _product(X: SimplicialComplex, Y: SimplicialComplex, max_dim):
    return product(X, Y, max_dim=max_dim)


@lru_cache(maxsize=64)
def _suspension(X: SimplicialComplex):
    return suspension(X)


def space(expr: str) -> SimplicialComplex:
    """Build a complex from a space expression such as ``rp2*circle``."""
    return _Parser(expr).parse()


def resolve_complex(ref) -> SimplicialComplex:
    """Inline object, file path, or space expression."""
    if isinstance(ref, SimplicialComplex):
        return ref
    if isinstance(ref, dict):
        return parse_complex(ref)
    if not isinstance(ref, str):
        raise ComplexError("complex reference must be a name or an object")
    p = Path(ref)
    if ref.endswith(".json") or (p.suffix and p.exists()):
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise FileNotFoundError(f"{ref}: {exc.strerror}") from None
        return parse_complex(text)
    return space(ref)


def complex_ref(X: SimplicialComplex):
    """Name of X if it rebuilds to the same complex, else the inline object."""
    try:
        if space(X.name).content_hash == X.content_hash:
            return X.name
    except (ComplexError, UnknownSpaceError):
        pass
    return X.to_json()


# ---------------------------------------------------------------------------
# cochains


def cochain_to_json(u: Cochain, *, with_complex: bool = True) -> dict:
    X = u.complex
    simplices = X.simplices(u.degree)
    doc = {}
    if with_complex:
        doc["complex"] = complex_ref(X)
    doc["degree"] = u.degree
    doc["ring"] = u.ring
    doc["values"] = [[list(simplices[k]), format_coefficient(v)] for k, v in enumerate(u.values) if v]
    return doc


def cochain_from_json(doc, X: SimplicialComplex | None = None) -> Cochain:
    if isinstance(doc, str):
        doc = _loads(doc)
    if not isinstance(doc, dict):
        raise CochainError("cochain document must be an object")
    if X is None:
        if "complex" not in doc:
            raise CochainError("cochain document needs 'complex'")
        X = resolve_complex(doc["complex"])
    ring = doc.get("ring")
    if ring not in RINGS:
        raise CochainError(f"field 'ring' must be one of {', '.join(RINGS)}")
    n = doc.get("degree")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise CochainError("field 'degree' must be a nonnegative integer")
    data = {}
    for k, item in enumerate(doc.get("values", [])):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            raise CochainError(f"values[{k}] must be [[simplex], \"coefficient\"]")
        simplex, coef = item
        if not isinstance(coef, (str, int)):
            raise CochainError(f"values[{k}]: coefficient must be a string")
        key = tuple(simplex)
        if key in data:
            raise CochainError(f"values[{k}]: duplicate simplex {simplex}")
        data[key] = parse_coefficient(str(coef), ring)
    try:
        return Cochain.from_dict(X, n, ring, data)
    except CochainError as exc:
        raise CochainError(f"values: {exc}") from None


# ---------------------------------------------------------------------------
# classes and groups


def descriptor_to_json(G: GroupDescriptor) -> dict:
    return G.to_json()


def class_to_json(x: CohomologyClass) -> dict:
    return {
        "degree": x.degree,
        "ring": x.ring,
        "coordinates": [format_coefficient(c) for c in x.coordinates()],
        "zero": x.is_zero(),
        "representative": cochain_to_json(x.representative, with_complex=False),
    }


# ---------------------------------------------------------------------------
# differential cocycles


def diff_to_json(x: DiffCocycle) -> dict:
    return {
        "complex": complex_ref(x.complex),
        "degree": x.degree,
        "c": cochain_to_json(x.c, with_complex=False),
        "h": cochain_to_json(x.h, with_complex=False),
        "omega": cochain_to_json(x.omega, with_complex=False),
    }


def diff_from_json(doc) -> DiffCocycle:
    """Load and validate a triple; delta h = omega - c is enforced."""
    if isinstance(doc, str):
        doc = _loads(doc)
    if not isinstance(doc, dict):
        raise DiffCocycleError("differential cocycle document must be an object")
    for field in ("complex", "degree", "c", "h", "omega"):
        if field not in doc:
            raise DiffCocycleError(f"missing field {field!r}")
    X = resolve_complex(doc["complex"])
    m = doc["degree"]
    parts = {}
    for field, deg, ring in (("c", m, "Z"), ("h", m - 1, "Q"), ("omega", m, "Q")):
        sub = dict(doc[field])
        sub.setdefault("degree", deg)
        sub.setdefault("ring", ring)
        if sub["degree"] != deg:
            raise DiffCocycleError(f"field {field!r} must have degree {deg}")
        try:
            parts[field] = cochain_from_json(sub, X)
        except CochainError as exc:
            raise DiffCocycleError(f"{field}: {exc}") from None
    return DiffCocycle(parts["c"], parts["h"], parts["omega"])


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CochainError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_json_file(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileNotFoundError(f"{path}: {exc.strerror}") from None
    return _loads(text)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False)
