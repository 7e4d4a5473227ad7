"""JSON forms of every object handled by the command-line tool.

Conventions:

* rings are their descriptors, e.g. ``{"kind": "zmod", "p": 2, "t": 2}``;
* ring elements are strings in the canonical form of :meth:`FiniteRing.format`;
* Witt vectors are arrays of element strings (coordinates 0..n-1);
* elements of 𝒲_n are ``{"rep": [...]}`` with a W_{n+1} representative;
* elements of 𝒥_{n+1} (the J-block of relative morphisms) are W_{n+1}
  vectors (a, η_0, ..., η_{n-1});
* displays are ``{"ring", "n", "d", "c", "matrix"}``, morphisms
  ``{"source", "target", "X", "J", "Z", "Y"}``.

Files are written by :func:`dumps`: sorted keys, two-space indentation and a
final newline, so that equal objects give byte-identical files and
``dumps(parse(f)) == f`` for files in this form.

Parsing distinguishes two kinds of failure.  :class:`SchemaError` means the
input does not have the documented shape (missing fields, wrong types,
unparseable elements); :class:`InvalidInput` means it is well-formed but
fails a mathematical condition (a matrix that is not invertible, a kernel
that is not square-zero, ...).
"""

from __future__ import annotations

import json

import numpy as np

from .cwitt import CWitt, JElement, cwitt_ring
from .display import DisplayError, DisplayMorphism, TruncatedDisplay
from .matrices import Matrix
from .rings import (FiniteRing, NilAlgebra, PdThickening, RingError, RingHom, nil_algebra, ring_make,
                    thickening_make)
from .witt import WittVector, witt_ring


class SchemaError(ValueError):
    """The input does not match the documented JSON schema."""


class InvalidInput(ValueError):
    """The input is well-formed but mathematically invalid."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = {"valid": False, "message": message, **(report or {})}


# -- text --------------------------------------------------------------------------------


def dumps(obj) -> str:
    """The canonical text of a JSON object."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None


def read_file(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None


def write_file(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


# -- schema helpers ----------------------------------------------------------------------------


def field(obj: dict, key: str, kind=None, default=...):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        if default is not ...:
            return default
        raise SchemaError(f"missing field {key!r}")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise SchemaError(f"field {key!r} must be an integer")
    if kind is not None and kind is not int and not isinstance(val, kind):
        raise SchemaError(f"field {key!r} must be of type {kind.__name__ if isinstance(kind, type) else kind}")
    return val


def _grid(rows, shape: tuple, what: str) -> list:
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r:
        raise SchemaError(f"{what} must have {r} rows")
    for row in rows:
        if not isinstance(row, list) or len(row) != c:
            raise SchemaError(f"every row of {what} must have {c} entries")
    return rows


# -- rings and elements ----------------------------------------------------------------------------

_RING_CACHE: dict = {}


def ring_from_json(desc) -> FiniteRing:
    """The ring of a descriptor; equal descriptors give the same object."""
    if not isinstance(desc, dict):
        raise SchemaError("a ring descriptor must be an object")
    key = json.dumps(desc, sort_keys=True)
    R = _RING_CACHE.get(key)
    if R is None:
        try:
            R = ring_make(desc)
        except (RingError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad ring descriptor: {exc}") from None
        _RING_CACHE[key] = R
        _RING_CACHE.setdefault(json.dumps(R.desc, sort_keys=True), R)
    return R


def ring_to_json(R: FiniteRing) -> dict:
    return R.desc


def element_from_json(R: FiniteRing, s) -> int:
    try:
        return R.parse(s)
    except (RingError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"cannot parse element {s!r}: {exc}") from None


def element_to_json(R: FiniteRing, a: int) -> str:
    return R.format(int(a))


def witt_from_json(R: FiniteRing, n: int, coords) -> WittVector:
    if not isinstance(coords, list) or len(coords) != n:
        raise SchemaError(f"a Witt vector of length {n} needs {n} coordinates, got {coords!r}")
    W = witt_ring(R, n)
    return WittVector(W, tuple(element_from_json(R, a) for a in coords))


def witt_to_json(x: WittVector) -> list:
    R = x.W.R
    return [R.format(a) for a in x.coords]


def cwitt_from_json(R: FiniteRing, n: int, obj) -> CWitt:
    rep = field(obj, "rep", list)
    return CWitt(cwitt_ring(R, n), witt_from_json(R, n + 1, rep).coords)


def cwitt_to_json(x: CWitt) -> dict:
    R = x.C.R
    return {"rep": [R.format(a) for a in x.rep]}


def matrix_to_json(M: Matrix, fn) -> list:
    return [[fn(M[i, j]) for j in range(M.shape[1])] for i in range(M.shape[0])]


def int_matrix_to_json(R: FiniteRing, arr) -> list:
    arr = np.asarray(arr)
    return [[R.format(int(x)) for x in row] for row in arr]


# -- displays and morphisms -----------------------------------------------------------------------------


def display_from_json(obj, ring: FiniteRing | None = None, n: int | None = None) -> TruncatedDisplay:
    """A display; ``ring`` and ``n`` are defaults for files that omit them."""
    R = ring_from_json(obj["ring"]) if isinstance(obj, dict) and "ring" in obj else ring
    if R is None:
        raise SchemaError("missing field 'ring'")
    n = field(obj, "n", int, n)
    if n is None:
        raise SchemaError("missing field 'n'")
    d, c = field(obj, "d", int), field(obj, "c", int)
    if n < 1 or d < 0 or c < 0:
        raise SchemaError("need n >= 1 and d, c >= 0")
    rows = _grid(field(obj, "matrix", list), (d + c, d + c), "the display matrix")
    W = witt_ring(R, n)
    M = Matrix([[witt_from_json(R, n, x) for x in row] for row in rows], W.zero, d + c, d + c)
    try:
        return TruncatedDisplay(R, n, d, c, M)
    except DisplayError as exc:
        raise InvalidInput(str(exc), {"object": "display"}) from None


def display_to_json(P: TruncatedDisplay) -> dict:
    return {"ring": ring_to_json(P.R), "n": P.n, "d": P.d, "c": P.c,
            "matrix": matrix_to_json(P.M, witt_to_json)}


def _blocks_from_json(obj, P, Q, cw, j):
    shapes = {"X": (Q.d, P.d), "J": (Q.d, P.c), "Z": (Q.c, P.d), "Y": (Q.c, P.c)}
    out = {}
    for name, shape in shapes.items():
        rows = _grid(field(obj, name, list), shape, f"block {name}")
        parse = j if name == "J" else cw
        zero = parse(None)
        out[name] = Matrix([[parse(x) for x in row] for row in rows], zero, *shape)
    return out


def morphism_from_json(obj, ring: FiniteRing | None = None, n: int | None = None) -> DisplayMorphism:
    P = display_from_json(field(obj, "source", dict), ring, n)
    Q = display_from_json(field(obj, "target", dict), P.R, P.n)
    if Q.R is not P.R or Q.n != P.n:
        raise SchemaError("source and target must share ring and level")
    R, n = P.R, P.n
    C, W = cwitt_ring(R, n), witt_ring(R, n)
    cw = lambda x: C.zero if x is None else cwitt_from_json(R, n, x)
    jj = lambda x: W.zero if x is None else witt_from_json(R, n, x)
    b = _blocks_from_json(obj, P, Q, cw, jj)
    return DisplayMorphism(P, Q, b["X"], b["J"], b["Z"], b["Y"])


def morphism_to_json(alpha: DisplayMorphism) -> dict:
    return {"source": display_to_json(alpha.source), "target": display_to_json(alpha.target),
            "X": matrix_to_json(alpha.X, cwitt_to_json), "J": matrix_to_json(alpha.J, witt_to_json),
            "Z": matrix_to_json(alpha.Z, cwitt_to_json), "Y": matrix_to_json(alpha.Y, cwitt_to_json)}


def display_or_morphism_from_json(obj):
    if isinstance(obj, dict) and "source" in obj:
        return morphism_from_json(obj)
    return display_from_json(obj)


def display_or_morphism_to_json(obj) -> dict:
    return morphism_to_json(obj) if isinstance(obj, DisplayMorphism) else display_to_json(obj)


# -- homomorphisms, thickenings, nil algebras, coverings -------------------------------------------------


def hom_from_json(obj) -> RingHom:
    """{"source": ring, "target": ring, "images": {gen: element}} or {"table": [...]}."""
    S = ring_from_json(field(obj, "source", dict))
    T = ring_from_json(field(obj, "target", dict))
    try:
        if "table" in obj:
            table = [element_from_json(T, x) for x in field(obj, "table", list)]
            if len(table) != S.size:
                raise SchemaError(f"table must list {S.size} images")
            return RingHom(S, T, table)
        images = field(obj, "images", dict, {})
        for v in images.values():
            element_from_json(T, v)
        return RingHom.from_images(S, T, images)
    except RingError as exc:
        raise InvalidInput(f"not a ring homomorphism: {exc}", {"object": "homomorphism"}) from None


def hom_to_json(phi: RingHom) -> dict:
    return {"source": ring_to_json(phi.source), "target": ring_to_json(phi.target),
            "table": [phi.target.format(int(x)) for x in phi.images]}


_TH_CACHE: dict = {}


def thickening_from_json(obj) -> PdThickening:
    """{"S": ring, "R": ring, "kernel": [elements of S], "images"?: {gen: element of R}}."""
    S = ring_from_json(field(obj, "S", dict))
    R = ring_from_json(field(obj, "R", dict))
    gens = field(obj, "kernel", list)
    for g in gens:
        element_from_json(S, g)
    images = field(obj, "images", dict, None)
    key = json.dumps(obj, sort_keys=True)
    th = _TH_CACHE.get(key)
    if th is None:
        try:
            th = thickening_make(S, gens, R, images=images)
        except RingError as exc:
            raise InvalidInput(f"not a square-zero thickening: {exc}", {"object": "thickening"}) from None
        _TH_CACHE[key] = th
    return th


def thickening_to_json(th: PdThickening) -> dict:
    S, R = th.S, th.R
    out = {"S": ring_to_json(S), "R": ring_to_json(R), "kernel": [S.format(a) for a in th.kernel_gens]}
    if S.gens:
        out["images"] = {g: R.format(th.surjection(S.parse(g))) for g in sorted(S.gens)}
    return out


def nil_algebra_from_json(obj) -> NilAlgebra:
    """{"base": ring, "gens": [...], "rels": [...], "frob_exp"?: int}."""
    ring_from_json(field(obj, "base", dict))
    field(obj, "gens", list)
    field(obj, "rels", list, [])
    try:
        return nil_algebra(obj)
    except RingError as exc:
        raise InvalidInput(f"not a nilpotent algebra: {exc}", {"object": "nil_algebra"}) from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad nil algebra: {exc}") from None


def covering_from_json(obj):
    from .descent import DescentError, covering_make

    base = ring_from_json(field(obj, "base", dict))
    cover = field(obj, "cover", dict)
    kind = field(cover, "kind", str)
    if kind == "product":
        field(cover, "k", int)
    elif kind == "field_ext":
        field(cover, "deg", int)
    else:
        raise SchemaError(f"unknown covering kind {kind!r}")
    try:
        return covering_make(base, cover)
    except DescentError as exc:
        raise InvalidInput(str(exc), {"object": "covering"}) from None


# -- relative objects ---------------------------------------------------------------------------------------


def rel_morphism_to_json(alpha) -> dict:
    """A relative morphism: 𝒲_n(S)-blocks as representatives, J as W_{n+1}(S) vectors."""
    return {"source": display_to_json(alpha.source.display), "target": display_to_json(alpha.target.display),
            "X": matrix_to_json(alpha.X, cwitt_to_json),
            "J": matrix_to_json(alpha.J, lambda j: witt_to_json(j.representative())),
            "Z": matrix_to_json(alpha.Z, cwitt_to_json), "Y": matrix_to_json(alpha.Y, cwitt_to_json)}


def rel_morphism_from_json(obj, th: PdThickening):
    from .relative import RelDisplay, RelMorphism

    P = RelDisplay(th, display_from_json(field(obj, "source", dict), th.S))
    Q = RelDisplay(th, display_from_json(field(obj, "target", dict), th.S, P.n))
    S, n = th.S, P.n
    C, W = cwitt_ring(S, n), witt_ring(S, n)

    def jj(x):
        if x is None:
            return JElement(th, 0, W.zero)
        v = witt_from_json(S, n + 1, x).coords
        try:
            return JElement(th, v[0], WittVector(W, v[1:]))
        except RingError as exc:
            raise InvalidInput(str(exc), {"object": "relative morphism"}) from None

    cw = lambda x: C.zero if x is None else cwitt_from_json(S, n, x)
    b = _blocks_from_json(obj, P, Q, cw, jj)
    return RelMorphism(P, Q, b["X"], b["J"], b["Z"], b["Y"])


__all__ = [
    "SchemaError", "InvalidInput", "dumps", "loads", "read_file", "write_file", "field",
    "ring_from_json", "ring_to_json", "element_from_json", "element_to_json", "witt_from_json", "witt_to_json",
    "cwitt_from_json", "cwitt_to_json", "display_from_json", "display_to_json", "morphism_from_json",
    "morphism_to_json", "display_or_morphism_from_json", "display_or_morphism_to_json", "hom_from_json",
    "hom_to_json", "thickening_from_json", "thickening_to_json", "nil_algebra_from_json", "covering_from_json",
    "rel_morphism_to_json", "rel_morphism_from_json", "int_matrix_to_json",
]
