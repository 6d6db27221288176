"""Parsing, canonical serialization and content hashing.

Rationals are written as strings ``"p/q"`` in lowest terms (``"p"`` when
q = 1).  Canonical JSON uses sorted keys and never contains a float, so
equal artifacts serialize, and therefore hash, identically.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any, Optional

from .dga import DGA, MultiplicationTable
from .graded import GradedMap, GradedVectorSpace, GradingError, HomogeneousVector
from .linalg import LinAlgError, Matrix, format_rational, parse_rational
from .simplicial import ComplexError, SimplicialComplex

DGA_FORMAT = "ainfty-dga/1"
MAP_FORMAT = "ainfty-map/1"
SUBCOMPLEX_FORMAT = "ainfty-subcomplex/1"
MU_TABLE_FORMAT = "ainfty-mu-table/1"


class FormatError(ValueError):
    pass


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def pretty_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _rat(text) -> Any:
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise FormatError(f"rational must be a string or integer, got {text!r}")
    try:
        return parse_rational(str(text))
    except LinAlgError as exc:
        raise FormatError(str(exc)) from None


def vector_to_json(v: HomogeneousVector) -> dict:
    return {"degree": v.degree, "coords": [format_rational(x) for x in v.coords]}


def vector_from_json(obj: dict) -> HomogeneousVector:
    try:
        return HomogeneousVector(int(obj["degree"]), tuple(_rat(x) for x in obj["coords"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed vector: {exc}") from None


def matrix_to_json(m: Matrix) -> list:
    return [[format_rational(x) for x in row] for row in m.data]


def matrix_from_json(obj, rows: int, cols: int, what: str = "matrix") -> Matrix:
    if not isinstance(obj, list) or len(obj) != rows:
        raise FormatError(f"{what}: expected {rows} rows")
    data = []
    for r in obj:
        if not isinstance(r, list) or len(r) != cols:
            raise FormatError(f"{what}: expected rows of length {cols}")
        data.append(tuple(_rat(x) for x in r))
    return Matrix(rows, cols, tuple(data))


def _key(g: int) -> str:
    return str(g)


# -- DGA ------------------------------------------------------------------

def serialize_dga(A: DGA) -> dict:
    sp = A.space
    mult = {}
    for (p, q), tensor in sorted(A.mult.constants.items()):
        mult[f"{p},{q}"] = [[[format_rational(x) for x in c] for c in row] for row in tensor]
    return {
        "format": DGA_FORMAT,
        "name": A.name,
        "degree_range": [sp.d_min, sp.d_max],
        "dims": {_key(g): sp.dim(g) for g in sp.degrees()},
        "basis_labels": {_key(g): list(sp.labels_at(g)) for g in sp.degrees()},
        "d": {_key(g): matrix_to_json(A.d.blocks[g]) for g in sp.degrees()},
        "mult": mult,
        "unit": None if A.unit is None else [format_rational(x) for x in A.unit.coords],
    }


def parse_dga(obj) -> DGA:
    """Inverse of :func:`serialize_dga`; accepts a dict or JSON text."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise FormatError("DGA document must be a JSON object")
    try:
        lo, hi = (int(x) for x in obj["degree_range"])
        dims = {g: int(obj["dims"][_key(g)]) for g in range(lo, hi + 1)}
        labels = {g: list(obj["basis_labels"][_key(g)]) for g in range(lo, hi + 1)}
        space = GradedVectorSpace(lo, hi, tuple(dims[g] for g in range(lo, hi + 1)),
                                  tuple(tuple(labels[g]) for g in range(lo, hi + 1)))
        blocks = {g: matrix_from_json(obj["d"][_key(g)], space.dim(g + 1), space.dim(g), f"d block {g}")
                  for g in space.degrees()}
        consts = {}
        for key, tensor in obj.get("mult", {}).items():
            p, q = (int(x) for x in key.split(","))
            n1, n2, n3 = space.dim(p), space.dim(q), space.dim(p + q)
            if not isinstance(tensor, list) or len(tensor) != n1:
                raise FormatError(f"mult block {key}: expected {n1} rows")
            rows = []
            for row in tensor:
                if not isinstance(row, list) or len(row) != n2:
                    raise FormatError(f"mult block {key}: expected {n2} columns")
                cells = []
                for c in row:
                    if not isinstance(c, list) or len(c) != n3:
                        raise FormatError(f"mult block {key}: expected coordinate vectors of length {n3}")
                    cells.append(tuple(_rat(x) for x in c))
                rows.append(tuple(cells))
            consts[(p, q)] = tuple(rows)
        unit = obj.get("unit")
        unit_vec = None if unit is None else HomogeneousVector(0, tuple(_rat(x) for x in unit))
        d = GradedMap(space, space, 1, blocks)
        return DGA(space, d, MultiplicationTable(space, consts), unit_vec, str(obj.get("name", "")))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed DGA document: {exc!r}") from None


# -- graded maps and subcomplexes --------------------------------------------

def serialize_map(f: GradedMap) -> dict:
    return {"format": MAP_FORMAT, "shift": f.shift,
            "blocks": {_key(g): matrix_to_json(f.blocks[g]) for g in f.source.degrees()}}


def parse_map(obj, space: GradedVectorSpace, shift: Optional[int] = None) -> GradedMap:
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    try:
        s = int(obj["shift"])
        if shift is not None and s != shift:
            raise FormatError(f"map has shift {s}, expected {shift}")
        blocks = {}
        for g in space.degrees():
            raw = obj["blocks"].get(_key(g))
            rows, cols = space.dim(g + s), space.dim(g)
            blocks[g] = Matrix.zeros(rows, cols) if raw is None else matrix_from_json(raw, rows, cols, f"block {g}")
        return GradedMap(space, space, s, blocks)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, GradingError) as exc:
        raise FormatError(f"malformed map document: {exc!r}") from None


def serialize_subcomplex(W) -> dict:
    return {"format": SUBCOMPLEX_FORMAT,
            "inclusion": {_key(g): matrix_to_json(W.inclusion[g]) for g in W.ambient.degrees()}}


def parse_subcomplex(obj, space: GradedVectorSpace):
    from .transfer import Subcomplex
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    try:
        inc = {}
        for g in space.degrees():
            raw = obj["inclusion"].get(_key(g), [])
            rows = space.dim(g)
            cols = len(raw[0]) if raw and isinstance(raw[0], list) else 0
            inc[g] = matrix_from_json(raw if rows else [], rows, cols, f"inclusion {g}")
        return Subcomplex(space, inc)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed subcomplex document: {exc!r}") from None


# -- simplicial complexes ----------------------------------------------------

def parse_complex(text: str) -> SimplicialComplex:
    """One maximal simplex per line; ``#`` comments; optional ``vertices: a b c`` header."""
    order: list = []
    facets = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vertices:"):
            order = line.split(":", 1)[1].split()
            if len(set(order)) != len(order):
                raise ComplexError("duplicate vertex in the vertices header")
            continue
        facets.append(line.split())
    if not facets and not order:
        raise ComplexError("empty complex")
    return SimplicialComplex.from_facets(facets, order)


def serialize_complex(K: SimplicialComplex) -> str:
    lines = ["vertices: " + " ".join(K.vertices)]
    maximal = [s for s in K.simplices if not any(set(s) < set(t) for t in K.simplices)]
    for s in sorted(maximal):
        lines.append(" ".join(K.vertices[i] for i in s))
    return "\n".join(lines) + "\n"


# -- hashing -------------------------------------------------------------------

def content_hash(artifact) -> str:
    """SHA-256 of the canonical serialization (the DGA name is not part of its content)."""
    if isinstance(artifact, DGA):
        doc = serialize_dga(artifact)
        doc.pop("name")
    elif isinstance(artifact, GradedMap):
        doc = serialize_map(artifact)
    elif isinstance(artifact, HomogeneousVector):
        doc = vector_to_json(artifact)
    elif isinstance(artifact, Matrix):
        doc = matrix_to_json(artifact)
    elif hasattr(artifact, "inclusion") and hasattr(artifact, "ambient"):
        doc = serialize_subcomplex(artifact)
    elif isinstance(artifact, SimplicialComplex):
        doc = serialize_complex(artifact)
    else:
        doc = artifact
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


# -- mu tables -----------------------------------------------------------------

def export_mu_tables(structure, orders, report=None, extra: Optional[dict] = None) -> dict:
    """Serialize complete mu_n tables for the given orders (nonzero entries only)."""
    datum = structure.datum
    tables = {}
    for n in orders:
        entries = {}
        for t, v in sorted(structure.table(n).items()):
            if not v.is_zero():
                entries[",".join(str(i) for i in t)] = vector_to_json(v)
        tables[str(n)] = entries
    doc = {
        "format": MU_TABLE_FORMAT,
        "algebra_hash": content_hash(datum.algebra),
        "W_hash": content_hash(datum.W),
        "Q_hash": content_hash(datum.Q),
        "W_dims": {_key(g): datum.W.space.dim(g) for g in datum.W.space.degrees()},
        "max_order": structure.max_order,
        "complete_orders": sorted(int(n) for n in orders),
        "tables": tables,
        "verification": None if report is None else report.to_dict(),
    }
    if extra:
        doc.update(extra)
    return doc


def load_mu_entries(doc: dict, wdim: int) -> dict:
    """Stored (nonzero) entries of a mu-table document as ``{index tuple: W-vector}``."""
    if doc.get("format") != MU_TABLE_FORMAT:
        raise FormatError("not a mu-table document")
    preset = {}
    try:
        for n_text, entries in doc["tables"].items():
            n = int(n_text)
            for key, val in entries.items():
                t = tuple(int(x) for x in key.split(","))
                if len(t) != n or any(not 0 <= i < wdim for i in t):
                    raise FormatError(f"bad table key {key!r} for order {n}")
                preset[t] = vector_from_json(val)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed mu table: {exc!r}") from None
    return preset
