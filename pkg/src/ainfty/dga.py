"""Differential graded (super)algebras given by structure constants.

A :class:`DGA` carries a graded space, a differential of degree +1, a
degree-additive bilinear product and optionally a unit.  Nothing about the
axioms is assumed: :func:`validate_dga` checks d^2 = 0, the graded Leibniz
rule and associativity exactly on basis elements.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product as iproduct
from typing import Mapping, Optional, Sequence

from .graded import GradedMap, GradedVectorSpace, GradingError, HomogeneousVector, compose
from .linalg import ONE, ZERO, Matrix, as_scalar
from .simplicial import SimplicialComplex, boundary_of_simplex, minimal_torus


class DGAError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class MultiplicationTable:
    """``constants[(p, q)][i][j]`` = coordinates of ``e_p,i * e_q,j`` in degree p+q.

    Degree pairs that are absent multiply to zero.
    """

    space: GradedVectorSpace
    constants: Mapping = field(hash=False)

    __hash__ = None

    def __post_init__(self):
        sp = self.space
        for (p, q), tensor in self.constants.items():
            shape = (sp.dim(p), sp.dim(q), sp.dim(p + q))
            if p not in sp.degrees() or q not in sp.degrees() or p + q not in sp.degrees():
                raise DGAError(f"product block ({p},{q}) leaves the degree range")
            if len(tensor) != shape[0] or any(len(row) != shape[1] for row in tensor) \
                    or any(len(c) != shape[2] for row in tensor for c in row):
                raise DGAError(f"product block ({p},{q}) does not have shape {shape}")

    @cached_property
    def _sparse(self) -> dict:
        out = {}
        for key, tensor in self.constants.items():
            rows = []
            for row in tensor:
                entries = []
                for j, c in enumerate(row):
                    nz = tuple((k, x) for k, x in enumerate(c) if x)
                    if nz:
                        entries.append((j, nz))
                rows.append(entries)
            out[key] = rows
        return out

    def multiply(self, u: HomogeneousVector, v: HomogeneousVector) -> HomogeneousVector:
        g = u.degree + v.degree
        n = self.space.dim(g)
        table = self._sparse.get((u.degree, v.degree))
        if table is None or not n:
            return HomogeneousVector(g, (ZERO,) * n)
        out = [ZERO] * n
        vc = v.coords
        for i, a in enumerate(u.coords):
            if not a:
                continue
            for j, nz in table[i]:
                b = vc[j]
                if b:
                    ab = a * b
                    for k, c in nz:
                        out[k] += ab * c
        return HomogeneousVector(g, tuple(out))

    def basis_product(self, p: int, i: int, q: int, j: int) -> tuple:
        tensor = self.constants.get((p, q))
        if tensor is None:
            return (ZERO,) * self.space.dim(p + q)
        return tensor[i][j]


@dataclass(frozen=True, eq=True)
class DGA:
    space: GradedVectorSpace
    d: GradedMap
    mult: MultiplicationTable
    unit: Optional[HomogeneousVector] = None
    name: str = field(default="", compare=False)

    __hash__ = None

    def __post_init__(self):
        if self.d.shift != 1:
            raise DGAError(f"differential must raise degree by 1, got shift {self.d.shift}")
        if self.d.source != self.space or self.d.target != self.space:
            raise DGAError("differential must be an endomorphism of the algebra's space")
        if self.mult.space != self.space:
            raise DGAError("multiplication table is defined on a different space")
        if self.unit is not None:
            if self.unit.degree != 0:
                raise DGAError("unit must have degree 0")
            self.unit.check_in(self.space)

    def multiply(self, u: HomogeneousVector, v: HomogeneousVector) -> HomogeneousVector:
        return self.mult.multiply(u, v)

    def differential(self, v: HomogeneousVector) -> HomogeneousVector:
        return self.d(v)

    def basis_vector(self, g: int, i: int) -> HomogeneousVector:
        return HomogeneousVector.basis(self.space, g, i)

    @classmethod
    def from_sparse(cls, labels: Mapping[int, Sequence[str]], d: Mapping[str, Mapping[str, object]],
                    products: Mapping[tuple, Mapping[str, object]], unit: Optional[Mapping[str, object]] = None,
                    name: str = "") -> "DGA":
        """Build from label-keyed dictionaries; labels must be unique across all degrees."""
        space = GradedVectorSpace.from_labels(labels)
        where = {}
        for g in space.degrees():
            for i, lab in enumerate(space.labels_at(g)):
                if lab in where:
                    raise DGAError(f"label {lab!r} used twice")
                where[lab] = (g, i)

        def vec(g, terms):
            out = [ZERO] * space.dim(g)
            for lab, c in terms.items():
                h, k = where[lab]
                if h != g:
                    raise DGAError(f"{lab!r} has degree {h}, expected {g}")
                out[k] += as_scalar(c)
            return tuple(out)

        blocks = {}
        for g in space.degrees():
            cols = [vec(g + 1, d.get(lab, {})) for lab in space.labels_at(g)]
            blocks[g] = Matrix.from_columns(cols, space.dim(g + 1))
        diff = GradedMap(space, space, 1, blocks)
        consts = {}
        for (a, b), terms in products.items():
            (p, i), (q, j) = where[a], where[b]
            if (p, q) not in consts:
                consts[(p, q)] = [[None] * space.dim(q) for _ in range(space.dim(p))]
            consts[(p, q)][i][j] = vec(p + q, terms)
        frozen = {}
        for (p, q), rows in consts.items():
            z = (ZERO,) * space.dim(p + q)
            frozen[(p, q)] = tuple(tuple(c if c is not None else z for c in row) for row in rows)
        u = HomogeneousVector(0, vec(0, unit)) if unit is not None else None
        return cls(space, diff, MultiplicationTable(space, frozen), u, name)


@dataclass
class ValidationReport:
    d_squared_ok: bool = True
    leibniz_ok: bool = True
    assoc_ok: bool = True
    unit_ok: bool = True
    first_failure: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.d_squared_ok and self.leibniz_ok and self.assoc_ok and self.unit_ok

    def to_dict(self) -> dict:
        from .io import vector_to_json
        ff = None
        if self.first_failure is not None:
            ff = dict(self.first_failure)
            ff["residual"] = vector_to_json(ff["residual"])
        return {"ok": self.ok, "d_squared_ok": self.d_squared_ok, "leibniz_ok": self.leibniz_ok,
                "assoc_ok": self.assoc_ok, "unit_ok": self.unit_ok, "first_failure": ff}


def validate_dga(A: DGA) -> ValidationReport:
    rep = ValidationReport()

    def fail(flag, rule, indices, residual):
        setattr(rep, flag, False)
        if rep.first_failure is None:
            rep.first_failure = {"rule": rule, "basis": [list(ix) for ix in indices], "residual": residual}

    sp = A.space
    basis = [(g, i, A.basis_vector(g, i)) for g in sp.degrees() for i in range(sp.dim(g))]
    dd = compose(A.d, A.d)
    for g, i, e in basis:
        r = dd(e)
        if not r.is_zero():
            fail("d_squared_ok", "d_squared", [(g, i)], r)
            break
    for (g, i, e), (h, j, f) in iproduct(basis, basis):
        lhs = A.d(A.multiply(e, f))
        rhs = A.multiply(A.d(e), f) + A.multiply(e, A.d(f)).signed(g)
        if lhs.coords != rhs.coords:
            fail("leibniz_ok", "leibniz", [(g, i), (h, j)], lhs - rhs)
            break
    products = {(g, i, h, j): A.multiply(e, f) for (g, i, e), (h, j, f) in iproduct(basis, basis)}
    done = False
    for (g, i, e), (h, j, f) in iproduct(basis, basis):
        ef = products[(g, i, h, j)]
        for k_deg, k, x in basis:
            left = A.multiply(ef, x)
            right = A.multiply(e, products[(h, j, k_deg, k)])
            if left.coords != right.coords:
                fail("assoc_ok", "associativity", [(g, i), (h, j), (k_deg, k)], left - right)
                done = True
                break
        if done:
            break
    if A.unit is not None:
        for g, i, e in basis:
            for r in (A.multiply(A.unit, e) - e, A.multiply(e, A.unit) - e):
                if not r.is_zero():
                    fail("unit_ok", "unit", [(g, i)], r)
                    break
            if not rep.unit_ok:
                break
    return rep


# -- simplicial cochains --------------------------------------------------

def build_simplicial_cochain_dga(K: SimplicialComplex, name: str = "") -> DGA:
    """Cochain algebra of K: coboundary with face signs (-1)^i, Alexander-Whitney cup product."""
    simplex_set = set(K.simplices)
    for s in K.simplices:
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            if face and face not in simplex_set:
                raise DGAError(f"face {face} of {s} missing from the complex")
    top = K.dimension
    by_dim = {p: K.simplices_of_dim(p) for p in range(top + 1)}
    index = {s: i for p in by_dim for i, s in enumerate(by_dim[p])}
    labels = {p: [K.label(s) for s in by_dim[p]] for p in by_dim}
    space = GradedVectorSpace.from_labels(labels)

    blocks = {}
    for p in range(top + 1):
        rows = space.dim(p + 1)
        cols = [[ZERO] * rows for _ in by_dim[p]]
        for t in by_dim.get(p + 1, []):
            for pos in range(len(t)):
                face = t[:pos] + t[pos + 1:]
                cols[index[face]][index[t]] += -ONE if pos % 2 else ONE
        blocks[p] = Matrix.from_columns(cols, rows)
    d = GradedMap(space, space, 1, blocks)

    consts = {}
    for p in range(top + 1):
        for q in range(top + 1 - p):
            n = space.dim(p + q)
            rows = []
            for a in by_dim[p]:
                row = []
                for b in by_dim[q]:
                    c = [ZERO] * n
                    if a[-1] == b[0]:
                        joined = a + b[1:]
                        if joined in simplex_set:
                            c[index[joined]] = ONE
                    row.append(tuple(c))
                rows.append(tuple(row))
            consts[(p, q)] = tuple(rows)
    unit = HomogeneousVector(0, (ONE,) * space.dim(0))
    return DGA(space, d, MultiplicationTable(space, consts), unit, name)


# -- tensor products and direct sums --------------------------------------

def tensor_product(A: DGA, B: DGA, name: str = "") -> DGA:
    """Graded tensor product with Koszul signs.

    ``(a (x) b)(a' (x) b') = (-1)^(|b||a'|) aa' (x) bb'`` and
    ``d(a (x) b) = da (x) b + (-1)^|a| a (x) db``.
    """
    lo, hi = A.space.d_min + B.space.d_min, A.space.d_max + B.space.d_max
    basis = {n: [] for n in range(lo, hi + 1)}
    for n in basis:
        for p in A.space.degrees():
            q = n - p
            for i in range(A.space.dim(p)):
                for j in range(B.space.dim(q)):
                    basis[n].append((p, i, q, j))
    pos = {key: k for n in basis for k, key in enumerate(basis[n])}
    labels = {n: [f"{A.space.labels_at(p)[i]}⊗{B.space.labels_at(q)[j]}" for p, i, q, j in basis[n]]
              for n in basis}
    space = GradedVectorSpace.from_labels(labels)

    def embed(p, a_coords, q, b_coords, n, out, sign):
        for i, x in enumerate(a_coords):
            if x:
                for j, y in enumerate(b_coords):
                    if y:
                        out[pos[(p, i, q, j)]] += sign * x * y

    blocks = {}
    for n in basis:
        rows = space.dim(n + 1)
        cols = []
        for p, i, q, j in basis[n]:
            out = [ZERO] * rows
            da = A.d.block(p).column(i) if A.space.dim(p + 1) else ()
            db = B.d.block(q).column(j) if B.space.dim(q + 1) else ()
            ea = tuple(ONE if k == i else ZERO for k in range(A.space.dim(p)))
            eb = tuple(ONE if k == j else ZERO for k in range(B.space.dim(q)))
            if da:
                embed(p + 1, da, q, eb, n + 1, out, ONE)
            if db:
                embed(p, ea, q + 1, db, n + 1, out, -ONE if p % 2 else ONE)
            cols.append(out)
        blocks[n] = Matrix.from_columns(cols, rows)
    d = GradedMap(space, space, 1, blocks)

    consts = {}
    for n1 in basis:
        for n2 in basis:
            n = n1 + n2
            if n not in basis or not space.dim(n) or not basis[n1] or not basis[n2]:
                continue
            rows = []
            for p, i, q, j in basis[n1]:
                row = []
                for p2, i2, q2, j2 in basis[n2]:
                    out = [ZERO] * space.dim(n)
                    aa = A.mult.basis_product(p, i, p2, i2)
                    if any(aa):
                        bb = B.mult.basis_product(q, j, q2, j2)
                        if any(bb):
                            embed(p + p2, aa, q + q2, bb, n, out, -ONE if (q * p2) % 2 else ONE)
                    row.append(tuple(out))
                rows.append(tuple(row))
            consts[(n1, n2)] = tuple(rows)
    unit = None
    if A.unit is not None and B.unit is not None:
        out = [ZERO] * space.dim(0)
        embed(0, A.unit.coords, 0, B.unit.coords, 0, out, ONE)
        unit = HomogeneousVector(0, tuple(out))
    return DGA(space, d, MultiplicationTable(space, consts), unit, name or f"({A.name}⊗{B.name})")


def direct_sum(A: DGA, B: DGA, name: str = "") -> DGA:
    """Product algebra A x B: componentwise product and differential."""
    lo = min(A.space.d_min, B.space.d_min)
    hi = max(A.space.d_max, B.space.d_max)
    labels = {g: [f"L.{x}" for x in A.space.labels_at(g)] + [f"R.{x}" for x in B.space.labels_at(g)]
              for g in range(lo, hi + 1)}
    space = GradedVectorSpace.from_labels(labels)
    na = {g: A.space.dim(g) for g in space.degrees()}

    def join(g, a, b):
        return tuple(a) + tuple(b) if space.dim(g) else ()

    blocks = {}
    for g in space.degrees():
        cols = []
        for i in range(A.space.dim(g)):
            cols.append(join(g + 1, A.d.block(g).column(i) if A.space.dim(g + 1) else (ZERO,) * A.space.dim(g + 1),
                             (ZERO,) * B.space.dim(g + 1)))
        for j in range(B.space.dim(g)):
            cols.append(join(g + 1, (ZERO,) * A.space.dim(g + 1),
                             B.d.block(g).column(j) if B.space.dim(g + 1) else (ZERO,) * B.space.dim(g + 1)))
        blocks[g] = Matrix.from_columns(cols, space.dim(g + 1))
    d = GradedMap(space, space, 1, blocks)

    consts = {}
    for p in space.degrees():
        for q in space.degrees():
            n = p + q
            if n not in space.degrees() or not space.dim(n):
                continue
            rows = []
            for i in range(space.dim(p)):
                row = []
                for j in range(space.dim(q)):
                    if i < na[p] and j < na[q]:
                        c = join(n, A.mult.basis_product(p, i, q, j), (ZERO,) * B.space.dim(n))
                    elif i >= na[p] and j >= na[q]:
                        c = join(n, (ZERO,) * A.space.dim(n), B.mult.basis_product(p, i - na[p], q, j - na[q]))
                    else:
                        c = (ZERO,) * space.dim(n)
                    row.append(c)
                rows.append(tuple(row))
            consts[(p, q)] = tuple(rows)
    unit = None
    if A.unit is not None and B.unit is not None:
        unit = HomogeneousVector(0, tuple(A.unit.coords) + tuple(B.unit.coords))
    return DGA(space, d, MultiplicationTable(space, consts), unit, name or f"({A.name}⊕{B.name})")


# -- catalog ----------------------------------------------------------------

def _interval() -> SimplicialComplex:
    return SimplicialComplex.from_facets([["0", "1"]])


def _exterior(n: int) -> DGA:
    gens = [f"e{i + 1}" for i in range(n)]
    labels, products = {0: ["1"]}, {}
    monomials = {0: [()]}
    for k in range(1, n + 1):
        monomials[k] = list(combinations(range(n), k))
        labels[k] = ["".join(gens[i] for i in m) for m in monomials[k]]
    name = {m: ("".join(gens[i] for i in m) or "1") for k in monomials for m in monomials[k]}
    for ka in monomials:
        for kb in monomials:
            for a in monomials[ka]:
                for b in monomials[kb]:
                    if set(a) & set(b):
                        continue
                    merged = a + b
                    # sign of the sorting permutation
                    inversions = sum(1 for x in a for y in b if x > y)
                    products[(name[a], name[b])] = {name[tuple(sorted(merged))]: -1 if inversions % 2 else 1}
    return DGA.from_sparse(labels, {}, products, {"1": 1}, name=f"exterior{n}")


def _dual_numbers() -> DGA:
    # k[t]/t^2 concentrated in degree 0
    return DGA.from_sparse({0: ["1", "t"]}, {},
                           {("1", "1"): {"1": 1}, ("1", "t"): {"t": 1}, ("t", "1"): {"t": 1}},
                           {"1": 1}, name="dual_numbers")


def _massey_witness() -> DGA:
    """Degree-truncated algebra with a nontrivial triple Massey product <x, y, y>.

    Degree 1: closed x, y and primitives a, b with ``da = xy`` and ``db = yy``.
    Degree 2: ``xy, yy, ay, xb``; the products listed below are the only
    nonzero ones between degree-1 generators.  Everything in degree 3 is
    zero, so associativity and the Leibniz rule hold for degree reasons.
    H^1 = <x, y>, H^2 = <ay, xb>, and the Massey product class is
    ``a y + x b`` (up to sign), which is not exact.
    """
    labels = {0: ["1"], 1: ["x", "y", "a", "b"], 2: ["xy", "yy", "ay", "xb"]}
    d = {"a": {"xy": 1}, "b": {"yy": 1}}
    products = {("x", "y"): {"xy": 1}, ("y", "y"): {"yy": 1}, ("a", "y"): {"ay": 1}, ("x", "b"): {"xb": 1}}
    for g in labels:
        for lab in labels[g]:
            products[("1", lab)] = {lab: 1}
            products[(lab, "1")] = {lab: 1}
    return DGA.from_sparse(labels, d, products, {"1": 1}, name="massey_witness")


BUILTIN_NAMES = ("point", "interval", "sphere2", "torus", "exterior1", "exterior2",
                 "dual_numbers", "massey_witness")

RANDOM_CATALOG = ("point", "interval", "exterior1", "exterior2", "dual_numbers")


def builtin_complex(name: str) -> SimplicialComplex:
    if name == "point":
        return SimplicialComplex.from_facets([["0"]])
    if name == "interval":
        return _interval()
    if name == "sphere2":
        return boundary_of_simplex(3)
    if name == "torus":
        return minimal_torus()
    raise DGAError(f"{name!r} is not a simplicial builtin")


def builtin_dga(name: str) -> DGA:
    """Return a catalog DGA; see ``BUILTIN_NAMES``."""
    if name in ("point", "interval", "sphere2", "torus"):
        return build_simplicial_cochain_dga(builtin_complex(name), name=name)
    if name == "exterior1":
        return _exterior(1)
    if name == "exterior2":
        return _exterior(2)
    if name == "dual_numbers":
        return _dual_numbers()
    if name == "massey_witness":
        return _massey_witness()
    raise DGAError(f"unknown builtin DGA {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


def random_dga(seed: int, num_factors: int = 2, catalog: Sequence[str] = RANDOM_CATALOG) -> DGA:
    """Seeded tensor products / direct sums of catalog pieces; valid by construction."""
    rng = random.Random(seed)
    names = [rng.choice(list(catalog)) for _ in range(max(1, num_factors))]
    A = builtin_dga(names[0])
    for nm in names[1:]:
        B = builtin_dga(nm)
        A = tensor_product(A, B) if rng.random() < 0.6 else direct_sum(A, B)
    return A


__all__ = ["DGA", "DGAError", "MultiplicationTable", "ValidationReport", "validate_dga",
           "build_simplicial_cochain_dga", "builtin_dga", "builtin_complex", "random_dga",
           "tensor_product", "direct_sum", "BUILTIN_NAMES", "RANDOM_CATALOG", "GradingError"]
