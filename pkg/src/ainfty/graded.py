"""Graded vector spaces, homogeneous vectors, degree-shifting maps and signs.

Parity of a homogeneous element is its integer degree mod 2.  Degrees
outside a space's range carry the zero space, so shifted maps silently
truncate at the ends of a bounded complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .linalg import ZERO, Matrix, as_scalar


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradedVectorSpace:
    d_min: int
    d_max: int
    dims: tuple
    labels: tuple

    def __post_init__(self):
        if self.d_max < self.d_min:
            raise GradingError("empty degree range")
        n = self.d_max - self.d_min + 1
        if len(self.dims) != n or len(self.labels) != n:
            raise GradingError("dims/labels must cover the degree range exactly")
        for g, dim, labs in zip(self.degrees(), self.dims, self.labels):
            if dim < 0:
                raise GradingError(f"negative dimension at degree {g}")
            if len(labs) != dim or len(set(labs)) != dim:
                raise GradingError(f"labels at degree {g} must be {dim} unique strings")

    @classmethod
    def from_labels(cls, labels: Mapping[int, Sequence[str]]) -> "GradedVectorSpace":
        lo, hi = min(labels), max(labels)
        labs = tuple(tuple(labels.get(g, ())) for g in range(lo, hi + 1))
        return cls(lo, hi, tuple(len(x) for x in labs), labs)

    @classmethod
    def from_dims(cls, dims: Mapping[int, int], prefix: str = "e") -> "GradedVectorSpace":
        return cls.from_labels({g: [f"{prefix}{g}_{i}" for i in range(n)] for g, n in dims.items()})

    def degrees(self) -> range:
        return range(self.d_min, self.d_max + 1)

    def dim(self, g: int) -> int:
        if self.d_min <= g <= self.d_max:
            return self.dims[g - self.d_min]
        return 0

    def labels_at(self, g: int) -> tuple:
        if self.d_min <= g <= self.d_max:
            return self.labels[g - self.d_min]
        return ()

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def basis(self) -> list:
        """All basis vectors, degree by degree; this order defines global indices."""
        return [HomogeneousVector.basis(self, g, i) for g in self.degrees() for i in range(self.dim(g))]

    def zero(self, g: int) -> "HomogeneousVector":
        return HomogeneousVector(g, (ZERO,) * self.dim(g))

    def dims_dict(self) -> dict:
        return {g: self.dim(g) for g in self.degrees()}


@dataclass(frozen=True)
class HomogeneousVector:
    degree: int
    coords: tuple

    @classmethod
    def basis(cls, space: GradedVectorSpace, g: int, i: int) -> "HomogeneousVector":
        n = space.dim(g)
        if not 0 <= i < n:
            raise GradingError(f"no basis vector {i} in degree {g}")
        return cls(g, tuple(Fraction(int(k == i)) for k in range(n)))

    @classmethod
    def of(cls, g: int, coords: Sequence) -> "HomogeneousVector":
        return cls(g, tuple(as_scalar(x) for x in coords))

    @property
    def parity(self) -> int:
        return self.degree % 2

    def is_zero(self) -> bool:
        return not any(self.coords)

    def check_in(self, space: GradedVectorSpace) -> None:
        if len(self.coords) != space.dim(self.degree):
            raise GradingError(
                f"vector of length {len(self.coords)} does not live in degree {self.degree} "
                f"(dimension {space.dim(self.degree)})")

    def __add__(self, other: "HomogeneousVector") -> "HomogeneousVector":
        if other.degree != self.degree or len(other.coords) != len(self.coords):
            raise GradingError(f"cannot add degree {self.degree} and degree {other.degree} vectors")
        return HomogeneousVector(self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "HomogeneousVector") -> "HomogeneousVector":
        return self + (-other)

    def __neg__(self) -> "HomogeneousVector":
        return HomogeneousVector(self.degree, tuple(-a for a in self.coords))

    def scale(self, c) -> "HomogeneousVector":
        c = as_scalar(c)
        return HomogeneousVector(self.degree, tuple(c * a for a in self.coords))

    def signed(self, odd: int) -> "HomogeneousVector":
        """Multiply by ``(-1)**odd``."""
        return -self if odd % 2 else self


@dataclass(frozen=True, eq=True)
class GradedMap:
    """Linear map of fixed degree ``shift``; ``blocks[g]`` acts on source degree g."""

    source: GradedVectorSpace
    target: GradedVectorSpace
    shift: int
    blocks: Mapping[int, Matrix] = field(hash=False)

    def __post_init__(self):
        for g in self.source.degrees():
            b = self.blocks.get(g)
            shape = (self.target.dim(g + self.shift), self.source.dim(g))
            if b is None:
                raise GradingError(f"missing block for source degree {g}")
            if b.shape != shape:
                raise GradingError(f"block at degree {g} has shape {b.shape}, expected {shape}")
        extra = set(self.blocks) - set(self.source.degrees())
        if extra:
            raise GradingError(f"blocks outside the source range: {sorted(extra)}")

    __hash__ = None

    @classmethod
    def from_blocks(cls, source, target, shift: int, blocks: Mapping[int, Matrix]) -> "GradedMap":
        """Fill absent blocks with zeros."""
        full = {}
        for g in source.degrees():
            b = blocks.get(g)
            full[g] = b if b is not None else Matrix.zeros(target.dim(g + shift), source.dim(g))
        return cls(source, target, shift, full)

    @classmethod
    def identity(cls, space: GradedVectorSpace) -> "GradedMap":
        return cls(space, space, 0, {g: Matrix.identity(space.dim(g)) for g in space.degrees()})

    @classmethod
    def zero(cls, space: GradedVectorSpace, shift: int = 0,
             target: Optional[GradedVectorSpace] = None) -> "GradedMap":
        return cls.from_blocks(space, target or space, shift, {})

    @property
    def parity(self) -> int:
        return self.shift % 2

    def block(self, g: int) -> Matrix:
        b = self.blocks.get(g)
        if b is None:
            return Matrix.zeros(self.target.dim(g + self.shift), self.source.dim(g))
        return b

    def __call__(self, v: HomogeneousVector) -> HomogeneousVector:
        if len(v.coords) != self.source.dim(v.degree):
            raise GradingError(f"vector does not live in the source at degree {v.degree}")
        g = v.degree + self.shift
        if not v.coords or not self.target.dim(g):
            return self.target.zero(g)
        return HomogeneousVector(g, self.blocks[v.degree].apply(v.coords))

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def _combine(self, other: "GradedMap", op) -> "GradedMap":
        if (self.source, self.target, self.shift) != (other.source, other.target, other.shift):
            raise GradingError("maps must share source, target and shift")
        return GradedMap(self.source, self.target, self.shift,
                         {g: op(self.blocks[g], other.blocks[g]) for g in self.source.degrees()})

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return GradedMap(self.source, self.target, self.shift, {g: -b for g, b in self.blocks.items()})

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target, self.shift, {g: b.scale(c) for g, b in self.blocks.items()})


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """``f o g`` (apply g first)."""
    if g.target != f.source:
        raise GradingError("compose: target of the inner map is not the source of the outer map")
    blocks = {}
    for deg in g.source.degrees():
        mid = deg + g.shift
        inner = g.blocks[deg]
        if g.target.d_min <= mid <= g.target.d_max:
            blocks[deg] = f.blocks[mid] @ inner
        else:
            blocks[deg] = Matrix.zeros(f.target.dim(mid + f.shift), g.source.dim(deg))
    return GradedMap(g.source, f.target, f.shift + g.shift, blocks)


def supercommutator(f: GradedMap, g: GradedMap) -> GradedMap:
    """``[f, g] = f g - (-1)^(|f||g|) g f``."""
    if not (f.source == f.target == g.source == g.target):
        raise GradingError("supercommutator needs endomorphisms of one space")
    fg = compose(f, g)
    gf = compose(g, f)
    return fg + gf if f.parity * g.parity else fg - gf


def assoc_sign_exponent(k: int, l: int, j: int, prefix_parity: int) -> int:
    """Sign exponent r of the term mu_k(v_1..v_j, mu_l(...), ...) in the A-infinity relation.

    ``r = l(v_1+..+v_j) + j(l-1) + (k-1)l`` with every quantity reduced mod 2.
    """
    kt, lt, jt, pt = k % 2, l % 2, j % 2, prefix_parity % 2
    return (lt * pt + jt * (lt - 1) + (kt - 1) * lt) % 2


def lambda_sign_exponent(k: int, l: int, prefix_parity: int) -> int:
    """Exponent ``k + (l-1)(v_1+..+v_k)`` of the split (k | l) in the lambda recursion."""
    return (k + (l - 1) * prefix_parity) % 2

