"""Finite abstract simplicial complexes with a fixed total vertex order."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices are sorted tuples of vertex indices; the set is closed under faces."""

    vertices: tuple
    simplices: frozenset

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ComplexError("vertex names must be unique")
        n = len(self.vertices)
        for s in self.simplices:
            if list(s) != sorted(set(s)) or not s or s[0] < 0 or s[-1] >= n:
                raise ComplexError(f"malformed simplex {s}")
            for k in range(1, len(s)):
                for face in combinations(s, k):
                    if face not in self.simplices:
                        raise ComplexError(f"face {face} of {s} missing from the complex")

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[str]], vertex_order: Sequence[str] = ()) -> "SimplicialComplex":
        """Close the given maximal simplices under taking faces."""
        facets = [list(f) for f in facets]
        order = list(vertex_order)
        for f in facets:
            if len(set(f)) != len(f):
                raise ComplexError(f"duplicate vertex in simplex {' '.join(f)}")
            for v in f:
                if v not in order:
                    if vertex_order:
                        raise ComplexError(f"vertex {v!r} not in the declared vertex order")
                    order.append(v)
        if not order:
            raise ComplexError("empty complex")
        index = {v: i for i, v in enumerate(order)}
        simplices = {(i,) for i in range(len(order))}
        for f in facets:
            idx = sorted(index[v] for v in f)
            for k in range(1, len(idx) + 1):
                simplices.update(combinations(idx, k))
        return cls(tuple(order), frozenset(simplices))

    @property
    def dimension(self) -> int:
        return max(len(s) for s in self.simplices) - 1

    def simplices_of_dim(self, p: int) -> list:
        return sorted(s for s in self.simplices if len(s) == p + 1)

    def f_vector(self) -> tuple:
        return tuple(len(self.simplices_of_dim(p)) for p in range(self.dimension + 1))

    def label(self, s: Sequence[int]) -> str:
        return "[" + ",".join(self.vertices[i] for i in s) + "]"


def boundary_of_simplex(n: int) -> SimplicialComplex:
    """Boundary of the n-simplex on vertices 0..n."""
    names = [str(i) for i in range(n + 1)]
    return SimplicialComplex.from_facets(combinations(names, n), names)


def minimal_torus() -> SimplicialComplex:
    """The 7-vertex (Moebius) triangulation of the torus: 7 vertices, 21 edges, 14 triangles."""
    names = [str(i) for i in range(7)]
    facets = []
    for i in range(7):
        facets.append([str(i), str((i + 1) % 7), str((i + 3) % 7)])
        facets.append([str(i), str((i + 2) % 7), str((i + 3) % 7)])
    return SimplicialComplex.from_facets(facets, names)
