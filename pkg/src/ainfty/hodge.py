"""Finite-dimensional Hodge theory on a cochain complex with per-degree inner products.

With ``d* = G^-1 d^T G`` (G the gram matrix), the Laplacian ``d d* + d* d``
is self-adjoint; its kernel is the harmonic space, and the Green operator
inverts it on the orthogonal complement and vanishes on harmonics.  The
operator ``Q = d* G_d`` then satisfies ``1 - [d, Q] = harmonic projection``,
which is what the transfer datum needs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .dga import DGA
from .graded import GradedMap, HomogeneousVector, compose, supercommutator
from .linalg import (Matrix, ZERO, inverse, invert_on_complement, is_positive_definite, kernel_basis,
                     orthogonal_projector, rank)
from .transfer import Subcomplex, TransferDatum, check_assumption


class HodgeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HodgePackage:
    algebra: DGA
    gram: Mapping[int, Matrix] = field(repr=False)
    d_star: GradedMap = field(repr=False)
    laplacian: GradedMap = field(repr=False)
    harmonic_proj: GradedMap = field(repr=False)
    green: GradedMap = field(repr=False)
    harmonic_basis: Mapping[int, list] = field(repr=False)
    gram_description: str = "identity"

    def betti(self) -> dict:
        return {g: len(self.harmonic_basis[g]) for g in self.algebra.space.degrees()}

    def inner(self, a: HomogeneousVector, b: HomogeneousVector):
        if a.degree != b.degree:
            return ZERO
        g = self.gram.get(a.degree)
        if g is None:
            return ZERO
        return sum((x * y for x, y in zip(a.coords, g.apply(b.coords))), ZERO)


def identity_gram(algebra: DGA) -> dict:
    return {g: Matrix.identity(algebra.space.dim(g)) for g in algebra.space.degrees()}


def build_hodge(algebra: DGA, gram: Optional[Mapping[int, Matrix]] = None,
                gram_description: Optional[str] = None) -> HodgePackage:
    sp = algebra.space
    if gram is None:
        gram = identity_gram(algebra)
        gram_description = gram_description or "identity"
    gram = dict(gram)
    for g in sp.degrees():
        G = gram.get(g)
        if G is None or G.shape != (sp.dim(g), sp.dim(g)):
            raise HodgeError(f"gram matrix missing or misshaped in degree {g}")
        if not is_positive_definite(G):
            raise HodgeError(f"gram matrix in degree {g} is not symmetric positive definite")
    ginv = {g: inverse(gram[g]) for g in sp.degrees()}

    # d* on degree g maps V_g -> V_{g-1}: G_{g-1}^-1 d_{g-1}^T G_g
    blocks = {}
    for g in sp.degrees():
        if g - 1 in sp.degrees():
            blocks[g] = ginv[g - 1] @ algebra.d.block(g - 1).T @ gram[g]
        else:
            blocks[g] = Matrix.zeros(0, sp.dim(g))
    d_star = GradedMap(sp, sp, -1, blocks)
    lap = supercommutator(algebra.d, d_star)  # d d* + d* d

    harm, proj_blocks, green_blocks = {}, {}, {}
    for g in sp.degrees():
        L = lap.blocks[g]
        K = kernel_basis(L)
        harm[g] = K
        proj_blocks[g] = orthogonal_projector(K, gram[g])
        green_blocks[g] = invert_on_complement(L, K, gram[g])
    proj = GradedMap(sp, sp, 0, proj_blocks)
    green = GradedMap(sp, sp, 0, green_blocks)
    pkg = HodgePackage(algebra, gram, d_star, lap, proj, green, harm, gram_description or "custom")
    _assert_identities(pkg)
    return pkg


def hodge_residuals(pkg: HodgePackage) -> dict:
    """Name -> list of matrices that must all vanish exactly."""
    A, sp = pkg.algebra, pkg.algebra.space
    d, ds, G, H, L = A.d, pkg.d_star, pkg.green, pkg.harmonic_proj, pkg.laplacian
    ident = GradedMap.identity(sp)
    # (d a, b) = (a, d* b)  <=>  d_g^T G_{g+1} = G_g d*_{g+1}
    adjoint = [A.d.blocks[g].T @ pkg.gram[g + 1] - pkg.gram[g] @ ds.blocks[g + 1]
               for g in sp.degrees() if g + 1 in sp.degrees()]
    maps = {
        "dstar_squared": compose(ds, ds),
        "laplacian_green": compose(L, G) - (ident - H),
        "green_laplacian": compose(G, L) - (ident - H),
        "green_harmonic": compose(G, H),
        "d_green": compose(d, G) - compose(G, d),
        "dstar_green": compose(ds, G) - compose(G, ds),
        "proj_idempotent": compose(H, H) - H,
        "harmonic_closed": compose(d, H),
        "harmonic_coclosed": compose(ds, H),
    }
    out = {"adjoint": adjoint}
    for name, m in maps.items():
        out[name] = list(m.blocks.values())
    out["proj_self_adjoint"] = [pkg.gram[g] @ H.blocks[g] - H.blocks[g].T @ pkg.gram[g] for g in sp.degrees()]
    return out


def _assert_identities(pkg: HodgePackage) -> None:
    for name, ms in hodge_residuals(pkg).items():
        if not all(m.is_zero() for m in ms):
            raise HodgeError(f"Hodge identity {name!r} fails")


def hodge_decompose(pkg: HodgePackage, alpha: HomogeneousVector) -> tuple:
    """``(harmonic, d G d* alpha, d* G d alpha)``; the parts sum to alpha."""
    d, ds, G = pkg.algebra.d, pkg.d_star, pkg.green
    harmonic = pkg.harmonic_proj(alpha)
    exact = d(G(ds(alpha)))
    coexact = ds(G(d(alpha)))
    return harmonic, exact, coexact


def homotopy(pkg: HodgePackage) -> GradedMap:
    """``Q = d* G`` (degree -1)."""
    return compose(pkg.d_star, pkg.green)


def make_datum_harmonic(pkg: HodgePackage) -> TransferDatum:
    """W = harmonic cochains, Q = d* G; P is the harmonic projector and fixes W."""
    W = Subcomplex.from_basis(pkg.algebra.space, pkg.harmonic_basis)
    return check_assumption(pkg.algebra, W, homotopy(pkg))


def make_datum_ker_dstar(pkg: HodgePackage) -> TransferDatum:
    """W = ker d*, Q = d* G.

    ker d* is generally *not* closed under d (d* d a = 0 forces d a = 0 for
    a in ker d*), so :func:`check_assumption` rejects this datum with a
    witness whenever d is nonzero on ker d*.  See :func:`make_datum_closed`.
    """
    sp = pkg.algebra.space
    basis = {g: kernel_basis(pkg.d_star.blocks[g]) for g in sp.degrees()}
    W = Subcomplex.from_basis(sp, basis)
    return check_assumption(pkg.algebra, W, homotopy(pkg))


def make_datum_closed(pkg: HodgePackage) -> TransferDatum:
    """W = ker d (harmonic plus exact cochains), Q = d* G.

    P is still the harmonic projector: its image lies in W but is smaller
    than W, and P kills the exact part, so ``P|_W != Id`` as soon as some
    differential is nonzero.
    """
    sp = pkg.algebra.space
    basis = {g: kernel_basis(pkg.algebra.d.blocks[g]) for g in sp.degrees()}
    W = Subcomplex.from_basis(sp, basis)
    return check_assumption(pkg.algebra, W, homotopy(pkg))


def cohomology_dims(algebra: DGA) -> dict:
    """dim ker d_g - rank d_{g-1}, by rank computations only."""
    sp = algebra.space
    out = {}
    for g in sp.degrees():
        r_out = rank(algebra.d.blocks[g])
        r_in = rank(algebra.d.blocks[g - 1]) if g - 1 in sp.degrees() else 0
        out[g] = sp.dim(g) - r_out - r_in
    return out
