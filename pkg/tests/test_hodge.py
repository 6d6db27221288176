import random

import pytest

from ainfty.dga import builtin_dga
from ainfty.hodge import (HodgeError, build_hodge, cohomology_dims, hodge_decompose, hodge_residuals, homotopy,
                          make_datum_closed, make_datum_harmonic, make_datum_ker_dstar)
from ainfty.linalg import Matrix, solve_linear
from ainfty.transfer import AInftyStructure, SubcomplexError, mu_w, random_homogeneous, verify_ainfty
from oracles import massey_triple_oracle

EXPECTED_BETTI = {"point": [1], "interval": [1, 0], "sphere2": [1, 0, 1], "torus": [1, 2, 1],
                  "massey_witness": [1, 2, 2], "exterior2": [1, 2, 1]}


@pytest.mark.parametrize("name", sorted(EXPECTED_BETTI))
def test_betti_numbers(name):
    A = builtin_dga(name)
    pkg = build_hodge(A)
    betti = pkg.betti()
    assert [betti[g] for g in A.space.degrees()] == EXPECTED_BETTI[name]
    assert betti == cohomology_dims(A)


@pytest.mark.parametrize("name", ["sphere2", "torus"])
def test_identities_exact(name):
    pkg = build_hodge(builtin_dga(name))
    for label, ms in hodge_residuals(pkg).items():
        assert all(m.is_zero() for m in ms), label


def _weighted_gram(A, seed):
    rng = random.Random(seed)
    return {g: Matrix.diag([rng.randint(1, 4) for _ in range(A.space.dim(g))]) for g in A.space.degrees()}


def test_weighted_gram_keeps_identities_and_betti():
    A = builtin_dga("torus")
    pkg = build_hodge(A, _weighted_gram(A, 3), "diag")
    assert pkg.gram_description == "diag"
    for ms in hodge_residuals(pkg).values():
        assert all(m.is_zero() for m in ms)
    assert pkg.betti() == cohomology_dims(A)


def test_non_positive_gram_rejected():
    A = builtin_dga("interval")
    gram = {0: Matrix.from_rows([[1, 2], [2, 1]]), 1: Matrix.identity(1)}
    with pytest.raises(HodgeError):
        build_hodge(A, gram)


@pytest.mark.parametrize("name", ["sphere2", "torus"])
def test_decomposition_orthogonal(name):
    A = builtin_dga(name)
    pkg = build_hodge(A, _weighted_gram(A, 1))
    rng = random.Random(0)
    for _ in range(10):
        alpha = random_homogeneous(rng, A.space)
        h, ex, co = hodge_decompose(pkg, alpha)
        assert h + ex + co == alpha
        assert pkg.inner(h, ex) == 0 and pkg.inner(h, co) == 0 and pkg.inner(ex, co) == 0
        assert pkg.laplacian(h).is_zero()


def test_projector_is_one_minus_commutator():
    pkg = build_hodge(builtin_dga("torus"))
    datum = make_datum_harmonic(pkg)
    assert datum.P == pkg.harmonic_proj


def test_kerdstar_is_not_d_invariant():
    # ker d* contains every 0-cochain, but d of a non-constant 0-cochain is not coclosed
    pkg = build_hodge(builtin_dga("interval"))
    with pytest.raises(SubcomplexError) as exc:
        make_datum_ker_dstar(pkg)
    assert exc.value.witness[0] == 0


def test_kerdstar_on_zero_differential():
    pkg = build_hodge(builtin_dga("exterior2"))
    datum = make_datum_ker_dstar(pkg)
    assert verify_ainfty(AInftyStructure(datum, 4), 4).ok


def test_closed_datum_contains_harmonics_strictly():
    pkg = build_hodge(builtin_dga("sphere2"))
    datum = make_datum_closed(pkg)
    betti = pkg.betti()
    assert any(datum.W.space.dim(g) > betti[g] for g in datum.W.space.degrees())
    assert homotopy(pkg) == datum.Q


def test_torus_harmonic_product():
    datum = make_datum_harmonic(build_hodge(builtin_dga("torus")))
    s = AInftyStructure(datum, 2)
    h1 = [i for i, (g, _) in enumerate(s.index) if g == 1]
    assert not s.mu_basis((h1[0], h1[1])).is_zero()


def test_massey_mu3_matches_defining_system():
    A = builtin_dga("massey_witness")
    pkg = build_hodge(A)
    datum = make_datum_harmonic(pkg)
    x, y = A.basis_vector(1, 0), A.basis_vector(1, 1)
    rep = massey_triple_oracle(A, x, y, y)
    wx, wy = datum.W.coordinates(x), datum.W.coordinates(y)
    value = datum.W.embed(mu_w(datum, [wx, wy, wy]))
    harmonic_rep = pkg.harmonic_proj(rep)
    assert not value.is_zero()
    assert value == harmonic_rep or value == -harmonic_rep
    # not a coboundary in the ambient algebra
    assert solve_linear(A.d.blocks[1], value.coords) is None


def test_mu3_vanishes_when_products_vanish():
    # x x = 0 in massey_witness, so every term of lambda_3(x, x, x) vanishes
    A = builtin_dga("massey_witness")
    datum = make_datum_harmonic(build_hodge(A))
    wx = datum.W.coordinates(A.basis_vector(1, 0))
    assert mu_w(datum, [wx, wx, wx]).is_zero()
