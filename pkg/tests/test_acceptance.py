"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every check is exact: a residual passes only if it is the zero vector.
Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""
import json
import os
import random
import subprocess
import sys
from functools import lru_cache
from itertools import product

import pytest

from ainfty.bundles import BUNDLE_NAMES, bundle
from ainfty.cli import main
from ainfty.dga import builtin_dga, random_dga
from ainfty.graded import GradedMap, HomogeneousVector, compose
from ainfty.hodge import build_hodge, cohomology_dims, hodge_decompose, make_datum_harmonic, make_datum_ker_dstar
from ainfty.transfer import (AInftyStructure, Subcomplex, TransferError, check_assumption, lambda_op, mu,
                             mu_closed_form, phi, random_homogeneous, theta, verify_ainfty)
from oracles import display_lambda, random_degree_minus_one, random_tuple

TOWER_ORDER = 6
BUDGET = 10 ** 5
TRIALS = 1000


RESULT_LINES = []


def report(number, ok, detail):
    """Record the criterion line; tests/conftest.py prints them all in the terminal summary."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    RESULT_LINES.append(line)
    print(line)
    return line


@lru_cache(maxsize=None)
def tower(name):
    """(structure, verification report) for a bundle, or the TransferError raised building it."""
    try:
        datum = bundle(name).datum()
    except TransferError as exc:
        return exc
    s = AInftyStructure(datum, TOWER_ORDER)
    return s, verify_ainfty(s, TOWER_ORDER, "exhaustive", TRIALS, seed=2024, budget=BUDGET)


# -- 1 ------------------------------------------------------------------------

def check_tower():
    failures = []
    for name in BUNDLE_NAMES:
        res = tower(name)
        if isinstance(res, TransferError):
            failures.append(f"{name}: datum rejected ({res})")
        elif not res[1].ok:
            failures.append(f"{name}: {res[1].to_dict()['first_counterexample']}")
    return not failures, failures


def test_criterion_1_ainfty_tower():
    ok, failures = check_tower()
    passed = [n for n in BUNDLE_NAMES if not any(f.startswith(n + ":") for f in failures)]
    report(1, ok, f"n=1..{TOWER_ORDER} residuals zero for {len(passed)}/{len(BUNDLE_NAMES)} data"
           + ("" if ok else f"; failing: {'; '.join(failures)}"))
    assert ok, failures


# -- 2 ------------------------------------------------------------------------

def _negative_controls():
    from ainfty.dga import DGA
    bad_mult = DGA.from_sparse({0: ["1"], 1: ["x"], 2: ["y"]}, {},
                               {("x", "x"): {"y": 1}, ("1", "1"): {"1": 1}, ("1", "x"): {"x": 2}})
    bad_d = DGA.from_sparse({0: ["1"], 1: ["x"]}, {"1": {"x": 1}},
                            {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}})
    phi_trips = any(not phi(bad_mult, GradedMap.zero(bad_mult.space, -1), list(t)).is_zero()
                    for t in product(bad_mult.space.basis(), repeat=3))
    theta_trips = any(not theta(bad_d, GradedMap.zero(bad_d.space, -1), list(t)).is_zero()
                      for t in product(bad_d.space.basis(), repeat=2))
    return phi_trips, theta_trips


def check_phi_theta(samples=500):
    failures = []
    for name in BUNDLE_NAMES:
        b = bundle(name)
        rng = random.Random(BUNDLE_NAMES.index(name))
        for n in range(2, 6):
            for _ in range(samples):
                args = random_tuple(rng, b.algebra.space, n, support=2)
                if n >= 3 and not phi(b.algebra, b.Q, args).is_zero():
                    failures.append(f"{name}: Phi_{n}")
                    break
                if not theta(b.algebra, b.Q, args).is_zero():
                    failures.append(f"{name}: Theta_{n}")
                    break
    phi_trips, theta_trips = _negative_controls()
    if not phi_trips:
        failures.append("negative control: Phi_3 did not detect a non-associative table")
    if not theta_trips:
        failures.append("negative control: Theta_2 did not detect a non-Leibniz differential")
    return not failures, failures


def test_criterion_2_phi_theta():
    ok, failures = check_phi_theta()
    report(2, ok, "Phi_3..5 and Theta_2..5 vanish on 500 ambient tuples per n for every datum; "
           "both negative controls trip" if ok else "; ".join(failures))
    assert ok, failures


# -- 3 ------------------------------------------------------------------------

def _display_cases():
    A = random_dga(4)
    yield "torus_harm", bundle("torus_harm").algebra, bundle("torus_harm").Q
    yield "massey_witness_harm", bundle("massey_witness_harm").algebra, bundle("massey_witness_harm").Q
    yield "random_dga(4) with random Q", A, random_degree_minus_one(A.space, seed=17)


def check_display(samples=100):
    failures = []
    for label, A, Q in _display_cases():
        rng = random.Random(3)
        for n in (3, 4, 5):
            for _ in range(samples):
                args = random_tuple(rng, A.space, n, support=3)
                if lambda_op(A, Q, args) != display_lambda(A, Q, args):
                    failures.append(f"{label}: lambda_{n}")
                    break
    return not failures, failures


def test_criterion_3_display_conformance():
    ok, failures = check_display()
    report(3, ok, "lambda_3, lambda_4, lambda_5 match the hand-expanded formulas on 100 tuples per arity"
           if ok else "; ".join(failures))
    assert ok, failures


# -- 4 ------------------------------------------------------------------------

def closed_form_mismatch(datum, samples=200):
    """First arity where the closed form and mu_n differ, or None."""
    rng = random.Random(7)
    for n in range(2, 6):
        for _ in range(samples):
            args = [datum.W.embed(w) for w in random_tuple(rng, datum.W.space, n, support=3)]
            if mu_closed_form(datum, args) != mu(datum, args):
                return n
    return None


def check_closed_form():
    failures = []
    for name in BUNDLE_NAMES:
        try:
            datum = bundle(name).datum()
        except TransferError as exc:
            failures.append(f"{name}: datum rejected ({exc})")
            continue
        n = closed_form_mismatch(datum)
        if n is not None:
            failures.append(f"{name}: n={n}")
    return not failures, failures


def test_criterion_4_closed_form():
    ok, failures = check_closed_form()
    report(4, ok, "closed form equals mu_n for n=2..5 on 200 W-tuples per datum"
           if ok else "; ".join(failures))
    assert ok, failures


# -- 5 ------------------------------------------------------------------------

COLLAPSE_ALGEBRAS = [("point", builtin_dga("point")), ("interval", builtin_dga("interval")),
                     ("exterior2", builtin_dga("exterior2")), ("dual_numbers", builtin_dga("dual_numbers"))] + \
                    [(f"random_dga({s})", random_dga(s)) for s in range(1, 6)]


def check_collapse():
    failures = []
    for label, A in COLLAPSE_ALGEBRAS:
        datum = check_assumption(A, Subcomplex.full(A.space), GradedMap.zero(A.space, -1))
        s = AInftyStructure(datum, 6)
        basis = s._wbasis
        for i, j in product(range(s.dim), repeat=2):
            if s.mu_basis((i, j)) != A.multiply(basis[i], basis[j]):
                failures.append(f"{label}: mu_2{(i, j)}")
        for k in range(3, 7):
            if any(not v.is_zero() for v in s.table(k).values()):
                failures.append(f"{label}: mu_{k} nonzero")
    return not failures, failures


def test_criterion_5_degenerate_collapse():
    ok, failures = check_collapse()
    report(5, ok, f"Q=0, W=V: mu_2 is the product table and mu_3..6 vanish on all basis tuples "
           f"({len(COLLAPSE_ALGEBRAS)} algebras)" if ok else "; ".join(failures))
    assert ok, failures


# -- 6 ------------------------------------------------------------------------

def check_hodge():
    failures = []
    expected = {"sphere2": {0: 1, 1: 0, 2: 1}, "torus": {0: 1, 1: 2, 2: 1}}
    for name, betti in expected.items():
        A = builtin_dga(name)
        pkg = build_hodge(A)
        sp = A.space
        ident = GradedMap.identity(sp)
        for g in sp.degrees():
            if g + 1 in sp.degrees():
                # (d a, b) = (a, d* b) on every pair of basis vectors
                for i, j in product(range(sp.dim(g)), range(sp.dim(g + 1))):
                    a, b = HomogeneousVector.basis(sp, g, i), HomogeneousVector.basis(sp, g + 1, j)
                    if pkg.inner(A.d(a), b) != pkg.inner(a, pkg.d_star(b)):
                        failures.append(f"{name}: adjointness")
        if compose(pkg.laplacian, pkg.green) != ident - pkg.harmonic_proj:
            failures.append(f"{name}: Laplacian Green != 1 - harmonic projector")
        if compose(A.d, pkg.green) != compose(pkg.green, A.d):
            failures.append(f"{name}: dG != Gd")
        for v in sp.basis() + [random_homogeneous(random.Random(k), sp) for k in range(20)]:
            h, ex, co = hodge_decompose(pkg, v)
            if h + ex + co != v or pkg.inner(h, ex) or pkg.inner(h, co) or pkg.inner(ex, co):
                failures.append(f"{name}: decomposition")
                break
        if pkg.betti() != betti or cohomology_dims(A) != betti:
            failures.append(f"{name}: Betti {pkg.betti()} / rank oracle {cohomology_dims(A)}, expected {betti}")
    return not failures, failures


def test_criterion_6_hodge_suite():
    ok, failures = check_hodge()
    report(6, ok, "Hodge identities exact on sphere2 and torus; Betti (1,0,1) and (1,2,1) agree with the "
           "rank oracle" if ok else "; ".join(failures))
    assert ok, failures


# -- 7 ------------------------------------------------------------------------

def check_harmonic_closure():
    pkg = build_hodge(builtin_dga("torus"))
    datum = make_datum_harmonic(pkg)
    s = AInftyStructure(datum, 2)
    failures = []
    for i, j in product(range(s.dim), repeat=2):
        val = datum.W.embed(s.mu_basis((i, j)))
        if not pkg.laplacian(val).is_zero():
            failures.append(f"mu_2{(i, j)} not harmonic")
    h1 = [i for i, (g, _) in enumerate(s.index) if g == 1]
    if len(h1) != 2 or s.mu_basis((h1[0], h1[1])).is_zero():
        failures.append("mu_2 of the two harmonic 1-cocycles vanishes")
    return not failures, failures


def test_criterion_7_harmonic_closure():
    ok, failures = check_harmonic_closure()
    report(7, ok, "torus: mu_2 of harmonic pairs is harmonic; mu_2(h1, h1') generates H^2"
           if ok else "; ".join(failures))
    assert ok, failures


# -- 8 ------------------------------------------------------------------------

def _bookkeeping_ok(args_degrees, n, value):
    expected = sum(args_degrees) + 2 - n
    return value.degree == expected and value.degree % 2 == (sum(args_degrees) + n) % 2


def check_bookkeeping():
    failures = []
    checked = 0
    for name in BUNDLE_NAMES:
        res = tower(name)
        if isinstance(res, TransferError):
            continue
        s = res[0]
        for t, v in s.stored().items():
            checked += 1
            if not _bookkeeping_ok([s.index[i][0] for i in t], len(t), v):
                failures.append(f"{name}: table entry {t}")
        rng = random.Random(1)
        for n in range(1, 6):
            for _ in range(20):
                args = [s.W.embed(w) for w in random_tuple(rng, s.W.space, n)]
                checked += 1
                if not _bookkeeping_ok([a.degree for a in args], n, mu(s.datum, args)):
                    failures.append(f"{name}: random n={n}")
    for label, A in COLLAPSE_ALGEBRAS:
        Q = random_degree_minus_one(A.space, seed=5)
        rng = random.Random(2)
        for n in range(2, 6):
            args = random_tuple(rng, A.space, n)
            lam = lambda_op(A, Q, args)
            checked += 1
            if lam.degree != sum(a.degree for a in args) + 2 - n:
                failures.append(f"{label}: lambda_{n}")
    return not failures, failures, checked


def test_criterion_8_degree_bookkeeping():
    ok, failures, checked = check_bookkeeping()
    report(8, ok, f"deg mu_n = sum deg + 2 - n and parity shift n mod 2 on {checked} evaluations"
           if ok else "; ".join(failures[:5]))
    assert ok, failures


# -- 9 ------------------------------------------------------------------------

def check_weakened():
    pkg = build_hodge(builtin_dga("interval"))
    try:
        datum = make_datum_ker_dstar(pkg)
    except TransferError as exc:
        return False, [f"interval kerdstar datum rejected: {exc} (witness {exc.witness})"]
    W = datum.W
    moved = [(g, i) for g, i in W.basis_index
             if datum.P(W.embed(HomogeneousVector.basis(W.space, g, i))) != W.embed(HomogeneousVector.basis(W.space, g, i))]
    failures = [] if moved else ["P restricted to W is the identity"]
    s = AInftyStructure(datum, TOWER_ORDER)
    rep = verify_ainfty(s, TOWER_ORDER, budget=BUDGET, trials=TRIALS)
    if not rep.ok:
        failures.append("A-infinity relations fail")
    if closed_form_mismatch(datum) is not None:
        failures.append("closed form differs from mu_n")
    return not failures, failures


def test_criterion_9_weakened_regime():
    ok, failures = check_weakened()
    report(9, ok, "kerdstar datum: P|_W != Id and criteria 1, 4 hold" if ok else "; ".join(failures))
    assert ok, failures


# -- 10 -----------------------------------------------------------------------

DETERMINISM_RUNS = [
    ["transfer", "--builtin", "torus", "--max-order", "4"],
    ["transfer", "--builtin", "massey_witness", "--max-order", "4", "--mode", "random", "--trials", "30",
     "--seed", "9"],
    ["transfer", "--builtin", "sphere2", "--subcomplex", "closed", "--max-order", "4", "--budget", "100",
     "--trials", "20", "--seed", "3"],
    ["transfer", "--builtin", "sphere2", "--subcomplex", "kerdstar"],
    ["hodge", "--builtin", "torus"],
    ["validate", "--builtin", "massey_witness"],
    ["mu3", "--builtin", "massey_witness", "1:1,0", "1:0,1", "1:0,1"],
]


def check_determinism(tmp_dir):
    failures = []
    for k, argv in enumerate(DETERMINISM_RUNS):
        outs = []
        for rep in range(2):
            path = os.path.join(tmp_dir, f"run{k}_{rep}.json")
            main(argv + ["--out", path])
            with open(path, "rb") as fh:
                outs.append(fh.read())
        env = dict(os.environ, PYTHONHASHSEED="12345")
        path = os.path.join(tmp_dir, f"run{k}_sub.json")
        subprocess.run([sys.executable, "-m", "ainfty.cli"] + argv + ["--out", path], env=env,
                       capture_output=True, check=False)
        with open(path, "rb") as fh:
            outs.append(fh.read())
        if len(set(outs)) != 1:
            failures.append(" ".join(argv))
        json.loads(outs[0])
    return not failures, failures


def test_criterion_10_determinism(tmp_path, capsys):
    ok, failures = check_determinism(str(tmp_path))
    capsys.readouterr()
    report(10, ok, f"{len(DETERMINISM_RUNS)} CLI runs byte-identical across repeats and hash seeds"
           if ok else "differs: " + "; ".join(failures))
    assert ok, failures


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
