"""Homotopy transfer of a DGA structure to a subcomplex W.

Given a DGA (V, d, .), a subcomplex W and an odd operator Q of degree -1
such that ``P = 1 - [d, Q]`` maps V into W, the tensors

    lambda_2(v1, v2) = v1 . v2
    lambda_n = - sum_{k+l=n} (-1)^(k + (l-1)(|v1|+..+|vk|)) [Q lambda_k(v1..vk)] . [Q lambda_l(..vn)]

(with the convention ``Q lambda_1 = -Id``) give an A-infinity structure on W
with ``mu_1 = d`` and ``mu_n = P lambda_n``.  P need not fix W pointwise,
nor map onto it.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from typing import Callable, Mapping, Optional, Sequence

from .dga import DGA
from .graded import (GradedMap, GradedVectorSpace, GradingError, HomogeneousVector, assoc_sign_exponent,
                     lambda_sign_exponent, supercommutator)
from .linalg import ONE, ZERO, Matrix, inverse, rank


class TransferError(ValueError):
    """Base class for datum and membership failures."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class SubcomplexError(TransferError):
    pass


class AssumptionError(TransferError):
    pass


class MembershipError(TransferError):
    pass


@dataclass(frozen=True, eq=True)
class Subcomplex:
    """W given per degree by an inclusion matrix whose columns are a basis of W."""

    ambient: GradedVectorSpace
    inclusion: Mapping[int, Matrix] = field(hash=False)

    __hash__ = None

    def __post_init__(self):
        for g in self.ambient.degrees():
            m = self.inclusion.get(g)
            if m is None:
                raise SubcomplexError(f"no inclusion given for degree {g}")
            if m.rows != self.ambient.dim(g):
                raise SubcomplexError(f"inclusion at degree {g} has {m.rows} rows, expected {self.ambient.dim(g)}")
            if rank(m) != m.cols:
                raise SubcomplexError(f"inclusion columns at degree {g} are linearly dependent")

    @classmethod
    def from_basis(cls, ambient: GradedVectorSpace, basis: Mapping[int, Sequence]) -> "Subcomplex":
        return cls(ambient, {g: Matrix.from_columns(list(basis.get(g, [])), ambient.dim(g))
                             for g in ambient.degrees()})

    @classmethod
    def full(cls, ambient: GradedVectorSpace) -> "Subcomplex":
        return cls(ambient, {g: Matrix.identity(ambient.dim(g)) for g in ambient.degrees()})

    @cached_property
    def space(self) -> GradedVectorSpace:
        return GradedVectorSpace.from_labels(
            {g: [f"w{g}_{i}" for i in range(self.inclusion[g].cols)] for g in self.ambient.degrees()})

    @cached_property
    def _left_inverse(self) -> dict:
        out = {}
        for g, m in self.inclusion.items():
            out[g] = inverse(m.T @ m) @ m.T if m.cols else Matrix.zeros(0, m.rows)
        return out

    def dim(self, g: int) -> int:
        return self.space.dim(g)

    def embed(self, w: HomogeneousVector) -> HomogeneousVector:
        w.check_in(self.space)
        g = w.degree
        if g not in self.ambient.degrees():
            return self.ambient.zero(g)
        return HomogeneousVector(g, self.inclusion[g].apply(w.coords))

    def coordinates(self, v: HomogeneousVector) -> Optional[HomogeneousVector]:
        """W-coordinates of an ambient vector, or None when it is not in W."""
        v.check_in(self.ambient)
        g = v.degree
        if g not in self.ambient.degrees():
            return self.space.zero(g)
        x = self._left_inverse[g].apply(v.coords)
        if self.inclusion[g].apply(x) != tuple(v.coords):
            return None
        return HomogeneousVector(g, x)

    def contains(self, v: HomogeneousVector) -> bool:
        return self.coordinates(v) is not None

    @cached_property
    def basis_index(self) -> list:
        """Global W-basis order: ``[(degree, index), ...]`` degree by degree."""
        return [(g, i) for g in self.space.degrees() for i in range(self.space.dim(g))]


@dataclass(frozen=True, eq=False)
class TransferDatum:
    algebra: DGA
    W: Subcomplex
    Q: GradedMap
    P: GradedMap

    @property
    def space(self) -> GradedVectorSpace:
        return self.algebra.space


def projector(algebra: DGA, Q: GradedMap) -> GradedMap:
    """``P = 1 - [d, Q]``."""
    return GradedMap.identity(algebra.space) - supercommutator(algebra.d, Q)


def check_assumption(algebra: DGA, W: Subcomplex, Q: GradedMap) -> TransferDatum:
    """Validate a homotopy datum and return it with P precomputed.

    Raises :class:`SubcomplexError` if d(W) is not inside W and
    :class:`AssumptionError` if some P(v) leaves W; both carry a witness
    ``(degree, index)``.
    """
    sp = algebra.space
    if Q.shift != -1 or Q.source != sp or Q.target != sp:
        raise AssumptionError("Q must be an endomorphism of degree -1 of the algebra's space")
    if W.ambient != sp:
        raise SubcomplexError("W lives in a different ambient space")
    for g, i in W.basis_index:
        w = W.embed(HomogeneousVector.basis(W.space, g, i))
        if not W.contains(algebra.d(w)):
            raise SubcomplexError(f"W is not d-invariant: d of W basis vector {i} in degree {g} leaves W",
                                  witness=(g, i))
    P = projector(algebra, Q)
    for g in sp.degrees():
        for i in range(sp.dim(g)):
            if not W.contains(P(HomogeneousVector.basis(sp, g, i))):
                raise AssumptionError(f"(1 - [d,Q]) of basis vector {i} in degree {g} does not lie in W",
                                      witness=(g, i))
    if not supercommutator(algebra.d, P).is_zero():
        raise AssumptionError("[d, P] does not vanish")
    return TransferDatum(algebra, W, Q, P)


def parity_sum(vectors: Sequence[HomogeneousVector]) -> int:
    return sum(v.degree for v in vectors) % 2


def _check_args(space: GradedVectorSpace, args: Sequence[HomogeneousVector]) -> None:
    for v in args:
        if not isinstance(v, HomogeneousVector):
            raise GradingError("arguments must be homogeneous vectors")
        v.check_in(space)


def _lambda_intervals(algebra: DGA, Q: GradedMap, args: Sequence[HomogeneousVector]):
    """Evaluate lambda on every contiguous run of ``args``.

    Returns ``(lam, qlam)`` keyed by ``(i, j)`` for ``args[i:j]``; ``qlam``
    holds ``Q lambda`` with ``qlam[(i, i+1)] = -args[i]``.
    """
    n = len(args)
    parity = [0]
    for v in args:
        parity.append((parity[-1] + v.degree) % 2)
    lam, qlam = {}, {}
    for i, v in enumerate(args):
        qlam[(i, i + 1)] = -v
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length
            total = None
            for m in range(i + 1, j):
                e = lambda_sign_exponent(m - i, j - m, (parity[m] - parity[i]) % 2)
                term = algebra.multiply(qlam[(i, m)], qlam[(m, j)])
                # lambda = - sum (-1)^e (...)
                term = term if e else -term
                total = term if total is None else total + term
            lam[(i, j)] = total
            qlam[(i, j)] = Q(total)
    return lam, qlam


def lambda_op(algebra: DGA, Q: GradedMap, args: Sequence[HomogeneousVector]) -> HomogeneousVector:
    """lambda_n(args) for n = len(args) >= 2."""
    if len(args) < 2:
        raise ValueError("lambda_n is defined for n >= 2 only")
    _check_args(algebra.space, args)
    lam, _ = _lambda_intervals(algebra, Q, args)
    return lam[(0, len(args))]


def _to_w(datum: TransferDatum, v: HomogeneousVector, what: str) -> HomogeneousVector:
    w = datum.W.coordinates(v)
    if w is None:
        raise MembershipError(f"{what} does not lie in W", witness=v)
    return w


def mu(datum: TransferDatum, args: Sequence[HomogeneousVector]) -> HomogeneousVector:
    """mu_n on ambient vectors lying in W; the result is in W-coordinates."""
    n = len(args)
    if n < 1:
        raise ValueError("mu_n needs n >= 1")
    _check_args(datum.space, args)
    for k, v in enumerate(args):
        _to_w(datum, v, f"argument {k}")
    if n == 1:
        return _to_w(datum, datum.algebra.d(args[0]), "d of the argument")
    lam, _ = _lambda_intervals(datum.algebra, datum.Q, args)
    return _to_w(datum, datum.P(lam[(0, n)]), "mu_n value")


def mu_w(datum: TransferDatum, wargs: Sequence[HomogeneousVector]) -> HomogeneousVector:
    """mu_n on W-coordinate vectors."""
    return mu(datum, [datum.W.embed(w) for w in wargs])


def mu_closed_form(datum: TransferDatum, args: Sequence[HomogeneousVector]) -> HomogeneousVector:
    """mu_n as a signed sum of ``[Q lambda_k] o [Q lambda_l]`` with ``a o b = P(a . b)``."""
    n = len(args)
    if n < 2:
        raise ValueError("the closed form applies to n >= 2")
    _check_args(datum.space, args)
    for k, v in enumerate(args):
        _to_w(datum, v, f"argument {k}")
    _, qlam = _lambda_intervals(datum.algebra, datum.Q, args[:-1]) if n > 2 else (None, {})
    _, qlam_tail = _lambda_intervals(datum.algebra, datum.Q, args[1:]) if n > 2 else (None, {})
    total = None
    for k in range(1, n):
        l = n - k
        left = qlam[(0, k)] if k > 1 else -args[0]
        right = qlam_tail[(k - 1, n - 1)] if l > 1 else -args[n - 1]
        e = lambda_sign_exponent(k, l, parity_sum(args[:k]))
        term = datum.P(datum.algebra.multiply(left, right))
        term = term if e else -term
        total = term if total is None else total + term
    return _to_w(datum, total, "closed-form value")


def _insert(algebra: DGA, Q: GradedMap, args, j, l, inner_op=None):
    """lambda_k(v_1..v_j, X, v_{j+l+1}..) with X = inner_op(lambda_l(v_{j+1}..v_{j+l}))."""
    inner = lambda_op(algebra, Q, args[j:j + l])
    if inner_op is not None:
        inner = inner_op(inner)
    return lambda_op(algebra, Q, list(args[:j]) + [inner] + list(args[j + l:]))


def phi(algebra: DGA, Q: GradedMap, args: Sequence[HomogeneousVector]) -> HomogeneousVector:
    """Sum over k+l = n+1 (k, l >= 2) and j of (-1)^r lambda_k(.., lambda_l(..), ..); vanishes identically."""
    n = len(args)
    if n < 3:
        raise ValueError("Phi_n is defined for n >= 3")
    _check_args(algebra.space, args)
    total = None
    for k in range(2, n):
        l = n + 1 - k
        for j in range(k):
            r = assoc_sign_exponent(k, l, j, parity_sum(args[:j]))
            term = _insert(algebra, Q, args, j, l).signed(r)
            total = term if total is None else total + term
    return total


def theta(algebra: DGA, Q: GradedMap, args: Sequence[HomogeneousVector]) -> HomogeneousVector:
    """d lambda_n + sum_j (-1)^(n-1+|v1..vj|) lambda_n(.., dv_{j+1}, ..) - sum (-1)^r lambda_k(.., [d,Q] lambda_l, ..)."""
    n = len(args)
    if n < 2:
        raise ValueError("Theta_n is defined for n >= 2")
    _check_args(algebra.space, args)
    d = algebra.d
    dq = supercommutator(d, Q)
    total = d(lambda_op(algebra, Q, args))
    for j in range(n):
        shifted = list(args[:j]) + [d(args[j])] + list(args[j + 1:])
        total = total + lambda_op(algebra, Q, shifted).signed(n - 1 + parity_sum(args[:j]))
    for k in range(2, n):
        l = n + 1 - k
        for j in range(k):
            r = assoc_sign_exponent(k, l, j, parity_sum(args[:j]))
            total = total - _insert(algebra, Q, args, j, l, dq).signed(r)
    return total


def psi_ambient(datum: TransferDatum, args: Sequence[HomogeneousVector]) -> HomogeneousVector:
    """Left-hand side of the A-infinity relation with mu_1 = d, mu_k = P lambda_k on all of V."""
    algebra, P = datum.algebra, datum.P

    def m(xs):
        if len(xs) == 1:
            return algebra.d(xs[0])
        return P(lambda_op(algebra, datum.Q, xs))

    return ainfty_residual(m, list(args))


def ainfty_residual(mu_fn: Callable, args: Sequence[HomogeneousVector]) -> HomogeneousVector:
    """``sum_{k+l=n+1} sum_j (-1)^r mu_k(v_1..v_j, mu_l(v_{j+1}..v_{j+l}), ..)``.

    ``mu_fn`` maps a list of vectors to a vector of the same kind.
    """
    n = len(args)
    total = None
    for k in range(1, n + 1):
        l = n + 1 - k
        for j in range(k):
            inner = mu_fn(list(args[j:j + l]))
            r = assoc_sign_exponent(k, l, j, parity_sum(args[:j]))
            term = mu_fn(list(args[:j]) + [inner] + list(args[j + l:])).signed(r)
            total = term if total is None else total + term
    return total


class AInftyStructure:
    """mu_n tables on W-basis tuples for n <= max_order, filled lazily.

    Q lambda on W-basis tuples is memoized, so each tuple costs n-1
    products once its prefixes and suffixes are known.  Cache writes go
    through a lock; reads are lock-free.
    """

    def __init__(self, datum: TransferDatum, max_order: int, preset: Optional[Mapping[tuple, HomogeneousVector]] = None):
        if max_order < 1:
            raise ValueError("max_order must be at least 1")
        self.datum = datum
        self.max_order = max_order
        self._lock = threading.Lock()
        self._qlam: dict = {}
        self._mu: dict = dict(preset or {})
        self._sparse: dict = {}
        self.W = datum.W
        self.index = datum.W.basis_index
        self._wbasis = [HomogeneousVector.basis(self.W.space, g, i) for g, i in self.index]
        self._embedded = [self.W.embed(w) for w in self._wbasis]
        self._offsets = {}
        k = 0
        for g in self.W.space.degrees():
            self._offsets[g] = k
            k += self.W.space.dim(g)

    @property
    def dim(self) -> int:
        return len(self.index)

    def degree_of(self, t: Sequence[int]) -> int:
        return sum(self.index[i][0] for i in t) + 2 - len(t)

    def _store(self, cache: dict, key, value):
        with self._lock:
            return cache.setdefault(key, value)

    def qlambda(self, t: tuple) -> HomogeneousVector:
        if len(t) == 1:
            return -self._embedded[t[0]]
        hit = self._qlam.get(t)
        if hit is not None:
            return hit
        return self._store(self._qlam, t, self.datum.Q(self.lambda_(t)))

    def lambda_(self, t: tuple) -> HomogeneousVector:
        algebra = self.datum.algebra
        n = len(t)
        g = self.degree_of(t)
        if not algebra.space.dim(g):
            return algebra.space.zero(g)
        total = algebra.space.zero(g)
        prefix = 0
        for m in range(1, n):
            prefix = (prefix + self.index[t[m - 1]][0]) % 2
            e = lambda_sign_exponent(m, n - m, prefix)
            term = algebra.multiply(self.qlambda(t[:m]), self.qlambda(t[m:]))
            total = total + (term if e else -term)
        return total

    def mu_basis(self, t: tuple) -> HomogeneousVector:
        """mu_n on the W-basis tuple ``t`` (global indices), in W-coordinates."""
        t = tuple(t)
        hit = self._mu.get(t)
        if hit is not None:
            return hit
        if len(t) > self.max_order:
            raise ValueError(f"order {len(t)} exceeds max_order {self.max_order}")
        if len(t) == 1:
            value = _to_w(self.datum, self.datum.algebra.d(self._embedded[t[0]]), "d of a W vector")
        else:
            g = self.degree_of(t)
            if not self.W.space.dim(g):
                value = self.W.space.zero(g)
            else:
                value = _to_w(self.datum, self.datum.P(self.lambda_(t)), "mu_n value")
        return self._store(self._mu, t, value)

    def evaluate(self, wargs: Sequence[HomogeneousVector]) -> HomogeneousVector:
        """mu_n on W-coordinate vectors by multilinear expansion over the tables."""
        offsets = self._offsets
        supports = []
        for w in wargs:
            w.check_in(self.W.space)
            supports.append([(offsets[w.degree] + i, c) for i, c in enumerate(w.coords) if c])
        g = sum(w.degree for w in wargs) + 2 - len(wargs)
        out = [ZERO] * self.W.space.dim(g)
        for combo in iproduct(*supports):
            t = tuple(i for i, _ in combo)
            entries = self._sparse.get(t)
            if entries is None:
                val = self.mu_basis(t)
                if val.degree != g:
                    raise GradingError(f"table entry has degree {val.degree}, expected {g}")
                entries = self._store(self._sparse, t, [(i, x) for i, x in enumerate(val.coords) if x])
            if not entries:
                continue
            coeff = ONE
            for _, c in combo:
                if c != ONE:
                    coeff *= c
            for i, x in entries:
                out[i] += x if coeff == ONE else coeff * x
        return HomogeneousVector(g, tuple(out))

    def table(self, n: int) -> dict:
        """Every n-tuple of W-basis indices mapped to its mu_n value."""
        return {t: self.mu_basis(t) for t in iproduct(range(self.dim), repeat=n)}

    def stored(self) -> dict:
        return dict(self._mu)


@dataclass
class VerificationReport:
    per_order: list = field(default_factory=list)
    first_counterexample: Optional[dict] = None
    seed: int = 0
    budget: int = 10 ** 5

    @property
    def ok(self) -> bool:
        return self.first_counterexample is None and all(e["ok"] for e in self.per_order)

    def to_dict(self) -> dict:
        from .io import vector_to_json
        ce = None
        if self.first_counterexample is not None:
            ce = dict(self.first_counterexample)
            ce["residual"] = vector_to_json(ce["residual"])
            if "args" in ce:
                ce["args"] = [vector_to_json(v) for v in ce["args"]]
        return {"ok": self.ok, "seed": self.seed, "budget": self.budget,
                "per_order": [dict(e) for e in self.per_order], "first_counterexample": ce}


def random_homogeneous(rng: random.Random, space: GradedVectorSpace, degree: Optional[int] = None,
                       span: int = 3, support: Optional[int] = None) -> HomogeneousVector:
    """Random vector in one degree (chosen among nonzero ones unless given), small rational entries.

    ``support`` caps the number of nonzero coordinates; large ambient
    spaces stay cheap that way.
    """
    degrees = [g for g in space.degrees() if space.dim(g)]
    g = rng.choice(degrees) if degree is None else degree
    n = space.dim(g)
    live = range(n) if support is None or support >= n else rng.sample(range(n), support)
    coords = [ZERO] * n
    for i in live:
        coords[i] = Fraction(rng.randint(-span, span), 1 if rng.random() < 0.8 else rng.randint(1, span))
    return HomogeneousVector.of(g, coords)


def verify_ainfty(structure: AInftyStructure, n_max: int, mode: str = "exhaustive", trials: int = 1000,
                  seed: int = 0, budget: int = 10 ** 5) -> VerificationReport:
    """Check the A-infinity relations for 1 <= n <= n_max.

    Exhaustive mode runs over all W-basis n-tuples while their number stays
    within ``budget``, then switches to ``trials`` seeded random homogeneous
    tuples evaluated directly from the datum.
    """
    if n_max > structure.max_order:
        raise ValueError("n_max exceeds the structure's max_order")
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {mode!r}")
    report = VerificationReport(seed=seed, budget=budget)
    W = structure.W
    datum = structure.datum
    rng = random.Random(seed)
    wspace = W.space
    if not structure.dim:
        for n in range(1, n_max + 1):
            report.per_order.append({"n": n, "mode": "exhaustive", "tuples": 1, "ok": True})
        return report
    for n in range(1, n_max + 1):
        count = structure.dim ** n
        ok = True
        if mode == "exhaustive" and count <= budget:
            for t in iproduct(range(structure.dim), repeat=n):
                args = [structure._wbasis[i] for i in t]
                res = ainfty_residual(structure.evaluate, args)
                if not res.is_zero():
                    ok = False
                    if report.first_counterexample is None:
                        report.first_counterexample = {"n": n, "tuple": list(t), "residual": res}
                    break
            report.per_order.append({"n": n, "mode": "exhaustive", "tuples": count, "ok": ok})
        else:
            def direct(wargs):
                return mu_w(datum, wargs)
            for _ in range(trials):
                args = [random_homogeneous(rng, wspace) for _ in range(n)]
                res = ainfty_residual(direct, args)
                if not res.is_zero():
                    ok = False
                    if report.first_counterexample is None:
                        report.first_counterexample = {"n": n, "args": args, "residual": res}
                    break
            entry = {"n": n, "mode": "random", "tuples": trials, "ok": ok}
            if mode == "exhaustive":
                entry["switched_from_exhaustive"] = True
            report.per_order.append(entry)
    return report
