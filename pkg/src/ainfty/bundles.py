"""Named transfer data used throughout the test and acceptance suites."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .dga import DGA, builtin_dga, random_dga
from .graded import GradedMap
from .hodge import build_hodge, homotopy, make_datum_closed, make_datum_harmonic, make_datum_ker_dstar
from .transfer import Subcomplex, TransferDatum, check_assumption


@dataclass(frozen=True)
class Bundle:
    """An algebra with a homotopy Q and a recipe for W.

    ``algebra`` and ``Q`` are always available; ``datum()`` may raise when
    the recipe does not produce a valid transfer datum.
    """

    name: str
    algebra: DGA
    Q: GradedMap
    make: Callable[[], TransferDatum]

    def datum(self) -> TransferDatum:
        return self.make()


def _hodge_bundle(label: str, algebra_name: str, kind: str) -> Bundle:
    pkg = build_hodge(builtin_dga(algebra_name))
    maker = {"harm": make_datum_harmonic, "kerdstar": make_datum_ker_dstar, "closed": make_datum_closed}[kind]
    return Bundle(label, pkg.algebra, homotopy(pkg), lambda: maker(pkg))


def _zero_q_bundle(label: str, algebra: DGA) -> Bundle:
    Q = GradedMap.zero(algebra.space, -1)
    return Bundle(label, algebra, Q, lambda: check_assumption(algebra, Subcomplex.full(algebra.space), Q))


@lru_cache(maxsize=None)
def bundle(name: str) -> Bundle:
    """Look up a bundle by name (see :data:`BUNDLE_NAMES`)."""
    if name.startswith("random_q0_"):
        seed = int(name.rsplit("_", 1)[1])
        return _zero_q_bundle(name, random_dga(seed))
    if name.endswith("_q0"):
        return _zero_q_bundle(name, builtin_dga(name[:-3]))
    algebra_name, _, kind = name.rpartition("_")
    return _hodge_bundle(name, algebra_name, kind)


# massey_witness_harm: identity gram, W = harmonic cochains, Q = d* G.
BUNDLE_NAMES = ("sphere2_harm", "sphere2_kerdstar", "torus_harm", "interval_harm",
                "random_q0_1", "random_q0_2", "random_q0_3", "random_q0_4", "random_q0_5",
                "massey_witness_harm")

# W = ker d with the same Q: P is not the identity on W.
WEAKENED_NAMES = ("interval_closed", "sphere2_closed", "massey_witness_closed")
