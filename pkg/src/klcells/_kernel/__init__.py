"""Kernel selection: compiled extension when available, else pure Python.

Both lanes implement the same two entry points with identical outputs
(``kl_ptable`` and ``c_products``); see ``_pure`` for the algorithm
documentation.  The compiled lane packs exponent vectors into 64-bit
keys and is limited to rank <= 3 with bounded exponents and
coefficients; it raises CoefficientOverflow loudly if a computation
leaves that range, and the facade falls back to the pure lane for
ranks it cannot pack.  Set KLCELLS_PURE=1 to force the pure lane.
"""

from __future__ import annotations

import os

from . import _pure

_compiled = None
if os.environ.get("KLCELLS_PURE") != "1":
    try:
        from . import _core as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

COMPILED_MAX_RANK = 3


def backend_name(rank: int | None = None) -> str:
    if _compiled is not None and (rank is None or rank <= COMPILED_MAX_RANK):
        return "compiled"
    return "pure"


def _lane(rank: int):
    if _compiled is not None and rank <= COMPILED_MAX_RANK:
        return _compiled
    return _pure


def kl_ptable(lengths, first_letter, lmul, weights, rank):
    return _lane(rank).kl_ptable(lengths, first_letter, lmul, weights)


def c_products(lengths, lmul, weights, rank, ptable):
    return _lane(rank).c_products(lengths, lmul, weights, ptable)
