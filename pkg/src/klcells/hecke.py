"""The Hecke algebra of a finite Coxeter group and its canonical basis.

A positive subset X of the class lattice fixes a totally ordered
parameter group (Z^r, lex) together with one weight phi(s) in Z^r per
generator class; the algebra is the free Z[Z^r]-module on (T_w) with

    T_w T_w' = T_ww'                     when lengths add,
    (T_s - e^{phi(s)})(T_s + e^{-phi(s)}) = 0.

The bar involution fixes every T_s with phi(s) = 0, so zero and negative
weights need no special-casing anywhere: the canonical basis C_w (the
unique bar-invariant element congruent to T_w modulo lex-negative
coefficients) is computed by the fully general triangular solve in the
kernel, not by any positivity-dependent recursion.

Tables are cached on disk keyed by the group and the canonical flag;
cache files are canonical JSON (gzip), so a cache hit is byte-identical
to what recomputation would serialize.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field

from . import _kernel
from .coxeter import CoxeterSystem, Element
from .errors import ValidationError
from .laurent import LaurentPoly
from .paramspace import PositiveSubset

CACHE_SCHEMA = "klcells/1"


@dataclass(frozen=True)
class HeckeContext:
    """A group together with one exponent vector per generator."""

    sys: CoxeterSystem
    pos: PositiveSubset
    rank: int
    weights: tuple[tuple[int, ...], ...]  # per generator index

    def weight_of(self, s) -> tuple[int, ...]:
        return self.weights[self.sys.generator_index(s)]

    def xi(self, s) -> LaurentPoly:
        """e^{phi(s)} - e^{-phi(s)}; zero iff phi(s) = 0."""
        w = self.weight_of(s)
        out = LaurentPoly(self.rank)
        if any(w):
            out.terms = {w: 1, tuple(-x for x in w): -1}
        return out


def specialize(sys: CoxeterSystem, pos: PositiveSubset) -> HeckeContext:
    """Evaluate the generic parameter through the canonical map of the
    positive subset: each class basis vector goes to its flag values."""
    if pos.dim != sys.num_classes:
        raise ValidationError(
            f"positive subset has dimension {pos.dim}, group has "
            f"{sys.num_classes} generator classes"
        )
    weights = []
    for s in range(len(sys.generators)):
        ci = sys.generator_class[s]
        basis = tuple(1 if j == ci else 0 for j in range(pos.dim))
        weights.append(pos.embed(basis))
    return HeckeContext(sys, pos, pos.rank, tuple(weights))


def context_from_weights(sys: CoxeterSystem, weight_vector) -> HeckeContext:
    """Context for an integer weight per class (a single-form flag)."""
    vec = tuple(int(x) for x in weight_vector)
    if len(vec) != sys.num_classes:
        raise ValidationError("one weight per generator class required")
    pos = PositiveSubset(sys.num_classes, (vec,) if any(vec) else ())
    return specialize(sys, pos)


class HeckeElement:
    """An element in the T-basis: {element id: LaurentPoly}."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: HeckeContext, terms=None):
        self.ctx = ctx
        self.terms: dict[int, LaurentPoly] = {}
        if terms:
            for wid, poly in terms.items():
                if poly:
                    self.terms[wid] = poly

    @classmethod
    def t_basis(cls, ctx: HeckeContext, w: Element | int) -> "HeckeElement":
        wid = w.id if isinstance(w, Element) else w
        return cls(ctx, {wid: LaurentPoly.one(ctx.rank)})

    def coefficient(self, w: Element | int) -> LaurentPoly:
        wid = w.id if isinstance(w, Element) else w
        return self.terms.get(wid, LaurentPoly.zero(self.ctx.rank))

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        terms = dict(self.terms)
        for wid, poly in other.terms.items():
            new = terms.get(wid, LaurentPoly.zero(self.ctx.rank)) + poly
            if new:
                terms[wid] = new
            else:
                terms.pop(wid, None)
        return HeckeElement(self.ctx, terms)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + other.scale(-1)

    def scale(self, factor) -> "HeckeElement":
        if isinstance(factor, int):
            factor = LaurentPoly.constant(self.ctx.rank, factor)
        return HeckeElement(
            self.ctx, {wid: poly * factor for wid, poly in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        sys = self.ctx.sys
        chunks = [
            f"({poly.text()})T[{sys.word_text(sys.elements[wid])}]"
            for wid, poly in sorted(self.terms.items())
        ]
        return " + ".join(chunks) if chunks else "0"


def t_multiply(ctx: HeckeContext, s, h: HeckeElement, side: str = "left") -> HeckeElement:
    """T_s * h (or h * T_s): per T_w term the result is T_{sw} when sw is
    longer, and T_{sw} + (e^{phi(s)} - e^{-phi(s)}) T_w otherwise."""
    si = ctx.sys.generator_index(s)
    table = ctx.sys._left if side == "left" else ctx.sys._right
    lengths = ctx.sys.elements
    xi = ctx.xi(si)
    out: dict[int, LaurentPoly] = {}
    zero = LaurentPoly.zero(ctx.rank)

    def add(wid, poly):
        new = out.get(wid, zero) + poly
        if new:
            out[wid] = new
        else:
            out.pop(wid, None)

    for wid, poly in h.terms.items():
        swid = table[wid][si]
        add(swid, poly)
        if lengths[swid].length < lengths[wid].length and xi:
            add(wid, xi * poly)
    return HeckeElement(ctx, out)


def bar_expand(ctx: HeckeContext) -> list[HeckeElement]:
    """T-basis expansion of bar(T_w) for every w, by length recursion
    bar(T_{sw'}) = T_s^{-1} bar(T_{w'}) with T_s^{-1} = T_s - xi_s."""
    sys = ctx.sys
    out = [HeckeElement.t_basis(ctx, 0)]
    for w in sys.elements[1:]:
        s = w.word[0]
        prev = out[sys._left[w.id][s]]
        step = t_multiply(ctx, s, prev, "left")
        xi = ctx.xi(s)
        if xi:
            step = step - prev.scale(xi)
        out.append(step)
    return out


class KLTable:
    """The unitriangular table p[y, w] of the canonical basis
    C_w = T_w + sum_{y shorter} p[y, w] T_y, with every off-diagonal
    entry supported on lex-negative exponents and bar(C_w) = C_w."""

    def __init__(self, ctx: HeckeContext, raw_ptable):
        self.ctx = ctx
        self._raw = raw_ptable  # list over w of {y: {exp: coeff}}
        self._products = None

    def p(self, y: Element | int, w: Element | int) -> LaurentPoly:
        yid = y.id if isinstance(y, Element) else y
        wid = w.id if isinstance(w, Element) else w
        if yid == wid:
            return LaurentPoly.one(self.ctx.rank)
        terms = self._raw[wid].get(yid)
        if not terms:
            return LaurentPoly.zero(self.ctx.rank)
        return LaurentPoly(self.ctx.rank, terms)

    def support(self, w: Element | int) -> list[int]:
        wid = w.id if isinstance(w, Element) else w
        return sorted(self._raw[wid]) + [wid]

    def c_element(self, w: Element | int) -> HeckeElement:
        wid = w.id if isinstance(w, Element) else w
        terms = {
            yid: LaurentPoly(self.ctx.rank, poly)
            for yid, poly in self._raw[wid].items()
        }
        terms[wid] = LaurentPoly.one(self.ctx.rank)
        return HeckeElement(self.ctx, terms)

    def c_products(self):
        """Expansions of T_s * C_y in the C-basis, for every generator s
        and element y: list over s of list over y of {x: raw poly}."""
        if self._products is None:
            sys = self.ctx.sys
            lengths = [e.length for e in sys.elements]
            self._products = _kernel.c_products(
                lengths, _left_by_gen(sys), self.ctx.weights, self.ctx.rank, self._raw
            )
        return self._products

    # -- serialization ----------------------------------------------------

    def payload(self) -> dict:
        entries = []
        for wid, col in enumerate(self._raw):
            for yid in sorted(col):
                poly = [[list(e), c] for e, c in sorted(col[yid].items())]
                entries.append([yid, wid, poly])
        return {
            "schema": CACHE_SCHEMA,
            "kind": "kl_table",
            "group": self.ctx.sys.descriptor(),
            "flag": [list(f) for f in self.ctx.pos.flag],
            "rank": self.ctx.rank,
            "p": entries,
        }

    def serialize(self) -> bytes:
        return json.dumps(self.payload(), sort_keys=True, separators=(",", ":")).encode()

    @classmethod
    def from_payload(cls, ctx: HeckeContext, payload: dict) -> "KLTable":
        if payload.get("schema") != CACHE_SCHEMA or payload.get("kind") != "kl_table":
            raise ValidationError("not a kl_table cache payload")
        raw = [dict() for _ in range(ctx.sys.order)]
        for yid, wid, poly in payload["p"]:
            raw[wid][yid] = {tuple(e): c for e, c in poly}
        return cls(ctx, raw)


def _left_by_gen(sys: CoxeterSystem) -> list[list[int]]:
    """Left multiplication indexed [generator][element], as the kernel
    lanes expect."""
    n_gens = len(sys.generators)
    return [
        [sys._left[wid][s] for wid in range(sys.order)] for s in range(n_gens)
    ]


def table_fingerprint(ctx: HeckeContext) -> str:
    key = {
        "schema": CACHE_SCHEMA,
        "group": ctx.sys.descriptor(),
        "flag": [list(f) for f in ctx.pos.flag],
    }
    blob = json.dumps(key, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def kl_table(ctx: HeckeContext, cache_dir: str | None = None) -> KLTable:
    """Compute (or load) the canonical-basis table for the context."""
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, table_fingerprint(ctx) + ".json.gz")
        if os.path.exists(path):
            with gzip.open(path, "rb") as fh:
                payload = json.loads(fh.read().decode())
            return KLTable.from_payload(ctx, payload)
    sys = ctx.sys
    lengths = [e.length for e in sys.elements]
    first_letter = [e.word[0] if e.word else -1 for e in sys.elements]
    raw = _kernel.kl_ptable(
        lengths, first_letter, _left_by_gen(sys), ctx.weights, ctx.rank
    )
    table = KLTable(ctx, raw)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        blob = gzip.compress(table.serialize(), mtime=0)
        fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(blob)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    return table


def expand_in_c_basis(table: KLTable, h: HeckeElement) -> dict[int, LaurentPoly]:
    """Coefficients of h on the canonical basis, by unitriangular
    back-substitution from the longest T-term; exact round trip."""
    rank = table.ctx.rank
    v = dict(h.terms)
    out: dict[int, LaurentPoly] = {}
    while v:
        x = max(v)
        g = v.pop(x)
        if not g:
            continue
        out[x] = g
        for yid, poly in table._raw[x].items():
            new = v.get(yid, LaurentPoly.zero(rank)) - g * LaurentPoly(rank, poly)
            if new:
                v[yid] = new
            else:
                v.pop(yid, None)
    return out
