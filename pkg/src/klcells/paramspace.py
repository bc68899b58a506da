"""Rational geometry of the weight-parameter space.

Weight functions on a Coxeter group, up to the equivalences that preserve
Kazhdan-Lusztig cells, are classified by *positive subsets* X of the
lattice L = Z[classes]: subsets with X u (-X) = L, X + X in X, and
X n (-X) a subgroup.  Every positive subset is Pos(f1, ..., fr) for a
flag of linear forms: x belongs to X iff (f1(x), ..., fr(x)) >= 0
lexicographically.  Flags classify positive subsets up to positive
rescaling of each form and up to adding to each form any combination of
the earlier ones, so a unique canonical flag exists: reduce each form
modulo the span of its predecessors, drop it if that kills it, and scale
the survivor to a primitive integer vector (sign preserved).

A finite symmetric reduced set E of nonzero lattice elements determines a
hyperplane arrangement; its facets are the realizable sign assignments
E -> {+, 0, -}, each realized by a single rational form found by exact
Fourier-Motzkin feasibility.  Closure order between facets is the
componentwise order with 0 below both signs.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import ParseError, ValidationError

Vector = tuple[int, ...]


def _dot(form, vec) -> int:
    return sum(a * b for a, b in zip(form, vec))


def _primitive(entries) -> Vector:
    """Scale a rational vector by a positive rational to a primitive
    integer vector (gcd 1, sign pattern preserved)."""
    fracs = [Fraction(x) for x in entries]
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def is_reduced(vec: Vector) -> bool:
    """Nonzero with coprime entries, i.e. L/Zv is torsion-free."""
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    return g == 1


def parse_element(text: str, sys) -> Vector:
    """Parse an integer combination of class names, e.g. ``t-2s``."""
    names = sys.class_names
    coeffs = [0] * len(names)
    pos = 0
    text = text.strip()
    if not text:
        raise ParseError("empty element expression", text, 0)
    token_re = re.compile(r"\s*([+-]?)\s*(\d*)\s*([A-Za-z]\w*)")
    while pos < len(text):
        m = token_re.match(text, pos)
        if not m:
            raise ParseError("expected [+-][int]<class name>", text, pos)
        sign, number, name = m.groups()
        if name not in names:
            raise ParseError(f"unknown class name {name!r}", text, m.start(3))
        value = int(number) if number else 1
        if sign == "-":
            value = -value
        coeffs[names.index(name)] += value
        pos = m.end()
    return tuple(coeffs)


def format_element(vec: Vector, sys) -> str:
    chunks = []
    for coeff, name in zip(vec, sys.class_names):
        if coeff == 0:
            continue
        if coeff == 1:
            chunk = name
        elif coeff == -1:
            chunk = "-" + name
        else:
            chunk = f"{coeff}{name}"
        if chunks and not chunk.startswith("-"):
            chunks.append("+" + chunk)
        else:
            chunks.append(chunk)
    return "".join(chunks) if chunks else "0"


class PositiveSubset:
    """A positive subset of Z^dim, held as its canonical flag of forms."""

    __slots__ = ("dim", "flag")

    def __init__(self, dim: int, forms=()):
        self.dim = dim
        self.flag = _canonical_flag(dim, forms)

    @property
    def rank(self) -> int:
        return len(self.flag)

    def contains(self, vec: Vector) -> int:
        """Trichotomy: +1 if vec in X\\-X, 0 if in X n -X, -1 if in -X\\X."""
        for form in self.flag:
            v = _dot(form, vec)
            if v > 0:
                return 1
            if v < 0:
                return -1
        return 0

    def embed(self, vec: Vector) -> Vector:
        """The parameter map into (Z^rank, lex): vec -> (f1(vec), ...)."""
        return tuple(_dot(form, vec) for form in self.flag)

    def sgn(self, elements) -> "SignVector":
        elements = tuple(tuple(v) for v in elements)
        return SignVector(elements, tuple(self.contains(v) for v in elements))

    def tau_flip(self, index: int) -> "PositiveSubset":
        """Pull back along the symmetry negating the given coordinate."""
        flipped = [
            tuple(-x if i == index else x for i, x in enumerate(form))
            for form in self.flag
        ]
        return PositiveSubset(self.dim, flipped)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PositiveSubset):
            return NotImplemented
        return self.dim == other.dim and self.flag == other.flag

    def __hash__(self) -> int:
        return hash((self.dim, self.flag))

    def __repr__(self) -> str:
        return f"Pos(dim={self.dim}, flag={list(self.flag)})"


def _canonical_flag(dim: int, forms) -> tuple[Vector, ...]:
    """Reduce each form modulo the span of those kept so far (exact RREF
    bookkeeping), drop forms that reduce to zero, scale to primitive."""
    pivots: list[tuple[int, list[Fraction]]] = []  # (pivot column, row)
    out: list[Vector] = []
    for form in forms:
        form = tuple(int(x) for x in form)
        if len(form) != dim:
            raise ValidationError(f"form {form} has wrong dimension, expected {dim}")
        row = [Fraction(x) for x in form]
        for col, prow in pivots:
            if row[col]:
                factor = row[col]
                row = [a - factor * b for a, b in zip(row, prow)]
        if not any(row):
            continue
        reduced = _primitive(row)
        out.append(reduced)
        lead = next(i for i, x in enumerate(row) if x)
        norm = [x / row[lead] for x in row]
        for col, prow in pivots:
            if prow[lead]:
                factor = prow[lead]
                for i in range(dim):
                    prow[i] -= factor * norm[i]
        pivots.append((lead, norm))
        if len(out) == dim:
            break
    return tuple(out)


def canonicalize(forms, dim: int) -> PositiveSubset:
    return PositiveSubset(dim, forms)


def quotient_embedding(pos: PositiveSubset):
    """Rank of the totally ordered quotient plus the embedding map."""
    return pos.rank, pos.embed


@dataclass(frozen=True)
class SignVector:
    """Signs of a fixed element list under one positive subset, with
    values +1, 0, -1 stored in element order."""

    elements: tuple[Vector, ...]
    signs: tuple[int, ...]

    def sign_of(self, vec) -> int:
        return self.signs[self.elements.index(tuple(vec))]

    def text(self) -> str:
        return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in self.signs)


@dataclass(frozen=True)
class Facet:
    """One realizable sign pattern of an arrangement, with an interior
    representative (a single-form flag, or the empty flag for the
    pattern that is zero everywhere)."""

    elements: tuple[Vector, ...]
    signs: tuple[int, ...]
    representative: PositiveSubset
    dimension: int

    @property
    def is_chamber(self) -> bool:
        return all(s != 0 for s in self.signs)

    def sign_text(self) -> str:
        return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in self.signs)

    def sign_of(self, vec) -> int:
        return self.signs[self.elements.index(tuple(vec))]

    def zero_classes(self, dim: int) -> tuple[int, ...]:
        """Coordinate indices whose basis vector lies on this facet's
        zero set; meaningful for complete arrangements."""
        out = []
        for i in range(dim):
            basis = tuple(1 if j == i else 0 for j in range(dim))
            if basis in self.elements and self.sign_of(basis) == 0:
                out.append(i)
        return tuple(out)


def validate_arrangement_elements(elements, dim: int) -> tuple[Vector, ...]:
    """Check the set is reduced, symmetric and complete; returns it as a
    tuple in the given order."""
    elems = [tuple(int(x) for x in v) for v in elements]
    for v in elems:
        if len(v) != dim:
            raise ValidationError(f"element {v} has wrong dimension")
        if not is_reduced(v):
            raise ValidationError(f"element {v} is not reduced")
    eset = set(elems)
    if len(eset) != len(elems):
        raise ValidationError("duplicate elements in arrangement set")
    for v in elems:
        if tuple(-x for x in v) not in eset:
            raise ValidationError(f"set is not symmetric: missing -{v}")
    for i in range(dim):
        basis = tuple(1 if j == i else 0 for j in range(dim))
        if basis not in eset:
            raise ValidationError(f"set is not complete: missing basis vector {basis}")
    return tuple(elems)


def symmetrize(elements) -> list[Vector]:
    out = []
    seen = set()
    for v in elements:
        for w in (tuple(v), tuple(-x for x in v)):
            if w not in seen:
                seen.add(w)
                out.append(w)
    return out


class Arrangement:
    """All facets of the hyperplane arrangement of a finite symmetric
    reduced complete element set, found by exhaustive sign-pattern
    enumeration with exact feasibility."""

    def __init__(self, elements, dim: int):
        self.dim = dim
        self.elements = validate_arrangement_elements(elements, dim)
        self._by_signs: dict[tuple[int, ...], Facet] = {}
        self.facets = self._enumerate()

    def _enumerate(self) -> tuple[Facet, ...]:
        # one representative per +- pair, first occurrence wins
        half: list[Vector] = []
        mate: dict[Vector, Vector] = {}
        for v in self.elements:
            neg = tuple(-x for x in v)
            if neg in mate or v in mate:
                continue
            mate[v] = neg
            half.append(v)
        facets = []
        for pattern in itertools.product((1, 0, -1), repeat=len(half)):
            rep = _interior_form(half, pattern, self.dim)
            if rep is None:
                continue
            signs_by_elem = {}
            for v, s in zip(half, pattern):
                signs_by_elem[v] = s
                signs_by_elem[mate[v]] = -s
            signs = tuple(signs_by_elem[v] for v in self.elements)
            zero_rows = [v for v, s in zip(half, pattern) if s == 0]
            dimension = self.dim - _rank(zero_rows)
            pos = PositiveSubset(self.dim, () if not any(rep) else (rep,))
            actual = tuple(pos.contains(v) for v in self.elements)
            if actual != signs:
                raise AssertionError(
                    "interior representative does not realize its sign pattern"
                )
            facets.append(Facet(self.elements, signs, pos, dimension))
        facets.sort(key=lambda f: f.sign_text())
        for f in facets:
            self._by_signs[f.signs] = f
        return tuple(facets)

    @property
    def chambers(self) -> tuple[Facet, ...]:
        return tuple(f for f in self.facets if f.is_chamber)

    def facet_of(self, pos: PositiveSubset) -> Facet:
        signs = tuple(pos.contains(v) for v in self.elements)
        try:
            return self._by_signs[signs]
        except KeyError:
            raise ValidationError(
                "positive subset does not lie on any facet of this arrangement"
            ) from None

    def adjacent_chambers(self, facet: Facet) -> tuple[Facet, ...]:
        return tuple(
            c for c in self.chambers if closure_leq(facet, c)
        )


def closure_leq(f1: Facet, f2: Facet) -> bool:
    """Whether f1 lies in the closure of f2: componentwise, every nonzero
    sign of f1 must agree with f2."""
    if f1.elements != f2.elements:
        raise ValidationError("facets belong to different arrangements")
    return all(a == 0 or a == b for a, b in zip(f1.signs, f2.signs))


def tau_flip_facet(arr: Arrangement, facet: Facet, index: int) -> Facet:
    """The facet containing the tau-flip of the representative; requires
    the arrangement to be stable under the flip."""
    return arr.facet_of(facet.representative.tau_flip(index))


# -- exact feasibility ------------------------------------------------------


def _rank(rows) -> int:
    return len(_rref([[Fraction(x) for x in row] for row in rows]))


def _rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Row-reduce in place; returns the nonzero rows."""
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[Fraction]] = []
    for row in rows:
        row = list(row)
        for prow in out:
            lead = next(i for i, x in enumerate(prow) if x)
            if row[lead]:
                factor = row[lead] / prow[lead]
                row = [a - factor * b for a, b in zip(row, prow)]
        if any(row):
            out.append(row)
    out.sort(key=lambda r: next(i for i, x in enumerate(r) if x))
    return out


def _kernel_basis(rows, dim: int) -> list[list[Fraction]]:
    """Basis of {c : row . c = 0 for all rows} as column vectors."""
    reduced = _rref([[Fraction(x) for x in row] for row in rows])
    pivots = [next(i for i, x in enumerate(r) if x) for r in reduced]
    free = [i for i in range(dim) if i not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * dim
        vec[f] = Fraction(1)
        for prow, p in zip(reduced, pivots):
            vec[p] = -prow[f] / prow[p]
        basis.append(vec)
    return basis


def _fm_feasible(rows: list[list[Fraction]], nvars: int):
    """Solve the homogeneous strict system row . y > 0 by Fourier-Motzkin;
    returns a rational solution vector or None."""
    stages = []  # per eliminated variable: (lower rows, upper rows)
    current = [list(r) for r in rows]
    for var in range(nvars):
        lowers, uppers, passed = [], [], []
        for row in current:
            a = row[var]
            if a > 0:
                lowers.append(row)
            elif a < 0:
                uppers.append(row)
            else:
                passed.append(row)
        stages.append((var, lowers, uppers))
        new_rows = passed
        for lo in lowers:
            for up in uppers:
                combined = [
                    lo[i] * (-up[var]) + up[i] * lo[var] for i in range(nvars)
                ]
                combined[var] = Fraction(0)
                new_rows.append(combined)
        current = new_rows
        if any(not any(r) for r in current):
            return None
    if any(not any(r) for r in current):
        return None
    # back-substitute, outermost variable last
    y = [Fraction(0)] * nvars
    for var, lowers, uppers in reversed(stages):
        lo_bound = None
        for row in lowers:
            rest = sum(row[i] * y[i] for i in range(nvars) if i != var)
            bound = -rest / row[var]
            if lo_bound is None or bound > lo_bound:
                lo_bound = bound
        up_bound = None
        for row in uppers:
            rest = sum(row[i] * y[i] for i in range(nvars) if i != var)
            bound = -rest / row[var]
            if up_bound is None or bound < up_bound:
                up_bound = bound
        if lo_bound is None and up_bound is None:
            y[var] = Fraction(0)
        elif lo_bound is None:
            y[var] = up_bound - 1
        elif up_bound is None:
            y[var] = lo_bound + 1
        else:
            if lo_bound >= up_bound:
                return None
            y[var] = (lo_bound + up_bound) / 2
    return y


def _interior_form(half, pattern, dim: int):
    """A primitive integer form realizing the sign pattern on the half
    set (and by antisymmetry on the whole set), or None.

    The all-zero pattern on a spanning set yields the zero form, whose
    positive subset is the whole lattice.
    """
    zero_rows = [v for v, s in zip(half, pattern) if s == 0]
    strict_rows = []
    for v, s in zip(half, pattern):
        if s > 0:
            strict_rows.append(v)
        elif s < 0:
            strict_rows.append(tuple(-x for x in v))
    kernel = _kernel_basis(zero_rows, dim)
    nvars = len(kernel)
    if nvars == 0:
        return None if strict_rows else (0,) * dim
    projected = [
        [sum(Fraction(v[i]) * kernel[k][i] for i in range(dim)) for k in range(nvars)]
        for v in strict_rows
    ]
    y = _fm_feasible(projected, nvars)
    if y is None:
        return None
    form = [sum(kernel[k][i] * y[k] for k in range(nvars)) for i in range(dim)]
    if not any(form):
        return None if strict_rows else (0,) * dim
    return _primitive(form)


def interior_variants(facet: Facet, count: int, seed: int = 0) -> list[PositiveSubset]:
    """Up to ``count`` distinct positive subsets lying on the facet,
    starting with the canonical representative.  Further single-form
    members are sought by exact rational jitter inside the facet's zero
    subspace; low-dimensional facets may admit only the representative.
    """
    import random

    out = [facet.representative]
    if facet.dimension == 0:
        return out[:count]
    zero_rows = [v for v, s in zip(facet.elements, facet.signs) if s == 0]
    kernel = _kernel_basis(zero_rows, len(facet.elements[0]))
    rng = random.Random(seed)
    attempts = 0
    while len(out) < count and attempts < 40 * count:
        attempts += 1
        base = facet.representative.flag[0]
        denom = rng.choice((6, 8, 10, 12))
        form = [Fraction(x) for x in base]
        for vec in kernel:
            shift = Fraction(rng.randint(-2, 2), denom)
            form = [a + shift * b for a, b in zip(form, vec)]
        candidate = _primitive(form)
        if not any(candidate):
            continue
        pos = PositiveSubset(len(candidate), (candidate,))
        if tuple(pos.contains(v) for v in facet.elements) != facet.signs:
            continue
        if pos not in out:
            out.append(pos)
    return out


def refined_representative(facet: Facet) -> PositiveSubset | None:
    """A depth-2 flag refinement of the representative still lying on the
    facet, when one exists (always for chambers; never in rank 2 for
    facets that meet a hyperplane)."""
    if facet.representative.rank == 0:
        return None
    dim = len(facet.elements[0])
    base = facet.representative.flag[0]
    for i in range(dim):
        extra = tuple(1 if j == i else 0 for j in range(dim))
        pos = PositiveSubset(dim, (base, extra))
        if pos.rank < 2:
            continue
        if tuple(pos.contains(v) for v in facet.elements) == facet.signs:
            return pos
    return None
