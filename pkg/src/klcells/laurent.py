"""Sparse integer group-algebra elements with exponents in Z^r.

Monomials are written ``e^g`` for ``g`` an integer vector of fixed length
``r``; multiplication adds exponent vectors.  Z^r is totally ordered
lexicographically, which is the only monomial order we ever need: the
parameter groups produced by flags of linear forms embed into some
(Z^r, lex).  The degenerate case r = 0 is supported and behaves like plain
integers (every exponent is the empty tuple).

Coefficients are Python ints, so there is no overflow to worry about in
this implementation; the compiled kernel keeps its own 64-bit bounds and
aborts loudly when they are hit.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import SkewSymmetryError

Exponent = tuple[int, ...]


def lex_sign(exponent: Exponent) -> int:
    """Sign of an exponent vector under the lexicographic order: the sign
    of its first nonzero entry, 0 for the zero vector."""
    for e in exponent:
        if e > 0:
            return 1
        if e < 0:
            return -1
    return 0


def _neg(exponent: Exponent) -> Exponent:
    return tuple(-e for e in exponent)


class LaurentPoly:
    """An element of Z[Z^r], stored as {exponent vector: nonzero int}."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict[Exponent, int] | None = None):
        self.rank = rank
        self.terms: dict[Exponent, int] = {}
        if terms:
            for exp, coeff in terms.items():
                if coeff == 0:
                    continue
                if len(exp) != rank:
                    raise ValueError(
                        f"exponent {exp} has length {len(exp)}, expected {rank}"
                    )
                self.terms[tuple(exp)] = coeff

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls(rank)

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls(rank, {(0,) * rank: 1})

    @classmethod
    def constant(cls, rank: int, value: int) -> "LaurentPoly":
        return cls(rank, {(0,) * rank: value})

    @classmethod
    def monomial(cls, exponent: Iterable[int], coeff: int = 1) -> "LaurentPoly":
        exp = tuple(exponent)
        return cls(len(exp), {exp: coeff})

    # -- ring structure -----------------------------------------------

    def _check_rank(self, other: "LaurentPoly") -> None:
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_rank(other)
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            new = terms.get(exp, 0) + coeff
            if new:
                terms[exp] = new
            else:
                terms.pop(exp, None)
        out = LaurentPoly(self.rank)
        out.terms = terms
        return out

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly(self.rank)
        out.terms = {exp: -c for exp, c in self.terms.items()}
        return out

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly(self.rank)
            out = LaurentPoly(self.rank)
            out.terms = {exp: c * other for exp, c in self.terms.items()}
            return out
        self._check_rank(other)
        terms: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                new = terms.get(exp, 0) + c1 * c2
                if new:
                    terms[exp] = new
                else:
                    del terms[exp]
        out = LaurentPoly(self.rank)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * self.rank: other}
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(sorted(self.terms.items()))

    # -- involution and order structure -------------------------------

    def bar(self) -> "LaurentPoly":
        """The involution e^g -> e^(-g), extended Z-linearly."""
        out = LaurentPoly(self.rank)
        out.terms = {_neg(exp): c for exp, c in self.terms.items()}
        return out

    def sign_split(self) -> tuple["LaurentPoly", int, "LaurentPoly"]:
        """Partition the terms by lex sign of the exponent.

        Returns (negative part, constant coefficient, positive part); the
        three pieces sum back to the original element.
        """
        neg = LaurentPoly(self.rank)
        pos = LaurentPoly(self.rank)
        const = 0
        for exp, coeff in self.terms.items():
            s = lex_sign(exp)
            if s < 0:
                neg.terms[exp] = coeff
            elif s > 0:
                pos.terms[exp] = coeff
            else:
                const = coeff
        return neg, const, pos

    def negative_part(self) -> "LaurentPoly":
        out = LaurentPoly(self.rank)
        out.terms = {
            exp: c for exp, c in self.terms.items() if lex_sign(exp) < 0
        }
        return out

    def is_negative_supported(self) -> bool:
        return all(lex_sign(exp) < 0 for exp in self.terms)

    def constant_coefficient(self) -> int:
        return self.terms.get((0,) * self.rank, 0)

    def coefficient_sum(self) -> int:
        """Image under the augmentation e^g -> 1."""
        return sum(self.terms.values())

    # -- text form -----------------------------------------------------

    def text(self) -> str:
        """Debug/golden-file form, e.g. ``2*e[0,-1]+e[1,0]`` (exponents in
        increasing lex order); the zero element prints as ``0``."""
        if not self.terms:
            return "0"
        chunks = []
        for exp, coeff in sorted(self.terms.items()):
            mono = "e[" + ",".join(str(e) for e in exp) + "]"
            if coeff == 1:
                chunk = mono
            elif coeff == -1:
                chunk = "-" + mono
            else:
                chunk = f"{coeff}*{mono}"
            chunks.append(chunk)
        out = chunks[0]
        for chunk in chunks[1:]:
            out += chunk if chunk.startswith("-") else "+" + chunk
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({self.text()})"


def skew_solve(alpha: LaurentPoly) -> LaurentPoly:
    """The unique p supported on lex-negative exponents with
    p - bar(p) = alpha.

    Requires bar(alpha) = -alpha (in particular the constant term must
    vanish); the solution is simply the negative part of alpha.
    """
    neg, const, pos = alpha.sign_split()
    if const != 0 or neg != -pos.bar():
        raise SkewSymmetryError(
            f"argument is not skew-symmetric under bar: {alpha.text()}"
        )
    return neg
