"""Pure-Python kernel for the expensive Hecke-algebra loops.

Polynomials are plain dicts {exponent tuple: nonzero int}; ids are the
dense element indices of an enumerated group, sorted by (length, word)
so that an element's Bruhat-lower terms always have smaller ids.

Two entry points, sharing conventions with the compiled kernel:

* ``kl_ptable``: the canonical-basis table.  For each w the column
  (p[x, w])_{x < w} is found by strictly decreasing induction on x.  With
  r[x, y] the coefficient of T_x in bar(T_y), bar-invariance of
  C_w = sum p[y, w] T_y forces p[x, w] = sum_{x <= y <= w} r[x, y] bar(p[y, w]),
  i.e. p[x, w] - bar(p[x, w]) = alpha_x with alpha_x the accumulated
  coefficient at x of sum_{y > x} bar(p[y, w]) bar(T_y); alpha_x must be
  skew-symmetric and p[x, w] is its lex-negative part.  This works for
  zero and negative weights alike.

* ``c_products``: T-to-C change of basis of the products T_s * C_y, by
  back-substitution from the longest term.
"""

from __future__ import annotations

from ..errors import SkewSymmetryError

Poly = dict  # {tuple[int, ...]: int}


def _xi_polys(weights):
    """Per generator the quadratic-relation coefficient
    e^{phi(s)} - e^{-phi(s)}; the zero dict when phi(s) = 0."""
    out = []
    for w in weights:
        w = tuple(w)
        if any(w):
            out.append({w: 1, tuple(-x for x in w): -1})
        else:
            out.append({})
    return out


def _acc_product(target: Poly, p: Poly, q: Poly, sign: int = 1) -> None:
    """target += sign * p * q, dropping zeros."""
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            c = target.get(e, 0) + sign * c1 * c2
            if c:
                target[e] = c
            else:
                del target[e]


def _acc(target: Poly, p: Poly, sign: int = 1) -> None:
    for e, c in p.items():
        new = target.get(e, 0) + sign * c
        if new:
            target[e] = new
        else:
            del target[e]


def _lex_sign(exp) -> int:
    for e in exp:
        if e > 0:
            return 1
        if e < 0:
            return -1
    return 0


def _skew_negative_part(alpha: Poly) -> Poly:
    """Lex-negative part of alpha, after checking bar(alpha) = -alpha."""
    neg = {}
    for e, c in alpha.items():
        s = _lex_sign(e)
        if s == 0:
            raise SkewSymmetryError("constant term in skew-symmetric element")
        if alpha.get(tuple(-x for x in e), 0) != -c:
            raise SkewSymmetryError("element is not skew-symmetric under bar")
        if s < 0:
            neg[e] = c
    return neg


def bar_rows(lengths, first_letter, lmul, weights):
    """T-basis expansions of bar(T_x) for every x.

    rows[x] maps z to the coefficient polynomial of T_z.  Recursion:
    bar(T_x) = T_s^{-1} bar(T_{x'}) for x = s x' with l(x') < l(x), and
    T_s^{-1} T_z equals T_{sz} - xi_s T_z when sz is longer than z, else
    just T_{sz}.
    """
    n = len(lengths)
    xi = _xi_polys(weights)
    rank = len(weights[0]) if weights else 0
    zero = (0,) * rank
    rows = [None] * n
    rows[0] = {0: {zero: 1}}
    for x in range(1, n):
        s = first_letter[x]
        parent = lmul[s][x]
        xis = xi[s]
        out = {}
        for z, p in rows[parent].items():
            sz = lmul[s][z]
            tgt = out.setdefault(sz, {})
            _acc(tgt, p)
            if not tgt:
                del out[sz]
            if lengths[sz] > lengths[z] and xis:
                tgt = out.setdefault(z, {})
                _acc_product(tgt, xis, p, -1)
                if not tgt:
                    del out[z]
        rows[x] = out
    return rows


def kl_ptable(lengths, first_letter, lmul, weights):
    """Off-diagonal canonical-basis table: list over w of {x: poly}."""
    n = len(lengths)
    rows = bar_rows(lengths, first_letter, lmul, weights)
    ptable = [None] * n
    for w in range(n):
        acc = {z: dict(p) for z, p in rows[w].items()}
        col = {}
        for x in range(w - 1, -1, -1):
            if lengths[x] == lengths[w]:
                continue
            alpha = acc.get(x)
            if not alpha:
                continue
            p = _skew_negative_part(alpha)
            if not p:
                continue
            col[x] = p
            barp = {tuple(-e for e in exp): c for exp, c in p.items()}
            for z, rp in rows[x].items():
                tgt = acc.setdefault(z, {})
                _acc_product(tgt, barp, rp)
                if not tgt:
                    del acc[z]
        ptable[w] = col
    return ptable


def c_products(lengths, lmul, weights, ptable):
    """C-basis expansions of T_s * C_y: list over s of list over y of
    {x: poly}, zero coefficients dropped."""
    n = len(lengths)
    xi = _xi_polys(weights)
    rank = len(weights[0]) if weights else 0
    zero = (0,) * rank
    supports = []
    for y in range(n):
        supp = [(y, {zero: 1})]
        supp.extend(sorted(ptable[y].items(), reverse=True))
        supports.append(supp)
    out = []
    for s in range(len(lmul)):
        lm = lmul[s]
        xis = xi[s]
        per_y = []
        for y in range(n):
            v = {}
            for x, p in supports[y]:
                sx = lm[x]
                tgt = v.setdefault(sx, {})
                _acc(tgt, p)
                if not tgt:
                    del v[sx]
                if lengths[sx] < lengths[x] and xis:
                    tgt = v.setdefault(x, {})
                    _acc_product(tgt, xis, p)
                    if not tgt:
                        del v[x]
            expansion = {}
            while v:
                x = max(v)
                g = v.pop(x)
                if not g:
                    continue
                expansion[x] = g
                for z, p in ptable[x].items():
                    tgt = v.setdefault(z, {})
                    _acc_product(tgt, g, p, -1)
                    if not tgt:
                        del v[z]
            per_y.append(expansion)
        out.append(per_y)
    return out
