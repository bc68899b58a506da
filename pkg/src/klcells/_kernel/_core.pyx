# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: same contract as ``_pure``, heavily optimized.

Exponent vectors (rank <= 3) are packed into one int64 key of base-2^20
digits, each digit offset so that lexicographic order on vectors is
numeric order on keys and negation is reflection around the zero key.
Polynomials are parallel (key, coefficient) int64 arrays sorted by key.

Bounds, checked loudly rather than silently wrapped: every stored
polynomial must keep exponent coordinates within +-(2^18 - 1) and
coefficients within +-2^31; accumulators allow +-2^62.  Real
computations sit orders of magnitude below these limits; hitting one
raises CoefficientOverflow.
"""

from libc.stdlib cimport calloc, free, malloc, realloc
from libc.string cimport memmove

from ..errors import CoefficientOverflow, SkewSymmetryError

cdef long long DIGIT = 1 << 20    # base per packed coordinate
cdef long long HALF = 1 << 19     # digit offset of exponent 0
cdef long long EMAX = (1 << 18) - 1   # |coordinate| bound for stored polys
cdef long long CMAX = (<long long> 1) << 31   # |coefficient| bound for stored polys
cdef long long AMAX = (<long long> 1) << 61   # accumulator bound


cdef struct Poly:
    long long *keys
    long long *coeffs
    int n
    int cap


cdef inline void poly_init(Poly *p) noexcept nogil:
    p.keys = NULL
    p.coeffs = NULL
    p.n = 0
    p.cap = 0


cdef inline void poly_free(Poly *p) noexcept nogil:
    if p.keys != NULL:
        free(p.keys)
        free(p.coeffs)
    p.keys = NULL
    p.coeffs = NULL
    p.n = 0
    p.cap = 0


cdef int poly_reserve(Poly *p, int need) except -1:
    cdef int cap
    cdef long long *nk
    cdef long long *nc
    if need <= p.cap:
        return 0
    cap = p.cap * 2 if p.cap * 2 > need else need
    if cap < 4:
        cap = 4
    nk = <long long *> realloc(p.keys, cap * sizeof(long long))
    nc = <long long *> realloc(p.coeffs, cap * sizeof(long long))
    if nk == NULL or nc == NULL:
        if nk != NULL:
            p.keys = nk
        if nc != NULL:
            p.coeffs = nc
        raise MemoryError()
    p.keys = nk
    p.coeffs = nc
    p.cap = cap
    return 0


cdef int poly_add_term(Poly *p, long long key, long long coeff) except -1:
    """Insert coeff at key (binary search + memmove), dropping zeros."""
    cdef int lo = 0, hi = p.n, mid
    cdef long long total
    if coeff == 0:
        return 0
    while lo < hi:
        mid = (lo + hi) >> 1
        if p.keys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < p.n and p.keys[lo] == key:
        total = p.coeffs[lo] + coeff
        if total > AMAX or total < -AMAX:
            raise CoefficientOverflow("accumulator exceeded 2^61")
        if total == 0:
            memmove(p.keys + lo, p.keys + lo + 1,
                    (p.n - lo - 1) * sizeof(long long))
            memmove(p.coeffs + lo, p.coeffs + lo + 1,
                    (p.n - lo - 1) * sizeof(long long))
            p.n -= 1
        else:
            p.coeffs[lo] = total
        return 0
    poly_reserve(p, p.n + 1)
    memmove(p.keys + lo + 1, p.keys + lo, (p.n - lo) * sizeof(long long))
    memmove(p.coeffs + lo + 1, p.coeffs + lo, (p.n - lo) * sizeof(long long))
    p.keys[lo] = key
    p.coeffs[lo] = coeff
    p.n += 1
    return 0


cdef int poly_acc(Poly *target, Poly *src, long long sign) except -1:
    cdef int i
    for i in range(src.n):
        poly_add_term(target, src.keys[i], sign * src.coeffs[i])
    return 0


cdef int poly_acc_product(Poly *target, Poly *a, Poly *b,
                          long long zero_key, long long sign) except -1:
    """target += sign * a * b; both factors must be store-validated."""
    cdef int i, j
    cdef long long ka, ca
    for i in range(a.n):
        ka = a.keys[i] - zero_key
        ca = sign * a.coeffs[i]
        for j in range(b.n):
            poly_add_term(target, ka + b.keys[j], ca * b.coeffs[j])
    return 0


cdef int poly_copy(Poly *dst, Poly *src) except -1:
    poly_reserve(dst, src.n)
    memmove(dst.keys, src.keys, src.n * sizeof(long long))
    memmove(dst.coeffs, src.coeffs, src.n * sizeof(long long))
    dst.n = src.n
    return 0


cdef int validate_poly(Poly *p, int rank, long long zero_key) except -1:
    """Stored polynomials must be safe as future multiplicands."""
    cdef int i, d
    cdef long long key, digit
    for i in range(p.n):
        if p.coeffs[i] > CMAX or p.coeffs[i] < -CMAX:
            raise CoefficientOverflow("coefficient exceeded 2^31")
        key = p.keys[i]
        for d in range(rank):
            digit = key % DIGIT
            key //= DIGIT
            if digit - HALF > EMAX or digit - HALF < -EMAX:
                raise CoefficientOverflow("exponent coordinate exceeded 2^18-1")
    return 0


# -- workspaces --------------------------------------------------------------


cdef struct RowSet:
    # rows[x] is a contiguous slice entry_z/entry_poly[start[x] : start[x+1]]
    int *z_ids
    Poly *polys
    long long *start
    long long used
    long long cap
    int n


cdef int rowset_init(RowSet *rs, int n) except -1:
    rs.n = n
    rs.cap = 4 * n if n > 0 else 4
    rs.used = 0
    rs.z_ids = <int *> malloc(rs.cap * sizeof(int))
    rs.polys = <Poly *> malloc(rs.cap * sizeof(Poly))
    rs.start = <long long *> malloc((n + 1) * sizeof(long long))
    if rs.z_ids == NULL or rs.polys == NULL or rs.start == NULL:
        raise MemoryError()
    rs.start[0] = 0
    return 0


cdef void rowset_free(RowSet *rs) noexcept nogil:
    cdef long long i
    if rs.polys != NULL:
        for i in range(rs.used):
            poly_free(&rs.polys[i])
        free(rs.polys)
    if rs.z_ids != NULL:
        free(rs.z_ids)
    if rs.start != NULL:
        free(rs.start)
    rs.polys = NULL
    rs.z_ids = NULL
    rs.start = NULL


cdef long long rowset_append(RowSet *rs, int z) except -1:
    """Append one empty slot at the end; returns its index."""
    cdef long long idx = rs.used
    cdef long long cap
    cdef int *nz
    cdef Poly *np
    if idx == rs.cap:
        cap = rs.cap * 2
        nz = <int *> realloc(rs.z_ids, cap * sizeof(int))
        np = <Poly *> realloc(rs.polys, cap * sizeof(Poly))
        if nz == NULL or np == NULL:
            if nz != NULL:
                rs.z_ids = nz
            if np != NULL:
                rs.polys = np
            raise MemoryError()
        rs.z_ids = nz
        rs.polys = np
        rs.cap = cap
    rs.z_ids[idx] = z
    poly_init(&rs.polys[idx])
    rs.used = idx + 1
    return idx


cdef struct Scratch:
    # sparse accumulator over element ids
    Poly *slots          # lazily initialised polys
    unsigned char *live
    int *touched
    int n_touched
    int n


cdef int scratch_init(Scratch *sc, int n) except -1:
    sc.n = n
    sc.slots = <Poly *> calloc(n if n > 0 else 1, sizeof(Poly))
    sc.live = <unsigned char *> calloc(n if n > 0 else 1, 1)
    sc.touched = <int *> malloc((n if n > 0 else 1) * sizeof(int))
    sc.n_touched = 0
    if sc.slots == NULL or sc.live == NULL or sc.touched == NULL:
        raise MemoryError()
    return 0


cdef void scratch_free(Scratch *sc) noexcept nogil:
    cdef int i
    if sc.slots != NULL:
        for i in range(sc.n):
            poly_free(&sc.slots[i])
        free(sc.slots)
    if sc.live != NULL:
        free(sc.live)
    if sc.touched != NULL:
        free(sc.touched)
    sc.slots = NULL
    sc.live = NULL
    sc.touched = NULL


cdef inline Poly *scratch_slot(Scratch *sc, int z) noexcept nogil:
    if not sc.live[z]:
        sc.live[z] = 1
        sc.touched[sc.n_touched] = z
        sc.n_touched += 1
    return &sc.slots[z]


cdef void scratch_reset(Scratch *sc) noexcept nogil:
    cdef int i, z
    for i in range(sc.n_touched):
        z = sc.touched[i]
        sc.slots[z].n = 0
        sc.live[z] = 0
    sc.n_touched = 0


# -- packing -----------------------------------------------------------------


cdef long long zero_key_for(int rank) noexcept nogil:
    cdef long long k = 0
    cdef int i
    for i in range(rank):
        k = k * DIGIT + HALF
    return k


cdef long long pack_exponent(object exponent, int rank) except? -1:
    cdef long long key = 0
    cdef long long e
    cdef int i
    for i in range(rank):
        e = exponent[i]
        if e > EMAX or e < -EMAX:
            raise CoefficientOverflow("input exponent exceeds 2^18-1")
        key = key * DIGIT + (e + HALF)
    return key


cdef tuple unpack_exponent(long long key, int rank):
    cdef list out = [0] * rank
    cdef int i
    for i in range(rank - 1, -1, -1):
        out[i] = (key % DIGIT) - HALF
        key //= DIGIT
    return tuple(out)


cdef int build_xi(Poly *xi, object weights, int rank) except -1:
    """Quadratic-relation coefficients e^w - e^{-w}, one poly per
    generator; the zero poly for zero weight."""
    cdef int s
    cdef long long key, nkey, zero_key = zero_key_for(rank)
    for s in range(len(weights)):
        poly_init(&xi[s])
        key = pack_exponent(weights[s], rank)
        if key == zero_key:
            continue
        nkey = 2 * zero_key - key
        poly_reserve(&xi[s], 2)
        if key < nkey:
            xi[s].keys[0] = key
            xi[s].coeffs[0] = 1
            xi[s].keys[1] = nkey
            xi[s].coeffs[1] = -1
        else:
            xi[s].keys[0] = nkey
            xi[s].coeffs[0] = -1
            xi[s].keys[1] = key
            xi[s].coeffs[1] = 1
        xi[s].n = 2
    return 0


# -- shared construction ------------------------------------------------------


cdef int build_rows(RowSet *rows, Scratch *sc, int[::1] lengths,
                    int[::1] first_letter, int[::1] lmul,
                    Poly *xi, int rank) except -1:
    """Bar expansions of every T_x, exactly as in the pure lane;
    lmul is flattened [generator * n + element]."""
    cdef int n = lengths.shape[0]
    cdef int x, s, parent, z, sz, i, slot_count
    cdef long long j, idx, begin, end
    cdef long long zero_key = zero_key_for(rank)
    cdef Poly *acc
    cdef Poly *p

    idx = rowset_append(rows, 0)
    poly_add_term(&rows.polys[idx], zero_key, 1)
    rows.start[1] = 1
    for x in range(1, n):
        s = first_letter[x]
        parent = lmul[s * n + x]
        scratch_reset(sc)
        begin = rows.start[parent]
        end = rows.start[parent + 1]
        for j in range(begin, end):
            z = rows.z_ids[j]
            p = &rows.polys[j]
            sz = lmul[s * n + z]
            poly_acc(scratch_slot(sc, sz), p, 1)
            if lengths[sz] > lengths[z] and xi[s].n > 0:
                poly_acc_product(scratch_slot(sc, z), &xi[s], p, zero_key, -1)
        # pack touched slots (ascending z keeps slices ordered)
        _sort_ints(sc.touched, sc.n_touched)
        for i in range(sc.n_touched):
            z = sc.touched[i]
            acc = &sc.slots[z]
            if acc.n == 0:
                continue
            validate_poly(acc, rank, zero_key)
            idx = rowset_append(rows, z)
            poly_copy(&rows.polys[idx], acc)
        rows.start[x + 1] = rows.used
    return 0


cdef void _sort_ints(int *arr, int n) noexcept nogil:
    # insertion sort; touched lists are short
    cdef int i, j, v
    for i in range(1, n):
        v = arr[i]
        j = i - 1
        while j >= 0 and arr[j] > v:
            arr[j + 1] = arr[j]
            j -= 1
        arr[j + 1] = v


cdef int skew_negative_part(Poly *alpha, Poly *out, long long zero_key) except -1:
    """Check bar(alpha) = -alpha and copy the lex-negative half."""
    cdef int i, j
    cdef int n = alpha.n
    if n == 0:
        out.n = 0
        return 0
    if n % 2 == 1:
        raise SkewSymmetryError("constant term in skew-symmetric element")
    for i in range(n):
        j = n - 1 - i
        if alpha.keys[i] == zero_key:
            raise SkewSymmetryError("constant term in skew-symmetric element")
        if alpha.keys[i] + alpha.keys[j] != 2 * zero_key or \
                alpha.coeffs[i] != -alpha.coeffs[j]:
            raise SkewSymmetryError("element is not skew-symmetric under bar")
    poly_reserve(out, n // 2)
    out.n = n // 2
    for i in range(n // 2):
        out.keys[i] = alpha.keys[i]
        out.coeffs[i] = alpha.coeffs[i]
    return 0


# -- public entry points -------------------------------------------------------


def kl_ptable(lengths_in, first_letter_in, lmul_in, weights_in):
    """Canonical-basis table; see the pure lane for the algorithm."""
    import array

    cdef int n = len(lengths_in)
    cdef int n_gens = len(lmul_in)
    cdef int rank = len(weights_in[0]) if n_gens else 0
    cdef int eff_rank = rank if rank > 0 else 1
    weights = list(weights_in) if rank > 0 else [(0,)] * n_gens

    arr_len = array.array("i", lengths_in)
    arr_first = array.array("i", first_letter_in)
    flat = array.array("i", [v for row in lmul_in for v in row])
    cdef int[::1] lengths = arr_len
    cdef int[::1] first_letter = arr_first
    cdef int[::1] lmul = flat

    cdef long long zero_key = zero_key_for(eff_rank)
    cdef Poly *xi = <Poly *> malloc(n_gens * sizeof(Poly))
    if xi == NULL:
        raise MemoryError()
    cdef RowSet rows
    cdef Scratch sc
    cdef Poly neg
    cdef Poly store
    cdef int w, x, z, s, i
    cdef long long j, begin, end
    cdef Poly *alpha
    cdef Poly *rp
    result = []
    poly_init(&neg)
    poly_init(&store)
    rowset_init(&rows, n)
    scratch_init(&sc, n)
    try:
        build_xi(xi, weights, eff_rank)
        build_rows(&rows, &sc, lengths, first_letter, lmul, xi, eff_rank)
        # per-column accumulator reused across w
        for w in range(n):
            scratch_reset(&sc)
            begin = rows.start[w]
            end = rows.start[w + 1]
            for j in range(begin, end):
                poly_acc(scratch_slot(&sc, rows.z_ids[j]), &rows.polys[j], 1)
            col = {}
            for x in range(w - 1, -1, -1):
                if lengths[x] == lengths[w]:
                    continue
                if not sc.live[x]:
                    continue
                alpha = &sc.slots[x]
                if alpha.n == 0:
                    continue
                skew_negative_part(alpha, &neg, zero_key)
                if neg.n == 0:
                    continue
                validate_poly(&neg, eff_rank, zero_key)
                col[x] = _poly_to_dict(&neg, rank, eff_rank)
                # bar(p): mirrored keys, reversed order
                poly_reserve(&store, neg.n)
                store.n = neg.n
                for i in range(neg.n):
                    store.keys[i] = 2 * zero_key - neg.keys[neg.n - 1 - i]
                    store.coeffs[i] = neg.coeffs[neg.n - 1 - i]
                begin = rows.start[x]
                end = rows.start[x + 1]
                for j in range(begin, end):
                    z = rows.z_ids[j]
                    rp = &rows.polys[j]
                    poly_acc_product(scratch_slot(&sc, z), &store, rp,
                                     zero_key, 1)
            result.append(col)
        return result
    finally:
        poly_free(&neg)
        poly_free(&store)
        scratch_free(&sc)
        rowset_free(&rows)
        for s in range(n_gens):
            poly_free(&xi[s])
        free(xi)


cdef dict _poly_to_dict(Poly *p, int rank, int eff_rank):
    cdef dict out = {}
    cdef int i
    if rank == 0:
        # eff_rank 1 with all exponents zero; collapse to the empty tuple
        for i in range(p.n):
            out[()] = p.coeffs[i]
        return out
    for i in range(p.n):
        out[unpack_exponent(p.keys[i], eff_rank)] = p.coeffs[i]
    return out


cdef int _dict_to_poly(Poly *p, dict terms, int eff_rank, int rank,
                       long long zero_key) except -1:
    cdef long long key
    items = sorted(terms.items())
    poly_reserve(p, len(items))
    p.n = 0
    for exp, coeff in items:
        if rank == 0:
            key = zero_key
        else:
            key = pack_exponent(exp, eff_rank)
        p.keys[p.n] = key
        p.coeffs[p.n] = coeff
        p.n += 1
    validate_poly(p, eff_rank, zero_key)
    return 0


def c_products(lengths_in, lmul_in, weights_in, ptable):
    """C-basis expansions of T_s * C_y; see the pure lane."""
    import array

    cdef int n = len(lengths_in)
    cdef int n_gens = len(lmul_in)
    cdef int rank = len(weights_in[0]) if n_gens else 0
    cdef int eff_rank = rank if rank > 0 else 1
    weights = list(weights_in) if rank > 0 else [(0,)] * n_gens

    arr_len = array.array("i", lengths_in)
    flat = array.array("i", [v for row in lmul_in for v in row])
    cdef int[::1] lengths = arr_len
    cdef int[::1] lmul = flat

    cdef long long zero_key = zero_key_for(eff_rank)
    cdef Poly *xi = <Poly *> malloc(n_gens * sizeof(Poly))
    if xi == NULL:
        raise MemoryError()
    # supports: per y the off-diagonal entries of the table
    cdef RowSet supp
    cdef Scratch sc
    cdef Poly g
    cdef int s, y, x, z, sx, top, i
    cdef long long j, idx, begin, end
    cdef Poly *p
    result = []
    poly_init(&g)
    rowset_init(&supp, n)
    scratch_init(&sc, n)
    try:
        build_xi(xi, weights, eff_rank)
        for y in range(n):
            for x in sorted(ptable[y]):
                idx = rowset_append(&supp, x)
                _dict_to_poly(&supp.polys[idx], ptable[y][x], eff_rank, rank,
                              zero_key)
            supp.start[y + 1] = supp.used
        for s in range(n_gens):
            per_y = []
            for y in range(n):
                scratch_reset(&sc)
                # v = T_s * C_y in the T-basis
                begin = supp.start[y]
                end = supp.start[y + 1]
                for j in range(begin, end):
                    x = supp.z_ids[j]
                    p = &supp.polys[j]
                    sx = lmul[s * n + x]
                    poly_acc(scratch_slot(&sc, sx), p, 1)
                    if lengths[sx] < lengths[x] and xi[s].n > 0:
                        poly_acc_product(scratch_slot(&sc, x), &xi[s], p,
                                         zero_key, 1)
                sx = lmul[s * n + y]
                poly_add_term(scratch_slot(&sc, sx), zero_key, 1)
                if lengths[sx] < lengths[y] and xi[s].n > 0:
                    poly_acc(scratch_slot(&sc, y), &xi[s], 1)
                # expand in the C-basis from the top
                top = n - 1
                expansion = {}
                while top >= 0:
                    if not sc.live[top] or sc.slots[top].n == 0:
                        top -= 1
                        continue
                    poly_copy(&g, &sc.slots[top])
                    sc.slots[top].n = 0
                    validate_poly(&g, eff_rank, zero_key)
                    expansion[top] = _poly_to_dict(&g, rank, eff_rank)
                    begin = supp.start[top]
                    end = supp.start[top + 1]
                    for j in range(begin, end):
                        z = supp.z_ids[j]
                        p = &supp.polys[j]
                        poly_acc_product(scratch_slot(&sc, z), &g, p,
                                         zero_key, -1)
                    top -= 1
                per_y.append(expansion)
            result.append(per_y)
        return result
    finally:
        poly_free(&g)
        scratch_free(&sc)
        rowset_free(&supp)
        for s in range(n_gens):
            poly_free(&xi[s])
        free(xi)
