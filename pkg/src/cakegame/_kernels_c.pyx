# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel core.

Twin of ``_kernels_py``: every function reproduces the pure-Python
arithmetic operation-for-operation so the two backends return
bit-identical doubles. Keep the files in sync when editing either.
"""

from libc.stdlib cimport free, malloc

import numpy as np

BACKEND_NAME = "c"

cdef double NEG_INF = float("-inf")


cdef Py_ssize_t _bisect_right(const double[::1] a, double x) noexcept:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if x < a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef Py_ssize_t _bisect_left(const double[::1] a, double x) noexcept:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef double _cdf_at(const double[::1] breaks, const double[::1] vals, const double[::1] cum,
                    double x) noexcept:
    cdef Py_ssize_t n = vals.shape[0]
    cdef Py_ssize_t idx = _bisect_right(breaks, x) - 1
    if idx < 0:
        idx = 0
    elif idx >= n:
        idx = n - 1
    return cum[idx] + (x - breaks[idx]) * vals[idx]


def cdf_at(const double[::1] breaks, const double[::1] vals, const double[::1] cum, double x):
    """Cumulative mass F(x) of the density on [0, x]."""
    return _cdf_at(breaks, vals, cum, x)


def cdf_many(const double[::1] breaks, const double[::1] vals, const double[::1] cum, xs):
    """Vectorized ``cdf_at`` over an array of points."""
    xs_arr = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] xv = xs_arr
    out_arr = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = _cdf_at(breaks, vals, cum, xv[i])
    return out_arr


def inverse_cdf(const double[::1] breaks, const double[::1] vals, const double[::1] cum, double t):
    """Leftmost point y with F(y) = t. Requires 0 <= t <= cum[-1]."""
    cdef double total = cum[cum.shape[0] - 1]
    if t >= total:
        return breaks[breaks.shape[0] - 1]
    cdef Py_ssize_t idx = _bisect_left(cum, t)
    if cum[idx] == t:
        return breaks[idx]
    cdef Py_ssize_t j = idx - 1
    if j < 0:
        j = 0
    return breaks[j] + (t - cum[j]) / vals[j]


cdef double _interval_value(const double[::1] breaks, const double[::1] vals,
                            const double[::1] cum, double a, double b) noexcept:
    if b <= a:
        return 0.0
    return _cdf_at(breaks, vals, cum, b) - _cdf_at(breaks, vals, cum, a)


def interval_value(const double[::1] breaks, const double[::1] vals, const double[::1] cum,
                   double a, double b):
    """Mass of the density on [a, b]; zero when b <= a."""
    return _interval_value(breaks, vals, cum, a, b)


def intervals_value_batch(const double[::1] breaks, const double[::1] vals, const double[::1] cum,
                          a_arr, b_arr):
    """Vectorized interval masses for paired endpoint arrays."""
    a_c = np.ascontiguousarray(a_arr, dtype=np.float64)
    b_c = np.ascontiguousarray(b_arr, dtype=np.float64)
    cdef const double[::1] av = a_c
    cdef const double[::1] bv = b_c
    out_arr = np.empty(av.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    for i in range(av.shape[0]):
        if bv[i] <= av[i]:
            out[i] = 0.0
        else:
            out[i] = _cdf_at(breaks, vals, cum, bv[i]) - _cdf_at(breaks, vals, cum, av[i])
    return out_arr


def alternating_values(const double[::1] breaks, const double[::1] vals, const double[::1] cum,
                       cuts):
    """Piece-one mass of the alternating partition, and total minus it."""
    cdef double v1 = 0.0
    cdef double fprev = 0.0
    cdef double fc
    cdef bint take = True
    for c in cuts:
        fc = _cdf_at(breaks, vals, cum, <double> c)
        if take:
            v1 += fc - fprev
        fprev = fc
        take = not take
    cdef double total = cum[cum.shape[0] - 1]
    if take:
        v1 += total - fprev
    return v1, total - v1


# --- combination odometer --------------------------------------------------
# Lexicographic subsets of {base, .., top} of size m, matching
# itertools.combinations order.

cdef bint _next_combo(Py_ssize_t* c, int m, Py_ssize_t top) noexcept:
    cdef int i = m - 1
    while i >= 0 and c[i] == top - (m - 1 - i):
        i -= 1
    if i < 0:
        return False
    c[i] += 1
    cdef int j
    for j in range(i + 1, m):
        c[j] = c[j - 1] + 1
    return True


cdef void _eval_candidate(const double[::1] fa, const double[::1] fb, double ta, double tb,
                          Py_ssize_t* idxs, int m,
                          double* va1_out, double* vb1_out) noexcept:
    cdef double va1 = 0.0
    cdef double vb1 = 0.0
    cdef double fprev = 0.0
    cdef double gprev = 0.0
    cdef double fc, gc
    cdef bint take = True
    cdef int i
    for i in range(m):
        fc = fa[idxs[i]]
        gc = fb[idxs[i]]
        if take:
            va1 += fc - fprev
            vb1 += gc - gprev
        fprev = fc
        gprev = gc
        take = not take
    if take:
        va1 += ta - fprev
        vb1 += tb - gprev
    va1_out[0] = va1
    vb1_out[0] = vb1


def bruteforce_scan(fa_arr, fb_arr, double ta, double tb, int k):
    """Exhaustive Stackelberg scan over cut subsets of a grid."""
    fa_c = np.ascontiguousarray(fa_arr, dtype=np.float64)
    fb_c = np.ascontiguousarray(fb_arr, dtype=np.float64)
    cdef const double[::1] fa = fa_c
    cdef const double[::1] fb = fb_c
    cdef Py_ssize_t g = fa.shape[0]
    cdef double best = -1.0
    cdef int best_piece = 1
    cdef double best_bob = 0.0
    best_idxs = ()
    cdef Py_ssize_t* c = <Py_ssize_t*> malloc(sizeof(Py_ssize_t) * (k + 1))
    if c == NULL:
        raise MemoryError()
    cdef int m, i
    cdef double va1, vb1, va2, vb2, alice, bobv
    cdef int piece
    cdef bint more
    try:
        for m in range(0, k + 1):
            if m > g:
                continue
            for i in range(m):
                c[i] = i
            more = True
            while more:
                _eval_candidate(fa, fb, ta, tb, c, m, &va1, &vb1)
                va2 = ta - va1
                vb2 = tb - vb1
                if vb1 > vb2 or (vb1 == vb2 and va1 < va2):
                    alice = va2
                    piece = 1
                    bobv = vb1
                else:
                    alice = va1
                    piece = 2
                    bobv = vb2
                if alice > best:
                    best = alice
                    best_piece = piece
                    best_bob = bobv
                    best_idxs = tuple(c[i] for i in range(m))
                if m == 0:
                    more = False
                else:
                    more = _next_combo(c, m, g - 1)
    finally:
        free(c)
    return best, best_idxs, best_piece, best_bob


def constrained_scan(fa_arr, fb_arr, double ta, double tb, int k,
                     double min_bob):
    """Best grid k-cut giving the responder at least ``min_bob``."""
    fa_c = np.ascontiguousarray(fa_arr, dtype=np.float64)
    fb_c = np.ascontiguousarray(fb_arr, dtype=np.float64)
    cdef const double[::1] fa = fa_c
    cdef const double[::1] fb = fb_c
    cdef Py_ssize_t g = fa.shape[0]
    cdef bint found = False
    cdef double best = -1.0
    cdef int best_piece = 1
    cdef double best_bob = 0.0
    best_idxs = ()
    cdef Py_ssize_t* c = <Py_ssize_t*> malloc(sizeof(Py_ssize_t) * (k + 1))
    if c == NULL:
        raise MemoryError()
    cdef int m, i
    cdef double va1, vb1, va2, vb2
    cdef bint more
    try:
        for m in range(0, k + 1):
            if m > g:
                continue
            for i in range(m):
                c[i] = i
            more = True
            while more:
                _eval_candidate(fa, fb, ta, tb, c, m, &va1, &vb1)
                va2 = ta - va1
                vb2 = tb - vb1
                if vb1 >= min_bob and va2 > best:
                    found = True
                    best = va2
                    best_piece = 1
                    best_bob = vb1
                    best_idxs = tuple(c[i] for i in range(m))
                if vb2 >= min_bob and va1 > best:
                    found = True
                    best = va1
                    best_piece = 2
                    best_bob = vb2
                    best_idxs = tuple(c[i] for i in range(m))
                if m == 0:
                    more = False
                else:
                    more = _next_combo(c, m, g - 1)
    finally:
        free(c)
    return found, best, best_idxs, best_piece, best_bob


def exact_scan(pts_arr, fa_arr, fb_arr, va_seg_arr, vb_seg_arr,
               double ta, double tb, int k):
    """Exact Stackelberg scan: lattice cuts plus one solved cut."""
    pts_c = np.ascontiguousarray(pts_arr, dtype=np.float64)
    fa_c = np.ascontiguousarray(fa_arr, dtype=np.float64)
    fb_c = np.ascontiguousarray(fb_arr, dtype=np.float64)
    va_c = np.ascontiguousarray(va_seg_arr, dtype=np.float64)
    vb_c = np.ascontiguousarray(vb_seg_arr, dtype=np.float64)
    cdef const double[::1] pts = pts_c
    cdef const double[::1] fa = fa_c
    cdef const double[::1] fb = fb_c
    cdef const double[::1] va_seg = va_c
    cdef const double[::1] vb_seg = vb_c
    cdef Py_ssize_t P = pts.shape[0]
    cdef double best = -1.0
    cdef int best_piece = 1
    cdef double best_bob = 0.0
    best_cuts = ()
    cdef int max_m = k - 1
    if max_m > P - 2:
        max_m = <int> (P - 2)
    cdef Py_ssize_t* S = <Py_ssize_t*> malloc(sizeof(Py_ssize_t) * (k + 2))
    cdef Py_ssize_t* bnd = <Py_ssize_t*> malloc(sizeof(Py_ssize_t) * (k + 4))
    if S == NULL or bnd == NULL:
        if S != NULL:
            free(S)
        if bnd != NULL:
            free(bnd)
        raise MemoryError()
    cdef int m, i, j, e, par, parity
    cdef Py_ssize_t lo_i, hi_i, s
    cdef double a0a, a0b, sgn, tgt, beta, t, fa_t, fb_t, v1a, v2a, v1b, alice
    cdef bint more
    try:
        for m in range(0, max_m + 1):
            for i in range(m):
                S[i] = 1 + i
            more = True
            while more:
                bnd[0] = 0
                for i in range(m):
                    bnd[i + 1] = S[i]
                bnd[m + 1] = P - 1
                for j in range(m + 1):
                    lo_i = bnd[j]
                    hi_i = bnd[j + 1]
                    a0b = 0.0
                    a0a = 0.0
                    for e in range(m + 1):
                        if e == j:
                            continue
                        par = e if e < j else e + 1
                        if par % 2 == 0:
                            a0b += fb[bnd[e + 1]] - fb[bnd[e]]
                            a0a += fa[bnd[e + 1]] - fa[bnd[e]]
                    if j % 2 == 0:
                        sgn = 1.0
                        a0b -= fb[lo_i]
                        a0a -= fa[lo_i]
                    else:
                        sgn = -1.0
                        a0b += fb[hi_i]
                        a0a += fa[hi_i]
                    for parity in range(1, 3):
                        tgt = 0.5 if parity == 1 else tb - 0.5
                        beta = (tgt - a0b) * sgn
                        if not (fb[lo_i] <= beta <= fb[hi_i]):
                            continue
                        s = lo_i
                        while s < hi_i - 1 and fb[s + 1] < beta:
                            s += 1
                        t = pts[s] + (beta - fb[s]) / vb_seg[s]
                        fa_t = fa[s] + (t - pts[s]) * va_seg[s]
                        v1a = a0a + sgn * fa_t
                        v2a = ta - v1a
                        alice = v1a if v1a > v2a else v2a
                        if alice > best:
                            fb_t = fb[s] + (t - pts[s]) * vb_seg[s]
                            v1b = a0b + sgn * fb_t
                            best = alice
                            best_piece = 1 if v1a < v2a else 2
                            best_bob = v1b if best_piece == 1 else tb - v1b
                            best_cuts = tuple(
                                [pts[S[i]] for i in range(j)] + [t]
                                + [pts[S[i]] for i in range(j, m)])
                if m == 0:
                    more = False
                else:
                    more = _next_combo(S, m, P - 2)
    finally:
        free(S)
        free(bnd)
    return best, best_cuts, best_piece, best_bob


def interval_dp(cell_va_arr, cell_is_iv_arr, int k, int max_a):
    """Whole-cell piece assignment DP; see the pure twin for semantics."""
    cell_va_c = np.ascontiguousarray(cell_va_arr, dtype=np.float64)
    cell_iv_c = np.ascontiguousarray(cell_is_iv_arr, dtype=np.uint8)
    cdef const double[::1] cell_va = cell_va_c
    cdef const unsigned char[::1] cell_is_iv = cell_iv_c
    cdef Py_ssize_t ncells = cell_va.shape[0]
    cdef Py_ssize_t ja = max_a + 1
    cdef Py_ssize_t jr = k + 1
    cdef Py_ssize_t nstates = ja * jr * 2
    cdef Py_ssize_t nbytes = (nstates + 7) // 8

    value_arr = np.full(nstates, NEG_INF, dtype=np.float64)
    new_arr = np.empty(nstates, dtype=np.float64)
    cdef double[::1] value = value_arr
    cdef double[::1] new = new_arr
    decisions_arr = np.zeros((max(ncells - 1, 1), nbytes), dtype=np.uint8)
    cdef unsigned char[:, ::1] decisions = decisions_arr

    # state index: (j * jr + r) * 2 + p
    cdef int iv0 = cell_is_iv[0]
    cdef double va0 = cell_va[0]
    value[0] = 0.0  # j=0, r=0, p=0
    if iv0 <= max_a:
        value[(iv0 * jr) * 2 + 1] = va0

    cdef Py_ssize_t i, j, r, idx
    cdef int iv, p
    cdef double va, stay, switch, cand
    cdef bint use_stay
    for i in range(1, ncells):
        iv = cell_is_iv[i]
        va = cell_va[i]
        for j in range(ja):
            for r in range(jr):
                idx = (j * jr + r) * 2
                # arrive on side 0: stay from p=0, or cut away from p=1
                stay = value[idx]
                switch = value[idx - 2 + 1] if r >= 1 else NEG_INF
                use_stay = stay >= switch
                cand = stay if use_stay else switch
                new[idx] = cand
                if use_stay:
                    decisions[i - 1, idx >> 3] |= <unsigned char> (1 << (idx & 7))
                # arrive on side 1: gains va, consumes iv interval slots
                if iv == 0:
                    stay = value[idx + 1]
                    switch = value[idx - 2] if r >= 1 else NEG_INF
                elif j >= 1:
                    stay = value[idx - jr * 2 + 1]
                    switch = value[idx - jr * 2 - 2] if r >= 1 else NEG_INF
                else:
                    stay = NEG_INF
                    switch = NEG_INF
                use_stay = stay >= switch
                cand = (stay if use_stay else switch) + va
                new[idx + 1] = cand
                if use_stay:
                    decisions[i - 1, (idx + 1) >> 3] |= \
                        <unsigned char> (1 << ((idx + 1) & 7))
        value[:] = new

    cdef double best = NEG_INF
    cdef Py_ssize_t bj = 0, br = 0
    cdef int bp = 0
    for j in range(ja):
        for r in range(jr):
            for p in range(2):
                idx = (j * jr + r) * 2 + p
                if value[idx] > best:
                    best = value[idx]
                    bj = j
                    br = r
                    bp = p
    assignment_arr = np.zeros(ncells, dtype=np.uint8)
    cdef unsigned char[::1] assignment = assignment_arr
    cdef Py_ssize_t jj = bj, rr = br
    cdef int pp = bp
    cdef bint stayed
    for i in range(ncells - 1, 0, -1):
        assignment[i] = <unsigned char> pp
        idx = (jj * jr + rr) * 2 + pp
        stayed = (decisions[i - 1, idx >> 3] >> (idx & 7)) & 1
        if pp == 1 and cell_is_iv[i]:
            jj -= 1
        if not stayed:
            rr -= 1
            pp = 1 - pp
    assignment[0] = <unsigned char> pp
    return best, assignment_arr
