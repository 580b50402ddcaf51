"""Pure-Python/numpy kernel implementations.

This module is the reference backend: the compiled twin in
``_kernels_c.pyx`` mirrors these functions operation-for-operation so the
two backends return bit-identical doubles. Keep every arithmetic
expression in sync between the two files when editing.

A piecewise-constant density is passed around as three float64 arrays:
``breaks`` (n+1 sorted points, breaks[0]=0, breaks[-1]=1), ``vals``
(n segment densities) and ``cum`` (n+1 cumulative masses with cum[0]=0
and cum[i+1] = cum[i] + (breaks[i+1]-breaks[i])*vals[i]).
"""

from itertools import combinations

import numpy as np

BACKEND_NAME = "python"


def cdf_at(breaks, vals, cum, x):
    """Cumulative mass F(x) of the density on [0, x]."""
    idx = int(np.searchsorted(breaks, x, side="right")) - 1
    n = len(vals)
    if idx < 0:
        idx = 0
    elif idx >= n:
        idx = n - 1
    return float(cum[idx] + (x - breaks[idx]) * vals[idx])


def cdf_many(breaks, vals, cum, xs):
    """Vectorized ``cdf_at`` over an array of points."""
    xs = np.asarray(xs, dtype=np.float64)
    idx = np.searchsorted(breaks, xs, side="right") - 1
    np.clip(idx, 0, len(vals) - 1, out=idx)
    return cum[idx] + (xs - breaks[idx]) * vals[idx]


def inverse_cdf(breaks, vals, cum, t):
    """Leftmost point y with F(y) = t. Requires 0 <= t <= cum[-1]."""
    total = float(cum[-1])
    if t >= total:
        return float(breaks[-1])
    idx = int(np.searchsorted(cum, t, side="left"))
    if cum[idx] == t:
        return float(breaks[idx])
    # now cum[idx-1] < t < cum[idx]: invert on segment idx-1
    j = idx - 1
    if j < 0:
        j = 0
    return float(breaks[j] + (t - cum[j]) / vals[j])


def interval_value(breaks, vals, cum, a, b):
    """Mass of the density on [a, b]; zero when b <= a."""
    if b <= a:
        return 0.0
    return cdf_at(breaks, vals, cum, b) - cdf_at(breaks, vals, cum, a)


def intervals_value_batch(breaks, vals, cum, a_arr, b_arr):
    """Vectorized interval masses for paired endpoint arrays."""
    fa = cdf_many(breaks, vals, cum, a_arr)
    fb = cdf_many(breaks, vals, cum, b_arr)
    out = fb - fa
    out[np.asarray(b_arr) <= np.asarray(a_arr)] = 0.0
    return out


def alternating_values(breaks, vals, cum, cuts):
    """Value of piece one of the alternating partition, and of piece two.

    Piece one holds the intervals [c_j, c_{j+1}] with even left index j
    (c_0 = 0, c_{m+1} = 1); piece two is the remainder, returned as
    total - piece_one so the two always sum to the density's exact mass.
    """
    v1 = 0.0
    fprev = 0.0
    take = True
    for c in cuts:
        fc = cdf_at(breaks, vals, cum, c)
        if take:
            v1 += fc - fprev
        fprev = fc
        take = not take
    total = float(cum[-1])
    if take:
        v1 += total - fprev
    return v1, total - v1


def _eval_candidate(fa, fb, ta, tb, idxs):
    """Piece-one values under both densities for grid-index cuts."""
    va1 = 0.0
    vb1 = 0.0
    fprev = 0.0
    gprev = 0.0
    take = True
    for i in idxs:
        fc = fa[i]
        gc = fb[i]
        if take:
            va1 += fc - fprev
            vb1 += gc - gprev
        fprev = fc
        gprev = gc
        take = not take
    if take:
        va1 += ta - fprev
        vb1 += tb - gprev
    return float(va1), float(vb1)


def bruteforce_scan(fa, fb, ta, tb, k):
    """Exhaustive Stackelberg scan over cut subsets of a grid.

    fa/fb: Alice/Bob CDF values at the grid positions; ta/tb: total
    masses. Enumerates all subsets of size 0..k in lexicographic order,
    plays Bob's tie-favoring choice on each, and returns
    (best_alice_value, best_cut_indices, bob_piece, bob_value). First
    strict improvement wins, so ties resolve to the lexicographically
    earliest candidate.
    """
    g = len(fa)
    best = -1.0
    best_idxs = ()
    best_piece = 1
    best_bob = 0.0
    for m in range(0, k + 1):
        if m == 2:
            # vectorized two-cut pass, same arithmetic as the generic loop
            i, j = np.triu_indices(g, 1)
            if len(i) == 0:
                continue
            va1 = (fa[i] - 0.0) + (ta - fa[j])
            vb1 = (fb[i] - 0.0) + (tb - fb[j])
            va2 = ta - va1
            vb2 = tb - vb1
            takes1 = (vb1 > vb2) | ((vb1 == vb2) & (va1 < va2))
            alice = np.where(takes1, va2, va1)
            pos = int(np.argmax(alice))
            if alice[pos] > best:
                best = float(alice[pos])
                best_idxs = (int(i[pos]), int(j[pos]))
                best_piece = 1 if takes1[pos] else 2
                best_bob = float(vb1[pos] if takes1[pos] else vb2[pos])
            continue
        for idxs in combinations(range(g), m):
            va1, vb1 = _eval_candidate(fa, fb, ta, tb, idxs)
            va2 = ta - va1
            vb2 = tb - vb1
            if vb1 > vb2 or (vb1 == vb2 and va1 < va2):
                alice, piece, bobv = va2, 1, vb1
            else:
                alice, piece, bobv = va1, 2, vb2
            if alice > best:
                best = alice
                best_idxs = idxs
                best_piece = piece
                best_bob = bobv
    return best, best_idxs, best_piece, best_bob


def constrained_scan(fa, fb, ta, tb, k, min_bob):
    """Best grid k-cut giving Bob a piece worth at least ``min_bob``.

    Returns (found, best_alice_value, cut_indices, bob_piece, bob_value).
    Both piece parities are tried (piece one first) for every subset.
    """
    g = len(fa)
    found = False
    best = -1.0
    best_idxs = ()
    best_piece = 1
    best_bob = 0.0
    for m in range(0, k + 1):
        if m == 2:
            i, j = np.triu_indices(g, 1)
            if len(i) == 0:
                continue
            va1 = (fa[i] - 0.0) + (ta - fa[j])
            vb1 = (fb[i] - 0.0) + (tb - fb[j])
            va2 = ta - va1
            vb2 = tb - vb1
            cand1 = np.where(vb1 >= min_bob, va2, -1.0)
            cand2 = np.where(vb2 >= min_bob, va1, -1.0)
            # piece one wins candidate-internal ties, earliest candidate wins
            take1 = cand1 >= cand2
            cand = np.where(take1, cand1, cand2)
            pos = int(np.argmax(cand))
            if cand[pos] > best and cand[pos] >= 0.0:
                found = True
                best = float(cand[pos])
                best_idxs = (int(i[pos]), int(j[pos]))
                best_piece = 1 if take1[pos] else 2
                best_bob = float(vb1[pos] if take1[pos] else vb2[pos])
            continue
        for idxs in combinations(range(g), m):
            va1, vb1 = _eval_candidate(fa, fb, ta, tb, idxs)
            va2 = ta - va1
            vb2 = tb - vb1
            if vb1 >= min_bob and va2 > best:
                found = True
                best = va2
                best_idxs = idxs
                best_piece = 1
                best_bob = vb1
            if vb2 >= min_bob and va1 > best:
                found = True
                best = va1
                best_idxs = idxs
                best_piece = 2
                best_bob = vb2
    return found, best, best_idxs, best_piece, best_bob


def exact_scan(pts, fa, fb, va_seg, vb_seg, ta, tb, k):
    """Exact Stackelberg scan: fixed cuts on breakpoints plus one solved cut.

    pts are the merged breakpoints of both densities with fa/fb their
    CDF values and va_seg/vb_seg the per-segment densities. For every
    subset of interior breakpoints of size < k, every insertion slot and
    both piece parities, the movable cut is solved in closed form so the
    responder's piece is worth exactly one half, and the best proposer
    outcome is kept (first strict improvement wins).
    """
    P = len(pts)
    best = -1.0
    best_cuts = ()
    best_piece = 1
    best_bob = 0.0
    max_m = min(k - 1, P - 2)
    for m in range(0, max_m + 1):
        for S in combinations(range(1, P - 1), m):
            bnd = (0,) + S + (P - 1,)
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
                for parity in (1, 2):
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
                        bob_piece = 1 if v1a < v2a else 2
                        best = alice
                        best_piece = bob_piece
                        best_bob = v1b if bob_piece == 1 else tb - v1b
                        best_cuts = tuple(
                            [float(pts[i]) for i in S[:j]] + [float(t)]
                            + [float(pts[i]) for i in S[j:]])
    return best, best_cuts, best_piece, best_bob


def interval_dp(cell_va, cell_is_iv, k, max_a):
    """Assign whole cells to the two pieces of an alternating partition.

    Maximizes the total Alice value of the "Alice" side subject to at
    most ``k`` piece changes along the cell sequence and at most
    ``max_a`` learned-interval cells on the Alice side. Returns
    (best_value, assignment) with assignment[i] = 1 when cell i is on
    the Alice side. Ties prefer staying in the current piece.
    """
    ncells = len(cell_va)
    neg = float("-inf")
    # value[j, r, p]: j Alice intervals used, r cuts used, current piece p
    # (p=1 means Alice side)
    value = np.full((max_a + 1, k + 1, 2), neg, dtype=np.float64)
    iv0 = int(cell_is_iv[0])
    va0 = float(cell_va[0])
    value[0, 0, 0] = 0.0
    if iv0 <= max_a:
        value[iv0, 0, 1] = va0
    nstates = (max_a + 1) * (k + 1) * 2
    decisions = []
    for i in range(1, ncells):
        iv = int(cell_is_iv[i])
        va = float(cell_va[i])
        new = np.full_like(value, neg)
        dec = np.zeros(value.shape, dtype=np.uint8)  # 1 = stayed in same piece

        # arrive on Bob side (p=0): stay from p=0 or cut away from p=1
        stay = value[:, :, 0]
        switch = np.full_like(stay, neg)
        switch[:, 1:] = value[:, :-1, 1]
        use_stay = stay >= switch
        new[:, :, 0] = np.where(use_stay, stay, switch)
        dec[:, :, 0] = use_stay

        # arrive on Alice side (p=1): gains va, consumes iv interval slots
        stay = np.full_like(value[:, :, 1], neg)
        switch = np.full_like(value[:, :, 1], neg)
        if iv == 0:
            stay[:, :] = value[:, :, 1]
            switch[:, 1:] = value[:, :-1, 0]
        else:
            stay[1:, :] = value[:-1, :, 1]
            switch[1:, 1:] = value[:-1, :-1, 0]
        use_stay = stay >= switch
        new[:, :, 1] = np.where(use_stay, stay, switch) + va
        dec[:, :, 1] = use_stay

        decisions.append(np.packbits(dec, axis=None))
        value = new

    # deterministic winner scan: j asc, r asc, p in (0, 1), strict >
    best = neg
    bj = br = bp = 0
    for j in range(max_a + 1):
        for r in range(k + 1):
            for p in (0, 1):
                v = float(value[j, r, p])
                if v > best:
                    best = v
                    bj, br, bp = j, r, p
    assignment = np.zeros(ncells, dtype=np.uint8)
    j, r, p = bj, br, bp
    shape = (max_a + 1, k + 1, 2)
    for i in range(ncells - 1, 0, -1):
        assignment[i] = p
        dec = np.unpackbits(decisions[i - 1], count=nstates).reshape(shape)
        stayed = bool(dec[j, r, p])
        if p == 1 and int(cell_is_iv[i]):
            j -= 1
        if not stayed:
            r -= 1
            p = 1 - p
    assignment[0] = p
    return best, assignment
