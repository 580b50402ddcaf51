"""Shared test utilities: stress responders and independent oracles."""

import itertools

import numpy as np

from cakegame.bob_strategies import BobAutomaton, myopic_choice
from cakegame.valuations import Density, cut_point, interval_value, piece


class ContraryBob(BobAutomaton):
    """Picks his worse piece whenever his spent regret allows it.

    The worst case for a majority-vote search: every affordable lie is
    told, regardless of how the search would use it.
    """

    mode = "contrary"

    def __init__(self, budget: float):
        super().__init__()
        self.budget = budget

    def segments_for_block(self, ctx):
        c_true = myopic_choice(ctx.vb1, ctx.vb2, ctx.va1, ctx.va2)
        c_lie = 2 if c_true == 1 else 1
        vmax = ctx.vb1 if ctx.vb1 > ctx.vb2 else ctx.vb2
        loss = vmax - (ctx.vb1 if c_lie == 1 else ctx.vb2)
        n = ctx.rounds
        if loss == 0.0:
            return [(c_lie, n)]
        if self.regret_ledger > self.budget:
            return [(c_true, n)]
        affordable = int((self.budget - self.regret_ledger) / loss) + 1
        lie_rounds = min(n, max(1, affordable))
        if lie_rounds >= n:
            return [(c_lie, n)]
        return [(c_lie, lie_rounds), (c_true, n - lie_rounds)]


def crossover_oracle(vB: Density, fixed_cuts, k: int):
    """True indifference point for the movable last cut, or None.

    Independent of the search code: solves piece-one mass = 1/2 directly
    on the responder CDF. The movable cut is the k-th; the piece that
    grows with it contains the interval left of the cut.
    """
    from cakegame.partitions import piece_values_for_cuts

    lo = fixed_cuts[-1] if fixed_cuts else 0.0
    grown = 1 if (k - 1) % 2 == 0 else 2

    def grown_value(z):
        v1, v2 = piece_values_for_cuts(vB, tuple(fixed_cuts) + (z,))
        return v1 if grown == 1 else v2

    g_lo = grown_value(lo)
    g_hi = grown_value(1.0)
    if not (g_lo < 0.5 < g_hi):
        return None
    # grown value is linear increasing in z with slope vB(z): invert by
    # walking the responder's CDF
    a, b = lo, 1.0
    for _ in range(200):
        mid = 0.5 * (a + b)
        if grown_value(mid) < 0.5:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def assignment_oracle(cell_va, cell_is_iv, k, max_a):
    """Brute-force twin of the interval DP for small cell counts."""
    n = len(cell_va)
    best = None
    best_assign = None
    for bits in itertools.product((0, 1), repeat=n):
        cuts = sum(1 for a, b in zip(bits, bits[1:]) if a != b)
        if cuts > k:
            continue
        a_count = sum(b for b, iv in zip(bits, cell_is_iv) if iv)
        if a_count > max_a:
            continue
        val = sum(v for v, b in zip(cell_va, bits) if b)
        if best is None or val > best:
            best = val
            best_assign = bits
    return best, best_assign


def random_piece(rng, max_intervals=4):
    """Random normalized piece of the unit cake."""
    m = int(rng.integers(1, max_intervals + 1))
    pts = np.sort(rng.uniform(0.0, 1.0, 2 * m))
    return piece(*((pts[2 * i], pts[2 * i + 1]) for i in range(m)))


def mass_oracle(d: Density, p) -> float:
    """Piece mass summed interval-by-interval via the public CDF diff."""
    return sum(interval_value(d, a, b) for a, b in p.intervals)
