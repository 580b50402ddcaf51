"""Responder automata: honest myopic play and the two deceivers.

Every automaton consumes whole blocks of identical rounds and may split
a block where its behavior switches; switch rounds are computed with
integer or affine arithmetic so block play is exactly round-faithful.
The regret ledger accrues max-piece-value minus realized value each
round, accumulated as rounds * per_round_loss per segment.
"""

from __future__ import annotations

from typing import Optional

from .adversarial import SpikeParams, spiked_density, unspiked_density
from .engine import BlockContext
from .errors import ContractError
from .partitions import Allocation, piece_values_for_cuts
from .valuations import Density, uniform_density, value_of


def myopic_choice(v1: float, v2: float, va1: float, va2: float) -> int:
    """Index of the higher-value piece; ties go to the piece the
    proposer values less, then to piece two."""
    if v1 > v2:
        return 1
    if v2 > v1:
        return 2
    return 1 if va1 < va2 else 2


class BobAutomaton:
    """Base responder: subclasses decide segments, the base keeps the ledger."""

    mode = "abstract"

    def __init__(self):
        self.regret_ledger = 0.0

    def play_block(self, ctx: BlockContext):
        segments = self.segments_for_block(ctx)
        vmax = ctx.vb1 if ctx.vb1 > ctx.vb2 else ctx.vb2
        for choice, rounds in segments:
            if rounds > 0:
                loss = vmax - (ctx.vb1 if choice == 1 else ctx.vb2)
                self.regret_ledger += rounds * loss
        return segments

    def segments_for_block(self, ctx: BlockContext):
        raise NotImplementedError


class MyopicBob(BobAutomaton):
    """Chooses his better piece every round; zero regret by construction."""

    mode = "myopic"

    def __init__(self, density: Optional[Density] = None):
        super().__init__()
        self.density = density

    def segments_for_block(self, ctx: BlockContext):
        return [(myopic_choice(ctx.vb1, ctx.vb2, ctx.va1, ctx.va2), ctx.rounds)]


def _pretend_values(pretend: Density, ctx: BlockContext):
    if ctx.pieces is not None:
        return value_of(pretend, ctx.pieces[0]), value_of(pretend, ctx.pieces[1])
    return piece_values_for_cuts(pretend, ctx.cuts)


class PretendSpikedBob(BobAutomaton):
    """True density spiked, plays as unspiked-myopic for the first
    n_threshold - 1 rounds whose partition distinguishes the spike,
    switching to honest myopic play on the n-th distinguishing round."""

    mode = "pretend_sigma0"

    def __init__(self, params: SpikeParams, n_threshold: int):
        super().__init__()
        if n_threshold < 1:
            raise ContractError("distinguishing threshold must be >= 1")
        self.params = params
        self.n_threshold = n_threshold
        self.distinguishing_count = 0
        self.density = spiked_density(params)
        self.pretend_density = unspiked_density(params.k)

    def segments_for_block(self, ctx: BlockContext):
        vp1, vp2 = _pretend_values(self.pretend_density, ctx)
        c_pre = myopic_choice(vp1, vp2, ctx.va1, ctx.va2)
        c_true = myopic_choice(ctx.vb1, ctx.vb2, ctx.va1, ctx.va2)
        n = ctx.rounds
        if c_pre == c_true:  # not a distinguishing partition
            return [(c_true, n)]
        before = self.distinguishing_count
        self.distinguishing_count += n
        pretend_rounds = max(0, min(n, self.n_threshold - 1 - before))
        if pretend_rounds == n:
            return [(c_pre, n)]
        if pretend_rounds == 0:
            return [(c_true, n)]
        return [(c_pre, pretend_rounds), (c_true, n - pretend_rounds)]


class BudgetSwitchBob(BobAutomaton):
    """Plays myopically under a pretend density while his cumulative
    regret (computed before each round) stays within the budget, then
    reverts to honest myopic play."""

    mode = "budget_switch"

    def __init__(self, pretend_density: Density, budget: float):
        super().__init__()
        if budget < 0:
            raise ContractError("budget must be nonnegative")
        self.pretend_density = pretend_density
        self.budget = budget

    @property
    def spent(self) -> float:
        return self.regret_ledger

    def segments_for_block(self, ctx: BlockContext):
        vp1, vp2 = _pretend_values(self.pretend_density, ctx)
        c_pre = myopic_choice(vp1, vp2, ctx.va1, ctx.va2)
        c_true = myopic_choice(ctx.vb1, ctx.vb2, ctx.va1, ctx.va2)
        n = ctx.rounds
        vmax = ctx.vb1 if ctx.vb1 > ctx.vb2 else ctx.vb2
        loss = vmax - (ctx.vb1 if c_pre == 1 else ctx.vb2)
        if c_pre == c_true or loss == 0.0:
            return [(c_pre, n)]
        if self.regret_ledger > self.budget:
            return [(c_true, n)]
        # pretend while the ledger entering the round is within budget
        affordable = int((self.budget - self.regret_ledger) / loss) + 1
        pretend_rounds = min(n, max(1, affordable))
        if pretend_rounds >= n:
            return [(c_pre, n)]
        return [(c_pre, pretend_rounds), (c_true, n - pretend_rounds)]


def bob_choose(bob: BobAutomaton, alloc: Allocation,
               vA: Optional[Density] = None) -> int:
    """Single-round interface: advance the automaton on one allocation.

    The automaton's true density must be set (engine play passes values
    directly instead). ``vA`` feeds the tie rule and defaults to uniform.
    """
    if getattr(bob, "density", None) is None:
        raise ContractError("this automaton has no density attached")
    vA = vA or uniform_density()
    va1 = value_of(vA, alloc.piece_one)
    va2 = value_of(vA, alloc.piece_two)
    vb1 = value_of(bob.density, alloc.piece_one)
    vb2 = value_of(bob.density, alloc.piece_two)
    ctx = BlockContext((), va1, va2, vb1, vb2, 1,
                       pieces=(alloc.piece_one, alloc.piece_two))
    segments = bob.play_block(ctx)
    return segments[0][0]


def distinguishes(alloc_or_cuts, k: int, w: float, z: float) -> bool:
    """Whether unspiked- and spiked-myopic responders disagree on the
    partition, under identical (proposer-favoring, uniform) tie-breaking."""
    params = SpikeParams(k, w, z)
    if isinstance(alloc_or_cuts, Allocation):
        p1 = alloc_or_cuts.piece_one
        p2 = alloc_or_cuts.piece_two
        base = unspiked_density(k)
        spiked = spiked_density(params)
        l1, l2 = p1.length, p2.length
        c0 = myopic_choice(value_of(base, p1), value_of(base, p2), l1, l2)
        c1 = myopic_choice(value_of(spiked, p1), value_of(spiked, p2), l1, l2)
        return c0 != c1
    cuts = tuple(alloc_or_cuts)
    base = unspiked_density(k)
    spiked = spiked_density(params)
    v01, v02 = piece_values_for_cuts(base, cuts)
    vs1, vs2 = piece_values_for_cuts(spiked, cuts)
    la1, la2 = piece_values_for_cuts(uniform_density(), cuts)
    c0 = myopic_choice(v01, v02, la1, la2)
    c1 = myopic_choice(vs1, vs2, la1, la2)
    return c0 != c1
