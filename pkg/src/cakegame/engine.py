"""Round loop, history recording, and regret accounting.

The session is block-structured: a strategy plays a cut vector for a
number of consecutive rounds and the responder automaton splits the
block into choice segments (it may switch behavior mid-block). Utilities
accumulate as rounds * per_round_value, so a game over 10^9 identical
rounds costs the same as one over ten; the arithmetic is documented and
deterministic, and replays are byte-identical.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .backend import kernels
from .errors import ContractError, HorizonExhausted
from .partitions import cut_vector
from .valuations import Density


@dataclass(frozen=True)
class Segment:
    """A run of consecutive rounds with identical cuts and choice."""

    cuts: tuple
    choice: int
    rounds: int
    alice_utility: float  # per round
    bob_utility: float  # per round


@dataclass(frozen=True)
class BlockResult:
    requested: int
    played: int
    chose_one: int
    chose_two: int

    @property
    def truncated(self) -> bool:
        return self.played < self.requested


@dataclass
class History:
    """Full trajectory of a game, stored as run-length segments."""

    T: int
    k: int
    u_star_alice: float
    segments: list = field(default_factory=list)
    total_alice: float = 0.0
    total_bob: float = 0.0

    @property
    def rounds_played(self) -> int:
        return sum(s.rounds for s in self.segments)

    def iter_rounds(self):
        """Yield (round, cuts, choice, alice_utility, bob_utility) per round."""
        t = 1
        for s in self.segments:
            for _ in range(s.rounds):
                yield t, s.cuts, s.choice, s.alice_utility, s.bob_utility
                t += 1

    def validate(self, vA: Density, vB: Density, tol: float = 1e-12) -> None:
        """Check per-round piece-mass consistency for both players."""
        if self.rounds_played != self.T:
            raise ContractError(
                f"history has {self.rounds_played} rounds, expected {self.T}")
        for s in self.segments:
            for d in (vA, vB):
                v1, v2 = kernels.alternating_values(d.breaks, d.vals, d.cum, s.cuts)
                if abs((v1 + v2) - 1.0) > tol:
                    raise ContractError("piece masses do not sum to the whole cake")


class GameSession:
    """Round source for one game; owns the horizon and the responder."""

    def __init__(self, vA: Density, vB: Density, bob, T: int, k: int,
                 u_star: float, history: History):
        if T < 1:
            raise ContractError("need at least one round")
        if k < 1:
            raise ContractError("need at least one cut")
        self.alice_density = vA
        self._vB = vB
        self._bob = bob
        self.T = T
        self.k = k
        self.u_star = u_star
        self.delta = min(vA.delta_bound, vB.delta_bound)
        self.Delta = max(vA.Delta_bound, vB.Delta_bound)
        self.history = history
        self.round = 0  # rounds already played

    @property
    def remaining(self) -> int:
        return self.T - self.round

    def play(self, cuts, n: int = 1) -> BlockResult:
        """Play the cut vector for n consecutive rounds.

        Plays min(n, remaining) rounds; when that is fewer than n the
        rounds still count and HorizonExhausted carries the partial
        result.
        """
        if n < 1:
            raise ContractError("block length must be at least 1")
        try:
            cuts = cut_vector(cuts, self.k)
        except ContractError as exc:
            raise ContractError(f"round {self.round + 1}: {exc}") from exc
        n_play = min(n, self.remaining)
        result = BlockResult(n, 0, 0, 0)
        if n_play > 0:
            vA = self.alice_density
            va1, va2 = kernels.alternating_values(vA.breaks, vA.vals, vA.cum, cuts)
            vb1, vb2 = kernels.alternating_values(
                self._vB.breaks, self._vB.vals, self._vB.cum, cuts)
            ctx = BlockContext(cuts, va1, va2, vb1, vb2, n_play)
            segments = self._bob.play_block(ctx)
            if sum(r for _, r in segments) != n_play:
                raise ContractError("responder automaton lost rounds in a block")
            ones = 0
            twos = 0
            for choice, rounds in segments:
                if rounds <= 0:
                    continue
                if choice == 1:
                    ones += rounds
                    a_u, b_u = va2, vb1
                else:
                    twos += rounds
                    a_u, b_u = va1, vb2
                self.history.segments.append(Segment(cuts, choice, rounds, a_u, b_u))
                self.history.total_alice += rounds * a_u
                self.history.total_bob += rounds * b_u
            self.round += n_play
            result = BlockResult(n, n_play, ones, twos)
        if n_play < n:
            raise HorizonExhausted(result)
        return result

    def play_rest(self, cuts) -> Optional[BlockResult]:
        """Commit: play the cuts for every remaining round."""
        if self.remaining == 0:
            return None
        return self.play(cuts, self.remaining)


@dataclass(frozen=True)
class BlockContext:
    """Per-block data handed to responder automata."""

    cuts: tuple
    va1: float
    va2: float
    vb1: float
    vb2: float
    rounds: int
    pieces: Optional[tuple] = None  # explicit (piece_one, piece_two), else from cuts


def run_game(alice, bob, vA: Density, vB: Density, T: int, k: int,
             u_star: Optional[float] = None) -> History:
    """Drive T rounds of the k-cut game and return the full history.

    The proposer strategy must consume the whole horizon through the
    session it is handed. ``u_star`` defaults to the exact Stackelberg
    value of the instance, computed once up front.
    """
    if u_star is None:
        from .stackelberg import stackelberg_exact

        u_star = stackelberg_exact(vA, vB, k).value
    history = History(T=T, k=k, u_star_alice=u_star)
    session = GameSession(vA, vB, bob, T, k, u_star, history)
    alice.run(session)
    if session.remaining > 0:
        raise ContractError(
            f"strategy stopped after round {session.round} of {T}")
    return history


@dataclass
class RegretReport:
    alice_stackelberg_regret: float
    bob_choice_regret: float
    per_segment: list  # (rounds, alice_increment, bob_increment) per round in segment

    @property
    def per_round(self):
        """Per-round (alice, bob) regret increments, expanded."""
        alice = np.concatenate([np.full(r, a) for r, a, _ in self.per_segment]) \
            if self.per_segment else np.zeros(0)
        bob = np.concatenate([np.full(r, b) for r, _, b in self.per_segment]) \
            if self.per_segment else np.zeros(0)
        return alice, bob


def regret_report(h: History, vB: Density) -> RegretReport:
    """Cumulative proposer and responder regrets for a finished history.

    The proposer benchmark is T times the stored Stackelberg value; the
    responder benchmark in each round is his better piece that round.
    """
    per_segment = []
    bob_total = 0.0
    for s in h.segments:
        vb1, vb2 = kernels.alternating_values(vB.breaks, vB.vals, vB.cum, s.cuts)
        best = vb1 if vb1 > vb2 else vb2
        b_inc = best - s.bob_utility
        a_inc = h.u_star_alice - s.alice_utility
        per_segment.append((s.rounds, a_inc, b_inc))
        bob_total += s.rounds * b_inc
    alice_total = h.T * h.u_star_alice - h.total_alice
    return RegretReport(alice_total, bob_total, per_segment)


# --- serialization -------------------------------------------------------


def history_to_csv(h: History, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round"] + [f"cut{i + 1}" for i in range(h.k)]
                   + ["choice", "uA", "uB"])
        for t, cuts, choice, ua, ub in h.iter_rounds():
            w.writerow([t] + [repr(c) for c in cuts] + [choice, repr(ua), repr(ub)])


def history_from_csv(path) -> History:
    with open(path) as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    k = len(header) - 4
    segments = []
    total_a = 0.0
    total_b = 0.0
    for row in rows[1:]:
        cuts = tuple(float(x) for x in row[1:1 + k])
        choice = int(row[1 + k])
        ua = float(row[2 + k])
        ub = float(row[3 + k])
        if segments and segments[-1].cuts == cuts and segments[-1].choice == choice \
                and segments[-1].alice_utility == ua:
            last = segments[-1]
            segments[-1] = Segment(cuts, choice, last.rounds + 1, ua, ub)
        else:
            segments.append(Segment(cuts, choice, 1, ua, ub))
        total_a += ua
        total_b += ub
    h = History(T=len(rows) - 1, k=k, u_star_alice=float("nan"),
                segments=segments, total_alice=total_a, total_bob=total_b)
    return h


def history_to_json(h: History, path=None):
    doc = {
        "T": h.T,
        "k": h.k,
        "u_star_alice": h.u_star_alice,
        "total_alice": h.total_alice,
        "total_bob": h.total_bob,
        "segments": [
            {"cuts": list(s.cuts), "choice": s.choice, "rounds": s.rounds,
             "uA": s.alice_utility, "uB": s.bob_utility}
            for s in h.segments
        ],
    }
    if path is None:
        return doc
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
    return doc


def history_from_json(path) -> History:
    with open(path) as fh:
        doc = json.load(fh)
    segments = [Segment(tuple(s["cuts"]), s["choice"], s["rounds"], s["uA"], s["uB"])
                for s in doc["segments"]]
    return History(T=doc["T"], k=doc["k"], u_star_alice=doc["u_star_alice"],
                   segments=segments, total_alice=doc["total_alice"],
                   total_bob=doc["total_bob"])


def report_to_json(r: RegretReport, path=None):
    doc = {
        "alice_stackelberg_regret": r.alice_stackelberg_regret,
        "bob_choice_regret": r.bob_choice_regret,
        "per_segment": [list(seg) for seg in r.per_segment],
    }
    if path is not None:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
    return doc


def report_from_json(path) -> RegretReport:
    with open(path) as fh:
        doc = json.load(fh)
    return RegretReport(doc["alice_stackelberg_regret"],
                        doc["bob_choice_regret"],
                        [tuple(seg) for seg in doc["per_segment"]])
