"""Proposer-side learning strategies.

Two binary-search primitives (single-round probes for a myopic
responder; repeated probes with majority vote for a budgeted one) and
four commit-then-exploit strategies built on them. Every strategy is
deterministic: identical parameters and responder replies reproduce the
cut sequence bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import ContractError, HorizonExhausted
from .stackelberg import interval_selection
from .valuations import cut_point


@dataclass(frozen=True)
class RateFunction:
    """Growth rate f(T) for a responder's regret budget c*f(T).

    The log_power kind exists for the majority-vote schedule's slack
    factor g; budget rates use the other two.
    """

    kind: str  # "power", "poly_over_polylog", or "log_power"
    param: float

    def __call__(self, T: int) -> float:
        if self.kind == "power":
            return float(T) ** self.param
        if self.kind == "poly_over_polylog":
            return float(T) / math.log(T) ** self.param
        if self.kind == "log_power":
            return math.log(T) ** self.param
        raise ContractError(f"unknown rate kind {self.kind!r}")


def power(alpha: float) -> RateFunction:
    return RateFunction("power", alpha)


def poly_over_polylog(log_power: float) -> RateFunction:
    return RateFunction("poly_over_polylog", log_power)


LOG_RATE = RateFunction("log_power", 1.0)  # g(T) = log T


class SearchOutcome(NamedTuple):
    found: bool
    x_tilde: Optional[float]
    rounds_used: int
    min_vote_margin: Optional[int] = None  # closest majority in the search


@dataclass(frozen=True)
class _SearchSpace:
    """Search coordinates for the movable last cut.

    In mirrored mode the virtual axis is the reflected cake: virtual cut
    c plays as actual cut 1-c, which lets the same right-moving search
    walk leftward from a reference point.
    """

    fixed_virtual: tuple
    k: int
    mirrored: bool = False

    @property
    def lo(self) -> float:
        return self.fixed_virtual[-1] if self.fixed_virtual else 0.0

    def cuts(self, z: float) -> tuple:
        virtual = self.fixed_virtual + (z,)
        if not self.mirrored:
            return virtual
        return tuple(sorted(1.0 - c for c in virtual))

    def point(self, z: float) -> float:
        return 1.0 - z if self.mirrored else z

    @property
    def grown_piece(self) -> int:
        """Actual piece index that grows as the virtual cut moves right."""
        if self.mirrored:
            return 2  # reflected interval k-1 lands at actual index 1
        return 1 if (self.k - 1) % 2 == 0 else 2


def _standard_space(session, fixed_cuts) -> _SearchSpace:
    fixed = tuple(float(c) for c in fixed_cuts)
    if len(fixed) != session.k - 1:
        raise ContractError("need k-1 fixed cuts for the last-cut search")
    if any(b < a for a, b in zip(fixed, fixed[1:])):
        raise ContractError("fixed cuts must be sorted")
    return _SearchSpace(fixed, session.k)


def _choice_of(result) -> int:
    return 1 if result.chose_one > result.chose_two else 2


def _plain_search(session, space: _SearchSpace, eps: float) -> SearchOutcome:
    lo = space.lo
    hi = 1.0
    rounds = 0
    grown = space.grown_piece
    res = session.play(space.cuts(hi), 1)
    rounds += 1
    if _choice_of(res) != grown:
        # even the largest grown piece loses: no crossover
        return SearchOutcome(False, None, rounds)
    res = session.play(space.cuts(lo), 1)
    rounds += 1
    if _choice_of(res) == grown:
        return SearchOutcome(False, None, rounds)
    while hi - lo > 2.0 * eps:
        z = 0.5 * (lo + hi)
        res = session.play(space.cuts(z), 1)
        rounds += 1
        if _choice_of(res) == grown:
            hi = z
        else:
            lo = z
    return SearchOutcome(True, space.point(0.5 * (lo + hi)), rounds)


def _majority_search(session, space: _SearchSpace, eps: float,
                     reps: int) -> SearchOutcome:
    lo0 = space.lo
    hi0 = 1.0
    lo, hi = lo0, hi0
    rounds = 0
    grown = space.grown_piece
    min_margin = None
    while hi - lo > 0.5 * eps:
        z = 0.5 * (lo + hi)
        res = session.play(space.cuts(z), reps)
        rounds += res.played
        grown_votes = res.chose_one if grown == 1 else res.chose_two
        margin = abs(2 * grown_votes - res.played)
        if min_margin is None or margin < min_margin:
            min_margin = margin
        if 2 * grown_votes >= res.played:  # ties count for the grown piece
            hi = z
        else:
            lo = z
    if lo == lo0 or hi == hi0:
        return SearchOutcome(False, None, rounds, min_margin)
    return SearchOutcome(True, space.point(0.5 * (lo + hi)), rounds, min_margin)


def binary_search_indifference(session, fixed_cuts, eps: float) -> SearchOutcome:
    """Locate the last cut making the responder indifferent, vs a myopic
    responder. Two edge probes detect non-existence, then bisection
    narrows to width 2*eps; at most 2 + ceil(log2(1/eps)) rounds."""
    if eps <= 0:
        raise ContractError("eps must be positive")
    return _plain_search(session, _standard_space(session, fixed_cuts), eps)


def majority_vote_repeats(f: RateFunction, g: RateFunction, T: int,
                          delta: float, eps: float) -> int:
    return math.ceil(4.0 * f(T) * g(T) / (delta * eps))


def robust_binary_search(session, fixed_cuts, eps: float, f: RateFunction,
                         g: RateFunction = LOG_RATE) -> SearchOutcome:
    """Indifference search that a responder with regret budget c*f(T)
    cannot derail for T past a threshold depending on (g, c).

    Each probe is repeated ceil(4 f(T) g(T) / (delta eps)) times with a
    majority vote; non-existence claims only cover cuts at distance eps
    from the search edges.
    """
    if eps <= 0:
        raise ContractError("eps must be positive")
    T = session.T
    if eps > f(T):
        raise ContractError("need eps <= f(T) for the majority-vote search")
    reps = majority_vote_repeats(f, g, T, session.delta, eps)
    return _majority_search(session, _standard_space(session, fixed_cuts),
                            eps, reps)


# --- two-cut strategies ---------------------------------------------------


def _shift_two_cuts(x: float, y: float, total: float, grow_middle: bool):
    """Move the pair by ``total`` so the responder's intended piece grows.

    Shift splits across the two cuts proportionally to the available
    slack, capped at half the slack so an oversized pre-asymptotic shift
    degrades the partition instead of destroying it.
    """
    if grow_middle:
        wx, wy = x, 1.0 - y
        w = wx + wy
        if w == 0.0:
            return x, y
        applied = min(total, 0.5 * w)
        return x - applied * wx / w, y + applied * wy / w
    half_gap = 0.5 * (y - x)
    s = min(0.5 * total, 0.5 * half_gap)
    return x + s, y - s


class _TwoCutBase:
    """Sweep indifference pairs on an eta-grid, keep the best, shift, commit."""

    def __init__(self, T: int):
        if T < 1:
            raise ContractError("horizon must be positive")
        self.T = T
        self.phase = "init"
        self.learned_points = []
        self.committed_cuts = None
        self.narrow_vote_searches = 0  # majority margins below 2*f(T)

    def _note_search(self, outcome) -> None:
        pass

    def _parameters(self, session):
        raise NotImplementedError

    def _search(self, session, fixed, eps) -> SearchOutcome:
        raise NotImplementedError

    def _shift_total(self, session, eps, eta) -> float:
        raise NotImplementedError

    def run(self, session) -> None:
        if session.k != 2:
            raise ContractError("this strategy plays the two-cut game")
        if session.T != self.T:
            raise ContractError("session horizon differs from strategy horizon")
        eps, eta = self._parameters(session)
        self.phase = "sweep"
        pairs = []
        try:
            i = 0
            while True:
                x = eta * i
                if x >= 1.0:
                    break
                out = self._search(session, (x,), eps)
                self._note_search(out)
                if not out.found:
                    break
                pairs.append((x, out.x_tilde))
                self.learned_points.append((x, out.x_tilde))
                i += 1
        except HorizonExhausted:
            pass
        self.phase = "commit"
        vA = session.alice_density
        if not pairs:
            mid = cut_point(vA, 0.5)
            self.committed_cuts = (mid, 1.0)
        else:
            from .partitions import piece_values_for_cuts

            best = -1.0
            best_pair = pairs[0]
            best_prefers_middle = False
            for x, y in pairs:
                va_out, va_mid = piece_values_for_cuts(vA, (x, y))
                score = va_mid if va_mid > va_out else va_out
                if score > best:
                    best = score
                    best_pair = (x, y)
                    best_prefers_middle = va_mid > va_out
            x, y = best_pair
            # grow whichever side Alice is giving away
            xs, ys = _shift_two_cuts(x, y, self._shift_total(session, eps, eta),
                                     grow_middle=not best_prefers_middle)
            self.committed_cuts = (xs, ys)
        session.play_rest(self.committed_cuts)


class TwoCutMyopicAlice(_TwoCutBase):
    """Discretized moving-knife sweep against a myopic responder."""

    def __init__(self, T: int, eps_override: Optional[float] = None):
        super().__init__(T)
        self.eps_override = eps_override

    def _parameters(self, session):
        eps = self.eps_override
        if eps is None:
            eps = math.sqrt(math.log(self.T) / self.T) if self.T >= 2 else 0.5
        eta = session.Delta * eps
        return eps, eta

    def _search(self, session, fixed, eps):
        return binary_search_indifference(session, fixed, eps)

    def _shift_total(self, session, eps, eta):
        return eps * session.Delta / session.delta


class TwoCutRobustAlice(_TwoCutBase):
    """Two-cut sweep with majority-vote searches; sound against any
    responder whose regret stays within c*f(T)."""

    def __init__(self, T: int, f: RateFunction, g: RateFunction = LOG_RATE):
        super().__init__(T)
        self.f = f
        self.g = g

    @classmethod
    def private_rate(cls, T: int) -> "TwoCutRobustAlice":
        """Instantiation that needs no knowledge of the responder's rate."""
        return cls(T, poly_over_polylog(5.0))

    def _parameters(self, session):
        T = self.T
        fT = self.f(T)
        eps = fT ** (1.0 / 3.0) * T ** (-1.0 / 3.0) * math.log(T) ** (2.0 / 3.0)
        eps = min(eps, fT)  # majority-vote search precondition
        eta = eps * session.Delta / session.delta
        return eps, eta

    def _search(self, session, fixed, eps):
        return robust_binary_search(session, fixed, eps, self.f, self.g)

    def _note_search(self, outcome) -> None:
        # diagnostic for horizons too small for the budget assumption:
        # a vote decided by less than 2*f(T) ballots could have been
        # flipped by a responder with constant 1
        if (outcome.min_vote_margin is not None
                and outcome.min_vote_margin < 2.0 * self.f(self.T)):
            self.narrow_vote_searches += 1

    def _shift_total(self, session, eps, eta):
        return 2.0 * eta


# --- k-cut strategies -----------------------------------------------------


def _shift_cuts(cuts, directions, total: float):
    """Move each cut into the neighbouring proposer-side cell.

    Slack per cut is the gap to the next boundary in its direction,
    halved when that boundary's cut approaches; the total shift is split
    proportionally and capped at half the slack so cells never collapse.
    """
    n = len(cuts)
    slack = []
    for j, (c, d) in enumerate(zip(cuts, directions)):
        if d > 0:
            nxt = cuts[j + 1] if j + 1 < n else 1.0
            gap = nxt - c
            if j + 1 < n and directions[j + 1] < 0:
                gap *= 0.5
        else:
            prv = cuts[j - 1] if j > 0 else 0.0
            gap = c - prv
            if j > 0 and directions[j - 1] > 0:
                gap *= 0.5
        slack.append(gap)
    w = sum(slack)
    if w == 0.0:
        return tuple(cuts)
    out = []
    for c, d, s in zip(cuts, directions, slack):
        amount = min(total * s / w, 0.5 * s)
        out.append(c + d * amount)
    return tuple(out)


class _KCutBase:
    """Map the responder's density into near-equal-value intervals, pick
    the best minority piece, shift toward the responder, commit."""

    def __init__(self, T: int, k: int):
        if T < 1:
            raise ContractError("horizon must be positive")
        if k < 3:
            raise ContractError("this strategy needs at least three cuts")
        self.T = T
        self.k = k
        self.phase = "init"
        self.learned_points = []
        self.committed_cuts = None
        self.intended_bob_piece = None
        self.narrow_vote_searches = 0

    def _note_search(self, outcome) -> None:
        pass

    def _parameters(self, session):
        raise NotImplementedError

    def _search(self, session, space, eps) -> SearchOutcome:
        raise NotImplementedError

    def _shift_total(self, session, eps, eta) -> float:
        raise NotImplementedError

    def run(self, session) -> None:
        if session.k != self.k:
            raise ContractError("session cut count differs from strategy")
        if session.T != self.T:
            raise ContractError("session horizon differs from strategy horizon")
        k = self.k
        eps, eta = self._parameters(session)
        points = {}
        try:
            self.phase = "midpoint"
            out = self._search(session, _SearchSpace((0.0,) * (k - 1), k), eps)
            self._note_search(out)
            if out.found:
                m = out.x_tilde
                x0 = max(0.0, m - eta)
                points[0] = x0
                points[1] = m
                self.phase = "sweep-right"
                i = 1
                while True:
                    fixed = tuple(sorted((0.0,) * (k - 3) + (x0, points[i])))
                    res = self._search(session, _SearchSpace(fixed, k), eps)
                    self._note_search(res)
                    if not res.found:
                        break
                    points[i + 1] = res.x_tilde
                    i += 1
                if i >= 2:
                    self.phase = "sweep-left"
                    x2 = points[2]
                    j = 0
                    while points[j] > 0.0:
                        fixed = tuple(sorted(
                            (0.0,) * (k - 3) + (1.0 - x2, 1.0 - points[j])))
                        res = self._search(
                            session, _SearchSpace(fixed, k, mirrored=True), eps)
                        self._note_search(res)
                        if not res.found:
                            break
                        points[j - 1] = res.x_tilde
                        j -= 1
        except HorizonExhausted:
            pass
        self.phase = "commit"
        self.learned_points = [points[i] for i in sorted(points)]
        vA = session.alice_density
        if len(points) < 2:
            mid = cut_point(vA, 0.5)
            self.committed_cuts = (mid,) + (1.0,) * (k - 1)
        else:
            xs = self.learned_points
            ivs = list(zip(xs[:-1], xs[1:]))
            cuts, bob_piece, _ = interval_selection(vA, ivs, k)
            directions = _selection_directions(cuts, ivs, bob_piece)
            shifted = _shift_cuts(cuts, directions, self._shift_total(session, eps, eta))
            self.committed_cuts = tuple(shifted) + (1.0,) * (k - len(shifted))
            self.intended_bob_piece = bob_piece
        session.play_rest(self.committed_cuts)


def _selection_directions(cuts, ivs, bob_piece):
    """Per-cut move direction: into the proposer-side cell it borders."""
    directions = []
    for c in cuts:
        # the cell left of cut c belongs to piece one iff an even number
        # of cuts lie strictly left of it
        left_cuts = sum(1 for u in cuts if u < c)
        left_piece = 1 if left_cuts % 2 == 0 else 2
        directions.append(+1 if left_piece == bob_piece else -1)
    return tuple(directions)


class KCutMyopicAlice(_KCutBase):
    def _parameters(self, session):
        eta = (self.T * self.k) ** -0.5
        eps = session.delta ** 2 * eta ** 2 / 2.0
        return eps, eta

    def _search(self, session, space, eps):
        return _plain_search(session, space, eps)

    def _shift_total(self, session, eps, eta):
        d, D = session.delta, session.Delta
        return 3.0 * D * eps / (d * d * eta) + D * eta / d


class KCutRobustAlice(_KCutBase):
    def __init__(self, T: int, k: int, f: RateFunction,
                 g: RateFunction = LOG_RATE):
        super().__init__(T, k)
        self.f = f
        self.g = g

    @classmethod
    def private_rate(cls, T: int, k: int) -> "KCutRobustAlice":
        return cls(T, k, poly_over_polylog(6.0))

    def _parameters(self, session):
        T = self.T
        fT = self.f(T)
        eta = fT ** 0.25 * T ** -0.25 * self.k ** -0.25 * math.log(T) ** 0.5
        eps = session.delta ** 2 * eta ** 2 / 2.0
        eps = min(eps, fT)  # majority-vote search precondition
        return eps, eta

    def _search(self, session, space, eps):
        reps = majority_vote_repeats(self.f, self.g, self.T, session.delta, eps)
        return _majority_search(session, space, eps, reps)

    def _note_search(self, outcome) -> None:
        if (outcome.min_vote_margin is not None
                and outcome.min_vote_margin < 2.0 * self.f(self.T)):
            self.narrow_vote_searches += 1

    def _shift_total(self, session, eps, eta):
        d, D = session.delta, session.Delta
        return 3.0 * D * eps / (d * d * eta) + 2.0 * D * eta / d


# --- simple strategies ----------------------------------------------------


class FixedCutsAlice:
    """Commits to the same cut vector from round one."""

    def __init__(self, cuts):
        self.committed_cuts = tuple(cuts)

    def run(self, session):
        session.play_rest(self.committed_cuts)


class ReplayAlice:
    """Plays a prescribed (cuts, rounds) block sequence."""

    def __init__(self, blocks):
        self.blocks = [(tuple(c), int(r)) for c, r in blocks]

    def run(self, session):
        for cuts, rounds in self.blocks:
            session.play(cuts, rounds)
