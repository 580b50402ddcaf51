"""Hard-instance responder valuations and the adversary search.

Four families: the alternating high/low "unspiked" densities, their
mass-neutral spiked variants, the truncated bit-vector densities for the
measurable game, and the two-level pair used for the private-rate lower
bound. All constructors are pure; the adversary search replays a
deterministic learner against a fixed myopic responder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ContractError
from .valuations import Density, density, uniform_density

HIGH_VALUE = 1.5
SPIKE_LEFT_VALUE = 2.0
SPIKE_RIGHT_VALUE = 1.0

Z_LO, Z_HI = 5.0 / 6.0, 11.0 / 12.0
W_MAX = 1.0 / 48.0


@dataclass(frozen=True)
class SpikeParams:
    """Spiked-density parameters: k cuts, spike half-width w, center z."""

    k: int
    w: float
    z: float

    def __post_init__(self):
        if self.k < 2:
            raise ContractError("spiked densities need k >= 2")
        if not (0.0 < self.w <= W_MAX):
            raise ContractError(f"w must be in (0, {W_MAX}]")
        if not (Z_LO <= self.z <= Z_HI):
            raise ContractError(f"z must be in [{Z_LO}, {Z_HI}]")


def high_interval_length(k: int) -> float:
    return 1.0 / (3.0 * (k // 2 + 0.5))


def high_interval_count(k: int) -> int:
    return k // 2 + 1


def low_interval_count(k: int) -> int:
    return (k + 1) // 2


def _alternating_breaks(k: int):
    """Breakpoints of the k+1 alternating intervals, starting high."""
    ell = high_interval_length(k)
    n_h = high_interval_count(k)
    n_l = low_interval_count(k)
    low_len = (1.0 - n_h * ell) / n_l
    pts = [0.0]
    x = 0.0
    for i in range(k + 1):
        x += ell if i % 2 == 0 else low_len
        pts.append(x)
    pts[-1] = 1.0
    return pts, ell, low_len


def unspiked_density(k: int) -> Density:
    """Alternating high/low density with k+1 intervals, high first.

    High intervals carry density 3/2; the low value is set so the total
    mass is one.
    """
    if k < 2:
        raise ContractError("unspiked density needs k >= 2")
    pts, ell, low_len = _alternating_breaks(k)
    n_h = high_interval_count(k)
    mu_h = n_h * ell
    low_val = (1.0 - HIGH_VALUE * mu_h) / (1.0 - mu_h)
    vals = [HIGH_VALUE if i % 2 == 0 else low_val for i in range(k + 1)]
    return density(pts, vals)


def spiked_density(p: SpikeParams) -> Density:
    """Unspiked density with a mass-neutral spike in the first interval.

    Density 2 on ((z-w)l, z*l], density 1 on (z*l, (z+w)l), unchanged
    elsewhere; the average over the spike stays 3/2.
    """
    pts, ell, low_len = _alternating_breaks(p.k)
    lo = (p.z - p.w) * ell
    mid = p.z * ell
    hi = (p.z + p.w) * ell
    if not (0.0 < lo and hi < ell):
        raise ContractError("spike does not fit inside the first interval")
    base = unspiked_density(p.k)
    low_val = float(base.vals[1])
    new_pts = [pts[0], lo, mid, hi] + pts[1:]
    new_vals = [HIGH_VALUE, SPIKE_LEFT_VALUE, SPIKE_RIGHT_VALUE, HIGH_VALUE]
    new_vals += [HIGH_VALUE if i % 2 == 0 else low_val for i in range(1, p.k + 1)]
    return density(new_pts, new_vals)


def spike_interval(p: SpikeParams) -> tuple:
    ell = high_interval_length(p.k)
    return ((p.z - p.w) * ell, (p.z + p.w) * ell)


def similarity_bound(k: int, w: float) -> float:
    """Upper bound on |unspiked - spiked| mass of any piece: 2w/(3k)."""
    return 2.0 * w / (3.0 * k)


# --- bit-vector adversary (measurable game) -----------------------------


def block_boundary(n: int) -> float:
    """g(n) = 1/(2 + log n); block n is (g(n+1), g(n)]."""
    return 1.0 / (2.0 + math.log(n))


@dataclass(frozen=True)
class BitVectorAdversary:
    """Finite truncation of an infinite-bit-vector responder density."""

    bits: tuple
    block_count: int

    def __post_init__(self):
        if self.block_count < 1:
            raise ContractError("need at least one block")
        if len(self.bits) < self.block_count:
            raise ContractError("need one bit per block")
        if any(b not in (0, 1) for b in self.bits):
            raise ContractError("bits must be 0 or 1")


class BitVectorResult(NamedTuple):
    density: Density
    renorm_factor: float


def bitvector_density(adv: BitVectorAdversary) -> BitVectorResult:
    """Truncated bit-vector density, renormalized to unit mass.

    Block i splits (g(i+1), g(i)] at its midpoint into left/right
    halves with densities 2 - (4/3)s_i and 2/3 + (4/3)s_i. The tail
    (0, g(N+1)] and [1/2, 1] carry the background 2/3. The raw
    construction then integrates to slightly less than one, so all
    values are scaled by the reported factor.
    """
    n = adv.block_count
    background = 2.0 / 3.0
    dense = 2.0
    pts = [0.0, block_boundary(n + 1)]
    vals = [background]
    for i in range(n, 0, -1):
        g_hi = block_boundary(i)
        g_lo = block_boundary(i + 1)
        mid = 0.5 * (g_lo + g_hi)
        s = adv.bits[i - 1]
        pts.extend([mid, g_hi])
        # dense on the left half for bit 0, on the right half for bit 1
        vals.extend([dense, background] if s == 0 else [background, dense])
    pts.append(1.0)
    vals.append(background)
    raw_mass = sum((b - a) * v for a, b, v in zip(pts[:-1], pts[1:], vals))
    factor = 1.0 / raw_mass
    scaled = [v * factor for v in vals]
    return BitVectorResult(density(pts, scaled), factor)


# --- private-learning-rate pair -----------------------------------------


def unknown_alpha_pair() -> tuple:
    """The mild and extreme two-level densities of the linear lower bound."""
    mild = density([0.0, 0.5, 1.0], [0.5, 1.5])
    extreme = density([0.0, 0.5, 1.0], [0.25, 1.75])
    return mild, extreme


def random_mild_density(seed, segments=None, low=0.8, high=1.25) -> Density:
    """Seeded random step density with values in a mild band.

    Used as the instance generator for rate-fit experiments; mildness
    keeps Delta/delta small so learning strategies stay in their
    asymptotic regime at moderate horizons.
    """
    rng = np.random.default_rng(seed)
    n = int(segments) if segments else int(rng.integers(3, 7))
    cuts = np.sort(rng.uniform(0.05, 0.95, n - 1))
    breaks = np.concatenate([[0.0], cuts, [1.0]])
    vals = rng.uniform(low, high, n)
    mass = float(np.sum(np.diff(breaks) * vals))
    return density(breaks, vals / mass)


def center_heavy_example() -> Density:
    """Two-cut benchmark responder: a high-value plateau in the center.

    Against a uniform proposer the optimal two cuts are (5/16, 11/16):
    the middle piece is worth exactly 1/2 to the responder and the
    proposer keeps 5/8.
    """
    return density([0.0, 5.0 / 16.0, 11.0 / 16.0, 1.0], [0.8, 4.0 / 3.0, 0.8])


# --- canonical distinguishing partitions --------------------------------


def interval_boundaries(k: int) -> tuple:
    """The k interior boundaries of the alternating intervals."""
    pts, _, _ = _alternating_breaks(k)
    return tuple(pts[1:-1])


def distinguishing_cuts(p: SpikeParams, spike_cut: float = None) -> tuple:
    """A k-cut on which unspiked and spiked myopic responders disagree.

    First cut inside the spike (default at its center-right edge z*l),
    remaining cuts at the last k-1 interval boundaries with one of them
    nudged so the unspiked value of the first piece sits just below 1/2
    while the spiked value sits just above.
    """
    ell = high_interval_length(p.k)
    base = unspiked_density(p.k)
    spiked = spiked_density(p)
    lo = (p.z - p.w) * ell
    if spike_cut is None:
        spike_cut = p.z * ell
    if not (lo < spike_cut <= p.z * ell):
        raise ContractError("spike cut must fall in the dense half of the spike")
    gain = 0.5 * (spike_cut - lo)  # spiked minus unspiked mass of [0, spike_cut]
    cuts = [spike_cut] + list(interval_boundaries(p.k))[1:]
    from .partitions import piece_values_for_cuts

    v0 = piece_values_for_cuts(base, tuple(cuts))[0]
    target = 0.5 - 0.5 * gain
    excess = v0 - target
    if excess <= 0:
        raise ContractError("unexpected: base partition already below target")
    if p.k % 2 == 0:
        cuts[-1] = cuts[-1] + excess / HIGH_VALUE
    else:
        cuts[-1] = cuts[-1] - excess / HIGH_VALUE
    out = tuple(sorted(cuts))
    v_base = piece_values_for_cuts(base, out)[0]
    v_spiked = piece_values_for_cuts(spiked, out)[0]
    if not (v_base < 0.5 < v_spiked):
        raise ContractError("nudge failed to produce a distinguishing partition")
    return out


# --- adversary search -----------------------------------------------------


def spike_centers(w: float) -> tuple:
    """Candidate spike centers: floor(1/(2w)) evenly spaced in [5/6, 11/12].

    Adjacent candidates' spikes can overlap (the center range is only
    1/12 long); nothing downstream relies on disjointness.
    """
    m = int(1.0 / (2.0 * w))
    if m < 1:
        raise ContractError("w too large: no candidate spike fits")
    width = (Z_HI - Z_LO) / m
    return tuple(Z_LO + (j + 0.5) * width for j in range(m))


class AdversarySearchResult(NamedTuple):
    z_star: float
    counts: dict
    transcript: list


def spike_adversary_search(make_alice, T: int, k: int, w: float,
                           n_threshold: int = 1) -> AdversarySearchResult:
    """Find the spike center a deterministic learner handles worst.

    Replays the learner against a myopic unspiked responder for T
    rounds, counting for every candidate center how many rounds carried
    a partition distinguishing it. Returns the first center never
    distinguished ``n_threshold`` times, or else the center whose
    threshold was reached last.
    """
    from .bob_strategies import MyopicBob
    from .engine import run_game

    base = unspiked_density(k)
    centers = spike_centers(w)
    ell = high_interval_length(k)
    counts = {z: 0 for z in centers}
    reached_at = {}
    transcript = []

    history = run_game(make_alice(), MyopicBob(base), uniform_density(), base,
                       T, k, u_star=0.0)
    round_no = 0
    for seg in history.segments:
        cuts, rounds = seg.cuts, seg.rounds
        p1, _ = _piece_one_intervals(cuts)
        v0 = _mass(base, p1)
        l1 = sum(b - a for a, b in p1)
        choice0 = _myopic_choice(v0, base.total_mass - v0, l1, 1.0 - l1)
        hits = []
        for z in centers:
            delta = _spike_overlap_delta(p1, z, w, ell)
            v1 = v0 + delta
            choice_z = _myopic_choice(v1, base.total_mass - v1, l1, 1.0 - l1)
            if choice_z != choice0:
                hits.append(z)
        for z in hits:
            before = counts[z]
            counts[z] += rounds
            if before < n_threshold <= counts[z] and z not in reached_at:
                reached_at[z] = round_no + (n_threshold - before)
        transcript.append((round_no, rounds, cuts, tuple(hits)))
        round_no += rounds

    for z in centers:
        if counts[z] < n_threshold:
            return AdversarySearchResult(z, counts, transcript)
    last = max(reached_at.values())
    for z in centers:  # first center achieving the latest threshold round
        if reached_at[z] == last:
            return AdversarySearchResult(z, counts, transcript)
    raise AssertionError("unreachable")


def _piece_one_intervals(cuts):
    points = (0.0,) + tuple(cuts) + (1.0,)
    one = []
    two = []
    for j in range(len(points) - 1):
        a, b = points[j], points[j + 1]
        if b > a:
            (one if j % 2 == 0 else two).append((a, b))
    return one, two


def _mass(d: Density, intervals) -> float:
    from .backend import kernels

    total = 0.0
    for a, b in intervals:
        total += kernels.interval_value(d.breaks, d.vals, d.cum, a, b)
    return total


def _myopic_choice(v1, v2, va1, va2):
    if v1 > v2:
        return 1
    if v2 > v1:
        return 2
    return 1 if va1 < va2 else 2


def _overlap(intervals, a, b):
    out = 0.0
    for lo, hi in intervals:
        l = max(lo, a)
        h = min(hi, b)
        if h > l:
            out += h - l
    return out


def _spike_overlap_delta(p1_intervals, z, w, ell):
    """Spiked-minus-unspiked mass of piece one for a spike centered at z."""
    left = _overlap(p1_intervals, (z - w) * ell, z * ell)
    right = _overlap(p1_intervals, z * ell, (z + w) * ell)
    return 0.5 * left - 0.5 * right
