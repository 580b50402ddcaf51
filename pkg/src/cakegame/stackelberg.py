"""Stackelberg value computation for piecewise-constant instances.

Three routes: a grid brute force (the oracle), an exact solver built on
the observation that some optimum always has all but one cut on the
merged breakpoint lattice with the last cut solving responder
indifference in closed form, and a grid-restricted variant used by the
query protocol. The exact solver's structural claim is validated against
the brute force in the test suite rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import ContractError, ResourceBudgetError
from .valuations import Density, interval_value

DEFAULT_CANDIDATE_BUDGET = 10 ** 8


@dataclass(frozen=True)
class StackelbergSolution:
    value: float  # proposer's utility
    cuts: tuple
    bob_piece: int
    bob_value: float
    feasible: bool = True


def _pad(cuts, k: int) -> tuple:
    """Right-pad with cuts at 1, which add only empty intervals."""
    return tuple(cuts) + (1.0,) * (k - len(cuts))


def _subset_count(g: int, k: int) -> int:
    return sum(math.comb(g, m) for m in range(0, k + 1))


def _grid_with_breaks(vA: Density, vB: Density, h: float):
    if h <= 0:
        raise ContractError("grid step must be positive")
    steps = np.arange(0.0, 1.0, h)
    pts = np.unique(np.concatenate([steps, [1.0], vA.breaks, vB.breaks]))
    return pts


def stackelberg_bruteforce(vA: Density, vB: Density, k: int, h: float,
                           budget: int = DEFAULT_CANDIDATE_BUDGET) -> StackelbergSolution:
    """Exhaustive search over all cut subsets of the h-grid plus breakpoints.

    Guaranteed within k*Delta*h/delta of the true value. Candidate count
    is checked against the budget before scanning.
    """
    if k < 1:
        raise ContractError("need at least one cut")
    grid = _grid_with_breaks(vA, vB, h)
    if _subset_count(len(grid), k) > budget:
        raise ResourceBudgetError(
            f"{_subset_count(len(grid), k)} candidates exceed budget {budget}")
    fa = kernels.cdf_many(vA.breaks, vA.vals, vA.cum, grid)
    fb = kernels.cdf_many(vB.breaks, vB.vals, vB.cum, grid)
    best, idxs, piece, bobv = kernels.bruteforce_scan(
        fa, fb, vA.total_mass, vB.total_mass, k)
    cuts = _pad([float(grid[i]) for i in idxs], k)
    return StackelbergSolution(float(best), cuts, int(piece), float(bobv))


def _merged_segments(vA: Density, vB: Density):
    pts = np.unique(np.concatenate([vA.breaks, vB.breaks]))
    mids = 0.5 * (pts[:-1] + pts[1:])
    va_seg = np.array([vA.at(x) for x in mids])
    vb_seg = np.array([vB.at(x) for x in mids])
    return pts, va_seg, vb_seg


def stackelberg_exact(vA: Density, vB: Density, k: int,
                      budget: int = DEFAULT_CANDIDATE_BUDGET) -> StackelbergSolution:
    """Exact optimum over k-cut alternating partitions.

    Enumerates candidates with all but one cut on the merged breakpoint
    lattice; the remaining cut is solved so the responder's piece is
    worth exactly one half (his choice then follows the proposer-favor
    tie rule, so the proposer keeps her better piece).
    """
    if k < 1:
        raise ContractError("need at least one cut")
    pts, va_seg, vb_seg = _merged_segments(vA, vB)
    interior = len(pts) - 2
    max_m = min(k - 1, interior)
    count = sum(math.comb(interior, m) * (m + 1) * 2 for m in range(max_m + 1))
    if count > budget:
        raise ResourceBudgetError(f"{count} candidates exceed budget {budget}")
    fa = kernels.cdf_many(vA.breaks, vA.vals, vA.cum, pts)
    fb = kernels.cdf_many(vB.breaks, vB.vals, vB.cum, pts)
    best, cuts, piece, bobv = kernels.exact_scan(
        pts, fa, fb, va_seg, vb_seg, vA.total_mass, vB.total_mass, k)
    return StackelbergSolution(float(best), _pad(sorted(cuts), k), int(piece),
                               float(bobv))


def discretized_stackelberg(vA: Density, vB: Density, k: int, grid,
                            budget: int = DEFAULT_CANDIDATE_BUDGET) -> StackelbergSolution:
    """Best k-cut with cut points on the grid and responder piece >= 1/2.

    Infeasible grids return the degenerate whole-cake-to-responder
    solution with value zero and feasible=False.
    """
    if k < 1:
        raise ContractError("need at least one cut")
    grid = np.asarray(sorted(set(float(x) for x in grid)), dtype=np.float64)
    if len(grid) < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
        raise ContractError("grid must start at 0 and end at 1")
    if _subset_count(len(grid), k) > budget:
        raise ResourceBudgetError(
            f"{_subset_count(len(grid), k)} candidates exceed budget {budget}")
    fa = kernels.cdf_many(vA.breaks, vA.vals, vA.cum, grid)
    fb = kernels.cdf_many(vB.breaks, vB.vals, vB.cum, grid)
    found, best, idxs, piece, bobv = kernels.constrained_scan(
        fa, fb, vA.total_mass, vB.total_mass, k, 0.5 - 1e-12)
    if not found:
        cuts = (0.0,) * k
        bob_piece = 1 if k % 2 == 0 else 2
        return StackelbergSolution(0.0, cuts, bob_piece, vB.total_mass,
                                   feasible=False)
    cuts = _pad([float(grid[i]) for i in idxs], k)
    return StackelbergSolution(float(best), cuts, int(piece), float(bobv))


# --- committing against learned near-equal intervals ----------------------


def interval_selection(vA: Density, intervals, k: int):
    """Best k-cut treating the given intervals as atoms.

    Whole intervals are assigned to the two pieces (no cut may land in
    an interval's interior); the piece with strictly more intervals is
    the responder's, and the proposer's value of the other piece is
    maximized. Returns (cuts, responder_piece_index, proposer_value).
    """
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    if not ivs:
        raise ContractError("need at least one interval")
    for (a, b), (c, d) in zip(ivs, ivs[1:]):
        if c < b:
            raise ContractError("intervals must be disjoint")
    if any(b <= a for a, b in ivs):
        raise ContractError("intervals must have positive length")
    if ivs[0][0] < 0.0 or ivs[-1][1] > 1.0:
        raise ContractError("intervals must lie inside the cake")

    cells = []
    is_iv = []
    pos = 0.0
    for a, b in ivs:
        if a > pos:
            cells.append((pos, a))
            is_iv.append(0)
        cells.append((a, b))
        is_iv.append(1)
        pos = b
    if pos < 1.0:
        cells.append((pos, 1.0))
        is_iv.append(0)

    cell_va = np.array([interval_value(vA, a, b) for a, b in cells])
    cell_is_iv = np.array(is_iv, dtype=np.uint8)
    n_iv = int(cell_is_iv.sum())
    max_a = (n_iv - 1) // 2
    value, assignment = kernels.interval_dp(cell_va, cell_is_iv, k, max_a)
    cuts = []
    for i in range(len(cells) - 1):
        if assignment[i] != assignment[i + 1]:
            cuts.append(cells[i][1])
    bob_piece = 2 if assignment[0] == 1 else 1
    return tuple(cuts), bob_piece, float(value)


def cuts_from_intervals(vA: Density, intervals, eta: float, eps: float,
                        r: int, k: int) -> tuple:
    """A k-cut avoiding interval interiors, responder side holding more
    intervals, proposer value of her side maximized.

    Under the hypothesis that each interval is worth eta +- eps to the
    responder and the uncovered cake at most r*(eta+eps), the result is
    (k+2r)(eta+eps)*Delta/delta-Stackelberg.
    """
    if not (0.0 < eta < 1.0):
        raise ContractError("eta must be in (0, 1)")
    if not (0.0 < eps < eta * eta / 2.0):
        raise ContractError("need 0 < eps < eta^2/2")
    if r < 1:
        raise ContractError("uncovered-value multiplier r must be >= 1")
    if k < 1:
        raise ContractError("need at least one cut")
    flat = []
    for iv in intervals:
        if hasattr(iv, "intervals"):
            flat.extend(iv.intervals)
        else:
            flat.append(tuple(iv))
    cuts, _, _ = interval_selection(vA, flat, k)
    if len(cuts) > k:
        raise AssertionError("selection exceeded the cut budget")
    return _pad(cuts, k)
