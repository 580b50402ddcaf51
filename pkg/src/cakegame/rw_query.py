"""Cut/Eval query-model simulation and the grid protocol.

Oracles wrap private densities and count queries; Eval is only answered
at previously established cut points. The protocol buys an Alice-value
grid with cut queries, prices it for Bob with eval queries, and solves
the grid-restricted problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .adversarial import SpikeParams, W_MAX, spike_centers, spiked_density
from .errors import ContractError
from .partitions import Allocation, alternating_partition
from .stackelberg import StackelbergSolution, discretized_stackelberg
from .valuations import Density, cdf, cut_point, uniform_density


@dataclass
class QueryOracle:
    """Query access to one player's private density."""

    density: Density
    cut_count: int = 0
    eval_count: int = 0
    known_cut_points: set = field(default_factory=lambda: {0.0, 1.0})

    def cut(self, alpha: float) -> float:
        """Cut query: leftmost y with the player's mass of [0,y] = alpha."""
        if not 0.0 <= alpha <= 1.0:
            raise ContractError("cut query target must be in [0, 1]")
        self.cut_count += 1
        y = cut_point(self.density, alpha)
        self.known_cut_points.add(y)
        return y

    def eval(self, y: float) -> float:
        """Eval query: the player's mass of [0, y] at an established point."""
        if y not in self.known_cut_points:
            raise ContractError(f"eval at {y}: not an established cut point")
        self.eval_count += 1
        return cdf(self.density, y)

    def observe_cut_point(self, y: float) -> None:
        """Register a point established through the other player's oracle."""
        self.known_cut_points.add(y)

    @property
    def query_total(self) -> int:
        return self.cut_count + self.eval_count


class ProtocolResult:
    def __init__(self, allocation: Allocation, solution: StackelbergSolution,
                 query_total: int, warning: bool = False):
        self.allocation = allocation
        self.solution = solution
        self.query_total = query_total
        self.warning = warning


def rw_eps_stackelberg(oracle_a: QueryOracle, oracle_b: QueryOracle, k: int,
                       eps: float) -> ProtocolResult:
    """Find an eps-Stackelberg k-cut with n cut + n eval queries, n = ceil(k/eps).

    The grid has proposer value 1/n per gap, so the grid-restricted
    optimum is within k/n <= eps of the true value; the responder's
    piece is at least one half by construction, so the output is
    envy-free. Degenerate grids return everything to the responder with
    a warning flag.
    """
    if eps <= 0:
        raise ContractError("eps must be positive")
    if k < 1:
        raise ContractError("need at least one cut")
    n = math.ceil(k / eps)
    grid = [0.0]
    for i in range(1, n + 1):
        y = oracle_a.cut(i / n)
        oracle_b.observe_cut_point(y)
        grid.append(y)
    bob_cdf = np.array([0.0] + [oracle_b.eval(y) for y in grid[1:]])
    grid = np.asarray(grid)

    # solve on the sampled grid without touching the private densities again
    uniq, idx = np.unique(grid, return_index=True)
    sol = _solve_on_grid(uniq, bob_cdf[idx], oracle_a.density, k)
    alloc = Allocation(*alternating_partition(sol.cuts), chosen_by_bob=sol.bob_piece)
    total = oracle_a.query_total + oracle_b.query_total
    return ProtocolResult(alloc, sol, total, warning=not sol.feasible)


def _solve_on_grid(grid, bob_cdf, vA: Density, k: int) -> StackelbergSolution:
    """Grid-restricted solve against sampled responder CDF values."""
    sampled = _sampled_density(grid, bob_cdf)
    if sampled is None:
        cuts = (0.0,) * k
        bob_piece = 1 if k % 2 == 0 else 2
        return StackelbergSolution(0.0, cuts, bob_piece, 1.0, feasible=False)
    return discretized_stackelberg(vA, sampled, k, grid)


def _sampled_density(grid, bob_cdf):
    """Density matching the sampled CDF; None when degenerate."""
    from .valuations import density

    widths = np.diff(grid)
    masses = np.diff(bob_cdf)
    if np.any(widths <= 0) or np.any(masses <= 0):
        return None
    return density(grid, masses / widths)


def rw_lower_bound_fixture(eps: float, seed) -> tuple:
    """Hidden-spike instance family for query-starved protocol audits.

    Uniform proposer, spiked responder with w = 14*eps and the center
    drawn uniformly from the disjoint-spike grid; the hidden center is
    returned for test assertions only.
    """
    w = 14.0 * eps
    if w > W_MAX:
        raise ContractError(f"eps too large: need 14*eps <= {W_MAX}")
    centers = spike_centers(w)
    rng = np.random.default_rng(seed)
    z = float(centers[int(rng.integers(len(centers)))])
    vB = spiked_density(SpikeParams(2, w, z))
    return uniform_density(), vB, z
