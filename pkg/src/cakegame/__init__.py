"""Repeated cake-cutting between a learning proposer and a responder.

Core objects: step densities and pieces (``valuations``), alternating
partitions (``partitions``), Stackelberg solvers (``stackelberg``),
responder automata (``bob_strategies``), learning strategies
(``alice_strategies``), hard instances (``adversarial``), the game
engine (``engine``), and the query-model protocol (``rw_query``).

Hot numeric kernels run on a compiled core when available; see
``cakegame.backend.BACKEND`` for the active one.
"""

from .backend import BACKEND
from .valuations import (Density, Piece, density, uniform_density, piece,
                         value_of, cut_point, midpoint, warp_map,
                         warp_bob_density, load_density, save_density)
from .partitions import (Allocation, alternating_partition, allocation_from_cuts,
                         bob_preferred, is_envy_free, cut_vector)
from .stackelberg import (StackelbergSolution, stackelberg_bruteforce,
                          stackelberg_exact, discretized_stackelberg,
                          cuts_from_intervals)
from .bob_strategies import (MyopicBob, PretendSpikedBob, BudgetSwitchBob,
                             bob_choose, distinguishes)
from .alice_strategies import (RateFunction, power, poly_over_polylog,
                               binary_search_indifference, robust_binary_search,
                               TwoCutMyopicAlice, TwoCutRobustAlice,
                               KCutMyopicAlice, KCutRobustAlice,
                               FixedCutsAlice, ReplayAlice)
from .adversarial import (SpikeParams, BitVectorAdversary, unspiked_density,
                          spiked_density, bitvector_density, unknown_alpha_pair,
                          spike_adversary_search, center_heavy_example,
                          random_mild_density)
from .engine import History, RegretReport, run_game, regret_report
from .rw_query import QueryOracle, rw_eps_stackelberg, rw_lower_bound_fixture

__version__ = "0.1.0"
