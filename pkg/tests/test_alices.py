"""Proposer strategies: searches, round accounting, commitment behavior."""

import math

import numpy as np
import pytest

from cakegame.adversarial import (center_heavy_example, random_mild_density,
                                  unspiked_density)
from cakegame.alice_strategies import (KCutMyopicAlice, KCutRobustAlice,
                                       TwoCutMyopicAlice, TwoCutRobustAlice,
                                       binary_search_indifference, power,
                                       poly_over_polylog, robust_binary_search)
from cakegame.bob_strategies import MyopicBob
from cakegame.engine import GameSession, History, regret_report, run_game
from cakegame.errors import ContractError
from cakegame.stackelberg import stackelberg_exact
from cakegame.valuations import density, uniform_density

from helpers import ContraryBob, crossover_oracle

U = uniform_density()


def fresh_session(vB, T, k, bob=None):
    h = History(T=T, k=k, u_star_alice=0.0)
    return GameSession(U, vB, bob or MyopicBob(vB), T, k, 0.0, h)


class TestPlainSearch:
    def test_uniform_midpoint(self):
        eps = 1e-4
        sess = fresh_session(U, 1000, 1)
        out = binary_search_indifference(sess, (), eps)
        assert out.found
        assert abs(out.x_tilde - 0.5) <= eps

    def test_center_heavy_second_cut(self):
        # fixing the left optimal cut, the balancing right cut is 11/16
        bench = center_heavy_example()
        eps = 1e-5
        sess = fresh_session(bench, 1000, 2)
        out = binary_search_indifference(sess, (0.3125,), eps)
        assert out.found
        assert abs(out.x_tilde - 0.6875) <= eps

    def test_no_crossover_detected_in_two_rounds(self):
        # responder mass concentrated near the left edge: after a cut at
        # 0.5 no balancing second cut exists
        vB = density([0.0, 0.1, 1.0], [9.1, 0.1])
        sess = fresh_session(vB, 1000, 2)
        out = binary_search_indifference(sess, (0.5,), eps=1e-3)
        assert not out.found
        assert out.rounds_used <= 2

    def test_round_budget(self):
        rng = np.random.default_rng(8)
        for seed in range(10):
            vB = random_mild_density(seed)
            for eps in (1e-2, 1e-3, 1e-5):
                sess = fresh_session(vB, 10 ** 5, 1)
                out = binary_search_indifference(sess, (), eps)
                assert out.rounds_used <= 2 + math.ceil(math.log2(1.0 / eps))

    def test_matches_oracle(self):
        for seed in range(30):
            vB = random_mild_density(seed)
            eps = 1e-6
            x1 = 0.3
            want = crossover_oracle(vB, (x1,), 2)
            sess = fresh_session(vB, 10 ** 5, 2)
            out = binary_search_indifference(sess, (x1,), eps)
            if want is None:
                assert not out.found
            else:
                assert out.found
                assert abs(out.x_tilde - want) <= eps + 1e-9


class TestRobustSearch:
    def test_agrees_with_plain_against_myopic(self):
        for seed in range(10):
            vB = random_mild_density(seed)
            eps = 1e-3
            sess = fresh_session(vB, 10 ** 6, 2)
            plain = binary_search_indifference(sess, (0.2,), eps)
            sess2 = fresh_session(vB, 10 ** 6, 2)
            robust = robust_binary_search(sess2, (0.2,), eps, power(0.0))
            assert plain.found == robust.found
            if plain.found:
                assert abs(plain.x_tilde - robust.x_tilde) <= 2 * eps

    def test_beats_contrary_responder(self):
        # maximal liar with a small budget cannot move the answer
        T = 10 ** 6
        for seed in range(5):
            vB = random_mild_density(seed)
            want = crossover_oracle(vB, (), 1)
            eps = 1e-3
            bob = ContraryBob(budget=10.0 * 1.0)  # c=10, alpha=0
            sess = fresh_session(vB, T, 1, bob=bob)
            out = robust_binary_search(sess, (), eps, power(0.0))
            assert out.found
            assert abs(out.x_tilde - want) <= eps

    def test_eps_precondition(self):
        sess = fresh_session(U, 100, 1)
        with pytest.raises(ContractError):
            robust_binary_search(sess, (), 0.5, power(-2.0))


class TestTwoCutMyopic:
    def test_learns_center_heavy_optimum(self):
        bench = center_heavy_example()
        T = 10 ** 5
        alice = TwoCutMyopicAlice(T)
        h = run_game(alice, MyopicBob(bench), U, bench, T, 2)
        eps = math.sqrt(math.log(T) / T)
        x, y = alice.committed_cuts
        # committed cuts near the optimum, shifted to grow the middle
        assert abs(x - 0.3125) <= 6 * eps
        assert abs(y - 0.6875) <= 6 * eps
        # responder takes the middle in every committed round
        committed = [s for s in h.segments if s.cuts == alice.committed_cuts]
        assert committed and all(s.choice == 2 for s in committed)

    def test_uniform_guarantee(self):
        T = 10 ** 4
        alice = TwoCutMyopicAlice(T)
        h = run_game(alice, MyopicBob(U), U, U, T, 2)
        eps = math.sqrt(math.log(T) / T)
        last = h.segments[-1]
        assert last.alice_utility >= 0.5 - 5 * eps

    def test_determinism(self):
        bench = center_heavy_example()
        hs = []
        for _ in range(2):
            alice = TwoCutMyopicAlice(5000)
            h = run_game(alice, MyopicBob(bench), U, bench, 5000, 2)
            hs.append([(s.cuts, s.choice, s.rounds) for s in h.segments])
        assert hs[0] == hs[1]

    def test_horizon_accounting(self):
        for T in (50, 500, 5000):
            alice = TwoCutMyopicAlice(T)
            h = run_game(alice, MyopicBob(center_heavy_example()), U,
                         center_heavy_example(), T, 2)
            assert h.rounds_played == T

    def test_wrong_k_rejected(self):
        alice = TwoCutMyopicAlice(100)
        with pytest.raises(ContractError):
            run_game(alice, MyopicBob(U), U, U, 100, 3, u_star=0.0)


class TestKCutMyopic:
    def test_learns_unspiked(self):
        T = 10 ** 5
        k = 4
        s4 = unspiked_density(k)
        alice = KCutMyopicAlice(T, k)
        h = run_game(alice, MyopicBob(s4), U, s4, T, k)
        exact = stackelberg_exact(U, s4, k)
        last = h.segments[-1]
        assert last.cuts == alice.committed_cuts
        assert last.alice_utility >= exact.value - 8 * math.sqrt(k / T)

    def test_learned_intervals_near_equal_value(self):
        # after learning, every interval's responder value sits within
        # 3*Delta*eps of the reference interval's
        T = 10 ** 5
        k = 4
        s4 = unspiked_density(k)
        alice = KCutMyopicAlice(T, k)
        run_game(alice, MyopicBob(s4), U, s4, T, k)
        xs = alice.learned_points
        assert len(xs) >= 3
        eta = (T * k) ** -0.5
        eps = s4.delta_bound ** 2 * eta ** 2 / 2.0
        from cakegame.valuations import interval_value

        ref = None
        for a, b in zip(xs, xs[1:]):
            v = interval_value(s4, a, b)
            if ref is None:
                ref = v
                continue
            assert abs(v - ref) <= 3.0 * s4.Delta_bound * eps + 1e-12

    def test_commit_phase_choice_stable(self):
        T = 2 * 10 ** 4
        k = 3
        vB = random_mild_density(123)
        alice = KCutMyopicAlice(T, k)
        h = run_game(alice, MyopicBob(vB), U, vB, T, k)
        committed = [s for s in h.segments if s.cuts == alice.committed_cuts]
        choices = {s.choice for s in committed}
        assert len(choices) == 1

    def test_needs_three_cuts(self):
        with pytest.raises(ContractError):
            KCutMyopicAlice(100, 2)


class TestRobustStrategies:
    def test_constant_budget_like_myopic(self):
        bench = center_heavy_example()
        T = 10 ** 6
        alice = TwoCutRobustAlice(T, power(0.0))
        h = run_game(alice, MyopicBob(bench), U, bench, T, 2)
        x, y = alice.committed_cuts
        # same shape as the myopic learner's answer, coarser tolerance
        eps = T ** (-1 / 3) * math.log(T) ** (2 / 3)
        assert abs(x - 0.3125) <= 6 * eps
        assert abs(y - 0.6875) <= 6 * eps

    def test_private_rate_instantiations(self):
        T = 10 ** 5
        a2 = TwoCutRobustAlice.private_rate(T)
        assert a2.f == poly_over_polylog(5.0)
        a3 = KCutRobustAlice.private_rate(T, 3)
        assert a3.f == poly_over_polylog(6.0)

    def test_kcut_robust_runs_and_commits(self):
        T = 10 ** 6
        k = 3
        s3 = unspiked_density(k)
        alice = KCutRobustAlice(T, k, power(0.0))
        h = run_game(alice, MyopicBob(s3), U, s3, T, k)
        assert h.rounds_played == T
        assert alice.committed_cuts is not None

    def test_overrun_commits_best_so_far(self):
        # tiny horizon: learning cannot finish, strategy must still play
        T = 30
        alice = KCutMyopicAlice(T, 3)
        h = run_game(alice, MyopicBob(unspiked_density(3)), U,
                     unspiked_density(3), T, 3)
        assert h.rounds_played == T
        assert alice.committed_cuts is not None


class TestAccountingAndDiagnostics:
    def test_learning_round_budget(self):
        # learning rounds fit the closed-form cap: searches times the
        # per-search probe bound
        import math

        bench = center_heavy_example()
        T = 10 ** 5
        alice = TwoCutMyopicAlice(T)
        h = run_game(alice, MyopicBob(bench), U, bench, T, 2)
        committed = sum(s.rounds for s in h.segments
                        if s.cuts == alice.committed_cuts)
        learning = T - committed
        eps = math.sqrt(math.log(T) / T)
        per_search = 2 + math.ceil(math.log2(1.0 / eps))
        n_searches = len(alice.learned_points) + 1  # one failed sweep stop
        assert learning <= n_searches * per_search

    def test_narrow_vote_diagnostic(self):
        # at comfortable horizons every vote is decided by a wide margin
        bench = center_heavy_example()
        T = 10 ** 6
        alice = TwoCutRobustAlice(T, power(0.0))
        run_game(alice, MyopicBob(bench), U, bench, T, 2)
        assert alice.narrow_vote_searches == 0

    def test_narrow_vote_flags_split_votes(self):
        # a responder splitting every vote almost evenly trips the flag
        class AlternatingBob:
            regret_ledger = 0.0

            def play_block(self, ctx):
                half = ctx.rounds // 2
                if half == 0:
                    return [(1, ctx.rounds)]
                return [(1, half), (2, ctx.rounds - half)]

        vB = random_mild_density(3)
        T = 10 ** 5
        alice = TwoCutRobustAlice(T, power(0.0))
        run_game(alice, AlternatingBob(), U, vB, T, 2)
        assert alice.narrow_vote_searches >= 1


def test_rescaling_leaves_choice_invariant():
    from cakegame.bob_strategies import myopic_choice

    rng = np.random.default_rng(0)
    for _ in range(300):
        v1, v2, a1, a2 = rng.uniform(0, 1, 4)
        c = float(rng.uniform(0.1, 10))
        assert myopic_choice(v1, v2, a1, a2) == myopic_choice(c * v1, c * v2, a1, a2)


class TestRobustScalingExamples:
    def test_private_rate_regret_over_t_log_t_stable(self):
        # the rate-agnostic instantiation pays Theta(T/log T): the
        # normalized ratio stays flat across four decades of horizon
        import math

        ratios = []
        for T in (10 ** 8, 10 ** 10, 10 ** 12):
            per_t = []
            for seed in range(3):
                vB = random_mild_density(seed)
                alice = TwoCutRobustAlice.private_rate(T)
                h = run_game(alice, MyopicBob(vB), U, vB, T, 2)
                from cakegame.engine import regret_report

                per_t.append(regret_report(h, vB).alice_stackelberg_regret
                             / (T / math.log(T)))
            ratios.append(sum(per_t) / len(per_t))
        assert max(ratios) / min(ratios) <= 2.0

    def test_k_ratio_within_half(self):
        # doubling k at fixed T scales regret by roughly 2^{3/4}; on mild
        # instances the eta-driven commit term pulls the ratio toward the
        # low edge of the +-50% window
        T = 10 ** 10
        ratios = []
        for seed in range(3):
            vB = random_mild_density(seed)
            regs = {}
            for k in (3, 6):
                alice = KCutRobustAlice(T, k, power(0.0))
                h = run_game(alice, MyopicBob(vB), U, vB, T, k)
                from cakegame.engine import regret_report

                regs[k] = regret_report(h, vB).alice_stackelberg_regret
            ratios.append(regs[6] / regs[3])
        mean = sum(ratios) / len(ratios)
        expect = 2.0 ** 0.75
        assert 0.5 * expect <= mean <= 1.5 * expect


class TestRobustVsBudgetedResponder:
    def test_within_budget_lies_do_not_derail_commitment(self):
        # a budget deceiver whose rate matches the strategy's assumption
        # cannot move the committed cuts away from the honest-run answer
        from cakegame.adversarial import unknown_alpha_pair
        from cakegame.bob_strategies import BudgetSwitchBob

        T = 10 ** 6
        mild, extreme = unknown_alpha_pair()
        honest = TwoCutRobustAlice(T, power(0.0))
        run_game(honest, MyopicBob(extreme), U, extreme, T, 2)

        deceived = TwoCutRobustAlice(T, power(0.0))
        bob = BudgetSwitchBob(mild, budget=1.0)  # c=1, alpha=0
        run_game(deceived, bob, U, extreme, T, 2)

        eps = T ** (-1 / 3) * (np.log(T)) ** (2 / 3)
        for a, b in zip(honest.committed_cuts, deceived.committed_cuts):
            assert abs(a - b) <= 2 * eps

    def test_edge_concentrated_responder(self):
        # responder mass piled next to the right edge: the k-cut learner
        # must survive a midpoint close to 1 and an empty right sweep
        vB = density([0.0, 0.85, 1.0], [0.3 / 0.85, 0.7 / 0.15])
        T = 10 ** 5
        alice = KCutMyopicAlice(T, 3)
        h = run_game(alice, MyopicBob(vB), U, vB, T, 3)
        assert h.rounds_played == T
        assert alice.committed_cuts is not None
