import warnings
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction as F

import pytest

from pilotreuse import multigroup as mg
from pilotreuse import wsr2
from pilotreuse.assignment import n_pil, optimal_fixed_length
from pilotreuse.channel import linear_rate_model
from pilotreuse.errors import FeasibilityWarning, InvalidLengthError, InvalidParameterError

TABLE4 = mg.MultiGroupConfig(27, 10, ((F(1, 5), F(1, 2)), (F(3, 10), F(3, 10)), (F(1, 2), F(1, 5))))
FIG5 = mg.MultiGroupConfig(27, 10, ((F(1, 10), F(7, 10)), (F(2, 5), F(1, 5)), (F(1, 2), F(1, 10))))


def _wsr(cfg, lengths, rates):
    return mg.c_wsr(mg.vectors(lengths, cfg), rates, cfg)


class TestConfig:
    def test_sizes(self):
        assert TABLE4.sizes == (2, 3, 5)
        assert TABLE4.t_max == 90

    @pytest.mark.parametrize("groups", [
        ((F(1, 5), F(1, 2)), (F(3, 10), F(3, 10)), (F(1, 2), F(1, 4))),  # omega sum
        ((F(1, 5), F(1, 2)), (F(3, 10), F(3, 10)), (F(2, 5), F(1, 5))),  # alpha sum
        ((F(1, 5), F(3, 10)), (F(3, 10), F(1, 2)), (F(1, 2), F(1, 5))),  # weights not decreasing
        ((F(1, 5), F(2, 5)), (F(3, 10), F(2, 5)), (F(1, 2), F(1, 5))),  # equal weights
        ((F(1, 4), F(1, 2)), (F(1, 4), F(3, 10)), (F(1, 2), F(1, 5))),  # alpha K not integral
        ((F(1),),),
    ])
    def test_invalid(self, groups):
        with pytest.raises(InvalidParameterError):
            mg.MultiGroupConfig(27, 10, groups)


class TestGreedy:
    def test_examples(self):
        assert mg.greedy_allocate(12, TABLE4, linear=True) == (4, 3, 5)
        assert mg.greedy_allocate(42, TABLE4, linear=True) == (18, 9, 15)
        assert mg.greedy_allocate(10, TABLE4, linear=True) == (2, 3, 5)

    @pytest.mark.parametrize("T", [9, 11, 92])
    def test_invalid_T(self, T):
        with pytest.raises(InvalidLengthError):
            mg.greedy_allocate(T, TABLE4)

    def test_linear_rates_equal_linear_mode(self):
        lin = linear_rate_model(F(39, 10), 6, 3)
        assert mg.allocation_path(TABLE4, lin) == mg.allocation_path(TABLE4, linear=True)

    @pytest.mark.parametrize("cfg", [TABLE4, FIG5])
    def test_path_invariants_and_saturation(self, cfg, mc_small):
        path = mg.allocation_path(cfg, mc_small[27])
        for T, lengths in zip(cfg.budgets(), path):
            assert sum(lengths) == T
            for r, k in zip(lengths, cfg.sizes):
                assert k <= r <= cfg.L * k // 3
        for prev, cur in zip(path, path[1:]):
            assert sum(c - p for c, p in zip(cur, prev)) == 2
            for p, c, k in zip(prev, cur, cfg.sizes):
                assert c >= p
                if p == cfg.L * k // 3:
                    assert c == p

    @pytest.mark.parametrize("cfg", [TABLE4, FIG5])
    def test_one_step_exchange(self, cfg):
        lin = linear_rate_model(4, 6, 3)
        path = mg.allocation_path(cfg, linear=True)
        for prev, cur in zip(path, path[1:]):
            options = []
            for i, k in enumerate(cfg.sizes):
                if prev[i] < cfg.L * k // 3:
                    nxt = list(prev)
                    nxt[i] += 2
                    options.append(_wsr(cfg, nxt, lin))
            assert _wsr(cfg, cur, lin) == max(options)

    def test_two_group_reduction(self):
        for L in (9, 27, 81):
            for K in range(2, 9):
                for k1 in range(1, K):
                    for w in (F(3, 5), F(7, 10), F(4, 5), F(1, 2) + F(1, 7)):
                        c2 = wsr2.TwoGroupConfig(L, K, F(k1, K), w)
                        cm = mg.MultiGroupConfig(L, K, ((F(k1, K), w), (1 - F(k1, K), 1 - w)))
                        for T, lengths in zip(c2.budgets(), mg.allocation_path(cm, linear=True)):
                            r = wsr2.rho(T, c2)
                            assert lengths == (r, T - r)

    def test_two_group_reduction_with_ties(self):
        # when omega/(1-omega) is a power of 3 the higher-priority tie-break lands inside [rho, mu]
        for w in (F(3, 4), F(9, 10)):
            for K in range(2, 9):
                for k1 in range(1, K):
                    c2 = wsr2.TwoGroupConfig(27, K, F(k1, K), w)
                    cm = mg.MultiGroupConfig(27, K, ((F(k1, K), w), (1 - F(k1, K), 1 - w)))
                    for T, lengths in zip(c2.budgets(), mg.allocation_path(cm, linear=True)):
                        assert wsr2.rho(T, c2) <= lengths[0] <= wsr2.mu(T, c2)


class TestOptimize:
    def test_matches_two_group_closed_form(self, table3_cfg):
        lin = linear_rate_model(F(39, 10), 6, 4)
        cm = mg.MultiGroupConfig(81, 10, ((F(1, 5), F(7, 10)), (F(4, 5), F(3, 10))))
        d = wsr2.thresholds(lin, table3_cfg)
        for n in range(1, 60):
            ncoh = (d[n] + d[n + 1]) / 2 * 10
            a = wsr2.optimize(ncoh, lin, table3_cfg)
            b = mg.optimize(ncoh, cm, lin)
            assert (a.T, (a.p1, a.p2)) == (b.T, b.vectors)
            assert a.net_wsr == b.net_wsr

    def test_saturates(self):
        lin = linear_rate_model(4, 6, 3)
        sol = mg.optimize(10 ** 6, TABLE4, lin, linear=True)
        assert sol.T == 90 and sol.lengths == (18, 27, 45)

    def test_solution_invariants(self, mc_small):
        for n in (12, 25, 60, 150, 400):
            sol = mg.optimize(n, FIG5, mc_small[27])
            assert sum(sol.lengths) == sol.T
            for r, p, k in zip(sol.lengths, sol.vectors, FIG5.sizes):
                assert n_pil(p) == r
                assert p == optimal_fixed_length(r, k, 27)

    def test_ties_prefer_smaller_T(self):
        # N_coh exactly at a crossing: both budgets tie, the smaller one is kept
        lin = linear_rate_model(4, 6, 3)
        path = mg.allocation_path(TABLE4, linear=True)
        w0, w1 = _wsr(TABLE4, path[0], lin), _wsr(TABLE4, path[1], lin)
        # (n-10) w0 = (n-12) w1  ->  n = (12 w1 - 10 w0) / (w1 - w0)
        n = (12 * w1 - 10 * w0) / (w1 - w0)
        assert mg.optimize(n, TABLE4, lin).T == 10

    def test_fig5_group_one_first(self, mc_small):
        rates = mc_small[27]
        first = [None] * 3
        for n in range(10, 400, 2):
            sol = mg.optimize(n, FIG5, rates)
            for i, (r, k) in enumerate(zip(sol.lengths, FIG5.sizes)):
                if first[i] is None and r > k:
                    first[i] = n
        assert first[0] < first[1] and first[0] < first[2]

    def test_errors(self):
        lin = linear_rate_model(4, 6, 3)
        with pytest.raises(InvalidParameterError):
            mg.optimize(0, TABLE4, lin)
        with pytest.warns(FeasibilityWarning):
            sol = mg.optimize(4, TABLE4, lin)
        assert sol.T == 10

    def test_record(self):
        rec = mg.optimize(100, TABLE4, linear_rate_model(4, 6, 3), linear=True).to_record()
        assert rec["tie_break"] == mg.TIE_BREAK
        assert len(rec["rho"]) == len(rec["p"]) == 3

    def test_concurrent_sweep_is_deterministic(self, mc_small):
        rates = mc_small[27]
        ns = list(range(10, 300, 7))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            seq = [mg.optimize(n, FIG5, rates).lengths for n in ns]
            with ThreadPoolExecutor(4) as pool:
                par = list(pool.map(lambda n: mg.optimize(n, FIG5, rates).lengths, ns))
        assert seq == par
