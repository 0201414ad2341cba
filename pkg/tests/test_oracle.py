import json
from fractions import Fraction as F

import pytest

from pilotreuse import oracle
from pilotreuse.channel import linear_rate_model
from pilotreuse.errors import SearchSizeError
from pilotreuse.wsr2 import TwoGroupConfig, mu, rho, split


def test_enumerate_examples():
    assert sorted(p.entries for p in oracle.enumerate_valid(9, 1)) == [(0, 3), (1, 0)]
    assert [p.entries for p in oracle.enumerate_valid(9, 2, 4)] == [(1, 3)]


@pytest.mark.parametrize("L", [9, 27])
@pytest.mark.parametrize("K", range(1, 7))
def test_counts_match_recurrence(L, K):
    vs = list(oracle.enumerate_valid(L, K))
    assert len(vs) == len({v.entries for v in vs}) == oracle.count_valid(L, K)
    for n in range(K, L * K // 3 + 1, 2):
        assert sum(1 for v in vs if sum(v.entries) == n) == oracle.count_valid(L, K, n)


def test_count_by_hand():
    # L = 27, K = 1: stop at the root, or split once and let j = 0..3 of the children stop
    assert oracle.count_valid(27, 1) == 1 + 4


def test_guard():
    with pytest.raises(SearchSizeError):
        list(oracle.enumerate_valid(81, 1))
    with pytest.raises(SearchSizeError):
        oracle.brute_fixed_length(7, 7, 9, linear_rate_model(4, 6, 2))
    assert len(list(oracle.enumerate_valid(81, 1, override=True))) == oracle.count_valid(81, 1)


def test_fixed_length_agrees():
    lin = linear_rate_model(F(39, 10), 6, 3)
    for K in range(1, 7):
        for n in range(K, 9 * K + 1, 2):
            rep = oracle.brute_fixed_length(n, K, 27, lin)
            assert rep.agrees and rep.witnesses == [rep.closed_form]


def test_tie_maximizer_set():
    cfg = TwoGroupConfig(27, 4, F(1, 4), F(3, 4))
    lin = linear_rate_model(4, 6, 3)
    for T in cfg.budgets():
        rep = oracle.brute_two_group(T, cfg, lin)
        assert rep.agrees and rep.extra["maximizer_set_matches"]
        assert len(rep.witnesses) == (mu(T, cfg) - rho(T, cfg)) // 2 + 1


def test_single_candidate_at_full_reuse():
    cfg = TwoGroupConfig(9, 3, F(1, 3), F(7, 10))
    rep = oracle.brute_two_group(3, cfg, linear_rate_model(4, 6, 2))
    assert rep.count == 1 and rep.witnesses == [split(3, cfg)]


def test_ncoh_report_is_json():
    cfg = TwoGroupConfig(9, 4, F(1, 2), F(7, 10))
    rep = oracle.brute_ncoh(F(31, 3), cfg, linear_rate_model(4, 6, 2))
    assert rep.agrees
    json.dumps(rep.to_dict())
    with pytest.raises(oracle.InvalidParameterError):
        oracle.brute_ncoh(0, cfg, linear_rate_model(4, 6, 2))
