"""Brute-force enumerators that certify the closed forms on small instances.

Everything here works straight from the definitions: a vector is valid when
its leaves tile the partition tree, and optima are found by scoring every
candidate.  Nothing is borrowed from :mod:`pilotreuse.wsr2` except the value
being checked.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .assignment import PilotAssignmentVector, c_sum, data_fraction, optimal_fixed_length, order_of
from .channel import as_rates
from .errors import FeasibilityWarning, InvalidParameterError, SearchSizeError
from .wsr2 import TwoGroupConfig, bounds, c_wsr, log3_ratio_is_integer, mu, optimize, rho, split

GUARD_L = (9, 27)
GUARD_K = 6


def _guard(L: int, K: int, override: bool) -> None:
    if override:
        return
    if L not in GUARD_L or K > GUARD_K:
        raise SearchSizeError(
            f"(L={L}, K={K}) is beyond the enumeration guard L in {GUARD_L}, K <= {GUARD_K}; "
            "pass override=True to run anyway"
        )


@dataclass
class SearchReport:
    instance: dict
    best_value: object
    witnesses: list
    count: int
    closed_form: object = None
    agrees: bool | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def enc(x):
            if isinstance(x, PilotAssignmentVector):
                return x.to_list()
            if isinstance(x, (tuple, list)):
                return [enc(y) for y in x]
            if isinstance(x, (int, str, bool)) or x is None:
                return x
            return float(x)

        return {
            "instance": self.instance,
            "best_value": enc(self.best_value),
            "witnesses": enc(self.witnesses),
            "count": self.count,
            "closed_form": enc(self.closed_form),
            "agrees": self.agrees,
            **{k: enc(v) for k, v in self.extra.items()},
        }


def enumerate_valid(L: int, K: int, n_p0: int | None = None, override: bool = False
                    ) -> Iterator[PilotAssignmentVector]:
    """Every valid vector for (L, K), optionally only those using ``n_p0`` pilots.

    The first ``m - 1`` entries range freely; the last one is then forced by
    the tiling constraint and kept only if non-negative.
    """
    m = order_of(L)
    _guard(L, K, override)
    if K < 1:
        raise InvalidParameterError(f"K must be positive, got {K}")
    total = K * 3 ** (m - 1)
    for head in itertools.product(*(range(K * 3 ** i + 1) for i in range(m - 1))):
        rest = total - sum(e * 3 ** (m - 1 - i) for i, e in enumerate(head))
        if rest < 0:
            continue
        entries = head + (rest,)
        if n_p0 is not None and sum(entries) != n_p0:
            continue
        yield PilotAssignmentVector(entries, K, L)


@lru_cache(maxsize=None)
def _count(open_nodes: int, levels: int, pilots: int | None) -> int:
    # choose how many of the open nodes stop here; the rest split into three
    if levels == 1:
        return 1 if pilots is None or pilots == open_nodes else 0
    total = 0
    for leaves in range(open_nodes + 1):
        left = None if pilots is None else pilots - leaves
        if left is not None and left < 0:
            break
        total += _count(3 * (open_nodes - leaves), levels - 1, left)
    return total


def count_valid(L: int, K: int, n_p0: int | None = None) -> int:
    """Number of valid vectors from a leaf-count recurrence (no enumeration)."""
    return _count(K, order_of(L), n_p0)


def _argmax(items, score):
    best, wit, n = None, [], 0
    for it in items:
        n += 1
        v = score(it)
        if best is None or v > best:
            best, wit = v, [it]
        elif v == best:
            wit.append(it)
    return best, wit, n


def brute_fixed_length(n_p0: int, K: int, L: int, rates, override: bool = False) -> SearchReport:
    """Best ``c_sum`` over all vectors with exactly ``n_p0`` pilots."""
    rates = as_rates(rates)
    best, wit, n = _argmax(enumerate_valid(L, K, n_p0, override), lambda p: c_sum(p, rates))
    closed = optimal_fixed_length(n_p0, K, L)
    return SearchReport(
        {"L": L, "K": K, "n_p0": n_p0}, best, wit, n,
        closed_form=closed, agrees=closed in wit and c_sum(closed, rates) == best,
    )


def _pairs(T: int, cfg: TwoGroupConfig, override: bool):
    for t in bounds(T, cfg).S0:
        p2s = list(enumerate_valid(cfg.L, cfg.K2, T - t, override))
        for p1 in enumerate_valid(cfg.L, cfg.K1, t, override):
            for p2 in p2s:
                yield p1, p2


def brute_two_group(T: int, cfg: TwoGroupConfig, rates, override: bool = False) -> SearchReport:
    """All WSR maximizers among pairs using ``T`` pilots in total.

    When ``omega / (1 - omega)`` is a power of 3 the report also checks that
    the maximizers are exactly the closed-form pairs for ``t = rho, ..., mu``.
    """
    _guard(cfg.L, cfg.K, override)
    rates = as_rates(rates)
    best, wit, n = _argmax(_pairs(T, cfg, override), lambda pr: c_wsr(pr[0], pr[1], rates, cfg))
    closed = split(T, cfg)
    agrees = closed in wit and c_wsr(*closed, rates, cfg) == best
    extra = {}
    if log3_ratio_is_integer(cfg.omega):
        lo, hi = rho(T, cfg), mu(T, cfg)
        expected = {split(T, cfg, t) for t in range(lo, hi + 1, 2)}
        extra = {"rho": lo, "mu": hi, "maximizer_set_matches": set(wit) == expected}
    else:
        extra = {"maximizer_set_matches": wit == [closed]}
    return SearchReport(
        {"T": T, **cfg.to_dict()}, best, wit, n, closed_form=closed, agrees=agrees, extra=extra,
    )


@lru_cache(maxsize=64)
def _per_budget(cfg: TwoGroupConfig, rates: tuple, override: bool) -> tuple:
    out = []
    for T in cfg.budgets():
        best, wit, n = _argmax(_pairs(T, cfg, override), lambda pr: c_wsr(pr[0], pr[1], rates, cfg))
        out.append((T, best, wit[0], n))
    return tuple(out)


def brute_ncoh(n_coh, cfg: TwoGroupConfig, rates, override: bool = False) -> SearchReport:
    """Global net-WSR maximum over every budget and every pair."""
    _guard(cfg.L, cfg.K, override)
    if not n_coh > 0:
        raise InvalidParameterError(f"normalized coherence time must be positive, got {n_coh}")
    table = _per_budget(cfg, as_rates(rates), override)
    best, opt_T, count = None, [], 0
    for T, wsr, _, n in table:
        count += n
        v = data_fraction(n_coh, T) * wsr
        if best is None or v > best:
            best, opt_T = v, [T]
        elif v == best:
            opt_T.append(T)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FeasibilityWarning)
        sol = optimize(n_coh, rates, cfg)
    return SearchReport(
        {"n_coh": float(n_coh), **cfg.to_dict()}, best, opt_T, count,
        closed_form=sol.T, agrees=sol.T in opt_T and abs(sol.net_wsr - best) <= 1e-9 * abs(best),
    )


__all__ = [
    "SearchReport",
    "brute_fixed_length",
    "brute_ncoh",
    "brute_two_group",
    "count_valid",
    "enumerate_valid",
]
