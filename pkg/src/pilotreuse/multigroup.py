"""Pilot allocation for three or more priority groups.

Starting from full reuse, the budget grows two pilots at a time and each
increment goes to the group whose next leaf move (one leaf from depth
``d_i = chi(rho_i, K_i)`` to ``d_i + 1``) raises the WSR the most.  Ties go
to the higher-priority group.  Global optimality is not claimed for n >= 3.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .assignment import (
    PilotAssignmentVector,
    c_sum,
    check_length,
    chi,
    data_fraction,
    optimal_fixed_length,
    order_of,
)
from .channel import as_rates
from .errors import FeasibilityWarning, InvalidParameterError
from .wsr2 import as_fraction

TIE_BREAK = "higher-priority group"


@dataclass(frozen=True)
class MultiGroupConfig:
    L: int
    K: int
    groups: tuple  # ((alpha_1, omega_1), ...), highest priority first

    def __post_init__(self):
        try:
            groups = tuple((as_fraction(a), as_fraction(w)) for a, w in self.groups)
        except (TypeError, ValueError) as exc:
            raise InvalidParameterError(f"groups must be (alpha, omega) pairs: {exc}") from None
        object.__setattr__(self, "groups", groups)
        order_of(self.L)
        if len(groups) < 2:
            raise InvalidParameterError("need at least two groups")
        if sum(a for a, _ in groups) != 1 or sum(w for _, w in groups) != 1:
            raise InvalidParameterError("ratios and weights must each sum to 1")
        for a, w in groups:
            k = a * self.K
            if k.denominator != 1 or k < 1:
                raise InvalidParameterError(f"alpha*K = {k} must be a positive integer")
            if not w > 0:
                raise InvalidParameterError("weights must be positive")
        ws = [w for _, w in groups]
        if any(not hi > lo for hi, lo in zip(ws, ws[1:])):
            raise InvalidParameterError("weights must strictly decrease with priority index")

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(int(a * self.K) for a, _ in self.groups)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for _, w in self.groups)

    @property
    def t_max(self) -> int:
        return self.L * self.K // 3

    def budgets(self) -> range:
        return range(self.K, self.t_max + 1, 2)

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "K": self.K,
            "alpha": [str(a) for a, _ in self.groups],
            "omega": [str(w) for _, w in self.groups],
        }


def marginal(length: int, k: int, weight, cfg: MultiGroupConfig, rates=None):
    """WSR gain of giving two more pilots to a group at ``length`` (None if saturated)."""
    if length >= cfg.L * k // 3:
        return None
    d = chi(length, k, cfg.L)
    if rates is None:
        return weight * Fraction(1, 3 ** d)
    return weight * Fraction(1, 3 ** d) * (rates[d + 1] - rates[d])


@lru_cache(maxsize=128)
def _path(cfg: MultiGroupConfig, rates: tuple | None) -> tuple:
    lengths = list(cfg.sizes)
    path = [tuple(lengths)]
    for _ in cfg.budgets()[1:]:
        best, best_i = None, None
        for i, (k, w) in enumerate(zip(cfg.sizes, cfg.weights)):
            inc = marginal(lengths[i], k, w, cfg, rates)
            # strict '>' keeps the earlier (higher-priority) group on ties
            if inc is not None and (best is None or inc > best):
                best, best_i = inc, i
        lengths[best_i] += 2
        path.append(tuple(lengths))
    return tuple(path)


def allocation_path(cfg: MultiGroupConfig, rates=None, linear: bool = False) -> list[tuple[int, ...]]:
    """Greedy lengths for every budget T = K, K+2, ..., LK/3.

    With ``rates=None`` or ``linear=True`` the increments are compared as
    ``omega_i 3^-d_i`` (equal rate steps at every depth), exactly.
    """
    key = None if (rates is None or linear) else as_rates(rates)
    return list(_path(cfg, key))


def greedy_allocate(T: int, cfg: MultiGroupConfig, rates=None, linear: bool = False) -> tuple[int, ...]:
    check_length(T, cfg.K, cfg.L)
    return allocation_path(cfg, rates, linear)[(T - cfg.K) // 2]


def vectors(lengths, cfg: MultiGroupConfig) -> tuple[PilotAssignmentVector, ...]:
    return tuple(optimal_fixed_length(t, k, cfg.L) for t, k in zip(lengths, cfg.sizes))


def c_wsr(ps, rates, cfg: MultiGroupConfig):
    return sum(w * c_sum(p, rates) for w, p in zip(cfg.weights, ps))


@dataclass(frozen=True)
class MultiGroupSolution:
    lengths: tuple[int, ...]
    vectors: tuple[PilotAssignmentVector, ...]
    T: int
    wsr: float | Fraction
    net_wsr: float | Fraction
    n_coh: float | Fraction
    config: MultiGroupConfig
    rates_provenance: dict = field(default_factory=dict, compare=False)

    def to_record(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "n_coh": float(self.n_coh),
            "T": self.T,
            "rho": list(self.lengths),
            "p": [v.to_list() for v in self.vectors],
            "wsr": float(self.wsr),
            "net_wsr": float(self.net_wsr),
            "rates_provenance": self.rates_provenance,
            "tie_break": TIE_BREAK,
        }


def optimize(n_coh, cfg: MultiGroupConfig, rates, linear: bool = False) -> MultiGroupSolution:
    """Best budget for ``n_coh`` over the greedy allocations (ties -> smaller T)."""
    if not n_coh > 0:
        raise InvalidParameterError(f"normalized coherence time must be positive, got {n_coh}")
    if n_coh < cfg.K:
        warnings.warn(
            f"N_coh={n_coh} is below K={cfg.K}: returning conventional full reuse",
            FeasibilityWarning,
            stacklevel=2,
        )
    prov = dict(rates.provenance) if hasattr(rates, "provenance") else {}
    rates = as_rates(rates)
    path = allocation_path(cfg, rates, linear)
    best = None
    for T, lengths in zip(cfg.budgets(), path):
        ps = vectors(lengths, cfg)
        w = c_wsr(ps, rates, cfg)
        net = data_fraction(n_coh, T) * w
        if best is None or net > best[0]:
            best = (net, T, lengths, ps, w)
    if n_coh < cfg.K:
        lengths = path[0]
        ps = vectors(lengths, cfg)
        w = c_wsr(ps, rates, cfg)
        best = (data_fraction(n_coh, cfg.K) * w, cfg.K, lengths, ps, w)
    net, T, lengths, ps, w = best
    return MultiGroupSolution(lengths, ps, T, w, net, n_coh, cfg, prov)
