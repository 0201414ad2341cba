"""Two-priority-group weighted-sum-rate pilot optimizer.

Group 1 (``K1 = alpha K`` users per cell, weight ``omega``) and group 2
(``K2 = (1 - alpha) K`` users, weight ``1 - omega``) use mutually orthogonal
pilots.  For a total pilot budget ``T`` the optimal split gives ``rho(T)``
pilots to group 1; for a coherence time ``N_coh`` the optimal budget is
``T = 2n + K`` on ``[K Delta_n, K Delta_{n+1})``.

``alpha`` and ``omega`` are exact :class:`~fractions.Fraction` values so the
comparisons ``g_T(t)`` vs 1 and the test ``log3(omega / (1 - omega))`` in Z
are decided without rounding.
"""
from __future__ import annotations

import math
import warnings
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .assignment import (
    PilotAssignmentVector,
    c_sum,
    check_length,
    chi,
    data_fraction,
    n_pil,
    optimal_fixed_length,
    order_of,
    require_group,
)
from .channel import as_rates
from .errors import DomainError, FeasibilityWarning, InvalidParameterError


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, ``"num/den"`` string or float (via its repr)."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class TwoGroupConfig:
    L: int
    K: int
    alpha: Fraction
    omega: Fraction
    _k1: int = field(init=False, repr=False, compare=False)
    _ratio: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "omega", as_fraction(self.omega))
        order_of(self.L)
        if not 0 < self.alpha < 1:
            raise InvalidParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not Fraction(1, 2) <= self.omega < 1:
            raise InvalidParameterError(f"omega must lie in [1/2, 1), got {self.omega}")
        k1 = self.alpha * self.K
        if k1.denominator != 1:
            raise InvalidParameterError(f"alpha * K = {k1} is not an integer")
        if not 1 <= k1 <= self.K - 1:
            raise InvalidParameterError("both groups need at least one user per cell")
        object.__setattr__(self, "_k1", int(k1))
        object.__setattr__(self, "_ratio", (1 - self.omega) / self.omega)

    @property
    def m(self) -> int:
        return order_of(self.L)

    @property
    def K1(self) -> int:
        return self._k1

    @property
    def K2(self) -> int:
        return self.K - self.K1

    @property
    def t_max(self) -> int:
        return self.L * self.K // 3

    def budgets(self) -> range:
        """All feasible total pilot lengths K, K+2, ..., LK/3."""
        return range(self.K, self.t_max + 1, 2)

    def to_dict(self) -> dict:
        return {"L": self.L, "K": self.K, "alpha": str(self.alpha), "omega": str(self.omega)}


class Bounds(NamedTuple):
    B: int
    F: int
    S0: range
    S1: range


def _check_T(T: int, cfg: TwoGroupConfig) -> None:
    check_length(T, cfg.K, cfg.L)


def bounds(T: int, cfg: TwoGroupConfig) -> Bounds:
    _check_T(T, cfg)
    B = max(cfg.K1, T - cfg.L * cfg.K2 // 3)
    F = min(T - cfg.K2, cfg.L * cfg.K1 // 3)
    return Bounds(B, F, range(B, F + 1, 2), range(B, F, 2))


def g(t: int, T: int, cfg: TwoGroupConfig) -> Fraction:
    """``3^(chi(t, K1) - chi(T - t - 2, K2)) (1 - omega) / omega``, exactly."""
    if t not in bounds(T, cfg).S1:
        raise DomainError(f"t={t} outside S1({T})")
    k = chi(t, cfg.K1, cfg.L) - chi(T - t - 2, cfg.K2, cfg.L)
    return Fraction(3) ** k * cfg._ratio


def log3_ratio_is_integer(omega) -> bool:
    """Whether ``omega / (1 - omega)`` is an integer power of 3."""
    r = as_fraction(omega) / (1 - as_fraction(omega))
    num, den = r.numerator, r.denominator
    if den == 1:
        while num % 3 == 0:
            num //= 3
        return num == 1
    if num == 1:
        while den % 3 == 0:
            den //= 3
        return den == 1
    return False


def ceil_log3_ratio(omega) -> int:
    """``s = ceil(log3(omega / (1 - omega)))`` computed exactly."""
    r = as_fraction(omega) / (1 - as_fraction(omega))
    s = 0
    while Fraction(3) ** s < r:
        s += 1
    while s > 0 and Fraction(3) ** (s - 1) >= r:
        s -= 1
    return s


def rho(T: int, cfg: TwoGroupConfig) -> int:
    """Optimal group-1 pilot length for budget T (smallest optimal split)."""
    b = bounds(T, cfg)
    if not b.S1 or g(b.B, T, cfg) > 1:
        return b.B
    if g(b.F - 2, T, cfg) < 1:
        return b.F
    # g is nondecreasing in t, so the first t with g >= 1 can be bisected
    return b.S1[bisect_left(b.S1, True, key=lambda t: g(t, T, cfg) >= 1)]


def mu(T: int, cfg: TwoGroupConfig) -> int:
    """Largest optimal group-1 pilot length; only defined when ties can occur."""
    if not log3_ratio_is_integer(cfg.omega):
        raise DomainError(f"log3(omega/(1-omega)) is not an integer for omega={cfg.omega}")
    b = bounds(T, cfg)
    if not b.S1 or g(b.B, T, cfg) > 1:
        return b.B
    if g(b.F - 2, T, cfg) < 1:
        return b.F
    return b.S1[bisect_left(b.S1, True, key=lambda t: g(t, T, cfg) > 1) - 1] + 2


def rho_closed_form(T: int, cfg: TwoGroupConfig) -> int:
    """``rho(T)`` from the piecewise formula in ``s``, ``V(T)`` and ``phi(T)``."""
    _check_T(T, cfg)
    L, K1, K2 = cfg.L, cfg.K1, cfg.K2
    s = ceil_log3_ratio(cfg.omega)
    if T == cfg.K:
        return K1
    if T == cfg.t_max:
        return L * K1 // 3
    if 3 ** (s + 1) >= L:  # 3^s >= L/3
        return T - K2 if T <= K2 + L * K1 // 3 else L * K1 // 3
    if T <= K2 + 3 ** s * K1:
        return T - K2
    # T < L K1 / 3 + L K2 / 3^(s+1), kept in integers
    if 3 ** (s + 1) * T < 3 ** s * L * K1 + L * K2:
        m = cfg.m
        V = next(i for i in range(0, m - s) if T <= 3 ** (s + i) * K1 + 3 ** i * K2)
        head = Fraction(3) ** (V + s - 1) * K1
        if T <= head + 3 ** V * K2:
            return int(head)
        return T - 3 ** V * K2
    return L * K1 // 3


def split(T: int, cfg: TwoGroupConfig, t: int | None = None):
    """Closed-form vector pair for budget T (group-1 length ``t`` defaults to rho(T))."""
    if t is None:
        t = rho(T, cfg)
    return (
        optimal_fixed_length(t, cfg.K1, cfg.L),
        optimal_fixed_length(T - t, cfg.K2, cfg.L),
    )


def c_wsr(p1: PilotAssignmentVector, p2: PilotAssignmentVector, rates, cfg: TwoGroupConfig):
    require_group(p1, cfg.K1, cfg.L)
    require_group(p2, cfg.K2, cfg.L)
    return cfg.omega * c_sum(p1, rates) + (1 - cfg.omega) * c_sum(p2, rates)


def c_net_wsr(p1, p2, rates, cfg: TwoGroupConfig, n_coh):
    if not n_coh > 0:
        raise InvalidParameterError(f"normalized coherence time must be positive, got {n_coh}")
    T = n_pil(p1) + n_pil(p2)
    return data_fraction(n_coh, T) * c_wsr(p1, p2, rates, cfg)


def wsr_bar(T: int, rates, cfg: TwoGroupConfig):
    """Maximum WSR over all assignments using T pilots in total."""
    p1, p2 = split(T, cfg)
    return c_wsr(p1, p2, rates, cfg)


def delta(T: int, rates, cfg: TwoGroupConfig):
    """WSR gain from budget T to T+2 (per-cell, from the actual rate increments)."""
    _check_T(T, cfg)
    if T >= cfg.t_max:
        raise DomainError(f"T={T} is the largest budget; no T+2")
    rates = as_rates(rates)
    L, K1, K2 = cfg.L, cfg.K1, cfg.K2
    r = rho(T, cfg)
    s = ceil_log3_ratio(cfg.omega)

    def move(t, k, w):
        d = chi(t, k, L)
        return w * Fraction(1, 3 ** d) * (rates[d + 1] - rates[d])

    can1, can2 = r < L * K1 // 3, T - r < L * K2 // 3
    # past the cap only group 2 grows: T >= L K1/3 + max(L/3^(s+1), 1) K2
    cap = L * K1 // 3 + max(Fraction(L, 3 ** (s + 1)), Fraction(1)) * K2
    if can2 and (T >= cap or not can1):
        return move(T - r, K2, 1 - cfg.omega)
    if not can2:
        return move(r, K1, cfg.omega)
    return max(move(r, K1, cfg.omega), move(T - r, K2, 1 - cfg.omega))


def _crossing(T: int, K: int, base, inc):
    # h_T and h_{T+2} cross at N = T + 2 + 2 Cbar(T) / delta_T
    return (T + 2 + 2 * base / inc) / K


def thresholds(rates, cfg: TwoGroupConfig, method: str = "direct") -> list:
    """``Delta_0 .. Delta_{N_L+1}`` in units of N_coh / K.

    ``method="direct"`` takes increments as ``wsr_bar(T+2) - wsr_bar(T)``;
    ``method="corollary"`` accumulates ``wsr_bar`` from ``T=K`` with
    :func:`delta`.  The two agree exactly under a linear rate model.
    """
    return list(_thresholds(as_rates(rates), cfg, method))


@lru_cache(maxsize=256)
def _thresholds(rates: tuple, cfg: TwoGroupConfig, method: str) -> tuple:
    Ts = list(cfg.budgets())
    if method == "direct":
        bars = [wsr_bar(T, rates, cfg) for T in Ts]
        incs = [b - a for a, b in zip(bars, bars[1:])]
    elif method == "corollary":
        incs = [delta(T, rates, cfg) for T in Ts[:-1]]
        bars = [wsr_bar(cfg.K, rates, cfg)]
        for d in incs:
            bars.append(bars[-1] + d)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = [0]
    for T, base, inc in zip(Ts, bars, incs):
        out.append(_crossing(T, cfg.K, base, inc))
    out.append(math.inf)
    return tuple(out)


def is_nondecreasing(seq) -> bool:
    return all(b >= a for a, b in zip(seq, seq[1:]))


@dataclass(frozen=True)
class TwoGroupSolution:
    p1: PilotAssignmentVector
    p2: PilotAssignmentVector
    T: int
    rho: int
    wsr: float | Fraction
    net_wsr: float | Fraction
    n_index: int
    n_coh: float | Fraction
    config: TwoGroupConfig
    rates_provenance: dict = field(default_factory=dict, compare=False)

    def to_record(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "n_coh": float(self.n_coh),
            "T": self.T,
            "rho": self.rho,
            "p1": self.p1.to_list(),
            "p2": self.p2.to_list(),
            "wsr": float(self.wsr),
            "net_wsr": float(self.net_wsr),
            "n_index": self.n_index,
            "rates_provenance": self.rates_provenance,
            "tie_break": "smallest optimal group-1 length",
        }


def optimize(n_coh, rates, cfg: TwoGroupConfig) -> TwoGroupSolution:
    """Net-WSR-optimal assignment for normalized coherence time ``n_coh``."""
    if not n_coh > 0:
        raise InvalidParameterError(f"normalized coherence time must be positive, got {n_coh}")
    prov = dict(rates.provenance) if hasattr(rates, "provenance") else {}
    rates = as_rates(rates)
    if len(rates) != cfg.m:
        raise InvalidParameterError(f"rate table has {len(rates)} depths, L={cfg.L} needs {cfg.m}")
    if n_coh < cfg.K:
        warnings.warn(
            f"N_coh={n_coh} is below K={cfg.K}: no assignment leaves data time; "
            "returning conventional full reuse",
            FeasibilityWarning,
            stacklevel=2,
        )
    deltas = _thresholds(rates, cfg, "direct")
    if is_nondecreasing(deltas):
        n = bisect_right(deltas, n_coh / cfg.K) - 1
        n = min(max(n, 0), len(deltas) - 2)
    else:
        warnings.warn("threshold sequence is not monotone; using the upper envelope directly",
                      RuntimeWarning, stacklevel=2)
        best = max(cfg.budgets(), key=lambda T: (data_fraction(n_coh, T) * wsr_bar(T, rates, cfg), -T))
        n = (best - cfg.K) // 2
    T = 2 * n + cfg.K
    r = rho(T, cfg)
    p1, p2 = split(T, cfg, r)
    w = c_wsr(p1, p2, rates, cfg)
    return TwoGroupSolution(p1, p2, T, r, w, data_fraction(n_coh, T) * w, n, n_coh, cfg, prov)


def conventional(cfg: TwoGroupConfig):
    """Full-reuse pair ``((K1, 0, ...), (K2, 0, ...))``."""
    return split(cfg.K, cfg, cfg.K1)

