"""Pilot assignment vectors and the fixed-length sum-rate optimum.

A vector ``p = (p_0, ..., p_{m-1})`` counts the leaves at each depth of the
3-way partition tree; ``p_i`` pilots are each shared by ``L / 3**i`` cells.
Validity is checked in integers: ``sum(p_i * 3**(m-1-i)) == K * 3**(m-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .channel import as_rates
from .errors import GroupMismatchError, InvalidLengthError, InvalidParameterError, ShapeError


def order_of(L: int) -> int:
    """m such that L == 3**m, or InvalidParameterError."""
    m, x = 0, L
    while x > 1 and x % 3 == 0:
        x //= 3
        m += 1
    if x != 1 or m < 2:
        raise InvalidParameterError(f"L must be a power of 3 and at least 9, got {L}")
    return m


@dataclass(frozen=True)
class PilotAssignmentVector:
    entries: tuple[int, ...]
    K: int
    L: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))

    @property
    def m(self) -> int:
        return order_of(self.L)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def to_list(self) -> list[int]:
        return list(self.entries)


def is_valid(p: PilotAssignmentVector) -> bool:
    m = order_of(p.L)
    if len(p.entries) != m:
        return False
    if any(not 0 <= e <= p.K * 3 ** i for i, e in enumerate(p.entries)):
        return False
    return sum(e * 3 ** (m - 1 - i) for i, e in enumerate(p.entries)) == p.K * 3 ** (m - 1)


def n_pil(p: PilotAssignmentVector) -> int:
    return sum(p.entries)


def check_length(n_p0: int, K: int, L: int | None = None) -> None:
    if K < 1:
        raise InvalidParameterError(f"K must be positive, got {K}")
    hi = L * K // 3 if L is not None else None
    if n_p0 < K or (hi is not None and n_p0 > hi) or (n_p0 - K) % 2:
        raise InvalidLengthError(
            f"pilot length {n_p0} not in {{{K}, {K + 2}, ..., {hi if hi is not None else '...'}}}"
        )


def chi(n_p0: int, K: int, L: int | None = None) -> int:
    """Depth of the shallowest leaf in the fixed-length optimum.

    Smallest k with ``sum_{i<=k} K 3^i > (n_p0 - K) / 2``.
    """
    check_length(n_p0, K, L)
    half = (n_p0 - K) // 2
    acc = 0
    k = 0
    while True:
        acc += K * 3 ** k
        if acc > half:
            return k
        k += 1


def optimal_fixed_length(n_p0: int, K: int, L: int) -> PilotAssignmentVector:
    """Sum-rate-maximizing vector among those using exactly ``n_p0`` pilots.

    Nonzero only at depths chi and chi + 1.
    """
    m = order_of(L)
    c = chi(n_p0, K, L)
    half = (n_p0 - K) // 2
    upto = K * (3 ** (c + 1) - 1) // 2  # sum_{t<=c} K 3^t
    below = K * (3 ** c - 1) // 2  # sum_{t<=c-1} K 3^t
    entries = [0] * m
    entries[c] = upto - half
    if c + 1 < m:
        entries[c + 1] = 3 * (half - below)
    return PilotAssignmentVector(tuple(entries), K, L)


def c_sum(p: PilotAssignmentVector, rates) -> float | Fraction:
    """Per-cell sum rate ``sum_i 3^-i p_i C_i``."""
    rates = as_rates(rates)
    if len(rates) != len(p.entries):
        raise ShapeError(f"vector has {len(p.entries)} depths, rate table has {len(rates)}")
    total = 0
    for i, (e, c) in enumerate(zip(p.entries, rates)):
        if e:
            total += Fraction(e, 3 ** i) * c
    return total


def data_fraction(n_coh, n_p: int):
    """Share of the coherence block left for data, exact for int/Fraction ``n_coh``."""
    if isinstance(n_coh, float):
        return (n_coh - n_p) / n_coh
    return Fraction(n_coh - n_p) / n_coh


def c_net(p: PilotAssignmentVector, rates, n_coh) -> float | Fraction:
    """Per-cell net sum rate; negative when the pilots overrun the coherence time."""
    if not n_coh > 0:
        raise InvalidParameterError(f"normalized coherence time must be positive, got {n_coh}")
    return data_fraction(n_coh, n_pil(p)) * c_sum(p, rates)


def require_group(p: PilotAssignmentVector, K: int, L: int) -> None:
    if p.K != K or p.L != L:
        raise GroupMismatchError(f"vector built for (K={p.K}, L={p.L}), expected (K={K}, L={L})")
