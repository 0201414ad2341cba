"""Slow-fading channel, asymptotic pilot-contaminated rate, per-depth rate table."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    DegenerateGeometryError,
    InvalidParameterError,
    MonopolyError,
    ShapeError,
)
from .lattice import CellGrid, sample_offsets

BLOCK_TRIALS = 4096


@dataclass(frozen=True)
class ChannelParams:
    gamma: float = 3.7
    trials: int = 100_000
    seed: int = 1
    # statistical channel inversion (each user's own-cell gain normalized to 1)
    power_control: bool = False

    def __post_init__(self):
        if not 2.0 <= self.gamma <= 4.0:
            raise InvalidParameterError(f"path-loss exponent must lie in [2, 4], got {self.gamma}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise InvalidParameterError(f"trials must be a positive integer, got {self.trials}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class DepthRates:
    """Per-depth asymptotic rates C_0 < C_1 < ... < C_{m-1} (bits/s/Hz).

    ``rates`` holds floats for Monte-Carlo estimates and Fractions for the
    exact linear model.
    """

    rates: tuple
    std_errors: tuple | None = None
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        rates = tuple(self.rates)
        object.__setattr__(self, "rates", rates)
        if len(rates) < 1:
            raise ShapeError("empty rate table")
        for c in rates:
            if not (math.isfinite(c) and c > 0):
                raise InvalidParameterError(f"rates must be finite and positive, got {c}")
        for lo, hi in zip(rates, rates[1:]):
            if not hi > lo:
                raise InvalidParameterError(f"rates must be strictly increasing: {rates}")

    def __len__(self):
        return len(self.rates)

    def __getitem__(self, i):
        return self.rates[i]

    def __iter__(self):
        return iter(self.rates)

    @property
    def increments(self) -> tuple:
        return tuple(b - a for a, b in zip(self.rates, self.rates[1:]))


def as_rates(rates) -> tuple:
    """Plain tuple view of a :class:`DepthRates` or a sequence of numbers."""
    if isinstance(rates, DepthRates):
        return rates.rates
    return tuple(rates)


def slow_fading(distance: float, gamma: float) -> float:
    if not distance > 0:
        raise DegenerateGeometryError(f"distance must be positive, got {distance}")
    return distance ** (-gamma)


def asymptotic_rate(beta_home: float, beta_interferers: Sequence[float]) -> float:
    """Large-array uplink rate of a user whose pilot is shared with the interferers."""
    if len(beta_interferers) == 0:
        raise MonopolyError("no pilot-sharing interferers: rate is unbounded")
    if not beta_home > 0 or any(not b > 0 for b in beta_interferers):
        raise InvalidParameterError("slow-fading coefficients must be positive")
    return math.log2(1.0 + beta_home ** 2 / math.fsum(b * b for b in beta_interferers))


def linear_rate_model(c0, slope, m: int) -> DepthRates:
    """Exact arithmetic progression ``C_i = c0 + slope * i``."""
    c0 = Fraction(c0) if not isinstance(c0, float) else Fraction(repr(c0))
    slope = Fraction(slope) if not isinstance(slope, float) else Fraction(repr(slope))
    if slope <= 0:
        raise InvalidParameterError("slope must be positive")
    if m < 2:
        raise InvalidParameterError("need at least two depths")
    return DepthRates(
        tuple(c0 + slope * i for i in range(m)),
        provenance={"kind": "linear-model", "c0": str(c0), "slope": str(slope)},
    )


def block_rng(seed: int, depth: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(depth, block))))


def sample_block(grid: CellGrid, depth: int, n: int, rng: np.random.Generator):
    """Home-user offsets (n, 2) then interferer offsets (n, g, 2), in that draw order."""
    g = 3 ** (grid.m - depth) - 1
    home = sample_offsets(n, rng, grid.hole_ratio)
    interf = sample_offsets(n * g, rng, grid.hole_ratio).reshape(n, g, 2)
    return home, interf


def depth_trial_rates(grid: CellGrid, params: ChannelParams, depth: int,
                      workers: int = 1, backend: str | None = None) -> np.ndarray:
    """Per-trial rates at one depth, in trial order."""
    kernel = kernels.get_kernel(backend)
    centers = grid.group_offsets(depth)
    nblocks = -(-params.trials // BLOCK_TRIALS)

    def run(b):
        n = min(BLOCK_TRIALS, params.trials - b * BLOCK_TRIALS)
        home, interf = sample_block(grid, depth, n, block_rng(params.seed, depth, b))
        return kernel(home, interf, centers, grid.period, grid.period_inv, params.gamma,
                      params.power_control)

    if workers <= 1:
        parts = [run(b) for b in range(nblocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(nblocks)))
    return np.concatenate(parts)


def estimate_depth_rates(grid: CellGrid, params: ChannelParams,
                         workers: int = 1, backend: str | None = None) -> DepthRates:
    """Monte-Carlo estimate of C_0..C_{m-1} on the torus.

    Computation is carried out in units of the cell radius, so the result
    does not depend on ``grid.cell_radius`` at all.
    """
    means, errs = [], []
    for depth in range(grid.m):
        r = depth_trial_rates(grid, params, depth, workers=workers, backend=backend)
        means.append(math.fsum(r.tolist()) / r.size)
        errs.append(float(np.std(r, ddof=1) / math.sqrt(r.size)) if r.size > 1 else float("nan"))
    return DepthRates(
        tuple(means),
        tuple(errs),
        provenance={
            "kind": "monte-carlo",
            "L": grid.L,
            "gamma": params.gamma,
            "hole_ratio": grid.hole_ratio,
            "trials": params.trials,
            "seed": params.seed,
            "power_control": params.power_control,
        },
    )
