"""Scenario files, the on-disk rate cache, and N_coh sweeps.

Scenario JSON (rationals as ``"num/den"`` strings)::

    {"L": 81, "K": 10, "alpha": "1/5", "omega": "7/10",
     "channel": {"gamma": 3.7, "trials": 100000, "seed": 1},
     "ncoh_range": "10:600:5"}

``alpha``/``omega`` may be lists for three or more groups.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import warnings
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from . import multigroup, wsr2
from .assignment import c_sum, n_pil, order_of
from .channel import ChannelParams, DepthRates, estimate_depth_rates, linear_rate_model
from .errors import InvalidParameterError
from .lattice import CellGrid
from .wsr2 import as_fraction

log = logging.getLogger(__name__)

CACHE_SCHEMA_VERSION = 1
SWEEP_SCHEMA_VERSION = 1


class ConfigError(InvalidParameterError):
    pass


def parse_range(text: str) -> list[float]:
    """``"a:b:step"`` -> [a, a+step, ..., <= b]; an empty result is an error."""
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigError(f"range must look like a:b:step, got {text!r}") from None
    if not step > 0 or b < a:
        raise ConfigError(f"empty N_coh range {text!r}")
    n = int(math.floor((b - a) / step + 1e-9))
    return [a + i * step for i in range(n + 1)]


@dataclass(frozen=True)
class ScenarioConfig:
    L: int = 81
    K: int = 10
    alpha: tuple = (Fraction(1, 5), Fraction(4, 5))
    omega: tuple = (Fraction(7, 10), Fraction(3, 10))
    gamma: float = 3.7
    trials: int = 100_000
    seed: int = 1
    hole_ratio: float = 0.14
    cell_radius: float = 500.0
    power_control: bool = False
    ncoh_range: str | None = None

    def __post_init__(self):
        try:
            order_of(self.L)
            if self.K < 1:
                raise ConfigError(f"K must be positive, got {self.K}")
            if len(self.alpha) != len(self.omega) or len(self.alpha) < 2:
                raise ConfigError("alpha and omega need one entry per group (at least two)")
            self.channel_params()
            if self.n_groups == 2:
                self.two_group()
            else:
                self.multi_group()
        except ConfigError:
            raise
        except (InvalidParameterError, TypeError, ValueError) as e:
            raise ConfigError(str(e)) from None

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        known = {"L", "K", "alpha", "omega", "channel", "ncoh_range"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        ch = dict(d.get("channel", {}))
        ch_known = {"gamma", "trials", "seed", "hole_ratio", "cell_radius", "power_control"}
        if set(ch) - ch_known:
            raise ConfigError(f"unknown channel keys: {sorted(set(ch) - ch_known)}")
        try:
            alpha, omega = d.get("alpha", "1/5"), d.get("omega", "7/10")
            if not isinstance(alpha, list):
                alpha = [as_fraction(alpha), 1 - as_fraction(alpha)]
            if not isinstance(omega, list):
                omega = [as_fraction(omega), 1 - as_fraction(omega)]
            return cls(
                L=int(d.get("L", 81)),
                K=int(d.get("K", 10)),
                alpha=tuple(as_fraction(a) for a in alpha),
                omega=tuple(as_fraction(w) for w in omega),
                ncoh_range=d.get("ncoh_range"),
                **ch,
            )
        except ConfigError:
            raise
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ConfigError(str(e)) from None

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e}") from None
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(d)

    @property
    def n_groups(self) -> int:
        return len(self.alpha)

    @property
    def m(self) -> int:
        return order_of(self.L)

    def channel_params(self) -> ChannelParams:
        return ChannelParams(self.gamma, self.trials, self.seed, self.power_control)

    def grid(self) -> CellGrid:
        return CellGrid(self.m, self.cell_radius, self.hole_ratio)

    def two_group(self) -> wsr2.TwoGroupConfig:
        if self.n_groups != 2:
            raise ConfigError(f"two-group solver needs 2 groups, config has {self.n_groups}")
        if sum(self.alpha) != 1 or sum(self.omega) != 1:
            raise ConfigError("alpha and omega must each sum to 1")
        return wsr2.TwoGroupConfig(self.L, self.K, self.alpha[0], self.omega[0])

    def multi_group(self) -> multigroup.MultiGroupConfig:
        return multigroup.MultiGroupConfig(self.L, self.K, tuple(zip(self.alpha, self.omega)))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["alpha"] = [str(a) for a in self.alpha]
        d["omega"] = [str(w) for w in self.omega]
        return d

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


# ---------------------------------------------------------------- rate cache

def _cache_params(scn: ScenarioConfig) -> dict:
    return {
        "L": scn.L,
        "gamma": scn.gamma,
        "hole_ratio": scn.hole_ratio,
        "trials": scn.trials,
        "seed": scn.seed,
        "power_control": scn.power_control,
    }


def cache_path(cache_dir, scn: ScenarioConfig) -> Path:
    key = json.dumps(_cache_params(scn), sort_keys=True, separators=(",", ":"))
    return Path(cache_dir) / f"rates-{hashlib.sha256(key.encode()).hexdigest()[:16]}.json"


def rates_record(rates: DepthRates, scn: ScenarioConfig) -> dict:
    return {
        "schema_version": CACHE_SCHEMA_VERSION,
        **_cache_params(scn),
        "depths": [
            {"depth": i, "mean": float(c), "std_error": float(e)}
            for i, (c, e) in enumerate(zip(rates.rates, rates.std_errors))
        ],
    }


def dump_record(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, indent=1) + "\n"


def _from_record(rec: dict, scn: ScenarioConfig) -> DepthRates:
    if rec.get("schema_version") != CACHE_SCHEMA_VERSION:
        raise ValueError("schema version mismatch")
    for k, v in _cache_params(scn).items():
        if rec.get(k) != v:
            raise ValueError(f"cache parameter {k} differs")
    depths = sorted(rec["depths"], key=lambda d: d["depth"])
    if [d["depth"] for d in depths] != list(range(scn.m)):
        raise ValueError("cache depth list is incomplete")
    prov = {"kind": "monte-carlo", **_cache_params(scn)}
    return DepthRates(tuple(d["mean"] for d in depths), tuple(d["std_error"] for d in depths), prov)


def load_or_estimate(scn: ScenarioConfig, cache_dir=None, workers: int = 1) -> DepthRates:
    """Monte-Carlo rates for ``scn``, reusing a cache file when every parameter matches."""
    path = cache_path(cache_dir, scn) if cache_dir is not None else None
    if path is not None and path.exists():
        try:
            return _from_record(json.loads(path.read_text(encoding="utf-8")), scn)
        except (ValueError, KeyError, TypeError, InvalidParameterError) as e:
            warnings.warn(f"ignoring unusable rate cache {path} ({e}); regenerating", stacklevel=2)
    log.info("estimating rates: L=%d gamma=%g trials=%d seed=%d", scn.L, scn.gamma, scn.trials, scn.seed)
    rates = estimate_depth_rates(scn.grid(), scn.channel_params(), workers=workers)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_record(rates_record(rates, scn)), encoding="utf-8")
    return rates


def resolve_rates(scn: ScenarioConfig, linear: tuple | None = None, cache_dir=None,
                  workers: int = 1) -> DepthRates:
    if linear is not None:
        return linear_rate_model(linear[0], linear[1], scn.m)
    return load_or_estimate(scn, cache_dir, workers)


# --------------------------------------------------------------------- sweeps

@dataclass
class SweepRow:
    n_coh: float
    T: int
    lengths: tuple
    wsr: float
    net_wsr: float
    conv_net_wsr: float
    rates: tuple  # per-user achievable rate of each group (before pilot overhead)
    net_rates: tuple
    conv_net_rates: tuple
    extra: dict = field(default_factory=dict)

    @property
    def gain_pct(self) -> float:
        if self.conv_net_wsr <= 0:
            return math.nan
        return 100.0 * (self.net_wsr / self.conv_net_wsr - 1.0)


def sweep_columns(n_groups: int) -> list[str]:
    cols = ["n_coh", "n_coh_per_K", "T"]
    cols += [f"rho_{i + 1}" for i in range(n_groups)]
    cols += ["wsr", "net_wsr", "conv_net_wsr", "gain_pct"]
    cols += [f"rate_g{i + 1}" for i in range(n_groups)]
    cols += [f"net_rate_g{i + 1}" for i in range(n_groups)]
    cols += [f"conv_net_rate_g{i + 1}" for i in range(n_groups)]
    return cols


def row_values(row: SweepRow, K: int) -> list:
    return [row.n_coh, row.n_coh / K, row.T, *row.lengths, row.wsr, row.net_wsr, row.conv_net_wsr,
            row.gain_pct, *row.rates, *row.net_rates, *row.conv_net_rates]


def solve(scn: ScenarioConfig, n_coh, rates, solver: str = "auto", linear_greedy: bool = False):
    """Solution object from the two-group closed form or the n-group greedy."""
    if solver == "auto":
        solver = "2" if scn.n_groups == 2 else "n"
    if solver == "2":
        return wsr2.optimize(n_coh, rates, scn.two_group())
    return multigroup.optimize(n_coh, scn.multi_group(), rates, linear=linear_greedy)


def sweep(scn: ScenarioConfig, rates, ncoh_values, solver: str = "auto",
          linear_greedy: bool = False) -> list[SweepRow]:
    sizes = [int(a * scn.K) for a in scn.alpha]
    c0 = float(rates[0])
    conv_wsr = float(sum(w * k for w, k in zip(scn.omega, sizes))) * c0
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=UserWarning)
        for n in ncoh_values:
            sol = solve(scn, n, rates, solver, linear_greedy)
            if isinstance(sol, wsr2.TwoGroupSolution):
                vecs = (sol.p1, sol.p2)
            else:
                vecs = sol.vectors
            frac = (n - sol.T) / n
            conv_frac = (n - scn.K) / n
            per_user = tuple(float(c_sum(p, rates)) / k for p, k in zip(vecs, sizes))
            rows.append(SweepRow(
                n_coh=float(n),
                T=sol.T,
                lengths=tuple(n_pil(p) for p in vecs),
                wsr=float(sol.wsr),
                net_wsr=float(sol.net_wsr),
                conv_net_wsr=conv_frac * conv_wsr,
                rates=per_user,
                net_rates=tuple(frac * r for r in per_user),
                conv_net_rates=tuple(conv_frac * c0 for _ in sizes),
            ))
    return rows


def with_overrides(scn: ScenarioConfig, **kw) -> ScenarioConfig:
    kw = {k: v for k, v in kw.items() if v is not None}
    try:
        return replace(scn, **kw)
    except (InvalidParameterError, TypeError, ValueError) as e:
        raise ConfigError(str(e)) from None
