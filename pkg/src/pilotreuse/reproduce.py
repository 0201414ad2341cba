"""Reproduction of the published tables and figure checkpoints, plus the oracle sweep.

Each target returns a :class:`Outcome` holding pass/fail checks and the data
rows; the CLI decides how to print them.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import multigroup, oracle, wsr2
from .channel import DepthRates, linear_rate_model
from .scenario import ScenarioConfig, sweep, sweep_columns, row_values
from .wsr2 import TwoGroupConfig, as_fraction


def expected() -> dict:
    return json.loads(resources.files("pilotreuse").joinpath("data/expected.json").read_text())


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Outcome:
    target: str
    checks: list = field(default_factory=list)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))


def _two(c: dict) -> TwoGroupConfig:
    return TwoGroupConfig(c["L"], c["K"], as_fraction(c["alpha"]), as_fraction(c["omega"]))


def _scn(c: dict) -> ScenarioConfig:
    return ScenarioConfig.from_dict(c)


def table3(rates: DepthRates) -> Outcome:
    exp = expected()["table3"]
    cfg = _two(exp["config"])
    out = Outcome("table3", columns=["from_ncoh_per_K", "to_ncoh_per_K", "T", "p1", "p2"])
    thr = wsr2.thresholds(rates, cfg)
    out.add("thresholds nondecreasing", wsr2.is_nondecreasing(thr))
    for row in exp["rows"]:
        T = row["T"]
        p1, p2 = wsr2.split(T, cfg)
        n = (T - cfg.K) // 2
        got = (p1.to_list(), p2.to_list())
        out.add(f"T={T} vectors", got == (row["p1"], row["p2"]),
                f"got p1={got[0]} p2={got[1]}, expected p1={row['p1']} p2={row['p2']}")
        out.rows.append([float(thr[n]), float(thr[n + 1]), T, got[0], got[1]])
    tol = exp["boundary_tolerance"]
    for i, want in enumerate(exp["boundaries"], start=1):
        got = float(thr[i])
        out.add(f"boundary {i}", abs(got - want) <= tol, f"{got:.3f} vs {want} (tol {tol})")
    out.summary = {
        "boundaries": [float(x) for x in thr[1:6]],
        "last_boundary": float(thr[-2]),
        "last_boundary_published": exp["last_boundary"],
        "rates": [float(c) for c in rates],
    }
    return out


def table4() -> Outcome:
    exp = expected()["table4"]
    cfg = _scn(exp["config"]).multi_group()
    path = multigroup.allocation_path(cfg, linear=True)
    out = Outcome("table4", columns=["T", "rho_1", "rho_2", "rho_3"])
    got = {T: list(lengths) for T, lengths in zip(cfg.budgets(), path)}
    for T, *want in exp["rows"]:
        out.rows.append([T, *got.get(T, [None] * 3)])
        out.add(f"T={T}", got.get(T) == want, f"got {got.get(T)}, expected {want}")
    return out


def fig3(rates: DepthRates, step: float = 0.1, top: float = 30.0) -> Outcome:
    exp = expected()["fig3"]
    scn = _scn(exp["config"])
    cfg = scn.two_group()
    out = Outcome("fig3", columns=sweep_columns(2))
    thr = wsr2.thresholds(rates, cfg)
    cross = float(thr[1])
    out.add("crossover", abs(cross - exp["crossover"]) <= exp["crossover_tolerance"],
            f"{cross:.3f} vs {exp['crossover']} (tol {exp['crossover_tolerance']})")
    gains = {}
    for key, want in exp["gains_pct"].items():
        row = sweep(scn, rates, [Fraction(key) * cfg.K])[0]
        gains[key] = row.gain_pct
        out.add(f"gain at N_coh/K={key}", abs(row.gain_pct - want) <= exp["gain_tolerance_pp"],
                f"{row.gain_pct:.1f}% vs {want}% (tol {exp['gain_tolerance_pp']} pp)")
    n = int(round((top - 1.0) / step))
    grid = [cfg.K * (Fraction(1) + Fraction(step).limit_denominator(1000) * i) for i in range(n + 1)]
    rows = sweep(scn, rates, grid)
    weak = all(r.net_wsr >= r.conv_net_wsr - 1e-12 * abs(r.conv_net_wsr) for r in rows)
    strict = all(r.net_wsr > r.conv_net_wsr for r in rows if r.n_coh / cfg.K >= exp["strict_from"])
    out.add("optimal >= conventional everywhere", weak)
    out.add(f"optimal > conventional for N_coh/K >= {exp['strict_from']}", strict)
    out.rows = [row_values(r, cfg.K) for r in rows]
    out.summary = {"crossover": cross, "gains_pct": gains, "rates": [float(c) for c in rates]}
    return out


def fig4(rates: DepthRates, step: float = 0.5, top: float = 30.0) -> Outcome:
    exp = expected()["fig4"]
    out = Outcome("fig4", columns=["panel"] + sweep_columns(2))
    for idx, c in enumerate(exp["configs"]):
        scn = _scn(c)
        n = int(round((top - 1.0) / step))
        grid = [scn.K * (1 + step * i) for i in range(n + 1)]
        rows = sweep(scn, rates, grid)
        for g in range(2):
            seq = [r.rates[g] for r in rows]
            out.add(f"panel {idx} group {g + 1} rate nondecreasing",
                    all(b >= a for a, b in zip(seq, seq[1:])))
        out.rows += [[idx] + row_values(r, scn.K) for r in rows]
    return out


def fig5(rates: DepthRates, step: float = 0.5, top: float = 40.0) -> Outcome:
    """Three-group per-user rates; the highest-priority group must improve first."""
    exp = expected()["fig5"]
    scn = _scn(exp["config"])
    out = Outcome("fig5", columns=sweep_columns(3))
    n = int(round((top - 1.0) / step))
    rows = sweep(scn, rates, [scn.K * (1 + step * i) for i in range(n + 1)])
    c0 = float(rates[0])
    first = []
    for g in range(3):
        hit = [r.n_coh / scn.K for r in rows if r.rates[g] > c0 * (1 + 1e-12)]
        first.append(hit[0] if hit else math.inf)
    out.add("group 1 rises first", first[0] < first[1] and first[0] < first[2],
            f"first improvement at N_coh/K = {first}")
    for g in range(3):
        seq = [r.rates[g] for r in rows]
        out.add(f"group {g + 1} rate nondecreasing", all(b >= a for a, b in zip(seq, seq[1:])))
    out.rows = [row_values(r, scn.K) for r in rows]
    out.summary = {"first_rise": first}
    return out


OMEGAS = (Fraction(1, 2), Fraction(3, 5), Fraction(7, 10), Fraction(3, 4), Fraction(9, 10))


def verify(scale: str = "small", c0=4, slope=6, mc_rates: dict | None = None) -> Outcome:
    """Closed forms against brute force under linear rates (and any MC rates given).

    ``small`` covers L=9 with K<=3; ``full-small-grid`` covers L in {9, 27}
    with K<=4.  ``mc_rates`` maps L to a :class:`DepthRates` for the
    fixed-length check.
    """
    if scale == "small":
        Ls, Ks = (9,), range(1, 4)
    elif scale == "full-small-grid":
        Ls, Ks = (9, 27), range(1, 5)
    else:
        raise ValueError(f"unknown scale {scale!r}")
    out = Outcome("verify")
    counts = {}
    for L in Ls:
        for K in range(1, 7):
            n = sum(1 for _ in oracle.enumerate_valid(L, K))
            counts[f"L={L},K={K}"] = n
            out.add(f"enumeration count L={L} K={K}", n == oracle.count_valid(L, K),
                    f"{n} enumerated, {oracle.count_valid(L, K)} from recurrence")
    tallies = {"fixed_length": [0, 0], "two_group": [0, 0], "ncoh": [0, 0]}
    for L in Ls:
        m = 2 if L == 9 else 3
        tables = [linear_rate_model(c0, slope, m)]
        if mc_rates and L in mc_rates:
            tables.append(mc_rates[L])
        for K in Ks:
            for rates in tables:
                for T in range(K, L * K // 3 + 1, 2):
                    rep = oracle.brute_fixed_length(T, K, L, rates)
                    tallies["fixed_length"][0] += 1
                    tallies["fixed_length"][1] += not rep.agrees
            lin = tables[0]
            for k1 in range(1, K):
                for w in OMEGAS:
                    cfg = TwoGroupConfig(L, K, Fraction(k1, K), w)
                    for T in cfg.budgets():
                        rep = oracle.brute_two_group(T, cfg, lin)
                        tallies["two_group"][0] += 1
                        tallies["two_group"][1] += not (rep.agrees and rep.extra["maximizer_set_matches"])
    cfg = TwoGroupConfig(9, 2, Fraction(1, 2), Fraction(7, 10))
    lin = linear_rate_model(c0, slope, 2)
    for n in ncoh_samples(cfg, lin):
        rep = oracle.brute_ncoh(n, cfg, lin)
        tallies["ncoh"][0] += 1
        tallies["ncoh"][1] += not rep.agrees
    for k, (n, bad) in tallies.items():
        out.add(f"{k} oracle", bad == 0, f"{n} instances, {bad} disagreements")
    out.summary = {"scale": scale, "enumeration_counts": counts,
                   "instances": {k: v[0] for k, v in tallies.items()},
                   "disagreements": {k: v[1] for k, v in tallies.items()}}
    return out


def ncoh_samples(cfg: TwoGroupConfig, rates, count: int = 200) -> list[Fraction]:
    """``count`` exact N_coh values from just above 0 to past the last threshold."""
    thr = wsr2.thresholds(rates, cfg)
    top = Fraction(thr[-2]) * cfg.K * Fraction(5, 4) + 2
    return [top * (i + 1) / count for i in range(count)]
