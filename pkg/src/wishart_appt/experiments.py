"""Reproducible Monte Carlo experiment runners.

Every runner takes a frozen config dataclass and returns a plain-dict report

    {"experiment", "config", "exact", "trials", "aggregates", "metadata"}

where "exact" embeds the reference values the empirical columns are compared
against. Reports are deterministic: identical config (seed included) gives
identical "trials" and "aggregates"; only "metadata" (timestamp, wall clock)
differs between reruns. Trial i always draws from stream_id i (offset by a
deterministic block counter when several grid points are evaluated), so
results do not depend on execution order; the WISHART_APPT_THREADS
environment variable enables thread-parallel trials.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from . import appt, asymptotics, linalg, moments, sampling
from .appt import Verdict
from .perms import P_MAX_DEFAULT
from .sampling import MAX_GINIBRE_ENTRIES, RngStream

LIBRARY_VERSION = "0.1.0"


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _check_common(d: int, s: int, trials: int, max_entries: int) -> None:
    _require(d >= 1 and s >= 1, "d and s must be >= 1")
    _require(trials >= 1, "trial count must be >= 1")
    _require(
        d * s <= max_entries,
        f"d*s = {d * s} exceeds the memory cap of {max_entries} Ginibre entries",
    )


@dataclass(frozen=True)
class MomentsConfig:
    d: int
    s: int
    p_list: tuple[int, ...] = (2, 3, 4)
    trials: int = 2000
    seed: int = 0
    max_entries: int = MAX_GINIBRE_ENTRIES

    def __post_init__(self):
        _check_common(self.d, self.s, self.trials, self.max_entries)
        _require(len(self.p_list) > 0, "p_list must be non-empty")
        _require(
            all(1 <= p <= P_MAX_DEFAULT for p in self.p_list),
            f"every p must be in [1, {P_MAX_DEFAULT}]",
        )


@dataclass(frozen=True)
class ExtremalConfig:
    d: int
    s: int
    trials: int = 50
    seed: int = 0
    band: float = 0.2
    max_entries: int = MAX_GINIBRE_ENTRIES

    def __post_init__(self):
        _check_common(self.d, self.s, self.trials, self.max_entries)
        _require(self.band > 0, "band must be > 0")


@dataclass(frozen=True)
class ContainmentConfig:
    d: int
    s: int
    eps: float = 0.2
    trials: int = 200
    seed: int = 0
    max_entries: int = MAX_GINIBRE_ENTRIES

    def __post_init__(self):
        _check_common(self.d, self.s, self.trials, self.max_entries)


@dataclass(frozen=True)
class ApptScanConfig:
    d1: int
    d2: int
    s_grid: tuple[int, ...]
    trials: int = 100
    seed: int = 0
    bisect: bool = True
    bisect_rounds: int = 8
    max_entries: int = MAX_GINIBRE_ENTRIES

    def __post_init__(self):
        _require(self.d1 >= 2 and self.d2 >= 2, "d1 and d2 must be >= 2")
        _require(len(self.s_grid) > 0, "s_grid must be non-empty")
        _require(all(s >= 1 for s in self.s_grid), "grid s values must be >= 1")
        _require(
            len(set(self.s_grid)) == len(self.s_grid), "grid s values must be distinct"
        )
        _check_common(self.d1 * self.d2, max(self.s_grid), self.trials, self.max_entries)


@dataclass(frozen=True)
class ConstantsConfig:
    tau_grid: tuple[float, ...] = (1e-4,) + tuple(
        round(0.01 + 0.99 * i / 99, 6) for i in range(100)
    )
    p_list: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    shapes: tuple[tuple[int, int], ...] = ((2, 2), (2, 128), (3, 27), (4, 4))

    def __post_init__(self):
        _require(all(0.0 < t <= 1.0 for t in self.tau_grid), "tau values must be in (0, 1]")
        _require(all(p >= 2 for p in self.p_list), "threshold p values must be >= 2")
        _require(
            all(d1 >= 2 and d2 >= 2 for d1, d2 in self.shapes),
            "shape factors must be >= 2",
        )


# ---------------------------------------------------------------------------


def _workers() -> int:
    return max(1, int(os.environ.get("WISHART_APPT_THREADS", "1")))


def _map_trials(fn, count: int):
    workers = _workers()
    if workers == 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    return obj


def _finish_report(experiment, config, exact, trials, aggregates, t_start):
    return {
        "experiment": experiment,
        "config": _jsonify(asdict(config)),
        "exact": _jsonify(exact),
        "trials": _jsonify(trials),
        "aggregates": _jsonify(aggregates),
        "metadata": {
            "library_version": LIBRARY_VERSION,
            "wall_clock_s": time.perf_counter() - t_start,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        },
    }


def _mean_se(values):
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, None
    return mean, float(arr.std(ddof=1) / np.sqrt(arr.size))


# ---------------------------------------------------------------------------


def run_moments(cfg: MomentsConfig) -> dict:
    """Exact moment formula vs Monte Carlo mean of (1/d) tr Z^p."""
    t0 = time.perf_counter()
    exact_values = {
        p: moments.centered_wishart_moment(p, cfg.d, cfg.s) for p in cfg.p_list
    }

    def trial(t: int) -> dict:
        w = sampling.sample_wishart(cfg.d, cfg.s, RngStream(cfg.seed, t))
        z = sampling.centered_normalized(w, cfg.d, cfg.s)
        eigs = linalg.hermitian_eigenvalues(z)
        rec = {"trial": t}
        for p in cfg.p_list:
            rec[f"m{p}"] = float(np.mean(eigs**p))
        return rec

    trials = _map_trials(trial, cfg.trials)
    aggregates = {}
    for p in cfg.p_list:
        mean, se = _mean_se([rec[f"m{p}"] for rec in trials])
        exact = exact_values[p].value
        aggregates[f"m{p}"] = {
            "exact": exact,
            "mean": mean,
            "std_error": se,
            "z_score": None if se in (None, 0.0) else (mean - exact) / se,
        }
    exact = {
        "moments": {str(p): mv.value for p, mv in exact_values.items()},
        "tables": {str(p): mv.to_json_dict() for p, mv in exact_values.items()},
    }
    return _finish_report("moments", cfg, exact, trials, aggregates, t0)


def run_extremal(cfg: ExtremalConfig) -> dict:
    """Extremal eigenvalues of Z against their +/-2 limits."""
    t0 = time.perf_counter()

    def trial(t: int) -> dict:
        w = sampling.sample_wishart(cfg.d, cfg.s, RngStream(cfg.seed, t))
        z = sampling.centered_normalized(w, cfg.d, cfg.s)
        eigs = linalg.hermitian_eigenvalues(z)
        return {
            "trial": t,
            "lambda_max": float(eigs[0]),
            "lambda_min": float(eigs[-1]),
        }

    trials = _map_trials(trial, cfg.trials)
    maxima = [rec["lambda_max"] for rec in trials]
    minima = [rec["lambda_min"] for rec in trials]
    band = cfg.band
    aggregates = {
        "mean_lambda_max": _mean_se(maxima)[0],
        "mean_lambda_min": _mean_se(minima)[0],
        "fraction_max_in_band": float(
            np.mean([2.0 - band <= x <= 2.0 + band for x in maxima])
        ),
        "fraction_min_in_band": float(
            np.mean([-2.0 - band <= x <= -2.0 + band for x in minima])
        ),
        "band": [2.0 - band, 2.0 + band],
    }
    exact = {"limit_lambda_max": 2.0, "limit_lambda_min": -2.0}
    return _finish_report("extremal", cfg, exact, trials, aggregates, t0)


def run_spectrum_containment(cfg: ContainmentConfig) -> dict:
    """Fraction of induced-state spectra inside 1/d +/- 2(1+eps)/sqrt(ds)."""
    t0 = time.perf_counter()
    half_width = 2.0 * (1.0 + cfg.eps) / np.sqrt(cfg.d * cfg.s)
    lo = 1.0 / cfg.d - half_width
    hi = 1.0 / cfg.d + half_width

    def trial(t: int) -> dict:
        w = sampling.sample_wishart(cfg.d, cfg.s, RngStream(cfg.seed, t))
        eigs = linalg.hermitian_eigenvalues(w)
        lam = eigs / eigs.sum()
        return {
            "trial": t,
            "lambda_max": float(lam[0]),
            "lambda_min": float(lam[-1]),
            "contained": bool(lam[0] <= hi and lam[-1] >= lo),
        }

    trials = _map_trials(trial, cfg.trials)
    aggregates = {
        "containment_fraction": float(np.mean([rec["contained"] for rec in trials])),
        "interval": [float(lo), float(hi)],
    }
    exact = {"interval": [float(lo), float(hi)], "eps": cfg.eps}
    return _finish_report("spectrum_containment", cfg, exact, trials, aggregates, t0)


def run_appt_scan(cfg: ApptScanConfig) -> dict:
    """Verdict frequencies over an s-grid, plus a bisection estimate of the
    s where the absolutely-PPT frequency crosses 1/2."""
    t0 = time.perf_counter()
    d = cfg.d1 * cfg.d2
    p = min(cfg.d1, cfg.d2)
    all_records: list[dict] = []
    per_s: list[dict] = []
    block_counter = 0

    def evaluate(s_val: int) -> float:
        nonlocal block_counter
        block = block_counter
        block_counter += 1

        def trial(t: int) -> dict:
            rng = RngStream(cfg.seed, block * cfg.trials + t)
            w = sampling.sample_wishart(d, s_val, rng)
            eigs = linalg.hermitian_eigenvalues(w)
            lam = eigs / eigs.sum()
            verdict = appt.appt_verdict(lam, cfg.d1, cfg.d2)
            rec = {
                "s": s_val,
                "trial": t,
                "verdict": verdict.verdict.value,
                "test": verdict.test,
                "margin": float(verdict.margin),
                "p2_closed_form": None,
                "p2_disagree": None,
            }
            if p == 2:
                closed = appt.appt_p2_closed_form(lam)
                literal = verdict.verdict is Verdict.ABSOLUTELY_PPT
                rec["p2_closed_form"] = bool(closed)
                rec["p2_disagree"] = bool(closed != literal)
            return rec

        records = _map_trials(trial, cfg.trials)
        all_records.extend(records)
        frac = float(
            np.mean([r["verdict"] == Verdict.ABSOLUTELY_PPT.value for r in records])
        )
        entry = {
            "s": s_val,
            "s_over_d": s_val / d,
            "trials": cfg.trials,
            "appt_fraction": frac,
            "not_appt_fraction": float(
                np.mean([r["verdict"] == Verdict.NOT_ABSOLUTELY_PPT.value for r in records])
            ),
            "unknown_fraction": float(
                np.mean([r["verdict"] == Verdict.UNKNOWN.value for r in records])
            ),
            "p2_disagreement_fraction": (
                float(np.mean([r["p2_disagree"] for r in records])) if p == 2 else None
            ),
        }
        per_s.append(entry)
        return frac

    grid = sorted(cfg.s_grid)
    fractions = [evaluate(s_val) for s_val in grid]

    crossing = None
    bracket = None
    for i in range(1, len(grid)):
        if fractions[i - 1] < 0.5 <= fractions[i]:
            bracket = [grid[i - 1], grid[i]]
            break
    if bracket is not None and cfg.bisect:
        lo, hi = bracket
        for _ in range(cfg.bisect_rounds):
            if hi - lo <= 1:
                break
            mid = (lo + hi) // 2
            if evaluate(mid) >= 0.5:
                hi = mid
            else:
                lo = mid
        estimate = 0.5 * (lo + hi)
        crossing = {
            "bracket_low": lo,
            "bracket_high": hi,
            "estimate_s": estimate,
            "estimate_s_over_d": estimate / d,
        }
    elif bracket is not None:
        crossing = {
            "bracket_low": bracket[0],
            "bracket_high": bracket[1],
            "estimate_s": 0.5 * (bracket[0] + bracket[1]),
            "estimate_s_over_d": 0.5 * (bracket[0] + bracket[1]) / d,
        }

    aggregates = {"per_s": per_s, "crossing": crossing}
    exact = {
        "threshold_s_over_d": asymptotics.threshold_p_fixed(p),
        "scale": asymptotics.threshold_scale_s0(cfg.d1, cfg.d2)._asdict(),
    }
    return _finish_report("appt_scan", cfg, exact, all_records, aggregates, t0)


def run_constants(cfg: ConstantsConfig) -> dict:
    """Threshold constants: C_tau grid, fixed-p critical ratios, s0 scales."""
    t0 = time.perf_counter()
    rows: list[dict] = []
    for tau in cfg.tau_grid:
        rows.append({"kind": "c_tau", "tau": float(tau), "value": asymptotics.c_tau(tau)})
    for p in cfg.p_list:
        rows.append(
            {"kind": "threshold_p_fixed", "p": p, "value": asymptotics.threshold_p_fixed(p)}
        )
    for d1, d2 in cfg.shapes:
        scale = asymptotics.threshold_scale_s0(d1, d2)
        rows.append(
            {
                "kind": "s0",
                "d1": d1,
                "d2": d2,
                "s0": scale.s0,
                "lower_constant": scale.lower_constant,
                "upper_constant": scale.upper_constant,
            }
        )
    exact = {"C_1": 16.0 / (9.0 * np.pi**2)}
    return _finish_report("constants", cfg, exact, rows, {}, t0)


# ---------------------------------------------------------------------------
# serialization


_CSV_COLUMNS = {
    "moments": None,  # trial + m<p> columns, derived from the records
    "extremal": ["trial", "lambda_max", "lambda_min"],
    "spectrum_containment": ["trial", "lambda_max", "lambda_min", "contained"],
    "appt_scan": ["s", "trial", "verdict", "test", "margin", "p2_closed_form", "p2_disagree"],
    "constants": ["kind", "tau", "p", "d1", "d2", "value", "s0", "lower_constant", "upper_constant"],
}


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def report_to_csv(report: dict) -> str:
    columns = _CSV_COLUMNS[report["experiment"]]
    if columns is None:
        first = report["trials"][0]
        columns = list(first.keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in report["trials"]:
        writer.writerow([_csv_cell(rec.get(col)) for col in columns])
    return buf.getvalue()


def trial_records_bytes(report: dict) -> bytes:
    """Canonical bytes of the per-trial records, for determinism checks."""
    return json.dumps(report["trials"], sort_keys=True).encode()
