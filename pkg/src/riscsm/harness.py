"""SNR sweeps: configuration, deterministic Monte-Carlo execution and result files.

Every SNR point ``i`` owns the random stream ``(seed, i)``; batch ``j`` of that
point uses ``(seed, i, j)``. Batches have a fixed size, are merged in index
order, and adaptive stopping is decided in that order too, so results do not
depend on the number of worker threads.

For the ``mse`` metric the axis is the training SNR in dB; for ``mindist-cdf``
it is the distance threshold. The ``snr_db`` column carries that axis value.
On an ``ebno`` axis the column holds the converted channel SNR in dB.
"""
from __future__ import annotations

import copy
import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np
import yaml

from . import analysis
from .baselines import SCHEMES, BaselineConfig, run_baseline_trials, spectral_efficiency
from .capacity import ergodic_capacity
from .channel import CorrelationSpec, apply_correlation, correlation_matrix, draw_group_signatures_iid, draw_iid
from .errors import ConfigError, InsufficientPoints, RISCSMError
from .estimation import TrainingConfig, estimate_groups
from .hadamard import pattern_set
from .modem import (
    ErrorCounters,
    SystemConfig,
    build_effective_table,
    compose_signatures,
    min_pairwise_distance,
    simulate_batch,
    snr_db_from_ebno_db,
)
from .numerics import RngStream, psd_sqrt

__all__ = [
    "METRICS",
    "CSV_FIELDS",
    "SweepSpec",
    "Record",
    "SweepResult",
    "run_sweep",
    "emit",
    "read_results",
    "diversity_slope",
    "spec_from_dict",
    "load_config",
]

METRICS = (
    "per-group-ser",
    "supersymbol-ser",
    "ber",
    "capacity",
    "mse",
    "mindist-cdf",
    "analytic-bound",
    "asymptote",
)
RATE_METRICS = ("per-group-ser", "supersymbol-ser", "ber")
CSV_FIELDS = ["scheme", "N", "N_Q", "K", "n_R", "M", "snr_db", "metric", "value", "trials", "errors", "std_err", "seed"]


@dataclass
class SweepSpec:
    system: SystemConfig
    scheme: str = "ris-csm"
    metric: str = "per-group-ser"
    snr: tuple = (0.0, 30.0, 5.0)
    axis: str = "snr"
    trials: int = 100_000
    min_errors: int = 100
    seed: int = 0
    threads: Optional[int] = None
    batch_size: int = 10_000
    baseline: Optional[BaselineConfig] = None
    correlation: Optional[CorrelationSpec] = None
    training: Optional[TrainingConfig] = None
    capacity_outer: int = 200
    capacity_inner: int = 200
    sampler: str = "auto"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError("sweep.scheme", f"unknown scheme {self.scheme!r}")
        if self.metric not in METRICS:
            raise ConfigError("sweep.metric", f"unknown metric {self.metric!r}")
        if self.axis not in ("snr", "ebno"):
            raise ConfigError("sweep.axis", f"must be 'snr' or 'ebno', got {self.axis!r}")
        start, stop, step = self.snr
        if not step > 0:
            raise ConfigError("sweep.snr.step", f"must be > 0, got {step}")
        if stop < start:
            raise ConfigError("sweep.snr.stop", "stop must not be below start")
        for name in ("trials", "min_errors", "batch_size", "capacity_outer", "capacity_inner"):
            if getattr(self, name) < 1:
                raise ConfigError(f"sweep.{name}", f"must be >= 1, got {getattr(self, name)}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("sweep.threads", f"must be >= 1, got {self.threads}")
        if self.scheme != "ris-csm" and self.baseline is None:
            raise ConfigError("baseline", f"scheme {self.scheme} needs a baseline section")
        if self.scheme != "ris-csm" and self.metric not in ("supersymbol-ser", "ber"):
            raise ConfigError("sweep.metric", f"{self.metric} is only defined for ris-csm")
        if self.correlation is not None and self.correlation.N != self.system.N:
            raise ConfigError("channel.correlation", f"grid has {self.correlation.N} elements, N={self.system.N}")

    def axis_values(self) -> np.ndarray:
        start, stop, step = (float(v) for v in self.snr)
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return np.round(start + step * np.arange(count), 10)

    @property
    def rate(self) -> float:
        if self.scheme == "ris-csm":
            return float(self.system.rate)
        return spectral_efficiency(self.baseline)


@dataclass
class Record:
    scheme: str
    N: int
    N_Q: int
    K: int
    n_R: int
    M: int
    snr_db: float
    metric: str
    value: float
    trials: int
    errors: int
    std_err: float
    seed: int


@dataclass
class SweepResult:
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def column(self, name) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def _workers(spec: SweepSpec) -> int:
    return spec.threads or os.cpu_count() or 1


def _error_count(c: ErrorCounters, metric: str) -> int:
    return {"per-group-ser": c.group_errors, "supersymbol-ser": c.symbol_errors, "ber": c.bit_errors}[metric]


def _rate_value(c: ErrorCounters, metric: str):
    units = {"per-group-ser": c.groups_per_trial, "supersymbol-ser": 1, "ber": c.bits_per_trial}[metric]
    n = c.trials * units
    p = _error_count(c, metric) / n
    return p, math.sqrt(p * (1 - p) / n)


def _batch_runner(spec: SweepSpec, cfg: SystemConfig, R_sqrt):
    if spec.scheme == "ris-csm":
        patterns = pattern_set(cfg.n, cfg.K)

        def run(size, stream):
            return simulate_batch(
                cfg, patterns, size, stream, training=spec.training, R_sqrt=R_sqrt, sampler=spec.sampler
            )

        return run
    sampler = "full" if spec.sampler == "full" else "grouped"

    def run(size, stream):
        return run_baseline_trials(cfg, spec.baseline, size, stream, batch_size=size, sampler=sampler)

    return run


def _adaptive(spec: SweepSpec, point: int, runner) -> ErrorCounters:
    base = RngStream(spec.seed, (point,))
    n_batches = math.ceil(spec.trials / spec.batch_size)
    sizes = [min(spec.batch_size, spec.trials - j * spec.batch_size) for j in range(n_batches)]
    workers = _workers(spec)
    total = ErrorCounters()
    with ThreadPoolExecutor(max_workers=workers) as ex:
        j = 0
        while j < n_batches:
            wave = list(range(j, min(j + workers, n_batches)))
            for res in ex.map(lambda b: runner(sizes[b], base.substream(b)), wave):
                total = total + res
                j += 1
                if _error_count(total, spec.metric) >= spec.min_errors:
                    return total
    return total


def _mse_point(spec: SweepSpec, point: int, training_db: float):
    cfg = spec.system
    tc = TrainingConfig.from_db(training_db, spec.training.tau if spec.training else 1)
    patterns = pattern_set(cfg.n, cfg.K)
    acc = acc2 = 0.0
    count = 0
    base = RngStream(spec.seed, (point,))
    for j in range(math.ceil(spec.trials / spec.batch_size)):
        size = min(spec.batch_size, spec.trials - j * spec.batch_size)
        gen = base.substream(j).generator()
        groups = _draw_groups(spec, cfg, patterns, size, gen)
        err = np.abs(estimate_groups(groups, tc, cfg, gen) - groups) ** 2
        acc += err.sum()
        acc2 += (err**2).sum()
        count += err.size
    mean = acc / count
    return mean, math.sqrt(max(acc2 / count - mean**2, 0.0) / count), count


def _draw_groups(spec, cfg, patterns, size, gen):
    if spec.correlation is None and spec.sampler != "full":
        return draw_group_signatures_iid(cfg, patterns, gen, size)
    ch = draw_iid(cfg, gen, size=size)
    if spec.correlation is not None:
        ch = apply_correlation(ch, psd_sqrt(correlation_matrix(spec.correlation)))
    return build_effective_table(ch, patterns, cfg).groups


def _min_distances(spec: SweepSpec) -> np.ndarray:
    cfg = spec.system
    patterns = pattern_set(cfg.n, cfg.K)
    base = RngStream(spec.seed, ())
    out = []
    for j in range(math.ceil(spec.trials / spec.batch_size)):
        size = min(spec.batch_size, spec.trials - j * spec.batch_size)
        groups = _draw_groups(spec, cfg, patterns, size, base.substream(j).generator())
        out.append(min_pairwise_distance(compose_signatures(groups)))
    return np.concatenate(out)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate ``spec.metric`` at every axis value; one record per point."""
    sysc = spec.system
    K_col = spec.system.K
    R_sqrt = psd_sqrt(correlation_matrix(spec.correlation)) if spec.correlation is not None else None
    dists = _min_distances(spec) if spec.metric == "mindist-cdf" else None
    result = SweepResult()
    for i, x in enumerate(spec.axis_values()):
        x = float(x)
        snr_db = float(snr_db_from_ebno_db(x, spec.rate)) if spec.axis == "ebno" else x
        cfg = sysc.at_snr_db(snr_db)
        trials = errors = 0
        std_err = 0.0
        if spec.metric == "analytic-bound":
            value = analysis.ser_union_bound(analysis.BoundInputs.from_config(cfg))
        elif spec.metric == "asymptote":
            value = analysis.asymptotic_ser(analysis.BoundInputs.from_config(cfg))[0]
        elif spec.metric in RATE_METRICS:
            counters = _adaptive(spec, i, _batch_runner(spec, cfg, R_sqrt))
            value, std_err = _rate_value(counters, spec.metric)
            trials, errors = counters.trials, _error_count(counters, spec.metric)
        elif spec.metric == "capacity":
            est = ergodic_capacity(
                cfg,
                pattern_set(cfg.n, cfg.K),
                R_sqrt,
                spec.capacity_outer,
                spec.capacity_inner,
                RngStream(spec.seed, (i,)),
            )
            value, std_err = est.bpcu, est.std_err
            trials = spec.capacity_outer * spec.capacity_inner
        elif spec.metric == "mse":
            value, std_err, trials = _mse_point(spec, i, x)
            snr_db = x
        else:  # mindist-cdf
            errors = int(np.count_nonzero(dists < x))
            trials = dists.size
            value = errors / trials
            std_err = math.sqrt(value * (1 - value) / trials)
            snr_db = x
        result.records.append(
            Record(
                spec.scheme, sysc.N, sysc.N_Q, K_col, sysc.n_R, sysc.M,
                snr_db, spec.metric, float(value), int(trials), int(errors), float(std_err), spec.seed,
            )
        )
    return result


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write(rows, fmt, fh):
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for row in rows:
            w.writerow([_fmt(row[k]) for k in CSV_FIELDS])
    elif fmt == "json":
        json.dump(rows, fh, indent=1)
        fh.write("\n")
    else:
        raise ConfigError("format", f"unknown format {fmt!r}")


def emit(result: SweepResult, fmt: str, path) -> None:
    """Write ``result`` as CSV (fixed header) or a JSON array of records.

    ``path`` may also be an open text stream.
    """
    rows = [asdict(r) for r in result.records]
    if hasattr(path, "write"):
        _write(rows, fmt, path)
        return
    if fmt not in ("csv", "json"):
        raise ConfigError("format", f"unknown format {fmt!r}")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write(rows, fmt, fh)


_TYPES = {f.name: f.type for f in fields(Record)}


def read_results(path, fmt: Optional[str] = None) -> SweepResult:
    fmt = fmt or ("json" if str(path).endswith(".json") else "csv")
    casts = {"str": str, "int": int, "float": float}
    with open(path, encoding="utf-8") as fh:
        if fmt == "json":
            rows = json.load(fh)
        else:
            rows = list(csv.DictReader(fh))
    return SweepResult([Record(**{k: casts[_TYPES[k]](row[k]) for k in CSV_FIELDS}) for row in rows])


def diversity_slope(result, values=None, lo: float = 1e-5, hi: float = 1e-2) -> float:
    """Least-squares slope of ``-log10(metric)`` against ``log10(snr)``.

    Accepts a :class:`SweepResult` or two arrays ``(snr_db, values)``. Only
    points with ``lo <= value <= hi`` take part.
    """
    if values is None:
        snr_db, values = result.column("snr_db"), result.column("value")
    else:
        snr_db = np.asarray(result, dtype=float)
    snr_db, values = np.asarray(snr_db, float), np.asarray(values, float)
    keep = (values >= lo) & (values <= hi)
    if keep.sum() < 3:
        raise InsufficientPoints(f"need >= 3 points in [{lo}, {hi}], got {int(keep.sum())}")
    slope = np.polyfit(snr_db[keep] / 10.0, np.log10(values[keep]), 1)[0]
    return float(-slope)


# ---------------------------------------------------------------------------
# configuration documents

_SECTIONS = {
    "system": {"N", "N_Q", "K", "n_R", "M"},
    "channel": {"correlation"},
    "estimation": {"training_snr_db", "Et", "tau"},
    "baseline": {"M_tx", "M_ris", "N_Q", "N_A", "W", "length"},
    "sweep": {
        "scheme", "metric", "snr", "axis", "trials", "min_errors", "seed",
        "threads", "batch_size", "capacity", "sampler",
    },
}
_INT_FIELDS = {
    "system.N", "system.N_Q", "system.K", "system.n_R", "system.M", "estimation.tau",
    "baseline.M_tx", "baseline.M_ris", "baseline.N_Q", "baseline.N_A", "baseline.W", "baseline.length",
    "sweep.trials", "sweep.min_errors", "sweep.seed", "sweep.threads", "sweep.batch_size",
    "sweep.capacity.outer", "sweep.capacity.inner", "channel.correlation.n_h", "channel.correlation.n_v",
}


def _get_int(d, key, path, default=None):
    v = d.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
        raise ConfigError(path, f"expected an integer, got {v!r}")
    return int(v)


def _get_float(d, key, path, default=None):
    v = d.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(path, f"expected a number, got {v!r}")
    return float(v)


def _section(doc, name):
    sec = doc.get(name) or {}
    if not isinstance(sec, dict):
        raise ConfigError(name, "expected a mapping")
    unknown = set(sec) - _SECTIONS[name]
    if unknown:
        raise ConfigError(f"{name}.{sorted(unknown)[0]}", "unknown field")
    return sec


def parse_snr_axis(value, path="sweep.snr"):
    """``"START:STOP:STEP"``, ``[start, stop, step]`` or a mapping with those keys."""
    if isinstance(value, str):
        parts = value.split(":")
        if len(parts) != 3:
            raise ConfigError(path, f"expected START:STOP:STEP, got {value!r}")
        try:
            return tuple(float(p) for p in parts)
        except ValueError:
            raise ConfigError(path, f"non-numeric value in {value!r}") from None
    if isinstance(value, (list, tuple)) and len(value) == 3:
        return tuple(_get_float({"v": v}, "v", path) for v in value)
    if isinstance(value, dict):
        unknown = set(value) - {"start", "stop", "step"}
        if unknown:
            raise ConfigError(f"{path}.{sorted(unknown)[0]}", "unknown field")
        try:
            return tuple(_get_float(value, k, f"{path}.{k}") for k in ("start", "stop", "step"))
        except TypeError:
            raise ConfigError(path, "start, stop and step are required") from None
    raise ConfigError(path, f"cannot parse SNR axis {value!r}")


def spec_from_dict(doc: dict) -> SweepSpec:
    """Build a :class:`SweepSpec` from a nested mapping, reporting errors by field path."""
    if not isinstance(doc, dict):
        raise ConfigError("", "configuration must be a mapping")
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown section")
    s = _section(doc, "system")
    sw = _section(doc, "sweep")
    ch = _section(doc, "channel")
    est = _section(doc, "estimation")
    bl = _section(doc, "baseline")

    system = SystemConfig(
        N=_get_int(s, "N", "system.N", 64),
        N_Q=_get_int(s, "N_Q", "system.N_Q", 1),
        K=_get_int(s, "K", "system.K", 16),
        n_R=_get_int(s, "n_R", "system.n_R", 1),
        M=_get_int(s, "M", "system.M", 1),
    )

    correlation = None
    if ch.get("correlation"):
        c = ch["correlation"]
        if not isinstance(c, dict):
            raise ConfigError("channel.correlation", "expected a mapping")
        bad = set(c) - {"n_h", "n_v", "spacing"}
        if bad:
            raise ConfigError(f"channel.correlation.{sorted(bad)[0]}", "unknown field")
        try:
            correlation = CorrelationSpec(
                _get_int(c, "n_h", "channel.correlation.n_h"),
                _get_int(c, "n_v", "channel.correlation.n_v"),
                _get_float(c, "spacing", "channel.correlation.spacing"),
            )
        except TypeError:
            raise ConfigError("channel.correlation", "n_h, n_v and spacing are required") from None
        except RISCSMError as exc:
            raise ConfigError("channel.correlation", str(exc)) from None

    training = None
    if est:
        tau = _get_int(est, "tau", "estimation.tau", 1)
        if "training_snr_db" in est:
            training = TrainingConfig.from_db(_get_float(est, "training_snr_db", "estimation.training_snr_db"), tau)
        elif "Et" in est:
            training = TrainingConfig(_get_float(est, "Et", "estimation.Et"), tau)
        else:
            raise ConfigError("estimation", "needs training_snr_db or Et")

    scheme = sw.get("scheme", "ris-csm")
    baseline = None
    if scheme != "ris-csm" or bl:
        try:
            baseline = BaselineConfig(
                scheme=scheme,
                **{k: _get_int(bl, k, f"baseline.{k}") for k in bl},
            )
        except RISCSMError as exc:
            raise ConfigError("baseline", str(exc)) from None

    cap = sw.get("capacity") or {}
    if not isinstance(cap, dict) or set(cap) - {"outer", "inner"}:
        raise ConfigError("sweep.capacity", "expected a mapping with outer/inner")
    return SweepSpec(
        system=system,
        scheme=scheme,
        metric=sw.get("metric", "per-group-ser"),
        snr=parse_snr_axis(sw.get("snr", "0:30:5")),
        axis=sw.get("axis", "snr"),
        trials=_get_int(sw, "trials", "sweep.trials", 100_000),
        min_errors=_get_int(sw, "min_errors", "sweep.min_errors", 100),
        seed=_get_int(sw, "seed", "sweep.seed", 0),
        threads=_get_int(sw, "threads", "sweep.threads"),
        batch_size=_get_int(sw, "batch_size", "sweep.batch_size", 10_000),
        baseline=baseline,
        correlation=correlation,
        training=training,
        capacity_outer=_get_int(cap, "outer", "sweep.capacity.outer", 200),
        capacity_inner=_get_int(cap, "inner", "sweep.capacity.inner", 200),
        sampler=sw.get("sampler", "auto"),
    )


def load_config(path, overrides: Optional[dict] = None) -> SweepSpec:
    """Read a YAML (or JSON) configuration and apply ``{"sweep.trials": 10, ...}`` overrides."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError("--config", f"cannot read {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError("--config", f"invalid YAML: {exc}") from None
    return spec_from_dict(apply_overrides(doc, overrides or {}))


def apply_overrides(doc: dict, overrides: dict) -> dict:
    doc = copy.deepcopy(doc) if doc else {}
    for dotted, value in overrides.items():
        node = doc
        *parents, leaf = dotted.split(".")
        for p in parents:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(dotted, "cannot override inside a non-mapping")
        node[leaf] = value
    return doc
