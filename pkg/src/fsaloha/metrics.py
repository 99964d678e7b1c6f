"""Inventory metrics, deterministic CSV output, and summary plots.

Normalised throughput is P = I / (K * mean(M)) with M the number of frames a
complete reading cycle needed; acknowledgment overhead is excluded by
definition. Incomplete cycles never enter the mean but their count is kept.
"""

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import RECEIVER_MODES, ConfigError, ProtocolConfig, config_from_mapping, parse_flat_file
from .runner import CycleRecord

CSV_HEADER = "mode,channel,K,I,seed,M,complete,residuals"


@dataclass(frozen=True)
class ThroughputPoint:
    """Throughput estimate for one (I, K) cell over complete cycles."""

    i: int
    k: int
    mean_m: float
    p: float
    ci95: float  # half-width; delta-method normal approximation over replications


def throughput(i: int, k: int, m_samples: Sequence[int]) -> ThroughputPoint:
    """P = I / (K * mean(M)) over complete-cycle frame counts.

    The 95% confidence half-width maps the normal-approximation interval of
    mean(M) through the reciprocal (delta method). Zero when only one sample
    is available.
    """
    n = len(m_samples)
    if n == 0:
        raise ValueError("no complete cycles to average")
    mean_m = sum(m_samples) / n
    p = i / (k * mean_m)
    if n > 1:
        var = sum((m - mean_m) ** 2 for m in m_samples) / (n - 1)
        half_m = 1.96 * math.sqrt(var / n)
        ci95 = i / (k * mean_m * mean_m) * half_m
    else:
        ci95 = 0.0
    return ThroughputPoint(i=i, k=k, mean_m=mean_m, p=p, ci95=ci95)


def percentile(samples: Sequence[float], q: float) -> float:
    """Nearest-rank percentile: the ceil(q*n)-th smallest sample, 0 < q < 1."""
    if not samples:
        raise ValueError("percentile of an empty sample set")
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie strictly between 0 and 1")
    ordered = sorted(samples)
    rank = math.ceil(q * len(ordered))
    return ordered[rank - 1]


def residual_trace_aggregate(traces: Iterable[Sequence[int]]) -> list[float]:
    """Elementwise mean of residual traces, ragged tails padded with zeros.

    Completed cycles hold zero residual after their last frame, so zero
    padding extends them consistently; aggregating incomplete cycles this way
    would understate their tails.
    """
    traces = [list(t) for t in traces]
    if not traces:
        raise ValueError("no traces to aggregate")
    length = max(len(t) for t in traces)
    n = len(traces)
    return [sum(t[j] if j < len(t) else 0 for t in traces) / n for j in range(length)]


# --- CSV ----------------------------------------------------------------------


def emit_csv(records: Sequence[CycleRecord], path) -> None:
    """Write the per-cycle table; byte-identical for identical inputs.

    Columns: mode, channel, K, I, seed, M, complete (1/0), residuals as a
    quoted semicolon-separated list. Rows are sorted on all columns.
    """
    rows = sorted(records, key=lambda r: (r.mode, r.channel, r.k, r.i, r.seed))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            residuals = ";".join(str(x) for x in r.residual_trace)
            fh.write(f'{r.mode},{r.channel},{r.k},{r.i},{r.seed},{r.m},{int(r.complete)},"{residuals}"\n')


def read_csv(path) -> list[CycleRecord]:
    """Read a table written by emit_csv back into CycleRecords.

    The replication index is not stored in the file; records are returned
    with replication = -1 and can be paired across modes via their seed.
    """
    records = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if ",".join(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        for row in reader:
            if not row:
                continue
            mode, chan, k, i, seed, m, complete, residuals = row
            trace = tuple(int(x) for x in residuals.split(";")) if residuals else ()
            records.append(
                CycleRecord(
                    mode=mode,
                    channel=chan,
                    k=int(k),
                    i=int(i),
                    replication=-1,
                    seed=int(seed),
                    m=int(m),
                    complete=complete == "1",
                    residual_trace=trace,
                )
            )
    return records


@dataclass(frozen=True)
class SummaryRow:
    """Throughput summary of one (mode, channel, K, I) group."""

    mode: str
    channel: str
    point: ThroughputPoint
    n_complete: int
    n_incomplete: int


def summarize(records: Sequence[CycleRecord]) -> list[SummaryRow]:
    """Group records by (mode, channel, K, I) and compute throughput points."""
    groups: dict[tuple, list[CycleRecord]] = {}
    for rec in records:
        groups.setdefault((rec.mode, rec.channel, rec.k, rec.i), []).append(rec)
    rows = []
    for (mode, chan, k, i), recs in sorted(groups.items()):
        m_samples = [r.m for r in recs if r.complete]
        incomplete = sum(1 for r in recs if not r.complete)
        if not m_samples:
            raise ValueError(f"group {(mode, chan, k, i)} has no complete cycles")
        rows.append(
            SummaryRow(
                mode=mode,
                channel=chan,
                point=throughput(i, k, m_samples),
                n_complete=len(m_samples),
                n_incomplete=incomplete,
            )
        )
    return rows


# --- plots --------------------------------------------------------------------

_SERIES_STYLE = {"capture": "tab:gray", "sic": "tab:blue", "isic": "tab:red"}
_CHANNEL_DASH = {"rayleigh": "-", "rician": "--"}


def _series(records: Sequence[CycleRecord]):
    keys = sorted({(r.mode, r.channel) for r in records})
    requested = set(RECEIVER_MODES)
    present = {mode for mode, _ in keys}
    missing = requested - present
    if missing:
        warnings.warn(f"plotting without modes: {', '.join(sorted(missing))}")
    return keys


def emit_plots(records: Sequence[CycleRecord], prefix) -> list[str]:
    """Render the three summary figures as SVG files.

    prefix is a path prefix: '<prefix>throughput.svg',
    '<prefix>reading_time.svg' and '<prefix>residuals.svg' are written.
    Returns the written paths.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if not records:
        raise ValueError("no records to plot")
    keys = _series(records)
    prefix = str(prefix)
    written = []

    def style(mode, chan):
        return {
            "color": _SERIES_STYLE.get(mode, "tab:green"),
            "linestyle": _CHANNEL_DASH.get(chan, "-"),
            "label": f"{mode} / {chan}",
        }

    # throughput vs population size
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for mode, chan in keys:
        sub = [r for r in records if r.mode == mode and r.channel == chan and r.complete]
        if not sub:
            continue
        i_values = sorted({r.i for r in sub})
        points = [throughput(i, sub[0].k, [r.m for r in sub if r.i == i]) for i in i_values]
        ax.errorbar(
            i_values,
            [pt.p for pt in points],
            yerr=[pt.ci95 for pt in points],
            marker="o",
            capsize=3,
            **style(mode, chan),
        )
    ax.set_xlabel("population size I")
    ax.set_ylabel("normalised throughput P")
    ax.grid(True, alpha=0.4)
    ax.legend()
    path = prefix + "throughput.svg"
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    # 98th percentile reading time vs population size
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for mode, chan in keys:
        sub = [r for r in records if r.mode == mode and r.channel == chan and r.complete]
        if not sub:
            continue
        i_values = sorted({r.i for r in sub})
        p98 = [percentile([r.m for r in sub if r.i == i], 0.98) for i in i_values]
        ax.plot(i_values, p98, marker="s", **style(mode, chan))
    ax.set_xlabel("population size I")
    ax.set_ylabel("98th percentile of reading cycle length M")
    ax.grid(True, alpha=0.4)
    ax.legend()
    path = prefix + "reading_time.svg"
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    # mean residual tags vs frame index, at the largest population size
    fig, ax = plt.subplots(figsize=(7, 4.5))
    i_max = max(r.i for r in records)
    for mode, chan in keys:
        sub = [r for r in records if r.mode == mode and r.channel == chan and r.i == i_max]
        if not sub:
            continue
        trace = residual_trace_aggregate([r.residual_trace for r in sub])
        ax.plot(range(1, len(trace) + 1), trace, marker=".", **style(mode, chan))
    ax.set_xlabel("frame index r")
    ax.set_ylabel(f"mean unacknowledged tags (I = {i_max})")
    ax.grid(True, alpha=0.4)
    ax.legend()
    path = prefix + "residuals.svg"
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    return written


# --- experiment specification files -------------------------------------------

EXPERIMENT_KEYS = frozenset(
    {"i_values", "replications", "modes", "base_seed", "out_dir", "incomplete_budget"}
)


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce one experiment run."""

    config: ProtocolConfig
    i_values: tuple[int, ...]
    replications: int
    modes: tuple[str, ...]
    base_seed: int
    out_dir: str = "results"
    incomplete_budget: int = 0  # allowed incomplete cycles before exit code 2

    def validate(self) -> list[str]:
        errors = []
        if not self.i_values or any(i < 1 for i in self.i_values):
            errors.append(f"i_values: {self.i_values!r} must be positive population sizes")
        if self.replications < 1:
            errors.append(f"replications: {self.replications!r} must be at least 1")
        if not self.modes or any(m not in RECEIVER_MODES for m in self.modes):
            errors.append(f"modes: {self.modes!r} must be a subset of {RECEIVER_MODES}")
        if not isinstance(self.base_seed, int) or self.base_seed < 0:
            errors.append(f"base_seed: {self.base_seed!r} must be a non-negative integer")
        if self.incomplete_budget < 0:
            errors.append(f"incomplete_budget: {self.incomplete_budget!r} must be >= 0")
        return errors


def load_experiment_spec(path) -> ExperimentSpec:
    """Load an ExperimentSpec from a flat key = value file.

    The file carries both the protocol config keys and the experiment keys;
    anything else is an error.
    """
    mapping = parse_flat_file(path)
    from .model import CONFIG_KEYS  # local import keeps module dependencies flat

    unknown = sorted(set(mapping) - CONFIG_KEYS - EXPERIMENT_KEYS)
    if unknown:
        raise ConfigError(f"unknown experiment keys: {', '.join(unknown)}")
    cfg = config_from_mapping(mapping)
    try:
        i_values = tuple(int(x.strip(), 0) for x in mapping.get("i_values", "").split(",") if x.strip())
        replications = int(mapping.get("replications", "1"), 0)
        base_seed = int(mapping.get("base_seed", "0"), 0)
        incomplete_budget = int(mapping.get("incomplete_budget", "0"), 0)
    except ValueError as exc:
        raise ConfigError(f"bad experiment value: {exc}") from None
    modes = tuple(x.strip() for x in mapping.get("modes", ",".join(RECEIVER_MODES)).split(",") if x.strip())
    spec = ExperimentSpec(
        config=cfg,
        i_values=i_values,
        replications=replications,
        modes=modes,
        base_seed=base_seed,
        out_dir=mapping.get("out_dir", "results"),
        incomplete_budget=incomplete_budget,
    )
    errors = spec.validate()
    if errors:
        raise ConfigError("; ".join(errors))
    return spec
