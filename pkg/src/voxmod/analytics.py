"""Time-saving reports, the per-item cost model, and the location dashboard.

All computations are pure functions over snapshots of the moderation data,
so they can run concurrently with ingestion.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .moderation import ItemState, ModerationItem


class NonPositiveDuration(ValueError):
    pass


class NoData(ValueError):
    pass


class InvalidParams(ValueError):
    pass


@dataclass(frozen=True)
class DurationBin:
    label: str
    lower: float
    upper: float | None  # None = unbounded


DURATION_BINS = (
    DurationBin("10-20", 10.0, 20.0),
    DurationBin("20-40", 20.0, 40.0),
    DurationBin("40-60", 40.0, 60.0),
    DurationBin("60-100", 60.0, 100.0),
    DurationBin(">100", 100.0, None),
)

BIN_LABELS = tuple(b.label for b in DURATION_BINS)
REPORT_TASKS = ("gist", "full", "metadata", "triage")


@dataclass(frozen=True)
class BinAssignment:
    bin: DurationBin
    undersize: bool = False

    @property
    def label(self) -> str:
        return self.bin.label


def duration_bin(seconds: float) -> BinAssignment:
    """Lower-inclusive bins partitioning [10, inf); sub-10s durations land in
    the first bin flagged undersize."""
    if not seconds > 0:
        raise NonPositiveDuration(f"duration must be positive, got {seconds}")
    if seconds < DURATION_BINS[0].lower:
        return BinAssignment(DURATION_BINS[0], undersize=True)
    for b in DURATION_BINS:
        if seconds >= b.lower and (b.upper is None or seconds < b.upper):
            return BinAssignment(b)
    raise AssertionError("unreachable: bins cover [10, inf)")


@dataclass(frozen=True)
class TimedTask:
    """One stopwatch note joined with its item's audio duration."""

    duration_s: float
    task: str  # triage | metadata | gist | full
    phase: str  # with_automation | without_automation
    seconds: float


@dataclass(frozen=True)
class BinStats:
    avg_time_saved_s: float | None
    avg_time_taken_s: float | None
    n_with: int
    n_without: int


@dataclass(frozen=True)
class BinReport:
    task: str
    bins: dict[str, BinStats]


def bin_time_report(task: str, records: Iterable[TimedTask]) -> BinReport:
    """Per-bin averages: time taken is the without-automation mean; time
    saved is the without-mean minus the with-mean (negative allowed)."""
    if task not in REPORT_TASKS:
        raise ValueError(f"unknown task {task!r}")
    with_sum: dict[str, list[float]] = defaultdict(list)
    without_sum: dict[str, list[float]] = defaultdict(list)
    any_records = False
    for record in records:
        if record.task != task:
            continue
        any_records = True
        label = duration_bin(record.duration_s).label
        if record.phase == "with_automation":
            with_sum[label].append(record.seconds)
        else:
            without_sum[label].append(record.seconds)
    if not any_records:
        raise NoData(f"no timing records for task {task!r}")
    bins: dict[str, BinStats] = {}
    for label in BIN_LABELS:
        w = with_sum.get(label, [])
        wo = without_sum.get(label, [])
        taken = sum(wo) / len(wo) if wo else None
        saved = (taken - sum(w) / len(w)) if (wo and w) else None
        bins[label] = BinStats(
            avg_time_saved_s=saved, avg_time_taken_s=taken, n_with=len(w), n_without=len(wo)
        )
    return BinReport(task=task, bins=bins)


@dataclass(frozen=True)
class TranscriptionMix:
    """Per-bin composition of accepted items: share given gist vs full
    transcripts (percent) and the measured saving for each kind."""

    pct_gist: float
    gist_saved_s: float
    pct_full: float
    full_saved_s: float

    def __post_init__(self):
        for pct in (self.pct_gist, self.pct_full):
            if not (0.0 <= pct <= 100.0):
                raise ValueError("percentages must lie in [0, 100]")


def weighted_transcription_saving(bin_stats: dict[str, TranscriptionMix]) -> dict[str, float]:
    """Expected transcription saving per bin, weighting each kind's saving
    by its share of accepted items."""
    return {
        label: mix.pct_gist / 100.0 * mix.gist_saved_s + mix.pct_full / 100.0 * mix.full_saved_s
        for label, mix in bin_stats.items()
    }


def aggregate_saving(avg_time_saved_per_item_s: float, avg_time_per_item_s: float) -> float:
    if avg_time_per_item_s <= 0:
        raise InvalidParams("average time per item must be positive")
    return avg_time_saved_per_item_s / avg_time_per_item_s


@dataclass(frozen=True)
class CostParams:
    monthly_salary: float = 20000.0
    weekly_hours: float = 48.0
    items_per_hour: float = 15.0
    overhead_ratio: float = 0.30
    stt_unit_price: float = 0.29  # per 15 s block
    stt_overhead_ratio: float = 0.30
    time_saving_ratio: float = 0.40
    stt_flat_cost: float | None = None  # bypass block pricing with a pre-averaged figure

    def __post_init__(self):
        for name in ("monthly_salary", "weekly_hours", "items_per_hour", "stt_unit_price"):
            if not getattr(self, name) > 0:
                raise InvalidParams(f"{name} must be positive")
        for name in ("overhead_ratio", "stt_overhead_ratio", "time_saving_ratio"):
            if getattr(self, name) < 0:
                raise InvalidParams(f"{name} must be non-negative")
        if self.time_saving_ratio > 1.0:
            raise InvalidParams("time_saving_ratio cannot exceed 1")


STT_BLOCK_SECONDS = 15.0
WEEKS_PER_MONTH = 52.0 / 12.0


@dataclass(frozen=True)
class CostReport:
    per_item_manual_cost: float
    per_item_automated_labor_cost: float
    per_item_stt_cost: float
    per_item_total_automated_cost: float
    cost_saving_ratio: float


def cost_report(params: CostParams, avg_item_duration_s: float) -> CostReport:
    """Per-item economics: loaded manual cost, automated labor after the
    time saving, STT billed in 15 s blocks (plus overhead), and the final
    saving ratio 1 - automated/manual."""
    if avg_item_duration_s <= 0:
        raise InvalidParams("average item duration must be positive")
    items_per_month = params.weekly_hours * WEEKS_PER_MONTH * params.items_per_hour
    manual = params.monthly_salary * (1.0 + params.overhead_ratio) / items_per_month
    automated_labor = manual * (1.0 - params.time_saving_ratio)
    if params.stt_flat_cost is not None:
        stt_base = params.stt_flat_cost
    else:
        stt_base = params.stt_unit_price * math.ceil(avg_item_duration_s / STT_BLOCK_SECONDS)
    stt = stt_base * (1.0 + params.stt_overhead_ratio)
    total = automated_labor + stt
    return CostReport(
        per_item_manual_cost=manual,
        per_item_automated_labor_cost=automated_labor,
        per_item_stt_cost=stt,
        per_item_total_automated_cost=total,
        cost_saving_ratio=1.0 - total / manual,
    )


@dataclass(frozen=True)
class DashboardCell:
    state: str
    district: str
    category: str
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be non-negative")


UNKNOWN = "unknown"
UNCATEGORIZED = "uncategorized"


def _primary_location(item: ModerationItem) -> tuple[str, str]:
    for match in item.locations:
        if match.ambiguous or not match.state:
            continue
        return match.state, match.district or UNKNOWN
    return UNKNOWN, UNKNOWN


def _top_category(item: ModerationItem) -> str:
    return item.categories[0][0] if item.categories else UNCATEGORIZED


def dashboard_aggregate(items: Sequence[ModerationItem]) -> list[DashboardCell]:
    """Accepted-item counts grouped by (state, district, top category)."""
    counter: Counter[tuple[str, str, str]] = Counter()
    for item in items:
        if item.state != ItemState.ACCEPTED:
            continue
        state, district = _primary_location(item)
        counter[(state, district, _top_category(item))] += 1
    return [
        DashboardCell(state=s, district=d, category=c, count=n)
        for (s, d, c), n in sorted(counter.items())
    ]
