"""Outcome histogram, the stopping rule, and the measurement campaign loop.

The measurer tallies second-iteration outcomes and keeps measuring until the
tally shows one clean peak: the peak clearly above its neighbors, a wide
enough base of well-filled bins, and counts falling away monotonically on
both flanks. The peak bin is then selected as the answer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .measurement import DegenerateConfigError, TrialConfig, simulate_trial
from .stochastics import RngState, derive_child

_CAMPAIGN_TRIAL_LIMIT = 1_000_000


class Histogram:
    """Counts of integer outcomes over a fixed window, with under/overflow."""

    __slots__ = ("lo", "hi", "counts", "underflow", "overflow")

    def __init__(self, lo: int = 1, hi: int = 16):
        if lo > hi:
            raise ValueError("window lo must be <= hi")
        self.lo = lo
        self.hi = hi
        self.counts = [0] * (hi - lo + 1)
        self.underflow = 0
        self.overflow = 0

    @property
    def total_recorded(self) -> int:
        return sum(self.counts) + self.underflow + self.overflow

    def record(self, value: int) -> None:
        if value < self.lo:
            self.underflow += 1
        elif value > self.hi:
            self.overflow += 1
        else:
            self.counts[value - self.lo] += 1

    def count(self, value: int) -> int:
        if not self.lo <= value <= self.hi:
            return 0
        return self.counts[value - self.lo]

    def peak_bin(self) -> int:
        """In-window bin with the maximal count; ties break toward the lowest."""
        if self.total_recorded < 1:
            raise ValueError("histogram is empty")
        best_index = 0
        for i, c in enumerate(self.counts):
            if c > self.counts[best_index]:
                best_index = i
        return self.lo + best_index

    def as_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "counts": list(self.counts),
            "underflow": self.underflow,
            "overflow": self.overflow,
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self) -> str:
        return f"Histogram({self.as_dict()})"


@dataclass(frozen=True)
class StoppingCriteria:
    """Parameters of the clean-single-peak rule.

    The peak must hold at least ``min_peak_count`` counts and be at least
    ``peak_dominance`` times each adjacent bin; at least
    ``min_consecutive_bins`` consecutive bins (the peak among them) must
    exceed ``bin_threshold_fraction`` of the peak; and within that group the
    counts must be strictly decreasing moving away from the peak on both
    sides.

    The decrease is strict: equal adjacent counts within the group mean the
    flanks are not yet resolved and measuring continues. The weak
    (non-increasing) variant stops campaigns roughly twice as early and
    measurably degrades how often the selected peak is the true one.
    """

    min_peak_count: int = 5
    peak_dominance: float = 1.05
    min_consecutive_bins: int = 5
    bin_threshold_fraction: float = 0.20

    def __post_init__(self) -> None:
        if self.min_peak_count < 1:
            raise ValueError("min_peak_count must be >= 1")
        if self.peak_dominance <= 1.0:
            raise ValueError("peak_dominance must be > 1")
        if self.min_consecutive_bins < 1:
            raise ValueError("min_consecutive_bins must be >= 1")
        if not 0.0 < self.bin_threshold_fraction < 1.0:
            raise ValueError("bin_threshold_fraction must be in (0, 1)")


def stopping_met(hist: Histogram, criteria: StoppingCriteria) -> bool:
    """True when the histogram shows one clean, well-supported peak.

    A bin missing beyond the window edge counts as zero for the neighbor
    comparison. All above-threshold bins must form a single consecutive group
    around the peak; an above-threshold island elsewhere means the peak is
    not yet uniquely identifiable. Flank counts must strictly decrease away
    from the peak within the group.
    """
    counts = hist.counts
    if sum(counts) == 0:
        return False
    peak_index = hist.peak_bin() - hist.lo
    peak_count = counts[peak_index]
    if peak_count < criteria.min_peak_count:
        return False
    below = counts[peak_index - 1] if peak_index > 0 else 0
    above = counts[peak_index + 1] if peak_index + 1 < len(counts) else 0
    if peak_count < criteria.peak_dominance * below:
        return False
    if peak_count < criteria.peak_dominance * above:
        return False
    threshold = criteria.bin_threshold_fraction * peak_count
    group_lo = peak_index
    while group_lo - 1 >= 0 and counts[group_lo - 1] > threshold:
        group_lo -= 1
    group_hi = peak_index
    while group_hi + 1 < len(counts) and counts[group_hi + 1] > threshold:
        group_hi += 1
    for i, c in enumerate(counts):
        if c > threshold and not group_lo <= i <= group_hi:
            return False
    if group_hi - group_lo + 1 < criteria.min_consecutive_bins:
        return False
    for i in range(group_lo, peak_index):
        if counts[i] >= counts[i + 1]:
            return False
    for i in range(peak_index + 1, group_hi + 1):
        if counts[i] >= counts[i - 1]:
            return False
    return True


@dataclass
class CampaignResult:
    """Outcome of one measure-until-stopping campaign.

    ``selected`` is None when the measurement budget ran out before the
    stopping rule was satisfied (a no-decision outcome, not an error).
    """

    selected: int | None
    measurements: int
    discarded: int
    histogram: Histogram
    stream_key: tuple[int, ...]
    config_digest: str

    @property
    def stopped(self) -> bool:
        return self.selected is not None


def run_campaign(
    rng: RngState,
    cfg: TrialConfig,
    criteria: StoppingCriteria,
    max_measurements: int = 10_000,
    config_digest: str = "",
) -> CampaignResult:
    """Measure repeatedly until the stopping rule selects a peak.

    Trials whose first quotient is not 21 are discarded: they are counted but
    neither recorded in the histogram nor charged against the measurement
    budget. The rule is evaluated after every recorded measurement. Each
    trial runs on its own child stream of ``rng``, so a campaign is a pure
    function of the stream key and the configuration.
    """
    if max_measurements < 1:
        raise ValueError("max_measurements must be >= 1")
    hist = Histogram()
    recorded = 0
    discarded = 0
    trial_index = 0
    selected = None
    while recorded < max_measurements:
        trial = simulate_trial(derive_child(rng, trial_index), cfg)
        trial_index += 1
        if trial.discarded:
            discarded += 1
            if trial_index > _CAMPAIGN_TRIAL_LIMIT:
                raise DegenerateConfigError(
                    "campaign exceeded the trial limit without recording enough "
                    "measurements; first iteration almost never yields 21"
                )
            continue
        hist.record(trial.second_quotient)
        recorded += 1
        if stopping_met(hist, criteria):
            selected = hist.peak_bin()
            break
    return CampaignResult(
        selected=selected,
        measurements=recorded,
        discarded=discarded,
        histogram=hist,
        stream_key=rng.key,
        config_digest=config_digest,
    )
