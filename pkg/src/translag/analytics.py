"""Corpus statistics: label distributions, annual series, drug timelines,
translational lag, and an exponential fit of the lag distribution.

A drug's timeline compares the year of its earliest basic-science article
with the year of its earliest clinical article; the lag between them is
t_ec - t_eb + 1, so a same-year pair counts as a one-year lag. Aggregations
are exposed as fold/merge pairs so partitioned streams reduce to the same
result regardless of how the input was split.
"""

import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Optional

import numpy as np

from .classify import ArticleClassification

# Basic science is any label without human involvement; clinical is any
# label containing H. Both sets are configurable because reasonable
# alternatives exist (for example, treating mixed AH/CH/ACH as neither).
BASIC_LABELS = frozenset({"A", "C", "AC"})
CLINICAL_LABELS = frozenset({"H", "AH", "CH", "ACH"})

# Fixed row/column order for distribution and annual tables.
DISTRIBUTION_ORDER = ("A", "C", "H", "AC", "CH", "AH", "ACH", "Other")

TRANSLATED = "translated"
NON_TRANSLATED = "non_translated"
CLINICAL_ONLY = "clinical_only"
ANOMALOUS = "anomalous"
STATUSES = (TRANSLATED, NON_TRANSLATED, CLINICAL_ONLY, ANOMALOUS)


class EmptyCorpusError(ValueError):
    """An aggregate was requested over zero classifications or timelines."""


class InsufficientDataError(ValueError):
    """Too few lag observations to fit and test a distribution."""


@dataclass(frozen=True, slots=True)
class DrugTimeline:
    """Earliest basic/clinical years and translation status for one drug."""

    drug_id: str
    t_eb: Optional[int]
    t_ec: Optional[int]
    lag: Optional[int]
    status: str

    @classmethod
    def from_years(cls, drug_id: str, t_eb: Optional[int], t_ec: Optional[int]) -> "DrugTimeline":
        if t_eb is not None and t_ec is not None:
            lag = t_ec - t_eb + 1
            status = TRANSLATED if lag >= 1 else ANOMALOUS
            return cls(drug_id, t_eb, t_ec, lag, status)
        if t_eb is not None:
            return cls(drug_id, t_eb, None, None, NON_TRANSLATED)
        if t_ec is not None:
            return cls(drug_id, None, t_ec, None, CLINICAL_ONLY)
        raise ValueError(f"drug {drug_id!r} has neither a basic nor a clinical year")


@dataclass(slots=True)
class TimelineStats:
    """Tallies for pairs and drugs that could not contribute a timeline."""

    dropped_pairs: int = 0
    undated_pairs: int = 0
    dropped_drugs: int = 0

    def merge(self, other: "TimelineStats") -> None:
        self.dropped_pairs += other.dropped_pairs
        self.undated_pairs += other.undated_pairs
        self.dropped_drugs += other.dropped_drugs


def classification_index(
    classifications: Iterable[ArticleClassification],
) -> dict[int, tuple[Optional[int], str]]:
    """Map pmid to (year, label) for timeline folding."""
    return {cls.pmid: (cls.year, cls.label) for cls in classifications}


class TimelineAccumulator:
    """Foldable earliest-year tracker over (pmid, drug_id) pairs.

    fold() consumes one pair; merge() combines accumulators built over
    disjoint partitions of the pair stream. The result is independent of
    the partitioning because min is associative and commutative.
    """

    def __init__(
        self,
        by_pmid: dict[int, tuple[Optional[int], str]],
        basic_set: frozenset[str] = BASIC_LABELS,
        clinical_set: frozenset[str] = CLINICAL_LABELS,
    ):
        self.by_pmid = by_pmid
        self.basic_set = frozenset(basic_set)
        self.clinical_set = frozenset(clinical_set)
        self.earliest_basic: dict[str, int] = {}
        self.earliest_clinical: dict[str, int] = {}
        self.drug_ids: set[str] = set()
        self.stats = TimelineStats()

    def fold(self, pmid: int, drug_id: str) -> None:
        entry = self.by_pmid.get(pmid)
        if entry is None:
            self.stats.dropped_pairs += 1
            return
        year, label = entry
        self.drug_ids.add(drug_id)
        if year is None:
            self.stats.undated_pairs += 1
            return
        if label in self.basic_set:
            current = self.earliest_basic.get(drug_id)
            if current is None or year < current:
                self.earliest_basic[drug_id] = year
        if label in self.clinical_set:
            current = self.earliest_clinical.get(drug_id)
            if current is None or year < current:
                self.earliest_clinical[drug_id] = year

    def merge(self, other: "TimelineAccumulator") -> None:
        for drug_id, year in other.earliest_basic.items():
            current = self.earliest_basic.get(drug_id)
            if current is None or year < current:
                self.earliest_basic[drug_id] = year
        for drug_id, year in other.earliest_clinical.items():
            current = self.earliest_clinical.get(drug_id)
            if current is None or year < current:
                self.earliest_clinical[drug_id] = year
        self.drug_ids |= other.drug_ids
        self.stats.merge(other.stats)

    def timelines(self) -> list[DrugTimeline]:
        """Finalize: one timeline per drug with at least one dated year.

        Drugs seen only through undated or out-of-set articles are dropped
        and tallied on stats.dropped_drugs.
        """
        out = []
        for drug_id in sorted(self.drug_ids):
            t_eb = self.earliest_basic.get(drug_id)
            t_ec = self.earliest_clinical.get(drug_id)
            if t_eb is None and t_ec is None:
                self.stats.dropped_drugs += 1
                continue
            out.append(DrugTimeline.from_years(drug_id, t_eb, t_ec))
        return out


def drug_timelines(
    pairs: Iterable[tuple[int, str]],
    classifications: Iterable[ArticleClassification],
    basic_set: frozenset[str] = BASIC_LABELS,
    clinical_set: frozenset[str] = CLINICAL_LABELS,
    stats: Optional[TimelineStats] = None,
) -> list[DrugTimeline]:
    """Timelines for every drug in the pair stream, sorted by drug_id."""
    acc = TimelineAccumulator(classification_index(classifications), basic_set, clinical_set)
    for pmid, drug_id in pairs:
        acc.fold(pmid, drug_id)
    timelines = acc.timelines()
    if stats is not None:
        stats.merge(acc.stats)
    return timelines


def status_counts(timelines: Iterable[DrugTimeline]) -> dict[str, int]:
    counts = {status: 0 for status in STATUSES}
    for timeline in timelines:
        counts[timeline.status] += 1
    return counts


def translation_rate(timelines: Iterable[DrugTimeline]) -> float:
    """Fraction of drugs whose timeline reached clinical research in order.

    The denominator is every drug with a timeline, whatever its status.
    """
    counts = status_counts(timelines)
    total = sum(counts.values())
    if total == 0:
        raise EmptyCorpusError("translation rate is undefined over zero timelines")
    return counts[TRANSLATED] / total


# --- distribution and annual tables -----------------------------------------


@dataclass(frozen=True, slots=True)
class DistributionRow:
    label: str
    count: int
    pct_drug_related: float
    pct_whole_corpus: float


@dataclass(frozen=True, slots=True)
class CorpusDistribution:
    rows: tuple[DistributionRow, ...]
    total: int
    whole_corpus_size: int

    @property
    def counts(self) -> dict[str, int]:
        return {row.label: row.count for row in self.rows}


def corpus_distribution(
    classifications: Iterable[ArticleClassification], whole_corpus_size: int
) -> CorpusDistribution:
    """Count articles per label with percent shares at 2-decimal rounding.

    Rows follow DISTRIBUTION_ORDER. Percentages use Python's round (half to
    even). whole_corpus_size must be at least the classification count.
    """
    counts = {label: 0 for label in DISTRIBUTION_ORDER}
    total = 0
    for cls in classifications:
        counts[cls.label] += 1
        total += 1
    if total == 0:
        raise EmptyCorpusError("distribution is undefined over zero classifications")
    if whole_corpus_size < total:
        raise ValueError(
            f"whole_corpus_size {whole_corpus_size} is smaller than the "
            f"classification count {total}"
        )
    rows = tuple(
        DistributionRow(
            label,
            counts[label],
            round(100.0 * counts[label] / total, 2),
            round(100.0 * counts[label] / whole_corpus_size, 2),
        )
        for label in DISTRIBUTION_ORDER
    )
    return CorpusDistribution(rows, total, whole_corpus_size)


@dataclass(frozen=True, slots=True)
class AnnualSeries:
    """Dense per-year, per-label article counts over an inclusive window."""

    years: np.ndarray
    labels: tuple[str, ...]
    counts: np.ndarray  # shape (len(years), len(labels))


def _window_years(window: tuple[int, int]) -> np.ndarray:
    start, end = window
    if start > end:
        raise ValueError(f"empty year window {start}..{end}")
    return np.arange(start, end + 1)


def annual_series(
    classifications: Iterable[ArticleClassification], window: tuple[int, int]
) -> AnnualSeries:
    """Per-year label counts, zero-filled across the window.

    Undated articles and years outside the window are excluded.
    """
    years = _window_years(window)
    start = int(years[0])
    column = {label: j for j, label in enumerate(DISTRIBUTION_ORDER)}
    counts = np.zeros((len(years), len(DISTRIBUTION_ORDER)), dtype=np.int64)
    for cls in classifications:
        if cls.year is None or not (start <= cls.year <= int(years[-1])):
            continue
        counts[cls.year - start, column[cls.label]] += 1
    return AnnualSeries(years, DISTRIBUTION_ORDER, counts)


@dataclass(frozen=True, slots=True)
class AnnualDrugSeries:
    """Per-year drug counts over an inclusive window.

    first_basic[y] counts drugs whose earliest basic year is y, and
    first_clinical[y] likewise for clinical. non_translated_new[y] counts
    drugs first studied in year y that never reached clinical research;
    non_translated_stock[y] counts drugs that by year y have started basic
    research but not yet appeared in clinical research.
    """

    years: np.ndarray
    first_basic: np.ndarray
    first_clinical: np.ndarray
    non_translated_new: np.ndarray
    non_translated_stock: np.ndarray


def annual_drug_series(
    timelines: Iterable[DrugTimeline], window: tuple[int, int]
) -> AnnualDrugSeries:
    years = _window_years(window)
    start, end = int(years[0]), int(years[-1])
    size = len(years)
    first_basic = np.zeros(size, dtype=np.int64)
    first_clinical = np.zeros(size, dtype=np.int64)
    non_translated_new = np.zeros(size, dtype=np.int64)
    stock_delta: dict[int, int] = {}
    for timeline in timelines:
        if timeline.t_eb is not None:
            if start <= timeline.t_eb <= end:
                first_basic[timeline.t_eb - start] += 1
                if timeline.t_ec is None:
                    non_translated_new[timeline.t_eb - start] += 1
            # A drug is in the untranslated stock from its first basic year
            # until the year before its first clinical year (forever when
            # it never translates). Same-year or reversed pairs never enter.
            if timeline.t_ec is None or timeline.t_ec > timeline.t_eb:
                stock_delta[timeline.t_eb] = stock_delta.get(timeline.t_eb, 0) + 1
                if timeline.t_ec is not None:
                    stock_delta[timeline.t_ec] = stock_delta.get(timeline.t_ec, 0) - 1
        if timeline.t_ec is not None and start <= timeline.t_ec <= end:
            first_clinical[timeline.t_ec - start] += 1
    running = sum(delta for year, delta in stock_delta.items() if year < start)
    non_translated_stock = np.zeros(size, dtype=np.int64)
    for offset, year in enumerate(range(start, end + 1)):
        running += stock_delta.get(year, 0)
        non_translated_stock[offset] = running
    return AnnualDrugSeries(
        years, first_basic, first_clinical, non_translated_new, non_translated_stock
    )


# --- lag distribution --------------------------------------------------------


@dataclass(frozen=True, slots=True)
class LagStats:
    """Summary and exponential goodness-of-fit for a lag sample."""

    n: int
    mean: float
    q1: float
    median: float
    q3: float
    rate: float
    ks_stat: float
    ks_p: float


def _kolmogorov_sf(t: float) -> float:
    """Survival function of the Kolmogorov distribution.

    For t >= 1 the alternating series 2 * sum (-1)^(k-1) exp(-2 k^2 t^2)
    converges in a few terms; for small t that series is slow, so the
    theta-function dual form is used instead.
    """
    if t <= 0.0:
        return 1.0
    if t < 1.0:
        total = 0.0
        for k in range(1, 40):
            term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8.0 * t * t))
            total += term
            if term < 1e-18:
                break
        value = 1.0 - math.sqrt(2.0 * math.pi) / t * total
    else:
        total = 0.0
        for k in range(1, 200):
            term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * t * t)
            total += term
            if abs(term) < 1e-18:
                break
        value = total
    return min(1.0, max(0.0, value))


def lag_stats(lags: Iterable[int]) -> LagStats:
    """Fit an exponential to positive lags and test the fit.

    rate is the maximum-likelihood estimate 1/mean. The Kolmogorov-Smirnov
    statistic compares the sample against the fitted CDF; its p-value uses
    the asymptotic Kolmogorov series, so it is approximate for tiny n and
    optimistic in the usual estimated-parameter sense. Quartiles use linear
    interpolation between order statistics.
    """
    values = np.asarray(sorted(lags), dtype=np.float64)
    n = len(values)
    if n < 2:
        raise InsufficientDataError(f"need at least 2 lags, got {n}")
    if values[0] <= 0:
        raise ValueError("lags must be positive; anomalous timelines are excluded upstream")
    mean = float(values.mean())
    q1, median, q3 = (float(q) for q in np.quantile(values, (0.25, 0.5, 0.75)))
    rate = 1.0 / mean
    cdf = 1.0 - np.exp(-rate * values)
    positions = np.arange(1, n + 1, dtype=np.float64)
    d_plus = float(np.max(positions / n - cdf))
    d_minus = float(np.max(cdf - (positions - 1.0) / n))
    ks_stat = max(d_plus, d_minus)
    ks_p = _kolmogorov_sf(math.sqrt(n) * ks_stat)
    return LagStats(n, mean, q1, median, q3, rate, ks_stat, ks_p)


def translated_lags(timelines: Iterable[DrugTimeline]) -> list[int]:
    """Lags of translated drugs only, the sample lag_stats expects."""
    return [t.lag for t in timelines if t.status == TRANSLATED]


# --- tabular output ----------------------------------------------------------


def write_distribution_tsv(distribution: CorpusDistribution, sink: IO[str]) -> None:
    sink.write("label\tcount\tpct_drug_related\tpct_whole_corpus\n")
    for row in distribution.rows:
        sink.write(
            f"{row.label}\t{row.count}\t{row.pct_drug_related:.2f}\t{row.pct_whole_corpus:.2f}\n"
        )
    whole_pct = round(100.0 * distribution.total / distribution.whole_corpus_size, 2)
    sink.write(f"Total\t{distribution.total}\t100.00\t{whole_pct:.2f}\n")


def write_annual_articles_tsv(series: AnnualSeries, sink: IO[str]) -> None:
    sink.write("year\t" + "\t".join(series.labels) + "\n")
    for offset, year in enumerate(series.years):
        row = "\t".join(str(int(v)) for v in series.counts[offset])
        sink.write(f"{int(year)}\t{row}\n")


def write_annual_drugs_tsv(series: AnnualDrugSeries, sink: IO[str]) -> None:
    sink.write(
        "year\tfirst_basic\tfirst_clinical\tnon_translated_new\tnon_translated_stock\n"
    )
    for offset, year in enumerate(series.years):
        sink.write(
            f"{int(year)}\t{int(series.first_basic[offset])}"
            f"\t{int(series.first_clinical[offset])}"
            f"\t{int(series.non_translated_new[offset])}"
            f"\t{int(series.non_translated_stock[offset])}\n"
        )


def write_timelines_tsv(timelines: Iterable[DrugTimeline], sink: IO[str]) -> int:
    """One row per drug; absent years and lags are empty fields."""

    def cell(value: Optional[int]) -> str:
        return "" if value is None else str(value)

    sink.write("drug_id\tt_eb\tt_ec\tlag\tstatus\n")
    count = 0
    for timeline in timelines:
        sink.write(
            f"{timeline.drug_id}\t{cell(timeline.t_eb)}\t{cell(timeline.t_ec)}"
            f"\t{cell(timeline.lag)}\t{timeline.status}\n"
        )
        count += 1
    return count


def build_summary(
    timelines: list[DrugTimeline],
    stats: Optional[LagStats],
    timeline_stats: Optional[TimelineStats] = None,
) -> dict:
    """JSON-ready summary of drug counts, translation rate, and lag fit."""
    counts = status_counts(timelines)
    summary = {
        "drugs": {**counts, "total": sum(counts.values())},
        "translation_rate": translation_rate(timelines) if timelines else None,
        "lag": None
        if stats is None
        else {
            "n": stats.n,
            "mean": stats.mean,
            "q1": stats.q1,
            "median": stats.median,
            "q3": stats.q3,
            "rate": stats.rate,
            "ks_stat": stats.ks_stat,
            "ks_p": stats.ks_p,
        },
    }
    if timeline_stats is not None:
        summary["dropped"] = {
            "pairs_missing_pmid": timeline_stats.dropped_pairs,
            "undated_pairs": timeline_stats.undated_pairs,
            "drugs_without_dates": timeline_stats.dropped_drugs,
        }
    return summary
