"""Per-article category counts, 8-way labels, and triangle coordinates.

An article's MeSH descriptors are resolved against a category index; the
counts of Animal, Cell-Molecule, and Human descriptors determine a label
(A, C, H, any combination, or Other for none) and, for labeled articles, a
point inside a fixed triangle whose vertices are A (sqrt(3)/2, -1/2),
C (-sqrt(3)/2, -1/2), H (0, 1).
"""

import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Optional

from .ingest import ArticleRecord, RecordFormatError
from .mesh import ANIMAL, CELL_MOLECULE, HUMAN, MeshIndex, descriptor_categories

SQRT3_2 = math.sqrt(3.0) / 2.0

VERTEX_A = (SQRT3_2, -0.5)
VERTEX_C = (-SQRT3_2, -0.5)
VERTEX_H = (0.0, 1.0)

# Canonical label order: singles, pairs, triple, then the unlabeled bucket.
LABELS = ("A", "C", "H", "AC", "AH", "CH", "ACH", "Other")


@dataclass(slots=True)
class ClassificationStats:
    """Mutable tallies accumulated while classifying a stream."""

    articles: int = 0
    unknown_descriptors: int = 0

    def merge(self, other: "ClassificationStats") -> None:
        self.articles += other.articles
        self.unknown_descriptors += other.unknown_descriptors


@dataclass(frozen=True, slots=True)
class ArticleClassification:
    """One article's counts, label, and (for labeled articles) coordinates.

    coord is None exactly when label is Other.
    """

    pmid: int
    year: Optional[int]
    n_a: int
    n_c: int
    n_h: int
    label: str
    coord: Optional[tuple[float, float]]


def count_terms(
    article: ArticleRecord,
    index: MeshIndex,
    stats: Optional[ClassificationStats] = None,
) -> tuple[int, int, int]:
    """Count the article's descriptors per category.

    A descriptor increments every category in its set, once each; descriptors
    absent from the index contribute nothing and are tallied on stats.
    """
    n_a = n_c = n_h = 0
    for ref in article.mesh_descriptors:
        categories = descriptor_categories(ref.ui, index)
        if categories is None:
            if stats is not None:
                stats.unknown_descriptors += 1
            continue
        if ANIMAL in categories:
            n_a += 1
        if CELL_MOLECULE in categories:
            n_c += 1
        if HUMAN in categories:
            n_h += 1
    return n_a, n_c, n_h


def type_label(n_a: int, n_c: int, n_h: int) -> str:
    """Label letters are exactly the categories with positive count."""
    if min(n_a, n_c, n_h) < 0:
        raise ValueError("term counts must be nonnegative")
    letters = ""
    if n_a > 0:
        letters += ANIMAL
    if n_c > 0:
        letters += CELL_MOLECULE
    if n_h > 0:
        letters += HUMAN
    return letters or "Other"


def triangle_coords(
    n_a: int, n_c: int, n_h: int, normalized: bool = True
) -> tuple[float, float]:
    """Map term counts to a point in the A/C/H triangle.

    With count fractions f_x = n_x / total, the point is the barycentric
    combination f_a * A + f_c * C + f_h * H, which always lands inside the
    triangle. normalized=False skips the division and uses raw counts as
    weights; multi-term articles then land outside the unit triangle, so it
    exists only for comparison against the fraction form.
    """
    if min(n_a, n_c, n_h) < 0:
        raise ValueError("term counts must be nonnegative")
    total = n_a + n_c + n_h
    if total == 0:
        raise ValueError("triangle coordinates are undefined for all-zero counts")
    if normalized:
        f_a, f_c, f_h = n_a / total, n_c / total, n_h / total
    else:
        f_a, f_c, f_h = float(n_a), float(n_c), float(n_h)
    x = (f_a - f_c) * SQRT3_2
    y = -f_a / 2.0 - f_c / 2.0 + f_h
    return x, y


def classify_article(
    article: ArticleRecord,
    index: MeshIndex,
    stats: Optional[ClassificationStats] = None,
    normalized: bool = True,
) -> ArticleClassification:
    n_a, n_c, n_h = count_terms(article, index, stats)
    label = type_label(n_a, n_c, n_h)
    coord = None if label == "Other" else triangle_coords(n_a, n_c, n_h, normalized)
    return ArticleClassification(
        pmid=article.pmid,
        year=article.year,
        n_a=n_a,
        n_c=n_c,
        n_h=n_h,
        label=label,
        coord=coord,
    )


def classify_corpus(
    records: Iterable[ArticleRecord],
    index: MeshIndex,
    stats: Optional[ClassificationStats] = None,
    normalized: bool = True,
) -> Iterator[ArticleClassification]:
    """Classify a record stream, one classification per record, in order."""
    for article in records:
        if stats is not None:
            stats.articles += 1
        yield classify_article(article, index, stats, normalized)


# --- line-delimited serialization ------------------------------------------


def classification_to_json(cls: ArticleClassification) -> str:
    x, y = cls.coord if cls.coord is not None else (None, None)
    payload = {
        "pmid": cls.pmid,
        "year": cls.year,
        "n_a": cls.n_a,
        "n_c": cls.n_c,
        "n_h": cls.n_h,
        "label": cls.label,
        "x": x,
        "y": y,
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def classification_from_json(line: str) -> ArticleClassification:
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise RecordFormatError("classification line is not a JSON object")
    try:
        pmid = payload["pmid"]
        label = payload["label"]
        counts = tuple(payload[k] for k in ("n_a", "n_c", "n_h"))
    except KeyError as exc:
        raise RecordFormatError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(pmid, int) or isinstance(pmid, bool) or pmid <= 0:
        raise RecordFormatError(f"pmid must be a positive integer, got {pmid!r}")
    if label not in LABELS:
        raise RecordFormatError(f"unknown label {label!r}")
    for value in counts:
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise RecordFormatError(f"counts must be nonnegative integers, got {value!r}")
    x, y = payload.get("x"), payload.get("y")
    if (x is None) != (y is None) or (x is None) != (label == "Other"):
        raise RecordFormatError("coordinates must be present exactly when label is not Other")
    coord = None if x is None else (float(x), float(y))
    year = payload.get("year")
    if year is not None and (not isinstance(year, int) or isinstance(year, bool)):
        raise RecordFormatError(f"year must be an integer or null, got {year!r}")
    return ArticleClassification(pmid, year, *counts, label, coord)


def write_classifications(
    classifications: Iterable[ArticleClassification], sink: IO[str]
) -> int:
    count = 0
    for cls in classifications:
        sink.write(classification_to_json(cls))
        sink.write("\n")
        count += 1
    return count


def read_classifications(source: IO[str]) -> Iterator[ArticleClassification]:
    for number, line in enumerate(source, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            yield classification_from_json(stripped)
        except RecordFormatError as exc:
            raise RecordFormatError(f"line {number}: {exc}") from None
