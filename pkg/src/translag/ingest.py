"""Streaming ingestion of PubMed baseline XML into line-delimited article records.

One baseline file holds hundreds of thousands of ``MedlineCitation`` elements;
the parser here is a pull parser that keeps at most a chunk's worth of
citations alive, so memory is bounded by the largest citation rather than the
file size. Parsed citations round-trip through a line-delimited JSON format
(one article per line) so pipeline stages can be run, inspected, and resumed
independently.
"""

import io
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, Mapping, NamedTuple

from ._streams import open_maybe_gzip

YEAR_MIN = 1500
YEAR_MAX = 2100

_CHUNK_SIZE = 64 * 1024
_YEAR_TOKEN = re.compile(r"(?<!\d)(\d{4})(?!\d)")


class DescriptorRef(NamedTuple):
    """A MeSH descriptor reference as it appears on a citation."""

    ui: str
    name: str


@dataclass(slots=True)
class ArticleRecord:
    """One parsed citation: identifier, dating, running text, and MeSH references."""

    pmid: int
    title: str = ""
    abstract: str = ""
    year: int | None = None
    journal: str | None = None
    mesh_descriptors: list[DescriptorRef] = field(default_factory=list)


@dataclass
class IngestStats:
    """Tallies accumulated while streaming one or more baseline files."""

    parsed: int = 0
    skipped_missing_pmid: int = 0

    def merge(self, other: "IngestStats") -> "IngestStats":
        self.parsed += other.parsed
        self.skipped_missing_pmid += other.skipped_missing_pmid
        return self


class BaselineParseError(Exception):
    """Malformed baseline XML.

    ``byte_offset`` locates the failure in the (decompressed) input; it is
    exact for single-byte-encoded content, which covers XML markup, and
    accurate to within the failing line otherwise. ``line``/``column`` come
    straight from the underlying parser.
    """

    def __init__(self, message: str, byte_offset: int, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column}, byte offset {byte_offset})")
        self.byte_offset = byte_offset
        self.line = line
        self.column = column


class RecordWriteError(Exception):
    """A sink write failed; ``written`` counts records fully written before it."""

    def __init__(self, written: int, cause: OSError):
        super().__init__(f"record sink failed after {written} records: {cause}")
        self.written = written


class RecordFormatError(ValueError):
    """A line of the intermediate record format did not parse or validate."""


def extract_pub_year(pubdate_fields: Mapping[str, str]) -> int | None:
    """Resolve a publication year from the fields of a PubDate element.

    Returns the ``Year`` field when it parses to a plausible year; otherwise
    the first standalone 4-digit token in [1500, 2100] found in
    ``MedlineDate``; otherwise None. Absence is a valid result, not an error.
    """
    year_text = pubdate_fields.get("Year", "").strip()
    if year_text:
        try:
            year = int(year_text)
        except ValueError:
            year = None
        if year is not None and YEAR_MIN <= year <= YEAR_MAX:
            return year
    for match in _YEAR_TOKEN.finditer(pubdate_fields.get("MedlineDate", "")):
        year = int(match.group(1))
        if YEAR_MIN <= year <= YEAR_MAX:
            return year
    return None


def _element_text(elem: ET.Element | None) -> str:
    if elem is None:
        return ""
    return "".join(elem.itertext()).strip()


def _parse_citation(elem: ET.Element) -> ArticleRecord | None:
    """Build a record from a completed MedlineCitation element; None if it has no usable PMID."""
    pmid_text = elem.findtext("PMID", "").strip()
    try:
        pmid = int(pmid_text)
    except ValueError:
        return None
    if pmid <= 0:
        return None

    article = elem.find("Article")
    title = _element_text(article.find("ArticleTitle")) if article is not None else ""
    abstract = ""
    journal = None
    year = None
    if article is not None:
        # Multi-part abstracts concatenate with single spaces in document
        # order; structured-section labels live in attributes and are dropped.
        parts = [_element_text(t) for t in article.findall("Abstract/AbstractText")]
        abstract = " ".join(p for p in parts if p)
        journal = _element_text(article.find("Journal/Title")) or None
        pubdate = article.find("Journal/JournalIssue/PubDate")
        if pubdate is not None:
            year = extract_pub_year({child.tag: (child.text or "") for child in pubdate})

    mesh: list[DescriptorRef] = []
    seen_uis: set[str] = set()
    for name_elem in elem.findall("MeshHeadingList/MeshHeading/DescriptorName"):
        ui = name_elem.get("UI", "").strip()
        if not ui or ui in seen_uis:
            continue
        seen_uis.add(ui)
        mesh.append(DescriptorRef(ui=ui, name=_element_text(name_elem)))

    return ArticleRecord(
        pmid=pmid, title=title, abstract=abstract, year=year, journal=journal,
        mesh_descriptors=mesh,
    )


def _offset_of(position: tuple[int, int], chunk: bytes, fed: int, lines_fed: int,
               last_line_start: int) -> int:
    """Map an expat (line, column) position onto an absolute byte offset.

    ``fed``/``lines_fed`` count the bytes and newlines of fully fed previous
    chunks; ``last_line_start`` is the absolute offset where the still-open
    line began. The error always falls inside the chunk being fed (or at EOF),
    so the line start can be recovered from a newline scan of that chunk.
    """
    err_line, err_col = position
    rel = err_line - lines_fed
    if rel <= 1:
        line_start = last_line_start
    else:
        pos = -1
        for _ in range(rel - 1):
            nxt = chunk.find(b"\n", pos + 1)
            if nxt < 0:
                break
            pos = nxt
        line_start = fed + pos + 1 if pos >= 0 else last_line_start
    return line_start + err_col


def _iter_citation_elements(stream) -> Iterator[ET.Element]:
    """Yield completed MedlineCitation elements, pruning the tree as it goes."""
    parser = ET.XMLPullParser(events=("start", "end"))
    root: ET.Element | None = None
    fed = 0
    lines_fed = 0
    last_line_start = 0
    ready: list[ET.Element] = []
    while True:
        chunk = stream.read(_CHUNK_SIZE)
        try:
            if chunk:
                parser.feed(chunk)
            else:
                parser.close()
            for event, elem in parser.read_events():
                if event == "start":
                    if root is None:
                        root = elem
                elif elem.tag == "MedlineCitation":
                    ready.append(elem)
        except ET.ParseError as exc:
            offset = _offset_of(exc.position, chunk or b"", fed, lines_fed, last_line_start)
            raise BaselineParseError(exc.msg.split(":")[0], offset, *exc.position) from exc
        if ready:
            # Detach finished subtrees so the document never accumulates:
            # clearing the root is safe, open elements stay on the builder's
            # own stack and the yielded citations keep their children.
            if root is not None:
                root.clear()
            yield from ready
            ready.clear()
        if not chunk:
            return
        newline_count = chunk.count(b"\n")
        if newline_count:
            last_line_start = fed + chunk.rfind(b"\n") + 1
            lines_fed += newline_count
        fed += len(chunk)


def parse_baseline_stream(
    source: BinaryIO,
    compressed: bool | None = None,
    stats: IngestStats | None = None,
) -> Iterator[ArticleRecord]:
    """Stream ArticleRecords out of PubMed baseline XML, one per MedlineCitation.

    ``compressed`` forces gzip handling on/off; the default sniffs the gzip
    magic bytes. Records come out in document order and peak memory is bounded
    by the largest single citation plus one read chunk, not the file size.
    Citations without a usable PMID are skipped and tallied on ``stats``.

    Raises BaselineParseError (with byte offset) on malformed XML.
    """
    for elem in _iter_citation_elements(open_maybe_gzip(source, compressed)):
        record = _parse_citation(elem)
        if record is None:
            if stats is not None:
                stats.skipped_missing_pmid += 1
            continue
        if stats is not None:
            stats.parsed += 1
        yield record


def parse_baseline_file(path: str | Path, stats: IngestStats | None = None) -> Iterator[ArticleRecord]:
    """parse_baseline_stream over a file path, sniffing gzip from magic bytes."""
    with open(path, "rb") as handle:
        yield from parse_baseline_stream(handle, stats=stats)


# --- intermediate line-delimited record format ---------------------------
#
# One JSON object per line, UTF-8, fields exactly:
#   pmid (int), year (int|null), title (str), abstract (str),
#   journal (str|null), mesh (array of {ui, name}).


def record_to_json(record: ArticleRecord) -> str:
    return json.dumps(
        {
            "pmid": record.pmid,
            "year": record.year,
            "title": record.title,
            "abstract": record.abstract,
            "journal": record.journal,
            "mesh": [{"ui": d.ui, "name": d.name} for d in record.mesh_descriptors],
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


def record_from_json(line: str) -> ArticleRecord:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordFormatError(f"bad record line: {exc}") from exc
    try:
        pmid = raw["pmid"]
        year = raw["year"]
        mesh = [DescriptorRef(ui=m["ui"], name=m["name"]) for m in raw["mesh"]]
        record = ArticleRecord(
            pmid=pmid, title=raw["title"], abstract=raw["abstract"],
            year=year, journal=raw["journal"], mesh_descriptors=mesh,
        )
    except (KeyError, TypeError) as exc:
        raise RecordFormatError(f"record line missing field: {exc}") from exc
    if not isinstance(pmid, int) or pmid <= 0:
        raise RecordFormatError(f"pmid must be a positive integer, got {pmid!r}")
    if year is not None and not (isinstance(year, int) and YEAR_MIN <= year <= YEAR_MAX):
        raise RecordFormatError(f"year must be null or in [{YEAR_MIN}, {YEAR_MAX}], got {year!r}")
    return record


def write_records(records: Iterable[ArticleRecord], sink: io.TextIOBase) -> int:
    """Write records one per line to a UTF-8 text sink; returns the record count.

    Raises RecordWriteError carrying the completed-record count if the sink fails.
    """
    written = 0
    try:
        for record in records:
            sink.write(record_to_json(record) + "\n")
            written += 1
    except OSError as exc:
        raise RecordWriteError(written, exc) from exc
    return written


def read_records(source: Iterable[str]) -> Iterator[ArticleRecord]:
    """Parse the line-delimited record format back into ArticleRecords."""
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            yield record_from_json(line)
        except RecordFormatError as exc:
            raise RecordFormatError(f"line {lineno}: {exc}") from exc
