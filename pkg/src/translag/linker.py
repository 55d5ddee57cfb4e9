"""Dictionary-based drug mention detection over titles and abstracts.

A lexicon maps stable drug identifiers to surface forms; articles are linked
to every drug with at least one boundary-valid mention. Matching runs a
single Aho-Corasick pass per field, so scan cost is independent of lexicon
size. Produced (pmid, drug_id) pairs use the same file format the pipeline
accepts as external input, so a pair file from any other extractor can be
dropped in unchanged.
"""

import logging
import unicodedata
from collections import deque
from pathlib import Path
from typing import IO, Iterable, Iterator, NamedTuple, Optional, Union

from .ingest import ArticleRecord

log = logging.getLogger(__name__)

MIN_FORM_LENGTH = 3


class LexiconFormatError(ValueError):
    """Lexicon TSV line is malformed or a drug_id occurs twice."""


class PairFormatError(ValueError):
    """Pair TSV line does not hold pmid<TAB>drug_id."""


def normalize_text(text: str) -> str:
    """NFKC-normalize, casefold, and collapse all whitespace runs to one space."""
    folded = unicodedata.normalize("NFKC", text).casefold()
    return " ".join(folded.split())


class MentionSpan(NamedTuple):
    """One resolved match inside a normalized text."""

    drug_id: str
    surface: str
    offset: int


class DrugMention(NamedTuple):
    """A mention located in a specific article field."""

    pmid: int
    drug_id: str
    surface: str
    field: str
    offset: int


class _Automaton:
    """Aho-Corasick automaton over normalized surface forms."""

    def __init__(self, patterns: Iterable[tuple[str, str]]):
        # goto is a list of char->state dicts; out holds (form, drug_id)
        # pairs ending at each state, inherited along failure links.
        self._goto: list[dict[str, int]] = [{}]
        self._fail: list[int] = [0]
        self._out: list[list[tuple[str, str]]] = [[]]
        for form, drug_id in patterns:
            self._insert(form, drug_id)
        self._link_failures()

    def _insert(self, form: str, drug_id: str) -> None:
        state = 0
        for ch in form:
            nxt = self._goto[state].get(ch)
            if nxt is None:
                nxt = len(self._goto)
                self._goto[state][ch] = nxt
                self._goto.append({})
                self._fail.append(0)
                self._out.append([])
            state = nxt
        self._out[state].append((form, drug_id))

    def _link_failures(self) -> None:
        queue = deque()
        for state in self._goto[0].values():
            queue.append(state)
        while queue:
            state = queue.popleft()
            for ch, nxt in self._goto[state].items():
                queue.append(nxt)
                fallback = self._fail[state]
                while fallback and ch not in self._goto[fallback]:
                    fallback = self._fail[fallback]
                self._fail[nxt] = self._goto[fallback].get(ch, 0)
                if self._fail[nxt] == nxt:
                    self._fail[nxt] = 0
                self._out[nxt] = self._out[nxt] + self._out[self._fail[nxt]]

    def scan(self, text: str) -> Iterator[tuple[int, int, str, str]]:
        """Yield raw candidates as (start, end, form, drug_id)."""
        state = 0
        for index, ch in enumerate(text):
            while state and ch not in self._goto[state]:
                state = self._fail[state]
            state = self._goto[state].get(ch, 0)
            for form, drug_id in self._out[state]:
                yield index - len(form) + 1, index + 1, form, drug_id


class DrugLexicon:
    """Immutable mapping from drug_id to normalized surface forms."""

    def __init__(self, entries: dict[str, tuple[str, ...]], dropped_forms: int = 0):
        self._entries = {drug_id: tuple(forms) for drug_id, forms in entries.items()}
        self.dropped_forms = dropped_forms
        self._automaton: Optional[_Automaton] = None

    @property
    def entries(self) -> dict[str, tuple[str, ...]]:
        return dict(self._entries)

    def forms(self, drug_id: str) -> tuple[str, ...]:
        return self._entries[drug_id]

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, drug_id: str) -> bool:
        return drug_id in self._entries

    def _matcher(self) -> _Automaton:
        # Compiled on first use; the automaton is immutable and shareable.
        if self._automaton is None:
            patterns = [
                (form, drug_id)
                for drug_id, forms in self._entries.items()
                for form in forms
            ]
            self._automaton = _Automaton(patterns)
        return self._automaton


def load_lexicon(source: Union[str, Path, IO[str]]) -> DrugLexicon:
    """Read a lexicon TSV: drug_id<TAB>form1|form2|..., '#' comments allowed.

    Duplicate drug_ids are an error. Forms shorter than 3 characters after
    normalization are dropped and tallied on the returned lexicon.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            return load_lexicon(handle)
    entries: dict[str, tuple[str, ...]] = {}
    dropped = 0
    for number, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        drug_id, sep, forms_field = line.partition("\t")
        drug_id = drug_id.strip()
        if not sep or not drug_id:
            raise LexiconFormatError(f"line {number}: expected drug_id<TAB>form1|form2|...")
        if drug_id in entries:
            raise LexiconFormatError(f"line {number}: duplicate drug_id {drug_id!r}")
        forms: list[str] = []
        for form in forms_field.split("|"):
            normalized = normalize_text(form)
            if len(normalized) < MIN_FORM_LENGTH:
                dropped += 1
                log.warning("lexicon line %d: dropped short form %r for %s", number, form, drug_id)
                continue
            if normalized not in forms:
                forms.append(normalized)
        entries[drug_id] = tuple(forms)
    if dropped:
        log.warning("lexicon: dropped %d surface forms shorter than %d characters", dropped, MIN_FORM_LENGTH)
    return DrugLexicon(entries, dropped_forms=dropped)


def _boundary_valid(text: str, start: int, end: int) -> bool:
    if start > 0 and text[start - 1].isalnum():
        return False
    if end < len(text) and text[end].isalnum():
        return False
    return True


def find_mentions(text: str, lexicon: DrugLexicon) -> list[MentionSpan]:
    """Scan normalized text for surface forms at token boundaries.

    Overlapping candidate spans are resolved leftmost-longest; every drug
    whose form covers a selected span is reported, one mention per
    (drug_id, offset). The input must already be normalized the same way
    lexicon forms are (see normalize_text).
    """
    candidates = [
        (start, end, form, drug_id)
        for start, end, form, drug_id in lexicon._matcher().scan(text)
        if _boundary_valid(text, start, end)
    ]
    if not candidates:
        return []
    spans = sorted({(start, end) for start, end, _, _ in candidates},
                   key=lambda span: (span[0], span[0] - span[1]))
    selected = []
    cursor = 0
    for start, end in spans:
        if start >= cursor:
            selected.append((start, end))
            cursor = end
    chosen = set(selected)
    seen: set[tuple[str, int]] = set()
    mentions = []
    for start, end, form, drug_id in candidates:
        if (start, end) in chosen and (drug_id, start) not in seen:
            seen.add((drug_id, start))
            mentions.append(MentionSpan(drug_id, form, start))
    mentions.sort(key=lambda m: (m.offset, m.drug_id))
    return mentions


def article_mentions(article: ArticleRecord, lexicon: DrugLexicon) -> list[DrugMention]:
    """Locate mentions in the article's title and abstract, both normalized."""
    mentions = []
    for field_name in ("title", "abstract"):
        text = normalize_text(getattr(article, field_name))
        for span in find_mentions(text, lexicon):
            mentions.append(
                DrugMention(article.pmid, span.drug_id, span.surface, field_name, span.offset)
            )
    return mentions


class LinkStats:
    """Tallies accumulated while linking a record stream."""

    __slots__ = ("articles", "linked_articles", "pairs")

    def __init__(self):
        self.articles = 0
        self.linked_articles = 0
        self.pairs = 0

    def merge(self, other: "LinkStats") -> None:
        self.articles += other.articles
        self.linked_articles += other.linked_articles
        self.pairs += other.pairs


def link_corpus(
    records: Iterable[ArticleRecord],
    lexicon: DrugLexicon,
    stats: Optional[LinkStats] = None,
) -> Iterator[tuple[int, str]]:
    """Emit one (pmid, drug_id) pair per drug mentioned in each article.

    Articles without mentions yield nothing, which is the drug-related
    filter. Pairs follow article order, drug_ids sorted within an article.
    """
    for article in records:
        if stats is not None:
            stats.articles += 1
        drug_ids = sorted({m.drug_id for m in article_mentions(article, lexicon)})
        if not drug_ids:
            continue
        if stats is not None:
            stats.linked_articles += 1
            stats.pairs += len(drug_ids)
        for drug_id in drug_ids:
            yield article.pmid, drug_id


def write_pairs(pairs: Iterable[tuple[int, str]], sink: IO[str]) -> int:
    count = 0
    for pmid, drug_id in pairs:
        sink.write(f"{pmid}\t{drug_id}\n")
        count += 1
    return count


def read_pairs(source: Union[str, Path, IO[str]]) -> Iterator[tuple[int, str]]:
    """Parse a pair TSV; blank lines and '#' comments are skipped."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            yield from read_pairs(handle)
            return
    for number, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        pmid_text, sep, drug_id = line.partition("\t")
        drug_id = drug_id.strip()
        if not sep or not drug_id:
            raise PairFormatError(f"line {number}: expected pmid<TAB>drug_id")
        try:
            pmid = int(pmid_text)
        except ValueError:
            raise PairFormatError(f"line {number}: pmid {pmid_text!r} is not an integer") from None
        if pmid <= 0:
            raise PairFormatError(f"line {number}: pmid must be positive, got {pmid}")
        yield pmid, drug_id
