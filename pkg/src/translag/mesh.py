"""MeSH descriptor index and subtree category rules.

Tree numbers are dot-delimited codes such as ``B01.050.150``; ancestry is
segment-prefix containment, so ``B01`` covers ``B01.050`` but never a sibling
that merely shares leading characters. Category queries answer which of the
Animal / Cell-Molecule / Human rule groups a code falls under; the rule set is
data, not code, because tree codes drift across annual MeSH versions.
"""

import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import BinaryIO, Iterable

from ._streams import sniff_head

log = logging.getLogger(__name__)

TREE_NUMBER_PATTERN = re.compile(r"[A-Z]\d{2}(?:\.\d{3})*\Z")

ANIMAL = "A"
CELL_MOLECULE = "C"
HUMAN = "H"

# Tree position of Homo sapiens inside the organisms subtree: the one branch
# of B01 that counts as human rather than animal.
HOMO_SAPIENS_TREE_CODE = "B01.050.150.900.649.313.988.400.112.400.400"

_ANIMAL_EXCEPTION_MARK = "A-blocked"


class MeshFormatError(ValueError):
    """Descriptor source was neither MeSH XML nor the ASCII descriptor format."""


class MeshCodeError(ValueError):
    """A tree-number string does not match the letter+digits segment grammar."""


def _descendant_or_equal(code: str, prefix: str) -> bool:
    # Segment boundaries are dots, so prefix+'.' cannot match a sibling code.
    return code == prefix or code.startswith(prefix + ".")


@dataclass(frozen=True)
class CategoryRuleSet:
    """Subtree prefixes assigning tree numbers to the A / C / H categories.

    A code is Cell-Molecule when it sits at or below any ``c_prefixes`` entry,
    Human likewise for ``h_prefixes``, and Animal when it sits under an
    ``a_prefixes`` entry *without* falling under any ``a_exceptions`` entry.
    """

    c_prefixes: tuple[str, ...] = ("A11", "B02", "B03", "B04", "G02.111.570")
    h_prefixes: tuple[str, ...] = (HOMO_SAPIENS_TREE_CODE, "M01")
    a_prefixes: tuple[str, ...] = ("B01",)
    a_exceptions: tuple[str, ...] = (HOMO_SAPIENS_TREE_CODE,)

    def __post_init__(self):
        for name in ("c_prefixes", "h_prefixes", "a_prefixes", "a_exceptions"):
            codes = tuple(getattr(self, name))
            object.__setattr__(self, name, codes)
            for code in codes:
                if not TREE_NUMBER_PATTERN.match(code):
                    raise MeshCodeError(f"{name} entry {code!r} is not a valid tree number")
        for exc in self.a_exceptions:
            if not any(_descendant_or_equal(exc, pref) for pref in self.a_prefixes):
                raise ValueError(
                    f"a_exceptions entry {exc!r} does not descend from any a_prefixes entry"
                )


DEFAULT_RULES = CategoryRuleSet()


@lru_cache(maxsize=8)
def _compiled_rules(rules: CategoryRuleSet) -> dict:
    """Prefix trie over code segments; marks sit under the reserved '' key."""
    root: dict = {}

    def insert(code: str, mark: str):
        node = root
        for segment in code.split("."):
            node = node.setdefault(segment, {})
        node.setdefault("", set()).add(mark)

    for prefix in rules.c_prefixes:
        insert(prefix, CELL_MOLECULE)
    for prefix in rules.h_prefixes:
        insert(prefix, HUMAN)
    for prefix in rules.a_prefixes:
        insert(prefix, ANIMAL)
    for prefix in rules.a_exceptions:
        insert(prefix, _ANIMAL_EXCEPTION_MARK)
    return root


def tree_number_categories(code: str, rules: CategoryRuleSet = DEFAULT_RULES) -> frozenset[str]:
    """Category subset of {A, C, H} for one tree number.

    Walks the compiled rule trie along the code's segments, collecting every
    rule prefix the code sits at or below. The animal exception wins over the
    animal rule. Pure function of (code, rules).

    Raises MeshCodeError for syntactically invalid codes.
    """
    if not TREE_NUMBER_PATTERN.match(code):
        raise MeshCodeError(f"invalid tree number {code!r}")
    node = _compiled_rules(rules)
    marks: set[str] = set()
    for segment in code.split("."):
        node = node.get(segment)
        if node is None:
            break
        found = node.get("")
        if found:
            marks |= found
    categories = set()
    if CELL_MOLECULE in marks:
        categories.add(CELL_MOLECULE)
    if HUMAN in marks:
        categories.add(HUMAN)
    if ANIMAL in marks and _ANIMAL_EXCEPTION_MARK not in marks:
        categories.add(ANIMAL)
    return frozenset(categories)


@dataclass(frozen=True)
class MeshDescriptor:
    ui: str
    name: str
    tree_numbers: tuple[str, ...]


@dataclass
class MeshIndex:
    """Descriptor lookup by unique identifier plus the category rule set.

    Immutable after load; safe for unrestricted concurrent reads. Unknown UIs
    come back as an explicit None from lookups, never a default descriptor.
    """

    by_ui: dict[str, MeshDescriptor] = field(default_factory=dict)
    rules: CategoryRuleSet = DEFAULT_RULES
    duplicate_uis: int = 0
    dropped_codes: int = 0

    def get(self, ui: str) -> MeshDescriptor | None:
        return self.by_ui.get(ui)

    def __len__(self) -> int:
        return len(self.by_ui)

    def __contains__(self, ui: str) -> bool:
        return ui in self.by_ui


def descriptor_categories(ui: str, index: MeshIndex) -> frozenset[str] | None:
    """Union of tree-number categories over a descriptor's codes.

    Returns None for an unindexed ui - distinguishable from a known descriptor
    whose codes simply match no rule (an empty frozenset).
    """
    descriptor = index.by_ui.get(ui)
    if descriptor is None:
        return None
    categories: frozenset[str] = frozenset()
    for code in descriptor.tree_numbers:
        categories |= tree_number_categories(code, index.rules)
    return categories


def _index_from_descriptors(
    descriptors: Iterable[tuple[str, str, list[str]]], rules: CategoryRuleSet
) -> MeshIndex:
    """Index (ui, name, codes) triples, validating codes and resolving duplicates."""
    index = MeshIndex(rules=rules)
    for ui, name, codes in descriptors:
        valid = []
        for code in codes:
            if TREE_NUMBER_PATTERN.match(code):
                valid.append(code)
            else:
                index.dropped_codes += 1
                log.warning("descriptor %s: dropping malformed tree number %r", ui, code)
        if not valid:
            continue  # descriptors without tree numbers cannot be classified
        if ui in index.by_ui:
            index.duplicate_uis += 1
            log.warning("duplicate descriptor ui %s: later record wins", ui)
        index.by_ui[ui] = MeshDescriptor(ui=ui, name=name, tree_numbers=tuple(valid))
    return index


def _iter_xml_descriptors(stream: BinaryIO):
    parser = ET.XMLPullParser(events=("start", "end"))
    root = None
    while True:
        chunk = stream.read(64 * 1024)
        try:
            if chunk:
                parser.feed(chunk)
            else:
                parser.close()
            events = list(parser.read_events())
        except ET.ParseError as exc:
            raise MeshFormatError(f"malformed MeSH XML: {exc}") from exc
        for event, elem in events:
            if event == "start":
                if root is None:
                    root = elem
                continue
            if elem.tag != "DescriptorRecord":
                continue
            ui = elem.findtext("DescriptorUI", "").strip()
            name = elem.findtext("DescriptorName/String", "").strip()
            codes = [
                (t.text or "").strip()
                for t in elem.findall("TreeNumberList/TreeNumber")
            ]
            if root is not None:
                root.clear()
            yield ui, name, [c for c in codes if c]
        if not chunk:
            return


def _iter_byte_lines(stream: BinaryIO):
    buffer = b""
    while True:
        chunk = stream.read(64 * 1024)
        if not chunk:
            if buffer:
                yield buffer
            return
        buffer += chunk
        *lines, buffer = buffer.split(b"\n")
        yield from lines


def _iter_ascii_descriptors(stream: BinaryIO):
    record: dict[str, list[str]] | None = None

    def finish(rec):
        ui = rec.get("UI", [""])[0]
        if ui:
            yield ui, rec.get("MH", [""])[0], rec.get("MN", [])

    for raw_line in _iter_byte_lines(stream):
        line = raw_line.decode("utf-8").rstrip("\r")
        if line.startswith("*NEWRECORD"):
            if record is not None:
                yield from finish(record)
            record = {}
            continue
        if record is None:
            continue
        key, sep, value = line.partition(" = ")
        if sep and key in ("UI", "MH", "MN"):
            record.setdefault(key, []).append(value.strip())
    if record is not None:
        yield from finish(record)


def load_descriptors(
    source: str | Path | BinaryIO, rules: CategoryRuleSet = DEFAULT_RULES
) -> MeshIndex:
    """Load a MeSH descriptor file into a MeshIndex.

    Accepts either MeSH XML (DescriptorRecordSet/DescriptorRecord) or the
    ASCII descriptor format (records separated by ``*NEWRECORD`` with
    ``UI =`` / ``MH =`` / ``MN =`` fields); the format is auto-detected from
    the leading bytes. Descriptors with at least one well-formed tree number
    are indexed; on duplicate UIs the later record wins and is tallied.

    Raises MeshFormatError when the leading bytes match neither format.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as handle:
            return load_descriptors(handle, rules)

    head, stream = sniff_head(source, 256)
    stripped = head.lstrip(b"\xef\xbb\xbf \t\r\n")
    if not stripped:
        return MeshIndex(rules=rules)  # empty source: empty index, no warnings
    if stripped.startswith(b"<"):
        return _index_from_descriptors(_iter_xml_descriptors(stream), rules)
    if stripped.startswith(b"*NEWRECORD"):
        return _index_from_descriptors(_iter_ascii_descriptors(stream), rules)
    raise MeshFormatError(
        "unrecognized descriptor format: expected MeSH XML (DescriptorRecordSet) "
        "or ASCII descriptor records (*NEWRECORD with UI/MH/MN fields)"
    )
