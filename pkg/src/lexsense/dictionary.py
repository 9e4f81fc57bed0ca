"""Structured bilingual dictionary: parsing, sense numbering, serialization.

The markup is a small XML vocabulary::

    <dictionary>
      <entry>
        <hw>abandonner</hw>
        <part>
          <pos>vtr</pos>
          <sense>
            <ic>quitter</ic>
            <la>fig</la>
            <tr>to leave</tr>
            <co role="object" tr="to leave">lieu</co>
            <le tr="to leave Paris for Nice">abandonner Paris pour Nice</le>
          </sense>
        </part>
      </entry>
    </dictionary>

Sense numbers are never written in the file; they are derived from
document position (part index S1, sense index S2, item index S3).
Elements outside this vocabulary are kept verbatim and written back on
serialization, but carry no meaning.
"""

from __future__ import annotations

import dataclasses
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Tuple
from xml.sax.saxutils import escape, quoteattr

from .tags import POS


class DictionaryError(Exception):
    """Base class for dictionary input problems."""


class DictionaryParseError(DictionaryError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DictionaryStructureError(DictionaryError):
    def __init__(self, message, headword=None):
        where = f"entry {headword!r}: " if headword else ""
        super().__init__(where + message)
        self.headword = headword


class NoMatchingPOS(DictionaryError):
    def __init__(self, headword, pos):
        super().__init__(f"entry {headword!r} has no part matching {pos}")
        self.headword = headword
        self.pos = pos


# --------------------------------------------------------------------------
# Sense identifiers

_ROMAN = [
    (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"), (100, "C"), (90, "XC"),
    (50, "L"), (40, "XL"), (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
]
_ROMAN_RE = re.compile(r"^M{0,3}(CM|CD|D?C{0,3})(XC|XL|L?X{0,3})(IX|IV|V?I{0,3})$")


def to_roman(n: int) -> str:
    if not 1 <= n < 4000:
        raise ValueError(f"cannot render {n} as a roman numeral")
    out = []
    for value, digits in _ROMAN:
        count, n = divmod(n, value)
        out.append(digits * count)
    return "".join(out)


def from_roman(text: str) -> int:
    if not text or not _ROMAN_RE.match(text):
        raise ValueError(f"invalid roman numeral {text!r}")
    values = {"M": 1000, "D": 500, "C": 100, "L": 50, "X": 10, "V": 5, "I": 1}
    total = 0
    for i, ch in enumerate(text):
        v = values[ch]
        if i + 1 < len(text) and values[text[i + 1]] > v:
            total -= v
        else:
            total += v
    return total


@dataclass(frozen=True, order=True)
class SenseId:
    """Address of one sense: POS-part number and sense number, e.g. ``I.6``."""

    s1: int
    s2: int

    def __post_init__(self):
        if self.s1 < 1 or self.s2 < 1:
            raise ValueError(f"sense numbers must be positive, got {self.s1}.{self.s2}")

    def __str__(self):
        return f"{to_roman(self.s1)}.{self.s2}"

    @classmethod
    def parse(cls, text: str) -> "SenseId":
        part, sep, num = text.strip().partition(".")
        if not sep or not num.isdigit():
            raise ValueError(f"invalid sense id {text!r}")
        return cls(from_roman(part), int(num))


# --------------------------------------------------------------------------
# Dictionary content

class ExampleKind(Enum):
    COLLOCATION = "co"
    COMPOUND = "lc"
    IDIOM = "li"
    PHRASAL_VERB = "lv"
    STRUCTURE = "ls"
    USAGE = "lu"
    GENERAL = "le"

    @property
    def tag(self):
        return self.value


ITEM_TAGS = {kind.tag: kind for kind in ExampleKind}


class CollocRole(Enum):
    SUBJECT = "subject"
    OBJECT = "object"
    MODIFIED_NOUN = "modified-noun"


class PartCategory(Enum):
    NOUN = "Noun"
    VERB = "Verb"
    ADJECTIVE = "Adjective"
    ADVERB = "Adverb"
    PRONOMINAL_VERB = "PronominalVerb"
    OTHER = "Other"

    @property
    def corpus_pos(self) -> Optional[POS]:
        return _CATEGORY_POS.get(self)


_CATEGORY_POS = {
    PartCategory.NOUN: POS.NOUN,
    PartCategory.VERB: POS.VERB,
    PartCategory.PRONOMINAL_VERB: POS.VERB,
    PartCategory.ADJECTIVE: POS.ADJ,
    PartCategory.ADVERB: POS.ADV,
}

PART_TAGS = {
    "vtr": PartCategory.VERB,
    "vi": PartCategory.VERB,
    "vti": PartCategory.VERB,
    "v": PartCategory.VERB,
    "vpr": PartCategory.PRONOMINAL_VERB,
    "n": PartCategory.NOUN,
    "nm": PartCategory.NOUN,
    "nf": PartCategory.NOUN,
    "nmf": PartCategory.NOUN,
    "adj": PartCategory.ADJECTIVE,
    "adv": PartCategory.ADVERB,
}


def part_category(tag: str) -> PartCategory:
    return PART_TAGS.get(tag.strip().lower(), PartCategory.OTHER)


@dataclass(frozen=True)
class IllustrativeItem:
    kind: ExampleKind
    s3: int
    text: str
    colloc_role: Optional[CollocRole] = None
    translation: Optional[str] = None

    def __post_init__(self):
        if (self.kind is ExampleKind.COLLOCATION) != (self.colloc_role is not None):
            raise ValueError("colloc_role is required for collocations and only for them")


@dataclass(frozen=True)
class Sense:
    id: SenseId
    indicators: Tuple[str, ...] = ()
    labels: Tuple[str, ...] = ()
    items: Tuple[IllustrativeItem, ...] = ()
    gloss: Optional[str] = None
    translation: Optional[str] = None
    extras: Tuple[str, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class POSPart:
    tag: str
    senses: Tuple[Sense, ...]
    extras: Tuple[str, ...] = field(default=(), repr=False)

    @property
    def category(self) -> PartCategory:
        return part_category(self.tag)


@dataclass(frozen=True)
class DictionaryEntry:
    headword: str
    parts: Tuple[POSPart, ...]
    extras: Tuple[str, ...] = field(default=(), repr=False)

    def senses(self) -> Iterator[Tuple[POSPart, Sense]]:
        for part in self.parts:
            for sense in part.senses:
                yield part, sense

    def sense(self, sid: SenseId) -> Sense:
        try:
            return self.parts[sid.s1 - 1].senses[sid.s2 - 1]
        except IndexError:
            raise KeyError(f"{self.headword} has no sense {sid}") from None

    def part_of(self, sid: SenseId) -> POSPart:
        try:
            return self.parts[sid.s1 - 1]
        except IndexError:
            raise KeyError(f"{self.headword} has no part {to_roman(sid.s1)}") from None

    def sense_ids(self) -> List[SenseId]:
        return [s.id for _, s in self.senses()]


# --------------------------------------------------------------------------
# Numbering and POS matching

def assign_sense_numbers(entry: DictionaryEntry) -> DictionaryEntry:
    """Renumber senses and items from their positions. Idempotent."""
    parts = []
    for i, part in enumerate(entry.parts, 1):
        senses = []
        for j, sense in enumerate(part.senses, 1):
            items = tuple(
                item if item.s3 == k else dataclasses.replace(item, s3=k)
                for k, item in enumerate(sense.items, 1)
            )
            senses.append(dataclasses.replace(sense, id=SenseId(i, j), items=items))
        parts.append(dataclasses.replace(part, senses=tuple(senses)))
    return dataclasses.replace(entry, parts=tuple(parts))


def part_matches(part: POSPart, pos: POS, reflexive: bool = False) -> bool:
    category = part.category
    if category is PartCategory.PRONOMINAL_VERB:
        return pos is POS.VERB and reflexive
    return category.corpus_pos is pos


def matching_parts(entry: DictionaryEntry, pos: POS, reflexive: bool = False) -> List[POSPart]:
    """Parts eligible for a corpus token with this tag.

    A reflexive verb token prefers the pronominal parts and falls back to the
    plain verb parts when the entry has none.
    """
    parts = [p for p in entry.parts if part_matches(p, pos, reflexive)]
    if reflexive and pos is POS.VERB:
        pronominal = [p for p in parts if p.category is PartCategory.PRONOMINAL_VERB]
        if pronominal:
            return pronominal
        parts = [p for p in entry.parts if part_matches(p, pos, False)]
    return parts


def ambiguity_set(entry: DictionaryEntry, pos: POS) -> Tuple[SenseId, ...]:
    """All senses of the parts whose category maps to ``pos``, reflexive or not."""
    return tuple(
        sense.id
        for part in entry.parts
        if part.category.corpus_pos is pos
        for sense in part.senses
    )


def first_sense(entry: DictionaryEntry, pos: POS, reflexive: bool = False) -> SenseId:
    parts = matching_parts(entry, pos, reflexive)
    if not parts:
        raise NoMatchingPOS(entry.headword, pos)
    return parts[0].senses[0].id


# --------------------------------------------------------------------------
# A headword-indexed collection

class Dictionary:
    """Entries keyed by headword, in document order."""

    def __init__(self, entries: Iterable[DictionaryEntry] = ()):
        self._entries: Dict[str, DictionaryEntry] = {}
        for entry in merge_entries(entries):
            self._entries[entry.headword] = entry

    def __len__(self):
        return len(self._entries)

    def __iter__(self) -> Iterator[DictionaryEntry]:
        return iter(self._entries.values())

    def __contains__(self, headword):
        return headword in self._entries

    def get(self, headword) -> Optional[DictionaryEntry]:
        return self._entries.get(headword)

    def __getitem__(self, headword) -> DictionaryEntry:
        return self._entries[headword]

    @property
    def entries(self) -> List[DictionaryEntry]:
        return list(self._entries.values())


def merge_entries(entries: Iterable[DictionaryEntry]) -> List[DictionaryEntry]:
    """Merge homograph entries by appending parts; keeps first-seen order."""
    merged: Dict[str, DictionaryEntry] = {}
    for entry in entries:
        prev = merged.get(entry.headword)
        if prev is None:
            merged[entry.headword] = entry
        else:
            merged[entry.headword] = assign_sense_numbers(dataclasses.replace(
                prev, parts=prev.parts + entry.parts, extras=prev.extras + entry.extras))
    return list(merged.values())


# --------------------------------------------------------------------------
# Parsing

def _text(elem) -> str:
    return " ".join("".join(elem.itertext()).split())


def _extra(elem) -> str:
    elem = ET.fromstring(ET.tostring(elem, encoding="unicode"))
    elem.tail = None
    return ET.tostring(elem, encoding="unicode")


def _parse_item(elem, headword) -> IllustrativeItem:
    kind = ITEM_TAGS[elem.tag]
    text = _text(elem)
    if not text:
        raise DictionaryStructureError(f"empty <{elem.tag}> item", headword)
    role = None
    if kind is ExampleKind.COLLOCATION:
        raw = elem.get("role")
        if raw is None:
            raise DictionaryStructureError(f"collocation {text!r} has no role", headword)
        try:
            role = CollocRole(raw)
        except ValueError:
            raise DictionaryStructureError(
                f"collocation {text!r} has unknown role {raw!r}", headword) from None
        text = "_".join(text.split())
    return IllustrativeItem(kind, 1, text, role, elem.get("tr"))


def _parse_sense(elem, headword) -> Sense:
    indicators, labels, items, extras = [], [], [], []
    gloss = translation = None
    for child in elem:
        if child.tag == "ic":
            indicators.append(_text(child))
        elif child.tag == "la":
            labels.append(_text(child))
        elif child.tag == "gloss":
            gloss = _text(child)
        elif child.tag == "tr":
            translation = _text(child)
        elif child.tag in ITEM_TAGS:
            items.append(_parse_item(child, headword))
        elif child.tag in ("sense", "part", "entry", "hw", "pos"):
            raise DictionaryStructureError(f"<{child.tag}> cannot appear inside <sense>", headword)
        else:
            extras.append(_extra(child))
    return Sense(SenseId(1, 1), tuple(indicators), tuple(labels), tuple(items),
                 gloss, translation, tuple(extras))


def _parse_part(elem, headword) -> POSPart:
    tag = None
    senses, extras = [], []
    for child in elem:
        if child.tag == "pos":
            tag = _text(child)
        elif child.tag == "sense":
            senses.append(_parse_sense(child, headword))
        elif child.tag in ITEM_TAGS or child.tag in ("ic", "la", "tr", "gloss"):
            raise DictionaryStructureError(
                f"<{child.tag}> must be inside a <sense>", headword)
        else:
            extras.append(_extra(child))
    if not tag:
        raise DictionaryStructureError("part without <pos>", headword)
    if not senses:
        raise DictionaryStructureError(f"part {tag!r} has no senses", headword)
    return POSPart(tag, tuple(senses), tuple(extras))


def _parse_entry(elem) -> DictionaryEntry:
    hw = elem.find("hw")
    headword = "_".join(_text(hw).split()) if hw is not None else ""
    if not headword:
        raise DictionaryStructureError("entry without <hw>")
    parts, extras = [], []
    for child in elem:
        if child.tag == "hw":
            continue
        if child.tag == "part":
            parts.append(_parse_part(child, headword))
        elif child.tag == "sense" or child.tag in ITEM_TAGS:
            raise DictionaryStructureError(
                f"<{child.tag}> outside any <part> cannot be numbered", headword)
        else:
            extras.append(_extra(child))
    if not parts:
        raise DictionaryStructureError("entry has no parts", headword)
    return assign_sense_numbers(DictionaryEntry(headword, tuple(parts), tuple(extras)))


def parse_dictionary(source: str) -> List[DictionaryEntry]:
    """Parse dictionary markup into numbered entries, merging homographs."""
    if not source.strip():
        return []
    try:
        root = ET.fromstring(source)
    except ET.ParseError as exc:
        line, col = exc.position
        raise DictionaryParseError(str(exc).split(":")[0], line, col + 1) from None
    if root.tag == "entry":
        elems = [root]
    elif root.tag == "dictionary":
        elems = [e for e in root if e.tag == "entry"]
    else:
        raise DictionaryStructureError(f"unexpected root element <{root.tag}>")
    return merge_entries(_parse_entry(e) for e in elems)


def load_dictionary(*paths) -> Dictionary:
    entries: List[DictionaryEntry] = []
    for path in paths:
        with open(path, encoding="utf-8") as f:
            entries.extend(parse_dictionary(f.read()))
    return Dictionary(entries)


@dataclass(frozen=True)
class DictionaryStats:
    total_entries: int
    entries_with_rules: int
    mean_rules_per_covered_entry: float

    def __str__(self):
        return (f"total_entries={self.total_entries}\n"
                f"entries_with_rules={self.entries_with_rules}\n"
                f"mean_rules_per_covered_entry={self.mean_rules_per_covered_entry:.1f}\n")


def dictionary_stats(entries: Iterable[DictionaryEntry], rulebase) -> DictionaryStats:
    """Coverage counters of a rule base over the dictionary it was built from.

    The mean is rounded to one decimal and is 0 when no entry is covered.
    """
    entries = list(entries)
    counts = [len(rulebase.rules_for(e.headword)) for e in entries]
    covered = [c for c in counts if c]
    mean = round(sum(covered) / len(covered), 1) if covered else 0.0
    return DictionaryStats(len(entries), len(covered), mean)


# --------------------------------------------------------------------------
# Serialization

def _element(tag, text, indent, attrs=()):
    attr = "".join(f" {k}={quoteattr(v)}" for k, v in attrs if v is not None)
    return f"{indent}<{tag}{attr}>{escape(text)}</{tag}>\n"


def serialize_dictionary(entries: Iterable[DictionaryEntry]) -> str:
    """Canonical markup; parse(serialize(x)) == x and output is byte-stable."""
    out = ['<?xml version="1.0" encoding="UTF-8"?>\n', "<dictionary>\n"]
    for entry in entries:
        out.append("  <entry>\n")
        out.append(_element("hw", entry.headword, "    "))
        for part in entry.parts:
            out.append("    <part>\n")
            out.append(_element("pos", part.tag, "      "))
            for sense in part.senses:
                out.append("      <sense>\n")
                pad = "        "
                out.extend(_element("ic", t, pad) for t in sense.indicators)
                out.extend(_element("la", t, pad) for t in sense.labels)
                if sense.gloss is not None:
                    out.append(_element("gloss", sense.gloss, pad))
                if sense.translation is not None:
                    out.append(_element("tr", sense.translation, pad))
                for item in sense.items:
                    role = item.colloc_role.value if item.colloc_role else None
                    out.append(_element(item.kind.tag, item.text, pad,
                                        (("role", role), ("tr", item.translation))))
                out.extend(f"{pad}{x}\n" for x in sense.extras)
                out.append("      </sense>\n")
            out.extend(f"      {x}\n" for x in part.extras)
            out.append("    </part>\n")
        out.extend(f"    {x}\n" for x in entry.extras)
        out.append("  </entry>\n")
    out.append("</dictionary>\n")
    return "".join(out)


__all__ = [
    "CollocRole", "Dictionary", "DictionaryEntry", "DictionaryError",
    "DictionaryParseError", "DictionaryStructureError", "ExampleKind",
    "IllustrativeItem", "NoMatchingPOS", "POSPart", "PartCategory", "Sense",
    "SenseId", "ambiguity_set", "assign_sense_numbers", "dictionary_stats", "first_sense",
    "load_dictionary", "matching_parts", "merge_entries", "parse_dictionary",
    "part_matches", "serialize_dictionary",
]
