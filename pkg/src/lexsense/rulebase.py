"""Compile dictionary examples and collocations into disambiguation rules.

Every example of a sense is tagged and parsed; each relation that involves
the headword yields a lexical rule (the other argument as a lemma) and,
when the other argument has semantic classes, a semantic rule (the other
argument replaced by its class set). Collocations carry their relation in
the markup and are turned into rules without parsing.

Rule-base file::

    lexsense-rules v1
    target  pos  ambiguity  KIND[:prep]  slot  L:lemma|S:CLASS,...  kind  s3  result  translation
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from .dictionary import (CollocRole, Dictionary, DictionaryEntry, ExampleKind,
                         IllustrativeItem, Sense, SenseId, ambiguity_set)
from .parser import Relation, RelationKind, ShallowParser
from .semlex import SemLexicon
from .tagging import ExampleTagger, UntaggableExample
from .tags import POS

log = logging.getLogger(__name__)

HEADER = "lexsense-rules v1"

#: Placeholder lemmas and the class sets standing in for them in semantic rules.
PLACEHOLDER_CLASSES: Mapping[str, FrozenSet[str]] = {
    "quelqu'un": frozenset({"HUMAIN"}),
    "quelque_chose": frozenset({"ENTITE", "ABSTRAIT"}),
}


class RuleExtractionError(Exception):
    pass


class RuleBaseFormatError(Exception):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class Slot(Enum):
    """Which side of the relation the target word occupies."""

    HEAD = "Head"
    DEP = "Dep"


@dataclass(frozen=True)
class RulePattern:
    kind: RelationKind
    prep: Optional[str]
    slot: Slot
    argument: Union[str, FrozenSet[str]]

    def __post_init__(self):
        if isinstance(self.argument, frozenset) and not self.argument:
            raise ValueError("semantic rule with an empty class set")

    @property
    def is_semantic(self) -> bool:
        return isinstance(self.argument, frozenset)

    def describe(self, target: str) -> str:
        arg = "/".join(sorted(self.argument)) if self.is_semantic else self.argument
        head, dep = (target, arg) if self.slot is Slot.HEAD else (arg, target)
        if self.prep is not None:
            return f"{self.kind}({head},{self.prep},{dep})"
        if self.kind.dep_first:
            return f"{self.kind}({dep},{head})"
        return f"{self.kind}({head},{dep})"


@dataclass(frozen=True)
class Rule:
    target: str
    pos: POS
    ambiguity: Tuple[SenseId, ...]
    pattern: RulePattern
    source_kind: ExampleKind
    s3: int
    result: SenseId
    translation_hint: Optional[str] = None

    def __post_init__(self):
        if self.result not in self.ambiguity:
            raise ValueError(f"rule result {self.result} outside its ambiguity set")

    @property
    def is_semantic(self):
        return self.pattern.is_semantic

    def __str__(self):
        amb = ",".join(str(s) for s in self.ambiguity)
        return f"{self.target}({amb}): {self.pattern.describe(self.target)} => {self.result}"


class RuleBase:
    """Rules indexed by target lemma, in insertion (document) order."""

    def __init__(self, rules: Iterable[Rule] = ()):
        self._index: Dict[str, List[Rule]] = {}
        self.warnings: List[str] = []
        for rule in rules:
            self.add(rule)

    def add(self, rule: Rule):
        self._index.setdefault(rule.target, []).append(rule)

    def rules_for(self, lemma: str) -> List[Rule]:
        return self._index.get(lemma, [])

    def identified(self, lemma: str) -> Iterator[Tuple[str, Rule]]:
        for n, rule in enumerate(self.rules_for(lemma), 1):
            yield f"{lemma}#{n}", rule

    def __iter__(self) -> Iterator[Rule]:
        for rules in self._index.values():
            yield from rules

    def __len__(self):
        return sum(len(r) for r in self._index.values())

    def __eq__(self, other):
        return isinstance(other, RuleBase) and self._index == other._index

    @property
    def targets(self) -> List[str]:
        return list(self._index)

    @property
    def total(self):
        return len(self)

    @property
    def lexical_count(self):
        return sum(1 for r in self if not r.is_semantic)

    @property
    def semantic_count(self):
        return sum(1 for r in self if r.is_semantic)


# --------------------------------------------------------------------------
# Extraction

def _argument_classes(lemma, pos, semlex, placeholders) -> FrozenSet[str]:
    if lemma in placeholders:
        return frozenset(placeholders[lemma])
    return semlex.classes_of(lemma, pos)


def _rule_pair(entry, sense, item, pos, kind, prep, slot, other, other_pos,
               semlex, placeholders) -> List[Rule]:
    ambiguity = ambiguity_set(entry, pos)
    lexical_hint = item.translation or sense.translation
    general_hint = sense.translation or item.translation
    rules = [Rule(entry.headword, pos, ambiguity, RulePattern(kind, prep, slot, other),
                  item.kind, item.s3, sense.id, lexical_hint)]
    classes = _argument_classes(other, other_pos, semlex, placeholders)
    if classes:
        rules.append(Rule(entry.headword, pos, ambiguity, RulePattern(kind, prep, slot, classes),
                          item.kind, item.s3, sense.id, general_hint))
    return rules


def _example_rules(entry, sense, item, parser, semlex, tagger, placeholders) -> List[Rule]:
    part = entry.part_of(sense.id)
    pos = part.category.corpus_pos
    if pos is None:
        return []
    tokens = tagger.tag(item.text, entry.headword, part.category)
    rules: List[Rule] = []
    for rel in parser.parse(tokens):
        sides = ((Slot.HEAD, rel.head, rel.dep, rel.dep_pos),
                 (Slot.DEP, rel.dep, rel.head, rel.head_pos))
        for slot, mine, other, other_pos in sides:
            if mine == entry.headword:
                rules.extend(_rule_pair(entry, sense, item, pos, rel.kind, rel.prep, slot,
                                        other, other_pos, semlex, placeholders))
    return rules


def rules_from_example(entry: DictionaryEntry, sense: Sense, item: IllustrativeItem,
                       parser=None, semlex: Optional[SemLexicon] = None, *,
                       tagger: Optional[ExampleTagger] = None,
                       placeholders: Mapping[str, FrozenSet[str]] = PLACEHOLDER_CLASSES) -> List[Rule]:
    """Rules from one parsed example. Untaggable examples are logged and skipped."""
    if item.kind is ExampleKind.COLLOCATION:
        raise RuleExtractionError("collocations are not parsed; use rules_from_collocation")
    parser = parser or ShallowParser()
    semlex = semlex or SemLexicon()
    tagger = tagger or ExampleTagger(Dictionary([entry]))
    try:
        return _example_rules(entry, sense, item, parser, semlex, tagger, placeholders)
    except UntaggableExample as exc:
        log.warning("%s %s: %s", entry.headword, sense.id, exc)
        return []


_ROLE_PATTERNS = {
    CollocRole.SUBJECT: (RelationKind.SUBJ, Slot.HEAD),
    CollocRole.OBJECT: (RelationKind.DOBJ, Slot.HEAD),
    # the adjective is the dependent of the noun it modifies
    CollocRole.MODIFIED_NOUN: (RelationKind.ADJ, Slot.DEP),
}


def rules_from_collocation(entry: DictionaryEntry, sense: Sense, item: IllustrativeItem,
                           semlex: Optional[SemLexicon] = None, *,
                           placeholders: Mapping[str, FrozenSet[str]] = PLACEHOLDER_CLASSES) -> List[Rule]:
    if item.kind is not ExampleKind.COLLOCATION or item.colloc_role is None:
        raise RuleExtractionError(
            f"{entry.headword} {sense.id}: item {item.s3} is not a collocation with a role")
    pos = entry.part_of(sense.id).category.corpus_pos
    if pos is None:
        return []
    kind, slot = _ROLE_PATTERNS[item.colloc_role]
    return _rule_pair(entry, sense, item, pos, kind, None, slot, item.text, POS.NOUN,
                      semlex or SemLexicon(), placeholders)


def build_rulebase(dictionary: Iterable[DictionaryEntry], semlex: SemLexicon, parser=None, *,
                   tagger: Optional[ExampleTagger] = None,
                   placeholders: Mapping[str, FrozenSet[str]] = PLACEHOLDER_CLASSES) -> RuleBase:
    dictionary = dictionary if isinstance(dictionary, Dictionary) else Dictionary(dictionary)
    parser = parser or ShallowParser()
    tagger = tagger or ExampleTagger(dictionary)
    rb = RuleBase()
    for entry in dictionary:
        for _, sense in entry.senses():
            for item in sense.items:
                if item.kind is ExampleKind.COLLOCATION:
                    rules = rules_from_collocation(entry, sense, item, semlex,
                                                   placeholders=placeholders)
                else:
                    try:
                        rules = _example_rules(entry, sense, item, parser, semlex, tagger,
                                               placeholders)
                    except UntaggableExample as exc:
                        msg = f"{entry.headword} {sense.id} {item.kind.tag}{item.s3}: {exc}"
                        log.warning(msg)
                        rb.warnings.append(msg)
                        continue
                for rule in rules:
                    rb.add(rule)
    return rb


# --------------------------------------------------------------------------
# Persistence

def _check_field(value: str, what: str):
    if "\t" in value or "\n" in value:
        raise ValueError(f"{what} {value!r} contains a tab or newline")


def format_rule(rule: Rule) -> str:
    p = rule.pattern
    kind = f"{p.kind}:{p.prep}" if p.prep is not None else str(p.kind)
    arg = "S:" + ",".join(sorted(p.argument)) if p.is_semantic else "L:" + p.argument
    fields = [rule.target, str(rule.pos), ",".join(str(s) for s in rule.ambiguity), kind,
              p.slot.value, arg, rule.source_kind.tag, str(rule.s3), str(rule.result),
              rule.translation_hint or ""]
    for f in fields:
        _check_field(f, "rule field")
    return "\t".join(fields)


def dump_rulebase(rb: RuleBase) -> str:
    return "".join(f"{line}\n" for line in [HEADER] + [format_rule(r) for r in rb])


def save_rulebase(rb: RuleBase, sink) -> None:
    """Write to a path or a text stream."""
    text = dump_rulebase(rb)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _parse_rule(line: str) -> Rule:
    fields = line.split("\t")
    if len(fields) != 10:
        raise ValueError(f"expected 10 tab-separated fields, got {len(fields)}")
    target, pos, amb, kind, slot, arg, source, s3, result, tr = fields
    kind_name, _, prep = kind.partition(":")
    if arg.startswith("L:") and len(arg) > 2:
        argument: Union[str, FrozenSet[str]] = arg[2:]
    elif arg.startswith("S:") and len(arg) > 2:
        argument = frozenset(arg[2:].split(","))
    else:
        raise ValueError(f"bad argument field {arg!r}")
    try:
        source_kind = ExampleKind(source)
    except ValueError:
        raise ValueError(f"unknown source kind {source!r}") from None
    try:
        rel_kind = RelationKind(kind_name)
    except ValueError:
        raise ValueError(f"unknown relation kind {kind_name!r}") from None
    if rel_kind.has_prep != bool(prep):
        raise ValueError(f"preposition slot does not fit {rel_kind}")
    pattern = RulePattern(rel_kind, prep or None, Slot(slot), argument)
    return Rule(target, POS.parse(pos), tuple(SenseId.parse(s) for s in amb.split(",")),
                pattern, source_kind, int(s3), SenseId.parse(result), tr or None)


def parse_rulebase(source: str) -> RuleBase:
    lines = source.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() != HEADER:
        found = lines[0].strip() if lines else "<empty>"
        raise RuleBaseFormatError(f"expected header {HEADER!r}, found {found!r}", 1)
    rb = RuleBase()
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        try:
            rb.add(_parse_rule(line.rstrip("\r")))
        except ValueError as exc:
            raise RuleBaseFormatError(str(exc), lineno) from None
    return rb


def load_rulebase(source) -> RuleBase:
    """Read from a path or a text stream."""
    if hasattr(source, "read"):
        return parse_rulebase(source.read())
    with open(source, encoding="utf-8") as f:
        return parse_rulebase(f.read())
