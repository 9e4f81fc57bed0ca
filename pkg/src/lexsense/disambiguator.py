"""Apply a rule base to parsed sentences.

For one target word the procedure is:

1. collect the sentence relations involving the word, each expanded to its
   equivalent forms (passive subject = direct object, and so on);
2. lexical phase: rules whose pattern matches a relation exactly; per sense
   the weights of the matching rules are summed and the best sum wins;
3. semantic phase, only when no lexical rule matched: per sense the class
   distances of the matching semantic rules are multiplied and the smallest
   product wins;
4. otherwise the first sense of the matching POS part.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import (Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set,
                    Tuple)

from .dictionary import (Dictionary, ExampleKind, NoMatchingPOS, SenseId, first_sense,
                         matching_parts)
from .parser import RELATION_ARG_POS, Relation, RelationKind, ShallowParser, Token
from .rulebase import PLACEHOLDER_CLASSES, Rule, RuleBase, Slot
from .semlex import SemLexicon
from .tags import CONTENT_POS, POS, Feat

log = logging.getLogger(__name__)

DEFAULT_WEIGHTS: Mapping[ExampleKind, int] = {
    ExampleKind.COLLOCATION: 6,
    ExampleKind.COMPOUND: 5,
    ExampleKind.IDIOM: 4,
    ExampleKind.PHRASAL_VERB: 3,
    ExampleKind.USAGE: 2,
    ExampleKind.STRUCTURE: 2,
    ExampleKind.GENERAL: 1,
}

# Strictly decreasing priority; structure examples sit beside usage examples.
_PRIORITY = (ExampleKind.COLLOCATION, ExampleKind.COMPOUND, ExampleKind.IDIOM,
             ExampleKind.PHRASAL_VERB, ExampleKind.USAGE, ExampleKind.GENERAL)


class WeightOrderError(ValueError):
    pass


class DegenerateDistance(ValueError):
    pass


def validate_weights(weights: Mapping[ExampleKind, int]) -> Dict[ExampleKind, int]:
    missing = [k.tag for k in ExampleKind if k not in weights]
    if missing:
        raise WeightOrderError(f"no weight for {', '.join(missing)}")
    out = {k: weights[k] for k in ExampleKind}
    for kind, w in out.items():
        if not isinstance(w, int) or isinstance(w, bool) or w <= 0:
            raise WeightOrderError(f"weight of {kind.tag} must be a positive integer, got {w!r}")
    for hi, lo in zip(_PRIORITY, _PRIORITY[1:]):
        if out[hi] <= out[lo]:
            raise WeightOrderError(
                f"weights must satisfy {hi.tag} > {lo.tag}, got {out[hi]} <= {out[lo]}")
    return out


def parse_weights(text: str, base: Optional[Mapping[ExampleKind, int]] = None) -> Dict[ExampleKind, int]:
    """``co=6,lc=5,...`` overrides on top of ``base`` (the defaults if omitted)."""
    weights = dict(base or DEFAULT_WEIGHTS)
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise WeightOrderError(f"expected kind=weight, got {part!r}")
        try:
            kind = ExampleKind(key.strip())
            weights[kind] = int(value)
        except ValueError:
            raise WeightOrderError(f"bad weight override {part!r}") from None
    return validate_weights(weights)


class Method(Enum):
    LEXICAL = "Lexical"
    SEMANTIC = "Semantic"
    DEFAULT = "Default"
    NOT_IN_DICTIONARY = "NotInDictionary"
    NO_MATCHING_POS = "NoMatchingPOS"

    def __str__(self):
        return self.value

    @property
    def rule_based(self):
        return self in (Method.LEXICAL, Method.SEMANTIC)


@dataclass(frozen=True)
class SenseAssignment:
    index: int
    lemma: str
    pos: POS
    chosen: Optional[SenseId]
    method: Method
    score: Optional[float] = None
    fired: Tuple[str, ...] = ()
    translation_hint: Optional[str] = None

    def __post_init__(self):
        if not self.method.rule_based and self.fired:
            raise ValueError(f"{self.method} assignments fire no rules")
        if self.method is Method.SEMANTIC and not 0 <= self.score < 1:
            raise ValueError(f"semantic score {self.score} outside [0, 1)")
        if (self.chosen is None) != (self.method in (Method.NOT_IN_DICTIONARY,
                                                     Method.NO_MATCHING_POS)):
            raise ValueError(f"{self.method} assignment with chosen={self.chosen}")


# --------------------------------------------------------------------------
# Relation equivalence and class distance

_EQUIVALENCE_GROUPS = (
    frozenset({RelationKind.SUBJPASS, RelationKind.DOBJ}),
    frozenset({RelationKind.SUBJ, RelationKind.RELSUBJ, RelationKind.PAGENT}),
    frozenset({RelationKind.ADJ, RelationKind.ATTR}),
)


def _group(kind: RelationKind) -> FrozenSet[RelationKind]:
    for group in _EQUIVALENCE_GROUPS:
        if kind in group:
            return group
    return frozenset({kind})


def equivalent_patterns(rel: Relation) -> Set[Relation]:
    """``rel`` and its equivalents.

    Head and dependent keep their roles across an equivalence, so only the
    kind changes: ``SUBJPASS(roman,écrire)`` and ``DOBJ(écrire,roman)`` share
    head ``écrire`` and dependent ``roman``.
    """
    return {Relation(kind, rel.head, rel.dep, rel.prep, rel.head_index, rel.dep_index,
                     rel.head_pos, rel.dep_pos)
            for kind in _group(rel.kind)}


def class_distance(l1: Iterable[str], l2: Iterable[str]) -> float:
    """(|L1 u L2| - |L1 n L2|) / |L1 u L2|."""
    a, b = frozenset(l1), frozenset(l2)
    union = len(a | b)
    if union == 0:
        raise DegenerateDistance("class distance of two empty sets")
    return (union - len(a & b)) / union


def class_distance_exact(l1: Iterable[str], l2: Iterable[str]) -> Fraction:
    a, b = frozenset(l1), frozenset(l2)
    union = len(a | b)
    if union == 0:
        raise DegenerateDistance("class distance of two empty sets")
    return Fraction(union - len(a & b), union)


# --------------------------------------------------------------------------
# One word

def _involves(rel: Relation, lemma: str, index: Optional[int]) -> bool:
    if index is not None and rel.head_index is not None:
        return rel.head_index == index or rel.dep_index == index
    return rel.head == lemma or rel.dep == lemma


def _other_side(rule: Rule, rel: Relation, lemma: str, index: Optional[int]):
    """(argument lemma, argument POS) if ``rel`` fits the rule's kind, prep
    and slot with the target on the expected side, else None."""
    p = rule.pattern
    if p.kind is not rel.kind or p.prep != rel.prep:
        return None
    if p.slot is Slot.HEAD:
        mine, mine_index, other, other_pos = rel.head, rel.head_index, rel.dep, rel.dep_pos
    else:
        mine, mine_index, other, other_pos = rel.dep, rel.dep_index, rel.head, rel.head_pos
    if mine != lemma:
        return None
    if index is not None and mine_index is not None and mine_index != index:
        return None
    return other, other_pos


def _argument_classes(lemma, pos, semlex, placeholders) -> FrozenSet[str]:
    if lemma in placeholders:
        return frozenset(placeholders[lemma])
    if pos is POS.PROPN:
        pos = POS.NOUN
    return semlex.classes_of(lemma, pos)


def disambiguate_word(lemma: str, pos: POS, relations: Iterable[Relation], rulebase: RuleBase,
                      semlex: SemLexicon, dictionary: Dictionary, *, index: Optional[int] = None,
                      reflexive: bool = False,
                      weights: Optional[Mapping[ExampleKind, int]] = None,
                      placeholders: Mapping[str, FrozenSet[str]] = PLACEHOLDER_CLASSES,
                      ) -> SenseAssignment:
    """Choose a sense for one occurrence of ``lemma``.

    ``index`` identifies the occurrence among the relations' token indices;
    without it any relation mentioning the lemma counts. Raises
    ``NoMatchingPOS`` when the entry has no part for ``pos``.
    """
    weights = weights or DEFAULT_WEIGHTS
    entry = dictionary.get(lemma)
    where = -1 if index is None else index
    if entry is None:
        return SenseAssignment(where, lemma, pos, None, Method.NOT_IN_DICTIONARY)
    parts = matching_parts(entry, pos, reflexive)
    if not parts:
        raise NoMatchingPOS(lemma, pos)
    allowed = {entry.parts.index(p) + 1 for p in parts}

    expanded: List[Relation] = []
    for rel in relations:
        if _involves(rel, lemma, index):
            for eq in sorted(equivalent_patterns(rel), key=lambda r: r.kind.value):
                if eq not in expanded:
                    expanded.append(eq)

    candidates = [(rid, rule) for rid, rule in rulebase.identified(lemma)
                  if rule.pos is pos and rule.result.s1 in allowed]

    # lexical phase
    lex_sum: Dict[SenseId, int] = {}
    lex_fired: Dict[SenseId, List[Tuple[str, Rule]]] = {}
    for rid, rule in candidates:
        if rule.is_semantic:
            continue
        for rel in expanded:
            side = _other_side(rule, rel, lemma, index)
            if side is not None and side[0] == rule.pattern.argument:
                lex_sum[rule.result] = lex_sum.get(rule.result, 0) + weights[rule.source_kind]
                lex_fired.setdefault(rule.result, []).append((rid, rule))
    if lex_sum:
        best = min(lex_sum, key=lambda s: (-lex_sum[s], s))
        fired = lex_fired[best]
        return SenseAssignment(where, lemma, pos, best, Method.LEXICAL, lex_sum[best],
                               _unique_ids(fired), _hint(fired))

    # semantic phase
    products: Dict[SenseId, Fraction] = {}
    sem_sum: Dict[SenseId, int] = {}
    sem_fired: Dict[SenseId, List[Tuple[str, Rule]]] = {}
    for rid, rule in candidates:
        if not rule.is_semantic:
            continue
        for rel in expanded:
            side = _other_side(rule, rel, lemma, index)
            if side is None:
                continue
            classes = _argument_classes(side[0], side[1], semlex, placeholders)
            try:
                d = class_distance_exact(rule.pattern.argument, classes)
            except DegenerateDistance:
                continue
            if d == 1:
                continue
            products[rule.result] = products.get(rule.result, Fraction(1)) * d
            sem_sum[rule.result] = sem_sum.get(rule.result, 0) + weights[rule.source_kind]
            sem_fired.setdefault(rule.result, []).append((rid, rule))
    if products:
        best = min(products, key=lambda s: (products[s], -sem_sum[s], s))
        fired = sem_fired[best]
        return SenseAssignment(where, lemma, pos, best, Method.SEMANTIC, float(products[best]),
                               _unique_ids(fired), _hint(fired))

    chosen = first_sense(entry, pos, reflexive)
    return SenseAssignment(where, lemma, pos, chosen, Method.DEFAULT,
                           translation_hint=entry.sense(chosen).translation)


def _unique_ids(fired) -> Tuple[str, ...]:
    out: List[str] = []
    for rid, _ in fired:
        if rid not in out:
            out.append(rid)
    return tuple(out)


def _hint(fired) -> Optional[str]:
    for _, rule in fired:
        if rule.translation_hint:
            return rule.translation_hint
    return None


# --------------------------------------------------------------------------
# Sentences

def _with_pos(rel: Relation) -> Relation:
    if rel.head_pos is not None and rel.dep_pos is not None:
        return rel
    head_pos, dep_pos = RELATION_ARG_POS[rel.kind]
    return Relation(rel.kind, rel.head, rel.dep, rel.prep, rel.head_index, rel.dep_index,
                    rel.head_pos or head_pos, rel.dep_pos or dep_pos)


@dataclass
class Disambiguator:
    """Bundles the resources so sentences can be shipped to worker processes."""

    rulebase: RuleBase
    semlex: SemLexicon
    dictionary: Dictionary
    weights: Optional[Mapping[ExampleKind, int]] = None
    parser: Optional[ShallowParser] = None
    placeholders: Mapping[str, FrozenSet[str]] = None

    def __post_init__(self):
        self.weights = validate_weights(self.weights or DEFAULT_WEIGHTS)
        self.parser = self.parser or ShallowParser()
        if self.placeholders is None:
            self.placeholders = dict(PLACEHOLDER_CLASSES)

    def _word(self, lemma, pos, relations, index, reflexive=False) -> SenseAssignment:
        try:
            return disambiguate_word(lemma, pos, relations, self.rulebase, self.semlex,
                                     self.dictionary, index=index, reflexive=reflexive,
                                     weights=self.weights, placeholders=self.placeholders)
        except NoMatchingPOS:
            return SenseAssignment(-1 if index is None else index, lemma, pos, None,
                                   Method.NO_MATCHING_POS)

    def sentence(self, tokens: Sequence[Token]) -> List[SenseAssignment]:
        tokens = list(tokens)
        relations = self.parser.parse(tokens)
        return [self._word(tok.lemma, tok.pos, relations, i, tok.has(Feat.REFLEXIVE))
                for i, tok in enumerate(tokens) if tok.pos in CONTENT_POS]

    def relations(self, relations: Sequence[Relation]) -> List[SenseAssignment]:
        """Targets are the distinct (lemma, POS) arguments in order of first
        appearance; each gets its ordinal as token index. Relations without
        argument POS get the usual ones for their kind."""
        relations = [_with_pos(r) for r in relations]
        targets: List[Tuple[str, POS]] = []
        for rel in relations:
            for lemma, pos in ((rel.head, rel.head_pos), (rel.dep, rel.dep_pos)):
                if pos in CONTENT_POS and (lemma, pos) not in targets:
                    targets.append((lemma, pos))
        out = []
        for n, (lemma, pos) in enumerate(targets):
            a = self._word(lemma, pos, relations, None)
            out.append(SenseAssignment(n, a.lemma, a.pos, a.chosen, a.method, a.score,
                                       a.fired, a.translation_hint))
        return out

    def corpus(self, sentences: Sequence[Sequence[Token]], jobs: int = 1) -> List[List[SenseAssignment]]:
        return self._map(self.sentence, sentences, jobs)

    def relation_corpus(self, sentences: Sequence[Sequence[Relation]], jobs: int = 1):
        return self._map(self.relations, sentences, jobs)

    @staticmethod
    def _map(fn, items, jobs):
        items = list(items)
        if jobs <= 1 or len(items) < 2:
            return [fn(x) for x in items]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map yields in submission order whatever the completion order
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def disambiguate_sentence(tokens: Sequence[Token], rulebase: RuleBase, semlex: SemLexicon,
                          dictionary: Dictionary, parser=None, *, weights=None) -> List[SenseAssignment]:
    return Disambiguator(rulebase, semlex, dictionary, weights, parser).sentence(tokens)


def disambiguate_relations(relations: Sequence[Relation], rulebase: RuleBase, semlex: SemLexicon,
                           dictionary: Dictionary, *, weights=None) -> List[SenseAssignment]:
    return Disambiguator(rulebase, semlex, dictionary, weights).relations(relations)


# --------------------------------------------------------------------------
# Output file: sent, tokidx (both 1-based), lemma, pos, sense, method, score, fired, translation

def format_score(a: SenseAssignment) -> str:
    if a.score is None:
        return "-"
    if a.method is Method.LEXICAL:
        return str(int(a.score))
    return format(a.score, ".12g")


def format_assignment(sent: int, a: SenseAssignment) -> str:
    fields = [str(sent), str(a.index + 1), a.lemma, str(a.pos),
              str(a.chosen) if a.chosen else "-", str(a.method), format_score(a),
              ",".join(a.fired) or "-", a.translation_hint or "-"]
    return "\t".join(f.replace("\t", " ") for f in fields)


def format_assignments(corpus: Iterable[Sequence[SenseAssignment]]) -> str:
    return "".join(f"{format_assignment(n, a)}\n"
                   for n, sent in enumerate(corpus, 1) for a in sent)


class AssignmentFormatError(Exception):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def read_assignments(source: str) -> List[Tuple[int, SenseAssignment]]:
    """(sentence number, assignment) pairs; indices back to 0-based."""
    out = []
    for lineno, line in enumerate(source.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 9:
            raise AssignmentFormatError(f"expected 9 fields, got {len(fields)}", lineno)
        sent, tok, lemma, pos, sense, method, score, fired, tr = fields
        try:
            m = Method(method)
            a = SenseAssignment(
                int(tok) - 1, lemma, POS.parse(pos),
                None if sense == "-" else SenseId.parse(sense), m,
                None if score == "-" else float(score),
                () if fired == "-" else tuple(fired.split(",")),
                None if tr == "-" else tr)
            out.append((int(sent), a))
        except ValueError as exc:
            raise AssignmentFormatError(str(exc), lineno) from None
    return out
