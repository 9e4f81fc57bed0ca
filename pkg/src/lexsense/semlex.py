"""Semantic-class lexicon: lemma -> set of coarse class labels.

File format, one line per (lemma, POS)::

    # comment
    pays<TAB>NOUN<TAB>ESPACE_LOCATIF,GEO,HUMAIN_COLLECTIF

Repeated (lemma, POS) lines are unioned. Only nouns, adjectives and
adverbs carry classes; lookups for any other tag return the empty set.
"""

import re
from collections import defaultdict
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .tags import POS

CLASS_RE = re.compile(r"^[A-Z][A-Z_]*$")

#: Tags with a class layer. Proper nouns share the noun layer.
CLASSED_POS = (POS.NOUN, POS.ADJ, POS.ADV)


class LexiconError(Exception):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _layer(pos: POS) -> Optional[POS]:
    if pos is POS.PROPN:
        return POS.NOUN
    return pos if pos in CLASSED_POS else None


class SemLexicon:
    def __init__(self, mapping: Optional[Dict[Tuple[str, POS], Iterable[str]]] = None):
        self._classes: Dict[Tuple[str, POS], FrozenSet[str]] = {}
        for (lemma, pos), classes in (mapping or {}).items():
            layer = _layer(pos)
            if layer is None:
                raise LexiconError(f"no class layer for {pos}")
            key = (lemma, layer)
            self._classes[key] = self._classes.get(key, frozenset()) | frozenset(classes)

    def classes_of(self, lemma: str, pos: Optional[POS] = None) -> FrozenSet[str]:
        """Classes of ``lemma``; with no POS, the union over all layers."""
        if pos is None:
            out = frozenset()
            for layer in CLASSED_POS:
                out |= self._classes.get((lemma, layer), frozenset())
            return out
        layer = _layer(pos)
        if layer is None:
            return frozenset()
        return self._classes.get((lemma, layer), frozenset())

    def __len__(self):
        return len(self._classes)

    def __eq__(self, other):
        return isinstance(other, SemLexicon) and self._classes == other._classes

    def items(self):
        return sorted(self._classes.items(), key=lambda kv: (kv[0][0], kv[0][1].value))

    @property
    def inventory(self) -> FrozenSet[str]:
        out = set()
        for classes in self._classes.values():
            out |= classes
        return frozenset(out)

    def inventory_for(self, pos: POS) -> FrozenSet[str]:
        layer = _layer(pos)
        out = set()
        for (_, p), classes in self._classes.items():
            if p is layer:
                out |= classes
        return frozenset(out)


def classes_of(lex: SemLexicon, lemma: str, pos: Optional[POS] = None) -> FrozenSet[str]:
    return lex.classes_of(lemma, pos)


def load_lexicon(source: str) -> SemLexicon:
    mapping = defaultdict(set)
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else line.split(None, 2)
        if len(fields) != 3:
            raise LexiconError("expected 'lemma<TAB>POS<TAB>classes'", lineno)
        lemma, pos_text, class_text = (f.strip() for f in fields)
        if not lemma or any(c.isspace() for c in lemma):
            raise LexiconError(f"invalid lemma {lemma!r}", lineno)
        try:
            pos = POS.parse(pos_text)
        except ValueError as exc:
            raise LexiconError(str(exc), lineno) from None
        if _layer(pos) is None:
            raise LexiconError(f"no class layer for {pos}", lineno)
        classes = [c.strip() for c in class_text.split(",") if c.strip()]
        if not classes:
            raise LexiconError(f"empty class list for {lemma!r}", lineno)
        for c in classes:
            if not CLASS_RE.match(c):
                raise LexiconError(f"invalid class label {c!r}", lineno)
        mapping[(lemma, _layer(pos))].update(classes)
    return SemLexicon(mapping)


def read_lexicon(path) -> SemLexicon:
    with open(path, encoding="utf-8") as f:
        return load_lexicon(f.read())
