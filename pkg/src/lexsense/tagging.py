"""Tokenizer and naive tagger for dictionary example phrases.

Dictionary examples are short and formulaic, so a closed-class table, an
optional surface-form tag lexicon, and the dictionary's own headwords get
them tagged well enough for the shallow parser. Unknown words, collocates
included, fall back to nouns.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .dictionary import Dictionary, PartCategory
from .parser import Token, read_tagged_corpus
from .tags import POS, Feat


class UntaggableExample(ValueError):
    pass


F = Feat
_AUX_FIN = frozenset({F.FINITE})

# surface -> (lemma, POS, feats)
CLOSED_CLASS: Dict[str, Tuple[str, POS, frozenset]] = {}


def _add(pos, lemma, *surfaces, feats=frozenset()):
    for s in surfaces:
        CLOSED_CLASS[s] = (lemma, pos, frozenset(feats))


_add(POS.DET, "le", "le", "la", "les", "l'")
_add(POS.DET, "un", "un", "une", "des")
_add(POS.DET, "du", "du")
_add(POS.DET, "son", "son", "sa", "ses", "leur", "leurs")
_add(POS.DET, "mon", "mon", "ma", "mes")
_add(POS.DET, "ton", "ton", "ta", "tes")
_add(POS.DET, "notre", "notre", "nos")
_add(POS.DET, "votre", "votre", "vos")
_add(POS.DET, "ce", "ce", "cet", "cette", "ces")
_add(POS.DET, "chaque", "chaque")
_add(POS.DET, "quelque", "quelque", "quelques")
_add(POS.DET, "tout", "tout", "toute", "tous", "toutes")
_add(POS.ADP, "à", "à", "au", "aux")
for _s in ("au", "aux"):
    CLOSED_CLASS[_s] = ("à=le", POS.ADP, frozenset({F.CONTRACTION}))
_add(POS.ADP, "de", "de", "d'")
for _p in ("en", "dans", "sur", "sous", "pour", "par", "avec", "sans", "vers",
           "entre", "chez", "contre", "avant", "après", "pendant", "depuis", "selon"):
    _add(POS.ADP, _p, _p)
_add(POS.PRON, "je", "je", "j'")
_add(POS.PRON, "tu", "tu")
_add(POS.PRON, "il", "il", "ils")
_add(POS.PRON, "elle", "elle", "elles")
_add(POS.PRON, "on", "on")
_add(POS.PRON, "nous", "nous")
_add(POS.PRON, "vous", "vous")
_add(POS.PRON, "me", "me", "m'")
_add(POS.PRON, "te", "te", "t'")
_add(POS.PRON, "se", "se", "s'", feats={F.REFLEXIVE})
_add(POS.PRON, "lui", "lui")
_add(POS.PRON, "y", "y")
_add(POS.PRON, "ce", "c'", "ça", "cela")
_add(POS.PRON, "qui", "qui")
_add(POS.PRON, "quelqu'un", "qn", "quelqu'un")
_add(POS.PRON, "quelque_chose", "qch", "quelque_chose")
_add(POS.CCONJ, "et", "et")
_add(POS.CCONJ, "ou", "ou")
_add(POS.CCONJ, "mais", "mais")
_add(POS.CCONJ, "ni", "ni")
_add(POS.CCONJ, "or", "or")
_add(POS.SCONJ, "que", "que", "qu'")
_add(POS.SCONJ, "si", "si")
_add(POS.SCONJ, "quand", "quand")
_add(POS.SCONJ, "comme", "comme")
_add(POS.ADV, "ne", "ne", "n'")
for _a in ("pas", "plus", "jamais", "trop", "très", "bien", "mal", "moins", "aussi", "si"):
    if _a not in CLOSED_CLASS:
        _add(POS.ADV, _a, _a)
_add(POS.ADV, "plus_ou_moins", "plus_ou_moins")
_add(POS.AUX, "avoir", "ai", "as", "a", "avons", "avez", "ont", "avais", "avait",
     "avions", "aviez", "avaient", "eut", "aura", "aurait", feats=_AUX_FIN)
_add(POS.AUX, "avoir", "avoir", "ayant")
_add(POS.AUX, "être", "suis", "es", "est", "sommes", "êtes", "sont", "étais",
     "était", "étions", "étiez", "étaient", "fut", "sera", "serait", feats=_AUX_FIN)
_add(POS.AUX, "être", "être", "étant")
_add(POS.AUX, "être", "été", feats={F.PAST_PARTICIPLE})
for _p in (".", ",", ";", ":", "!", "?", "«", "»", "(", ")", "-", "--", "–", "—", "…", '"'):
    _add(POS.PUNCT, _p, _p)

#: Function words whose reading depends on the right context.
PRON_READINGS = {
    "le": ("le", POS.PRON), "la": ("le", POS.PRON), "les": ("le", POS.PRON),
    "l'": ("le", POS.PRON), "leur": ("leur", POS.PRON), "en": ("en", POS.PRON),
}

MULTIWORDS = (
    ("à", "chaque", "fois", "que"),
    ("plus", "ou", "moins"),
    ("mise", "en", "scène"),
    ("quelque", "chose"),
)

_WORD_RE = re.compile(r"[^\W\d_]+(?:[-'][^\W\d_]+)*'?|\d+|--|[^\w\s]", re.UNICODE)
_KEEP_APOSTROPHE = ("quelqu'un", "quelqu'une", "aujourd'hui", "presqu'île")

_ER_FINITE = ("erai", "eras", "era", "erons", "erez", "eront", "erais", "erait",
              "eraient", "aient", "ions", "iez", "ais", "ait", "ent", "ons", "ez",
              "es", "e", "ai", "as", "a", "âmes", "èrent")
_ER_PARTICIPLE = ("ées", "és", "ée", "é")


def tokenize(text: str) -> List[str]:
    """Split an example phrase into surface tokens.

    Elided articles and pronouns are split off (``l'alcool`` -> ``l'``,
    ``alcool``) and known multiword units are joined with underscores.
    """
    text = text.replace("’", "'")
    raw: List[str] = []
    for m in _WORD_RE.finditer(text):
        tok = m.group(0)
        low = tok.lower()
        if "'" in tok and low not in _KEEP_APOSTROPHE and not low.endswith("'"):
            head, _, rest = tok.partition("'")
            raw.append(head + "'")
            raw.append(rest)
        else:
            raw.append(tok)
    out: List[str] = []
    i = 0
    while i < len(raw):
        for mw in MULTIWORDS:
            n = len(mw)
            if tuple(t.lower() for t in raw[i:i + n]) == mw:
                out.append("_".join(raw[i:i + n]))
                i += n
                break
        else:
            out.append(raw[i])
            i += 1
    return out


def _verb_form(surface: str, infinitive: str) -> Optional[frozenset]:
    """Feature set if ``surface`` inflects an -er verb ``infinitive``, else None."""
    if surface == infinitive:
        return frozenset()
    if not infinitive.endswith("er"):
        return None
    stem = infinitive[:-2]
    if not surface.startswith(stem):
        return None
    ending = surface[len(stem):]
    if ending in _ER_PARTICIPLE:
        return frozenset({F.PAST_PARTICIPLE})
    if ending == "ant":
        return frozenset()
    if ending in _ER_FINITE:
        return frozenset({F.FINITE})
    return None


def _nominal_form(surface: str, lemma: str, adjective: bool) -> bool:
    if surface in (lemma, lemma + "s", lemma + "x"):
        return True
    return adjective and surface in (lemma + "e", lemma + "es", lemma + "ne", lemma + "nes")


class ExampleTagger:
    """Tags example phrases for one dictionary.

    Lookup order: the explicit tag lexicon, the closed-class table,
    capitalized non-initial words as proper nouns, inflected forms of the
    dictionary's headwords (the example's own headword first), and finally
    a noun reading of the lowercased surface form.
    """

    def __init__(self, dictionary: Optional[Dictionary] = None,
                 tag_lexicon: Optional[Dict[str, Token]] = None):
        self.tag_lexicon = dict(tag_lexicon or {})
        self.headwords: Dict[str, PartCategory] = {}
        for entry in dictionary or ():
            self.headwords.setdefault(entry.headword, entry.parts[0].category)

    def _open_class(self, surface: str, headword: Optional[str],
                    category: Optional[PartCategory]) -> Token:
        low = surface.lower()
        candidates = []
        if headword is not None:
            candidates.append((headword, category))
        candidates.extend(self.headwords.items())
        for lemma, cat in candidates:
            if cat in (PartCategory.VERB, PartCategory.PRONOMINAL_VERB):
                feats = _verb_form(low, lemma)
                if feats is not None:
                    return Token(surface, lemma, POS.VERB, feats)
            elif cat is not None and cat.corpus_pos is not None:
                if _nominal_form(low, lemma, cat is PartCategory.ADJECTIVE):
                    return Token(surface, lemma, cat.corpus_pos)
        return Token(surface, low, POS.NOUN)

    def tag(self, text: str, headword: Optional[str] = None,
            category: Optional[PartCategory] = None) -> List[Token]:
        """Tag ``text``; a ``~`` stands for ``headword`` when one is given."""
        if headword is not None:
            text = text.replace("~", headword)
        if not text.strip() or "~" in text or "/" in text:
            raise UntaggableExample(f"cannot tag example {text!r}")
        surfaces = tokenize(text)
        if not surfaces:
            raise UntaggableExample(f"cannot tag example {text!r}")
        tokens: List[Token] = []
        ambiguous: List[int] = []
        for i, surface in enumerate(surfaces):
            low = surface.lower()
            if surface in self.tag_lexicon:
                tokens.append(self.tag_lexicon[surface])
            elif low in self.tag_lexicon:
                tokens.append(self.tag_lexicon[low])
            elif low in CLOSED_CLASS:
                lemma, pos, feats = CLOSED_CLASS[low]
                tokens.append(Token(surface, lemma, pos, feats))
                if low in PRON_READINGS:
                    ambiguous.append(i)
            elif i > 0 and surface[:1].isupper() and surface.lower() not in self.headwords:
                tokens.append(Token(surface, surface, POS.PROPN))
            else:
                tokens.append(self._open_class(surface, headword, category))
        for i in reversed(ambiguous):
            tokens[i] = self._resolve(tokens, i)
        return self._mark_reflexives(tokens)

    @staticmethod
    def _resolve(tokens: List[Token], i: int) -> Token:
        tok = tokens[i]
        low = tok.surface.lower()
        j = i + 1
        while j < len(tokens) and (tokens[j].pos is POS.PRON or tokens[j].lemma == "ne"):
            j += 1
        if j >= len(tokens):
            return tok
        nxt = tokens[j]
        if low == "en" and nxt.pos is POS.VERB and not nxt.feats and nxt.surface.endswith("ant"):
            return tok
        if nxt.is_verbal:
            lemma, pos = PRON_READINGS[low]
            return Token(tok.surface, lemma, pos)
        return tok

    @staticmethod
    def _mark_reflexives(tokens: List[Token]) -> List[Token]:
        out = list(tokens)
        for i, tok in enumerate(tokens):
            if tok.pos is POS.PRON and tok.has(F.REFLEXIVE):
                j = i + 1
                while j < len(out) and not out[j].is_verbal:
                    j += 1
                if j < len(out):
                    t = out[j]
                    out[j] = Token(t.surface, t.lemma, t.pos, t.feats | {F.REFLEXIVE})
        return out


def load_tag_lexicon(source: str) -> Dict[str, Token]:
    """Surface-form lexicon in the tagged-corpus line format."""
    out: Dict[str, Token] = {}
    for sentence in read_tagged_corpus(source):
        for tok in sentence:
            out[tok.surface] = tok
    return out


def read_tag_lexicon(path) -> Dict[str, Token]:
    with open(path, encoding="utf-8") as f:
        return load_tag_lexicon(f.read())
