"""Part-of-speech and token feature vocabulary shared by every module."""

from enum import Enum


class POS(str, Enum):
    """Corpus-level part-of-speech tags (Universal Dependencies names)."""

    NOUN = "NOUN"
    PROPN = "PROPN"
    VERB = "VERB"
    AUX = "AUX"
    ADJ = "ADJ"
    ADV = "ADV"
    DET = "DET"
    ADP = "ADP"
    PRON = "PRON"
    CCONJ = "CCONJ"
    SCONJ = "SCONJ"
    PART = "PART"
    NUM = "NUM"
    INTJ = "INTJ"
    PUNCT = "PUNCT"
    X = "X"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text):
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"unknown POS tag {text!r}") from None


#: Tags that receive a sense assignment.
CONTENT_POS = frozenset({POS.NOUN, POS.VERB, POS.ADJ})


class Feat(str, Enum):
    REFLEXIVE = "Reflexive"
    PAST_PARTICIPLE = "PastParticiple"
    FINITE = "FiniteVerb"
    AUXILIARY = "Auxiliary"
    CONTRACTION = "Contraction"
    ANIMATE = "Animate"

    def __str__(self):
        return self.value

    @classmethod
    def parse_list(cls, text):
        text = text.strip()
        if text in ("", "-", "_"):
            return frozenset()
        feats = set()
        for name in text.split(","):
            name = name.strip()
            try:
                feats.add(cls(name))
            except ValueError:
                raise ValueError(f"unknown token feature {name!r}") from None
        return frozenset(feats)


def format_feats(feats):
    if not feats:
        return "-"
    return ",".join(sorted(str(f) for f in feats))
