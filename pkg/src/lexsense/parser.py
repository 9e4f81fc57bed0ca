"""Deterministic shallow parser over tagged, lemmatized French sentences.

Two passes:

1. ``chunk`` marks non-overlapping core phrases (NP, AP, PP, VC) by
   longest match at each position.
2. ``extract_relations`` reads functional relations off the chunk sequence,
   one clause at a time. Clauses are delimited by punctuation and
   conjunctions.

Relations are written the way the relation files spell them. For SUBJ,
RELSUBJ, SUBJPASS and ADJ the dependent comes first (``SUBJ(il,faire)``,
``ADJ(premier,arme)``); every other kind is written head first
(``DOBJ(abandonner,protagoniste)``, ``VMODOBJ(abandonner,à,sort)``).
``head`` is always the syntactic governor: the verb for verbal relations,
the noun for adjectival ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .tags import POS, Feat, format_feats


class CorpusFormatError(Exception):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: POS
    feats: FrozenSet[Feat] = frozenset()

    def __post_init__(self):
        if not self.lemma:
            raise ValueError(f"token {self.surface!r} has an empty lemma")

    @property
    def is_aux(self):
        return self.pos is POS.AUX or Feat.AUXILIARY in self.feats

    @property
    def is_verbal(self):
        return self.pos is POS.VERB or self.is_aux

    def has(self, feat):
        return feat in self.feats


class RelationKind(Enum):
    SUBJ = "SUBJ"
    RELSUBJ = "RELSUBJ"
    SUBJPASS = "SUBJPASS"
    DOBJ = "DOBJ"
    PAGENT = "PAGENT"
    VMODOBJ = "VMODOBJ"
    ADJ = "ADJ"
    PADJ = "PADJ"
    ATTR = "ATTR"
    NN = "NN"
    NNPREP = "NNPREP"

    def __str__(self):
        return self.value

    @property
    def has_prep(self):
        return self in (RelationKind.VMODOBJ, RelationKind.NNPREP)

    @property
    def dep_first(self):
        return self in _DEP_FIRST


_DEP_FIRST = frozenset({RelationKind.SUBJ, RelationKind.RELSUBJ,
                        RelationKind.SUBJPASS, RelationKind.ADJ})

# Coarse POS of (head, dep) per kind; used when relations arrive without tokens.
RELATION_ARG_POS = {
    RelationKind.SUBJ: (POS.VERB, POS.NOUN),
    RelationKind.RELSUBJ: (POS.VERB, POS.NOUN),
    RelationKind.SUBJPASS: (POS.VERB, POS.NOUN),
    RelationKind.DOBJ: (POS.VERB, POS.NOUN),
    RelationKind.PAGENT: (POS.VERB, POS.NOUN),
    RelationKind.VMODOBJ: (POS.VERB, POS.NOUN),
    RelationKind.ADJ: (POS.NOUN, POS.ADJ),
    RelationKind.PADJ: (POS.NOUN, POS.ADJ),
    RelationKind.ATTR: (POS.NOUN, POS.ADJ),
    RelationKind.NN: (POS.NOUN, POS.NOUN),
    RelationKind.NNPREP: (POS.NOUN, POS.NOUN),
}


@dataclass(frozen=True)
class Relation:
    kind: RelationKind
    head: str
    dep: str
    prep: Optional[str] = None
    head_index: Optional[int] = field(default=None, compare=False)
    dep_index: Optional[int] = field(default=None, compare=False)
    head_pos: Optional[POS] = field(default=None, compare=False)
    dep_pos: Optional[POS] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind.has_prep != (self.prep is not None):
            raise ValueError(f"{self.kind} {'needs' if self.kind.has_prep else 'takes no'} preposition")
        if self.head_index is not None and self.head_index == self.dep_index:
            raise ValueError("relation head and dependent are the same token")

    def __str__(self):
        if self.prep is not None:
            return f"{self.kind}({self.head},{self.prep},{self.dep})"
        if self.kind.dep_first:
            return f"{self.kind}({self.dep},{self.head})"
        return f"{self.kind}({self.head},{self.dep})"

    @classmethod
    def parse(cls, text: str) -> "Relation":
        m = _RELATION_RE.match(text.strip())
        if not m:
            raise ValueError(f"malformed relation {text!r}")
        try:
            kind = RelationKind(m.group(1))
        except ValueError:
            raise ValueError(f"unknown relation kind {m.group(1)!r}") from None
        args = [a.strip() for a in m.group(2).split(",")]
        if any(not a for a in args):
            raise ValueError(f"empty argument in {text!r}")
        if kind.has_prep:
            if len(args) != 3:
                raise ValueError(f"{kind} takes (head,prep,dep): {text!r}")
            head, prep, dep = args
        else:
            if len(args) != 2:
                raise ValueError(f"{kind} takes two arguments: {text!r}")
            prep = None
            dep, head = args if kind.dep_first else reversed(args)
        return cls(kind, head, dep, prep)

    @property
    def key(self):
        return (self.kind, self.head, self.prep, self.dep)


_RELATION_RE = re.compile(r"^([A-Z]+)\((.*)\)$")


# --------------------------------------------------------------------------
# Chunking

class ChunkKind(Enum):
    NP = "NP"
    AP = "AP"
    PP = "PP"
    VC = "VC"
    SC = "SC"  # reserved for clause brackets; the cascade does not build them


@dataclass(frozen=True)
class Chunk:
    kind: ChunkKind
    start: int
    end: int  # exclusive
    head: int
    prep: Optional[int] = None

    @property
    def span(self):
        return (self.start, self.end)

    def __len__(self):
        return self.end - self.start


CLITICS = frozenset({"le", "la", "les", "lui", "leur", "me", "te", "se",
                     "nous", "vous", "y", "en"})
OBJECT_CLITICS = frozenset({"le", "la", "les", "me", "te", "nous", "vous"})
SUBJECT_OR_CLITIC = frozenset({"nous", "vous"})
NEGATION = frozenset({"ne", "pas", "plus", "jamais", "point", "guère"})
COPULAS = frozenset({"être", "devenir", "sembler", "paraître", "rester", "demeurer"})
PASSIVE_AUX = "être"
AGENT_PREP = "par"
RELATIVE_SUBJECT = "qui"
ANIMATE_PLACEHOLDER = "quelqu'un"


def _is_neg(tok: Token) -> bool:
    return tok.pos in (POS.ADV, POS.PART) and tok.lemma in NEGATION


def _is_nominal(tok: Token) -> bool:
    return tok.pos in (POS.NOUN, POS.PROPN)


def _is_gerund_marker(tokens, i) -> bool:
    tok = tokens[i]
    if tok.pos is not POS.ADP or tok.lemma != "en" or i + 1 >= len(tokens):
        return False
    nxt = tokens[i + 1]
    return (nxt.pos is POS.VERB and not nxt.has(Feat.FINITE)
            and not nxt.has(Feat.PAST_PARTICIPLE))


def _match_vc(tokens, i, after_np) -> Optional[Chunk]:
    n = len(tokens)
    j = i
    if _is_gerund_marker(tokens, j):
        j += 1
    while j < n:
        tok = tokens[j]
        if _is_neg(tok):
            j += 1
        elif tok.pos is POS.PRON and tok.lemma in CLITICS:
            # nous/vous opening a clause are subjects, not clitics
            if tok.lemma in SUBJECT_OR_CLITIC and j == i and not after_np:
                break
            j += 1
        else:
            break
    last_verbal = None
    while j < n and (tokens[j].is_aux or (_is_neg(tokens[j]) and last_verbal is not None)):
        if tokens[j].is_aux:
            last_verbal = j
        j += 1
    if j < n and tokens[j].pos is POS.VERB:
        return Chunk(ChunkKind.VC, i, j + 1, j)
    if last_verbal is not None:
        return Chunk(ChunkKind.VC, i, last_verbal + 1, last_verbal)
    return None


def _match_np(tokens, i) -> Optional[Chunk]:
    n = len(tokens)
    tok = tokens[i]
    if tok.pos is POS.PRON:
        return Chunk(ChunkKind.NP, i, i + 1, i)
    j = i
    if tok.pos is POS.DET:
        j += 1
    while j < n:
        if tokens[j].pos in (POS.ADJ, POS.NUM):
            j += 1
        elif (tokens[j].pos is POS.ADV and j + 1 < n and tokens[j + 1].pos is POS.ADJ
              and not _is_neg(tokens[j])):
            j += 2
        else:
            break
    k = j
    while k < n and _is_nominal(tokens[k]):
        k += 1
    if k == j:
        return None
    return Chunk(ChunkKind.NP, i, k, k - 1)


def _match_pp(tokens, i) -> Optional[Chunk]:
    if tokens[i].pos is not POS.ADP or _is_gerund_marker(tokens, i) or i + 1 >= len(tokens):
        return None
    np = _match_np(tokens, i + 1)
    if np is None:
        return None
    return Chunk(ChunkKind.PP, i, np.end, np.head, prep=i)


def _match_ap(tokens, i) -> Optional[Chunk]:
    n = len(tokens)
    j = i
    if tokens[j].pos is POS.ADV and not _is_neg(tokens[j]):
        j += 1
    if j < n and tokens[j].pos is POS.ADJ:
        return Chunk(ChunkKind.AP, i, j + 1, j)
    return None


def chunk(tokens: Sequence[Token]) -> List[Chunk]:
    """Longest-match chunking; on equal length VC > PP > NP > AP."""
    chunks: List[Chunk] = []
    i = 0
    while i < len(tokens):
        after_np = bool(chunks) and chunks[-1].kind is ChunkKind.NP and chunks[-1].end == i
        candidates = [c for c in (_match_vc(tokens, i, after_np), _match_pp(tokens, i),
                                  _match_np(tokens, i), _match_ap(tokens, i)) if c]
        if candidates:
            best = max(candidates, key=len)  # max keeps the first of equal lengths
            chunks.append(best)
            i = best.end
        else:
            i += 1
    return chunks


# --------------------------------------------------------------------------
# Relation extraction

def _is_boundary(tok: Token) -> bool:
    return tok.pos in (POS.PUNCT, POS.CCONJ, POS.SCONJ)


def _clauses(tokens, chunks) -> List[List[Chunk]]:
    clauses: List[List[Chunk]] = [[]]
    ci = 0
    for i, tok in enumerate(tokens):
        if _is_boundary(tok):
            if clauses[-1]:
                clauses.append([])
            continue
        if ci < len(chunks) and chunks[ci].start == i:
            clauses[-1].append(chunks[ci])
            ci += 1
    return [c for c in clauses if c]


class _Emitter:
    def __init__(self, tokens):
        self.tokens = tokens
        self.out: List[Relation] = []
        self.seen = set()

    def __call__(self, kind, head, dep, prep=None, dep_lemma=None):
        toks = self.tokens
        rel = Relation(kind, toks[head].lemma, dep_lemma or toks[dep].lemma,
                       toks[prep].lemma if prep is not None else None,
                       head_index=head, dep_index=dep,
                       head_pos=toks[head].pos, dep_pos=toks[dep].pos)
        ident = (rel.key, head, dep)
        if ident not in self.seen:
            self.seen.add(ident)
            self.out.append(rel)


def _adjacent(tokens, left: Chunk, right: Chunk) -> bool:
    """Chunks are adjacent when only adverbs separate them."""
    return all(tokens[k].pos in (POS.ADV, POS.PART) for k in range(left.end, right.start))


def _np_internal(tokens, c: Chunk, emit):
    nouns = [k for k in range(c.start, c.end) if _is_nominal(tokens[k])]
    for k in range(c.start, c.end):
        if tokens[k].pos is POS.ADJ:
            following = [n for n in nouns if n > k]
            if following:
                emit(RelationKind.ADJ, following[0], k)
    for a, b in zip(nouns, nouns[1:]):
        emit(RelationKind.NN, a, b)


def _verbal(tokens, clause, ci, emit):
    vc = clause[ci]
    verb = vc.head
    vtoks = [tokens[k] for k in range(vc.start, vc.end)]
    passive = (tokens[verb].pos is POS.VERB and tokens[verb].has(Feat.PAST_PARTICIPLE)
               and any(t.is_aux and t.lemma == PASSIVE_AUX for t in vtoks))
    copular = not passive and tokens[verb].lemma in COPULAS
    finite = any(t.has(Feat.FINITE) for t in vtoks)

    subject = None
    if finite and ci > 0:
        prev = clause[ci - 1]
        if prev.kind is ChunkKind.NP and _adjacent(tokens, prev, vc):
            if tokens[prev.head].lemma == RELATIVE_SUBJECT and tokens[prev.head].pos is POS.PRON:
                if ci > 1:
                    ante = clause[ci - 2]
                    if ante.kind in (ChunkKind.NP, ChunkKind.PP) and _adjacent(tokens, ante, prev):
                        emit(RelationKind.RELSUBJ, verb, ante.head)
                        subject = ante.head
            else:
                kind = RelationKind.SUBJPASS if passive else RelationKind.SUBJ
                emit(kind, verb, prev.head)
                subject = prev.head

    for k in range(vc.start, vc.end):
        tok = tokens[k]
        if (k != verb and tok.pos is POS.PRON and tok.lemma in OBJECT_CLITICS
                and not tok.has(Feat.REFLEXIVE)):
            dep_lemma = ANIMATE_PLACEHOLDER if tok.has(Feat.ANIMATE) else None
            emit(RelationKind.DOBJ, verb, k, dep_lemma=dep_lemma)

    prev = vc
    for c in clause[ci + 1:]:
        if c.kind is ChunkKind.VC or not _adjacent(tokens, prev, c):
            break
        first = prev is vc
        if c.kind is ChunkKind.NP:
            if (first and not passive and not copular
                    and tokens[c.head].lemma != RELATIVE_SUBJECT):
                emit(RelationKind.DOBJ, verb, c.head)
        elif c.kind is ChunkKind.PP:
            if passive and tokens[c.prep].lemma == AGENT_PREP:
                emit(RelationKind.PAGENT, verb, c.head)
            else:
                emit(RelationKind.VMODOBJ, verb, c.head, prep=c.prep)
        elif c.kind is ChunkKind.AP:
            if first and copular and subject is not None:
                emit(RelationKind.ATTR, subject, c.head)
        prev = c


def _nominal_chain(tokens, clause, emit):
    nominal = None
    prev = None
    for c in clause:
        if prev is not None and not _adjacent(tokens, prev, c):
            nominal = None
        if c.kind is ChunkKind.VC:
            nominal = None
        elif c.kind is ChunkKind.AP:
            if nominal is not None:
                emit(RelationKind.PADJ, nominal, c.head)
        elif c.kind is ChunkKind.PP:
            if nominal is not None:
                emit(RelationKind.NNPREP, nominal, c.head, prep=c.prep)
            nominal = c.head
        elif c.kind is ChunkKind.NP:
            nominal = c.head
        prev = c


def extract_relations(tokens: Sequence[Token], chunks: Optional[Sequence[Chunk]] = None) -> List[Relation]:
    """Functional relations of one sentence, deduplicated, in emission order."""
    tokens = list(tokens)
    if chunks is None:
        chunks = chunk(tokens)
    emit = _Emitter(tokens)
    for clause in _clauses(tokens, list(chunks)):
        for c in clause:
            if c.kind in (ChunkKind.NP, ChunkKind.PP):
                _np_internal(tokens, c, emit)
        for ci, c in enumerate(clause):
            if c.kind is ChunkKind.VC:
                _verbal(tokens, clause, ci, emit)
        _nominal_chain(tokens, clause, emit)
    return emit.out


def parse_sentence(tokens: Sequence[Token]) -> List[Relation]:
    return extract_relations(tokens, chunk(tokens))


class ShallowParser:
    """The default parser object handed to rule extraction and application."""

    def parse(self, tokens: Sequence[Token]) -> List[Relation]:
        return parse_sentence(tokens)

    def chunk(self, tokens: Sequence[Token]) -> List[Chunk]:
        return chunk(tokens)


# --------------------------------------------------------------------------
# File formats

def read_tagged_corpus(source: str) -> List[List[Token]]:
    """``surface<TAB>lemma<TAB>POS<TAB>feats`` lines; blank line between sentences."""
    sentences: List[List[Token]] = []
    current: List[Token] = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        if line.startswith("#") and "\t" not in line:
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise CorpusFormatError("expected 'surface<TAB>lemma<TAB>POS<TAB>feats'", lineno)
        surface, lemma, pos_text = fields[:3]
        try:
            pos = POS.parse(pos_text)
            feats = Feat.parse_list(fields[3] if len(fields) == 4 else "-")
            current.append(Token(surface, lemma, pos, feats))
        except ValueError as exc:
            raise CorpusFormatError(str(exc), lineno) from None
    if current:
        sentences.append(current)
    return sentences


def format_tagged_corpus(sentences: Iterable[Sequence[Token]]) -> str:
    blocks = []
    for sent in sentences:
        blocks.append("".join(f"{t.surface}\t{t.lemma}\t{t.pos}\t{format_feats(t.feats)}\n"
                              for t in sent))
    return "\n".join(blocks)


def read_relation_file(source: str) -> List[List[Relation]]:
    """Relation lines grouped by ``# sent N`` separators, in file order."""
    sentences: List[List[Relation]] = []
    current: Optional[List[Relation]] = None
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not re.match(r"^#\s*sent\b", line):
                continue
            current = []
            sentences.append(current)
            continue
        if current is None:
            current = []
            sentences.append(current)
        try:
            rel = Relation.parse(line)
        except ValueError as exc:
            raise CorpusFormatError(str(exc), lineno) from None
        head_pos, dep_pos = RELATION_ARG_POS[rel.kind]
        current.append(Relation(rel.kind, rel.head, rel.dep, rel.prep,
                                head_pos=head_pos, dep_pos=dep_pos))
    return sentences


def format_relation_file(sentences: Iterable[Iterable[Relation]]) -> str:
    out = []
    for n, rels in enumerate(sentences, 1):
        out.append(f"# sent {n}\n")
        out.extend(f"{r}\n" for r in rels)
    return "".join(out)
