"""Score sense assignments against a gold-annotated corpus.

Gold file, one line per annotated token (indices 1-based)::

    sent<TAB>tokidx<TAB>lemma<TAB>POS<TAB>I.6[,I.4...]|UNASSIGNABLE

Coverage counts rule-fired words only; default-sense answers are scored in
their own row. Precision of the all-rules column pools the lexical and
semantic answers (a micro-average).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .dictionary import SenseId
from .disambiguator import Method, SenseAssignment
from .tags import POS

UNASSIGNABLE = "UNASSIGNABLE"
UNDEFINED = "—"

ROWS = ("Noun", "Verb", "Adjective", "All")
COLUMNS = ("Lexical", "Semantic", "AllRules")
_ROW_POS = {"Noun": POS.NOUN, "Verb": POS.VERB, "Adjective": POS.ADJ}
_COLUMN_METHODS = {
    "Lexical": {Method.LEXICAL},
    "Semantic": {Method.SEMANTIC},
    "AllRules": {Method.LEXICAL, Method.SEMANTIC},
}

#: Published figures of the original system, for comparison only.
REFERENCE_PRECISION = {"Lexical": 0.90, "Semantic": 0.50, "AllRules": 0.65}
REFERENCE_COVERAGE = {"Lexical": 0.19, "Semantic": 0.16, "AllRules": 0.35}


class GoldFormatError(Exception):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class AlignmentError(Exception):
    def __init__(self, positions: Sequence[Tuple[int, int, str]]):
        self.positions = list(positions)
        shown = "; ".join(f"sent {s} tok {t}: {why}" for s, t, why in self.positions)
        super().__init__(f"{len(self.positions)} gold item(s) not aligned: {shown}")


@dataclass(frozen=True)
class GoldAnnotation:
    sent: int
    tok: int
    lemma: str
    pos: POS
    senses: FrozenSet[SenseId] = frozenset()
    unassignable: bool = False

    def __post_init__(self):
        if self.unassignable == bool(self.senses):
            raise ValueError("gold item needs senses or the unassignable flag, not both")


def read_gold(source: str) -> List[GoldAnnotation]:
    out: List[GoldAnnotation] = []
    seen = set()
    for lineno, line in enumerate(source.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise GoldFormatError(f"expected 5 tab-separated fields, got {len(fields)}", lineno)
        sent, tok, lemma, pos_text, senses = (f.strip() for f in fields)
        try:
            pos = POS.parse(pos_text)
            if pos not in _ROW_POS.values():
                raise ValueError(f"gold POS must be NOUN, VERB or ADJ, got {pos}")
            if senses == UNASSIGNABLE:
                item = GoldAnnotation(int(sent), int(tok), lemma, pos, unassignable=True)
            else:
                ids = frozenset(SenseId.parse(s) for s in senses.split(","))
                item = GoldAnnotation(int(sent), int(tok), lemma, pos, ids)
        except ValueError as exc:
            raise GoldFormatError(str(exc), lineno) from None
        if (item.sent, item.tok) in seen:
            raise GoldFormatError(f"duplicate gold item sent {item.sent} tok {item.tok}", lineno)
        seen.add((item.sent, item.tok))
        out.append(item)
    return out


@dataclass(frozen=True)
class Cell:
    correct: int
    fired: int
    total: int

    @property
    def precision(self) -> Optional[float]:
        return self.correct / self.fired if self.fired else None

    @property
    def coverage(self) -> Optional[float]:
        return self.fired / self.total if self.total else None


@dataclass
class EvalReport:
    cells: Dict[Tuple[str, str], Cell] = field(default_factory=dict)
    default: Dict[str, Cell] = field(default_factory=dict)
    not_in_dictionary: int = 0
    no_matching_pos: int = 0
    unassignable: int = 0

    def precision(self, row: str, column: str) -> Optional[float]:
        return self.cells[(row, column)].precision

    def coverage(self, row: str, column: str) -> Optional[float]:
        return self.cells[(row, column)].coverage

    def default_accuracy(self, row: str = "All") -> Optional[float]:
        return self.default[row].precision

    @property
    def empty(self):
        return self.cells[("All", "AllRules")].total == 0 and not self.unassignable

    def render(self) -> str:
        def fmt(x):
            return UNDEFINED if x is None else f"{x:.2f}"

        header = ["", "Prec. Lexical", "Prec. Semantic", "Prec. AllRules",
                  "Cov. Lexical", "Cov. Semantic", "Cov. AllRules", "Default acc."]
        rows = [header]
        for row in ROWS:
            rows.append([row]
                        + [fmt(self.precision(row, c)) for c in COLUMNS]
                        + [fmt(self.coverage(row, c)) for c in COLUMNS]
                        + [fmt(self.default_accuracy(row))])
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) if i == 0 else cell.rjust(w)
                           for i, (cell, w) in enumerate(zip(r, widths))).rstrip()
                 for r in rows]
        return "\n".join(lines) + "\n\n" + self.key_values()

    def key_values(self) -> str:
        def val(x):
            return UNDEFINED if x is None else format(x, ".12g")

        out = []
        for row in ROWS:
            for col in COLUMNS:
                cell = self.cells[(row, col)]
                key = f"{row.lower()}.{col.lower()}"
                out.append(f"{key}.precision={val(cell.precision)}")
                out.append(f"{key}.coverage={val(cell.coverage)}")
                out.append(f"{key}.correct={cell.correct}")
                out.append(f"{key}.fired={cell.fired}")
                out.append(f"{key}.total={cell.total}")
            d = self.default[row]
            out.append(f"{row.lower()}.default.accuracy={val(d.precision)}")
            out.append(f"{row.lower()}.default.correct={d.correct}")
            out.append(f"{row.lower()}.default.count={d.fired}")
        out.append(f"not_in_dictionary={self.not_in_dictionary}")
        out.append(f"no_matching_pos={self.no_matching_pos}")
        out.append(f"unassignable={self.unassignable}")
        return "\n".join(out) + "\n"


def align(assignments: Iterable[Tuple[int, SenseAssignment]],
          gold: Iterable[GoldAnnotation]) -> List[Tuple[GoldAnnotation, SenseAssignment]]:
    """Pair each gold item with the system outcome at its (sentence, 1-based
    token) position. System rows without gold are ignored."""
    system: Dict[Tuple[int, int], SenseAssignment] = {
        (sent, a.index + 1): a for sent, a in assignments}
    pairs, bad = [], []
    for g in gold:
        a = system.get((g.sent, g.tok))
        if a is None:
            bad.append((g.sent, g.tok, "no system outcome"))
        elif a.lemma != g.lemma:
            bad.append((g.sent, g.tok, f"lemma {a.lemma!r} != gold {g.lemma!r}"))
        else:
            pairs.append((g, a))
    if bad:
        raise AlignmentError(bad)
    return pairs


def evaluate(assignments: Iterable[Tuple[int, SenseAssignment]],
             gold: Iterable[GoldAnnotation]) -> EvalReport:
    pairs = align(assignments, gold)
    report = EvalReport()
    scored = []
    for g, a in pairs:
        if g.unassignable:
            report.unassignable += 1
            continue
        if a.method is Method.NOT_IN_DICTIONARY:
            report.not_in_dictionary += 1
        elif a.method is Method.NO_MATCHING_POS:
            report.no_matching_pos += 1
        scored.append((g, a, a.chosen in g.senses))

    for row in ROWS:
        in_row = [(g, a, ok) for g, a, ok in scored
                  if row == "All" or g.pos is _ROW_POS[row]]
        for col in COLUMNS:
            fired = [ok for _, a, ok in in_row if a.method in _COLUMN_METHODS[col]]
            report.cells[(row, col)] = Cell(sum(fired), len(fired), len(in_row))
        defaults = [ok for _, a, ok in in_row if a.method is Method.DEFAULT]
        report.default[row] = Cell(sum(defaults), len(defaults), len(in_row))
    return report
