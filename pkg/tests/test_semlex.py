import random

import pytest

from lexsense.semlex import LexiconError, SemLexicon, load_lexicon
from lexsense.tags import POS


def test_worked_class_sets(lexicon):
    assert lexicon.classes_of("pays", POS.NOUN) == {"ESPACE_LOCATIF", "GEO", "HUMAIN_COLLECTIF"}
    assert lexicon.classes_of("lieu", POS.NOUN) == {"ENTITE", "ESPACE_LOCATIF", "ANIMAL"}
    assert lexicon.classes_of("sort", POS.NOUN) == {"EVENEMENT", "ABSTRAIT"}
    assert lexicon.classes_of("dieu", POS.NOUN) == lexicon.classes_of("style", POS.NOUN) == {"ABSTRAIT"}


def test_fixture_matches_file(lexicon, data_dir):
    expected = {}
    for line in (data_dir / "lexicon.tsv").read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            lemma, pos, classes = line.split("\t")
            expected[(lemma, pos)] = set(classes.split(","))
    assert len(expected) >= 30
    for (lemma, pos), classes in expected.items():
        assert lexicon.classes_of(lemma, POS.parse(pos)) == classes


@pytest.mark.parametrize("lemma, pos", [
    ("inconnu", POS.NOUN), ("pays", POS.VERB), ("pays", POS.ADJ), ("abandonner", POS.VERB),
])
def test_lookups_never_fail(lexicon, lemma, pos):
    assert lexicon.classes_of(lemma, pos) == frozenset()


def test_proper_nouns_use_noun_layer():
    lex = load_lexicon("Paris\tNOUN\tVILLE\n")
    assert lex.classes_of("Paris", POS.PROPN) == {"VILLE"}


def test_union_without_pos():
    lex = load_lexicon("fort\tADJ\tQUALITE\nfort\tNOUN\tLIEU_MILITAIRE\n")
    assert lex.classes_of("fort") == {"QUALITE", "LIEU_MILITAIRE"}
    assert lex.classes_of("fort", POS.ADJ) == {"QUALITE"}


def test_empty_and_comments():
    assert len(load_lexicon("")) == 0
    assert load_lexicon("# only a comment\n\n").classes_of("x", POS.NOUN) == frozenset()


def test_repeated_lines_union():
    lex = load_lexicon("a\tNOUN\tX,Y\na\tNOUN\tY,Z\n")
    assert lex.classes_of("a", POS.NOUN) == {"X", "Y", "Z"}


def test_whitespace_separated_lines():
    assert load_lexicon("pays NOUN GEO\n").classes_of("pays", POS.NOUN) == {"GEO"}


def test_line_order_irrelevant(data_dir):
    lines = (data_dir / "lexicon.tsv").read_text(encoding="utf-8").splitlines()
    base = load_lexicon("\n".join(lines))
    rng = random.Random(7)
    for _ in range(5):
        rng.shuffle(lines)
        assert load_lexicon("\n".join(lines)) == base


def test_inventory():
    lex = load_lexicon("a\tNOUN\tX,Y\nb\tADJ\tQ\n")
    assert lex.inventory == {"X", "Y", "Q"}
    assert lex.inventory_for(POS.NOUN) == {"X", "Y"}


@pytest.mark.parametrize("text, line", [
    ("good\tNOUN\tX\nbad line\n", 2),
    ("a\tNOUN\t\n", 1),
    ("a\tNOUN\t ,\n", 1),
    ("a\tNOUN\tlower\n", 1),
    ("a\tBOGUS\tX\n", 1),
    ("# c\na\tVERB\tX\n", 2),
])
def test_errors_carry_line(text, line):
    with pytest.raises(LexiconError) as exc:
        load_lexicon(text)
    assert exc.value.line == line


def test_constructor_rejects_unclassed_pos():
    with pytest.raises(LexiconError):
        SemLexicon({("x", POS.VERB): {"A"}})
