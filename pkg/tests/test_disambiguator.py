import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from lexsense.dictionary import Dictionary, ExampleKind, SenseId, parse_dictionary
from lexsense.disambiguator import (
    DEFAULT_WEIGHTS, AssignmentFormatError, DegenerateDistance, Disambiguator, Method,
    SenseAssignment, WeightOrderError, class_distance, class_distance_exact, disambiguate_relations,
    disambiguate_word, equivalent_patterns, format_assignments, parse_weights, read_assignments,
    validate_weights,
)
from lexsense.parser import Relation, RelationKind
from lexsense.rulebase import Rule, RuleBase, RulePattern, Slot
from lexsense.semlex import SemLexicon
from lexsense.tags import POS

S = SenseId.parse
K = RelationKind
I1, I2, I3 = S("I.1"), S("I.2"), S("I.3")

# A verb with three senses and some nouns; rules are built per test.
VERB_XML = ("<dictionary><entry><hw>v</hw><part><pos>vtr</pos>"
            + "".join(f"<sense><tr>t{n}</tr></sense>" for n in range(1, 4))
            + "</part></entry></dictionary>")
V_DICT = Dictionary(parse_dictionary(VERB_XML))
AMB = (I1, I2, I3)


def lex(result, kind, arg, source=ExampleKind.GENERAL, prep=None, slot=Slot.HEAD):
    return Rule("v", POS.VERB, AMB, RulePattern(kind, prep, slot, arg), source, 1, result)


def sem(result, kind, classes, source=ExampleKind.GENERAL, prep=None, slot=Slot.HEAD):
    return Rule("v", POS.VERB, AMB, RulePattern(kind, prep, slot, frozenset(classes)), source, 1,
                result)


def dobj(noun):
    return Relation(K.DOBJ, "v", noun, head_pos=POS.VERB, dep_pos=POS.NOUN)


def subjpass(noun):
    return Relation(K.SUBJPASS, "v", noun, head_pos=POS.VERB, dep_pos=POS.NOUN)


def run(rules, relations, semlex=None, weights=None):
    return disambiguate_word("v", POS.VERB, relations, RuleBase(rules), semlex or SemLexicon(),
                             V_DICT, weights=weights)


# --------------------------------------------------------------------------
# worked examples on the fixtures

def test_fate_sense_lexical(corpus, abandonner_rules, lexicon, abandonner_dict):
    out = Disambiguator(abandonner_rules, lexicon, abandonner_dict).sentence(corpus[0])
    [a] = [a for a in out if a.lemma == "abandonner"]
    assert (a.chosen, a.method) == (S("I.6"), Method.LEXICAL)
    rules = dict(abandonner_rules.identified("abandonner"))
    assert any(rules[rid].pattern.describe("abandonner") == "VMODOBJ(abandonner,à,sort)"
               for rid in a.fired)


def test_leave_place_semantic(abandonner_rules, lexicon, abandonner_dict):
    a, pays = disambiguate_relations([Relation.parse("DOBJ(abandonner,pays)")], abandonner_rules,
                                     lexicon, abandonner_dict)
    assert pays.method is Method.NOT_IN_DICTIONARY
    assert (a.chosen, a.method) == (S("I.4"), Method.SEMANTIC)
    assert a.score == pytest.approx(0.8, abs=1e-12)


def test_documented_adjective_error(corpus, mini_rules, lexicon, mini_dict):
    out = Disambiguator(mini_rules, lexicon, mini_dict).sentence(corpus[2])
    [a] = [a for a in out if a.lemma == "bon"]
    assert (a.chosen, a.method, a.score) == (S("II.2"), Method.SEMANTIC, 0.0)
    [rid] = a.fired
    assert dict(mini_rules.identified("bon"))[rid].pattern.describe("bon") == "ADJ(bon,ABSTRAIT)"


def test_golden_assignments(corpus, mini_rules, lexicon, mini_dict, data_dir):
    out = Disambiguator(mini_rules, lexicon, mini_dict).corpus(corpus)
    assert format_assignments(out) == (data_dir / "golden_assignments.tsv").read_text(encoding="utf-8")


def test_passive_equals_active(corpus, mini_rules, lexicon, mini_dict):
    dis = Disambiguator(mini_rules, lexicon, mini_dict)
    pick = [[(a.chosen, a.method, a.score) for a in dis.sentence(s) if a.lemma == "écrire"]
            for s in (corpus[3], corpus[4])]
    assert pick[0] == pick[1] == [(S("I.2"), Method.LEXICAL, 6)]


# --------------------------------------------------------------------------
# outcome kinds

def test_not_in_dictionary():
    a = run([], [])
    assert a.method is Method.DEFAULT
    b = disambiguate_word("zut", POS.NOUN, [], RuleBase(), SemLexicon(), V_DICT)
    assert (b.method, b.chosen, b.index) == (Method.NOT_IN_DICTIONARY, None, -1)


def test_no_matching_pos():
    dis = Disambiguator(RuleBase(), SemLexicon(), V_DICT)
    [a] = dis.relations([Relation(K.NN, "v", "x", head_pos=POS.NOUN, dep_pos=POS.PROPN)])
    assert (a.method, a.chosen) == (Method.NO_MATCHING_POS, None)


def test_default_takes_first_sense():
    a = run([lex(I2, K.DOBJ, "pomme")], [dobj("poire")])
    assert (a.chosen, a.method, a.fired, a.translation_hint) == (I1, Method.DEFAULT, (), "t1")


def test_lexical_sum_over_relations():
    rules = [lex(I2, K.DOBJ, "a"), lex(I2, K.VMODOBJ, "b", prep="à"),
             lex(I3, K.DOBJ, "a", ExampleKind.USAGE)]
    rels = [dobj("a"), Relation(K.VMODOBJ, "v", "b", "à", dep_pos=POS.NOUN)]
    a = run(rules, rels)
    assert (a.chosen, a.score) == (I2, 2)


def test_lexical_tie_goes_to_lower_sense():
    a = run([lex(I3, K.DOBJ, "a"), lex(I2, K.DOBJ, "a")], [dobj("a")])
    assert (a.chosen, a.score) == (I2, 1)


def test_semantic_skips_disjoint_and_unknown_classes():
    semlex = SemLexicon({("n", POS.NOUN): {"X"}})
    assert run([sem(I2, K.DOBJ, {"Y"})], [dobj("n")], semlex).method is Method.DEFAULT
    assert run([sem(I2, K.DOBJ, {"Y"})], [dobj("unknown")], semlex).method is Method.DEFAULT


def test_semantic_tie_breaks():
    semlex = SemLexicon({("n", POS.NOUN): {"X", "Y"}})
    # equal products: higher weight sum wins over sense order
    rules = [sem(I2, K.DOBJ, {"X"}), sem(I3, K.DOBJ, {"Y"}, ExampleKind.COLLOCATION)]
    assert run(rules, [dobj("n")], semlex).chosen == I3
    # equal products and weights: lower sense wins
    rules = [sem(I3, K.DOBJ, {"X"}), sem(I2, K.DOBJ, {"Y"})]
    assert run(rules, [dobj("n")], semlex).chosen == I2


def test_placeholder_classes():
    a = run([sem(I3, K.DOBJ, {"HUMAIN"})], [dobj("quelqu'un")])
    assert (a.chosen, a.score) == (I3, 0.0)


def test_assignment_validation():
    with pytest.raises(ValueError):
        SenseAssignment(0, "v", POS.VERB, I1, Method.DEFAULT, fired=("v#1",))
    with pytest.raises(ValueError):
        SenseAssignment(0, "v", POS.VERB, I1, Method.SEMANTIC, 1.0)
    with pytest.raises(ValueError):
        SenseAssignment(0, "v", POS.VERB, None, Method.LEXICAL, 1)
    with pytest.raises(ValueError):
        SenseAssignment(0, "v", POS.VERB, I1, Method.NOT_IN_DICTIONARY)


# --------------------------------------------------------------------------
# weights

def test_default_weights_valid():
    assert validate_weights(DEFAULT_WEIGHTS) == dict(DEFAULT_WEIGHTS)


@pytest.mark.parametrize("text", ["co=1", "lc=6", "le=0", "li=-2", "co=x", "qq=3", "co"])
def test_bad_weights(text):
    with pytest.raises(WeightOrderError):
        parse_weights(text)


def test_weight_override():
    w = parse_weights("co=60,le=1")
    assert w[ExampleKind.COLLOCATION] == 60 and w[ExampleKind.COMPOUND] == 5


# --------------------------------------------------------------------------
# distance

def test_worked_distance_exact():
    d = class_distance_exact({"ESPACE_LOCATIF", "GEO", "HUMAIN_COLLECTIF"},
                             {"ENTITE", "ESPACE_LOCATIF", "ANIMAL"})
    assert d == Fraction(4, 5)


def test_distance_degenerate():
    with pytest.raises(DegenerateDistance):
        class_distance(set(), set())


LABELS = [f"C{i}" for i in range(10)]
labelsets = st.frozensets(st.sampled_from(LABELS))


def oracle(a, b):
    union = [x for x in LABELS if x in a or x in b]
    both = [x for x in LABELS if x in a and x in b]
    return Fraction(len(union) - len(both), len(union))


@settings(max_examples=500)
@given(labelsets, labelsets)
def test_distance_properties(a, b):
    assume(a or b)
    d = class_distance(a, b)
    assert class_distance_exact(a, b) == oracle(a, b)
    assert d == class_distance(b, a)
    assert 0 <= d <= 1
    assert (d == 0) == (a == b)
    assert (d == 1) == (not a & b)


# --------------------------------------------------------------------------
# strategy properties over constructed rule sets

NOUNS = ["n0", "n1", "n2", "n3"]
senses = st.sampled_from(AMB)
kinds = st.sampled_from(list(ExampleKind))


@st.composite
def scenario(draw):
    semlex = SemLexicon({(n, POS.NOUN): draw(labelsets.filter(bool)) for n in NOUNS})
    rules = []
    for _ in range(draw(st.integers(0, 6))):
        if draw(st.booleans()):
            rules.append(lex(draw(senses), K.DOBJ, draw(st.sampled_from(NOUNS)), draw(kinds)))
        else:
            rules.append(sem(draw(senses), K.DOBJ, draw(labelsets.filter(bool)), draw(kinds)))
    nouns = draw(st.lists(st.sampled_from(NOUNS), min_size=1, max_size=3, unique=True))
    return rules, nouns, semlex


@settings(max_examples=300, deadline=None)
@given(scenario())
def test_lexical_phase_precedes_semantic(sc):
    rules, nouns, semlex = sc
    a = run(rules, [dobj(n) for n in nouns], semlex)
    lexical_match = any(not r.is_semantic and r.pattern.argument in nouns for r in rules)
    assert (a.method is Method.LEXICAL) == lexical_match
    if lexical_match:
        lexical_rules = [r for r in rules if not r.is_semantic]
        assert run(lexical_rules, [dobj(n) for n in nouns], semlex).chosen == a.chosen


@settings(max_examples=300, deadline=None)
@given(scenario())
def test_passive_swap_invariance(sc):
    rules, nouns, semlex = sc
    active = run(rules, [dobj(n) for n in nouns], semlex)
    passive = run(rules, [subjpass(n) for n in nouns], semlex)
    assert (active.chosen, active.method, active.score) == (passive.chosen, passive.method,
                                                            passive.score)
    pas_rules = [Rule(r.target, r.pos, r.ambiguity,
                      RulePattern(K.SUBJPASS, None, r.pattern.slot, r.pattern.argument),
                      r.source_kind, r.s3, r.result) for r in rules]
    swapped = run(pas_rules, [dobj(n) for n in nouns], semlex)
    assert (swapped.chosen, swapped.method) == (active.chosen, active.method)


weight_sets = st.lists(st.integers(1, 50), min_size=6, max_size=6, unique=True).map(
    lambda ws: sorted(ws, reverse=True)).map(lambda ws: {
        ExampleKind.COLLOCATION: ws[0], ExampleKind.COMPOUND: ws[1], ExampleKind.IDIOM: ws[2],
        ExampleKind.PHRASAL_VERB: ws[3], ExampleKind.USAGE: ws[4], ExampleKind.STRUCTURE: ws[4],
        ExampleKind.GENERAL: ws[5]})


@settings(max_examples=200, deadline=None)
@given(weight_sets, st.permutations([I1, I2, I3]))
def test_collocation_outweighs_general_example(weights, order):
    strong, weak = order[0], order[1]
    rules = [lex(weak, K.DOBJ, "n0", ExampleKind.GENERAL), lex(strong, K.DOBJ, "n0", ExampleKind.COLLOCATION)]
    a = run(rules, [dobj("n0")], weights=weights)
    assert (a.chosen, a.score) == (strong, weights[ExampleKind.COLLOCATION])
    srules = [sem(weak, K.DOBJ, {"C0"}, ExampleKind.GENERAL),
              sem(strong, K.DOBJ, {"C1"}, ExampleKind.COLLOCATION)]
    semlex = SemLexicon({("n0", POS.NOUN): {"C0", "C1"}})
    assert run(srules, [dobj("n0")], semlex, weights).chosen == strong


@settings(max_examples=300, deadline=None)
@given(st.lists(labelsets.filter(bool), min_size=1, max_size=4), labelsets.filter(bool))
def test_product_shrinks_with_more_evidence(noun_classes, rule_classes):
    semlex = SemLexicon({(f"m{i}", POS.NOUN): c for i, c in enumerate(noun_classes)})
    rules = [sem(I2, K.DOBJ, rule_classes)]
    scores = []
    for k in range(1, len(noun_classes) + 1):
        a = run(rules, [dobj(f"m{i}") for i in range(k)], semlex)
        expected = Fraction(1)
        fired = False
        for c in noun_classes[:k]:
            d = class_distance_exact(rule_classes, c)
            if d < 1:
                expected *= d
                fired = True
        if fired:
            assert a.method is Method.SEMANTIC and a.score == float(expected)
            scores.append(a.score)
        else:
            assert a.method is Method.DEFAULT
    assert scores == sorted(scores, reverse=True)


def test_equivalent_patterns_keep_roles():
    rel = Relation.parse("SUBJPASS(roman,écrire)")
    assert {str(r) for r in equivalent_patterns(rel)} == {"SUBJPASS(roman,écrire)", "DOBJ(écrire,roman)"}
    assert {r.kind for r in equivalent_patterns(Relation.parse("PAGENT(écrire,Marie)"))} == {
        K.SUBJ, K.RELSUBJ, K.PAGENT}
    assert equivalent_patterns(Relation.parse("NN(a,b)")) == {Relation.parse("NN(a,b)")}


# --------------------------------------------------------------------------
# corpus level

def test_jobs_preserve_order(corpus, mini_rules, lexicon, mini_dict):
    dis = Disambiguator(mini_rules, lexicon, mini_dict)
    assert dis.corpus(corpus, jobs=3) == dis.corpus(corpus)


def test_relation_targets_use_ordinals(data_dir, mini_rules, lexicon, mini_dict):
    from lexsense.parser import read_relation_file
    sents = read_relation_file((data_dir / "relations.txt").read_text(encoding="utf-8"))
    out = Disambiguator(mini_rules, lexicon, mini_dict).relation_corpus(sents)
    assert [[(a.index, a.lemma) for a in s] for s in out] == [
        [(0, "abandonner"), (1, "pays")],
        [(0, "abandonner"), (1, "protagoniste"), (2, "sort")],
        [(0, "écrire"), (1, "roman")]]
    assert format_assignments(out) == (data_dir / "golden_relation_assignments.tsv").read_text(
        encoding="utf-8")


def test_assignment_file_round_trip(data_dir):
    text = (data_dir / "golden_assignments.tsv").read_text(encoding="utf-8")
    rows = read_assignments(text)
    by_sent = [[a for s, a in rows if s == n] for n in range(1, max(s for s, _ in rows) + 1)]
    assert format_assignments(by_sent) == text


@pytest.mark.parametrize("line", ["1\t2\tx", "1\t2\tx\tNOUN\tI.1\tWeird\t-\t-\t-",
                                  "1\t2\tx\tNOUN\t-\tDefault\t-\t-\t-"])
def test_assignment_file_errors(line):
    with pytest.raises(AssignmentFormatError) as exc:
        read_assignments("\n" + line)
    assert exc.value.line == 2
