"""Word sense disambiguation with rules compiled from a bilingual dictionary."""

from .dictionary import Dictionary, DictionaryEntry, SenseId, load_dictionary, parse_dictionary
from .disambiguator import (DEFAULT_WEIGHTS, Disambiguator, Method, SenseAssignment,
                            class_distance, disambiguate_sentence, disambiguate_word,
                            equivalent_patterns)
from .evaluation import EvalReport, evaluate, read_gold
from .parser import Relation, RelationKind, ShallowParser, Token, read_tagged_corpus
from .rulebase import Rule, RuleBase, build_rulebase, load_rulebase, save_rulebase
from .semlex import SemLexicon, load_lexicon
from .tags import POS, Feat

__version__ = "0.1.0"
