from pathlib import Path

import pytest

from lexsense.dictionary import load_dictionary
from lexsense.parser import read_tagged_corpus
from lexsense.rulebase import build_rulebase
from lexsense.semlex import read_lexicon
from lexsense.tagging import ExampleTagger, read_tag_lexicon

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def mini_dict():
    return load_dictionary(DATA / "mini.xml")


@pytest.fixture(scope="session")
def abandonner_dict():
    return load_dictionary(DATA / "abandonner.xml")


@pytest.fixture(scope="session")
def lexicon():
    return read_lexicon(DATA / "lexicon.tsv")


@pytest.fixture(scope="session")
def tag_lexicon():
    return read_tag_lexicon(DATA / "tag_lexicon.tsv")


@pytest.fixture(scope="session")
def mini_rules(mini_dict, lexicon, tag_lexicon):
    return build_rulebase(mini_dict, lexicon, tagger=ExampleTagger(mini_dict, tag_lexicon))


@pytest.fixture(scope="session")
def abandonner_rules(abandonner_dict, lexicon, tag_lexicon):
    return build_rulebase(abandonner_dict, lexicon,
                          tagger=ExampleTagger(abandonner_dict, tag_lexicon))


@pytest.fixture(scope="session")
def corpus():
    return read_tagged_corpus((DATA / "corpus.tsv").read_text(encoding="utf-8"))


# One PASS/FAIL line per acceptance criterion in the terminal summary.

_CRITERIA = {}
_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid in _CRITERIA and (report.when == "call" or report.failed or report.skipped):
        prev = _OUTCOMES.get(report.nodeid, "PASS")
        _OUTCOMES[report.nodeid] = "PASS" if prev == "PASS" and report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (n, title) in sorted(_CRITERIA.items(), key=lambda kv: kv[1][0]):
        if nodeid in _OUTCOMES:
            terminalreporter.write_line(f"criterion {n:>2} {_OUTCOMES[nodeid]}  {title}")
