import random

import pytest

from markovstego.fixture import fixture_model
from markovstego.textmodel import build_model_from_text

_NOUNS = (
    "house garden river letter window morning officer village carriage soldier "
    "horse table road winter city door evening regiment friend mother brother "
    "sister battle voice face hand glass field forest church bridge"
).split()
_ADJ = "old young quiet bright cold long small heavy pale kind strange tired".split()
_VERBS = (
    "saw found left watched remembered followed carried opened answered "
    "touched crossed called passed held"
).split()
_ADV = "slowly suddenly again quietly never often".split()
_PREP = "near behind across under beside toward through".split()
_NAMES = "Pierre Natasha Andrew Mary Nicholas Sonya Boris Helene".split()


def _phrase(rng):
    words = [rng.choice(["the", "a", "his", "her", "that"])]
    if rng.random() < 0.5:
        words.append(rng.choice(_ADJ))
    words.append(rng.choice(_NOUNS))
    return words


def synthetic_corpus(sentences=1500, seed=7):
    """Deterministic pseudo-prose with enough branching to exercise the codec."""
    rng = random.Random(seed)
    out = []
    for _ in range(sentences):
        subj = [rng.choice(_NAMES)] if rng.random() < 0.4 else _phrase(rng)
        subj[0] = subj[0].capitalize()
        words = subj
        if rng.random() < 0.3:
            words.append(rng.choice(_ADV))
        words.append(rng.choice(_VERBS))
        words += _phrase(rng)
        if rng.random() < 0.5:
            words.append(rng.choice(_PREP))
            words += _phrase(rng)
        if rng.random() < 0.2:
            words += ["and", rng.choice(_VERBS)] + _phrase(rng)
        out.append(" ".join(words) + rng.choice([".", ".", ".", "!", "?"]))
    return " ".join(out)


@pytest.fixture(scope="session")
def fixture():
    return fixture_model()


@pytest.fixture(scope="session")
def corpus_text():
    return synthetic_corpus()


@pytest.fixture(scope="session")
def unigram_model(corpus_text):
    return build_model_from_text(corpus_text, 1)


@pytest.fixture(scope="session")
def bigram_model(corpus_text):
    return build_model_from_text(corpus_text, 2)


# -- acceptance reporting -----------------------------------------------------------

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def verdict():
    """Record one PASS/FAIL line per acceptance criterion and return the flag."""

    def record(number, title, ok, detail=""):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
