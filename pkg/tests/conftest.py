import sys
from pathlib import Path

import pytest

from spanrank.qrcd_io import GoldAnswer, Sample
from spanrank.span_decoder import AnswerCandidate

sys.path.insert(0, str(Path(__file__).parent))

# Passage adapted from a Qur'anic verse (simple-clean text, diacritics removed).
VERSE_PASSAGE = (
    "ما كان لأهل المدينة ومن حولهم من الأعراب أن يتخلفوا عن رسول الله ولا يرغبوا بأنفسهم عن نفسه "
    "ذلك بأنهم لا يصيبهم ظمأ ولا نصب ولا مخمصة في سبيل الله ولا يطئون موطئا يغيظ الكفار "
    "ولا ينالون من عدو نيلا إلا كتب لهم به عمل صالح إن الله لا يضيع أجر المحسنين"
)
VERSE_QUESTION = "ما جزاء المجاهدين في سبيل الله؟"
VERSE_GOLD = "إلا كتب لهم به عمل صالح"


def cand(passage: str, text: str, p: float = 0.1, occurrence: int = 0) -> AnswerCandidate:
    """Candidate for the ``occurrence``-th appearance of ``text`` in ``passage``."""
    pos = -1
    for _ in range(occurrence + 1):
        pos = passage.index(text, pos + 1)
    return AnswerCandidate(text, pos, pos + len(text), p)


def sample(pq_id: str, passage: str, golds, question: str = "سؤال") -> Sample:
    return Sample(pq_id, question, passage, tuple(GoldAnswer(g, passage.index(g)) for g in golds))


@pytest.fixture
def verse_sample():
    return sample("v9_120", VERSE_PASSAGE, [VERSE_GOLD], VERSE_QUESTION)


@pytest.fixture
def verse_raw_answers():
    """Fifteen raw answers modeled on the worked post-processing example."""
    P = VERSE_PASSAGE
    texts = [
        "ما",
        "ما كان لأهل المدينة",
        "ما كان لأهل المدينة ومن حولهم",
        "ما كان لأهل المدينة ومن حولهم من الأعراب",
        "كان لأهل المدينة",
        "ما كان",
        "لأهل المدينة ومن حولهم من الأعراب أن يتخلفوا عن رسول الله",
        "كتب لهم به عمل صالح",
        "ولا ينالون من عدو نيلا",
        "لهم به عمل صالح",
        "أن يتخلفوا",
        "ون",
        "إلا كتب لهم",
        "ولا",
        "عن رسول الله",
    ]
    out = []
    probs = [0.3, 0.2, 0.1, 0.08, 0.07, 0.05, 0.04, 0.03, 0.03, 0.02, 0.02, 0.02, 0.02, 0.01, 0.01]
    for t, p in zip(texts, probs):
        if t == "ون":
            pos = P.index("ينالون") + len("ينال")
            out.append(AnswerCandidate("ون", pos, pos + 2, p))
        else:
            out.append(cand(P, t, p))
    return out


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        status = "SKIP" if rep.skipped else ("PASS" if rep.passed else "FAIL")
        _ACCEPTANCE[number] = (status, title)
    elif rep.failed:
        _ACCEPTANCE[number] = ("FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] AC{number:>2}: {title}")
