"""Post-processing of ranked answer lists.

Stages operate on one sample's ranked candidates and preserve character
offsets and probabilities; ranks only change through removals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Collection, Sequence

from .arabic_text import StemmerConfig, StopwordList, stem, tokenize
from .qrcd_io import EmptySpanError, Sample, WordIndex, char_span_to_word_span, word_index
from .span_decoder import AnswerCandidate

REDUNDANCY = "redundancy"
UNINFORMATIVE = "uninformative"
SUBWORD_REPAIR = "subword_repair"
STAGES = (REDUNDANCY, UNINFORMATIVE, SUBWORD_REPAIR)
_STAGE_ALIASES = {"subword": SUBWORD_REPAIR, "subwords": SUBWORD_REPAIR}


def parse_stages(text: str) -> tuple[str, ...]:
    """Parse a comma-separated stage list such as ``redundancy,uninformative,subword``."""
    names = [s.strip() for s in text.split(",") if s.strip()]
    return tuple(_STAGE_ALIASES.get(n, n) for n in names)


@dataclass(frozen=True)
class PipelineConfig:
    stage_order: tuple[str, ...] = STAGES
    final_top_n: int = 5
    remove_uninformative: bool = True
    stopwords: StopwordList = field(default_factory=StopwordList.default)
    stemmer: StemmerConfig = field(default_factory=StemmerConfig)

    def __post_init__(self):
        object.__setattr__(self, "stage_order", tuple(self.stage_order))
        unknown = [s for s in self.stage_order if s not in STAGES]
        if unknown:
            raise ValueError(f"unknown stages {unknown}; expected a subset of {list(STAGES)}")
        if len(set(self.stage_order)) != len(self.stage_order):
            raise ValueError(f"repeated stage in {list(self.stage_order)}")
        if self.final_top_n < 1:
            raise ValueError("final_top_n must be >= 1")


def repair_subwords(
    cand: AnswerCandidate,
    wi: WordIndex,
    passage: str,
    emitted: Collection[tuple[int, int]] = (),
) -> AnswerCandidate | None:
    """Extend a span whose edges cut through a word out to whole words.

    Returns None when the span touches no word, or when it is a fragment of a
    single word whose extension reproduces a span in ``emitted``.
    """
    try:
        first, last = char_span_to_word_span(wi, cand.start_char, cand.end_char)
    except EmptySpanError:
        return None
    start, end = wi[first].start_char, wi[last].end_char
    if (start, end) == cand.span:
        return cand
    is_fragment = first == last
    if is_fragment and (start, end) in emitted:
        return None
    return cand.with_span(start, end, passage)


def _unseen_runs(seen: list[bool], first: int, last: int) -> list[tuple[int, int]]:
    runs = []
    i = first
    while i <= last:
        if seen[i]:
            i += 1
            continue
        j = i
        while j + 1 <= last and not seen[j + 1]:
            j += 1
        runs.append((i, j))
        i = j + 1
    return runs


def eliminate_redundancy(
    answers: Sequence[AnswerCandidate], passage: str, wi: WordIndex | None = None
) -> list[AnswerCandidate]:
    """Greedy seen-word masking over a ranked list.

    Each answer contributes only its maximal runs of not-yet-seen words, in
    order; those words are then marked seen. Answers whose words are all seen
    are dropped. Emitted pieces keep the answer's own edges where a run
    reaches the answer's first or last word, and inherit its probability.
    """
    wi = wi if wi is not None else word_index(passage)
    seen = [False] * len(wi)
    out = []
    for a in answers:
        try:
            first, last = char_span_to_word_span(wi, a.start_char, a.end_char)
        except EmptySpanError:
            continue
        for s, e in _unseen_runs(seen, first, last):
            for w in range(s, e + 1):
                seen[w] = True
            start = max(a.start_char, wi[s].start_char)
            end = min(a.end_char, wi[e].end_char)
            out.append(a.with_span(start, end, passage))
    return out


def is_uninformative(
    cand: AnswerCandidate,
    question: str,
    stemmer: StemmerConfig | None = None,
    stopwords: StopwordList | None = None,
) -> bool:
    """True if every stemmed answer token occurs among the stemmed question
    tokens, or if the answer is made only of stopwords."""
    stopwords = stopwords if stopwords is not None else StopwordList.default()
    tokens = tokenize(cand.text)
    if not tokens:
        return True
    if all(t in stopwords for t in tokens):
        return True
    question_stems = {stem(t, stemmer) for t in tokenize(question)}
    return all(stem(t, stemmer) in question_stems for t in tokens)


def _whole_words(cand: AnswerCandidate, wi: WordIndex, passage: str) -> AnswerCandidate:
    # judged on the full words it touches, so the verdict is the same before and after repair
    try:
        first, last = char_span_to_word_span(wi, cand.start_char, cand.end_char)
    except EmptySpanError:
        return cand.with_span(cand.start_char, cand.start_char, passage)
    return cand.with_span(wi[first].start_char, wi[last].end_char, passage)


def _dedup(answers: Sequence[AnswerCandidate]) -> list[AnswerCandidate]:
    seen = set()
    out = []
    for a in answers:
        if not a.text.strip() or a.text in seen:
            continue
        seen.add(a.text)
        out.append(a)
    return out


def run_pipeline(
    answers: Sequence[AnswerCandidate], sample: Sample, cfg: PipelineConfig | None = None
) -> list[AnswerCandidate]:
    """Apply the configured stages, then drop empty and duplicate texts and
    keep the top ``cfg.final_top_n`` answers."""
    cfg = cfg or PipelineConfig()
    passage = sample.passage
    wi = word_index(passage)
    out = list(answers)
    for stage in cfg.stage_order:
        if stage == REDUNDANCY:
            out = eliminate_redundancy(out, passage, wi)
        elif stage == UNINFORMATIVE:
            if cfg.remove_uninformative:
                out = [
                    a
                    for a in out
                    if not is_uninformative(_whole_words(a, wi, passage), sample.question, cfg.stemmer, cfg.stopwords)
                ]
        else:
            repaired: list[AnswerCandidate] = []
            emitted: set[tuple[int, int]] = set()
            for a in out:
                r = repair_subwords(a, wi, passage, emitted)
                if r is not None:
                    repaired.append(r)
                    emitted.add(r.span)
            out = repaired
    return _dedup(out)[: cfg.final_top_n]
