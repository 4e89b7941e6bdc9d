"""Loading and indexing of QRCD-format question/passage/answer records."""
from __future__ import annotations

import bisect
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

logger = logging.getLogger(__name__)


class DatasetError(ValueError):
    """Raised for malformed or invalid dataset files."""


class EmptySpanError(ValueError):
    """Raised when a character span touches no word of the passage."""


@dataclass(frozen=True)
class GoldAnswer:
    text: str
    start_char: int

    @property
    def end_char(self) -> int:
        return self.start_char + len(self.text)


@dataclass(frozen=True)
class Sample:
    pq_id: str
    question: str
    passage: str
    gold_answers: tuple[GoldAnswer, ...] = field(default_factory=tuple)

    def to_record(self) -> dict:
        return {
            "pq_id": self.pq_id,
            "question": self.question,
            "passage": self.passage,
            "answers": [{"text": g.text, "start_char": g.start_char} for g in self.gold_answers],
        }


@dataclass(frozen=True)
class Word:
    start_char: int
    end_char: int
    surface: str


class WordIndex:
    """Whitespace word segmentation of a passage with offset lookups."""

    def __init__(self, words: Iterable[Word]):
        self.words: list[Word] = list(words)
        self._starts = [w.start_char for w in self.words]
        self._ends = [w.end_char for w in self.words]

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __getitem__(self, i: int) -> Word:
        return self.words[i]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WordIndex):
            return self.words == other.words
        return NotImplemented

    def __repr__(self) -> str:
        return f"WordIndex({[(w.start_char, w.end_char, w.surface) for w in self.words]!r})"

    def word_at(self, char: int) -> int | None:
        """Index of the word containing character ``char``, or None for whitespace."""
        i = bisect.bisect_right(self._starts, char) - 1
        if i >= 0 and char < self._ends[i]:
            return i
        return None

    def is_boundary(self, char: int) -> bool:
        """True if ``char`` does not fall strictly inside a word."""
        i = self.word_at(char)
        return i is None or self._starts[i] == char


def word_index(passage: str) -> WordIndex:
    """Split ``passage`` into maximal runs of non-whitespace characters."""
    words = []
    start = None
    for pos, ch in enumerate(passage):
        if ch.isspace():
            if start is not None:
                words.append(Word(start, pos, passage[start:pos]))
                start = None
        elif start is None:
            start = pos
    if start is not None:
        words.append(Word(start, len(passage), passage[start:]))
    return WordIndex(words)


def char_span_to_word_span(wi: WordIndex, start_char: int, end_char: int) -> tuple[int, int]:
    """Inclusive range of words overlapping the half-open span ``[start_char, end_char)``."""
    if start_char >= end_char or start_char < 0:
        raise ValueError(f"invalid character span ({start_char}, {end_char})")
    # first word whose end lies beyond start_char
    first = bisect.bisect_right(wi._ends, start_char)
    # last word whose start lies before end_char
    last = bisect.bisect_left(wi._starts, end_char) - 1
    if first > last:
        raise EmptySpanError(f"span ({start_char}, {end_char}) covers no word")
    return first, last


def _parse_record(rec: object, where: str) -> Sample:
    if not isinstance(rec, dict):
        raise DatasetError(f"{where}: expected an object, got {type(rec).__name__}")
    for key in ("pq_id", "question", "passage"):
        if not isinstance(rec.get(key), str):
            raise DatasetError(f"{where}: missing or non-string field {key!r}")
    answers = rec.get("answers", [])
    if not isinstance(answers, list):
        raise DatasetError(f"{where}: 'answers' must be a list")
    golds = []
    for j, ans in enumerate(answers):
        if (
            not isinstance(ans, dict)
            or not isinstance(ans.get("text"), str)
            or not isinstance(ans.get("start_char"), int)
            or isinstance(ans.get("start_char"), bool)
        ):
            raise DatasetError(f"{where}: answer {j} must have string 'text' and integer 'start_char'")
        golds.append(GoldAnswer(ans["text"], ans["start_char"]))
    return Sample(rec["pq_id"], rec["question"], rec["passage"], tuple(golds))


def _read_records(path: Path) -> list[tuple[str, object]]:
    text = path.read_text(encoding="utf-8")
    stripped = text.lstrip()
    if path.suffix != ".jsonl" and stripped.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(data, list):
            raise DatasetError(f"{path}: top level must be a JSON array")
        return [(f"{path}: record {i}", rec) for i, rec in enumerate(data)]
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append((f"{path}: line {lineno}", json.loads(line)))
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path}: malformed JSON at line {lineno}: {exc.msg}") from exc
    return records


def _gold_ok(passage: str, gold: GoldAnswer) -> bool:
    return gold.start_char >= 0 and passage[gold.start_char : gold.end_char] == gold.text


def validate_samples(samples: Iterable[Sample], strict: bool = True) -> list[Sample]:
    """Check sample invariants; in lenient mode repair what can be repaired.

    Lenient repairs: a misplaced gold answer is moved to the first occurrence
    of its text in the passage (dropped if absent) and duplicate ``pq_id``
    records are resolved last-wins.
    """
    by_id: dict[str, Sample] = {}
    relocated = dropped = duplicates = 0
    for sample in samples:
        golds = []
        for gold in sample.gold_answers:
            if _gold_ok(sample.passage, gold):
                golds.append(gold)
                continue
            if strict:
                raise DatasetError(
                    f"{sample.pq_id}: gold answer {gold.text!r} not found at start_char {gold.start_char}"
                )
            pos = sample.passage.find(gold.text)
            if pos >= 0:
                golds.append(GoldAnswer(gold.text, pos))
                relocated += 1
            else:
                dropped += 1
        if sample.pq_id in by_id:
            if strict:
                raise DatasetError(f"duplicate pq_id {sample.pq_id!r}")
            duplicates += 1
            del by_id[sample.pq_id]
        by_id[sample.pq_id] = Sample(sample.pq_id, sample.question, sample.passage, tuple(golds))
    if relocated or dropped or duplicates:
        logger.warning(
            "lenient load: %d answers relocated, %d answers dropped, %d duplicate pq_ids replaced",
            relocated,
            dropped,
            duplicates,
        )
    return list(by_id.values())


def load_dataset(path: str | Path, strict: bool = True) -> list[Sample]:
    """Read a dataset file (JSON array or JSON lines) into validated samples."""
    path = Path(path)
    samples = [_parse_record(rec, where) for where, rec in _read_records(path)]
    return validate_samples(samples, strict=strict)


def write_dataset(samples: Iterable[Sample], path: str | Path) -> None:
    """Write samples as JSON lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(json.dumps(s.to_record(), ensure_ascii=False) + "\n")


def index_by_id(samples: Iterable[Sample]) -> dict[str, Sample]:
    return {s.pq_id: s for s in samples}
