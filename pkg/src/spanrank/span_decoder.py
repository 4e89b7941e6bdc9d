"""Top-k answer span decoding from per-token start/end scores."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOP_K = 20
DEFAULT_MAX_ANSWER_TOKENS = 30


class DumpError(ValueError):
    """Raised for malformed expert dump records."""


@dataclass(frozen=True)
class AnswerCandidate:
    text: str
    start_char: int
    end_char: int
    probability: float

    @property
    def span(self) -> tuple[int, int]:
        return self.start_char, self.end_char

    def with_span(self, start_char: int, end_char: int, passage: str) -> "AnswerCandidate":
        return AnswerCandidate(passage[start_char:end_char], start_char, end_char, self.probability)


@dataclass(frozen=True)
class ExpertDump:
    pq_id: str
    start_scores: tuple[float, ...]
    end_scores: tuple[float, ...]
    token_offsets: tuple[tuple[int, int], ...]
    token_is_continuation: tuple[bool, ...]

    def __post_init__(self):
        n = len(self.start_scores)
        if n < 1:
            raise DumpError(f"{self.pq_id}: dump has no tokens")
        lengths = (len(self.end_scores), len(self.token_offsets), len(self.token_is_continuation))
        if any(m != n for m in lengths):
            raise DumpError(f"{self.pq_id}: per-token fields have unequal lengths ({n}, {lengths})")
        prev_end = 0
        for s, e in self.token_offsets:
            if s < prev_end or e < s:
                raise DumpError(f"{self.pq_id}: token offsets overlap or decrease at ({s}, {e})")
            prev_end = e
        if not all(map(math.isfinite, self.start_scores)) or not all(map(math.isfinite, self.end_scores)):
            raise DumpError(f"{self.pq_id}: non-finite score")

    def to_record(self) -> dict:
        return {
            "pq_id": self.pq_id,
            "start_scores": list(self.start_scores),
            "end_scores": list(self.end_scores),
            "token_offsets": [list(o) for o in self.token_offsets],
            "token_is_continuation": list(self.token_is_continuation),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ExpertDump":
        try:
            return cls(
                pq_id=str(rec["pq_id"]),
                start_scores=tuple(float(x) for x in rec["start_scores"]),
                end_scores=tuple(float(x) for x in rec["end_scores"]),
                token_offsets=tuple((int(s), int(e)) for s, e in rec["token_offsets"]),
                token_is_continuation=tuple(bool(x) for x in rec["token_is_continuation"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DumpError):
                raise
            raise DumpError(f"malformed dump record: {exc!r}") from exc


def softmax(scores: Sequence[float]) -> np.ndarray:
    x = np.asarray(scores, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("softmax needs a non-empty 1-d sequence")
    if not np.all(np.isfinite(x)):
        raise ValueError("softmax input must be finite")
    e = np.exp(x - x.max())
    return e / e.sum()


def _ranked_spans(start: np.ndarray, end: np.ndarray, max_answer_tokens: int) -> tuple[np.ndarray, ...]:
    n = start.size
    i, j = np.triu_indices(n)
    keep = (j - i) < max_answer_tokens
    i, j = i[keep], j[keep]
    score = start[i] + end[j]
    # lexsort: last key is primary
    order = np.lexsort((j - i, i, -score))
    return i[order], j[order], score[order]


def decode_topk(
    dump: ExpertDump,
    passage: str,
    k: int = DEFAULT_TOP_K,
    max_answer_tokens: int = DEFAULT_MAX_ANSWER_TOKENS,
) -> list[AnswerCandidate]:
    """Rank token spans by ``start[i] + end[j]`` and return the best ``k``.

    Only spans with ``j >= i`` and at most ``max_answer_tokens`` tokens are
    considered. Ties go to the earlier start, then the shorter span. Each
    candidate's probability is the product of its start and end softmax
    probabilities renormalized over the returned list, which equals a
    softmax of the span scores restricted to the top ``k``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if max_answer_tokens < 1:
        raise ValueError("max_answer_tokens must be >= 1")
    start = np.asarray(dump.start_scores, dtype=np.float64)
    end = np.asarray(dump.end_scores, dtype=np.float64)
    i, j, score = _ranked_spans(start, end, max_answer_tokens)
    i, j, score = i[:k], j[:k], score[:k]
    probs = softmax(score)
    offsets = dump.token_offsets
    if offsets[-1][1] > len(passage):
        raise DumpError(f"{dump.pq_id}: token offsets run past the passage end")
    out = []
    for a, b, p in zip(i.tolist(), j.tolist(), probs.tolist()):
        s, e = offsets[a][0], offsets[b][1]
        out.append(AnswerCandidate(passage[s:e], s, e, p))
    return out


def read_dumps(path: str | Path) -> list[ExpertDump]:
    dumps = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                dumps.append(ExpertDump.from_record(json.loads(line)))
            except (json.JSONDecodeError, DumpError) as exc:
                raise DumpError(f"{path}: line {lineno}: {exc}") from exc
    return dumps


def write_dumps(dumps: Iterable[ExpertDump], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in dumps:
            fh.write(json.dumps(d.to_record()) + "\n")
