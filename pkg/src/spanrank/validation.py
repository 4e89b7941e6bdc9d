"""Input checks shared by the estimators and the CLI."""
from __future__ import annotations

import numbers
from typing import Iterable, Mapping, Sequence

from .ensemble import ExpertRun, Run, RunFileError
from .qrcd_io import DatasetError, Sample
from .span_decoder import AnswerCandidate, DumpError, ExpertDump


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_dataset(samples: Iterable[Sample], require_gold: bool = False) -> list[Sample]:
    samples = list(samples)
    seen = set()
    for s in samples:
        if not isinstance(s, Sample):
            raise TypeError(f"expected Sample, got {type(s).__name__}")
        if s.pq_id in seen:
            raise DatasetError(f"duplicate pq_id {s.pq_id!r}")
        seen.add(s.pq_id)
        if require_gold and not s.gold_answers:
            raise DatasetError(f"{s.pq_id}: sample has no gold answer")
    return samples


def check_dumps(dumps: Iterable[ExpertDump], passages: Mapping[str, str]) -> list[ExpertDump]:
    dumps = list(dumps)
    for d in dumps:
        if not isinstance(d, ExpertDump):
            raise TypeError(f"expected ExpertDump, got {type(d).__name__}")
        if d.pq_id not in passages:
            raise DumpError(f"dump for unknown pq_id {d.pq_id!r}")
        if d.token_offsets[-1][1] > len(passages[d.pq_id]):
            raise DumpError(f"{d.pq_id}: token offsets run past the passage end")
    return dumps


def check_run(
    run: Mapping[str, Sequence[AnswerCandidate]] | ExpertRun, passages: Mapping[str, str] | None = None
) -> Run:
    """Verify every candidate locates in its passage (when passages are given)."""
    answers = run.answers if isinstance(run, ExpertRun) else run
    if not isinstance(answers, Mapping):
        raise TypeError("a run must map pq_id to a list of AnswerCandidate")
    out: Run = {}
    for pq_id, cands in answers.items():
        cands = list(cands)
        for c in cands:
            if not isinstance(c, AnswerCandidate):
                raise TypeError(f"{pq_id}: expected AnswerCandidate, got {type(c).__name__}")
            if passages is not None:
                if pq_id not in passages:
                    raise RunFileError(f"run sample {pq_id!r} not in dataset")
                if passages[pq_id][c.start_char : c.end_char] != c.text:
                    raise RunFileError(f"{pq_id}: candidate {c.text!r} does not match passage at {c.span}")
        out[pq_id] = cands
    return out
