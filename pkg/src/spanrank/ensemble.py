"""Span-voting ensemble and the run-file exchange format."""
from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence, Union

from .span_decoder import AnswerCandidate

Run = dict[str, list[AnswerCandidate]]


class RunFileError(ValueError):
    """Raised for malformed run files or inconsistent candidates."""


@dataclass
class ExpertRun:
    expert_id: str
    answers: Run = field(default_factory=dict)


RunLike = Union[ExpertRun, Mapping[str, Sequence[AnswerCandidate]]]


def _rank_key(c: AnswerCandidate) -> tuple:
    return (-c.probability, c.start_char, c.end_char - c.start_char, c.text)


def vote(runs: Sequence[RunLike]) -> Run:
    """Merge expert runs by summing each exact span's probability across experts.

    A span absent from an expert (or a sample absent from a run) contributes
    zero. Sums use ``math.fsum`` so the result does not depend on expert order.
    """
    if not runs:
        raise ValueError("vote needs at least one run")
    contributions: dict[str, dict[tuple[int, int], list[float]]] = defaultdict(lambda: defaultdict(list))
    texts: dict[str, dict[tuple[int, int], str]] = defaultdict(dict)
    for run in runs:
        answers = run.answers if isinstance(run, ExpertRun) else run
        for pq_id, cands in answers.items():
            seen_text = texts[pq_id]
            for c in cands:
                key = c.span
                prev = seen_text.setdefault(key, c.text)
                if prev != c.text:
                    raise RunFileError(f"{pq_id}: span {key} has inconsistent texts {prev!r} and {c.text!r}")
                contributions[pq_id][key].append(c.probability)
            contributions[pq_id]  # samples with empty lists still appear
    merged: Run = {}
    for pq_id in sorted(contributions):
        cands = [
            AnswerCandidate(texts[pq_id][key], key[0], key[1], math.fsum(ps))
            for key, ps in contributions[pq_id].items()
        ]
        cands.sort(key=_rank_key)
        merged[pq_id] = cands
    return merged


def truncate(run: Mapping[str, Sequence[AnswerCandidate]], n: int) -> Run:
    if n < 1:
        raise ValueError("n must be >= 1")
    return {pq_id: list(cands[:n]) for pq_id, cands in run.items()}


def run_to_json(run: Mapping[str, Sequence[AnswerCandidate]]) -> str:
    """Serialize a run deterministically (sorted ids, 1-based ranks)."""
    payload = {
        pq_id: [
            {"answer": c.text, "rank": r, "score": c.probability, "start_char": c.start_char}
            for r, c in enumerate(run[pq_id], start=1)
        ]
        for pq_id in sorted(run)
    }
    return json.dumps(payload, ensure_ascii=False, indent=1) + "\n"


def write_run(run: Mapping[str, Sequence[AnswerCandidate]], path: str | Path) -> None:
    Path(path).write_text(run_to_json(run), encoding="utf-8")


def parse_run(payload: object, passages: Mapping[str, str] | None = None, source: str = "run") -> Run:
    """Build a run from decoded JSON.

    Entries without ``start_char`` are located at the first occurrence of
    their text in the sample passage, which requires ``passages``.
    """
    if not isinstance(payload, dict):
        raise RunFileError(f"{source}: top level must be an object mapping pq_id to answers")
    run: Run = {}
    for pq_id, entries in payload.items():
        if not isinstance(entries, list):
            raise RunFileError(f"{source}: {pq_id}: answers must be a list")
        rows = []
        for idx, e in enumerate(entries):
            where = f"{source}: {pq_id}: entry {idx}"
            if not isinstance(e, dict) or not isinstance(e.get("answer"), str):
                raise RunFileError(f"{where}: missing string 'answer'")
            score = e.get("score", 0.0)
            if isinstance(score, bool) or not isinstance(score, (int, float)) or not math.isfinite(score):
                raise RunFileError(f"{where}: 'score' must be a finite number")
            start = e.get("start_char")
            if start is None:
                if passages is None or pq_id not in passages:
                    raise RunFileError(f"{where}: no start_char and no passage to locate the answer in")
                start = passages[pq_id].find(e["answer"])
                if start < 0:
                    raise RunFileError(f"{where}: answer {e['answer']!r} not found in passage")
            elif isinstance(start, bool) or not isinstance(start, int) or start < 0:
                raise RunFileError(f"{where}: 'start_char' must be a non-negative integer")
            elif passages is not None and pq_id in passages:
                passage = passages[pq_id]
                if passage[start : start + len(e["answer"])] != e["answer"]:
                    raise RunFileError(f"{where}: answer text does not match passage at start_char {start}")
            rank = e.get("rank", idx + 1)
            rows.append((rank, idx, AnswerCandidate(e["answer"], start, start + len(e["answer"]), float(score))))
        rows.sort(key=lambda r: (r[0], r[1]))
        run[pq_id] = [c for _, _, c in rows]
    return run


def read_run(path: str | Path, passages: Mapping[str, str] | None = None) -> Run:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RunFileError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_run(payload, passages, source=str(path))
