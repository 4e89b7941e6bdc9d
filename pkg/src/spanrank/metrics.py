"""pRR, exact match and F1@1 scoring of ranked answer lists."""
from __future__ import annotations

import bisect
import csv
import io
import json
import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .arabic_text import normalize
from .qrcd_io import GoldAnswer, Sample
from .span_decoder import AnswerCandidate

logger = logging.getLogger(__name__)

PRR_DEPTH = 5
HISTOGRAM_BINS = 10


class EvaluationError(ValueError):
    pass


def token_f1(pred: str, gold: str, unify: bool = True) -> float:
    """Multiset token-overlap F1 after normalization."""
    p = normalize(pred, unify).split()
    g = normalize(gold, unify).split()
    if not p and not g:
        return 1.0
    common = sum((Counter(p) & Counter(g)).values())
    if common == 0:
        return 0.0
    # 2PR/(P+R) with P=c/|p|, R=c/|g|
    return 2 * common / (len(p) + len(g))


def partial_match(pred: str, golds: Sequence[GoldAnswer], unify: bool = True) -> float:
    if not golds:
        raise ValueError("partial_match needs at least one gold answer")
    return max(token_f1(pred, g.text, unify) for g in golds)


@dataclass(frozen=True)
class SampleScore:
    pq_id: str
    prr: float
    em: int
    f1_at_1: float
    first_hit_rank: int | None
    match_at_hit: float


def exact_match(ranked: Sequence[AnswerCandidate], golds: Sequence[GoldAnswer], unify: bool = True) -> int:
    if not ranked:
        return 0
    top = normalize(ranked[0].text, unify)
    return int(any(top == normalize(g.text, unify) for g in golds))


def prr(
    ranked: Sequence[AnswerCandidate],
    golds: Sequence[GoldAnswer],
    pq_id: str = "",
    depth: int = PRR_DEPTH,
    unify: bool = True,
) -> SampleScore:
    """Score one ranked list: pRR is the partial match of the first answer with
    a non-zero match, divided by its 1-based rank."""
    if not golds:
        raise ValueError("prr needs at least one gold answer")
    ranked = list(ranked)[:depth]
    hit_rank, hit_match = None, 0.0
    for r, cand in enumerate(ranked, start=1):
        m = partial_match(cand.text, golds, unify)
        if m > 0:
            hit_rank, hit_match = r, m
            break
    f1 = partial_match(ranked[0].text, golds, unify) if ranked else 0.0
    return SampleScore(
        pq_id=pq_id,
        prr=hit_match / hit_rank if hit_rank else 0.0,
        em=exact_match(ranked, golds, unify),
        f1_at_1=f1,
        first_hit_rank=hit_rank,
        match_at_hit=hit_match,
    )


def histogram(values: Sequence[float], bins: int = HISTOGRAM_BINS) -> list[int]:
    """Counts over equal-width bins of [0, 1]: [0, 1/b], (1/b, 2/b], ..., ((b-1)/b, 1]."""
    inner_edges = [i / bins for i in range(1, bins)]
    counts = [0] * bins
    for v in values:
        counts[bisect.bisect_left(inner_edges, v)] += 1
    return counts


@dataclass
class EvaluationReport:
    per_sample: list[SampleScore]
    mean_prr: float
    mean_em: float
    mean_f1: float
    histogram: list[int] = field(default_factory=list)

    @property
    def n_samples(self) -> int:
        return len(self.per_sample)

    def to_dict(self) -> dict:
        return {
            "summary": {
                "prr": self.mean_prr,
                "em": self.mean_em,
                "f1_at_1": self.mean_f1,
                "n_samples": self.n_samples,
            },
            "per_sample": [asdict(s) for s in self.per_sample],
            "histogram": list(self.histogram),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=1) + "\n"

    def to_tsv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter="\t", lineterminator="\n")
        w.writerow(["pq_id", "prr", "em", "f1_at_1", "first_hit_rank", "match_at_hit"])
        for s in self.per_sample:
            w.writerow([s.pq_id, repr(s.prr), s.em, repr(s.f1_at_1), s.first_hit_rank or "", repr(s.match_at_hit)])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, data: dict) -> "EvaluationReport":
        summary = data["summary"]
        return cls(
            per_sample=[SampleScore(**s) for s in data["per_sample"]],
            mean_prr=summary["prr"],
            mean_em=summary["em"],
            mean_f1=summary["f1_at_1"],
            histogram=list(data["histogram"]),
        )

    @classmethod
    def load(cls, path: str | Path) -> "EvaluationReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs) if xs else 0.0


def evaluate(
    run: Mapping[str, Sequence[AnswerCandidate]],
    dataset: Sequence[Sample],
    depth: int = PRR_DEPTH,
    bins: int = HISTOGRAM_BINS,
    unify: bool = True,
) -> EvaluationReport:
    """Score a run against every sample of ``dataset``.

    Samples missing from the run score zero. Run ids absent from the dataset
    and samples without gold answers are errors.
    """
    ids = {s.pq_id for s in dataset}
    extra = sorted(set(run) - ids)
    if extra:
        raise EvaluationError(f"run contains pq_ids not in the dataset: {extra[:10]}")
    gold_free = [s.pq_id for s in dataset if not s.gold_answers]
    if gold_free:
        raise EvaluationError(f"samples without gold answers: {gold_free[:10]}")
    missing = [s.pq_id for s in dataset if s.pq_id not in run]
    if missing:
        logger.warning("%d dataset samples have no answers in the run; scored as 0", len(missing))
    scores = [prr(run.get(s.pq_id, ()), s.gold_answers, s.pq_id, depth, unify) for s in dataset]
    prrs = [s.prr for s in scores]
    return EvaluationReport(
        per_sample=scores,
        mean_prr=_mean(prrs),
        mean_em=_mean([s.em for s in scores]),
        mean_f1=_mean([s.f1_at_1 for s in scores]),
        histogram=histogram(prrs, bins),
    )
