"""Seeded synthetic datasets and expert score dumps."""
from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .qrcd_io import GoldAnswer, Sample, word_index
from .span_decoder import ExpertDump

# Disjoint letter pools, none of which is a stemmer affix letter, so passage
# and question vocabularies never share a stem.
PASSAGE_LETTERS = "تثجحخدذرزسش"
QUESTION_LETTERS = "صضطظعغقمن"

_TOKENIZER_SALT = 0x70CE
_DATASET_SALT = 0xDA7A


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    n_experts: int = 1
    noise_sigma: float = 1.0
    gold_boost: float = 4.0
    subword_fragment_rate: float = 0.1

    def __post_init__(self):
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0.0 <= self.subword_fragment_rate <= 1.0:
            raise ValueError("subword_fragment_rate must lie in [0, 1]")
        if self.n_experts < 1:
            raise ValueError("n_experts must be >= 1")


def _id_hash(pq_id: str) -> int:
    return zlib.crc32(pq_id.encode("utf-8"))


def _word(rng: np.random.Generator, letters: str) -> str:
    n = int(rng.integers(3, 8))
    return "".join(letters[i] for i in rng.integers(0, len(letters), n))


def synth_dataset(
    n_samples: int,
    seed: int = 0,
    passage_words: tuple[int, int] = (20, 60),
    answer_words: tuple[int, int] = (1, 5),
) -> list[Sample]:
    """Random passages with one word-aligned gold answer each."""
    rng = np.random.default_rng([seed, _DATASET_SALT])
    samples = []
    for k in range(n_samples):
        n = int(rng.integers(passage_words[0], passage_words[1] + 1))
        words = [_word(rng, PASSAGE_LETTERS) for _ in range(n)]
        m = int(rng.integers(answer_words[0], min(answer_words[1], n) + 1))
        first = int(rng.integers(0, n - m + 1))
        question = " ".join(_word(rng, QUESTION_LETTERS) for _ in range(int(rng.integers(3, 7))))
        passage = " ".join(words)
        start = len(" ".join(words[:first])) + (1 if first else 0)
        text = " ".join(words[first : first + m])
        samples.append(Sample(f"synth-{seed}-{k:05d}", question, passage, (GoldAnswer(text, start),)))
    return samples


def tokenize_passage(
    passage: str, pq_id: str, seed: int, fragment_rate: float
) -> tuple[list[tuple[int, int]], list[bool]]:
    """Word tokens, some split in two with the tail flagged as a continuation piece.

    The split pattern depends on (seed, pq_id) only, so all experts share one
    tokenization like checkpoints of the same tokenizer would.
    """
    rng = np.random.default_rng([seed, _TOKENIZER_SALT, _id_hash(pq_id)])
    offsets: list[tuple[int, int]] = []
    cont: list[bool] = []
    for w in word_index(passage):
        split = rng.random() < fragment_rate
        cut = int(rng.integers(1, max(2, w.end_char - w.start_char)))
        if split and w.end_char - w.start_char >= 2:
            offsets += [(w.start_char, w.start_char + cut), (w.start_char + cut, w.end_char)]
            cont += [False, True]
        else:
            offsets.append((w.start_char, w.end_char))
            cont.append(False)
    return offsets, cont


def _token_span(offsets: list[tuple[int, int]], start_char: int, end_char: int) -> tuple[int, int]:
    i = next(t for t, (_, e) in enumerate(offsets) if e > start_char)
    j = max(t for t, (s, _) in enumerate(offsets) if s < end_char)
    return i, j


def synth_expert(dataset: list[Sample], cfg: SynthConfig, expert_index: int) -> list[ExpertDump]:
    """One expert's dumps: Gaussian noise plus ``gold_boost`` at the first
    gold answer's start and end tokens."""
    dumps = []
    for s in dataset:
        if not s.gold_answers:
            raise ValueError(f"{s.pq_id}: synthetic experts need a gold answer")
        offsets, cont = tokenize_passage(s.passage, s.pq_id, cfg.seed, cfg.subword_fragment_rate)
        if not offsets:
            raise ValueError(f"{s.pq_id}: passage has no tokens")
        rng = np.random.default_rng([cfg.seed, expert_index, _id_hash(s.pq_id)])
        n = len(offsets)
        start = cfg.noise_sigma * rng.standard_normal(n)
        end = cfg.noise_sigma * rng.standard_normal(n)
        gold = s.gold_answers[0]
        i, j = _token_span(offsets, gold.start_char, gold.end_char)
        start[i] += cfg.gold_boost
        end[j] += cfg.gold_boost
        dumps.append(
            ExpertDump(
                pq_id=s.pq_id,
                start_scores=tuple(start.tolist()),
                end_scores=tuple(end.tolist()),
                token_offsets=tuple(offsets),
                token_is_continuation=tuple(cont),
            )
        )
    return dumps


def synth_experts(dataset: list[Sample], cfg: SynthConfig) -> list[list[ExpertDump]]:
    return [synth_expert(dataset, cfg, e) for e in range(cfg.n_experts)]
