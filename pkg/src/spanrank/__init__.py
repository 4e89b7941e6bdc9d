"""Ranked extractive-QA answer spans: decoding, span voting, post-processing and pRR evaluation."""

from .arabic_text import StemmerConfig, StopwordList, is_stopword, normalize, stem
from .ensemble import ExpertRun, read_run, truncate, vote, write_run
from .estimators import AnswerPostProcessor, SpanDecoder, SpanRankingPipeline, SpanVotingEnsemble
from .metrics import EvaluationReport, SampleScore, evaluate, exact_match, partial_match, prr, token_f1
from .postprocess import PipelineConfig, eliminate_redundancy, is_uninformative, repair_subwords, run_pipeline
from .qrcd_io import GoldAnswer, Sample, WordIndex, char_span_to_word_span, load_dataset, word_index
from .span_decoder import AnswerCandidate, ExpertDump, decode_topk, softmax
from .synth import SynthConfig, synth_dataset, synth_expert, synth_experts

__version__ = "0.1.0"

__all__ = [
    "AnswerCandidate",
    "AnswerPostProcessor",
    "EvaluationReport",
    "ExpertDump",
    "ExpertRun",
    "GoldAnswer",
    "PipelineConfig",
    "Sample",
    "SampleScore",
    "SpanDecoder",
    "SpanRankingPipeline",
    "SpanVotingEnsemble",
    "StemmerConfig",
    "StopwordList",
    "SynthConfig",
    "WordIndex",
    "char_span_to_word_span",
    "decode_topk",
    "eliminate_redundancy",
    "evaluate",
    "exact_match",
    "is_stopword",
    "is_uninformative",
    "load_dataset",
    "normalize",
    "partial_match",
    "prr",
    "read_run",
    "repair_subwords",
    "run_pipeline",
    "softmax",
    "stem",
    "synth_dataset",
    "synth_expert",
    "synth_experts",
    "token_f1",
    "truncate",
    "vote",
    "word_index",
    "write_run",
]
