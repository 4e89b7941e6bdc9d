"""scikit-learn style wrappers around the decoding, voting and post-processing steps.

Each estimator is fitted on a dataset (the passages and questions it needs)
and transforms runs, so the steps compose with ``sklearn.pipeline`` and
support ``get_params``/``set_params``/``clone``.
"""
from __future__ import annotations

from typing import Sequence

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .arabic_text import StemmerConfig, StopwordList
from .ensemble import Run, truncate, vote
from .metrics import EvaluationReport, evaluate
from .parallel import pmap
from .postprocess import STAGES, PipelineConfig, run_pipeline
from .qrcd_io import Sample, index_by_id
from .span_decoder import DEFAULT_MAX_ANSWER_TOKENS, DEFAULT_TOP_K, ExpertDump, decode_topk
from .validation import check_dataset, check_dumps, check_positive_int, check_run


class SpanDecoder(TransformerMixin, BaseEstimator):
    """Decode expert dumps into a ranked run.

    Parameters
    ----------
    top_k : int, default=20
        Candidates kept per sample.
    max_answer_tokens : int, default=30
        Longest span considered, in tokens.
    n_jobs : int or None
        Threads for per-sample decoding; None reads ``SPANRANK_THREADS``.
    """

    def __init__(self, top_k=DEFAULT_TOP_K, max_answer_tokens=DEFAULT_MAX_ANSWER_TOKENS, n_jobs=None):
        self.top_k = top_k
        self.max_answer_tokens = max_answer_tokens
        self.n_jobs = n_jobs

    def fit(self, X: Sequence[Sample], y=None):
        samples = check_dataset(X)
        self.passages_ = {s.pq_id: s.passage for s in samples}
        return self

    def transform(self, X: Sequence[ExpertDump]) -> Run:
        check_is_fitted(self, "passages_")
        k = check_positive_int(self.top_k, "top_k")
        max_len = check_positive_int(self.max_answer_tokens, "max_answer_tokens")
        dumps = check_dumps(X, self.passages_)
        decoded = pmap(lambda d: decode_topk(d, self.passages_[d.pq_id], k, max_len), dumps, self.n_jobs)
        return {d.pq_id: cands for d, cands in zip(dumps, decoded)}


class SpanVotingEnsemble(TransformerMixin, BaseEstimator):
    """Sum per-span probabilities over a list of expert runs.

    ``top_n`` optionally truncates the merged lists; leave it None when the
    output feeds post-processing.
    """

    def __init__(self, top_n=None):
        self.top_n = top_n

    def fit(self, X=None, y=None):
        return self

    def transform(self, X: Sequence[Run]) -> Run:
        runs = [check_run(r) for r in X]
        merged = vote(runs)
        if self.top_n is not None:
            merged = truncate(merged, check_positive_int(self.top_n, "top_n"))
        return merged


class AnswerPostProcessor(TransformerMixin, BaseEstimator):
    def __init__(
        self,
        stage_order=STAGES,
        final_top_n=5,
        remove_uninformative=True,
        stopwords=None,
        stemmer=None,
        n_jobs=None,
    ):
        self.stage_order = stage_order
        self.final_top_n = final_top_n
        self.remove_uninformative = remove_uninformative
        self.stopwords = stopwords
        self.stemmer = stemmer
        self.n_jobs = n_jobs

    def _config(self) -> PipelineConfig:
        return PipelineConfig(
            stage_order=tuple(self.stage_order),
            final_top_n=check_positive_int(self.final_top_n, "final_top_n"),
            remove_uninformative=bool(self.remove_uninformative),
            stopwords=self.stopwords if self.stopwords is not None else StopwordList.default(),
            stemmer=self.stemmer if self.stemmer is not None else StemmerConfig(),
        )

    def fit(self, X: Sequence[Sample], y=None):
        self.samples_ = index_by_id(check_dataset(X))
        self.config_ = self._config()
        return self

    def transform(self, X: Run) -> Run:
        check_is_fitted(self, "samples_")
        run = check_run(X, {k: s.passage for k, s in self.samples_.items()})
        ids = sorted(run)
        processed = pmap(lambda i: run_pipeline(run[i], self.samples_[i], self.config_), ids, self.n_jobs)
        return dict(zip(ids, processed))


class SpanRankingPipeline(BaseEstimator):
    """Decode each expert, vote, post-process; ``score`` returns mean pRR.

    ``predict`` takes one list of dumps per expert.
    """

    def __init__(
        self,
        top_k=DEFAULT_TOP_K,
        max_answer_tokens=DEFAULT_MAX_ANSWER_TOKENS,
        stage_order=STAGES,
        final_top_n=5,
        remove_uninformative=True,
        stopwords=None,
        stemmer=None,
        n_jobs=None,
    ):
        self.top_k = top_k
        self.max_answer_tokens = max_answer_tokens
        self.stage_order = stage_order
        self.final_top_n = final_top_n
        self.remove_uninformative = remove_uninformative
        self.stopwords = stopwords
        self.stemmer = stemmer
        self.n_jobs = n_jobs

    def fit(self, X: Sequence[Sample], y=None):
        samples = check_dataset(X)
        self.decoder_ = SpanDecoder(self.top_k, self.max_answer_tokens, self.n_jobs).fit(samples)
        self.ensemble_ = SpanVotingEnsemble().fit()
        self.postprocessor_ = AnswerPostProcessor(
            self.stage_order,
            self.final_top_n,
            self.remove_uninformative,
            self.stopwords,
            self.stemmer,
            self.n_jobs,
        ).fit(samples)
        self.samples_ = samples
        return self

    def predict(self, X: Sequence[Sequence[ExpertDump]]) -> Run:
        check_is_fitted(self, "decoder_")
        runs = [self.decoder_.transform(dumps) for dumps in X]
        return self.postprocessor_.transform(self.ensemble_.transform(runs))

    def evaluate(self, X: Sequence[Sequence[ExpertDump]], dataset: Sequence[Sample] | None = None) -> EvaluationReport:
        run = self.predict(X)
        return evaluate(run, list(dataset) if dataset is not None else self.samples_)

    def score(self, X, y=None) -> float:
        return self.evaluate(X, y).mean_prr
