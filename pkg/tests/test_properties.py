"""Hypothesis property tests for cross-module invariants."""
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_spans, mp_softmax
from spanrank.ensemble import vote
from spanrank.metrics import evaluate, histogram, prr, token_f1
from spanrank.postprocess import PipelineConfig, eliminate_redundancy, run_pipeline
from spanrank.qrcd_io import GoldAnswer, Sample, word_index
from spanrank.span_decoder import AnswerCandidate, ExpertDump, decode_topk, softmax

VOCAB = ["الحق", "من", "ربكم", "في", "سبيل", "الله", "كتب", "لهم", "عمل", "صالح", "ما", "ثم"]

dyadic = st.integers(-64, 64).map(lambda v: v / 8)


@st.composite
def passages(draw, min_words=1, max_words=15):
    return " ".join(draw(st.lists(st.sampled_from(VOCAB), min_size=min_words, max_size=max_words)))


@st.composite
def passage_with_spans(draw, max_spans=8):
    P = draw(passages())
    n = len(P)
    spans = []
    for _ in range(draw(st.integers(0, max_spans))):
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(a + 1, n))
        if P[a:b].strip() == P[a:b] and P[a:b]:
            spans.append((a, b))
    return P, spans


def _dump(start, end):
    n = len(start)
    offsets = tuple((3 * t, 3 * t + 2) for t in range(n))
    return ExpertDump("d", tuple(start), tuple(end), offsets, (False,) * n), " ".join("ab" for _ in range(n))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_decoder_shift_invariance_and_order(data):
    n = data.draw(st.integers(1, 20))
    start = data.draw(st.lists(dyadic, min_size=n, max_size=n))
    end = data.draw(st.lists(dyadic, min_size=n, max_size=n))
    c = data.draw(dyadic)
    max_len = data.draw(st.integers(1, n))
    k = data.draw(st.integers(1, 25))
    dump, P = _dump(start, end)
    base = decode_topk(dump, P, k=k, max_answer_tokens=max_len)
    assert [(x.start_char // 3, (x.end_char - 2) // 3) for x in base] == brute_force_spans(start, end, max_len)[:k]
    shifted, _ = _dump([x + c for x in start], [x - c / 2 for x in end])
    assert [x.span for x in decode_topk(shifted, P, k=k, max_answer_tokens=max_len)] == [x.span for x in base]
    assert abs(sum(x.probability for x in base) - 1.0) <= 1e-9
    assert all(a.probability >= b.probability for a, b in zip(base, base[1:]))


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=30))
def test_softmax_matches_high_precision(xs):
    for got, want in zip(softmax(xs), mp_softmax(xs)):
        assert abs(got - want) <= 1e-12


@given(passage_with_spans())
def test_redundancy_emits_disjoint_subspans(ps):
    P, spans = ps
    answers = [AnswerCandidate(P[a:b], a, b, 0.5) for a, b in spans]
    out = eliminate_redundancy(answers, P)
    for x in out:
        assert any(a <= x.start_char and x.end_char <= b for a, b in spans)
        assert P[x.start_char : x.end_char] == x.text
    assert eliminate_redundancy(out, P) == out


@settings(deadline=None)
@given(passage_with_spans(max_spans=12), st.booleans())
def test_pipeline_idempotent_and_bounded(ps, keep):
    P, spans = ps
    words = P.split()
    s = Sample("x", " ".join(words[:2]), P, (GoldAnswer(words[-1], P.rindex(words[-1])),))
    cfg = PipelineConfig(remove_uninformative=not keep)
    answers = [AnswerCandidate(P[a:b], a, b, 1 / (i + 1)) for i, (a, b) in enumerate(spans)]
    once = run_pipeline(answers, s, cfg)
    assert run_pipeline(once, s, cfg) == once
    assert len(once) <= cfg.final_top_n
    assert len({a.text for a in once}) == len(once)
    wi = word_index(P)
    for a in once:
        assert a.text and wi.is_boundary(a.start_char) and wi.is_boundary(a.end_char)


@st.composite
def runs(draw):
    P = "a b c d e f"
    out = []
    for _ in range(draw(st.integers(1, 4))):
        run = {}
        for q in draw(st.lists(st.sampled_from(["q1", "q2", "q3"]), unique=True, min_size=1)):
            cands = {}
            for s, e in draw(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 2)), min_size=1, max_size=5)):
                e = min(5, s + e)
                cands[(2 * s, 2 * e + 1)] = draw(st.floats(0, 1))
            run[q] = [AnswerCandidate(P[a:b], a, b, p) for (a, b), p in cands.items()]
        out.append(run)
    return out


@given(runs(), st.randoms())
def test_vote_permutation_invariant(rs, rnd):
    shuffled = list(rs)
    rnd.shuffle(shuffled)
    assert vote(shuffled) == vote(rs)
    for cands in vote(rs).values():
        assert all(
            (a.probability, -a.start_char) >= (b.probability, -b.start_char) for a, b in zip(cands, cands[1:])
        )


@given(passages(), passages())
def test_token_f1_symmetric_and_bounded(a, b):
    f = token_f1(a, b)
    assert 0.0 <= f <= 1.0
    assert f == token_f1(b, a)
    assert token_f1(a, a) == 1.0


@given(st.lists(passages(), min_size=1, max_size=7), passages())
def test_prr_bounds(ranked, gold):
    cands = [AnswerCandidate(t, 0, len(t), 0.1) for t in ranked]
    s = prr(cands, [GoldAnswer(gold, 0)])
    assert 0.0 <= s.prr <= 1.0
    if s.first_hit_rank is not None:
        assert s.first_hit_rank <= 5
        assert abs(s.prr - s.match_at_hit / s.first_hit_rank) <= 1e-15


@given(st.lists(st.floats(0, 1), max_size=40))
def test_histogram_counts_everything(xs):
    h = histogram(xs)
    assert len(h) == 10 and sum(h) == len(xs)


@given(st.lists(st.tuples(passages(), st.integers(0, 2)), min_size=1, max_size=8), st.randoms())
def test_evaluate_permutation_invariant(rows, rnd):
    ds, run = [], {}
    for i, (P, pick) in enumerate(rows):
        w = P.split()[min(pick, len(P.split()) - 1)]
        ds.append(Sample(f"s{i}", "q", P, (GoldAnswer(w, P.index(w)),)))
        run[f"s{i}"] = [AnswerCandidate(P.split()[0], 0, len(P.split()[0]), 0.5)]
    a = evaluate(run, ds)
    shuffled = list(ds)
    rnd.shuffle(shuffled)
    b = evaluate(run, shuffled)
    assert (a.mean_prr, a.mean_em, a.mean_f1) == (b.mean_prr, b.mean_em, b.mean_f1)
