import pytest

from spanrank.arabic_text import StopwordList
from spanrank.ensemble import truncate
from spanrank.metrics import evaluate
from spanrank.postprocess import is_uninformative
from spanrank.qrcd_io import Sample, validate_samples
from spanrank.span_decoder import AnswerCandidate, decode_topk, write_dumps
from spanrank.synth import SynthConfig, synth_dataset, synth_expert, tokenize_passage


def test_dataset_is_valid_and_deterministic():
    a = synth_dataset(50, seed=1)
    assert a == synth_dataset(50, seed=1)
    assert a != synth_dataset(50, seed=2)
    assert validate_samples(a, strict=True) == a


def test_gold_answers_are_informative():
    sw = StopwordList.default()
    for s in synth_dataset(100, seed=4):
        g = s.gold_answers[0]
        assert not is_uninformative(AnswerCandidate(g.text, g.start_char, g.end_char, 1.0), s.question, stopwords=sw)


@pytest.mark.parametrize("fragment_rate", [0.0, 0.3, 1.0])
def test_noiseless_rank_one_is_gold(fragment_rate):
    ds = synth_dataset(100, seed=7)
    dumps = synth_expert(ds, SynthConfig(seed=7, noise_sigma=0.0, subword_fragment_rate=fragment_rate), 0)
    passages = {s.pq_id: s.passage for s in ds}
    run = {d.pq_id: decode_topk(d, passages[d.pq_id]) for d in dumps}
    for s in ds:
        assert run[s.pq_id][0].text == s.gold_answers[0].text
    rep = evaluate(truncate(run, 5), ds)
    assert rep.mean_prr == 1.0


def test_byte_identical_dumps(tmp_path):
    ds = synth_dataset(20, seed=3)
    cfg = SynthConfig(seed=3, noise_sigma=1.5)
    write_dumps(synth_expert(ds, cfg, 2), tmp_path / "a.jsonl")
    write_dumps(synth_expert(ds, cfg, 2), tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_experts_differ_but_share_tokenization():
    ds = synth_dataset(5, seed=0)
    cfg = SynthConfig(seed=0, noise_sigma=1.0, subword_fragment_rate=0.5)
    e0, e1 = synth_expert(ds, cfg, 0), synth_expert(ds, cfg, 1)
    for a, b in zip(e0, e1):
        assert a.start_scores != b.start_scores
        assert a.token_offsets == b.token_offsets
        assert a.token_is_continuation == b.token_is_continuation


def test_fragments_marked():
    s = synth_dataset(1, seed=0)[0]
    offsets, cont = tokenize_passage(s.passage, s.pq_id, 0, 1.0)
    assert any(cont)
    for (a, b), c in zip(offsets, cont):
        if c:
            assert not s.passage[a - 1].isspace()


def test_gold_free_sample_rejected():
    with pytest.raises(ValueError):
        synth_expert([Sample("x", "q", "a b", ())], SynthConfig(), 0)


def test_config_validation():
    with pytest.raises(ValueError):
        SynthConfig(noise_sigma=-1)
    with pytest.raises(ValueError):
        SynthConfig(subword_fragment_rate=2)
