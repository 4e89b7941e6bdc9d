import json

from hypothesis import given
from hypothesis import strategies as st

from spanrank.arabic_text import (
    StemmerConfig,
    StopwordList,
    is_stopword,
    normalize,
    stem,
    tokenize,
)

arabic_text = st.text(alphabet=st.sampled_from("ابتثجأإآىيةهـ و\t"), max_size=30)
arabic_token = st.text(alphabet=st.sampled_from("ابتثجحخدذرزسشولكفنمهةيى"), min_size=1, max_size=10)


def test_whitespace_collapse():
    assert normalize("  ab   cd ") == "ab cd"


def test_alef_unification():
    assert normalize("أحمد") == "احمد"
    assert normalize("أحمد", unify=False) == "أحمد"
    assert normalize("مصطفى") == "مصطفي"


def test_tatweel_removed():
    assert normalize("الـــله") == "الله"


@given(arabic_text)
def test_normalize_idempotent(text):
    assert normalize(normalize(text)) == normalize(text)
    assert normalize(normalize(text, False), False) == normalize(text, False)


def test_tokenize_strips_punctuation():
    assert tokenize("ما هي شجرة الزقوم؟") == ["ما", "هي", "شجرة", "الزقوم"]
    assert tokenize("ما هي شجرة الزقوم?") == ["ما", "هي", "شجرة", "الزقوم"]


def test_stem_strips_definite_article():
    assert stem("الزقوم") == "زقوم"


def test_stem_length_guard():
    assert stem("من") == "من"


def test_stem_prefix_then_suffix():
    # وال + ... + ين, hand-applied from the default tables
    assert stem("والمؤمنين") == "مؤمن"
    assert stem("شجرة") == "شجر"


def test_stem_prefers_longest_affix_within_guard():
    # "بال" would leave one letter; the guard falls back to "ب"
    assert stem("بالم") == "الم"
    assert stem("بالمال") == "مال"


@given(arabic_token)
def test_stem_output_is_substring_and_guarded(token):
    cfg = StemmerConfig()
    out = stem(token, cfg)
    norm = normalize(token)
    assert out in norm
    assert len(out) >= min(cfg.min_stem_len, len(norm))
    assert stem(token, cfg) == out


def test_stemmer_config_from_json(tmp_path):
    path = tmp_path / "stem.json"
    path.write_text(json.dumps({"strip_prefixes": ["ال"], "strip_suffixes": [], "min_stem_len": 3}), encoding="utf-8")
    cfg = StemmerConfig.from_json(path)
    assert cfg.strip_prefixes == ("ال",)
    assert cfg.min_stem_len == 3
    assert stem("والمؤمنين", cfg) == "والمؤمنين"
    assert stem("المؤمنين", cfg) == "مؤمنين"


def test_default_stopwords_include_listed_examples():
    sw = StopwordList.default()
    for w in ("اذا", "ليس", "ثم"):
        assert is_stopword(w, sw)
    assert is_stopword("إذا", sw)


def test_content_word_not_stopword():
    assert not is_stopword("الزقوم", StopwordList.default())


def test_stopword_whitespace_insensitive():
    sw = StopwordList.default()
    assert is_stopword("  ثم ", sw) == is_stopword("ثم", sw)


def test_stopword_entries_are_normalized():
    sw = StopwordList.default()
    assert all(normalize(w) == w for w in sw.words)
    custom = StopwordList(frozenset({"إذا", " أن "}))
    assert custom.words == {"اذا", "ان"}


def test_stopword_file(tmp_path):
    path = tmp_path / "sw.txt"
    path.write_text("# comment\nفقط\n\nأيضا  # trailing\n", encoding="utf-8")
    sw = StopwordList.from_file(path)
    assert sw.words == {"فقط", "ايضا"}
