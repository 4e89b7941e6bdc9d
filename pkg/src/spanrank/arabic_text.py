"""Normalization, light stemming and stopword lookup for Arabic text."""
from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

TATWEEL = "ـ"
_ALEF_VARIANTS = str.maketrans({"أ": "ا", "إ": "ا", "آ": "ا", "ى": "ي"})
_WS = re.compile(r"\s+")


def normalize(text: str, unify: bool = True) -> str:
    """Collapse whitespace and drop tatweel.

    With ``unify`` the hamzated alef forms map to bare alef and alef maqsura
    maps to ya.
    """
    text = text.replace(TATWEEL, "")
    if unify:
        text = text.translate(_ALEF_VARIANTS)
    return _WS.sub(" ", text).strip()


def strip_punctuation(text: str) -> str:
    return "".join(" " if unicodedata.category(ch).startswith("P") else ch for ch in text)


def tokenize(text: str) -> list[str]:
    """Normalized, punctuation-free whitespace tokens."""
    return normalize(strip_punctuation(text)).split()


DEFAULT_PREFIXES = ("و", "ف", "ب", "ك", "ل", "ال", "وال", "بال", "كال", "فال", "لل")
DEFAULT_SUFFIXES = ("ها", "ان", "ات", "ون", "ين", "يه", "ية", "ه", "ة", "ي")


@dataclass(frozen=True)
class StemmerConfig:
    strip_prefixes: tuple[str, ...] = DEFAULT_PREFIXES
    strip_suffixes: tuple[str, ...] = DEFAULT_SUFFIXES
    min_stem_len: int = 2

    @classmethod
    def from_json(cls, path: str | Path) -> "StemmerConfig":
        """Load affix tables from a JSON object; missing keys keep defaults."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError(f"{path}: stemmer config must be a JSON object")
        unknown = set(data) - {"strip_prefixes", "strip_suffixes", "min_stem_len"}
        if unknown:
            raise ValueError(f"{path}: unknown stemmer config keys {sorted(unknown)}")
        kwargs = {}
        for key in ("strip_prefixes", "strip_suffixes"):
            if key in data:
                kwargs[key] = tuple(normalize(a) for a in data[key])
        if "min_stem_len" in data:
            kwargs["min_stem_len"] = int(data["min_stem_len"])
        return cls(**kwargs)


def _longest_affix(token: str, affixes: Iterable[str], budget: int, prefix: bool) -> int:
    best = 0
    for a in affixes:
        n = len(a)
        if best < n <= budget and (token.startswith(a) if prefix else token.endswith(a)):
            best = n
    return best


def stem(token: str, cfg: StemmerConfig | None = None) -> str:
    """Strip at most one prefix and then at most one suffix.

    The longest matching affix is taken among those that keep the stem at
    ``min_stem_len`` characters or more.
    """
    cfg = cfg or StemmerConfig()
    token = normalize(token)
    p = _longest_affix(token, cfg.strip_prefixes, len(token) - cfg.min_stem_len, prefix=True)
    token = token[p:]
    s = _longest_affix(token, cfg.strip_suffixes, len(token) - cfg.min_stem_len, prefix=False)
    return token[: len(token) - s]


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(w for w in (normalize(x) for x in self.words) if w))

    def __contains__(self, token: str) -> bool:
        return normalize(token) in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "StopwordList":
        words = []
        for line in lines:
            line = line.split("#", 1)[0].strip()
            if line:
                words.append(line)
        return cls(frozenset(words))

    @classmethod
    def from_file(cls, path: str | Path) -> "StopwordList":
        return cls.from_lines(Path(path).read_text(encoding="utf-8").splitlines())

    @classmethod
    def default(cls) -> "StopwordList":
        text = resources.files("spanrank").joinpath("data/arabic_stopwords.txt").read_text(encoding="utf-8")
        return cls.from_lines(text.splitlines())


def is_stopword(token: str, stopwords: StopwordList) -> bool:
    return token in stopwords
