"""Script classification, tokenization for English and Japanese, and katakana romanization.

Everything downstream consumes the ``Token`` stream produced here, so both tokenizers
share one contract: ``tokenize(text) -> list[Token]`` with content words only.
"""

from __future__ import annotations

import functools
import itertools
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, ClassVar, Protocol

from loguru import logger

from back_and_forth.src.path_wizard import ParseError, data_path, read_tsv_rows

if TYPE_CHECKING:
    import pathlib
    from collections.abc import Iterable, Mapping

SOKUON = "ッ"
CHOONPU = "ー"
VOWELS = "aeiou"

# Compound boundaries inside English text, besides stopwords
_ENGLISH_BREAK = re.compile(r"[^\s\-]")
_ENGLISH_WORD = re.compile(r"[^\W_]+")


class ScriptClass(str, Enum):
    """Character type of a single Unicode scalar."""

    KANJI = "kanji"
    KATAKANA = "katakana"
    HIRAGANA = "hiragana"
    LATIN = "latin"
    DIGIT = "digit"
    OTHER = "other"


class Language(str, Enum):
    """Language of a document or query."""

    ENGLISH = "english"
    JAPANESE = "japanese"


class Direction(str, Enum):
    """Translation direction, written source-target."""

    JA_EN = "ja-en"
    EN_JA = "en-ja"

    @property
    def source(self) -> Language:
        return Language.JAPANESE if self is Direction.JA_EN else Language.ENGLISH

    @property
    def target(self) -> Language:
        return Language.ENGLISH if self is Direction.JA_EN else Language.JAPANESE


class UnsupportedCharacter(ValueError):
    """A character the romanization table cannot map."""


def classify_char(ch: str) -> ScriptClass:
    """Classify one character by code point range.

    Hiragana is U+3040–U+309F, Katakana U+30A0–U+30FF (the long-vowel mark U+30FC
    included), CJK ideographs (with extension A, the compatibility block and the
    iteration mark 々) are Kanji, Latin-script letters are Latin and ASCII digits
    are Digit. Everything else is Other.

    Raises:
        TypeError: If ``ch`` is not a single character.
    """
    if not isinstance(ch, str) or len(ch) != 1:
        raise TypeError(f"Expected a single character, got {ch!r}")
    code = ord(ch)
    if 0x3040 <= code <= 0x309F:
        return ScriptClass.HIRAGANA
    if 0x30A0 <= code <= 0x30FF:
        return ScriptClass.KATAKANA
    if (
        0x4E00 <= code <= 0x9FFF
        or 0x3400 <= code <= 0x4DBF
        or 0xF900 <= code <= 0xFAFF
        or 0x20000 <= code <= 0x2FA1F
        or code == 0x3005
    ):
        return ScriptClass.KANJI
    if "0" <= ch <= "9":
        return ScriptClass.DIGIT
    if code < 0x0250 and ch.isalpha():
        return ScriptClass.LATIN
    return ScriptClass.OTHER


def script_runs(text: str) -> list[tuple[ScriptClass, str]]:
    """Split text into maximal runs of one script class."""
    return [
        (script, "".join(chars)) for script, chars in itertools.groupby(text, key=classify_char)
    ]


def is_katakana_word(text: str) -> bool:
    """True when every character of a non-empty string is Katakana class."""
    return bool(text) and all(classify_char(ch) is ScriptClass.KATAKANA for ch in text)


@dataclass(frozen=True)
class Token:
    """A content word with its root form and script profile."""

    surface: str
    root: str
    script_profile: tuple[tuple[ScriptClass, int], ...] = ()

    @classmethod
    def of(cls, surface: str, root: str) -> Token:
        profile = tuple((script, len(run)) for script, run in script_runs(surface))
        return cls(surface=surface, root=root, script_profile=profile)


def _check_romanization(kana: str, mora: str) -> None:
    if not 1 <= len(kana) <= 2:
        raise ValueError(f"Romanization keys are one or two characters, got {kana!r}")
    if not (mora.isascii() and mora.isalpha() and mora.islower()):
        raise ValueError(f"Mora for {kana!r} must be lowercase ASCII, got {mora!r}")


@dataclass(frozen=True)
class RomanizationTable:
    """Katakana character (or two-character digraph) to romaji mora."""

    morae: Mapping[str, str]

    def __post_init__(self) -> None:
        for kana, mora in self.morae.items():
            _check_romanization(kana, mora)

    @classmethod
    def load(cls, path: str | pathlib.Path) -> RomanizationTable:
        """Read a ``katakana<TAB>mora`` table."""
        morae: dict[str, str] = {}
        for line_number, (kana, mora) in read_tsv_rows(path, 2):
            if kana in morae:
                raise ParseError(path, line_number, f"duplicate romanization for {kana!r}")
            try:
                _check_romanization(kana, mora)
            except ValueError as error:
                raise ParseError(path, line_number, str(error)) from None
            morae[kana] = mora
        return cls(morae)

    @classmethod
    def default(cls) -> RomanizationTable:
        return _default_romanization()

    def __contains__(self, kana: object) -> bool:
        return kana in self.morae

    def __getitem__(self, kana: str) -> str:
        return self.morae[kana]


@functools.lru_cache(maxsize=1)
def _default_romanization() -> RomanizationTable:
    return RomanizationTable.load(data_path("romanization.tsv"))


def _last_vowel(mora: str) -> str | None:
    return next((letter for letter in reversed(mora) if letter in VOWELS), None)


def romanize_katakana(word: str, table: RomanizationTable | None = None) -> list[str]:
    """Romanize a katakana word into morae.

    Digraphs (キャ, ジェ, ...) are looked up before single characters, the small tsu
    doubles the first letter of the following mora (ット → tto) and the long-vowel
    mark repeats the last vowel of the preceding mora (デー → dee).

    Args:
        word: Katakana-only string.
        table: Character-to-mora table. Defaults to the shipped table.

    Returns:
        One romaji string per mora.

    Raises:
        UnsupportedCharacter: If a character is not katakana, has no table entry,
            or a small tsu / long-vowel mark has nothing to attach to.

    Example:
        >>> romanize_katakana("ネットワーク")
        ['ne', 'tto', 'waa', 'ku']
    """
    table = table if table is not None else RomanizationTable.default()
    morae: list[str] = []
    geminate = False
    position = 0
    while position < len(word):
        ch = word[position]
        if classify_char(ch) is not ScriptClass.KATAKANA:
            raise UnsupportedCharacter(f"{ch!r} in {word!r} is not katakana")
        if ch == SOKUON:
            if geminate or position == len(word) - 1:
                raise UnsupportedCharacter(f"Small tsu at position {position} of {word!r}")
            geminate = True
            position += 1
            continue
        if ch == CHOONPU:
            vowel = _last_vowel(morae[-1]) if morae and not geminate else None
            if vowel is None:
                raise UnsupportedCharacter(f"Long-vowel mark at position {position} of {word!r}")
            morae[-1] += vowel
            position += 1
            continue
        digraph = word[position : position + 2]
        if len(digraph) == 2 and digraph in table:
            mora = table[digraph]
            position += 2
        elif ch in table:
            mora = table[ch]
            position += 1
        else:
            raise UnsupportedCharacter(f"No romanization for {ch!r} in {word!r}")
        if geminate:
            mora = mora[0] + mora
            geminate = False
        morae.append(mora)
    return morae


def load_stopwords(path: str | pathlib.Path | None = None) -> frozenset[str]:
    """Read a one-word-per-line stopword file (shipped list when ``path`` is None)."""
    if path is None:
        return _default_stopwords()
    return frozenset(fields[0].lower() for _, fields in read_tsv_rows(path, 1))


@functools.lru_cache(maxsize=1)
def _default_stopwords() -> frozenset[str]:
    return load_stopwords(data_path("stopwords.txt"))


def load_root_table(path: str | pathlib.Path | None = None) -> dict[str, str]:
    """Read an ``inflected<TAB>root`` table (shipped table when ``path`` is None)."""
    if path is None:
        return dict(_default_root_table())
    return {inflected.lower(): root.lower() for _, (inflected, root) in read_tsv_rows(path, 2)}


@functools.lru_cache(maxsize=1)
def _default_root_table() -> tuple[tuple[str, str], ...]:
    return tuple(load_root_table(data_path("root_table.tsv")).items())


def _has_vowel(stem: str) -> bool:
    return any(letter in "aeiouy" for letter in stem)


def _undouble(stem: str) -> str:
    if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in "aeioulsz":
        return stem[:-1]
    return stem


def strip_suffix(word: str) -> str:
    """Deterministic suffix stripping for plural -s/-es, -ing and -ed."""
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith(("xes", "ches", "shes")) and len(word) > 4:
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")) and len(word) > 3:
        stem = word[:-1]
        return stem if _has_vowel(stem) else word
    for suffix in ("ing", "ed"):
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if len(stem) >= 4 and _has_vowel(stem):
                return _undouble(stem)
    return word


def root_form(word: str, root_table: Mapping[str, str]) -> str:
    """Root of a lowercase word: table lookup, then suffix rules, then identity."""
    if word in root_table:
        return root_table[word]
    if not (word.isascii() and word.isalpha()):
        return word
    return strip_suffix(word)


def _english_words(text: str) -> Iterable[tuple[str, bool]]:
    """Yield ``(word, breaks_before)`` for each alphanumeric run of normalized text."""
    normalized = unicodedata.normalize("NFKC", text).lower()
    previous_end = 0
    for match in _ENGLISH_WORD.finditer(normalized):
        gap = normalized[previous_end : match.start()]
        yield match.group(), bool(_ENGLISH_BREAK.search(gap))
        previous_end = match.end()


def tokenize_english(
    text: str,
    stopwords: frozenset[str] | set[str] | None = None,
    root_table: Mapping[str, str] | None = None,
) -> list[Token]:
    """Tokenize English text into content words.

    Lowercases, splits on non-alphanumerics (hyphens included), drops stopwords
    and attaches root forms.

    Example:
        >>> [t.root for t in tokenize_english("improvement or proposal of data mining methods")]
        ['improvement', 'proposal', 'data', 'mining', 'method']
    """
    stopwords = stopwords if stopwords is not None else load_stopwords()
    root_table = root_table if root_table is not None else load_root_table()
    return [
        Token.of(word, root_form(word, root_table))
        for word, _ in _english_words(text)
        if word not in stopwords
    ]


def split_english_compounds(
    text: str,
    stopwords: frozenset[str] | set[str] | None = None,
    root_table: Mapping[str, str] | None = None,
) -> list[list[Token]]:
    """Group English content words into compounds.

    A compound is a maximal run of non-stopword tokens; stopwords and sentence
    punctuation end a run, whitespace and hyphens do not.
    """
    stopwords = stopwords if stopwords is not None else load_stopwords()
    root_table = root_table if root_table is not None else load_root_table()
    compounds: list[list[Token]] = []
    current: list[Token] = []
    for word, breaks_before in _english_words(text):
        if (breaks_before or word in stopwords) and current:
            compounds.append(current)
            current = []
        if word not in stopwords:
            current.append(Token.of(word, root_form(word, root_table)))
    if current:
        compounds.append(current)
    return compounds


def _fallback_end(
    text: str, start: int, vocabulary: frozenset[str] | set[str], longest: int
) -> int:
    script = classify_char(text[start])
    end = start + 1
    while end < len(text) and classify_char(text[end]) is script:
        if _vocabulary_match(text, end, vocabulary, longest):
            break
        end += 1
    return end


def _vocabulary_match(
    text: str, start: int, vocabulary: frozenset[str] | set[str], longest: int
) -> int:
    for length in range(min(longest, len(text) - start), 0, -1):
        if text[start : start + length] in vocabulary:
            return length
    return 0


def tokenize_japanese(text: str, vocabulary: frozenset[str] | set[str]) -> list[Token]:
    """Segment Japanese text by greedy longest match against a vocabulary.

    Where no vocabulary word starts, the maximal run of one script class (stopping
    where a vocabulary word begins) becomes a fallback token. Hiragana-only and
    Other-class fallback runs are dropped as function material; Latin runs get a
    lowercase root.

    Example:
        >>> [t.surface for t in tokenize_japanese("相関の関数", {"相関", "関数"})]
        ['相関', '関数']
    """
    text = unicodedata.normalize("NFKC", text)
    longest = max(map(len, vocabulary), default=0)
    tokens: list[Token] = []
    position = 0
    while position < len(text):
        length = _vocabulary_match(text, position, vocabulary, longest)
        if length:
            surface = text[position : position + length]
            tokens.append(Token.of(surface, surface))
            position += length
            continue
        end = _fallback_end(text, position, vocabulary, longest)
        surface = text[position:end]
        script = classify_char(surface[0])
        position = end
        if script in (ScriptClass.HIRAGANA, ScriptClass.OTHER):
            continue
        root = surface.lower() if script is ScriptClass.LATIN else surface
        tokens.append(Token.of(surface, root))
    return tokens


def split_japanese_compounds(text: str) -> list[str]:
    """Maximal runs of content-script characters (kanji, katakana, Latin, digits).

    Hiragana and punctuation separate compounds, so 「データマイニング」の手法 yields
    ``["データマイニング", "手法"]``.
    """
    text = unicodedata.normalize("NFKC", text)
    content = {ScriptClass.KANJI, ScriptClass.KATAKANA, ScriptClass.LATIN, ScriptClass.DIGIT}
    runs = itertools.groupby(text, key=lambda ch: classify_char(ch) in content)
    return ["".join(chars) for is_content, chars in runs if is_content]


class Tokenizer(Protocol):
    """Anything that turns text into content-word tokens for one language."""

    language: ClassVar[Language]

    def tokenize(self, text: str) -> list[Token]: ...


@dataclass(frozen=True, eq=False)
class EnglishTokenizer:
    """Stopword and root-table aware English tokenizer."""

    stopwords: frozenset[str] = field(default_factory=load_stopwords)
    root_table: Mapping[str, str] = field(default_factory=load_root_table)
    language: ClassVar[Language] = Language.ENGLISH

    @classmethod
    def from_files(
        cls,
        stopwords: str | pathlib.Path | None = None,
        root_table: str | pathlib.Path | None = None,
    ) -> EnglishTokenizer:
        return cls(load_stopwords(stopwords), load_root_table(root_table))

    def tokenize(self, text: str) -> list[Token]:
        return tokenize_english(text, self.stopwords, self.root_table)

    def compounds(self, text: str) -> list[list[Token]]:
        return split_english_compounds(text, self.stopwords, self.root_table)


@dataclass(frozen=True, eq=False)
class JapaneseTokenizer:
    """Longest-match Japanese tokenizer over a known-word vocabulary."""

    vocabulary: frozenset[str] = frozenset()
    language: ClassVar[Language] = Language.JAPANESE

    def __post_init__(self) -> None:
        normalized = frozenset(unicodedata.normalize("NFKC", word) for word in self.vocabulary)
        object.__setattr__(self, "vocabulary", normalized)
        logger.debug(f"Japanese tokenizer vocabulary: {len(normalized)} words")

    def tokenize(self, text: str) -> list[Token]:
        return tokenize_japanese(text, self.vocabulary)
