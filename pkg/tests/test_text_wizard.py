"""Tests for text_wizard module."""

import pathlib

import pytest

from back_and_forth.src.path_wizard import ParseError
from back_and_forth.src.text_wizard import (
    Direction,
    EnglishTokenizer,
    JapaneseTokenizer,
    Language,
    RomanizationTable,
    ScriptClass,
    UnsupportedCharacter,
    classify_char,
    is_katakana_word,
    load_root_table,
    load_stopwords,
    romanize_katakana,
    root_form,
    script_runs,
    split_english_compounds,
    split_japanese_compounds,
    strip_suffix,
    tokenize_english,
    tokenize_japanese,
)


class TestClassifyChar:
    """Tests for classify_char function."""

    @pytest.mark.parametrize(
        ("ch", "expected"),
        [
            ("テ", ScriptClass.KATAKANA),
            ("ー", ScriptClass.KATAKANA),
            ("a", ScriptClass.LATIN),
            ("Z", ScriptClass.LATIN),
            ("語", ScriptClass.KANJI),
            ("々", ScriptClass.KANJI),
            ("の", ScriptClass.HIRAGANA),
            ("7", ScriptClass.DIGIT),
            ("、", ScriptClass.OTHER),
            (" ", ScriptClass.OTHER),
        ],
    )
    def test_classifies_by_code_point(self, ch: str, expected: ScriptClass) -> None:
        """Should map each character to its script class."""
        assert classify_char(ch) is expected

    def test_partitions_named_ranges(self) -> None:
        """Should give every scalar of the named ranges exactly its range's class."""
        for code in range(0x3040, 0x30A0):
            assert classify_char(chr(code)) is ScriptClass.HIRAGANA
        for code in range(0x30A0, 0x3100):
            assert classify_char(chr(code)) is ScriptClass.KATAKANA
        for code in range(0x4E00, 0xA000):
            assert classify_char(chr(code)) is ScriptClass.KANJI

    def test_rejects_multi_character_string(self) -> None:
        """Should raise TypeError for anything but one character."""
        with pytest.raises(TypeError):
            classify_char("ab")


class TestScriptRuns:
    """Tests for script_runs and is_katakana_word."""

    def test_splits_at_script_changes(self) -> None:
        """Should group maximal runs of one class."""
        assert script_runs("CCDメモリー") == [
            (ScriptClass.LATIN, "CCD"),
            (ScriptClass.KATAKANA, "メモリー"),
        ]

    def test_katakana_word(self) -> None:
        """Should accept katakana-only strings and reject everything else."""
        assert is_katakana_word("データ")
        assert not is_katakana_word("データ処理")
        assert not is_katakana_word("")


class TestRomanizeKatakana:
    """Tests for romanize_katakana function."""

    @pytest.mark.parametrize(
        ("word", "morae"),
        [
            ("システム", ["shi", "su", "te", "mu"]),
            ("マイニング", ["ma", "i", "ni", "n", "gu"]),
            ("データ", ["dee", "ta"]),
            ("ネットワーク", ["ne", "tto", "waa", "ku"]),
            ("テキスト", ["te", "ki", "su", "to"]),
            ("コロケイション", ["ko", "ro", "ke", "i", "sho", "n"]),
        ],
    )
    def test_romanizes_transliteration_examples(self, word: str, morae: list[str]) -> None:
        """Should produce one mora per katakana character, folding digraphs and marks."""
        assert romanize_katakana(word) == morae

    def test_digraph_wins_over_single_character(self) -> None:
        """Should read a small ya/yu/yo or small vowel together with the preceding kana."""
        assert romanize_katakana("ジェ") == ["je"]

    @pytest.mark.parametrize("word", ["ーア", "アッ", "アッッカ", "アa", "アッー"])
    def test_rejects_unattached_marks_and_foreign_characters(self, word: str) -> None:
        """Should raise UnsupportedCharacter when a mark has nothing to attach to."""
        with pytest.raises(UnsupportedCharacter):
            romanize_katakana(word)

    def test_uses_custom_table(self, tmp_path: pathlib.Path) -> None:
        """Should read mappings from a user-supplied table."""
        path = tmp_path / "romaji.tsv"
        path.write_text("ア\ta\nカ\tka\n", encoding="utf-8")
        table = RomanizationTable.load(path)
        assert romanize_katakana("アカ", table) == ["a", "ka"]
        with pytest.raises(UnsupportedCharacter):
            romanize_katakana("サ", table)

    def test_rejects_uppercase_mora(self) -> None:
        """Should refuse a table whose morae are not lowercase ASCII."""
        with pytest.raises(ValueError, match="lowercase ASCII"):
            RomanizationTable({"ア": "A"})

    def test_malformed_table_line_is_reported(self, tmp_path: pathlib.Path) -> None:
        """Should raise ParseError naming the line of a bad mora."""
        path = tmp_path / "romaji.tsv"
        path.write_text("# kana\tmora\nア\ta\n\nカ\tKA\n", encoding="utf-8")
        with pytest.raises(ParseError, match="lowercase ASCII") as error:
            RomanizationTable.load(path)
        assert error.value.line_number == 4


class TestRootForms:
    """Tests for strip_suffix and root_form."""

    @pytest.mark.parametrize(
        ("word", "root"),
        [
            ("methods", "method"),
            ("dictionaries", "dictionary"),
            ("classes", "class"),
            ("boxes", "box"),
            ("matches", "match"),
            ("analysis", "analysis"),
            ("corpus", "corpus"),
            ("mrds", "mrds"),
            ("mining", "mining"),
            ("indexing", "index"),
            ("mapped", "map"),
            ("called", "call"),
            ("running", "run"),
            ("gas", "gas"),
        ],
    )
    def test_strips_regular_suffixes(self, word: str, root: str) -> None:
        """Should remove plural, -ing and -ed endings deterministically."""
        assert strip_suffix(word) == root

    def test_table_wins_over_rules(self) -> None:
        """Should look the word up before applying suffix rules."""
        assert root_form("learning", {"learning": "learning"}) == "learning"
        assert root_form("retrieved", {"retrieved": "retrieve"}) == "retrieve"

    def test_leaves_non_alphabetic_words(self) -> None:
        """Should return words with digits unchanged."""
        assert root_form("mp3s", {}) == "mp3s"


class TestTokenizeEnglish:
    """Tests for English tokenization."""

    def test_extracts_content_word_roots(self) -> None:
        """Should drop stopwords and attach root forms."""
        tokens = tokenize_english("improvement or proposal of data mining methods")
        assert [t.root for t in tokens] == ["improvement", "proposal", "data", "mining", "method"]
        assert tokens[-1].surface == "methods"

    def test_empty_text(self) -> None:
        """Should return no tokens for empty input."""
        assert tokenize_english("") == []

    def test_parenthesized_abbreviation(self) -> None:
        """Should split on parentheses and keep the abbreviation as a token."""
        tokens = tokenize_english("MRDs (machine readable dictionaries)")
        assert [t.root for t in tokens] == ["mrds", "machine", "readable", "dictionary"]

    def test_hyphen_splits_words(self) -> None:
        """Should split hyphenated words."""
        assert [t.root for t in tokenize_english("cross-language")] == ["cross", "language"]

    def test_tokenizing_surfaces_is_idempotent(self) -> None:
        """Should reproduce the same tokens from the joined surfaces."""
        text = "Retrieval of Japanese documents using English queries, 1999."
        tokens = tokenize_english(text)
        again = tokenize_english(" ".join(t.surface for t in tokens))
        assert again == tokens

    def test_custom_stopwords_and_root_table(self, tmp_path: pathlib.Path) -> None:
        """Should honour user-supplied stopword and root files."""
        stopwords = tmp_path / "stop.txt"
        stopwords.write_text("data\n", encoding="utf-8")
        roots = tmp_path / "roots.tsv"
        roots.write_text("mice\tmouse\n", encoding="utf-8")
        tokenizer = EnglishTokenizer.from_files(stopwords, roots)
        assert [t.root for t in tokenizer.tokenize("data of mice")] == ["of", "mouse"]


class TestSplitEnglishCompounds:
    """Tests for English compound grouping."""

    def test_stopwords_end_compounds(self) -> None:
        """Should group maximal non-stopword runs."""
        compounds = split_english_compounds("improvement or proposal of data mining methods")
        assert [[t.root for t in c] for c in compounds] == [
            ["improvement"],
            ["proposal"],
            ["data", "mining", "method"],
        ]

    def test_punctuation_ends_compounds(self) -> None:
        """Should break at commas but not at hyphens."""
        compounds = split_english_compounds("cross-language retrieval, query translation")
        assert [[t.root for t in c] for c in compounds] == [
            ["cross", "language", "retrieval"],
            ["query", "translation"],
        ]

    def test_tokenizer_method_matches_function(self) -> None:
        """Should give the same grouping through the tokenizer object."""
        text = "register transfer language"
        assert EnglishTokenizer().compounds(text) == split_english_compounds(text)


class TestTokenizeJapanese:
    """Tests for Japanese tokenization."""

    def test_longest_match(self) -> None:
        """Should split a compound into vocabulary words."""
        tokens = tokenize_japanese("相関関数", {"相関", "関数"})
        assert [t.surface for t in tokens] == ["相関", "関数"]

    def test_script_run_fallback(self) -> None:
        """Should emit an unknown katakana run as one token."""
        assert [t.surface for t in tokenize_japanese("テキスト", set())] == ["テキスト"]

    def test_drops_hiragana(self) -> None:
        """Should drop hiragana function material."""
        tokens = tokenize_japanese("相関の関数", {"相関", "関数"})
        assert [t.surface for t in tokens] == ["相関", "関数"]

    def test_fallback_stops_at_vocabulary_word(self) -> None:
        """Should end a fallback run where a vocabulary word begins."""
        tokens = tokenize_japanese("因子相関", {"相関"})
        assert [t.surface for t in tokens] == ["因子", "相関"]

    def test_latin_root_is_lowercase(self) -> None:
        """Should lowercase Latin fallback roots after NFKC normalization."""
        tokens = tokenize_japanese("ＣＣＤメモリー", set())
        assert [(t.surface, t.root) for t in tokens] == [
            ("CCD", "ccd"),
            ("メモリー", "メモリー"),
        ]

    def test_never_spans_script_boundary_outside_vocabulary(self) -> None:
        """Should keep every non-vocabulary token inside one script class."""
        vocabulary = {"データマイニング", "相関"}
        text = "データマイニング手法と相関ルールCCD2"
        for token in tokenize_japanese(text, vocabulary):
            if token.surface not in vocabulary:
                assert len(token.script_profile) == 1

    def test_tokenizer_normalizes_vocabulary(self) -> None:
        """Should match full-width vocabulary entries against normalized text."""
        tokenizer = JapaneseTokenizer(frozenset({"ＩＣ"}))
        assert "IC" in tokenizer.vocabulary
        assert tokenizer.language is Language.JAPANESE
        assert [t.surface for t in tokenizer.tokenize("IC")] == ["IC"]


class TestSplitJapaneseCompounds:
    """Tests for Japanese compound extraction."""

    def test_hiragana_and_punctuation_separate(self) -> None:
        """Should return maximal content-script runs."""
        compounds = split_japanese_compounds("「データマイニング」の手法")
        assert compounds == ["データマイニング", "手法"]

    def test_mixed_script_compound_stays_whole(self) -> None:
        """Should keep Latin, katakana and kanji runs together."""
        assert split_japanese_compounds("CCDメモリーを使う") == ["CCDメモリー", "使"]


class TestDirection:
    """Tests for Direction enum."""

    def test_source_and_target(self) -> None:
        """Should name the languages on each side."""
        assert Direction.JA_EN.source is Language.JAPANESE
        assert Direction.JA_EN.target is Language.ENGLISH
        assert Direction("en-ja").target is Language.JAPANESE


class TestShippedResources:
    """Tests for the packaged stopword and root tables."""

    def test_stopword_list_size(self) -> None:
        """Should ship a standard list of roughly a hundred words."""
        stopwords = load_stopwords()
        assert 100 <= len(stopwords) <= 200
        assert "the" in stopwords
        assert "data" not in stopwords

    def test_root_table_keeps_gerund_nouns(self) -> None:
        """Should map gerund nouns to themselves."""
        assert load_root_table()["learning"] == "learning"
