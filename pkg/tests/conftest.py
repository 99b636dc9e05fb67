"""Pytest configuration and shared fixtures."""

import pathlib
from collections.abc import Iterator

import pytest

from back_and_forth.src.index_wizard import Document
from back_and_forth.src.lexicon_wizard import Lexicon, build_base_word_dictionary
from back_and_forth.src.log_wizard import reset_logging
from back_and_forth.src.text_wizard import Language
from back_and_forth.src.translit_wizard import TranslitModel

# Fragment of a technical terminology dictionary, two base words per entry
TERMINOLOGY_ENTRIES = [
    ("CCDメモリー", "CCD memory"),
    ("ICメモリ", "IC memory"),
    ("相関学習", "associative learning"),
    ("連想メモリ", "associative memory"),
    ("結合レコード", "associative record"),
    ("相関関数", "correlation function"),
    ("誤り検出", "error detection"),
    ("因子相関", "factor correlation"),
    ("ハイブリッド集積回路", "hybrid IC"),
]

# English words with their katakana transliterations
KATAKANA_PAIRS = [
    ("system", "システム"),
    ("mining", "マイニング"),
    ("data", "データ"),
    ("network", "ネットワーク"),
    ("text", "テキスト"),
    ("collocation", "コロケイション"),
]

# Symbol correspondences (english symbol, romaji symbol) -> count
SYMBOL_COUNTS = {
    ("m", "ma"): 2,
    ("i", "i"): 3,
    ("ni", "ni"): 2,
    ("n", "n"): 4,
    ("g", "gu"): 2,
    ("da", "dee"): 1,
    ("ta", "ta"): 2,
    ("ter", "ta"): 2,
    ("tor", "ta"): 1,
    ("s", "su"): 4,
    ("s", "shi"): 1,
    ("sy", "shi"): 1,
    ("te", "te"): 3,
    ("x", "kisu"): 1,
    ("t", "to"): 2,
    ("to", "to"): 1,
    ("ne", "ne"): 1,
    ("t", "tto"): 1,
    ("wor", "waa"): 1,
    ("k", "ku"): 2,
    ("c", "ku"): 1,
    ("re", "re"): 3,
    ("gi", "ji"): 1,
    ("si", "ji"): 1,
    ("ro", "ro"): 1,
    ("bo", "bo"): 1,
    ("me", "me"): 1,
    ("mo", "mo"): 1,
    ("ry", "ri"): 1,
    ("ri", "ri"): 1,
    ("tem", "temu"): 1,
    ("m", "mu"): 1,
    ("ki", "ki"): 1,
}


@pytest.fixture(autouse=True)
def _quiet_logging() -> Iterator[None]:
    """Give every test a fresh logging configuration."""
    reset_logging()
    yield
    reset_logging()


@pytest.fixture
def terminology_entries() -> list[tuple[str, str]]:
    return list(TERMINOLOGY_ENTRIES)


@pytest.fixture
def terminology_lexicon() -> Lexicon:
    """Base word dictionary built from the terminology fragment."""
    return build_base_word_dictionary(TERMINOLOGY_ENTRIES)


@pytest.fixture
def katakana_pairs() -> list[tuple[str, str]]:
    return list(KATAKANA_PAIRS)


@pytest.fixture
def symbol_model() -> TranslitModel:
    return TranslitModel(SYMBOL_COUNTS)


@pytest.fixture
def small_corpus() -> list[Document]:
    """Three English documents whose weights are easy to compute by hand."""
    return [
        Document("d1", title="apple banana", abstract="apple"),
        Document("d2", title="banana cherry"),
        Document("d3", title="cherry durian", abstract="durian", keywords=("durian",)),
    ]


@pytest.fixture
def qrels_file(tmp_path: pathlib.Path) -> pathlib.Path:
    path = tmp_path / "qrels.txt"
    path.write_text("q1 0 a 2\nq1 0 b 2\nq1 0 c 0\nq2 0 x 0\n", encoding="utf-8")
    return path


@pytest.fixture
def run_file(tmp_path: pathlib.Path) -> pathlib.Path:
    """Relevant documents of q1 retrieved at ranks 1 and 3."""
    path = tmp_path / "run.txt"
    path.write_text(
        "q1 Q0 a 1 0.9 test\nq1 Q0 c 2 0.8 test\nq1 Q0 b 3 0.7 test\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def japanese_document() -> Document:
    return Document(
        "j1",
        title="相関関数の学習",
        abstract="データマイニング",
        keywords=("相関関数",),
        language=Language.JAPANESE,
    )
