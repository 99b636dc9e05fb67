"""Tests for path_wizard module."""

import pathlib

import pytest

from back_and_forth.src.path_wizard import (
    ParseError,
    data_path,
    normalize_file_path,
    parse_count,
    read_jsonl,
    read_tsv_rows,
    write_jsonl,
    write_tsv_rows,
)


class TestNormalizeFilePath:
    """Tests for normalize_file_path function."""

    def test_returns_path_object(self, tmp_path: pathlib.Path) -> None:
        """Should return a pathlib.Path object."""
        result = normalize_file_path(tmp_path / "test.txt")
        assert isinstance(result, pathlib.Path)

    def test_accepts_string_path(self, tmp_path: pathlib.Path) -> None:
        """Should accept a string path."""
        result = normalize_file_path(str(tmp_path / "test.txt"))
        assert result == (tmp_path / "test.txt").resolve()

    def test_creates_parent_directory_by_default(self, tmp_path: pathlib.Path) -> None:
        """Should create parent directories by default."""
        new_dir = tmp_path / "new_dir" / "subdir"
        normalize_file_path(new_dir / "test.txt")
        assert new_dir.exists()

    def test_does_not_create_parent_when_disabled(self, tmp_path: pathlib.Path) -> None:
        """Should not create parent directory when make_parent_path is False."""
        new_dir = tmp_path / "nonexistent"
        normalize_file_path(new_dir / "test.txt", make_parent_path=False)
        assert not new_dir.exists()

    def test_raises_when_path_should_exist_but_doesnt(self, tmp_path: pathlib.Path) -> None:
        """Should raise FileNotFoundError when path_should_exist=True and path doesn't exist."""
        with pytest.raises(FileNotFoundError):
            normalize_file_path(tmp_path / "nonexistent.txt", path_should_exist=True)

    def test_raises_type_error_for_invalid_type(self) -> None:
        """Should raise TypeError for non-string/Path types."""
        with pytest.raises(TypeError, match="Expected str or pathlib.Path"):
            normalize_file_path(123)  # type: ignore[arg-type]


class TestDataPath:
    """Tests for data_path function."""

    @pytest.mark.parametrize(
        "name",
        [
            "romanization.tsv",
            "similarity.tsv",
            "segmentation_chars.tsv",
            "root_table.tsv",
            "stopwords.txt",
        ],
    )
    def test_finds_shipped_files(self, name: str) -> None:
        """Should locate every data file shipped with the package."""
        assert data_path(name).is_file()

    def test_raises_for_unknown_file(self) -> None:
        """Should raise FileNotFoundError for a file the package does not ship."""
        with pytest.raises(FileNotFoundError, match="No packaged data file"):
            data_path("missing.tsv")


class TestTsvRows:
    """Tests for read_tsv_rows and write_tsv_rows."""

    def test_skips_comments_and_blank_lines(self, tmp_path: pathlib.Path) -> None:
        """Should yield data lines only, with 1-based line numbers."""
        path = tmp_path / "rows.tsv"
        path.write_text("# header\n\na\tb\nc\td\n", encoding="utf-8")
        assert list(read_tsv_rows(path, 2)) == [(3, ["a", "b"]), (4, ["c", "d"])]

    def test_reports_line_number_of_bad_row(self, tmp_path: pathlib.Path) -> None:
        """Should raise ParseError naming the offending line."""
        path = tmp_path / "rows.tsv"
        path.write_text("a\tb\nc\n", encoding="utf-8")
        with pytest.raises(ParseError) as error:
            list(read_tsv_rows(path, 2))
        assert error.value.line_number == 2
        assert ":2:" in str(error.value)

    def test_rejects_empty_field(self, tmp_path: pathlib.Path) -> None:
        """Should reject a row with an empty field."""
        path = tmp_path / "rows.tsv"
        path.write_text("a\t \n", encoding="utf-8")
        with pytest.raises(ParseError, match="empty field"):
            list(read_tsv_rows(path, 2))

    def test_accepts_field_range(self, tmp_path: pathlib.Path) -> None:
        """Should accept rows with any field count inside the range."""
        path = tmp_path / "rows.tsv"
        path.write_text("a\tb\na\tb\tc\n", encoding="utf-8")
        assert [fields for _, fields in read_tsv_rows(path, 2, 3)] == [["a", "b"], ["a", "b", "c"]]

    def test_writes_header_and_rows(self, tmp_path: pathlib.Path) -> None:
        """Should write the header line and return the row count."""
        path = tmp_path / "out" / "rows.tsv"
        written = write_tsv_rows(path, [("a", 1), ("b", 2)], header="# name\tcount")
        assert written == 2
        assert path.read_bytes() == b"# name\tcount\na\t1\nb\t2\n"


class TestParseCount:
    """Tests for parse_count function."""

    def test_parses_positive_integer(self) -> None:
        """Should return the integer value."""
        assert parse_count("f.tsv", 1, "12") == 12

    @pytest.mark.parametrize("value", ["0", "-3", "x"])
    def test_rejects_non_positive_or_non_integer(self, value: str) -> None:
        """Should raise ParseError for zero, negative or non-numeric counts."""
        with pytest.raises(ParseError):
            parse_count("f.tsv", 7, value)


class TestJsonl:
    """Tests for read_jsonl and write_jsonl."""

    def test_round_trips_records_with_sorted_keys(self, tmp_path: pathlib.Path) -> None:
        """Should write sorted keys and read the same records back."""
        path = tmp_path / "records.jsonl"
        write_jsonl(path, [{"b": 1, "a": "相関"}])
        assert path.read_text(encoding="utf-8") == '{"a": "相関", "b": 1}\n'
        assert list(read_jsonl(path)) == [(1, {"a": "相関", "b": 1})]

    def test_rejects_invalid_json(self, tmp_path: pathlib.Path) -> None:
        """Should raise ParseError for a line that is not JSON."""
        path = tmp_path / "records.jsonl"
        path.write_text('{"a": 1}\nnot json\n', encoding="utf-8")
        with pytest.raises(ParseError, match="invalid JSON"):
            list(read_jsonl(path))

    def test_rejects_non_object(self, tmp_path: pathlib.Path) -> None:
        """Should raise ParseError for a JSON value that is not an object."""
        path = tmp_path / "records.jsonl"
        path.write_text("[1, 2]\n", encoding="utf-8")
        with pytest.raises(ParseError, match="expected a JSON object"):
            list(read_jsonl(path))
