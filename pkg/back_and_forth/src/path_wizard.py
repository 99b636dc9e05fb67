"""Path normalization and the plain-text file formats shared by every resource."""

from __future__ import annotations

import json
import pathlib
from importlib import resources
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Sequence


class ParseError(ValueError):
    """A resource file line that does not match its declared layout."""

    def __init__(self, path: str | pathlib.Path, line_number: int, message: str) -> None:
        self.path = pathlib.Path(path)
        self.line_number = line_number
        super().__init__(f"{self.path}:{line_number}: {message}")


def normalize_file_path(
    path: str | pathlib.Path, path_should_exist: bool = False, make_parent_path: bool = True
) -> pathlib.Path:
    """Normalize a file path to a resolved pathlib.Path object.

    Converts strings or Path objects to absolute, resolved paths with optional
    parent directory creation.

    Args:
        path: The file path as a string or pathlib.Path.
        path_should_exist: If True, raises FileNotFoundError when the path
            doesn't exist. Defaults to False.
        make_parent_path: If True, creates parent directories if they don't
            exist. Defaults to True.

    Returns:
        A resolved absolute pathlib.Path object.

    Raises:
        TypeError: If path is not a string or pathlib.Path.
        FileNotFoundError: If path_should_exist is True and the path doesn't exist.

    Example:
        >>> path = normalize_file_path("runs/trl.txt")
        >>> path = normalize_file_path("corpus.jsonl", path_should_exist=True)
    """
    if not isinstance(path, str | pathlib.Path):
        raise TypeError(f"Expected str or pathlib.Path, got {type(path)}")

    normalized_path = pathlib.Path(path).resolve()

    if path_should_exist and not normalized_path.exists():
        raise FileNotFoundError(f"Path {normalized_path} does not exist")

    if make_parent_path:
        normalized_path.parent.mkdir(parents=True, exist_ok=True)

    return normalized_path


def data_path(name: str) -> pathlib.Path:
    """Return the location of a data file shipped inside the package.

    Args:
        name: File name under ``back_and_forth/data``.

    Raises:
        FileNotFoundError: If the package ships no such file.
    """
    resource = resources.files("back_and_forth") / "data" / name
    if not resource.is_file():
        raise FileNotFoundError(f"No packaged data file named {name!r}")
    return pathlib.Path(str(resource))


def read_tsv_rows(
    path: str | pathlib.Path, min_fields: int, max_fields: int | None = None
) -> Iterator[tuple[int, list[str]]]:
    """Yield ``(line_number, fields)`` for every data line of a UTF-8 TSV file.

    Blank lines and lines starting with ``#`` are skipped. Line numbers are 1-based
    so they can be quoted in diagnostics.

    Raises:
        FileNotFoundError: If the file does not exist.
        ParseError: If a line has fewer than ``min_fields`` or more than
            ``max_fields`` fields, or an empty field.
    """
    file_path = normalize_file_path(path, path_should_exist=True, make_parent_path=False)
    upper = min_fields if max_fields is None else max_fields
    with file_path.open(encoding="utf-8") as handle:
        for line_number, raw_line in enumerate(handle, start=1):
            line = raw_line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if not min_fields <= len(fields) <= upper:
                raise ParseError(
                    file_path,
                    line_number,
                    f"expected {min_fields}..{upper} tab-separated fields, got {len(fields)}",
                )
            if any(not field.strip() for field in fields):
                raise ParseError(file_path, line_number, "empty field")
            yield line_number, [field.strip() for field in fields]


def parse_count(path: str | pathlib.Path, line_number: int, value: str) -> int:
    """Parse a positive integer count field, raising ParseError with the line number."""
    try:
        count = int(value)
    except ValueError:
        raise ParseError(path, line_number, f"count {value!r} is not an integer") from None
    if count < 1:
        raise ParseError(path, line_number, f"count must be positive, got {count}")
    return count


def write_tsv_rows(
    path: str | pathlib.Path,
    rows: Iterable[Sequence[object]],
    header: str | None = None,
) -> int:
    """Write rows as UTF-8 TSV with ``\\n`` line endings and return the row count."""
    file_path = normalize_file_path(path)
    written = 0
    with file_path.open("w", encoding="utf-8", newline="\n") as handle:
        if header is not None:
            handle.write(f"{header}\n")
        for row in rows:
            handle.write("\t".join(str(field) for field in row) + "\n")
            written += 1
    return written


def read_jsonl(path: str | pathlib.Path) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield ``(line_number, record)`` for every non-blank line of a JSON Lines file."""
    file_path = normalize_file_path(path, path_should_exist=True, make_parent_path=False)
    with file_path.open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as error:
                raise ParseError(file_path, line_number, f"invalid JSON: {error.msg}") from None
            if not isinstance(record, dict):
                raise ParseError(file_path, line_number, "expected a JSON object")
            yield line_number, record


def write_jsonl(path: str | pathlib.Path, records: Iterable[dict[str, Any]]) -> int:
    """Write records as JSON Lines with sorted keys and return the record count."""
    file_path = normalize_file_path(path)
    written = 0
    with file_path.open("w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
            written += 1
    return written
