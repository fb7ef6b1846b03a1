import pytest

from src.digraph import Digraph
from src.errors import DigraphParseError, InputError
from src.families import directed_cycle
from spectral_utils import digraph_io
from spectral_utils.digraph_io import (format_bundle, format_digraph, parse_bundle, parse_digraph,
                                       read_bundle, read_digraph, write_bundle, write_digraph)


def test_parse_simple():
    D = parse_digraph("3 2\n0 1\n1 2\n")
    assert D == Digraph(3, [(0, 1), (1, 2)])


def test_comments_and_blank_lines_ignored():
    text = "# a directed path\n\n3 2\n\n0 1\n# middle\n1 2\n\n"
    assert parse_digraph(text) == Digraph(3, [(0, 1), (1, 2)])


def test_empty_digraph():
    D = parse_digraph("4 0\n")
    assert D.n == 4 and D.m == 0


@pytest.mark.parametrize("text, line, fragment", [
    ("", 1, "empty input"),
    ("3\n", 1, "n m"),
    ("3 2\n0 1\n", 2, "announces 2 arcs"),
    ("2 1\n0 1\n1 0\n", 3, "announces 1 arcs"),
    ("2 1\n0 0\n", 2, "loop"),
    ("2 1\n0 5\n", 2, "outside"),
    ("3 2\n0 1\n0 1\n", 3, "duplicate"),
    ("2 1\nzero one\n", 2, "two integers"),
])
def test_parse_errors_name_the_line(text, line, fragment):
    with pytest.raises(DigraphParseError) as excinfo:
        parse_digraph(text)
    assert excinfo.value.line_number == line
    assert f"line {line}:" in str(excinfo.value)
    assert fragment in str(excinfo.value)


def test_parse_error_is_input_error():
    with pytest.raises(InputError):
        parse_digraph("1 1\n0 0\n")


def test_format_sorts_arcs():
    D = Digraph(3, [(2, 0), (0, 1), (1, 2)])
    assert format_digraph(D) == "3 3\n0 1\n1 2\n2 0\n"
    assert format_digraph(D, comment="C_3") == "# C_3\n3 3\n0 1\n1 2\n2 0\n"


def test_bundle_parse():
    text = "2 1\n0 1\n---\n3 0\n---\n\n"
    digraphs = parse_bundle(text)
    assert digraphs == [Digraph(2, [(0, 1)]), Digraph(3, [])]
    assert parse_bundle(format_bundle(digraphs)) == digraphs


def test_bundle_error_uses_file_line_number():
    with pytest.raises(DigraphParseError) as excinfo:
        parse_bundle("2 1\n0 1\n---\n2 1\n1 1\n")
    assert excinfo.value.line_number == 5


def test_write_then_read(tmp_path):
    D = directed_cycle(5)
    path = write_digraph(D, str(tmp_path / "c5.txt"), comment="directed cycle")
    assert read_digraph(path) == D
    assert read_bundle(path) == [D]


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        read_digraph(str(tmp_path / "nope.txt"))


def test_write_then_read_bundle(tmp_path):
    digraphs = [directed_cycle(3), Digraph(2, [(1, 0)])]
    path = write_bundle(digraphs, str(tmp_path / "bundle.txt"))
    assert read_bundle(path) == digraphs


def test_non_utf8_file_is_a_parse_error(tmp_path):
    path = tmp_path / "latin.txt"
    path.write_bytes(b"2 1\n0 1\n# \xff\xfe\n")
    with pytest.raises(DigraphParseError) as excinfo:
        read_bundle(str(path))
    assert excinfo.value.line_number == 3


def test_directory_is_not_a_digraph_file(tmp_path):
    with pytest.raises(InputError):
        read_digraph(str(tmp_path))


def test_unreadable_file(tmp_path, monkeypatch):
    path = tmp_path / "p2.txt"
    path.write_text("2 1\n0 1\n")

    def denied(*args, **kwargs):
        raise PermissionError(13, "Permission denied")

    monkeypatch.setattr(digraph_io, "open", denied, raising=False)
    with pytest.raises(InputError, match="Permission denied"):
        read_digraph(str(path))


def test_write_into_missing_directory(tmp_path):
    with pytest.raises(InputError):
        write_digraph(directed_cycle(3), str(tmp_path / "missing" / "c3.txt"))
