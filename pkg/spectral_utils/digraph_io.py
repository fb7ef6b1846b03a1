"""
Digraph text format storage
Line 1: `n m`; then m lines `u v` (0-indexed). Lines starting with '#' and blank lines are ignored.
Several digraphs may be concatenated with a `---` separator line.
"""
import os

from src.digraph import Digraph
from src.errors import DigraphParseError, InputError

BUNDLE_SEPARATOR = "---"


def _parse_int_pair(text, line_number, what):
    parts = text.split()
    if len(parts) != 2:
        raise DigraphParseError(f"expected two integers ({what}), got {text.strip()!r}", line_number)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise DigraphParseError(f"expected two integers ({what}), got {text.strip()!r}", line_number)


def _parse_lines(numbered_lines):
    """Parse (line_number, text) pairs that hold exactly one digraph"""
    content = [(num, text) for num, text in numbered_lines
               if text.strip() and not text.lstrip().startswith('#')]
    if not content:
        raise DigraphParseError("empty input: expected a header line `n m`", 1)

    header_line, header = content[0]
    n, m = _parse_int_pair(header, header_line, "n m")
    if n < 0 or m < 0:
        raise DigraphParseError("n and m must be nonnegative", header_line)

    body = content[1:]
    if len(body) != m:
        last_line = body[-1][0] if body else header_line
        raise DigraphParseError(f"header announces {m} arcs but {len(body)} arc lines follow", last_line)

    seen = set()
    arcs = []
    for line_number, text in body:
        u, v = _parse_int_pair(text, line_number, "u v")
        if u == v:
            raise DigraphParseError(f"loop at vertex {u}", line_number)
        if not (0 <= u < n and 0 <= v < n):
            raise DigraphParseError(f"arc ({u}, {v}) has an endpoint outside [0, {n})", line_number)
        if (u, v) in seen:
            raise DigraphParseError(f"duplicate arc ({u}, {v})", line_number)
        seen.add((u, v))
        arcs.append((u, v))
    return Digraph(n, arcs)


def parse_digraph(text):
    """
    Parse one digraph from text
    Returns:
        Digraph
    Raises:
        DigraphParseError: with the offending line number
    """
    return _parse_lines(list(enumerate(text.splitlines(), start=1)))


def parse_bundle(text):
    """Parse `---`-separated digraphs; an empty section is skipped"""
    digraphs = []
    section = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if line.strip() == BUNDLE_SEPARATOR:
            if any(t.strip() and not t.lstrip().startswith('#') for _, t in section):
                digraphs.append(_parse_lines(section))
            section = []
        else:
            section.append((line_number, line))
    if any(t.strip() and not t.lstrip().startswith('#') for _, t in section):
        digraphs.append(_parse_lines(section))
    return digraphs


def format_digraph(D, comment=None):
    """Text form of D with arcs in lexicographic order"""
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{D.n} {D.m}")
    lines.extend(f"{u} {v}" for u, v in D.arcs_sorted())
    return "\n".join(lines) + "\n"


def format_bundle(digraphs):
    return f"{BUNDLE_SEPARATOR}\n".join(format_digraph(D) for D in digraphs)


def _read_text(path):
    """
    File contents as UTF-8 text
    Raises:
        InputError: missing or unreadable file
        DigraphParseError: bytes that are not UTF-8, with the line they sit on
    """
    if not os.path.exists(path):
        raise InputError(f"digraph file not found: {path}")
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise InputError(f"cannot read digraph file {path}: {e.strerror or e}") from e
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_number = data.count(b"\n", 0, e.start) + 1
        raise DigraphParseError(f"{path} is not UTF-8 text", line_number) from e


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror or e}") from e
    return path


def read_digraph(path):
    """Load a digraph file"""
    return parse_digraph(_read_text(path))


def read_bundle(path):
    return parse_bundle(_read_text(path))


def write_digraph(D, path, comment=None):
    return _write_text(path, format_digraph(D, comment))


def write_bundle(digraphs, path):
    return _write_text(path, format_bundle(digraphs))

