"""Text formats: ``.lset`` sets, ``.deriv`` scripts and ``.rot`` rotation systems.

``.lset``::

    lset k=4 l=3
    acb

``.deriv``::

    deriv
    1 3

``.rot``::

    rot n=4 outer=1,4,2
    1: 2 3 4
    ...

Parse errors are :class:`FormatError` and carry the source name and line.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable

from .core import LETTERS, DerivationScript, LSet, TransitionLabel, encode, start_state
from .triangulation import PlaneTriangulation

SEPARATOR = "---"


class FormatError(ValueError):
    def __init__(self, source: str, line: int, message: str) -> None:
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


# -- lset --------------------------------------------------------------------

_LSET_HEADER = re.compile(r"^lset k=(\d+) l=(\d+)$")


def dump_lset(L: LSet) -> str:
    lines = [f"lset k={L.k} l={L.length}"]
    lines += L.strings
    return "\n".join(lines) + "\n"


def parse_lset(text: str, source: str = "<lset>", first_line: int = 1) -> LSet:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise FormatError(source, first_line, "missing 'lset' header")
    m = _LSET_HEADER.match(lines[0].strip())
    if not m:
        raise FormatError(source, first_line, f"bad header {lines[0]!r}; expected 'lset k=<k> l=<l>'")
    k, length = int(m.group(1)), int(m.group(2))
    if not 2 <= k <= len(LETTERS):
        raise FormatError(source, first_line, f"alphabet size {k} out of range")
    codes = []
    prev = None
    for offset, raw in enumerate(lines[1:], start=1):
        s = raw.strip()
        lineno = first_line + offset
        if len(s) != length:
            raise FormatError(source, lineno, f"member {s!r} does not have length {length}")
        try:
            code = encode(s, k)
        except ValueError as exc:
            raise FormatError(source, lineno, str(exc)) from None
        if prev is not None and code <= prev:
            raise FormatError(source, lineno, f"member {s!r} is out of order or repeated")
        prev = code
        codes.append(code)
    return LSet._trusted(length, tuple(codes), k)


def dump_lset_stream(states: Iterable[LSet]) -> str:
    return f"{SEPARATOR}\n".join(dump_lset(L) for L in states)


def parse_lset_stream(text: str, source: str = "<lset stream>") -> list[LSet]:
    out = []
    chunk: list[str] = []
    chunk_start = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.strip() == SEPARATOR:
            out.append(parse_lset("\n".join(chunk), source, chunk_start))
            chunk = []
            chunk_start = lineno + 1
        else:
            chunk.append(raw)
    if chunk or not out:
        out.append(parse_lset("\n".join(chunk), source, chunk_start))
    return out


# -- deriv -------------------------------------------------------------------


def dump_deriv(steps: DerivationScript | Iterable[tuple[int, int]]) -> str:
    labels = steps.steps if isinstance(steps, DerivationScript) else steps
    return "deriv\n" + "".join(f"{i} {j}\n" for i, j in labels)


def parse_deriv(text: str, source: str = "<deriv>") -> tuple[TransitionLabel, ...]:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or lines[0].strip() != "deriv":
        raise FormatError(source, 1, "missing 'deriv' header")
    out = []
    for lineno, raw in enumerate(lines[1:], start=2):
        parts = raw.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise FormatError(source, lineno, f"expected 'i j', got {raw!r}")
        i, j = int(parts[0]), int(parts[1])
        if not 1 <= i < j:
            raise FormatError(source, lineno, f"label ({i}, {j}) needs 1 <= i < j")
        out.append(TransitionLabel(i, j))
    return tuple(out)


# -- rot ---------------------------------------------------------------------

_ROT_HEADER = re.compile(r"^rot n=(\d+) outer=(\d+(?:,\d+)*)$")
_ROT_LINE = re.compile(r"^(\d+):((?:\s+\d+)*)\s*$")


def dump_rot(G: PlaneTriangulation) -> str:
    lines = [f"rot n={G.n} outer={','.join(map(str, G.outer))}"]
    for v in G.vertices:
        lines.append(f"{v}: {' '.join(map(str, G.rotation[v]))}")
    return "\n".join(lines) + "\n"


def parse_rot(text: str, source: str = "<rot>") -> PlaneTriangulation:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise FormatError(source, 1, "missing 'rot' header")
    m = _ROT_HEADER.match(lines[0].strip())
    if not m:
        raise FormatError(source, 1, f"bad header {lines[0]!r}; expected 'rot n=<n> outer=<v>,<v>,<v>'")
    n = int(m.group(1))
    outer = tuple(int(v) for v in m.group(2).split(","))
    rot: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        lm = _ROT_LINE.match(raw.strip())
        if not lm:
            raise FormatError(source, lineno, f"expected 'v: u1 u2 ...', got {raw!r}")
        v = int(lm.group(1))
        nbrs = tuple(int(u) for u in lm.group(2).split())
        if not 1 <= v <= n:
            raise FormatError(source, lineno, f"vertex {v} outside 1..{n}")
        if v in rot:
            raise FormatError(source, lineno, f"vertex {v} listed twice")
        for u in nbrs:
            if not 1 <= u <= n:
                raise FormatError(source, lineno, f"vertex {v}: neighbour {u} outside 1..{n}")
        rot[v] = nbrs
    if len(rot) != n:
        missing = min(set(range(1, n + 1)) - set(rot))
        raise FormatError(source, len(lines), f"vertex {missing} has no rotation line")
    for v in outer:
        if not 1 <= v <= n:
            raise FormatError(source, 1, f"outer vertex {v} outside 1..{n}")
    return PlaneTriangulation(rot, outer)


# -- files -------------------------------------------------------------------


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(str(path), 0, f"cannot read file: {exc.strerror}") from None


def load_start(source: str) -> LSet:
    """``S`` names the start set ``{"acb"}``; anything else is a ``.lset`` path."""
    if source == "S":
        return start_state()
    return parse_lset(read_text(source), str(source))
