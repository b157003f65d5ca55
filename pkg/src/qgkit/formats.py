"""Plain-text formats: ``qg`` (quasigroup), ``qmap`` (map), ``bruck`` (system).

Writers produce space-separated integers, one record per line, and end with
exactly one trailing newline, so write(read(write(x))) is byte-identical.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from .bruck import BruckSystem, make_bruck_system
from .core import QMap, Quasigroup, make_quasigroup
from .errors import FormatError

PathLike = Union[str, Path]


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line)
    return out


def _ints(line: str, expected: int, what: str) -> list[int]:
    try:
        vals = [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise FormatError(f"{what}: non-integer token in {line!r}") from exc
    if len(vals) != expected:
        raise FormatError(f"{what}: expected {expected} integers, got {len(vals)}")
    return vals


def _table_lines(rows) -> list[str]:
    return [" ".join(str(v) for v in row) for row in rows]


def dumps_qg(Q: Quasigroup) -> str:
    return "\n".join([str(Q.order), *_table_lines(Q.mul)]) + "\n"


def loads_qg(text: str) -> Quasigroup:
    lines = _lines(text)
    if not lines:
        raise FormatError("qg: empty input")
    n = _ints(lines[0], 1, "qg header")[0]
    if n < 1:
        raise FormatError("qg: order must be positive")
    if len(lines) != n + 1:
        raise FormatError(f"qg: expected {n} table rows, got {len(lines) - 1}")
    table = [_ints(line, n, f"qg row {i}") for i, line in enumerate(lines[1:])]
    for i, row in enumerate(table):
        if any(not 0 <= v < n for v in row):
            raise FormatError(f"qg row {i}: entry out of range 0..{n - 1}")
    return make_quasigroup(table)


def dumps_qmap(f: QMap) -> str:
    return f"{f.domain_order} {f.codomain_order}\n" + " ".join(map(str, f.values)) + "\n"


def loads_qmap(text: str) -> QMap:
    lines = _lines(text)
    if len(lines) != 2:
        raise FormatError("qmap: expected a header line and a values line")
    n, m = _ints(lines[0], 2, "qmap header")
    values = _ints(lines[1], n, "qmap values")
    try:
        return QMap(n, m, tuple(values))
    except ValueError as exc:
        raise FormatError(f"qmap: {exc}") from exc


def dumps_bruck(B: BruckSystem) -> str:
    m, k = B.E.order, B.fiber_size
    out = [f"bruck {m} {k}", *_table_lines(B.E.mul)]
    for a in range(m):
        for b in range(m):
            out.append(f"block {a} {b}")
            out.extend(_table_lines(B.blocks[a][b].mul))
    return "\n".join(out) + "\n"


def loads_bruck(text: str) -> BruckSystem:
    lines = _lines(text)
    if not lines:
        raise FormatError("bruck: empty input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "bruck":
        raise FormatError("bruck: header must read 'bruck m k'")
    m, k = _ints(" ".join(head[1:]), 2, "bruck header")
    if m < 1 or k < 1:
        raise FormatError("bruck: m and k must be positive")
    expected = 1 + m + m * m * (k + 1)
    if len(lines) != expected:
        raise FormatError(f"bruck: expected {expected} lines, got {len(lines)}")
    E = make_quasigroup([_ints(lines[1 + i], m, f"bruck E row {i}") for i in range(m)])
    pos = 1 + m
    blocks = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            if lines[pos].split() != ["block", str(a), str(b)]:
                raise FormatError(f"bruck: expected 'block {a} {b}', got {lines[pos]!r}")
            blocks[a][b] = [_ints(lines[pos + 1 + i], k, f"block {a} {b} row {i}") for i in range(k)]
            pos += k + 1
    return make_bruck_system(E, k, blocks)


def read_qg(path: PathLike) -> Quasigroup:
    return loads_qg(Path(path).read_text())


def write_qg(path: PathLike, Q: Quasigroup) -> None:
    Path(path).write_text(dumps_qg(Q))


def read_qmap(path: PathLike) -> QMap:
    return loads_qmap(Path(path).read_text())


def write_qmap(path: PathLike, f: QMap) -> None:
    Path(path).write_text(dumps_qmap(f))


def read_bruck(path: PathLike) -> BruckSystem:
    return loads_bruck(Path(path).read_text())


def write_bruck(path: PathLike, B: BruckSystem) -> None:
    Path(path).write_text(dumps_bruck(B))
