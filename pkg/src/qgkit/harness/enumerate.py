"""Exhaustive enumeration of small Latin squares and endomorphisms, and the
variety census built on top of them."""

from __future__ import annotations

import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from ..core import Quasigroup, QMap, are_isomorphic, classify, iter_homomorphisms, make_quasigroup
from ..errors import OrderTooLarge
from ..varieties import has_left_inverse_property, in_aDl, in_Dl, is_LF

MAX_ORDER = 5
OVERRIDE_ORDER = 6
MAX_ENDO_ORDER = 5
MAX_ISO_CENSUS_ORDER = 4

PREDICATES = ("loop", "group", "idempotent", "Dl", "aDl", "LF", "LIP")

Table = tuple[tuple[int, ...], ...]
Visitor = Callable[[Table], None]


def worker_count() -> int:
    """Worker bound from QGKIT_THREADS; 1 when unset."""
    raw = os.environ.get("QGKIT_THREADS")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"QGKIT_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"QGKIT_THREADS must be a positive integer, got {raw!r}")
    return n


def _check_order(n: int, allow_order_6: bool):
    if n < 1:
        raise ValueError("order must be positive")
    cap = OVERRIDE_ORDER if allow_order_6 else MAX_ORDER
    if n > cap:
        raise OrderTooLarge(f"order {n} exceeds the enumeration cap {cap}")


def _fill(n: int, cells: Sequence[tuple[int, int]], grid: list[list[int]],
          rowmask: list[int], colmask: list[int], start: int,
          visitor: Optional[Visitor]) -> int:
    """Backtrack over ``cells[start:]``; symbols tried in ascending order."""
    full = (1 << n) - 1
    count = 0
    last = len(cells)

    def step(i: int):
        nonlocal count
        if i == last:
            count += 1
            if visitor is not None:
                visitor(tuple(tuple(r) for r in grid))
            return
        r, c = cells[i]
        free = full & ~(rowmask[r] | colmask[c])
        while free:
            bit = free & -free
            free ^= bit
            grid[r][c] = bit.bit_length() - 1
            rowmask[r] |= bit
            colmask[c] |= bit
            step(i + 1)
            rowmask[r] ^= bit
            colmask[c] ^= bit
        grid[r][c] = -1

    step(start)
    return count


def _cells(n: int, order: str) -> list[tuple[int, int]]:
    if order == "row":
        return [(r, c) for r in range(n) for c in range(n)]
    if order == "column":
        return [(r, c) for c in range(n) for r in range(n)]
    raise ValueError(f"unknown traversal order {order!r}")


def _prefix_rows(n: int) -> int:
    return min(2, n)


def latin_prefixes(n: int) -> list[Table]:
    """All valid first-two-row prefixes, in row-major traversal order."""
    rows = _prefix_rows(n)
    prefixes: list[Table] = []
    cells = [(r, c) for r in range(rows) for c in range(n)]
    grid = [[-1] * n for _ in range(rows)]
    _fill(n, cells, grid, [0] * rows, [0] * n, 0, prefixes.append)
    return prefixes


def _complete(n: int, prefix: Table, visitor: Optional[Visitor]) -> int:
    grid = [list(r) for r in prefix] + [[-1] * n for _ in range(n - len(prefix))]
    rowmask = [0] * n
    colmask = [0] * n
    for r, row in enumerate(prefix):
        for c, v in enumerate(row):
            rowmask[r] |= 1 << v
            colmask[c] |= 1 << v
    cells = [(r, c) for r in range(len(prefix), n) for c in range(n)]
    return _fill(n, cells, grid, rowmask, colmask, 0, visitor)


def _count_prefix(args) -> int:
    n, prefix = args
    return _complete(n, prefix, None)


def enumerate_latin_squares(
    n: int,
    visitor: Optional[Visitor] = None,
    *,
    order: str = "row",
    allow_order_6: bool = False,
    workers: Optional[int] = None,
) -> int:
    """Visit every labelled ``n x n`` Latin square once and return the count.

    ``order`` picks row-major or column-major cell filling.  With more than
    one worker and no visitor, the row-major search is split over the
    completed second rows and the partial counts summed.  A visitor always
    runs in-process, in row-major (or column-major) order.
    """
    _check_order(n, allow_order_6)
    workers = worker_count() if workers is None else workers
    if order == "row" and visitor is None and workers > 1 and n > 2:
        jobs = [(n, p) for p in latin_prefixes(n)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_count_prefix, jobs))
    cells = _cells(n, order)
    grid = [[-1] * n for _ in range(n)]
    return _fill(n, cells, grid, [0] * n, [0] * n, 0, visitor)


def latin_squares(n: int, **kwargs) -> list[Table]:
    out: list[Table] = []
    enumerate_latin_squares(n, out.append, **kwargs)
    return out


def all_quasigroups(max_order: int = 4) -> list[Quasigroup]:
    """Every labelled quasigroup of order 1..max_order."""
    return [make_quasigroup(t) for n in range(1, max_order + 1) for t in latin_squares(n)]


def enumerate_endomorphisms(Q: Quasigroup, max_order: int = MAX_ENDO_ORDER) -> list[QMap]:
    if Q.order > max_order:
        raise OrderTooLarge(f"endomorphism enumeration is capped at order {max_order}")
    return list(iter_homomorphisms(Q, Q))


def random_row_permutation_table(n: int, rng: random.Random) -> list[list[int]]:
    """Each row an independent uniform permutation.  Usually not Latin; meant
    for feeding the validator negative cases."""
    rows = []
    for _ in range(n):
        row = list(range(n))
        rng.shuffle(row)
        rows.append(row)
    return rows


def random_isotope_table(n: int, rng: random.Random) -> list[list[int]]:
    """A Latin square obtained from Z_n by random row, column and symbol shuffles."""
    rp, cp, sp = (rng.sample(range(n), n) for _ in range(3))
    return [[sp[(rp[x] + cp[y]) % n] for y in range(n)] for x in range(n)]


# -- census ------------------------------------------------------------------


def predicate_flags(Q: Quasigroup, predicates: Iterable[str] = PREDICATES) -> dict[str, bool]:
    info = classify(Q)
    out = {}
    for p in predicates:
        if p == "loop":
            out[p] = info.is_loop
        elif p == "group":
            out[p] = info.is_group
        elif p == "idempotent":
            out[p] = info.is_idempotent
        elif p == "Dl":
            out[p] = in_Dl(Q)
        elif p == "aDl":
            out[p] = in_aDl(Q)
        elif p == "LF":
            out[p] = is_LF(Q)
        elif p == "LIP":
            out[p] = has_left_inverse_property(Q) is not None
        else:
            raise ValueError(f"unknown predicate {p!r}; choose from {', '.join(PREDICATES)}")
    return out


@dataclass
class CensusRow:
    order: int
    total: int = 0
    counts: dict[str, int] = field(default_factory=dict)

    def merge(self, other: "CensusRow") -> "CensusRow":
        counts = Counter(self.counts)
        counts.update(other.counts)
        return CensusRow(self.order, self.total + other.total,
                         {p: counts[p] for p in (self.counts.keys() | other.counts.keys())})

    def format(self, predicates: Sequence[str] = PREDICATES) -> str:
        parts = [f"total={self.total}"]
        parts += [f"{p}={self.counts.get(p, 0)}" for p in predicates if p in self.counts]
        return " ".join(parts)


class _Tally:
    def __init__(self, n: int, predicates: Sequence[str]):
        self.row = CensusRow(n, 0, {p: 0 for p in predicates})
        self.predicates = predicates

    def __call__(self, table: Table):
        Q = Quasigroup(table)
        self.row.total += 1
        for p, flag in predicate_flags(Q, self.predicates).items():
            if flag:
                self.row.counts[p] += 1


def _census_prefix(args) -> CensusRow:
    n, prefix, predicates = args
    tally = _Tally(n, predicates)
    _complete(n, prefix, tally)
    return tally.row


def census(
    n: int,
    predicates: Sequence[str] = PREDICATES,
    *,
    up_to_iso: bool = False,
    allow_order_6: bool = False,
    workers: Optional[int] = None,
) -> CensusRow:
    """Count labelled Latin squares of order n satisfying each predicate.

    With ``up_to_iso`` (n <= 4 only) one representative per isomorphism
    class is counted instead.
    """
    _check_order(n, allow_order_6)
    predicates = tuple(predicates)
    predicate_flags(make_quasigroup([[0]]), predicates)  # reject unknown names early
    if up_to_iso:
        if n > MAX_ISO_CENSUS_ORDER:
            raise OrderTooLarge(f"--up-to-iso is limited to order {MAX_ISO_CENSUS_ORDER}")
        reps: list[Quasigroup] = []
        for t in latin_squares(n):
            Q = Quasigroup(t)
            if not any(are_isomorphic(Q, R) is not None for R in reps):
                reps.append(Q)
        tally = _Tally(n, predicates)
        for Q in reps:
            tally(Q.mul)
        return tally.row
    workers = worker_count() if workers is None else workers
    jobs = [(n, p, predicates) for p in latin_prefixes(n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_census_prefix, jobs))
    else:
        parts = [_census_prefix(j) for j in jobs]
    row = CensusRow(n, 0, {p: 0 for p in predicates})
    for part in parts:
        row = row.merge(part)
    row.counts = {p: row.counts[p] for p in predicates}
    return row
