"""Finite quasigroups as Latin-square tables, maps between them, congruences.

Elements of a quasigroup of order ``n`` are the integers ``0..n-1``.  Three
tables are kept, all read row-major:

* ``mul[x][y]  = x*y``
* ``ldiv[x][y] = x\\y``   (the ``z`` with ``x*z = y``)
* ``rdiv[x][y] = y/x``   (the ``z`` with ``z*x = y``; row is the right operand)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NonUniformFibers,
    NotCompatible,
    NotHomomorphism,
    NotLatin,
    OrderTooLarge,
)

Table = tuple[tuple[int, ...], ...]

MAX_ISO_ORDER = 8


def _freeze(table: Sequence[Sequence[int]]) -> Table:
    return tuple(tuple(int(v) for v in row) for row in table)


@dataclass(frozen=True)
class Quasigroup:
    mul: Table
    ldiv: Table = field(init=False, repr=False, compare=False)
    rdiv: Table = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mul = _freeze(self.mul)
        n = len(mul)
        if n == 0:
            raise ValueError("a quasigroup needs at least one element")
        for x, row in enumerate(mul):
            if len(row) != n:
                raise ValueError(f"row {x} has length {len(row)}, expected {n}")
            for v in row:
                if not 0 <= v < n:
                    raise ValueError(f"entry {v} in row {x} is out of range 0..{n - 1}")
        ldiv = [[-1] * n for _ in range(n)]
        rdiv = [[-1] * n for _ in range(n)]
        for x in range(n):
            for y in range(n):
                z = mul[x][y]
                if ldiv[x][z] != -1:
                    raise NotLatin("row", x)
                ldiv[x][z] = y
        for y in range(n):
            for x in range(n):
                z = mul[x][y]
                if rdiv[y][z] != -1:
                    raise NotLatin("column", y)
                rdiv[y][z] = x
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "ldiv", _freeze(ldiv))
        object.__setattr__(self, "rdiv", _freeze(rdiv))

    @property
    def order(self) -> int:
        return len(self.mul)

    @cached_property
    def array(self) -> np.ndarray:
        """Read-only numpy copy of the multiplication table."""
        a = np.array(self.mul, dtype=np.intp)
        a.setflags(write=False)
        return a

    def elements(self) -> range:
        return range(len(self.mul))

    def left_div(self, x: int, y: int) -> int:
        return self.ldiv[x][y]

    def right_div(self, y: int, x: int) -> int:
        return self.rdiv[x][y]


def make_quasigroup(table: Sequence[Sequence[int]]) -> Quasigroup:
    """Build a quasigroup from its multiplication table.

    Raises NotLatin("row" | "column", index) for the first repeated entry.
    """
    return Quasigroup(_freeze(table))


def cyclic_table(n: int) -> Table:
    return tuple(tuple((x + y) % n for y in range(n)) for x in range(n))


def local_units(Q: Quasigroup, a: int) -> tuple[int, int]:
    """Return ``(a/a, a\\a)``, the left and right local units of ``a``."""
    return Q.rdiv[a][a], Q.ldiv[a][a]


def left_unit(Q: Quasigroup) -> Optional[int]:
    ident = tuple(Q.elements())
    for e in Q.elements():
        if Q.mul[e] == ident:
            return e
    return None


def right_unit(Q: Quasigroup) -> Optional[int]:
    n = Q.order
    for e in range(n):
        if all(Q.mul[x][e] == x for x in range(n)):
            return e
    return None


def is_associative(Q: Quasigroup) -> bool:
    m = Q.array
    return bool(np.array_equal(m[m, :], m[:, m]))


@dataclass(frozen=True)
class Classification:
    left_unit: Optional[int]
    right_unit: Optional[int]
    is_loop: bool
    is_group: bool
    is_idempotent: bool


def classify(Q: Quasigroup) -> Classification:
    lu = left_unit(Q)
    ru = right_unit(Q)
    is_loop = lu is not None and ru is not None
    return Classification(
        left_unit=lu,
        right_unit=ru,
        is_loop=is_loop,
        is_group=is_loop and is_associative(Q),
        is_idempotent=all(Q.mul[x][x] == x for x in Q.elements()),
    )


@dataclass(frozen=True)
class QMap:
    """A total map from ``0..domain_order-1`` into ``0..codomain_order-1``."""

    domain_order: int
    codomain_order: int
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if len(values) != self.domain_order:
            raise ValueError(
                f"map has {len(values)} values but domain order {self.domain_order}"
            )
        for v in values:
            if not 0 <= v < self.codomain_order:
                raise ValueError(f"value {v} outside codomain of order {self.codomain_order}")
        object.__setattr__(self, "values", values)

    def __call__(self, x: int) -> int:
        return self.values[x]

    def __len__(self) -> int:
        return self.domain_order

    @classmethod
    def of(cls, values: Sequence[int], codomain_order: Optional[int] = None) -> "QMap":
        """Endomorphism-shaped shortcut: codomain defaults to the domain size."""
        n = len(values)
        return cls(n, n if codomain_order is None else codomain_order, tuple(values))

    @classmethod
    def identity(cls, n: int) -> "QMap":
        return cls(n, n, tuple(range(n)))

    @classmethod
    def constant(cls, n: int, m: int, value: int) -> "QMap":
        return cls(n, m, (value,) * n)

    def then(self, other: "QMap") -> "QMap":
        """``other`` after ``self``."""
        if other.domain_order != self.codomain_order:
            raise DimensionMismatch("maps cannot be composed")
        return QMap(self.domain_order, other.codomain_order, tuple(other.values[v] for v in self.values))

    def is_injective(self) -> bool:
        return len(set(self.values)) == self.domain_order

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.codomain_order

    def image(self) -> list[int]:
        return sorted(set(self.values))


def _check_dims(f: QMap, Q: Quasigroup, R: Quasigroup):
    if f.domain_order != Q.order or f.codomain_order != R.order:
        raise DimensionMismatch(
            f"map {f.domain_order}->{f.codomain_order} does not fit orders {Q.order}->{R.order}"
        )


def is_homomorphism(f: QMap, Q: Quasigroup, R: Quasigroup) -> bool:
    _check_dims(f, Q, R)
    v = f.values
    qm, rm = Q.mul, R.mul
    n = Q.order
    return all(v[qm[x][y]] == rm[v[x]][v[y]] for x in range(n) for y in range(n))


def iter_homomorphisms(Q: Quasigroup, R: Quasigroup) -> Iterator[QMap]:
    """Yield every homomorphism Q -> R in lexicographic order of value tuples.

    Branches on the smallest unassigned element and closes the partial map
    under products, so only consistent prefixes are extended.
    """
    n, m = Q.order, R.order
    qm, rm = Q.mul, R.mul

    def close(f: list[int], seed: int) -> bool:
        stack = [seed]
        assigned = [x for x in range(n) if f[x] >= 0]
        while stack:
            x = stack.pop()
            for y in assigned:
                for a, b in ((x, y), (y, x)):
                    z = qm[a][b]
                    w = rm[f[a]][f[b]]
                    if f[z] < 0:
                        f[z] = w
                        assigned.append(z)
                        stack.append(z)
                    elif f[z] != w:
                        return False
        return True

    def extend(f: list[int]) -> Iterator[tuple[int, ...]]:
        try:
            x = f.index(-1)
        except ValueError:
            yield tuple(f)
            return
        for v in range(m):
            g = list(f)
            g[x] = v
            if close(g, x):
                yield from extend(g)

    found = sorted(set(extend([-1] * n)))
    for values in found:
        yield QMap(n, m, values)


def image_subquasigroup(f: QMap, Q: Quasigroup, R: Quasigroup):
    """Return ``(elements, induced, embed)`` for the image of a homomorphism.

    ``induced`` is the image re-indexed to ``0..len(elements)-1`` in ascending
    order and ``embed`` sends those indices back into R.
    """
    if not is_homomorphism(f, Q, R):
        raise NotHomomorphism("map is not a homomorphism")
    elements = f.image()
    index = {x: i for i, x in enumerate(elements)}
    for x in elements:
        for y in elements:
            for z in (R.mul[x][y], R.ldiv[x][y], R.rdiv[x][y]):
                if z not in index:
                    raise NotCompatible(f"image not closed: {z} from ({x}, {y})")
    induced = Quasigroup(tuple(tuple(index[R.mul[x][y]] for y in elements) for x in elements))
    embed = QMap(len(elements), R.order, tuple(elements))
    return elements, induced, embed


@dataclass(frozen=True)
class Congruence:
    """A uniform partition of ``0..n-1``.

    Classes are ordered by their smallest element and sorted internally.
    Compatibility with a particular quasigroup is checked by
    :meth:`is_compatible`, since the partition alone does not know Q.
    """

    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.class_of)
        seen = sorted(x for cls in self.classes for x in cls)
        if seen != list(range(n)):
            raise ValueError("classes do not partition the element set")
        for i, cls in enumerate(self.classes):
            if list(cls) != sorted(cls):
                raise ValueError(f"class {i} is not sorted")
            for x in cls:
                if self.class_of[x] != i:
                    raise ValueError(f"class_of[{x}] disagrees with classes")
        sizes = {len(cls) for cls in self.classes}
        if len(sizes) > 1:
            raise NonUniformFibers(f"class sizes {sorted(sizes)}")

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Congruence":
        """Canonicalize an arbitrary labelling of elements into classes."""
        groups: dict[int, list[int]] = {}
        for x, lab in enumerate(labels):
            groups.setdefault(lab, []).append(x)
        classes = sorted((tuple(g) for g in groups.values()), key=lambda c: c[0])
        class_of = [0] * len(labels)
        for i, c in enumerate(classes):
            for x in c:
                class_of[x] = i
        return cls(tuple(class_of), tuple(classes))

    @property
    def size(self) -> int:
        return len(self.classes)

    @property
    def class_size(self) -> int:
        return len(self.classes[0])

    def is_compatible(self, Q: Quasigroup) -> bool:
        if Q.order != len(self.class_of):
            raise DimensionMismatch("congruence and quasigroup differ in size")
        c = self.class_of
        reps = [cls[0] for cls in self.classes]
        for a, ra in enumerate(reps):
            for b, rb in enumerate(reps):
                target = c[Q.mul[ra][rb]]
                for x in self.classes[a]:
                    for y in self.classes[b]:
                        if c[Q.mul[x][y]] != target:
                            return False
        return True


def fibers(Q: Quasigroup, f: QMap) -> Congruence:
    """The kernel congruence of an endomorphism: classes are the preimages."""
    if not is_homomorphism(f, Q, Q):
        raise NotHomomorphism("fibers need an endomorphism")
    cong = Congruence.from_labels(f.values)
    if not cong.is_compatible(Q):
        raise NotCompatible("fibers of the endomorphism are not a congruence")
    return cong


def quotient(Q: Quasigroup, c: Congruence) -> tuple[Quasigroup, QMap]:
    if len(c.class_of) != Q.order:
        raise DimensionMismatch("congruence and quasigroup differ in size")
    k = c.size
    table = [[-1] * k for _ in range(k)]
    for x in Q.elements():
        for y in Q.elements():
            a, b = c.class_of[x], c.class_of[y]
            z = c.class_of[Q.mul[x][y]]
            if table[a][b] == -1:
                table[a][b] = z
            elif table[a][b] != z:
                raise NotCompatible(f"product of classes {a} and {b} is ill-defined")
    E = Quasigroup(_freeze(table))
    return E, QMap(Q.order, k, c.class_of)


def are_isomorphic(Q: Quasigroup, R: Quasigroup) -> Optional[tuple[int, ...]]:
    """Find a bijection ``s`` with ``s(x*y) = s(x)*s(y)``, or None.

    Exhaustive backtracking; partial assignments are pruned as soon as a
    product of assigned elements lands on an assigned element inconsistently.
    """
    n = Q.order
    if n != R.order:
        return None
    if n > MAX_ISO_ORDER:
        raise OrderTooLarge(f"are_isomorphic is capped at order {MAX_ISO_ORDER}")
    qm, rm = Q.mul, R.mul
    # cheap invariant: number of idempotents
    if sum(qm[x][x] == x for x in range(n)) != sum(rm[x][x] == x for x in range(n)):
        return None

    sigma = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        # every triple (x, y, x*y) whose largest member is i becomes checkable now
        for x in range(i + 1):
            for y in range(i + 1):
                z = qm[x][y]
                if z > i or max(x, y, z) != i:
                    continue
                if sigma[z] != rm[sigma[x]][sigma[y]]:
                    return False
        return True

    def search(i: int) -> bool:
        if i == n:
            return True
        for v in range(n):
            if used[v]:
                continue
            sigma[i] = v
            used[v] = True
            if consistent(i) and search(i + 1):
                return True
            used[v] = False
        sigma[i] = -1
        return False

    if search(0):
        return tuple(sigma)
    return None
