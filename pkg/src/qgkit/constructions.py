"""Builders for three families of Bruck extensions.

* ``build_example1``: D_l quasigroups from a D_l base and two fiber quasigroups.
* ``build_example2``: aD_l quasigroups from a group, a quasigroup and a
  homomorphism between them.
* ``build_example3``: LF-quasigroups ``(a, s)(b, t) = (a eps(s)^-1 b, st)`` on
  ``T x E`` for groups E, T and a homomorphism ``eps: E -> T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .bruck import BruckSystem, make_bruck_system
from .core import (
    QMap,
    Quasigroup,
    classify,
    cyclic_table,
    is_homomorphism,
    iter_homomorphisms,
    make_quasigroup,
    right_unit,
)
from .errors import (
    DimensionMismatch,
    FormatError,
    IsotopyFailed,
    InvariantViolation,
    NotExample3Instance,
    NotGroup,
    NotHomomorphism,
    PatternConflict,
    PreconditionFailed,
)
from .varieties import deviation_map, in_Dl


@dataclass(frozen=True)
class GroupSpec:
    """A group given by how it was described, plus its resolved table."""

    kind: str
    label: str
    resolved: Quasigroup

    def __post_init__(self):
        if not classify(self.resolved).is_group:
            raise NotGroup(f"{self.label} is not a group")

    @property
    def order(self) -> int:
        return self.resolved.order


def cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", f"cyclic:{n}", make_quasigroup(cyclic_table(n)))


def product_table(G: Quasigroup, H: Quasigroup) -> Quasigroup:
    """Direct product on pairs ``(g, h)`` stored as ``g*|H| + h``."""
    m = H.order
    n = G.order * m
    return Quasigroup(
        tuple(
            tuple(G.mul[x // m][y // m] * m + H.mul[x % m][y % m] for y in range(n))
            for x in range(n)
        )
    )


def direct_product(G: GroupSpec, H: GroupSpec) -> GroupSpec:
    return GroupSpec("prod", f"prod:{G.label}x{H.label}", product_table(G.resolved, H.resolved))


def explicit(table: Union[Quasigroup, Sequence[Sequence[int]]], label: str = "table") -> GroupSpec:
    Q = table if isinstance(table, Quasigroup) else make_quasigroup(table)
    return GroupSpec("table", label, Q)


def group_catalog() -> list[GroupSpec]:
    """Z1..Z6, Z2xZ2 and Z2xZ3 (the last is a second labelling of Z6)."""
    groups = [cyclic(n) for n in range(1, 7)]
    groups.append(direct_product(cyclic(2), cyclic(2)))
    groups.append(direct_product(cyclic(2), cyclic(3)))
    return groups


def _as_group(G: Union[GroupSpec, Quasigroup]) -> Quasigroup:
    if isinstance(G, GroupSpec):
        return G.resolved
    if not classify(G).is_group:
        raise NotGroup("expected a group")
    return G


def unit_of(G: Quasigroup) -> int:
    u = classify(G).left_unit
    if u is None:
        raise NotGroup("no unit element")
    return u


def inverses(G: Quasigroup) -> tuple[int, ...]:
    one = unit_of(G)
    return tuple(G.ldiv[x][one] for x in G.elements())


def group_homomorphisms(E: Union[GroupSpec, Quasigroup], T: Union[GroupSpec, Quasigroup]) -> list[QMap]:
    return list(iter_homomorphisms(_as_group(E), _as_group(T)))


# -- Example 1 ---------------------------------------------------------------


def build_example1(
    E: Quasigroup,
    T1: Quasigroup,
    T2: Quasigroup,
    filler: Optional[Quasigroup] = None,
) -> BruckSystem:
    """D_l extension of ``E`` with fibers of size ``|T1|``.

    Blocks ``(a, a\\a)`` are T1; blocks ``(u, v)`` with u, v deviation values
    and ``v != u\\u`` are T2; everything else is ``filler`` (T1 by default).
    The right unit of T1 must be idempotent in T2.
    """
    if not in_Dl(E):
        raise PreconditionFailed("base quasigroup is not in D_l")
    k = T1.order
    filler = T1 if filler is None else filler
    if T2.order != k or filler.order != k:
        raise PreconditionFailed("T1, T2 and filler must have the same order")
    eps = right_unit(T1)
    if eps is None:
        raise PreconditionFailed("T1 has no right unit")
    if T2.mul[eps][eps] != eps:
        raise PreconditionFailed(f"right unit {eps} of T1 is not idempotent in T2")

    m = E.order
    dev = deviation_map(E).values
    pattern: dict[tuple[int, int], str] = {}
    for a in range(m):
        pattern[(a, dev[a])] = "T1"
    values = sorted(set(dev))
    for u in values:
        for v in values:
            if v != E.ldiv[u][u]:
                if pattern.get((u, v)) == "T1":
                    raise PatternConflict(f"pair ({u}, {v}) matches both patterns")
                pattern[(u, v)] = "T2"
    pick = {"T1": T1, "T2": T2}
    blocks = [[pick[pattern[(a, b)]] if (a, b) in pattern else filler for b in range(m)] for a in range(m)]
    return make_bruck_system(E, k, blocks)


# -- Example 2 ---------------------------------------------------------------


def build_example2(
    E: Union[GroupSpec, Quasigroup],
    T: Quasigroup,
    eps: QMap,
    filler: Optional[Quasigroup] = None,
) -> BruckSystem:
    """aD_l extension of a group E: blocks ``(a, 1)`` are ``s, t -> (s / eps(a)) t``."""
    try:
        G = _as_group(E)
    except NotGroup as exc:
        raise PreconditionFailed(str(exc)) from exc
    one = unit_of(G)
    if eps.domain_order != G.order or eps.codomain_order != T.order:
        raise PreconditionFailed("eps must map E into T")
    if right_unit(T) != eps(one):
        raise PreconditionFailed(f"eps(1) = {eps(one)} is not a right unit of T")
    if not is_homomorphism(eps, G, T):
        raise PreconditionFailed("eps is not a homomorphism")
    filler = T if filler is None else filler
    if filler.order != T.order:
        raise PreconditionFailed("filler must have the order of T")

    k = T.order
    blocks = []
    for a in range(G.order):
        row = []
        ea = eps(a)
        twisted = [[T.mul[T.rdiv[ea][s]][t] for t in range(k)] for s in range(k)]
        for b in range(G.order):
            row.append(twisted if b == one else filler)
        blocks.append(row)
    return make_bruck_system(G, k, blocks)


# -- Example 3 ---------------------------------------------------------------


@dataclass(frozen=True)
class Example3Quasigroup(Quasigroup):
    """Quasigroup on ``T x E`` that remembers the groups and homomorphism
    it was built from (element ``(t, a)`` has index ``t*|E| + a``)."""

    E: Quasigroup = field(default=None, repr=False, compare=False)
    T: Quasigroup = field(default=None, repr=False, compare=False)
    eps: QMap = field(default=None, repr=False, compare=False)

    def encode(self, t: int, a: int) -> int:
        return t * self.E.order + a

    def decode(self, x: int) -> tuple[int, int]:
        return divmod(x, self.E.order)


def _check_example3_inputs(E, T, eps):
    GE, GT = _as_group(E), _as_group(T)
    if eps.domain_order != GE.order or eps.codomain_order != GT.order:
        raise DimensionMismatch("eps must map E into T")
    if not is_homomorphism(eps, GE, GT):
        raise NotHomomorphism("eps is not a group homomorphism")
    return GE, GT


def example3_system(E, T, eps: QMap) -> BruckSystem:
    """The Bruck system with blocks ``s [a,b] t = s eps(a)^-1 t``."""
    GE, GT = _check_example3_inputs(E, T, eps)
    inv = inverses(GT)
    k = GT.order
    blocks = []
    for a in range(GE.order):
        e_inv = inv[eps(a)]
        blk = [[GT.mul[GT.mul[s][e_inv]][t] for t in range(k)] for s in range(k)]
        blocks.append([blk] * GE.order)
    return make_bruck_system(GE, k, blocks)


def build_example3(E, T, eps: QMap) -> Example3Quasigroup:
    GE, GT = _check_example3_inputs(E, T, eps)
    inv = inverses(GT)
    m, k = GE.order, GT.order
    n = m * k
    table = []
    for x in range(n):
        s, a = divmod(x, m)
        left = GT.mul[s][inv[eps(a)]]
        table.append(
            tuple(GT.mul[left][y // m] * m + GE.mul[a][y % m] for y in range(n))
        )
    return Example3Quasigroup(tuple(table), GE, GT, eps)


def _require_example3(Q) -> Example3Quasigroup:
    if not isinstance(Q, Example3Quasigroup) or Q.E is None:
        raise NotExample3Instance("operation needs a quasigroup built by build_example3")
    return Q


def left_inverse_in_example3(Q: Example3Quasigroup, x: int) -> int:
    """Closed-form left inverse ``(eps(a) s^-1 eps(a)^-1, a^-1)`` of ``x = (s, a)``."""
    Q = _require_example3(Q)
    E, T = Q.E, Q.T
    inv_t, inv_e = inverses(T), inverses(E)
    s, a = Q.decode(x)
    ea = Q.eps(a)
    t = T.mul[T.mul[ea][inv_t[s]]][inv_t[ea]]
    lam = Q.encode(t, inv_e[a])
    for y in Q.elements():
        if Q.mul[lam][Q.mul[x][y]] != y:
            raise InvariantViolation(f"{lam} is not a left inverse of {x}")
    return lam


def example3_phi(Q: Example3Quasigroup) -> tuple[int, ...]:
    """The permutation ``(s, a) -> (s eps(a)^-1, a)``."""
    Q = _require_example3(Q)
    inv = inverses(Q.T)
    phi = []
    for x in Q.elements():
        s, a = Q.decode(x)
        phi.append(Q.encode(Q.T.mul[s][inv[Q.eps(a)]], a))
    return tuple(phi)


def isotopy_to_direct_product(Q: Example3Quasigroup) -> bool:
    """Verify ``x o y = phi(x) * y`` against the direct product ``T x E``."""
    Q = _require_example3(Q)
    phi = example3_phi(Q)
    if sorted(phi) != list(Q.elements()):
        raise IsotopyFailed("phi is not a bijection")
    P = product_table(Q.T, Q.E)
    for x in Q.elements():
        for y in Q.elements():
            if Q.mul[x][y] != P.mul[phi[x]][y]:
                raise IsotopyFailed(f"x o y != phi(x) * y at ({x}, {y})")
    return True


# -- specifier parsing -------------------------------------------------------

_PREFIXES = ("cyclic:", "prod:", "file:")


def _parse_quasigroup(text: str, pos: int, require_group: bool):
    from .formats import read_qg

    if text.startswith("cyclic:", pos):
        end = pos + len("cyclic:")
        stop = end
        while stop < len(text) and text[stop].isdigit():
            stop += 1
        if stop == end:
            raise FormatError(f"missing order after 'cyclic:' in {text!r}")
        n = int(text[end:stop])
        if n < 1:
            raise FormatError("cyclic order must be positive")
        return cyclic(n), stop
    if text.startswith("prod:", pos):
        left, pos = _parse_quasigroup(text, pos + len("prod:"), require_group)
        if pos >= len(text) or text[pos] != "x":
            raise FormatError(f"expected 'x' at position {pos} in {text!r}")
        right, pos = _parse_quasigroup(text, pos + 1, require_group)
        if isinstance(left, GroupSpec) and isinstance(right, GroupSpec):
            return direct_product(left, right), pos
        lq = left.resolved if isinstance(left, GroupSpec) else left
        rq = right.resolved if isinstance(right, GroupSpec) else right
        return product_table(lq, rq), pos
    if text.startswith("file:", pos):
        start = pos + len("file:")
        stop = len(text)
        # a path ends at an 'x' that introduces the next specifier
        for i in range(start, len(text)):
            if text[i] == "x" and any(text.startswith(p, i + 1) for p in _PREFIXES):
                stop = i
                break
        path = text[start:stop]
        Q = read_qg(path)
        if require_group:
            return explicit(Q, f"file:{path}"), stop
        return Q, stop
    raise FormatError(f"unknown specifier {text[pos:]!r}; use cyclic:, prod: or file:")


def parse_group_spec(text: str) -> GroupSpec:
    spec, pos = _parse_quasigroup(text, 0, True)
    if pos != len(text):
        raise FormatError(f"trailing characters in {text!r}")
    return spec


def parse_quasigroup_spec(text: str) -> Quasigroup:
    """Like :func:`parse_group_spec` but ``file:`` may name any quasigroup."""
    spec, pos = _parse_quasigroup(text, 0, False)
    if pos != len(text):
        raise FormatError(f"trailing characters in {text!r}")
    return spec.resolved if isinstance(spec, GroupSpec) else spec


def parse_hom_spec(text: str, E: Quasigroup, T: Quasigroup) -> list[QMap]:
    """``id``, ``const:<elem>``, ``file:<path.qmap>`` or ``all``."""
    from .formats import read_qmap

    n, m = E.order, T.order
    if text == "id":
        if n != m:
            raise FormatError("'id' needs E and T of equal order")
        return [QMap.identity(n)]
    if text.startswith("const:"):
        try:
            v = int(text[len("const:"):])
        except ValueError as exc:
            raise FormatError(f"bad constant in {text!r}") from exc
        if not 0 <= v < m:
            raise FormatError(f"constant {v} outside T")
        return [QMap.constant(n, m, v)]
    if text.startswith("file:"):
        return [read_qmap(text[len("file:"):])]
    if text == "all":
        return list(iter_homomorphisms(E, T))
    raise FormatError(f"unknown homomorphism specifier {text!r}")
