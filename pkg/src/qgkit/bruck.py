"""Bruck systems: quasigroups on ``T x E`` built from a family of fiber quasigroups.

A pair ``(t, a)`` with ``t`` in ``0..k-1`` and ``a`` in ``E`` is stored as the
single index ``t*m + a`` (``m = |E|``), so the canonical projection is
``x -> x % m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    QMap,
    Quasigroup,
    fibers,
    is_homomorphism,
    make_quasigroup,
    quotient,
)
from .errors import (
    DimensionMismatch,
    InconsistentDecomposition,
    InvalidSystem,
    NonUniformFibers,
    NotEpimorphism,
    NotHomomorphism,
    NotLatin,
)



@dataclass(frozen=True)
class BruckSystem:
    E: Quasigroup
    fiber_size: int
    blocks: tuple[tuple[Quasigroup, ...], ...]

    def __post_init__(self):
        m, k = self.E.order, self.fiber_size
        if k < 1:
            raise InvalidSystem("fiber size must be positive")
        if len(self.blocks) != m or any(len(row) != m for row in self.blocks):
            raise InvalidSystem(f"expected a {m}x{m} family of blocks")
        for a, row in enumerate(self.blocks):
            for b, blk in enumerate(row):
                if not isinstance(blk, Quasigroup) or blk.order != k:
                    raise InvalidSystem(f"block ({a}, {b}) is not a quasigroup of order {k}")

    @property
    def base_order(self) -> int:
        return self.E.order

    @property
    def order(self) -> int:
        return self.E.order * self.fiber_size

    def block(self, a: int, b: int) -> Quasigroup:
        return self.blocks[a][b]

    def encode(self, t: int, a: int) -> int:
        return t * self.E.order + a

    def decode(self, x: int) -> tuple[int, int]:
        return divmod(x, self.E.order)


def make_bruck_system(E: Quasigroup, k: int, tables) -> BruckSystem:
    """Validate raw ``m x m`` block tables (lists or quasigroups) into a system."""
    rows = []
    for a, row in enumerate(tables):
        out = []
        for b, blk in enumerate(row):
            if isinstance(blk, Quasigroup):
                out.append(blk)
                continue
            try:
                out.append(make_quasigroup(blk))
            except (NotLatin, ValueError) as exc:
                raise InvalidSystem(f"block ({a}, {b}): {exc}") from exc
        rows.append(tuple(out))
    return BruckSystem(E, k, tuple(rows))


def compose(B: BruckSystem) -> tuple[Quasigroup, QMap]:
    """The quasigroup ``(s,a)(t,b) = (s [a,b] t, ab)`` and its projection onto E."""
    m, k = B.E.order, B.fiber_size
    n = m * k
    emul = B.E.mul
    table = [[0] * n for _ in range(n)]
    for x in range(n):
        s, a = divmod(x, m)
        row = table[x]
        for y in range(n):
            t, b = divmod(y, m)
            row[y] = B.blocks[a][b].mul[s][t] * m + emul[a][b]
    Q = Quasigroup(tuple(map(tuple, table)))
    proj = QMap(n, m, tuple(x % m for x in range(n)))
    return Q, proj


def decompose_epi(Q: Quasigroup, E: Quasigroup, pi: QMap):
    """Bruck decomposition of Q with respect to an epimorphism ``pi: Q -> E``.

    Each fiber is labelled by rank in ascending element order.  Returns the
    system and the labelling ``x -> (t, a)``.
    """
    if pi.domain_order != Q.order or pi.codomain_order != E.order:
        raise DimensionMismatch("projection does not fit the quasigroups")
    if not is_homomorphism(pi, Q, E):
        raise NotEpimorphism("projection is not a homomorphism")
    if not pi.is_surjective():
        raise NotEpimorphism("projection is not surjective")
    m = E.order
    fiber: list[list[int]] = [[] for _ in range(m)]
    for x in Q.elements():
        fiber[pi(x)].append(x)
    k = len(fiber[0])
    if any(len(f) != k for f in fiber):
        raise NonUniformFibers(f"fiber sizes {[len(f) for f in fiber]}")
    labeling = [(0, 0)] * Q.order
    for a, f in enumerate(fiber):
        for t, x in enumerate(f):
            labeling[x] = (t, a)
    blocks = []
    for a in range(m):
        row = []
        for b in range(m):
            row.append(
                [[labeling[Q.mul[x][y]][0] for y in fiber[b]] for x in fiber[a]]
            )
        blocks.append(row)
    return make_bruck_system(E, k, blocks), tuple(labeling)


def transport(composed: Quasigroup, labeling: Sequence[tuple[int, int]], m: int) -> Quasigroup:
    """Pull a composed table back onto the original element names.

    ``labeling[x] = (t, a)`` names the composed element ``t*m + a``.
    """
    enc = [t * m + a for t, a in labeling]
    dec = {v: x for x, v in enumerate(enc)}
    if len(dec) != len(enc) or len(enc) != composed.order:
        raise InconsistentDecomposition("labeling is not a bijection")
    n = len(enc)
    return Quasigroup(
        tuple(tuple(dec[composed.mul[enc[x]][enc[y]]] for y in range(n)) for x in range(n))
    )


@dataclass(frozen=True)
class EndoDecomposition:
    """Bruck decomposition of Q with respect to an endomorphism ``eta``.

    ``projection`` sends Q onto E (the classes of ``eta``), and for each class
    ``a`` the element ``eta(a)`` of Q has label ``(gamma[a], g(a))``.
    """

    system: BruckSystem
    labeling: tuple[tuple[int, int], ...]
    gamma: tuple[int, ...]
    g: QMap
    eta: QMap
    projection: QMap

    def __post_init__(self):
        B = self.system
        m, k = B.E.order, B.fiber_size
        if sorted(self.labeling) != [(t, a) for t in range(k) for a in range(m)]:
            raise InconsistentDecomposition("labeling is not a bijection onto T x E")
        if not is_homomorphism(self.g, B.E, B.E):
            raise InconsistentDecomposition("g is not an endomorphism of E")
        emul, gam, g = B.E.mul, self.gamma, self.g.values
        for a in range(m):
            for b in range(m):
                lhs = gam[emul[a][b]]
                rhs = B.blocks[g[a]][g[b]].mul[gam[a]][gam[b]]
                if lhs != rhs:
                    raise InconsistentDecomposition(
                        f"gamma({a}*{b}) = {lhs} but gamma({a}) [g{a},g{b}] gamma({b}) = {rhs}"
                    )

    def iota(self, a: int) -> int:
        """The element of Q that class ``a`` maps to."""
        return self.eta(self.projection.values.index(a))


def decompose_endo(Q: Quasigroup, eta: QMap) -> EndoDecomposition:
    if eta.domain_order != Q.order or eta.codomain_order != Q.order:
        raise DimensionMismatch("eta must be a map Q -> Q")
    if not is_homomorphism(eta, Q, Q):
        raise NotHomomorphism("eta is not an endomorphism")
    cong = fibers(Q, eta)
    E, proj = quotient(Q, cong)
    system, labeling = decompose_epi(Q, E, proj)
    gamma, g = [], []
    for cls in cong.classes:
        image = eta(cls[0])
        if any(eta(x) != image for x in cls):
            raise InconsistentDecomposition("iota depends on the class representative")
        t, a = labeling[image]
        gamma.append(t)
        g.append(a)
    m = E.order
    return EndoDecomposition(
        system=system,
        labeling=labeling,
        gamma=tuple(gamma),
        g=QMap(m, m, tuple(g)),
        eta=eta,
        projection=proj,
    )


def is_idempotent_via_decomposition(d: EndoDecomposition) -> bool:
    """Decide ``eta o eta == eta`` from ``g`` and ``gamma`` alone.

    The direct answer is computed as well; disagreement raises.
    """
    g = d.g.values
    m = len(g)
    via_parts = all(g[g[a]] == g[a] for a in range(m)) and all(
        d.gamma[g[a]] == d.gamma[a] for a in range(m)
    )
    e = d.eta.values
    direct = all(e[e[x]] == e[x] for x in range(len(e)))
    if via_parts != direct:
        raise InconsistentDecomposition(
            f"idempotency from (g, gamma) is {via_parts} but eta o eta == eta is {direct}"
        )
    return via_parts
