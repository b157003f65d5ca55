"""Left deviation ``e(x) = x\\x`` and the varieties built around it.

* D_l: quasigroups whose left deviation is an endomorphism.
* aD_l: D_l quasigroups whose deviation image is a group.
* LF: quasigroups satisfying ``x*(y*z) = (x*y)*(e(x)*z)``.

Also home to the structural checks that read these properties off a Bruck
system instead of the composed table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bruck import BruckSystem, compose, decompose_endo
from .core import QMap, Quasigroup, classify, image_subquasigroup, is_associative, is_homomorphism, right_unit
from .errors import InconsistentPredicates, PreconditionFailed


@dataclass(frozen=True)
class DeviationReport:
    e: QMap
    is_endomorphism: bool
    image_is_group: bool
    image: tuple[int, ...]


def deviation_map(Q: Quasigroup) -> QMap:
    n = Q.order
    return QMap(n, n, tuple(Q.ldiv[x][x] for x in range(n)))


def left_deviation(Q: Quasigroup) -> DeviationReport:
    e = deviation_map(Q)
    endo = is_homomorphism(e, Q, Q)
    image_is_group = False
    if endo:
        _, induced, _ = image_subquasigroup(e, Q, Q)
        image_is_group = is_associative(induced)
    return DeviationReport(e, endo, image_is_group, tuple(e.image()))


def _deviation_identity_holds(Q: Quasigroup) -> bool:
    """``xy\\xy == (x\\x)(y\\y)`` for all x, y."""
    mul, ldiv = Q.mul, Q.ldiv
    n = Q.order
    for x in range(n):
        ex = ldiv[x][x]
        for y in range(n):
            xy = mul[x][y]
            if ldiv[xy][xy] != mul[ex][ldiv[y][y]]:
                return False
    return True


def in_Dl(Q: Quasigroup) -> bool:
    by_map = is_homomorphism(deviation_map(Q), Q, Q)
    by_identity = _deviation_identity_holds(Q)
    if by_map != by_identity:
        raise InconsistentPredicates(
            f"deviation endomorphism test {by_map} vs identity test {by_identity}"
        )
    return by_map


def _deviation_values_associate(Q: Quasigroup) -> bool:
    m = Q.array
    e = np.diagonal(np.asarray(Q.ldiv, dtype=np.intp))
    u = e[:, None, None]
    v = e[None, :, None]
    w = e[None, None, :]
    return bool(np.array_equal(m[m[u, v], w], m[u, m[v, w]]))


def in_aDl(Q: Quasigroup) -> bool:
    by_identities = _deviation_identity_holds(Q) and _deviation_values_associate(Q)
    report = left_deviation(Q)
    by_structure = report.is_endomorphism and report.image_is_group
    if by_identities != by_structure:
        raise InconsistentPredicates(
            f"aD_l identities give {by_identities}, deviation structure gives {by_structure}"
        )
    return by_identities


def is_LF(Q: Quasigroup) -> bool:
    m = Q.array
    e = np.diagonal(np.asarray(Q.ldiv, dtype=np.intp))
    n = Q.order
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    lhs = m[x, m[y, z]]
    rhs = m[m[x, y], m[e[x], z]]
    return bool(np.array_equal(lhs, rhs))


def has_left_inverse_property(Q: Quasigroup) -> Optional[QMap]:
    """The map ``x -> x^l`` with ``x^l * (x*y) = y`` for all y, if it exists."""
    n = Q.order
    mul = Q.mul
    lam = []
    for x in range(n):
        row = mul[x]
        # x^l is forced by y = 0 and then checked against the rest
        cand = Q.rdiv[row[0]][0]
        if any(mul[cand][row[y]] != y for y in range(n)):
            return None
        lam.append(cand)
    return QMap(n, n, tuple(lam))


@dataclass(frozen=True)
class Theorem2Check:
    cond_ii: bool
    epsilon: Optional[tuple[int, ...]]
    cond_iii: bool

    @property
    def holds(self) -> bool:
        return self.cond_ii and self.cond_iii


def _iota_values(B: BruckSystem, epsilon) -> list[int]:
    E = B.E
    return [B.encode(epsilon[a], E.ldiv[a][a]) for a in E.elements()]


def theorem2_check(B: BruckSystem) -> Theorem2Check:
    """Right units of the blocks ``(a, a\\a)`` and the homomorphism ``a -> (eps(a), a\\a)``.

    Under ``__debug__`` the verdict is cross-checked against the composed
    quasigroup: whenever every block ``(a, a\\a)`` has a right unit, the map
    is a homomorphism exactly when Q(B) lies in D_l, and then its deviation
    is ``(t, a) -> (eps(a), a\\a)``.
    """
    E = B.E
    eps = []
    for a in E.elements():
        u = right_unit(B.block(a, E.ldiv[a][a]))
        if u is None:
            break
        eps.append(u)
    if len(eps) != E.order:
        result = Theorem2Check(False, None, False)
    else:
        dev = [E.ldiv[a][a] for a in E.elements()]
        iota = _iota_values(B, eps)
        # iota(a) iota(b) = (eps(a) [a\a, b\b] eps(b), (a\a)(b\b)), read off the blocks
        cond_iii = all(
            iota[E.mul[a][b]]
            == B.encode(B.block(dev[a], dev[b]).mul[eps[a]][eps[b]], E.mul[dev[a]][dev[b]])
            for a in E.elements()
            for b in E.elements()
        )
        result = Theorem2Check(True, tuple(eps), cond_iii)
    if __debug__:
        Q, _ = compose(B)
        if result.cond_ii:
            if in_Dl(Q) != result.cond_iii:
                raise InconsistentPredicates("theorem 2 conditions disagree with D_l membership")
            if result.cond_iii:
                e = deviation_map(Q)
                for x in Q.elements():
                    _, a = B.decode(x)
                    if e(x) != B.encode(result.epsilon[a], E.ldiv[a][a]):
                        raise InconsistentPredicates(f"deviation of {x} is not (eps(a), a\\a)")
    return result


@dataclass(frozen=True)
class Theorem3Check:
    E_is_group: bool
    cond_ii: bool
    cond_iii: bool
    epsilon: Optional[tuple[int, ...]] = None

    @property
    def holds(self) -> bool:
        return self.E_is_group and self.cond_ii and self.cond_iii


def theorem3_check(B: BruckSystem) -> Theorem3Check:
    """Group base, right units ``eps(a)`` of the blocks ``(a, 1)``, and eps a
    homomorphism into the block ``(1, 1)``.

    Conditions (ii) and (iii) refer to the unit of E, so they are reported
    False when E is not a group.
    """
    E = B.E
    info = classify(E)
    if not info.is_group:
        return Theorem3Check(False, False, False)
    one = info.left_unit
    eps = [right_unit(B.block(a, one)) for a in E.elements()]
    if any(u is None for u in eps):
        return Theorem3Check(True, False, False)
    base = B.block(one, one).mul
    cond_iii = all(
        eps[E.mul[a][b]] == base[eps[a]][eps[b]] for a in E.elements() for b in E.elements()
    )
    result = Theorem3Check(True, True, cond_iii, tuple(eps))
    if __debug__:
        Q, _ = compose(B)
        if in_aDl(Q) != cond_iii:
            raise InconsistentPredicates("theorem 3 conditions disagree with aD_l membership")
        if cond_iii:
            e = deviation_map(Q)
            for x in Q.elements():
                _, a = B.decode(x)
                if e(x) != B.encode(eps[a], one):
                    raise InconsistentPredicates(f"deviation of {x} is not (eps(a), 1)")
    return result


def corollary_injectivity(B: BruckSystem) -> bool:
    """Whether ``a -> (eps(a), a\\a)`` is injective, i.e. B is itself the
    decomposition of Q(B) with respect to its deviation."""
    check = theorem2_check(B)
    if not check.holds:
        raise PreconditionFailed("system does not satisfy the D_l conditions")
    iota = _iota_values(B, check.epsilon)
    injective = len(set(iota)) == B.E.order
    if __debug__:
        Q, _ = compose(B)
        classes = decompose_endo(Q, deviation_map(Q)).system.E.order
        if classes != len(set(iota)):
            raise InconsistentPredicates(
                f"deviation has {classes} classes but iota has {len(set(iota))} values"
            )
    return injective
