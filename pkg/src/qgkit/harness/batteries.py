"""Exhaustive verification sweeps.  Each returns a :class:`BatteryResult`
listing every violation found rather than stopping at the first."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..bruck import BruckSystem, compose, decompose_endo, is_idempotent_via_decomposition
from ..constructions import (
    GroupSpec,
    build_example2,
    build_example3,
    example3_system,
    group_catalog,
    group_homomorphisms,
    isotopy_to_direct_product,
    left_inverse_in_example3,
    unit_of,
)
from ..core import QMap, Quasigroup, classify, cyclic_table, iter_homomorphisms, make_quasigroup, right_unit
from ..errors import NotHomomorphism, QuasigroupError
from ..varieties import (
    corollary_injectivity,
    deviation_map,
    has_left_inverse_property,
    in_aDl,
    in_Dl,
    is_LF,
    theorem2_check,
    theorem3_check,
)
from .enumerate import all_quasigroups, enumerate_endomorphisms


@dataclass
class BatteryResult:
    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    notes: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, msg: str):
        self.violations.append(msg)

    def summary(self) -> str:
        extra = "".join(f" {k}={v}" for k, v in self.notes.items())
        return f"{self.name}: checked={self.checked}{extra} violations={len(self.violations)}"


def _quasigroups(qs: Optional[Iterable[Quasigroup]], max_order: int) -> Iterable[Quasigroup]:
    return all_quasigroups(max_order) if qs is None else qs


def prop1_battery(qs: Optional[Iterable[Quasigroup]] = None, max_order: int = 4) -> BatteryResult:
    res = BatteryResult("prop1")
    endos = 0
    for i, Q in enumerate(_quasigroups(qs, max_order)):
        for eta in enumerate_endomorphisms(Q):
            endos += 1
            e = eta.values
            direct = all(e[e[x]] == e[x] for x in Q.elements())
            try:
                d = decompose_endo(Q, eta)
                via = is_idempotent_via_decomposition(d)
            except QuasigroupError as exc:
                res.fail(f"quasigroup #{i} eta={e}: {exc!r}")
                continue
            if via != direct:
                res.fail(f"quasigroup #{i} eta={e}: decomposition says {via}, direct {direct}")
        res.checked += 1
    res.notes["endomorphisms"] = endos
    return res


def _deviation_label_check(Q, d, epsilon, second, res, tag):
    e = deviation_map(Q)
    for x in Q.elements():
        _, a = d.labeling[x]
        if d.labeling[e(x)] != (epsilon[a], second(a)):
            res.fail(f"{tag}: deviation of {x} is labelled {d.labeling[e(x)]}")
            return


def theorem2_battery(qs: Optional[Iterable[Quasigroup]] = None, max_order: int = 4) -> BatteryResult:
    res = BatteryResult("theorem2")
    members = rejected = 0
    for i, Q in enumerate(_quasigroups(qs, max_order)):
        res.checked += 1
        tag = f"quasigroup #{i}"
        e = deviation_map(Q)
        if in_Dl(Q):
            members += 1
            d = decompose_endo(Q, e)
            E = d.system.E
            chk = theorem2_check(d.system)
            if not chk.holds:
                res.fail(f"{tag}: in D_l but conditions fail {chk}")
                continue
            if chk.epsilon != d.gamma:
                res.fail(f"{tag}: epsilon {chk.epsilon} differs from gamma {d.gamma}")
            if any(d.g(a) != E.ldiv[a][a] for a in E.elements()):
                res.fail(f"{tag}: g is not the deviation of E")
            _deviation_label_check(Q, d, chk.epsilon, lambda a: E.ldiv[a][a], res, tag)
        else:
            try:
                decompose_endo(Q, e)
            except NotHomomorphism:
                rejected += 1
            else:
                res.fail(f"{tag}: not in D_l but decompose_endo accepted the deviation")
    res.notes.update(members=members, rejected=rejected)
    return res


def theorem3_battery(qs: Optional[Iterable[Quasigroup]] = None, max_order: int = 4) -> BatteryResult:
    res = BatteryResult("theorem3")
    members = 0
    for i, Q in enumerate(_quasigroups(qs, max_order)):
        res.checked += 1
        tag = f"quasigroup #{i}"
        if not in_Dl(Q):
            continue
        d = decompose_endo(Q, deviation_map(Q))
        chk = theorem3_check(d.system)
        if in_aDl(Q):
            members += 1
            if not chk.holds:
                res.fail(f"{tag}: in aD_l but conditions fail {chk}")
                continue
            one = unit_of(d.system.E)
            _deviation_label_check(Q, d, chk.epsilon, lambda a: one, res, tag)
        elif chk.holds:
            res.fail(f"{tag}: conditions hold but not in aD_l")
    res.notes["members"] = members
    return res


def catalog_instances(groups: Optional[Sequence[GroupSpec]] = None):
    """Every ``(E, T, eps)`` with E, T from the catalog and eps a homomorphism."""
    groups = group_catalog() if groups is None else groups
    for E in groups:
        for T in groups:
            for eps in group_homomorphisms(E, T):
                yield E, T, eps


def check_example3_instance(E, T, eps: QMap, res: BatteryResult):
    tag = f"{E.label} -> {T.label} eps={eps.values}"
    Q = build_example3(E, T, eps)
    GE, GT = E.resolved, T.resolved
    if compose(example3_system(GE, GT, eps))[0].mul != Q.mul:
        res.fail(f"{tag}: formula and Bruck composition differ")
    if not is_LF(Q):
        res.fail(f"{tag}: LF identity fails")
    unit = Q.encode(unit_of(GT), unit_of(GE))
    if classify(Q).left_unit != unit:
        res.fail(f"{tag}: left unit is {classify(Q).left_unit}, expected {unit}")
    lam = has_left_inverse_property(Q)
    if lam is None:
        res.fail(f"{tag}: no left inverse property")
    for x in Q.elements():
        try:
            li = left_inverse_in_example3(Q, x)
        except QuasigroupError as exc:
            res.fail(f"{tag}: left inverse of {x}: {exc}")
            break
        if lam is not None and lam(x) != li:
            res.fail(f"{tag}: closed-form inverse of {x} disagrees with the scan")
            break
    if not in_aDl(Q):
        res.fail(f"{tag}: not in aD_l")
    e = deviation_map(Q)
    one_e = unit_of(GE)
    for x in Q.elements():
        _, a = Q.decode(x)
        if e(x) != Q.encode(eps(a), one_e):
            res.fail(f"{tag}: deviation of {x} is not (eps(a), 1)")
            break
    try:
        isotopy_to_direct_product(Q)
    except QuasigroupError as exc:
        res.fail(f"{tag}: isotopy check: {exc}")


def theorem4_battery(instances=None) -> BatteryResult:
    res = BatteryResult("theorem4")
    for E, T, eps in (catalog_instances() if instances is None else instances):
        res.checked += 1
        check_example3_instance(E, T, eps, res)
    return res


def example2_instances(groups: Optional[Sequence[GroupSpec]] = None, extra_T: Sequence[Quasigroup] = ()):
    """``(E, T, eps, filler)`` for Example-2 builds: T ranges over the catalog
    plus ``extra_T``; eps over homomorphisms with eps(1) a right unit of T."""
    groups = group_catalog() if groups is None else groups
    targets = [T.resolved for T in groups] + list(extra_T)
    for E in groups:
        one = unit_of(E.resolved)
        for T in targets:
            ru = right_unit(T)
            if ru is None:
                continue
            shifted = make_quasigroup([row[1:] + row[:1] for row in cyclic_table(T.order)])
            for eps in iter_homomorphisms(E.resolved, T):
                if eps(one) != ru:
                    continue
                yield E.resolved, T, eps, None
                yield E.resolved, T, eps, shifted


def corollary_battery(example2=None, example3=None) -> BatteryResult:
    res = BatteryResult("corollary")
    systems: list[tuple[str, BruckSystem, QMap]] = []
    for E, T, eps, filler in (example2_instances() if example2 is None else example2):
        systems.append(("example2", build_example2(E, T, eps, filler), eps))
    for E, T, eps in (catalog_instances() if example3 is None else example3):
        systems.append(("example3", example3_system(E, T, eps), eps))
    for kind, B, eps in systems:
        res.checked += 1
        tag = f"{kind} |E|={B.E.order} |T|={B.fiber_size} eps={eps.values}"
        Q, _ = compose(B)
        recovered = decompose_endo(Q, deviation_map(Q)).system.E.order == B.E.order
        if recovered != eps.is_injective():
            res.fail(f"{tag}: recovered={recovered} but injective={eps.is_injective()}")
        if corollary_injectivity(B) != eps.is_injective():
            res.fail(f"{tag}: corollary_injectivity disagrees with injectivity of eps")
        if kind == "example2" and not theorem3_check(B).holds:
            res.fail(f"{tag}: example 2 system fails the aD_l conditions")
    res.notes["injective"] = sum(eps.is_injective() for _, _, eps in systems)
    return res
