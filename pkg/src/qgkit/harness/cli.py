"""Command-line interface: ``qgkit <command> ...``.

Exit codes: 0 on success (or a true verdict), 1 when a ``check`` finds
violations, 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence, TextIO

from ..bruck import compose, decompose_endo, decompose_epi, transport
from ..constructions import (
    build_example1,
    build_example2,
    build_example3,
    example3_phi,
    isotopy_to_direct_product,
    parse_group_spec,
    parse_hom_spec,
    parse_quasigroup_spec,
)
from ..core import Congruence, QMap, make_quasigroup, quotient
from ..errors import QuasigroupError
from ..formats import (
    dumps_bruck,
    dumps_qg,
    dumps_qmap,
    read_bruck,
    read_qg,
    read_qmap,
)
from ..varieties import deviation_map, left_deviation, theorem2_check, theorem3_check
from . import batteries
from .enumerate import PREDICATES, census, latin_squares, predicate_flags


class UsageError(Exception):
    pass


def _emit(text: str, path: Optional[str], out: TextIO):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def _flag_line(flags: dict) -> str:
    return " ".join(f"{k}={int(v)}" for k, v in flags.items())


def cmd_validate(args, out):
    Q = read_qg(args.file)
    out.write(f"ok order={Q.order}\n")
    return 0


def cmd_props(args, out):
    Q = read_qg(args.file)
    out.write(_flag_line(predicate_flags(Q, PREDICATES)) + "\n")
    return 0


def cmd_deviation(args, out):
    Q = read_qg(args.file)
    rep = left_deviation(Q)
    out.write(dumps_qmap(rep.e))
    out.write(f"endomorphism={int(rep.is_endomorphism)} image_group={int(rep.image_is_group)} "
              f"image={' '.join(map(str, rep.image))}\n")
    return 0


def _labeling_map(labeling, m) -> QMap:
    n = len(labeling)
    return QMap(n, n, tuple(t * m + a for t, a in labeling))


def cmd_decompose(args, out):
    Q = read_qg(args.file)
    if args.deviation:
        eta = deviation_map(Q)
    elif args.endo_file:
        eta = read_qmap(args.endo_file)
    else:
        eta = None
    if eta is not None:
        d = decompose_endo(Q, eta)
        B, labeling = d.system, d.labeling
        report = [f"gamma={' '.join(map(str, d.gamma))}", f"g={' '.join(map(str, d.g.values))}"]
    else:
        pi = read_qmap(args.epi_file)
        E, _ = quotient(Q, fibers_of_map(pi))
        B, labeling = decompose_epi(Q, E, pi_canonical(pi))
        report = []
    m = B.E.order
    _emit(dumps_bruck(B), args.output, out)
    if args.labeling_out:
        with open(args.labeling_out, "w") as fh:
            fh.write(dumps_qmap(_labeling_map(labeling, m)))
    report.append(f"classes={m} fiber_size={B.fiber_size}")
    report.append("labeling=" + " ".join(f"{t},{a}" for t, a in labeling))
    out.write("\n".join(report) + "\n")
    return 0


def fibers_of_map(pi: QMap) -> Congruence:
    return Congruence.from_labels(pi.values)


def pi_canonical(pi: QMap) -> QMap:
    """Relabel a projection's values by the order of their smallest preimage."""
    cong = fibers_of_map(pi)
    return QMap(pi.domain_order, cong.size, cong.class_of)


def cmd_compose(args, out):
    B = read_bruck(args.file)
    Q, proj = compose(B)
    if args.relabel:
        enc = read_qmap(args.relabel)
        m = B.E.order
        Q = transport(Q, [divmod(v, m) for v in enc.values], m)
        proj = QMap(Q.order, m, tuple(v % m for v in enc.values))
    _emit(dumps_qg(Q), args.output, out)
    if args.proj_out:
        with open(args.proj_out, "w") as fh:
            fh.write(dumps_qmap(proj))
    return 0


def cmd_construct(args, out):
    if args.example == "example1":
        E = parse_quasigroup_spec(args.E)
        T1 = parse_quasigroup_spec(args.T1)
        T2 = parse_quasigroup_spec(args.T2)
        filler = parse_quasigroup_spec(args.filler) if args.filler else None
        B = build_example1(E, T1, T2, filler)
        _emit(dumps_bruck(B), args.output, out)
    elif args.example == "example2":
        E = parse_group_spec(args.E)
        T = parse_quasigroup_spec(args.T)
        filler = parse_quasigroup_spec(args.filler) if args.filler else None
        (eps,) = _single_hom(args.eps, E.resolved, T)
        B = build_example2(E, T, eps, filler)
        _emit(dumps_bruck(B), args.output, out)
    else:
        E, T = parse_group_spec(args.E), parse_group_spec(args.T)
        (eps,) = _single_hom(args.eps, E.resolved, T.resolved)
        Q = build_example3(E, T, eps)
        _emit(dumps_qg(Q), args.output, out)
    return 0


def _single_hom(spec, E, T):
    homs = parse_hom_spec(spec, E, T)
    if len(homs) != 1:
        raise UsageError("construct needs exactly one homomorphism, not 'all'")
    return homs


def _battery_inputs(args):
    qs = [read_qg(p) for p in args.files] if args.files else None
    if qs is None and args.order is not None:
        if not 1 <= args.order <= 4:
            raise UsageError("--order must be between 1 and 4")
        qs = [make_quasigroup(t) for t in latin_squares(args.order)]
    return qs


def cmd_check(args, out):
    if args.battery == "theorem4":
        if args.E or args.T or args.eps:
            if not (args.E and args.T):
                raise UsageError("theorem4 needs both --E and --T")
            E, T = parse_group_spec(args.E), parse_group_spec(args.T)
            homs = parse_hom_spec(args.eps or "all", E.resolved, T.resolved)
            res = batteries.theorem4_battery([(E, T, eps) for eps in homs])
        else:
            res = batteries.theorem4_battery()
    elif args.bruck:
        B = read_bruck(args.bruck)
        if args.battery == "theorem2":
            chk = theorem2_check(B)
            eps = "-" if chk.epsilon is None else " ".join(map(str, chk.epsilon))
            out.write(f"cond_ii={int(chk.cond_ii)} cond_iii={int(chk.cond_iii)} epsilon={eps}\n")
        elif args.battery == "theorem3":
            chk = theorem3_check(B)
            eps = "-" if chk.epsilon is None else " ".join(map(str, chk.epsilon))
            out.write(f"E_is_group={int(chk.E_is_group)} cond_ii={int(chk.cond_ii)} "
                      f"cond_iii={int(chk.cond_iii)} epsilon={eps}\n")
        else:
            raise UsageError("--bruck applies to theorem2 and theorem3 only")
        return 0 if chk.holds else 1
    else:
        run = {
            "prop1": batteries.prop1_battery,
            "theorem2": batteries.theorem2_battery,
            "theorem3": batteries.theorem3_battery,
        }[args.battery]
        res = run(_battery_inputs(args))
    for v in res.violations:
        out.write(f"violation: {v}\n")
    out.write(res.summary() + "\n")
    return 0 if res.ok else 1


def cmd_census(args, out):
    preds = PREDICATES
    if args.predicates:
        preds = tuple(p.strip() for p in args.predicates.split(",") if p.strip())
        unknown = [p for p in preds if p not in PREDICATES]
        if unknown:
            raise UsageError(f"unknown predicates {unknown}; choose from {','.join(PREDICATES)}")
    row = census(args.order, preds, up_to_iso=args.up_to_iso, allow_order_6=args.allow_order_6)
    out.write(row.format(preds) + "\n")
    return 0


def cmd_isotopy(args, out):
    E, T = parse_group_spec(args.E), parse_group_spec(args.T)
    homs = parse_hom_spec(args.eps, E.resolved, T.resolved)
    for eps in homs:
        Q = build_example3(E, T, eps)
        isotopy_to_direct_product(Q)
        out.write(f"eps={' '.join(map(str, eps.values))} isotopic=1 "
                  f"phi={' '.join(map(str, example3_phi(Q)))}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgkit", description="Finite quasigroup toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a .qg file holds a Latin square")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("props", help="print 'loop group idempotent Dl aDl LF LIP' flags")
    p.add_argument("file")
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("deviation", help="print the left deviation as a qmap plus verdicts")
    p.add_argument("file")
    p.set_defaults(func=cmd_deviation)

    p = sub.add_parser("decompose", help="Bruck decomposition w.r.t. an endomorphism or epimorphism")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--endo-file", help="endomorphism as a .qmap")
    g.add_argument("--deviation", action="store_true", help="use the left deviation")
    g.add_argument("--epi-file", help="projection onto any labelling of the classes, as a .qmap")
    p.add_argument("-o", "--output", help="write the .bruck here instead of stdout")
    p.add_argument("--labeling-out", help="write the element -> t*m+a relabelling as a .qmap")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compose", help="build Q(B) from a .bruck file")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the .qg here instead of stdout")
    p.add_argument("--proj-out", help="write the canonical projection as a .qmap")
    p.add_argument("--relabel", help="labelling .qmap from 'decompose --labeling-out'")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("construct", help="build an example family instance")
    p.add_argument("example", choices=["example1", "example2", "example3"])
    p.add_argument("--E", required=True, help="cyclic:<n> | prod:<a>x<b> | file:<path.qg>")
    p.add_argument("--T", help="fiber quasigroup (example2, example3)")
    p.add_argument("--T1", help="example1: fiber with a right unit")
    p.add_argument("--T2", help="example1: fiber where that unit is idempotent")
    p.add_argument("--filler", help="quasigroup for the unconstrained blocks")
    p.add_argument("--eps", default="id", help="id | const:<elem> | file:<path.qmap>")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", help="run a verification battery")
    p.add_argument("battery", choices=["theorem2", "theorem3", "prop1", "theorem4"])
    p.add_argument("files", nargs="*", help=".qg files (default: all quasigroups of order <= 4)")
    p.add_argument("--order", type=int, help="all quasigroups of this order (1..4)")
    p.add_argument("--bruck", help="theorem2/theorem3: check one .bruck system")
    p.add_argument("--E")
    p.add_argument("--T")
    p.add_argument("--eps", help="theorem4 homomorphism specifier (default: all)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("census", help="count labelled Latin squares per predicate")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--predicates", help=f"comma list from {','.join(PREDICATES)}")
    p.add_argument("--up-to-iso", action="store_true", help="count isomorphism classes (n <= 4)")
    p.add_argument("--allow-order-6", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("isotopy-check", help="verify the (phi, id, id) isotopy for example3")
    p.add_argument("--E", required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--eps", default="all")
    p.set_defaults(func=cmd_isotopy)
    return parser


def run_cli(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "construct":
        need = {"example1": ("T1", "T2"), "example2": ("T",), "example3": ("T",)}[args.example]
        missing = [f"--{n}" for n in need if getattr(args, n) is None]
        if missing:
            err.write(f"qgkit construct {args.example}: missing {' '.join(missing)}\n")
            return 2
    try:
        return args.func(args, out)
    except (QuasigroupError, UsageError, OSError, ValueError) as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return 2


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
