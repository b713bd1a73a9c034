"""Command-line front end: ``eqlab <command> ...``.

Exit codes: 0 all certificates passed, 1 a certificate failed, 2 usage error
or a soundness violation, 3 construction error, 4 unreadable line file.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import __version__, paramscan
from .designkit import golay_heptads, pair_blockset, pg32_sts15, qs_6_3_2, read_blockset
from .linesys import (
    ConstructionError,
    LineSystem,
    LineSystemError,
    LineSystemFormatError,
    augment_all_ones,
    bounds_report,
    construct_augmented,
    construct_omega,
    find_max_incoherent,
    foursum_check,
    hexagon_lines,
    icosahedron_lines,
    incoherent_design,
    load,
    setsum_checks,
    spherical_design_check,
    taylor_intersection_check,
    taylor_size_check,
    to_json,
)
from .twograph import NotRegular, from_lines, regularity

EXIT_OK, EXIT_FAIL, EXIT_UNSOUND, EXIT_CONSTRUCT, EXIT_FORMAT = 0, 1, 2, 3, 4

ELLIPTIC_POINTS = [
    (-2, -2), (-2, 2), (-1, -3), (-1, 3), (1, -1), (1, 1), (2, 0),
    (3, -3), (3, 3), (5, -9), (5, 9), (29, -153), (29, 153),
]


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


def _err(msg: str) -> None:
    print(f"eqlab: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# scan / families


def cmd_scan(args: argparse.Namespace) -> int:
    recs = paramscan.scan(args.m_max)
    text = paramscan.to_json(recs) if args.format == "json" else paramscan.to_csv(recs)
    _emit(text, args.output)
    bad = paramscan.soundness_violations(recs)
    for r in bad:
        _err(f"soundness violation: filter rejects {r.key}")
    return EXIT_UNSOUND if bad else EXIT_OK


def cmd_families(args: argparse.Namespace) -> int:
    try:
        recs = paramscan.family_table(args.i_max)
    except (AssertionError, ValueError) as exc:
        _err(f"family table: {exc}")
        return EXIT_UNSOUND
    if args.format == "json":
        text = paramscan.to_json(recs)
    else:
        text = paramscan.to_csv(recs, prefix=("family", "i"))
    _emit(text, args.output)
    bad = paramscan.soundness_violations(recs)
    for r in bad:
        _err(f"soundness violation: filter rejects {r.key}")
    return EXIT_UNSOUND if bad else EXIT_OK


# ---------------------------------------------------------------------------
# construct


def _design(name: str):
    if name == "golay-s4723":
        return golay_heptads()
    if name == "sts15":
        return pg32_sts15()
    if name == "qs-6-3-2":
        return qs_6_3_2()
    if name.startswith("pairs-"):
        try:
            d = int(name.split("-", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad design {name!r}") from None
        return pair_blockset(d)
    raise argparse.ArgumentTypeError(f"unknown design {name!r}")


def cmd_construct(args: argparse.Namespace) -> int:
    try:
        if args.design in ("icosahedron", "hexagon"):
            ls = icosahedron_lines() if args.design == "icosahedron" else hexagon_lines()
        else:
            bs = read_blockset(args.blocks) if args.blocks else _design(args.design)
            if args.augment:
                ls, _ = construct_augmented(bs)
            else:
                ls = construct_omega(bs, args.epsilon)
        if args.augment_all_ones:
            ls = augment_all_ones(ls)
        ls.certify()
    except argparse.ArgumentTypeError as exc:
        _err(str(exc))
        return EXIT_UNSOUND
    except (ConstructionError, LineSystemError) as exc:
        _err(f"construction failed: {type(exc).__name__}: {exc}")
        return EXIT_CONSTRUCT
    _emit(to_json(ls), args.output)
    print(f"{ls.n} vectors, rank {ls.span_dim}, rho^2 = {ls.rho_sq}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify


def certify_system(ls: LineSystem, budget: int = 10**7) -> dict:
    """Verdict ledger for one line system.

    Each entry is {"check", "status", ...} with status pass/fail/n/a/info;
    only pass/fail entries decide the exit code.
    """
    ledger: list[dict] = []

    def add(check: str, status: str, **info) -> None:
        ledger.append({"check": check, "status": status, **info})

    try:
        ls.certify()
    except LineSystemError as exc:
        add("equiangular", "fail", reason=str(exc))
        return {"ok": False, "ledger": ledger}
    add("equiangular", "pass", n=ls.n, dim=ls.span_dim, rho_sq=str(ls.rho_sq), kappa=str(ls.kappa))

    wit = find_max_incoherent(ls, budget=budget)
    inc = wit.size if wit.complete else None
    add("incoherent_search", "info", inc=inc, witness=list(wit.lines), complete=wit.complete, nodes=wit.nodes)

    br = bounds_report(ls, inc)
    add("bounds", "info", **br.as_dict())
    if br.neumann_applicable:
        add("neumann_parity", "pass" if br.neumann_ok else "fail")

    reg = regularity(from_lines(ls))
    regular = not isinstance(reg, NotRegular)
    if regular:
        add("two_graph", "info", regular=True, n=reg.n, a=reg.a, b=reg.b)
    else:
        add("two_graph", "info", regular=False, kind=reg.kind)
    if br.relative_bound is not None:
        # with kappa^2 d < 1: relative bound saturated <=> regular two-graph
        add("relative_iff_regular", "pass" if br.relative_saturated == regular else "fail")

    design_ok = inc is not None and inc == br.d and regular
    if design_ok:
        gamma = list(wit.lines)
        for v in (taylor_size_check(ls, gamma), taylor_intersection_check(ls, gamma)):
            add(v.name, "pass" if v.ok else "fail", **{k: str(x) for k, x in v.values.items()})
        try:
            des = incoherent_design(ls, gamma, reg)
            if _exceptional(des, ls):
                add("incoherent_design", "n/a", reason="small exceptional case (d = 3 or rho = 2)")
            else:
                good = _design_matches(des, br.absolute_saturated)
                add("incoherent_design", "pass" if good else "fail", **des.as_dict())
        except (LineSystemError, ValueError) as exc:
            add("incoherent_design", "fail", reason=str(exc))
        for v in setsum_checks(ls, gamma, reg):
            add(v.name, "pass" if v.ok else "fail", **{k: str(x) for k, x in v.values.items()})
        fs = foursum_check(ls, gamma, reg)
        add(fs.name, "pass" if fs.ok else "fail", **{k: str(x) for k, x in fs.values.items()})
    else:
        add("incoherent_design", "n/a", reason="needs Inc = d and a regular two-graph")

    if br.absolute_saturated:
        sp = spherical_design_check(ls, 5)
        add("spherical_5_design", "pass" if sp.strength == 5 and sp.tight else "fail", **sp.as_dict())
    else:
        sp = spherical_design_check(ls, 3)
        add("spherical_design", "info", **sp.as_dict())

    ok = all(e["status"] != "fail" for e in ledger)
    return {"ok": ok, "ledger": ledger}


def _exceptional(des, ls: LineSystem) -> bool:
    # the 6 lines in R^3 and the 3 lines in R^2 carry no design
    if des.balanced:
        return ls.rho_sq == 4
    return des.blocks.d == 3


def _design_matches(des, absolute_saturated: bool) -> bool:
    """Compare the certified design with the predicted parameters.

    Unbalanced case: 2-(d, k, lambda; s1, s2), and a 3-design exactly when the
    absolute bound is met.  Balanced case: 3-design with quasi-symmetric
    derived and residual designs.
    """
    cert = des.certificate
    exp = des.expected
    if des.balanced:
        if not (des.three_design and des.derived and des.residual):
            return False
        for got, want in ((des.derived, exp["derived"]), (des.residual, exp["residual"])):
            _, k, lam, s1, s2 = want
            nums = got.intersection_numbers
            if got.lambdas[2] != lam or len(nums) != 2 or (nums[0], nums[1]) != (s1, s2):
                return False
        return cert.lambdas[3] == exp["lambda3"]
    nums = cert.intersection_numbers
    return (
        cert.lambdas[2] == exp["lambda"]
        and len(nums) == 2
        and (nums[0], nums[1]) == (exp["s1"], exp["s2"])
        and des.three_design == absolute_saturated
    )


def cmd_certify(args: argparse.Namespace) -> int:
    try:
        ls = load(args.path)
    except (LineSystemFormatError, OSError, UnicodeDecodeError) as exc:
        _err(f"cannot read {args.path}: {exc}")
        return EXIT_FORMAT
    report = certify_system(ls, args.budget)
    _emit(_dump_json(report), args.output)
    return EXIT_OK if report["ok"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# e8 / elliptic / descend


def cmd_e8(args: argparse.Namespace) -> int:
    from . import e8bridge

    try:
        report = e8bridge.e8_report(second_involution=not args.no_second, budget=args.budget)
    except e8bridge.E8Error as exc:
        _err(f"e8 pipeline failed: {type(exc).__name__}: {exc}")
        return EXIT_FAIL
    text = _dump_json(report)
    if args.report:
        Path(args.report).write_text(text)
    _emit(text, args.output)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_elliptic(args: argparse.Namespace) -> int:
    pts = paramscan.elliptic_point_search(args.bound)
    text = "".join(f"{x},{y}\n" for x, y in pts)
    _emit("x,y\n" + text, args.output)
    expected = [p for p in ELLIPTIC_POINTS if abs(p[0]) <= args.bound]
    return EXIT_OK if pts == expected else EXIT_FAIL


def cmd_descend(args: argparse.Namespace) -> int:
    from . import e8bridge

    try:
        if args.source == "e8":
            sys_ = e8bridge.build_basis_coords()
            x = e8bridge.find_involution(sys_.heptads)
            _, moved = e8bridge.eigenspace_split(sys_, x)
            roots = [e8bridge.project_to_w(sys_, x, i) for i in moved]
            e8bridge.certify_e8(roots)
            start, witness = e8bridge.descend_28(roots), None
        else:
            start, witness = construct_augmented(pair_blockset(7))
        stages = e8bridge.descend_chain(start, witness, budget=args.budget)
    except (e8bridge.E8Error, LineSystemError) as exc:
        _err(f"descent failed: {type(exc).__name__}: {exc}")
        return EXIT_FAIL
    doc = {"source": args.source, "stages": [s.as_dict() for s in stages]}
    _emit(_dump_json(doc), args.output)
    ok = (
        [s.size for s in stages] == [28, 16, 10, 6]
        and all(s.kappa == Fraction(1, 3) for s in stages)
        and [s.rank for s in stages] == [7, 6, 5, 4]
        and stages[0].inc == 7
        and stages[1].inc == 6
    )
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eqlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"eqlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        return sp

    sp = command("scan", cmd_scan, "feasible (s1, s2) parameter sets")
    sp.add_argument("--m-max", type=_positive, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = command("families", cmd_families, "the three parameter families")
    sp.add_argument("--i-max", type=_positive, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = command("construct", cmd_construct, "build a line system and write it as JSON")
    sp.add_argument("--design", default="golay-s4723",
                    help="golay-s4723, pairs-<d>, sts15, qs-6-3-2, icosahedron or hexagon")
    sp.add_argument("--blocks", help="read the block set from a file instead")
    sp.add_argument("--augment", action="store_true", help="add the d point vectors v(i)")
    sp.add_argument("--augment-all-ones", action="store_true", help="add the all-ones vector")
    sp.add_argument("--epsilon", type=int, choices=(0, 1), default=0)

    sp = command("certify", cmd_certify, "run every certificate on a line-system file")
    sp.add_argument("path")
    sp.add_argument("--budget", type=_positive, default=10**7, help="incoherent search node budget")

    sp = command("e8", cmd_e8, "276 lines -> E8 roots pipeline")
    sp.add_argument("--report", help="also write the JSON report here")
    sp.add_argument("--no-second", action="store_true", help="skip the second-involution check")
    sp.add_argument("--budget", type=_positive, default=10**7)

    sp = command("elliptic", cmd_elliptic, "integer points on y^2 = x^3 - x^2 - 5x + 6")
    sp.add_argument("--bound", type=_positive, default=10**6)

    sp = command("descend", cmd_descend, "the 28 -> 16 -> 10 -> 6 descent")
    sp.add_argument("--from", dest="source", choices=("pairs-7", "e8"), default="pairs-7")
    sp.add_argument("--budget", type=_positive, default=10**7)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
