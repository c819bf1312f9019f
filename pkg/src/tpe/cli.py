"""Command-line surface: verify, family, count, torsion, sweep.

Exit codes: 0 verified/decided, 1 verification failed, 2 inapplicable or
undecidable, 3 malformed input.  --json emits canonical JSON (sorted keys,
no insignificant whitespace); identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from tpe import docio
from tpe.algebra import NonIntegralError
from tpe.curve import count_points_mod_p, make_curve
from tpe.docio import DocumentError, dumps_canonical
from tpe.envelope import TPEDocument, theorem_conclusion, verify_tpe
from tpe.families import (
    Inapplicable,
    RankFixture,
    builtin_fixture,
    generate_cd,
    generate_dd,
    generate_xpx,
    sweep_cd,
)
from tpe.jacobian import CertifiedTorsion, NotTorsion, torsion_decide
from tpe.tower import split_places

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INAPPLICABLE = 2
EXIT_INPUT = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit canonical JSON")
    common.add_argument(
        "--place", type=int, default=None, metavar="INDEX",
        help="index into the split places (default: first, smallest residues)",
    )
    common.add_argument(
        "--height-ceiling", type=int, default=None, metavar="N",
        help="digit ceiling for exact number-field arithmetic "
        "(default: TPE_HEIGHT_CEILING or 1000000)",
    )
    common.add_argument(
        "--seed", type=int, default=None,
        help="reserved for the randomized test harness; the tool itself is "
        "deterministic and ignores it",
    )

    parser = argparse.ArgumentParser(
        prog="tpe",
        description="verify torsion packet envelopes for hyperelliptic curves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", parents=[common], help="verify a TPE document")
    pv.add_argument("document", help="path to a TPE document (JSON)")

    pf = sub.add_parser("family", help="generate and verify a family document")
    fsub = pf.add_subparsers(dest="family_name", required=True)
    fcd = fsub.add_parser("cd", parents=[common], help="y^2 = x^5 + d at p = 11")
    fcd.add_argument("--d", type=int, required=True)
    fdd = fsub.add_parser(
        "dd", parents=[common],
        help="y^2 = x^(p-1) + d x^((p-1)/2) - 1 (p = 3 mod 4, p | d)",
    )
    fdd.add_argument("--p", type=int, required=True)
    fdd.add_argument("--d", type=int, required=True)
    fxpx = fsub.add_parser("xpx", parents=[common], help="y^2 = x^p - x")
    fxpx.add_argument("--p", type=int, required=True)
    for fp in (fcd, fdd, fxpx):
        fp.add_argument(
            "--rank0", action="store_true",
            help="attach a caller-asserted rank-0 claim",
        )
        fp.add_argument(
            "--rank-fixture", metavar="FILE",
            help="attach a rank-0 claim when the value appears in this fixture",
        )
        fp.add_argument("--out", metavar="FILE", help="save the document JSON")

    pc = sub.add_parser("count", parents=[common], help="#C(F_p) for a curve file")
    pc.add_argument("--curve", required=True, metavar="FILE")
    pc.add_argument("--p", type=int, required=True)

    pt = sub.add_parser(
        "torsion", parents=[common],
        help="run the torsion decision procedure on one point",
    )
    pt.add_argument("--curve", required=True, metavar="FILE")
    pt.add_argument("--point", required=True, metavar="SPEC", help="point JSON")
    pt.add_argument("--tower", required=True, metavar="FILE")
    pt.add_argument("--p", type=int, required=True)

    ps = sub.add_parser("sweep", help="run a family over a range")
    ssub = ps.add_subparsers(dest="family_name", required=True)
    scd = ssub.add_parser("cd", parents=[common])
    scd.add_argument("--range", required=True, metavar="A..B")
    scd.add_argument("--rank-fixture", metavar="FILE", help="default: bundled table")
    scd.add_argument("--out", metavar="FILE", help="save the census JSON")

    return parser


def _echo(text: str):
    sys.stdout.write(text + "\n")


def _print_report(doc: TPEDocument, report, conclusion, as_json: bool) -> None:
    if as_json:
        payload = {
            "document": docio.document_to_obj(doc),
            "report": docio.report_to_obj(report),
            "conclusion": (
                docio.conclusion_to_obj(conclusion) if conclusion else None
            ),
        }
        sys.stdout.write(dumps_canonical(payload))
        return
    _echo(f"curve: {doc.curve.equation()}   (p = {doc.p})")
    field = doc.field_attestation or doc.tower.describe()
    _echo(f"field: {field}")
    for cond in report.conditions:
        mark = "PASS" if cond.passed else "FAIL"
        _echo(f"[{mark}] {cond.key}: {cond.detail}")
    _echo("RESULT: " + ("VERIFIED" if report.all_passed else "NOT VERIFIED"))
    if conclusion is not None:
        _echo("conclusion:")
        for line in conclusion.statements:
            _echo(f"  * {line}")
        for warning in conclusion.warnings:
            _echo(f"  ! {warning}")


def cmd_verify(args) -> int:
    try:
        doc = docio.load_document(args.document)
    except (OSError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = verify_tpe(doc, place_index=args.place, height_ceiling=args.height_ceiling)
    conclusion = theorem_conclusion(report, doc) if report.all_passed else None
    _print_report(doc, report, conclusion, args.json)
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _load_fixture(args) -> RankFixture | None:
    if getattr(args, "rank_fixture", None):
        return RankFixture.load(args.rank_fixture)
    return None


def cmd_family(args) -> int:
    try:
        fixture = _load_fixture(args)
        if args.family_name == "cd":
            doc = generate_cd(args.d, rank0=args.rank0, fixture=fixture)
        elif args.family_name == "dd":
            doc = generate_dd(args.p, args.d, rank0=args.rank0, fixture=fixture)
        else:
            doc = generate_xpx(args.p, rank0=args.rank0, fixture=fixture)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(doc, Inapplicable):
        if args.json:
            sys.stdout.write(
                dumps_canonical(
                    {
                        "inapplicable": True,
                        "reason": doc.reason,
                        "count": doc.count,
                        "note": doc.note,
                    }
                )
            )
        else:
            _echo(f"inapplicable: {doc.reason}")
            if doc.note:
                _echo(f"note: {doc.note}")
        return EXIT_INAPPLICABLE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(docio.document_to_json(doc))
    report = verify_tpe(doc, place_index=args.place, height_ceiling=args.height_ceiling)
    conclusion = theorem_conclusion(report, doc) if report.all_passed else None
    _print_report(doc, report, conclusion, args.json)
    return EXIT_OK if report.all_passed else EXIT_FAILED


def _load_curve(path):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or "f" not in obj:
        raise DocumentError("curve file needs a coefficient list under 'f'")
    return make_curve(docio.poly_from_obj(obj["f"]))


def cmd_count(args) -> int:
    try:
        curve = _load_curve(args.curve)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        n = count_points_mod_p(curve, args.p)
    except ValueError as exc:
        if args.json:
            sys.stdout.write(dumps_canonical({"error": str(exc)}))
        else:
            _echo(f"inapplicable: {exc}")
        return EXIT_INAPPLICABLE
    if args.json:
        sys.stdout.write(
            dumps_canonical({"curve": docio.poly_to_obj(curve.f), "p": args.p, "count": n})
        )
    else:
        _echo(f"#C(F_{args.p}) = {n}")
    return EXIT_OK


def cmd_torsion(args) -> int:
    try:
        curve = _load_curve(args.curve)
        with open(args.tower, "r", encoding="utf-8") as fh:
            tower = docio.tower_from_obj(json.load(fh))
        point = docio.point_from_obj(json.loads(args.point), tower)
        places = split_places(tower, args.p)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not places:
        _echo(f"inapplicable: p = {args.p} does not split completely")
        return EXIT_INAPPLICABLE
    index = args.place if args.place is not None else 0
    if not 0 <= index < len(places):
        print(f"error: place index {index} out of range", file=sys.stderr)
        return EXIT_INPUT
    try:
        verdict = torsion_decide(
            point, curve, tower, args.p, places[index],
            height_ceiling=args.height_ceiling,
        )
    except (ValueError, NonIntegralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(verdict, CertifiedTorsion):
        payload = {"verdict": "torsion", "order": verdict.order}
        text = f"torsion of exact order {verdict.order}"
        code = EXIT_OK
    elif isinstance(verdict, NotTorsion):
        payload = {"verdict": "not_torsion"}
        text = "not torsion (exact multiple is nonzero)"
        code = EXIT_OK
    else:
        payload = {"verdict": "undecidable", "reason": verdict.reason}
        text = f"undecidable: {verdict.reason}"
        code = EXIT_INAPPLICABLE
    if args.json:
        sys.stdout.write(dumps_canonical(payload))
    else:
        _echo(text)
    return code


def cmd_sweep(args) -> int:
    try:
        lo_s, _, hi_s = args.range.partition("..")
        lo, hi = int(lo_s), int(hi_s)
        if lo > hi:
            raise ValueError("empty range")
        fixture = (
            RankFixture.load(args.rank_fixture)
            if args.rank_fixture
            else builtin_fixture("cd")
        )
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    result = sweep_cd(lo, hi, fixture)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_canonical(result.to_obj()))
    if args.json:
        sys.stdout.write(dumps_canonical(result.to_obj()))
    else:
        _echo(result.text())
    return EXIT_OK


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    # keep `--range -200..200` working: a leading dash would otherwise be
    # mistaken for an option by argparse
    for i, arg in enumerate(argv[:-1]):
        if arg == "--range" and argv[i + 1].startswith("-"):
            argv[i : i + 2] = [f"--range={argv[i + 1]}"]
            break
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "family":
        return cmd_family(args)
    if args.command == "count":
        return cmd_count(args)
    if args.command == "torsion":
        return cmd_torsion(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    return EXIT_INPUT


def console_main() -> None:
    sys.exit(main())
