"""Command-line front end.

Subcommands: construct (make states), analyze (grouping verdicts),
protocol (run the distillation pipeline), verify (dense cross-check),
search (hunt for indicator specifications).  Output is JSON on stdout
unless --pretty asks for tables.  Exit codes: 0 for success, 1 when an
asserted verdict is false or the dense route disagrees, 2 for usage and
validation problems.

State files are JSON documents:

    {"schema": 1, "n": 3, "lam0_plus": 0.5, "lam0_minus": 0.0,
     "lam": [0.0, 0.25, 0.0]}

where lam[i] belongs to splitting label i + 1.  Specification files for
`construct --spec` look like {"n": 3, "bits": {"1": 1, "2": 0, "3": 1}}
and must cover every label.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import __version__
from .analysis import (
    BUILTIN_REQUIREMENTS,
    GroupingReport,
    classify_groupings,
    grouping_report,
    search_specifications,
)
from .construct import example_state, from_specification, random_family_state
from .model import FamilyState, Grouping, Specification, validate
from .protocols import PipelineTrace, distill_pipeline

STATE_SCHEMA = 1


def state_document(state: FamilyState) -> dict[str, Any]:
    return {
        "schema": STATE_SCHEMA,
        "kind": "state",
        "n": state.n,
        "lam0_plus": state.lam0_plus,
        "lam0_minus": state.lam0_minus,
        "lam": list(state.lam),
    }


def state_from_document(doc: Any) -> FamilyState:
    if not isinstance(doc, dict):
        raise ValueError("state document must be a JSON object")
    if doc.get("schema") != STATE_SCHEMA:
        raise ValueError(f"unsupported state schema {doc.get('schema')!r}")
    missing = {"n", "lam0_plus", "lam0_minus", "lam"} - set(doc)
    if missing:
        raise ValueError(f"state document lacks {', '.join(sorted(missing))}")
    n = doc["n"]
    lam = doc["lam"]
    if not isinstance(n, int) or not isinstance(lam, list):
        raise ValueError("state document has n of wrong type or lam is not a list")
    try:
        state = FamilyState(
            n, float(doc["lam0_plus"]), float(doc["lam0_minus"]), tuple(float(v) for v in lam)
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"state document holds non-numeric entries: {exc}") from None
    problems = validate(state)
    if problems:
        raise ValueError("invalid state: " + "; ".join(problems))
    return state


def load_state(path: str) -> FamilyState:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read state file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"state file {path} is not valid JSON: {exc}") from None
    return state_from_document(doc)


def save_state(state: FamilyState, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_document(state), fh)
        fh.write("\n")


def _load_specification(path: str) -> Specification:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read specification file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"specification file {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "bits" not in doc:
        raise ValueError("specification file must hold an object with n and bits")
    n = doc["n"]
    bits = doc["bits"]
    if not isinstance(n, int) or not isinstance(bits, dict):
        raise ValueError("specification file needs integer n and a bits object")
    mapping = {}
    for key, value in bits.items():
        try:
            mapping[int(key)] = int(value)
        except (TypeError, ValueError):
            raise ValueError(f"bits entry {key!r}: {value!r} is not 0 or 1") from None
    return Specification.from_mapping(n, mapping)


def _parse_grouping(n: int, text: str) -> Grouping:
    groups = []
    for chunk in text.split("|"):
        members = []
        for item in chunk.split(","):
            item = item.strip()
            if not item:
                raise ValueError(f"empty party in grouping {text!r}")
            try:
                members.append(int(item))
            except ValueError:
                raise ValueError(f"bad party {item!r} in grouping {text!r}") from None
        groups.append(members)
    return Grouping.from_sets(n, groups)


def _splitting_fields(split) -> dict[str, Any]:
    return {"mask": split.mask, "splitting": str(split)}


def _pair_fields(pv) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "c": sorted(pv.c),
        "d": sorted(pv.d),
        "distillable": pv.distillable,
    }
    doc["witness"] = _splitting_fields(pv.witness) if pv.witness else None
    return doc


def _report_fields(rep: GroupingReport) -> dict[str, Any]:
    return {
        "grouping": rep.grouping.as_lists(),
        "pairs": [_pair_fields(pv) for pv in rep.pairs],
        "ghz": [sorted(g) for g in rep.ghz],
        "any_distillable": rep.any_distillable,
    }


def _emit(doc: dict[str, Any]) -> None:
    json.dump(doc, sys.stdout)
    sys.stdout.write("\n")


def _print_state_pretty(state: FamilyState) -> None:
    from .model import Splitting

    print(f"parties        {state.n}")
    print(f"lam0_plus      {state.lam0_plus:.12g}")
    print(f"lam0_minus     {state.lam0_minus:.12g}")
    print(f"delta          {state.delta:.12g}")
    print(f"{'label':>5}  {'coefficient':>14}  {'indicator':>9}  splitting")
    for mask in range(1, state.label_count + 1):
        split = Splitting(state.n, mask)
        print(
            f"{mask:>5}  {state.coefficient(mask):>14.10g}  "
            f"{state.indicator(mask):>9}  {split}"
        )


def _cmd_construct(args: argparse.Namespace) -> int:
    if args.example is not None:
        band = tuple(args.band) if args.band is not None else None
        group = None
        if args.group is not None:
            group = [int(p) for p in args.group.split(",")]
        state = example_state(
            args.example,
            args.n,
            j=args.j,
            band=band,
            group=group,
            margin=args.margin,
            lam0_minus=args.lam0_minus,
        )
    elif args.spec is not None:
        spec = _load_specification(args.spec)
        state = from_specification(spec, margin=args.margin, lam0_minus=args.lam0_minus)
    else:
        if args.n is None:
            raise ValueError("--random needs --n")
        state = random_family_state(args.n, args.seed)
    if args.output:
        save_state(state, args.output)
        return 0
    if args.pretty:
        _print_state_pretty(state)
    else:
        _emit(state_document(state))
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    state = load_state(args.state)
    if args.all_groupings:
        if args.assert_ or args.pair:
            raise ValueError("--assert and --pair need a single --grouping")
        reports = list(
            classify_groupings(state, guard=args.guard, two_groups_only=args.two_groups_only)
        )
        if args.pretty:
            for rep in reports:
                flags = " ".join(
                    f"({','.join(map(str, sorted(pv.c)))})x({','.join(map(str, sorted(pv.d)))})"
                    f"={'yes' if pv.distillable else 'no'}"
                    for pv in rep.pairs
                )
                print(f"{str(rep.grouping):<24} {flags}")
        else:
            _emit(
                {
                    "schema": STATE_SCHEMA,
                    "kind": "grouping-sweep",
                    "n": state.n,
                    "count": len(reports),
                    "reports": [_report_fields(r) for r in reports],
                }
            )
        return 0

    grouping = _parse_grouping(state.n, args.grouping)
    rep = grouping_report(state, grouping)
    if args.pair:
        first, second = args.pair
        pv = rep.pair(grouping.group_of(first), grouping.group_of(second))
        if args.pretty:
            wit = f" (blocked by {pv.witness})" if pv.witness else ""
            word = "distillable" if pv.distillable else "not distillable"
            print(f"pair ({','.join(map(str, sorted(pv.c)))}) x "
                  f"({','.join(map(str, sorted(pv.d)))}): {word}{wit}")
        else:
            doc = {"schema": STATE_SCHEMA, "kind": "pair-verdict", "n": state.n,
                   "grouping": grouping.as_lists()}
            doc.update(_pair_fields(pv))
            _emit(doc)
        return 0 if (pv.distillable or not args.assert_) else 1

    if args.pretty:
        print(f"grouping {grouping}")
        for pv in rep.pairs:
            wit = f"  blocked by {pv.witness}" if pv.witness else ""
            word = "yes" if pv.distillable else "no "
            print(f"  ({','.join(map(str, sorted(pv.c)))}) x "
                  f"({','.join(map(str, sorted(pv.d)))})  {word}{wit}")
        print("  ghz clique: " + " ".join(f"({','.join(map(str, sorted(g)))})" for g in rep.ghz))
    else:
        doc = {"schema": STATE_SCHEMA, "kind": "grouping-report", "n": state.n}
        doc.update(_report_fields(rep))
        _emit(doc)
    if args.assert_ and not all(pv.distillable for pv in rep.pairs):
        return 1
    return 0


def _trace_fields(trace: PipelineTrace, with_states: bool) -> dict[str, Any]:
    steps = []
    for step in trace.steps:
        entry: dict[str, Any] = {"kind": step.kind, "note": step.note, "n": step.state.n,
                                 "digest": step.digest}
        if step.party is not None:
            entry["party"] = step.party
        if step.amplification is not None:
            entry["amplification"] = step.amplification
        if step.order is not None:
            entry["order"] = list(step.order)
        if step.parties is not None:
            entry["parties"] = list(step.parties)
        if with_states:
            entry["state"] = state_document(step.state)
        steps.append(entry)
    doc: dict[str, Any] = {
        "schema": STATE_SCHEMA,
        "kind": "pipeline",
        "grouping": trace.grouping.as_lists(),
        "c": sorted(trace.c),
        "d": sorted(trace.d),
        "succeeded": trace.succeeded,
        "witness": _splitting_fields(trace.witness) if trace.witness else None,
        "final_split": _splitting_fields(trace.final_split) if trace.final_split else None,
        "steps": steps,
    }
    if trace.outcome is not None:
        out = trace.outcome
        doc["outcome"] = {
            "lam0_plus": out.lam0_plus,
            "lam0_minus": out.lam0_minus,
            "lam_pair": out.lam_pair,
            "fidelity": out.fidelity,
            "distillable": out.distillable,
        }
    else:
        doc["outcome"] = None
    return doc


def _cmd_protocol(args: argparse.Namespace) -> int:
    state = load_state(args.state)
    grouping = _parse_grouping(state.n, args.grouping)
    first, second = args.pair
    trace = distill_pipeline(
        state, grouping, grouping.group_of(first), grouping.group_of(second)
    )
    if args.pretty:
        for step in trace.steps:
            extra = f"  [{step.digest}]" if len(step.digest) <= 32 else ""
            print(f"{step.kind:<8} {step.note}{extra}")
        if trace.witness is not None:
            print(f"blocked by {trace.witness}")
        elif trace.outcome is not None:
            out = trace.outcome
            word = "distillable" if out.distillable else "not distillable"
            print(f"outcome: fidelity {out.fidelity:.6g}, {word}")
    else:
        _emit(_trace_fields(trace, args.json_trace))
    return 0 if (trace.succeeded or not args.assert_) else 1


def _cmd_verify(args: argparse.Namespace) -> int:
    from .oracle import ppt_agreement_report

    state = load_state(args.state)
    report = ppt_agreement_report(state, tol=args.tol)
    if args.pretty:
        for check in report.checks:
            mark = "ok " if check.agree else "BAD"
            print(
                f"{mark} {str(check.split):<24} indicator {check.indicator} "
                f"min-eig {check.min_eigenvalue:+.3e}"
            )
        print("agreement: " + ("complete" if report.all_agree else "BROKEN"))
    else:
        _emit(
            {
                "schema": STATE_SCHEMA,
                "kind": "verify",
                "n": report.n,
                "tol": report.tol,
                "all_agree": report.all_agree,
                "checks": [
                    {
                        "mask": c.split.mask,
                        "splitting": str(c.split),
                        "indicator": c.indicator,
                        "min_eigenvalue": c.min_eigenvalue,
                        "agree": c.agree,
                    }
                    for c in report.checks
                ],
            }
        )
    return 0 if report.all_agree else 1


def _cmd_search(args: argparse.Namespace) -> int:
    requirement = BUILTIN_REQUIREMENTS[args.requirement]()
    result = search_specifications(args.n, requirement)
    if args.pretty:
        if result is None:
            print(f"no specification over {args.n} parties meets '{args.requirement}'")
        else:
            print(f"found a specification over {args.n} parties for '{args.requirement}':")
            print(f"  distillable labels: {', '.join(map(str, result.ones()))}")
    else:
        doc: dict[str, Any] = {
            "schema": STATE_SCHEMA,
            "kind": "search",
            "n": args.n,
            "requirement": args.requirement,
            "found": result is not None,
        }
        doc["pattern"] = (
            None
            if result is None
            else {"n": result.n, "value": result.to_int(), "ones": list(result.ones())}
        )
        _emit(doc)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entact",
        description="Family states over n parties: construction, grouping verdicts, "
        "distillation protocols, dense verification, specification search.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="build a state and write it as JSON")
    source = con.add_mutually_exclusive_group(required=True)
    source.add_argument("--example", metavar="ID", help="catalog pattern I..VII")
    source.add_argument("--spec", metavar="FILE", help="JSON indicator specification")
    source.add_argument("--random", action="store_true", help="seeded random state")
    con.add_argument("--n", type=int, help="party count (pattern dependent)")
    con.add_argument("--j", type=int, help="size parameter for patterns I and IV")
    con.add_argument("--band", type=float, nargs=2, metavar=("LO", "HI"),
                     help="percentage band for pattern II")
    con.add_argument("--group", metavar="PARTIES", help="comma list for pattern III")
    con.add_argument("--margin", type=float, default=0.5,
                     help="separable-label clearance in (0, 1] (default 0.5)")
    con.add_argument("--lam0-minus", type=float, default=0.0, dest="lam0_minus",
                     help="unnormalized weight of the odd corner (default 0)")
    con.add_argument("--seed", type=int, default=0, help="seed for --random (default 0)")
    con.add_argument("-o", "--output", metavar="FILE", help="write the state here")
    con.add_argument("--pretty", action="store_true", help="table instead of JSON")
    con.set_defaults(func=_cmd_construct)

    ana = sub.add_parser("analyze", help="grouping verdicts for a state")
    ana.add_argument("--state", required=True, metavar="FILE")
    which = ana.add_mutually_exclusive_group(required=True)
    which.add_argument("--grouping", metavar="SPEC", help="groups like '1,2|3|4,5'")
    which.add_argument("--all-groupings", action="store_true",
                       help="sweep every partition of the parties")
    ana.add_argument("--two-groups-only", action="store_true",
                     help="restrict the sweep to two-group partitions")
    ana.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"),
                     help="report only the pair of groups holding parties I and J")
    ana.add_argument("--guard", type=int, default=10,
                     help="party-count guard for the sweep (default 10)")
    ana.add_argument("--assert", action="store_true", dest="assert_",
                     help="exit 1 unless the reported verdicts are all true")
    ana.add_argument("--pretty", action="store_true", help="tables instead of JSON")
    ana.set_defaults(func=_cmd_analyze)

    pro = sub.add_parser("protocol", help="run the distillation pipeline for one pair")
    pro.add_argument("--state", required=True, metavar="FILE")
    pro.add_argument("--grouping", required=True, metavar="SPEC")
    pro.add_argument("--pair", type=int, nargs=2, required=True, metavar=("I", "J"),
                     help="parties naming the two groups to connect")
    pro.add_argument("--json-trace", action="store_true", dest="json_trace",
                     help="include every intermediate state in the JSON")
    pro.add_argument("--assert", action="store_true", dest="assert_",
                     help="exit 1 when the pipeline does not succeed")
    pro.add_argument("--pretty", action="store_true", help="step table instead of JSON")
    pro.set_defaults(func=_cmd_protocol)

    ver = sub.add_parser("verify", help="cross-check the indicators against dense matrices")
    ver.add_argument("--state", required=True, metavar="FILE")
    ver.add_argument("--tol", type=float, default=1e-10,
                     help="eigenvalue tolerance (default 1e-10)")
    ver.add_argument("--pretty", action="store_true", help="table instead of JSON")
    ver.set_defaults(func=_cmd_verify)

    sea = sub.add_parser("search", help="first specification meeting a built-in requirement")
    sea.add_argument("--n", type=int, default=5, help="party count (default 5)")
    sea.add_argument("--requirement", required=True, choices=sorted(BUILTIN_REQUIREMENTS),
                     help="which built-in requirement to satisfy")
    sea.add_argument("--pretty", action="store_true", help="sentence instead of JSON")
    sea.set_defaults(func=_cmd_search)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
