"""Command-line frontend.

Subcommands: field, design, matrix, nucleus, groupoid, certify.
Everything emits JSON (the matrix subcommand can emit CSV instead) to
stdout or to --out.  Exit status: 0 on PASS, 1 on a verified FAIL, 2 on
usage errors such as a non-primitive polynomial.
"""

from __future__ import annotations

import argparse
import json
import sys

from .certify import (
    GERM_FULL_CAP,
    RANK_ELIMINATION_CAP,
    certify,
    design_section,
    field_section,
    jsonable,
    matrix_section,
)
from .exact_linalg import build_T, build_W, check_R_conditions, rank_mod_p, rank_over_Q, verify_right_inverse
from .gf2n import field_context
from .groupoid import MembershipMismatch, RegionSearchError, membership_matrix, region_pattern
from .hyperplanes import build_hyperplanes, pair_count, search_base_blocks
from .selfsim import MultispinalGroup


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(doc, out: str | None) -> None:
    _emit(json.dumps(jsonable(doc), indent=2) + "\n", out)


def cmd_field(args) -> int:
    ctx = field_context(args.n, args.poly)
    doc = field_section(ctx)
    doc["power_table"] = list(ctx.power_table)
    doc["trace_table"] = list(ctx.trace_table)
    _emit_json(doc, args.out)
    return 0 if doc["pass"] else 1


def cmd_design(args) -> int:
    if args.search_q is not None:
        blocks = search_base_blocks(args.search_q)
        doc = {
            "q": args.search_q,
            "k": 2 * args.search_q - 1,
            "count": len(blocks),
            "blocks": [list(b.sorted_positions()) for b in blocks],
        }
        _emit_json(doc, args.out)
        return 0
    ctx = field_context(args.n, args.poly)
    doc = design_section(ctx)
    planes = build_hyperplanes(ctx)
    doc["block_members"] = {f"H{h.index}": sorted(h.elements()) for h in planes}
    lam = ctx.q // 2 - 1
    counts = {}
    bad = None
    for l1 in range(ctx.k):
        for l2 in range(l1 + 1, ctx.k):
            c = pair_count(ctx, l1, l2)
            counts[c] = counts.get(c, 0) + 1
            if c != lam and bad is None:
                bad = [l1, l2, c]
    doc["pair_count_table"] = {
        "expected": lam,
        "observed_counts": {str(k): v for k, v in sorted(counts.items())},
        "all_equal": list(counts) == [lam],
        **({"first_violation": bad} if bad else {}),
    }
    doc["pass"] = doc["pass"] and doc["pair_count_table"]["all_equal"]
    _emit_json(doc, args.out)
    return 0 if doc["pass"] else 1


def cmd_matrix(args) -> int:
    ctx = field_context(args.n, args.poly)
    W = build_W(ctx)
    if args.emit == "csv":
        lines = ["label," + ",".join(W.col_labels)]
        for label, row in zip(W.row_labels, W.to_lists()):
            lines.append(label + "," + ",".join(str(v) for v in row))
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    T = build_T(ctx.q, W)
    report = check_R_conditions(W)
    doc = {
        "n": ctx.n,
        "q": ctx.q,
        "k": ctx.k,
        "row_labels": list(W.row_labels),
        "col_labels": list(W.col_labels),
        "W": W.to_lists(),
        "R_conditions": report.as_dict(),
        "all_R_pass": report.all_pass,
        "T": T.to_strings(),
        "right_inverse_identity": verify_right_inverse(W, T),
    }
    ok = doc["all_R_pass"] and doc["right_inverse_identity"]
    if args.rank_field:
        spec = args.rank_field
        if spec == "Q":
            r = rank_over_Q(W)
            doc["rank"] = {"field": "Q", "rank": r, "full": r == 2 * ctx.q}
            ok = ok and r == 2 * ctx.q
        elif spec == "F2":
            r = rank_mod_p(W, 2)
            doc["rank"] = {"field": "F2", "rank": r, "full": r == 2 * ctx.q}
        elif spec.startswith("Fp:"):
            p = int(spec[3:])
            r = rank_mod_p(W, p)
            doc["rank"] = {"field": f"F{p}", "rank": r, "full": r == 2 * ctx.q}
        else:
            raise ValueError(f"unknown rank field {spec!r} (use Q, F2 or Fp:<p>)")
    _emit_json(doc, args.out)
    return 0 if ok else 1


def cmd_nucleus(args) -> int:
    ctx = field_context(args.n, args.poly)
    group = MultispinalGroup(ctx)
    report = group.verify_nucleus(args.depth)
    states = []
    for s in group.nucleus_states:
        entry = {
            "name": group.state_name(s),
            "output": "swap" if group.output_swaps(s) else "id",
            "on_0": group.state_name(group.restrict_letter_state(s, "0")),
            "on_1": group.state_name(group.restrict_letter_state(s, "1")),
        }
        if s[0] == "b":
            entry["element"] = s[1]
            entry["restriction_period"] = group.restriction_period(s)
            entry["trivial_period"] = False
        elif s == ("e",):
            entry["restriction_period"] = 1
            entry["trivial_period"] = True
        states.append(entry)
    doc = {
        "n": ctx.n,
        "states": states,
        "contraction": report.as_dict(),
        "pass": report.passed,
    }
    _emit_json(doc, args.out)
    return 0 if report.passed else 1


def cmd_groupoid(args) -> int:
    ctx = field_context(args.n, args.poly)
    group = MultispinalGroup(ctx)
    doc = {"n": ctx.n, "m": args.m}
    if args.verify or ctx.n <= GERM_FULL_CAP:
        try:
            result = membership_matrix(group, args.m, args.depth)
            doc["witnesses"] = {p.label: p.witness for p in result.patterns}
            doc["membership_matrix"] = [list(r) for r in result.rows]
            doc["matches_transpose"] = True
            ok = True
        except (MembershipMismatch, RegionSearchError) as err:
            doc["matches_transpose"] = False
            doc["error"] = str(err)
            ok = False
    else:
        patterns = [region_pattern(group, args.m, "H", 0, args.depth)]
        doc["witnesses"] = {p.label: p.witness for p in patterns}
        doc["note"] = "field too large for the full region sweep; pass --verify to force"
        ok = True
    doc["pass"] = ok
    _emit_json(doc, args.out)
    return 0 if ok else 1


def cmd_certify(args) -> int:
    ns = list(range(args.n_min, args.n_max + 1)) if args.all else [args.n]
    docs = []
    for n in ns:
        docs.append(
            certify(
                n,
                poly=args.poly if not args.all else None,
                m_values=tuple(args.m_values),
                seed=args.seed,
                samples=args.samples,
                rank_cap=args.rank_cap,
            )
        )
    if args.all:
        verdict = all(d["verdict"] == "PASS" for d in docs)
        doc = {"range": [args.n_min, args.n_max], "certificates": docs,
               "verdict": "PASS" if verdict else "FAIL"}
    else:
        doc = docs[0]
        verdict = doc["verdict"] == "PASS"
    _emit_json(doc, args.out)
    return 0 if verdict else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multispinal",
        description="Exact certificates for binary multispinal group algebra structure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, need_n=True):
        if need_n:
            p.add_argument("--n", type=int, required=True, help="field degree (>= 2)")
        p.add_argument("--poly", help="primitive polynomial: 'x^3+x+1', 0xB, ...")
        p.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("field", help="field tables and kernel checks")
    add_common(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("design", help="2-design verification or base-block search")
    p.add_argument("--n", type=int, help="field degree")
    p.add_argument("--search-q", type=int, help="search base blocks for this even q")
    p.add_argument("--poly")
    p.add_argument("--out")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("matrix", help="inclusion matrix, right-inverse, ranks")
    add_common(p)
    p.add_argument("--rank-field", help="Q, F2 or Fp:<p>")
    p.add_argument("--emit", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("nucleus", help="automaton states and contraction check")
    add_common(p)
    p.add_argument("--depth", type=int, default=8)
    p.set_defaults(func=cmd_nucleus)

    p = sub.add_parser("groupoid", help="region witnesses and membership matrix")
    add_common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--depth", type=int, help="witness search depth")
    p.add_argument("--verify", action="store_true",
                   help="force the full membership sweep and transpose check")
    p.set_defaults(func=cmd_groupoid)

    p = sub.add_parser("certify", help="full pipeline with one PASS/FAIL verdict")
    p.add_argument("--n", type=int)
    p.add_argument("--all", action="store_true", help="certify a whole degree range")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--poly")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--m-values", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--rank-cap", type=int, default=RANK_ELIMINATION_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "design" and args.search_q is None and args.n is None:
        parser.error("design needs --n or --search-q")
    if args.command == "certify" and not args.all and args.n is None:
        parser.error("certify needs --n or --all")
    try:
        return args.func(args)
    except (ValueError, RegionSearchError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
