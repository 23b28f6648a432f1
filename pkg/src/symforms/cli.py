"""Command-line front end.

Subcommands: ``construct`` writes example-space files, ``spectrum``
prints rank distributions, ``verify`` runs a theorem checker and exits
0/1/2/3 for pass/fail/hypotheses-not-met/cap, and ``search`` drives
the seeded counterexample probes.  All output is deterministic for
fixed arguments and seed, independent of the worker count.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .constructions import (
    alt_full_space,
    even_rank_space,
    rank2_space,
    restrict_scalars,
    trace_form_space,
)
from .errors import CapExceeded
from .field import Field, make_field
from .reports import EXIT_CAP, VerificationReport, json_ready
from .spaces import (
    DEFAULT_ENUMERATION_CAP,
    load_space,
    rank_spectrum,
    save_space,
    space_to_json_dict,
)
from . import verify as V

THEOREMS = (
    "odd-rank",
    "vm",
    "rank-bound",
    "radicals",
    "two-rank",
    "spread",
    "threshold",
    "inequality",
    "counts",
)


@dataclass
class RunConfig:
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    parallelism: int = 1
    output_format: str = "json"
    seed: int = 0
    in_path: Optional[str] = None
    out_path: Optional[str] = None


def _config(args) -> RunConfig:
    cfg = RunConfig(
        enumeration_cap=args.cap,
        parallelism=args.jobs,
        output_format=args.format,
        seed=args.seed,
        in_path=getattr(args, "space", None),
        out_path=args.out,
    )
    if cfg.enumeration_cap < 1 or cfg.parallelism < 1:
        raise ValueError("--cap and --jobs must be at least 1")
    return cfg


def _field_from_args(args) -> Field:
    modulus = None
    if getattr(args, "modulus", None):
        modulus = [int(c) for c in args.modulus.split(",")]
    return make_field(args.p, args.k, modulus)


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        lines = []
        if "spectrum" in payload:
            lines.append("rank,count")
            for r in sorted(payload["spectrum"], key=int):
                lines.append(f"{r},{payload['spectrum'][r]}")
            lines.append(f"total,{payload['total']}")
        else:
            lines.append("key,value")
            for key in sorted(payload):
                val = payload[key]
                if isinstance(val, (dict, list)):
                    val = json.dumps(val, sort_keys=True)
                lines.append(f"{key},{val}")
        return "\n".join(lines) + "\n"
    if fmt == "text":
        lines = []
        for key in sorted(payload):
            val = payload[key]
            if isinstance(val, (dict, list)):
                val = json.dumps(val, sort_keys=True)
            lines.append(f"{key}: {val}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _emit(payload: dict, cfg: RunConfig) -> None:
    text = _render(payload, cfg.output_format)
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _report_payload(report: VerificationReport, cfg: RunConfig) -> dict:
    payload = report.to_json_dict()
    payload["seed"] = cfg.seed
    return payload


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    cfg = _config(args)
    try:
        field = _field_from_args(args) if args.kind != "restrict" else None
        if args.kind == "rank2":
            space = rank2_space(field, args.n)
        elif args.kind == "even-rank":
            space = even_rank_space(field, args.n, args.r)
        elif args.kind == "trace":
            space = trace_form_space(field, args.r)
        elif args.kind == "alt-full":
            space = alt_full_space(field)
        elif args.kind == "restrict":
            if not args.space:
                raise ValueError("restrict needs --space with the inner space file")
            inner, _ = load_space(args.space)
            space = restrict_scalars(inner, _field_from_args(args))
        else:
            raise ValueError(f"unknown construction {args.kind!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out_path:
        save_space(space, cfg.out_path)
        print(f"d={space.dim} n={space.n} q={space.field.q}")
    else:
        sys.stdout.write(
            json.dumps(space_to_json_dict(space), sort_keys=True, indent=2) + "\n"
        )
    return 0


def cmd_spectrum(args) -> int:
    cfg = _config(args)
    space, _ = load_space(args.space)
    try:
        spec = rank_spectrum(space, cfg.enumeration_cap, cfg.parallelism)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    payload = {
        "field": space.field.to_json_dict(),
        "n": space.n,
        "d": space.dim,
        "seed": cfg.seed,
        "spectrum": {str(r): c for r, c in sorted(spec.counts.items())},
        "total": spec.total,
    }
    _emit(payload, cfg)
    return 0


def _parse_x_values(spec: str) -> list[int]:
    out = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def cmd_verify(args) -> int:
    cfg = _config(args)
    cap, jobs = cfg.enumeration_cap, cfg.parallelism
    try:
        if args.theorem == "inequality":
            # --a and --b are sweep maxima: every pair 1 <= b <= a is checked.
            reports = []
            for a in range(1, args.a + 1):
                for b in range(1, min(a, args.b) + 1):
                    reports.append(
                        V.check_inequalities(a, b, _parse_x_values(args.x))
                    )
            worst = max(r.exit_code for r in reports)
            payload = {
                "theorem": "inequality",
                "verdict": reports[0].verdict if worst == 0 else "fail",
                "pairs_checked": len(reports),
                "quantities": json_ready(
                    {"a_max": args.a, "b_max": args.b, "x": args.x}
                ),
                "seed": cfg.seed,
            }
            _emit(payload, cfg)
            return worst
        if not args.space:
            print("error: this theorem needs a space file", file=sys.stderr)
            return 2
        space, _ = load_space(args.space)
        if args.theorem == "odd-rank":
            report = V.check_odd_rank_bound(space, cap, jobs)
        elif args.theorem == "vm":
            report = V.check_vm_bound(space, cap, jobs)
        elif args.theorem == "rank-bound":
            report = V.check_rank_bound(space, cap, jobs)
        elif args.theorem == "radicals":
            report = V.check_common_radicals(space, cap, jobs)
        elif args.theorem == "two-rank":
            report = V.check_two_rank_bound(space, cap, jobs)
        elif args.theorem == "spread":
            _, report = V.spread_decomposition(space, cap, jobs)
        elif args.theorem == "threshold":
            report = V.check_radical_threshold(space, cap, jobs)
        elif args.theorem == "counts":
            if args.r is None:
                print("error: counts needs --r with the target rank", file=sys.stderr)
                return 2
            _, report = V.count_rank_elements(space, args.r, cap, jobs)
        else:
            print(f"error: unknown theorem {args.theorem!r}", file=sys.stderr)
            return 2
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    _emit(_report_payload(report, cfg), cfg)
    return report.exit_code


def cmd_search(args) -> int:
    cfg = _config(args)
    params = V.SearchParams(
        p=args.p,
        k=args.k,
        n=args.n,
        d=args.dim,
        predicate=args.predicate,
        trials=args.trials,
        seed=cfg.seed,
        cap=cfg.enumeration_cap,
        jobs=cfg.parallelism,
    )
    try:
        report = V.random_subspace_search(params)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    _emit(_report_payload(report, cfg), cfg)
    return report.exit_code


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(sp) -> None:
    sp.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sp.add_argument("--out", "-o", default=None)


def _add_field_flags(sp) -> None:
    sp.add_argument("--p", type=int, required=True, help="field characteristic")
    sp.add_argument("--k", type=int, default=1, help="extension degree")
    sp.add_argument(
        "--modulus", default=None, help="comma-separated coefficients, low degree first"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symforms",
        description="Subspaces of symmetric bilinear forms over finite fields: "
        "construct examples, compute rank spectra, verify the dimension bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("construct", help="build an example space file")
    pc.add_argument(
        "kind", choices=("rank2", "even-rank", "trace", "alt-full", "restrict")
    )
    _add_field_flags(pc)
    pc.add_argument("--n", type=int, default=None)
    pc.add_argument("--r", type=int, default=None)
    pc.add_argument("--space", default=None, help="inner space file (restrict)")
    _add_common(pc)
    pc.set_defaults(fn=cmd_construct)

    ps = sub.add_parser("spectrum", help="rank distribution of a space file")
    ps.add_argument("space")
    _add_common(ps)
    ps.set_defaults(fn=cmd_spectrum)

    pv = sub.add_parser("verify", help="run one theorem checker")
    pv.add_argument("theorem", choices=THEOREMS)
    pv.add_argument("space", nargs="?", default=None)
    pv.add_argument("--r", type=int, default=None, help="target rank (counts)")
    pv.add_argument("--a", type=int, default=12, help="max a (inequality sweep)")
    pv.add_argument("--b", type=int, default=12, help="max b (inequality sweep)")
    pv.add_argument("--x", default="4..16", help="x values, e.g. 2,3,4..16")
    _add_common(pv)
    pv.set_defaults(fn=cmd_verify)

    pr = sub.add_parser("search", help="seeded randomized counterexample probe")
    pr.add_argument("--predicate", choices=sorted(V.PREDICATES), required=True)
    _add_field_flags(pr)
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--dim", type=int, required=True)
    pr.add_argument("--trials", type=int, required=True)
    _add_common(pr)
    pr.set_defaults(fn=cmd_search)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
