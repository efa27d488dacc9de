"""Command line interface: ``cforge <subcommand> ...``.

Every option can also be set through an environment variable named
``CFORGE_`` plus the option name in upper case (``--budget-nodes`` becomes
``CFORGE_BUDGET_NODES``).  Command line values win over the environment.

Exit codes: 0 success, 2 input error, 3 budget exhausted without a decision,
1 audit failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .braid import BraidError
from .diagram import DiagramError
from .goeritz import parse_matrix
from .invariants import NotAKnotError
from .lattice import INCONCLUSIVE, embeds
from .moves import ALL_KINDS, DEFAULT_DERES_SAMPLES, MoveError
from .search import (
    Partner,
    Representation,
    SearchConfig,
    audit_findings,
    cmd_identify,
    cmd_pulldown,
    cmd_pullup,
)
from .tables import (
    DATA_DIR,
    TableError,
    TargetList,
    build_target_list,
    ingest_table,
    load_findings,
    persist_findings,
    read_dt_list,
)

EXIT_OK = 0
EXIT_AUDIT = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

ENV_PREFIX = "CFORGE_"

INPUT_ERRORS = (BraidError, DiagramError, NotAKnotError, MoveError, TableError, ValueError, OSError)


def _env_default(name: str, default, conv=str):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None or raw == "":
        return default
    return conv(raw)


def _common(p: argparse.ArgumentParser, *names: str) -> None:
    options = {
        "seed": dict(type=int, default=_env_default("seed", 0, int), help="random seed"),
        "workers": dict(type=int, default=_env_default("workers", 1, int), help="worker processes"),
        "deres-samples": dict(type=int, default=_env_default("deres-samples", DEFAULT_DERES_SAMPLES, int),
                              help="random de-resolutions per braid"),
        "diagrams": dict(type=int, default=_env_default("diagrams", 1, int),
                         help="braid representations per knot (extra ones are diversified)"),
        "table": dict(default=_env_default("table", None), help="knot table CSV (default: bundled fixture)"),
        "targets": dict(default=_env_default("targets", None), help="target list JSONL (default: bundled)"),
        "budget-nodes": dict(type=int, default=_env_default("budget-nodes", None, int),
                             help="node budget for lattice searches"),
        "out": dict(default=_env_default("out", None), help="output file (default: standard output)"),
    }
    for n in names:
        p.add_argument("--" + n, **options[n])


def _read_lines_or_text(value: str) -> str:
    if value.startswith("@"):
        return Path(value[1:]).read_text()
    return value


def _representations(args) -> list[Representation]:
    reps = []
    for b in args.braid or ():
        reps.append(Representation.braid(_read_lines_or_text(b)))
    for d in args.dt or ():
        reps.append(Representation.dt(_read_lines_or_text(d)))
    for f in args.pd or ():
        reps.append(Representation.pd(Path(f).read_text()))
    return reps


def _default_representations(knot: str, table, mode: str) -> list[Representation]:
    """Bundled witness inputs for the knot, falling back to its table DT code."""
    w = json.loads((DATA_DIR / "witnesses.json").read_text())
    if mode == "down":
        for p in w["pulldown"]:
            if p["source"] == knot:
                return [Representation.braid(p["source_braid"])]
    else:
        u = w["pullup"].get(knot)
        if u:
            return [Representation.braid(u["braid"])] if "braid" in u else [Representation.dt(u["dt"])]
    if knot in table and table[knot].dt_code:
        return [Representation.dt(table[knot].dt_code)]
    raise ValueError(f"no representation given and none bundled for {knot}")


def _default_partners(knot: str) -> list[Partner]:
    w = json.loads((DATA_DIR / "witnesses.json").read_text())
    u = w["pullup"].get(knot) or {}
    if "partner_dt" in u:
        return [Partner(u["partner"], Representation.dt(u["partner_dt"]))]
    return []


def _write_findings(findings, out: str | None) -> None:
    if out:
        persist_findings(findings, out)
    else:
        for f in findings:
            sys.stdout.write(json.dumps(f.to_json(), sort_keys=True) + "\n")


def _config(args) -> SearchConfig:
    kinds = tuple(args.kinds.split(",")) if getattr(args, "kinds", None) else ALL_KINDS
    return SearchConfig(
        seed=args.seed,
        workers=args.workers,
        deres_samples=args.deres_samples,
        diagrams=args.diagrams,
        kinds=kinds,
        table_path=args.table,
        targets_path=getattr(args, "targets", None),
        budget_nodes=getattr(args, "budget_nodes", None),
    )


def _load_targets(path):
    return TargetList.load(path if path else DATA_DIR / "targets.jsonl")


# -- subcommands -------------------------------------------------------------------


def run_pulldown(args) -> int:
    table = ingest_table(args.table)
    reps = _representations(args) or _default_representations(args.knot, table, "down")
    findings = cmd_pulldown(args.knot, reps, table, _config(args))
    _write_findings(findings, args.out)
    return EXIT_OK


def run_pullup(args) -> int:
    table = ingest_table(args.table)
    targets = _load_targets(args.targets)
    reps = _representations(args) or _default_representations(args.knot, table, "up")
    partners = []
    for item in args.partner or ():
        name, _, code = item.partition("=")
        if not code:
            raise ValueError("--partner expects NAME=DTCODE")
        partners.append(Partner(name, Representation.dt(_read_lines_or_text(code))))
    if not partners and not _representations(args):
        partners = _default_partners(args.knot)
    findings = cmd_pullup(args.knot, reps, targets, table, _config(args), partners)
    _write_findings(findings, args.out)
    return EXIT_OK


def run_identify(args) -> int:
    table = ingest_table(args.table)
    report = cmd_identify(_read_lines_or_text(args.input), table, args.kind)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def run_targets(args) -> int:
    cands = read_dt_list(args.census)

    def progress(name, reason, seconds):
        print(json.dumps({"event": "target", "name": name, "result": reason, "seconds": round(seconds, 3)}),
              file=sys.stderr)

    tl = build_target_list(cands, budget_nodes=args.budget_nodes, progress=progress)
    if args.out:
        tl.save(args.out)
    else:
        for e in tl:
            print(json.dumps(e.to_json(), sort_keys=True))
    print(json.dumps({"event": "targets.done", "candidates": len(cands), "retained": len(tl),
                      "failures": len(tl.failures)}), file=sys.stderr)
    inconclusive = any(reason == "inconclusive" for _, reason in tl.failures)
    return EXIT_BUDGET if inconclusive else EXIT_OK


def read_gram(path: str) -> list[list[int]]:
    return parse_matrix(Path(path).read_text())


def run_embed_check(args) -> int:
    G = read_gram(args.gram)
    cert = embeds(G, args.dim, budget_nodes=args.budget_nodes, budget_seconds=args.budget_seconds)
    out = cert.to_json()
    text = json.dumps(out, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_BUDGET if cert.outcome == INCONCLUSIVE else EXIT_OK


def run_ingest(args) -> int:
    table = ingest_table(args.path)
    rep = table.report
    print(json.dumps({
        "rows": rep.rows,
        "records": len(table),
        "skipped": [{"line": ln, "reason": why} for ln, why in rep.skipped],
        "collision_classes": table.collision_classes,
    }, indent=2))
    return EXIT_OK


def run_audit(args) -> int:
    table = ingest_table(args.table)
    targets = _load_targets(args.targets)
    findings = load_findings(args.findings)
    rep = audit_findings(findings, table, targets)
    print(json.dumps({"findings": len(findings), "inferences_checked": rep.checked,
                      "failures": [{"index": k, "reason": r} for k, r in rep.failures]}, indent=2))
    return EXIT_OK if rep.ok else EXIT_AUDIT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cforge", description="Genus-one concordance search for smooth 4-genus")
    ap.add_argument("--version", action="version", version=f"cforge {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on standard error")
    sub = ap.add_subparsers(dest="command", required=True)

    def reps(p):
        p.add_argument("knot", help="table name of the source knot")
        p.add_argument("--braid", action="append", help="braid word (or @file)")
        p.add_argument("--dt", action="append", help="DT code (or @file)")
        p.add_argument("--pd", action="append", help="file holding a PD code")
        p.add_argument("--kinds", help=f"comma separated move kinds from {','.join(ALL_KINDS)}")

    p = sub.add_parser("pulldown", help="search for genus one concordances to slice knots")
    reps(p)
    _common(p, "seed", "workers", "deres-samples", "diagrams", "table", "out")
    p.set_defaults(func=run_pulldown)

    p = sub.add_parser("pullup", help="search for genus one concordances to certified targets")
    reps(p)
    p.add_argument("--partner", action="append", help="NAME=DTCODE diagram of a target to resolve back")
    _common(p, "seed", "workers", "deres-samples", "diagrams", "table", "targets", "out")
    p.set_defaults(func=run_pullup)

    p = sub.add_parser("identify", help="fingerprint a knot and look it up")
    p.add_argument("input", help="braid, DT or PD text (or @file)")
    p.add_argument("--kind", choices=("auto", "braid", "dt", "pd"), default="auto")
    _common(p, "table")
    p.set_defaults(func=run_identify)

    p = sub.add_parser("targets", help="build a target list from a DT code file")
    p.add_argument("census", help="file with one 'name DT' pair or DT code per line")
    _common(p, "budget-nodes", "out")
    p.set_defaults(func=run_targets)

    p = sub.add_parser("embed-check", help="decide whether G = M^T M with M integral of size dim x m")
    p.add_argument("--gram", required=True, help="Gram matrix file")
    p.add_argument("--dim", required=True, type=int, help="lattice dimension n")
    p.add_argument("--budget-seconds", type=float, default=_env_default("budget-seconds", None, float))
    _common(p, "budget-nodes", "out")
    p.set_defaults(func=run_embed_check)

    p = sub.add_parser("ingest", help="validate a knot table CSV")
    p.add_argument("path", help="table CSV")
    p.set_defaults(func=run_ingest)

    p = sub.add_parser("audit", help="re-derive every inference in a findings file")
    p.add_argument("findings", help="findings JSONL")
    _common(p, "table", "targets")
    p.set_defaults(func=run_audit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"cforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
