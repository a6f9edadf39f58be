"""Command-line front end.

Exit codes: 0 every check passed, 1 a check failed, 2 usage error, 3 I/O error.
Output is deterministic; wall-clock time is reported only with ``--timing``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .cayley import is_isobicyclic_pair, load_table
from .classify import analyze_triple, classify_triple
from .errors import IsoclassError
from .factorise import class_index, export_classes, matched_pair_search
from .maps import FAMILY_FILTERS, enumerate_maps
from .presentations import (PresentationSyntaxError, default_cap, format_presentation, make_presentation,
                            parse_presentation, todd_coxeter)
from .presentations.library import parse_spec
from .report import Check, CheckList
from .suites import SUITES, THM51_EXPECTED

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SEARCH_EXPECTED = {2: 1, 4: 2, 8: 5}


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    argv: list[str]
    parameters: dict
    checks: CheckList = field(default_factory=CheckList)
    columns: list[str] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed: float | None = None

    @property
    def passed(self) -> bool:
        return self.checks.passed

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "argv": self.argv,
            "parameters": self.parameters,
            "checks": [c.to_dict() for c in self.checks.checks],
            "rows": self.rows,
            "notes": self.notes,
            "passed": self.passed,
            "elapsed": self.elapsed,
        }

    def render(self) -> str:
        lines = ["isoclass " + " ".join(self.argv)]
        params = " ".join(f"{k}={_fmt(v)}" for k, v in self.parameters.items())
        lines.append(f"parameters: {params}")
        lines.extend(f"note: {n}" for n in self.notes)
        if self.rows:
            lines.append("")
            lines.extend(_table(self.columns, self.rows))
            lines.append("")
        for c in self.checks.checks:
            scope = f"[{c.scope}] " if c.scope else ""
            lines.append(f"{c.status.upper():4}  {scope}{c.name}  (expected {_fmt(c.expected)}, actual {_fmt(c.actual)})")
        failed = len(self.checks.failures())
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'} ({len(self.checks.checks)} checks, {failed} failed)")
        if self.elapsed is not None:
            lines.append(f"elapsed: {self.elapsed:.3f} s")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _table(columns: list[str], rows: list[dict]) -> list[str]:
    cells = [[str(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    fmt = lambda vals: "  ".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip()
    return [fmt(columns), fmt(["-" * w for w in widths])] + [fmt(row) for row in cells]


# -- argument helpers ---------------------------------------------------------------

_RANGE_RE = re.compile(r"^\s*(\d+)\s*(?:(?:-|\.\.)\s*(\d+)\s*)?$")


def parse_e_range(text: str) -> list[int]:
    mt = _RANGE_RE.match(text)
    if not mt:
        raise UsageError(f"cannot parse e-range {text!r}; use E or E1-E2")
    lo = int(mt.group(1))
    hi = int(mt.group(2)) if mt.group(2) else lo
    if hi < lo:
        raise UsageError(f"empty e-range {text!r}")
    return list(range(lo, hi + 1))


# -- commands ------------------------------------------------------------------------


def cmd_verify(args, report: Report):
    es = parse_e_range(args.e)
    names = args.suite or list(SUITES)
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    explicit = bool(args.suite)
    for name in names:
        s = SUITES[name]
        bad = [e for e in es if not s.e_min <= e <= s.e_max]
        if bad and explicit:
            raise UsageError(f"suite {name} supports e in {s.e_min}..{s.e_max}, got e={bad[0]}")
    report.parameters.update(e=es, suites=names)
    for name in names:
        s = SUITES[name]
        for e in es:
            if not s.e_min <= e <= s.e_max:
                report.notes.append(f"suite {name} skipped for e={e} (supports {s.e_min}..{s.e_max})")
                continue
            sub = s.run(e, threads=args.threads) if name == "thm51" else s.run(e)
            for c in sub.checks:
                c.scope = f"{name} e={e}" + (f" {c.scope}" if c.scope else "")
            report.checks.extend(sub)


def cmd_classify(args, report: Report):
    g = load_table(_read(args.group_file))
    a, b = args.a, args.b
    report.parameters.update(group_file=Path(args.group_file).name, a=a, b=b, order=g.order)
    for x in (a, b):
        if not 0 <= x < g.order:
            raise UsageError(f"element index {x} out of range for a group of order {g.order}")
    ok = report.checks.truth("pair is isobicyclic", is_isobicyclic_pair(g, a, b))
    if not ok.passed:
        return
    try:
        params = classify_triple(g, a, b, threads=args.threads)
        rep = analyze_triple(g, a, b, verify_pair=False)
    except IsoclassError as exc:
        report.checks.add(Check("classification", False, "a family member", str(exc)))
        return
    report.checks.add(Check("classification", True, "a family member", str(params)))
    report.columns = ["params", "d", "u", "v", "s", "t", "metacyclic", "derived_invariants"]
    row = {"params": str(params)}
    row.update(rep.to_dict())
    report.rows.append(row)


def cmd_maps(args, report: Report):
    n = args.n
    if n not in (2, 4, 8, 16, 32):
        raise UsageError(f"--n must be one of 2, 4, 8, 16, 32, got {n}")
    report.parameters.update(n=n, family=args.family)
    classes = enumerate_maps(n, args.family, threads=args.threads)
    report.columns = ["class", "group", "a", "b", "V", "E", "F", "genus"]
    for k, mc in enumerate(classes):
        row = {"class": k}
        row.update(mc.row())
        report.rows.append(row)
        m = mc.map
        report.checks.truth("V - E + F = 2 - 2 genus", m.euler == 2 - 2 * m.genus and m.genus >= 0,
                            f"class {k}")
    e = n.bit_length() - 1
    if args.family == "nonmetacyclic" and e in THM51_EXPECTED:
        report.checks.equal(f"non-metacyclic map classes = {THM51_EXPECTED[e]}", THM51_EXPECTED[e], len(classes))
    if n == 2:
        report.checks.equal("K_{2,2} genus = 0", [0], [mc.map.genus for mc in classes])
    if args.emit_dir:
        out = Path(args.emit_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for k, mc in enumerate(classes):
                (out / f"map_n{n}_{k:02d}.txt").write_text(mc.export())
        except OSError as exc:
            raise OSError(f"cannot write maps to {out}: {exc.strerror or exc}") from None
        report.notes.append(f"wrote {len(classes)} map files")


def cmd_search(args, report: Report):
    n = args.n
    swap = not args.allow_no_swap
    report.parameters.update(n=n, require_swap=swap, expensive=args.expensive, heuristic=args.heuristic)
    try:
        res = matched_pair_search(n, swap, expensive=args.expensive, heuristic=args.heuristic,
                                  threads=args.threads)
    except IsoclassError as exc:
        raise UsageError(str(exc)) from None
    report.notes.append(f"{res.label}: {res.candidates} search nodes, {res.groups_found} groups before deduplication")
    idx = class_index(res)
    report.columns = ["class", "matches_family", "derived_invariants", "multiplicity"]
    for k, (fg, info) in enumerate(zip(res.classes, idx["classes"])):
        report.rows.append({"class": k, "matches_family": info["matches_family"] or "none",
                            "derived_invariants": _fmt(info["derived_invariants"]),
                            "multiplicity": fg.multiplicity})
        g, (a, b) = fg.table, fg.pair
        factorises = (g.order == n * n and g.element_order(a) == n == g.element_order(b)
                      and set(g.cyclic(a)) & set(g.cyclic(b)) == {g.identity})
        report.checks.truth("|G| = n^2 and pair factorises G", factorises, f"class {k}")
    if swap and n in SEARCH_EXPECTED and not res.heuristic:
        report.checks.equal(f"classes = {SEARCH_EXPECTED[n]}", SEARCH_EXPECTED[n], len(res.classes))
    if args.emit_dir:
        try:
            export_classes(res, args.emit_dir)
        except OSError as exc:
            raise OSError(f"cannot write classes to {args.emit_dir}: {exc.strerror or exc}") from None
        report.notes.append(f"wrote {len(res.classes)} group files and index.json")


def cmd_present(args, report: Report):
    if (args.file is None) == (args.spec is None):
        raise UsageError("give exactly one of a presentation FILE or --spec")
    if args.file is not None:
        try:
            pres = parse_presentation(_read(args.file))
        except PresentationSyntaxError as exc:
            raise UsageError(f"{args.file}: {exc}") from None
        report.parameters["file"] = Path(args.file).name
    else:
        try:
            pres = make_presentation(parse_spec(args.spec))
        except (ValueError, IsoclassError) as exc:
            raise UsageError(str(exc)) from None
        report.parameters["spec"] = args.spec
    cap = args.cap if args.cap is not None else default_cap()
    report.parameters.update(strategy=args.strategy, cap=cap)
    tab = todd_coxeter(pres, cap=cap, strategy=args.strategy)
    report.notes.append(format_presentation(pres))
    report.columns = ["generators", "relators", "status", "cosets"]
    report.rows.append({"generators": len(pres.generators), "relators": len(pres.relators),
                        "status": tab.status, "cosets": tab.count})
    report.checks.equal("enumeration complete", "complete", tab.status)
    if args.expect_order is not None:
        report.checks.equal(f"order = {args.expect_order}", args.expect_order, tab.count)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from None


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document instead of a table")
    common.add_argument("--threads", type=int, default=1, help="worker threads (output is independent of this)")
    common.add_argument("--timing", action="store_true", help="report elapsed wall-clock time")

    p = argparse.ArgumentParser(prog="isoclass", description="Isobicyclic 2-groups and regular embeddings of K_{n,n}.")
    p.add_argument("--version", action="version", version=f"isoclass {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--e", required=True, help="exponent e or range E1-E2 (n = 2^e)")
    v.add_argument("--suite", action="append", help=f"suite to run, repeatable: {', '.join(SUITES)}")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", parents=[common], help="classify a triple from a group table file")
    c.add_argument("group_file")
    c.add_argument("--a", type=int, required=True, help="element index of a")
    c.add_argument("--b", type=int, required=True, help="element index of b")
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("maps", parents=[common], help="enumerate regular embeddings of K_{n,n}")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--family", choices=FAMILY_FILTERS, default="all")
    m.add_argument("--emit-dir", help="write one map file per class here")
    m.set_defaults(func=cmd_maps)

    s = sub.add_parser("search", parents=[common], help="exact factorisation search C_n C_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--allow-no-swap", action="store_true", help="keep groups without the swap automorphism")
    s.add_argument("--expensive", action="store_true", help="permit n = 8")
    s.add_argument("--heuristic", action="store_true", help="prune with the b^2-preserving restriction")
    s.add_argument("--emit-dir", help="write group tables and index.json here")
    s.set_defaults(func=cmd_search)

    pr = sub.add_parser("present", parents=[common], help="parse and enumerate a presentation")
    pr.add_argument("file", nargs="?")
    pr.add_argument("--spec", help="G1(e,f), G2(e;k,l), G2-simple(2) or BJ(r,k,l)")
    pr.add_argument("--cap", type=int, default=None, help="coset cap (default from ISOCLASS_COSET_CAP or 2^18)")
    pr.add_argument("--strategy", choices=("relator", "coset"), default="relator")
    pr.add_argument("--expect-order", type=int)
    pr.set_defaults(func=cmd_present)
    return p


def echo_argv(argv: list[str]) -> list[str]:
    """Arguments as echoed in reports; flags that must not change output are dropped."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
        elif tok == "--threads":
            skip = True
        elif not (tok.startswith("--threads=") or tok == "--timing"):
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    report = Report(args.command, echo_argv(argv), {})
    start = time.perf_counter()
    try:
        args.func(args, report)
    except UsageError as exc:
        print(f"isoclass {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"isoclass {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"isoclass {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.timing:
        report.elapsed = round(time.perf_counter() - start, 3)
    if args.json:
        sys.stdout.write(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
