"""Command-line front end: ``mldlab <subcommand> ...``.

Every report starts with a header line carrying the tool name, version and
the canonical run configuration.  Worker count, output path and cache
settings are not part of the configuration, so a report is byte-identical
for any ``--jobs``.  Wall time goes to stderr.

Exit codes: 0 ok, 1 anomalies found, 2 bad input, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import TOOL_NAME, __version__
from .arith import (
    HyperquotientType,
    MonomialSupport,
    ParseError,
    QuotientType,
    parse_rational,
    render_rational,
)

EXIT_OK, EXIT_ANOMALY, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3
NON_CONFIG = {"jobs", "out", "cache", "no_cache", "func"}


class Outcome:
    def __init__(self, records: list[dict], summary: dict | None = None, anomalies: int = 0,
                 text: str | None = None):
        self.records = records
        self.summary = summary
        self.anomalies = anomalies
        self.text = text  # plain rendering for single-value commands


# ------------------------------------------------------------- commands


def cmd_mld(args) -> Outcome:
    from .toric import mld_at_origin

    q = QuotientType.parse(args.type)
    res = mld_at_origin(q)
    rec = res.as_record(q) | {"witness_vector": str(res.witness_vector)}
    return Outcome([rec], text=f"{render_rational(res.value)} (k={res.witness_k})")


def _scan_records(hits) -> list[dict]:
    return [res.as_record(cls.canonical) for cls, res in hits]


def cmd_scan3(args) -> Outcome:
    from .toric import gap_scan_dim3

    hits = gap_scan_dim3(args.r_max, args.threshold, jobs=args.jobs)
    recs = _scan_records(hits)
    top = max((res.value for _, res in hits), default=None)
    return Outcome(recs, {"classes": len(recs), "max_mld_below_1": _r(top)})


def cmd_scan5(args) -> Outcome:
    from .toric import gap_scan_dim5

    hits = gap_scan_dim5(args.r_max, args.threshold, jobs=args.jobs)
    recs = _scan_records(hits)
    top = max((res.value for _, res in hits), default=None)
    return Outcome(recs, {"classes": len(recs), "max_mld_below_2": _r(top)})


def cmd_nc_check(args) -> Outcome:
    from .lemmas import nc_lemma_check

    h = HyperquotientType.parse(args.type)
    if not 1 <= args.k0 <= h.r - 1:
        raise ParseError(f"k0 must lie in [1, {h.r - 1}]")
    v = nc_lemma_check(h, args.k0, star=not args.no_star)
    text = ("accepted" if v.accepted else "rejected") + (
        f" bound={render_rational(v.bound)} branch={v.branch}" if v.accepted else f": {v.failure_reason}")
    return Outcome([v.as_record(h)], anomalies=int(v.inconsistent), text=text)


def cmd_nc_scan(args) -> Outcome:
    from .lemmas import nc_scan_r
    from .parallel import ordered_map

    chunks = ordered_map(nc_scan_r, [(r, not args.no_star) for r in range(2, args.r_max + 1)], args.jobs)
    pairs = [hv for chunk in chunks for hv in chunk]
    accepted = [(h, v) for h, v in pairs if v.accepted]
    bad = [(h, v) for h, v in pairs if v.inconsistent]
    top = max((v.bound for _, v in accepted), default=None)
    shown = accepted if args.all else [(h, v) for h, v in accepted if v.bound == top]
    recs = [v.as_record(h) for h, v in shown + bad]
    over = top is not None and top > Fraction(18, 19)
    summary = {
        "accepted": len(accepted),
        "max_bound": _r(top),
        "attaining": sum(1 for _, v in accepted if v.bound == top),
        "inconsistencies": len(bad),
        "exceeds_18/19": over,
    }
    return Outcome(recs, summary, anomalies=len(bad) + int(over))


def cmd_terminal_check(args) -> Outcome:
    from .lemmas import NoPairing, lemma_shape_ok, terminal_lemma_hypothesis, terminal_lemma_pairing

    h = HyperquotientType.parse(args.type)
    rec = {"type": str(h), "hypothesis": terminal_lemma_hypothesis(h), "shape_ok": lemma_shape_ok(h),
           "pairing": None}
    anomalies = 0
    if rec["hypothesis"] and rec["shape_ok"]:
        try:
            rec["pairing"] = terminal_lemma_pairing(h).as_record()
        except NoPairing:
            anomalies = 1
    text = f"hypothesis={rec['hypothesis']} pairing={json.dumps(rec['pairing'])}"
    return Outcome([rec], anomalies=anomalies, text=text)


def _terminal_r(r: int):
    from .lemmas import terminal_tuples, verify_terminal_lemma

    return r, len(terminal_tuples(r)), [str(h) for h in verify_terminal_lemma(r)]


def cmd_terminal_verify(args) -> Outcome:
    from .parallel import ordered_map

    rows = ordered_map(_terminal_r, [(r,) for r in range(2, args.r_max + 1)], args.jobs)
    recs = [{"r": r, "type": t} for r, _, bad in rows for t in bad]
    summary = {"tuples": sum(n for _, n, _ in rows), "counterexamples": len(recs)}
    return Outcome(recs, summary, anomalies=len(recs))


def cmd_classify(args) -> Outcome:
    from .screen import classify_f_case

    f = MonomialSupport.parse(args.support)
    case = classify_f_case(f)
    return Outcome([{"support": str(f), "case": case}], text=case)


def cmd_screen(args) -> Outcome:
    from .screen import screen_rule1

    h = HyperquotientType.parse(args.type)
    f = MonomialSupport.parse(args.support)
    rep = screen_rule1(h, f, args.delta, args.bound)
    return Outcome([{"type": str(h), "support": str(f)} | rep.as_record()])


def cmd_exclude(args) -> Outcome:
    from .exclusion import exclude_candidate

    h = HyperquotientType.parse(args.type)
    rep = exclude_candidate(h, args.case, args.delta, args.degree_bound)
    anomalies = int(rep.status in ("survivor", "inconclusive"))
    return Outcome([rep.as_record()], anomalies=anomalies, text=rep.status)


def _compact(fam: str, rep) -> dict:
    return {
        "r": rep.type.r,
        "family": fam,
        "type": str(rep.type),
        "status": rep.status,
        "branches": [
            {"beta": b.label, "status": b.status, "witness_k": [w.k for w in b.witnesses],
             "contradiction_k": list(b.contradictions), "inconclusive_k": list(b.inconclusive)}
            for b in rep.branches
        ],
    }


def cmd_replay(args) -> Outcome:
    from .exclusion import replay_exclusions

    lo, hi = args.r
    s = replay_exclusions(lo, hi, args.delta, args.degree_bound, jobs=args.jobs)
    recs = [_compact(fam, rep) for fam, rep in s.reports]
    return Outcome(recs, dict(s.counts), anomalies=s.counts["survivors"] + s.counts["inconclusive"])


def cmd_oracle_diff(args) -> Outcome:
    from .parallel import ordered_map
    from .toric import oracle_diff_r

    chunks = ordered_map(oracle_diff_r, [(r, args.dim, args.depth) for r in range(1, args.r_max + 1)], args.jobs)
    recs = [d for chunk in chunks for d in chunk]
    return Outcome(recs, {"discrepancies": len(recs)}, anomalies=len(recs))


def _r(x) -> str | None:
    return None if x is None else render_rational(x)


# ------------------------------------------------------------- rendering


def _cell(v) -> str:
    return v if isinstance(v, str) else json.dumps(v, separators=(",", ":"))


def render(out: Outcome, header: dict, fmt: str) -> str:
    dump = lambda o: json.dumps(o, separators=(",", ":"))
    if fmt == "jsonl":
        lines = [dump(header)] + [dump(r) for r in out.records]
        if out.summary is not None:
            lines.append(dump({"summary": out.summary}))
        return "\n".join(lines) + "\n"
    if fmt == "table" and out.text is not None:
        return out.text + "\n"
    buf = io.StringIO()
    buf.write("# " + dump(header) + "\n")
    cols = list(dict.fromkeys(k for r in out.records for k in r))
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if cols:
            w.writerow(cols)
        for r in out.records:
            w.writerow([_cell(r.get(c, "")) for c in cols])
    else:
        rows = [[_cell(r.get(c, "")) for c in cols] for r in out.records]
        widths = [max([len(c)] + [len(row[i]) for row in rows]) for i, c in enumerate(cols)]
        if cols:
            buf.write("  ".join(c.ljust(n) for c, n in zip(cols, widths)).rstrip() + "\n")
        for row in rows:
            buf.write("  ".join(x.ljust(n) for x, n in zip(row, widths)).rstrip() + "\n")
    if out.summary is not None:
        buf.write("# summary " + dump(out.summary) + "\n")
    return buf.getvalue()


# --------------------------------------------------------------- parser


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _r_range(text: str) -> tuple[int, int]:
    parts = text.split("..")
    try:
        lo, hi = (int(parts[0]), int(parts[-1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from exc
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("jsonl", "csv", "table"))
    common.add_argument("--cache", type=Path, default=os.environ.get("MLDLAB_CACHE"),
                        help="result cache directory (default: $MLDLAB_CACHE)")
    common.add_argument("--no-cache", action="store_true")

    p = argparse.ArgumentParser(prog="mldlab", description="Exact mld and residue-lemma toolkit.")
    p.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add(name, func, fmt, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func, default_format=fmt)
        return sp

    sp = add("mld", cmd_mld, "table", "mld at the origin of 1/r(a_0,...,a_n)")
    sp.add_argument("type")

    for name, func, default_r in (("scan3", cmd_scan3, 100), ("scan5", cmd_scan5, 20)):
        sp = add(name, func, "jsonl", f"gap scan in dimension {name[-1]}")
        sp.add_argument("--r-max", type=_positive, default=default_r)
        sp.add_argument("--threshold", type=_rational, required=True)

    sp = add("nc-check", cmd_nc_check, "table", "check the non-canonical lemma at one k0")
    sp.add_argument("type")
    sp.add_argument("--k0", type=int, required=True)
    sp.add_argument("--no-star", action="store_true", help="do not require a star condition")

    sp = add("nc-scan", cmd_nc_scan, "jsonl", "exhaustive non-canonical lemma scan")
    sp.add_argument("--r-max", type=_positive, required=True)
    sp.add_argument("--no-star", action="store_true")
    sp.add_argument("--all", action="store_true", help="emit every accepted instance")

    sp = add("terminal-check", cmd_terminal_check, "table", "terminal lemma hypothesis and pairing")
    sp.add_argument("type")

    sp = add("terminal-verify", cmd_terminal_verify, "jsonl", "exhaustive terminal lemma check")
    sp.add_argument("--r-max", type=_positive, required=True)

    sp = add("classify", cmd_classify, "table", "normal-form case of a support")
    sp.add_argument("support")

    sp = add("screen", cmd_screen, "jsonl", "Rule I screen of (type, support)")
    sp.add_argument("type")
    sp.add_argument("support")
    sp.add_argument("--delta", type=_rational, required=True)
    sp.add_argument("--bound", type=_positive, default=2)

    sp = add("exclude", cmd_exclude, "jsonl", "exclusion replay for one candidate")
    sp.add_argument("type")
    sp.add_argument("--case", required=True, choices=("cA", "odd", "cD4", "cDn", "cE"))
    sp.add_argument("--delta", type=_rational, required=True)
    sp.add_argument("--degree-bound", type=_positive, default=12)

    sp = add("replay", cmd_replay, "jsonl", "exclusion replay over all candidate lists")
    sp.add_argument("--r", type=_r_range, required=True, metavar="LO..HI")
    sp.add_argument("--delta", type=_rational, required=True)
    sp.add_argument("--degree-bound", type=_positive, default=12)

    sp = add("oracle-diff", cmd_oracle_diff, "jsonl", "closed form vs lattice enumeration")
    sp.add_argument("--r-max", type=_positive, required=True)
    sp.add_argument("--dim", type=int, choices=(2, 3, 4, 5), required=True)
    sp.add_argument("--depth", type=_positive, required=True)
    return p


def run_config(args) -> dict:
    cfg = {"subcommand": args.subcommand}
    for k, v in sorted(vars(args).items()):
        if k in NON_CONFIG or k in ("subcommand", "default_format"):
            continue
        if isinstance(v, Fraction):
            v = render_rational(v)
        elif isinstance(v, tuple):
            v = list(v)
        cfg[k] = v
    return cfg


def cache_key(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.format = args.format or args.default_format
    cfg = run_config(args)
    header = {"tool": TOOL_NAME, "version": __version__, "config": cfg}

    cache_dir = None if args.no_cache or not args.cache else Path(args.cache)
    cached = None
    if cache_dir is not None:
        entry = cache_dir / f"{cache_key(cfg)}.json"
        try:
            if entry.exists():
                cached = json.loads(entry.read_text())
        except (OSError, ValueError):
            cached = None

    t0 = time.perf_counter()
    if cached is not None:
        text, code = cached["output"], cached["exit"]
    else:
        try:
            out = args.func(args)
        except ParseError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        text = render(out, header, args.format)
        code = EXIT_ANOMALY if out.anomalies else EXIT_OK
        if cache_dir is not None:
            try:
                cache_dir.mkdir(parents=True, exist_ok=True)
                entry.write_text(json.dumps({"output": text, "exit": code}))
            except OSError as exc:
                print(f"error: cannot write cache: {exc}", file=sys.stderr)
                return EXIT_IO

    try:
        if args.out is not None:
            args.out.write_text(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    elapsed = time.perf_counter() - t0
    print(f"[{args.subcommand}] wall {elapsed:.3f}s{' (cached)' if cached is not None else ''}",
          file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
