"""Rewrite the regression snapshots in tests/golden from the current code."""
import json
import sys
from pathlib import Path

from mldlab.arith import HyperquotientType
from mldlab.cli import main
from mldlab.screen import alternative_trace

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

CLI_RUNS = {
    "scan5_r13.jsonl": ["scan5", "--r-max", "13", "--threshold", "25/13"],
    "nc_scan_r19.jsonl": ["nc-scan", "--r-max", "19", "--all"],
    "replay_14_20.jsonl": ["replay", "--r", "14..20", "--delta", "1/19", "--degree-bound", "12"],
    "screen_7.jsonl": ["screen", "1/7(2,1,5,3;3)", "xy+z^2+zt^4", "--delta", "1/13", "--bound", "2"],
}


def trace_record(h: HyperquotientType, kind: str) -> str:
    t = alternative_trace(h, kind)
    return json.dumps({
        "type": str(h),
        "kind": kind,
        "steps": [[s.k, s.alternative, list(s.sums)] for s in t.steps],
        "global_failures": list(t.global_failures),
    }, separators=(",", ":")) + "\n"


def main_() -> int:
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in CLI_RUNS.items():
        code = main([*argv, "--no-cache", "--out", str(GOLDEN / name)])
        print(name, "exit", code, file=sys.stderr)
    (GOLDEN / "trace_4_x2.jsonl").write_text(trace_record(HyperquotientType(4, (1, 1, 3, 2), 2), "x2"))
    return 0


if __name__ == "__main__":
    sys.exit(main_())
