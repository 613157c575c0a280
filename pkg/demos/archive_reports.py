"""Regenerate the report-mode archive under reports/.

Everything here goes through the command-line tool with --mode report and
--no-timing, so a rerun reproduces the files byte for byte (except that
classification at p=29 takes a few minutes).

    python demos/archive_reports.py [--quick]

--quick stops classification at p=23.
"""

import os
import sys
from pathlib import Path

from redeilab.cli import main
from redeilab.field import is_prime

ROOT = Path(__file__).resolve().parent.parent / "reports"
QUICK = "--quick" in sys.argv[1:]


def run(name, *argv):
    out = Path("reports", name)
    code = main([*argv, "--mode", "report", "--no-timing", "--out", str(out)])
    print(f"{name:40s} exit {code}")
    assert code == 0


def next_prime(n):
    while not is_prime(n):
        n += 1
    return n


(ROOT / "inputs").mkdir(parents=True, exist_ok=True)
os.chdir(ROOT.parent)  # recorded input paths stay relative

# classification: every orbit of degree (p-1)/2 with range sum p
for p in [q for q in range(3, 30) if is_prime(q)]:
    if QUICK and p > 23:
        break
    strategy = "naive" if p <= 7 else "rootsets"
    run(f"classify_p{p:02d}.json", "classify", "--p", str(p), "--strategy", strategy)

# concentration of shift sums: residues, an interval and random half-subsets
scan_primes = [101, 1009, 10007, next_prime(50000), 99991]
for p in scan_primes:
    run(f"scan_qr_p{p}.json", "charsum", "scan", "--p", str(p), "--subset", "qr")
    interval = Path("reports", "inputs", f"interval_{p}.txt")
    interval.write_text(",".join(str(i) for i in range(1, (p + 1) // 2)) + "\n")
    run(f"scan_interval_p{p}.json", "charsum", "scan", "--p", str(p), "--subset", f"file:{interval}")
    run(f"scan_random_p{p}.json", "charsum", "scan", "--p", str(p), "--subset", "random:20",
        "--seed", str(p))
