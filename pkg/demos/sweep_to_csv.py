"""
A full sweep, as the command line runs it
=========================================

``gausscorr --recipe fig1 --out fig1.csv`` is a thin wrapper around the
calls below.
"""

import sys

from gausscorr.analysis import run_sweep
from gausscorr.cli import RECIPES, format_rows, report_summary

spec = RECIPES["fig1"]
result = run_sweep(spec)
text = format_rows(result, "csv", precision=12)

print(text.splitlines()[0])
print(text.splitlines()[1])
print(f"... {len(result.rows)} rows in {result.metadata['elapsed']:.2f} s")
sys.stdout.write(report_summary(result))
