"""Emit the blow-up figure data set through the CLI entry point.

Writes figure1.csv (columns curve, t, fiber, tanh_fiber, family) and a
summary JSON into ./out_figure1.  The tanh column compresses the infinite
fiber into (-1, 1) for plotting; raw fiber values are kept alongside.
"""

import json
from pathlib import Path

from pathlift.cli import main

out = Path("out_figure1")
code = main(["figure1", "--out", str(out)])
print(f"exit code: {code}")

summary = json.loads((out / "figure1.json").read_text(encoding="utf-8"))
print(f"measured completion threshold: {summary['v_star']:.6f}")
print(f"closed-form target:            {summary['v_star_target']:.6f}")
print(f"bracket: [{summary['bracket_low']:.4f}, {summary['bracket_high']:.4f}]")
print(f"curve families: {summary['families']}")
print()
print(f"wrote {out / 'figure1.csv'} ({sum(1 for _ in open(out / 'figure1.csv'))} lines)")
print("plot tanh_fiber against t, one line per curve id, to see the three")
print("families: lifts that cross, lifts that leave through the top, and")
print("curves that never touch the far fiber.")
