#!/usr/bin/env python3
"""Run the full benchmark sweep with the default configuration.

Writes fig2.csv, fig3.csv, fig4.csv, fig5.csv and report.txt into ./out
(override with a single argument). Forward extra flags through the CLI for
anything fancier, e.g. `expmodel reproduce --seed 7 --out-dir elsewhere`.
"""

import sys

from expmodel.cli import main

if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "out"
    raise SystemExit(main(["reproduce", "--out-dir", out_dir]))
