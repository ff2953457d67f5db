#!/usr/bin/env python3
"""Reproduce the benchmark rate table at full scale.

Equivalent to `dachmm experiment` with the reference settings; expect
roughly half an hour on one core.  Use --trials/--N to scale down.
"""

import sys

from dachmm.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:]
    defaults = ["experiment", "--trials", "100", "--seed", "0",
                "--out", "trials.csv", "--summary-out", "summary.csv", "--verbose"]
    sys.exit(main(defaults + argv))
