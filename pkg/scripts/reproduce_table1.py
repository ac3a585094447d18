#!/usr/bin/env python3
"""Regenerate the gate-fidelity table (rectangular and optimal-parameter rows).

Full mode averages 1600 initial states per cell and takes a few minutes;
pass --quick for the 100-state version.
"""
import sys

from dqdpulse.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", "table1", "--outdir", "out/table1", *sys.argv[1:]]))
