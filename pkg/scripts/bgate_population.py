#!/usr/bin/env python3
"""Population-transfer trajectory of the B gate from (|00> + |01>)/sqrt(2)."""
import sys

from dqdpulse.cli import main

if __name__ == "__main__":
    sys.exit(
        main(
            [
                "simulate", "--scheme", "bgate", "--no-decoherence", "--trajectory",
                "--grid-n", "10", "--outdir", "out/bgate", *sys.argv[1:],
            ]
        )
    )
