#!/usr/bin/env python3
"""Regenerate every bundled reference CSV (same output as `seqmarket repro`)."""

import argparse
import sys
from pathlib import Path

from seqmarket.cli import main as cli_main

FIXTURES = ("table1", "table2", "section8", "modified-example")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args()
    for fixture in FIXTURES:
        code = cli_main(["repro", fixture, "--out", str(args.out)])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
