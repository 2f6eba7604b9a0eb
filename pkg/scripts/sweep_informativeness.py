#!/usr/bin/env python3
"""Informativeness experiment on a binary market.

Sweeps the strength of bad and good news for both equilibrium selections,
solves the regulator's optimal coarsening with its diagnostic grid, and
traces surplus against the number of buyers.  Emits plot-ready CSVs.
"""

import argparse
import json
import sys
import tempfile
from pathlib import Path

from seqmarket.cli import main as cli_main


def config_doc(rho: float, c: float, n: int, s_points: int) -> dict:
    return {
        "schema_version": 1,
        "market": {
            "rho": rho,
            "c": c,
            "n": n,
            "experiment": [
                {"p_L": 0.8, "p_H": 0.2},
                {"p_L": 0.2, "p_H": 0.8},
            ],
        },
        "sweep_n": {"n_max": 60},
        "sweep_binary": {
            "dimension": "bad",
            "grid": [0.5 * k / (s_points - 1) for k in range(s_points - 1, -1, -1)],
            "selector": "most",
        },
        "design": {"emit_grid": True, "grid_points": 401},
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rho", type=float, default=0.5)
    parser.add_argument("--c", type=float, default=0.2)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--points", type=int, default=201)
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args()

    doc = config_doc(args.rho, args.c, args.n, args.points)
    with tempfile.TemporaryDirectory() as tmp:
        config = Path(tmp) / "config.json"
        out = args.out
        for selector in ("most", "least"):
            doc["sweep_binary"]["selector"] = selector
            config.write_text(json.dumps(doc), encoding="utf-8")
            sel_out = out / f"bad_news_{selector}"
            if cli_main(["sweep-binary", "--config", str(config), "--out", str(sel_out)]) != 0:
                return 1
            good = [0.5 + 0.5 * k / (args.points - 1) for k in range(args.points)]
            doc["sweep_binary"] = {"dimension": "good", "grid": good, "selector": selector}
            config.write_text(json.dumps(doc), encoding="utf-8")
            sel_out = out / f"good_news_{selector}"
            if cli_main(["sweep-binary", "--config", str(config), "--out", str(sel_out)]) != 0:
                return 1
            doc["sweep_binary"] = config_doc(args.rho, args.c, args.n, args.points)["sweep_binary"]
        config.write_text(json.dumps(doc), encoding="utf-8")
        for command in ("sweep-n", "design"):
            if cli_main([command, "--config", str(config), "--out", str(out)]) != 0:
                return 1
    print(f"wrote CSVs under {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
