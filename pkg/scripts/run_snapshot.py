"""Run the full pipeline on a citation extract and print the reference comparison.

Usage: python scripts/run_snapshot.py CONFIG [OUT]

CONFIG is a key=value file naming the citations, studies and publications
files (see fixtures/synthetic/config.txt for the format).
"""
import json
import sys
from pathlib import Path

from cocite.config import load_config
from cocite.pipeline import run_pipeline


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    cfg = load_config(sys.argv[1]).replace(compare_reference=True)
    if len(sys.argv) > 2:
        cfg = cfg.replace(out=Path(sys.argv[2]))
    result = run_pipeline(cfg, "all")
    check = result.manifest["reference_check"]
    for row in check["checks"]:
        mark = "ok " if row["within"] else "OFF"
        print(f"{mark} {row['metric']:<24} observed={row['observed']!s:<14} "
              f"expected={row['expected']} +/- {row['tolerance']}")
    if check["diagnosis"]:
        print("\n" + check["diagnosis"])
    print(json.dumps({"out": str(result.out), "files": len(result.files)}))


if __name__ == "__main__":
    main()
