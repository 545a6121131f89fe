"""``cocite`` command line."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import PipelineConfig, load_config
from .errors import CociteError
from .pipeline import COMMANDS, run_pipeline

log = logging.getLogger("cocite")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cocite", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="flat key=value config file")
    p.add_argument("--citations", type=Path)
    p.add_argument("--studies", type=Path)
    p.add_argument("--publications", type=Path)
    p.add_argument("--taxonomy", type=Path)
    p.add_argument("--min-year", type=int)
    p.add_argument("--s-min-weight", type=float)
    p.add_argument("--f-min-weight", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, dest="louvain_seed")
    p.add_argument("--louvain-runs", type=int)
    p.add_argument("--jenks-classes", type=int)
    p.add_argument("--layout-iterations", type=int)
    p.add_argument("--layout-seed", type=int)
    p.add_argument("--compare-reference", action="store_true", default=None)
    p.add_argument("--out", type=Path)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: getattr(args, k) for k in (
        "citations", "studies", "publications", "taxonomy", "min_year", "s_min_weight",
        "f_min_weight", "k", "louvain_seed", "louvain_runs", "jenks_classes",
        "layout_iterations", "layout_seed", "compare_reference", "out")}
    try:
        cfg = load_config(args.config) if args.config else PipelineConfig()
        cfg = cfg.replace(**overrides)
        result = run_pipeline(cfg, args.command, use_cache=not args.no_cache)
    except CociteError as exc:
        print(f"cocite: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"cocite: I/O error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(result.files)} files to {result.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
