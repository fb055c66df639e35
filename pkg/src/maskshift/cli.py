"""Command-line entry point.

Exit status: 0 success, 1 usage or configuration problem (including a
missing upstream artifact), 2 bad input data, 3 internal error.
"""
from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import sys
import time

from . import __version__
from .config import ConfigError, load_config
from .pipeline import RUNNERS, STAGES

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

logger = logging.getLogger("maskshift")

HELP = {
    "filter": "keep on-topic English tweets from personal accounts",
    "score": "score sentiment of filtered tweets",
    "demo": "attribute demographic labels to authors",
    "topics": "fit LDA topics and write the topic report",
    "series": "build daily sentiment series per demographic filter",
    "detect": "find change points and match them to events",
    "report": "write figure data, summary and PNG figures",
    "run": "run every stage in order",
}


def _global_flags(parser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=argparse.SUPPRESS if suppress else "maskshift.ini",
                        help="INI configuration file (default: ./maskshift.ini)")
    parser.add_argument("--out", default=default, help="output directory (overrides [run] out)")
    parser.add_argument("--seed", type=int, default=default, help="seed (overrides [run] seed)")
    parser.add_argument("--verbose", "-v", action="count",
                        default=argparse.SUPPRESS if suppress else 0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maskshift", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name in (*STAGES, "run"):
        p = sub.add_parser(name, help=HELP[name])
        _global_flags(p, suppress=True)
    return ap


def _manifest_path(cfg):
    return cfg.out / "manifest.json"


def _update_manifest(cfg, stage, counts, seconds):
    path = _manifest_path(cfg)
    manifest = {}
    if path.is_file():
        try:
            manifest = json.loads(path.read_text(encoding="utf-8"))
        except ValueError:
            manifest = {}
    if manifest.get("config_hash") != cfg.digest():
        manifest = {}
    manifest.update({"schema_version": 1, "tool": "maskshift", "version": __version__,
                     "config_hash": cfg.digest(), "seed": cfg.seed})
    stages = manifest.setdefault("stages", {})
    stages[stage] = {**counts, "seconds": round(seconds, 3),
                     "finished_at": dt.datetime.now(dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")}
    manifest["stages"] = {k: stages[k] for k in STAGES if k in stages}
    cfg.out.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_stage(cfg, stage) -> dict:
    logger.info("stage %s: start", stage)
    t0 = time.perf_counter()
    counts = RUNNERS[stage](cfg)
    seconds = time.perf_counter() - t0
    _update_manifest(cfg, stage, counts, seconds)
    logger.info("stage %s: done in %.2fs %s", stage, seconds, counts.get("outputs"))
    return counts


def _is_data_error(exc) -> bool:
    return isinstance(exc, (ValueError, OSError, UnicodeDecodeError, KeyError))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else
                        logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config, out=args.out, seed=args.seed)
        stages = STAGES if args.command == "run" else (args.command,)
        for stage in stages:
            run_stage(cfg, stage)
    except ConfigError as exc:
        print(f"maskshift: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:    # noqa: BLE001 - mapped to exit codes below
        if _is_data_error(exc):
            print(f"maskshift: data error: {exc}", file=sys.stderr)
            return EXIT_DATA
        logger.debug("internal error", exc_info=True)
        print(f"maskshift: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
