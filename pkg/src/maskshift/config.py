"""Pipeline configuration: an INI file with paths and per-stage parameters.

Relative paths resolve against the directory holding the config file.
Command-line flags (``--out``, ``--seed``) override the file; environment
variables are read only for hydration credentials.
"""
from __future__ import annotations

import configparser
import datetime as dt
import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path

from .changepoint import CostKind

SECTIONS = ("run", "paths", "filter", "sentiment", "demographics", "topics", "series", "detect")

PATH_KEYS = (
    "corpus", "terms", "org_scores", "annotations", "users", "timelines", "college_labels",
    "college_phrases", "name_model", "party_accounts", "political_keywords", "cities", "incomes",
    "rucc", "regions", "events", "lexicon", "emoji_lexicon", "stopwords", "custom_stopwords",
    "pos_lexicon",
)
REQUIRED_PATHS = ("corpus", "terms")


class ConfigError(Exception):
    """Bad or missing configuration; maps to exit status 1."""


def _split_list(raw: str, sep: str = ",") -> list[str]:
    return [x.strip() for x in raw.split(sep) if x.strip()]


@dataclass
class PipelineConfig:
    source: Path
    seed: int
    out: Path
    paths: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)

    # -- typed accessors -------------------------------------------------------------

    def get(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, default)

    def get_float(self, section, key, default):
        raw = self.get(section, key)
        try:
            return default if raw in (None, "") else float(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from None

    def get_int(self, section, key, default):
        raw = self.get(section, key)
        try:
            return default if raw in (None, "") else int(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer") from None

    def get_bool(self, section, key, default):
        raw = self.get(section, key)
        if raw in (None, ""):
            return default
        v = raw.strip().lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a boolean")

    def get_list(self, section, key, default=(), sep=","):
        raw = self.get(section, key)
        return list(default) if raw in (None, "") else _split_list(raw, sep)

    def get_date(self, section, key, default=None):
        raw = self.get(section, key)
        if raw in (None, ""):
            return default
        try:
            return dt.date.fromisoformat(raw.strip())
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not an ISO date") from None

    def path(self, key: str) -> Path | None:
        return self.paths.get(key)

    def require(self, key: str) -> Path:
        p = self.paths.get(key)
        if p is None:
            raise ConfigError(f"[paths] {key} is required for this command")
        return p

    # -- identity ----------------------------------------------------------------------

    def canonical(self) -> str:
        """Stable text form used for hashing; paths relative to the config file."""
        lines = [f"seed={self.seed}"]
        base = self.source.parent
        for key in sorted(self.paths):
            lines.append(f"paths.{key}={os.path.relpath(self.paths[key], base)}")
        for section in sorted(self.sections):
            for key in sorted(self.sections[section]):
                lines.append(f"{section}.{key}={self.sections[section][key]}")
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()

    def stage_seed(self, stage: str) -> int:
        """Per-stage seed: first 4 bytes of sha256("<seed>:<stage>")."""
        h = hashlib.sha256(f"{self.seed}:{stage}".encode()).digest()
        return int.from_bytes(h[:4], "big")


def load_config(path, out: str | None = None, seed: int | None = None) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=None)
    parser.optionxform = str
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    unknown = set(parser.sections()) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"{path}: unknown sections {sorted(unknown)}")
    base = path.resolve().parent

    paths = {}
    if parser.has_section("paths"):
        for key, raw in parser.items("paths"):
            if key not in PATH_KEYS:
                raise ConfigError(f"{path}: unknown path key {key!r}")
            if raw.strip():
                paths[key] = (base / raw.strip()).resolve()
    missing = [k for k in REQUIRED_PATHS if k not in paths]
    if missing:
        raise ConfigError(f"{path}: [paths] must set {', '.join(missing)}")
    absent = [f"{k} ({p})" for k, p in sorted(paths.items()) if not p.exists()]
    if absent:
        raise ConfigError("referenced files do not exist: " + "; ".join(absent))

    sections = {s: dict(parser.items(s)) for s in SECTIONS
                if s not in ("paths", "run") and parser.has_section(s)}
    run = dict(parser.items("run")) if parser.has_section("run") else {}
    if seed is None:
        if not run.get("seed", "").strip():
            raise ConfigError(f"{path}: [run] seed is required")
        try:
            seed = int(run["seed"])
        except ValueError:
            raise ConfigError(f"{path}: [run] seed must be an integer") from None
    out_dir = Path(out) if out else base / run.get("out", "out").strip()

    cfg = PipelineConfig(path.resolve(), int(seed), out_dir.resolve(), paths, sections)
    _validate(cfg)
    return cfg


def _validate(cfg: PipelineConfig) -> None:
    cost = cfg.get("detect", "cost", CostKind.MEAN_SHIFT.value)
    if cost not in {c.value for c in CostKind}:
        raise ConfigError(f"[detect] cost must be one of {[c.value for c in CostKind]}, got {cost!r}")
    cfg.get_float("detect", "beta", None)
    cfg.get_int("detect", "min_size", 1)
    cfg.get_int("detect", "window_days", 3)
    cfg.get_bool("detect", "standardize", True)
    cfg.get_date("series", "epoch")
    cfg.get_date("series", "end_date")
    thr = cfg.get_float("filter", "org_threshold", 0.5)
    if not 0.0 <= thr <= 1.0:
        raise ConfigError("[filter] org_threshold must lie in [0, 1]")
    for k in cfg.get_list("topics", "candidates", ["4"]):
        if not k.isdigit() or int(k) < 2:
            raise ConfigError(f"[topics] candidates must be integers >= 2, got {k!r}")
    if cfg.get_float("demographics", "national_median", 63179) <= 0:
        raise ConfigError("[demographics] national_median must be positive")
