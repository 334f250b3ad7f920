"""Flat ``key = value`` configuration files.

One assignment per line, ``#`` starts a comment line, keys are
case-sensitive and may contain dots (``source.mkb.base_id``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


class ConfigError(ValueError):
    pass


def parse_flat(text: str, source: str = "<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        out[key] = value
    return out


def read_flat(path: str | Path) -> dict[str, str]:
    path = Path(path)
    return parse_flat(path.read_text(encoding="utf-8"), source=str(path))


def _ratio(value: str, key: str) -> float:
    r = float(value)
    if not 0.0 < r < 1.0:
        raise ConfigError(f"{key} must lie in (0, 1), got {value}")
    return r


@dataclass
class PipelineConfig:
    manifest: Path | None = None
    rules: Path | None = None
    word_splits: Path | None = None
    train_ratio_lm: float = 0.9
    train_ratio_sum: float = 0.99
    seed: int = 42
    out: Path = Path("out")
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        values = read_flat(path)
        base = path.parent

        def as_path(key):
            v = values.pop(key, None)
            if not v:
                return None
            p = Path(v)
            return p if p.is_absolute() else base / p

        cfg = cls(
            manifest=as_path("manifest"),
            rules=as_path("rules"),
            word_splits=as_path("word_splits"),
        )
        if "train_ratio_lm" in values:
            cfg.train_ratio_lm = _ratio(values.pop("train_ratio_lm"), "train_ratio_lm")
        if "train_ratio_sum" in values:
            cfg.train_ratio_sum = _ratio(values.pop("train_ratio_sum"), "train_ratio_sum")
        if "seed" in values:
            cfg.seed = int(values.pop("seed"))
        out = as_path("out")
        if out is not None:
            cfg.out = out
        cfg.extra = values
        return cfg
