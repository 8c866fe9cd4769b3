"""Run configuration: caps, seed and output format."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

FORMATS = ("json", "csv", "text")
HARD_DEPTH_CAP = 24


@dataclass(frozen=True)
class RunConfig:
    depth_cap: int = 16
    iteration_cap: int = 10_000_000
    piece_cap: int = 10_000
    oracle_cap: int = 10_000_000
    seed: int = 0
    output_format: str = "json"

    def __post_init__(self):
        for name in ("depth_cap", "iteration_cap", "piece_cap", "oracle_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.depth_cap > HARD_DEPTH_CAP:
            raise ValueError(f"depth_cap above the hard limit {HARD_DEPTH_CAP}")
        if not -(2**63) <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.output_format not in FORMATS:
            raise ValueError(f"output_format must be one of {', '.join(FORMATS)}")

    def updated(self, **overrides) -> RunConfig:
        """Copy with the non-``None`` overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @classmethod
    def parse(cls, text: str) -> RunConfig:
        """Plain ``key = value`` lines; ``#`` starts a comment."""
        types = {f.name: f.type for f in fields(cls)}
        values: dict = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            if not sep or key not in types:
                raise ValueError(f"config line {lineno}: expected one of {sorted(types)} = value")
            values[key] = value if key == "output_format" else int(value)
        return cls(**values)

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        return cls.parse(Path(path).read_text())
