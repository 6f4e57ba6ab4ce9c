"""
Run Configuration
Environment-backed settings for the command line and the search engine.
"""

import os
import re
from dataclasses import dataclass, fields, replace
from typing import Optional, Tuple

from dotenv import load_dotenv

from src.utils.errors import ConfigurationError

# Load environment
load_dotenv()


OUTPUT_FORMATS = ("text", "json", "csv", "dot")
GENERATOR_KINDS = ("adjacent", "cyclic")
BFS_MODES = ("sort", "diameter", "distribution")

# Desk-scale defaults; --allow-large lifts them to the engine hard caps.
DEFAULT_CAPS = {"sort": 11, "diameter": 9, "distribution": 11}
LARGE_CAPS = {"sort": 14, "diameter": 10, "distribution": 14}
EXPORT_CAP = 7

_SIZE_PATTERN = re.compile(r"^\s*(\d+)\s*([KMGT]?)(i?B)?\s*$", re.IGNORECASE)
_SIZE_FACTORS = {"": 1, "K": 1 << 10, "M": 1 << 20, "G": 1 << 30, "T": 1 << 40}


def parse_byte_size(text: str) -> int:
    """
    Parse a memory size such as '2G', '512M' or '1048576'.

    Suffixes are binary (K = 1024).
    """
    match = _SIZE_PATTERN.match(str(text))
    if not match:
        raise ConfigurationError(f"Invalid memory size: {text!r}")
    number, suffix, _ = match.groups()
    return int(number) * _SIZE_FACTORS[suffix.upper()]


def _env_int(key: str, default: int) -> int:
    raw = os.getenv(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{key} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class RunConfig:
    """
    Settings for one command line invocation.

    Every field has an environment-backed default (see .env.example);
    command line flags override them through from_env(**overrides).
    """

    command: str = "stats"
    n: Optional[int] = None
    n_range: Optional[Tuple[int, int]] = None
    generator_kind: str = "adjacent"
    workers: int = 1
    memory_cap_bytes: int = 2 << 30
    output_format: str = "text"
    output_path: Optional[str] = None
    seed: int = 0
    allow_large: bool = False
    mode: str = "sort"
    chunk_size: int = 1 << 16
    verbose: bool = False

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        """Build a configuration from the environment, then apply overrides."""
        config = cls(
            workers=_env_int("CYCSORT_WORKERS", os.cpu_count() or 1),
            memory_cap_bytes=parse_byte_size(os.getenv("CYCSORT_MEMORY_CAP", "2G")),
            seed=_env_int("CYCSORT_SEED", 0),
            output_format=os.getenv("CYCSORT_FORMAT", "text").strip().lower(),
            chunk_size=_env_int("CYCSORT_CHUNK_SIZE", 1 << 16),
        )
        known = {f.name for f in fields(cls)}
        updates = {k: v for k, v in overrides.items() if k in known and v is not None}
        config = replace(config, **updates)
        config.validate()
        return config

    def validate(self) -> None:
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.chunk_size < 1:
            raise ConfigurationError(f"chunk size must be >= 1, got {self.chunk_size}")
        if self.memory_cap_bytes <= 0:
            raise ConfigurationError("memory cap must be positive")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(
                f"Unknown output format '{self.output_format}'. "
                f"Available: {', '.join(OUTPUT_FORMATS)}"
            )
        if self.generator_kind not in GENERATOR_KINDS:
            raise ConfigurationError(
                f"Unknown generator set '{self.generator_kind}'. "
                f"Available: {', '.join(GENERATOR_KINDS)}"
            )
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")
        if self.n_range is not None and self.n_range[0] > self.n_range[1]:
            raise ConfigurationError(f"empty range {self.n_range[0]}..{self.n_range[1]}")

    def size_cap(self, mode: str) -> int:
        """Largest n accepted for a BFS mode under the current --allow-large setting."""
        caps = LARGE_CAPS if self.allow_large else DEFAULT_CAPS
        return caps[mode]
