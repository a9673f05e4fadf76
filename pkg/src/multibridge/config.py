"""Pipeline configuration: one JSON (or TOML, Python 3.11+) document.

Relative paths resolve against the directory containing the config file.
Validation resolves every referenced input before any stage runs.

Example::

    {
      "pivot": "en",
      "languages": ["bn", "hi", "ta"],
      "raw_dir": "raw",
      "mined_dir": "out/mined",
      "sampled_dir": "out/sampled",
      "preprocessed_dir": "out/prep",
      "sampling": {"strategy": "sample-fraction", "per_pair_target": 100000},
      "bpe": {"num_merges": 32000, "min_frequency": 5},
      "xprod_cap": 64,
      "seed": 1
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .languages import Language, REGISTRY, register
from .sampling import (
    DEFAULT_PER_PAIR_TARGET,
    SampleFraction,
    SamplePairs,
    SamplingPlan,
    TrainAll,
)


@dataclass(frozen=True)
class PipelineConfig:
    pivot: str
    languages: tuple[str, ...]
    raw_dir: Path
    mined_dir: Path
    sampled_dir: Path
    preprocessed_dir: Path
    sampling: SamplingPlan
    bpe_num_merges: int = 32000
    bpe_min_frequency: int = 5
    xprod_cap: int | None = 64
    seed: int = 1
    registry_path: Path | None = None
    eval_tokenization: str = "13a"
    workers: int = 1

    def raw_paths(self, lang: str) -> tuple[Path, Path]:
        """The English-centric corpus files for one language."""
        prefix = self.raw_dir / f"{self.pivot}-{lang}"
        return Path(f"{prefix}.{self.pivot}"), Path(f"{prefix}.{lang}")


def _parse_strategy(doc: dict, seed: int) -> SamplingPlan:
    sampling = doc.get("sampling", {"strategy": "train-all"})
    name = sampling.get("strategy")
    if name == "sample-pairs":
        raw_pairs = sampling.get("pairs")
        if not raw_pairs:
            raise ConfigError("sample-pairs needs a non-empty 'pairs' list")
        pairs = []
        for item in raw_pairs:
            parts = item.split("-") if isinstance(item, str) else list(item)
            if len(parts) != 2:
                raise ConfigError(f"malformed pair {item!r} (want 'xx-yy')")
            pairs.append((parts[0], parts[1]))
        strategy = SamplePairs(tuple(pairs))
    elif name == "sample-fraction":
        strategy = SampleFraction(int(sampling.get("per_pair_target", DEFAULT_PER_PAIR_TARGET)))
    elif name == "train-all":
        strategy = TrainAll()
    else:
        raise ConfigError(f"unknown sampling strategy {name!r}")
    return SamplingPlan(strategy, seed)


def load_config(path: str | Path) -> PipelineConfig:
    """Parse and normalize a config document (no filesystem validation yet)."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if path.suffix == ".toml":
        try:
            import tomllib
        except ImportError:
            raise ConfigError("TOML configs need Python 3.11+; use JSON instead") from None
        doc = tomllib.loads(raw.decode("utf-8"))
    else:
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc

    base = path.parent

    def resolve(key: str) -> Path:
        if key not in doc:
            raise ConfigError(f"config is missing {key!r}")
        return (base / doc[key]).resolve() if not Path(doc[key]).is_absolute() else Path(doc[key])

    seed = int(doc.get("seed", 1))
    bpe = doc.get("bpe", {})
    registry_path = (base / doc["registry"]).resolve() if "registry" in doc else None
    cap = doc.get("xprod_cap", 64)
    return PipelineConfig(
        pivot=doc.get("pivot", "en"),
        languages=tuple(doc.get("languages", ())),
        raw_dir=resolve("raw_dir"),
        mined_dir=resolve("mined_dir"),
        sampled_dir=resolve("sampled_dir"),
        preprocessed_dir=resolve("preprocessed_dir"),
        sampling=_parse_strategy(doc, seed),
        bpe_num_merges=int(bpe.get("num_merges", 32000)),
        bpe_min_frequency=int(bpe.get("min_frequency", 5)),
        xprod_cap=None if cap in (None, 0) else int(cap),
        seed=seed,
        registry_path=registry_path,
        eval_tokenization=doc.get("eval", {}).get("bleu_tokenization", "13a"),
        workers=int(doc.get("workers", 1)),
    )


def load_registry_file(path: str | Path) -> list[Language]:
    """Register extra languages from a JSON registry file."""
    with open(path, encoding="utf-8") as f:
        entries = json.load(f)
    registered = []
    for entry in entries:
        block = entry.get("block_base")
        lang = Language(
            entry["code"],
            entry.get("name", entry["code"]),
            entry.get("script", "unknown"),
            int(block, 0) if isinstance(block, str) else block,
        )
        register(lang)
        registered.append(lang)
    return registered


def validate_config(config: PipelineConfig) -> None:
    """Fail fast, before any stage runs, if inputs cannot be resolved."""
    if config.registry_path is not None:
        if not config.registry_path.exists():
            raise ConfigError(f"registry file not found: {config.registry_path}")
        load_registry_file(config.registry_path)
    if config.pivot not in REGISTRY:
        raise ConfigError(f"pivot language {config.pivot!r} is not registered")
    if len(config.languages) < 2:
        raise ConfigError("need at least two non-pivot languages")
    for code in config.languages:
        if code == config.pivot:
            raise ConfigError("the pivot cannot appear in 'languages'")
        if code not in REGISTRY:
            raise ConfigError(f"language {code!r} is not registered")
    if not config.raw_dir.is_dir():
        raise ConfigError(f"raw corpus directory not found: {config.raw_dir}")
    for code in config.languages:
        for file_path in config.raw_paths(code):
            if not file_path.is_file():
                raise ConfigError(f"missing corpus file: {file_path}")
    if config.eval_tokenization not in ("13a", "none"):
        raise ConfigError(f"unknown eval tokenization {config.eval_tokenization!r}")
    if config.workers < 1:
        raise ConfigError("workers must be >= 1")
