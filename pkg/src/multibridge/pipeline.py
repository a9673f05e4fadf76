"""End-to-end orchestration: extract, stats, sample, preprocess, BPE, tag.

Every stage writes plain files under the configured directories, so a run
is resumable stage by stage through the CLI subcommands. With a fixed
seed the whole output tree is byte-identical across runs and platforms:
all stage outputs are sorted, counts are integers, and every random draw
goes through the pinned generator.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .bpe import BpeModel, BpeSegmenter, learn_bpe, save_bpe
from .config import PipelineConfig, validate_config
from .corpus import TrainingManifest, load_bitext, write_bitext
from .errors import MultibridgeError
from .languages import get_language
from .mining import MiningOutcome, StatsMatrix, build_pivot_index, extraction_stats, mine_pairs_detailed
from .sampling import assemble_training_set
from .scripts import normalize_unicode, to_devanagari
from .tags import tag
from .tokenizers import tokenize

logger = logging.getLogger(__name__)


class PipelineStageError(MultibridgeError):
    """A stage failed; carries the stage name plus the underlying cause."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class RunReport:
    stages: dict[str, dict]
    manifest: TrainingManifest
    stats: StatsMatrix


class _StageTimer:
    def __init__(self, stage: str):
        self.stage = stage

    def __enter__(self):
        self._t0 = time.monotonic()
        logger.info("stage %s: start", self.stage)
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self._t0
        if exc is None:
            logger.info("stage %s: done in %.2fs", self.stage, elapsed)
            return False
        logger.error("stage %s: failed after %.2fs: %s", self.stage, elapsed, exc)
        if isinstance(exc, PipelineStageError):
            return False
        raise PipelineStageError(self.stage, exc) from exc


def preprocess_line(text: str, lang: str) -> list[str]:
    """Normalize, script-unify, and tokenize one sentence."""
    language = get_language(lang)
    if language.is_indic:
        text = to_devanagari(normalize_unicode(text, lang), lang)
    else:
        text = normalize_unicode(text)
    return tokenize(text, lang)


def _preprocess_corpus(src_path: Path, out_path: Path, lang: str) -> int:
    n = 0
    with open(src_path, encoding="utf-8") as fin, \
            open(out_path, "w", encoding="utf-8", newline="\n") as fout:
        for line in fin:
            fout.write(" ".join(preprocess_line(line.rstrip("\n"), lang)) + "\n")
            n += 1
    return n


def run_pipeline(config: PipelineConfig) -> RunReport:
    """Run every stage; any failure aborts with the stage name attached."""
    stages: dict[str, dict] = {}

    with _StageTimer("validate"):
        validate_config(config)

    with _StageTimer("extract"):
        english = {}
        for lang in sorted(config.languages):
            en_path, x_path = config.raw_paths(lang)
            english[lang] = load_bitext(en_path, x_path, config.pivot, lang)
        index = build_pivot_index(english.values(), config.pivot)

        pairs = list(combinations(sorted(config.languages), 2))
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(
                lambda p: (p, mine_pairs_detailed(index, p[0], p[1], config.xprod_cap)), pairs
            ))
        mined: dict[tuple[str, str], MiningOutcome] = dict(outcomes)

        config.mined_dir.mkdir(parents=True, exist_ok=True)
        for (a, b), outcome in sorted(mined.items()):
            write_bitext(outcome.corpus, config.mined_dir / f"{a}-{b}.{a}", config.mined_dir / f"{a}-{b}.{b}")
        stages["extract"] = {
            "pivot_keys": len(index),
            "mined_pairs": {f"{a}-{b}": len(o.corpus) for (a, b), o in sorted(mined.items())},
            "raw_pairs": {f"{a}-{b}": o.raw_pair_count for (a, b), o in sorted(mined.items())},
            "capped_keys": sum(len(o.capped_keys) for o in mined.values()),
        }

    with _StageTimer("stats"):
        stats = extraction_stats(english.values(), mined, sorted(config.languages), config.pivot)
        (config.mined_dir / "stats.tsv").write_text(stats.to_tsv(), encoding="utf-8")
        stages["stats"] = {"grand_total": stats.grand_total(), "unique_pairs": stats.unique_unordered_total()}

    with _StageTimer("sample"):
        mined_corpora = {pair: outcome.corpus for pair, outcome in mined.items()}
        manifest = assemble_training_set(
            english.values(), mined_corpora, config.sampling, config.sampled_dir, config.pivot
        )
        stages["sample"] = {
            "strategy": config.sampling.strategy.name,
            "entries": len(manifest.entries),
            "total_pairs": manifest.total_pairs(),
        }

    with _StageTimer("preprocess"):
        config.preprocessed_dir.mkdir(parents=True, exist_ok=True)
        line_counts = {}
        for entry in manifest.entries:
            for side, lang in (("src", entry.direction.src), ("tgt", entry.direction.tgt)):
                in_path = config.sampled_dir / f"{entry.path}.{side}"
                out_path = config.preprocessed_dir / f"{entry.path}.{side}"
                line_counts[f"{entry.path}.{side}"] = _preprocess_corpus(in_path, out_path, lang)
        stages["preprocess"] = {"files": len(line_counts)}

    with _StageTimer("learn-bpe"):
        def training_lines():
            # Each unordered corpus family contributes once (a-b and b-a
            # mirror each other, so counting both would just double every
            # frequency and shift the vocabulary threshold).
            for entry in manifest.entries:
                if entry.direction.src > entry.direction.tgt:
                    continue
                for side in ("src", "tgt"):
                    with open(config.preprocessed_dir / f"{entry.path}.{side}", encoding="utf-8") as f:
                        yield from f

        model = learn_bpe(training_lines(), config.bpe_num_merges, config.bpe_min_frequency)
        save_bpe(model, config.preprocessed_dir / "bpe.codes", config.preprocessed_dir / "bpe.vocab")
        stages["learn-bpe"] = {"merges": len(model.merges), "vocab": len(model.vocab or ())}

    with _StageTimer("apply-bpe"):
        segmenter = BpeSegmenter(model)
        for entry in manifest.entries:
            for side in ("src", "tgt"):
                in_path = config.preprocessed_dir / f"{entry.path}.{side}"
                out_path = config.preprocessed_dir / f"{entry.path}.bpe.{side}"
                with open(in_path, encoding="utf-8") as fin, \
                        open(out_path, "w", encoding="utf-8", newline="\n") as fout:
                    for line in fin:
                        fout.write(" ".join(segmenter.segment(line.split())) + "\n")
        stages["apply-bpe"] = {"files": 2 * len(manifest.entries)}

    with _StageTimer("tag"):
        final_dir = config.preprocessed_dir / "final"
        final_dir.mkdir(parents=True, exist_ok=True)
        for entry in manifest.entries:
            direction = entry.direction
            src_in = config.preprocessed_dir / f"{entry.path}.bpe.src"
            with open(src_in, encoding="utf-8") as fin, \
                    open(final_dir / f"{entry.path}.src", "w", encoding="utf-8", newline="\n") as fout:
                for line in fin:
                    fout.write(" ".join(tag(line.split(), direction.src, direction.tgt)) + "\n")
            tgt_in = config.preprocessed_dir / f"{entry.path}.bpe.tgt"
            (final_dir / f"{entry.path}.tgt").write_bytes(tgt_in.read_bytes())
        stages["tag"] = {"directions": len(manifest.entries)}

    report = RunReport(stages, manifest, stats)
    report_path = config.preprocessed_dir / "run_report.json"
    with open(report_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump({"seed": config.seed, "stages": stages}, f, indent=2, sort_keys=True)
        f.write("\n")
    return report


def load_bpe_model_for(config: PipelineConfig) -> BpeModel:
    from .bpe import load_bpe

    return load_bpe(config.preprocessed_dir / "bpe.codes", config.preprocessed_dir / "bpe.vocab")
