"""Command-line interface.

Subcommands: extract, stats, sample, preprocess, learn-bpe, apply-bpe,
tag, evaluate, run. Exit codes: 0 success, 1 usage error, 2 data error.

Line-oriented subcommands (preprocess, apply-bpe, tag) read stdin and
write stdout, one sentence per line, so they compose in shell pipelines.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bpe import BpeSegmenter, learn_bpe, load_bpe, save_bpe
from .config import load_config
from .corpus import BitextCorpus, load_bitext, write_bitext
from .errors import MultibridgeError
from .languages import REGISTRY, indic_codes
from .metrics import bleu, chrf2, cosine_batch, load_embeddings
from .mining import DEFAULT_XPROD_CAP, build_pivot_index, extraction_stats, mine_pairs_detailed
from .pipeline import run_pipeline
from .sampling import (
    DEFAULT_PER_PAIR_TARGET,
    SampleFraction,
    SamplePairs,
    SamplingPlan,
    TrainAll,
    assemble_training_set,
)
from .scripts import from_devanagari, normalize_unicode, to_devanagari
from .tags import tag as tag_tokens_op
from .tags import untag
from .tokenizers import detokenize, tokenize
from .version import __version__

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors (argparse defaults to 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _parse_pair_list(text: str) -> list[tuple[str, str]]:
    pairs = []
    for item in text.split(","):
        parts = item.strip().split("-")
        if len(parts) != 2:
            raise MultibridgeError(f"malformed pair {item!r} (want xx-yy)")
        pairs.append((parts[0], parts[1]))
    return pairs


def _discover_english_corpora(inputs: Path, pivot: str) -> dict[str, BitextCorpus]:
    corpora = {}
    for en_file in sorted(inputs.glob(f"{pivot}-??.{pivot}")):
        lang = en_file.stem.split("-")[1]
        x_file = en_file.with_suffix(f".{lang}")
        if not x_file.exists():
            raise MultibridgeError(f"missing counterpart file for {en_file}")
        corpora[lang] = load_bitext(en_file, x_file, pivot, lang)
    if not corpora:
        raise MultibridgeError(f"no {pivot}-xx corpora found in {inputs}")
    return corpora


def _load_mined_corpora(mined_dir: Path) -> dict[tuple[str, str], BitextCorpus]:
    mined = {}
    for a_file in sorted(mined_dir.glob("??-??.*")):
        a, b = a_file.stem.split("-")
        if a_file.suffix != f".{a}":
            continue
        b_file = a_file.with_suffix(f".{b}")
        if b_file.exists():
            mined[(a, b)] = load_bitext(a_file, b_file, a, b)
    if not mined:
        raise MultibridgeError(f"no mined corpora found in {mined_dir}")
    return mined


def _cmd_extract(args) -> int:
    inputs = Path(args.inputs)
    corpora = _discover_english_corpora(inputs, args.pivot)
    index = build_pivot_index(corpora.values(), args.pivot)
    languages = sorted(corpora)
    if args.pairs:
        pairs = [tuple(sorted(p)) for p in _parse_pair_list(args.pairs)]
    else:
        pairs = [(a, b) for i, a in enumerate(languages) for b in languages[i + 1:]]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cap = None if args.xprod_cap == 0 else args.xprod_cap
    for a, b in pairs:
        outcome = mine_pairs_detailed(index, a, b, cap)
        write_bitext(outcome.corpus, out / f"{a}-{b}.{a}", out / f"{a}-{b}.{b}")
        logging.info("mined %s-%s: %d pairs (%d raw, %d capped keys)",
                     a, b, len(outcome.corpus), outcome.raw_pair_count, len(outcome.capped_keys))
    return 0


def _cmd_stats(args) -> int:
    corpora = _discover_english_corpora(Path(args.inputs), args.pivot)
    mined = _load_mined_corpora(Path(args.mined))
    matrix = extraction_stats(corpora.values(), mined, pivot=args.pivot)
    tsv = matrix.to_tsv()
    if args.out == "-":
        sys.stdout.write(tsv)
    else:
        Path(args.out).write_text(tsv, encoding="utf-8")
    return 0


def _cmd_sample(args) -> int:
    if args.strategy == "sample-pairs":
        if not args.pairs:
            raise MultibridgeError("--pairs is required for sample-pairs")
        strategy = SamplePairs(tuple(_parse_pair_list(args.pairs)))
    elif args.strategy == "sample-fraction":
        strategy = SampleFraction(args.per_pair)
    else:
        strategy = TrainAll()
    plan = SamplingPlan(strategy, args.seed)
    english = _discover_english_corpora(Path(args.inputs), args.pivot)
    mined = _load_mined_corpora(Path(args.mined))
    manifest = assemble_training_set(english.values(), mined, plan, args.out, args.pivot)
    logging.info("wrote %d manifest entries, %d pairs total",
                 len(manifest.entries), manifest.total_pairs())
    return 0


def _cmd_preprocess(args) -> int:
    lang = args.lang
    if lang not in REGISTRY:
        raise MultibridgeError(f"unknown language {lang!r}")
    forward = args.normalize or args.to_devanagari or args.tokenize
    reverse = args.detokenize or args.from_devanagari
    if forward and reverse:
        raise MultibridgeError("forward and reverse operations cannot be combined")
    if not forward and not reverse:
        raise MultibridgeError("nothing to do: pass --tokenize, --to-devanagari, ...")
    for line in sys.stdin:
        text = line.rstrip("\n")
        if reverse:
            if args.detokenize:
                text = detokenize(text.split(), lang)
            if args.from_devanagari:
                text = from_devanagari(text, lang, args.unmappable)
        else:
            if args.normalize:
                text = normalize_unicode(text, lang)
            if args.to_devanagari:
                text = to_devanagari(text, lang)
            if args.tokenize:
                text = " ".join(tokenize(text, lang))
        sys.stdout.write(text + "\n")
    return 0


def _cmd_learn_bpe(args) -> int:
    def lines():
        if args.input:
            for path in args.input:
                with open(path, encoding="utf-8") as f:
                    yield from f
        else:
            yield from sys.stdin

    model = learn_bpe(lines(), args.merges, args.min_freq, args.merge_floor)
    save_bpe(model, args.model, args.vocab)
    logging.info("learned %d merges, vocabulary size %d", len(model.merges), len(model.vocab or ()))
    return 0


def _cmd_apply_bpe(args) -> int:
    model = load_bpe(args.model, args.vocab)
    fin = open(args.input, encoding="utf-8") if args.input else sys.stdin
    fout = open(args.output, "w", encoding="utf-8", newline="\n") if args.output else sys.stdout
    try:
        segmenter = BpeSegmenter(model)
        for line in fin:
            fout.write(" ".join(segmenter.segment(line.split())) + "\n")
    finally:
        if args.input:
            fin.close()
        if args.output:
            fout.close()
    return 0


def _cmd_tag(args) -> int:
    for line in sys.stdin:
        if args.strip:
            _, _, tokens = untag(line.split())
            sys.stdout.write(" ".join(tokens) + "\n")
        else:
            sys.stdout.write(" ".join(tag_tokens_op(line.split(), args.src, args.tgt)) + "\n")
    return 0


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f]


def _cmd_evaluate(args) -> int:
    if args.metric == "cosine":
        if not (args.emb_a and args.emb_b):
            raise MultibridgeError("cosine needs --emb-a and --emb-b")
        table_a = load_embeddings(args.emb_a)
        score = cosine_batch(table_a, load_embeddings(args.emb_b))
        n = len(table_a.ids)
    else:
        if not (args.hyp and args.ref):
            raise MultibridgeError(f"{args.metric} needs --hyp and --ref")
        hyps = _read_lines(args.hyp)
        refs = _read_lines(args.ref)
        n = len(hyps)
        score = bleu(hyps, refs, args.tok) if args.metric == "bleu" else chrf2(hyps, refs)
    line = f"{score.metric}\t{score.value:.1f}\t{score.signature}\t{n}"
    print(line)
    if args.json:
        doc = {"metric": score.metric, "value": score.value, "signature": score.signature, "n_sentences": n}
        Path(args.json).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.tsv:
        Path(args.tsv).write_text("metric\tvalue\tsignature\tn\n" + line + "\n", encoding="utf-8")
    return 0


def _cmd_run(args) -> int:
    config = load_config(args.config)
    report = run_pipeline(config)
    logging.info("pipeline complete: %d manifest entries, %d mined pairs",
                 len(report.manifest.entries), report.stats.unique_unordered_total())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multibridge", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="mine X-Y corpora from English-centric bitext")
    p.add_argument("--pivot", default="en")
    p.add_argument("--inputs", required=True, help="directory of <pivot>-xx.<pivot>/<xx> files")
    p.add_argument("--out", required=True)
    p.add_argument("--pairs", help="comma-separated subset, e.g. bn-hi,gu-ta")
    p.add_argument("--xprod-cap", type=int, default=DEFAULT_XPROD_CAP,
                   help="per-key cross product cap, 0 disables (default %(default)s)")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("stats", help="emit the pair-count statistics table")
    p.add_argument("--pivot", default="en")
    p.add_argument("--inputs", required=True)
    p.add_argument("--mined", required=True)
    p.add_argument("--out", default="-", help="TSV output path, - for stdout")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("sample", help="assemble a training set")
    p.add_argument("--strategy", required=True, choices=["sample-pairs", "sample-fraction", "train-all"])
    p.add_argument("--pairs", help="pairs for sample-pairs, e.g. bn-hi,gu-ta")
    p.add_argument("--per-pair", type=int, default=DEFAULT_PER_PAIR_TARGET)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--pivot", default="en")
    p.add_argument("--inputs", required=True)
    p.add_argument("--mined", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("preprocess", help="normalize/transliterate/tokenize stdin")
    p.add_argument("--lang", required=True, choices=sorted({"en", *indic_codes()}))
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--to-devanagari", action="store_true")
    p.add_argument("--from-devanagari", action="store_true")
    p.add_argument("--tokenize", action="store_true")
    p.add_argument("--detokenize", action="store_true")
    p.add_argument("--unmappable", choices=["error", "pass"], default="error")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("learn-bpe", help="learn BPE merges from tokenized text")
    p.add_argument("--merges", type=int, default=32000)
    p.add_argument("--min-freq", type=int, default=5)
    p.add_argument("--merge-floor", type=int, default=2)
    p.add_argument("--input", nargs="*", help="input files (default stdin)")
    p.add_argument("--model", required=True, help="codes file to write")
    p.add_argument("--vocab", help="vocabulary file to write")
    p.set_defaults(func=_cmd_learn_bpe)

    p = sub.add_parser("apply-bpe", help="segment tokenized text with a learned model")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab")
    p.add_argument("--input")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_apply_bpe)

    p = sub.add_parser("tag", help="prepend (or strip) language control tokens")
    p.add_argument("--src")
    p.add_argument("--tgt")
    p.add_argument("--strip", action="store_true", help="remove tags instead of adding them")
    p.set_defaults(func=_cmd_tag)

    p = sub.add_parser("evaluate", help="score hypotheses against references")
    p.add_argument("--metric", required=True, choices=["bleu", "chrf2", "cosine"])
    p.add_argument("--tok", choices=["13a", "none"], default="13a")
    p.add_argument("--hyp")
    p.add_argument("--ref")
    p.add_argument("--emb-a")
    p.add_argument("--emb-b")
    p.add_argument("--json", help="write the report as JSON here")
    p.add_argument("--tsv", help="write the report as TSV here")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("run", help="run the full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "tag" and not args.strip and not (args.src and args.tgt):
        parser.error("tag requires --src and --tgt (or --strip)")
    try:
        return args.func(args)
    except MultibridgeError as exc:
        print(f"multibridge: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"multibridge: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
