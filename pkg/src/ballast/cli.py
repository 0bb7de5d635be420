"""Command-line interface.

    ballast profile --config cfg.json [--out DIR] [--seed N] [--preset NAME]
    ballast score   ...
    ballast prune   ...
    ballast sweep   ...
    ballast text    ...
    ballast storage ...

Every command reads one input dataset (CSV, JSONL, or corpus), writes its
delimited/JSON reports into the output directory, and renders the matching
figures next to them unless --no-figures is given. Reruns with the same
config and seed reproduce every output byte for byte.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 empty result.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from ballast import plots
from ballast.config import PipelineConfig, load_config, with_seed
from ballast.core.dataset import Dataset
from ballast.core.io import flatten_jsonl, ingest_signals, load_csv, write_csv
from ballast.core.signals import SignalTable
from ballast.errors import ConfigError, DataError, EmptyResultError
from ballast.harness import storage_report, sweep
from ballast.pipeline import detect
from ballast.score import vote_ballast
from ballast.stats import profile_dataset
from ballast.text.corpus import Corpus, load_corpus
from ballast.text.preprocess import TokenizerConfig, load_stopwords
from ballast.text.sentences import load_embeddings, sentence_signals
from ballast.text.tfidf import tfidf
from ballast.text.topics import lda_fit

log = logging.getLogger("ballast")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_EMPTY = 4


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".9g")
    return str(v)


def _load_dataset(cfg: PipelineConfig) -> Dataset:
    if cfg.input is None:
        raise ConfigError("config is missing 'input'")
    if cfg.input_format == "csv":
        ds = load_csv(cfg.input, cfg.schema or None)
    elif cfg.input_format == "jsonl":
        ds = flatten_jsonl(cfg.input, cfg.list_policy)
    else:
        raise ConfigError(f"command needs tabular input, got format {cfg.input_format!r}")
    if cfg.target:
        ds = ds.with_target(cfg.target, cfg.target_kind)
    return ds


def _load_corpus(cfg: PipelineConfig) -> Corpus:
    if cfg.input is None:
        raise ConfigError("config is missing 'input'")
    tok = TokenizerConfig(stopwords=load_stopwords(cfg.stopword_file))
    return load_corpus(cfg.input, cfg.min_words, tok)


def _load_external(cfg: PipelineConfig) -> SignalTable | None:
    table: SignalTable | None = None
    for path in cfg.signal_files:
        loaded = ingest_signals(path)
        table = loaded if table is None else table.merged_with(loaded)
    return table


def _out_dir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_lines(path: Path, lines) -> None:
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")


def cmd_profile(cfg: PipelineConfig, threads: int = 1) -> int:
    dataset = _load_dataset(cfg)
    profiles = profile_dataset(dataset, bins=cfg.bins, threads=threads)
    out = _out_dir(cfg)
    score = cfg.detection.score
    with open(out / "profiles.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "feature",
                "kind",
                "entropy_bits",
                "norm_entropy",
                "variance",
                "sparsity",
                "mi_bits",
                "low_entropy",
                "low_variance",
                "low_mi",
                "high_sparsity",
                "candidate",
            ]
        )
        for p in profiles:
            low_h = p.norm_entropy < score.h_max
            low_var = p.variance is not None and p.variance < score.var_max
            low_mi = p.mi_bits is not None and p.mi_bits < score.mi_max
            high_sparsity = p.sparsity > 0.7
            candidate = low_h and low_var and (low_mi or p.mi_bits is None)
            writer.writerow(
                [
                    p.name,
                    p.kind,
                    _fmt(p.entropy_bits),
                    _fmt(p.norm_entropy),
                    _fmt(p.variance),
                    _fmt(p.sparsity),
                    _fmt(p.mi_bits),
                    _fmt(low_h),
                    _fmt(low_var),
                    _fmt(low_mi),
                    _fmt(high_sparsity),
                    _fmt(candidate),
                ]
            )
    written = [str(out / "profiles.csv")]
    if cfg.figures:
        written.append(plots.plot_entropy_histogram(profiles, score.h_max, out / "entropy_hist.png"))
        if all(p.mi_bits is not None for p in profiles):
            written.append(plots.plot_mi_bars(profiles, score.mi_max, out / "mi_bars.png"))
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


def _run_detection(cfg: PipelineConfig):
    dataset = _load_dataset(cfg)
    detection = detect(dataset, cfg.detection, _load_external(cfg))
    return dataset, detection


def _emit_report(cfg: PipelineConfig, detection, out: Path) -> list[str]:
    (out / "report.json").write_text(detection.report.to_json() + "\n", encoding="utf-8")
    _write_lines(out / "kept.txt", detection.report.kept)
    _write_lines(out / "dropped.txt", detection.report.dropped)
    written = [str(out / "report.json"), str(out / "kept.txt"), str(out / "dropped.txt")]
    if cfg.figures:
        tau = cfg.detection.score.tau
        written.append(
            plots.plot_score_scatter(detection.signal_table, detection.scores, tau, out / "score_scatter.png")
        )
        written.append(plots.plot_score_distribution(detection.scores, tau, out / "score_box.png"))
    return written


def cmd_score(cfg: PipelineConfig) -> int:
    _, detection = _run_detection(cfg)
    out = _out_dir(cfg)
    for path in _emit_report(cfg, detection, out):
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_prune(cfg: PipelineConfig) -> int:
    dataset, detection = _run_detection(cfg)
    kept = detection.report.kept
    if not kept:
        raise EmptyResultError("detection dropped every feature; raise tau or relax thresholds")
    reduced = dataset.select(kept)
    out = _out_dir(cfg)
    write_csv(reduced, out / "reduced.csv")
    written = [str(out / "reduced.csv")]
    written += _emit_report(cfg, detection, out)
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_sweep(cfg: PipelineConfig) -> int:
    dataset, detection = _run_detection(cfg)
    if dataset.target is None:
        raise ConfigError("sweep needs a target column")
    curve = sweep(
        dataset,
        cfg.detection.score,
        cfg.taus,
        detection.scores,
        split_seed=cfg.split.seed,
        split_frac=cfg.split.frac,
    )
    out = _out_dir(cfg)
    curve.to_csv(out / "tradeoff.csv", include_timings=cfg.timings)
    written = [str(out / "tradeoff.csv")]
    if cfg.figures:
        written.append(plots.plot_tradeoff(curve, dataset.n_features, out / "tradeoff.png"))
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_text(cfg: PipelineConfig) -> int:
    corpus = _load_corpus(cfg)
    tcfg = cfg.text
    model = tfidf(corpus, vocab_size=tcfg.vocab_size, mode="sentences")
    topic_model = None
    if tcfg.use_topics and corpus.vocab_size >= tcfg.topics:
        topic_model = lda_fit(corpus, tcfg.topics, iterations=tcfg.iterations, seed=cfg.seed)
    embeddings = load_embeddings(cfg.embedding_file) if cfg.embedding_file else None
    signals = sentence_signals(
        corpus,
        tfidf_model=model,
        topic_model=topic_model,
        embeddings=embeddings,
        thresholds=tcfg.thresholds,
    )
    quorum = cfg.detection.score.quorum
    removed = vote_ballast(signals.flags, quorum)

    out = _out_dir(cfg)
    signals.write_csv(out / "sentences.csv")

    kept_texts: dict[str, list[str]] = {d.id: [] for d in corpus.docs}
    pos = 0
    for d in corpus.docs:
        for i in range(len(d.sentences)):
            if not removed[pos]:
                kept_texts[d.id].append(d.texts[i])
            pos += 1
    with open(out / "filtered.jsonl", "w", encoding="utf-8") as fh:
        for d in corpus.docs:
            fh.write(json.dumps({"id": d.id, "text": " ".join(kept_texts[d.id])}, sort_keys=True))
            fh.write("\n")

    n = signals.n_sentences
    flag_counts = signals.flags.sum(axis=0)
    summary = {
        "documents": corpus.n_docs,
        "documents_dropped_short": corpus.dropped_short,
        "sentences_total": int(n),
        "sentences_removed": int(removed.sum()),
        "reduction_ratio": float(removed.sum() / n),
        "quorum": quorum,
        "flags": {
            "low_tfidf": int(flag_counts[0]),
            "low_entropy": int(flag_counts[1]),
            "redundant": int(flag_counts[2]),
            "off_topic": int(flag_counts[3]),
        },
        "thresholds": {
            "tfidf_decile": tcfg.thresholds.tfidf_decile,
            "entropy_max": tcfg.thresholds.entropy_max,
            "cosine_min": tcfg.thresholds.cosine_min,
            "js_decile": tcfg.thresholds.js_decile,
        },
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", "utf-8")
    written = [str(out / "sentences.csv"), str(out / "filtered.jsonl"), str(out / "summary.json")]
    if cfg.figures:
        written.append(plots.plot_sentence_signals(signals, out / "sentence_signals.png"))
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_storage(cfg: PipelineConfig) -> int:
    dataset = _load_dataset(cfg)
    report = storage_report(dataset)
    out = _out_dir(cfg)
    payload = {
        "dense_bytes": report.bytes.dense_bytes,
        "csr_bytes": report.bytes.csr_bytes,
        "savings_percent": report.bytes.savings_percent,
        "n_rows": report.n_rows,
        "n_numeric_features": report.n_numeric_features,
        "negative_savings": report.negative_savings,
    }
    (out / "storage.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")
    with open(out / "column_sparsity.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "sparsity"])
        for name, value in report.column_sparsity.items():
            writer.writerow([name, _fmt(value)])
    written = [str(out / "storage.json"), str(out / "column_sparsity.csv")]
    if cfg.figures:
        written.append(plots.plot_storage(report, out / "storage.png"))
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


COMMANDS = {
    "profile": cmd_profile,
    "score": cmd_score,
    "prune": cmd_prune,
    "sweep": cmd_sweep,
    "text": cmd_text,
    "storage": cmd_storage,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballast",
        description="Detect and prune low-utility, redundant data from tabular and text datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="seed for sampling/splits (overrides config)")
        p.add_argument("--threads", type=int, default=1, help="worker cap for per-feature stages")
        p.add_argument("--preset", help="modality preset: structured | semi | unstructured | sparse")
        p.add_argument("--input", help="input path (overrides config)")
        p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
        if name == "sweep":
            p.add_argument("--timings", action="store_true", help="include wall-clock train seconds")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides: dict = {}
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.input is not None:
        overrides["input"] = args.input
    if args.no_figures:
        overrides["figures"] = False
    if getattr(args, "timings", False):
        overrides["timings"] = True
    cfg = load_config(args.config, args.preset, overrides)
    if args.seed is not None:
        cfg = with_seed(cfg, args.seed)
    if args.command == "profile":
        return cmd_profile(cfg, threads=max(1, args.threads))
    return COMMANDS[args.command](cfg)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        return run(argv)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except EmptyResultError as exc:
        log.error("empty result: %s", exc)
        return EXIT_EMPTY
    except DataError as exc:
        log.error("data error: %s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
