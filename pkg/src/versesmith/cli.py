"""Command-line entry point wiring the pipeline end to end.

Exit codes: 0 success, 2 usage error, 3 data error (unreadable corpus or
checkpoint), 4 runtime error (diverged training, exhausted retry budget).
Training defaults are the reference configuration (E=100, H=50, 2 layers,
dropout 0.2, lr 0.001, batch 16, 300 epochs) so a bare `train` reproduces
it with no flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import errors
from .analysis import analyze_line, frequency_table, load_stopwords, overlap_report
from .checkpoint import load_checkpoint, save_checkpoint
from .corpus import build_vocab, load_corpus, save_vocab, segment_lines, tokenize
from .generator import CandidateLine, GenConfig, NgramIndex, generate_set, line_id_for, render_surface
from .trainer import TrainConfig, train

log = logging.getLogger(__name__)

_DATA_ERRORS = (
    errors.MissingCorpusFile,
    errors.InvalidEncoding,
    errors.EmptyCorpus,
    errors.NoLines,
    errors.InvalidTokenId,
    errors.NotACheckpoint,
    errors.UnsupportedCheckpointVersion,
    errors.CorruptCheckpoint,
    FileNotFoundError,
)

_TRAIN_DEFAULTS = TrainConfig()
_GEN_DEFAULTS = GenConfig()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="versesmith",
                                     description="LSTM line generator and poetry studio")
    parser.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    parser.add_argument("--seed", dest="global_seed", type=int, default=None,
                        help="default seed for any subcommand that takes one")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a model on a UTF-8 prose corpus")
    p_train.add_argument("--corpus", required=True)
    p_train.add_argument("--out", required=True)
    p_train.add_argument("--epochs", type=int, default=_TRAIN_DEFAULTS.epochs)
    p_train.add_argument("--lr", type=float, default=_TRAIN_DEFAULTS.lr)
    p_train.add_argument("--batch", type=int, default=_TRAIN_DEFAULTS.batch_size)
    p_train.add_argument("--seed", type=int, default=None)
    p_train.add_argument("--embedding-dim", type=int, default=_TRAIN_DEFAULTS.embedding_dim)
    p_train.add_argument("--hidden", type=int, default=_TRAIN_DEFAULTS.hidden)
    p_train.add_argument("--dropout", type=float, default=_TRAIN_DEFAULTS.dropout)
    p_train.add_argument("--max-seq-len", type=int, default=_TRAIN_DEFAULTS.max_seq_len)
    p_train.add_argument("--min-count", type=int, default=_TRAIN_DEFAULTS.min_count)
    p_train.add_argument("--grad-clip", type=float, default=None)
    p_train.add_argument("--log", default=None, help="also append epoch records to this file")

    p_gen = sub.add_parser("generate", help="sample unique lines from a trained model")
    p_gen.add_argument("--ckpt", required=True)
    p_gen.add_argument("--corpus", default=None,
                       help="training corpus; enables the distinctness filter")
    p_gen.add_argument("--count", type=int, default=_GEN_DEFAULTS.count)
    p_gen.add_argument("--temperature", type=float, default=_GEN_DEFAULTS.temperature)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--max-overlap", type=int, default=_GEN_DEFAULTS.max_ngram_overlap)
    p_gen.add_argument("--max-tokens", type=int, default=_GEN_DEFAULTS.max_tokens)
    p_gen.add_argument("--allow-unk", action="store_true")
    p_gen.add_argument("--json", action="store_true",
                       help="one JSON record per line with log-probs and overlap")

    p_an = sub.add_parser("analyze", help="corpus statistics and device detection")
    an_sub = p_an.add_subparsers(dest="analysis", required=True)
    p_freq = an_sub.add_parser("freq", help="frequency table (stopwords removed)")
    p_freq.add_argument("--corpus", required=True)
    p_freq.add_argument("--stopwords", default=None)
    p_freq.add_argument("--top", type=int, default=50)
    p_freq.add_argument("--json", action="store_true")
    p_dev = an_sub.add_parser("devices", help="alliteration/assonance detection")
    p_dev.add_argument("--file", default=None, help="text file, one line per row (default stdin)")
    p_dev.add_argument("--json", action="store_true")
    p_ov = an_sub.add_parser("overlap", help="corpus-overlap histogram for a line set")
    p_ov.add_argument("--corpus", required=True)
    p_ov.add_argument("--lines", required=True, help="file of generated lines, one per row")
    p_ov.add_argument("--json", action="store_true")

    p_serve = sub.add_parser("serve", help="run the studio HTTP service")
    p_serve.add_argument("--ckpt", required=True)
    p_serve.add_argument("--port", type=int, default=8040)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--store", default=None, help="JSONL event-log path")
    p_serve.add_argument("--corpus", default=None,
                         help="training corpus; enables the distinctness filter")
    p_serve.add_argument("--ui-dir", default=None, help="static frontend directory to mount at /")

    p_vocab = sub.add_parser("export-vocab", help="write the vocabulary file")
    p_vocab.add_argument("--corpus", default=None)
    p_vocab.add_argument("--ckpt", default=None)
    p_vocab.add_argument("--out", required=True)
    p_vocab.add_argument("--min-count", type=int, default=_TRAIN_DEFAULTS.min_count)
    return parser


def _load_segmented(path: str):
    return segment_lines(load_corpus(path))


def _effective_seed(args, fallback: int) -> int:
    """Subcommand --seed wins, then the global --seed, then the default."""
    if args.seed is not None:
        return args.seed
    if args.global_seed is not None:
        return args.global_seed
    return fallback


def _cmd_train(args) -> int:
    config = TrainConfig(
        embedding_dim=args.embedding_dim,
        hidden=args.hidden,
        dropout=args.dropout,
        lr=args.lr,
        batch_size=args.batch,
        epochs=args.epochs,
        seed=_effective_seed(args, _TRAIN_DEFAULTS.seed),
        max_seq_len=args.max_seq_len,
        min_count=args.min_count,
        grad_clip=args.grad_clip,
    )
    print("config: " + " ".join(f"{k}={v}" for k, v in asdict(config).items()))
    corpus = _load_segmented(args.corpus)
    print(f"corpus: {corpus.source_name} lines={len(corpus.lines)} tokens={corpus.token_count}")
    log_fh = open(args.log, "a", encoding="utf-8") if args.log else None

    def progress(stats):
        record = f"{stats.epoch},{stats.mean_loss:.6f},{stats.perplexity:.6f},{stats.seconds:.3f}"
        print(record)
        if log_fh:
            log_fh.write(record + "\n")
            log_fh.flush()

    try:
        ckpt, report = train(corpus, config, progress=progress)
    finally:
        if log_fh:
            log_fh.close()
    save_checkpoint(ckpt.params, ckpt.vocab, ckpt.meta, args.out)
    print(f"saved {args.out}: V={ckpt.vocab.size} params={ckpt.params.param_count()} "
          f"final_loss={ckpt.meta.final_loss:.4f} tokens/s={report.token_throughput:.0f}")
    return 0


def _cmd_generate(args) -> int:
    ckpt = load_checkpoint(args.ckpt)
    index = None
    if args.corpus:
        index = NgramIndex.from_corpus(_load_segmented(args.corpus))
    else:
        log.warning("no --corpus given: distinctness filter disabled, overlap reported as -1")
    config = GenConfig(
        count=args.count,
        temperature=args.temperature,
        max_tokens=args.max_tokens,
        seed=_effective_seed(args, _GEN_DEFAULTS.seed),
        max_ngram_overlap=args.max_overlap,
        allow_unk=args.allow_unk,
    )
    lines = generate_set(ckpt.params, ckpt.vocab, index, config)
    for line in lines:
        if args.json:
            print(json.dumps({
                "id": line.line_id,
                "text": line.surface,
                "tokens": list(line.tokens),
                "log_probs": [round(p, 6) for p in line.log_probs],
                "overlap": line.overlap_score,
            }, ensure_ascii=False))
        else:
            print(line.surface)
    return 0


def _cmd_analyze(args) -> int:
    if args.analysis == "freq":
        corpus = _load_segmented(args.corpus)
        stopwords = load_stopwords(args.stopwords) if args.stopwords else None
        table = frequency_table(corpus, stopwords)
        entries = table.entries[: args.top]
        if args.json:
            print(json.dumps({"entries": [[t, c] for t, c in entries],
                              "stopword_count": table.stopword_count}, ensure_ascii=False))
        else:
            for token, count in entries:
                print(f"{count}\t{token}")
        return 0
    if args.analysis == "devices":
        text = Path(args.file).read_text(encoding="utf-8") if args.file else sys.stdin.read()
        for raw in text.splitlines():
            if not raw.strip():
                continue
            report = analyze_line(raw)
            if args.json:
                print(json.dumps({
                    "line": report.line,
                    "alliterations": [[k, list(p)] for k, p in report.alliterations],
                    "assonances": [[k, list(p)] for k, p in report.assonances],
                }, ensure_ascii=False))
            else:
                allit = ", ".join(f"{k}@{list(p)}" for k, p in report.alliterations) or "-"
                asso = ", ".join(f"{k}@{list(p)}" for k, p in report.assonances) or "-"
                print(f"{raw}\n  alliteration: {allit}\n  assonance:    {asso}")
        return 0
    if args.analysis == "overlap":
        index = NgramIndex.from_corpus(_load_segmented(args.corpus))
        candidates = []
        for raw in Path(args.lines).read_text(encoding="utf-8").splitlines():
            if not raw.strip():
                continue
            tokens = tuple(tokenize(raw))
            candidates.append(CandidateLine(
                tokens=tokens, surface=render_surface(tokens), log_probs=(),
                overlap_score=-1, line_id=line_id_for(raw),
            ))
        report = overlap_report(candidates, index)
        if args.json:
            print(json.dumps({"total": report.total, "mean": report.mean,
                              "histogram": [[k, c] for k, c in report.histogram]}))
        else:
            print(f"lines: {report.total} mean overlap: {report.mean:.2f}")
            for k, c in report.histogram:
                print(f"{k}\t{c}\t{c / report.total:.3f}")
        return 0
    raise errors.InvalidArgument(args.analysis)


def _cmd_serve(args) -> int:
    import uvicorn

    from .studio.api import create_app
    from .studio.service import Studio

    studio = Studio(args.ckpt, store_path=args.store, corpus_path=args.corpus)
    app = create_app(studio)
    if args.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui_dir, html=True), name="ui")
    print(f"model: V={studio.vocab.size} params={studio.params.param_count()}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_export_vocab(args) -> int:
    if (args.corpus is None) == (args.ckpt is None):
        raise errors.InvalidArgument("export-vocab needs exactly one of --corpus or --ckpt")
    if args.corpus:
        vocab = build_vocab(_load_segmented(args.corpus), min_count=args.min_count)
    else:
        vocab = load_checkpoint(args.ckpt).vocab
    save_vocab(vocab, args.out)
    print(f"wrote {args.out}: {vocab.size} tokens")
    return 0


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper())
    try:
        if args.command == "train":
            return _cmd_train(args)
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "export-vocab":
            return _cmd_export_vocab(args)
        raise errors.InvalidArgument(args.command)
    except errors.InvalidArgument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except errors.VersesmithError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
