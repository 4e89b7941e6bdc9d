"""Command-line interface: ``spanrank <subcommand> ...``.

Every subcommand reads files and writes files; identical inputs give
byte-identical outputs.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from .arabic_text import StemmerConfig, StopwordList
from .ensemble import read_run, run_to_json, truncate, vote
from .metrics import EvaluationReport, evaluate
from .parallel import pmap
from .postprocess import STAGES, PipelineConfig, parse_stages, run_pipeline
from .qrcd_io import index_by_id, load_dataset, write_dataset
from .report import render_svg, render_text
from .span_decoder import DEFAULT_MAX_ANSWER_TOKENS, DEFAULT_TOP_K, decode_topk, read_dumps, write_dumps
from .synth import SynthConfig, synth_dataset, synth_expert
from .validation import check_dumps, check_run

logger = logging.getLogger("spanrank")


def _write(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _dataset(args):
    return load_dataset(args.dataset, strict=not args.lenient)


def _decode_file(samples, dumps_path, top_k, max_answer_tokens) -> str:
    passages = {s.pq_id: s.passage for s in samples}
    dumps = check_dumps(read_dumps(dumps_path), passages)
    decoded = pmap(lambda d: decode_topk(d, passages[d.pq_id], top_k, max_answer_tokens), dumps)
    return run_to_json({d.pq_id: c for d, c in zip(dumps, decoded)})


def _vote_files(run_paths, passages, top_n=None) -> str:
    merged = vote([read_run(p, passages) for p in run_paths])
    if top_n is not None:
        merged = truncate(merged, top_n)
    return run_to_json(merged)


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        stage_order=parse_stages(args.stages),
        final_top_n=args.top_n,
        remove_uninformative=not args.keep_uninformative,
        stopwords=StopwordList.from_file(args.stopwords) if args.stopwords else StopwordList.default(),
        stemmer=StemmerConfig.from_json(args.stemmer_config) if args.stemmer_config else StemmerConfig(),
    )


def _postprocess_file(samples, run_path, cfg: PipelineConfig) -> str:
    by_id = index_by_id(samples)
    passages = {k: s.passage for k, s in by_id.items()}
    run = check_run(read_run(run_path, passages), passages)
    ids = sorted(run)
    processed = pmap(lambda i: run_pipeline(run[i], by_id[i], cfg), ids)
    return run_to_json(dict(zip(ids, processed)))


def _evaluate_file(samples, run_path, unify=True) -> EvaluationReport:
    run = read_run(run_path, {s.pq_id: s.passage for s in samples})
    return evaluate(run, samples, unify=unify)


def cmd_decode(args) -> int:
    samples = _dataset(args)
    _write(args.out, _decode_file(samples, args.dumps[0], args.top_k, args.max_answer_tokens))
    return 0


def cmd_vote(args) -> int:
    passages = {s.pq_id: s.passage for s in _dataset(args)} if args.dataset else None
    _write(args.out, _vote_files(args.runs, passages, args.top_n))
    return 0


def cmd_postprocess(args) -> int:
    samples = _dataset(args)
    _write(args.out, _postprocess_file(samples, args.runs[0], _pipeline_config(args)))
    return 0


def cmd_evaluate(args) -> int:
    report = _evaluate_file(_dataset(args), args.runs[0], unify=not args.no_unify)
    _write(args.out, report.to_json())
    if args.tsv:
        _write(args.tsv, report.to_tsv())
    print(f"pRR={report.mean_prr:.4f} EM={report.mean_em:.4f} F1@1={report.mean_f1:.4f} n={report.n_samples}")
    return 0


def cmd_report(args) -> int:
    reports = [EvaluationReport.load(p) for p in args.reports]
    names = args.names or [Path(p).stem for p in args.reports]
    if len(names) != len(reports):
        raise ValueError("--names must give one name per report")
    text = render_text(reports, names)
    sys.stdout.write(text)
    if args.out:
        _write(args.out, render_svg(reports, names))
    if args.text_out:
        _write(args.text_out, text)
    return 0


def cmd_synth(args) -> int:
    out = Path(args.out)
    if args.dataset:
        samples = _dataset(args)
    else:
        samples = synth_dataset(args.samples, seed=args.seed)
        out.mkdir(parents=True, exist_ok=True)
        write_dataset(samples, out / "dataset.jsonl")
    cfg = SynthConfig(
        seed=args.seed,
        n_experts=args.experts,
        noise_sigma=args.sigma,
        gold_boost=args.gold_boost,
        subword_fragment_rate=args.fragment_rate,
    )
    out.mkdir(parents=True, exist_ok=True)
    for e in range(cfg.n_experts):
        write_dumps(synth_expert(samples, cfg, e), out / f"expert_{e:02d}.jsonl")
    print(f"synth: {len(samples)} samples x {cfg.n_experts} experts -> {out}")
    return 0


def cmd_pipeline(args) -> int:
    samples = _dataset(args)
    out = Path(args.out)
    passages = {s.pq_id: s.passage for s in samples}
    run_paths = []
    for k, dump_path in enumerate(args.dumps):
        path = out / "runs" / f"expert_{k:02d}.json"
        _write(path, _decode_file(samples, dump_path, args.top_k, args.max_answer_tokens))
        run_paths.append(path)
    _write(out / "ensemble.json", _vote_files(run_paths, passages))
    _write(out / "post.json", _postprocess_file(samples, out / "ensemble.json", _pipeline_config(args)))
    report = _evaluate_file(samples, out / "post.json")
    _write(out / "report.json", report.to_json())
    print(f"pRR={report.mean_prr:.4f} EM={report.mean_em:.4f} F1@1={report.mean_f1:.4f} n={report.n_samples}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spanrank", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def dataset_arg(p, required=True):
        p.add_argument("--dataset", required=required, help="dataset file (JSON array or .jsonl)")
        p.add_argument("--lenient", action="store_true", help="relocate or drop bad gold offsets instead of failing")

    def decode_args(p):
        p.add_argument("--top-k", type=int, default=DEFAULT_TOP_K, help="candidates kept per sample (default: %(default)s)")
        p.add_argument("--max-answer-tokens", type=int, default=DEFAULT_MAX_ANSWER_TOKENS, help="longest span in tokens (default: %(default)s)")

    def post_args(p):
        p.add_argument("--stages", default=",".join(STAGES), help="comma-separated stage order")
        p.add_argument("--keep-uninformative", action="store_true", help="skip the uninformative-answer filter")
        p.add_argument("--top-n", type=int, default=5, help="answers kept after post-processing (default: %(default)s)")
        p.add_argument("--stopwords", help="stopword file, one word per line")
        p.add_argument("--stemmer-config", help="JSON file with stemmer affix tables")

    p = sub.add_parser("decode", help="expert dump -> run file")
    dataset_arg(p)
    p.add_argument("--dumps", nargs=1, required=True, help="expert dump file (.jsonl)")
    p.add_argument("--out", required=True, help="output file")
    decode_args(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("vote", help="expert runs -> ensemble run")
    dataset_arg(p, required=False)
    p.add_argument("--runs", nargs="+", required=True, help="one run file per expert")
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--top-n", type=int, default=None, help="truncate merged lists (default: keep all)")
    p.set_defaults(func=cmd_vote)

    p = sub.add_parser("postprocess", help="run -> post-processed run")
    dataset_arg(p)
    p.add_argument("--runs", nargs=1, required=True, help="run file (JSON)")
    p.add_argument("--out", required=True, help="output file")
    post_args(p)
    p.set_defaults(func=cmd_postprocess)

    p = sub.add_parser("evaluate", help="run + dataset -> report")
    dataset_arg(p)
    p.add_argument("--runs", nargs=1, required=True, help="run file (JSON)")
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--tsv", help="also write per-sample scores as TSV")
    p.add_argument("--no-unify", action="store_true", help="compare without alef/ya unification")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="report(s) -> histogram rendering")
    p.add_argument("--reports", nargs="+", required=True, help="report JSON files to compare")
    p.add_argument("--names", nargs="+", help="legend labels, one per report")
    p.add_argument("--out", help="SVG output path")
    p.add_argument("--text-out", help="text histogram output path")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("synth", help="synthetic expert dumps")
    dataset_arg(p, required=False)
    p.add_argument("--samples", type=int, default=200, help="synthetic samples when no --dataset is given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--experts", type=int, default=1, help="number of simulated experts")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian logit noise")
    p.add_argument("--gold-boost", type=float, default=4.0, help="logit bonus on gold start/end tokens")
    p.add_argument("--fragment-rate", type=float, default=0.1, help="chance a word is split into sub-word tokens")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pipeline", help="decode -> vote -> postprocess -> evaluate")
    dataset_arg(p)
    p.add_argument("--dumps", nargs="+", required=True, help="one dump file per expert")
    p.add_argument("--out", required=True, help="output directory")
    decode_args(p)
    post_args(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"spanrank {args.command}: error: {exc}", file=sys.stderr)
        return 1


run = main

if __name__ == "__main__":
    raise SystemExit(main())
