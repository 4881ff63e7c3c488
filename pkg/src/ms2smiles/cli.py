"""Command-line pipeline: ingest -> run -> evaluate -> report, plus mces.

Exit codes: 0 success, 1 data error, 2 usage or parse error, 3 provider
error.  Config precedence is flags > config file > defaults; the config
file is plain ``key = value`` lines with ``#`` comments.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .chem import ChemError, mol_from_smiles
from .dataset import DatasetError, load_dataset
from .evaluate import aggregate, evaluate_records, write_reports
from .gateway import (
    HttpChatProvider,
    MissingApiKey,
    MockProvider,
    ProviderConfig,
    TranscriptCache,
    run_batch,
)
from .protocol import default_template, render_prompt
from .similarity import mces

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2
EXIT_PROVIDER = 3


@dataclass
class RunConfig:
    dataset_path: str = ""
    template_path: str = ""
    run_dir: str = "runs/default"
    split: str = "test"
    k: int = 10
    mces_budget: float = 1.0
    fp_radius: int = 2
    fp_nbits: int = 2048
    provider: str = "http"
    workers: int = 0  # 0: reuse provider parallelism
    http: ProviderConfig = field(default_factory=ProviderConfig)


_CONFIG_KEYS = {
    "dataset": ("dataset_path", str),
    "template": ("template_path", str),
    "run_dir": ("run_dir", str),
    "split": ("split", str),
    "k": ("k", int),
    "mces_budget": ("mces_budget", float),
    "fp_radius": ("fp_radius", int),
    "fp_nbits": ("fp_nbits", int),
    "provider": ("provider", str),
    "workers": ("workers", int),
    "model": ("http.model_name", str),
    "endpoint": ("http.endpoint_url", str),
    "api_key_env": ("http.api_key_env", str),
    "temperature": ("http.temperature", float),
    "max_tokens": ("http.max_tokens", int),
    "request_timeout": ("http.request_timeout", float),
    "max_retries": ("http.max_retries", int),
    "parallelism": ("http.parallelism", int),
    "retry_base_delay": ("http.retry_base_delay", float),
}


def _assign(config: RunConfig, dotted: str, value) -> None:
    if dotted.startswith("http."):
        setattr(config.http, dotted[5:], value)
    else:
        setattr(config, dotted, value)


def load_config_file(path: str, config: RunConfig) -> None:
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        dotted, cast = _CONFIG_KEYS[key]
        _assign(config, dotted, cast(value))


def build_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        load_config_file(args.config, config)
    for flag, key in (
        ("dataset", "dataset"),
        ("template", "template"),
        ("run_dir", "run_dir"),
        ("split", "split"),
        ("k", "k"),
        ("mces_budget", "mces_budget"),
        ("fp_radius", "fp_radius"),
        ("fp_nbits", "fp_nbits"),
        ("provider", "provider"),
        ("workers", "workers"),
        ("model", "model"),
        ("endpoint", "endpoint"),
        ("api_key_env", "api_key_env"),
        ("temperature", "temperature"),
        ("max_tokens", "max_tokens"),
        ("parallelism", "parallelism"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            dotted, _ = _CONFIG_KEYS[key]
            _assign(config, dotted, value)
    return config


def _make_provider(config: RunConfig):
    if config.provider == "http":
        return HttpChatProvider()
    if config.provider.startswith("mock:"):
        return MockProvider(config.provider[5:])
    raise ValueError(f"unknown provider {config.provider!r} (use 'http' or 'mock:<dir>')")


def _template_text(config: RunConfig) -> str:
    if config.template_path:
        return Path(config.template_path).read_text(encoding="utf-8")
    return default_template()


def cmd_ingest(config: RunConfig) -> int:
    result = load_dataset(config.dataset_path)
    print(result.report_text())
    return EXIT_OK


def cmd_run(config: RunConfig) -> int:
    result = load_dataset(config.dataset_path, split=config.split)
    if not result.records:
        print(f"no records in split {config.split!r}", file=sys.stderr)
        return EXIT_DATA
    template = _template_text(config)
    instances = [render_prompt(record, template) for record in result.records]

    run_dir = Path(config.run_dir)
    cache = TranscriptCache(run_dir / "cache")
    provider = _make_provider(config)
    outcomes = run_batch(instances, config.http, cache, provider)

    transcripts_dir = run_dir / "transcripts"
    transcripts_dir.mkdir(parents=True, exist_ok=True)
    ok = 0
    with open(run_dir / "batch_log.tsv", "w", encoding="utf-8") as log:
        log.write("record_id\tstatus\tattempts\tcached\n")
        for outcome in outcomes:
            log.write(f"{outcome.record_id}\t{outcome.status}\t{outcome.attempts}\t{int(outcome.cached)}\n")
            if outcome.status == "ok":
                ok += 1
                (transcripts_dir / f"{outcome.record_id}.txt").write_text(
                    outcome.transcript, encoding="utf-8"
                )
    print(f"{ok}/{len(outcomes)} transcripts in {transcripts_dir}")
    return EXIT_OK


def cmd_evaluate(config: RunConfig, quiet: bool = False) -> int:
    result = load_dataset(config.dataset_path, split=config.split)
    if not result.records:
        print(f"no records in split {config.split!r}", file=sys.stderr)
        return EXIT_DATA
    transcripts_dir = Path(config.run_dir) / "transcripts"
    if not transcripts_dir.is_dir():
        print(f"missing transcripts directory {transcripts_dir}", file=sys.stderr)
        return EXIT_DATA
    transcripts = {
        record.id: (
            (transcripts_dir / f"{record.id}.txt").read_text(encoding="utf-8")
            if (transcripts_dir / f"{record.id}.txt").exists()
            else ""
        )
        for record in result.records
    }
    workers = config.workers or config.http.parallelism
    metrics, audits = evaluate_records(
        result.records,
        transcripts,
        config.k,
        mces_budget=config.mces_budget,
        fp_radius=config.fp_radius,
        fp_nbits=config.fp_nbits,
        workers=workers,
    )
    report = aggregate(metrics, audits, k=config.k)
    paths = write_reports(Path(config.run_dir) / "reports", metrics, audits, report)
    if not quiet:
        print(f"reports written to {Path(config.run_dir) / 'reports'}")
    return EXIT_OK


def cmd_report(config: RunConfig) -> int:
    code = cmd_evaluate(config, quiet=True)
    if code != EXIT_OK:
        return code
    import json

    data = json.loads((Path(config.run_dir) / "reports" / "aggregate.json").read_text("utf-8"))
    report_rows = [
        ("Records", data["n_records"]),
        ("Answered records", data["n_answered"]),
        ("Think Rate (%)", f"{data['think_rate_pct']:.2f}"),
        ("Answer Rate (%)", f"{data['answer_rate_pct']:.2f}"),
        ("SMILES Validity (%)", f"{data['smiles_validity_pct']:.2f}"),
        ("DBE Accuracy (%)", f"{data['dbe_accuracy_pct']:.2f}"),
        ("Formula Consistency (%)", f"{data['formula_consistency_pct']:.2f}"),
        ("Accuracy Top-1 (%)", f"{data['exact_top1_pct']:.2f}"),
        (f"Accuracy Top-{data['k']} (%)", f"{data['exact_topk_pct']:.2f}"),
        ("Tanimoto Top-1", f"{data['mts_top1_mean']:.4f}"),
        (f"Tanimoto Top-{data['k']}", f"{data['mts_topk_mean']:.4f}"),
        ("MCES Top-1", f"{data['mces_top1_mean']:.4f}"),
        (f"MCES Top-{data['k']}", f"{data['mces_topk_mean']:.4f}"),
    ]
    width = max(len(label) for label, _ in report_rows)
    for label, value in report_rows:
        print(f"{label:<{width}}  {value}")
    return EXIT_OK


def cmd_mces(args: argparse.Namespace) -> int:
    try:
        a = mol_from_smiles(args.smiles_a)
        b = mol_from_smiles(args.smiles_b)
    except ChemError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = mces(a, b, budget=args.mces_budget)
    print(f"common_edges: {result.common_edges}")
    print(f"dissimilarity: {result.dissimilarity:.6f}")
    print(f"optimal: {str(result.optimal).lower()}")
    return EXIT_OK


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--dataset", help="dataset path (TSV or JSONL)")
    parser.add_argument("--template", help="prompt template path (default: bundled)")
    parser.add_argument("--run-dir", dest="run_dir", help="run directory for cache/transcripts/reports")
    parser.add_argument("--split", choices=("train", "val", "test"), help="fold to process")
    parser.add_argument("--k", type=int, help="top-k cutoff (default 10)")
    parser.add_argument("--mces-budget", dest="mces_budget", type=float, help="seconds per MCES pair")
    parser.add_argument("--fp-radius", dest="fp_radius", type=int, help="fingerprint radius")
    parser.add_argument("--fp-nbits", dest="fp_nbits", type=int, help="fingerprint length")
    parser.add_argument("--provider", help="'http' or 'mock:<dir>'")
    parser.add_argument("--model", help="model name sent to the provider")
    parser.add_argument("--endpoint", help="chat-completions endpoint URL")
    parser.add_argument("--api-key-env", dest="api_key_env", help="env var holding the API key")
    parser.add_argument("--temperature", type=float, help="sampling temperature")
    parser.add_argument("--max-tokens", dest="max_tokens", type=int, help="completion token limit")
    parser.add_argument("--parallelism", type=int, help="request/scoring parallelism")
    parser.add_argument("--workers", type=int, help="evaluation worker processes")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ms2smiles", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("ingest", "run", "evaluate", "report"):
        p = sub.add_parser(name)
        _add_shared_flags(p)
    p_mces = sub.add_parser("mces")
    p_mces.add_argument("smiles_a")
    p_mces.add_argument("smiles_b")
    p_mces.add_argument("--mces-budget", dest="mces_budget", type=float, default=1.0)

    args = parser.parse_args(argv)
    if args.command == "mces":
        return cmd_mces(args)

    try:
        config = build_config(args)
        if not config.dataset_path:
            print("a dataset is required (--dataset or config file)", file=sys.stderr)
            return EXIT_USAGE
        if args.command == "ingest":
            return cmd_ingest(config)
        if args.command == "run":
            return cmd_run(config)
        if args.command == "evaluate":
            return cmd_evaluate(config)
        return cmd_report(config)
    except DatasetError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except MissingApiKey as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
