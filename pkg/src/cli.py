"""
CLI entry point: ties together dataset I/O → reward / metrics → reporter.

Usage:
  # Convert annotations between JSON and TOON:
  python3 -m src convert data/val.jsonl --to toon -o data/val.toon.jsonl

  # Score model completions against ground truth:
  python3 -m src score --gt data/val.jsonl --completions out/completions.jsonl

  # Strict or judge-assisted evaluation:
  python3 -m src eval --gt data/val.jsonl --pred out/pred.jsonl --mode soft --judge-stub synonyms.yml

  # Serve rewards to an RL trainer over stdio:
  python3 -m src serve --transport stdio

Exit codes:
  0: success
  1: data error (malformed annotation, invalid config, failed validation)
  2: usage error (bad flags)
  3: I/O error (unreadable input, unwritable output, port in use)
"""

import json
import logging
import os
import sys
from collections import Counter
from contextlib import contextmanager
from dataclasses import asdict, replace
from typing import Any, Callable, Iterator, NoReturn, Optional

import click

from src.config import Config, load_config, load_weights_file
from src.dataset import (
    ContextProtocol,
    LengthMeasure,
    NativeSource,
    ZeroRelationFilter,
    clean_graph,
    corrupt_graph,
    frame_seed,
    iter_records,
    length_stats,
    load_completions,
    load_native_records,
    load_predictions,
    load_split,
    load_token_counts,
    previous_context,
    record_line,
    thin_base_annot,
    write_records,
)
from src.errors import AnnotationError, ConfigError, JudgeError, SerializationError
from src.graph import Schema, graph_stats, load_vocabulary, validate_graph
from src.llm import ClaudeJudge, HttpJudge, JudgeClient, load_synonym_judge
from src.metrics import (
    EvalMode,
    PrecisionMode,
    aggregate,
    aggregate_sgdet,
    evaluate_samples,
    evaluate_sgdet,
    triplets_from_graph,
)
from src.reporter import (
    report_filter_console,
    report_json,
    report_length_console,
    report_metrics_console,
    report_rewards_console,
    report_sgdet_console,
    report_thinning_console,
)
from src.reward import PRESETS, RewardBreakdown, RewardWeights, score_batch
from src.service import ScoringDefaults, run_service
from src.toon import Diagnostic, DiagnosticCode, ParseOutcome, graph_to_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2
EXIT_IO = 3

LOG_LEVEL_ENV = "SGKIT_LOG_LEVEL"
RECORD_FORMATS = ["json", "toon"]


def _setup_logging(verbose: bool, log_file: Optional[str] = None) -> None:
    """Configure logging based on verbosity, SGKIT_LOG_LEVEL and an optional log file."""
    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(logging.DEBUG)

    level = logging.WARNING
    env_level = os.environ.get(LOG_LEVEL_ENV)
    if env_level:
        level = logging.getLevelName(env_level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    if verbose:
        level = logging.DEBUG

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(level)
    console.setFormatter(logging.Formatter(
        "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    ))
    root.addHandler(console)

    # File handler: always DEBUG
    if log_file:
        fh = logging.FileHandler(log_file, mode="w")
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(logging.Formatter(
            "%(asctime)s [%(levelname)-8s] %(name)s: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        ))
        root.addHandler(fh)


def _fail(code: int, message: str) -> NoReturn:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


@contextmanager
def _handle_errors() -> Iterator[None]:
    """Map library exceptions to exit codes."""
    try:
        yield
    except (AnnotationError, SerializationError, ConfigError, JudgeError, ValueError) as e:
        logger.debug("Data error", exc_info=True)
        _fail(EXIT_DATA, str(e))
    except OSError as e:
        logger.debug("I/O error", exc_info=True)
        _fail(EXIT_IO, str(e))


def _common_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    fn = click.option("--schema", type=click.Choice([s.value for s in Schema]), default=None,
                      help="Graph schema (overrides config file).")(fn)
    fn = click.option("--config", "config_path", default=None, type=click.Path(),
                      help="Path to .sgkit.yml config file.")(fn)
    return fn


def _load(config_path: Optional[str], search_path: Optional[str], schema: Optional[str]) -> Config:
    with _handle_errors():
        config = load_config(config_path=config_path, search_path=search_path)
    if schema:
        config.schema = Schema(schema)
    logger.info("Effective config: source=%s, schema=%s", config.source or "(defaults)", config.schema.value)
    return config


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose logging.")
@click.option("--log-file", default=None, type=click.Path(), help="Write debug logs to a file.")
def cli(verbose: bool, log_file: Optional[str]) -> None:
    """Scene graph toolkit: TOON serialization, RL rewards and evaluation."""
    _setup_logging(verbose, log_file)


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------

@cli.command()
@click.argument("input_path")
@click.option("--from", "source_format", type=click.Choice(["auto", *RECORD_FORMATS]), default="auto",
              help="Input graph format (auto detects per record).")
@click.option("--to", "target_format", type=click.Choice(RECORD_FORMATS), required=True, help="Output graph format.")
@click.option("-o", "--output", default=None, type=click.Path(), help="Output file (default: stdout).")
@_common_options
def convert(
    input_path: str, source_format: str, target_format: str, output: Optional[str],
    config_path: Optional[str], schema: Optional[str],
) -> None:
    """Convert annotation records between JSON and TOON."""
    config = _load(config_path, input_path, schema)
    expect = None if source_format == "auto" else source_format
    with _handle_errors():
        records = iter_records(input_path, config.schema, expect)
        if output:
            count = write_records(records, output, target_format)
        else:
            count = 0
            for rec in records:
                click.echo(record_line(rec, target_format))
                count += 1
    logger.info("Converted %d record(s) to %s", count, target_format)


@cli.command()
@click.argument("input_path")
@click.option("--vocab", "vocab_path", default=None, type=click.Path(), help="Vocabulary file (YAML/JSON).")
@click.option("--closed", is_flag=True, help="Treat out-of-vocabulary labels and predicates as violations.")
@click.option("--clean", is_flag=True, help="Validate the cleaned graphs instead of the raw ones.")
@_common_options
def validate(
    input_path: str, vocab_path: Optional[str], closed: bool, clean: bool,
    config_path: Optional[str], schema: Optional[str],
) -> None:
    """Check annotation records against the graph invariants.

    Exits with code 0 if every graph is valid, 1 otherwise.
    """
    config = _load(config_path, input_path, schema)
    if closed and not vocab_path:
        _fail(EXIT_USAGE, "--closed needs --vocab")
    total = invalid = 0
    with _handle_errors():
        vocab = load_vocabulary(vocab_path) if vocab_path else None
        for rec in iter_records(input_path, config.schema):
            graph = clean_graph(rec.graph) if clean else rec.graph
            report = validate_graph(graph, vocab, closed)
            total += 1
            if report.is_valid:
                continue
            invalid += 1
            for v in report.violations:
                click.echo(f"{rec.sample_id}: [{v.code.value}] {v.message}", err=True)

    click.echo(f"{total - invalid}/{total} graph(s) valid", err=True)
    if invalid:
        sys.exit(EXIT_DATA)


# ----------------------------------------------------------------------
# Rewards
# ----------------------------------------------------------------------

@cli.command()
@click.option("--gt", "gt_path", required=True, help="Ground-truth annotation records.")
@click.option("--completions", "completions_path", required=True, help="JSONL of {id, completion}.")
@click.option("--preset", type=click.Choice(list(PRESETS)), default=None, help="Reward-group preset.")
@click.option("--weights", "weights_path", default=None, type=click.Path(), help="Reward weights file.")
@click.option("--format", "output_format", type=click.Choice(["table", "json"]), default="table", help="Output format.")
@click.option("--workers", type=int, default=None, help="Scoring threads (default: service.workers).")
@_common_options
def score(
    gt_path: str, completions_path: str, preset: Optional[str], weights_path: Optional[str],
    output_format: str, workers: Optional[int], config_path: Optional[str], schema: Optional[str],
) -> None:
    """Score model completions with the structured graph reward."""
    config = _load(config_path, gt_path, schema)
    with _handle_errors():
        weights = config.weights
        if preset:
            weights = RewardWeights.preset(preset)
        if weights_path:
            weights = load_weights_file(weights_path, base=weights)
        config.weights = weights

        split = load_split(gt_path, config.schema)
        completions = load_completions(completions_path)

        ids: list[str] = []
        items = []
        for rec in split:
            text = completions.get(rec.sample_id)
            if text is None:
                logger.warning("No completion for sample %s, skipping", rec.sample_id)
                continue
            ids.append(rec.sample_id)
            items.append((clean_graph(rec.graph), text))
        if not items:
            _fail(EXIT_DATA, "No completion matches a ground-truth sample")

        results = score_batch(items, weights, config.match, workers or config.service.workers)

    rows: list[tuple[str, RewardBreakdown]] = list(zip(ids, results))
    if output_format == "json":
        payload = {
            "num_samples": len(rows),
            "samples": [{"id": sid, **b.to_dict()} for sid, b in rows],
            "mean_total": sum(b.total for _, b in rows) / len(rows),
            "max_total": weights.max_total,
        }
        click.echo(report_json("rewards", payload, config.to_dict()))
    else:
        report_rewards_console(rows, source=gt_path)


# ----------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------

def _missing_prediction(sample_id: str) -> ParseOutcome:
    return ParseOutcome.failure(Diagnostic(DiagnosticCode.MISSING_TAGS, f"No prediction for sample {sample_id}"))


def _build_judge(
    config: Config, endpoint: Optional[str], stub: Optional[str], use_claude: bool, model: Optional[str],
) -> JudgeClient:
    chosen = sum(bool(x) for x in (endpoint, stub, use_claude))
    if chosen > 1:
        _fail(EXIT_USAGE, "Pick one of --judge-endpoint, --judge-stub and --judge-claude")
    if stub:
        return load_synonym_judge(stub)
    if use_claude:
        try:
            return ClaudeJudge(model=model) if model else ClaudeJudge()
        except ValueError as e:
            _fail(EXIT_USAGE, str(e))
    endpoint = endpoint or config.eval.judge_endpoint
    if not endpoint:
        _fail(EXIT_USAGE, "Soft evaluation needs a judge (--judge-endpoint, --judge-stub or --judge-claude)")
    return HttpJudge(
        endpoint,
        model=model or config.eval.judge_model,
        timeout=config.eval.judge_timeout,
        retries=config.eval.judge_retries,
    )


@cli.command(name="eval")
@click.option("--gt", "gt_path", required=True, help="Ground-truth annotation records.")
@click.option("--pred", "pred_path", required=True, help="Predictions (completions, TOON or JSON graphs).")
@click.option("--mode", type=click.Choice([m.value for m in EvalMode]), default=EvalMode.STRICT.value, help="Matching mode.")
@click.option("--iou", type=float, default=None, help="IoU threshold (overrides config file).")
@click.option("--judge-endpoint", default=None, help="OpenAI-compatible chat completions URL.")
@click.option("--judge-stub", default=None, type=click.Path(), help="Synonym-table judge file (YAML).")
@click.option("--judge-claude", is_flag=True, help="Use Claude as the equivalence judge.")
@click.option("--judge-model", default=None, help="Judge model name.")
@click.option("--exclude-failed", is_flag=True, help="Leave failed samples out of the averages.")
@click.option("--format", "output_format", type=click.Choice(["table", "json"]), default="table", help="Output format.")
@_common_options
def eval_command(
    gt_path: str, pred_path: str, mode: str, iou: Optional[float],
    judge_endpoint: Optional[str], judge_stub: Optional[str], judge_claude: bool, judge_model: Optional[str],
    exclude_failed: bool, output_format: str, config_path: Optional[str], schema: Optional[str],
) -> None:
    """Object/relation precision, recall, F1 and SGG score."""
    config = _load(config_path, gt_path, schema)
    eval_mode = EvalMode(mode)
    include_failed = config.eval.include_failed and not exclude_failed
    config.eval.include_failed = include_failed

    with _handle_errors():
        if iou is not None:
            config.match = replace(config.match, iou_threshold=iou)
        judge = None
        if eval_mode is EvalMode.SOFT:
            judge = _build_judge(config, judge_endpoint, judge_stub, judge_claude, judge_model)

        split = load_split(gt_path, config.schema)
        predictions = load_predictions(pred_path, config.schema)
        gts = [clean_graph(rec.graph) for rec in split]
        preds = [predictions.get(rec.sample_id) or _missing_prediction(rec.sample_id) for rec in split]
        missing = sum(1 for rec in split if rec.sample_id not in predictions)
        if missing:
            logger.warning("%d sample(s) have no prediction and count as failed", missing)

        samples = evaluate_samples(gts, preds, config.match, eval_mode, judge, config.eval.max_in_flight)
        report = aggregate(samples, eval_mode, include_failed)

    if output_format == "json":
        payload = {"report": report.to_dict(), "samples": [
            {"id": rec.sample_id, **asdict(s)} for rec, s in zip(split, samples)
        ]}
        click.echo(report_json("metrics", payload, config.to_dict()))
    else:
        report_metrics_console(report, source=pred_path)


def _parse_k_values(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[list[int]]:
    if value is None:
        return None
    try:
        ks = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from None
    if not ks or any(k <= 0 for k in ks):
        raise click.BadParameter(f"K values must be positive, got {value!r}")
    return ks


@cli.command(name="eval-sgdet")
@click.option("--gt", "gt_path", required=True, help="Ground-truth annotation records.")
@click.option("--pred", "pred_path", required=True, help="Predictions; triplet rank is emission order.")
@click.option("--k", "k_values", callback=_parse_k_values, default=None, help="Comma-separated K values (default 10,20,50).")
@click.option("--iou", type=float, default=None, help="IoU threshold (overrides config file).")
@click.option("--precision-denominator", type=click.Choice([m.value for m in PrecisionMode]), default=None,
              help="P@K denominator: min(K, |pred|) or K.")
@click.option("--format", "output_format", type=click.Choice(["table", "json"]), default="table", help="Output format.")
@_common_options
def eval_sgdet(
    gt_path: str, pred_path: str, k_values: Optional[list[int]], iou: Optional[float],
    precision_denominator: Optional[str], output_format: str,
    config_path: Optional[str], schema: Optional[str],
) -> None:
    """Triplet P/R/F1 at K with the one-predicate-per-pair constraint."""
    config = _load(config_path, gt_path, schema)
    if k_values:
        config.eval.k_values = k_values
    if precision_denominator:
        config.eval.precision_at_k = precision_denominator
    precision_mode = PrecisionMode(config.eval.precision_at_k)

    with _handle_errors():
        if iou is not None:
            config.match = replace(config.match, iou_threshold=iou)
        split = load_split(gt_path, config.schema)
        predictions = load_predictions(pred_path, config.schema)
        per_sample = []
        for rec in split:
            outcome = predictions.get(rec.sample_id)
            pred_graph = outcome.valid_graph if outcome else None
            ranked = triplets_from_graph(pred_graph) if pred_graph else []
            gt_triplets = triplets_from_graph(clean_graph(rec.graph))
            per_sample.append(evaluate_sgdet(gt_triplets, ranked, config.eval.k_values, config.match, precision_mode))
        results = aggregate_sgdet(per_sample)

    if output_format == "json":
        payload = {"num_samples": len(per_sample), "results": {str(k): asdict(r) for k, r in results.items()}}
        click.echo(report_json("sgdet", payload, config.to_dict()))
    else:
        report_sgdet_console(results, source=pred_path, num_samples=len(per_sample))


# ----------------------------------------------------------------------
# Dataset preparation
# ----------------------------------------------------------------------

@cli.command(name="filter-zero-rel")
@click.argument("input_path")
@click.option("-o", "--output", required=True, type=click.Path(), help="Output file for the kept records.")
@click.option("--to", "target_format", type=click.Choice(RECORD_FORMATS), default="json", help="Output graph format.")
@click.option("--format", "output_format", type=click.Choice(["table", "json"]), default="table", help="Report format.")
@_common_options
def filter_zero_rel(
    input_path: str, output: str, target_format: str, output_format: str,
    config_path: Optional[str], schema: Optional[str],
) -> None:
    """Drop samples whose cleaned graph has no relations."""
    config = _load(config_path, input_path, schema)
    flt = ZeroRelationFilter()
    with _handle_errors():
        write_records(flt(iter_records(input_path, config.schema)), output, target_format)
    stats = flt.stats
    if output_format == "json":
        click.echo(report_json("filter", stats.to_dict(), config.to_dict()))
    else:
        report_filter_console(stats, source=input_path)


@cli.command()
@click.argument("input_path")
@click.option("-o", "--output", required=True, type=click.Path(), help="Output file for the retained frames.")
@click.option("--method", type=click.Choice(["base-annot"]), default="base-annot", help="Thinning method.")
@click.option("--multiset", is_flag=True, help="Compare label multisets instead of sets.")
@click.option("--to", "target_format", type=click.Choice(RECORD_FORMATS), default="json", help="Output graph format.")
@click.option("--format", "output_format", type=click.Choice(["table", "json"]), default="table", help="Report format.")
@_common_options
def thin(
    input_path: str, output: str, method: str, multiset: bool, target_format: str, output_format: str,
    config_path: Optional[str], schema: Optional[str],
) -> None:
    """Keep only frames whose annotation changed from the previous frame."""
    config = _load(config_path, input_path, schema)
    with _handle_errors():
        records = list(iter_records(input_path, config.schema))
        kept, report = thin_base_annot(records, multiset=multiset)
        write_records(kept, output, target_format)
    if output_format == "json":
        click.echo(report_json("thinning", {"method": method, **report.to_dict()}, config.to_dict()))
    else:
        report_thinning_console(report, source=input_path)


@cli.command()
@click.argument("input_path")
@click.option("--measure", type=click.Choice([m.value for m in LengthMeasure]), default=LengthMeasure.CHARS.value,
              help="Length measure.")
@click.option("--counts", "counts_path", default=None, type=click.Path(), help="Token counts for --measure file.")
@click.option("--format", "output_format", type=click.Choice(["table", "json"]), default="table", help="Report format.")
@_common_options
def stats(
    input_path: str, measure: str, counts_path: Optional[str], output_format: str,
    config_path: Optional[str], schema: Optional[str],
) -> None:
    """Serialized-length statistics for JSON versus TOON."""
    config = _load(config_path, input_path, schema)
    length_measure = LengthMeasure(measure)
    if length_measure is LengthMeasure.FILE and not counts_path:
        _fail(EXIT_USAGE, "--measure file needs --counts")
    with _handle_errors():
        counts = load_token_counts(counts_path) if counts_path else None
        records = (rec.with_graph(clean_graph(rec.graph)) for rec in iter_records(input_path, config.schema))
        result = length_stats(records, length_measure, counts)
    if output_format == "json":
        click.echo(report_json("length", result.to_dict(), config.to_dict()))
    else:
        report_length_console(result, source=input_path)


@cli.command()
@click.argument("input_path")
@click.option("-o", "--output", required=True, type=click.Path(), help="Output file for the corrupted records.")
@click.option("--seed", type=int, default=0, help="Base seed, combined with each sample id.")
@click.option("--object-dropout", type=float, default=None)
@click.option("--relation-dropout", type=float, default=None)
@click.option("--box-jitter", type=float, default=None)
@click.option("--label-substitution", type=float, default=None)
@click.option("--vocab", "vocab_path", default=None, type=click.Path(), help="Labels to substitute from.")
@click.option("--to", "target_format", type=click.Choice(RECORD_FORMATS), default="json", help="Output graph format.")
@_common_options
def corrupt(
    input_path: str, output: str, seed: int,
    object_dropout: Optional[float], relation_dropout: Optional[float],
    box_jitter: Optional[float], label_substitution: Optional[float],
    vocab_path: Optional[str], target_format: str, config_path: Optional[str], schema: Optional[str],
) -> None:
    """Deterministically corrupt graphs (dropout, jitter, label swaps)."""
    config = _load(config_path, input_path, schema)
    overrides = {
        "object_dropout": object_dropout,
        "relation_dropout": relation_dropout,
        "box_jitter": box_jitter,
        "label_substitution": label_substitution,
    }
    with _handle_errors():
        policy = replace(config.corruption, **{k: v for k, v in overrides.items() if v is not None})
        if vocab_path:
            policy = replace(policy, vocabulary=tuple(sorted(load_vocabulary(vocab_path).object_labels)))
        config.corruption = policy
        records = (
            rec.with_graph(corrupt_graph(clean_graph(rec.graph), policy, frame_seed(rec.sample_id, seed)))
            for rec in iter_records(input_path, config.schema)
        )
        count = write_records(records, output, target_format)
    click.echo(f"Corrupted {count} record(s) -> {output}", err=True)


@cli.command()
@click.argument("input_path")
@click.option("-o", "--output", required=True, type=click.Path(), help="Output JSONL of {id, previous}.")
@click.option("--protocol", type=click.Choice([p.value for p in ContextProtocol]), default=ContextProtocol.GT.value,
              help="Where the previous-frame graph comes from.")
@click.option("--pred", "pred_path", default=None, type=click.Path(), help="Predictions (for --protocol generated).")
@click.option("--seed", type=int, default=0, help="Base corruption seed (for --protocol corrupted).")
@_common_options
def context(
    input_path: str, output: str, protocol: str, pred_path: Optional[str], seed: int,
    config_path: Optional[str], schema: Optional[str],
) -> None:
    """Pair each frame with its previous-frame graph for temporal prompting."""
    config = _load(config_path, input_path, schema)
    ctx_protocol = ContextProtocol(protocol)
    if ctx_protocol is ContextProtocol.GENERATED and not pred_path:
        _fail(EXIT_USAGE, "--protocol generated needs --pred")
    with _handle_errors():
        records = [rec.with_graph(clean_graph(rec.graph)) for rec in iter_records(input_path, config.schema)]
        predictions = None
        if pred_path:
            predictions = {
                sid: outcome.valid_graph
                for sid, outcome in load_predictions(pred_path, config.schema).items()
                if outcome.valid_graph is not None
            }
        pairs = previous_context(records, ctx_protocol, predictions, config.corruption, seed)
        with open(output, "w", encoding="utf-8") as f:
            for rec, previous in pairs:
                row = {"id": rec.sample_id, "previous": graph_to_dict(previous) if previous else None}
                f.write(json.dumps(row, ensure_ascii=False) + "\n")
    with_context = sum(1 for _, previous in pairs if previous is not None)
    click.echo(f"Wrote {len(pairs)} record(s), {with_context} with previous-frame context -> {output}", err=True)


@cli.command("import-dataset")
@click.argument("input_path")
@click.option("--source", type=click.Choice([s.value for s in NativeSource]), required=True,
              help="Dataset-native layout of INPUT_PATH.")
@click.option("--person-boxes", "person_boxes_path", default=None, type=click.Path(),
              help="Action Genome person-box file (JSON).")
@click.option("-o", "--output", required=True, type=click.Path(), help="Output annotation records.")
@click.option("--to", "target_format", type=click.Choice(RECORD_FORMATS), default="json", help="Output graph format.")
@click.option("--clean/--no-clean", default=True, help="Drop duplicates, self-relations and dangling relations.")
def import_dataset(
    input_path: str, source: str, person_boxes_path: Optional[str], output: str, target_format: str, clean: bool,
) -> None:
    """Convert PSG, PVSG or Action Genome annotations to annotation records."""
    native = NativeSource(source)
    if native is NativeSource.AG and not person_boxes_path:
        _fail(EXIT_USAGE, "--source ag needs --person-boxes")
    with _handle_errors():
        records = load_native_records(native, input_path, person_boxes_path)
        if clean:
            records = (rec.with_graph(clean_graph(rec.graph)) for rec in records)
        count = write_records(records, output, target_format)
    click.echo(f"Imported {count} {native.value} record(s) -> {output}", err=True)


@cli.command()
@click.argument("input_path")
@_common_options
def summary(input_path: str, config_path: Optional[str], schema: Optional[str]) -> None:
    """Object, relation and vocabulary counts for a split."""
    config = _load(config_path, input_path, schema)
    with _handle_errors():
        split = load_split(input_path, config.schema)
    per_graph = [graph_stats(rec.graph) for rec in split]
    predicates: Counter[str] = Counter()
    for s in per_graph:
        predicates.update(s.predicate_counts)
    payload = {
        "num_samples": len(per_graph),
        "num_objects": sum(s.num_objects for s in per_graph),
        "num_relations": sum(s.num_relations for s in per_graph),
        "zero_relation": sum(1 for s in per_graph if s.zero_relation),
        "object_labels": len({o.label for rec in split for o in rec.graph.objects}),
        "predicates": dict(predicates.most_common()),
    }
    click.echo(report_json("summary", payload, config.to_dict()))


# ----------------------------------------------------------------------
# Scoring service
# ----------------------------------------------------------------------

@cli.command()
@click.option("--transport", type=click.Choice(["stdio", "tcp"]), default="stdio", help="Where requests arrive.")
@click.option("--host", default=None, help="TCP bind address (overrides config file).")
@click.option("--port", type=int, default=None, help="TCP port (overrides config file).")
@click.option("--workers", type=int, default=None, help="Scoring threads (overrides config file).")
@_common_options
def serve(
    transport: str, host: Optional[str], port: Optional[int], workers: Optional[int],
    config_path: Optional[str], schema: Optional[str],
) -> None:
    """Serve rewards over newline-delimited JSON (stdio or TCP)."""
    config = _load(config_path, None, schema)
    settings = config.service
    with _handle_errors():
        config.service = replace(
            settings,
            host=host or settings.host,
            port=settings.port if port is None else port,
            workers=workers or settings.workers,
        )
    settings = config.service
    logger.info("Service config: %s", config.to_dict())
    defaults = ScoringDefaults(schema=config.schema, weights=config.weights, match=config.match)
    with _handle_errors():
        handled = run_service(
            defaults,
            transport=transport,
            host=settings.host,
            port=settings.port,
            workers=settings.workers,
            max_line_bytes=settings.max_line_bytes,
        )
    logger.info("Service stopped after %d request(s)", handled)
