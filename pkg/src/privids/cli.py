"""Command-line pipeline: select, distort, evaluate, or run end to end.

Each subcommand reads one YAML config, writes its reports into the output
directory, and exits 0 on success, 1 on usage/config errors, 2 on data
errors, 3 on numeric errors. All reports are deterministic given the same
config and seeds, except for wall-time fields.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, classifiers, evaluation
from .config import PipelineConfig, load_config
from .dataset import (
    FeatureMatrix,
    LabelVector,
    load_csv,
    prepare,
    stratified_sample,
    stratified_split,
)
from .distortion import distort
from .errors import (
    ConfigError,
    DataFormatError,
    DataValidationError,
    SingularMatrixError,
    UndefinedCorrelationError,
)
from .feature_selection import apply_selection, correlation_matrix, select_by_threshold
from .privacy_metrics import privacy_report

# Report keys whose values depend on the wall clock; everything else is
# byte-reproducible from config + seeds.
NONDETERMINISTIC_KEYS = frozenset(
    {
        "train_time_s",
        "test_time_s",
        "distortion_time_s",
        "elapsed_s",
        "Time",
        "started_at",
        "finished_at",
        "stage_times_s",
    }
)

DISTORTED_TAGS = ("lsm_only", "pcc_lsm")


def _write_json(path: Path, payload) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _verify_sha256(path: str, expected: str):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    actual = digest.hexdigest()
    if actual != expected.lower():
        raise DataValidationError(
            f"{path}: sha256 {actual} does not match configured {expected}"
        )


def _ingest(config: PipelineConfig):
    if config.sha256:
        _verify_sha256(config.dataset_path, config.sha256)
    table = load_csv(config.dataset_path)
    X, y, encoding = prepare(
        table,
        drop_columns=config.drop_columns,
        label_column=config.label_column,
        category_column=config.category_column,
        min_max_scale=config.min_max_scale,
    )
    if config.sample_rows is not None:
        X, y = stratified_sample(X, y, config.sample_rows, config.sample_seed)
    return X, y, encoding


def _median_distort(X, y, repeats: int):
    """Distortion with the wall time taken as the median of repeated runs;
    the fitted model and matrix are identical across runs."""
    times = []
    distorted = model = None
    for _ in range(repeats):
        distorted, model, elapsed = distort(X, y)
        times.append(elapsed)
    return distorted, model, statistics.median(times)


def _selection_payload(report) -> dict:
    return {
        "threshold": report.threshold,
        "kept": list(report.kept),
        "dropped": [
            {"name": d.name, "against": d.against, "coefficient": d.coefficient}
            for d in report.dropped
        ],
        "ranking": [{"feature": name, "score": score} for name, score in report.ranking],
        "constant_columns": list(report.constant_columns),
    }


def _model_payload(model) -> dict:
    return {
        "columns": list(model.fitted_on),
        "beta": [float(b) for b in model.beta],
        "intercept": model.intercept,
        "residual": model.residual,
    }


def _evaluation_payload(report, config: PipelineConfig) -> dict:
    return {
        "configuration": report.configuration,
        "n_train": report.n_train,
        "n_test": report.n_test,
        "split": {"test_fraction": config.test_fraction, "seed": config.split_seed},
        "classifiers": [
            {
                "kind": r.kind,
                "hyperparameters": r.hyperparameters,
                "seed": r.seed,
                "confusion": {
                    "tp": r.confusion.tp,
                    "fn": r.confusion.fn,
                    "fp": r.confusion.fp,
                    "tn": r.confusion.tn,
                },
                "recall": r.metrics.recall,
                "precision": r.metrics.precision,
                "specificity": r.metrics.specificity,
                "f_score": r.metrics.f_score,
                "accuracy": r.metrics.accuracy,
                "train_time_s": r.train_time_s,
                "test_time_s": r.test_time_s,
            }
            for r in report.results
        ],
    }


def _privacy_payload(tag: str, report) -> dict:
    return {
        "configuration": tag,
        "vd": report.vd,
        "rp": report.rp,
        "rk": report.rk,
        "cp": report.cp,
        "ck": report.ck,
        "rp_sum": report.rp_sum,
        "n": report.n,
        "m": report.m,
        "distortion_time_s": report.distortion_time_s,
    }


def _matrix_rows(matrix: FeatureMatrix):
    for row in matrix.values:
        yield [float(v) for v in row]


def cmd_select(config: PipelineConfig) -> list[Path]:
    """Write the correlation matrix, the selection report, and the ranking."""
    out = Path(config.output_dir)
    X, _, _ = _ingest(config)
    C = correlation_matrix(X)
    report = select_by_threshold(C, config.pcc_threshold)

    written = [
        _write_csv(
            out / "correlation_matrix.csv",
            ["feature", *C.column_names],
            (
                [C.column_names[i], *[float(v) for v in C.values[i]]]
                for i in range(C.m)
            ),
        ),
        _write_json(out / "selection_report.json", _selection_payload(report)),
        _write_csv(
            out / "pcc_ranking.csv",
            ["feature", "mean_abs_pcc"],
            ([name, score] for name, score in report.ranking),
        ),
    ]
    return written


def cmd_distort(config: PipelineConfig) -> list[Path]:
    """Write the distorted matrix, model, and timing for every distorted
    configuration that was requested."""
    tags = [t for t in config.configurations if t in DISTORTED_TAGS]
    if not tags:
        raise ConfigError(
            f"distort needs one of {DISTORTED_TAGS} in 'configurations', got {config.configurations}"
        )
    out = Path(config.output_dir)
    X, y, _ = _ingest(config)
    X_by_tag = {"lsm_only": X}
    if "pcc_lsm" in tags:
        report = select_by_threshold(correlation_matrix(X), config.pcc_threshold)
        X_by_tag["pcc_lsm"] = apply_selection(X, report)

    written = []
    for tag in tags:
        distorted, model, elapsed = _median_distort(X_by_tag[tag], y, config.timing_repeats)
        written.append(
            _write_csv(
                out / f"distorted_{tag}.csv",
                list(distorted.column_names),
                _matrix_rows(distorted),
            )
        )
        written.append(
            _write_json(out / f"distortion_model_{tag}.json", _model_payload(model))
        )
        written.append(
            _write_json(
                out / f"distortion_timing_{tag}.json",
                {"configuration": tag, "distortion_time_s": elapsed, "n": distorted.n, "m": distorted.m},
            )
        )
    return written


def _configuration_matrices(config: PipelineConfig, X: FeatureMatrix, y: LabelVector):
    """Feature matrix and optional privacy report per requested configuration."""
    needs_selection = any(t in config.configurations for t in ("pcc_only", "pcc_lsm"))
    X_selected = None
    if needs_selection:
        report = select_by_threshold(correlation_matrix(X), config.pcc_threshold)
        X_selected = apply_selection(X, report)

    matrices = {}
    privacy = {}
    for tag in config.configurations:
        if tag == "baseline":
            matrices[tag] = X
        elif tag == "pcc_only":
            matrices[tag] = X_selected
        elif tag == "lsm_only":
            distorted, _, elapsed = _median_distort(X, y, config.timing_repeats)
            matrices[tag] = distorted
            privacy[tag] = privacy_report(X.values, distorted.values, elapsed)
        elif tag == "pcc_lsm":
            distorted, _, elapsed = _median_distort(X_selected, y, config.timing_repeats)
            matrices[tag] = distorted
            privacy[tag] = privacy_report(X_selected.values, distorted.values, elapsed)
    return matrices, privacy


def _run_evaluations(config: PipelineConfig, matrices, y: LabelVector):
    reports = {}
    for tag, matrix in matrices.items():
        X_train, y_train, X_test, y_test = stratified_split(
            matrix, y, config.test_fraction, config.split_seed
        )
        reports[tag] = evaluation.run_configuration(
            tag,
            X_train,
            y_train,
            X_test,
            y_test,
            config.classifier_specs,
            timing_repeats=config.timing_repeats,
        )
    return reports


def cmd_evaluate(config: PipelineConfig) -> list[Path]:
    """Evaluate every requested configuration; write per-configuration
    evaluation reports, privacy reports for distorted configurations, a
    utility comparison against the baseline, and combined CSV summaries."""
    out = Path(config.output_dir)
    X, y, _ = _ingest(config)
    matrices, privacy = _configuration_matrices(config, X, y)
    reports = _run_evaluations(config, matrices, y)

    written = []
    for tag in config.configurations:
        written.append(
            _write_json(out / f"evaluation_{tag}.json", _evaluation_payload(reports[tag], config))
        )
    for tag, p_report in privacy.items():
        written.append(_write_json(out / f"privacy_{tag}.json", _privacy_payload(tag, p_report)))

    if "baseline" in reports:
        comparisons = []
        for tag in config.configurations:
            if tag == "baseline":
                continue
            cmp_result = evaluation.compare_utility(reports["baseline"], reports[tag])
            comparisons.append(
                {
                    "configuration": tag,
                    "deltas": [
                        {"classifier": kind, "accuracy_delta": delta}
                        for kind, delta in cmp_result.deltas
                    ],
                    "max_abs_delta": cmp_result.max_abs_delta,
                }
            )
        written.append(
            _write_json(
                out / "utility_comparison.json",
                {"baseline": "baseline", "comparisons": comparisons},
            )
        )

    if privacy:
        written.append(
            _write_csv(
                out / "privacy_measures.csv",
                ["configuration", "VD", "RP", "RK", "CP", "CK", "Time"],
                (
                    [tag, p.vd, p.rp, p.rk, p.cp, p.ck, p.distortion_time_s]
                    for tag, p in privacy.items()
                ),
            )
        )

    summary_rows = []
    for tag in config.configurations:
        for r in reports[tag].results:
            summary_rows.append(
                [
                    tag,
                    r.kind,
                    r.confusion.tp,
                    r.confusion.fn,
                    r.confusion.fp,
                    r.confusion.tn,
                    r.metrics.recall,
                    r.metrics.precision,
                    r.metrics.specificity,
                    r.metrics.f_score,
                    r.metrics.accuracy,
                    r.train_time_s,
                    r.test_time_s,
                ]
            )
    written.append(
        _write_csv(
            out / "evaluation_summary.csv",
            [
                "configuration",
                "classifier",
                "tp",
                "fn",
                "fp",
                "tn",
                "recall",
                "precision",
                "specificity",
                "f_score",
                "accuracy",
                "train_time_s",
                "test_time_s",
            ],
            summary_rows,
        )
    )
    return written


def cmd_pipeline(config: PipelineConfig) -> list[Path]:
    """Select, distort, and evaluate in one run, with a manifest that echoes
    the effective config. An interrupted run leaves status 'incomplete'."""
    out = Path(config.output_dir)
    manifest_path = out / "manifest.json"
    manifest = {
        "status": "incomplete",
        "config": config.echo(),
        "versions": {
            "package": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
        },
        "stage_times_s": {},
    }
    _write_json(manifest_path, manifest)

    written = [manifest_path]
    try:
        for stage_name, stage in (
            ("select", cmd_select),
            ("distort", cmd_distort),
            ("evaluate", cmd_evaluate),
        ):
            start = time.perf_counter()
            written.extend(stage(config))
            manifest["stage_times_s"][stage_name] = time.perf_counter() - start
    except BaseException as exc:
        manifest["status"] = "incomplete"
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        _write_json(manifest_path, manifest)
        raise
    manifest["status"] = "complete"
    _write_json(manifest_path, manifest)
    return written


COMMANDS = {
    "select": cmd_select,
    "distort": cmd_distort,
    "evaluate": cmd_evaluate,
    "pipeline": cmd_pipeline,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="privids",
        description="Correlation-based feature selection, least-squares distortion, "
        "and classifier benchmarking for flow-record CSVs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0].lower())
        p.add_argument("--config", required=True, help="path to the YAML pipeline config")
        p.add_argument("--output", default=None, help="override the output directory")
        p.add_argument("--sample", type=int, default=None, help="stratified row-sample size")
        p.add_argument("--seed", type=int, default=None, help="override every seed in the config")
    return parser


def _apply_overrides(config: PipelineConfig, args) -> PipelineConfig:
    if args.output is not None:
        config.output_dir = args.output
    if args.sample is not None:
        config.sample_rows = args.sample
    if args.seed is not None:
        config.split_seed = args.seed
        config.sample_seed = args.seed
        config.classifier_specs = [
            classifiers.ClassifierSpec(kind=s.kind, hyperparameters=s.hyperparameters, seed=args.seed)
            for s in config.classifier_specs
        ]
    config.validate()
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _apply_overrides(load_config(args.config), args)
        written = COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except (DataFormatError, DataValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SingularMatrixError, UndefinedCorrelationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
