import hashlib
import json

import pytest
import yaml

from privids.cli import NONDETERMINISTIC_KEYS, cmd_pipeline, main
from privids.config import load_config
from privids.errors import ConfigError


def _config_file(tmp_path, dataset_path, **overrides):
    payload = {
        "dataset": {"path": str(dataset_path)},
        "output_dir": str(tmp_path / "out"),
        "classifiers": [{"kind": "knn", "hyperparameters": {"k": 3}, "seed": 42}],
        "timing_repeats": 1,
    }
    payload.update(overrides)
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(payload), encoding="utf-8")
    return path


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k not in NONDETERMINISTIC_KEYS}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def test_load_config_defaults(tmp_path, small_csv):
    config = load_config(_config_file(tmp_path, small_csv))
    assert config.pcc_threshold == 0.85
    assert config.test_fraction == 0.3
    assert config.split_seed == 42
    assert config.drop_columns == ["id"]
    assert config.category_column == "attack_cat"
    assert [s.kind for s in config.classifier_specs] == ["knn"]
    echoed = config.echo()
    assert echoed["classifiers"][0]["hyperparameters"]["k"] == 3


def test_load_config_fills_all_five_classifiers_by_default(tmp_path, small_csv):
    path = tmp_path / "bare.yaml"
    path.write_text(yaml.safe_dump({"dataset": {"path": str(small_csv)}}), encoding="utf-8")
    config = load_config(path)
    assert [s.kind for s in config.classifier_specs] == [
        "knn", "naive_bayes", "decision_tree", "random_forest", "svm",
    ]


def test_load_config_rejects_unknown_keys(tmp_path, small_csv):
    for overrides in ({"mystery": 1}, {"dataset": {"path": str(small_csv), "frobnicate": True}}):
        path = tmp_path / "bad.yaml"
        payload = {"dataset": {"path": str(small_csv)}}
        payload.update(overrides)
        path.write_text(yaml.safe_dump(payload), encoding="utf-8")
        with pytest.raises(ConfigError, match="unknown keys"):
            load_config(path)


def test_load_config_validates_ranges(tmp_path, small_csv):
    with pytest.raises(ConfigError, match="pcc_threshold"):
        load_config(_config_file(tmp_path, small_csv, selection={"pcc_threshold": 1.5}))
    with pytest.raises(ConfigError, match="configurations"):
        load_config(_config_file(tmp_path, small_csv, configurations=["nonsense"]))
    with pytest.raises(ConfigError, match="hyperparameter"):
        load_config(
            _config_file(
                tmp_path, small_csv,
                classifiers=[{"kind": "knn", "hyperparameters": {"k": 0}}],
            )
        )


def test_cmd_select_outputs(tmp_path, small_csv, capsys):
    config_path = _config_file(tmp_path, small_csv)
    assert main(["select", "--config", str(config_path)]) == 0
    out = tmp_path / "out"
    assert (out / "correlation_matrix.csv").is_file()
    assert (out / "pcc_ranking.csv").is_file()
    report = json.loads((out / "selection_report.json").read_text())
    assert report["threshold"] == 0.85
    assert set(report["kept"]).isdisjoint(d["name"] for d in report["dropped"])
    assert len(report["kept"]) + len(report["dropped"]) == 42
    for entry in report["dropped"]:
        assert abs(entry["coefficient"]) > 0.85
    printed = capsys.readouterr().out
    assert "selection_report.json" in printed


def test_cmd_select_threshold_one_keeps_everything(tmp_path, small_csv):
    config_path = _config_file(tmp_path, small_csv, selection={"pcc_threshold": 1.0})
    assert main(["select", "--config", str(config_path)]) == 0
    report = json.loads((tmp_path / "out" / "selection_report.json").read_text())
    assert report["dropped"] == []


def test_missing_dataset_exits_2(tmp_path, capsys):
    config_path = _config_file(tmp_path, tmp_path / "absent.csv")
    assert main(["select", "--config", str(config_path)]) == 2
    assert "not found" in capsys.readouterr().err


def test_bad_config_exits_1(tmp_path, small_csv, capsys):
    config_path = _config_file(tmp_path, small_csv, selection={"pcc_threshold": 0.0})
    assert main(["select", "--config", str(config_path)]) == 1
    assert "pcc_threshold" in capsys.readouterr().err


def test_singular_dataset_exits_3(tmp_path, capsys):
    rows = "\n".join(f"{i},{i * 2},{i % 2}" for i in range(1, 9))
    dataset = tmp_path / "dup.csv"
    dataset.write_text("a,b,label\n" + rows + "\n", encoding="utf-8")
    config_path = _config_file(
        tmp_path, dataset,
        dataset={"path": str(dataset), "drop_columns": [], "category_column": None},
        configurations=["lsm_only"],
    )
    assert main(["distort", "--config", str(config_path)]) == 3
    assert "rank" in capsys.readouterr().err


def test_cmd_distort_outputs_and_timing_order(tmp_path, small_csv):
    config_path = _config_file(
        tmp_path, small_csv, configurations=["lsm_only", "pcc_lsm"], timing_repeats=3
    )
    assert main(["distort", "--config", str(config_path)]) == 0
    out = tmp_path / "out"
    for tag in ("lsm_only", "pcc_lsm"):
        assert (out / f"distorted_{tag}.csv").is_file()
        model = json.loads((out / f"distortion_model_{tag}.json").read_text())
        assert len(model["beta"]) == len(model["columns"])
        timing = json.loads((out / f"distortion_timing_{tag}.json").read_text())
        assert timing["distortion_time_s"] > 0.0
    full = json.loads((out / "distortion_timing_lsm_only.json").read_text())
    reduced = json.loads((out / "distortion_timing_pcc_lsm.json").read_text())
    assert reduced["m"] < full["m"]


def test_cmd_distort_requires_distorted_configuration(tmp_path, small_csv):
    config_path = _config_file(tmp_path, small_csv, configurations=["baseline"])
    assert main(["distort", "--config", str(config_path)]) == 1


def test_cmd_evaluate_file_contract(tmp_path, small_csv):
    config_path = _config_file(
        tmp_path, small_csv,
        configurations=["baseline", "pcc_only", "lsm_only", "pcc_lsm"],
    )
    assert main(["evaluate", "--config", str(config_path)]) == 0
    out = tmp_path / "out"
    evaluations = sorted(p.name for p in out.glob("evaluation_*.json"))
    assert evaluations == [
        "evaluation_baseline.json",
        "evaluation_lsm_only.json",
        "evaluation_pcc_lsm.json",
        "evaluation_pcc_only.json",
    ]
    privacy = sorted(p.name for p in out.glob("privacy_*.json"))
    assert privacy == ["privacy_lsm_only.json", "privacy_pcc_lsm.json"]
    assert (out / "utility_comparison.json").is_file()
    assert (out / "privacy_measures.csv").is_file()
    assert (out / "evaluation_summary.csv").is_file()
    baseline = json.loads((out / "evaluation_baseline.json").read_text())
    assert [c["kind"] for c in baseline["classifiers"]] == ["knn"]
    comparison = json.loads((out / "utility_comparison.json").read_text())
    assert {c["configuration"] for c in comparison["comparisons"]} == {
        "pcc_only", "lsm_only", "pcc_lsm",
    }
    header = (out / "privacy_measures.csv").read_text().splitlines()[0]
    assert header == "configuration,VD,RP,RK,CP,CK,Time"


def test_seeded_rerun_reproduces_reports(tmp_path, small_csv):
    config_path = _config_file(
        tmp_path, small_csv, configurations=["baseline", "pcc_lsm"],
        output_dir=str(tmp_path / "run1"),
    )
    assert main(["evaluate", "--config", str(config_path)]) == 0
    config_path2 = _config_file(
        tmp_path, small_csv, configurations=["baseline", "pcc_lsm"],
        output_dir=str(tmp_path / "run2"),
    )
    assert main(["evaluate", "--config", str(config_path2)]) == 0
    for name in ("evaluation_baseline.json", "evaluation_pcc_lsm.json", "privacy_pcc_lsm.json"):
        first = _strip_timing(json.loads((tmp_path / "run1" / name).read_text()))
        second = _strip_timing(json.loads((tmp_path / "run2" / name).read_text()))
        assert first == second, name


def test_pipeline_writes_complete_manifest(tmp_path, small_csv):
    config_path = _config_file(
        tmp_path, small_csv, configurations=["baseline", "pcc_lsm"],
    )
    assert main(["pipeline", "--config", str(config_path)]) == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["status"] == "complete"
    assert manifest["config"]["selection"]["pcc_threshold"] == 0.85
    assert manifest["config"]["classifiers"][0]["hyperparameters"]["k"] == 3
    assert set(manifest["stage_times_s"]) == {"select", "distort", "evaluate"}


def test_interrupted_pipeline_marks_manifest_incomplete(tmp_path):
    # duplicate-valued columns make the distortion stage abort after select
    rows = "\n".join(f"{i},{i * 2},{i % 2}" for i in range(1, 9))
    dataset = tmp_path / "dup.csv"
    dataset.write_text("a,b,label\n" + rows + "\n", encoding="utf-8")
    config_path = _config_file(
        tmp_path, dataset,
        dataset={"path": str(dataset), "drop_columns": [], "category_column": None},
        configurations=["lsm_only"],
    )
    assert main(["pipeline", "--config", str(config_path)]) == 3
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["status"] == "incomplete"
    assert "rank" in manifest["error"]


def test_cli_overrides(tmp_path, small_csv):
    config_path = _config_file(tmp_path, small_csv)
    override_dir = tmp_path / "elsewhere"
    assert (
        main([
            "select", "--config", str(config_path),
            "--output", str(override_dir), "--sample", "200", "--seed", "7",
        ])
        == 0
    )
    assert (override_dir / "selection_report.json").is_file()


def test_sample_larger_than_dataset_exits_2(tmp_path, small_csv):
    config_path = _config_file(tmp_path, small_csv)
    assert main(["select", "--config", str(config_path), "--sample", "100000"]) == 2


def test_sha256_verification(tmp_path, small_csv):
    digest = hashlib.sha256(small_csv.read_bytes()).hexdigest()
    good = _config_file(
        tmp_path, small_csv, dataset={"path": str(small_csv), "sha256": digest}
    )
    assert main(["select", "--config", str(good)]) == 0
    bad = _config_file(
        tmp_path, small_csv, dataset={"path": str(small_csv), "sha256": "0" * 64}
    )
    assert main(["select", "--config", str(bad)]) == 2


def test_pipeline_function_returns_written_paths(tmp_path, small_csv):
    config = load_config(
        _config_file(tmp_path, small_csv, configurations=["baseline", "lsm_only"])
    )
    written = cmd_pipeline(config)
    names = {p.name for p in written}
    assert "manifest.json" in names
    assert "selection_report.json" in names
    assert "evaluation_baseline.json" in names
