"""
Pruebas del CLI: sub-comandos de punta a punta y códigos de salida
"""
import json

import pandas as pd
import pytest

from qaware.main import build_parser, main


@pytest.fixture
def task_file(tmp_path):
    path = tmp_path / "tasks" / "pqc.json"
    path.parent.mkdir()
    path.write_text(json.dumps({"kind": "random_pqc", "n_qubits": 3, "layers": 1, "seed": 1, "task_id": "pqc3"}),
                    encoding="utf-8")
    return path


def test_global_flags_before_or_after_command():
    parser = build_parser()
    before = parser.parse_args(["--threads", "3", "bench", "--suite", "s.json"])
    after = parser.parse_args(["bench", "--suite", "s.json", "--threads", "3", "--seed", "9"])
    assert before.threads == 3
    assert after.threads == 3
    assert after.seed == 9


def test_command_is_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_run_then_report(task_file, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["run", "--task", str(task_file), "--optimizer", "adam", "--lr", "0.05",
                 "--steps", "3", "--seeds", "2", "--out", str(out)])
    assert code == 0
    assert "adam(lr=0.05)" in capsys.readouterr().out

    results = pd.read_csv(out / "results.csv")
    assert set(results["optimizer_id"]) == {"adam(lr=0.05)"}
    assert results["seed"].nunique() == 2

    svg = tmp_path / "curves.svg"
    assert main(["report", "--in", str(out), "--kind", "svg_curves", "--out", str(svg)]) == 0
    assert svg.is_file()


def test_run_is_reproducible(task_file, tmp_path, capsys):
    args = ["run", "--task", str(task_file), "--optimizer", "gd", "--steps", "2", "--seeds", "1", "--seed", "4"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "results.csv").read_bytes() == (tmp_path / "b" / "results.csv").read_bytes()


def test_bench_command(task_file, tmp_path, capsys):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({
        "name": "mini",
        "entries": [{"task": {"kind": "random_pqc", "n_qubits": 2, "layers": 1}, "optimizers": ["gd", "qngd"],
                     "replicates": 1, "steps": 2}],
    }), encoding="utf-8")
    assert main(["bench", "--suite", str(suite), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "summary.csv").is_file()


def test_bench_seed_flag_overrides_suite_seed(tmp_path, capsys):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({
        "name": "mini",
        "seed": 7,
        "entries": [{"task": {"kind": "random_pqc", "n_qubits": 2, "layers": 1}, "optimizers": ["gd"],
                     "replicates": 1, "steps": 2}],
    }), encoding="utf-8")

    def results(name, *flags):
        out = tmp_path / name
        assert main([*flags, "bench", "--suite", str(suite), "--out", str(out)]) == 0
        return (out / "results.csv").read_bytes()

    assert results("seed1", "--seed", "1") != results("seed2", "--seed", "2")
    assert results("suite_seed") == results("seed7", "--seed", "7")


@pytest.mark.slow
def test_meta_train_command(task_file, tmp_path):
    config = tmp_path / "meta.json"
    config.write_text(json.dumps({
        "schedule": [1, 2], "trajectories_per_stage": 1, "validation_seeds": [5], "hidden_size": 4,
    }), encoding="utf-8")
    out = tmp_path / "ckpt" / "l2o.json"
    assert main(["meta-train", "--task", str(task_file), "--config", str(config), "--out", str(out)]) == 0
    assert out.is_file()
    assert (tmp_path / "ckpt" / "l2o_log.csv").is_file()


def test_invalid_input_exits_with_2(tmp_path):
    assert main(["run", "--task", str(tmp_path / "missing.json"), "--optimizer", "gd",
                 "--out", str(tmp_path / "out")]) == 2


def test_bad_optimizer_exits_with_2(task_file, tmp_path):
    assert main(["run", "--task", str(task_file), "--optimizer", "sgd", "--out", str(tmp_path / "out")]) == 2


def test_missing_results_exit_with_2(tmp_path):
    assert main(["report", "--in", str(tmp_path), "--kind", "csv", "--out", str(tmp_path / "r.csv")]) == 2
