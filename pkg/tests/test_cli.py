import json

from pathlib import Path

import pytest

from typer.testing import CliRunner

from drivestyle import __version__
from drivestyle.cli import app

runner = CliRunner()


@pytest.fixture
def invoke(packaged_config_path):
    def run(*args: str):
        return runner.invoke(
            app, ["--config", packaged_config_path, "--quiet", *args]
        )
    return run


def _pipeline(invoke, directory: Path) -> dict[str, Path]:
    paths = {
        name: directory / filename
        for name, filename in [
            ("patterns", "patterns.json"),
            ("truth", "truth.json"),
            ("features", "features.csv"),
            ("kinematics", "kinematics.csv"),
            ("clusters", "clusters.json"),
            ("report", "report.json"),
        ]
    }
    plots = directory / "plots"
    steps = [
        ["synth", "--out", paths["patterns"], "--truth", paths["truth"]],
        ["features", "-i", paths["patterns"], "--out", paths["features"],
         "--dump-kinematics", paths["kinematics"]],
        ["cluster", "-i", paths["features"], "--out", paths["clusters"]],
        ["report", "--features", paths["features"],
         "--clusters", paths["clusters"], "--out", paths["report"],
         "--out-dir", plots],
    ]
    for step in steps:
        result = invoke(*map(str, step))
        assert result.exit_code == 0, result.output
    paths["silhouette"] = plots / "silhouette.csv"
    paths["sorted_omega"] = plots / "sorted_omega.csv"
    return paths


def test_pipeline(invoke, tmp_path):
    paths = _pipeline(invoke, tmp_path)

    assert len(json.loads(paths["patterns"].read_text())) == 330
    clusters = json.loads(paths["clusters"].read_text())
    assert clusters["k"] == 4
    assert clusters["linkage"] == "paper"
    assert len(clusters["labels"]) == 330
    report = json.loads(paths["report"].read_text())
    assert [row["cluster"] for row in report["cluster_stats"]] == [1, 2, 3, 4]
    assert report["elbow_index"] == 300
    assert list(report["negative_silhouettes"]) == [
        str(k) for k in range(2, 11)
    ]
    assert len(paths["silhouette"].read_text().splitlines()) == 331
    curve = paths["sorted_omega"].read_text().splitlines()
    assert curve[0] == "rank,value"
    values = [float(line.split(",")[1]) for line in curve[1:]]
    assert values == sorted(values)
    kinematics = paths["kinematics"].read_text().splitlines()
    assert len(kinematics) == 1 + 330 * (23 + 22 + 21)


def test_pipeline_is_byte_identical(invoke, tmp_path):
    first = _pipeline(invoke, tmp_path / "first")
    second = _pipeline(invoke, tmp_path / "second")

    for name, path in first.items():
        assert path.read_bytes() == second[name].read_bytes(), name


def _tdrive_lines(driver: str, count: int) -> list[str]:
    lines = []
    for i in range(count):
        minute, second = divmod(5 * i, 60)
        lines.append(
            f"{driver},2008-02-02 15:{minute:02d}:{second:02d},"
            f"{116.40 + 0.0005 * i:.5f},39.90000"
        )
    return lines


def test_preprocess_tdrive_logs(invoke, tmp_path):
    logs = tmp_path / "logs"
    logs.mkdir()
    lines = _tdrive_lines("1", 12)
    # A standstill in the middle and a line that cannot be parsed.
    lines[6] = lines[5].replace(":25,", ":30,")
    lines.append("1,2008-02-02")
    (logs / "1.txt").write_text("\n".join(lines) + "\n")
    (logs / "2.txt").write_text("\n".join(_tdrive_lines("2", 30)) + "\n")
    out = tmp_path / "patterns.json"
    summary = tmp_path / "summary.json"

    result = invoke(
        "preprocess", str(logs), "--out", str(out), "--summary", str(summary)
    )

    assert result.exit_code == 0, result.output
    patterns = json.loads(out.read_text())
    assert [pattern["id"] for pattern in patterns] == ["2#0", "2#1"]
    assert [len(pattern["t"]) for pattern in patterns] == [15, 15]
    counts = json.loads(summary.read_text())
    assert counts["files"] == 2
    assert counts["lines_read"] == 43
    assert counts["lines_skipped"] == 1
    assert counts["standstill_removed"] == 1
    assert counts["patterns_out"] == 2


def test_preprocess_region(invoke, tmp_path):
    logs = tmp_path / "1.txt"
    logs.write_text("\n".join(_tdrive_lines("1", 20)) + "\n")
    out = tmp_path / "patterns.json"
    summary = str(tmp_path / "summary.json")

    inside = invoke("preprocess", str(logs), "--out", str(out),
                    "--summary", summary, "--region", "beijing")
    assert inside.exit_code == 0, inside.output
    assert len(json.loads(out.read_text())) == 1

    outside = invoke("preprocess", str(logs), "--out", str(out),
                     "--summary", summary, "--bbox", "0,0,1,1")
    assert outside.exit_code == 0, outside.output
    assert json.loads(out.read_text()) == []


def test_preprocess_empty_directory(invoke, tmp_path):
    out = tmp_path / "patterns.json"

    result = invoke("preprocess", str(tmp_path), "--out", str(out),
                    "--summary", str(tmp_path / "summary.json"))

    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text()) == []


@pytest.mark.parametrize(
    "args",
    [
        ["preprocess", "x.txt", "--min-len", "30"],
        ["preprocess", "x.txt", "--max-gap", "0"],
        ["preprocess", "x.txt", "--bbox", "1,2,3"],
        ["preprocess", "x.txt", "--bbox", "0,0,1,1", "--region", "beijing"],
        ["preprocess", "x.txt", "--region", "atlantis"],
        ["preprocess", "x.txt", "--utc-offset", "20"],
        ["cluster", "--k", "0"],
        ["cluster", "--k", "many"],
        ["cluster", "--theta", "1.5"],
        ["cluster", "--feature", "speed"],
        ["cluster", "--linkage", "median"],
        ["features", "--window", "0"],
        ["report", "--k-max", "1"],
        ["synth", "--length", "30"],
    ],
)
def test_bad_arguments_exit_2(invoke, tmp_path, args):
    out = tmp_path / "out"

    result = invoke(*args, "--out", str(out))

    assert result.exit_code == 2
    assert not out.exists()


def test_verbose_and_quiet_exclude_each_other(packaged_config_path):
    result = runner.invoke(
        app, ["--config", packaged_config_path, "-v", "-q", "synth"]
    )
    assert result.exit_code == 2


def test_unreadable_config(tmp_path):
    result = runner.invoke(
        app, ["--config", str(tmp_path / "nope.toml"), "synth"]
    )
    assert result.exit_code == 2


def test_missing_input_exits_1(invoke, tmp_path):
    out = tmp_path / "features.csv"

    result = invoke("features", "-i", str(tmp_path / "missing.json"),
                    "--out", str(out))

    assert result.exit_code == 1
    assert not out.exists()


def test_malformed_patterns_exit_1(invoke, tmp_path):
    patterns = tmp_path / "patterns.json"
    patterns.write_text('{"id": "not a list"}')
    out = tmp_path / "features.csv"

    result = invoke("features", "-i", str(patterns), "--out", str(out))

    assert result.exit_code == 1
    assert not out.exists()


def test_cluster_to_stdout(invoke, tmp_path):
    features = tmp_path / "features.csv"
    features.write_text(
        "pattern_id,omega,jerk_mean,jerk_std,mmk_ratio,mmk_class\n"
        "a,0.1,0,1,2,aggressive\n"
        "b,0.11,0,1,2,aggressive\n"
        "c,0.9,0,1,2,aggressive\n"
    )

    result = invoke("cluster", "-i", str(features), "--out", "-", "-k", "2")

    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["labels"] == {"a": 1, "b": 1, "c": 2}


def test_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert result.stdout.strip() == __version__


@pytest.mark.parametrize(
    ("command", "setting", "broken"),
    [
        (["cluster"], "theta = 0.05", "theta = 2.0"),
        (["features"], "mmk_window = 10.0", "mmk_window = -1.0"),
        (["synth"], "seed = 42", "seed = -1"),
        (["preprocess", "x.txt"], 'split_policy = "balanced"',
         'split_policy = "random"'),
        (["report"], "k_max = 10", "k_max = \"ten\""),
        (["cluster"], 'directory = "output"', "directory = 3"),
    ],
)
def test_bad_config_values_exit_2(
        packaged_config_path, tmp_path, command, setting, broken):
    text = Path(packaged_config_path).read_text()
    assert setting in text
    config = tmp_path / "config.toml"
    config.write_text(text.replace(setting, broken))
    out = tmp_path / "out"

    result = runner.invoke(
        app, ["--config", str(config), *command, "--out", str(out)]
    )

    assert result.exit_code == 2
    assert not out.exists()


def _benchmark_features(invoke, directory: Path) -> Path:
    patterns = directory / "patterns.json"
    features = directory / "features.csv"
    steps = [
        ["synth", "--out", patterns, "--truth", directory / "truth.json"],
        ["features", "-i", patterns, "--out", features],
    ]
    for step in steps:
        result = invoke(*map(str, step))
        assert result.exit_code == 0, result.output
    return features


def test_cluster_linkages_agree_on_benchmark(invoke, tmp_path):
    features = _benchmark_features(invoke, tmp_path)
    documents = {}
    for linkage in ["paper", "standard"]:
        out = tmp_path / f"{linkage}.json"
        result = invoke("cluster", "-i", str(features), "--out", str(out),
                        "--linkage", linkage)
        assert result.exit_code == 0, result.output
        documents[linkage] = json.loads(out.read_text())

    assert documents["paper"]["k"] == 4
    assert documents["standard"]["k"] == 4
    assert documents["standard"]["labels"] == documents["paper"]["labels"]


def test_cluster_single_cluster_wcss_is_total_sse(invoke, tmp_path):
    features = _benchmark_features(invoke, tmp_path)
    out = tmp_path / "clusters.json"

    result = invoke("cluster", "-i", str(features), "--out", str(out),
                    "-k", "1")

    assert result.exit_code == 0, result.output
    document = json.loads(out.read_text())
    assert document["k"] == 1
    assert set(document["labels"].values()) == {1}
    omegas = [
        float(line.split(",")[1])
        for line in features.read_text().splitlines()[1:]
    ]
    mean = sum(omegas) / len(omegas)
    total_sse = sum((value - mean) ** 2 for value in omegas)
    assert document["wcss"][0] == pytest.approx(total_sse, rel=1e-6)
