"""Command-line surface: formats, exit codes, and byte determinism."""

import json

import numpy as np
import pytest

from attrmeaning import encode
from attrmeaning.cli import main, model_from_dict

# ---------------------------------------------------------------------------
# fixtures


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def features_csv(tmp_path):
    rng = np.random.default_rng(0)
    F = rng.uniform(0.05, 1.0, size=(40, 3))
    lines = [",".join(f"{v:.6f}" for v in row) for row in F]
    return _write(tmp_path / "features.csv", "\n".join(lines) + "\n")


@pytest.fixture
def labels_csv(tmp_path):
    rng = np.random.default_rng(1)
    y = rng.integers(0, 2, size=40)
    return _write(tmp_path / "labels.csv", "\n".join(str(v) for v in y) + "\n")


@pytest.fixture
def meaningful_csv(tmp_path):
    rng = np.random.default_rng(2)
    S = np.where(rng.random((40, 5)) < 0.5, 1, -1)
    lines = [",".join(str(v) for v in row) for row in S]
    return _write(tmp_path / "meaningful.csv", "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# discover


def test_discover_lsh_writes_model_and_codes(tmp_path, features_csv):
    model_out = tmp_path / "model.json"
    codes_out = tmp_path / "codes.csv"
    rc = main(
        [
            "discover", "--method", "lsh", "--bits", "4",
            "--features", features_csv,
            "--model-out", str(model_out), "--codes-out", str(codes_out),
            "--seed", "7",
        ]
    )
    assert rc == 0
    doc = json.loads(model_out.read_text())
    assert doc["type"] == "lsh"
    assert doc["bits"] == 4
    assert doc["dims"] == 3
    assert doc["seed"] == 7
    rows = codes_out.read_text().strip().splitlines()
    assert len(rows) == 40
    assert set(",".join(rows).split(",")) <= {"1", "-1"}


def test_discover_model_round_trips(tmp_path, features_csv, labels_csv):
    for method, extra in (
        ("lsh", []),
        ("sh", []),
        ("mmc", ["--labels", labels_csv]),
    ):
        model_out = tmp_path / f"{method}.json"
        codes_out = tmp_path / f"{method}.csv"
        rc = main(
            [
                "discover", "--method", method, "--bits", "3",
                "--features", features_csv,
                "--model-out", str(model_out), "--codes-out", str(codes_out),
                "--seed", "1", *extra,
            ]
        )
        assert rc == 0
        model = model_from_dict(json.loads(model_out.read_text()))
        F = np.loadtxt(features_csv, delimiter=",")
        Z = np.loadtxt(codes_out, delimiter=",", dtype=np.int64)
        assert np.array_equal(encode(model, F), Z.astype(np.int8))


def test_discover_mmc_requires_labels(tmp_path, features_csv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(
            [
                "discover", "--method", "mmc", "--bits", "2",
                "--features", features_csv,
                "--model-out", str(tmp_path / "m.json"),
                "--codes-out", str(tmp_path / "z.csv"),
            ]
        )
    assert exc.value.code == 2
    assert "--labels" in capsys.readouterr().err


def test_discover_lift_and_pca_flags(tmp_path, features_csv):
    rc = main(
        [
            "discover", "--method", "lsh", "--bits", "4",
            "--features", features_csv, "--lift", "--pca-keep", "0.6",
            "--model-out", str(tmp_path / "m.json"),
            "--codes-out", str(tmp_path / "z.csv"),
            "--seed", "0",
        ]
    )
    assert rc == 0
    doc = json.loads((tmp_path / "m.json").read_text())
    # 3 input dims -> 9 lifted -> ceil(0.6 * 9) = 6 kept directions
    assert doc["dims"] == 6


def test_discover_is_byte_deterministic(tmp_path, features_csv):
    args = [
        "discover", "--method", "lsh", "--bits", "4",
        "--features", features_csv,
        "--model-out", str(tmp_path / "m.json"),
        "--codes-out", str(tmp_path / "z.csv"),
        "--seed", "3",
    ]
    assert main(args) == 0
    first = ((tmp_path / "m.json").read_bytes(), (tmp_path / "z.csv").read_bytes())
    assert main(args) == 0
    second = ((tmp_path / "m.json").read_bytes(), (tmp_path / "z.csv").read_bytes())
    assert first == second


# ---------------------------------------------------------------------------
# distance


def test_distance_report_fields(tmp_path, meaningful_csv):
    rng = np.random.default_rng(3)
    D = np.where(rng.random((40, 2)) < 0.5, 1, -1)
    discovered = _write(
        tmp_path / "disc.csv",
        "\n".join(",".join(str(v) for v in row) for row in D) + "\n",
    )
    out = tmp_path / "report.json"
    rc = main(
        [
            "distance", "--meaningful", meaningful_csv,
            "--discovered", discovered, "--mode", "cvx", "--out", str(out),
        ]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["mode"] == "cvx"
    assert doc["n_instances"] == 40
    assert doc["subspace_columns"] == 5
    assert doc["discovered_columns"] == 2
    assert len(doc["per_attribute_residuals"]) == 2
    assert doc["converged"] == [True, True]
    assert doc["meta"]["version"]
    assert "seed" in doc["meta"]
    cvx_mean = doc["mean_distance"]
    # plain mode reports no convergence flags and can only do better
    rc = main(
        [
            "distance", "--meaningful", meaningful_csv,
            "--discovered", discovered, "--mode", "plain", "--out", str(out),
        ]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["converged"] is None
    assert doc["mean_distance"] <= cvx_mean + 1e-9


def test_distance_row_mismatch_exit_code(tmp_path, meaningful_csv, capsys):
    short = _write(tmp_path / "short.csv", "1,-1\n-1,1\n")
    rc = main(
        [
            "distance", "--meaningful", meaningful_csv, "--discovered", short,
            "--mode", "plain", "--out", str(tmp_path / "r.json"),
        ]
    )
    assert rc == 3
    err = capsys.readouterr().err
    assert "40" in err and "2" in err


def test_malformed_attribute_token_exit_code(tmp_path, meaningful_csv, capsys):
    bad = _write(tmp_path / "bad.csv", "1,-1\n1,2\n")
    rc = main(
        [
            "distance", "--meaningful", bad, "--discovered", bad,
            "--mode", "plain", "--out", str(tmp_path / "r.json"),
        ]
    )
    assert rc == 3
    err = capsys.readouterr().err
    assert "line 2" in err and "field 2" in err
    assert not (tmp_path / "r.json").exists()  # no partial outputs


def test_malformed_feature_token_exit_code(tmp_path, capsys):
    bad = _write(tmp_path / "f.csv", "0.5,abc\n")
    rc = main(
        [
            "discover", "--method", "lsh", "--bits", "2", "--features", bad,
            "--model-out", str(tmp_path / "m.json"),
            "--codes-out", str(tmp_path / "z.csv"),
        ]
    )
    assert rc == 3
    assert "not a number" in capsys.readouterr().err


def test_ragged_rows_exit_code(tmp_path, capsys):
    bad = _write(tmp_path / "r.csv", "1,-1\n1\n")
    rc = main(
        [
            "distance", "--meaningful", bad, "--discovered", bad,
            "--mode", "plain", "--out", str(tmp_path / "o.json"),
        ]
    )
    assert rc == 3
    assert "expected 2" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path, capsys):
    rc = main(
        [
            "distance", "--meaningful", str(tmp_path / "nope.csv"),
            "--discovered", str(tmp_path / "nope.csv"),
            "--mode", "plain", "--out", str(tmp_path / "r.json"),
        ]
    )
    assert rc == 3


def test_usage_errors_exit_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["distance", "--mode", "sideways"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# bench


def test_bench_split_validate(tmp_path, meaningful_csv):
    out = tmp_path / "bench.json"
    rc = main(
        [
            "bench", "split-validate", "--meaningful", meaningful_csv,
            "--seed", "4", "--out", str(out),
        ]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    names = [row["name"] for row in doc["rows"]]
    assert "MeaningfulAttributeSet" in names
    assert "NonMeaningfulAttributeSet" in names
    assert doc["meta"]["seed"] == 4


def test_bench_split_validate_with_methods(tmp_path, meaningful_csv):
    rng = np.random.default_rng(5)
    Z = np.where(rng.random((40, 3)) < 0.5, 1, -1)
    codes = _write(
        tmp_path / "codes.csv",
        "\n".join(",".join(str(v) for v in row) for row in Z) + "\n",
    )
    out = tmp_path / "bench.json"
    rc = main(
        [
            "bench", "split-validate", "--meaningful", meaningful_csv,
            "--method", f"mycoder={codes}", "--seed", "4", "--out", str(out),
        ]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert any(row["name"] == "mycoder" for row in doc["rows"])


def test_bench_method_flag_format(tmp_path, meaningful_csv, capsys):
    rc = main(
        [
            "bench", "split-validate", "--meaningful", meaningful_csv,
            "--method", "justaname", "--out", str(tmp_path / "b.json"),
        ]
    )
    assert rc == 3
    assert "NAME=PATH" in capsys.readouterr().err


def test_bench_noise_curve(tmp_path, meaningful_csv):
    out = tmp_path / "nc.json"
    csv_out = tmp_path / "nc.csv"
    rc = main(
        [
            "bench", "noise-curve", "--discovered", meaningful_csv,
            "--meaningful", meaningful_csv, "--max-noise", "4", "--step", "2",
            "--trials", "2", "--seed", "1",
            "--out", str(out), "--csv-out", str(csv_out),
        ]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["counts"] == [0, 2, 4]
    assert len(doc["distances"]) == 3
    lines = csv_out.read_text().strip().splitlines()
    assert lines[0] == "count,mean_distance"
    assert len(lines) == 4
    assert lines[1].startswith("0,")


def test_bench_noise_curve_bad_grid(tmp_path, meaningful_csv, capsys):
    rc = main(
        [
            "bench", "noise-curve", "--discovered", meaningful_csv,
            "--meaningful", meaningful_csv, "--max-noise", "5", "--step", "2",
            "--trials", "1", "--seed", "1",
            "--out", str(tmp_path / "o.json"), "--csv-out", str(tmp_path / "o.csv"),
        ]
    )
    assert rc == 3
    assert "multiple" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# keywords


@pytest.fixture
def keyword_files(tmp_path):
    codes = _write(
        tmp_path / "codes.csv",
        "1,-1,1\n-1,1,-1\n1,1,-1\n",
    )
    names = _write(
        tmp_path / "names.csv",
        "bit,positive_name\n0,Striped\n1,fuzzy\n2,striped\n",
    )
    return codes, names


def test_keywords_generate(tmp_path, keyword_files):
    codes, names = keyword_files
    out = tmp_path / "kw.json"
    rc = main(["keywords", "generate", "--codes", codes, "--names", names, "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["vocabulary"] == ["Striped", "fuzzy"]
    # rows: 0 fires striped (bits 0 or 2), 1 fires fuzzy, 2 fires both
    assert doc["items"]["0"] == ["Striped"]
    assert doc["items"]["1"] == ["fuzzy"]
    assert doc["items"]["2"] == ["Striped", "fuzzy"]


def test_keywords_evaluate(tmp_path, keyword_files):
    codes, names = keyword_files
    kw = tmp_path / "kw.json"
    main(["keywords", "generate", "--codes", codes, "--names", names, "--out", str(kw)])
    truth = _write(
        tmp_path / "truth.csv",
        "item_id,keyword,suitable\n"
        "0,Striped,1\n1,fuzzy,0\n2,Striped,1\n2,fuzzy,1\n",
    )
    out = tmp_path / "eval.json"
    rc = main(
        ["keywords", "evaluate", "--keywords", str(kw), "--truth", truth, "--out", str(out)]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["emitted"] == 4
    assert doc["suitable"] == 3
    assert doc["overall"] == pytest.approx(3 / 4)
    assert doc["per_action"] is None


def test_keywords_evaluate_with_actions(tmp_path, keyword_files):
    codes, names = keyword_files
    kw = tmp_path / "kw.json"
    main(["keywords", "generate", "--codes", codes, "--names", names, "--out", str(kw)])
    truth = _write(
        tmp_path / "truth.csv",
        "item_id,keyword,suitable\n"
        "0,Striped,1\n1,fuzzy,0\n2,Striped,1\n2,fuzzy,1\n",
    )
    actions = _write(
        tmp_path / "actions.csv",
        "item_id,action\n0,walk\n1,walk\n2,run\n",
    )
    out = tmp_path / "eval.json"
    rc = main(
        [
            "keywords", "evaluate", "--keywords", str(kw), "--truth", truth,
            "--actions", actions, "--out", str(out),
        ]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["per_action"]["walk"] == pytest.approx(1 / 2)
    assert doc["per_action"]["run"] == 1.0


def test_keywords_empty_truth_exits_three(tmp_path, keyword_files, capsys):
    codes, names = keyword_files
    kw = tmp_path / "kw.json"
    main(["keywords", "generate", "--codes", codes, "--names", names, "--out", str(kw)])
    truth = _write(tmp_path / "empty.csv", "item_id,keyword,suitable\n")
    rc = main(
        [
            "keywords", "evaluate", "--keywords", str(kw), "--truth", truth,
            "--out", str(tmp_path / "e.json"),
        ]
    )
    assert rc == 3
    assert "missing" in capsys.readouterr().err


def test_naming_csv_header_enforced(tmp_path, keyword_files, capsys):
    codes, _ = keyword_files
    bad = _write(tmp_path / "bad_names.csv", "index,name\n0,striped\n")
    rc = main(
        [
            "keywords", "generate", "--codes", codes, "--names", bad,
            "--out", str(tmp_path / "kw.json"),
        ]
    )
    assert rc == 3
    assert "header" in capsys.readouterr().err


def test_reports_have_no_timestamps(tmp_path, meaningful_csv):
    out = tmp_path / "report.json"
    rc = main(
        [
            "distance", "--meaningful", meaningful_csv,
            "--discovered", meaningful_csv, "--mode", "plain", "--out", str(out),
        ]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    keys = set(doc) | set(doc["meta"])
    assert not keys & {"time", "timestamp", "date", "created", "generated_at"}
    first = out.read_bytes()
    main(
        [
            "distance", "--meaningful", meaningful_csv,
            "--discovered", meaningful_csv, "--mode", "plain", "--out", str(out),
        ]
    )
    assert out.read_bytes() == first
