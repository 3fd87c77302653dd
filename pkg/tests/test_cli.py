import json
import subprocess
import sys

import pytest

from mctree.cli import main


def test_oracle_check_exit_zero(capsys):
    assert main(["oracle-check", "--trials", "40", "--seed", "1"]) == 0
    assert "passed" in capsys.readouterr().out


def test_oracle_check_zero_trials_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["oracle-check", "--trials", "0"])
    assert exc.value.code == 1


def test_unknown_format_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["synth", "--format", "xml"])
    assert exc.value.code == 1


def test_unknown_algorithm_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["synth", "--algos", "gini-features,bogus"])
    assert exc.value.code == 1


def test_missing_csv_is_io_error(tmp_path):
    assert main(["real", "--csv", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "r.json")]) == 2


def test_bad_csv_is_io_error(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b,y\n1,x,0\n")
    assert main(["real", "--csv", str(p), "--out", str(tmp_path / "r.json")]) == 2


def test_real_requires_csv(tmp_path):
    assert main(["real", "--out", str(tmp_path / "r.json")]) == 1


def test_synth_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["synth", "--classes", "2", "--dims", "3", "--train-sizes", "50", "--test-size", "30",
                 "--replicates", "3", "--algos", "gini-features,maxcut-node-means", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == "report/v1"
    assert len(rep["cells"]) == 6
    assert "Max Cut Node Means PCA" in capsys.readouterr().out


def test_synth_csv_format(tmp_path):
    out = tmp_path / "r.csv"
    code = main(["synth", "--dims", "3", "--train-sizes", "40", "--test-size", "20", "--replicates", "2",
                 "--algos", "gini-features", "--out", str(out), "--format", "csv"])
    assert code == 0
    assert len(out.read_text().strip().splitlines()) == 3
    assert (tmp_path / "r.aggregates.csv").exists()


def test_real_holdout_and_spec_file(tmp_path, iris_path):
    out = tmp_path / "r.json"
    assert main(["real", "--csv", str(iris_path), "--label", "species", "--holdout", "0.7",
                 "--algos", "gini-features", "--out", str(out)]) == 0
    spec = json.loads(out.read_text())["spec"]
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    out2 = tmp_path / "r2.json"
    assert main(["real", "--spec", str(spec_path), "--out", str(out2)]) == 0
    a = json.loads(out.read_text())["cells"][0]
    b = json.loads(out2.read_text())["cells"][0]
    assert a["accuracy"] == b["accuracy"]


def test_train_predict_round_trip(tmp_path, iris_path, capsys):
    model = tmp_path / "m.json"
    assert main(["train", "--csv", str(iris_path), "--label", "species", "--model", str(model)]) == 0
    preds = tmp_path / "p.txt"
    assert main(["predict", "--model", str(model), "--csv", str(iris_path), "--label", "species",
                 "--out", str(preds)]) == 0
    lines = preds.read_text().split()
    assert len(lines) == 150
    assert set(lines) == {"setosa", "versicolor", "virginica"}
    # grown to purity on distinct rows, so training accuracy is near perfect
    assert "accuracy 1.0000" in capsys.readouterr().err


def test_predict_dimension_mismatch(tmp_path, iris_path):
    model = tmp_path / "m.json"
    main(["train", "--csv", str(iris_path), "--label", "species", "--model", str(model)])
    other = tmp_path / "x.csv"
    other.write_text("a,b\n1,2\n")
    assert main(["predict", "--model", str(model), "--csv", str(other)]) == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "mctree", "oracle-check", "--trials", "5"],
                       capture_output=True, text=True)
    assert r.returncode == 0
