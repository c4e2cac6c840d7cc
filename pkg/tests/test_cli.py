import json
import subprocess
import sys

import numpy as np
import pytest

from csmds.cli import main
from csmds.io import content_digest, read_matrix, read_table, read_trace, write_matrix


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_generate_swissroll(work):
    assert main(["generate", "swissroll", "--n", "2000", "--noise", "0", "--seed", "1",
                 "--out", "sr.csv"]) == 0
    pts, extras = read_matrix("sr.csv")
    assert pts.shape == (2000, 3) and "aux" in extras
    manifest = json.loads((work / "sr.manifest.json").read_text())
    assert manifest["command"] == "generate" and manifest["seed"] == 1


def test_generate_zero_points_is_usage_error(work, capsys):
    assert main(["generate", "swissroll", "--n", "0", "--out", "x.csv"]) == 2


def test_replay_reproduces_hash(work):
    main(["generate", "swissroll", "--n", "50", "--seed", "4", "--out", "a.csv"])
    digest = content_digest("a.csv")
    (work / "a.csv").write_text("garbage\n")
    assert main(["replay", "a.manifest.json"]) == 0
    assert content_digest("a.csv") == digest


def test_distances_euclidean(work):
    write_matrix("p.csv", [[0.0, 0.0], [3.0, 4.0]])
    assert main(["distances", "--input", "p.csv", "--out", "d.csv"]) == 0
    d, _ = read_matrix("d.csv")
    assert np.array_equal(d, [[0, 5], [5, 0]])


def test_distances_geodesic_chain(work):
    write_matrix("p.csv", [[0.0], [1.0], [3.0]])
    assert main(["distances", "--input", "p.csv", "--metric", "geodesic", "--knn", "1",
                 "--out", "d.csv"]) == 0
    assert read_matrix("d.csv")[0][0, 2] == 3.0


def test_distances_disconnected(work, capsys):
    write_matrix("p.csv", [[0.0], [1.0], [50.0], [51.0]])
    code = main(["distances", "--input", "p.csv", "--metric", "geodesic", "--knn", "1",
                 "--out", "d.csv"])
    err = capsys.readouterr().err
    assert code == 3
    assert "2 components" in err and "--knn" in err


def test_missing_input_is_data_error(work):
    assert main(["distances", "--input", "nope.csv", "--out", "d.csv"]) == 3


@pytest.fixture
def target(work):
    rng = np.random.default_rng(3)
    write_matrix("p.csv", rng.random((30, 3)) * 4)
    main(["distances", "--input", "p.csv", "--out", "t.csv"])
    return "t.csv"


@pytest.mark.parametrize("method, extra", [
    ("fs", []),
    ("rn", ["--p-init", "0.6"]),
    ("bs", ["--p-init", "0.7", "--p-a", "0.05", "--p-th", "0.2"]),
    ("smacof", []),
    ("classical", []),
])
def test_embed_methods(target, work, method, extra):
    assert main(["embed", "--target", target, "--method", method, "--dims", "2",
                 "--out-dir", method] + extra) == 0
    coords, _ = read_matrix(f"{method}/embedding.csv")
    assert coords.shape == (30, 2)
    trace = read_trace(f"{method}/trace.csv")
    assert all(b.stress <= a.stress + 1e-9 for a, b in zip(trace, trace[1:]))
    manifest = json.loads((work / method / "manifest.json").read_text())
    assert manifest["converged"] and manifest["method"] == method


def test_embed_config_error(target):
    assert main(["embed", "--target", target, "--method", "fs", "--p-init", "0.5",
                 "--out-dir", "o"]) == 2


def test_embed_nonconverged(target):
    assert main(["embed", "--target", target, "--method", "fs", "--max-epochs", "2",
                 "--out-dir", "o"]) == 4


def test_embed_replay_bitwise(target, work):
    main(["embed", "--target", target, "--method", "bs", "--out-dir", "o"])
    before = (work / "o" / "embedding.csv").read_bytes()
    (work / "o" / "embedding.csv").unlink()
    assert main(["replay", "o/manifest.json"]) == 0
    assert (work / "o" / "embedding.csv").read_bytes() == before


def _labelled(work, n=60):
    rng = np.random.default_rng(0)
    y = np.repeat([0, 1, 2], n // 3)
    x = rng.normal(size=(n, 5)) + y[:, None] * 4
    write_matrix("pts.csv", x, prefix="p", extra={"label": y})
    return "pts.csv"


def test_knn_eval_report(work):
    pts = _labelled(work)
    assert main(["knn-eval", "--embedding", pts, "--labels", pts, "--out", "r.csv"]) == 0
    header, rows = read_table("r.csv")
    assert header == ["method", "dims", "K", "accuracy", "embed_time_ms"]
    assert [r[2] for r in rows] == ["1", "3", "5", "7", "9"]
    assert all(r[0] == "initial" for r in rows)
    assert main(["knn-eval", "--embedding", pts, "--labels", pts, "--k", "1",
                 "--method", "again", "--append", "--out", "r.csv"]) == 0
    assert len(read_table("r.csv")[1]) == 6


def test_knn_eval_bad_k(work):
    pts = _labelled(work)
    assert main(["knn-eval", "--embedding", pts, "--labels", pts, "--k", "0",
                 "--out", "r.csv"]) == 2


def test_knn_eval_row_mismatch(work):
    pts = _labelled(work)
    write_matrix("short.csv", np.zeros((5, 2)))
    assert main(["knn-eval", "--embedding", "short.csv", "--labels", pts,
                 "--out", "r.csv"]) == 3


def test_convergence_grid(target, work, monkeypatch):
    monkeypatch.setenv("CSMDS_WORKERS", "1")
    argv = ["convergence-grid", "--target", target, "--dims", "2",
            "--p-init-grid", "0.1,0.2,0.7", "--p-th-grid", "0.05,0.2", "--out-dir", "g"]
    assert main(argv) == 0
    traces = sorted(p.name for p in (work / "g" / "traces").iterdir())
    assert len(traces) == 10
    assert sum(n.startswith("bs_") for n in traces) == 6
    assert sum(n.startswith("rn_") for n in traces) == 3
    digest = content_digest("g/combined.csv")
    assert main(argv) == 0
    assert content_digest("g/combined.csv") == digest


def test_convergence_grid_empty(target):
    assert main(["convergence-grid", "--target", target, "--p-init-grid", "",
                 "--p-th-grid", "0.2", "--out-dir", "g"]) == 2


def test_console_script_entry_point(work):
    out = subprocess.run([sys.executable, "-m", "csmds.cli", "--version"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "csmds" in out.stdout


def test_mnist_pipeline(work, mnist):
    assert main(["generate", "mnist", "--classes", "0,1,3,9", "--count", "120",
                 "--seed", "2", "--out", "m.csv"]) == 0
    x, extras = read_matrix("m.csv")
    assert x.shape == (120, 784)
    assert set(extras["label"].tolist()) <= {0, 1, 3, 9}
    assert main(["distances", "--input", "m.csv", "--out", "md.csv"]) == 0
    # 300 Guttman steps are not enough for a 1e-6 relative decrease here; exit 4 says so
    assert main(["embed", "--target", "md.csv", "--method", "smacof", "--dims", "10",
                 "--out-dir", "sm"]) == 4
    trace = read_trace("sm/trace.csv")
    assert all(b.stress <= a.stress for a, b in zip(trace, trace[1:]))
    assert main(["knn-eval", "--embedding", "sm/embedding.csv", "--labels", "m.csv",
                 "--out", "r.csv"]) == 0
    rows = read_table("r.csv")[1]
    assert len(rows) == 5 and rows[0][0] == "smacof" and rows[0][4] != ""
