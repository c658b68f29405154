import io

import pytest

from dmvr.cli import main
from dmvr.graph import build_ring, write_edge_list


def call(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_bounds_text_and_csv():
    code, text = call("bounds", "--n", "100", "--rho", "0.7,0.3")
    assert code == 0 and "expected_tau1" in text and "4.30087" in text
    code, text = call("bounds", "--n", "100", "--counts", "50,30,20", "--format", "csv")
    assert text.splitlines()[0] == "quantity,value"
    assert any(line.startswith("tau_x_bound,") for line in text.splitlines())


def test_bounds_domain_error(capsys):
    code, _ = call("bounds", "--n", "100", "--rho", "0.5,0.5")
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_simulate(tmp_path):
    log = tmp_path / "log.csv"
    code, text = call("simulate", "--topology", "ring", "--n", "12", "--counts", "7,5",
                      "--runs", "2", "--log", str(log))
    assert code == 0
    assert len(text.splitlines()) == 3
    assert log.read_text().startswith("event,time,i,j")


def test_simulate_edge_list(tmp_path):
    path = tmp_path / "ring.edges"
    write_edge_list(build_ring(9), path)
    code, text = call("simulate", "--topology", "edgelist", "--edges", str(path),
                      "--counts", "5,3,1", "--variant", "compact-ranking")
    assert code == 0 and ",ring," in text


def test_simulate_cutoff_exit_code():
    code, _ = call("simulate", "--topology", "ring", "--n", "40", "--counts", "21,19",
                   "--max-time", "0.1")
    assert code == 1


def test_sweep(tmp_path):
    manifest = tmp_path / "m.json"
    code, text = call("sweep", "--builtin", "fig3", "--dump-manifest")
    manifest.write_text(text.replace('"replications": 1000', '"replications": 2'))
    out = tmp_path / "out.csv"
    code, _ = call("sweep", "--manifest", str(manifest), "--output", str(out), "--quiet")
    assert code == 0
    assert out.read_text().startswith("# experiment=fig3")
    code, text = call("sweep", "--builtin", "fig7", "--replications", "1", "--quiet")
    assert code == 0 and len(text.splitlines()) == 2 + 6


def test_verify_ops(tmp_path):
    code, text = call("verify", "model-check", "--votes", "0,0,1", "--K", "2")
    assert code == 0 and text.startswith("PASS")
    code, text = call("verify", "model-check", "--votes", "0+1,0,1,0", "--K", "2",
                      "--variant", "enhanced-voting")
    assert code == 0
    code, text = call("verify", "model-check", "--all", "--n", "3", "--K", "2")
    assert code == 0 and "verdicts without FAIL" in text
    code, text = call("verify", "states", "--K", "3")
    assert "syntactic=12 reachable=12" in text and "syntactic=18" in text
    report = tmp_path / "r.txt"
    code, text = call("verify", "audit", "--topology", "ring", "--n", "15", "--counts", "7,5,3",
                      "--trials", "2", "--report", str(report))
    assert code == 0 and report.read_text() == text
    code, text = call("verify", "equivalence", "--n", "10", "--counts", "5,3,2", "--trials", "5")
    assert code == 0 and text.startswith("PASS")


def test_verify_failure_exit_code(monkeypatch):
    from dmvr import verify
    monkeypatch.setattr(verify, "_successors", lambda variant, K: lambda a, b: {(b, a)})
    code, text = call("verify", "model-check", "--votes", "0,0,1", "--K", "2",
                      "--variant", "compact-ranking")
    assert code == 1 and text.startswith("FAIL")


def test_verify_missing_votes():
    assert main(["verify", "audit"], out=io.StringIO()) == 2
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])
