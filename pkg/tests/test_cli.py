import pytest

from snpcrypt.cli import run_cli
from snpcrypt.protocol import serve_in_thread

FIG1 = ("system pi_add { neuron s1 { spikes = 7; a+ / a -> a; 2; } "
        "neuron s2 { spikes = 1; a -> a; 0; } neuron s3 { spikes = 0; a^4 -> a; 1; } "
        "syn { s1 -> s3; s3 -> s2; } out s2; }")


@pytest.mark.parametrize("mode", ["literal", "events", "closed"])
def test_pi_add(capsys, mode):
    assert run_cli(["pi-add", "--t1", "3", "--t2", "2", "--k", "4", "--mode", mode]) == 0
    assert capsys.readouterr().out.strip() == "14"


def test_pi_add_bad_value(capsys):
    assert run_cli(["pi-add", "--t1", "0", "--t2", "2", "--k", "4"]) == 1


def test_simulate(tmp_path, capsys):
    f = tmp_path / "adder.snp"
    f.write_text(FIG1)
    assert run_cli(["simulate", str(f), "--trace"]) == 0
    out = capsys.readouterr().out
    assert "emissions: 1 15" in out and "interval: 14" in out
    assert "step 13: fire s1 fire s3" in out


def test_simulate_errors(tmp_path, capsys):
    f = tmp_path / "bad.snp"
    f.write_text("system x { neuron n { spikes = 1; a -> b; 0; } syn { } out n; }")
    assert run_cli(["simulate", str(f)]) == 1
    assert "1:40" in capsys.readouterr().err
    assert run_cli(["simulate", str(tmp_path / "missing.snp")]) == 1
    g = tmp_path / "adder.snp"
    g.write_text(FIG1)
    assert run_cli(["simulate", str(g), "--budget", "5"]) == 1


def test_keygen_and_compute(tmp_path, capsys):
    par, pub, sec = (str(tmp_path / n) for n in ("params", "pub", "sec"))
    assert run_cli(["keygen", "--bits", "32", "--out-params", par, "--out-pub", pub,
                    "--out-sec", sec, "--seed", "3"]) == 0
    assert (tmp_path / "params").read_text().startswith("p=")
    srv = serve_in_thread(mode="events")
    try:
        host, port = srv.server_address[:2]
        base = ["compute", "--server", f"{host}:{port}", "--params", par, "--t1", "3", "--t2", "2",
                "--k", "4", "--seed", "1"]
        capsys.readouterr()
        assert run_cli(base) == 0
        assert capsys.readouterr().out.strip() == "14"
        assert run_cli(base + ["--mode", "literal"]) == 1
        assert "BAD_MODE" in capsys.readouterr().err
    finally:
        srv.shutdown()
        srv.server_close()


def test_usage_and_network(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("SNPC_BIND", raising=False)
    assert run_cli([]) == 2
    assert run_cli(["frobnicate"]) == 2
    assert run_cli(["serve"]) == 2
    par = tmp_path / "params"
    par.write_text("p=17\ng=5\n")
    assert run_cli(["compute", "--server", "127.0.0.1:1", "--params", str(par),
                    "--t1", "1", "--t2", "1", "--k", "1"]) == 3
    assert run_cli(["compute", "--server", "nohost", "--params", str(par),
                    "--t1", "1", "--t2", "1", "--k", "1"]) == 2
