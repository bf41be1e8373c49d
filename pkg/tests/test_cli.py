import json
import subprocess
import sys

import pytest

from shallowq.cli import main
from shallowq.circuit_io import parse_circuit

FIGURE_TWO = """qubits 4
inputs 0 1 2 3
outputs 0 1 2 3
CNOT 0 1
TOFFOLI 1 2 3
H 1
T 2
CNOT 0 2
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="c.qnc"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def run(argv, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main([*argv, "--json", str(out)])
    captured = capsys.readouterr()
    report = json.loads(out.read_text()) if code == 0 else None
    return code, report, captured


def test_simulate_examples(write, tmp_path, capsys):
    code, rep, cap = run(["simulate", write("qubits 1\noutputs 0\nX 0\n")], tmp_path, capsys)
    assert code == 0 and rep["results"]["acceptance_probability"] == 0
    assert "acceptance_probability" in cap.out
    _, rep, _ = run(["simulate", write("qubits 1\noutputs 0\nH 0\n")], tmp_path, capsys)
    assert rep["results"]["acceptance_probability"] == 0.5
    _, rep, _ = run(["simulate", write("qubits 1\noutputs 0\nH 0\n"), "--backend", "exact"], tmp_path, capsys)
    assert rep["results"]["acceptance_probability"] == {"value": 0.5, "exact": "(1)/sqrt2^2"}


def test_simulate_marginals(write, tmp_path, capsys):
    path = write("qubits 2\ninputs 0\noutputs 0 1\nB 0 1\n")
    _, rep, _ = run(["simulate", path, "--input", "0", "--marginal", "0=0", "--marginal", "0,1=01"], tmp_path, capsys)
    assert rep["results"]["marginals"] == {"0=0": 0.5, "0,1=01": 0.0}
    assert rep["circuit"] == {"num_qubits": 2, "size": 4, "depth": 1}


def test_compressed_hh_accepts_a_quarter(write, tmp_path, capsys):
    src = write("qubits 1\noutputs 0\nH 0\nH 0\n")
    dst = str(tmp_path / "cp.qnc")
    code, rep, _ = run(["compress", src, "-o", dst], tmp_path, capsys)
    assert code == 0 and rep["results"]["compression"]["k"] == 1
    sidecar = json.loads(open(dst + ".json").read())
    assert sidecar["bell_pairs"] == [[0, 1]]
    _, rep, _ = run(["simulate", dst], tmp_path, capsys)
    assert rep["results"]["acceptance_probability"] == 0.25


def test_compress_to_stdout(write, tmp_path, capsys):
    code, rep, cap = run(["compress", write(FIGURE_TWO)], tmp_path, capsys)
    assert rep["results"]["cprime"]["depth"] == 3
    cp = parse_circuit(rep["results"]["cprime_text"])
    assert cp.num_qubits == 14


def test_decide_examples(write, tmp_path, capsys):
    _, rep, _ = run(["decide", write("qubits 2\noutputs 0 1\n"), "--t", "0"], tmp_path, capsys)
    assert rep["results"]["decision"]["verdict"] == "accept"
    _, rep, _ = run(["decide", write("qubits 1\noutputs 0\nH 0\n"), "--t", "1/4"], tmp_path, capsys)
    d = rep["results"]["decision"]
    assert d["verdict"] == "reject" and d["D"] == 1 and d["color_products"] == [0.5]
    hh = write("qubits 1\noutputs 0\nH 0\nH 0\n")
    _, rep, _ = run(["decide", hh, "--mode", "eqnc", "--backend", "exact"], tmp_path, capsys)
    assert rep["results"]["decision"]["verdict"] == "accept"
    assert rep["results"]["decision"]["exact_color_products"] == ["1"]
    _, rep, _ = run(["decide", hh], tmp_path, capsys)
    assert rep["results"]["decision"]["fragile"] == [1]


def test_decide_modes(write, tmp_path, capsys):
    path = write("qubits 2\ninputs 0\noutputs 1\nCNOT 0 1\nX 1\n")
    _, rep, _ = run(["decide", path, "--input", "1", "--mode", "direct"], tmp_path, capsys)
    assert rep["results"]["decision"]["method"] == "direct"
    assert rep["results"]["decision"]["verdict"] == "accept"
    _, rep, _ = run(["decide", path, "--mode", "bqnc-half"], tmp_path, capsys)
    assert rep["results"]["decision"]["t"] == "1/32"
    _, rep, _ = run(["decide", path, "--mode", "master", "--eps", "1/2"], tmp_path, capsys)
    assert rep["results"]["decision"]["t"] == "1/32"
    assert rep["results"]["decision"]["verdict"] == "reject"


def test_verify_all_inputs(write, tmp_path, capsys):
    _, rep, _ = run(["verify", write(FIGURE_TWO), "--all-inputs"], tmp_path, capsys)
    assert rep["results"]["k"] == 5
    assert len(rep["results"]["runs"]) == 16
    assert rep["results"]["max_abs_error"] <= 1e-9


def test_verify_identity(write, tmp_path, capsys):
    _, rep, _ = run(["verify", write("qubits 2\ninputs 0\noutputs 1\n"), "--input", "1"], tmp_path, capsys)
    (r,) = rep["results"]["runs"]
    assert r["abs_error"] == 0 and r["k"] == 0 and r["input"] == "1"


def test_analyze_figure_two(write, tmp_path, capsys):
    _, rep, _ = run(["analyze", write(FIGURE_TWO)], tmp_path, capsys)
    res = rep["results"]
    assert rep["circuit"]["depth"] == 4 and rep["circuit"]["max_gate_width"] == 3
    # backward sweep for 3: only TOFFOLI(1,2,3) touches it, then CNOT(0,1) pulls in 0
    assert res["cones"] == {str(q): [0, 1, 2, 3] for q in range(4)}
    assert res["bounds"]["cone_bound"] is None


def test_analyze_empty_and_chain(write, tmp_path, capsys):
    _, rep, _ = run(["analyze", write("qubits 3\noutputs 0 1 2\n")], tmp_path, capsys)
    assert rep["results"]["degree"] == 0 and rep["results"]["D"] == 1
    chain = write("qubits 4\noutputs 1 2 3\nCNOT 0 1\nCNOT 1 2\nCNOT 2 3\n")
    _, rep, _ = run(["analyze", chain], tmp_path, capsys)
    # 1 also sees 2 through CNOT(1,2), which follows CNOT(0,1)
    assert rep["results"]["cone_sizes"] == {"1": 3, "2": 4, "3": 4}
    assert all(rep["results"]["bounds"].values())


def test_gen_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.qnc", tmp_path / "b.qnc"
    assert main(["gen", "--qubits", "4", "--depth", "3", "--seed", "7", "-o", str(a)]) == 0
    assert main(["gen", "--qubits", "4", "--depth", "3", "--seed", "7", "-o", str(b)]) == 0
    assert a.read_text() == b.read_text()
    capsys.readouterr()
    main(["gen", "--qubits", "2", "--depth", "1", "--seed", "7"])
    cap = capsys.readouterr()
    assert cap.out.startswith("qubits 2") and "seed: 7" in cap.err


def test_json_is_byte_identical(write, tmp_path):
    path = write(FIGURE_TWO.replace("TOFFOLI 1 2 3", "CNOT 1 3\nZ 2"))
    outs = []
    for i in range(2):
        j = tmp_path / f"r{i}.json"
        assert main(["decide", path, "--input", "0110", "--t", "1/8", "--json", str(j)]) == 0
        outs.append(j.read_bytes())
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert set(rep) == {"command", "circuit", "results", "backend", "seed"}


def test_timing_flag(write, tmp_path, capsys):
    _, rep, _ = run(["analyze", write("qubits 1\n"), "--timing"], tmp_path, capsys)
    assert rep["timing_s"] >= 0


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["simulate", "MISSING.qnc"], "No such file"),
        (["simulate", "{bad}"], "unknown gate"),
        (["simulate", "{ok}", "--input", "111"], "input has 3 bits"),
        (["simulate", "{ok}", "--marginal", "0=11"], "bad --marginal"),
        (["decide", "{wide}"], "width"),
        (["decide", "{ok}", "--t", "3/2"], "outside"),
        (["decide", "{ok}", "--mode", "master"], "epsilon"),
        (["verify", "{many}", "--all-inputs"], "at most 12"),
    ],
)
def test_errors_exit_nonzero(argv, needle, write, capsys):
    files = {
        "{bad}": write("qubits 1\nFOO 0\n", "bad.qnc"),
        "{ok}": write("qubits 2\ninputs 0\noutputs 1\nCNOT 0 1\n", "ok.qnc"),
        "{wide}": write("qubits 3\noutputs 2\nTOFFOLI 0 1 2\n", "wide.qnc"),
        "{many}": write("qubits 13\ninputs " + " ".join(map(str, range(13))) + "\n", "many.qnc"),
    }
    argv = [files.get(a, a) for a in argv]
    assert main(argv) == 1
    err = capsys.readouterr().err
    assert err.startswith("error:") and needle in err


def test_parse_error_is_positioned(write, capsys):
    assert main(["analyze", write("qubits 2\nCNOT 0 5\n")]) == 1
    assert "at line 2, column 8" in capsys.readouterr().err


def test_statevector_cap_env(write, monkeypatch, capsys):
    monkeypatch.setenv("QNC_MAX_QUBITS", "2")
    assert main(["simulate", write("qubits 3\n")]) == 1
    assert "cap" in capsys.readouterr().err


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "shallowq.cli", "--version"], capture_output=True, text=True
    )
    assert out.returncode == 0 and out.stdout.startswith("shallowq ")
