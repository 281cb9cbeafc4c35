"""Command-line interface: outputs, files, exit codes, reproducibility."""
import csv
import io
import json
import os
import shutil
import subprocess
import sys

import numpy as np
import pytest

from linsys_quanta import cli, packet


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    header, data = rows[0], rows[1:]
    cols = {name: np.array([float(r[i]) for r in data])
            for i, name in enumerate(header)}
    return cols


def test_reduce_sho(capsys, models_dir):
    code, out, _ = run_cli(capsys, "reduce", str(models_dir / "sho.json"))
    assert code == 0
    payload = json.loads(out)
    assert payload["dim"] == 1 and payload["mass"] == 1.0
    assert payload["O"] == [[1.0]] and payload["V"] == [[1.0]]
    assert payload["g"] == {"kind": "zero"}
    assert payload["dropped_value_t0"] == 0.0


def test_reduce_rescales_kinetic_matrix(capsys, models_dir):
    code, out, _ = run_cli(capsys, "reduce",
                           str(models_dir / "general2d.json"))
    assert code == 0
    payload = json.loads(out)
    assert np.allclose(payload["O"], [[1.0, 0.0], [0.0, 0.5]], atol=1e-12)
    assert np.allclose(payload["V"], [[1.0, 0.0], [0.0, 4.0]], atol=1e-12)


def test_reduce_rejects_asymmetric_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "dim": 2, "mass": 1.0,
        "F": [[1.0, 0.2], [0.0, 1.0]],
        "Q": [[0.0, 0.0], [0.0, 0.0]],
        "U": [[1.0, 0.0], [0.0, 1.0]],
    }))
    code, out, _ = run_cli(capsys, "reduce", str(bad))
    assert code == 3
    err = json.loads(out)
    assert err["error"] == "NonSymmetricInput" and "F" in err["message"]


def test_modes_output(capsys, models_dir):
    code, out, _ = run_cli(capsys, "modes", str(models_dir / "sho.json"))
    assert code == 0
    payload = json.loads(out)
    assert payload["pairing"] == [1, 0]
    assert payload["freqs"][0] == {"re": 1.0, "im": 0.0}
    assert payload["amps"][0]["R"] == [[1.0, 0.0]]
    assert payload["amps"][0]["P"][0][0] == pytest.approx(0.0, abs=1e-12)
    assert payload["amps"][0]["P"][0][1] == pytest.approx(1.0, abs=1e-12)


def test_modes_defective_model_exits_4(capsys, tmp_path):
    free = tmp_path / "free.json"
    free.write_text(json.dumps({
        "dim": 1, "mass": 1.0, "F": [[1.0]], "Q": [[0.0]], "U": [[0.0]],
    }))
    code, out, _ = run_cli(capsys, "modes", str(free))
    assert code == 4
    assert json.loads(out)["error"] == "DefectiveSpectrum"


def test_ground_output(capsys, models_dir):
    code, out, _ = run_cli(capsys, "ground",
                           str(models_dir / "anisotropic2d.json"))
    assert code == 0
    payload = json.loads(out)
    assert np.allclose(payload["K0"]["re"], [[1.0, 0.0], [0.0, 2.0]],
                       atol=1e-10)
    assert np.allclose(payload["K0"]["im"], 0.0, atol=1e-10)
    assert payload["residual"] <= 1e-8
    assert payload["min_eig_re_K0"] == pytest.approx(1.0, abs=1e-10)
    assert payload["omega0"] == pytest.approx(1.5, abs=1e-10)


def test_ground_inverted_exits_2(capsys, models_dir):
    code, out, _ = run_cli(capsys, "ground",
                           str(models_dir / "inverted.json"))
    assert code == 2
    err = json.loads(out)
    assert err["error"] == "NoPhysicalState" and err["code"] == 2


def test_spectrum_energies(capsys, models_dir):
    code, out, _ = run_cli(capsys, "spectrum", str(models_dir / "sho.json"),
                           "--max-total", "3")
    assert code == 0
    entries = json.loads(out)
    assert [e["index"] for e in entries] == [[0], [1], [2], [3]]
    assert np.allclose([e["energy"] for e in entries],
                       [0.5, 1.5, 2.5, 3.5], atol=1e-10)


def test_evolve_matches_pulsating_oracle(capsys, models_dir):
    code, out, _ = run_cli(capsys, "evolve", str(models_dir / "sho.json"),
                           "--k0", "2", "--dt", "0.005",
                           "--tmax", str(2.0 * np.pi))
    assert code == 0
    cols = parse_csv(out)
    assert set(cols) == {"t", "K_re_0_0", "K_im_0_0", "R_0", "P_0",
                         "normN", "phase"}
    for idx in range(0, len(cols["t"]), 200):
        alpha, angle = packet.pulsating_shape_1d(2.0, 1.0, cols["t"][idx])
        got = cols["K_re_0_0"][idx] + 1j * cols["K_im_0_0"][idx]
        assert abs(got - alpha) <= 1e-6
        assert abs(cols["phase"][idx] - angle) <= 1e-6
    assert np.max(np.abs(cols["R_0"])) <= 1e-12


def test_coherent_report(capsys, models_dir):
    code, out, _ = run_cli(capsys, "coherent",
                           str(models_dir / "magnetic2d.json"),
                           "--lam", "0.3+0.1j,0.2")
    assert code == 0
    lines = out.strip().splitlines()
    summary = json.loads(lines[-1])
    assert summary["form_agreement_gap"] <= 1e-8
    assert summary["truncation"] == 6
    cols = parse_csv("\n".join(lines[:-1]))
    assert {"t", "R_0", "R_1", "P_0", "P_1"} <= set(cols)
    assert len(cols["t"]) == 201


def test_verify_report(capsys, models_dir):
    code, out, _ = run_cli(capsys, "verify", str(models_dir / "sho.json"))
    assert code == 0
    lines = out.strip().splitlines()
    payload = json.loads(lines[-1])
    assert payload["max_gram_offdiag"] <= 5e-4
    assert payload["hermiticity_gap"] <= 1e-6
    assert payload["grid"]["points"] == [201]
    for row in payload["states"]:
        assert row["residual"] <= 1e-2
        assert row["norm_error"] <= 1e-9
    # the text table precedes the summary line
    assert any("residual" in ln for ln in lines[:3])


def test_hermite_eval(capsys):
    code, out, _ = run_cli(capsys, "hermite-eval", "--gamma", "[[2.0]]",
                           "--index", "2", "--x", "[1.0]")
    assert code == 0
    cols = parse_csv(out)
    assert cols["re"][0] == pytest.approx(2.0, abs=1e-12)
    assert cols["im"][0] == pytest.approx(0.0, abs=1e-12)


def test_hermite_eval_requires_points_beyond_1d(capsys):
    code, out, _ = run_cli(capsys, "hermite-eval", "--gamma",
                           "[[2.0,0.0],[0.0,2.0]]", "--index", "1,1")
    assert code == 3


def test_output_files_and_figures(capsys, models_dir, tmp_path):
    out_dir = tmp_path / "report"
    code, _, _ = run_cli(capsys, "verify", str(models_dir / "sho.json"),
                         "--out", str(out_dir))
    assert code == 0
    for name in ("verify.txt", "verify.json", "verify.png"):
        assert (out_dir / name).is_file()
    assert (out_dir / "verify.png").stat().st_size > 1000

    code, _, _ = run_cli(capsys, "states", str(models_dir / "sho.json"),
                         "--out", str(out_dir), "--max-total", "1")
    assert code == 0
    for name in ("state_0.csv", "state_1.csv", "state_0.png", "state_1.png"):
        assert (out_dir / name).is_file()

    code, _, _ = run_cli(capsys, "evolve", str(models_dir / "sho.json"),
                         "--tmax", "1.0", "--out", str(out_dir))
    assert code == 0
    assert (out_dir / "evolution.csv").is_file()
    assert (out_dir / "evolution.png").is_file()

    code, _, _ = run_cli(capsys, "spectrum", str(models_dir / "sho.json"),
                         "--out", str(out_dir))
    assert code == 0
    assert (out_dir / "spectrum.json").is_file()
    assert (out_dir / "spectrum.png").is_file()


def test_reruns_are_byte_identical(capsys, models_dir, tmp_path):
    outs = []
    dirs = [tmp_path / "a", tmp_path / "b"]
    for d in dirs:
        code, out, _ = run_cli(capsys, "verify",
                               str(models_dir / "magnetic2d.json"),
                               "--out", str(d), "--seed", "7")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    names = sorted(p.name for p in dirs[0].iterdir())
    assert names == sorted(p.name for p in dirs[1].iterdir())
    for name in names:
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


def test_driven_model_evolves(capsys, models_dir):
    code, out, _ = run_cli(capsys, "evolve",
                           str(models_dir / "driven_sho.json"),
                           "--tmax", "3.0", "--dt", "0.01")
    assert code == 0
    cols = parse_csv(out)
    # the sinusoidal force moves the center away from rest
    assert np.max(np.abs(cols["R_0"])) > 1e-3
    # while the shape stays locked to the stationary one
    assert np.max(np.abs(cols["K_re_0_0"] - 1.0)) <= 1e-9


def test_console_script_and_logging(models_dir):
    exe = shutil.which("linsys-quanta")
    assert exe is not None
    env = dict(os.environ, LINSYS_QUANTA_LOG="INFO")
    proc = subprocess.run([exe, "reduce", str(models_dir / "sho.json")],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dim"] == 1
    assert "command reduce" in proc.stderr

    quiet = subprocess.run([sys.executable, "-m", "linsys_quanta.cli",
                            "reduce", str(models_dir / "sho.json")],
                           capture_output=True, text=True,
                           env=dict(os.environ, LINSYS_QUANTA_LOG="WARNING"))
    assert quiet.returncode == 0 and quiet.stderr == ""
