import json
import subprocess
import sys

import numpy as np
import pytest

from hom_twinbeam.cli import EXIT_CONFIG, EXIT_OK, EXIT_WINDOW, main, preset_config
from hom_twinbeam.config import ConfigError, config_to_text, parse_config, parse_config_text


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_minimal_file_uses_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, "[source]\n[setup]\n"))
    assert cfg.source.wavelength_nm == 1550.0 and cfg.source.fwhm_nm == 0.5
    assert cfg.source.g2_target == 20.0 and cfg.source.flux is None
    assert cfg.setup.T == 0.5 and cfg.setup.eta2 == 1.0
    assert cfg.reduction.mode == "pointwise" and cfg.reduction.include_multiphoton
    assert cfg.source_b is None


def test_range_error_names_key_and_line(tmp_path):
    path = write(tmp_path, "[source]\nflux = 0.01\n\n[setup]\nT = 1.3\n")
    with pytest.raises(ConfigError, match=r"run.ini:5: \[setup\] T: must lie in \[0, 1\]"):
        parse_config(path)


def test_g2_target_below_bound():
    with pytest.raises(ConfigError, match="g2_target"):
        parse_config_text("[source]\ng2_target = 1.5\n")


@pytest.mark.parametrize("text, key", [
    ("[source]\nflux_scale = 1\n", "flux_scale"),
    ("[setup]\neta5 = 1\n", "eta5"),
    ("[plots]\nx = 1\n", "plots"),
    ("[source]\nflux = 0.01\ng2_target = 30\n", "g2_target"),
    ("[reduction]\nmode = windowed\n", "reduction"),
    ("[reduction]\ninclude_multiphoton = maybe\n", "include_multiphoton"),
    ("[source]\nfwhm_nm = abc\n", "fwhm_nm"),
    ("[source_b]\nwavelength_nm = 1310\nflux = 0.01\n", "wavelength_nm"),
    ("[sweep]\ng2_targets = 10, 2\n", "g2_targets"),
])
def test_invalid_files_rejected(text, key):
    with pytest.raises(ConfigError, match=key):
        parse_config_text(text)


def test_config_round_trip(tmp_path):
    text = ("[source]\nflux = 0.02\nconvention = amplitude\n[source_b]\nfwhm_nm = 0.4\ng2_target = 30\n"
            "[setup]\nT = 0.45\neta2 = 0.2\n[reduction]\nmode = windowed\nwindow_ps = 5\n"
            "include_multiphoton = false\n[sweep]\ng2_targets = 10, 20\n[output]\nprecision = 8\n")
    cfg = parse_config(write(tmp_path, text))
    again = parse_config(write(tmp_path, config_to_text(cfg), "again.ini"))
    assert again.source == cfg.source and again.source_b == cfg.source_b
    assert again.setup == cfg.setup and again.reduction == cfg.reduction
    assert again.sweep == cfg.sweep and again.output.precision == 8


def _csv(path):
    rows = [line for line in path.read_text().splitlines() if not line.startswith("#")]
    return np.loadtxt(rows[1:], delimiter=",", ndmin=2)


def test_homdip_outputs_and_byte_identity(tmp_path):
    cfg = write(tmp_path, "[source]\ng2_target = 40\n[reduction]\ndt_start = -20\ndt_stop = 20\ndt_step = 1\n")
    outs = []
    for k in range(2):
        out = tmp_path / f"out{k}"
        assert main(["--config", str(cfg), "--out", str(out), "homdip"]) == EXIT_OK
        outs.append(out)
    for name in ("homdip.csv", "summary.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    header = (outs[0] / "homdip.csv").read_text().splitlines()
    assert header[0].startswith("#") and any("g2_target = 40.0" in h for h in header)
    summary = json.loads((outs[0] / "summary.json").read_text())
    for key in ("g2_cross0", "mean_flux", "coherence_time", "visibility", "p_infinity"):
        assert key in summary
    assert summary["visibility"] == pytest.approx(1 - 4 * 79 / 41**2, abs=1e-3)


def test_threads_do_not_change_output(tmp_path):
    cfg = write(tmp_path, "[sweep]\ng2_targets = 15, 30, 60\n[reduction]\ndt_start = 0\ndt_stop = 0\n")
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["--config", str(cfg), "--out", str(a), "sweep"]) == EXIT_OK
    assert main(["--config", str(cfg), "--out", str(b), "--threads", "0", "sweep"]) == EXIT_OK
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()


def test_spectrum_is_gaussian_with_requested_width(tmp_path):
    cfg = write(tmp_path, "[source]\nflux = 1e-6\n")
    assert main(["--config", str(cfg), "--out", str(tmp_path), "spectrum"]) == EXIT_OK
    data = _csv(tmp_path / "spectrum.csv")
    lam, norm = data[:, 1], data[:, 5]
    above = lam[norm >= 0.5]
    # FWHM in wavelength from the sampled curve, within one grid step
    step = abs(lam[1] - lam[0])
    assert above.max() - above.min() == pytest.approx(0.5, abs=2 * step)


def test_g2_subcommand(tmp_path):
    assert main(["--out", str(tmp_path), "g2", "marginal"]) == EXIT_OK
    data = _csv(tmp_path / "g2_marginal.csv")
    assert data[:, 1].max() == pytest.approx(2.0, abs=1e-9)


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "[setup]\nT = 1.3\n")
    assert main(["--config", str(bad), "--out", str(tmp_path), "homdip"]) == EXIT_CONFIG
    assert "[setup] T" in capsys.readouterr().err
    far = write(tmp_path, "[source]\ng2_target = 20\ngrid_points = 101\n[reduction]\ndt_start = -400\n",
                "far.ini")
    assert main(["--config", str(far), "--out", str(tmp_path), "homdip"]) == EXIT_WINDOW
    assert "widen" in capsys.readouterr().err
    assert main(["--config", str(tmp_path / "missing.ini"), "homdip"]) == EXIT_CONFIG


def test_check_subcommand(capsys):
    assert main(["check"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 8


@pytest.mark.parametrize("name", ["fig2", "fig3", "case1", "case2", "case3", "fig4"])
def test_presets_run(tmp_path, name):
    assert main(["--out", str(tmp_path), "preset", name]) == EXIT_OK
    summary = json.loads((tmp_path / "summary.json").read_text())
    if name == "fig3":
        assert [summary[f"g2_{g}"]["visibility"] for g in (20, 40, 80)] == pytest.approx(
            [0.65, 0.80, 0.90], abs=0.04)
        assert len(list(tmp_path.glob("homdip_g*.csv"))) == 3
    if name == "fig4":
        assert set(summary) == {"ideal", "case2", "case3"}
    assert preset_config(name) is not None


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "hom_twinbeam", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
