"""Config parsing, unit conversion, reports, CSV emission and exit codes."""

import math

import numpy as np
import pytest

from chargebit.cli import (DeviceSpec, ParseError, ValidationError, analyze,
                           build_system, load_config, main, occupation_curve,
                           parse_number, run_lemma_suite, sweep)
from chargebit.kernels import Delta, Gaussian
from chargebit.units import broadening_energy_uev, thermal_energy_uev

DEVICE1 = """\
# GHz-rate device, gaussian broadening
temperature_source = 40m
temperature_drain  = 40m
bias        = 200
rate_source = 6.3G
rate_drain  = 250G
kernel      = gaussian
"""


@pytest.fixture
def device1_path(tmp_path):
    path = tmp_path / "device1.cfg"
    path.write_text(DEVICE1)
    return str(path)


class TestParseNumber:
    def test_plain(self):
        assert parse_number("200") == 200.0

    def test_si_prefixes(self):
        assert parse_number("40m") == pytest.approx(0.040)
        assert parse_number("6.3G") == pytest.approx(6.3e9)
        assert parse_number("1.75k") == pytest.approx(1750.0)
        assert parse_number("2u") == parse_number("2µ") == pytest.approx(2e-6)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_number("fast")


class TestLoadConfig:
    def test_device1(self, device1_path):
        spec = load_config(device1_path)
        assert spec.temperature_source == pytest.approx(0.040)
        assert spec.bias == 200.0
        assert spec.rate_source == pytest.approx(6.3e9)
        assert spec.kernel == "gaussian"

    def test_negative_rate_names_field(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text(DEVICE1.replace("rate_source = 6.3G",
                                        "rate_source = -1"))
        with pytest.raises(ValidationError) as err:
            load_config(str(path))
        assert err.value.field == "rate_source"

    def test_missing_bias_is_parse_error(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("\n".join(l for l in DEVICE1.splitlines()
                                  if not l.startswith("bias")))
        with pytest.raises(ParseError, match="bias"):
            load_config(str(path))

    def test_unknown_key_with_line_number(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("warp_factor = 9\n")
        with pytest.raises(ParseError, match=":1:"):
            load_config(str(path))


class TestBuildSystem:
    def test_units(self, device1_path):
        sys_ = build_system(load_config(device1_path))
        assert sys_.source.thermal_energy == pytest.approx(
            86.17333262 * 0.040)
        assert sys_.bias == 200.0
        assert isinstance(sys_.kernel, Gaussian)
        assert sys_.kernel.sigma == pytest.approx(
            6.582119569e-10 * 256.3e9)

    def test_width_override_zero_gives_delta(self, device1_path):
        sys_ = build_system(load_config(device1_path), width_uev=0.0)
        assert isinstance(sys_.kernel, Delta)


class TestAnalyze:
    def test_device1_report(self, device1_path):
        report = analyze(load_config(device1_path))
        assert abs(report["w_bar_ueV"] - 68.0) <= 1.5
        assert abs(report["e_therm_ueV"] - 2.4) <= 0.05
        assert abs(report["e_bias_ueV"] - 2.5) <= 0.05
        assert abs(report["e_broad_ueV"] - 67.0) <= 0.5
        assert report["bound_satisfied"]

    def test_unit_round_trip(self, device1_path):
        spec = load_config(device1_path)
        report = analyze(spec)
        assert report["temperature_source_K"] == pytest.approx(
            spec.temperature_source, rel=1e-12)
        assert report["bias_ueV"] == pytest.approx(spec.bias, rel=1e-12)
        assert report["rate_drain_Hz"] == pytest.approx(
            spec.rate_drain, rel=1e-12)

    def test_lorentzian_divergent_with_eta_table(self, device1_path):
        spec = load_config(device1_path)
        spec = DeviceSpec(**{**spec.__dict__, "kernel": "lorentzian"})
        report = analyze(spec)
        assert report["w_bar_ueV"] == "divergent (Lorentzian exact erasure)"
        for eta in (0.1, 0.01, 0.001):
            assert report[f"w_eta_{eta}_ueV"] > 0.0


class TestSweep:
    def test_landauer_corner_and_bounds(self, device1_path, tmp_path):
        out = tmp_path / "sweep.csv"
        sweep(load_config(device1_path), bias_max=10.0, width_max=10.0,
              points=3, out=str(out))
        rows = np.genfromtxt(out, delimiter=",", names=True)
        kt = thermal_energy_uev(0.040)
        corner = rows[(rows["bias"] == 0) & (rows["hbar_gamma_tot"] == 0)]
        assert corner["w_bar"] == pytest.approx(kt * math.log(2), rel=1e-10)
        for row in rows:
            assert row["bound_lower"] - 1e-9 <= row["w_bar"]
            assert row["w_bar"] <= row["bound_upper"] + 1e-9

    def test_bias_dominated_row(self, tmp_path):
        # kT = 1 ueV, gamma_S = 0.35, sharp level, bias = 36 kT
        t_k = 1.0 / 86.17333262
        spec = DeviceSpec(temperature_source=t_k, temperature_drain=t_k,
                          bias=36.0, rate_source=0.35, rate_drain=0.65,
                          kernel="delta")
        out = tmp_path / "sweep.csv"
        sweep(spec, bias_max=36.0, width_max=0.0, points=2, out=str(out))
        rows = np.genfromtxt(out, delimiter=",", names=True)
        row = rows[(rows["bias"] == 36.0) & (rows["hbar_gamma_tot"] == 0)]
        # the thermal scale still contributes ~ln2*kT on top of the
        # bias-dominated estimate, hence the few-percent headroom
        assert row["w_bar"][0] == pytest.approx(0.5 * 0.35 * 36.0, rel=0.06)

    def test_deterministic_output(self, device1_path, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        spec = load_config(device1_path)
        sweep(spec, 5.0, 5.0, 2, str(a))
        sweep(spec, 5.0, 5.0, 2, str(b))
        assert a.read_bytes() == b.read_bytes()


class TestOccupationCurve:
    def test_symmetric_midpoint(self, tmp_path):
        spec = DeviceSpec(temperature_source=0.1, temperature_drain=0.1,
                          bias=10.0, rate_source=1e9, rate_drain=1e9,
                          kernel="gaussian")
        out = tmp_path / "occ.csv"
        occupation_curve(spec, 5.0, 5.0 + 1e-9, 2, str(out))
        rows = np.genfromtxt(out, delimiter=",", names=True)
        assert rows["p_unbroadened"][0] == pytest.approx(0.5, abs=1e-9)
        assert rows["p_broadened"][0] == pytest.approx(0.5, abs=1e-9)

    def test_bias_window_plateau(self, tmp_path):
        t_k = 1.0 / 86.17333262  # kT = 1 ueV
        spec = DeviceSpec(temperature_source=t_k, temperature_drain=t_k,
                          bias=36.0, rate_source=0.35e9, rate_drain=0.65e9,
                          kernel="gaussian")
        out = tmp_path / "occ.csv"
        occupation_curve(spec, 17.0, 19.0, 3, str(out))
        rows = np.genfromtxt(out, delimiter=",", names=True)
        assert np.all(np.abs(rows["p_broadened"] - 0.35) < 0.01)

    def test_delta_columns_identical(self, tmp_path):
        spec = DeviceSpec(temperature_source=0.1, temperature_drain=0.1,
                          bias=5.0, rate_source=1e9, rate_drain=1e9,
                          kernel="delta")
        out = tmp_path / "occ.csv"
        occupation_curve(spec, -10.0, 15.0, 50, str(out))
        rows = np.genfromtxt(out, delimiter=",", names=True)
        assert np.max(np.abs(rows["p_unbroadened"]
                             - rows["p_broadened"])) < 1e-12


class TestProtocolCommand:
    T_K = 1.0 / 86.17333262

    def _spec(self, bias):
        return DeviceSpec(temperature_source=self.T_K,
                          temperature_drain=self.T_K, bias=bias,
                          rate_source=0.35e9, rate_drain=0.65e9,
                          kernel="delta")

    def test_slow_ramp_near_optimal(self, tmp_path, capsys):
        from chargebit.cli import run_protocol
        run_protocol(self._spec(36.0), "zero", 200.0,
                     str(tmp_path / "traj.csv"))
        out = {k: v for k, v in
               (line.split(": ") for line in
                capsys.readouterr().out.strip().splitlines())}
        assert 0.98 <= float(out["work_over_optimal"]) <= 1.02

    def test_zero_duration_frozen(self, tmp_path, capsys):
        from chargebit.cli import run_protocol
        run_protocol(self._spec(36.0), "zero", 0.0,
                     str(tmp_path / "traj.csv"))
        out = {k: v for k, v in
               (line.split(": ") for line in
                capsys.readouterr().out.strip().splitlines())}
        assert float(out["total_work_ueV"]) == pytest.approx(0.0, abs=1e-12)
        assert float(out["final_occupation"]) == pytest.approx(0.5, abs=1e-9)

    def test_fast_ramp_dissipates(self, tmp_path, capsys):
        from chargebit.cli import run_protocol
        run_protocol(self._spec(0.0), "zero", 1.0, str(tmp_path / "traj.csv"))
        out = {k: v for k, v in
               (line.split(": ") for line in
                capsys.readouterr().out.strip().splitlines())}
        assert float(out["work_over_optimal"]) > 1.0


class TestLemmaSuite:
    def test_small_run_passes(self):
        ok, lines = run_lemma_suite(5, 7)
        assert ok
        assert lines[-1] == "all sandwich inequalities held"

    def test_reproducible(self):
        assert run_lemma_suite(10, 3) == run_lemma_suite(10, 3)


class TestMainExitCodes:
    def test_analyze_success(self, device1_path, capsys):
        assert main(["analyze", "--config", device1_path]) == 0
        assert "machine-readable:" in capsys.readouterr().out

    def test_divergent_still_success(self, tmp_path, capsys):
        path = tmp_path / "l.cfg"
        path.write_text(DEVICE1.replace("gaussian", "lorentzian"))
        assert main(["analyze", "--config", str(path)]) == 0
        assert "divergent" in capsys.readouterr().out

    def test_bad_config_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("bias = fast\n")
        assert main(["analyze", "--config", str(path)]) == 2

    def test_lemmas_success_exit_0(self, capsys):
        assert main(["lemmas", "--trials", "3", "--seed", "1"]) == 0

    def test_env_var_overrides_tolerance(self, device1_path, monkeypatch,
                                         capsys):
        monkeypatch.setenv("ERASURE_NUMERICS_RTOL", "1e-8")
        assert main(["analyze", "--config", device1_path]) == 0
