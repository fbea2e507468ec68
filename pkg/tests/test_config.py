"""
YAML run configuration: parsing, validation and command-line overrides.
"""
import json

import pytest

from optocool.config import RunConfig, load_config, parse_config
from optocool.errors import (BistableWorkingPoint, ConfigError, InvalidSweepSpec, RangeError,
                             SchemaError)
from optocool.model import DriveConfig, thermal_occupation, to_effective

DRIVE_CONFIG = """\
drive:
  E: 10
  delta_0: -1
  g0: 0.001
  kappa: 0.5
  gamma_m: 1e-5
  n_bar: 1000
"""

SI_CONFIG = """\
effective:
  omega_m_si: 1e6
  kappa: 5e5
  gamma_m: 10
  delta: -1e6
  g: 2e5
  temperature: 0.01
"""


class TestEffectiveBlock:
    """Dimensionless parameters given directly."""

    def test_values_and_defaults(self, steady_config_text):
        config = parse_config(steady_config_text)
        assert config.mode == "effective"
        assert config.command == "steady"
        assert config.params.kappa == 0.5
        assert config.params.gamma_m == 1e-5
        assert config.params.delta == -1.0
        assert config.params.omega_m == 1.0
        assert config.model == "full"
        assert config.output_path is None and config.output_format == "csv"
        assert config.allow_unstable is False and config.tol == 1e-6
        assert config.sweep is None
        assert config.evolve.points == 50 and config.evolve.method == "auto"
        assert config.figure.n_bar == 1e3

    def test_exponent_strings_are_numbers(self):
        config = parse_config(SI_CONFIG)
        assert config.params.gamma_m == pytest.approx(1e-5)

    def test_missing_key(self):
        with pytest.raises(SchemaError) as info:
            parse_config("effective: {kappa: 0.5, gamma_m: 0.0, delta: -1, n_bar: 0}")
        assert info.value.path == "effective.g"

    def test_unknown_key_path(self):
        with pytest.raises(SchemaError) as info:
            parse_config("effective: {kapa: 0.5}")
        assert info.value.path == "effective.kapa"

    def test_out_of_range_path(self, steady_config_text):
        with pytest.raises(RangeError) as info:
            parse_config(steady_config_text.replace("kappa: 0.5", "kappa: -0.5"))
        assert info.value.path == "effective.kappa"

    def test_boolean_is_not_a_number(self, steady_config_text):
        with pytest.raises(SchemaError):
            parse_config(steady_config_text.replace("g: 0.2", "g: true"))


class TestParameterBlocks:
    """Exactly one of effective or drive."""

    def test_both_blocks(self, steady_config_text):
        with pytest.raises(SchemaError):
            parse_config(steady_config_text + DRIVE_CONFIG)

    def test_neither_block(self):
        with pytest.raises(SchemaError):
            parse_config("command: steady\n")

    def test_unknown_top_level_key(self, steady_config_text):
        with pytest.raises(SchemaError) as info:
            parse_config(steady_config_text + "plot: true\n")
        assert info.value.path == "plot"


class TestDriveBlock:
    """Drive-level input linearized around its working point."""

    def test_matches_to_effective(self):
        config = parse_config(DRIVE_CONFIG)
        expected = to_effective(DriveConfig(drive_strength_E=10, delta_0=-1.0, g0=0.001,
                                            kappa=0.5, gamma_m=1e-5, n_bar=1000.0))
        assert config.mode == "drive"
        assert config.params == expected
        assert config.working_point.photon_occupancy == pytest.approx(100 / 1.0625, rel=1e-3)
        assert config.working_point.g_enhanced == config.params.g

    def test_complex_drive(self):
        config = parse_config(DRIVE_CONFIG.replace("E: 10", "E: [6, 8]"))
        assert config.drive.drive_strength_E == 6 + 8j
        assert config.params.g == pytest.approx(parse_config(DRIVE_CONFIG).params.g)

    def test_bistable_drive(self):
        text = (DRIVE_CONFIG.replace("delta_0: -1", "delta_0: 2")
                .replace("g0: 0.001", "g0: 0.1")
                .replace("E: 10", "E: [5, 5]"))
        with pytest.raises(BistableWorkingPoint) as info:
            parse_config(text)
        assert len(info.value.roots) == 3


class TestPhysicalUnits:
    """Rates in rad/s and a bath temperature."""

    def test_rates_are_scaled(self):
        params = parse_config(SI_CONFIG).params
        assert params.kappa == pytest.approx(0.5)
        assert params.delta == pytest.approx(-1.0)
        assert params.g == pytest.approx(0.2)
        assert params.n_bar == pytest.approx(thermal_occupation(1e6, 0.01))

    def test_temperature_needs_frequency(self):
        text = SI_CONFIG.replace("  omega_m_si: 1e6\n", "")
        with pytest.raises(SchemaError) as info:
            parse_config(text)
        assert info.value.path == "effective.temperature"

    def test_temperature_and_occupation_exclusive(self):
        with pytest.raises(SchemaError):
            parse_config(SI_CONFIG + "  n_bar: 10\n")


class TestCommandBlocks:
    """sweep, evolve, figure, output and options."""

    def test_sweep_axes(self, steady_config_text):
        text = steady_config_text + (
            "sweep:\n"
            "  axes:\n"
            "    - {name: g, start: 0.1, stop: 0.3, count: 3}\n"
            "    - {name: gamma_m, start: 1e-7, stop: 1e-5, count: 3, scale: log}\n"
            "  outputs: [phonon, variances]\n")
        sweep = parse_config(text).sweep
        assert [axis.name for axis in sweep.axes] == ["g", "gamma_m"]
        assert sweep.axes[1].scale == "log"
        assert sweep.outputs == frozenset({"phonon", "variances"})

    def test_explicit_axis_values(self, steady_config_text):
        text = steady_config_text + "sweep:\n  axes:\n    - {name: delta, values: [-1, -0.5]}\n"
        axis = parse_config(text).sweep.axes[0]
        assert axis.values().tolist() == [-1.0, -0.5]

    def test_invalid_axis(self, steady_config_text):
        text = steady_config_text + (
            "sweep:\n  axes:\n    - {name: g, start: 0.1, stop: 0.1, count: 3}\n")
        with pytest.raises(InvalidSweepSpec):
            parse_config(text)

    def test_unknown_output(self, steady_config_text):
        text = steady_config_text + (
            "sweep:\n  axes:\n    - {name: g, values: [0.1]}\n  outputs: [entropy]\n")
        with pytest.raises(SchemaError) as info:
            parse_config(text)
        assert info.value.path == "sweep.outputs[0]"

    def test_command_mapping(self, steady_config_text):
        text = steady_config_text.replace("command: steady", "command: {name: sweep, model: both}")
        config = parse_config(text)
        assert (config.command, config.model) == ("sweep", "both")

    def test_evolve_and_figure(self, steady_config_text):
        text = steady_config_text + (
            "evolve: {t_max: 100, points: 11, method: integrate, initial: vacuum}\n"
            "figure: {id: fig6, n_bar: 10, resolution: 5}\n"
            "options: {allow_unstable: true, tol: 1e-8, threads: 2}\n"
            "output: {path: out.json, format: json}\n")
        config = parse_config(text)
        assert config.evolve.t_max == 100.0 and config.evolve.initial == "vacuum"
        assert config.figure.id == "fig6" and config.figure.resolution == 5
        assert config.allow_unstable is True and config.tol == 1e-8 and config.threads == 2
        assert config.output_path == "out.json" and config.output_format == "json"

    @pytest.mark.parametrize("extra", [
        "evolve: {method: euler}\n",
        "evolve: {points: 1}\n",
        "figure: {id: fig4}\n",
        "output: {format: xml}\n",
        "options: {allow_unstable: yes please}\n",
    ])
    def test_rejected_values(self, steady_config_text, extra):
        with pytest.raises(ConfigError):
            parse_config(steady_config_text + extra)


class TestOverridesAndProvenance:
    """Command-line flags on top of the document."""

    def test_with_overrides(self, steady_config_text):
        config = parse_config(steady_config_text).with_overrides(
            out="x.json", fmt="json", allow_unstable=True, n_bar=5.0, tol=1e-3)
        assert config.output_path == "x.json" and config.output_format == "json"
        assert config.allow_unstable is True
        assert config.params.n_bar == 5.0 and config.figure.n_bar == 5.0
        assert config.tol == 1e-3

    def test_n_bar_override_reaches_the_drive_block(self):
        config = parse_config(DRIVE_CONFIG).with_overrides(n_bar=5.0)
        assert config.params.n_bar == 5.0
        assert config.drive.n_bar == 5.0
        doc = config.as_dict()
        assert doc["drive"]["n_bar"] == doc["effective"]["n_bar"] == 5.0

    def test_no_overrides_is_identity(self, steady_config_text):
        config = parse_config(steady_config_text)
        assert config.with_overrides() == config

    def test_bad_override(self, steady_config_text):
        with pytest.raises(RangeError):
            parse_config(steady_config_text).with_overrides(n_bar=-1.0)

    def test_as_dict_is_json(self):
        config = parse_config(DRIVE_CONFIG)
        doc = json.loads(json.dumps(config.as_dict()))
        assert doc["mode"] == "drive"
        assert doc["effective"]["g"] == config.params.g
        assert doc["drive"]["E"] == [10.0, 0.0]
        assert doc["output"]["format"] == "csv"


class TestDocuments:
    """Whole-file handling."""

    def test_invalid_yaml(self):
        with pytest.raises(SchemaError):
            parse_config("effective: [kappa: 0.5")

    def test_not_a_mapping(self):
        with pytest.raises(SchemaError):
            parse_config("- steady\n")

    def test_load_from_file(self, write_config, steady_config_text):
        config = load_config(write_config(steady_config_text))
        assert isinstance(config, RunConfig)
        assert config.params.g == 0.2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.yaml"))
