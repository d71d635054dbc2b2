"""Run configuration parsing, presets and process settings."""

import textwrap

import pytest

from src.data import load_preset, load_run_config, parse_config
from src.sources import LaserPulsedSpec, QdPulsedSpec
from src.utils import ConfigError, get_settings, reload_settings

MINIMAL = textwrap.dedent(
    """\
    seed: 7
    source:
      kind: qd_pulsed
      lifetime_ps: 400
    acquisition:
      n_pulses: 1000
    """
)


def parse(text):
    return parse_config(textwrap.dedent(text))


class TestParse:
    def test_minimal_config_fills_defaults(self):
        config = parse_config(MINIMAL)
        assert config.seed == 7
        assert isinstance(config.source, QdPulsedSpec)
        assert config.source.period_ps == 12195
        assert config.detectors.a.efficiency == 0.02
        assert config.analysis.bin_width_ps == 550
        assert config.acquisition.duration_ps is None
        assert config.measurement == "hbt"

    def test_kind_selects_the_source_model(self):
        config = parse(
            """\
            seed: 1
            source: {kind: laser_pulsed, mean_photon_number: 0.05}
            acquisition: {duration_s: 0.001}
            """
        )
        assert isinstance(config.source, LaserPulsedSpec)
        assert config.acquisition.duration_ps == 10**9

    def test_unknown_key_names_key_and_line(self):
        with pytest.raises(ConfigError) as info:
            parse(
                """\
                seed: 7
                source:
                  kind: qd_pulsed
                  colour: red
                acquisition:
                  n_pulses: 1000
                """
            )
        assert info.value.key == "source.colour"
        assert info.value.line == 4
        assert "unknown key 'colour'" in str(info.value)

    def test_unitless_key_gets_a_hint(self):
        with pytest.raises(ConfigError) as info:
            parse(
                """\
                seed: 7
                source:
                  kind: qd_pulsed
                  lifetime: 400
                acquisition:
                  n_pulses: 1000
                """
            )
        assert "lifetime_ps" in str(info.value)
        assert info.value.line == 4

    def test_foreign_unit_suffix_gets_a_hint(self):
        with pytest.raises(ConfigError) as info:
            parse(
                """\
                seed: 7
                source: {kind: qd_pulsed, lifetime_ns: 0.4}
                acquisition: {n_pulses: 1000}
                """
            )
        assert "lifetime_ps" in str(info.value)

    def test_value_with_a_unit_is_rejected(self):
        with pytest.raises(ConfigError) as info:
            parse(
                """\
                seed: 7
                source:
                  kind: qd_pulsed
                  lifetime_ps: 400 ps
                acquisition:
                  n_pulses: 1000
                """
            )
        assert "unit-suffix mismatch" in str(info.value)
        assert info.value.key == "source.lifetime_ps"
        assert info.value.line == 4

    @pytest.mark.parametrize("value", [".inf", "-.inf", ".nan"])
    def test_non_finite_numbers_are_rejected(self, value):
        with pytest.raises(ConfigError) as info:
            parse_config(MINIMAL.replace("lifetime_ps: 400", f"lifetime_ps: {value}"))
        assert "non-finite" in str(info.value)
        assert info.value.line == 4

    def test_missing_key(self):
        with pytest.raises(ConfigError) as info:
            parse_config(MINIMAL.replace("seed: 7\n", ""))
        assert info.value.key == "seed"
        assert "missing key" in str(info.value)

    def test_out_of_range_value_points_at_its_line(self):
        with pytest.raises(ConfigError) as info:
            parse_config(MINIMAL + "analysis:\n  n_side_peaks: 1\n")
        assert info.value.key == "analysis.n_side_peaks"
        assert info.value.line == 8

    def test_both_extents_are_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL.replace("n_pulses: 1000", "n_pulses: 1000\n  duration_s: 1.0"))

    def test_yaml_syntax_error_carries_a_line(self):
        with pytest.raises(ConfigError) as info:
            parse_config("seed: 7\nsource: [unclosed\nacquisition: {}\n")
        assert "YAML syntax error" in str(info.value)
        assert info.value.line is not None

    def test_non_mapping_is_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("- 1\n- 2\n")

    def test_config_is_frozen(self):
        config = parse_config(MINIMAL)
        with pytest.raises(Exception):
            config.seed = 8

    def test_seed_must_fit_64_bits(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL.replace("seed: 7", f"seed: {2**64}"))


class TestPresets:
    def test_every_shipped_preset_validates(self):
        for name in ("fig2-qd", "fig2-qd-dark", "fig3-lifetime", "fig4-laser"):
            config = parse_config(f"preset: {name}\n")
            assert config.schema_version == 1

    def test_given_keys_override_the_preset(self):
        config = parse(
            """\
            preset: fig2-qd
            seed: 99
            source:
              p_two: 0.01
            detectors:
              a: {efficiency: 0.5}
            """
        )
        assert config.seed == 99
        assert config.source.p_two == 0.01
        assert config.source.lifetime_ps == 400
        assert config.detectors.a.efficiency == 0.5
        assert config.detectors.a.jitter_fwhm_ps == 68

    def test_given_extent_replaces_the_preset_extent(self):
        config = parse_config("preset: fig2-qd\nacquisition: {duration_s: 0.01}\n")
        assert config.acquisition.n_pulses is None
        assert config.acquisition.duration_s == 0.01

    def test_changing_kind_replaces_the_source(self):
        config = parse_config("preset: fig2-qd\nsource: {kind: laser_pulsed}\n")
        assert isinstance(config.source, LaserPulsedSpec)

    def test_unknown_preset(self):
        with pytest.raises(ConfigError) as info:
            parse_config("preset: nope\n")
        assert "fig2-qd" in str(info.value)
        with pytest.raises(ConfigError):
            load_preset("../etc")

    def test_preset_dir_can_be_swapped(self, tmp_path):
        (tmp_path / "mine.yaml").write_text(MINIMAL)
        config = parse_config("preset: mine\nseed: 3\n", preset_dir=tmp_path)
        assert config.seed == 3


def test_load_run_config_reads_a_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(MINIMAL)
    assert load_run_config(path).seed == 7
    with pytest.raises(OSError):
        load_run_config(tmp_path / "absent.yaml")


class TestSettings:
    def test_environment_prefix(self, monkeypatch):
        monkeypatch.setenv("HBT_LOG_LEVEL", "debug")
        monkeypatch.setenv("HBT_N_JOBS", "3")
        try:
            settings = reload_settings()
            assert settings.log_level == "DEBUG"
            assert settings.n_jobs == 3
            assert get_settings() is settings
        finally:
            monkeypatch.delenv("HBT_LOG_LEVEL")
            monkeypatch.delenv("HBT_N_JOBS")
            reload_settings()

    def test_invalid_settings_are_rejected(self):
        with pytest.raises(ValueError):
            reload_settings(n_jobs=0)
        with pytest.raises(ValueError):
            reload_settings(log_format="xml")
        reload_settings()
