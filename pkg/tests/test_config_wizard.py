"""Tests for config_wizard module."""

import pathlib

import pytest
from omegaconf.errors import ConfigKeyError, ValidationError

from back_and_forth.src import config_wizard
from back_and_forth.src.config_wizard import (
    PipelineConfig,
    load_pipeline_config,
    optional_input,
    require_inputs,
    validate_pipeline_config,
)
from back_and_forth.src.path_wizard import ParseError


class TestLoadPipelineConfig:
    """Tests for load_pipeline_config function."""

    def test_defaults(self) -> None:
        """Should return the structured defaults without any layer."""
        config = load_pipeline_config()
        assert config == PipelineConfig()
        assert config.k == 1
        assert config.direction == "ja-en"
        assert config.lam == 0.9

    def test_later_layers_win(self, tmp_path: pathlib.Path) -> None:
        """Should apply file, then overrides, then flags."""
        config_file = tmp_path / "pipeline.conf"
        config_file.write_text("# run settings\n\nk = 2\nlam=0.5\nmode=all\n", encoding="utf-8")
        from_file = load_pipeline_config(config_file)
        assert (from_file.k, from_file.lam, from_file.mode) == (2, 0.5, "all")
        overridden = load_pipeline_config(config_file, ["k=3"])
        assert (overridden.k, overridden.lam) == (3, 0.5)
        flagged = load_pipeline_config(config_file, ["k=3"], {"k": 4})
        assert (flagged.k, flagged.mode) == (4, "all")

    def test_optional_values(self) -> None:
        """Should accept values for optional fields."""
        config = load_pipeline_config(overrides=["threshold=8", "corpus=docs.jsonl"])
        assert config.threshold == 8.0
        assert config.corpus == "docs.jsonl"

    def test_rejects_malformed_line(self, tmp_path: pathlib.Path) -> None:
        """Should raise ParseError for a line without key=value."""
        config_file = tmp_path / "pipeline.conf"
        config_file.write_text("k=2\njust words\n", encoding="utf-8")
        with pytest.raises(ParseError) as error:
            load_pipeline_config(config_file)
        assert error.value.line_number == 2

    def test_rejects_wrong_type(self) -> None:
        """Should raise a validation error for a non-integer k."""
        with pytest.raises(ValidationError):
            load_pipeline_config(overrides=["k=many"])

    def test_rejects_unknown_key(self) -> None:
        """Should refuse keys the pipeline does not know."""
        with pytest.raises(ConfigKeyError):
            load_pipeline_config(overrides=["colour=red"])

    def test_missing_file(self, tmp_path: pathlib.Path) -> None:
        """Should raise FileNotFoundError for a missing config file."""
        with pytest.raises(FileNotFoundError):
            load_pipeline_config(tmp_path / "missing.conf")

    def test_yaml_needs_hydra(
        self, tmp_path: pathlib.Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Should raise ImportError for YAML files when hydra-core is absent."""
        config_file = tmp_path / "pipeline.yaml"
        config_file.write_text("k: 2\n", encoding="utf-8")
        monkeypatch.setattr(config_wizard, "HYDRA_AVAILABLE", False)
        with pytest.raises(ImportError, match="hydra-core"):
            load_pipeline_config(config_file)

    def test_yaml_through_hydra(self, tmp_path: pathlib.Path) -> None:
        """Should compose a YAML file with Hydra."""
        pytest.importorskip("hydra")
        config_file = tmp_path / "pipeline.yaml"
        config_file.write_text("k: 2\nmode: all\nscheme: logarithmic\n", encoding="utf-8")
        config = load_pipeline_config(config_file, ["k=5"])
        assert (config.k, config.mode, config.scheme) == (5, "all", "logarithmic")


class TestValidatePipelineConfig:
    """Tests for validate_pipeline_config function."""

    @pytest.mark.parametrize(
        ("changes", "key"),
        [
            ({"lam": 0.0}, "lam"),
            ({"lam": 1.5}, "lam"),
            ({"epsilon": 0.0}, "epsilon"),
            ({"k": 0}, "k"),
            ({"translit_k": 0}, "translit_k"),
            ({"top_k": 1001}, "top_k"),
            ({"threshold": -1.0}, "threshold"),
            ({"runtag": "two words"}, "runtag"),
            ({"direction": "fr-de"}, "direction"),
            ({"mode": "guess"}, "mode"),
            ({"scheme": "bm25"}, "scheme"),
            ({"policy": "loose"}, "policy"),
            ({"language": "french"}, "language"),
        ],
    )
    def test_rejects_out_of_range(self, changes: dict[str, object], key: str) -> None:
        """Should name the offending key."""
        config = PipelineConfig(**changes)  # type: ignore[arg-type]
        with pytest.raises(ValueError, match=key):
            validate_pipeline_config(config)

    def test_accepts_every_enumerated_value(self) -> None:
        """Should accept each documented mode and direction."""
        for mode in ("trl", "cwt", "all", "discard_katakana", "transliterate_katakana"):
            for direction in ("ja-en", "en-ja"):
                validate_pipeline_config(PipelineConfig(mode=mode, direction=direction))


class TestInputs:
    """Tests for require_inputs and optional_input."""

    def test_resolves_existing_inputs(self, tmp_path: pathlib.Path) -> None:
        """Should return resolved paths keyed by name."""
        corpus = tmp_path / "corpus.jsonl"
        corpus.write_text("", encoding="utf-8")
        config = PipelineConfig(corpus=str(corpus))
        assert require_inputs(config, "corpus") == {"corpus": corpus.resolve()}
        assert optional_input(config, "corpus") == corpus.resolve()
        assert optional_input(config, "lexicon") is None

    def test_missing_setting(self) -> None:
        """Should name the flag that supplies a missing input."""
        with pytest.raises(ValueError, match="--translit-model"):
            require_inputs(PipelineConfig(), "translit_model")

    def test_missing_file(self, tmp_path: pathlib.Path) -> None:
        """Should raise FileNotFoundError for a configured path that does not exist."""
        config = PipelineConfig(qrels=str(tmp_path / "qrels.txt"))
        with pytest.raises(FileNotFoundError):
            require_inputs(config, "qrels")
