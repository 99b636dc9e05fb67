"""Pipeline configuration: structured defaults, key=value or Hydra YAML files, overrides."""

import pathlib
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Any, Optional

from loguru import logger
from omegaconf import DictConfig, OmegaConf

from back_and_forth.src.eval_wizard import MAX_RUN_DEPTH, PartialPolicy
from back_and_forth.src.index_wizard import WeightingScheme
from back_and_forth.src.path_wizard import ParseError, normalize_file_path
from back_and_forth.src.text_wizard import Direction, Language
from back_and_forth.src.translate_wizard import TranslationMode

try:
    import hydra

    HYDRA_AVAILABLE = True
except ImportError:
    HYDRA_AVAILABLE = False

YAML_SUFFIXES = (".yaml", ".yml")


# OmegaConf reads these annotations at runtime, so they stay typing.Optional.
@dataclass
class PipelineConfig:
    """Every input path and parameter a subcommand may read.

    Unset paths of shipped resources (stopwords, root table, romanization,
    similarity, forbidden characters) fall back to the packaged defaults.
    """

    corpus: Optional[str] = None
    entries: Optional[str] = None
    pairs: Optional[str] = None
    lexicon: Optional[str] = None
    general_dictionary: Optional[str] = None
    abbreviations: Optional[str] = None
    translit_model: Optional[str] = None
    bigrams: Optional[str] = None
    index: Optional[str] = None
    queries: Optional[str] = None
    run: Optional[str] = None
    qrels: Optional[str] = None
    similarity: Optional[str] = None
    stopwords: Optional[str] = None
    root_table: Optional[str] = None
    romanization: Optional[str] = None
    forbidden_chars: Optional[str] = None
    language: str = "english"
    direction: str = "ja-en"
    mode: str = "trl"
    scheme: str = "standard"
    k: int = 1
    translit_k: int = 5
    lam: float = 0.9
    epsilon: float = 1e-9
    threshold: Optional[float] = None
    min_abbrev_frequency: int = 1
    top_k: int = 1000
    top_docs: int = 10
    runtag: str = "back-and-forth"
    policy: str = "strict"
    use_general: bool = True
    use_abbreviations: bool = True
    condition_on_source: bool = True


def _read_config_file(config_file: str | pathlib.Path) -> DictConfig:
    path = normalize_file_path(config_file, path_should_exist=True, make_parent_path=False)
    if path.suffix in YAML_SUFFIXES:
        if not HYDRA_AVAILABLE:
            raise ImportError(
                "hydra-core is not available. Install with "
                "`uv add back-and-forth[hydra]` or `pip install back-and-forth[hydra]`"
            )
        with hydra.initialize_config_dir(version_base=None, config_dir=str(path.parent)):
            composed: DictConfig = hydra.compose(config_name=path.stem)
        return composed

    dotlist = []
    with path.open(encoding="utf-8") as handle:
        for line_number, raw_line in enumerate(handle, start=1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            key, separator, value = line.partition("=")
            if not separator or not key.strip():
                raise ParseError(path, line_number, "expected key=value")
            dotlist.append(f"{key.strip()}={value.strip()}")
    return OmegaConf.from_dotlist(dotlist)


def validate_pipeline_config(config: PipelineConfig) -> None:
    """Check parameter ranges and enumerated values.

    Raises:
        ValueError: Naming the first offending key.
    """
    if not 0 < config.lam <= 1:
        raise ValueError(f"lam must be in (0, 1], got {config.lam}")
    if config.epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {config.epsilon}")
    for key in ("k", "translit_k", "top_docs", "min_abbrev_frequency"):
        if getattr(config, key) < 1:
            raise ValueError(f"{key} must be at least 1, got {getattr(config, key)}")
    if not 1 <= config.top_k <= MAX_RUN_DEPTH:
        raise ValueError(f"top_k must be in 1..{MAX_RUN_DEPTH}, got {config.top_k}")
    if config.threshold is not None and config.threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {config.threshold}")
    if not config.runtag or any(ch.isspace() for ch in config.runtag):
        raise ValueError(f"runtag must be one non-empty word, got {config.runtag!r}")
    for key, kind in (
        ("language", Language),
        ("direction", Direction),
        ("mode", TranslationMode),
        ("scheme", WeightingScheme),
        ("policy", PartialPolicy),
    ):
        value = getattr(config, key)
        allowed = [member.value for member in kind]
        if value not in allowed:
            raise ValueError(f"{key} must be one of {allowed}, got {value!r}")


def load_pipeline_config(
    config_file: str | pathlib.Path | None = None,
    overrides: Iterable[str] | None = None,
    flags: Mapping[str, Any] | None = None,
) -> PipelineConfig:
    """Merge defaults, a config file, ``key=value`` overrides and flag values.

    Later layers win. Merges are type checked against :class:`PipelineConfig`.

    Args:
        config_file: ``key=value`` file, or a YAML file composed with Hydra.
        overrides: Extra ``key=value`` strings.
        flags: Values of command-line flags keyed by config field.

    Raises:
        FileNotFoundError: If the config file does not exist.
        ImportError: If a YAML file is given without the hydra extra.
        ValueError: If a value has the wrong type or is out of range.

    Example:
        >>> config = load_pipeline_config(overrides=["k=3", "direction=en-ja"])
        >>> config.k
        3
    """
    layers = [OmegaConf.structured(PipelineConfig)]
    if config_file is not None:
        layers.append(_read_config_file(config_file))
    if overrides:
        layers.append(OmegaConf.from_dotlist(list(overrides)))
    if flags:
        layers.append(OmegaConf.create(dict(flags)))
    merged = OmegaConf.merge(*layers)
    config = OmegaConf.to_object(merged)
    if not isinstance(config, PipelineConfig):
        raise TypeError("Expected a PipelineConfig from OmegaConf.to_object")
    validate_pipeline_config(config)
    logger.debug(f"Pipeline configuration: {OmegaConf.to_yaml(merged).strip()}")
    return config


def require_inputs(config: PipelineConfig, *names: str) -> dict[str, pathlib.Path]:
    """Resolve the input paths a subcommand needs.

    Raises:
        ValueError: If one of them is not configured.
        FileNotFoundError: If one of them does not exist.
    """
    paths = {}
    for name in names:
        value = getattr(config, name)
        if value is None:
            raise ValueError(f"missing input: set --{name.replace('_', '-')} or {name}=...")
        paths[name] = normalize_file_path(value, path_should_exist=True, make_parent_path=False)
    return paths


def optional_input(config: PipelineConfig, name: str) -> pathlib.Path | None:
    """Resolve an input path that may be left unset."""
    value = getattr(config, name)
    if value is None:
        return None
    return normalize_file_path(value, path_should_exist=True, make_parent_path=False)
