"""Pipeline configuration: JSON config files and modality presets.

A config is a flat JSON document. Presets fill in the defaults for one of
the four modality pipelines; explicit config keys override the preset, and
command-line flags override both. All detection thresholds default to the
package-wide conventions (MI < 0.01, normalized entropy < 0.1, variance
< 0.05 for the candidate rule; |r| > 0.95 for correlation pruning; 1.5-bit
sentence entropy, 0.95 cosine, lowest TF-IDF decile, top JS decile, and a
2-of-4 quorum for the sentence voting rule).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from ballast.errors import ConfigError
from ballast.pipeline import DetectionConfig
from ballast.score import ScoreConfig
from ballast.text.sentences import SentenceThresholds

MODALITIES = ("structured", "semi_structured", "unstructured", "sparse")
INPUT_FORMATS = ("csv", "jsonl", "corpus")

PRESETS: dict[str, dict] = {
    "structured": {
        "modality": "structured",
        "input_format": "csv",
    },
    "semi": {
        "modality": "semi_structured",
        "input_format": "jsonl",
        "list_policy": "join_tokens",
    },
    "unstructured": {
        "modality": "unstructured",
        "input_format": "corpus",
        "min_words": 100,
        "text": {"vocab_size": 1000, "topics": 20, "iterations": 200, "use_topics": True},
    },
    "sparse": {
        "modality": "sparse",
        "input_format": "csv",
        "detection": {"correlation_method": "spearman"},
        "selectors": [["variance", {"threshold": 0.01}]],
    },
}

_TOP_LEVEL_KEYS = {
    "modality",
    "input",
    "input_format",
    "target",
    "target_kind",
    "schema",
    "list_policy",
    "min_words",
    "signal_files",
    "embedding_file",
    "stopword_file",
    "bins",
    "seed",
    "out_dir",
    "figures",
    "score",
    "detection",
    "selectors",
    "taus",
    "split",
    "text",
    "timings",
}


@dataclass(frozen=True)
class TextConfig:
    vocab_size: int = 1000
    topics: int = 20
    iterations: int = 200
    use_topics: bool = True
    sim_floor: float = 0.0
    thresholds: SentenceThresholds = field(default_factory=SentenceThresholds)


@dataclass(frozen=True)
class SplitConfig:
    seed: int = 0
    frac: float = 0.8


@dataclass(frozen=True)
class PipelineConfig:
    modality: str = "structured"
    input: str | None = None
    input_format: str = "csv"
    target: str | None = None
    target_kind: str | None = None
    schema: dict = field(default_factory=dict)
    list_policy: str = "join_tokens"
    min_words: int = 0
    signal_files: tuple = ()
    embedding_file: str | None = None
    stopword_file: str | None = None
    bins: int = 16
    seed: int = 0
    out_dir: str = "out"
    figures: bool = True
    timings: bool = False
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    taus: tuple = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
    split: SplitConfig = field(default_factory=SplitConfig)
    text: TextConfig = field(default_factory=TextConfig)

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise ConfigError(f"unknown modality {self.modality!r}; known: {MODALITIES}")
        if self.input_format not in INPUT_FORMATS:
            raise ConfigError(f"unknown input_format {self.input_format!r}")
        taus = tuple(float(t) for t in self.taus)
        if any(not 0.0 <= t <= 1.0 for t in taus):
            raise ConfigError("taus must lie in [0, 1]")
        object.__setattr__(self, "taus", tuple(sorted(taus)))


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _build(raw: dict) -> PipelineConfig:
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    score_raw = dict(raw.get("score", {}))
    mode = score_raw.pop("mode", "product")
    score_raw.setdefault("utility_weights", {})
    score_raw.setdefault("redundancy_weights", {})
    try:
        score = ScoreConfig(**score_raw)
    except TypeError as exc:
        raise ConfigError(f"bad score config: {exc}") from exc

    det_raw = dict(raw.get("detection", {}))
    selectors = tuple((name, dict(params)) for name, params in raw.get("selectors", []))
    try:
        detection = DetectionConfig(
            mode=mode,
            score=score,
            bins=int(raw.get("bins", 16)),
            selectors=selectors,
            **det_raw,
        )
    except TypeError as exc:
        raise ConfigError(f"bad detection config: {exc}") from exc

    text_raw = dict(raw.get("text", {}))
    thr = text_raw.pop("thresholds", {})
    try:
        text = TextConfig(thresholds=SentenceThresholds(**thr), **text_raw)
    except TypeError as exc:
        raise ConfigError(f"bad text config: {exc}") from exc

    split_raw = dict(raw.get("split", {}))
    try:
        split = SplitConfig(**split_raw)
    except TypeError as exc:
        raise ConfigError(f"bad split config: {exc}") from exc

    simple = {
        k: raw[k]
        for k in raw
        if k not in ("score", "detection", "selectors", "text", "split", "bins")
    }
    if "signal_files" in simple:
        simple["signal_files"] = tuple(simple["signal_files"])
    return PipelineConfig(
        detection=detection, text=text, split=split, bins=int(raw.get("bins", 16)), **simple
    )


def load_config(path=None, preset: str | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Assemble a config from (preset defaults) <- (JSON file) <- (overrides)."""
    raw: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; known: {sorted(PRESETS)}")
        raw = _merge(raw, PRESETS[preset])
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: malformed JSON ({exc.msg})") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        raw = _merge(raw, loaded)
    if overrides:
        raw = _merge(raw, {k: v for k, v in overrides.items() if v is not None})
    return _build(raw)


def with_seed(cfg: PipelineConfig, seed: int) -> PipelineConfig:
    return replace(cfg, seed=seed, split=replace(cfg.split, seed=seed))
