"""Experiment configuration.

One INI-style file is the single source of truth for an experiment; CLI
flags override individual values.  Sections::

    [global]            seed (required), out
    [dataset]           format, train/validation/test paths, column names
    [features]          stylo_profile, lsa_* sizes
    [block.NAME]        kind + source (stylometric | lsa | kg | kg-entity | drm)
    [scenario.NAME]     blocks = comma list
    [learners]          families + per-family grids
    [analysis]          rank_k, mi_bins, sample_fraction, ablation_c, ...

Block declaration order is the canonical composition order.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import ColumnSchema
from .errors import ConfigError

BUILT_SOURCES = ("stylometric", "lsa", "kg", "kg-entity")


@dataclass
class BlockDecl:
    name: str
    kind: str                    # text | kg | kg-entity
    source: str                  # stylometric | lsa | kg | kg-entity | drm
    embeddings: str = ""         # entity file (kg sources)
    path: str = ""               # DRM path template with {split} (drm source)


@dataclass
class LearnerConfig:
    families: tuple[str, ...] = ("logreg",)
    logreg_lambdas: tuple[float, ...] = (0.1, 0.01, 0.001)
    sgd_losses: tuple[str, ...] = ("log", "hinge")
    sgd_alphas: tuple[float, ...] = (0.01, 0.001, 0.0001, 0.0005)
    sgd_l1_ratios: tuple[float, ...] = (0.05, 0.25, 0.3, 0.6, 0.8, 0.95)
    sgd_power_ts: tuple[float, ...] = (0.1, 0.5, 0.9)
    sgd_eta0: float = 0.01
    sgd_max_epochs: int = 20
    mlp_archs: tuple[str, ...] = ("snn",)
    snn_widths: tuple[int, ...] = (128,)
    lnn_ns: tuple[int, ...] = (6,)
    mlp_lrs: tuple[float, ...] = (0.001,)
    mlp_dropouts: tuple[float, ...] = (0.2,)
    mlp_batch_size: int = 32
    mlp_max_epochs: int = 1000
    mlp_patience: int = 10
    averaging: str = "weighted"
    positive_label: str = ""


@dataclass
class AnalysisConfig:
    rank_k: int = 200
    mi_bins: int = 16
    sample_fraction: float = 0.1
    min_sample_size: int = 500
    ablation_c: tuple[float, ...] = (1.0, 0.1, 0.01, 0.001)
    ablation_max_epochs: int = 100
    words_top_k: int = 25
    words_vocab: int = 2500
    stats_top_k: int = 10


@dataclass
class ExperimentConfig:
    seed: int
    out: Path
    base_dir: Path = Path(".")
    dataset_format: str = "tsv"
    dataset_paths: dict = field(default_factory=dict)    # split -> path
    schema: ColumnSchema | None = None
    stylo_profile: str = "full16"
    lsa_word_features: int = 2500
    lsa_char_features: int = 2500
    lsa_dim: int = 512
    kg_multiset: bool = False
    kg_longest_only: bool = False
    blocks: list[BlockDecl] = field(default_factory=list)
    scenarios: dict = field(default_factory=dict)        # name -> tuple of block names
    learners: LearnerConfig = field(default_factory=LearnerConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    def block(self, name: str) -> BlockDecl:
        for decl in self.blocks:
            if decl.name == name:
                return decl
        raise ConfigError(f"block {name!r} is not declared")

    def require_datasets(self) -> None:
        for split in ("train", "validation", "test"):
            if split not in self.dataset_paths:
                raise ConfigError(f"[dataset] is missing the {split} path")
            if not Path(self.dataset_paths[split]).exists():
                raise ConfigError(f"dataset file not found: {self.dataset_paths[split]}")

    def scenario_blocks(self, name: str):
        return self.scenarios.get(name)


def _floats(raw: str) -> tuple[float, ...]:
    return tuple(float(v.strip()) for v in raw.split(",") if v.strip())


def _ints(raw: str) -> tuple[int, ...]:
    return tuple(int(v.strip()) for v in raw.split(",") if v.strip())


def _names(raw: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in raw.split(",") if v.strip())


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    if not parser.has_option("global", "seed"):
        raise ConfigError(f"{path}: [global] seed is required")
    try:
        seed = parser.getint("global", "seed")
    except ValueError:
        raise ConfigError(f"{path}: [global] seed must be an integer") from None
    out = Path(parser.get("global", "out", fallback="runs/default"))
    if not out.is_absolute():
        out = path.parent / out

    cfg = ExperimentConfig(seed=seed, out=out, base_dir=path.parent)

    if parser.has_section("dataset"):
        sec = parser["dataset"]
        cfg.dataset_format = sec.get("format", "tsv")
        for split in ("train", "validation", "test"):
            if sec.get(split):
                cfg.dataset_paths[split] = str(path.parent / sec[split])
        meta = _names(sec.get("metadata_columns", ""))
        cfg.schema = ColumnSchema(
            id=sec.get("id_column", "id"),
            text=sec.get("text_column", "text"),
            label=sec.get("label_column", "label"),
            metadata=meta,
        )

    if parser.has_section("features"):
        sec = parser["features"]
        cfg.stylo_profile = sec.get("stylo_profile", "full16")
        cfg.lsa_word_features = sec.getint("lsa_word_features", 2500)
        cfg.lsa_char_features = sec.getint("lsa_char_features", 2500)
        cfg.lsa_dim = sec.getint("lsa_dim", 512)
        cfg.kg_multiset = sec.getboolean("kg_multiset", False)
        cfg.kg_longest_only = sec.getboolean("kg_longest_only", False)

    for section in parser.sections():
        if section.startswith("block."):
            name = section[len("block."):]
            sec = parser[section]
            source = sec.get("source", "")
            if source not in (*BUILT_SOURCES, "drm"):
                raise ConfigError(
                    f"{path}: [{section}] source must be one of "
                    f"{(*BUILT_SOURCES, 'drm')}, got {source!r}"
                )
            default_kind = {"stylometric": "text", "lsa": "text", "kg": "kg",
                            "kg-entity": "kg-entity", "drm": "text"}[source]
            decl = BlockDecl(
                name=name,
                kind=sec.get("kind", default_kind),
                source=source,
                embeddings=str(path.parent / sec["embeddings"]) if sec.get("embeddings") else "",
                path=sec.get("path", ""),
            )
            if source in ("kg", "kg-entity") and not decl.embeddings:
                raise ConfigError(f"{path}: [{section}] needs an embeddings file")
            if source == "drm" and not decl.path:
                raise ConfigError(f"{path}: [{section}] needs a path template")
            cfg.blocks.append(decl)
        elif section.startswith("scenario."):
            name = section[len("scenario."):]
            blocks = _names(parser[section].get("blocks", ""))
            if not blocks:
                raise ConfigError(f"{path}: [{section}] declares no blocks")
            cfg.scenarios[name] = blocks

    declared = {b.name for b in cfg.blocks}
    for scen, blocks in cfg.scenarios.items():
        missing = set(blocks) - declared
        if missing:
            raise ConfigError(
                f"{path}: scenario {scen!r} references undeclared blocks {sorted(missing)}"
            )

    if parser.has_section("learners"):
        sec = parser["learners"]
        lc = cfg.learners
        if sec.get("families"):
            lc.families = _names(sec["families"])
        for fam in lc.families:
            if fam not in ("logreg", "sgd", "mlp"):
                raise ConfigError(f"{path}: unknown learner family {fam!r}")
        if sec.get("logreg_lambdas"):
            lc.logreg_lambdas = _floats(sec["logreg_lambdas"])
        if sec.get("sgd_losses"):
            lc.sgd_losses = _names(sec["sgd_losses"])
        if sec.get("sgd_alphas"):
            lc.sgd_alphas = _floats(sec["sgd_alphas"])
        if sec.get("sgd_l1_ratios"):
            lc.sgd_l1_ratios = _floats(sec["sgd_l1_ratios"])
        if sec.get("sgd_power_ts"):
            lc.sgd_power_ts = _floats(sec["sgd_power_ts"])
        lc.sgd_eta0 = sec.getfloat("sgd_eta0", lc.sgd_eta0)
        lc.sgd_max_epochs = sec.getint("sgd_max_epochs", lc.sgd_max_epochs)
        if sec.get("mlp_archs"):
            lc.mlp_archs = _names(sec["mlp_archs"])
        if sec.get("snn_widths"):
            lc.snn_widths = _ints(sec["snn_widths"])
        if sec.get("lnn_ns"):
            lc.lnn_ns = _ints(sec["lnn_ns"])
        if sec.get("mlp_lrs"):
            lc.mlp_lrs = _floats(sec["mlp_lrs"])
        if sec.get("mlp_dropouts"):
            lc.mlp_dropouts = _floats(sec["mlp_dropouts"])
        lc.mlp_batch_size = sec.getint("mlp_batch_size", lc.mlp_batch_size)
        lc.mlp_max_epochs = sec.getint("mlp_max_epochs", lc.mlp_max_epochs)
        lc.mlp_patience = sec.getint("mlp_patience", lc.mlp_patience)
        lc.averaging = sec.get("averaging", lc.averaging)
        lc.positive_label = sec.get("positive_label", lc.positive_label)

    if parser.has_section("analysis"):
        sec = parser["analysis"]
        ac = cfg.analysis
        ac.rank_k = sec.getint("rank_k", ac.rank_k)
        ac.mi_bins = sec.getint("mi_bins", ac.mi_bins)
        ac.sample_fraction = sec.getfloat("sample_fraction", ac.sample_fraction)
        ac.min_sample_size = sec.getint("min_sample_size", ac.min_sample_size)
        if sec.get("ablation_c"):
            ac.ablation_c = _floats(sec["ablation_c"])
        ac.ablation_max_epochs = sec.getint("ablation_max_epochs", ac.ablation_max_epochs)
        ac.words_top_k = sec.getint("words_top_k", ac.words_top_k)
        ac.words_vocab = sec.getint("words_vocab", ac.words_vocab)
        ac.stats_top_k = sec.getint("stats_top_k", ac.stats_top_k)

    return cfg
