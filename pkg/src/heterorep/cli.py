"""Command-line pipeline: featurize, train, ablate, rank, words, stats, inspect.

Every command is deterministic given (config, seed): reports, block files
and analysis tables are byte-identical across reruns.  Exit codes: 0 on
success, 1 on runtime/data failure (including partially failed ablations),
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .analysis.ablation import ablate, best_worst
from .analysis.mi import rank_and_attribute
from .analysis.words import class_variance_words, word_tfidf
from .config import BlockDecl, ExperimentConfig, load_config
from .corpus import Dataset, load_dataset
from .errors import (
    ConfigError,
    HeterorepError,
    ParameterError,
    SchemaError,
)
from .kg.aliases import load_entity_file
from .kg.concepts import agg_average, concept_stats, entity_concepts, entity_repr, match_concepts
from .kg.preprocess import preprocess_kg
from .learners.grid import GridTrial, grid_search, select_best, trial_table_rows
from .learners.metrics import evaluate
from .learners.persist import save_model
from .seeding import derive_seed
from .stacking import (
    BlockRegistry,
    apply_standardizer,
    compose,
    fit_standardizer,
    read_drm_header,
    write_drm,
)
from .text.lsa import LsaConfig, fit_lsa, save_lsa_model, transform_lsa_matrix
from .text.preprocess import preprocess
from .text.stylometric import stylometric_matrix

SPLITS = ("train", "validation", "test")
BUILTIN_SCENARIOS = ("LM", "KG", "LM+KG", "LM+KG+KG-ENTITY")


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------

def _load_datasets(cfg: ExperimentConfig) -> Dataset:
    cfg.require_datasets()
    splits = {
        split: load_dataset(cfg.dataset_paths[split], cfg.dataset_format,
                            cfg.schema, split_name=split)
        for split in SPLITS
    }
    return Dataset(splits["train"], splits["validation"], splits["test"])


def _block_file(cfg: ExperimentConfig, name: str, split: str) -> Path:
    return cfg.out / "blocks" / f"{name}_{split}.drm"


def _drm_template_path(cfg: ExperimentConfig, template: str, split: str) -> Path:
    p = Path(template.replace("{split}", split))
    return p if p.is_absolute() else cfg.base_dir / p


class _EntityCache:
    def __init__(self):
        self._loaded = {}

    def get(self, path: str):
        if path not in self._loaded:
            self._loaded[path] = load_entity_file(path)
        return self._loaded[path]


def _build_block_matrix(decl: BlockDecl, cfg: ExperimentConfig, dataset: Dataset,
                        split: str, entities: _EntityCache,
                        lsa_models: dict) -> np.ndarray:
    docs = dataset.splits[split].documents
    if decl.source == "stylometric":
        return stylometric_matrix([d.text for d in docs], cfg.stylo_profile)
    if decl.source == "lsa":
        if decl.name not in lsa_models:
            train_tokens = [preprocess(d.text) for d in dataset.train.documents]
            lsa_cfg = LsaConfig(
                n_word_features=cfg.lsa_word_features,
                n_char_features=cfg.lsa_char_features,
                svd_dim=cfg.lsa_dim,
                seed=derive_seed(cfg.seed, "lsa", decl.name),
            )
            lsa_models[decl.name] = fit_lsa(train_tokens, lsa_cfg)
        model = lsa_models[decl.name]
        tokens = [preprocess(d.text) for d in docs]
        return transform_lsa_matrix(model, tokens).astype(np.float32)
    if decl.source == "kg":
        dictionary, store = entities.get(decl.embeddings)
        out = np.zeros((len(docs), store.dim), dtype=np.float32)
        for i, doc in enumerate(docs):
            cs = match_concepts(preprocess_kg(doc.text), dictionary, doc_id=doc.id,
                                longest_only=cfg.kg_longest_only)
            out[i] = agg_average(cs, store, multiset=cfg.kg_multiset)
        return out
    if decl.source == "kg-entity":
        dictionary, store = entities.get(decl.embeddings)
        out = np.zeros((len(docs), store.dim), dtype=np.float32)
        for i, doc in enumerate(docs):
            out[i] = entity_repr(doc.metadata, dictionary, store)
        return out
    raise ConfigError(f"block {decl.name!r} with source {decl.source!r} is not buildable")


def _parse_block_flags(flags: list[str]) -> list[BlockDecl]:
    decls = []
    for raw in flags or []:
        name, eq, rest = raw.partition("=")
        path, colon, kind = rest.rpartition(":")
        if not eq or not colon or not name or not path:
            raise ConfigError(
                f"--block expects name=path:kind with a {{split}} placeholder, got {raw!r}"
            )
        decls.append(BlockDecl(name=name, kind=kind, source="drm", path=path))
    return decls


def _registries(cfg: ExperimentConfig, dataset: Dataset, splits: tuple[str, ...],
                extra: list[BlockDecl]) -> dict[str, BlockRegistry]:
    """Load every declared block for the requested splits from DRM files."""
    decls = cfg.blocks + extra
    if not decls:
        raise ConfigError("no blocks declared (config [block.*] sections or --block)")
    registries = {}
    for split in splits:
        reg = BlockRegistry(dataset.splits[split].ids())
        for decl in decls:
            if decl.source == "drm":
                path = _drm_template_path(cfg, decl.path, split)
            else:
                path = _block_file(cfg, decl.name, split)
                if not path.exists():
                    raise HeterorepError(
                        f"block {decl.name!r} has no featurized matrix at {path}; "
                        f"run `heterorep featurize` first"
                    )
            reg.register_file(decl.name, decl.kind, path)
        reg.freeze()
        registries[split] = reg
    return registries


def _write_tsv(path: Path, rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write("\t".join(row) + "\n")


def _positive_class(cfg: ExperimentConfig, dataset: Dataset) -> int:
    if cfg.learners.averaging != "binary":
        return 1
    label = cfg.learners.positive_label
    if not label:
        return 1
    if label not in dataset.label_set.index:
        raise ConfigError(f"positive_label {label!r} is not a dataset label")
    return dataset.label_set.index[label]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_featurize(args) -> int:
    cfg = _config_from(args)
    dataset = _load_datasets(cfg)
    built = [b for b in cfg.blocks if b.source != "drm"]
    if not built:
        print("warning: no buildable blocks declared; nothing to do", file=sys.stderr)
        return 0

    blocks_dir = cfg.out / "blocks"
    blocks_dir.mkdir(parents=True, exist_ok=True)
    entities = _EntityCache()
    lsa_models: dict = {}
    written: list[Path] = []
    try:
        for decl in built:
            for split in SPLITS:
                matrix = _build_block_matrix(decl, cfg, dataset, split, entities,
                                             lsa_models)
                path = _block_file(cfg, decl.name, split)
                write_drm(path, matrix, dataset.splits[split].ids())
                written.extend([path, Path(str(path) + ".ids")])
                print(f"wrote {path} ({matrix.shape[0]}x{matrix.shape[1]})")
        for name, model in sorted(lsa_models.items()):
            models_dir = cfg.out / "models"
            models_dir.mkdir(parents=True, exist_ok=True)
            save_lsa_model(model, models_dir / f"{name}.lsa")
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return 0


def _mlp_grids(lc) -> list[dict]:
    grids = []
    for arch in lc.mlp_archs:
        axes: dict = {"arch": [arch]}
        if arch == "snn":
            axes["snn_width"] = list(lc.snn_widths)
        elif arch == "lnn":
            axes["lnn_n"] = list(lc.lnn_ns)
        axes["lr"] = list(lc.mlp_lrs)
        axes["dropout"] = list(lc.mlp_dropouts)
        axes["batch_size"] = [lc.mlp_batch_size]
        axes["max_epochs"] = [lc.mlp_max_epochs]
        axes["patience"] = [lc.mlp_patience]
        grids.append(axes)
    return grids


def cmd_train(args) -> int:
    cfg = _config_from(args)
    scenario_name = args.scenario
    custom = cfg.scenario_blocks(scenario_name)
    if custom is None and scenario_name not in BUILTIN_SCENARIOS:
        raise ConfigError(
            f"unknown scenario {scenario_name!r}; declare [scenario.{scenario_name}] "
            f"or use one of {BUILTIN_SCENARIOS}"
        )

    dataset = _load_datasets(cfg)
    registries = _registries(cfg, dataset, SPLITS, _parse_block_flags(args.block))
    scenario = registries["train"].scenario(scenario_name, custom)

    matrices = {}
    for split in SPLITS:
        matrices[split], attribution = compose(scenario, registries[split])
    standardizer = fit_standardizer(matrices["train"])
    X = {split: apply_standardizer(standardizer, matrices[split]) for split in SPLITS}
    y = {split: dataset.label_set.class_ids(dataset.splits[split]) for split in SPLITS}
    n_classes = len(dataset.label_set)
    averaging = cfg.learners.averaging
    positive = _positive_class(cfg, dataset)

    lc = cfg.learners
    candidates: list[GridTrial] = []
    all_trials: list[GridTrial] = []
    for family in lc.families:
        if family == "logreg":
            grids = [{"l2_lambda": list(lc.logreg_lambdas)}]
        elif family == "sgd":
            grids = [{
                "loss": list(lc.sgd_losses),
                "alpha": list(lc.sgd_alphas),
                "l1_ratio": list(lc.sgd_l1_ratios),
                "power_t": list(lc.sgd_power_ts),
                "eta0": [lc.sgd_eta0],
                "max_epochs": [lc.sgd_max_epochs],
            }]
        else:
            grids = _mlp_grids(lc)
        for grid in grids:
            _, trials = grid_search(family, grid, X["train"], y["train"],
                                    X["validation"], y["validation"], n_classes,
                                    seed=cfg.seed, averaging=averaging)
            for t in trials:
                t.trial_id = len(all_trials)
                all_trials.append(t)
                if t.metrics is not None:
                    candidates.append(t)

    winner = select_best(candidates)
    best_model = winner.model
    best_model.labels = tuple(dataset.label_set.labels)
    test_metrics = evaluate(best_model, X["test"], y["test"], averaging=averaging,
                            positive_class=positive)

    cfg.out.mkdir(parents=True, exist_ok=True)
    save_model(best_model, cfg.out / "model.mdl")
    _write_tsv(cfg.out / "trials.tsv", trial_table_rows(all_trials))

    val = winner.metrics
    _write_tsv(cfg.out / "report.tsv", [
        ["stage", "accuracy", "f1", "precision", "recall", "averaging"],
        ["validation", repr(val.accuracy), repr(val.f1), repr(val.precision),
         repr(val.recall), val.averaging],
        ["test", repr(test_metrics.accuracy), repr(test_metrics.f1),
         repr(test_metrics.precision), repr(test_metrics.recall),
         test_metrics.averaging],
    ])
    report = {
        "scenario": scenario.name,
        "blocks": list(scenario.blocks),
        "dimensions": int(matrices["train"].shape[1]),
        "seed": cfg.seed,
        "labels": list(dataset.label_set.labels),
        "sizes": {split: len(dataset.splits[split]) for split in SPLITS},
        "best": {
            "family": winner.family,
            "trial": winner.trial_id,
            "params": winner.params,
            "n_parameters": winner.n_parameters,
            "validation": val.as_dict(),
        },
        "test": test_metrics.as_dict(),
    }
    (cfg.out / "report.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    print(f"best {winner.family} trial {winner.trial_id}: "
          f"val f1 {val.f1:.4f}, test f1 {test_metrics.f1:.4f}")
    return 0


def cmd_ablate(args) -> int:
    cfg = _config_from(args)
    dataset = _load_datasets(cfg)
    registries = _registries(cfg, dataset, ("train", "validation"),
                             _parse_block_flags(args.block))
    y_train = dataset.label_set.class_ids(dataset.train)
    y_val = dataset.label_set.class_ids(dataset.validation)
    records = ablate(
        registries["train"], registries["validation"], y_train, y_val,
        n_classes=len(dataset.label_set),
        sample_fraction=cfg.analysis.sample_fraction,
        c_grid=cfg.analysis.ablation_c,
        seed=cfg.seed,
        min_sample_size=cfg.analysis.min_sample_size,
        averaging=cfg.learners.averaging,
        logreg_max_epochs=cfg.analysis.ablation_max_epochs,
    )

    cfg.out.mkdir(parents=True, exist_ok=True)

    def rows_for(recs):
        rows = [["bitmask", "blocks", "dimensions", "accuracy", "f1",
                 "precision", "recall", "status"]]
        for r in recs:
            m = r.metrics
            rows.append([
                str(r.bitmask), "+".join(r.blocks), str(r.dimension),
                repr(m.accuracy) if m else "", repr(m.f1) if m else "",
                repr(m.precision) if m else "", repr(m.recall) if m else "",
                f"failed: {r.error}" if r.failed else "ok",
            ])
        return rows

    _write_tsv(cfg.out / "ablation.tsv", rows_for(records))
    best, worst = best_worst(records, k=10)
    _write_tsv(cfg.out / "ablation_best10.tsv", rows_for(best))
    _write_tsv(cfg.out / "ablation_worst10.tsv", rows_for(worst))
    scatter = [["dimension", "f1"]]
    scatter += [[str(r.dimension), repr(r.metrics.f1)] for r in records if not r.failed]
    with open(cfg.out / "ablation_scatter.csv", "w", encoding="utf-8", newline="\n") as fh:
        for row in scatter:
            fh.write(",".join(row) + "\n")

    n_failed = sum(r.failed for r in records)
    print(f"ablated {len(records)} subsets ({n_failed} failed)")
    return 1 if n_failed else 0


def cmd_rank(args) -> int:
    cfg = _config_from(args)
    dataset = _load_datasets(cfg)
    registries = _registries(cfg, dataset, ("train",), _parse_block_flags(args.block))
    reg = registries["train"]
    scenario = reg.scenario("all", reg.names())
    matrix, attribution = compose(scenario, reg)
    y_train = dataset.label_set.class_ids(dataset.train)

    k = args.k if args.k is not None else cfg.analysis.rank_k
    if k > matrix.shape[1]:
        print(f"warning: top-k {k} exceeds {matrix.shape[1]} columns; clamping",
              file=sys.stderr)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # the clamp note above already went to stderr
        ranking, counts = rank_and_attribute(matrix, attribution, y_train, k=k,
                                             bins=cfg.analysis.mi_bins)

    cfg.out.mkdir(parents=True, exist_ok=True)
    with open(cfg.out / "ranking_radial.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("block,top_k_count\n")
        for name in reg.names():
            fh.write(f"{name},{counts[name]}\n")
    for name in reg.names():
        print(f"{name}\t{counts[name]}")
    return 0


def cmd_words(args) -> int:
    cfg = _config_from(args)
    dataset = _load_datasets(cfg)
    tokens = [preprocess(d.text) for d in dataset.train.documents]
    matrix, vocab = word_tfidf(tokens, cfg.analysis.words_vocab)
    y_train = dataset.label_set.class_ids(dataset.train)
    per_class = class_variance_words(matrix, vocab, y_train,
                                     dataset.label_set.labels,
                                     top_k=cfg.analysis.words_top_k)
    cfg.out.mkdir(parents=True, exist_ok=True)
    rows = [["class", "word", "variance"]]
    for class_name in dataset.label_set.labels:
        for word, variance in per_class[class_name]:
            rows.append([class_name, word, repr(variance)])
    _write_tsv(cfg.out / "variance_words.tsv", rows)
    print(f"wrote {len(rows) - 1} rows for {len(dataset.label_set)} classes")
    return 0


def cmd_stats(args) -> int:
    cfg = _config_from(args)
    dataset = _load_datasets(cfg)
    kg_decls = [b for b in cfg.blocks if b.source in ("kg", "kg-entity")]
    if not kg_decls:
        raise ConfigError("no kg or kg-entity blocks declared; nothing to analyze")
    entities = _EntityCache()

    stats_rows = [["block", "split", "rank", "concept", "count"]]
    coverage_rows = [["block", "split", "documents", "covered", "coverage"]]
    histogram_rows = [["block", "split", "concepts_per_doc", "n_docs"]]
    for decl in kg_decls:
        dictionary, _ = entities.get(decl.embeddings)
        per_split = {}
        for split in SPLITS:
            sets = []
            for doc in dataset.splits[split].documents:
                if decl.source == "kg":
                    sets.append(match_concepts(preprocess_kg(doc.text), dictionary,
                                               doc_id=doc.id))
                else:
                    sets.append(entity_concepts(doc.metadata, dictionary, doc_id=doc.id))
            per_split[split] = sets
        for report in concept_stats(per_split, dictionary, top_k=cfg.analysis.stats_top_k):
            for rank, (concept, count) in enumerate(report.top_concepts, start=1):
                stats_rows.append([decl.name, report.split_name, str(rank),
                                   concept, str(count)])
            coverage_rows.append([
                decl.name, report.split_name, str(report.n_documents),
                str(report.n_covered), repr(report.coverage),
            ])
            for n_concepts, n_docs in report.histogram.items():
                histogram_rows.append([decl.name, report.split_name,
                                       str(n_concepts), str(n_docs)])

    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_tsv(cfg.out / "concept_stats.tsv", stats_rows)
    _write_tsv(cfg.out / "concept_coverage.tsv", coverage_rows)
    _write_tsv(cfg.out / "concept_histogram.tsv", histogram_rows)
    print(f"analyzed {len(kg_decls)} block(s) over {len(SPLITS)} splits")
    return 0


def cmd_inspect(args) -> int:
    for raw in args.paths:
        path = Path(raw)
        rows, cols = read_drm_header(path)
        sidecar = Path(str(path) + ".ids")
        if sidecar.exists():
            n_ids = len(sidecar.read_text("utf-8").splitlines())
            ids_note = str(n_ids)
        else:
            ids_note = "missing"
        print(f"{path}: DRM rows={rows} cols={cols} ids={ids_note}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _config_from(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "out", None) is not None:
        cfg.out = Path(args.out)
    return cfg


def _add_common(sub, block_flag=True):
    sub.add_argument("--config", required=True, help="experiment config file")
    sub.add_argument("--seed", type=int, default=None, help="override [global] seed")
    sub.add_argument("--out", default=None, help="override [global] out directory")
    if block_flag:
        sub.add_argument("--block", action="append", default=[],
                         metavar="NAME=PATH:KIND",
                         help="register an external DRM block; PATH may contain {split}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heterorep",
        description="Heterogeneous document representations for fake-news "
                    "classification: featurization, training and analysis.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("featurize", help="build declared blocks as DRM files")
    _add_common(p, block_flag=False)
    p.set_defaults(func=cmd_featurize)

    p = commands.add_parser("train", help="grid-search learners on one scenario")
    _add_common(p)
    p.add_argument("--scenario", required=True,
                   help=f"scenario name: {BUILTIN_SCENARIOS} or a [scenario.*] section")
    p.set_defaults(func=cmd_train)

    p = commands.add_parser("ablate", help="exhaustive block-subset sweep")
    _add_common(p)
    p.set_defaults(func=cmd_ablate)

    p = commands.add_parser("rank", help="mutual-information feature ranking")
    _add_common(p)
    p.add_argument("--k", type=int, default=None, help="top-k features to attribute")
    p.set_defaults(func=cmd_rank)

    p = commands.add_parser("words", help="per-class TF-IDF variance words")
    _add_common(p, block_flag=False)
    p.set_defaults(func=cmd_words)

    p = commands.add_parser("stats", help="concept frequency and coverage report")
    _add_common(p, block_flag=False)
    p.set_defaults(func=cmd_stats)

    p = commands.add_parser("inspect", help="print DRM file headers")
    p.add_argument("paths", nargs="+", help="DRM files to inspect")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SchemaError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HeterorepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
