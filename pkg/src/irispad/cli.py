"""Command-line entry point wiring the toolkit into reproducible runs.

Commands: summarize, train, grid-search, evaluate, det. Flags override
values from an optional TOML config file (``--config``); every run writes a
``run.json`` provenance record (resolved config, seed, input digests,
toolkit version) next to its primary output. Exit codes: 0 ok, 1 usage,
2 data error, 3 numeric error; failures print a single machine-parsable
line to stderr.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .detplot import render_det_svg, write_det_csv
from .embeddings import join, read_embeddings
from .errors import IrisPadError
from .manifest import parse_manifest, summarize
from .metrics import PaiScope, det_curve, full_report
from .scores import load_scores, save_scores
from .train import DEFAULT_LR_GRID, TrainConfig, grid_search, score, train


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _one_line(msg: str) -> str:
    return " ".join(str(msg).split())


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _json_safe(value):
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    return value


def _write_run_record(command: str, resolved: dict, inputs: list, outputs: list) -> None:
    out_dir = Path(outputs[0]).parent if outputs else Path.cwd()
    record = {
        "command": command,
        "config": _json_safe({k: v for k, v in resolved.items() if not k.startswith("_")}),
        "config_file_values": _json_safe(resolved.get("_from_config_file", {})),
        "flag_values": _json_safe(resolved.get("_from_flags", {})),
        "seed": resolved.get("seed"),
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "toolkit_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(out_dir / "run.json", "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """Defaults < config file < command-line flags.

    Both layers are kept under private keys so the provenance record can
    show where every value came from.
    """
    file_cfg = {}
    if getattr(args, "config", None):
        with open(args.config, "rb") as fh:
            file_cfg = tomllib.load(fh)
    resolved = dict(defaults)
    from_file = {}
    for key in defaults:
        if key in file_cfg:
            resolved[key] = file_cfg[key]
            from_file[key] = file_cfg[key]
    from_flags = {}
    for key in defaults:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
            from_flags[key] = flag_value
    resolved["_from_config_file"] = from_file
    resolved["_from_flags"] = from_flags
    return resolved


def _require(resolved: dict, *keys: str) -> None:
    missing = [k for k in keys if resolved.get(k) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join(f"--{k.replace('_', '-')}" for k in missing))


def _scope(text: str) -> PaiScope:
    try:
        return PaiScope.parse(str(text))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_lr_grid(value) -> tuple[float, ...]:
    try:
        if isinstance(value, (list, tuple)):
            return tuple(float(v) for v in value)
        return tuple(float(tok) for tok in str(value).split(",") if tok.strip())
    except (TypeError, ValueError):
        raise UsageError(f"bad --lr-grid {value!r}") from None


def _parse_class_weights(value) -> tuple[float, float] | None:
    if value is None:
        return None
    try:
        w_bf, w_att = (float(tok) for tok in str(value).split(","))
        return (w_bf, w_att)
    except ValueError:
        raise UsageError(f"bad --class-weights {value!r}, expected 'bf,attack'") from None


def _train_config(resolved: dict, learning_rate) -> TrainConfig:
    try:
        return TrainConfig(
            learning_rate=float(learning_rate),
            epochs=int(resolved["epochs"]),
            batch_size=int(resolved["batch_size"]),
            hidden_width=int(resolved["hidden"]),
            seed=int(resolved["seed"]),
            optimizer=str(resolved["optimizer"]),
            class_weights=_parse_class_weights(resolved.get("class_weights")),
            lr_grid=_parse_lr_grid(resolved.get("lr_grid", DEFAULT_LR_GRID)),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_joined(resolved: dict, partitions: list[str]):
    manifest = parse_manifest(resolved["manifest"])
    emb = read_embeddings(resolved["embeddings"])
    return manifest, emb, [join(manifest, emb, p) for p in partitions]


# --- command handlers ---------------------------------------------------------

SUMMARIZE_DEFAULTS = {"manifest": None, "format": "text", "out": None}


def cmd_summarize(args) -> int:
    resolved = _resolve(args, SUMMARIZE_DEFAULTS)
    _require(resolved, "manifest")
    summary = summarize(parse_manifest(resolved["manifest"]))

    fmt = resolved["format"]
    if fmt == "text":
        rendered = summary.render_text()
    elif fmt == "json":
        rendered = json.dumps(summary.to_json_dict(), indent=2, sort_keys=True)
    elif fmt == "csv":
        lines = ["label,pai_species,train,val,test,total"]
        for row in summary.to_json_dict()["rows"]:
            lines.append(
                f"{row['label']},{row['pai_species']},{row['train']},{row['val']},{row['test']},{row['total']}"
            )
        rendered = "\n".join(lines)
    else:
        raise UsageError(f"bad --format {fmt!r}")

    outputs = []
    if resolved["out"]:
        Path(resolved["out"]).write_text(rendered + "\n", encoding="utf-8")
        outputs.append(resolved["out"])
    print(rendered)
    _write_run_record("summarize", resolved, [resolved["manifest"]], outputs)
    return 0


TRAIN_DEFAULTS = {
    "manifest": None,
    "embeddings": None,
    "out": None,
    "lr": 1e-4,
    "epochs": 100,
    "batch_size": 128,
    "hidden": 256,
    "seed": 42,
    "optimizer": "adam",
    "class_weights": None,
    "score_partition": "test",
    "val_scores": None,
    "history": None,
}


def _write_history(path, result) -> None:
    payload = {
        "config": _json_safe(
            {
                "learning_rate": result.config.learning_rate,
                "epochs": result.config.epochs,
                "batch_size": result.config.batch_size,
                "hidden_width": result.config.hidden_width,
                "seed": result.config.seed,
                "optimizer": result.config.optimizer,
            }
        ),
        "history": result.history.to_json_dict(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_train(args) -> int:
    resolved = _resolve(args, TRAIN_DEFAULTS)
    _require(resolved, "manifest", "embeddings", "out")
    cfg = _train_config(resolved, resolved["lr"])
    _, _, (train_data, val_data, target) = _load_joined(
        resolved, ["train", "val", resolved["score_partition"]]
    )

    result = train(train_data, val_data, cfg)
    out_scores = score(result.head, target)
    save_scores(out_scores, resolved["out"])
    outputs = [resolved["out"]]
    if resolved["val_scores"]:
        save_scores(result.val_scores, resolved["val_scores"])
        outputs.append(resolved["val_scores"])
    if resolved["history"]:
        _write_history(resolved["history"], result)
        outputs.append(resolved["history"])

    _write_run_record("train", resolved, [resolved["manifest"], resolved["embeddings"]], outputs)
    print(
        f"trained lr={cfg.learning_rate:g} best epoch {result.history.best_epoch} "
        f"val EER {100 * result.history.best_val_eer:.3f}% -> {resolved['out']}"
    )
    return 0


GRID_DEFAULTS = dict(TRAIN_DEFAULTS)
del GRID_DEFAULTS["lr"]
GRID_DEFAULTS.update({"lr_grid": None, "report": None})


def cmd_grid_search(args) -> int:
    resolved = _resolve(args, GRID_DEFAULTS)
    _require(resolved, "manifest", "embeddings", "out")
    grid = _parse_lr_grid(resolved["lr_grid"]) if resolved["lr_grid"] is not None else DEFAULT_LR_GRID
    if not grid:
        raise UsageError("--lr-grid is empty")
    base_cfg = _train_config(resolved, grid[0])
    _, _, (train_data, val_data, target) = _load_joined(
        resolved, ["train", "val", resolved["score_partition"]]
    )

    gs = grid_search(train_data, val_data, base_cfg, grid)
    out_scores = score(gs.best.head, target)
    save_scores(out_scores, resolved["out"])
    outputs = [resolved["out"]]
    if resolved["report"]:
        with open(resolved["report"], "w", encoding="utf-8") as fh:
            json.dump(gs.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        outputs.append(resolved["report"])
    if resolved["history"]:
        _write_history(resolved["history"], gs.best)
        outputs.append(resolved["history"])

    for cell in gs.cells:
        if cell.status == "ok":
            print(
                f"lr={cell.learning_rate:<8g} val EER {100 * cell.val_eer:7.3f}%  "
                f"BPCER10 {100 * cell.val_bpcer10:7.3f}%  best epoch {cell.best_epoch}"
            )
        else:
            print(f"lr={cell.learning_rate:<8g} FAILED: {_one_line(cell.error)}")
    print(f"best lr={gs.best.config.learning_rate:g} -> {resolved['out']}")
    _write_run_record("grid-search", resolved, [resolved["manifest"], resolved["embeddings"]], outputs)
    return 0


EVALUATE_DEFAULTS = {"scores": None, "pai_scope": "pooled", "report": None, "format": "json"}


def cmd_evaluate(args) -> int:
    resolved = _resolve(args, EVALUATE_DEFAULTS)
    _require(resolved, "scores")
    report = full_report(load_scores(resolved["scores"]), _scope(resolved["pai_scope"]))

    outputs = []
    if resolved["report"]:
        fmt = resolved["format"]
        if fmt == "json":
            rendered = json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
        elif fmt == "csv":
            rendered = "metric,value\n" + "".join(f"{k},{v}\n" for k, v in report.to_csv_rows())
        elif fmt == "text":
            rendered = report.render_text() + "\n"
        else:
            raise UsageError(f"bad --format {fmt!r}")
        Path(resolved["report"]).write_text(rendered, encoding="utf-8")
        outputs.append(resolved["report"])
    print(report.render_text())
    _write_run_record("evaluate", resolved, [resolved["scores"]], outputs)
    return 0


DET_DEFAULTS = {"scores": None, "out": None, "svg": None, "pai_scope": "pooled"}


def cmd_det(args) -> int:
    resolved = _resolve(args, DET_DEFAULTS)
    _require(resolved, "scores", "out")
    scope = _scope(resolved["pai_scope"])
    curve = det_curve(load_scores(resolved["scores"]), scope)
    write_det_csv(curve, resolved["out"])
    outputs = [resolved["out"]]
    if resolved["svg"]:
        render_det_svg([(str(scope), curve)], resolved["svg"])
        outputs.append(resolved["svg"])
    print(f"det sweep with {len(curve)} points -> {resolved['out']}")
    _write_run_record("det", resolved, [resolved["scores"]], outputs)
    return 0


# --- parser --------------------------------------------------------------------


def _add_common(p) -> None:
    p.add_argument("--config", help="TOML config file; flags override its values")


def _add_train_flags(p) -> None:
    p.add_argument("--manifest")
    p.add_argument("--embeddings")
    p.add_argument("--out", help="scores CSV for the scored partition")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--hidden", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--optimizer", choices=["adam", "sgd"])
    p.add_argument("--class-weights", dest="class_weights", help="per-class loss weights 'bf,attack'")
    p.add_argument("--score-partition", dest="score_partition", choices=["train", "val", "test"])
    p.add_argument("--val-scores", dest="val_scores", help="also write validation scores here")
    p.add_argument("--history", help="write per-epoch history JSON here")


def _build_parser() -> _Parser:
    parser = _Parser(prog="irispad", description=__doc__)
    parser.add_argument("--version", action="version", version=f"irispad {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="tally a manifest per class/species/partition")
    p.add_argument("--manifest")
    p.add_argument("--format", dest="format", choices=["text", "json", "csv"])
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("train", help="train the classifier head at one learning rate")
    p.add_argument("--lr", type=float)
    _add_train_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("grid-search", help="train across a learning-rate grid, keep the best")
    p.add_argument("--lr-grid", dest="lr_grid", help="comma-separated learning rates")
    p.add_argument("--report", help="write per-cell JSON report here")
    _add_train_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_grid_search)

    p = sub.add_parser("evaluate", help="compute the metrics report for a score file")
    p.add_argument("--scores")
    p.add_argument("--pai-scope", dest="pai_scope", help="pooled | worst-case | single:<species>")
    p.add_argument("--report", help="write the report here")
    p.add_argument("--format", dest="format", choices=["json", "csv", "text"])
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("det", help="emit the DET sweep as CSV (and optional SVG)")
    p.add_argument("--scores")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--pai-scope", dest="pai_scope")
    _add_common(p)
    p.set_defaults(func=cmd_det)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"irispad: error category=usage type=UsageError: {_one_line(exc)}", file=sys.stderr)
        return 1
    except IrisPadError as exc:
        code = 3 if exc.category == "numeric" else 2
        print(
            f"irispad: error category={exc.category} type={type(exc).__name__}: {_one_line(exc)}",
            file=sys.stderr,
        )
        return code
    except OSError as exc:
        print(f"irispad: error category=data type={type(exc).__name__}: {_one_line(exc)}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
