"""Command line driver.

Subcommands::

    bootselect generate --generate ex1|ex2 [--n N] [--seed N] [--include-x3] --out FILE
    bootselect select   [--config PATH] (--data CSV | --generate ex1|ex2) [options] --out DIR
    bootselect histogram REPORT --model NAME [--method bootstrap|loo] [--bins N] [--out FILE]

Settings are resolved as defaults < config file < flags. The seed falls back
to ``$BOOTSELECT_SEED`` (then 0) when neither the file nor a flag sets it.

Exit status: 0 success, 2 configuration error, 3 CSV parse error,
4 a model failed (replicates exhausted their redraws), 5 I/O error,
6 unknown model or method in ``histogram``.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import yaml

from .dataset import Dataset, read_csv, write_csv
from .datagen import EX1, EX2, GenSpec, generate
from .errors import CsvParseError
from .mlp import TrainConfig
from .report import build_document, find_model, load_report, method_document, write_report
from .resampling import BOOTSTRAP, LOO, ResamplePlan
from .selection import LINEAR, MLP, ModelSpec, histogram, rank_models, run_selection

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_FAILED = 4
EXIT_IO = 5
EXIT_LOOKUP = 6

SEED_ENV = "BOOTSELECT_SEED"

DEFAULTS = {
    "data": None,
    "generate": None,
    "n": 500,
    "include_x3": None,
    "models": None,
    "B": 50,
    "method": "both",
    "seed": None,
    "max_redraws": 3,
    "bins": 20,
    "epochs": 2000,
    "lr": 0.1,
    "momentum": 0.9,
    "init_scale": 0.5,
    "tolerance": 1e-10,
    "tau": 0.05,
}
# not part of the echo: they never change results
RUNTIME_KEYS = ("out", "workers")

DEFAULT_MODELS = {
    EX1: ["linear:p=2,name=M1", "linear:p=1,name=M2", "linear:p=3,name=M3"],
    EX2: ["mlp:p=2,H=2,name=M2", "mlp:p=2,H=4,name=M4", "mlp:p=2,H=6,name=M6"],
}


class ConfigError(ValueError):
    pass


def parse_model(text: str) -> ModelSpec:
    """``linear:p=2`` or ``mlp:p=2,H=4``, optionally with ``,name=M1``."""
    family, sep, rest = text.strip().partition(":")
    family = family.strip().lower()
    if not sep or family not in (LINEAR, MLP):
        raise ConfigError(f"bad model spec {text!r}; expected linear:p=N or mlp:p=N,H=M")
    fields = {}
    for item in rest.split(","):
        key, eq, value = item.partition("=")
        if not eq:
            raise ConfigError(f"bad field {item!r} in model spec {text!r}")
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"p", "H", "name"}
    if unknown:
        raise ConfigError(f"unknown field(s) {sorted(unknown)} in model spec {text!r}")
    try:
        p = int(fields["p"])
        H = int(fields["H"]) if "H" in fields else None
        return ModelSpec(family, p, H, fields.get("name", ""))
    except KeyError:
        raise ConfigError(f"model spec {text!r} is missing p") from None
    except ValueError as exc:
        raise ConfigError(f"model spec {text!r}: {exc}") from None


def split_model_list(text: str) -> list[str]:
    """Split ``linear:p=2,mlp:p=2,H=4`` into one string per model."""
    specs: list[str] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token or not specs:
            specs.append(token)
        else:
            specs[-1] += "," + token
    return specs


def format_model(m: ModelSpec) -> str:
    return f"{m.label},name={m.name}"


def load_config_file(path) -> dict:
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a flat key/value mapping")
    raw = {str(k).replace("-", "_"): v for k, v in raw.items()}
    unknown = set(raw) - set(DEFAULTS) - set(RUNTIME_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    for k, v in raw.items():
        if isinstance(v, (dict,)):
            raise ConfigError(f"config key {k!r} must hold a scalar or list")
    return raw


def resolve_settings(args: dict) -> dict:
    settings = dict(DEFAULTS)
    settings.update(out=".", workers=1)
    if args.get("config"):
        settings.update(load_config_file(args["config"]))
    # a source given on the command line replaces the file's source
    if "data" in args:
        settings["generate"] = None
    if "generate" in args:
        settings["data"] = None
    settings.update({k: v for k, v in args.items() if k in settings})

    if settings["seed"] is None:
        env = os.environ.get(SEED_ENV)
        try:
            settings["seed"] = int(env) if env not in (None, "") else 0
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    if bool(settings["data"]) == bool(settings["generate"]):
        raise ConfigError("give exactly one data source: --data PATH or --generate ex1|ex2")
    if settings["generate"] not in (None, EX1, EX2):
        raise ConfigError(f"--generate must be ex1 or ex2, got {settings['generate']!r}")
    if settings["include_x3"] is None:
        settings["include_x3"] = settings["generate"] == EX1
    if settings["data"]:
        settings["data"] = str(Path(settings["data"]).resolve())
    if settings["method"] not in (BOOTSTRAP, LOO, "both"):
        raise ConfigError(f"--method must be bootstrap, loo or both, got {settings['method']!r}")

    models = settings["models"]
    if models is None:
        if not settings["generate"]:
            raise ConfigError("--models is required with --data")
        models = DEFAULT_MODELS[settings["generate"]]
    if isinstance(models, str):
        models = split_model_list(models)
    parsed = [parse_model(str(m)) for m in models]
    if not parsed:
        raise ConfigError("at least one model is required")
    names = [m.name for m in parsed]
    if len(set(names)) != len(names):
        raise ConfigError(f"model names must be unique: {names}")
    settings["models"] = [format_model(m) for m in parsed]

    for key in ("n", "B", "seed", "max_redraws", "bins", "epochs", "workers"):
        try:
            settings[key] = int(settings[key])
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be an integer, got {settings[key]!r}") from None
    for key in ("lr", "momentum", "init_scale", "tolerance", "tau"):
        try:
            settings[key] = float(settings[key])
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {settings[key]!r}") from None
    settings["include_x3"] = bool(settings["include_x3"])
    if settings["B"] < 2:
        raise ConfigError("B must be >= 2")
    if settings["bins"] < 1:
        raise ConfigError("bins must be >= 1")
    if not 0 <= settings["seed"] < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    if settings["tau"] < 0:
        raise ConfigError("tau must be >= 0")
    return settings


def echo(settings: dict) -> dict:
    return {k: v for k, v in settings.items() if k not in RUNTIME_KEYS}


def load_data(settings: dict) -> Dataset:
    if settings["generate"]:
        return generate(
            GenSpec(settings["generate"], settings["n"], settings["seed"], settings["include_x3"])
        )
    return read_csv(settings["data"])


def train_config(settings: dict) -> TrainConfig:
    try:
        return TrainConfig(
            max_epochs=settings["epochs"],
            learning_rate=settings["lr"],
            momentum=settings["momentum"],
            init_scale=settings["init_scale"],
            tolerance=settings["tolerance"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _fmt(v) -> str:
    return "failed" if v is None else f"{v:.4g}"


def format_table(reports: dict) -> str:
    """Rows are models; column pairs are (mu, sigma) per method."""
    methods = [m for m in (BOOTSTRAP, LOO) if m in reports]
    title = {BOOTSTRAP: "Bootstrap", LOO: "Leave-one-out"}
    names = [e.model.name for e in next(iter(reports.values())).entries]
    width = max(8, *(len(n) for n in names))
    head1 = " " * width + " | " + " | ".join(f"{title[m]:^21}" for m in methods)
    head2 = f"{'Model':<{width}} | " + " | ".join(f"{'mu':>10} {'sigma':>10}" for _ in methods)
    lines = [head1, head2, "-" * len(head2)]
    for name in names:
        cells = []
        for m in methods:
            e = reports[m].entry(name)
            cells.append(f"{_fmt(e.mu):>10} {_fmt(e.sigma):>10}")
        lines.append(f"{name:<{width}} | " + " | ".join(cells))
    for m in methods:
        ranking = rank_models(reports[m]) if any(not e.failed for e in reports[m].entries) else None
        if ranking is not None:
            lines.append(
                f"{title[m]}: best = {ranking.best}; order = {', '.join(ranking.order)}; "
                f"pareto = {', '.join(ranking.pareto)}"
            )
    return "\n".join(lines)


def run_select(settings: dict):
    """Run the configured experiment; returns (document, reports by method)."""
    data = load_data(settings)
    models = [parse_model(m) for m in settings["models"]]
    for m in models:
        if m.p > data.p:
            raise ConfigError(f"model {m.name} needs {m.p} inputs but the data has {data.p} columns")
    cfg = train_config(settings)
    methods = [BOOTSTRAP, LOO] if settings["method"] == "both" else [settings["method"]]
    reports, docs = {}, {}
    for method in methods:
        plan = ResamplePlan(settings["B"], method, settings["seed"], settings["max_redraws"])
        report = run_selection(
            models, data, plan, cfg, workers=settings["workers"], bins=settings["bins"]
        )
        ranking = rank_models(report, settings["tau"]) if any(not e.failed for e in report.entries) else None
        reports[method] = report
        docs[method] = method_document(report, ranking)
    return build_document(echo(settings), data, docs), reports


def write_summary(doc: dict, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "method", "mu", "sigma"])
        for method, mdoc in doc["methods"].items():
            for m in mdoc["models"]:
                writer.writerow(
                    [m["name"], method, "" if m["mu"] is None else repr(m["mu"]),
                     "" if m["sigma"] is None else repr(m["sigma"])]
                )


def cmd_generate(args: dict) -> int:
    example = args.get("generate")
    if example not in (EX1, EX2):
        raise ConfigError("generate needs --generate ex1|ex2")
    seed = args.get("seed")
    if seed is None:
        seed = int(os.environ.get(SEED_ENV) or 0)
    spec = GenSpec(example, int(args.get("n", 500)), int(seed), bool(args.get("include_x3", False)))
    out = args.get("out")
    if not out:
        raise ConfigError("generate needs --out FILE")
    write_csv(generate(spec), out)
    print(f"wrote {spec.n} rows to {out}")
    return EXIT_OK


def cmd_select(args: dict) -> int:
    settings = resolve_settings(args)
    doc, reports = run_select(settings)
    out = Path(settings["out"])
    out.mkdir(parents=True, exist_ok=True)
    write_report(doc, out / "report.json")
    write_summary(doc, out / "summary.csv")
    (out / "config.yaml").write_text(
        yaml.safe_dump(doc["config"], sort_keys=True, default_flow_style=False), encoding="utf-8"
    )
    print(format_table(reports))
    print(f"report: {out / 'report.json'}")
    failed = [(m, e.model.name) for m, r in reports.items() for e in r.entries if e.failed]
    if failed:
        for m, name in failed:
            print(f"error: model {name} failed under {m}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_histogram(args: dict) -> int:
    doc = load_report(args["report"])
    method = args.get("method", BOOTSTRAP)
    model = find_model(doc, method, args["model"])
    residuals = [v for r in model["replicates"] for v in r["residuals"]]
    hist = histogram(residuals, int(args.get("bins", 20)))
    out = args.get("out")
    fh = open(out, "w", newline="", encoding="utf-8") if out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["edge_lo", "edge_hi", "count"])
        for lo, hi, c in zip(hist.edges[:-1], hist.edges[1:], hist.counts):
            writer.writerow([repr(float(lo)), repr(float(hi)), int(c)])
    finally:
        if out:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(
        prog="bootselect", description="Bootstrap model selection for MLPs and linear models."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a simulated example dataset as CSV")
    gen.add_argument("--generate", required=True, choices=[EX1, EX2])
    gen.add_argument("--n", type=int, default=S)
    gen.add_argument("--seed", type=int, default=S)
    gen.add_argument("--include-x3", action="store_true", default=S)
    gen.add_argument("--out", required=True, help="output CSV path")

    sel = sub.add_parser("select", help="run bootstrap / leave-one-out selection")
    sel.add_argument("--config", default=S, help="flat YAML/JSON key-value file")
    src = sel.add_mutually_exclusive_group()
    src.add_argument("--data", default=S, help="dataset CSV (x1..xp,y)")
    src.add_argument("--generate", choices=[EX1, EX2], default=S)
    sel.add_argument("--n", type=int, default=S)
    sel.add_argument("--include-x3", action=argparse.BooleanOptionalAction, default=S)
    sel.add_argument("--models", default=S, help="e.g. linear:p=2,name=M1,mlp:p=2,H=4")
    sel.add_argument("--B", type=int, default=S)
    sel.add_argument("--method", choices=[BOOTSTRAP, LOO, "both"], default=S)
    sel.add_argument("--seed", type=int, default=S)
    sel.add_argument("--max-redraws", type=int, default=S)
    sel.add_argument("--bins", type=int, default=S)
    sel.add_argument("--epochs", type=int, default=S)
    sel.add_argument("--lr", type=float, default=S)
    sel.add_argument("--momentum", type=float, default=S)
    sel.add_argument("--init-scale", type=float, default=S)
    sel.add_argument("--tolerance", type=float, default=S)
    sel.add_argument("--tau", type=float, default=S, help="relative mu band for ranking")
    sel.add_argument("--workers", type=int, default=S)
    sel.add_argument("--out", default=S, help="output directory")

    hist = sub.add_parser("histogram", help="residual histogram from a report")
    hist.add_argument("report")
    hist.add_argument("--model", required=True)
    hist.add_argument("--method", choices=[BOOTSTRAP, LOO], default=S)
    hist.add_argument("--bins", type=int, default=S)
    hist.add_argument("--out", default=S, help="output CSV (default: stdout)")
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    handler = {"generate": cmd_generate, "select": cmd_select, "histogram": cmd_histogram}[command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CsvParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except KeyError as exc:
        print(f"lookup error: {exc.args[0]}", file=sys.stderr)
        return EXIT_LOOKUP
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
