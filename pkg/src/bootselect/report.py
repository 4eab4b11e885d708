"""JSON serialization of selection runs.

Document layout (``format: bootselect-report/1``)::

    {
      "format": "bootselect-report/1",
      "config": {...},              # resolved settings; enough to re-run
      "data": {"n", "p", "feature_names", "sha256"},
      "methods": {
        "<bootstrap|loo>": {
          "B", "master_seed", "max_redraws",
          "ranking": {"order", "pareto", "failed"},
          "models": [{
            "name", "family", "p", "H", "n_params", "status",
            "mu", "sigma", "tmse_vector",
            "histogram": {"edges", "counts"},
            "failures": [{"replicate", "attempt", "error", ...}],
            "replicates": [{"index", "attempt", "draw_log", "tsse",
                            "tmse", "theta_hat", "residuals"}]
          }]
        }
      }
    }

Floats are written by ``json`` with ``repr`` precision, so every value reads
back bit-for-bit. Keys are sorted and the output carries no timestamps or
paths of its own, so equal runs give equal bytes.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .selection import Ranking, SelectionReport

FORMAT = "bootselect-report/1"


def data_digest(data: Dataset) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(data.x, dtype="<f8").tobytes())
    h.update(np.ascontiguousarray(data.y, dtype="<f8").tobytes())
    return h.hexdigest()


def _floats(a) -> list:
    return [float(v) for v in np.ravel(a)]


def method_document(report: SelectionReport, ranking: Ranking | None) -> dict:
    models = []
    for e in report.entries:
        m = e.model
        models.append(
            {
                "name": m.name,
                "family": m.family,
                "p": m.p,
                "H": m.H,
                "n_params": m.n_params,
                "status": "failed" if e.failed else "ok",
                "mu": e.mu,
                "sigma": e.sigma,
                "tmse_vector": _floats(e.tmse_vector),
                "histogram": None
                if e.histogram is None
                else {"edges": _floats(e.histogram.edges), "counts": [int(c) for c in e.histogram.counts]},
                "failures": list(e.failures),
                "replicates": [
                    {
                        "index": r.replicate_index,
                        "attempt": r.redraws_used,
                        "draw_log": list(r.draw_log),
                        "tsse": r.tsse,
                        "tmse": r.tmse,
                        "theta_hat": _floats(r.theta_hat),
                        "residuals": _floats(r.residuals),
                    }
                    for r in e.results
                ],
            }
        )
    doc = {
        "B": report.plan.B,
        "master_seed": report.plan.master_seed,
        "max_redraws": report.plan.max_redraws,
        "models": models,
        "ranking": None,
    }
    if ranking is not None:
        doc["ranking"] = {
            "order": list(ranking.order),
            "pareto": list(ranking.pareto),
            "failed": list(ranking.failed),
        }
    return doc


def build_document(config: dict, data: Dataset, methods: dict) -> dict:
    return {
        "format": FORMAT,
        "config": config,
        "data": {
            "n": data.n,
            "p": data.p,
            "feature_names": list(data.feature_names),
            "sha256": data_digest(data),
        },
        "methods": methods,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, allow_nan=False) + "\n"


def write_report(doc: dict, path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def load_report(path) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT:
        raise ValueError(f"{path} is not a {FORMAT} document")
    return doc


def find_model(doc: dict, method: str, name: str) -> dict:
    try:
        models = doc["methods"][method]["models"]
    except KeyError:
        raise KeyError(f"report has no results for method {method!r}") from None
    for m in models:
        if m["name"] == name:
            return m
    known = ", ".join(m["name"] for m in models)
    raise KeyError(f"unknown model {name!r} (report has: {known})")
