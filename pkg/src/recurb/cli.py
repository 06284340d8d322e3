"""Command-line front end: ``recurb identities|classify|list``.

Exit codes: 0 pass, 1 check failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import analysis as A
from . import catalog
from .errors import GeometryError
from .tensors import evaluate_point

SCHEMA = "1"
SIG_DIGITS = 12
TOL_NAMES = ("parallel", "recur", "rank", "b_zero", "identity")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    entry: str
    params: dict = field(default_factory=dict)
    grid: tuple = (5,)
    tol: A.Tolerances = A.DEFAULT_TOL
    out: str | None = None
    fmt: str = "json"


def _num(x):
    """Fixed 12-significant-digit floats so reports are byte-stable."""
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.{SIG_DIGITS}g}")


def _vec(xs):
    return [_num(x) for x in np.asarray(xs).ravel()]


def _worst(w):
    return None if w is None else {"value": _num(w["value"]), "u": _vec(w["u"])}


def _entries(cfg: RunConfig):
    if cfg.entry == "all":
        if cfg.params:
            raise UsageError("--param cannot be combined with --entry all")
        return [catalog.instantiate(e) for e in catalog.entry_ids()]
    return [catalog.instantiate(cfg.entry, cfg.params)]


def _ambient_dict(a):
    return {"c": _num(a.c), "ambient_dim": a.ambient_dim, "model_dim": a.model_dim}


def run_identities(entry, cfg: RunConfig) -> tuple[bool, dict]:
    pts = A.grid_points(entry.chart, cfg.grid)
    rows = []
    for u in pts:
        pg = evaluate_point(entry.chart, entry.ambient, u)
        rows.append((u, A.identity_residuals(pg, entry.ambient)))
    summary = {}
    ok = True
    for name in ("gauss", "codazzi", "ricci"):
        u, res = max(rows, key=lambda r: r[1][name])
        summary[name] = {"value": _num(res[name]), "u": _vec(u)}
        ok &= res[name] <= cfg.tol.identity
    report = {
        "schema": SCHEMA,
        "command": "identities",
        "entry": entry.id,
        "params": {k: _num(v) for k, v in sorted(entry.params.items())},
        "ambient": _ambient_dict(entry.ambient),
        "grid": list(cfg.grid),
        "tolerance": _num(cfg.tol.identity),
        "per_point": [{"u": _vec(u), "gauss": _num(r["gauss"]),
                       "codazzi": _num(r["codazzi"]), "ricci": _num(r["ricci"]),
                       "ricci_trivial": r["ricci_trivial"]} for u, r in rows],
        "summary": {"worst_residuals": summary, "pass": bool(ok)},
    }
    return bool(ok), report


def _point_dict(r: A.PointReport) -> dict:
    eig = r.shape_eig
    return {
        "u": _vec(r.u),
        "status": r.status,
        "mu": _vec(r.recurrence.mu),
        "dim_N1": r.dim_N1,
        "dim_N0": r.dim_N0,
        "nabla_b_norm": _num(r.recurrence.nabla_b_norm),
        "b_norm": _num(r.recurrence.b_norm),
        "H_norm": _num(r.H_norm),
        "eigenvalues": None if eig.eigenvalues is None else _vec(eig.eigenvalues),
        "shape_pattern": eig.pattern_ok,
        "residuals": {
            "recurrence": _num(r.recurrence.residual),
            "gauss": _num(r.gauss),
            "codazzi": _num(r.codazzi),
            "ricci": _num(r.ricci),
            "einstein": _num(r.einstein_residual),
            "normal_flat": _num(r.normal_flat_residual),
            "normal_parallel": _num(r.normal_parallel_residual),
            "h_pairing": _num(r.h_pairing_residual),
            "shape_quadratic": _num(eig.residual),
        },
    }


def run_classify(entry, cfg: RunConfig) -> tuple[bool, dict]:
    rep = A.classify(entry.chart, entry.ambient, cfg.grid, cfg.tol,
                     product_adapted=entry.expected.product_adapted)
    matches = all(r.status == entry.expected.status for r in rep.points)
    s = rep.summary
    pc = rep.product_check
    report = {
        "schema": SCHEMA,
        "command": "classify",
        "entry": entry.id,
        "params": {k: _num(v) for k, v in sorted(entry.params.items())},
        "ambient": _ambient_dict(entry.ambient),
        "grid": list(cfg.grid),
        "expected_status": entry.expected.status,
        "per_point": [_point_dict(r) for r in rep.points],
        "summary": {
            "grid_status": s["grid_status"],
            "status_histogram": s["status_histogram"],
            "dim_N1_mode": s["dim_N1_mode"],
            "codim_rank": rep.codim_rank,
            "mu_vs_dlnH": _num(rep.mu_vs_dlnH),
            "product_check": None if not pc.applicable else {
                "orthogonality": _num(pc.orthogonality),
                "conjugacy": _num(pc.conjugacy),
                "second_block": _num(pc.second_block),
                "block_independence": _num(pc.block_independence)},
            "worst_residuals": {k: _worst(v) for k, v in s["worst_residuals"].items()},
            "matches_expected": bool(matches),
        },
    }
    return bool(matches), report


def list_rows():
    return [{"id": eid, "c": _num(c), "params": list(names), "description": desc}
            for eid, desc, c, names in catalog.list_entries()]


def _csv(reports) -> str:
    buf = io.StringIO()
    rows = []
    for rep in reports:
        for p in rep["per_point"]:
            row = {"entry": rep["entry"]}
            for i, x in enumerate(p["u"]):
                row[f"u{i}"] = x
            for k, v in p.items():
                if k in ("u", "residuals"):
                    continue
                if isinstance(v, list):
                    for i, x in enumerate(v):
                        row[f"{k}{i}"] = x
                else:
                    row[k] = v
            for k, v in p.get("residuals", {}).items():
                row[f"res_{k}"] = v
            rows.append(row)
    cols = []
    for row in rows:
        cols += [c for c in row if c not in cols]
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _render(reports, fmt):
    if fmt == "csv":
        return _csv(reports)
    doc = reports[0] if len(reports) == 1 else {"schema": SCHEMA, "reports": reports}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _parse_kv(items, what):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"{what} must look like name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _parse_config(ns) -> RunConfig:
    try:
        grid = tuple(int(x) for x in ns.grid.split(","))
    except ValueError:
        raise UsageError(f"--grid must be comma-separated integers, got {ns.grid!r}") from None
    if any(g < 3 for g in grid):
        raise UsageError("grid counts must be >= 3")
    tol_raw = _parse_kv(ns.tol, "--tol")
    bad = sorted(set(tol_raw) - set(TOL_NAMES))
    if bad:
        raise UsageError(f"unknown tolerance(s) {bad}; known: {list(TOL_NAMES)}")
    try:
        tol = replace(A.DEFAULT_TOL, **{k: float(v) for k, v in tol_raw.items()})
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    params = _parse_kv(ns.param, "--param")
    return RunConfig(ns.entry, params, grid, tol, ns.out, ns.format)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="recurb",
        description="Recurrence of the second fundamental form on catalog immersions.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("identities", "Gauss, Codazzi and Ricci residuals over a grid"),
                        ("classify", "full recurrence classification report")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--entry", required=True, help="catalog id, or 'all'")
        p.add_argument("--param", action="append", metavar="K=V", help="entry parameter")
        p.add_argument("--grid", default="5", help="samples per axis, e.g. 5 or 7,5")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help=f"tolerance override ({', '.join(TOL_NAMES)})")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
    p = sub.add_parser("list", help="list catalog entries")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if ns.command == "list":
            rows = list_rows()
            if ns.format == "csv":
                buf = io.StringIO()
                w = csv.DictWriter(buf, fieldnames=["id", "c", "params", "description"],
                                   lineterminator="\n")
                w.writeheader()
                for r in rows:
                    w.writerow({**r, "params": " ".join(r["params"])})
                _emit(buf.getvalue(), ns.out)
            else:
                _emit(json.dumps({"schema": SCHEMA, "entries": rows}, indent=2) + "\n", ns.out)
            return 0
        cfg = _parse_config(ns)
        entries = _entries(cfg)
        runner = run_identities if ns.command == "identities" else run_classify
        results = []
        for e in entries:
            if len(cfg.grid) not in (1, e.chart.n):
                raise UsageError(f"--grid needs 1 or {e.chart.n} counts for {e.id}")
            results.append(runner(e, cfg))
    except (UsageError, GeometryError, ValueError) as exc:
        print(f"recurb: error: {exc}", file=sys.stderr)
        return 2
    _emit(_render([r for _, r in results], cfg.fmt), cfg.out)
    return 0 if all(ok for ok, _ in results) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
