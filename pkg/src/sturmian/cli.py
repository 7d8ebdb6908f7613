"""Command-line front end: ``sturmian solve|table|compare|oracle``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys as _sys
from dataclasses import dataclass, field

from . import baselines, tables
from .basis import QUAD_RTOL, SystemParams
from .errors import DomainError, SturmianError, UnsupportedPotential
from .potentials import (
    ExactFamilyOrder1,
    Gaussian,
    GaussianTilde,
    Harmonic,
    PureQuartic,
    QuarticAnharmonic,
    natural_v0,
)
from .variational import (
    GOLDEN_RTOL,
    minimize_all_branches,
    solve_gaussian_ground_order0,
    solve_order0_general,
    solve_qao_order0,
    solve_quartic_order0,
)

METHODS = ("vsa0", "vsa1", "vsa2", "csa", "pt0", "pt1", "wkb0", "oracle")
POTENTIALS = ("qao", "quartic", "gaussian", "gaussian-tilde", "harmonic", "exact")
FORMATS = ("table", "csv", "json")
CSV_HEADER = ["level", "method", "energy", "script_e_star", "reference", "rel_error"]
ENV_PREFIX = "STURMIAN_TOL_"
EXIT_CONFIG, EXIT_SOLVER, EXIT_TABLE_FAIL = 2, 3, 1

DEFAULTS = {
    "potential": "qao",
    "k": None,
    "eps": None,
    "lam": None,
    "alpha0": None,
    "zeta": None,
    "e_target": None,
    "m": 1.0,
    "hbar": 1.0,
    "k0": None,
    "method": ["vsa0"],
    "levels": None,
    "index_sets": None,
    "format": "table",
    "select": "nearest",
    "order0_form": "legacy",
    "x_max": None,
    "n_points": 4001,
    "with_oracle": False,
}
TOLERANCE_KEYS = {"quad_rtol": QUAD_RTOL, "minimize_rtol": GOLDEN_RTOL}


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    potential: str
    params: dict
    methods: tuple
    levels: tuple
    index_sets: tuple | None
    units: SystemParams
    output: str = "table"
    select: str = "nearest"
    order0_form: str = "legacy"
    tolerances: dict = field(default_factory=dict)
    k0: float | None = None
    x_max: float | None = None
    n_points: int = 4001
    with_oracle: bool = False


@dataclass
class ResultRecord:
    level: int
    method: str
    energy: float | None
    script_e_star: float | None = None
    reference: float | None = None
    rel_error: float | None = None
    method_tag: str = ""
    diagnostics: dict = field(default_factory=dict)

    def attach_reference(self, reference):
        self.reference = reference
        if reference is not None and self.energy is not None:
            self.rel_error = abs(self.energy - reference) / abs(reference)


def parse_levels(text):
    """``"0..9"`` (inclusive) or ``"0,2,4"``."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = (int(p) for p in text.split(".."))
            out = tuple(range(lo, hi + 1))
        else:
            out = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise ConfigError(f"bad level list {text!r}") from exc
    if not out or min(out) < 0:
        raise ConfigError(f"bad level list {text!r}")
    return out


def _levels(text, index_sets):
    if text is not None:
        return parse_levels(text)
    if index_sets:
        return tuple(sorted({n for idx in index_sets for n in idx}))
    return (0,)


def parse_index_sets(text):
    """``"0,2;1,3"`` -> ((0, 2), (1, 3))."""
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return tuple(tuple(int(i) for i in s) for s in text)
    try:
        return tuple(tuple(int(i) for i in part.split(",")) for part in str(text).split(";") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"bad index sets {text!r}") from exc


def fmt(x, digits=10):
    return "" if x is None else format(x, f".{digits}g")


def _num(x):
    return None if x is None else float(fmt(x))


def _require(params, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise ConfigError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def make_potential(name, params, units):
    try:
        if name == "qao":
            _require(params, "k", "eps")
            return QuarticAnharmonic(params["k"], params["eps"])
        if name == "quartic":
            _require(params, "eps")
            return PureQuartic(params["eps"])
        if name == "gaussian":
            _require(params, "lam", "eps")
            return Gaussian(params["lam"], params["eps"])
        if name == "gaussian-tilde":
            _require(params, "lam", "eps")
            return GaussianTilde(params["lam"], params["eps"])
        if name == "harmonic":
            _require(params, "k")
            return Harmonic(params["k"])
        if name == "exact":
            _require(params, "alpha0", "zeta", "e_target")
            return ExactFamilyOrder1(
                params["alpha0"], params["zeta"], params["e_target"], hbar=units.hbar, mass=units.mass
            )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown potential {name!r}")


def _env_tolerances():
    out = {}
    for key in TOLERANCE_KEYS:
        raw = os.environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            try:
                out[key] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"{ENV_PREFIX}{key.upper()} is not a number") from exc
    return out


def _merge(args):
    merged = dict(DEFAULTS)
    file_tol = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        file_tol = data.pop("tolerances", {}) or {}
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ConfigError("unknown config keys: " + ", ".join(sorted(unknown)))
        merged.update(data)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            merged[key] = value
    tolerances = {**file_tol, **_env_tolerances()}
    for key, value in list(getattr(args, "tol", None) or []):
        tolerances[key] = value
    unknown = set(tolerances) - set(TOLERANCE_KEYS)
    if unknown:
        raise ConfigError("unknown tolerance keys: " + ", ".join(sorted(unknown)))
    return merged, tolerances


def build_config(args):
    merged, tolerances = _merge(args)
    if merged["potential"] not in POTENTIALS:
        raise ConfigError(f"potential must be one of {POTENTIALS}")
    methods = merged["method"]
    if isinstance(methods, str):
        methods = [methods]
    methods = tuple(m for chunk in methods for m in str(chunk).split(",") if m)
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown method(s) {bad}; choose from {METHODS}")
    if merged["format"] not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    if merged["select"] not in ("unique", "nearest", "lowest"):
        raise ConfigError("select must be unique, nearest or lowest")
    if merged["order0_form"] not in ("legacy", "stationary"):
        raise ConfigError("order0-form must be legacy or stationary")
    try:
        units = SystemParams(hbar=float(merged["hbar"]), mass=float(merged["m"]))
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    params = {k: merged[k] for k in ("k", "eps", "lam", "alpha0", "zeta", "e_target")}
    index_sets = parse_index_sets(merged["index_sets"])
    cfg = RunConfig(
        potential=merged["potential"],
        params=params,
        methods=methods,
        levels=_levels(merged["levels"], index_sets),
        index_sets=index_sets,
        units=units,
        output=merged["format"],
        select=merged["select"],
        order0_form=merged["order0_form"],
        tolerances=tolerances,
        k0=merged["k0"],
        x_max=merged["x_max"],
        n_points=int(merged["n_points"]),
        with_oracle=bool(merged["with_oracle"]),
    )
    for method in methods:
        check_compatible(cfg, method)
    return cfg


def check_compatible(cfg, method):
    pot = cfg.potential
    if method == "wkb0" and pot != "quartic":
        raise ConfigError("wkb0 is only available for the quartic potential")
    if method in ("pt0", "pt1"):
        if pot in ("quartic", "exact"):
            raise ConfigError(f"{method} is not available for {pot}")
        if pot in ("gaussian", "gaussian-tilde") and any(n != 0 for n in cfg.levels):
            raise ConfigError(f"{method} for the Gaussian covers the ground state only")


def _k0(cfg, v):
    if cfg.k0 is not None:
        return float(cfg.k0)
    try:
        return natural_v0(v)[0]
    except UnsupportedPotential as exc:
        raise ConfigError(str(exc)) from exc


def default_index_set(method, n):
    if method == "vsa1":
        return (n, n + 2)
    return (n - 2, n, n + 2) if n >= 2 else (n, n + 2, n + 4)


def _vsa0(cfg, v, n):
    u, p = cfg.units, cfg.params
    if cfg.potential == "qao":
        return solve_qao_order0(u, p["k"], p["eps"], n, cfg.order0_form)
    if cfg.potential == "quartic":
        return solve_quartic_order0(u, p["eps"], n, cfg.order0_form)
    if cfg.potential in ("gaussian", "gaussian-tilde") and n == 0:
        sol = solve_gaussian_ground_order0(u, p["lam"], p["eps"])
        if cfg.potential == "gaussian-tilde":
            sol.energies[0] += p["lam"]
        return sol
    return solve_order0_general(u, _k0(cfg, v), n, v)


def _record_from(method, n, sol):
    return ResultRecord(n, method, sol.energies[n], sol.script_e_star, method_tag=sol.method_tag)


def _solve_vsa12(cfg, v, method):
    order = 1 if method == "vsa1" else 2
    k0 = _k0(cfg, v)
    tol = {
        "rtol": cfg.tolerances.get("minimize_rtol", GOLDEN_RTOL),
        "quad_rtol": cfg.tolerances.get("quad_rtol", QUAD_RTOL),
    }
    records = []
    if cfg.index_sets:
        for idx in cfg.index_sets:
            if len(idx) != order + 1:
                raise ConfigError(f"{method} needs index sets of size {order + 1}, got {idx}")
            sols = minimize_all_branches(cfg.units, k0, idx, v, order, cfg.select, **tol)
            for n in sorted(sols):
                if n in cfg.levels:
                    rec = _record_from(method, n, sols[n])
                    rec.diagnostics["index_set"] = list(sols[n].indices)
                    records.append(rec)
        return records
    for n in cfg.levels:
        idx = default_index_set(method, n)
        sols = minimize_all_branches(cfg.units, k0, idx, v, order, cfg.select, **tol)
        rec = _record_from(method, n, sols[n])
        rec.diagnostics["index_set"] = list(idx)
        records.append(rec)
    return records


def _oracle(cfg, v, levels):
    top = max(levels) + 1
    oc = baselines.OracleConfig(x_max=cfg.x_max, n_points=cfg.n_points, levels=top)
    return baselines.oracle_spectrum(cfg.units, v, oc)


def run_method(cfg, v, method, oracle=None):
    u, p = cfg.units, cfg.params
    if method in ("vsa1", "vsa2"):
        return _solve_vsa12(cfg, v, method)
    records = []
    for n in cfg.levels:
        if method == "vsa0":
            records.append(_record_from(method, n, _vsa0(cfg, v, n)))
        elif method == "csa":
            e = baselines.conventional_sturmian_order0(u, _k0(cfg, v), n, v)
            records.append(ResultRecord(n, method, e, e, method_tag="conventional"))
        elif method in ("pt0", "pt1"):
            order = int(method[-1])
            if cfg.potential in ("gaussian", "gaussian-tilde"):
                e = baselines.perturbation_gaussian_ground(u, p["lam"], p["eps"], order)
                if cfg.potential == "gaussian-tilde":
                    e += p["lam"]
            else:
                eps = p["eps"] if cfg.potential == "qao" else 0.0
                e = baselines.perturbation_qao(u, p["k"], eps, n, order)
            records.append(ResultRecord(n, method, e, method_tag="perturbation"))
        elif method == "wkb0":
            e = baselines.wkb_quartic_order0(u, p["eps"], n)
            records.append(ResultRecord(n, method, e, method_tag="wkb"))
        elif method == "oracle":
            spec = oracle if oracle is not None else _oracle(cfg, v, cfg.levels)
            rec = ResultRecord(n, method, spec.energies[n], method_tag="finite_difference")
            rec.diagnostics["error_estimate"] = spec.errors[n]
            records.append(rec)
    return records


def cmd_solve(cfg):
    v = make_potential(cfg.potential, cfg.params, cfg.units)
    oracle = None
    if cfg.with_oracle or "oracle" in cfg.methods:
        levels = set(cfg.levels)
        for idx in cfg.index_sets or ():
            levels.update(idx)
        oracle = _oracle(cfg, v, sorted(levels))
    records = []
    for method in cfg.methods:
        records += run_method(cfg, v, method, oracle)
    if cfg.with_oracle:
        for rec in records:
            rec.attach_reference(oracle.energies[rec.level])
    records.sort(key=lambda r: (r.level, cfg.methods.index(r.method)))
    return records


def cmd_compare(cfg):
    if len(cfg.methods) < 2:
        raise ConfigError("compare needs at least two methods")
    v = make_potential(cfg.potential, cfg.params, cfg.units)
    levels = set(cfg.levels)
    for idx in cfg.index_sets or ():
        levels.update(idx)
    oracle = _oracle(cfg, v, sorted(levels))
    records = []
    for method in cfg.methods:
        records += run_method(cfg, v, method, oracle)
    for rec in records:
        rec.attach_reference(oracle.energies[rec.level])
    records.sort(key=lambda r: (r.level, cfg.methods.index(r.method)))
    return records


def cmd_table(which):
    return tables.build(int(which))


def potential_summary(cfg):
    params = {k: _num(v) for k, v in cfg.params.items() if v is not None}
    return {"name": cfg.potential, **params, "hbar": _num(cfg.units.hbar), "m": _num(cfg.units.mass)}


def render_records(records, fmt_name, cfg, compare=False):
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([r.level, r.method, fmt(r.energy), fmt(r.script_e_star), fmt(r.reference), fmt(r.rel_error)])
        return buf.getvalue()
    if fmt_name == "json":
        if compare:
            levels = []
            for n in sorted({r.level for r in records}):
                methods = {
                    r.method: {"E": _num(r.energy), "rel_err": _num(r.rel_error)}
                    for r in records
                    if r.level == n
                }
                levels.append({"n": n, "methods": methods})
            doc = {"potential": potential_summary(cfg), "levels": levels}
        else:
            doc = {
                "potential": potential_summary(cfg),
                "results": [
                    {
                        "level": r.level,
                        "method": r.method,
                        "energy": _num(r.energy),
                        "script_e_star": _num(r.script_e_star),
                        "reference": _num(r.reference),
                        "rel_error": _num(r.rel_error),
                        "method_tag": r.method_tag,
                    }
                    for r in records
                ],
            }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    header = ["level", "method", "energy", "script_e*", "reference", "rel_error"]
    rows = [
        [str(r.level), r.method, fmt(r.energy, 6), fmt(r.script_e_star, 6), fmt(r.reference, 6), fmt(r.rel_error, 2)]
        for r in records
    ]
    return _grid(header, rows)


def _grid(header, rows):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    line = lambda cells: "  ".join(str(c).rjust(w) for c, w in zip(cells, widths))
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in rows]) + "\n"


def render_table(report, fmt_name):
    if fmt_name == "json":
        doc = {
            "table": report.number,
            "columns": report.columns,
            "rows": [[_num(x) if isinstance(x, float) else x for x in row] for row in report.rows],
            "cells": [
                {
                    "column": c.column,
                    "row": c.row,
                    "computed": _num(c.computed),
                    "printed": c.printed,
                    "mode": c.mode,
                    "tolerance": _num(c.tolerance),
                    "passed": c.passed,
                    "note": c.note,
                }
                for c in report.cells
            ],
            "passed": report.passed,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["column", "row", "computed", "printed", "mode", "tolerance", "status"])
        for c in report.cells:
            w.writerow([c.column, c.row, fmt(c.computed), c.printed, c.mode, fmt(c.tolerance),
                        "PASS" if c.passed else "FAIL"])
        return buf.getvalue()
    rows = [[fmt(x, 6) if isinstance(x, float) else ("-" if x is None else str(x)) for x in row] for row in report.rows]
    out = [f"Table {report.number}", _grid(report.columns, rows)]
    for c in report.cells:
        status = "PASS" if c.passed else "FAIL"
        tol = {"abs": f"abs {c.tolerance:g}", "rel": f"rel {c.tolerance:g}",
               "printed": "printed digits", "sig2": "2 sig. figs"}[c.mode]
        extra = f" [{c.note}]" if c.note else ""
        out.append(f"{status}  {c.column:<8} {c.row:<14} computed={fmt(c.computed, 8):<14} printed={c.printed:<10} ({tol}){extra}")
    failed = len(report.failures())
    out.append(f"{len(report.cells) - failed}/{len(report.cells)} cells pass")
    return "\n".join(out) + "\n"


def _add_problem_args(p):
    p.add_argument("--config", help="JSON file with the same keys as the flags; flags win")
    p.add_argument("--potential", choices=POTENTIALS)
    p.add_argument("--k", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--alpha0", type=float)
    p.add_argument("--zeta", type=float)
    p.add_argument("--e-target", dest="e_target", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--hbar", type=float)
    p.add_argument("--k0", type=float, help="spring constant of the reference oscillator")
    p.add_argument("--method", action="append", help="one of " + ", ".join(METHODS) + "; repeat or comma-separate")
    p.add_argument("--levels", help='"0..9" or "0,2,4"')
    p.add_argument("--index-sets", dest="index_sets", help='e.g. "0,2;1,3"')
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--select", choices=("unique", "nearest", "lowest"))
    p.add_argument("--order0-form", dest="order0_form", choices=("legacy", "stationary"))
    p.add_argument("--x-max", dest="x_max", type=float)
    p.add_argument("--n-points", dest="n_points", type=int)
    p.add_argument("--with-oracle", dest="with_oracle", action="store_true", default=None)
    p.add_argument("--tol", nargs=2, action="append", metavar=("KEY", "VALUE"),
                   type=_tol_pair, help="tolerance override, e.g. --tol quad_rtol 1e-11")


def _tol_pair(text):
    try:
        return float(text)
    except ValueError:
        return text


def build_parser():
    parser = argparse.ArgumentParser(prog="sturmian", description="Variational Sturmian approximation")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "compare", "oracle"):
        _add_problem_args(sub.add_parser(name))
    t = sub.add_parser("table")
    t.add_argument("which", type=int, choices=sorted(tables.BUILDERS))
    t.add_argument("--format", choices=FORMATS, default="table")
    return parser


def main(argv=None, out=None, err=None):
    out = out or _sys.stdout
    err = err or _sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "table":
            report = cmd_table(args.which)
            out.write(render_table(report, args.format))
            return 0 if report.passed else EXIT_TABLE_FAIL
        cfg = build_config(args)
        if args.command == "oracle":
            cfg = RunConfig(**{**cfg.__dict__, "methods": ("oracle",)})
            records = cmd_solve(cfg)
        elif args.command == "compare":
            records = cmd_compare(cfg)
        else:
            records = cmd_solve(cfg)
        out.write(render_records(records, cfg.output, cfg, compare=args.command == "compare"))
        return 0
    except ConfigError as exc:
        err.write(f"ConfigError: {exc}\n")
        return EXIT_CONFIG
    except SturmianError as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
