"""Command-line front end: ``hkft transform | validate | corpus | partition``.

Exit status is 0 exactly when every requested computation converged or
every check passed; 1 when some did not; 2 for usage and configuration
errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence, TextIO

import yaml

from . import functions as fn
from .expressions import ExpressionError, function_from_expression
from .hake import DivergenceError, HakeConfig
from .hk_core import Gauge, PartitionDepthError, TaggedPartition, check_fineness, make_delta_fine_partition
from .quadrature import QuadratureConfig
from .transforms import (
    FrequencyDomainError,
    InternalConsistencyError,
    PreconditionError,
    TransformConfig,
    TransformResult,
    applicable_methods,
    transform_grid,
)
from .validation import SUITES, run_suite

COLUMNS = ("s", "re", "im", "err", "method", "converged", "levels")
FORMATS = ("csv", "jsonl")
METHOD_CHOICES = ("auto", "direct", "by-parts", "by_parts", "even", "even_formula", "odd", "odd_formula")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    function: str | None = None
    expression: str | None = None
    parity: str = "none"
    membership: list[str] = field(default_factory=list)
    support: list[tuple[float, float]] | None = None
    singular_points: list[float] = field(default_factory=list)
    total_variation: float | None = None
    s_values: list[float] = field(default_factory=list)
    method: str = "auto"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 4000
    hake_tol: float = 1e-10
    k_min: int = 4
    k_max: int = 200
    base_T: float = 1.0
    min_radius: float = 0.0
    format: str = "csv"
    output: str | None = None
    workers: int | None = None

    def transform_config(self) -> TransformConfig:
        return TransformConfig(
            hake=HakeConfig(k_min=self.k_min, k_max=self.k_max, base_T=self.base_T,
                            target_tol=self.hake_tol, min_radius=self.min_radius),
            quadrature=QuadratureConfig(self.abs_tol, self.rel_tol, self.max_subdivisions))

    def build_function(self) -> fn.RealFunction:
        if (self.function is None) == (self.expression is None):
            raise ConfigError("give exactly one of function (a corpus label) or expression")
        if self.function is not None:
            try:
                return fn.corpus_entry(self.function).function
            except KeyError:
                labels = ", ".join(e.label for e in fn.corpus())
                raise ConfigError(f"unknown function {self.function!r}; corpus labels: {labels}") from None
        try:
            return function_from_expression(
                self.expression, parity=self.parity, support=self.support,
                membership=self.membership, singular_points=self.singular_points,
                total_variation=self.total_variation)
        except (ExpressionError, ValueError) as exc:
            raise ConfigError(f"expression: {exc}") from None


# --------------------------------------------------------------------------- parsing helpers

def parse_real(token: str) -> float:
    t = str(token).strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    return float(t)


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop included when hit) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {text!r} must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step == 0 or (stop - start) / step < 0:
            raise ConfigError(f"grid {text!r} is empty")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(n)]
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ConfigError("empty grid")
    return values


_TOLERANCE_KEYS = {"abs_tol": float, "rel_tol": float, "max_subdivisions": int, "hake_tol": float,
                   "k_min": int, "k_max": int, "base_T": float, "min_radius": float}
_TOP_KEYS = {"function", "expression", "parity", "membership", "support", "singular_points",
             "total_variation", "s", "s_grid", "method", "tolerances", "format", "output", "workers"}


def _key_lines(text: str) -> dict[tuple[str, ...], int]:
    """1-based line of every mapping key, by path."""
    lines: dict[tuple[str, ...], int] = {}

    def walk(node, path):
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                p = path + (str(k.value),)
                lines[p] = k.start_mark.line + 1
                walk(v, p)

    try:
        walk(yaml.compose(text), ())
    except yaml.YAMLError:
        pass
    return lines


def load_config(path: str) -> tuple[RunConfig, set[str]]:
    """Read a YAML run configuration; errors name the file, line and field."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark else path
        raise ConfigError(f"{where}: invalid YAML ({getattr(exc, 'problem', exc)})") from None
    lines = _key_lines(text)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1: top level must be a mapping")

    def fail(keypath: tuple[str, ...], msg: str):
        line = lines.get(keypath)
        loc = f"{path}:{line}" if line else path
        raise ConfigError(f"{loc}: field '{'.'.join(keypath)}': {msg}")

    cfg = RunConfig()
    given: set[str] = set()
    for key, value in data.items():
        key = str(key)
        if key not in _TOP_KEYS:
            fail((key,), f"unknown key (allowed: {', '.join(sorted(_TOP_KEYS))})")
        try:
            if key == "tolerances":
                if not isinstance(value, dict):
                    fail((key,), "must be a mapping")
                for k2, v2 in value.items():
                    if k2 not in _TOLERANCE_KEYS:
                        fail((key, str(k2)), f"unknown tolerance (allowed: {', '.join(_TOLERANCE_KEYS)})")
                    try:
                        setattr(cfg, k2, _TOLERANCE_KEYS[k2](v2))
                    except (TypeError, ValueError):
                        fail((key, str(k2)), f"expected a number, got {v2!r}")
                    given.add(k2)
                continue
            if key == "s":
                vals = value if isinstance(value, list) else [value]
                cfg.s_values = [float(v) for v in vals]
            elif key == "s_grid":
                cfg.s_values = parse_grid(str(value))
            elif key == "membership":
                vals = value if isinstance(value, list) else [value]
                unknown = [v for v in vals if v not in fn.FLAGS]
                if unknown:
                    fail((key,), f"unknown flags {unknown} (allowed: {', '.join(fn.FLAGS)})")
                cfg.membership = [str(v) for v in vals]
            elif key == "support":
                cfg.support = [(parse_real(a), parse_real(b)) for a, b in value]
            elif key == "singular_points":
                cfg.singular_points = [float(v) for v in value]
            elif key == "method":
                if str(value) not in METHOD_CHOICES:
                    fail((key,), f"unknown method {value!r} (allowed: {', '.join(METHOD_CHOICES)})")
                cfg.method = str(value)
            elif key == "format":
                if str(value) not in FORMATS:
                    fail((key,), f"unknown format {value!r} (allowed: {', '.join(FORMATS)})")
                cfg.format = str(value)
            elif key == "parity":
                if str(value) not in fn.PARITIES:
                    fail((key,), f"unknown parity {value!r}")
                cfg.parity = str(value)
            elif key == "total_variation":
                cfg.total_variation = float(value)
            elif key == "workers":
                cfg.workers = int(value)
            else:
                setattr(cfg, key, str(value))
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            fail((key,), f"bad value {value!r} ({exc})")
        given.add("s_values" if key in ("s", "s_grid") else key)
    return cfg, given


# --------------------------------------------------------------------------- output

def result_record(r: TransformResult) -> dict[str, Any]:
    return {"s": r.s, "re": r.value.real, "im": r.value.imag, "err": r.error_estimate,
            "method": r.method, "converged": r.converged, "levels": r.levels}


def write_records(records: list[dict[str, Any]], out: TextIO, form: str):
    if form == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(COLUMNS)
        for rec in records:
            w.writerow([fmt(rec["s"]), fmt(rec["re"]), fmt(rec["im"]), fmt(rec["err"]), rec["method"],
                        "true" if rec["converged"] else "false", rec["levels"]])
    else:
        for rec in records:
            out.write(json.dumps({k: rec[k] for k in COLUMNS}) + "\n")


def read_records(text: str, form: str = "csv") -> list[dict[str, Any]]:
    """Inverse of :func:`write_records`."""
    out = []
    if form == "csv":
        rows = list(csv.DictReader(text.splitlines()))
        for row in rows:
            out.append({"s": float(row["s"]), "re": float(row["re"]), "im": float(row["im"]),
                        "err": float(row["err"]), "method": row["method"],
                        "converged": row["converged"] == "true", "levels": int(row["levels"])})
    else:
        for line in text.splitlines():
            if line.strip():
                out.append(json.loads(line))
    return out


# --------------------------------------------------------------------------- commands

def cmd_transform(args) -> int:
    cfg = RunConfig()
    given: set[str] = set()
    if args.config:
        cfg, given = load_config(args.config)
    if args.function is not None or args.expr is not None:
        cfg.function, cfg.expression = args.function, args.expr
    for name in ("parity", "method", "format", "output", "workers", "abs_tol", "rel_tol",
                 "hake_tol", "k_min", "k_max", "base_T", "min_radius", "total_variation"):
        v = getattr(args, name)
        if v is not None:
            setattr(cfg, name, v)
    if args.membership is not None:
        cfg.membership = [m.strip() for m in args.membership.split(",") if m.strip()]
    if args.support is not None:
        cfg.support = [tuple(parse_real(x) for x in piece.split(":")) for piece in args.support.split(",")]
    if args.singular_points is not None:
        cfg.singular_points = [float(x) for x in args.singular_points.split(",") if x.strip()]
    if args.s:
        cfg.s_values = [float(x) for x in args.s]
    if args.s_grid:
        cfg.s_values = cfg.s_values + parse_grid(args.s_grid) if args.s else parse_grid(args.s_grid)
    if not cfg.s_values:
        raise ConfigError("no frequencies: give --s, --s-grid or s/s_grid in the config")

    f = cfg.build_function()
    tcfg = cfg.transform_config()
    bad = [s for s in cfg.s_values if not (math.isfinite(s) and abs(s) >= tcfg.s_min)]
    if bad:
        raise ConfigError(f"|s| must be >= s_min = {tcfg.s_min:g}; rejected s = "
                          + ", ".join(fmt(s) for s in bad))
    m = cfg.method.replace("-", "_")
    m = {"even": "even_formula", "odd": "odd_formula"}.get(m, m)
    if m != "auto" and m not in applicable_methods(f):
        raise ConfigError(f"method {cfg.method!r} does not apply to {f.label}; "
                          f"applicable: {', '.join(applicable_methods(f)) or 'none'}")
    if m == "auto" and not applicable_methods(f):
        raise ConfigError(f"no transform path applies to {f.label}: declare membership L1 or BV0")

    results = transform_grid(f, cfg.s_values, m, tcfg, workers=cfg.workers, on_error="return")
    records = []
    ok = True
    for s, r in zip(cfg.s_values, results):
        if isinstance(r, Exception):
            ok = False
            print(f"s={fmt(s)}: {type(r).__name__}: {r}", file=sys.stderr)
            records.append({"s": s, "re": math.nan, "im": math.nan, "err": math.inf,
                            "method": m, "converged": False,
                            "levels": getattr(getattr(r, "sequence", None), "levels_used", 0)})
            continue
        if not r.converged:
            ok = False
            print(f"s={fmt(s)}: not converged (error estimate {r.error_estimate:.3g}, "
                  f"{r.levels} levels)", file=sys.stderr)
        records.append(result_record(r))
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            write_records(records, fh, cfg.format)
    else:
        write_records(records, sys.stdout, cfg.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_validate(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        checks = run_suite(name)
        passed = sum(c.passed for c in checks)
        print(f"== suite {name}: {passed}/{len(checks)} passed")
        for c in checks:
            extra = f"  ({c.detail})" if c.detail else ""
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  measured={c.measured:.3e}  "
                  f"tol={c.tolerance:.1e}{extra}")
        ok = ok and passed == len(checks)
    return EXIT_OK if ok else EXIT_FAIL


def _flags(f: fn.RealFunction) -> str:
    return ",".join(fl for fl in fn.FLAGS if fl in f.membership) or "-"


def cmd_corpus(args) -> int:
    if args.action == "list":
        for e in fn.corpus():
            f = e.function
            print(f"{f.label:<14} parity={f.parity:<5} flags={_flags(f)}")
        return EXIT_OK
    if not args.label:
        raise ConfigError("corpus describe needs a label")
    try:
        e = fn.corpus_entry(args.label)
    except KeyError:
        print(f"unknown corpus label {args.label!r}", file=sys.stderr)
        return EXIT_FAIL
    f = e.function
    support = ", ".join(f"({a:g}, {b:g})" for a, b in f.support)
    print(f"label:        {f.label}")
    print(f"definition:   {f.description}")
    print(f"parity:       {f.parity}")
    print(f"support:      {support}  [{f.support_kind}]")
    print(f"flags:        {_flags(f)}")
    print(f"derivative:   {'analytic' if f.derivative is not None else 'none'}")
    if f.total_variation is not None:
        print(f"variation:    {fmt(f.total_variation)}")
    if f.singular_points:
        print(f"non-smooth:   {', '.join(f'{p:g}' for p in f.singular_points)}")
    print(f"methods:      {', '.join(applicable_methods(f)) or 'none'}")
    print(f"closed form:  {'yes' if e.reference_transform is not None else 'no'}")
    if e.tf_pieces:
        print(f"t*f split:    {' + '.join(p.label for p in e.tf_pieces)}")
    if e.notes:
        print(f"notes:        {e.notes}")
    return EXIT_OK


def _gauge_from_spec(text: str, edge_neg: float | None, edge_pos: float | None) -> Gauge:
    try:
        value = float(text)
    except ValueError:
        value = None
    if value is not None:
        if not value > 0:
            raise ConfigError("constant gauge must be positive")
        return Gauge.constant(value, edge_neg, edge_pos)
    try:
        g = function_from_expression(text)
    except ExpressionError as exc:
        raise ConfigError(f"gauge: {exc}") from None
    return Gauge(g.eval, edge_neg or 1.0, edge_pos or 1.0)


def cmd_partition(args) -> int:
    a, b = parse_real(args.interval[0]), parse_real(args.interval[1])
    if not a < b:
        raise ConfigError(f"interval [{a}, {b}] is empty")
    gauge = _gauge_from_spec(args.gauge, args.edge_neg, args.edge_pos)
    if args.single_cell:
        tag = -math.inf if a == -math.inf else math.inf if b == math.inf else a
        partition = TaggedPartition.from_cells([(a, b, tag)], (a, b))
    else:
        try:
            partition = make_delta_fine_partition(gauge, a, b)
        except PartitionDepthError as exc:
            print(f"partition failed: {exc}", file=sys.stderr)
            return EXIT_FAIL
    try:
        report = check_fineness(partition, gauge)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("left", "right", "tag"))
    for c in partition.cells:
        w.writerow((fmt(c.left), fmt(c.right), fmt(c.tag)))
    verdict = "fine" if report.is_fine else f"not fine (first violation at cell {report.first_violation}: {report.reason})"
    print(f"# cells={len(partition)} verdict: {verdict}")
    return EXIT_OK if report.is_fine else EXIT_FAIL


# --------------------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hkft", description="Fourier transforms of L1 + BV0 functions "
                                "via truncated gauge integrals.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="evaluate F(f)(s) on a grid")
    src = t.add_mutually_exclusive_group()
    src.add_argument("--function", help="corpus label (see 'corpus list')")
    src.add_argument("--expr", help="inline expression in t, e.g. 'exp(-abs(t))'")
    t.add_argument("--parity", choices=fn.PARITIES)
    t.add_argument("--membership", help="comma-separated flags for --expr: " + ",".join(fn.FLAGS))
    t.add_argument("--support", help="support intervals for --expr, e.g. '0:inf' or '-1:0,1:2'")
    t.add_argument("--singular-points", help="comma-separated non-smooth points for --expr")
    t.add_argument("--total-variation", type=float)
    t.add_argument("--s", action="append", type=float, help="a frequency (repeatable)")
    t.add_argument("--s-grid", help="start:stop:step or a comma-separated list")
    t.add_argument("--method", choices=METHOD_CHOICES)
    t.add_argument("--abs-tol", type=float)
    t.add_argument("--rel-tol", type=float)
    t.add_argument("--hake-tol", type=float)
    t.add_argument("--k-min", type=int)
    t.add_argument("--k-max", type=int)
    t.add_argument("--base-T", dest="base_T", type=float)
    t.add_argument("--min-radius", type=float)
    t.add_argument("--format", choices=FORMATS)
    t.add_argument("--output", "-o")
    t.add_argument("--workers", type=int)
    t.add_argument("--config", help="YAML run configuration; flags override it")
    t.set_defaults(handler=cmd_transform)

    v = sub.add_parser("validate", help="run an invariant suite")
    v.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    v.set_defaults(handler=cmd_validate)

    c = sub.add_parser("corpus", help="list or describe corpus functions")
    c.add_argument("action", choices=("list", "describe"))
    c.add_argument("label", nargs="?")
    c.set_defaults(handler=cmd_corpus)

    q = sub.add_parser("partition", help="build a delta-fine tagged partition")
    q.add_argument("--gauge", required=True, help="positive constant or expression in t")
    q.add_argument("--interval", nargs=2, required=True, metavar=("A", "B"),
                   help="endpoints; -inf and inf allowed")
    q.add_argument("--edge-neg", type=float, help="edge delta at -inf")
    q.add_argument("--edge-pos", type=float, help="edge delta at +inf")
    q.add_argument("--single-cell", action="store_true",
                   help="skip construction and test the one-cell partition [A, B]")
    q.set_defaults(handler=cmd_partition)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, FrequencyDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DivergenceError, InternalConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
