"""Command line interface.

Four verbs: ``eval`` scores predictions from a CSV or JSON file, ``chart``
prints the composition grid, ``list`` dumps the catalog and ``suites``
shows the named metric bundles.  Exit codes: 0 all good, 1 at least one
metric failed to evaluate, 2 the configuration or input could not be used
at all.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__, chart, derived, registry
from .evaluator import evaluate
from .errors import (
    EvaluationError,
    FileAccess,
    IngestError,
    MetricError,
    MissingBenchmark,
    ParseError,
    UnimplementedMetric,
    UnknownMetric,
    UnknownSuite,
    UnknownVariant,
    ValidationError,
)
from .types import (
    AggKind,
    Aggregator,
    BenchmarkInput,
    Dimension,
    Distance,
    EvaluationPolicy,
    LogRatioPolicy,
    MetricComposition,
    MetricResult,
    NormalizerSpec,
    NormKind,
    PointTransform,
    PostKind,
    PostTransform,
    SeriesPair,
    ZeroDenominatorPolicy,
    ensure_iterable_of_floats,
    validate_series_pair,
)

# --- input ingestion -------------------------------------------------------


def _open_text(path: str):
    try:
        return open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise FileAccess(path, exc.strerror or str(exc)) from exc


def read_columns_csv(path: str, columns: Sequence[str]) -> dict[str, np.ndarray]:
    """Read named numeric columns from a headered, comma-separated file.

    Any row that cannot be parsed is a hard error naming its line number
    (the header is line 1).
    """
    with _open_text(path) as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path} is empty; a header row is required") from None
        header = [h.strip() for h in header]
        missing = [c for c in columns if c not in header]
        if missing:
            raise ParseError(
                f"{path} is missing required column(s) {', '.join(missing)}; "
                f"header has {', '.join(header) or 'nothing'}"
            )
        idx = {c: header.index(c) for c in columns}
        data: dict[str, list[float]] = {c: [] for c in columns}
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not f.strip() for f in row):
                continue
            if len(row) < len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=line_no)
            for c in columns:
                raw = row[idx[c]].strip()
                try:
                    data[c].append(float(raw))
                except ValueError:
                    raise ParseError(
                        f"column {c!r} has a non-numeric value {raw!r}", line=line_no
                    ) from None
    return {c: np.asarray(v, dtype=float) for c, v in data.items()}


def read_columns_json(path: str, columns: Sequence[str]) -> dict[str, np.ndarray]:
    """Read named numeric arrays from a JSON object."""
    with _open_text(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError(f"{path} must hold a JSON object with named arrays")
    out = {}
    for c in columns:
        if c not in payload:
            raise ParseError(f"{path} is missing key {c!r}")
        if not isinstance(payload[c], list):
            raise ParseError(f"{path} key {c!r} must be an array")
        try:
            out[c] = ensure_iterable_of_floats(payload[c], c)
        except ValidationError as exc:
            raise ParseError(str(exc)) from exc
    return out


def ingest(
    path: str,
    input_format: str | None,
    actual_col: str,
    predicted_col: str,
    benchmark_col: str | None,
) -> tuple[SeriesPair, SeriesPair | None]:
    """Load the evaluation pair and the optional benchmark pair."""
    if input_format is None:
        input_format = "json" if path.lower().endswith(".json") else "csv"
    columns = [actual_col, predicted_col] + ([benchmark_col] if benchmark_col else [])
    reader = read_columns_json if input_format == "json" else read_columns_csv
    data = reader(path, columns)
    pair = validate_series_pair(data[actual_col], data[predicted_col])
    bench = None
    if benchmark_col:
        bench = validate_series_pair(data[actual_col], data[benchmark_col])
    return pair, bench


def load_series(path: str, column: str) -> np.ndarray:
    """Load a single series (JSON array, JSON object key, or CSV column)."""
    if path.lower().endswith(".json"):
        with _open_text(path) as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path} is not valid JSON: {exc}") from exc
        if isinstance(payload, list):
            return ensure_iterable_of_floats(payload, column)
        if isinstance(payload, dict) and column in payload:
            return ensure_iterable_of_floats(payload[column], column)
        raise ParseError(f"{path} must be a JSON array or an object with key {column!r}")
    return read_columns_csv(path, [column])[column]


# --- ad-hoc composition descriptors -----------------------------------------

_DISTANCES = {
    "d1": Distance.ERROR, "error": Distance.ERROR,
    "d2": Distance.ABSOLUTE_ERROR, "absolute-error": Distance.ABSOLUTE_ERROR,
    "d3": Distance.SQUARED_ERROR, "squared-error": Distance.SQUARED_ERROR,
    "d4": Distance.LOG_QUOTIENT, "log-quotient": Distance.LOG_QUOTIENT,
    "d5": Distance.ABS_LOG_QUOTIENT, "abs-log-quotient": Distance.ABS_LOG_QUOTIENT,
}
_NORMALIZERS = {
    "n1": NormKind.UNITARY, "unitary": NormKind.UNITARY,
    "n2": NormKind.BY_ACTUALS, "by-actuals": NormKind.BY_ACTUALS,
    "n3": NormKind.BY_VARIABILITY, "by-variability": NormKind.BY_VARIABILITY,
    "n4": NormKind.BY_SUM, "by-sum": NormKind.BY_SUM,
    "n5max": NormKind.BY_MAX, "n5-max": NormKind.BY_MAX, "by-max": NormKind.BY_MAX,
    "n5min": NormKind.BY_MIN, "n5-min": NormKind.BY_MIN, "by-min": NormKind.BY_MIN,
    "n5": NormKind.BY_MAX,
}
_AGGREGATORS = {
    "g1": AggKind.MEAN, "mean": AggKind.MEAN,
    "g2": AggKind.MEDIAN, "median": AggKind.MEDIAN,
    "g3": AggKind.GEOMETRIC_MEAN, "geometric-mean": AggKind.GEOMETRIC_MEAN,
    "g4": AggKind.SUM, "sum": AggKind.SUM,
    "max": AggKind.MAXIMUM, "maximum": AggKind.MAXIMUM,
    "harmonic": AggKind.HARMONIC_MEAN, "harmonic-mean": AggKind.HARMONIC_MEAN,
    "truncated": AggKind.TRUNCATED_MEAN, "truncated-mean": AggKind.TRUNCATED_MEAN,
    "winsorized": AggKind.WINSORIZED_MEAN, "winsorized-mean": AggKind.WINSORIZED_MEAN,
}
_TRANSFORMS = {t.value: t for t in PointTransform}


def _parse_post(text: str) -> tuple[PostTransform, ...]:
    posts = []
    for part in text.split(","):
        part = part.strip().lower()
        if not part:
            continue
        if part == "sqrt":
            posts.append(PostTransform(PostKind.SQRT))
        elif part == "symmetric-accuracy":
            posts.append(PostTransform(PostKind.SYMMETRIC_ACCURACY))
        elif part.startswith("scale:"):
            try:
                posts.append(PostTransform(PostKind.SCALE, float(part.split(":", 1)[1])))
            except ValueError:
                raise ParseError(f"bad scale constant in post transform {part!r}") from None
        else:
            raise ParseError(f"unknown post transform {part!r}")
    return tuple(posts)


def parse_composition(text: str) -> MetricComposition:
    """Parse a key=value descriptor like 'distance=D4 normalizer=N1 aggregator=G1'."""
    fields: dict[str, str] = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep or not value:
            raise ParseError(f"descriptor token {token!r} is not key=value")
        fields[key.strip().lower()] = value.strip()
    unknown = set(fields) - {
        "distance", "normalizer", "aggregator", "c", "absolute", "factor",
        "fraction", "transform", "post",
    }
    if unknown:
        raise ParseError(f"unknown descriptor key(s): {', '.join(sorted(unknown))}")
    if "distance" not in fields or "aggregator" not in fields:
        raise ParseError("descriptor needs at least distance=... and aggregator=...")

    def pick(table: dict, key: str, what: str):
        token = fields[key].lower()
        if token not in table:
            raise ParseError(f"unknown {what} {fields[key]!r}")
        return table[token]

    distance = pick(_DISTANCES, "distance", "distance")
    norm_kind = pick(_NORMALIZERS, "normalizer", "normalizer") if "normalizer" in fields else NormKind.UNITARY
    agg_kind = pick(_AGGREGATORS, "aggregator", "aggregator")
    try:
        normalizer = NormalizerSpec(
            norm_kind,
            exponent=int(fields.get("c", 1)),
            absolute=fields.get("absolute", "false").lower() in ("1", "true", "yes"),
            factor=float(fields.get("factor", 1.0)),
        )
        aggregator = Aggregator(agg_kind, fraction=float(fields.get("fraction", 0.0)))
        transform = _TRANSFORMS.get(fields.get("transform", "identity").lower())
        if transform is None:
            raise ParseError(f"unknown transform {fields['transform']!r}")
        return MetricComposition(
            distance, normalizer, aggregator, transform, _parse_post(fields.get("post", "")),
        )
    except ValueError as exc:
        raise ParseError(f"bad numeric field in descriptor: {exc}") from None


def parse_cell(text: str) -> tuple[Distance, NormKind, AggKind]:
    parts = [p.strip().lower() for p in text.split(",")]
    if len(parts) != 3:
        raise ParseError(f"cell must be 'distance,normalizer,aggregator', got {text!r}")
    for table, part, what in (
        (_DISTANCES, parts[0], "distance"),
        (_NORMALIZERS, parts[1], "normalizer"),
        (_AGGREGATORS, parts[2], "aggregator"),
    ):
        if part not in table:
            raise ParseError(f"unknown {what} {part!r} in cell {text!r}")
    return (_DISTANCES[parts[0]], _NORMALIZERS[parts[1]], _AGGREGATORS[parts[2]])


# --- policy ------------------------------------------------------------------


def build_policy(on_zero: str | None, epsilon: str | None, on_log: str | None) -> EvaluationPolicy:
    if epsilon is not None and on_zero is None:
        on_zero = "epsilon"
    eps_value: float | None = None
    if epsilon is not None and epsilon != "smallest-nonzero":
        try:
            eps_value = float(epsilon)
        except ValueError:
            raise ParseError(
                f"--epsilon must be a number or 'smallest-nonzero', got {epsilon!r}"
            ) from None
    return EvaluationPolicy(
        zero_denominator=ZeroDenominatorPolicy(on_zero or "fail"),
        nonpositive_log_ratio=LogRatioPolicy(on_log or "fail"),
        epsilon=eps_value,
    )


# --- evaluation --------------------------------------------------------------


def _metric_entry(name: str, result, variant: str | None, extra: dict | None = None) -> dict:
    entry: dict[str, Any] = {"name": name}
    if variant:
        entry["variant"] = variant
    entry.update(result.to_record())
    if extra:
        entry["detail"] = extra
    return entry


def _error_entry(name: str, variant: str | None, exc: MetricError) -> dict:
    entry: dict[str, Any] = {
        "name": name,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }
    if variant:
        entry["variant"] = variant
    return entry


def evaluate_selection(
    pair: SeriesPair,
    name: str,
    variant: str | None,
    benchmark: SeriesPair | None,
    in_sample: np.ndarray | None,
    policy: EvaluationPolicy,
) -> dict:
    """Evaluate one named metric into a report entry; errors are embedded."""
    defn = registry.lookup(name)
    try:
        if defn.requires == "benchmark":
            if benchmark is None:
                raise MissingBenchmark(defn.abbreviation, "a benchmark prediction column")
            rel = derived.relative_named(pair, benchmark, defn.abbreviation, policy)
            result = MetricResult(rel.value, Dimension.DIMENSIONLESS, pair.n, 0, ())
            return _metric_entry(defn.abbreviation, result, variant, {
                "base": rel.base,
                "form": rel.form,
                "candidate": rel.candidate,
                "benchmark": rel.benchmark,
                "interpretation": rel.interpretation,
            })
        if defn.requires is not None:
            if in_sample is None:
                raise MissingBenchmark(defn.abbreviation, "an in-sample history (--in-sample)")
            return _metric_entry(defn.abbreviation, derived.mase(pair, in_sample, policy), variant)
        if defn.category is registry.Category.EXTENDED:
            return _metric_entry(defn.abbreviation, derived.extended(pair, defn.abbreviation, policy), variant)
        if defn.abbreviation == "CoD":
            return _metric_entry(defn.abbreviation, derived.coefficient_of_determination(pair, policy), variant)
        return _metric_entry(
            defn.abbreviation, registry.evaluate_named(pair, defn.abbreviation, policy, variant), variant
        )
    except MetricError as exc:
        return _error_entry(defn.abbreviation, variant, exc)


def _selection_plan(
    metrics: list[str],
    suites: list[str],
    compositions: list[str],
    variants: dict[str, str],
    extra_suites: dict[str, derived.SuiteDefinition],
    have_benchmark: bool,
    have_in_sample: bool,
) -> list[tuple[str, Any, str | None]]:
    """Resolve and validate the selection up front.

    Returns (label, definition-or-composition, variant) triples; anything
    invalid here is a configuration error, not a metric failure.
    """
    plan: list[tuple[str, Any, str | None]] = []
    seen: set[tuple[str, str | None]] = set()

    def add_named(name: str) -> None:
        defn = registry.lookup(name)
        if not defn.implemented:
            raise UnimplementedMetric(defn.abbreviation, defn.stub_reason or "")
        variant = variants.get(name) or variants.get(defn.abbreviation)
        if variant is not None and variant not in defn.variants:
            raise UnknownVariant(defn.abbreviation, variant, defn.variants)
        if defn.requires == "benchmark" and not have_benchmark:
            raise MissingBenchmark(defn.abbreviation, "a benchmark column (--benchmark)")
        if defn.requires not in (None, "benchmark") and not have_in_sample:
            raise MissingBenchmark(defn.abbreviation, "an in-sample history (--in-sample)")
        key = (defn.abbreviation, variant)
        if key not in seen:
            seen.add(key)
            plan.append((defn.abbreviation, defn, variant))

    for name in metrics:
        add_named(name)
    for suite_name in suites:
        suite = derived.get_suite(suite_name, extra_suites)
        for member in suite.members:
            abbr, _, mvariant = member.partition(":")
            defn = registry.lookup(abbr)
            if not defn.implemented:
                raise UnimplementedMetric(defn.abbreviation, defn.stub_reason or "")
            variant = mvariant or None
            key = (defn.abbreviation, variant)
            if key not in seen:
                seen.add(key)
                plan.append((defn.abbreviation, defn, variant))
    for text in compositions:
        comp = parse_composition(text)
        key = (text, None)
        if key not in seen:
            seen.add(key)
            plan.append((text, comp, None))
    if not plan:
        raise ParseError("nothing selected: pass --metrics, --suite or --composition")
    return plan


# --- report rendering ---------------------------------------------------------


def _format_value(entry: dict) -> str:
    if "error" in entry:
        return f"ERROR {entry['error']['type']}"
    value = format(entry["value"], ".10g")
    if entry.get("dimension") == Dimension.PERCENT.value:
        value += "%"
    return value


def render_report_table(report: dict) -> str:
    rows = []
    for entry in report["metrics"]:
        name = entry["name"] + (f" [{entry['variant']}]" if "variant" in entry else "")
        if "error" in entry:
            rows.append((name, _format_value(entry), entry["error"]["message"]))
        else:
            note = f"skipped={entry['points_skipped']}" if entry["points_skipped"] else ""
            rows.append((name, _format_value(entry), entry.get("dimension", "") + (f" {note}" if note else "")))
    name_w = max((len(r[0]) for r in rows), default=4)
    val_w = max((len(r[1]) for r in rows), default=5)
    lines = [f"input: {report['input']}"]
    for name, value, note in rows:
        lines.append(f"{name.ljust(name_w)}  {value.rjust(val_w)}  {note}".rstrip())
    return "\n".join(lines) + "\n"


def render_report_delimited(report: dict) -> str:
    lines = ["name,variant,value,dimension,points_skipped,error"]
    for e in report["metrics"]:
        if "error" in e:
            lines.append(f"{e['name']},{e.get('variant', '')},,,,{e['error']['type']}")
        else:
            lines.append(
                f"{e['name']},{e.get('variant', '')},{e['value']!r},"
                f"{e['dimension']},{e['points_skipped']},"
            )
    return "\n".join(lines) + "\n"


def render_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "table":
        return render_report_table(report)
    if fmt == "delimited":
        return render_report_delimited(report)
    raise ParseError(f"unknown report format {fmt!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- configuration file ---------------------------------------------------------


def load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    with _open_text(path) as fh:
        try:
            config = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ParseError(f"{path} must hold a JSON object")
    return config


def _config_suites(config: dict[str, Any]) -> dict[str, derived.SuiteDefinition]:
    out = {}
    for name, body in config.get("suite_definitions", {}).items():
        if not isinstance(body, dict) or "members" not in body:
            raise ParseError(f"suite definition {name!r} needs a 'members' list")
        out[name] = derived.SuiteDefinition(
            name, tuple(body["members"]), body.get("rationale", "")
        )
    return out


def _merge(args_value, config: dict, key: str, default):
    if args_value is not None:
        return args_value
    return config.get(key, default)


# --- commands ---------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    path = _merge(args.input, config, "input", None)
    if path is None:
        raise ParseError("no input file: pass --input or set 'input' in the config")
    metrics_text = _merge(args.metrics, config, "metrics", [])
    if isinstance(metrics_text, str):
        metrics_text = [m.strip() for m in metrics_text.split(",") if m.strip()]
    suites = list(args.suite or config.get("suites", []))
    compositions = list(args.composition or config.get("compositions", []))
    variants = dict(config.get("variants", {}))
    for spec in args.variant or []:
        name, sep, value = spec.partition("=")
        if not sep:
            raise ParseError(f"--variant must be NAME=VARIANT, got {spec!r}")
        variants[name.strip()] = value.strip()

    policy_cfg = config.get("policy", {})
    policy = build_policy(
        _merge(args.on_zero_denominator, policy_cfg, "zero_denominator", None),
        _merge(args.epsilon, policy_cfg, "epsilon", None),
        _merge(args.on_nonpositive_log, policy_cfg, "nonpositive_log_ratio", None),
    )

    benchmark_col = _merge(args.benchmark, config, "benchmark", None)
    pair, benchmark = ingest(
        path,
        _merge(args.input_format, config, "input_format", None),
        _merge(args.actual, config, "actual", "actual"),
        _merge(args.predicted, config, "predicted", "predicted"),
        benchmark_col,
    )
    in_sample = None
    in_sample_path = _merge(args.in_sample, config, "in_sample", None)
    if in_sample_path is not None:
        in_sample = load_series(in_sample_path, _merge(args.actual, config, "actual", "actual"))

    plan = _selection_plan(
        metrics_text, suites, compositions, variants, _config_suites(config),
        have_benchmark=benchmark is not None, have_in_sample=in_sample is not None,
    )

    entries = []
    failed = False
    for label, target, variant in plan:
        if isinstance(target, MetricComposition):
            try:
                entries.append(_metric_entry(label, evaluate(pair, target, policy), None))
            except MetricError as exc:
                entries.append(_error_entry(label, None, exc))
        else:
            entries.append(evaluate_selection(pair, label, variant, benchmark, in_sample, policy))
        failed = failed or "error" in entries[-1]

    report = {
        "input": str(path),
        "metrics": entries,
        "policy": policy.to_config(),
        "version": __version__,
    }
    _emit(render_report(report, _merge(args.report, config, "report", "json")),
          _merge(args.out, config, "out", None))
    return 1 if failed else 0


def cmd_chart(args: argparse.Namespace) -> int:
    grid = chart.build_chart()
    _emit(chart.render_chart(grid, args.format, include_blanks=args.blanks), args.out)
    return 0


def cmd_list(args: argparse.Namespace) -> int:
    category = registry.Category(args.category) if args.category else None
    cell = parse_cell(args.cell) if args.cell else None
    defs = registry.list_metrics(category=category, cell=cell, include_stubs=args.include_stubs)
    if args.format == "json":
        _emit(json.dumps([d.to_record() for d in defs], indent=2, sort_keys=True) + "\n", args.out)
        return 0
    if args.format == "delimited":
        lines = ["abbreviation,name,category,dimension,implemented"]
        for d in defs:
            lines.append(
                f"{d.abbreviation},{d.full_name},{d.category.value},"
                f"{d.dimension.value},{str(d.implemented).lower()}"
            )
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    width = max((len(d.abbreviation) for d in defs), default=4)
    lines = []
    for d in defs:
        status = "" if d.implemented else "  [not implemented]"
        lines.append(f"{d.abbreviation.ljust(width)}  {d.category.value:9}  {d.full_name}{status}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_suites(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    pool = dict(derived.BUILTIN_SUITES)
    pool.update(_config_suites(config))
    if args.format == "json":
        payload = [
            {"name": s.name, "members": list(s.members), "rationale": s.rationale}
            for s in pool.values()
        ]
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    lines = []
    for name in sorted(pool):
        s = pool[name]
        lines.append(f"{s.name}: {', '.join(s.members)}")
        if s.rationale:
            lines.append(f"    {s.rationale}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# --- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricgrid",
        description="Evaluate error metrics built from distance, normalizer and aggregator parts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="score predictions from a CSV or JSON file")
    p_eval.add_argument("--input", "-i", help="input file (CSV with header, or JSON object)")
    p_eval.add_argument("--input-format", choices=("csv", "json"), dest="input_format")
    p_eval.add_argument("--actual", help="actuals column/key (default: actual)")
    p_eval.add_argument("--predicted", help="predictions column/key (default: predicted)")
    p_eval.add_argument("--benchmark", help="benchmark predictions column/key")
    p_eval.add_argument("--in-sample", dest="in_sample", help="file with in-sample history for MASE")
    p_eval.add_argument("--metrics", "-m", help="comma-separated metric names")
    p_eval.add_argument("--suite", action="append", help="named suite to evaluate (repeatable)")
    p_eval.add_argument(
        "--composition", action="append",
        help="ad-hoc descriptor, e.g. 'distance=D4 normalizer=N1 aggregator=G1' (repeatable)",
    )
    p_eval.add_argument("--variant", action="append", help="NAME=VARIANT override (repeatable)")
    p_eval.add_argument(
        "--on-zero-denominator", choices=("fail", "skip", "epsilon"), dest="on_zero_denominator",
        help="what to do when a normalization denominator is zero (default: fail)",
    )
    p_eval.add_argument(
        "--epsilon",
        help="epsilon correction: a number, or 'smallest-nonzero' for the smallest nonzero |actual|",
    )
    p_eval.add_argument(
        "--on-nonpositive-log", choices=("fail", "skip"), dest="on_nonpositive_log",
        help="what to do when ln(predicted/actual) is undefined (default: fail)",
    )
    p_eval.add_argument("--report", choices=("json", "table", "delimited"))
    p_eval.add_argument("--config", help="JSON config file; explicit flags override it")
    p_eval.add_argument("--out", "-o", help="write the report here instead of stdout")
    p_eval.set_defaults(func=cmd_eval)

    p_chart = sub.add_parser("chart", help="print the composition grid")
    p_chart.add_argument("--format", choices=tuple(chart.RENDERERS), default="plain")
    p_chart.add_argument("--blanks", action="store_true", help="append unoccupied cells")
    p_chart.add_argument("--out", "-o")
    p_chart.set_defaults(func=cmd_chart)

    p_list = sub.add_parser("list", help="list catalog metrics")
    p_list.add_argument("--category", choices=tuple(c.value for c in registry.Category))
    p_list.add_argument("--cell", help="filter by cell, e.g. 'D2,N2,G2'")
    p_list.add_argument("--include-stubs", action="store_true")
    p_list.add_argument("--format", choices=("table", "json", "delimited"), default="table")
    p_list.add_argument("--out", "-o")
    p_list.set_defaults(func=cmd_list)

    p_suites = sub.add_parser("suites", help="show named metric suites")
    p_suites.add_argument("--config", help="JSON config file with extra suite definitions")
    p_suites.add_argument("--format", choices=("table", "json"), default="table")
    p_suites.add_argument("--out", "-o")
    p_suites.set_defaults(func=cmd_suites)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, ValidationError, UnknownMetric, UnknownVariant, UnknownSuite,
            UnimplementedMetric, MissingBenchmark) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EvaluationError as exc:
        # degenerate data surfaced outside a per-metric context
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
