"""Metric catalog: named definitions binding compositions to formulas.

Every implemented metric carries both a composition (where one exists)
and a direct closed-form implementation from ``formulas``.  The two are
independent code paths; tests hold them to agreement.  Lookup is
case-insensitive, knows the common alias names, and suggests near misses.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable

import numpy as np

from . import formulas
from .errors import RequiresBenchmark, UnimplementedMetric, UnknownMetric, UnknownVariant
from .evaluator import dimension_of, evaluate, point_distances
from .types import (
    Aggregator,
    AggKind,
    Cell,
    Dimension,
    Distance,
    EvaluationPolicy,
    FAIL_FAST,
    GEOMETRIC_MEAN,
    MAXIMUM,
    MEAN,
    MEDIAN,
    MetricComposition,
    MetricResult,
    NormalizerSpec,
    NormKind,
    PERCENT_SCALE,
    PointTransform,
    PostTransform,
    SQRT,
    SUM,
    SYMMETRIC_ACCURACY,
    SeriesPair,
)

DirectFn = Callable[[np.ndarray, np.ndarray, EvaluationPolicy, "str | None"], float]


class Category(Enum):
    PRIMARY = "primary"
    EXTENDED = "extended"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class MetricDefinition:
    """One catalog entry.

    ``composition`` is None for direct-formula-only metrics; ``direct`` is
    None for stubs and for metrics needing external inputs.  ``cell`` is
    normally the composition's cell but can be pinned for metrics charted
    at a conventional position (``as_printed``).
    """

    abbreviation: str
    full_name: str
    category: Category
    composition: MetricComposition | None = None
    direct: DirectFn | None = None
    aliases: tuple[str, ...] = ()
    variants: tuple[str, ...] = ()
    dimension: Dimension = Dimension.DIMENSIONLESS
    cell: Cell | None = None
    chart_aka: tuple[str, ...] = ()
    chart_parent: str | None = None
    charted: bool = True
    as_printed: bool = False
    requires: str | None = None          # None | "benchmark" | "in-sample history"
    notes: str = ""
    stub_reason: str | None = None

    @property
    def implemented(self) -> bool:
        return self.stub_reason is None

    def to_record(self) -> dict[str, Any]:
        cell = None
        if self.cell is not None:
            d, n, g = self.cell
            cell = {"distance": d.value, "normalizer": n.value, "aggregator": g.value}
        record: dict[str, Any] = {
            "abbreviation": self.abbreviation,
            "name": self.full_name,
            "category": self.category.value,
            "cell": cell,
            "dimension": self.dimension.value,
            "variants": list(self.variants),
            "aliases": list(self.aliases),
            "implemented": self.implemented,
        }
        if self.requires:
            record["requires"] = self.requires
        if self.notes:
            record["notes"] = self.notes
        if self.stub_reason:
            record["reason"] = self.stub_reason
        return record


def _norm(kind: NormKind, exponent: int = 1, absolute: bool = False, factor: float = 1.0) -> NormalizerSpec:
    return NormalizerSpec(kind, exponent, absolute, factor)


def _comp(
    distance: Distance,
    normalizer: NormalizerSpec | None = None,
    aggregator: Aggregator = MEAN,
    transform: PointTransform = PointTransform.IDENTITY,
    post: tuple[PostTransform, ...] = (),
) -> MetricComposition:
    if normalizer is None:
        normalizer = NormalizerSpec(NormKind.UNITARY)
    return MetricComposition(distance, normalizer, aggregator, transform, post)


def _plain(fn: Callable) -> DirectFn:
    return lambda a, p, policy, variant: fn(a, p, policy)


def _optioned(fn: Callable) -> DirectFn:
    return lambda a, p, policy, variant: fn(a, p, policy, option=2 if variant == "option2" else 1)


def _varianted(fn: Callable) -> DirectFn:
    return lambda a, p, policy, variant: fn(a, p, policy, variant=variant)


def _gmrae_direct(a, p, policy, variant):
    form = "root-product" if variant == "root-product" else "exp-mean-log"
    return formulas.gmrae(a, p, policy, form=form)


def _primary(abbr: str, name: str, comp: MetricComposition, direct: DirectFn, **kw) -> MetricDefinition:
    kw.setdefault("cell", comp.cell)
    kw.setdefault("dimension", dimension_of(comp))
    return MetricDefinition(abbr, name, Category.PRIMARY, comp, direct, **kw)


def _build_catalog() -> dict[str, MetricDefinition]:
    defs: list[MetricDefinition] = []

    # signed error
    defs.append(_primary(
        "ME", "Mean Error", _comp(Distance.ERROR), _plain(formulas.me),
        aliases=("MBE",), chart_aka=("MBE", "bias"),
        notes="signed errors cancel; a small value does not imply small errors",
    ))
    defs.append(_primary(
        "MD", "Manhattan Distance", _comp(Distance.ERROR, aggregator=SUM), _plain(formulas.md),
        notes="sum of signed errors, so opposite-sign errors cancel",
    ))
    defs.append(_primary(
        "MNB", "Mean Normalized Bias",
        _comp(Distance.ERROR, _norm(NormKind.BY_ACTUALS)), _plain(formulas.mnb),
    ))
    defs.append(_primary(
        "MPE", "Mean Percentage Error",
        _comp(Distance.ERROR, _norm(NormKind.BY_ACTUALS), post=(PERCENT_SCALE,)),
        _plain(formulas.mpe), chart_parent="MNB",
    ))
    defs.append(_primary(
        "FB", "Fractional Bias",
        _comp(Distance.ERROR, _norm(NormKind.BY_SUM, factor=2.0)), _plain(formulas.fb),
    ))

    # absolute error
    defs.append(_primary(
        "MAE", "Mean Absolute Error", _comp(Distance.ABSOLUTE_ERROR), _plain(formulas.mae),
        aliases=("MAD", "MAGE", "MCD"), chart_aka=("MAD",),
    ))
    defs.append(_primary(
        "MdAE", "Median Absolute Error",
        _comp(Distance.ABSOLUTE_ERROR, aggregator=MEDIAN), _plain(formulas.mdae),
    ))
    defs.append(_primary(
        "MaxAE", "Maximum Absolute Error",
        _comp(Distance.ABSOLUTE_ERROR, aggregator=MAXIMUM), _plain(formulas.maxae),
        notes="uses the maximum aggregator, outside the four core aggregators",
    ))
    defs.append(_primary(
        "SAD", "Sum of Absolute Differences",
        _comp(Distance.ABSOLUTE_ERROR, aggregator=SUM), _plain(formulas.sad),
    ))
    defs.append(_primary(
        "GMAE", "Geometric Mean Absolute Error",
        _comp(Distance.ABSOLUTE_ERROR, aggregator=GEOMETRIC_MEAN), _plain(formulas.gmae),
        notes="undefined when any error is zero; never silently returns 0",
    ))
    defs.append(_primary(
        "MARE", "Mean Absolute Relative Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_ACTUALS, absolute=True)),
        _plain(formulas.mare), aliases=("MMRE",),
    ))
    defs.append(_primary(
        "MAPE", "Mean Absolute Percentage Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_ACTUALS, absolute=True), post=(PERCENT_SCALE,)),
        _plain(formulas.mape), chart_parent="MARE",
    ))
    defs.append(_primary(
        "MdAPE", "Median Absolute Percentage Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_ACTUALS, absolute=True),
              aggregator=MEDIAN, post=(PERCENT_SCALE,)),
        _plain(formulas.mdape),
    ))
    defs.append(_primary(
        "MRAE", "Mean Relative Absolute Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_VARIABILITY, absolute=True)),
        _optioned(formulas.mrae), variants=("option1", "option2"),
        notes="option2 divides the error sum by n times the deviation sum",
    ))
    defs.append(_primary(
        "MdRAE", "Median Relative Absolute Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_VARIABILITY, absolute=True), aggregator=MEDIAN),
        _plain(formulas.mdrae),
    ))
    defs.append(_primary(
        "GMRAE", "Geometric Mean Relative Absolute Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_VARIABILITY, absolute=True),
              aggregator=GEOMETRIC_MEAN),
        _gmrae_direct, variants=("root-product",),
        notes="root-product form is algebraically identical to the mean-log form",
    ))
    defs.append(_primary(
        "RAE", "Relative Absolute Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_VARIABILITY, absolute=True), aggregator=SUM),
        _optioned(formulas.rae), variants=("option1", "option2"),
        notes="option2 is the ratio of sums rather than the sum of ratios",
    ))
    defs.append(_primary(
        "FAE", "Fractional Absolute Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_SUM, factor=2.0)),
        _varianted(formulas.fae), variants=("absolute",),
    ))
    defs.append(_primary(
        "sMAPE", "Symmetric Mean Absolute Percentage Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_SUM, factor=2.0), post=(PERCENT_SCALE,)),
        _varianted(formulas.smape), variants=("absolute", "mean-denominator"),
        chart_parent="FAE",
        notes="mean-denominator variant divides by (A+P)/2, the same quantity",
    ))
    defs.append(_primary(
        "sMdAPE", "Symmetric Median Absolute Percentage Error",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_SUM, factor=2.0),
              aggregator=MEDIAN, post=(PERCENT_SCALE,)),
        _varianted(formulas.smdape), variants=("absolute",),
    ))
    defs.append(_primary(
        "CM", "Canberra Metric",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_SUM), aggregator=SUM),
        _varianted(formulas.cm), variants=("absolute",),
    ))
    defs.append(_primary(
        "WHD", "Wave Hedges Distance",
        _comp(Distance.ABSOLUTE_ERROR, _norm(NormKind.BY_MAX), aggregator=SUM),
        _plain(formulas.whd),
    ))

    # squared error
    defs.append(_primary(
        "MSE", "Mean Squared Error", _comp(Distance.SQUARED_ERROR), _plain(formulas.mse),
    ))
    defs.append(_primary(
        "RMSE", "Root Mean Squared Error",
        _comp(Distance.SQUARED_ERROR, post=(SQRT,)), _plain(formulas.rmse),
        chart_parent="MSE",
    ))
    defs.append(_primary(
        "SSE", "Sum of Squared Errors",
        _comp(Distance.SQUARED_ERROR, aggregator=SUM), _plain(formulas.sse),
    ))
    defs.append(_primary(
        "ED", "Euclidean Distance",
        _comp(Distance.SQUARED_ERROR, aggregator=SUM, post=(SQRT,)), _plain(formulas.ed),
        chart_parent="SSE",
    ))
    defs.append(_primary(
        "GRMSE", "Geometric Root Mean Squared Error",
        _comp(Distance.SQUARED_ERROR, aggregator=GEOMETRIC_MEAN, post=(SQRT,)),
        _plain(formulas.grmse),
    ))
    defs.append(_primary(
        "MSPE", "Mean Square Percentage Error",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_ACTUALS, exponent=2), post=(PERCENT_SCALE,)),
        _plain(formulas.mspe),
    ))
    defs.append(_primary(
        "RMSPE", "Root Mean Square Percentage Error",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_ACTUALS, exponent=2),
              post=(PERCENT_SCALE, SQRT)),
        _varianted(formulas.rmspe), variants=("conventional",), chart_parent="MSPE",
        notes="conventional variant takes the root before scaling to percent",
    ))
    defs.append(_primary(
        "MdSPE", "Median Square Percentage Error",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_ACTUALS, exponent=2),
              aggregator=MEDIAN, post=(PERCENT_SCALE,)),
        _plain(formulas.mdspe),
    ))
    defs.append(_primary(
        "RMdSPE", "Root Median Square Percentage Error",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_ACTUALS, exponent=2),
              aggregator=MEDIAN, post=(PERCENT_SCALE, SQRT)),
        _varianted(formulas.rmdspe), variants=("conventional",), chart_parent="MdSPE",
    ))
    defs.append(_primary(
        "NCSD", "Neyman Chi-Square Distance",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_ACTUALS), aggregator=SUM),
        _plain(formulas.ncsd),
    ))
    defs.append(_primary(
        "RSE", "Relative Squared Error",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_VARIABILITY, exponent=2), aggregator=SUM),
        _optioned(formulas.rse), variants=("option1", "option2"),
    ))
    defs.append(_primary(
        "RRSE", "Root Relative Squared Error",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_VARIABILITY, exponent=2),
              aggregator=SUM, post=(SQRT,)),
        _optioned(formulas.rrse), variants=("option1", "option2"), chart_parent="RSE",
    ))
    defs.append(_primary(
        "SquD", "Squared Chi-Square Distance",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_SUM), aggregator=SUM),
        _plain(formulas.squd),
    ))
    defs.append(_primary(
        "DivD", "Divergence Distance",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_SUM, exponent=2, factor=2.0), aggregator=SUM),
        _plain(formulas.divd),
    ))
    defs.append(_primary(
        "VSD", "Vicis Symmetric Distance",
        _comp(Distance.SQUARED_ERROR, _norm(NormKind.BY_MIN), aggregator=SUM),
        _plain(formulas.vsd),
    ))

    # log quotient
    defs.append(_primary(
        "MdLAR", "Median Log Accuracy Ratio",
        _comp(Distance.LOG_QUOTIENT, aggregator=MEDIAN), _plain(formulas.mdlar),
    ))
    defs.append(MetricDefinition(
        "KLD", "Kullback-Leibler Divergence", Category.PRIMARY,
        composition=None, direct=_plain(formulas.kld),
        dimension=Dimension.SAME_AS_DATA,
        cell=(Distance.LOG_QUOTIENT, NormKind.BY_ACTUALS, AggKind.SUM),
        as_printed=True,
        notes="weights each log ratio by the predicted value, so it is charted "
              "at its conventional cell rather than composed from it",
    ))
    defs.append(MetricDefinition(
        "JD", "Jeffreys Divergence", Category.PRIMARY,
        composition=None, direct=_plain(formulas.jd),
        dimension=Dimension.SAME_AS_DATA, cell=None, charted=False,
        notes="weights each log ratio by (P - A); has no core-grid cell",
    ))

    # absolute log quotient (factor family)
    defs.append(_primary(
        "MNAFE", "Mean Normalized Absolute Factor Error",
        _comp(Distance.ABS_LOG_QUOTIENT, transform=PointTransform.EXP_MINUS_ONE),
        _plain(formulas.mnafe),
    ))
    defs.append(_primary(
        "MNFB", "Mean Normalized Factor Bias",
        _comp(Distance.ABS_LOG_QUOTIENT, transform=PointTransform.SIGNED_EXP_MINUS_ONE),
        _plain(formulas.mnfb), charted=False,
        notes="sign-weighted factor error; left out of the core grid because "
              "of the extra sign factor",
    ))
    defs.append(_primary(
        "MdSA", "Median Symmetric Accuracy",
        _comp(Distance.ABS_LOG_QUOTIENT, aggregator=MEDIAN, post=(SYMMETRIC_ACCURACY,)),
        _plain(formulas.mdsa),
    ))

    # extended: whole-series normalizations of RMSE and MSE
    for abbr, name, fn, aliases in (
        ("NRMSE_m", "Normalized RMSE (by mean of actuals)", formulas.nrmse_m, ("CVRMSE",)),
        ("NRMSE_sd", "Normalized RMSE (by standard deviation of actuals)", formulas.nrmse_sd, ()),
        ("NRMSE_mm", "Normalized RMSE (by range of actuals)", formulas.nrmse_mm, ()),
        ("NMSE", "Normalized Mean Squared Error", formulas.nmse, ()),
    ):
        defs.append(MetricDefinition(
            abbr, name, Category.EXTENDED, direct=_plain(fn), aliases=aliases,
            dimension=Dimension.DIMENSIONLESS, charted=False,
            notes="normalizes by a statistic of the whole actual series",
        ))

    # composite: benchmark- and history-relative metrics
    defs.append(MetricDefinition(
        "CoD", "Coefficient of Determination", Category.COMPOSITE,
        direct=_plain(formulas.cod), dimension=Dimension.DIMENSIONLESS, charted=False,
        notes="1 minus the squared-error sum over the total sum of squares",
    ))
    defs.append(MetricDefinition(
        "MASE", "Mean Absolute Scaled Error", Category.COMPOSITE,
        dimension=Dimension.DIMENSIONLESS, charted=False, requires="in-sample history",
        notes="scales MAE by the naive one-step error of the in-sample history",
    ))
    defs.append(MetricDefinition(
        "RMAE", "Relative Mean Absolute Error", Category.COMPOSITE,
        aliases=("RelMAE",), dimension=Dimension.DIMENSIONLESS, charted=False,
        requires="benchmark",
    ))
    defs.append(MetricDefinition(
        "RelRMSE", "Relative Root Mean Square Error", Category.COMPOSITE,
        aliases=("TheilsU", "U2"), dimension=Dimension.DIMENSIONLESS, charted=False,
        requires="benchmark",
    ))
    defs.append(MetricDefinition(
        "LMR", "Log Mean Squared Error Ratio", Category.COMPOSITE,
        dimension=Dimension.DIMENSIONLESS, charted=False, requires="benchmark",
        notes="natural log of the RMSE ratio; negative favors the candidate",
    ))
    defs.append(MetricDefinition(
        "RGRMSE", "Relative Geometric Root Mean Squared Error", Category.COMPOSITE,
        dimension=Dimension.DIMENSIONLESS, charted=False, requires="benchmark",
    ))

    # catalogued but out of scope
    for abbr, name, category, reason in (
        ("MAAPE", "Mean Arctangent Absolute Percentage Error", Category.PRIMARY,
         "applies an arctangent to the normalized error, which does not fit "
         "the distance/normalizer/aggregator grid"),
        ("HMD", "Hamming Distance", Category.PRIMARY,
         "defined for categorical or binary sequences, not numeric series"),
        ("IPD", "Inner Product Distance", Category.PRIMARY,
         "a vector similarity, not a pointwise error of paired series"),
        ("MdASE", "Median Absolute Scaled Error", Category.COMPOSITE,
         "scaled-error variant not implemented; use MASE"),
        ("RMSSE", "Root Mean Squared Scaled Error", Category.COMPOSITE,
         "scaled-error variant not implemented; use MASE"),
        ("CumRAE", "Cumulative Relative Absolute Error", Category.COMPOSITE,
         "cumulative benchmark-relative form not implemented; see RAE and RMAE"),
    ):
        defs.append(MetricDefinition(
            abbr, name, category, dimension=Dimension.DIMENSIONLESS,
            charted=False, stub_reason=reason,
        ))

    catalog: dict[str, MetricDefinition] = {}
    for d in defs:
        if d.abbreviation in catalog:
            raise AssertionError(f"duplicate catalog entry {d.abbreviation}")
        catalog[d.abbreviation] = d
    return catalog


_CATALOG: dict[str, MetricDefinition] | None = None
_LOOKUP: dict[str, str] | None = None


def _key(name: str) -> str:
    return re.sub(r"[^a-z0-9]", "", name.lower())


def get_catalog() -> dict[str, MetricDefinition]:
    global _CATALOG, _LOOKUP
    if _CATALOG is None:
        _CATALOG = _build_catalog()
        _LOOKUP = {}
        for abbr, d in _CATALOG.items():
            for name in (abbr, *d.aliases):
                key = _key(name)
                if key in _LOOKUP and _LOOKUP[key] != abbr:
                    raise AssertionError(f"ambiguous lookup key {key!r}")
                _LOOKUP[key] = abbr
    return _CATALOG


def lookup(name: str) -> MetricDefinition:
    """Find a definition by abbreviation or alias, case-insensitively."""
    catalog = get_catalog()
    assert _LOOKUP is not None
    key = _key(name)
    abbr = _LOOKUP.get(key)
    if abbr is None:
        known = sorted(_LOOKUP)
        close = difflib.get_close_matches(key, known, n=3, cutoff=0.6)
        suggestions = tuple(dict.fromkeys(_LOOKUP[c] for c in close))
        raise UnknownMetric(name, suggestions)
    return catalog[abbr]


def list_metrics(
    category: Category | None = None,
    cell: Cell | None = None,
    include_stubs: bool = False,
) -> list[MetricDefinition]:
    """Catalog entries, alphabetical by abbreviation."""
    out = []
    for d in get_catalog().values():
        if not d.implemented and not include_stubs:
            continue
        if category is not None and d.category is not category:
            continue
        if cell is not None and d.cell != cell:
            continue
        out.append(d)
    return sorted(out, key=lambda d: d.abbreviation.casefold())


def export_catalog(include_stubs: bool = True) -> list[dict[str, Any]]:
    """Machine-readable catalog dump."""
    return [d.to_record() for d in list_metrics(include_stubs=include_stubs)]


def composed_definitions() -> list[MetricDefinition]:
    """Primary metrics that have a composition."""
    return [d for d in list_metrics(category=Category.PRIMARY) if d.composition is not None]


def _check_variant(defn: MetricDefinition, variant: str | None) -> None:
    if variant is not None and variant not in defn.variants:
        raise UnknownVariant(defn.abbreviation, variant, defn.variants)


def _variant_composition(defn: MetricDefinition, variant: str | None) -> MetricComposition | None:
    """Composition to run for a variant; None means direct-formula only."""
    comp = defn.composition
    if comp is None or variant is None or variant == "option1":
        return comp
    if variant == "option2":
        return None
    if variant == "absolute":
        return replace(comp, normalizer=replace(comp.normalizer, absolute=True))
    if variant == "conventional":
        return replace(comp, post=(SQRT, PERCENT_SCALE))
    # mean-denominator and root-product compose identically to the default
    return comp


def _weighted_log_result(
    pair: SeriesPair,
    weights: np.ndarray,
    policy: EvaluationPolicy,
    dimension: Dimension,
) -> MetricResult:
    pv = point_distances(pair, Distance.LOG_QUOTIENT, policy)
    value = float(np.sum(weights[pv.usable] * pv.values[pv.usable]))
    return MetricResult(value, dimension, pv.n, pv.n - pv.n_usable, tuple(pv.actions))


def evaluate_named(
    pair: SeriesPair,
    name: str,
    policy: EvaluationPolicy = FAIL_FAST,
    variant: str | None = None,
) -> MetricResult:
    """Evaluate a catalog metric on a pair.

    Composed metrics run through the pipeline; direct-formula metrics run
    their closed form.  Metrics needing a benchmark or history raise
    RequiresBenchmark and must go through the derived-metrics API.
    """
    defn = lookup(name)
    if not defn.implemented:
        raise UnimplementedMetric(defn.abbreviation, defn.stub_reason or "")
    if defn.requires is not None:
        raise RequiresBenchmark(defn.abbreviation, defn.requires)
    _check_variant(defn, variant)

    comp = _variant_composition(defn, variant)
    if comp is not None:
        return evaluate(pair, comp, policy)

    a, p = pair.actuals, pair.predicted
    if defn.abbreviation == "KLD":
        return _weighted_log_result(pair, p, policy, defn.dimension)
    if defn.abbreviation == "JD":
        return _weighted_log_result(pair, p - a, policy, defn.dimension)
    assert defn.direct is not None
    value = defn.direct(a, p, policy, variant)
    return MetricResult(float(value), defn.dimension, pair.n, 0, ())


def direct_formula(
    name: str,
    pair: SeriesPair,
    policy: EvaluationPolicy = FAIL_FAST,
    variant: str | None = None,
) -> float:
    """Closed-form value of a catalog metric; the pipeline's cross-check."""
    defn = lookup(name)
    if not defn.implemented:
        raise UnimplementedMetric(defn.abbreviation, defn.stub_reason or "")
    if defn.direct is None:
        raise RequiresBenchmark(defn.abbreviation, defn.requires or "external inputs")
    _check_variant(defn, variant)
    return float(defn.direct(pair.actuals, pair.predicted, policy, variant))
