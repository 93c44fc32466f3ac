"""Core value types.

A metric evaluation is described by four orthogonal choices: a point
distance, a normalizer, an aggregator and optional transforms.  The types
here encode those choices as small frozen dataclasses plus a validated
``SeriesPair`` holding the data.  Construction implies validity: any
instance you can obtain satisfies its invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (
    EmptySeries,
    InsufficientData,
    LengthMismatch,
    NonFiniteValue,
    ValidationError,
)

# Denominators with magnitude below this are treated as zero.
NEAR_ZERO = 1e-12


class Distance(Enum):
    """Per-point distance between an actual and a predicted value."""

    ERROR = "D1"                  # A - P, signed
    ABSOLUTE_ERROR = "D2"         # |A - P|
    SQUARED_ERROR = "D3"          # (A - P)^2
    LOG_QUOTIENT = "D4"           # ln(P / A), signed
    ABS_LOG_QUOTIENT = "D5"       # |ln(P / A)|

    @property
    def code(self) -> str:
        return self.value


class NormKind(Enum):
    """What the per-point distance is divided by (or multiplied, for c=-1)."""

    UNITARY = "N1"                # no normalization
    BY_ACTUALS = "N2"             # A_j
    BY_VARIABILITY = "N3"         # A_j - mean(A)
    BY_SUM = "N4"                 # A_j + P_j
    BY_MAX = "N5max"              # max(A_j, P_j)
    BY_MIN = "N5min"              # min(A_j, P_j)

    @property
    def column(self) -> str:
        """Chart column code; max and min share the N5 column."""
        return "N5" if self in (NormKind.BY_MAX, NormKind.BY_MIN) else self.value


class AggKind(Enum):
    """How normalized point values collapse to a single number."""

    MEAN = "G1"
    MEDIAN = "G2"
    GEOMETRIC_MEAN = "G3"
    SUM = "G4"
    MAXIMUM = "max"
    HARMONIC_MEAN = "harmonic"
    TRUNCATED_MEAN = "truncated"
    WINSORIZED_MEAN = "winsorized"

    @property
    def core(self) -> bool:
        """True for the four aggregators that form the chart grid."""
        return self in (AggKind.MEAN, AggKind.MEDIAN, AggKind.GEOMETRIC_MEAN, AggKind.SUM)


class PointTransform(Enum):
    """Optional per-point map applied after normalization."""

    IDENTITY = "identity"
    EXP_MINUS_ONE = "exp-minus-one"              # x -> exp(x) - 1
    SIGNED_EXP_MINUS_ONE = "signed-exp-minus-one"  # x -> sign(P-A) * (exp(x) - 1)


class PostKind(Enum):
    """Transform applied to the aggregated scalar."""

    SQRT = "sqrt"
    SCALE = "scale"
    SYMMETRIC_ACCURACY = "symmetric-accuracy"  # x -> 100 * (exp(x) - 1)


class Dimension(Enum):
    """Unit class of a metric value."""

    SAME_AS_DATA = "same-as-data"
    SQUARED_DATA = "squared-data"
    DIMENSIONLESS = "dimensionless"
    PERCENT = "percent"


@dataclass(frozen=True)
class NormalizerSpec:
    """Normalization step: value -> factor * value / base**exponent.

    ``exponent`` may be 1, 2 or -1; -1 means multiply by the base (weight
    style) and performs no zero check.  ``absolute`` takes the magnitude of
    the base before exponentiation; for BY_SUM it means |A| + |P| rather
    than |A + P|.  ``factor`` scales the numerator (2 for the fractional
    family).  UNITARY ignores and canonicalizes all three fields.
    """

    kind: NormKind
    exponent: int = 1
    absolute: bool = False
    factor: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is NormKind.UNITARY:
            object.__setattr__(self, "exponent", 1)
            object.__setattr__(self, "absolute", False)
            object.__setattr__(self, "factor", 1.0)
            return
        if self.exponent not in (-1, 1, 2):
            raise ValidationError(f"normalizer exponent must be -1, 1 or 2, got {self.exponent!r}")
        if self.kind in (NormKind.BY_MAX, NormKind.BY_MIN) and self.absolute:
            raise ValidationError("max/min normalizers have no absolute variant")
        if not (np.isfinite(self.factor) and self.factor != 0):
            raise ValidationError(f"numerator factor must be finite and nonzero, got {self.factor!r}")

    def to_config(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "exponent": self.exponent,
            "absolute": self.absolute,
            "factor": self.factor,
        }

    @classmethod
    def from_config(cls, data: dict[str, Any]) -> "NormalizerSpec":
        return cls(
            kind=NormKind(data["kind"]),
            exponent=int(data.get("exponent", 1)),
            absolute=bool(data.get("absolute", False)),
            factor=float(data.get("factor", 1.0)),
        )


UNITARY = NormalizerSpec(NormKind.UNITARY)


@dataclass(frozen=True)
class Aggregator:
    """Aggregation step; truncated/winsorized means carry a trim fraction."""

    kind: AggKind
    fraction: float = 0.0

    def __post_init__(self) -> None:
        trimmed = self.kind in (AggKind.TRUNCATED_MEAN, AggKind.WINSORIZED_MEAN)
        if trimmed:
            if not (0.0 <= self.fraction < 0.5):
                raise ValidationError(f"trim fraction must lie in [0, 0.5), got {self.fraction!r}")
        elif self.fraction != 0.0:
            raise ValidationError(f"{self.kind.value} aggregator takes no fraction")


MEAN = Aggregator(AggKind.MEAN)
MEDIAN = Aggregator(AggKind.MEDIAN)
GEOMETRIC_MEAN = Aggregator(AggKind.GEOMETRIC_MEAN)
SUM = Aggregator(AggKind.SUM)
MAXIMUM = Aggregator(AggKind.MAXIMUM)


@dataclass(frozen=True)
class PostTransform:
    kind: PostKind
    k: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is PostKind.SCALE and not (np.isfinite(self.k) and self.k != 0):
            raise ValidationError(f"scale constant must be finite and nonzero, got {self.k!r}")


SQRT = PostTransform(PostKind.SQRT)
PERCENT_SCALE = PostTransform(PostKind.SCALE, 100.0)
SYMMETRIC_ACCURACY = PostTransform(PostKind.SYMMETRIC_ACCURACY)

Cell = tuple[Distance, NormKind, AggKind]


@dataclass(frozen=True)
class MetricComposition:
    """A full recipe: aggregate(transform(normalize(distance(A, P))))."""

    distance: Distance
    normalizer: NormalizerSpec = UNITARY
    aggregator: Aggregator = MEAN
    transform: PointTransform = PointTransform.IDENTITY
    post: tuple[PostTransform, ...] = ()

    def __post_init__(self) -> None:
        if len(self.post) > 2:
            raise ValidationError("at most two post-transforms are supported")
        object.__setattr__(self, "post", tuple(self.post))

    @property
    def cell(self) -> Cell:
        return (self.distance, self.normalizer.kind, self.aggregator.kind)


class ZeroDenominatorPolicy(Enum):
    FAIL = "fail"
    SKIP = "skip"
    EPSILON = "epsilon"


class LogRatioPolicy(Enum):
    FAIL = "fail"
    SKIP = "skip"


@dataclass(frozen=True)
class EvaluationPolicy:
    """How degenerate points are treated.

    ``epsilon`` is the correction added to a near-zero denominator base
    when ``zero_denominator`` is EPSILON; ``None`` means use the smallest
    nonzero |actual| of the evaluated pair.  Zero or negative values inside
    a geometric mean always fail; that is a domain fact, not a policy.
    """

    zero_denominator: ZeroDenominatorPolicy = ZeroDenominatorPolicy.FAIL
    nonpositive_log_ratio: LogRatioPolicy = LogRatioPolicy.FAIL
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.epsilon is not None and not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValidationError(f"epsilon must be a positive finite value, got {self.epsilon!r}")

    def to_config(self) -> dict[str, Any]:
        return {
            "zero_denominator": self.zero_denominator.value,
            "nonpositive_log_ratio": self.nonpositive_log_ratio.value,
            "epsilon": "smallest-nonzero" if self.epsilon is None else self.epsilon,
        }


FAIL_FAST = EvaluationPolicy()


def _as_series(values: Sequence[float] | np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class SeriesPair:
    """Aligned actual and predicted series; validated on construction."""

    actuals: np.ndarray
    predicted: np.ndarray

    def __post_init__(self) -> None:
        a = _as_series(self.actuals, "actuals")
        p = _as_series(self.predicted, "predicted")
        if a.size != p.size:
            raise LengthMismatch(a.size, p.size)
        if a.size == 0:
            raise EmptySeries()
        for name, arr in (("actuals", a), ("predicted", p)):
            bad = ~np.isfinite(arr)
            if bad.any():
                raise NonFiniteValue(name, int(np.argmax(bad)))
        a = a.copy()
        p = p.copy()
        a.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "actuals", a)
        object.__setattr__(self, "predicted", p)

    @property
    def n(self) -> int:
        return int(self.actuals.size)

    def swapped(self) -> "SeriesPair":
        """Pair with the roles of actual and predicted exchanged."""
        return SeriesPair(self.predicted, self.actuals)

    def scaled(self, k: float) -> "SeriesPair":
        """Both series multiplied by a constant."""
        return SeriesPair(self.actuals * k, self.predicted * k)


def validate_series_pair(
    actuals: Sequence[float] | np.ndarray,
    predicted: Sequence[float] | np.ndarray,
) -> SeriesPair:
    """Validate and pair two series; raises on any malformed input."""
    return SeriesPair(actuals, predicted)


@dataclass(frozen=True)
class PolicyAction:
    """Record of one policy intervention at one point."""

    index: int
    action: str


@dataclass
class PointVector:
    """Intermediate per-point values plus a usability mask.

    ``usable`` marks points still participating; skipped indices keep a
    placeholder value and a recorded reason in ``actions``.
    """

    values: np.ndarray
    usable: np.ndarray
    actions: list[PolicyAction] = field(default_factory=list)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def n_usable(self) -> int:
        return int(np.count_nonzero(self.usable))

    def usable_values(self) -> np.ndarray:
        return self.values[self.usable]


@dataclass(frozen=True)
class MetricResult:
    """Outcome of one metric evaluation.

    ``degenerate`` is True exactly when the policy intervened somewhere;
    a non-degenerate result is always a plain finite number.
    """

    value: float
    dimension: Dimension
    points_total: int
    points_skipped: int
    policy_actions: tuple[PolicyAction, ...] = ()

    @property
    def degenerate(self) -> bool:
        return self.points_skipped > 0 or len(self.policy_actions) > 0

    def to_record(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "dimension": self.dimension.value,
            "points_total": self.points_total,
            "points_skipped": self.points_skipped,
            "actions": [{"index": a.index, "action": a.action} for a in self.policy_actions],
        }


@dataclass(frozen=True)
class BenchmarkInput:
    """External reference for composite metrics: exactly one source.

    ``benchmark_pair`` holds a second prediction of the same actuals, for
    relative metrics; ``in_sample`` holds the history used to scale MASE.
    """

    benchmark_pair: SeriesPair | None = None
    in_sample: np.ndarray | None = None

    def __post_init__(self) -> None:
        if (self.benchmark_pair is None) == (self.in_sample is None):
            raise ValidationError(
                "provide exactly one of benchmark_pair or in_sample"
            )
        if self.in_sample is not None:
            arr = _as_series(self.in_sample, "in_sample")
            if arr.size < 2:
                raise InsufficientData("in-sample history needs at least 2 points")
            bad = ~np.isfinite(arr)
            if bad.any():
                raise NonFiniteValue("in_sample", int(np.argmax(bad)))
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, "in_sample", arr)


def smallest_nonzero_actual(actuals: np.ndarray) -> float:
    """Smallest nonzero |actual|; 0.0 when every actual is zero."""
    mags = np.abs(actuals)
    mags = mags[mags > 0]
    return float(mags.min()) if mags.size else 0.0


def ensure_iterable_of_floats(values: Iterable[Any], name: str) -> np.ndarray:
    """Coerce to a float vector, rejecting non-numeric entries."""
    out = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValidationError(f"{name}[{i}] is not a number: {v!r}")
        out.append(float(v))
    return np.asarray(out, dtype=float)
