"""Composition chart: the distance x normalizer x aggregator grid.

The chart arranges every composed primary metric in a 5x5x4 grid (five
distances, five normalizer columns, four core aggregators).  Max- and
min-normalized metrics share the N5 column.  Metrics that aggregate
outside the core four, or that carry extra weights, land in an annex
block.  Unoccupied cells are enumerable with the generic formula a new
metric there would have.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DuplicateCellClaim
from .registry import Category, MetricDefinition, get_catalog
from .types import AggKind, Cell, Distance, NormKind, PostKind

CORE_AGGREGATORS = (AggKind.MEAN, AggKind.MEDIAN, AggKind.GEOMETRIC_MEAN, AggKind.SUM)
NORM_COLUMNS = ("N1", "N2", "N3", "N4", "N5")

DISTANCE_TITLES = {
    Distance.ERROR: "error (A - P)",
    Distance.ABSOLUTE_ERROR: "absolute error |A - P|",
    Distance.SQUARED_ERROR: "squared error (A - P)^2",
    Distance.LOG_QUOTIENT: "log quotient ln(P/A)",
    Distance.ABS_LOG_QUOTIENT: "absolute log quotient |ln(P/A)|",
}
COLUMN_TITLES = {
    "N1": "unitary",
    "N2": "by actuals",
    "N3": "by variability of actuals",
    "N4": "by actual+predicted",
    "N5": "by max/min of actual,predicted",
}
AGGREGATOR_TITLES = {
    AggKind.MEAN: "mean",
    AggKind.MEDIAN: "median",
    AggKind.GEOMETRIC_MEAN: "geometric mean",
    AggKind.SUM: "sum",
}

_DIST_TERMS = {
    Distance.ERROR: "(A_j - P_j)",
    Distance.ABSOLUTE_ERROR: "|A_j - P_j|",
    Distance.SQUARED_ERROR: "(A_j - P_j)^2",
    Distance.LOG_QUOTIENT: "ln(P_j/A_j)",
    Distance.ABS_LOG_QUOTIENT: "|ln(P_j/A_j)|",
}
_AGG_WRAPS = {
    AggKind.MEAN: "mean_j[ {} ]",
    AggKind.MEDIAN: "median_j[ {} ]",
    AggKind.GEOMETRIC_MEAN: "geomean_j[ {} ]",
    AggKind.SUM: "sum_j[ {} ]",
}


@dataclass(frozen=True)
class CellEntry:
    """One printed line inside a grid cell."""

    abbreviation: str
    label: str
    cell: Cell
    c: int | None = None
    note: str = ""
    derived_from: str | None = None


@dataclass(frozen=True)
class AnnexEntry:
    abbreviation: str
    label: str
    reason: str


@dataclass(frozen=True)
class BlankCell:
    """An unoccupied core-grid cell and the formula a metric there would use."""

    distance: Distance
    column: str
    aggregator: AggKind
    formula: str


@dataclass(frozen=True)
class ChartGrid:
    cells: dict[Cell, tuple[CellEntry, ...]]
    annex: tuple[AnnexEntry, ...]

    def occupants(self, cell: Cell) -> tuple[CellEntry, ...]:
        return self.cells.get(cell, ())

    def occupied_columns(self) -> set[tuple[Distance, str, AggKind]]:
        """Core-grid coordinates with at least one entry (N5 collapsed)."""
        return {(d, n.column, g) for (d, n, g) in self.cells}

    def column_entries(self, distance: Distance, column: str, agg: AggKind) -> list[CellEntry]:
        out = []
        for (d, n, g), entries in sorted(self.cells.items(), key=_cell_sort_key):
            if d is distance and n.column == column and g is agg:
                out.extend(entries)
        return out

    @property
    def entry_count(self) -> int:
        """Printed core-grid lines, including as-printed entries."""
        return sum(len(v) for v in self.cells.values())

    @property
    def composed_entry_count(self) -> int:
        """Chart entries (core + annex) backed by a composition."""
        core = sum(
            1 for entries in self.cells.values() for e in entries if e.note != "as printed"
        )
        annex = sum(1 for e in self.annex if e.reason != "uncharted")
        return core + annex


def _cell_sort_key(item: tuple[Cell, object]) -> tuple:
    (d, n, g), _ = item
    return (
        list(Distance).index(d),
        NORM_COLUMNS.index(n.column),
        CORE_AGGREGATORS.index(g),
        n.value,
    )


def _entry_label(defn: MetricDefinition) -> str:
    comp = defn.composition
    parts = [defn.abbreviation]
    if defn.chart_aka:
        parts[0] += f" ({', '.join(defn.chart_aka)})"
    if defn.chart_parent is not None:
        assert comp is not None
        if any(p.kind is PostKind.SQRT for p in comp.post):
            return f"{defn.abbreviation}=sqrt({defn.chart_parent})"
        return f"{defn.abbreviation}=100*{defn.chart_parent}"
    if comp is not None and comp.normalizer.kind is not NormKind.UNITARY:
        parts.append(f"c={comp.normalizer.exponent}")
    if comp is not None and comp.normalizer.kind is NormKind.BY_MAX:
        parts.append("max")
    elif comp is not None and comp.normalizer.kind is NormKind.BY_MIN:
        parts.append("min")
    return " ".join(parts)


def _chartable(defn: MetricDefinition) -> bool:
    return (
        defn.category is Category.PRIMARY
        and defn.implemented
        and defn.charted
        and defn.composition is not None
        and defn.composition.aggregator.kind in CORE_AGGREGATORS
        and defn.composition.aggregator.fraction == 0.0
    )


def build_chart(definitions: Sequence[MetricDefinition] | None = None) -> ChartGrid:
    """Arrange catalog definitions into the grid.

    Raises DuplicateCellClaim when two metrics submit byte-identical
    compositions: a second name for the same recipe is a catalog mistake,
    not a new metric.
    """
    if definitions is None:
        definitions = list(get_catalog().values())

    cells: dict[Cell, list[CellEntry]] = {}
    annex: list[AnnexEntry] = []
    claimed: dict[object, str] = {}

    for defn in sorted(definitions, key=lambda d: d.abbreviation.casefold()):
        if defn.category is not Category.PRIMARY or not defn.implemented:
            continue
        comp = defn.composition
        if _chartable(defn):
            assert comp is not None
            key = (comp.distance, comp.normalizer, comp.aggregator, comp.transform, comp.post)
            if key in claimed:
                raise DuplicateCellClaim(
                    f"{defn.abbreviation} and {claimed[key]} claim the identical "
                    f"composition in cell {comp.cell}"
                )
            claimed[key] = defn.abbreviation
            entry = CellEntry(
                abbreviation=defn.abbreviation,
                label=_entry_label(defn),
                cell=comp.cell,
                c=comp.normalizer.exponent if comp.normalizer.kind is not NormKind.UNITARY else None,
                note="max" if comp.normalizer.kind is NormKind.BY_MAX
                else "min" if comp.normalizer.kind is NormKind.BY_MIN else "",
                derived_from=defn.chart_parent,
            )
            cells.setdefault(comp.cell, []).append(entry)
        elif defn.as_printed and defn.cell is not None:
            entry = CellEntry(
                abbreviation=defn.abbreviation,
                label=f"{defn.abbreviation} c=-1 (as printed)",
                cell=defn.cell,
                c=-1,
                note="as printed",
            )
            cells.setdefault(defn.cell, []).append(entry)
        elif comp is not None and comp.aggregator.kind not in CORE_AGGREGATORS:
            annex.append(AnnexEntry(
                abbreviation=defn.abbreviation,
                label=f"{defn.abbreviation} = {comp.aggregator.kind.value}_j[ {_DIST_TERMS[comp.distance]} ]",
                reason=f"{comp.aggregator.kind.value} aggregator",
            ))
        else:
            annex.append(AnnexEntry(
                abbreviation=defn.abbreviation,
                label=defn.abbreviation,
                reason="uncharted" if comp is None else "weighted transform",
            ))

    ordered: dict[Cell, tuple[CellEntry, ...]] = {}
    for cell, entries in sorted(cells.items(), key=_cell_sort_key):
        entries.sort(key=lambda e: (e.derived_from is not None, e.c or 0, e.abbreviation))
        ordered[cell] = tuple(entries)
    return ChartGrid(ordered, tuple(annex))


def generic_formula(distance: Distance, column: str, agg: AggKind) -> str:
    """Formula skeleton a metric at this coordinate would compute."""
    term = _DIST_TERMS[distance]
    if column == "N2":
        term = f"{term} / A_j^c"
    elif column == "N3":
        term = f"{term} / (A_j - mean(A))^c"
    elif column == "N4":
        term = f"{term} / (A_j + P_j)^c"
    elif column == "N5":
        term = f"{term} / max(A_j, P_j)^c (or min)"
    return _AGG_WRAPS[agg].format(term)


def blank_cells(grid: ChartGrid) -> list[BlankCell]:
    """Unoccupied core-grid coordinates in distance-major order."""
    occupied = grid.occupied_columns()
    out = []
    for d in Distance:
        for col in NORM_COLUMNS:
            for g in CORE_AGGREGATORS:
                if (d, col, g) not in occupied:
                    out.append(BlankCell(d, col, g, generic_formula(d, col, g)))
    return out


def _annex_lines(grid: ChartGrid) -> list[str]:
    catalog = get_catalog()
    lines = []
    for e in grid.annex:
        defn = catalog.get(e.abbreviation)
        detail = defn.notes if defn is not None and defn.notes else e.reason
        lines.append(f"{e.abbreviation}: {detail}")
    return lines


def _cell_text(grid: ChartGrid, d: Distance, col: str, g: AggKind) -> str:
    return "; ".join(e.label for e in grid.column_entries(d, col, g))


def render_plain(grid: ChartGrid, include_blanks: bool = False) -> str:
    header = ["aggregator"] + [f"{c} {COLUMN_TITLES[c]}" for c in NORM_COLUMNS]
    rows: list[list[str]] = []
    for d in Distance:
        rows.append([f"{d.code}: {DISTANCE_TITLES[d]}"] + [""] * len(NORM_COLUMNS))
        for g in CORE_AGGREGATORS:
            row = [f"  {g.value} {AGGREGATOR_TITLES[g]}"]
            row += [_cell_text(grid, d, c, g) for c in NORM_COLUMNS]
            rows.append(row)
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
    lines = ["composition chart: distance x normalizer x aggregator", ""]
    lines.append(" | ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    lines.append("-+-".join("-" * w for w in widths))
    for row in rows:
        lines.append(" | ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    if grid.annex:
        lines += ["", "annex (outside the core grid):"]
        lines += [f"  {t}" for t in _annex_lines(grid)]
    if include_blanks:
        lines += ["", "blank cells (formula a metric there would compute):"]
        for b in blank_cells(grid):
            lines.append(f"  {b.distance.code} {b.column} {b.aggregator.value}: {b.formula}")
    return "\n".join(lines) + "\n"


def render_delimited(grid: ChartGrid, include_blanks: bool = False) -> str:
    lines = ["distance,normalizer,aggregator,entry,c,note"]
    for cell, entries in sorted(grid.cells.items(), key=_cell_sort_key):
        d, n, g = cell
        for e in entries:
            c = "" if e.c is None else str(e.c)
            lines.append(f"{d.code},{n.value},{g.value},{e.label},{c},{e.note}")
    for e in grid.annex:
        lines.append(f",,,{e.abbreviation},,{e.reason}")
    if include_blanks:
        for b in blank_cells(grid):
            lines.append(f"{b.distance.code},{b.column},{b.aggregator.value},,,blank: {b.formula}")
    return "\n".join(lines) + "\n"


def render_markup(grid: ChartGrid, include_blanks: bool = False) -> str:
    lines = ["# Composition chart", ""]
    for d in Distance:
        lines.append(f"## {d.code}: {DISTANCE_TITLES[d]}")
        lines.append("")
        lines.append("| aggregator | " + " | ".join(NORM_COLUMNS) + " |")
        lines.append("|" + " --- |" * (len(NORM_COLUMNS) + 1))
        for g in CORE_AGGREGATORS:
            cellvals = [_cell_text(grid, d, c, g) for c in NORM_COLUMNS]
            lines.append(f"| {g.value} {AGGREGATOR_TITLES[g]} | " + " | ".join(cellvals) + " |")
        lines.append("")
    if grid.annex:
        lines.append("## Annex")
        lines.append("")
        lines += [f"- {t}" for t in _annex_lines(grid)]
        lines.append("")
    if include_blanks:
        lines.append("## Blank cells")
        lines.append("")
        for b in blank_cells(grid):
            lines.append(f"- `{b.distance.code} {b.column} {b.aggregator.value}`: {b.formula}")
        lines.append("")
    return "\n".join(lines)


RENDERERS = {
    "plain": render_plain,
    "delimited": render_delimited,
    "markup": render_markup,
}


def render_chart(grid: ChartGrid, fmt: str = "plain", include_blanks: bool = False) -> str:
    """Render the grid; identical input yields byte-identical output."""
    if fmt not in RENDERERS:
        raise ValueError(f"unknown chart format {fmt!r} (choose from {sorted(RENDERERS)})")
    return RENDERERS[fmt](grid, include_blanks)
