"""Line figures from sweep result CSVs.

Reads the simulator's ``results.csv`` format (one row per sweep value, scheme,
and run seed), averages the total rate over runs, and draws one line per
(scheme, input label) pair.  The module never imports the simulator; the CSV
is the entire contract between the two packages.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import yaml
from matplotlib.figure import Figure

EXPECTED_HEADER = (
    "sweep_param,sweep_value,mode,run_seed,total_gestr_suts_per_s,"
    "matched_mds,nodes_explored,wall_ms"
)

SCHEME_LABELS = {
    "joint": "Joint sharing",
    "nocollab": "No collaboration",
    "noshare": "No sharing",
}

X_AXIS_LABELS = {
    "delay_tolerance": "maximum delay tolerance (s)",
    "accuracy_threshold": "minimum semantic accuracy (fraction)",
    "bandwidth": "subchannel bandwidth (Hz)",
    "md_tx_power": "device transmit power (W)",
}

Y_AXIS_LABEL = "mean total rate (suts/s)"

# one fixed color per scheme, one linestyle per input position; stable styling
# is part of the byte-determinism contract
_SCHEME_COLORS = {"joint": "#1f6fb4", "nocollab": "#c95f2b", "noshare": "#4d8a4d"}
_INPUT_STYLES = ("-", "--", ":", "-.")
_MARKERS = ("o", "s", "^", "d")

_SVG_HASH_SALT = "semnet-figures"


class FigureError(ValueError):
    """Bad figure spec or malformed input CSV."""


@dataclass(frozen=True)
class CsvRow:
    sweep_param: str
    sweep_value: float
    mode: str
    total: float


@dataclass(frozen=True)
class FigureInput:
    csv_path: Path
    label: str


@dataclass(frozen=True)
class FigureSpec:
    x_axis: str
    inputs: tuple[FigureInput, ...]
    modes: tuple[str, ...]
    output: Path
    image_format: str

    def __post_init__(self):
        if not self.inputs:
            raise FigureError("a figure needs at least one input CSV")
        if not self.modes:
            raise FigureError("a figure needs at least one scheme to plot")
        unknown = [m for m in self.modes if m not in SCHEME_LABELS]
        if unknown:
            raise FigureError(f"unknown scheme names: {unknown}")
        if self.image_format not in ("png", "svg"):
            raise FigureError(f"image format must be png or svg, got {self.image_format!r}")
        labels = [inp.label for inp in self.inputs]
        if len(set(labels)) != len(labels):
            raise FigureError("input labels must be distinct")


@dataclass(frozen=True)
class Series:
    mode: str
    input_label: str
    points: tuple[tuple[float, float], ...]  # (sweep value, mean total) ascending

    @property
    def legend_label(self) -> str:
        return f"{SCHEME_LABELS[self.mode]}, {self.input_label}"


@dataclass(frozen=True)
class RenderResult:
    output: Path
    series: tuple[Series, ...]


def load_figure_spec(path) -> FigureSpec:
    """Parse a figure spec YAML; relative paths resolve against the spec file."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise FigureError(f"{path}: figure spec must be a mapping")
    known = {"x_axis", "inputs", "modes", "output", "format"}
    unknown = set(doc) - known
    if unknown:
        raise FigureError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        x_axis = str(doc["x_axis"])
        raw_inputs = doc["inputs"]
        output = doc["output"]
    except KeyError as exc:
        raise FigureError(f"{path}: missing required key {exc.args[0]!r}") from exc
    if not isinstance(raw_inputs, list):
        raise FigureError(f"{path}: inputs must be a list of {{csv, label}} entries")
    base = path.parent
    inputs = []
    for entry in raw_inputs:
        if not isinstance(entry, dict) or set(entry) != {"csv", "label"}:
            raise FigureError(f"{path}: each input needs exactly the keys csv and label")
        inputs.append(FigureInput(base / str(entry["csv"]), str(entry["label"])))
    modes = tuple(str(m) for m in doc.get("modes", tuple(SCHEME_LABELS)))
    image_format = str(doc.get("format", "")) or Path(str(output)).suffix.lstrip(".") or "png"
    return FigureSpec(
        x_axis=x_axis,
        inputs=tuple(inputs),
        modes=modes,
        output=base / str(output),
        image_format=image_format,
    )


def read_rows(path) -> list[CsvRow]:
    """Parse a results CSV, reporting the offending line on any defect."""
    path = Path(path)
    if not path.exists():
        raise FigureError(f"input CSV not found: {path}")
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for lineno, record in enumerate(reader, start=1):
            if lineno == 1:
                if ",".join(record) != EXPECTED_HEADER:
                    raise FigureError(
                        f"{path} line 1: header does not match the results format"
                    )
                continue
            if len(record) != 8:
                raise FigureError(
                    f"{path} line {lineno}: expected 8 fields, found {len(record)}"
                )
            try:
                rows.append(
                    CsvRow(
                        sweep_param=record[0],
                        sweep_value=float(record[1]),
                        mode=record[2],
                        total=float(record[4]),
                    )
                )
            except ValueError as exc:
                raise FigureError(f"{path} line {lineno}: {exc}") from exc
    return rows


def series_from_rows(rows, mode: str, input_label: str) -> Series:
    """Mean total per sweep value for one scheme, in ascending value order."""
    by_value: dict[float, list[float]] = {}
    for row in rows:
        if row.mode == mode:
            by_value.setdefault(row.sweep_value, []).append(row.total)
    points = tuple(
        (value, sum(totals) / len(totals)) for value, totals in sorted(by_value.items())
    )
    return Series(mode, input_label, points)


def build_series(spec: FigureSpec) -> tuple[Series, ...]:
    """All (scheme, input) series for a spec, validating the shared sweep axis."""
    collected = []
    for inp in spec.inputs:
        rows = read_rows(inp.csv_path)
        foreign = {r.sweep_param for r in rows} - {spec.x_axis}
        if foreign:
            raise FigureError(
                f"{inp.csv_path}: sweeps {sorted(foreign)}, figure expects {spec.x_axis!r}"
            )
        for mode in spec.modes:
            series = series_from_rows(rows, mode, inp.label)
            if not series.points:
                raise FigureError(f"{inp.csv_path}: no rows for scheme {mode!r}")
            collected.append(series)
    return tuple(collected)


def render(spec: FigureSpec) -> RenderResult:
    """Draw the figure and write it to spec.output; returns the plotted series."""
    all_series = build_series(spec)
    fig = Figure(figsize=(6.4, 4.4), dpi=144)
    ax = fig.add_subplot()
    for series in all_series:
        input_index = next(
            i for i, inp in enumerate(spec.inputs) if inp.label == series.input_label
        )
        xs = [p[0] for p in series.points]
        ys = [p[1] for p in series.points]
        ax.plot(
            xs,
            ys,
            color=_SCHEME_COLORS[series.mode],
            linestyle=_INPUT_STYLES[input_index % len(_INPUT_STYLES)],
            marker=_MARKERS[input_index % len(_MARKERS)],
            markersize=5,
            label=series.legend_label,
        )
    ax.set_xlabel(X_AXIS_LABELS.get(spec.x_axis, spec.x_axis))
    ax.set_ylabel(Y_AXIS_LABEL)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=9)
    fig.set_layout_engine("tight")
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    _save_deterministic(fig, spec.output, spec.image_format)
    return RenderResult(spec.output, all_series)


def _save_deterministic(fig: Figure, output: Path, image_format: str) -> None:
    # strip the writer-injected metadata that would otherwise change run to run
    if image_format == "png":
        fig.savefig(output, format="png", metadata={"Software": None})
    else:
        with_salt = {"svg.hashsalt": _SVG_HASH_SALT}
        import matplotlib

        with matplotlib.rc_context(with_salt):
            fig.savefig(output, format="svg", metadata={"Date": None})
