from .core import (
    EXPECTED_HEADER,
    CsvRow,
    FigureError,
    FigureInput,
    FigureSpec,
    RenderResult,
    SCHEME_LABELS,
    Series,
    build_series,
    load_figure_spec,
    read_rows,
    render,
    series_from_rows,
)

__all__ = [
    "EXPECTED_HEADER",
    "CsvRow",
    "FigureError",
    "FigureInput",
    "FigureSpec",
    "RenderResult",
    "SCHEME_LABELS",
    "Series",
    "build_series",
    "load_figure_spec",
    "read_rows",
    "render",
    "series_from_rows",
]
