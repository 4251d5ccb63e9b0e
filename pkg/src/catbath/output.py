"""Scan results, bit-stable CSV files and generic gnuplot scripts."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["LAYOUTS", "ScanResult", "format_value", "write_csv", "emit_plot_script"]

# series: first column is x, every other column is a curve.
# curves: (group, x, y) long format, one curve per group value.
# heatmap: (group, x, y, value) long format, one map per group value.
LAYOUTS = ("series", "curves", "heatmap")


@dataclass(frozen=True)
class ScanResult:
    """A rectangular table plus the provenance needed to reproduce it."""

    name: str
    columns: tuple
    rows: np.ndarray
    layout: str
    units: str
    config_hash: str
    seed: int
    version: str
    title: str = ""

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.shape[1] != len(self.columns):
            raise ValueError(f"{self.name}: {rows.shape[1]} values per row but {len(self.columns)} columns")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError(f"{self.name}: duplicate column names")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", tuple(self.columns))

    def header(self) -> str:
        return f"# config-hash={self.config_hash} seed={self.seed} version={self.version}"

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def format_value(x: float) -> str:
    """17 significant digits: enough for a lossless float64 round trip."""
    return format(float(x), ".17g")


def write_csv(result: ScanResult, directory, prefix: str) -> Path:
    path = Path(directory) / f"{prefix}_{result.name}.csv"
    lines = [result.header(), ",".join(result.columns)]
    lines.extend(",".join(format_value(v) for v in row) for row in result.rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _quote(s: str) -> str:
    return '"' + s.replace('"', "'") + '"'


def emit_plot_script(result: ScanResult, csv_path) -> Path:
    """Write a gnuplot script next to ``csv_path`` that renders the table."""
    csv_path = Path(csv_path)
    if result.layout not in LAYOUTS:
        raise ValueError(f"unknown column layout {result.layout!r}")
    need = {"series": 2, "curves": 3, "heatmap": 4}[result.layout]
    if len(result.columns) < need:
        raise ValueError(f"layout {result.layout} needs at least {need} columns")
    cols = result.columns
    out = [
        f"# {result.title or result.name} ({result.units})",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        f"set terminal pngcairo size 900,600",
        f"set output {_quote(csv_path.with_suffix('.png').name)}",
        f"set xlabel {_quote(cols[0] if result.layout == 'series' else cols[1])}",
    ]
    data = _quote(csv_path.name)
    if result.layout == "series":
        parts = [f"{data} using 1:{i + 1} with lines title {_quote(c)}" for i, c in enumerate(cols[1:], start=1)]
        out.append("plot " + ", \\\n     ".join(parts))
    else:
        groups = np.unique(result.rows[:, 0])
        if result.layout == "curves":
            out.append(f"set ylabel {_quote(cols[2])}")
            parts = [
                f"{data} using ($1=={format_value(g)} ? $2 : 1/0):3 with linespoints title {_quote(f'{cols[0]}={g:g}')}"
                for g in groups
            ]
            out.append("plot " + ", \\\n     ".join(parts))
        else:
            vmax = float(np.max(np.abs(result.rows[:, 3]))) or 1.0
            out += [
                f"set ylabel {_quote(cols[2])}",
                "set view map",
                "set size ratio -1",
                "set palette defined (-1 'blue', 0 'white', 1 'red')",
                f"set cbrange [{-vmax!r}:{vmax!r}]",
                f"set multiplot layout 1,{len(groups)}",
            ]
            for g in groups:
                out.append(f"set title {_quote(f'{cols[0]}={g:g}')}")
                out.append(f"splot {data} using 2:3:($1=={format_value(g)} ? $4 : 1/0) with image notitle")
            out.append("unset multiplot")
    path = csv_path.with_suffix(".gp")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path
