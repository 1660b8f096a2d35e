"""CSV and PGM artifact serialization.

All CSV floats use 17 significant digits, which round-trips IEEE doubles
losslessly; files are UTF-8 with LF line endings.  Heatmaps are binary PGM
(P5) with a symmetric diverging gray mapping centered on W = 0 so negative
regions are visible at a glance.
"""
from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .states import DensityMatrix, PhysicalParams, PositionGrid, WaveFunction
from .wigner import WignerField


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def wavefunction_csv(psi: WaveFunction) -> str:
    """Columns x, re, im; one row per grid point."""
    x = psi.grid.positions()
    rows = ["x,re,im"]
    rows += [
        f"{_fmt(xi)},{_fmt(a.real)},{_fmt(a.imag)}" for xi, a in zip(x, psi.amplitudes)
    ]
    return "\n".join(rows) + "\n"


def density_csv(rho: DensityMatrix) -> str:
    """Row-major matrix dump; each line holds alternating re,im pairs."""
    lines = []
    for row in rho.entries:
        lines.append(",".join(f"{_fmt(v.real)},{_fmt(v.imag)}" for v in row))
    return "\n".join(lines) + "\n"


def field_csv(w: WignerField) -> str:
    """Long format with columns x, p, w; x varies slowest."""
    x = w.grid.positions()
    p = w.momenta()
    rows = ["x,p,w"]
    for i in range(w.grid.n_points):
        xi = _fmt(x[i])
        vals = w.values[i]
        rows += [f"{xi},{_fmt(p[k])},{_fmt(vals[k])}" for k in range(w.grid.n_points)]
    return "\n".join(rows) + "\n"


def field_from_csv(text: str, params: PhysicalParams) -> WignerField:
    """Rebuild a field from :func:`field_csv` output; values round-trip
    bitwise."""
    lines = text.strip().split("\n")
    if not lines or lines[0] != "x,p,w":
        raise ConfigError("field CSV must start with the header 'x,p,w'")
    data = np.array([[float(c) for c in line.split(",")] for line in lines[1:]])
    n = int(round(np.sqrt(data.shape[0])))
    if n * n != data.shape[0]:
        raise ConfigError(f"field CSV holds {data.shape[0]} rows, not a square grid")
    x = data[::n, 0]
    dx = x[1] - x[0]
    grid = PositionGrid(x_min=float(x[0]), x_max=float(x[0] + n * dx), n_points=n)
    return WignerField(grid, params, data[:, 2].reshape(n, n))


def scan_csv(trace: list[tuple[float, float, float, float]]) -> str:
    """Columns t, min_w, relative_floor, det_cw."""
    rows = ["t,min_w,relative_floor,det_cw"]
    rows += [",".join(_fmt(v) for v in entry) for entry in trace]
    return "\n".join(rows) + "\n"


def heatmap_pgm(
    values: np.ndarray,
    x_min: float,
    x_max: float,
    p_min: float,
    p_max: float,
) -> bytes:
    """8-bit binary PGM of a phase-space array.

    Pixel (row, col) maps to (p descending, x ascending).  Gray levels use
    the symmetric range ``[-max|W|, +max|W|]`` with round-half-up, so W = 0
    lands on 128 and negative lobes are darker; a constant field renders as
    uniform 127.  Header comments record the grid bounds and the scale.
    """
    w_hi = float(np.max(np.abs(values)))
    if w_hi == 0.0:
        pix = np.full(values.T.shape, 127, dtype=np.uint8)[::-1, :]
    else:
        scaled = 255.0 * (values - (-w_hi)) / (2.0 * w_hi)
        pix = np.floor(scaled + 0.5).astype(np.uint8).T[::-1, :]
    header = (
        "P5\n"
        f"# x in [{_fmt(x_min)}, {_fmt(x_max)}]\n"
        f"# p in [{_fmt(p_min)}, {_fmt(p_max)}]\n"
        f"# w_hi = {_fmt(w_hi)}\n"
        f"{pix.shape[1]} {pix.shape[0]}\n255\n"
    )
    return header.encode("ascii") + pix.tobytes()


def field_pgm(w: WignerField) -> bytes:
    p = w.momenta()
    return heatmap_pgm(w.values, w.grid.x_min, w.grid.x_max, float(p[0]), float(p[-1]))


def export_heatmap(w: WignerField, path: str) -> None:
    """Write the field heatmap as a binary PGM file."""
    with open(path, "wb") as fh:
        fh.write(field_pgm(w))
