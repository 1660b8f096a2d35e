"""Phase-space transform of a density matrix and its diagnostics.

The transform maps ``rho(x, x')`` to a real field ``W(x, p)`` by Fourier
transforming correlation slices ``rho(x - r/2, x + r/2)`` over the offset
``r``.  On the grid the slice through row ``i`` is the antidiagonal of the
matrix through ``(i, i)``: entries ``(i - j, i + j)``, which sample ``r`` in
steps of ``2*dx``.  An n-point FFT of that slice yields ``W(x_i, p_k)`` on a
momentum grid with step ``pi*hbar/(n*dx)``, i.e. half the step (and half the
span) of the wavefunction momentum grid.  The odd antidiagonals
``(i - j, i + j + 1)`` would give the field at the half-integer centers
``x_{i+1/2}``; they are not needed because every consumer reads ``W`` on
grid points only, and using them at integer centers would shift the field
by a quarter step.

Two consequences of this sampling are used heavily by the tests: the
position marginal of the field equals the density-matrix diagonal exactly
(one discrete delta), and the field is real up to floating-point noise
because each slice is Hermitian in ``r``.

All transforms here are single vectorized FFT passes, so results do not
depend on any parallel schedule; scalar reductions use numpy's pairwise
summation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, RealityError, StateError, SupportError
from .states import DensityMatrix, PhysicalParams, PositionGrid, _readonly

#: tolerance on |integral of W - 1|
FIELD_NORM_TOL = 1e-6
#: imaginary residue bound, relative to max|W|
REALITY_TOL = 1e-8
#: relative support threshold used by rescaling checks
SUPPORT_EPS = 1e-9


@dataclass(frozen=True)
class WignerField:
    """Real-valued phase-space samples ``values[i, k] = W(x_i, p_k)``.

    ``p_k`` runs over ``grid.wigner_momenta(hbar)``.  Construction checks
    that the field is finite and integrates to one within 1e-6.
    """

    grid: PositionGrid
    params: PhysicalParams
    values: np.ndarray

    def __post_init__(self):
        n = self.grid.n_points
        v = np.ascontiguousarray(self.values, dtype=float)
        if v.shape != (n, n):
            raise StateError(f"expected a {n}x{n} field, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise StateError("field values must be finite")
        total = np.sum(v) * self.grid.dx * self.dp
        if abs(total - 1.0) > FIELD_NORM_TOL:
            raise NormalizationError(
                f"field integrates to {total!r}, deviating from 1 by more than {FIELD_NORM_TOL:g}"
            )
        object.__setattr__(self, "values", _readonly(v))

    @property
    def dp(self) -> float:
        return np.pi * self.params.hbar / (self.grid.n_points * self.grid.dx)

    def momenta(self) -> np.ndarray:
        return self.grid.wigner_momenta(self.params.hbar)

    def normalization(self) -> float:
        return float(np.sum(self.values) * self.grid.dx * self.dp)

    def relative_floor(self) -> float:
        return float(self.values.min() / np.max(np.abs(self.values)))


@dataclass(frozen=True)
class PositivityReport:
    """Location and depth of the field minimum.

    ``relative_floor`` is ``min_value / max|W|``; a field counts as
    non-negative when it is above ``-1e-9``.
    """

    min_value: float
    min_location: tuple[float, float]
    relative_floor: float


def _correlation_slices(rho: DensityMatrix) -> np.ndarray:
    """Antidiagonal slices c[i, m] = rho(i - (m - n/2), i + (m - n/2))."""
    n = rho.grid.n_points
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :] - n // 2
    a = i - j
    b = i + j
    valid = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    return np.where(valid, rho.entries[a.clip(0, n - 1), b.clip(0, n - 1)], 0.0)


def wigner_transform(rho: DensityMatrix, params: PhysicalParams) -> WignerField:
    """Transform a density matrix into its real phase-space field.

    For each grid point ``x_i`` the correlation slice is Fourier
    transformed over the offset ``r`` (step ``2*dx``, n samples), producing
    ``W(x_i, p_k)`` with the prefactor ``1/(2*pi*hbar)`` that makes
    ``integral W dx dp = 1``.

    Raises
    ------
    RealityError
        if the imaginary residue exceeds ``1e-8 * max|W|`` (the slices of a
        Hermitian matrix force a real result).
    NormalizationError
        if the field does not integrate to 1 within 1e-6.
    """
    grid = rho.grid
    n = grid.n_points
    c = _correlation_slices(rho)
    # centered DFT over r: W[i, k] = (dx / pi hbar) * sum_m c[i, m] e^{2pi i (k-n/2)(m-n/2)/n}
    w = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(c, axes=1), axis=1), axes=1) * n
    w *= grid.dx / (np.pi * params.hbar)
    peak = np.max(np.abs(w.real))
    residue = np.max(np.abs(w.imag))
    if residue > REALITY_TOL * peak:
        raise RealityError(f"imaginary residue {residue:.3e} exceeds {REALITY_TOL:g} of peak {peak:.3e}")
    return WignerField(grid, params, w.real.copy())


def marginals(w: WignerField) -> tuple[np.ndarray, np.ndarray]:
    """Position and momentum densities obtained by summing out the other
    variable; each integrates to the field normalization."""
    position = w.values.sum(axis=1) * w.dp
    momentum = w.values.sum(axis=0) * w.grid.dx
    return position, momentum


def purity(w: WignerField) -> float:
    """``2*pi*hbar * integral W^2 dx dp``; equals tr(rho^2) of the source."""
    return float(
        2 * np.pi * w.params.hbar * np.sum(w.values**2) * w.grid.dx * w.dp
    )


def min_value(w: WignerField) -> PositivityReport:
    """Exhaustive grid scan for the minimum.

    Ties break toward the lowest x index, then the lowest p index.
    """
    flat = int(np.argmin(w.values))
    i, k = divmod(flat, w.grid.n_points)
    mn = float(w.values[i, k])
    x = w.grid.positions()[i]
    p = w.momenta()[k]
    return PositivityReport(mn, (float(x), float(p)), mn / float(np.max(np.abs(w.values))))


def _resample_axis(values: np.ndarray, points: np.ndarray, origin: float, step: float, axis: int) -> np.ndarray:
    """Evaluate the trigonometric interpolant along one axis at arbitrary
    points; points outside the sampled domain give zero."""
    n = values.shape[axis]
    spectrum = np.fft.fft(values, axis=axis)
    basis = np.exp(2j * np.pi * np.outer(points - origin, np.fft.fftfreq(n, d=step)))
    inside = (points >= origin - 0.5 * step) & (points <= origin + (n - 0.5) * step)
    if axis == 0:
        out = np.real(basis @ spectrum) / n
        out[~inside, :] = 0.0
    else:
        out = np.real(spectrum @ basis.T) / n
        out[:, ~inside] = 0.0
    return out


def _support_extent(values: np.ndarray, coords: np.ndarray, axis: int) -> tuple[float, float]:
    prof = np.max(np.abs(values), axis=1 - axis)
    occupied = prof > SUPPORT_EPS * prof.max()
    pts = coords[occupied]
    return float(pts.min()), float(pts.max())


def apply_squeeze(w: WignerField, lam: float) -> WignerField:
    """Evaluate the field under the symplectic scaling
    ``(x, p) -> (lam * x, p / lam)``: returns ``W(x/lam, lam*p)``.

    Uses trigonometric interpolation along each axis (the field is the
    band-limited representation of its samples, so this is the consistent
    interpolant; linear interpolation would not hold the covariance
    tolerance).  ``lam = 1`` returns the input unchanged.

    Raises
    ------
    SupportError
        if the rescaled support (at a relative level of 1e-9) would not fit
        the grid.
    """
    if lam <= 0:
        raise StateError(f"scaling parameter must be positive, got {lam}")
    if lam == 1.0:
        return w
    grid = w.grid
    x = grid.positions()
    p = w.momenta()
    xlo, xhi = _support_extent(w.values, x, axis=0)
    plo, phi = _support_extent(w.values, p, axis=1)
    pad_x, pad_p = 2 * grid.dx, 2 * w.dp
    if lam * max(abs(xlo), abs(xhi)) > max(abs(x[0]), abs(x[-1])) + pad_x:
        raise SupportError(f"x-support scaled by {lam:g} leaks off the grid")
    if max(abs(plo), abs(phi)) / lam > max(abs(p[0]), abs(p[-1])) + pad_p:
        raise SupportError(f"p-support scaled by 1/{lam:g} leaks off the grid")
    out = _resample_axis(w.values, x / lam, float(x[0]), grid.dx, axis=0)
    out = _resample_axis(out, lam * p, float(p[0]), w.dp, axis=1)
    return WignerField(grid, w.params, out)
