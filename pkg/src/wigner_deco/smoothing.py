"""Gaussian coarse-graining of phase-space fields.

Convolution with a normalized Gaussian kernel of covariance C is done in
the Fourier domain with the analytic transform ``exp(-k^T C k / 2)``, never
with a sampled spatial kernel.  This is exact for the band-limited field,
fast, and uniformly valid for every positive-semidefinite C including
degenerate ones (det C = 0 gives a one-dimensional smear; C = 0 is the
identity and returns the input unchanged), because the multiplier never
needs the inverse of C.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BracketError, KernelTooWideError, PSDError
from .wigner import PositivityReport, WignerField, min_value

#: relative floor above which a field counts as non-negative
POSITIVITY_FLOOR = -1e-9


@dataclass(frozen=True)
class CovarianceMatrix2:
    """Symmetric 2x2 phase-space covariance (c_xx, c_xp, c_pp).

    Must be positive semidefinite: both diagonals non-negative and
    ``det = c_xx*c_pp - c_xp^2 >= 0`` (up to a tiny rounding allowance).
    The positivity lemma threshold is ``det >= hbar^2/4``.
    """

    c_xx: float
    c_xp: float
    c_pp: float

    def __post_init__(self):
        scale = max(self.c_xx, self.c_pp, abs(self.c_xp), 1.0)
        if self.c_xx < 0 or self.c_pp < 0 or self.det < -1e-12 * scale**2:
            raise PSDError(
                f"covariance ({self.c_xx}, {self.c_xp}, {self.c_pp}) is not positive semidefinite"
            )

    @property
    def det(self) -> float:
        return self.c_xx * self.c_pp - self.c_xp**2

    def matrix(self) -> np.ndarray:
        return np.array([[self.c_xx, self.c_xp], [self.c_xp, self.c_pp]])

    def is_zero(self) -> bool:
        return self.c_xx == 0.0 and self.c_xp == 0.0 and self.c_pp == 0.0

    @staticmethod
    def isotropic(c: float) -> "CovarianceMatrix2":
        return CovarianceMatrix2(c, 0.0, c)


@dataclass(frozen=True)
class GaussianKernel:
    """Normalized Gaussian phase-space kernel with covariance C."""

    covariance: CovarianceMatrix2

    def fourier_multiplier(self, kx: np.ndarray, kp: np.ndarray) -> np.ndarray:
        """exp(-k^T C k / 2) on the mesh of the two frequency axes."""
        c = self.covariance
        return np.exp(
            -0.5
            * (
                c.c_xx * kx[:, None] ** 2
                + 2 * c.c_xp * kx[:, None] * kp[None, :]
                + c.c_pp * kp[None, :] ** 2
            )
        )

    def density(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        """g(x, p; C) on a mesh; requires det C > 0."""
        c = self.covariance
        if c.det <= 0:
            raise PSDError("spatial kernel density needs det C > 0")
        inv = np.linalg.inv(c.matrix())
        q = (
            inv[0, 0] * x[:, None] ** 2
            + 2 * inv[0, 1] * x[:, None] * p[None, :]
            + inv[1, 1] * p[None, :] ** 2
        )
        return np.exp(-0.5 * q) / (2 * np.pi * np.sqrt(c.det))


def _check_kernel_fits(w: WignerField, cov: CovarianceMatrix2) -> None:
    # three standard deviations along each axis must fit half the span
    x_span = w.grid.span
    p_span = w.grid.n_points * w.dp
    if 3 * np.sqrt(cov.c_xx) > 0.5 * x_span or 3 * np.sqrt(cov.c_pp) > 0.5 * p_span:
        raise KernelTooWideError(
            f"kernel sigma ({np.sqrt(cov.c_xx):.3g}, {np.sqrt(cov.c_pp):.3g}) too wide for "
            f"spans ({x_span:.3g}, {p_span:.3g})"
        )


def coarse_grain(w: WignerField, cov: CovarianceMatrix2) -> WignerField:
    """Convolve the field with a Gaussian kernel of covariance ``cov``.

    Normalization is preserved (the kernel has unit mass); ``cov = 0``
    returns the input unchanged.
    """
    if cov.is_zero():
        return w
    _check_kernel_fits(w, cov)
    n = w.grid.n_points
    kx = 2 * np.pi * np.fft.fftfreq(n, d=w.grid.dx)
    kp = 2 * np.pi * np.fft.fftfreq(n, d=w.dp)
    mult = GaussianKernel(cov).fourier_multiplier(kx, kp)
    out = np.fft.ifft2(np.fft.fft2(w.values) * mult).real
    return WignerField(w.grid, w.params, out)


def husimi(w: WignerField) -> WignerField:
    """Coarse-grain with the minimum-uncertainty isotropic covariance
    ``diag(hbar/2, hbar/2)``; the result is non-negative for every valid
    input field."""
    return coarse_grain(w, CovarianceMatrix2.isotropic(w.params.hbar / 2))


def check_lemma(w: WignerField, cov: CovarianceMatrix2) -> PositivityReport:
    """Coarse-grain, then report the minimum of the smoothed field."""
    return min_value(coarse_grain(w, cov))


def positivity_threshold(w: WignerField, tol: float = 1e-4) -> float:
    """Smallest isotropic covariance c for which the smoothed field is
    non-negative (relative floor above -1e-9), by bisection on [0, 1].

    Returns 0 for a field that is already non-negative.  Both bracket
    endpoints are re-verified before the value is returned.
    """
    def floor_at(c: float) -> float:
        field = w if c == 0.0 else coarse_grain(w, CovarianceMatrix2.isotropic(c))
        return field.relative_floor()

    lo, hi = 0.0, 1.0
    if floor_at(lo) >= POSITIVITY_FLOOR:
        return 0.0
    if floor_at(hi) < POSITIVITY_FLOOR:
        raise BracketError("field still negative at isotropic c = 1; cannot bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if floor_at(mid) >= POSITIVITY_FLOOR:
            hi = mid
        else:
            lo = mid
    if not (floor_at(hi) >= POSITIVITY_FLOOR > floor_at(lo)):
        raise BracketError("bisection certificate failed on re-verification")
    return hi
