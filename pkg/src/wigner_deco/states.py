"""Quantum states on a uniform position grid.

Everything downstream (the phase-space transform and the evolution engines)
consumes the two state containers defined here: :class:`WaveFunction` for
pure states and :class:`DensityMatrix` for general ones.  Both are immutable
and validated on construction, so any instance that exists is safe to use.

Units are carried explicitly by :class:`PhysicalParams`; with the default
``hbar = mass = diffusion_d = 1`` every derived scale of the package is
order one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    GridMismatchError,
    GridResolutionError,
    LeakageError,
    StateError,
    WeightError,
)

#: relative tolerance on state normalization
NORM_TOL = 1e-10
#: edge amplitude threshold, relative to the peak, in the outer 5% of samples
LEAK_TOL = 1e-6
#: eigenvalue floor for density matrices, relative to the largest eigenvalue
PSD_FLOOR = 1e-8


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class PhysicalParams:
    """Physical constants of the model: hbar, mass and the decoherence
    strength (a momentum-diffusion coefficient).

    All three must be strictly positive and finite.
    """

    hbar: float = 1.0
    mass: float = 1.0
    diffusion_d: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "diffusion_d"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise StateError(f"{name} must be positive and finite, got {v!r}")


@dataclass(frozen=True)
class PositionGrid:
    """Uniform grid of ``n_points`` positions on ``[x_min, x_max)``.

    ``n_points`` must be a power of two (>= 64) so all transforms stay on
    FFT-friendly sizes.  The grid implies a momentum grid
    ``p_k = hbar * 2*pi * k / (n_points * dx)`` with ``k`` centered on zero,
    used for wavefunction momentum representations; phase-space fields use
    the finer grid from :meth:`wigner_momenta`.
    """

    x_min: float = -16.0
    x_max: float = 16.0
    n_points: int = 256

    def __post_init__(self):
        if self.n_points < 64 or self.n_points & (self.n_points - 1):
            raise StateError(f"n_points must be a power of two >= 64, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise StateError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def span(self) -> float:
        return self.x_max - self.x_min

    def positions(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    def wavenumbers(self) -> np.ndarray:
        """Angular spatial frequencies in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def momentum_values(self, hbar: float) -> np.ndarray:
        """Centered momentum grid conjugate to the positions."""
        n = self.n_points
        return (np.arange(n) - n // 2) * (2.0 * np.pi * hbar / (n * self.dx))

    def wigner_momenta(self, hbar: float) -> np.ndarray:
        """Momentum grid of phase-space fields: step ``pi*hbar/(n*dx)``."""
        n = self.n_points
        return (np.arange(n) - n // 2) * (np.pi * hbar / (n * self.dx))


def _check_leakage(grid: PositionGrid, amp: np.ndarray) -> None:
    k = max(1, int(round(0.025 * grid.n_points)))
    peak = np.max(np.abs(amp))
    edge = max(np.max(np.abs(amp[:k])), np.max(np.abs(amp[-k:])))
    if edge > LEAK_TOL * peak:
        raise LeakageError(
            f"edge amplitude {edge:.3e} exceeds {LEAK_TOL:g} of peak {peak:.3e}; "
            "state does not fit the grid"
        )


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitudes of a pure state, sampled on a position grid.

    Invariants checked on construction: unit norm (``sum |psi|^2 dx = 1``
    within 1e-10) and negligible amplitude in the outer 5% of samples.
    """

    grid: PositionGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.grid.n_points,):
            raise StateError(f"expected {self.grid.n_points} amplitudes, got {amp.shape}")
        if not np.all(np.isfinite(amp.view(float))):
            raise StateError("amplitudes must be finite")
        nrm = np.sum(np.abs(amp) ** 2) * self.grid.dx
        if abs(nrm - 1.0) > NORM_TOL:
            raise StateError(f"norm^2 = {nrm!r} deviates from 1 by more than {NORM_TOL:g}")
        _check_leakage(self.grid, amp)
        object.__setattr__(self, "amplitudes", _readonly(amp))

    def position_mean(self) -> float:
        x = self.grid.positions()
        return float(np.sum(x * np.abs(self.amplitudes) ** 2) * self.grid.dx)

    def position_variance(self) -> float:
        x = self.grid.positions()
        pdf = np.abs(self.amplitudes) ** 2
        m = np.sum(x * pdf) * self.grid.dx
        return float(np.sum((x - m) ** 2 * pdf) * self.grid.dx)

    def momentum_mean(self, hbar: float) -> float:
        """First moment of the momentum distribution, via FFT."""
        n = self.grid.n_points
        x = self.grid.positions()
        p = self.grid.momentum_values(hbar)
        phase = np.exp(-1j * np.outer(p, x) / hbar)
        psit = phase @ self.amplitudes * self.grid.dx / np.sqrt(2 * np.pi * hbar)
        pdf = np.abs(psit) ** 2
        dp = p[1] - p[0]
        return float(np.sum(p * pdf) * dp / (np.sum(pdf) * dp))


@dataclass(frozen=True)
class DensityMatrix:
    """Position-representation density matrix ``entries[i, j] = <x_i|rho|x_j>``.

    Construction enforces exact Hermiticity and checks unit trace
    (``sum_i entries[i,i] dx = 1`` within 1e-10) and positive
    semidefiniteness up to a relative eigenvalue floor of 1e-8.
    """

    grid: PositionGrid
    entries: np.ndarray

    def __post_init__(self):
        n = self.grid.n_points
        m = np.ascontiguousarray(self.entries, dtype=complex)
        if m.shape != (n, n):
            raise StateError(f"expected a {n}x{n} matrix, got {m.shape}")
        if not np.array_equal(m, m.conj().T):
            raise StateError("entries must be exactly Hermitian")
        tr = np.trace(m).real * self.grid.dx
        if abs(tr - 1.0) > NORM_TOL:
            raise StateError(f"trace {tr!r} deviates from 1 by more than {NORM_TOL:g}")
        ev = np.linalg.eigvalsh(m)
        floor = -PSD_FLOOR * max(ev[-1], np.finfo(float).tiny)
        if ev[0] < floor:
            raise StateError(f"matrix has eigenvalue {ev[0]:.3e} below the PSD floor {floor:.3e}")
        object.__setattr__(self, "entries", _readonly(m))

    def trace(self) -> float:
        return float(np.trace(self.entries).real * self.grid.dx)

    def purity(self) -> float:
        """tr(rho^2) as the double sum ``sum |rho_ij|^2 dx^2``."""
        return float(np.sum(np.abs(self.entries) ** 2) * self.grid.dx**2)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _normalized(grid: PositionGrid, amp: np.ndarray) -> np.ndarray:
    return amp / np.sqrt(np.sum(np.abs(amp) ** 2) * grid.dx)


def _check_sigma(grid: PositionGrid, sigma: float) -> None:
    lo, hi = 4 * grid.dx, grid.span / 16
    if not (lo <= sigma <= hi):
        raise GridResolutionError(
            f"sigma = {sigma:g} outside the admissible band [{lo:g}, {hi:g}] "
            f"for n = {grid.n_points}, span = {grid.span:g}"
        )


def gaussian_packet(
    grid: PositionGrid, x0: float, p0: float, sigma: float, params: PhysicalParams
) -> WaveFunction:
    """Minimum-uncertainty packet centered at ``(x0, p0)``.

    ``psi(x) ~ exp(-(x - x0)^2 / 4 sigma^2 + i p0 x / hbar)``, so the
    position distribution has mean ``x0`` and variance ``sigma^2``.

    Parameters
    ----------
    sigma : position standard deviation; must satisfy
        ``4*dx <= sigma <= span/16`` so the packet is both resolved and
        far from the edges.
    """
    _check_sigma(grid, sigma)
    x = grid.positions()
    amp = np.exp(-((x - x0) ** 2) / (4 * sigma**2) + 1j * p0 * x / params.hbar)
    return WaveFunction(grid, _normalized(grid, amp))


def cat_state(
    grid: PositionGrid, x0: float, sigma: float, phase: float, params: PhysicalParams
) -> WaveFunction:
    """Superposition of two packets at ``+x0`` and ``-x0`` with relative
    phase ``exp(i*phase)``.

    The normalization constant is computed on the grid and therefore
    includes the Gaussian overlap of the two branches exactly; small
    separations remain exactly normalized.  With ``phase = 0`` the state is
    even under ``x -> -x``.
    """
    plus = gaussian_packet(grid, +x0, 0.0, sigma, params)
    minus = gaussian_packet(grid, -x0, 0.0, sigma, params)
    amp = plus.amplitudes + np.exp(1j * phase) * minus.amplitudes
    return WaveFunction(grid, _normalized(grid, amp))


def oscillator_eigenstate(grid: PositionGrid, n: int, sigma: float) -> WaveFunction:
    """n-th harmonic-oscillator eigenfunction with ground-state position
    standard deviation ``sigma`` (so ``n = 0`` reproduces
    ``gaussian_packet(0, 0, sigma)``).

    The real profile changes sign exactly ``n`` times.  Supported for
    ``n <= 10``.
    """
    if not (0 <= n <= 10):
        raise GridResolutionError(f"eigenstate index n = {n} outside the supported range 0..10")
    _check_sigma(grid, sigma)
    x = grid.positions()
    coeff = np.zeros(n + 1)
    coeff[n] = 1.0
    herm = np.polynomial.hermite.hermval(x / (sigma * np.sqrt(2)), coeff)
    amp = herm * np.exp(-(x**2) / (4 * sigma**2))
    return WaveFunction(grid, _normalized(grid, amp.astype(complex)))


def density_from_pure(psi: WaveFunction) -> DensityMatrix:
    """Projector ``|psi><psi|`` as a position-space kernel."""
    # symmetrized so Hermiticity holds exactly, not just to rounding
    return DensityMatrix(psi.grid, _hermitize(np.outer(psi.amplitudes, psi.amplitudes.conj())))


def mix(states: Sequence[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex mixture ``sum_k w_k rho_k``.

    Weights must be non-negative and sum to one (within 1e-10); all
    components must share one grid.
    """
    if not states:
        raise WeightError("mixture needs at least one component")
    weights = np.array([w for w, _ in states], dtype=float)
    if np.any(weights < 0):
        raise WeightError("mixture weights must be non-negative")
    if abs(weights.sum() - 1.0) > NORM_TOL:
        raise WeightError(f"mixture weights sum to {weights.sum()!r}, expected 1")
    grid = states[0][1].grid
    for _, rho in states[1:]:
        if rho.grid != grid:
            raise GridMismatchError("mixture components live on different grids")
    total = np.zeros((grid.n_points, grid.n_points), dtype=complex)
    for w, rho in states:
        total += w * rho.entries
    return DensityMatrix(grid, _hermitize(total))
