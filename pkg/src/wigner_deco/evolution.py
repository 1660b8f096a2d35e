"""Time evolution under the free-particle position-decoherence model.

Three independent engines evolve the same dynamics and serve as oracles
for one another:

* :func:`evolve_exact` applies the closed-form phase-space solution: a
  shear ``x -> x - p t / m`` followed by Gaussian coarse-graining with the
  time-dependent covariance ``C_W(t)``.  It is one-shot (always propagates
  from t = 0) because the solution is global in time; chaining restarts
  would compound interpolation error.
* :func:`evolve_fd` steps the advection-diffusion equation
  ``dW/dt = -(p/m) dW/dx + (D/2) d2W/dp2`` with first-order upwind
  transport and second-order central diffusion, sharing no machinery with
  the exact engine.
* :func:`evolve_density_trotter` splits the density-matrix generator into
  its exact kinetic flow (momentum-space phase) and exact decoherence flow
  (position-space Gaussian damping of off-diagonals), composed
  symmetrically, so the only error is the splitting error.

A Monte Carlo engine averages pure-state trajectories driven by a white-
noise force; it reproduces the master equation statistically and is
deterministic for a fixed seed via counter-based per-trajectory streams.

The decoherence scales are ``sigma0 = (hbar^3 / (D m))^(1/4)``,
``t0 = sqrt(hbar m / D)`` and ``t_D = 3^(1/4) t0``; ``det C_W(t_D) =
hbar^2/4`` is exactly the positivity-lemma threshold, which is why every
state's field is non-negative from ``t_D`` on.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    NegativeTimeError,
    NeverPositiveError,
    StabilityError,
    StepSizeError,
    SupportError,
    ValidationFailure,
)
from .smoothing import POSITIVITY_FLOOR, CovarianceMatrix2, coarse_grain
from .states import DensityMatrix, PhysicalParams, WaveFunction, _hermitize
from .wigner import WignerField

#: rows below this relative level do not constrain the transport check
_OCCUPANCY_EPS = 1e-7
#: extra slack, in grid steps, allowed before transport counts as leaking
_SUPPORT_SLACK_STEPS = 2


def thread_count() -> int:
    """Worker cap from WIGNER_DECO_THREADS (0 or unset means auto)."""
    raw = os.environ.get("WIGNER_DECO_THREADS", "0")
    try:
        requested = int(raw)
    except ValueError:
        requested = 0
    if requested <= 0:
        return min(4, os.cpu_count() or 1)
    return requested


@dataclass(frozen=True)
class DecoherenceScales:
    """Derived scales of the model; see :func:`scales`."""

    sigma0: float
    t0: float
    tD: float


def scales(params: PhysicalParams) -> DecoherenceScales:
    """Length and time scales of the model: ``sigma0`` where free spreading
    balances momentum diffusion, the balance time ``t0``, and the exact
    positivity time ``t_D = 3^(1/4) * t0``."""
    sigma0 = (params.hbar**3 / (params.diffusion_d * params.mass)) ** 0.25
    t0 = np.sqrt(params.hbar * params.mass / params.diffusion_d)
    return DecoherenceScales(float(sigma0), float(t0), float(3**0.25 * t0))


@dataclass(frozen=True)
class PropagatorCovariance:
    """Coarse-graining covariance accumulated by time ``time``."""

    time: float
    matrix: CovarianceMatrix2


def propagator_covariance(t: float, params: PhysicalParams) -> PropagatorCovariance:
    """Covariance ``C_W(t) = D t [[t^2/3m^2, t/2m], [t/2m, 1]]``, with
    ``det C_W(t) = D^2 t^4 / (12 m^2)``."""
    if t < 0:
        raise NegativeTimeError(f"propagation time must be non-negative, got {t}")
    d, m = params.diffusion_d, params.mass
    return PropagatorCovariance(
        t,
        CovarianceMatrix2(
            c_xx=d * t**3 / (3 * m**2),
            c_xp=d * t**2 / (2 * m),
            c_pp=d * t,
        ),
    )


def _shear_support_check(w: WignerField, t: float) -> None:
    """Reject shears that would wrap occupied field content around the grid."""
    values = w.values
    peak = np.max(np.abs(values))
    row_profile = np.abs(values)
    shifts = w.momenta() * t / w.params.mass
    x = w.grid.positions()
    slack = _SUPPORT_SLACK_STEPS * w.grid.dx
    occupied_cols = np.nonzero(row_profile.max(axis=0) > _OCCUPANCY_EPS * peak)[0]
    if np.max(np.abs(shifts[occupied_cols])) > 0.5 * w.grid.span + slack:
        raise SupportError("transport exceeds half the grid span")
    for k in occupied_cols:
        col = row_profile[:, k]
        idx = np.nonzero(col > _OCCUPANCY_EPS * peak)[0]
        lo = x[idx[0]] + shifts[k]
        hi = x[idx[-1]] + shifts[k]
        if hi > w.grid.x_max + slack or lo < w.grid.x_min - slack:
            raise SupportError(
                f"sheared support [{lo:.2f}, {hi:.2f}] at p = {w.momenta()[k]:.2f} "
                f"leaks off the grid [{w.grid.x_min}, {w.grid.x_max}]"
            )


def _shear(w: WignerField, t: float) -> np.ndarray:
    """W(x - p t / m, p) via a spectral phase ramp along x."""
    n = w.grid.n_points
    kx = 2 * np.pi * np.fft.fftfreq(n, d=w.grid.dx)
    shifts = w.momenta() * t / w.params.mass
    phase = np.exp(-1j * np.outer(kx, shifts))
    return np.fft.ifft(np.fft.fft(w.values, axis=0) * phase, axis=0).real


def evolve_exact(w0: WignerField, t: float) -> WignerField:
    """Closed-form propagation of a field to time ``t``.

    Applies the shear ``x -> x - p t / m`` (exact spectral translation per
    momentum row) and then coarse-grains with ``C_W(t)``.  ``t = 0``
    returns the input unchanged.

    Raises
    ------
    SupportError
        if the sheared support would wrap around the grid.
    KernelTooWideError
        if the accumulated covariance no longer fits the grid.
    """
    if t < 0:
        raise NegativeTimeError(f"propagation time must be non-negative, got {t}")
    if t == 0:
        return w0
    _shear_support_check(w0, t)
    sheared = WignerField(w0.grid, w0.params, _shear(w0, t))
    return coarse_grain(sheared, propagator_covariance(t, w0.params).matrix)


def fd_stable_dt(w: WignerField) -> float:
    """Largest stable explicit step: ``min(0.5 dx m / max|p|, 0.25 dp^2 / D)``."""
    p_max = float(np.max(np.abs(w.momenta())))
    return min(
        0.5 * w.grid.dx * w.params.mass / p_max,
        0.25 * w.dp**2 / w.params.diffusion_d,
    )


def evolve_fd(w0: WignerField, t: float, dt: float | None = None) -> WignerField:
    """Explicit finite-difference integration of the phase-space equation.

    First-order upwind transport in x (velocity ``p/m`` per row) and
    second-order central diffusion in p, both in conservative flux form
    with zero boundary fluxes, so the total mass is conserved to rounding.
    ``dt = None`` uses the stability-limited step.

    Raises
    ------
    StabilityError
        if an explicit ``dt`` violates the stability bounds.
    """
    if t < 0:
        raise NegativeTimeError(f"propagation time must be non-negative, got {t}")
    if t == 0:
        return w0
    limit = fd_stable_dt(w0)
    if dt is None:
        dt = limit
    elif dt > limit * (1 + 1e-12):
        raise StabilityError(f"dt = {dt:g} exceeds the stability limit {limit:g}")
    n_steps = int(np.ceil(t / dt - 1e-12))
    dt = t / n_steps
    u = w0.momenta() / w0.params.mass
    u_plus = np.maximum(u, 0.0)[None, :]
    u_minus = np.minimum(u, 0.0)[None, :]
    r_dif = 0.5 * w0.params.diffusion_d * dt / w0.dp**2
    r_adv = dt / w0.grid.dx
    w = w0.values.copy()
    for _ in range(n_steps):
        flux = u_plus * w[:-1, :] + u_minus * w[1:, :]
        gradp = w[:, 1:] - w[:, :-1]
        w[:-1, :] -= r_adv * flux
        w[1:, :] += r_adv * flux
        w[:, :-1] += r_dif * gradp
        w[:, 1:] -= r_dif * gradp
    return WignerField(w0.grid, w0.params, w)


def _momentum_phase(grid, params: PhysicalParams, dt: float) -> np.ndarray:
    p = params.hbar * grid.wavenumbers()
    return np.exp(-1j * (p[:, None] ** 2 - p[None, :] ** 2) * dt / (2 * params.mass * params.hbar))


def kinetic_step(rho: np.ndarray, grid, params: PhysicalParams, dt: float) -> np.ndarray:
    """Exact free flow of the density matrix over ``dt``: diagonal phase in
    the double momentum representation."""
    phase = _momentum_phase(grid, params, dt)
    tilde = np.fft.ifft(np.fft.fft(rho, axis=0), axis=1)
    tilde *= phase
    return np.fft.ifft(np.fft.fft(tilde, axis=1), axis=0)


def decoherence_step(rho: np.ndarray, grid, params: PhysicalParams, dt: float) -> np.ndarray:
    """Exact decoherence flow over ``dt``: Gaussian damping of
    off-diagonals, ``rho(x, x') *= exp(-D (x - x')^2 dt / 2 hbar^2)``."""
    sep = (np.arange(grid.n_points)[:, None] - np.arange(grid.n_points)[None, :]) * grid.dx
    return rho * np.exp(-params.diffusion_d * sep**2 * dt / (2 * params.hbar**2))


def evolve_density_trotter(
    rho0: DensityMatrix, t: float, dt: float, params: PhysicalParams
) -> DensityMatrix:
    """Split-step density-matrix propagation.

    Alternates the exact kinetic flow and the exact decoherence flow in a
    symmetric (kinetic-half at the ends) arrangement, so each factor is the
    exact flow of its own generator and the error is pure splitting error.
    Trace and Hermiticity are preserved to rounding.

    Requires ``dt <= t0 / 200``.
    """
    if t < 0:
        raise NegativeTimeError(f"propagation time must be non-negative, got {t}")
    if t == 0:
        return rho0
    t0 = scales(params).t0
    if dt > t0 / 200 * (1 + 1e-12):
        raise StepSizeError(f"dt = {dt:g} exceeds t0/200 = {t0 / 200:g}")
    n_steps = int(round(t / dt))
    n_steps = max(n_steps, 1)
    dt = t / n_steps
    grid = rho0.grid
    rho = kinetic_step(rho0.entries, grid, params, dt / 2)
    for step in range(n_steps):
        rho = decoherence_step(rho, grid, params, dt)
        rho = kinetic_step(rho, grid, params, dt if step < n_steps - 1 else dt / 2)
    return DensityMatrix(grid, _hermitize(rho))


def montecarlo_trajectories(
    psi0: WaveFunction,
    t: float,
    dt: float,
    n_samples: int,
    seed: int,
    params: PhysicalParams,
) -> np.ndarray:
    """Pure-state trajectories under a white-noise linear force, one per row.

    Each trajectory solves the free Schroedinger equation with a potential
    ``F x``, where ``F`` is piecewise constant per step with variance
    ``D / dt`` (a fluctuating force of strength ``sqrt(D)``).
    Trajectory ``k`` draws from its own counter-based stream keyed on
    ``(seed, k)``, so row ``k`` depends only on ``(seed, k)`` and the
    result is bit-identical regardless of the worker-thread count.
    """
    if n_samples < 100:
        raise StepSizeError(f"n_samples = {n_samples} below the minimum of 100")
    if t < 0:
        raise NegativeTimeError(f"propagation time must be non-negative, got {t}")
    t0 = scales(params).t0
    if dt > t0 / 100 * (1 + 1e-12):
        raise StepSizeError(f"dt = {dt:g} exceeds t0/100 = {t0 / 100:g}")
    grid = psi0.grid
    n = grid.n_points
    n_steps = max(int(round(t / dt)), 1)
    dt = t / n_steps
    x = grid.positions()
    kin_half = np.exp(
        -1j * (params.hbar * grid.wavenumbers()) ** 2 * dt / (4 * params.mass * params.hbar)
    )
    kin_full = kin_half**2
    force_scale = np.sqrt(params.diffusion_d / dt)

    chunk = 256
    starts = range(0, n_samples, chunk)

    def run_chunk(start: int) -> np.ndarray:
        stop = min(start + chunk, n_samples)
        forces = np.empty((stop - start, n_steps))
        for k in range(start, stop):
            gen = np.random.Generator(np.random.Philox(key=np.array([seed, k], dtype=np.uint64)))
            forces[k - start] = gen.standard_normal(n_steps) * force_scale
        psi = np.broadcast_to(psi0.amplitudes, (stop - start, n)).copy()
        psi = np.fft.ifft(np.fft.fft(psi, axis=1) * kin_half, axis=1)
        for s in range(n_steps):
            psi *= np.exp(-1j * np.outer(forces[:, s], x) * dt / params.hbar)
            psi = np.fft.ifft(
                np.fft.fft(psi, axis=1) * (kin_full if s < n_steps - 1 else kin_half), axis=1
            )
        return psi

    workers = thread_count()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run_chunk, starts))
    else:
        chunks = [run_chunk(s) for s in starts]
    return np.concatenate(chunks, axis=0)


def evolve_montecarlo(
    psi0: WaveFunction,
    t: float,
    dt: float,
    n_samples: int,
    seed: int,
    params: PhysicalParams,
) -> DensityMatrix:
    """Trajectory-averaged density matrix ``mean_k |psi_k><psi_k|``.

    The projector average accumulates in fixed index order (chunks of 256
    trajectories), so a fixed seed gives a bit-identical matrix across runs
    and thread counts.
    """
    trajectories = montecarlo_trajectories(psi0, t, dt, n_samples, seed, params)
    n = psi0.grid.n_points
    rho = np.zeros((n, n), dtype=complex)
    for start in range(0, n_samples, 256):
        block = trajectories[start : start + 256]
        rho += np.einsum("ki,kj->ij", block, block.conj())
    rho /= n_samples
    return DensityMatrix(psi0.grid, _hermitize(rho))


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a positivity scan.

    ``trace`` holds one ``(t, min_value, relative_floor, det_cw)`` row per
    grid time.  ``multiple_crossings`` flags a non-monotone floor; in that
    case ``first_nonneg_time`` is the last crossing, since the scan reports
    the onset of permanent positivity.
    """

    first_nonneg_time: float
    trace: list[tuple[float, float, float, float]]
    multiple_crossings: bool


def decoherence_scan(
    w0: WignerField, t_max: float, n_steps: int
) -> ScanResult:
    """Locate the earliest time from which the evolved field stays
    non-negative (relative floor above -1e-9).

    Evaluates :func:`evolve_exact` at ``n_steps`` uniformly spaced times
    (each one-shot from ``w0``), then refines the bracketing pair by
    bisection to ``1e-3 * t0``.  ``t_max`` must be at least ``t_D``.

    Raises
    ------
    NeverPositiveError
        if the field is still negative at ``t_max``.
    """
    sc = scales(w0.params)
    if t_max < sc.tD:
        raise ValidationFailure(f"t_max = {t_max:g} below the guaranteed positivity time {sc.tD:g}")
    if n_steps < 2:
        raise ValidationFailure("scan needs at least two time samples")
    times = np.linspace(0.0, t_max, n_steps)

    def floor_at(t: float) -> tuple[float, float]:
        field = evolve_exact(w0, float(t))
        mn = float(field.values.min())
        return mn, mn / float(np.max(np.abs(field.values)))

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            floors = list(pool.map(floor_at, times))
    else:
        floors = [floor_at(t) for t in times]

    trace = [
        (float(t), mn, rel, propagator_covariance(float(t), w0.params).matrix.det)
        for t, (mn, rel) in zip(times, floors)
    ]
    ok = np.array([rel >= POSITIVITY_FLOOR for _, rel in floors])
    if not ok[-1]:
        raise NeverPositiveError(f"field still negative at t_max = {t_max:g}")
    crossings = [j for j in range(1, n_steps) if ok[j] and not ok[j - 1]]
    multiple = len(crossings) > 1 or bool(ok[0] and not ok.all())
    if ok.all():
        return ScanResult(0.0, trace, False)
    last = crossings[-1]
    lo, hi = float(times[last - 1]), float(times[last])
    tol = 1e-3 * sc.t0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if floor_at(mid)[1] >= POSITIVITY_FLOOR:
            hi = mid
        else:
            lo = mid
    return ScanResult(hi, trace, multiple)
