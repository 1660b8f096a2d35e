"""Independent oracles the tests check the library against.

Everything here is deliberately implemented by a different route than the
package: explicit DFT matrices instead of FFTs, closed forms instead of
grid pipelines, and brute-force quadrature instead of spectral convolution.
"""
import numpy as np


def direct_wigner(rho_entries, grid, hbar):
    """Double-sum quadrature of the phase-space map.

    For each center x_i the correlation slice rho(x_i - r/2, x_i + r/2) is
    summed against an explicit Fourier matrix over the offsets r (step
    2*dx), with the 1/(2 pi hbar) prefactor.
    """
    n = grid.n_points
    dx = grid.dx
    p = grid.wigner_momenta(hbar)
    r = (np.arange(n) - n // 2) * 2 * dx
    c = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for m in range(n):
            a = i - (m - n // 2)
            b = i + (m - n // 2)
            if 0 <= a < n and 0 <= b < n:
                c[i, m] = rho_entries[a, b]
    kernel = np.exp(1j * np.outer(r, p) / hbar)
    return (c @ kernel).real * (2 * dx) / (2 * np.pi * hbar)


def analytic_gaussian_wigner(x, p, x0, p0, sigma, hbar):
    xx, pp = np.meshgrid(x, p, indexing="ij")
    return (1 / (np.pi * hbar)) * np.exp(
        -((xx - x0) ** 2) / (2 * sigma**2) - 2 * sigma**2 * (pp - p0) ** 2 / hbar**2
    )


def analytic_cat_wigner(x, p, x0, sigma, phase, hbar):
    """Closed form for the symmetric two-packet superposition: two shifted
    Gaussian lobes plus a cosine interference ridge at the midpoint."""
    xx, pp = np.meshgrid(x, p, indexing="ij")
    norm2 = 1.0 / (2 * (1 + np.cos(phase) * np.exp(-(x0**2) / (2 * sigma**2))))
    envelope_p = np.exp(-2 * sigma**2 * pp**2 / hbar**2)
    lobes = (
        np.exp(-((xx - x0) ** 2) / (2 * sigma**2))
        + np.exp(-((xx + x0) ** 2) / (2 * sigma**2))
    )
    fringe = 2 * np.exp(-(xx**2) / (2 * sigma**2)) * np.cos(2 * x0 * pp / hbar + phase)
    return norm2 / (np.pi * hbar) * envelope_p * (lobes + fringe)


def analytic_smoothed_cat(x, p, x0, sigma, phase, cx, cp, hbar):
    """Cat Wigner convolved with a diagonal Gaussian kernel diag(cx, cp).

    Each Gaussian factor widens (variance adds) and the interference cosine
    is damped by exp(-vp*cp*w^2 / (2*(vp+cp))) with its wavenumber rescaled
    by vp/(vp+cp).
    """
    xx, pp = np.meshgrid(x, p, indexing="ij")
    vx = sigma**2
    vp = hbar**2 / (4 * sigma**2)
    w = 2 * x0 / hbar
    norm2 = 1.0 / (2 * (1 + np.cos(phase) * np.exp(-(x0**2) / (2 * sigma**2))))
    amp = np.sqrt(vx / (vx + cx)) * np.sqrt(vp / (vp + cp))
    env_p = np.exp(-(pp**2) / (2 * (vp + cp)))
    lobes = np.exp(-((xx - x0) ** 2) / (2 * (vx + cx))) + np.exp(
        -((xx + x0) ** 2) / (2 * (vx + cx))
    )
    damping = np.exp(-vp * cp * w**2 / (2 * (vp + cp)))
    fringe = (
        2
        * damping
        * np.exp(-(xx**2) / (2 * (vx + cx)))
        * np.cos(pp * vp * w / (vp + cp) + phase)
    )
    return norm2 / (np.pi * hbar) * amp * env_p * (lobes + fringe)


def smoothed_value_by_quadrature(w_fn, cov, x_star, p_star, x_lim, p_lim, n_quad=1200):
    """Brute-force convolution quadrature of an analytic field at one point.

    ``w_fn(x, p)`` is evaluated on a fine mesh, multiplied by the sampled
    Gaussian kernel centered at (x_star, p_star), and Riemann-summed.
    """
    xs = np.linspace(-x_lim, x_lim, n_quad)
    ps = np.linspace(-p_lim, p_lim, n_quad)
    dxq = xs[1] - xs[0]
    dpq = ps[1] - ps[0]
    xx, pp = np.meshgrid(xs, ps, indexing="ij")
    du = np.stack([x_star - xx, p_star - pp])
    inv = np.linalg.inv(cov)
    quad = (
        inv[0, 0] * du[0] ** 2 + 2 * inv[0, 1] * du[0] * du[1] + inv[1, 1] * du[1] ** 2
    )
    kernel = np.exp(-0.5 * quad) / (2 * np.pi * np.sqrt(np.linalg.det(cov)))
    return float(np.sum(kernel * w_fn(xx, pp)) * dxq * dpq)


def evolved_value_by_quadrature(w0_fn, t, mass, cov, x_star, p_star, x_lim, p_lim, n_quad=1200):
    """Brute-force evaluation of the sheared-then-smoothed field at one
    point, using the analytic initial field ``w0_fn``."""
    return smoothed_value_by_quadrature(
        lambda xx, pp: w0_fn(xx - pp * t / mass, pp),
        cov,
        x_star,
        p_star,
        x_lim,
        p_lim,
        n_quad,
    )


def momentum_diagonal(rho_entries, grid, hbar):
    """<p_k|rho|p_k> on the field momentum grid, by an explicit double
    Fourier sum over both matrix indices."""
    x = grid.positions()
    p = grid.wigner_momenta(hbar)
    e = np.exp(-1j * np.outer(p, x) / hbar)
    transformed = e @ rho_entries @ e.conj().T
    return np.diag(transformed).real * grid.dx**2 / (2 * np.pi * hbar)


def free_packet_variance(sigma, t, hbar, mass):
    """Position variance of a freely spreading minimum-uncertainty packet."""
    return sigma**2 + (hbar * t / (2 * sigma * mass)) ** 2


def evolved_position_variance(sigma, t, hbar, mass, diffusion_d):
    """Free spreading plus the diffusion contribution t^3 D / (3 m^2)."""
    return free_packet_variance(sigma, t, hbar, mass) + diffusion_d * t**3 / (3 * mass**2)


def coherence_decay_factor(separation, t, diffusion_d, hbar):
    """Off-diagonal damping exp(-D (dx)^2 t / (2 hbar^2))."""
    return np.exp(-diffusion_d * separation**2 * t / (2 * hbar**2))
