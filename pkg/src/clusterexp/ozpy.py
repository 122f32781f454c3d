"""Ornstein-Zernike equation with the Percus-Yevick closure on a radial
grid, plus thermodynamic output.

The closure is iterated in the y-form (y = 1 + t is continuous across hard
cores): c = f y, g = e^{-beta V} y, h = g - 1, and the OZ relation
t = rho (c * h) closes the loop.  Radial convolutions go through the fast
sine transform in d = 3 (Fourier-Bessel reduces to a sine transform of
r phi(r)) and the cosine transform in d = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dst
from scipy.signal import fftconvolve

from .potentials import Kind, Potential, SURFACE_AREA


@dataclass(frozen=True)
class RadialGrid:
    dr: float = 0.005
    n_points: int = 4096
    dimension: int = 3

    def __post_init__(self):
        if self.dr <= 0 or self.n_points < 16:
            raise ValueError("need dr > 0 and a nontrivial grid")
        if self.dimension not in (1, 3):
            raise ValueError("grid dimension must be 1 or 3")

    @property
    def r(self) -> np.ndarray:
        return self.dr * np.arange(1, self.n_points + 1)

    @property
    def r_max(self) -> float:
        return self.dr * self.n_points


class _Convolver:
    """d-dimensional radial convolution by forward transform, pointwise
    product, inverse transform."""

    def __init__(self, grid: RadialGrid):
        self.grid = grid
        n, dr = grid.n_points, grid.dr
        self.r = grid.r
        self.dq = math.pi / ((n + 1) * dr)
        self.q = self.dq * np.arange(1, n + 1)

    def forward(self, phi: np.ndarray) -> np.ndarray:
        # hat(phi)(q) = (4 pi / q) int r phi sin(qr) dr
        dr = self.grid.dr
        return 2.0 * math.pi * dr * dst(self.r * phi, type=1) / self.q

    def inverse(self, phi_hat: np.ndarray) -> np.ndarray:
        return self.dq / (4.0 * math.pi ** 2 * self.r) * dst(self.q * phi_hat, type=1)

    def _even_extension(self, phi: np.ndarray) -> np.ndarray:
        """Samples on m = -n..n times dr; the missing r = 0 value is filled
        by linear extrapolation."""
        n = self.grid.n_points
        full = np.empty(2 * n + 1)
        full[n + 1:] = phi
        full[:n] = phi[::-1]
        full[n] = 2.0 * phi[0] - phi[1]
        return full

    def convolve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.grid.dimension == 3:
            return self.inverse(self.forward(a) * self.forward(b))
        # d = 1: linear convolution of the even extensions on the full line
        n = self.grid.n_points
        out = fftconvolve(self._even_extension(a), self._even_extension(b))
        return self.grid.dr * out[2 * n + 1:3 * n + 1]


@dataclass
class RadialFunctions:
    grid: RadialGrid
    rho: float
    beta: float
    h: np.ndarray = field(repr=False, default=None)
    c: np.ndarray = field(repr=False, default=None)
    t: np.ndarray = field(repr=False, default=None)
    g: np.ndarray = field(repr=False, default=None)
    y: np.ndarray = field(repr=False, default=None)
    iterations: int = 0
    residual: float = math.inf
    converged: bool = False
    negative_g: bool = False


class NonConvergence(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        super().__init__(f"PY iteration stalled at residual {residual:g} "
                         f"after {iterations} iterations")
        self.residual = residual
        self.iterations = iterations


def solve_py(p: Potential, rho: float, grid: RadialGrid | None = None,
             alpha: float = 0.5, tol: float = 1e-10,
             max_iter: int = 20_000) -> RadialFunctions:
    """Percus-Yevick fixed point y = 1 + rho [f y] * [e^{-beta V} y - 1].

    Picard iteration on t with mixing alpha; raises NonConvergence when the
    residual stops improving past max_iter.
    """
    if grid is None:
        grid = RadialGrid(dimension=p.dimension if p.dimension in (1, 3) else 3)
    if grid.dimension != p.dimension:
        raise ValueError("grid dimension must match the potential")
    if grid.r_max < 10.0 * p.sigma:
        raise ValueError("grid must extend to at least 10 sigma")
    r = grid.r
    f = np.asarray(p.mayer_f(r), dtype=float)
    boltz = 1.0 + f
    conv = _Convolver(grid)

    t = np.zeros_like(r)
    residual = math.inf
    for it in range(1, max_iter + 1):
        y = 1.0 + t
        c = f * y
        h = boltz * y - 1.0
        t_new = rho * conv.convolve(c, h)
        residual = float(np.max(np.abs(t_new - t)))
        t = (1.0 - alpha) * t + alpha * t_new
        if residual < tol:
            break
    else:
        raise NonConvergence(residual, max_iter)

    y = 1.0 + t
    sol = RadialFunctions(grid=grid, rho=rho, beta=p.beta)
    sol.t = t
    sol.y = y
    sol.c = f * y
    sol.g = boltz * y
    sol.h = sol.g - 1.0
    sol.iterations = it
    sol.residual = residual
    sol.converged = True
    sol.negative_g = bool(np.any(sol.g < -1e-12))
    return sol


def oz_selfconsistency(p: Potential, sol: RadialFunctions) -> float:
    """max |h - c - rho (c*h)| on the grid."""
    conv = _Convolver(sol.grid)
    return float(np.max(np.abs(sol.h - sol.c - sol.rho * conv.convolve(sol.c, sol.h))))


def _boltzmann_jumps(p: Potential) -> list[tuple[float, float]]:
    """(radius, jump of e^{-beta V} across it), inner to outer."""
    jumps = []
    if p.kind in (Kind.HARD_ROD, Kind.HARD_SPHERE):
        jumps.append((p.sigma, 1.0))
    elif p.kind is Kind.SQUARE_WELL:
        e_well = math.exp(p.beta * p.epsilon)
        jumps.append((p.sigma, e_well))
        jumps.append((p.lam * p.sigma, 1.0 - e_well))
    return jumps


def _interp(r: np.ndarray, a: np.ndarray, x: float) -> float:
    return float(np.interp(x, r, a))


def thermodynamics(p: Potential, sol: RadialFunctions) -> dict:
    """Virial pressure, compressibility-route dP/drho and the effective
    second virial coefficient (slope of beta P / rho - 1)."""
    grid = sol.grid
    r = grid.r
    d = grid.dimension
    sd = SURFACE_AREA[d]
    rho = sol.rho

    # virial route: beta P = rho + rho^2/(2d) int y(r) r d(e^{-bV})/dr dV
    jump_term = 0.0
    for radius, jump in _boltzmann_jumps(p):
        # evaluate y just outside the jump to avoid the grid point on it
        yj = _interp(r, sol.y, radius + 0.5 * grid.dr)
        jump_term += sd * radius ** d * jump * yj
    smooth_term = 0.0
    if p.kind is Kind.LENNARD_JONES:
        v = np.asarray(p.v(r))
        dv = np.gradient(v, r)
        integrand = -p.beta * dv * sol.g * r ** d * sd
        integrand[~np.isfinite(integrand)] = 0.0
        smooth_term = float(np.trapezoid(integrand, r))
    pressure = rho + rho ** 2 / (2.0 * d) * (jump_term + smooth_term)

    c_hat0 = sd * float(np.trapezoid(sol.c * r ** (d - 1), r))
    compressibility = 1.0 - rho * c_hat0

    b2_eff = (pressure / rho - 1.0) / rho if rho > 0 else 0.0
    return {
        "pressure_virial": pressure,
        "compressibility_factor": compressibility,
        "B2_effective": b2_eff,
    }


def b2_effective(p: Potential, grid: RadialGrid | None = None,
                 rho: float = 1e-4) -> float:
    """Second virial coefficient from the rho -> 0 slope of the virial
    pressure."""
    sol = solve_py(p, rho, grid=grid)
    return thermodynamics(p, sol)["B2_effective"]


def closure_remainder(p: Potential, sol: RadialFunctions, r_points,
                      c2_orders) -> np.ndarray:
    """m(r) = c_series(r) - f(r)(1 + t(r)): the part of the direct
    correlation the PY closure drops.

    c2_orders[k][i] is the order-k density coefficient of c^(2) at
    r_points[i] (from the correlations module); the truncated series stands
    in for the exact c.  PY reproduces c through first order in density, so
    m = O(rho^2); that scaling is the testable property.
    """
    r_points = np.asarray(r_points, dtype=float)
    f = np.asarray(p.mayer_f(r_points), dtype=float)
    c_series = np.zeros_like(r_points)
    for k, ck in enumerate(c2_orders):
        c_series += sol.rho ** k * np.asarray(ck, dtype=float)
    t_at = np.interp(r_points, sol.grid.r, sol.t)
    return c_series - f * (1.0 + t_at)
