"""Empirical characteristic function, spectral cutoff and thresholded estimators.

The ECF on a symmetric frequency grid is

    phi_hat(u) = (1/n) sum_j exp(i u x_j),

computed by direct summation (exact up to float rounding, O(n |grid|)).  The
density estimators invert it by the trapezoid rule,

    f_hat(x)   = Re (1/2pi) int_{-m}^{m} phi_hat(u) e^{-iux} du,

either with a hard cutoff m or after thresholding the ECF at the level
(1 + kappa sqrt(log n)) / sqrt(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sampling import IncrementSample

__all__ = ["UGrid", "ECFGrid", "ThresholdSpec", "SpectralEstimate", "ecf",
           "spectral_estimate", "threshold_cf", "adaptive_estimate",
           "optimal_cutoff", "mixed_cutoff", "plancherel_l2", "default_u_max",
           "default_u_step", "default_x_grid", "write_estimate_csv",
           "write_ecf_csv"]


def default_u_max(delta_t: float) -> float:
    """Estimation domain half-width: 10/delta_t clamped to [10, 100]."""
    return float(min(100.0, max(10.0, 10.0 / delta_t)))


def default_u_step(u_max: float) -> float:
    return 0.05 if u_max <= 10.0 else 0.1


@dataclass(frozen=True)
class UGrid:
    """Symmetric uniform frequency grid -u_max..u_max containing 0 exactly."""

    u_max: float
    step: float

    def __post_init__(self):
        if self.step <= 0 or self.u_max <= 0:
            raise ValueError("u_max and step must be positive")
        k = round(self.u_max / self.step)
        if k < 1 or abs(k * self.step - self.u_max) > 1e-9 * self.u_max:
            raise ValueError("u_max must be a positive integer multiple of step")

    @classmethod
    def make(cls, u_max: float, step: float | None = None) -> "UGrid":
        """Build a grid with the default step rule, snapping u_max onto it."""
        if step is None:
            step = default_u_step(u_max)
        k = max(1, round(u_max / step))
        return cls(k * step, step)

    @property
    def half_count(self) -> int:
        return round(self.u_max / self.step)

    @property
    def points(self) -> np.ndarray:
        k = self.half_count
        return np.arange(-k, k + 1) * self.step

    def restrict(self, u_max: float) -> "UGrid":
        if u_max >= self.u_max:
            return self
        return UGrid(math.floor(u_max / self.step + 1e-9) * self.step, self.step)


@dataclass(frozen=True, eq=False)
class ECFGrid:
    """Complex CF values aligned with ``grid.points``; n is the sample size."""

    grid: UGrid
    values: np.ndarray
    n: int

    def __post_init__(self):
        if len(self.values) != 2 * self.grid.half_count + 1:
            raise ValueError("values length does not match the grid")
        if self.n <= 0:
            raise ValueError("n must be positive")

    def check_invariants(self, allow_zeroed: bool = False, tol: float = 1e-12) -> None:
        k = self.grid.half_count
        v = self.values
        if not allow_zeroed and v[k] != 1.0:
            raise AssertionError("value at u=0 must be exactly 1")
        if np.max(np.abs(v)) > 1.0 + 1e-10:
            raise AssertionError("modulus must not exceed 1")
        if np.max(np.abs(v[:k][::-1] - np.conj(v[k + 1:]))) > tol:
            raise AssertionError("conjugate symmetry violated")


@dataclass(frozen=True)
class ThresholdSpec:
    """Threshold level (1 + kappa sqrt(log n)) / sqrt(n) for an ECF of size n."""

    kappa: float
    n: int

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def kappa_n(self) -> float:
        return 1.0 + self.kappa * math.sqrt(math.log(self.n))

    @property
    def level(self) -> float:
        return self.kappa_n / math.sqrt(self.n)


@dataclass(frozen=True, eq=False)
class SpectralEstimate:
    """Density values on an x-grid plus the cutoff/threshold that produced them."""

    x_grid: np.ndarray
    values: np.ndarray
    cutoff_m: float | None = None
    threshold: ThresholdSpec | None = None
    imag_residual: float = 0.0


# ---------------------------------------------------------------------------
# ECF

_REFRESH = 64  # recompute the phase product every this many grid steps


def _ecf_half(values: np.ndarray, count: int, step: float) -> np.ndarray:
    """phi_hat at u = k*step for k = 0..count, by incremental phase products.

    Equivalent to direct summation of exp(i k step x); the running product is
    refreshed periodically so rounding drift stays below ~1e-13.
    """
    out = np.empty(count + 1, dtype=np.complex128)
    out[0] = 1.0
    base = np.exp(1j * step * values)
    prod = np.ones_like(base)
    for k in range(1, count + 1):
        if k % _REFRESH == 0:
            np.exp(1j * (k * step) * values, out=prod)
        else:
            np.multiply(prod, base, out=prod)
        out[k] = prod.mean()
    return out


def ecf(sample: IncrementSample, grid: UGrid) -> ECFGrid:
    """Empirical characteristic function of the sample on the grid.

    Only the nonnegative half-axis is summed; the negative half is filled by
    conjugate symmetry, so phi_hat(0) = 1 exactly and phi_hat(-u) =
    conj(phi_hat(u)) exactly.
    """
    if sample.n == 0:
        raise ValueError("sample must be nonempty")
    half = _ecf_half(np.asarray(sample.values, dtype=float), grid.half_count, grid.step)
    vals = np.concatenate([np.conj(half[:0:-1]), half])
    return ECFGrid(grid, vals, sample.n)


# ---------------------------------------------------------------------------
# inversion

def default_x_grid(values: np.ndarray, points: int = 512, spread: float = 8.0) -> np.ndarray:
    """Uniform x-grid spanning +-spread interquartile ranges of the sample."""
    q75, q25 = np.percentile(values, [75.0, 25.0])
    iqr = q75 - q25
    if iqr <= 0:
        iqr = max(float(np.std(values)), 1.0)
    return np.linspace(-spread * iqr, spread * iqr, points)


def _invert(u: np.ndarray, phi: np.ndarray, x_grid: np.ndarray, step: float,
            chunk: int = 256):
    """Trapezoid rule for (1/2pi) int phi(u) e^{-iux} du at each x."""
    w = np.full(u.size, step)
    w[0] *= 0.5
    w[-1] *= 0.5
    wphi = phi * w / (2.0 * math.pi)
    out = np.empty(x_grid.size, dtype=np.complex128)
    for lo in range(0, x_grid.size, chunk):
        xs = x_grid[lo:lo + chunk]
        out[lo:lo + chunk] = np.exp(-1j * np.outer(xs, u)) @ wphi
    return out


def spectral_estimate(ecf_grid: ECFGrid, m: float, x_grid) -> SpectralEstimate:
    """Cutoff estimator: invert the ECF restricted to frequencies |u| <= m."""
    if m <= 0:
        raise ValueError("cutoff m must be positive")
    if m > ecf_grid.grid.u_max * (1 + 1e-12):
        raise ValueError(f"cutoff m={m} exceeds the grid domain u_max={ecf_grid.grid.u_max}")
    x_grid = np.asarray(x_grid, dtype=float)
    u = ecf_grid.grid.points
    keep = np.abs(u) <= m * (1 + 1e-12)
    f = _invert(u[keep], ecf_grid.values[keep], x_grid, ecf_grid.grid.step)
    return SpectralEstimate(x_grid, f.real, cutoff_m=m,
                            imag_residual=float(np.max(np.abs(f.imag))))


def threshold_cf(ecf_grid: ECFGrid, spec: ThresholdSpec) -> ECFGrid:
    """Zero the ECF wherever its modulus falls below the threshold level."""
    if spec.n != ecf_grid.n:
        raise ValueError("threshold spec and ECF disagree on the sample size n")
    kept = np.abs(ecf_grid.values) >= spec.level
    return ECFGrid(ecf_grid.grid, np.where(kept, ecf_grid.values, 0.0), ecf_grid.n)


def adaptive_estimate(sample: IncrementSample, kappa: float,
                      grid: UGrid | None = None, x_grid=None) -> SpectralEstimate:
    """Thresholded estimator: invert the ECF kept above the kappa level.

    The integration domain [-n, n] is intersected with the configured grid;
    in practice u_max << n so the grid wins.
    """
    if grid is None:
        grid = UGrid.make(default_u_max(sample.delta_t))
    grid = grid.restrict(float(sample.n))
    if x_grid is None:
        x_grid = default_x_grid(sample.values)
    x_grid = np.asarray(x_grid, dtype=float)
    spec = ThresholdSpec(kappa, sample.n)
    phi = threshold_cf(ecf(sample, grid), spec)
    f = _invert(grid.points, phi.values, x_grid, grid.step)
    return SpectralEstimate(x_grid, f.real, threshold=spec,
                            imag_residual=float(np.max(np.abs(f.imag))))


# ---------------------------------------------------------------------------
# cutoffs

def optimal_cutoff(model_class, sigma2: float, n: float, delta_t: float) -> float:
    """Cutoff balancing squared bias against the variance proxy m/(pi n).

    Gaussian-dominant: sqrt(log n / (delta_t sigma^2)).
    Pure-jump:        (pi/2) (log n / (M delta_t))^(1/alpha).
    Mixed classes delegate to :func:`mixed_cutoff`.
    """
    from .models import GAUSSIAN, MIXED, PURE_JUMP  # local to avoid cycle

    if n < 2:
        raise ValueError("need n >= 2")
    if delta_t <= 0:
        raise ValueError("delta_t must be positive")
    logn = math.log(n)
    if model_class.tag == GAUSSIAN:
        if sigma2 <= 0:
            raise ValueError("gaussian-dominant class with sigma2 = 0 is inconsistent")
        return math.sqrt(logn / (delta_t * sigma2))
    if model_class.tag == PURE_JUMP:
        return (math.pi / 2.0) * (logn / (model_class.M * delta_t)) ** (1.0 / model_class.alpha)
    if model_class.tag == MIXED:
        return mixed_cutoff(sigma2, model_class.M, model_class.alpha, delta_t, n)
    raise ValueError(f"unknown class tag {model_class.tag!r}")


def mixed_cutoff(sigma2: float, M: float, alpha: float, delta_t: float, n: float,
                 residual_tol: float = 1e-10) -> float:
    """Positive root of sigma^2 dt m^2 + c_alpha dt m^alpha = log n, by bisection.

    c_alpha = 2 M (2/pi)^alpha.  With sigma2 = 0 or M = 0 the closed-form
    degenerate branch is returned.
    """
    if sigma2 < 0 or M < 0 or (sigma2 == 0 and M == 0):
        raise ValueError("need sigma2 >= 0, M >= 0, not both zero")
    if delta_t <= 0:
        raise ValueError("delta_t must be positive")
    logn = math.log(n)
    if logn <= 0:
        raise ValueError("need log n > 0, i.e. n > 1")
    c_alpha = 2.0 * M * (2.0 / math.pi) ** alpha
    if sigma2 == 0.0:
        return (logn / (c_alpha * delta_t)) ** (1.0 / alpha)
    if M == 0.0:
        return math.sqrt(logn / (sigma2 * delta_t))

    def g(m: float) -> float:
        return sigma2 * delta_t * m * m + c_alpha * delta_t * m ** alpha - logn

    lo, hi = 0.0, 1.0
    while g(hi) < 0:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("bisection bracket exploded")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        val = g(mid)
        if abs(val) < residual_tol:
            return mid
        if val < 0:
            lo = mid
        else:
            hi = mid
    raise ArithmeticError("bisection did not reach the residual tolerance")


def plancherel_l2(a, b, grid: UGrid | None = None) -> float:
    """(1/2pi) int |a - b|^2 over the grid, by the trapezoid rule.

    ``a`` and ``b`` are ECFGrid instances or plain arrays on ``grid``; both
    must live on the same grid.
    """
    ga = a.grid if isinstance(a, ECFGrid) else grid
    gb = b.grid if isinstance(b, ECFGrid) else grid
    if ga is None or gb is None:
        raise ValueError("plain arrays need an explicit grid")
    if ga != gb:
        raise ValueError("operands live on different grids")
    va = a.values if isinstance(a, ECFGrid) else np.asarray(a)
    vb = b.values if isinstance(b, ECFGrid) else np.asarray(b)
    if va.shape != vb.shape:
        raise ValueError("operands have different shapes")
    diff = np.abs(va - vb) ** 2
    return float(np.trapezoid(diff, dx=ga.step) / (2.0 * math.pi))


# ---------------------------------------------------------------------------
# serialization

def write_estimate_csv(est: SpectralEstimate, path, meta_lines=()) -> None:
    with open(path, "w") as fh:
        for line in meta_lines:
            fh.write(f"# {line}\n")
        fh.write("x,f_hat\n")
        for x, v in zip(est.x_grid, est.values):
            fh.write(f"{x:.17g},{v:.17g}\n")


def write_ecf_csv(ecf_grid: ECFGrid, path, meta_lines=()) -> None:
    with open(path, "w") as fh:
        for line in meta_lines:
            fh.write(f"# {line}\n")
        fh.write("u,re,im\n")
        for u, v in zip(ecf_grid.grid.points, ecf_grid.values):
            fh.write(f"{u:.17g},{v.real:.17g},{v.imag:.17g}\n")
