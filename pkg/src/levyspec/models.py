"""Levy process models: triplets, characteristic functions, closed-form bounds.

A Levy process is specified by its triplet (b, sigma^2, nu): drift, Gaussian
variance and jump measure.  The characteristic function at time t is

    phi_t(u) = exp( i t u b - t sigma^2 u^2 / 2
                    + t * int (e^{iux} - 1 - iux 1_{|x|<1}) nu(dx) ).

For stable-like jump densities

    p(x) = P / x^{1+alpha} (x > 0)  +  Q / |x|^{1+alpha} (x < 0),

the jump integral has a closed form: the increment at time t follows a stable
law in the one-parameterization

    phi(u) = exp( i delta u - gamma^alpha |u|^alpha
                  (1 - i beta tan(pi alpha / 2) sign u) ),      alpha != 1,
    phi(u) = exp( i delta u - gamma |u|
                  (1 + i beta (2/pi) sign(u) log|u|) ),         alpha  = 1,

with gamma^alpha = t (P+Q) Gamma(1-alpha) cos(pi alpha/2) / alpha (limit value
pi/2 per unit of P+Q at alpha = 1), beta = (P-Q)/(P+Q), and the location delta
fixed by the truncation term of the exponent above:

    delta = t (Q-P)/(1-alpha)            for alpha != 1,
    delta = t (P-Q)(1 - euler_gamma)     for alpha  = 1.

Everything here is a pure function of its arguments; no shared state.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

from .errors import QuadratureError
from .special import upper_incomplete_gamma

__all__ = [
    "StableJumpDensity", "CustomJumpDensity", "LevyTriplet", "StableLaw",
    "ModelClass", "levy_khintchine_cf", "increment_stable_law", "stable_cf",
    "check_small_jump_bound", "truncated_moment_ratio", "truncated_second_moment",
    "picard_cf_bound", "picard_derivative_bound", "spectral_bias_bound",
    "stable_density_l2_norm", "oscillating_density", "partition_density",
    "gamma_process_density", "cauchy_triplet",
]

GAUSSIAN = "gaussian"
PURE_JUMP = "pure-jump"
MIXED = "mixed"


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class StableJumpDensity:
    """Two-sided power-law jump density P/x^{1+alpha} (x>0), Q/|x|^{1+alpha} (x<0)."""

    P: float
    Q: float
    alpha: float

    def __post_init__(self):
        if self.P < 0 or self.Q < 0 or self.P + self.Q <= 0:
            raise ValueError("need P, Q >= 0 with P + Q > 0")
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in (0, 2), got {self.alpha}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        neg = x < 0
        out[pos] = self.P * x[pos] ** (-1.0 - self.alpha)
        out[neg] = self.Q * np.abs(x[neg]) ** (-1.0 - self.alpha)
        return out if out.ndim else float(out)

    @property
    def activity_constant(self) -> float:
        """Exact constant (P+Q)/(2-alpha) of the truncated second moment."""
        return (self.P + self.Q) / (2.0 - self.alpha)

    @property
    def skew(self) -> float:
        return (self.P - self.Q) / (self.P + self.Q)


@dataclass(frozen=True, eq=False)
class CustomJumpDensity:
    """Jump density given by a nonnegative evaluator on R \\ {0}.

    ``integrability_hint`` is the power-law exponent of the dominant
    singularity near 0 (p ~ |x|^{-1-hint}); it documents how the jump
    activity concentrates near the origin.  ``breakpoints`` lists known
    discontinuities used to split the quadrature.
    """

    evaluator: Callable[[float], float]
    integrability_hint: float = 1.0
    breakpoints: tuple = ()
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.check:
            probe = [0.37, -0.61, 1.9, -2.4, 0.013]
            for x in probe:
                v = float(self.evaluator(x))
                if v < 0 or math.isnan(v):
                    raise ValueError(f"jump density negative or nan at x={x}: {v}")
            total = _levy_mass(self)
            if not math.isfinite(total):
                raise ValueError("int min(x^2, 1) p(x) dx is not finite")

    def __call__(self, x):
        if np.ndim(x) == 0:
            return float(self.evaluator(float(x)))
        return np.array([float(self.evaluator(float(v))) for v in np.ravel(x)]).reshape(np.shape(x))


JumpDensity = Union[StableJumpDensity, CustomJumpDensity]


@dataclass(frozen=True)
class LevyTriplet:
    """Levy triplet (b, sigma^2, nu); ``jumps`` is the density of nu or None."""

    b: float
    sigma2: float
    jumps: JumpDensity | None = None

    def __post_init__(self):
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")
        if self.jumps is None and self.sigma2 == 0:
            raise ValueError("a triplet with no jumps needs sigma2 > 0 "
                             "for the increment to have a density")


@dataclass(frozen=True)
class StableLaw:
    """Stable law S(alpha, gamma, beta, delta) in the one-parameterization."""

    alpha: float
    gamma: float
    beta: float
    delta: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        if self.gamma <= 0:
            raise ValueError("scale gamma must be positive")
        if abs(self.beta) > 1:
            raise ValueError("skew beta must lie in [-1, 1]")


@dataclass(frozen=True)
class ModelClass:
    """Smoothness class of a triplet: Gaussian-dominant, pure-jump or mixed."""

    tag: str
    M: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.tag not in (GAUSSIAN, PURE_JUMP, MIXED):
            raise ValueError(f"unknown tag {self.tag!r}")
        if self.tag == GAUSSIAN:
            if self.M is not None or self.alpha is not None:
                raise ValueError("gaussian class carries no (M, alpha)")
        else:
            if self.M is None or self.M <= 0:
                raise ValueError("jump class needs M > 0")
            if self.alpha is None or not 0.0 < self.alpha < 2.0:
                raise ValueError("jump class needs alpha in (0, 2)")

    @classmethod
    def gaussian_dominant(cls) -> "ModelClass":
        return cls(GAUSSIAN)

    @classmethod
    def pure_jump(cls, M: float, alpha: float) -> "ModelClass":
        return cls(PURE_JUMP, M, alpha)

    @classmethod
    def mixed(cls, M: float, alpha: float) -> "ModelClass":
        return cls(MIXED, M, alpha)


# ---------------------------------------------------------------------------
# built-in jump densities

def oscillating_density(alpha: float = 0.5, beta: float = 1.5) -> CustomJumpDensity:
    """Symmetric density |x|^{-a-1} + |x|^{-b-1} (1 + sin(1/|x|)) / 2.

    Oscillates between the two power envelopes near 0, so it is not regularly
    varying there; the quadratures over it converge slowly.
    """
    if not 0 <= alpha < beta < 2:
        raise ValueError("need 0 <= alpha < beta < 2")

    def p0(x: float) -> float:
        ax = abs(x)
        if ax == 0.0:
            return 0.0
        return ax ** (-alpha - 1.0) + ax ** (-beta - 1.0) * (1.0 + math.sin(1.0 / ax)) / 2.0

    return CustomJumpDensity(p0, integrability_hint=beta, check=False)


def partition_density() -> CustomJumpDensity:
    """One-sided density alternating x^-2 / x^-1.5 on the dyadic-tower partition.

    With eta_k = 2^(-2^k) and I_k = (eta_{k+1}, eta_k] covering (0, 1/2], the
    density is x^-2 on odd-indexed cells and x^-1.5 on even-indexed ones.
    """
    etas = [math.pow(2.0, -(2.0 ** k)) for k in range(9)]
    floor = math.pow(2.0, -500)  # below this x^-2 overflows; the cells' mass is < 1e-75

    def p(x: float) -> float:
        if x <= floor or x > 0.5:
            return 0.0
        k = int(math.floor(math.log2(-math.log2(x))))
        return x ** -2.0 if k % 2 == 1 else x ** -1.5

    return CustomJumpDensity(p, integrability_hint=0.5, breakpoints=tuple(etas), check=False)


def gamma_process_density() -> CustomJumpDensity:
    """One-sided density e^{-x}/x; infinite activity but zero power-law index."""

    def p(x: float) -> float:
        if x <= 0.0:
            return 0.0
        return math.exp(-x) / x

    return CustomJumpDensity(p, integrability_hint=0.0, check=False)


def cauchy_triplet(scale: float = 1.0 / math.pi) -> LevyTriplet:
    """Pure-jump symmetric 1-stable triplet; increment at t has CF e^{-t|u|}."""
    return LevyTriplet(0.0, 0.0, StableJumpDensity(scale, scale, 1.0))


# ---------------------------------------------------------------------------
# quadrature helpers

def _quad_pieces(f, a: float, b: float, breakpoints: Sequence[float], rtol: float,
                 what: str):
    """Integrate f over (a, b) in (0, inf), split at |breakpoints| inside it."""
    pts = sorted({abs(p) for p in breakpoints if a < abs(p) < b})
    edges = [a] + pts + [b]
    total = 0.0
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for lo, hi in zip(edges[:-1], edges[1:]):
            v, e = quad(f, lo, hi, epsrel=rtol, epsabs=1e-300, limit=800)
            total += v
            err += e
    if math.isnan(total) or math.isinf(total):
        raise QuadratureError(f"{what}: integral diverged on ({a}, {b})",
                              value=total, residual=err)
    return total, err


def _check_residual(value: float, err: float, rtol: float, what: str) -> float:
    if err > rtol * max(abs(value), 1e-300) and err > 1e-12:
        raise QuadratureError(
            f"{what}: error estimate {err:.2e} exceeds tolerance for value {value:.6e}",
            value=value, residual=err)
    return value


def _levy_mass(p: CustomJumpDensity) -> float:
    """int min(x^2, 1) p(x) dx, loose tolerance; finiteness check only."""
    f2 = lambda x: x * x * p.evaluator(x)
    total = 0.0
    for a, b, f in ((0.0, 1.0, f2), (1.0, np.inf, p.evaluator)):
        v, _ = _quad_pieces(f, a, b, p.breakpoints, 1e-6, "levy mass")
        w, _ = _quad_pieces(lambda x: f(-x), a, b, p.breakpoints, 1e-6, "levy mass")
        total += v + w
    return total


def truncated_second_moment(density: JumpDensity, eta: float, rtol: float = 1e-8) -> float:
    """int_{-eta}^{eta} x^2 p(x) dx by adaptive quadrature."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    brk = getattr(density, "breakpoints", ())
    f = lambda x: x * x * float(density(x))
    pos, ep = _quad_pieces(f, 0.0, eta, brk, rtol, "truncated second moment")
    neg, en = _quad_pieces(lambda x: f(-x), 0.0, eta, brk, rtol,
                           "truncated second moment")
    return _check_residual(pos + neg, ep + en, 50 * rtol, f"truncated second moment at eta={eta}")


# ---------------------------------------------------------------------------
# characteristic functions

def _stable_scale_constant(P: float, Q: float, alpha: float) -> float:
    """(P+Q) Gamma(1-alpha) cos(pi alpha/2) / alpha, with its alpha=1 limit."""
    if alpha == 1.0:
        return (math.pi / 2.0) * (P + Q)
    return (P + Q) * math.gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2.0) / alpha


def _stable_jump_exponent(jumps: StableJumpDensity, u: np.ndarray) -> np.ndarray:
    """Closed form of int (e^{iux} - 1 - iux 1_{|x|<1}) p(x) dx for stable p."""
    P, Q, alpha = jumps.P, jumps.Q, jumps.alpha
    beta = jumps.skew
    c = _stable_scale_constant(P, Q, alpha)
    au = np.abs(u)
    sg = np.sign(u)
    if alpha == 1.0:
        lg = np.where(au > 0, np.log(np.where(au > 0, au, 1.0)), 0.0)
        drift = (P - Q) * (1.0 - np.euler_gamma)
        return (-c * au * (1.0 + 1j * beta * (2.0 / math.pi) * sg * lg)
                + 1j * u * drift)
    drift = (Q - P) / (1.0 - alpha)
    return (-c * au ** alpha * (1.0 - 1j * beta * math.tan(math.pi * alpha / 2.0) * sg)
            + 1j * u * drift)


def _custom_jump_exponent(jumps: CustomJumpDensity, u: float, rtol: float) -> complex:
    """int (e^{iux} - 1 - iux 1_{|x|<1}) p(x) dx for a black-box density.

    The compensated integrand is handled by adaptive quadrature on (0, 1);
    the oscillatory tails use Fourier-weighted quadrature (QUADPACK QAWF).
    """
    if u == 0.0:
        return 0.0 + 0.0j
    p = jumps.evaluator
    brk = list(jumps.breakpoints) + [math.pi / (2.0 * abs(u))]

    def branch(sign: float):
        dens = lambda x: float(p(sign * x))
        re_in = lambda x: (math.cos(u * sign * x) - 1.0) * dens(x)
        im_in = lambda x: (math.sin(u * sign * x) - u * sign * x) * dens(x)
        val = 0.0
        ival = 0.0
        err = 0.0
        for f, acc in ((re_in, "re"), (im_in, "im")):
            r, e = _quad_pieces(f, 0.0, 1.0, brk, rtol, "jump exponent")
            err += e
            if acc == "re":
                val += r
            else:
                ival += r
        # tails: int_1^inf cos(ux) p - int_1^inf p, and int_1^inf sin(ux) p
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            c, e1 = quad(dens, 1.0, np.inf, weight="cos", wvar=u * sign, limit=400)
            s, e2 = quad(dens, 1.0, np.inf, weight="sin", wvar=u * sign, limit=400)
            mass, e3 = _quad_pieces(dens, 1.0, np.inf, brk, rtol, "jump mass")
        val += c - mass
        ival += s
        err += e1 + e2 + e3
        return val + 1j * ival, err

    vp, ep = branch(1.0)
    vn, en = branch(-1.0)
    val = vp + vn
    err = ep + en
    # modulus of the CF is <= 1, so errors are judged on an O(1) scale
    if err > 1000 * rtol * max(abs(val), 1.0):
        raise QuadratureError(
            f"jump exponent at u={u}: error estimate {err:.2e} too large",
            value=val, residual=err)
    return val


def levy_khintchine_cf(triplet: LevyTriplet, t: float, u, rtol: float = 1e-8):
    """Characteristic function E[e^{iuX_t}] of the increment at time t.

    Stable jump densities use the closed-form exponent; custom densities are
    integrated numerically (split at 0 and +-1 plus any declared breakpoints).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    expo = 1j * u_arr * (triplet.b * t) - t * triplet.sigma2 * u_arr ** 2 / 2.0
    if isinstance(triplet.jumps, StableJumpDensity):
        expo = expo + t * _stable_jump_exponent(triplet.jumps, u_arr)
    elif isinstance(triplet.jumps, CustomJumpDensity):
        vals = np.array([_custom_jump_exponent(triplet.jumps, float(x), rtol)
                         for x in u_arr])
        expo = expo + t * vals
    out = np.exp(expo)
    return out if np.ndim(u) else complex(out[0])


def increment_stable_law(jumps: StableJumpDensity, delta_t: float) -> StableLaw:
    """Stable law of the increment at time delta_t of the pure-jump process.

    The location is the one produced by the Levy-Khintchine exponent with
    zero drift, so ``stable_cf`` of the result equals ``levy_khintchine_cf``
    of the triplet (0, 0, jumps).
    """
    if delta_t <= 0:
        raise ValueError("delta_t must be positive")
    alpha = jumps.alpha
    gamma = (delta_t * _stable_scale_constant(jumps.P, jumps.Q, alpha)) ** (1.0 / alpha)
    if alpha == 1.0:
        delta = (jumps.P - jumps.Q) * (1.0 - np.euler_gamma) * delta_t
    else:
        delta = (jumps.Q - jumps.P) * delta_t / (1.0 - alpha)
    return StableLaw(alpha, gamma, jumps.skew, delta)


def stable_cf(law: StableLaw, u):
    """Characteristic function of a stable law in the one-parameterization."""
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    au = np.abs(u_arr)
    sg = np.sign(u_arr)
    if law.alpha == 1.0:
        lg = np.where(au > 0, np.log(np.where(au > 0, au, 1.0)), 0.0)
        expo = (1j * law.delta * u_arr
                - law.gamma * au * (1.0 + 1j * law.beta * (2.0 / math.pi) * sg * lg))
    else:
        tan = math.tan(math.pi * law.alpha / 2.0)
        expo = (1j * law.delta * u_arr
                - law.gamma ** law.alpha * au ** law.alpha
                * (1.0 - 1j * law.beta * tan * sg))
    out = np.exp(expo)
    return out if np.ndim(u) else complex(out[0])


# ---------------------------------------------------------------------------
# class membership and bounds

def default_eta_grid(lo: float = 1e-4, hi: float = 1.0, count: int = 32) -> np.ndarray:
    return np.geomspace(lo, hi, count)


def check_small_jump_bound(density: JumpDensity, M: float, alpha: float,
                           eta_grid=None, rtol: float = 1e-8) -> bool:
    """Check int_{-eta}^{eta} x^2 p >= M eta^{2-alpha} on every grid eta.

    The comparison allows relative slack 100*rtol so that densities meeting
    the bound with equality are accepted despite quadrature error.
    """
    if M <= 0:
        raise ValueError("M must be positive")
    if not 0 < alpha < 2:
        raise ValueError("alpha must lie in (0, 2)")
    etas = default_eta_grid() if eta_grid is None else np.asarray(eta_grid, dtype=float)
    if etas.size == 0 or np.any(etas <= 0) or np.any(etas > 1):
        raise ValueError("eta grid must be nonempty with values in (0, 1]")
    slack = 100 * rtol
    for eta in etas:
        try:
            moment = truncated_second_moment(density, float(eta), rtol)
        except QuadratureError as exc:
            raise QuadratureError(f"quadrature failed at eta={eta}: {exc}",
                                  value=exc.value, residual=exc.residual) from exc
        if moment < M * eta ** (2.0 - alpha) * (1.0 - slack):
            return False
    return True


def truncated_moment_ratio(density: JumpDensity, eta: float, gamma_exp: float,
                           rtol: float = 1e-8) -> float:
    """eta^{gamma-2} * int_{-eta}^{eta} x^2 p(x) dx.

    Constant in eta exactly when the small-jump activity has index gamma_exp;
    it vanishes (diverges) as eta -> 0 when gamma_exp overshoots (undershoots)
    the activity index.
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    if not 0 < gamma_exp < 2:
        raise ValueError("gamma_exp must lie in (0, 2)")
    return eta ** (gamma_exp - 2.0) * truncated_second_moment(density, eta, rtol)


def picard_cf_bound(M: float, alpha: float, t: float, u):
    """Upper bound exp(-(2^alpha M / pi^alpha) |u|^alpha t) on |phi_t(u)|.

    Valid for |u| >= pi/2 when the jump density meets the small-jump lower
    bound with constants (M, alpha).
    """
    if M <= 0 or t <= 0 or not 0 < alpha < 2:
        raise ValueError("need M > 0, t > 0, alpha in (0, 2)")
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(np.abs(u_arr) < math.pi / 2.0 - 1e-12):
        raise ValueError("bound only valid for |u| >= pi/2")
    out = np.exp(-(2.0 ** alpha * M / math.pi ** alpha) * np.abs(u_arr) ** alpha * t)
    return out if np.ndim(u) else float(out[0])


def picard_derivative_bound(k: int, t: float, M: float, alpha: float) -> float:
    """Uniform bound on |f_t^{(k)}|: the k-th derivative of the increment density."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if M <= 0 or t <= 0 or not 0 < alpha < 2:
        raise ValueError("need M > 0, t > 0, alpha in (0, 2)")
    first = (math.pi / 2.0) ** (k + 1) / (math.pi * (k + 1))
    scale = (math.pi / (2.0 * (t * M) ** (1.0 / alpha))) ** (k + 1)
    return first + scale * upper_incomplete_gamma((k + 1) / alpha, t * M) / alpha


def spectral_bias_bound(model_class: ModelClass, sigma2: float, m: float,
                        delta_t: float) -> float:
    """Upper bound on the squared bias ||f_{t,m} - f_t||^2 of a cutoff at m.

    Gaussian branch: (1/pi) int_m^inf e^{-t sigma^2 u^2} du, via erfc.
    Pure-jump branch: Gamma(1/alpha, (2m/pi)^alpha M t) / (2 alpha (M t)^{1/alpha}),
    valid for m >= pi/2.
    """
    if delta_t <= 0:
        raise ValueError("delta_t must be positive")
    if model_class.tag == GAUSSIAN:
        if m < 0:
            raise ValueError("m must be nonnegative")
        if sigma2 <= 0:
            raise ValueError("gaussian branch needs sigma2 > 0")
        a = delta_t * sigma2
        return erfc(m * math.sqrt(a)) / (2.0 * math.sqrt(math.pi * a))
    if model_class.tag == PURE_JUMP:
        if m < math.pi / 2.0:
            raise ValueError("jump branch needs m >= pi/2")
        M, alpha = model_class.M, model_class.alpha
        x = (2.0 * m / math.pi) ** alpha * M * delta_t
        return upper_incomplete_gamma(1.0 / alpha, x) / (2.0 * alpha * (M * delta_t) ** (1.0 / alpha))
    raise ValueError("bias bound is defined for the gaussian and pure-jump branches")


def stable_density_l2_norm(law: StableLaw) -> float:
    """||f||^2 of a stable density, via Plancherel on |phi|= e^{-gamma^a |u|^a}.

    Skew-independent: the modulus of the characteristic function only sees
    (alpha, gamma).
    """
    a, g = law.alpha, law.gamma
    return math.gamma(1.0 / a) / (math.pi * a * 2.0 ** (1.0 / a) * g)
