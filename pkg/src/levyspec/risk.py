"""Monte-Carlo evaluation of the estimators against exact reference laws.

The squared L2 distance between the thresholded estimator and the truth is
computed in the frequency domain,

    ||f_tilde - f||^2 = (1/2pi) int_{|u|<=umax} |phi_tilde - phi|^2 du
                        + (1/pi) int_{umax}^inf |phi|^2 du,

with the tail term in closed form (upper incomplete gamma / erfc) whenever the
reference law allows it.  Dividing by ||f||^2 gives the relative risk that the
benchmark tables report.  Everything is deterministic given the master seed;
trials are keyed by trial index so any execution order gives identical output.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

from .calibration import FALLBACK_KAPPA, KappaGrid, select_kappa
from .errors import NoStabilizationError, UnsupportedModelError
from .estimator import (ECFGrid, ThresholdSpec, UGrid, default_u_max,
                        default_u_step, ecf, plancherel_l2, threshold_cf)
from .models import (LevyTriplet, StableJumpDensity, StableLaw, cauchy_triplet,
                     increment_stable_law, stable_cf, stable_density_l2_norm)
from .sampling import SeedSpec, derive_seed, sample_increments
from .special import upper_incomplete_gamma

__all__ = ["ExperimentConfig", "RiskReport", "BoundCheckReport", "reference_cf",
           "reference_tail_integral", "reference_l2_norm", "relative_l2_risk",
           "relative_risk_of_cf", "cutoff_risk_bound_check",
           "adaptive_risk_bound_check", "risk_table", "risk_table_csv"]


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark experiment: a model crossed with sample sizes."""

    model: LevyTriplet
    delta_t: float
    n_list: tuple
    trials: int = 100
    u_max: float | None = None
    u_step: float | None = None
    kappa_mode: float | str = "auto"
    master_seed: int = 20406080
    label: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.n_list:
            raise ValueError("n_list must be nonempty")
        if isinstance(self.kappa_mode, str) and self.kappa_mode != "auto":
            raise ValueError("kappa_mode is 'auto' or a positive number")
        if not isinstance(self.kappa_mode, str) and self.kappa_mode <= 0:
            raise ValueError("kappa_mode is 'auto' or a positive number")

    def grid(self) -> UGrid:
        u_max = self.u_max if self.u_max is not None else default_u_max(self.delta_t)
        step = self.u_step if self.u_step is not None else default_u_step(u_max)
        return UGrid.make(u_max, step)

    def to_dict(self) -> dict:
        jumps = self.model.jumps
        if jumps is not None and not isinstance(jumps, StableJumpDensity):
            raise UnsupportedModelError("only stable or empty jump parts serialize")
        return {
            "model": {
                "b": self.model.b,
                "sigma2": self.model.sigma2,
                "jumps": None if jumps is None else
                         {"P": jumps.P, "Q": jumps.Q, "alpha": jumps.alpha},
            },
            "delta_t": self.delta_t,
            "n_list": list(self.n_list),
            "trials": self.trials,
            "u_max": self.u_max,
            "u_step": self.u_step,
            "kappa_mode": self.kappa_mode,
            "master_seed": self.master_seed,
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        m = d["model"]
        jumps = m.get("jumps")
        triplet = LevyTriplet(
            float(m.get("b", 0.0)), float(m.get("sigma2", 0.0)),
            None if jumps is None else StableJumpDensity(
                float(jumps["P"]), float(jumps["Q"]), float(jumps["alpha"])))
        return cls(model=triplet,
                   delta_t=float(d["delta_t"]),
                   n_list=tuple(int(n) for n in d["n_list"]),
                   trials=int(d.get("trials", 100)),
                   u_max=None if d.get("u_max") is None else float(d["u_max"]),
                   u_step=None if d.get("u_step") is None else float(d["u_step"]),
                   kappa_mode=(d.get("kappa_mode", "auto") if d.get("kappa_mode", "auto") == "auto"
                               else float(d["kappa_mode"])),
                   master_seed=int(d.get("master_seed", 20406080)),
                   label=str(d.get("label", "")))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class RiskReport:
    """Mean/sd of the relative L2 risk and of the selected kappa for one cell."""

    label: str
    alpha: float | None
    delta_t: float
    n: int
    trials: int
    mean_relative_risk: float
    sd_relative_risk: float
    mean_kappa: float
    sd_kappa: float
    fallback_count: int
    master_seed: int


@dataclass(frozen=True)
class BoundCheckReport:
    """Outcome of an empirical risk-bound verification."""

    passed: bool
    rows: tuple
    delta_t: float
    n: int
    trials: int
    master_seed: int


# ---------------------------------------------------------------------------
# reference quantities

def _stable_part(model: LevyTriplet, delta_t: float) -> StableLaw | None:
    if model.jumps is None:
        return None
    if not isinstance(model.jumps, StableJumpDensity):
        raise UnsupportedModelError("reference laws need stable or empty jumps")
    return increment_stable_law(model.jumps, delta_t)


def reference_cf(model: LevyTriplet, delta_t: float, grid: UGrid) -> np.ndarray:
    """Exact CF of the increment on the grid: Gaussian factor times stable factor."""
    u = grid.points
    out = np.exp(1j * u * model.b * delta_t - delta_t * model.sigma2 * u ** 2 / 2.0)
    law = _stable_part(model, delta_t)
    if law is not None:
        out = out * stable_cf(law, u)
    return out


def reference_tail_integral(model: LevyTriplet, delta_t: float, u_max: float) -> float:
    """(1/pi) int_{u_max}^inf |phi(u)|^2 du, closed form where available."""
    law = _stable_part(model, delta_t)
    a = delta_t * model.sigma2
    if law is None:
        return erfc(u_max * math.sqrt(a)) / (2.0 * math.sqrt(math.pi * a))
    c = 2.0 * law.gamma ** law.alpha
    if model.sigma2 == 0.0:
        x = c * u_max ** law.alpha
        return upper_incomplete_gamma(1.0 / law.alpha, x) / (
            math.pi * law.alpha * c ** (1.0 / law.alpha))
    val, _ = quad(lambda v: math.exp(-a * v * v - c * v ** law.alpha),
                  u_max, math.inf, epsrel=1e-10, limit=200)
    return val / math.pi


def reference_l2_norm(model: LevyTriplet, delta_t: float) -> float:
    """||f||^2 of the increment density, via Plancherel."""
    law = _stable_part(model, delta_t)
    a = delta_t * model.sigma2
    if law is None:
        return 1.0 / (2.0 * math.sqrt(math.pi * a))
    if model.sigma2 == 0.0:
        return stable_density_l2_norm(law)
    c = 2.0 * law.gamma ** law.alpha
    val, _ = quad(lambda v: math.exp(-a * v * v - c * v ** law.alpha),
                  0.0, math.inf, epsrel=1e-12, limit=200)
    return val / math.pi


# ---------------------------------------------------------------------------
# risk of a single estimate

def relative_risk_of_cf(phi_est, model: LevyTriplet, delta_t: float, grid: UGrid,
                        include_tail: bool = True) -> float:
    """Relative L2 risk of an estimator given by its CF values on the grid."""
    phi_ref = reference_cf(model, delta_t, grid)
    num = plancherel_l2(phi_est if not isinstance(phi_est, ECFGrid) else phi_est.values,
                        phi_ref, grid=grid)
    if include_tail:
        num += reference_tail_integral(model, delta_t, grid.u_max)
    return num / reference_l2_norm(model, delta_t)


def _one_trial(model, delta_t, n, grid, kappa_mode, kappa_grid, cell_seed, trial):
    sample = sample_increments(model, delta_t, n, SeedSpec(cell_seed, trial))
    phi_hat = ecf(sample, grid)
    fallback = 0
    if kappa_mode == "auto":
        try:
            kappa = select_kappa(phi_hat, kappa_grid)
        except NoStabilizationError:
            kappa = FALLBACK_KAPPA
            fallback = 1
    else:
        kappa = float(kappa_mode)
    phi_tilde = threshold_cf(phi_hat, ThresholdSpec(kappa, n))
    rel = relative_risk_of_cf(phi_tilde.values, model, delta_t, grid)
    return rel, kappa, fallback


def _sd(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1))


def relative_l2_risk(config: ExperimentConfig, max_workers: int = 1) -> list[RiskReport]:
    """Run the Monte-Carlo benchmark; one report per sample size in n_list."""
    grid_full = config.grid()
    kappa_grid = KappaGrid()
    reports = []
    for idx, n in enumerate(config.n_list):
        grid = grid_full.restrict(float(n))
        cell_seed = derive_seed(config.master_seed, idx)
        run = lambda tr: _one_trial(config.model, config.delta_t, n, grid,
                                    config.kappa_mode, kappa_grid, cell_seed, tr)
        if max_workers > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                results = list(pool.map(run, range(config.trials)))
        else:
            results = [run(tr) for tr in range(config.trials)]
        risks = np.array([r[0] for r in results])
        kappas = np.array([r[1] for r in results])
        if config.kappa_mode != "auto":
            mean_kappa, sd_kappa = float(config.kappa_mode), 0.0
        else:
            mean_kappa, sd_kappa = float(np.mean(kappas)), _sd(kappas)
        fallbacks = sum(r[2] for r in results)
        alpha = config.model.jumps.alpha if isinstance(config.model.jumps, StableJumpDensity) else None
        reports.append(RiskReport(
            label=config.label or _default_label(config.model),
            alpha=alpha, delta_t=config.delta_t, n=int(n), trials=config.trials,
            mean_relative_risk=float(np.mean(risks)), sd_relative_risk=_sd(risks),
            mean_kappa=mean_kappa, sd_kappa=sd_kappa,
            fallback_count=fallbacks, master_seed=config.master_seed))
    return reports


def _default_label(model: LevyTriplet) -> str:
    has_jumps = isinstance(model.jumps, StableJumpDensity)
    if has_jumps and model.sigma2 > 0:
        return "gaussian+stable"
    return "stable" if has_jumps else "gaussian"


# ---------------------------------------------------------------------------
# empirical verification of the risk bounds

def _symmetric_unit_stable_scale(model: LevyTriplet, delta_t: float) -> float:
    """Scale gamma of a symmetric 1-stable pure-jump model; rejects others."""
    law = _stable_part(model, delta_t)
    if (law is None or model.sigma2 != 0.0 or model.b != 0.0
            or law.alpha != 1.0 or law.beta != 0.0):
        raise ValueError("bound checks need a driftless symmetric 1-stable model "
                         "with closed-form bias")
    return law.gamma


def cutoff_risk_bound_check(delta_t: float, n: int, m_grid=None, trials: int = 100,
                            master_seed: int = 20406080,
                            model: LevyTriplet | None = None,
                            margin_se: float = 3.0) -> BoundCheckReport:
    """Check E||f_hat_m - f||^2 <= bias^2(m) + m/(pi n) + margin on an m-grid.

    The empirical mean integrated squared error is computed per cutoff m over
    seeded trials; the bias term e^{-2 gamma m}/(2 pi gamma) is exact for the
    symmetric 1-stable reference model.
    """
    model = model if model is not None else cauchy_triplet()
    gamma = _symmetric_unit_stable_scale(model, delta_t)
    if m_grid is None:
        m_grid = np.linspace(0.5, 8.0, 10)
    m_grid = np.asarray(m_grid, dtype=float)
    step = default_u_step(float(np.max(m_grid)))
    grid = UGrid.make(float(np.max(m_grid)), step)
    u = grid.points
    phi_ref = reference_cf(model, delta_t, grid)
    mises = np.zeros((trials, m_grid.size))
    for tr in range(trials):
        sample = sample_increments(model, delta_t, n, SeedSpec(master_seed, tr))
        vals = ecf(sample, grid).values
        diff2 = np.abs(vals - phi_ref) ** 2
        for j, m in enumerate(m_grid):
            keep = np.abs(u) <= m * (1 + 1e-12)
            inner = np.trapezoid(diff2[keep], dx=grid.step) / (2.0 * math.pi)
            mises[tr, j] = inner + math.exp(-2.0 * gamma * m) / (2.0 * math.pi * gamma)
    rows = []
    passed = True
    for j, m in enumerate(m_grid):
        emp = float(np.mean(mises[:, j]))
        se = _sd(mises[:, j]) / math.sqrt(trials)
        bound = math.exp(-2.0 * gamma * m) / (2.0 * math.pi * gamma) + m / (math.pi * n)
        ok = emp <= bound + margin_se * se
        passed &= ok
        rows.append({"m": float(m), "empirical": emp, "bound": bound,
                     "se": se, "margin": bound + margin_se * se - emp, "ok": ok})
    return BoundCheckReport(passed, tuple(rows), delta_t, n, trials, master_seed)


def adaptive_risk_bound_check(delta_t: float, n: int, kappa: float = FALLBACK_KAPPA,
                              trials: int = 100, master_seed: int = 20406080,
                              model: LevyTriplet | None = None,
                              margin_se: float = 3.0) -> BoundCheckReport:
    """Check the oracle inequality for the thresholded estimator at given kappa.

    RHS: inf over a 20-point m-grid of 9 bias^2(m) + (m/pi n)(5 + (1 +
    (kappa+2) sqrt(log n))^2), plus the remainder 64 n^{1 - kappa^2/4}.
    """
    model = model if model is not None else cauchy_triplet()
    gamma = _symmetric_unit_stable_scale(model, delta_t)
    grid = UGrid.make(default_u_max(delta_t))
    phi_ref = reference_cf(model, delta_t, grid)
    tail = math.exp(-2.0 * gamma * grid.u_max) / (2.0 * math.pi * gamma)
    risks = np.zeros(trials)
    for tr in range(trials):
        sample = sample_increments(model, delta_t, n, SeedSpec(master_seed, tr))
        phi_tilde = threshold_cf(ecf(sample, grid), ThresholdSpec(kappa, n))
        risks[tr] = plancherel_l2(phi_tilde.values, phi_ref, grid=grid) + tail
    logn = math.log(n)
    m_grid = np.linspace(grid.u_max / 20.0, grid.u_max, 20)
    rhs_terms = [9.0 * math.exp(-2.0 * gamma * m) / (2.0 * math.pi * gamma)
                 + (m / (math.pi * n)) * (5.0 + (1.0 + (kappa + 2.0) * math.sqrt(logn)) ** 2)
                 for m in m_grid]
    rhs = min(rhs_terms) + 64.0 * n ** (1.0 - kappa ** 2 / 4.0)
    emp = float(np.mean(risks))
    se = _sd(risks) / math.sqrt(trials)
    ok = emp <= rhs + margin_se * se
    row = {"kappa": kappa, "empirical": emp, "bound": rhs, "se": se,
           "margin": rhs + margin_se * se - emp, "ok": ok}
    return BoundCheckReport(bool(ok), (row,), delta_t, n, trials, master_seed)


# ---------------------------------------------------------------------------
# tables

def risk_table(configs: Sequence[ExperimentConfig], max_workers: int = 1) -> list[RiskReport]:
    reports = []
    for config in configs:
        reports.extend(relative_l2_risk(config, max_workers=max_workers))
    return reports


def risk_table_csv(reports: Sequence[RiskReport], meta_lines=()) -> str:
    lines = [f"# {line}" for line in meta_lines]
    lines.append("model,alpha,delta,n,mean_risk,sd_risk,mean_kappa,sd_kappa,trials,seed")
    for r in reports:
        alpha = "" if r.alpha is None else f"{r.alpha:.17g}"
        lines.append(
            f"{r.label},{alpha},{r.delta_t:.17g},{r.n},{r.mean_relative_risk:.17g},"
            f"{r.sd_relative_risk:.17g},{r.mean_kappa:.17g},{r.sd_kappa:.17g},"
            f"{r.trials},{r.master_seed}")
    return "\n".join(lines) + "\n"
