"""H_p norms of Dirichlet polynomials.

Three independent routes:

* exact coefficient formulas (p = 2 by Parseval, even p via ``||F^{p/2}||_2``),
* integration of ``|F|^p`` over the polytorus (any finite p),
* the vertical-line mean ``(1/2R) int_{-R}^{R} |D(it)|^p dt`` (oracle only).

``p = inf`` is the maximum of ``|F|`` over the torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy import integrate

from .arith import DirichletPoly, evaluate
from .bohr import TorusPoly, as_torus
from .torus import DEFAULT_CONFIG, Config, Estimate, SamplePlan, extremum_on_torus, integrate_torus

PExponent = Union[Fraction, float]  # float only for math.inf
Series = Union[DirichletPoly, TorusPoly]

INF = math.inf


def as_exponent(p) -> PExponent:
    """Normalize an exponent: rationals stay exact, ``inf``/``"inf"`` is infinity."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return INF
        p = Fraction(s)
    if isinstance(p, float):
        if math.isinf(p) and p > 0:
            return INF
        if math.isnan(p):
            raise ValueError("exponent is NaN")
        p = Fraction(p).limit_denominator(10**6)
    if p == INF:
        return INF
    p = Fraction(p)
    if p < 1:
        raise ValueError(f"exponent must be >= 1, got {p}")
    return p


def format_exponent(p: PExponent) -> str:
    p = as_exponent(p)
    if p == INF:
        return "inf"
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def exponent_json(p: PExponent):
    p = as_exponent(p)
    if p == INF:
        return "inf"
    return int(p) if p.denominator == 1 else float(p)


@dataclass(frozen=True)
class NormResult:
    """A norm value with its provenance.

    ``method`` is ``exact``, ``qmc`` or ``grid``. ``stderr`` is the sampling
    error (QMC only); ``tol`` the refinement tolerance (grid only).
    """

    p: PExponent
    value: float
    stderr: float = 0.0
    method: str = "exact"
    tol: float = 0.0

    def to_json(self) -> dict:
        return {
            "p": exponent_json(self.p),
            "value": self.value,
            "stderr": self.stderr,
            "method": self.method,
            "tol": self.tol,
        }


def norm_h2(D: Series) -> float:
    """``(sum |a_n|^2)^{1/2}`` with compensated summation."""
    vals = [a for _, a in D]
    return math.sqrt(math.fsum(abs(a) ** 2 for a in vals))


def norm_hp_even(D: Series, p) -> float:
    """Exact H_p norm for p in {2, 4, 6, 8}: ``||F||_p^p = ||F^{p/2}||_2^2``."""
    p = as_exponent(p)
    if p == INF or p.denominator != 1 or p % 2 or not 2 <= p <= 8:
        raise ValueError(f"exact route needs p in {{2, 4, 6, 8}}, got {format_exponent(p)}")
    F = as_torus(D)
    power = F ** (int(p) // 2)
    return power.l2_norm() ** (2.0 / int(p))


def _abs_pow(values: np.ndarray, p: float) -> np.ndarray:
    mod = np.abs(values)
    out = np.zeros_like(mod)
    nz = mod > 0
    out[nz] = np.exp(p * np.log(mod[nz]))
    return out


def norm_hp_qmc(D: Series, p, plan: SamplePlan | None = None) -> Estimate:
    """``(int_T^N |F|^p)^{1/p}`` by sampling, with a delta-method stderr."""
    p = as_exponent(p)
    if p == INF:
        raise ValueError("sampling route needs a finite exponent")
    F = as_torus(D)
    if F.nvars == 0:
        c = abs(F[()])
        return Estimate(c, 0.0, 1)
    if plan is None:
        plan = DEFAULT_CONFIG.plan(F.nvars)
    elif plan.nvars < F.nvars:
        plan = plan.with_nvars(F.nvars)
    pf = float(p)
    est = integrate_torus(lambda w: _abs_pow(F.values(w), pf), plan)
    if est.value <= 0.0:
        return Estimate(0.0, 0.0, est.count)
    value = est.value ** (1.0 / pf)
    stderr = value / (pf * est.value) * est.stderr
    return Estimate(value, stderr, est.count)


def hinf_result(D: Series, config: Config = DEFAULT_CONFIG) -> NormResult:
    F = as_torus(D)
    ext = extremum_on_torus(F, "max", grid=config.grid, refine_tol=config.refine_tol)
    return NormResult(INF, ext.value, 0.0, "grid", ext.tol)


def norm_hinf(D: Series, config: Config = DEFAULT_CONFIG) -> float:
    """Sup norm on the right half-plane, computed as ``max |F|`` over T^N.

    The value is attained by a torus point, so it never exceeds the true
    norm; ``hinf_result`` also reports the refinement tolerance.
    """
    return hinf_result(D, config).value


def default_steps(D: DirichletPoly, R: float) -> int:
    """Trapezoid nodes resolving the fastest oscillation ``n^{-it}`` ~8 times per period."""
    top = math.log(max(D.support_bound, 2))
    return max(2, int(math.ceil(2.0 * R * top * 8.0 / (2.0 * math.pi))) + 1)


def norm_vertical_line(D: DirichletPoly, p, R: float = 1e4, steps: int | None = None) -> float:
    """``((1/2R) int_{-R}^{R} |D(it)|^p dt)^{1/p}`` by the trapezoid rule."""
    p = as_exponent(p)
    if p == INF:
        raise ValueError("vertical-line mean needs a finite exponent")
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    if D.is_constant():
        return abs(D[1])
    if steps is None:
        steps = default_steps(D, R)
    if steps < 2:
        raise ValueError(f"need at least 2 steps, got {steps}")
    t = np.linspace(-R, R, steps)
    vals = _abs_pow(evaluate(D, 1j * t), float(p))
    mean = integrate.trapezoid(vals, t) / (2.0 * R)
    return float(mean ** (1.0 / float(p)))


def hp_norm(D: Series, p, config: Config = DEFAULT_CONFIG, plan: SamplePlan | None = None) -> NormResult:
    """Dispatch to the best available route for ``p``."""
    p = as_exponent(p)
    if p == INF:
        return hinf_result(D, config)
    if p == 2:
        return NormResult(p, norm_h2(D))
    if p.denominator == 1 and p % 2 == 0 and p <= 8:
        return NormResult(p, norm_hp_even(D, p))
    F = as_torus(D)
    if plan is None:
        plan = config.plan(F.nvars)
    est = norm_hp_qmc(F, p, plan)
    return NormResult(p, est.value, est.stderr, "qmc" if F.nvars else "exact")
