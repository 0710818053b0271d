"""Multipliers from H_p to H_q: classification, norms, and essential-norm brackets.

``D`` multiplies H_p into H_q iff it lies in

* ``H_t`` with ``t = pq/(p-q)`` when ``q < p < inf`` (``t = q`` when ``p = inf``),
* ``H_inf`` when ``p = q``,
* ``{0}`` when ``p < q``,

and the operator norm of ``E -> D E`` equals the norm of ``D`` in that space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bohr import TorusPoly, as_torus
from .colegamelin import ExtremalSpec, extremal_function
from .norms import INF, NormResult, PExponent, as_exponent, format_exponent, hp_norm
from .torus import DEFAULT_CONFIG, Config, extremum_on_torus


class NoMultiplierError(ValueError):
    """Raised for a nonzero symbol when only the zero operator exists."""


@dataclass(frozen=True)
class MultiplierClass:
    p: PExponent
    q: PExponent
    space: str  # "Hinf", "Ht" or "Zero"
    t: PExponent | None = None

    def __str__(self) -> str:
        if self.space == "Ht":
            return f"H_{format_exponent(self.t)}"
        return {"Hinf": "H_inf", "Zero": "{0}"}[self.space]


def classify(p, q) -> MultiplierClass:
    p, q = as_exponent(p), as_exponent(q)
    if p == q:
        return MultiplierClass(p, q, "Hinf")
    if p < q:
        return MultiplierClass(p, q, "Zero")
    t = q if p == INF else p * q / (p - q)
    return MultiplierClass(p, q, "Ht", t)


def multiplier_result(D, p, q, config: Config = DEFAULT_CONFIG) -> NormResult:
    """Norm of ``D`` in the space classifying ``(p, q)``."""
    cls = classify(p, q)
    F = as_torus(D)
    if F.is_zero():
        return NormResult(INF if cls.space != "Ht" else cls.t, 0.0)
    if cls.space == "Zero":
        raise NoMultiplierError(
            f"no nonzero multipliers from H_{format_exponent(cls.p)} to H_{format_exponent(cls.q)}"
        )
    return hp_norm(F, INF if cls.space == "Hinf" else cls.t, config)


def multiplier_norm(D, p, q, config: Config = DEFAULT_CONFIG) -> float:
    return multiplier_result(D, p, q, config).value


@dataclass(frozen=True)
class LowerBound:
    """Best ratio ``||D E||_q / ||E||_p`` found, with the test series reaching it."""

    value: float
    stderr: float
    source: str
    witness: TorusPoly

    def __float__(self) -> float:
        return self.value


def _smooth_support(nvars: int, size: int = 64) -> np.ndarray:
    """Exponent vectors of the divisors of ``prod p_j^e`` with about ``size`` divisors."""
    e = max(1, int(size ** (1.0 / nvars)) - 1)
    grids = np.meshgrid(*[np.arange(e + 1)] * nvars, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _random_series(nvars: int, rng: np.random.Generator) -> TorusPoly:
    support = _smooth_support(nvars)
    keep = rng.random(len(support)) < 0.5
    keep[0] = True
    support = support[keep]
    coef = rng.standard_normal(len(support)) + 1j * rng.standard_normal(len(support))
    coef /= np.linalg.norm(coef)
    return TorusPoly(zip(map(tuple, support.tolist()), coef.tolist()), nvars=nvars)


def _extremal_degree(nvars: int) -> int:
    return min(400, int(4096 ** (1.0 / nvars)) - 1)


def candidate_series(D, p, trials: int, seed: int) -> list[tuple[str, TorusPoly]]:
    """Test series for the lower-bound search, in a fixed order."""
    F = as_torus(D)
    nvars = max(F.nvars, 1)
    F = F.with_nvars(nvars)
    out = [("power-%d" % k, F**k) for k in range(7)]
    p = as_exponent(p)
    if p != INF and not F.is_zero():
        peak = np.asarray(extremum_on_torus(F, "max").argpoint)
        peak = peak / np.abs(peak)
        deg = _extremal_degree(nvars)
        for r in (0.5, 0.9, 0.99):
            spec = ExtremalSpec(tuple(r * peak), p)
            out.append((f"extremal-{r}", extremal_function(spec, deg)))
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        out.append((f"random-{trial}", _random_series(nvars, rng)))
    return out


def operator_norm_lower_bound(
    D,
    p,
    q,
    trials: int = 200,
    config: Config = DEFAULT_CONFIG,
) -> LowerBound:
    """Largest ``||D E||_q / ||E||_p`` over powers of D, extremal functions
    peaked where ``|D|`` is largest, and ``trials`` random series."""
    if trials < 0:
        raise ValueError(f"trials must be >= 0, got {trials}")
    p, q = as_exponent(p), as_exponent(q)
    F = as_torus(D)
    best = LowerBound(0.0, 0.0, "none", TorusPoly.constant(1.0))
    if F.is_zero():
        return best
    F = F.with_nvars(max(F.nvars, 1))
    for name, E in candidate_series(F, p, trials, config.seed):
        den = hp_norm(E, p, config)
        if den.value <= 0.0:
            continue
        num = hp_norm(F * E, q, config)
        ratio = num.value / den.value
        if ratio > best.value:
            rel = math.hypot(num.stderr / num.value if num.value else 0.0, den.stderr / den.value)
            best = LowerBound(ratio, ratio * rel, name, E)
    return best


@dataclass(frozen=True)
class EssBracket:
    """Interval containing the essential norm of ``E -> D E``."""

    lower: float
    upper: float
    regime: str
    lower_stderr: float = 0.0
    upper_stderr: float = 0.0
    tolerance: float = 0.0

    def consistent(self) -> bool:
        slack = 3.0 * math.hypot(self.lower_stderr, self.upper_stderr) + self.tolerance
        return 0.0 <= self.lower <= self.upper + slack


def ess_norm_bracket(D, p, q, config: Config = DEFAULT_CONFIG) -> EssBracket:
    """Bracket for the essential norm in each covered (p, q) regime.

    * ``q < p < inf``: ``[||D||_q, ||D||_t]``
    * ``p = inf > q``: ``[||D||_q / 2, ||D||_q]``
    * ``p = q > 1``: ``[||D||_inf, ||D||_inf]``
    * ``p = q = 1``: ``[max(||D||_inf / 2, ||D||_1), ||D||_inf]``
    """
    cls = classify(p, q)
    p, q = cls.p, cls.q
    F = as_torus(D)
    if cls.space == "Zero":
        raise NoMultiplierError(
            f"no bracket for p < q: only the zero symbol multiplies "
            f"H_{format_exponent(p)} into H_{format_exponent(q)}"
        )
    if cls.space == "Ht":
        nq = hp_norm(F, q, config)
        if p == INF:
            return EssBracket(nq.value / 2, nq.value, "p=inf>q", nq.stderr / 2, nq.stderr)
        nt = hp_norm(F, cls.t, config)
        return EssBracket(nq.value, nt.value, "q<p<inf", nq.stderr, nt.stderr)
    ninf = hp_norm(F, INF, config)
    if q == 1:
        n1 = hp_norm(F, 1, config)
        if n1.value >= ninf.value / 2:
            lo, lo_err = n1.value, n1.stderr
        else:
            lo, lo_err = ninf.value / 2, 0.0
        return EssBracket(lo, ninf.value, "p=q=1", lo_err, 0.0, ninf.tol)
    return EssBracket(ninf.value, ninf.value, "p=q>1", 0.0, 0.0, ninf.tol)


__all__ = [
    "MultiplierClass",
    "NoMultiplierError",
    "classify",
    "multiplier_norm",
    "multiplier_result",
    "LowerBound",
    "operator_norm_lower_bound",
    "candidate_series",
    "EssBracket",
    "ess_norm_bracket",
]
