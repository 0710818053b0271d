"""Sampling, integration and global optimization on the polytorus T^N.

All randomness comes from ``numpy.random.default_rng`` seeded by the
:class:`SamplePlan`, so a plan always regenerates the same points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Literal

import numpy as np

from .bohr import TorusPoly

DEFAULT_SEED = 0x5EED
TWO_PI = 2.0 * math.pi
MAX_TORUS_VARS = 8
# largest grid (points) evaluated in one FFT
MAX_GRID_POINTS = 2**24


@dataclass(frozen=True)
class Config:
    """Numerical settings shared by every command.

    Loaded from JSON ``{"seed": ..., "samples": ..., "grid": ..., "refine_tol": ...}``;
    missing keys keep their defaults. ``grid=None`` picks the per-dimension
    default resolution.
    """

    seed: int = DEFAULT_SEED
    samples: int = 2**16
    grid: int | None = None
    refine_tol: float = 1e-6
    threshold: float = 1e-6

    @classmethod
    def from_json(cls, obj: dict) -> "Config":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def load(cls, path: str | Path) -> "Config":
        return cls.from_json(json.loads(Path(path).read_text()))

    def override(self, **kwargs) -> "Config":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def plan(self, nvars: int, scheme: str = "random-uniform") -> "SamplePlan":
        return SamplePlan(nvars=nvars, count=self.samples, seed=self.seed, scheme=scheme)


DEFAULT_CONFIG = Config()

Scheme = Literal["random-uniform", "rank1-lattice"]


@dataclass(frozen=True)
class SamplePlan:
    nvars: int
    count: int = 2**16
    seed: int = DEFAULT_SEED
    scheme: Scheme = "random-uniform"
    # independent random shifts for the lattice rule
    shifts: int = 8

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"sample count must be >= 1, got {self.count}")
        if self.nvars < 0:
            raise ValueError(f"nvars must be >= 0, got {self.nvars}")
        if self.scheme not in ("random-uniform", "rank1-lattice"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    def with_nvars(self, nvars: int) -> "SamplePlan":
        return replace(self, nvars=nvars)


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    count: int


def _next_prime(n: int) -> int:
    n = max(n, 2)
    while True:
        if n < 4 or all(n % d for d in range(2, math.isqrt(n) + 1)):
            return n
        n += 1


def korobov_generator(npoints: int, nvars: int, candidates: int = 64, seed: int = 0) -> np.ndarray:
    """Korobov vector ``(1, a, a^2, ...) mod n`` minimizing the P_2 criterion.

    ``npoints`` must be prime. For small n every multiplier is tried, for
    larger n a seeded subset.
    """
    n = npoints
    if nvars == 0:
        return np.zeros(0, dtype=np.int64)
    if n <= 3:
        return np.ones(nvars, dtype=np.int64)
    if n - 2 <= candidates:
        pool = np.arange(2, n)
    else:
        pool = np.random.default_rng(seed).choice(np.arange(2, n), size=candidates, replace=False)
        pool.sort()
    k = np.arange(n, dtype=np.int64)
    best, best_a = np.inf, 1
    for a in pool.tolist():
        gen = [pow(a, j, n) for j in range(nvars)]
        prod = np.ones(n)
        for g in gen:
            x = (k * g % n) / n
            prod *= 1.0 + TWO_PI**2 * (x * x - x + 1.0 / 6.0)
        p2 = prod.mean() - 1.0
        if p2 < best:
            best, best_a = p2, a
    return np.array([pow(best_a, j, n) for j in range(nvars)], dtype=np.int64)


def sample_phases(plan: SamplePlan) -> np.ndarray:
    """Phases in [0, 2pi) with shape (count, nvars) for the plan."""
    rng = np.random.default_rng(plan.seed)
    if plan.scheme == "random-uniform":
        return TWO_PI * rng.random((plan.count, plan.nvars))
    m = max(1, min(plan.shifts, plan.count))
    n = _next_prime(max(1, plan.count // m))
    gen = korobov_generator(n, plan.nvars, seed=plan.seed)
    base = (np.arange(n)[:, None] * gen[None, :] % n) / n
    shifts = rng.random((m, plan.nvars))
    pts = (base[None, :, :] + shifts[:, None, :]) % 1.0
    return TWO_PI * pts.reshape(m * n, plan.nvars)


def integrate_torus(integrand: Callable[[np.ndarray], np.ndarray], plan: SamplePlan) -> Estimate:
    """Mean of ``integrand`` over the plan's points of T^N.

    ``integrand`` receives an (M, N) array of unimodular points and returns M
    real values. Reductions are plain numpy sums in a fixed order.
    """
    theta = sample_phases(plan)
    vals = np.asarray(integrand(np.exp(1j * theta)), dtype=float)
    if plan.scheme == "random-uniform":
        value = float(vals.mean())
        stderr = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
        return Estimate(value, stderr, int(vals.size))
    m = max(1, min(plan.shifts, plan.count))
    means = vals.reshape(m, -1).mean(axis=1)
    value = float(means.mean())
    stderr = float(means.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return Estimate(value, stderr, int(vals.size))


def default_grid(nvars: int) -> int:
    return 256 if nvars <= 3 else 64


def effective_grid(nvars: int, requested: int | None = None) -> int:
    """Per-variable resolution actually used: requested (or default), halved
    until the full grid holds at most ``MAX_GRID_POINTS`` points."""
    r = requested or default_grid(nvars)
    while nvars and r > 2 and r**nvars > MAX_GRID_POINTS:
        r //= 2
    return r


def grid_values(F: TorusPoly, resolution: int) -> np.ndarray:
    """``F`` on the uniform grid ``theta_j = 2 pi k_j / r`` via an N-d FFT.

    Exponents are folded mod r, which leaves grid values unchanged.
    """
    n = F.nvars
    coeffs = np.zeros((resolution,) * n, dtype=complex)
    expo = F.exponent_array() % resolution
    np.add.at(coeffs, tuple(expo.T), F.coeff_array())
    return np.fft.ifftn(coeffs) * resolution**n if n else coeffs


@dataclass(frozen=True)
class Extremum:
    """Result of :func:`extremum_on_torus`.

    ``value`` is ``|F|`` evaluated directly at ``argpoint``, so for ``max`` it
    is a lower bound of the true maximum and for ``min`` an upper bound of
    the true minimum. ``tol`` is the refinement tolerance expressed in
    values of ``|F|``: Lipschitz constant (in the phases) times the final
    phase step.
    """

    value: float
    argpoint: np.ndarray
    phases: np.ndarray
    grid: int
    tol: float
    grid_value: float = field(default=float("nan"))

    def __iter__(self):
        yield self.value
        yield self.argpoint


_GOLDEN_STEPS = 16  # shrinks a bracket by ~2000x


def _golden_batch(f, lo: np.ndarray, hi: np.ndarray):
    """Golden-section minimization of f on [lo, hi], row by row.

    A fixed number of steps keeps each row's result independent of the
    others in the batch.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo.copy(), hi.copy()
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(_GOLDEN_STEPS):
        left = fc < fd
        a, b = np.where(left, a, c), np.where(left, d, b)
        c_new = np.where(left, b - invphi * (b - a), d)
        d_new = np.where(left, c, a + invphi * (b - a))
        fc_new = np.where(left, f(c_new), fd)
        fd_new = np.where(left, fc, f(d_new))
        c, d, fc, fd = c_new, d_new, fc_new, fd_new
    left = fc < fd
    return np.where(left, c, d), np.where(left, fc, fd)


class _PhaseModel:
    """|F|^2 with phase derivatives, evaluated for a batch of phase vectors."""

    def __init__(self, F: TorusPoly):
        self.F = F
        n = F.nvars
        self.d1 = [F.derivative(j) for j in range(n)]
        self.d2 = [[self.d1[j].derivative(k) for k in range(n)] for j in range(n)]

    def value(self, th: np.ndarray) -> np.ndarray:
        return self.F.values_at_phases(th)

    def grad_hess(self, th: np.ndarray):
        w = np.exp(1j * th)
        f = self.F.values(w)
        fj = np.stack([d.values(w) for d in self.d1], axis=1)
        n = self.F.nvars
        fjk = np.empty((th.shape[0], n, n), dtype=complex)
        for j in range(n):
            for k in range(j, n):
                fjk[:, j, k] = fjk[:, k, j] = self.d2[j][k].values(w)
        g = 2.0 * (np.conj(f)[:, None] * fj).real
        H = 2.0 * (np.conj(fj)[:, :, None] * fj[:, None, :] + np.conj(f)[:, None, None] * fjk).real
        return f, fj, g, H


def extremum_on_torus(
    F: TorusPoly,
    mode: Literal["max", "min"] = "max",
    grid: int | None = None,
    refine_tol: float = 1e-6,
    candidates: int = 8,
) -> Extremum:
    """Locate the max or min of ``|F|`` on T^N.

    Coarse FFT grid, then coordinate-wise golden-section refinement of the
    best points of the grid and of its dyadic subgrids, halving the phase
    bracket each sweep until it is below ``refine_tol``, then a Newton
    polish (Gauss-Newton towards a zero for ``min``). Every start is refined
    independently, so a finer dyadic grid can only improve the result.
    """
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")
    n = F.nvars
    if n > MAX_TORUS_VARS:
        raise ValueError(f"extremum search supports at most {MAX_TORUS_VARS} variables, got {n}")
    if n == 0:
        c = abs(F[()])
        return Extremum(c, np.zeros(0, dtype=complex), np.zeros(0), 1, 0.0, c)
    sign = -1.0 if mode == "max" else 1.0  # minimize sign*|F|
    r = effective_grid(n, grid)

    starts, widths = [], []
    res = r
    best_grid = None
    while res >= 4:
        vals = np.abs(grid_values(F, res)).ravel()
        if best_grid is None:
            best_grid = float(vals.max() if mode == "max" else vals.min())
        k = min(candidates, vals.size)
        score = sign * vals
        idx = np.argpartition(score, k - 1)[:k]
        idx = idx[np.lexsort((idx, score[idx]))]
        for flat in idx.tolist():
            starts.append(np.array(np.unravel_index(flat, (res,) * n), dtype=float) * (TWO_PI / res))
            widths.append(TWO_PI / res)
        if res % 2:
            break
        res //= 2
    theta = np.array(starts)
    h = np.array(widths)

    def objective(th: np.ndarray) -> np.ndarray:
        return sign * np.abs(F.values_at_phases(th))

    current = objective(theta)
    active = h >= refine_tol
    while active.any():
        rows = np.flatnonzero(active)
        for j in range(n):
            th_rows = theta[rows]

            def line(x, j=j, th_rows=th_rows):
                th = th_rows.copy()
                th[:, j] = x
                return objective(th)

            x, fx = _golden_batch(line, th_rows[:, j] - h[rows], th_rows[:, j] + h[rows])
            better = fx < current[rows]
            theta[rows[better], j] = x[better]
            current[rows] = np.where(better, fx, current[rows])
        h[rows] /= 2.0
        active = h >= refine_tol

    model = _PhaseModel(F)
    theta, current = _newton_polish(model, theta, current, sign)
    if mode == "min":
        theta, current = _gauss_newton_zero(model, theta, current)

    best = int(np.argmin(current))
    th = np.mod(theta[best], TWO_PI)
    omega = np.exp(1j * th)
    value = abs(complex(F.values(omega[None, :])[0]))
    lip = math.fsum(abs(c) * sum(a) for a, c in F)
    return Extremum(value, omega, th, r, lip * refine_tol, best_grid)


def _newton_polish(model: _PhaseModel, theta, current, sign, iters: int = 12):
    """Saddle-free Newton on sign*|F|^2 per row; a step is kept only if it
    lowers sign*|F| for that row."""
    theta = theta.copy()
    current = current.copy()
    for _ in range(iters):
        _, _, g, H = model.grad_hess(theta)
        g, H = sign * g, sign * H
        lam, vec = np.linalg.eigh(H)
        scale = np.maximum(np.abs(lam), 1e-12 * (np.abs(lam).max(axis=1, keepdims=True) + 1e-300))
        coef = np.einsum("kji,kj->ki", vec, g) / scale
        step = -np.einsum("kij,kj->ki", vec, coef)
        step = np.clip(step, -0.1, 0.1)
        cand = theta + step
        val = sign * np.abs(model.value(cand))
        better = val < current
        if not better.any():
            break
        theta[better] = cand[better]
        current[better] = val[better]
    return theta, current


def _gauss_newton_zero(model: _PhaseModel, theta, current, iters: int = 30):
    """Gauss-Newton on F(e^{i theta}) = 0 per row, steps kept while |F| drops."""
    theta = theta.copy()
    current = current.copy()
    for _ in range(iters):
        f, fj, _, _ = model.grad_hess(theta)
        A = np.concatenate([fj.real[:, None, :], fj.imag[:, None, :]], axis=1)
        b = -np.stack([f.real, f.imag], axis=1)
        step = np.einsum("kij,kj->ki", np.linalg.pinv(A), b)
        step = np.clip(step, -0.1, 0.1)
        cand = theta + step
        val = np.abs(model.value(cand))
        better = val < current
        if not better.any():
            break
        theta[better] = cand[better]
        current[better] = val[better]
    return theta, current
