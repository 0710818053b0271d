"""Multiplication operators ``E -> D E`` on H_2: truncated matrices, spectra,
and closed-range certificates.

On the basis of monomials ``n^{-s}`` the operator has the multiplicative
Toeplitz matrix ``A[i, j] = a_{n_i / n_j}``. We truncate to ``p_N``-smooth
``n <= cutoff``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize
from scipy.spatial import cKDTree

from .arith import DirichletPoly, evaluate, first_primes
from .bohr import TorusPoly, as_torus, bohr_lift
from .norms import INF, as_exponent, hp_norm
from .torus import DEFAULT_CONFIG, Config, extremum_on_torus, grid_values

# ---------------------------------------------------------------------------
# truncated matrices


def smooth_basis(nprimes: int, cutoff: int) -> tuple[int, ...]:
    """Sorted ``n <= cutoff`` whose prime factors are among the first ``nprimes`` primes."""
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    out = [1]
    for p in first_primes(nprimes):
        extra = []
        for n in out:
            m = n * p
            while m <= cutoff:
                extra.append(m)
                m *= p
        out.extend(extra)
    return tuple(sorted(out))


@dataclass(frozen=True)
class OperatorMatrix:
    basis: tuple[int, ...]
    entries: np.ndarray
    nprimes: int
    cutoff: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def matrix_of(D: DirichletPoly, nprimes: int | None = None, cutoff: int = 64) -> OperatorMatrix:
    """Column ``j`` holds ``D * n_j^{-s}`` restricted to the basis."""
    if nprimes is None:
        nprimes = max(D.nprimes, 1)
    basis = smooth_basis(nprimes, cutoff)
    index = {n: i for i, n in enumerate(basis)}
    A = np.zeros((len(basis), len(basis)), dtype=complex)
    for j, nj in enumerate(basis):
        for m, a in D:
            i = index.get(m * nj)
            if i is not None:
                A[i, j] = a
    return OperatorMatrix(basis, A, nprimes, cutoff)


def shift_matrix(prime: int, basis: Sequence[int]) -> np.ndarray:
    """Matrix of multiplication by ``prime^{-s}`` on the truncated basis."""
    index = {n: i for i, n in enumerate(basis)}
    S = np.zeros((len(basis), len(basis)))
    for j, n in enumerate(basis):
        i = index.get(prime * n)
        if i is not None:
            S[i, j] = 1.0
    return S


def exact_columns(prime: int, basis: Sequence[int], cutoff: int) -> np.ndarray:
    """Columns ``n`` with ``prime * n <= cutoff``: there truncation does not
    interfere with the commutator."""
    return np.array([j for j, n in enumerate(basis) if prime * n <= cutoff], dtype=int)


def commutator_defect(A, nprimes: int, cutoff: int) -> float:
    """``max_i ||(A S_i - S_i A)[:, exact]||_max`` over the first ``nprimes`` shifts."""
    M = A.entries if isinstance(A, OperatorMatrix) else np.asarray(A)
    basis = smooth_basis(nprimes, cutoff)
    if M.shape != (len(basis), len(basis)):
        raise ValueError(f"matrix shape {M.shape} does not match basis of size {len(basis)}")
    worst = 0.0
    for p in first_primes(nprimes):
        cols = exact_columns(p, basis, cutoff)
        if cols.size == 0:
            continue
        S = shift_matrix(p, basis)
        C = M @ S[:, cols] - S @ M[:, cols]
        worst = max(worst, float(np.abs(C).max()))
    return worst


def commutant_test(A, nprimes: int, cutoff: int, tol: float = 1e-12) -> bool:
    """True iff ``A`` commutes with every prime shift on the exact sub-basis."""
    return commutator_defect(A, nprimes, cutoff) <= tol


def truncated_norm(A, rtol: float = 1e-10, seed: int = 0, max_iter: int = 100_000) -> float:
    """Largest singular value by power iteration on ``A^* A``.

    Returns the square root of a Rayleigh quotient, hence never above the
    true value.
    """
    M = A.entries if isinstance(A, OperatorMatrix) else np.asarray(A, dtype=complex)
    if M.size == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(M.shape[1]) + 1j * rng.standard_normal(M.shape[1])
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(max_iter):
        y = M.conj().T @ (M @ x)
        new = float(np.vdot(x, y).real)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
        if abs(new - est) <= rtol * new:
            est = new
            break
        est = new
    return math.sqrt(max(est, 0.0))


# ---------------------------------------------------------------------------
# spectra


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two finite sets of complex numbers."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("Hausdorff distance needs two non-empty sets")
    pa = np.column_stack([a.real, a.imag])
    pb = np.column_stack([b.real, b.imag])
    d_ab = cKDTree(pb).query(pa)[0].max()
    d_ba = cKDTree(pa).query(pb)[0].max()
    return float(max(d_ab, d_ba))


SPECTRAL_NOTES = (
    "point spectrum is empty for nonconstant symbols",
    "residual spectrum contains the image of Re s > 1/2",
    "continuous spectrum lies in the closure of the image of Re s > 0 "
    "minus the image of Re s > 1/2",
)


@dataclass(frozen=True)
class SpectrumReport:
    """Sampled image cloud.

    ``hull_bound`` is the largest jump of the symbol between neighbouring
    sample points, so every image point of the sampled parameter region is
    within ``hull_bound`` of the cloud.
    """

    point_cloud: np.ndarray
    hull_bound: float
    kind: str  # "full" or "approximate"
    torus_cloud: np.ndarray | None = None
    cross_hausdorff: float | None = None
    notes: tuple[str, ...] = field(default=SPECTRAL_NOTES)

    def summary(self) -> dict:
        out = {"kind": self.kind, "hull_bound": self.hull_bound, "points": int(self.point_cloud.size)}
        if self.cross_hausdorff is not None:
            out["cross_hausdorff"] = self.cross_hausdorff
        return out


def _max_step(values: np.ndarray, axis: int) -> float:
    if values.shape[axis] < 2:
        return 0.0
    return float(np.abs(np.diff(values, axis=axis)).max())


def spectrum_cloud(
    D: DirichletPoly,
    sigma_max: float = 10.0,
    T: float = 50.0,
    n_sigma: int = 400,
    n_t: int = 400,
    sigma_min: float = 1e-4,
) -> SpectrumReport:
    """Image of ``D`` on ``sigma`` log-spaced in ``[sigma_min, sigma_max]``, ``t`` in ``[-T, T]``."""
    if D.is_zero():
        raise ValueError("spectrum of the zero operator is {0}; nothing to sample")
    if not 0 < sigma_min < sigma_max:
        raise ValueError("need 0 < sigma_min < sigma_max")
    sig = np.geomspace(sigma_min, sigma_max, n_sigma)
    t = np.linspace(-T, T, n_t)
    s = sig[:, None] + 1j * t[None, :]
    vals = evaluate(D, s.ravel()).reshape(s.shape)
    bound = max(_max_step(vals, 0), _max_step(vals, 1))
    return SpectrumReport(vals.ravel(), bound, "full")


def torus_cloud_grid(nvars: int, max_points: int = 2**20, per_var: int = 512) -> int:
    r = per_var
    while nvars and r > 2 and r**nvars > max_points:
        r //= 2
    return r


def approximate_spectrum_cloud(
    D: DirichletPoly,
    T: float = 1e4,
    points: int = 10**6,
    torus_grid: int = 512,
) -> SpectrumReport:
    """Boundary-line image ``{D(it)}`` and torus image ``{F(w)}`` side by side."""
    if D.is_zero():
        raise ValueError("spectrum of the zero operator is {0}; nothing to sample")
    t = np.linspace(-T, T, points)
    line = evaluate(D, 1j * t)
    F = bohr_lift(D)
    if F.nvars == 0:
        torus = np.array([F[()]])
        bound = 0.0
    else:
        r = torus_cloud_grid(F.nvars, per_var=torus_grid)
        grid = grid_values(F, r)
        wrapped = np.concatenate([grid, grid.take([0], axis=0)], axis=0)
        bound = max(_max_step(np.moveaxis(grid, j, 0), 0) for j in range(F.nvars))
        bound = max(bound, _max_step(wrapped, 0))
        torus = grid.ravel()
    bound = max(bound, _max_step(line, 0))
    cross = hausdorff_distance(line, torus)
    return SpectrumReport(line, bound, "approximate", torus, cross)


# ---------------------------------------------------------------------------
# closed range


@dataclass(frozen=True)
class RangeCertificate:
    """``bound_m = min |F - lambda|`` over T^N; closed iff it exceeds the threshold.

    ``line_inf`` is the infimum of ``|D(it) - lambda|`` over a refined grid on
    ``[-T, T]`` (attained at ``line_time``); ``agree`` compares the two.
    """

    closed: bool
    bound_m: float
    witness: np.ndarray
    phases: np.ndarray
    tol: float
    line_inf: float
    line_time: float
    agree: bool
    threshold: float

    def summary(self) -> dict:
        return {
            "closed": self.closed,
            "m": self.bound_m,
            "tol": self.tol,
            "threshold": self.threshold,
            "witness_phases": [float(x) for x in self.phases],
            "line_inf": self.line_inf,
            "line_time": self.line_time,
            "agree": self.agree,
        }


def line_infimum(D: DirichletPoly, T: float = 1e4, points: int = 10**6, refine: int = 16) -> tuple[float, float]:
    """``min |D(it)|`` over ``t`` in ``[-T, T]``: grid search, then bounded
    Brent refinement around the best ``refine`` grid points."""
    t = np.linspace(-T, T, points)
    vals = np.abs(evaluate(D, 1j * t))
    h = t[1] - t[0] if points > 1 else T
    k = min(refine, vals.size)
    idx = np.argpartition(vals, k - 1)[:k]
    best_v, best_t = float(vals[idx].min()), float(t[idx[np.argmin(vals[idx])]])
    for i in sorted(idx.tolist()):
        res = optimize.minimize_scalar(
            lambda x: abs(complex(evaluate(D, 1j * x))),
            bounds=(t[i] - h, t[i] + h),
            method="bounded",
            options={"xatol": 1e-13},
        )
        if res.fun < best_v:
            best_v, best_t = float(res.fun), float(res.x)
    return best_v, best_t


def closed_range_certificate(
    D: DirichletPoly,
    lam: complex = 0.0,
    config: Config = DEFAULT_CONFIG,
    T: float = 1e4,
    points: int = 10**6,
    agreement_tol: float = 1e-4,
) -> RangeCertificate:
    shifted = D - complex(lam)
    if shifted.is_zero():
        raise ValueError("D - lambda is zero")
    ext = extremum_on_torus(bohr_lift(shifted), "min", grid=config.grid, refine_tol=config.refine_tol)
    line_v, line_t = line_infimum(shifted, T, points)
    return RangeCertificate(
        closed=ext.value > config.threshold,
        bound_m=ext.value,
        witness=ext.argpoint,
        phases=ext.phases,
        tol=ext.tol,
        line_inf=line_v,
        line_time=line_t,
        agree=abs(line_v - ext.value) <= agreement_tol,
        threshold=config.threshold,
    )


# ---------------------------------------------------------------------------
# failure of closed range between different exponents


@dataclass(frozen=True)
class RefusalReport:
    """Ratios ``||D Q_k||_q / ||Q_k||_p`` for the test family ``Q_k``."""

    ks: tuple[int, ...]
    ratios: tuple[float, ...]
    numerators: tuple[float, ...]
    denominators: tuple[float, ...]
    decay: float

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.ratios, self.ratios[1:]))

    def summary(self) -> dict:
        return {
            "k": list(self.ks),
            "ratios": list(self.ratios),
            "numerators": list(self.numerators),
            "denominators": list(self.denominators),
            "decay": self.decay,
            "decreasing": self.decreasing,
        }


def refusal_family(k: int, decay: float, nvars: int = 1) -> TorusPoly:
    """``Q_k(z) = sum_{j < 4^k} (j+1)^{-decay} z_1^j``."""
    j = np.arange(4**k)
    dense = (j + 1.0) ** (-decay)
    return TorusPoly(((int(e),), complex(c)) for e, c in zip(j, dense)).with_nvars(nvars)


def refusal_decay(p, q) -> float:
    """Coefficient decay placing the family inside H_q but outside H_p."""
    ip = 0.0 if p == INF else 1.0 / float(p)
    iq = 1.0 / float(q)
    return 1.0 - iq + (iq - ip) / 4.0


def cross_norm_range_refusal(D, p, q, kmax: int = 6, config: Config = DEFAULT_CONFIG) -> RefusalReport:
    """Evidence that ``E -> D E`` from H_p to H_q has no closed range (q < p).

    ``Q_k`` converges in H_q but not in H_p, so ``||D Q_k||_q`` stays bounded
    while ``||Q_k||_p`` grows and the ratio tends to 0.
    """
    p, q = as_exponent(p), as_exponent(q)
    if not q < p:
        raise ValueError("needs q < p")
    F = as_torus(D)
    if F.is_zero():
        raise ValueError("symbol must be nonzero")
    nvars = max(F.nvars, 1)
    F = F.with_nvars(nvars)
    a = refusal_decay(p, q)
    ks, ratios, nums, dens = [], [], [], []
    for k in range(1, kmax + 1):
        Q = refusal_family(k, a, nvars)
        # positive coefficients: the sup is the value at w = 1
        den = Q.abs_sum() if p == INF else hp_norm(Q, p, config).value
        num = hp_norm(F * Q, q, config).value
        ks.append(k)
        nums.append(num)
        dens.append(den)
        ratios.append(num / den)
    return RefusalReport(tuple(ks), tuple(ratios), tuple(nums), tuple(dens), a)


__all__ = [
    "OperatorMatrix",
    "smooth_basis",
    "matrix_of",
    "shift_matrix",
    "exact_columns",
    "commutator_defect",
    "commutant_test",
    "truncated_norm",
    "hausdorff_distance",
    "SpectrumReport",
    "spectrum_cloud",
    "approximate_spectrum_cloud",
    "RangeCertificate",
    "line_infimum",
    "closed_range_certificate",
    "RefusalReport",
    "refusal_family",
    "refusal_decay",
    "cross_norm_range_refusal",
]
