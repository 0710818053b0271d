"""Pointwise bound for H_p functions on the polydisc and the functions attaining it.

For ``|z_j| < 1`` every ``f`` in ``H_p`` satisfies

    |f(z)| <= (prod_j 1 / (1 - |z_j|^2))^{1/p} ||f||_p,

with equality for ``f_z(u) = prod_j ((1 - |z_j|^2) / (1 - conj(z_j) u_j)^2)^{1/p}``.
We build Taylor truncations of ``f_z`` from the binomial series of
``(1 - w)^{-2/p}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bohr import TorusPoly, as_torus
from .norms import INF, as_exponent, hp_norm
from .torus import DEFAULT_CONFIG, Config

# truncation accuracy guard on |z_j|
MAX_MODULUS = 0.99
DEFAULT_DEGREE = 64


@dataclass(frozen=True)
class ExtremalSpec:
    z: tuple[complex, ...]
    p: object

    def __post_init__(self) -> None:
        z = tuple(complex(v) for v in self.z)
        object.__setattr__(self, "z", z)
        p = as_exponent(self.p)
        if p == INF:
            raise ValueError("extremal functions need a finite exponent")
        object.__setattr__(self, "p", p)
        if z and max(abs(v) for v in z) >= 1.0:
            raise ValueError("z must lie in the open polydisc")

    @property
    def weight(self) -> float:
        """``(prod_j 1/(1-|z_j|^2))^{1/p}``, the sharp constant at z."""
        return _weight(self.z, float(self.p))


def _weight(z: Sequence[complex], p: float) -> float:
    log_w = -math.fsum(math.log1p(-abs(v) ** 2) for v in z)
    return math.exp(log_w / p)


def extremal_coefficients(z: complex, p: float, degree: int) -> np.ndarray:
    """Taylor coefficients of ``((1-|z|^2)/(1-conj(z) u)^2)^{1/p}`` up to ``degree``.

    No modulus guard: callers that need only low-order coefficients (which
    are exact at any degree) may use |z| close to 1.
    """
    if abs(z) >= 1.0:
        raise ValueError(f"|z| must be < 1, got {abs(z)}")
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    a = 2.0 / p
    zc = complex(z).conjugate()
    c = np.empty(degree + 1, dtype=complex)
    c[0] = 1.0
    for k in range(degree):
        c[k + 1] = c[k] * (k + a) / (k + 1) * zc
    return c * (1.0 - abs(z) ** 2) ** (1.0 / p)


def extremal_function(spec: ExtremalSpec, degree: int = DEFAULT_DEGREE, guard: bool = True) -> TorusPoly:
    """Truncation of ``f_z`` to per-variable degree ``degree``."""
    if guard and spec.z and max(abs(v) for v in spec.z) > MAX_MODULUS + 1e-12:
        raise ValueError(f"|z_j| must be <= {MAX_MODULUS} for an accurate truncation")
    p = float(spec.p)
    nvars = len(spec.z)
    dense = np.ones((), dtype=complex)
    for zj in spec.z:
        dense = np.multiply.outer(dense, extremal_coefficients(zj, p, degree))
    return TorusPoly.from_dense(dense, nvars=nvars)


def truncation_error_bound(z: Sequence[complex], degree: int) -> float:
    """``eps(d) = (d+2) r^{d+1} / (1-r)^2`` with ``r = max |z_j|``."""
    r = max((abs(v) for v in z), default=0.0)
    if r == 0.0:
        return 0.0
    return (degree + 2) * r ** (degree + 1) / (1.0 - r) ** 2


@dataclass(frozen=True)
class CGCheck:
    lhs: float
    rhs: float
    stderr: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 3.0 * self.stderr + 1e-12 * max(1.0, self.rhs)


def cg_bound(F, p, z: Sequence[complex], config: Config = DEFAULT_CONFIG) -> CGCheck:
    """Both sides of the pointwise bound at ``z`` for ``F`` (Dirichlet or torus)."""
    F = as_torus(F)
    p = as_exponent(p)
    z = [complex(v) for v in z]
    if len(z) < F.nvars:
        raise ValueError(f"z has {len(z)} coordinates, polynomial needs {F.nvars}")
    if any(abs(v) >= 1.0 for v in z):
        raise ValueError("z must lie in the open polydisc")
    lhs = abs(F(z))
    if p == INF:
        norm = hp_norm(F, p, config)
        return CGCheck(lhs, norm.value, norm.tol)
    norm = hp_norm(F, p, config)
    w = _weight(z, float(p))
    return CGCheck(lhs, w * norm.value, w * norm.stderr)
