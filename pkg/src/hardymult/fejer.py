"""Multivariate Fejér means as coefficient multipliers.

The order-n mean multiplies the coefficient of ``z^a`` by
``prod_j max(0, 1 - a_j/(n+1))``; the remainder is ``F`` minus that mean.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bohr import TorusPoly, as_torus


@dataclass(frozen=True)
class FejerSpec:
    n: int
    nvars: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"order must be >= 0, got {self.n}")
        if self.nvars < 0:
            raise ValueError(f"nvars must be >= 0, got {self.nvars}")

    def weight(self, alpha) -> float:
        w = 1.0
        for a in alpha:
            w *= max(0.0, 1.0 - abs(a) / (self.n + 1))
        return w


def _check(F: TorusPoly, spec: FejerSpec) -> TorusPoly:
    F = as_torus(F)
    if F.nvars > spec.nvars:
        raise ValueError(f"polynomial has {F.nvars} variables, spec allows {spec.nvars}")
    return F


def fejer_apply(F, spec: FejerSpec) -> TorusPoly:
    F = _check(F, spec)
    return TorusPoly({a: spec.weight(a) * c for a, c in F}, nvars=spec.nvars)


def fejer_remainder(F, spec: FejerSpec) -> TorusPoly:
    F = _check(F, spec)
    return TorusPoly({a: (1.0 - spec.weight(a)) * c for a, c in F}, nvars=spec.nvars)


def remainder_l2_bound(F, n: int) -> float:
    """``nvars * d/(n+1) * ||F||_2`` with ``d`` the largest per-variable degree.

    Each weight satisfies ``1 - w(a) <= sum_j a_j/(n+1)``, which gives this
    bound on ``||F - sigma_n F||_2``.
    """
    F = as_torus(F)
    d = max(F.degrees(), default=0)
    return F.nvars * d / (n + 1) * F.l2_norm()


def remainder_l2(F, n: int) -> float:
    F = as_torus(F)
    return fejer_remainder(F, FejerSpec(n, F.nvars)).l2_norm()


__all__ = ["FejerSpec", "fejer_apply", "fejer_remainder", "remainder_l2_bound", "remainder_l2"]
