"""Bohr lift and transform between Dirichlet polynomials and polynomials on
the polytorus / polydisc.

``n = p_1^a_1 ... p_N^a_N`` corresponds to the monomial ``z^a``. The lift of
a Dirichlet polynomial is a :class:`TorusPoly`, an analytic polynomial in N
variables with the same coefficients.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy import signal

from .arith import DirichletPoly, MultiIndex, factorize, first_primes, prime_index

Alpha = tuple[int, ...]


def _strip(alpha: Iterable[int]) -> Alpha:
    alpha = [int(a) for a in alpha]
    while alpha and alpha[-1] == 0:
        alpha.pop()
    return tuple(alpha)


class TorusPoly:
    """Analytic polynomial ``F(w) = sum_a c_a w^a`` in ``nvars`` variables.

    Keys are exponent tuples with trailing zeros stripped, kept in
    lexicographic order so iteration (and JSON output) is reproducible.
    """

    __slots__ = ("_terms", "nvars")

    def __init__(self, terms: Mapping[Sequence[int], complex] | Iterable = (), nvars: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Alpha, complex] = {}
        for alpha, c in items:
            key = _strip(alpha)
            if any(a < 0 for a in key):
                raise ValueError(f"negative exponent {key}: only analytic polynomials are supported")
            acc[key] = acc.get(key, 0j) + complex(c)
        self._terms = {k: acc[k] for k in sorted(acc) if acc[k] != 0}
        needed = max((len(k) for k in self._terms), default=0)
        if nvars is None:
            nvars = needed
        if nvars < needed:
            raise ValueError(f"nvars={nvars} but a term uses {needed} variables")
        self.nvars = int(nvars)

    @classmethod
    def constant(cls, c: complex, nvars: int = 0) -> "TorusPoly":
        return cls({(): c}, nvars=nvars)

    @classmethod
    def monomial(cls, alpha: Sequence[int], c: complex = 1.0, nvars: int | None = None) -> "TorusPoly":
        return cls({tuple(alpha): c}, nvars=nvars)

    @property
    def terms(self) -> Mapping[Alpha, complex]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[Alpha, complex]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, alpha: Sequence[int]) -> complex:
        return self._terms.get(_strip(alpha), 0j)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TorusPoly):
            return NotImplemented
        return self._terms == other._terms and self.nvars == other.nvars

    def __hash__(self) -> int:
        return hash((tuple(self._terms.items()), self.nvars))

    def __repr__(self) -> str:
        return f"TorusPoly({self._terms!r}, nvars={self.nvars})"

    def is_zero(self) -> bool:
        return not self._terms

    def with_nvars(self, nvars: int) -> "TorusPoly":
        return TorusPoly(self._terms, nvars=nvars)

    def degrees(self) -> tuple[int, ...]:
        """Per-variable degree, length ``nvars``."""
        deg = [0] * self.nvars
        for alpha in self._terms:
            for j, a in enumerate(alpha):
                deg[j] = max(deg[j], a)
        return tuple(deg)

    def exponent_array(self) -> np.ndarray:
        """(terms, nvars) integer array of exponents in key order."""
        arr = np.zeros((len(self._terms), self.nvars), dtype=np.int64)
        for i, alpha in enumerate(self._terms):
            arr[i, : len(alpha)] = alpha
        return arr

    def coeff_array(self) -> np.ndarray:
        return np.fromiter(self._terms.values(), dtype=complex, count=len(self._terms))

    def l2_norm(self) -> float:
        return math.sqrt(math.fsum(abs(c) ** 2 for c in self._terms.values()))

    def abs_sum(self) -> float:
        return math.fsum(abs(c) for c in self._terms.values())

    def to_dense(self, shape: Sequence[int] | None = None) -> np.ndarray:
        if shape is None:
            shape = tuple(d + 1 for d in self.degrees())
        arr = np.zeros(tuple(shape), dtype=complex)
        for alpha, c in self._terms.items():
            idx = tuple(alpha) + (0,) * (len(shape) - len(alpha))
            arr[idx] += c
        return arr

    @classmethod
    def from_dense(cls, arr: np.ndarray, nvars: int | None = None) -> "TorusPoly":
        nz = np.argwhere(arr != 0)
        vals = arr[tuple(nz.T)] if nz.size else np.zeros(0, dtype=complex)
        return cls(zip(map(tuple, nz.tolist()), vals.tolist()), nvars=arr.ndim if nvars is None else nvars)

    def __add__(self, other: "TorusPoly | complex") -> "TorusPoly":
        if not isinstance(other, TorusPoly):
            other = TorusPoly.constant(other)
        return TorusPoly(list(self) + list(other), nvars=max(self.nvars, other.nvars))

    __radd__ = __add__

    def __neg__(self) -> "TorusPoly":
        return TorusPoly({a: -c for a, c in self}, nvars=self.nvars)

    def __sub__(self, other: "TorusPoly | complex") -> "TorusPoly":
        if not isinstance(other, TorusPoly):
            other = TorusPoly.constant(other)
        return self + (-other)

    def __mul__(self, other: "TorusPoly | complex") -> "TorusPoly":
        if isinstance(other, TorusPoly):
            return poly_product(self, other)
        c = complex(other)
        return TorusPoly({a: v * c for a, v in self}, nvars=self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TorusPoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = TorusPoly.constant(1.0, nvars=self.nvars)
        base = self
        while k:
            if k & 1:
                out = poly_product(out, base)
            k >>= 1
            if k:
                base = poly_product(base, base)
        return out

    def rotate(self, omega: Sequence[complex]) -> "TorusPoly":
        """``u -> F(omega * u)``, i.e. the lift of the character twist."""
        omega = list(omega)
        if len(omega) < self.nvars:
            raise ValueError(f"need {self.nvars} rotation values, got {len(omega)}")
        out = {}
        for alpha, c in self:
            w = 1 + 0j
            for j, a in enumerate(alpha):
                for _ in range(a):
                    w *= omega[j]
            out[alpha] = c * w
        return TorusPoly(out, nvars=self.nvars)

    def derivative(self, j: int) -> "TorusPoly":
        """Derivative in the phase of variable j: ``d/dtheta_j F(e^{i theta})``."""
        return TorusPoly({a: 1j * a[j] * c for a, c in self if len(a) > j}, nvars=self.nvars)

    def values(self, z: np.ndarray) -> np.ndarray:
        """Evaluate at many points; ``z`` has shape (M, >= nvars)."""
        z = np.asarray(z, dtype=complex)
        if z.ndim == 1:
            z = z[None, :]
        if z.shape[1] < self.nvars:
            raise ValueError(f"points have {z.shape[1]} coordinates, polynomial needs {self.nvars}")
        m = z.shape[0]
        if not self._terms:
            return np.zeros(m, dtype=complex)
        expo = self.exponent_array()
        coef = self.coeff_array()
        degs = expo.max(axis=0) if expo.size else np.zeros(0, dtype=np.int64)
        out = np.empty(m, dtype=complex)
        step = max(1, 4_000_000 // (len(coef) + int(degs.sum()) + 1))
        for i in range(0, m, step):
            zb = z[i : i + step, : self.nvars]
            acc = np.ones((zb.shape[0], len(coef)), dtype=complex)
            for j in range(self.nvars):
                if degs[j] == 0:
                    continue
                powers = np.ones((zb.shape[0], degs[j] + 1), dtype=complex)
                for k in range(1, degs[j] + 1):
                    powers[:, k] = powers[:, k - 1] * zb[:, j]
                acc *= powers[:, expo[:, j]]
            out[i : i + step] = acc @ coef
        return out

    def values_at_phases(self, theta: np.ndarray) -> np.ndarray:
        return self.values(np.exp(1j * np.asarray(theta, dtype=float)))

    def __call__(self, z: Sequence[complex]) -> complex:
        return eval_lift(self, z)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [{"alpha": list(a), "re": c.real, "im": c.imag} for a, c in self],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "TorusPoly":
        try:
            return cls(
                ((tuple(t["alpha"]), complex(float(t["re"]), float(t.get("im", 0.0)))) for t in obj["terms"]),
                nvars=obj.get("nvars"),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed torus polynomial JSON: {exc}") from exc


def bohr_lift(D: DirichletPoly) -> TorusPoly:
    """Dirichlet polynomial -> polynomial in as many variables as its prime budget."""
    terms = {}
    for n, a in D:
        terms[factorize(n).vector] = a
    return TorusPoly(terms)


def bohr_transform(F: TorusPoly) -> DirichletPoly:
    """Inverse of :func:`bohr_lift`."""
    primes = first_primes(F.nvars)
    out = {}
    for alpha, c in F:
        n = 1
        for p, a in zip(primes, alpha):
            n *= p**a
        out[n] = c
    return DirichletPoly(out)


# dict convolution below this many term pairs; dense arrays above
_SPARSE_PAIRS = 20_000


def poly_product(F: TorusPoly, G: TorusPoly) -> TorusPoly:
    """``c_a(FG) = sum_{b+g=a} c_b(F) c_g(G)``."""
    nvars = max(F.nvars, G.nvars)
    if F.is_zero() or G.is_zero():
        return TorusPoly((), nvars=nvars)
    if len(F) * len(G) <= _SPARSE_PAIRS:
        acc: dict[Alpha, complex] = {}
        for a, c in F:
            for b, d in G:
                n = max(len(a), len(b))
                key = tuple((a[j] if j < len(a) else 0) + (b[j] if j < len(b) else 0) for j in range(n))
                acc[key] = acc.get(key, 0j) + c * d
        return TorusPoly(acc, nvars=nvars)
    df = F.with_nvars(nvars).degrees()
    dg = G.with_nvars(nvars).degrees()
    a = F.to_dense(tuple(d + 1 for d in df))
    b = G.to_dense(tuple(d + 1 for d in dg))
    method = "direct" if a.size * b.size <= 2 * 10**8 else "fft"
    prod = signal.convolve(a, b, method=method)
    return TorusPoly.from_dense(prod, nvars=nvars)


def eval_lift(F: TorusPoly, z: Sequence[complex]) -> complex:
    """Evaluate the lift at one point of the polydisc or polytorus."""
    z = list(z)
    if len(z) < F.nvars:
        raise ValueError(f"point has {len(z)} coordinates, polynomial needs {F.nvars}")
    total = 0j
    for alpha, c in F:
        w = c
        for j, a in enumerate(alpha):
            w *= z[j] ** a
        total += w
    return total


def kronecker_point(nvars: int, t: float) -> np.ndarray:
    """Torus point ``(p_j^{-it})_j`` reached by the Kronecker flow at time t."""
    primes = np.array(first_primes(nvars), dtype=float)
    return np.exp(-1j * t * np.log(primes))


def as_torus(D: DirichletPoly | TorusPoly) -> TorusPoly:
    return D if isinstance(D, TorusPoly) else bohr_lift(D)


__all__ = [
    "TorusPoly",
    "MultiIndex",
    "bohr_lift",
    "bohr_transform",
    "poly_product",
    "eval_lift",
    "kronecker_point",
    "as_torus",
    "prime_index",
]
