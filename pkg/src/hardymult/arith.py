"""Exact arithmetic of Dirichlet polynomials.

A Dirichlet polynomial ``D = sum a_n n^{-s}`` is stored as a finite map
``n -> a_n`` with complex coefficients. The module also owns the prime
bookkeeping (prime list, factorization into exponent vectors) that the Bohr
lift is built on.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MAX_INDEX = 2**63 - 1

# primes up to 311: the first 64 primes
_SMALL_PRIME_LIMIT = 311


def _sieve(limit: int) -> list[int]:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.flatnonzero(flags).tolist()


_PRIMES: list[int] = _sieve(_SMALL_PRIME_LIMIT)
_PRIME_LIMIT = _SMALL_PRIME_LIMIT
assert len(_PRIMES) == 64


def _extend_primes(limit: int) -> None:
    global _PRIMES, _PRIME_LIMIT
    if limit <= _PRIME_LIMIT:
        return
    new_limit = max(limit, 2 * _PRIME_LIMIT)
    _PRIMES = _sieve(new_limit)
    _PRIME_LIMIT = new_limit


def nth_prime(j: int) -> int:
    """Return the j-th prime, 1-based (``nth_prime(1) == 2``)."""
    if j < 1:
        raise ValueError(f"prime index must be >= 1, got {j}")
    while len(_PRIMES) < j:
        _extend_primes(2 * _PRIME_LIMIT)
    return _PRIMES[j - 1]


def first_primes(count: int) -> list[int]:
    if count <= 0:
        return []
    nth_prime(count)
    return _PRIMES[:count]


# prime_index sieves up to p; keep that affordable
PRIME_INDEX_LIMIT = 10**8


def prime_index(p: int) -> int:
    """Return j such that p is the j-th prime."""
    if p > PRIME_INDEX_LIMIT:
        raise ValueError(f"prime {p} is beyond the indexable range ({PRIME_INDEX_LIMIT})")
    _extend_primes(p)
    j = bisect.bisect_left(_PRIMES, p)
    if j == len(_PRIMES) or _PRIMES[j] != p:
        raise ValueError(f"{p} is not prime")
    return j + 1


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector of a prime factorization ``n = p_1^a_1 ... p_M^a_M``.

    Stored sparsely as ``(prime, exponent)`` pairs so that factorizations
    involving a huge prime (whose position in the prime sequence cannot be
    computed cheaply) are still representable. ``vector`` gives the dense
    exponent tuple with trailing zeros removed; ``()`` stands for n = 1.
    """

    factors: tuple[tuple[int, int], ...] = ()

    @property
    def vector(self) -> tuple[int, ...]:
        if not self.factors:
            return ()
        idx = [prime_index(p) for p, _ in self.factors]
        out = [0] * idx[-1]
        for j, (_, e) in zip(idx, self.factors):
            out[j - 1] = e
        return tuple(out)

    @classmethod
    def from_vector(cls, alpha: Sequence[int]) -> "MultiIndex":
        alpha = list(alpha)
        if any(a < 0 for a in alpha):
            raise ValueError(f"negative exponent in {alpha}")
        while alpha and alpha[-1] == 0:
            alpha.pop()
        primes = first_primes(len(alpha))
        return cls(tuple((p, a) for p, a in zip(primes, alpha) if a))

    @property
    def gpd(self) -> int:
        """Greatest prime divisor (1 for the empty factorization)."""
        return self.factors[-1][0] if self.factors else 1

    def __len__(self) -> int:
        return len(self.vector)


def factorize(n: int) -> MultiIndex:
    """Factor ``n`` by trial division.

    The first 64 primes are tried from the cached sieve, then odd
    candidates of the form 6k +- 1 are tested in vectorized chunks.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"factorize expects an integer, got {type(n).__name__}")
    n = int(n)
    if n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n}")
    if n > MAX_INDEX:
        raise ValueError(f"{n} exceeds the supported index bound 2**63-1")
    factors: list[tuple[int, int]] = []
    m = n
    for p in _PRIMES[:64]:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1 and _SMALL_PRIME_LIMIT**2 < m:
        start = _SMALL_PRIME_LIMIT + 2  # 313
        chunk = 1 << 20
        base = start - start % 6  # 312
        while True:
            limit = math.isqrt(m)
            if base - 1 > limit:
                break
            # never build more candidates than the range up to sqrt(m) needs
            size = min(chunk, (limit - base) // 6 + 2)
            ks = np.arange(base, base + 6 * size, 6, dtype=np.int64)
            cand = np.concatenate([ks - 1, ks + 1])
            cand.sort()
            cand = cand[(cand >= start) & (cand <= limit)]
            hits = cand[m % cand == 0] if cand.size else cand
            if hits.size:
                p = int(hits[0])
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                factors.append((p, e))
                base = p - p % 6
                continue
            base += 6 * size
    if m > 1:
        factors.append((m, 1))
    return MultiIndex(tuple(factors))


def unfactorize(alpha: MultiIndex | Sequence[int]) -> int:
    if not isinstance(alpha, MultiIndex):
        alpha = MultiIndex.from_vector(alpha)
    n = 1
    for p, e in alpha.factors:
        n *= p**e
    return n


def is_smooth(n: int, nprimes: int) -> bool:
    """True iff every prime factor of n is among the first ``nprimes`` primes."""
    for p in first_primes(nprimes):
        while n % p == 0:
            n //= p
    return n == 1


def gpd_index(n: int) -> int:
    """Index of the greatest prime divisor of n (0 for n = 1)."""
    g = factorize(n).gpd
    return 0 if g == 1 else prime_index(g)


class DirichletPoly:
    """Finitely supported Dirichlet polynomial ``sum a_n n^{-s}``.

    Immutable. Coefficients are stored sorted by n and exact zeros are
    pruned; no epsilon pruning ever happens.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, complex] = {}
        for n, a in items:
            if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
                raise TypeError(f"index must be an integer, got {n!r}")
            n = int(n)
            if n < 1:
                raise ValueError(f"index must be >= 1, got {n}")
            if n > MAX_INDEX:
                raise ValueError(f"index {n} exceeds 2**63-1")
            acc[n] = acc.get(n, 0j) + complex(a)
        self._coeffs = {n: acc[n] for n in sorted(acc) if acc[n] != 0}

    # construction helpers
    @classmethod
    def constant(cls, c: complex) -> "DirichletPoly":
        return cls({1: c})

    @classmethod
    def monomial(cls, n: int, c: complex = 1.0) -> "DirichletPoly":
        return cls({n: c})

    @classmethod
    def zeta_partial(cls, nmax: int) -> "DirichletPoly":
        """``sum_{n <= nmax} n^{-s}``."""
        return cls({n: 1.0 for n in range(1, nmax + 1)})

    @property
    def coeffs(self) -> Mapping[int, complex]:
        return dict(self._coeffs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._coeffs)

    @property
    def support_bound(self) -> int:
        """Largest n with a_n != 0 (0 for the zero polynomial)."""
        return next(reversed(self._coeffs)) if self._coeffs else 0

    @property
    def nprimes(self) -> int:
        """Minimal prime budget N with every index N-smooth."""
        return max((gpd_index(n) for n in self._coeffs), default=0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_constant(self) -> bool:
        return all(n == 1 for n in self._coeffs)

    def __getitem__(self, n: int) -> complex:
        return self._coeffs.get(n, 0j)

    def __iter__(self) -> Iterator[tuple[int, complex]]:
        return iter(self._coeffs.items())

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirichletPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(tuple(self._coeffs.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {a!r}" for n, a in self._coeffs.items())
        return f"DirichletPoly({{{body}}})"

    def __add__(self, other: "DirichletPoly | complex") -> "DirichletPoly":
        if not isinstance(other, DirichletPoly):
            other = DirichletPoly.constant(other)
        return DirichletPoly(list(self) + list(other))

    __radd__ = __add__

    def __neg__(self) -> "DirichletPoly":
        return DirichletPoly({n: -a for n, a in self})

    def __sub__(self, other: "DirichletPoly | complex") -> "DirichletPoly":
        if not isinstance(other, DirichletPoly):
            other = DirichletPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other: complex) -> "DirichletPoly":
        return DirichletPoly.constant(other) - self

    def __mul__(self, other: "DirichletPoly | complex") -> "DirichletPoly":
        if isinstance(other, DirichletPoly):
            return dirichlet_product(self, other)
        c = complex(other)
        return DirichletPoly({n: a * c for n, a in self})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DirichletPoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = DirichletPoly.constant(1.0)
        for _ in range(k):
            out = dirichlet_product(out, self)
        return out

    def conj(self) -> "DirichletPoly":
        return DirichletPoly({n: a.conjugate() for n, a in self})

    def to_json(self) -> dict:
        return {"terms": [{"n": n, "re": a.real, "im": a.imag} for n, a in self]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "DirichletPoly":
        try:
            terms = obj["terms"]
            return cls((int(t["n"]), complex(float(t["re"]), float(t.get("im", 0.0)))) for t in terms)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed Dirichlet polynomial JSON: {exc}") from exc


def dirichlet_product(D: DirichletPoly, E: DirichletPoly) -> DirichletPoly:
    """Dirichlet convolution ``c_n = sum_{jk=n} a_j b_k``."""
    if D.is_zero() or E.is_zero():
        return DirichletPoly()
    if D.support_bound * E.support_bound > MAX_INDEX:
        raise ValueError("product support exceeds 2**63-1")
    if len(D) * len(E) <= 4096:
        acc: dict[int, complex] = {}
        for j, a in D:
            for k, b in E:
                acc[j * k] = acc.get(j * k, 0j) + a * b
        return DirichletPoly(acc)
    dn = np.fromiter(D.support, dtype=np.int64)
    en = np.fromiter(E.support, dtype=np.int64)
    da = np.array([a for _, a in D], dtype=complex)
    ea = np.array([b for _, b in E], dtype=complex)
    keys = np.multiply.outer(dn, en).ravel()
    vals = np.multiply.outer(da, ea).ravel()
    uniq, inv = np.unique(keys, return_inverse=True)
    re = np.bincount(inv, weights=vals.real, minlength=uniq.size)
    im = np.bincount(inv, weights=vals.imag, minlength=uniq.size)
    return DirichletPoly(zip(uniq.tolist(), (re + 1j * im).tolist()))


def restrict(D: DirichletPoly, nprimes: int) -> DirichletPoly:
    """Keep the terms whose index factors over the first ``nprimes`` primes."""
    if nprimes < 0:
        raise ValueError(f"prime budget must be >= 0, got {nprimes}")
    return DirichletPoly({n: a for n, a in D if is_smooth(n, nprimes)})


@dataclass(frozen=True)
class Character:
    """Completely multiplicative unimodular function, given on the primes.

    ``values_on_primes[j]`` is the value at the (j+1)-th prime; it is the
    torus point omega identified with the character.
    """

    values_on_primes: tuple[complex, ...]

    def __post_init__(self) -> None:
        vals = tuple(complex(w) for w in self.values_on_primes)
        for j, w in enumerate(vals):
            if abs(abs(w) - 1.0) > 1e-12:
                raise ValueError(f"character value {w} at prime {nth_prime(j + 1)} is not unimodular")
        object.__setattr__(self, "values_on_primes", vals)

    @classmethod
    def from_phases(cls, phases: Sequence[float]) -> "Character":
        return cls(tuple(cmath.exp(1j * t) for t in phases))

    def conj(self) -> "Character":
        return Character(tuple(w.conjugate() for w in self.values_on_primes))

    def __call__(self, n: int) -> complex:
        val = 1 + 0j
        for p, e in factorize(n).factors:
            j = prime_index(p)
            if j > len(self.values_on_primes):
                raise ValueError(f"character has no value at prime {p}")
            w = self.values_on_primes[j - 1]
            for _ in range(e):
                val *= w
        return val


def twist(D: DirichletPoly, chi: Character) -> DirichletPoly:
    """``D^chi(s) = sum a_n chi(n) n^{-s}``."""
    return DirichletPoly({n: a * chi(n) for n, a in D})


def evaluate(D: DirichletPoly, s: complex | np.ndarray) -> complex | np.ndarray:
    """Evaluate ``sum a_n n^{-s}`` at a point or an array of points."""
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.zeros(s_arr.shape, dtype=complex)
    if not D.is_zero():
        logn = np.log(np.array(D.support, dtype=float))
        coef = np.array([a for _, a in D], dtype=complex)
        flat = s_arr.ravel()
        res = np.empty(flat.shape, dtype=complex)
        step = max(1, 2_000_000 // len(coef))
        for i in range(0, flat.size, step):
            block = flat[i : i + step]
            res[i : i + step] = np.exp(-np.multiply.outer(block, logn)) @ coef
        out = res.reshape(s_arr.shape)
    return complex(out[0]) if scalar else out
