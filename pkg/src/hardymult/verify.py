"""Numerical battery re-checking the main identities on worked examples.

Every check records what was measured, what was expected and the allowed
tolerance; a failing check is a report entry, never an exception.
"""

from __future__ import annotations

import math
import time
import traceback
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .arith import DirichletPoly
from .bohr import TorusPoly, bohr_lift
from .colegamelin import ExtremalSpec, cg_bound, extremal_coefficients, extremal_function
from .fejer import FejerSpec, fejer_apply
from .multipliers import NoMultiplierError, classify, ess_norm_bracket, multiplier_norm, operator_norm_lower_bound
from .norms import hp_norm, norm_hp_qmc, norm_vertical_line
from .operators import (
    approximate_spectrum_cloud,
    closed_range_certificate,
    commutant_test,
    cross_norm_range_refusal,
    hausdorff_distance,
    matrix_of,
    spectrum_cloud,
    truncated_norm,
)
from .torus import DEFAULT_CONFIG, Config

ONE_PLUS_2 = DirichletPoly({1: 1, 2: 1})
TWO_PLUS_2 = DirichletPoly({1: 2, 2: 1})
THREE_TERMS = DirichletPoly({1: 1, 2: 1, 3: 1})
H4 = 6.0**0.25


@dataclass
class Check:
    name: str
    passed: bool
    measured: object
    expected: object
    tol: object
    detail: str = ""
    seconds: float = 0.0


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)
    quick: bool = False
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def statuses(self) -> list[bool]:
        return [c.passed for c in self.checks]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "quick": self.quick,
            "seed": self.seed,
            "checks": [
                {**asdict(c), "status": "pass" if c.passed else "fail"} for c in self.checks
            ],
        }


def random_dirichlet(rng: np.random.Generator, max_n: int = 60, terms: int = 6, integer: bool = True) -> DirichletPoly:
    """Random polynomial with ``terms`` indices drawn from ``1..max_n``."""
    support = rng.choice(np.arange(1, max_n + 1), size=min(terms, max_n), replace=False)
    if integer:
        coef = rng.integers(-5, 6, size=len(support)) + 1j * rng.integers(-5, 6, size=len(support))
    else:
        coef = rng.standard_normal(len(support)) + 1j * rng.standard_normal(len(support))
    return DirichletPoly(zip(support.tolist(), coef.tolist()))


def random_torus(rng: np.random.Generator, nvars: int = 2, degree: int = 3, terms: int = 6) -> TorusPoly:
    alphas = rng.integers(0, degree + 1, size=(terms, nvars))
    coef = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
    return TorusPoly(zip(map(tuple, alphas.tolist()), coef.tolist()), nvars=nvars)


class _Battery:
    def __init__(self, config: Config, quick: bool):
        self.quick = quick
        self.config = config.override(samples=max(config.samples // 16, 256)) if quick else config
        self.k = 10.0 if quick else 3.0
        self.report = VerifyReport(quick=quick, seed=config.seed)

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, salt])

    def run(self, name: str, fn: Callable[[], tuple]) -> None:
        start = time.perf_counter()
        try:
            passed, measured, expected, tol, *rest = fn()
            detail = rest[0] if rest else ""
        except Exception as exc:  # a crash is a failed check
            passed, measured, expected, tol = False, None, None, None
            detail = "".join(traceback.format_exception_only(type(exc), exc)).strip()
        self.report.checks.append(
            Check(name, bool(passed), measured, expected, tol, detail, time.perf_counter() - start)
        )

    # -- individual checks -------------------------------------------------

    def lift_multiplicative(self):
        rng = self.rng(1)
        pairs = 50 if self.quick else 500
        worst = 0.0
        for i in range(pairs):
            integer = i % 2 == 0
            D = random_dirichlet(rng, 60, 6, integer)
            E = random_dirichlet(rng, 60, 6, integer)
            lhs, rhs = bohr_lift(D * E), bohr_lift(D) * bohr_lift(E)
            keys = set(lhs.terms) | set(rhs.terms)
            diff = max((abs(lhs[a] - rhs[a]) for a in keys), default=0.0)
            if integer and diff != 0:
                return False, diff, 0.0, 0.0, f"integer pair {i} not exact"
            worst = max(worst, diff)
        return worst <= 1e-12, worst, 0.0, 1e-12

    def norm_routes(self):
        exact = {1: 4 / math.pi, 2: math.sqrt(2), 4: H4}
        rows = []
        ok = True
        for p, val in exact.items():
            est = norm_hp_qmc(ONE_PLUS_2, p, self.config.plan(1))
            line = norm_vertical_line(ONE_PLUS_2, p, R=1e3 if self.quick else 1e4)
            q_ok = abs(est.value - val) <= max(self.k * est.stderr, 0.02 * val)
            l_ok = abs(line - val) <= 0.02 * val
            ok &= q_ok and l_ok
            rows.append({"p": p, "qmc": est.value, "stderr": est.stderr, "line": line, "exact": val})
        return ok, rows, "pairwise within max(k*stderr, 2%)", 0.02

    def multiplier_isometry(self):
        value = multiplier_norm(ONE_PLUS_2, 4, 2, self.config)
        trials = 20 if self.quick else 200
        lb = operator_norm_lower_bound(ONE_PLUS_2, 4, 2, trials, self.config).value
        ok = abs(value - H4) <= 1e-9 and lb >= 0.9 * H4 and lb <= value + 1e-9
        return ok, {"norm": value, "lower_bound": lb}, H4, 1e-9

    def endomorphism_isometry(self):
        norms = [truncated_norm(matrix_of(ONE_PLUS_2, 1, 2**k)) for k in range(1, 11)]
        mono = all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))
        lb = operator_norm_lower_bound(ONE_PLUS_2, 2, 2, 0, self.config).value
        ok = mono and abs(norms[-1] - 2.0) <= 0.04 and lb >= 1.95 and max(norms) <= 2.0 + 1e-6
        return ok, {"truncated": norms[-1], "monotone": mono, "lower_bound": lb}, 2.0, 0.04

    def zero_regime(self):
        cls = classify(2, 4)
        try:
            multiplier_norm(ONE_PLUS_2, 2, 4)
            raised = False
        except NoMultiplierError:
            raised = True
        rep = cross_norm_range_refusal(ONE_PLUS_2, 4, 2, config=self.config)
        r = rep.ratios[-1] / rep.ratios[0]
        ok = cls.space == "Zero" and raised and r <= 0.5 and rep.decreasing
        return ok, {"class": cls.space, "raised": raised, "ratio_k6_over_k1": r}, 0.5, 0.0

    def ess_brackets(self):
        out, ok = {}, True
        cases = {
            "4,2": ((4, 2), (math.sqrt(2), H4)),
            "2,2": ((2, 2), (2.0, 2.0)),
            "1,1": ((1, 1), (4 / math.pi, 2.0)),
        }
        for key, ((p, q), (lo, hi)) in cases.items():
            b = ess_norm_bracket(ONE_PLUS_2, p, q, self.config)
            lo_ok = abs(b.lower - lo) <= max(self.k * b.lower_stderr, 1e-9)
            hi_ok = abs(b.upper - hi) <= max(self.k * b.upper_stderr, 1e-9, b.tolerance)
            ok &= lo_ok and hi_ok and b.consistent()
            out[key] = [b.lower, b.upper]
        return ok, out, {k: list(v[1]) for k, v in cases.items()}, "k*stderr or 1e-9"

    def spectrum(self):
        rep = spectrum_cloud(TWO_PLUS_2, 10.0, 50.0, 400, 400)
        h = disk_hausdorff(rep.point_cloud, 2.0, 1.0, 0.01 if self.quick else 0.004)
        return h < 0.05, h, 0.0, 0.05

    def approximate_spectrum(self):
        T, pts = (1e3, 10**5) if self.quick else (1e4, 10**6)
        rep = approximate_spectrum_cloud(TWO_PLUS_2, T, pts)
        h_line = circle_hausdorff(rep.point_cloud, 2.0, 1.0)
        h_torus = circle_hausdorff(rep.torus_cloud, 2.0, 1.0)
        rep3 = approximate_spectrum_cloud(THREE_TERMS, T, pts)
        ok = h_line < 0.02 and h_torus < 0.02 and rep3.cross_hausdorff < 0.05
        return ok, {"line": h_line, "torus": h_torus, "cross_three_terms": rep3.cross_hausdorff}, 0.0, [0.02, 0.05]

    def closed_range(self):
        T, pts = (1e3, 10**5) if self.quick else (1e4, 10**6)
        a = closed_range_certificate(TWO_PLUS_2, 0, self.config, T, pts)
        b = closed_range_certificate(ONE_PLUS_2, 0, self.config, T, pts)
        ok = (
            a.closed
            and abs(a.bound_m - 1) <= 1e-6
            and not b.closed
            and b.bound_m <= 1e-6
            and abs(a.bound_m - a.line_inf) <= 1e-4
            and abs(b.bound_m - b.line_inf) <= 1e-4
        )
        return ok, {"m_closed": a.bound_m, "m_open": b.bound_m, "line": [a.line_inf, b.line_inf]}, [1.0, 0.0], 1e-6

    def commutant(self):
        rng = self.rng(2)
        n_inst, n_pert = (10, 20) if self.quick else (50, 100)
        cutoff = 48
        passes = 0
        for _ in range(n_inst):
            D = random_dirichlet(rng, 30, 5, integer=False)
            passes += commutant_test(matrix_of(D, 3, cutoff), 3, cutoff, 1e-12)
        fails = 0
        for _ in range(n_pert):
            D = random_dirichlet(rng, 30, 5, integer=False)
            A = matrix_of(D, 3, cutoff).entries.copy()
            i = rng.integers(0, A.shape[0])
            j = rng.integers(1, A.shape[1])  # column of n = 1 can absorb a new coefficient
            A[i, j] += 0.1 * np.exp(2j * np.pi * rng.random())
            fails += not commutant_test(A, 3, cutoff, 1e-12)
        return passes == n_inst and fails == n_pert, [passes, fails], [n_inst, n_pert], 1e-12

    def pointwise_bound(self):
        rng = self.rng(3)
        triples = 100 if self.quick else 1000
        cfg = self.config.override(samples=min(self.config.samples, 2**12))
        bad = 0
        for _ in range(triples):
            F = random_torus(rng, 2, 3, 5)
            p = [1, 2, 4][rng.integers(0, 3)]
            z = 0.95 * np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2))
            check = cg_bound(F, p, z, cfg)
            bad += not (check.lhs <= check.rhs + self.k * check.stderr + 1e-12)
        f = extremal_function(ExtremalSpec((0.5,), 2), 40)
        n2, val = f.l2_norm(), abs(f([0.5]))
        ok = bad == 0 and abs(n2 - 1) <= 1e-9 and abs(val - (4 / 3) ** 0.5) <= 1e-9
        return ok, {"violations": bad, "norm": n2, "value": val}, {"norm": 1.0, "value": (4 / 3) ** 0.5}, 1e-9

    def fejer(self):
        rng = self.rng(4)
        count = 20 if self.quick else 100
        cfg = self.config.override(samples=min(self.config.samples, 2**13))
        bad = 0
        for _ in range(count):
            F = random_torus(rng, 2, 4, 6)
            spec = FejerSpec(int(rng.integers(0, 5)), 2)
            a, b = hp_norm(fejer_apply(F, spec), 1, cfg), hp_norm(F, 1, cfg)
            bad += not (a.value <= b.value + self.k * math.hypot(a.stderr, b.stderr))
        F = bohr_lift(ONE_PLUS_2)
        seq = []
        for z in (0.9, 0.99, 0.999):
            h = TorusPoly.from_dense(extremal_coefficients(z, 1.0, 4))
            seq.append(hp_norm(fejer_apply(F * h, FejerSpec(4, 1)), 1, self.config).value)
        decreasing = seq[0] > seq[1] > seq[2]
        return bad == 0 and decreasing and seq[-1] < 0.1, {"violations": bad, "decay": seq}, "decreasing, last < 0.1", 0.1

    def all(self) -> VerifyReport:
        self.run("lift multiplicativity", self.lift_multiplicative)
        self.run("norm routes agree", self.norm_routes)
        self.run("multiplier norm (4,2)", self.multiplier_isometry)
        self.run("endomorphism norm (2,2)", self.endomorphism_isometry)
        self.run("zero regime and range refusal", self.zero_regime)
        self.run("essential-norm brackets", self.ess_brackets)
        self.run("spectrum fills disk", self.spectrum)
        self.run("approximate spectrum", self.approximate_spectrum)
        self.run("closed range certificates", self.closed_range)
        self.run("commutant characterization", self.commutant)
        self.run("pointwise bound and extremals", self.pointwise_bound)
        self.run("fejer contraction and decay", self.fejer)
        return self.report


def disk_hausdorff(cloud: np.ndarray, center: complex, radius: float, spacing: float = 0.004) -> float:
    """Hausdorff distance from a cloud to the closed disk, the disk sampled on a square grid."""
    x = np.arange(-radius, radius + spacing / 2, spacing)
    X, Y = np.meshgrid(x, x)
    disk = (X + 1j * Y).ravel()
    disk = disk[np.abs(disk) <= radius] + center
    outside = float(np.maximum(np.abs(np.asarray(cloud) - center) - radius, 0.0).max())
    return max(outside, hausdorff_distance(cloud, disk) if disk.size else 0.0)


def circle_hausdorff(cloud: np.ndarray, center: complex, radius: float, samples: int = 100_000) -> float:
    circle = center + radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    return hausdorff_distance(cloud, circle)


def run_verify(config: Config = DEFAULT_CONFIG, quick: bool = False) -> VerifyReport:
    return _Battery(config, quick).all()
