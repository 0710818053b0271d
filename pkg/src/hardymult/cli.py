"""Command-line front end.

Every command prints one JSON document on stdout. ``--pretty`` additionally
writes a human-readable table to stderr. Point clouds go to CSV files.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .arith import DirichletPoly
from .bohr import bohr_lift, bohr_transform
from .colegamelin import DEFAULT_DEGREE, ExtremalSpec, extremal_function, truncation_error_bound
from .fejer import FejerSpec, fejer_apply
from .multipliers import NoMultiplierError, classify, ess_norm_bracket, multiplier_result, operator_norm_lower_bound
from .norms import as_exponent, exponent_json, hp_norm
from .operators import (
    approximate_spectrum_cloud,
    closed_range_certificate,
    commutator_defect,
    matrix_of,
    spectrum_cloud,
    truncated_norm,
)
from .parsing import load_series
from .torus import DEFAULT_CONFIG, Config, extremum_on_torus
from .verify import run_verify


def to_jsonable(obj):
    """Complex numbers become ``{"re", "im"}``; infinities become ``"inf"``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return exponent_json(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(obj.real)), "im": to_jsonable(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def parse_complex(text: str) -> complex:
    return complex(text.strip().replace(" ", "").replace("i", "j"))


def parse_complex_list(text: str) -> list[complex]:
    return [parse_complex(part) for part in text.split(",") if part.strip()]


def write_csv(path: str, values: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im"])
        for v in np.asarray(values).ravel():
            w.writerow([repr(float(v.real)), repr(float(v.imag))])


def _config(args) -> Config:
    cfg = Config.load(args.config) if args.config else DEFAULT_CONFIG
    return cfg.override(seed=args.seed, samples=args.samples, grid=args.grid)


def _series(args) -> DirichletPoly:
    if args.series is None:
        raise ValueError("--series is required")
    text = args.series
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    return load_series(text)


def _certificate(D: DirichletPoly, lam: complex, cfg: Config, T: float, points: int) -> dict:
    if (D - lam).is_zero():
        return {"closed": None, "m": None}
    cert = closed_range_certificate(D, lam, cfg, T, points)
    return {"closed": cert.closed, "m": cert.bound_m}


# -- commands ---------------------------------------------------------------


def cmd_norm(args, cfg):
    return hp_norm(_series(args), args.p, cfg).to_json()


def cmd_hinf(args, cfg):
    F = bohr_lift(_series(args))
    ext = extremum_on_torus(F, "max", grid=cfg.grid, refine_tol=cfg.refine_tol)
    return {
        "p": "inf",
        "value": ext.value,
        "stderr": 0.0,
        "method": "grid",
        "tol": ext.tol,
        "grid": ext.grid,
        "witness_phases": ext.phases,
    }


def _uncertainty(res) -> float:
    return 3.0 * res.stderr + res.tol


def cmd_mult_norm(args, cfg):
    D = _series(args)
    cls = classify(args.p, args.q)
    res = multiplier_result(D, args.p, args.q, cfg)
    lb = operator_norm_lower_bound(D, args.p, args.q, args.trials, cfg)
    return {
        "lower": lb.value,
        "value": res.value,
        "upper": res.value + _uncertainty(res),
        "regime": str(cls),
        "method": res.method,
        "stderr": res.stderr,
        "lower_source": lb.source,
    }


def cmd_ess_bracket(args, cfg):
    b = ess_norm_bracket(_series(args), args.p, args.q, cfg)
    return {
        "lower": b.lower,
        "value": b.lower if b.lower == b.upper else None,
        "upper": b.upper,
        "regime": b.regime,
        "lower_stderr": b.lower_stderr,
        "upper_stderr": b.upper_stderr,
        "tol": b.tolerance,
    }


def cmd_op_norm(args, cfg):
    D = _series(args)
    A = matrix_of(D, args.nprimes, args.cutoff)
    return {
        "value": truncated_norm(A, seed=cfg.seed),
        "cutoff": args.cutoff,
        "nprimes": A.nprimes,
        "basis_size": len(A.basis),
    }


def _load_matrix(path: str) -> np.ndarray:
    obj = json.loads(Path(path).read_text())
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    return re + 1j * im


def cmd_commutant_test(args, cfg):
    if args.matrix:
        if args.nprimes is None:
            raise ValueError("--nprimes is required with --matrix")
        A, nprimes = _load_matrix(args.matrix), args.nprimes
    else:
        M = matrix_of(_series(args), args.nprimes, args.cutoff)
        A, nprimes = M.entries, M.nprimes
    defect = commutator_defect(A, nprimes, args.cutoff)
    return {"commutes": defect <= args.tol, "defect": defect, "tol": args.tol, "nprimes": nprimes, "cutoff": args.cutoff}


def cmd_spectrum(args, cfg):
    D = _series(args)
    rep = spectrum_cloud(D, args.sigma_max, args.T, args.n_sigma, args.n_t)
    if args.csv:
        write_csv(args.csv, rep.point_cloud)
    lam = parse_complex(args.lam)
    return {**rep.summary(), **_certificate(D, lam, cfg, args.line_T, args.line_points), "lambda": lam, "notes": rep.notes}


def cmd_ap_spectrum(args, cfg):
    D = _series(args)
    rep = approximate_spectrum_cloud(D, args.line_T, args.line_points, args.torus_grid)
    if args.csv:
        write_csv(args.csv, rep.point_cloud)
    if args.torus_csv:
        write_csv(args.torus_csv, rep.torus_cloud)
    lam = parse_complex(args.lam)
    return {**rep.summary(), **_certificate(D, lam, cfg, args.line_T, args.line_points), "lambda": lam}


def cmd_closed_range(args, cfg):
    cert = closed_range_certificate(_series(args), parse_complex(args.lam), cfg, args.line_T, args.line_points)
    return {"kind": "closed-range", **cert.summary(), "witness": cert.witness}


def cmd_fejer(args, cfg):
    D = _series(args)
    F = bohr_lift(D)
    return bohr_transform(fejer_apply(F, FejerSpec(args.n, F.nvars))).to_json()


def cmd_extremal(args, cfg):
    z = parse_complex_list(args.z)
    spec = ExtremalSpec(tuple(z), args.p)
    f = extremal_function(spec, args.degree)
    norm = hp_norm(f, spec.p, cfg)
    return {
        "poly": f.to_json(),
        "norm": norm.value,
        "norm_stderr": norm.stderr,
        "value": abs(f(z)),
        "bound": spec.weight,
        "eps": truncation_error_bound(z, args.degree),
    }


def cmd_verify(args, cfg):
    return run_verify(cfg, quick=args.quick).to_json()


COMMANDS = {
    "norm": (cmd_norm, "H_p norm of a series"),
    "hinf": (cmd_hinf, "sup norm as the maximum over the torus"),
    "mult-norm": (cmd_mult_norm, "norm of E -> D E from H_p to H_q"),
    "ess-bracket": (cmd_ess_bracket, "bracket for the essential norm"),
    "op-norm": (cmd_op_norm, "largest singular value of the truncated matrix"),
    "commutant-test": (cmd_commutant_test, "commutation with the prime shifts"),
    "spectrum": (cmd_spectrum, "image cloud over the right half-plane"),
    "ap-spectrum": (cmd_ap_spectrum, "boundary-line and torus image clouds"),
    "closed-range": (cmd_closed_range, "closed-range certificate for D - lambda"),
    "fejer": (cmd_fejer, "Fejer mean of a series"),
    "extremal": (cmd_extremal, "truncated extremal function for the pointwise bound"),
    "verify": (cmd_verify, "run the verification battery"),
}


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--series", help="expression like '1 + 2^-s', JSON terms, or @file")
    common.add_argument("--p", type=as_exponent, default=as_exponent(2), help="exponent p (rational or inf)")
    common.add_argument("--q", type=as_exponent, default=as_exponent(2), help="exponent q (rational or inf)")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--grid", type=int, default=None)
    common.add_argument("--config", default=None, help="JSON config file")
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="pretty", action="store_false", help="JSON only (default)")
    out.add_argument("--pretty", dest="pretty", action="store_true", help="also print a table on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardymult", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    subs = {name: sub.add_parser(name, parents=[common], help=h) for name, (_, h) in COMMANDS.items()}

    subs["mult-norm"].add_argument("--trials", type=int, default=200)
    for name in ("op-norm", "commutant-test"):
        subs[name].add_argument("--cutoff", type=int, default=1024)
        subs[name].add_argument("--nprimes", type=int, default=None)
    subs["commutant-test"].add_argument("--matrix", default=None, help='JSON {"re": [[..]], "im": [[..]]}')
    subs["commutant-test"].add_argument("--tol", type=float, default=1e-12)
    for name in ("spectrum", "ap-spectrum", "closed-range"):
        s = subs[name]
        s.add_argument("--lam", default="0", help="spectral parameter, e.g. 0.5+1i")
        s.add_argument("--line-T", dest="line_T", type=float, default=1e4)
        s.add_argument("--line-points", dest="line_points", type=int, default=10**6)
    for name in ("spectrum", "ap-spectrum"):
        subs[name].add_argument("--csv", default=None, help="write the cloud to this CSV file")
    subs["spectrum"].add_argument("--sigma-max", dest="sigma_max", type=float, default=10.0)
    subs["spectrum"].add_argument("--T", type=float, default=50.0)
    subs["spectrum"].add_argument("--n-sigma", dest="n_sigma", type=int, default=400)
    subs["spectrum"].add_argument("--n-t", dest="n_t", type=int, default=400)
    subs["ap-spectrum"].add_argument("--torus-grid", dest="torus_grid", type=int, default=512)
    subs["ap-spectrum"].add_argument("--torus-csv", dest="torus_csv", default=None)
    subs["fejer"].add_argument("--n", type=int, required=True)
    subs["extremal"].add_argument("--z", required=True, help="comma-separated point, e.g. 0.5,0.3i")
    subs["extremal"].add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    subs["verify"].add_argument("--quick", action="store_true")
    return parser


def _table(payload: dict) -> str:
    rows = [(k, v) for k, v in payload.items() if not isinstance(v, (dict, list))]
    width = max((len(k) for k, _ in rows), default=0)
    lines = [f"{k:<{width}}  {v}" for k, v in rows]
    for check in payload.get("checks", []) if isinstance(payload.get("checks"), list) else []:
        lines.append(f"  [{check['status']}] {check['name']}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fn, _ = COMMANDS[args.command]
    try:
        cfg = _config(args)
        payload = to_jsonable(fn(args, cfg))
    except (ValueError, NoMultiplierError, OSError) as exc:
        print(json.dumps({"error": str(exc), "command": args.command}), file=sys.stdout)
        print(f"hardymult {args.command}: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(payload))
    if args.pretty:
        print(_table(payload), file=sys.stderr)
    if args.command == "verify":
        return 0 if payload["passed"] else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
