"""Command-line front end: ``heismag {solve,verify,classify,canonicalize,integrate}``.

Exit codes: 0 success, 1 a verification tolerance was exceeded, 2 invalid
input, 3 numerical failure.  Values starting with ``-`` need the ``=`` form,
e.g. ``--ic=-1,0,0``.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .algebra import LorentzForce
from .errors import ClassificationError, DomainError, NumericalError
from .oracle import (
    IntegrationConfig,
    choose_oracle_method,
    geodesic_magnetic_classifier,
    integrate_full,
    monitor_invariants,
)
from .quartic import QuarticAnalysis
from .solver import solve
from .symmetry import canonicalize, isotropy_description
from .trajectory import InitialVelocity, Trajectory
from .variational import LagrangianSpec, el_residual

__all__ = ["JobSpec", "main", "format_csv", "parse_csv", "build_parser"]

COLUMNS = ("t", "x", "y", "z", "xp", "yp", "zp")
SCHEMA = 1
EXIT_OK, EXIT_TOL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

# fixed budgets used by `verify` besides the user-set oracle tolerance
SPEED_TOL = 1e-8
FIRST_INTEGRAL_TOL = 1e-8
RESIDUAL_TOL = 1e-6
EL_TOL = 1e-5


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class JobSpec:
    force: LorentzForce
    ic: InitialVelocity
    span: tuple[float, float] = (0.0, 10.0)
    n: int = 201
    fmt: str = "csv"

    def __post_init__(self):
        if self.n < 2:
            raise InputError("sample count must be at least 2")
        t0, t1 = self.span
        if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
            raise InputError("span must be finite with t1 > t0")
        if self.fmt not in ("csv", "json"):
            raise InputError("format must be csv or json")

    def grid(self) -> np.ndarray:
        return np.linspace(self.span[0], self.span[1], self.n)


def _triple(text: str, name: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise InputError(f"{name} needs three comma-separated numbers")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"{name}: {exc}") from None
    if not all(math.isfinite(v) for v in vals):
        raise InputError(f"{name} must be finite")
    return vals


def _pair(text: str, name: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"{name} needs two comma-separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"{name}: {exc}") from None


def job_from_args(args) -> JobSpec:
    force = LorentzForce(*_triple(args.force, "--force"))
    ic = InitialVelocity(*_triple(args.ic, "--ic"))
    return JobSpec(force, ic, _pair(args.span, "--span"), args.n, args.format)


def _num(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, complex):
        return repr(v)
    return repr(float(v))


def trajectory_metadata(traj: Trajectory) -> dict:
    a = traj.analysis
    meta = {
        "case": traj.case,
        "force": ",".join(_num(v) for v in traj.force),
        "ic": ",".join(_num(v) for v in traj.ic),
        "source": traj.source,
        "period": _num(traj.period),
        "image": "none" if traj.x_image is None else str(traj.x_image),
    }
    if isinstance(a, QuarticAnalysis):
        meta.update({
            "delta": _num(a.delta),
            "p0": _num(a.params.p0),
            "q0": _num(a.params.q0),
            "mu": "nan" if math.isnan(a.mu) else _num(a.mu),
            "r": "nan" if math.isnan(a.r) else _num(a.r),
        })
    return meta


def format_csv(meta: dict, t: np.ndarray, states: np.ndarray) -> str:
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"#{k}={v}\n")
    buf.write(",".join(COLUMNS) + "\n")
    rows = np.column_stack([t, states])
    for row in rows:
        buf.write(",".join("%.17g" % v for v in row) + "\n")
    return buf.getvalue()


def parse_csv(text: str):
    """Inverse of :func:`format_csv`: ``(meta, t, states)``."""
    meta, rows = {}, []
    header_seen = False
    for line in text.splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].partition("=")
            meta[k] = v
        elif not header_seen:
            header_seen = True
        elif line:
            rows.append([float(v) for v in line.split(",")])
    data = np.array(rows, dtype=float).reshape(-1, len(COLUMNS))
    return meta, data[:, 0], data[:, 1:]


def format_json(meta: dict, t: np.ndarray, states: np.ndarray) -> str:
    doc = {
        "schema": SCHEMA,
        "meta": meta,
        "columns": list(COLUMNS),
        "data": np.column_stack([t, states]).tolist(),
    }
    return json.dumps(doc, indent=1) + "\n"


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _sampled(meta, traj, job, out):
    t = job.grid()
    states = traj(t)
    text = format_csv(meta, t, states) if job.fmt == "csv" else format_json(meta, t, states)
    _emit(text, out)


def cmd_solve(args) -> int:
    job = job_from_args(args)
    traj = solve(job.force, job.ic)
    _sampled(trajectory_metadata(traj), traj, job, args.out)
    return EXIT_OK


def cmd_integrate(args) -> int:
    job = job_from_args(args)
    cfg = IntegrationConfig(job.span, rtol=args.tol, atol=args.tol * 1e-2, n_samples=job.n,
                            method=args.method)
    traj = integrate_full(job.force, job.ic, cfg)
    meta = trajectory_metadata(traj)
    meta["rtol"] = _num(args.tol)
    meta["method"] = args.method
    _sampled(meta, traj, job, args.out)
    return EXIT_OK


def verify_job(job: JobSpec, tol: float = 1e-6, method: str = "auto") -> dict:
    traj = solve(job.force, job.ic)
    if method == "auto":
        method = choose_oracle_method(traj, job.force, job.span, tol)
    cfg = IntegrationConfig(job.span, n_samples=job.n, method=method)
    oracle = integrate_full(job.force, job.ic, cfg)
    t = job.grid()
    err = float(np.max(np.abs(traj(t) - oracle.analysis.states)))
    rep = monitor_invariants(traj, job.force, t)
    el = float(np.max(np.abs(el_residual(LagrangianSpec(job.force), traj, t))))
    checks = {
        "max_err": (err, tol),
        "speed_drift": (rep.speed_drift, SPEED_TOL),
        "first_integral_drift": (rep.first_integral_drift, FIRST_INTEGRAL_TOL),
        "central_drift": (rep.central_drift, FIRST_INTEGRAL_TOL),
        "ode_residual_max": (rep.ode_residual_max, RESIDUAL_TOL),
        "el_residual_max": (el, EL_TOL),
    }
    return {
        "schema": SCHEMA,
        "case": traj.case,
        "force": list(job.force),
        "ic": list(job.ic),
        "span": list(job.span),
        "n": job.n,
        "oracle": method,
        **{k: v for k, (v, _) in checks.items()},
        "tolerances": {k: tl for k, (_, tl) in checks.items()},
        "pass": all(v <= tl for v, tl in checks.values()),
    }


def cmd_verify(args) -> int:
    job = job_from_args(args)
    report = verify_job(job, tol=args.tol, method=args.method)
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return EXIT_OK if report["pass"] else EXIT_TOL


def classify_summary(force: LorentzForce, ic: InitialVelocity) -> dict:
    orbit = canonicalize(force)
    info = {
        "orbit": orbit.kind,
        "canonical": list(orbit.canonical),
        "isotropy": str(isotropy_description(force)),
    }
    if orbit.kind == "zero":
        info["summary"] = "zero force: all trajectories are geodesics"
        info["geodesic"] = True
        return info
    geo = geodesic_magnetic_classifier(force, ic)
    traj = solve(force, ic)
    info["case"] = traj.case
    info["period"] = traj.period
    info["image"] = None if traj.x_image is None else str(traj.x_image)
    info["geodesic"] = geo
    yes = "yes" if geo else "no"
    if orbit.kind == "exact":
        info["summary"] = f"exact orbit; geodesic: {yes}"
    else:
        per = "periodic" if traj.period is not None else "not periodic"
        info["summary"] = f"case {traj.case}; {per}; geodesic: {yes}"
    return info


def cmd_classify(args) -> int:
    force = LorentzForce(*_triple(args.force, "--force"))
    ic = InitialVelocity(*_triple(args.ic, "--ic"))
    info = classify_summary(force, ic)
    if args.format == "json":
        text = json.dumps({"schema": SCHEMA, **info}, indent=1) + "\n"
    else:
        lines = [info["summary"]] + [f"{k}: {v}" for k, v in info.items() if k != "summary"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_canonicalize(args) -> int:
    force = LorentzForce(*_triple(args.force, "--force"))
    o = canonicalize(force)
    info = {
        "kind": o.kind,
        "canonical": list(o.canonical),
        "witness_B": o.witness.B.tolist(),
        "witness_r": o.witness.r,
        "isotropy": str(isotropy_description(force)),
    }
    if args.format == "json":
        text = json.dumps({"schema": SCHEMA, **info}, indent=1) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in info.items())
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heismag", description="Magnetic trajectories on the Heisenberg group.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ic=True, sampling=True, fmt_default="csv"):
        sp.add_argument("--force", required=True, help="beta,alpha,rho")
        if ic:
            sp.add_argument("--ic", default="0,0,0", help="x0,y0,z0")
        if sampling:
            sp.add_argument("--span", default="0,10", help="t0,t1")
            sp.add_argument("--n", type=int, default=201, help="number of samples")
        sp.add_argument("--format", choices=("csv", "json") if sampling else ("text", "json"), default=fmt_default)
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    sp = sub.add_parser("solve", help="sample the closed-form trajectory")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("integrate", help="sample the numerical oracle")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-12, help="relative tolerance")
    sp.add_argument("--method", default="DOP853")
    sp.set_defaults(func=cmd_integrate)

    sp = sub.add_parser("verify", help="closed form vs oracle, invariants and Euler-Lagrange residual")
    common(sp, fmt_default="json")
    sp.add_argument("--tol", type=float, default=1e-6, help="closed-form vs oracle budget")
    sp.add_argument("--method", default="auto", help="oracle method: auto, DOP853 or taylor")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("classify", help="orbit, isotropy, solution family and geodesic flag")
    common(sp, sampling=False, fmt_default="text")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("canonicalize", help="orbit representative and witness")
    common(sp, ic=False, sampling=False, fmt_default="text")
    sp.set_defaults(func=cmd_canonicalize)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        if isinstance(exc, (DomainError, ClassificationError)):
            print(f"heismag: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"heismag: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, ClassificationError) as exc:
        print(f"heismag: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
