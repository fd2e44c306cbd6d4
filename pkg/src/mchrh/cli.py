"""Command-line front end: ``mchrh soliton|scatter|verify|orbit``."""
from __future__ import annotations

import argparse
import ast
import operator
import os
import sys

import numpy as np

from . import direct_scattering as ds
from . import reconstruction as rc
from . import verification as vf
from .soliton_rh import ReflectionlessData, SolitonParams, one_soliton_matrix
from .spectral_plane import SpectralDomainError, symmetry_orbit

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_RESAMPLE, EXIT_SOLVER = 0, 1, 2, 3, 4

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg, ast.UAdd: operator.pos}


class ConfigError(ValueError):
    pass


def parse_number(text: str) -> float:
    """Float from a literal or a small arithmetic expression in ``pi`` (e.g. ``pi/3``)."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return np.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ConfigError(f"cannot parse number {text!r}")
    try:
        return float(ev(ast.parse(text.strip(), mode="eval")))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc


def parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:count, got {text!r}")
    start, stop = parse_number(parts[0]), parse_number(parts[1])
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid count in {text!r}") from exc
    if count < 2 or not stop > start:
        raise ConfigError(f"grid needs count >= 2 and stop > start, got {text!r}")
    return np.linspace(start, stop, count)


def parse_list(text: str):
    return [parse_number(p) for p in text.split(",") if p.strip()]


def _fmt(v) -> str:
    v = float(v)
    return "nan" if np.isnan(v) else format(v, ".17g")


def _params(args) -> SolitonParams:
    try:
        return SolitonParams(parse_number(args.theta), parse_number(args.delta))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _write(path, text):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# --------------------------------------------------------------------------

def cmd_soliton(args) -> int:
    params = _params(args)
    ts = parse_list(args.t)
    y = parse_grid(args.y)
    xg = parse_grid(args.x) if args.x else None
    original = args.frame == "u-original"
    cls = rc.classify(params)
    print(f"classification: {cls}")
    code = EXIT_OK
    for i, t in enumerate(ts):
        sol = rc.soliton_profile(params, t, y)
        sol.meta["frame"] = args.frame
        if original:
            sol.x_of_y = sol.x_of_y + t
            sol.u_hat = sol.u_hat + 1
        path = os.path.join(args.out, f"{args.prefix}_t{i}.csv")
        _write(path, sol.to_csv())
        print(f"wrote {path}")
        if xg is None:
            continue
        sol_tilde = rc.soliton_profile(params, t, y)
        try:
            u, ux, m = rc.resample_fields(sol_tilde, xg)
        except rc.NonMonotoneError as exc:
            print(f"resample refused: {exc}", file=sys.stderr)
            code = EXIT_RESAMPLE
            continue
        xs = xg + t if original else xg
        us = u + 1 if original else u
        lines = [f"# theta={params.theta:.17g}", f"# delta_hat={params.delta_hat:.17g}",
                 f"# t={t:.17g}", f"# classification={cls}", f"# frame={args.frame}", "x,u,u_x,m"]
        lines += [",".join(_fmt(v) for v in row) for row in zip(xs, us, ux, m)]
        path = os.path.join(args.out, f"{args.prefix}_x_t{i}.csv")
        _write(path, "\n".join(lines) + "\n")
        print(f"wrote {path}")
    return code


def cmd_scatter(args) -> int:
    try:
        with open(args.profile) as fh:
            prof = ds.read_profile_csv(fh.read(), args.differentiation)
    except (OSError, ValueError, KeyError) as exc:
        print(f"bad profile: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        data = ds.compute_spectral_data(prof, ds.real_mu_grid(args.n_mu), find_zeros=not args.no_zeros)
    except (ds.NonConvergenceError, ds.CountMismatchError, ds.NonProportionalityError,
            ds.AmbiguousRegimeError, np.linalg.LinAlgError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _write(args.out, data.to_json())
    print(f"unitarity_defect={data.unitarity_defect():.3e}")
    print(f"zeros={len(data.zeros)}")
    for mu, rho in data.zeros:
        print(f"  mu={_fmt(mu.real)},{_fmt(mu.imag)} rho={_fmt(rho.real)},{_fmt(rho.imag)}")
    print(f"gamma={data.gamma:.6g} c={data.c:.6g}")
    print(f"wrote {args.out}")
    return EXIT_OK


ALL_CHECKS = ("pde_y", "constitutive", "rel", "rh", "pde_x")


def cmd_verify(args) -> int:
    checks = [c for c in (args.checks.split(",") if args.checks is not None else ALL_CHECKS) if c]
    if not checks:
        print("no checks requested", file=sys.stderr)
        return EXIT_CONFIG
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ConfigError(f"unknown checks {sorted(unknown)}")
    params = _params(args)
    y = parse_grid(args.y)
    ts = parse_list(args.t)
    src = vf.soliton_source(params)
    if args.perturb != 1.0:
        src = vf.scaled_source(src, u_scale=args.perturb)
    reports = []
    rng = np.random.default_rng(args.seed)
    for t in ts:
        if "pde_y" in checks:
            reports.append(vf.pde_residual_y(src, y, t, args.h))
        if "constitutive" in checks:
            reports.append(vf.constitutive_residual(src, y, t, args.h))
        if "rel" in checks:
            rels = vf.rel_residuals(src, y, t, args.h)
            if params.delta_hat < 0:
                rels = [r for r in rels if r.name not in ("rel_c", "rel_d")]
            reports += rels
        if "rh" in checks:
            y0 = float(np.median(y))
            M = one_soliton_matrix(params, y0, t)
            mus = rng.normal(size=100) + 1j * rng.normal(size=100)
            reports += vf.rh_invariant_suite(M, mus)
            reports.append(vf.residue_check(M, ReflectionlessData.one_soliton(params), y0, t))
            reports.append(vf.singularity_check(M, M.alpha))
        if "pde_x" in checks and rc.classify(params) in (rc.SMOOTH, rc.FINITE):
            xg = np.arange(-30.0, 30.0, args.dx)
            reports.append(vf.soliton_pde_x(params, t, xg, args.dx))
    if args.tol is not None:
        for r in reports:
            r.tolerance = args.tol
    text = vf.write_jsonl(reports)
    if args.out:
        _write(args.out, text)
    for r in reports:
        print(r.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def cmd_orbit(args) -> int:
    try:
        re_s, im_s = args.mu.split(",")
        mu = complex(parse_number(re_s), parse_number(im_s))
        pts = symmetry_orbit(mu, tol=args.tol)
    except (ValueError, SpectralDomainError) as exc:
        print(f"bad mu {args.mu!r}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for p in pts:
        print(f"{_fmt(p.real)},{_fmt(p.imag)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mchrh", description="RH inverse scattering for mCH on a constant background")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("soliton", help="one-soliton in parametric form")
    s.add_argument("--theta", required=True)
    s.add_argument("--delta", required=True)
    s.add_argument("--t", default="0")
    s.add_argument("--y", default="-40:40:2001")
    s.add_argument("--x", default=None, help="x grid for an x-frame CSV (start:stop:count)")
    s.add_argument("--frame", choices=("u-tilde", "u-original"), default="u-tilde")
    s.add_argument("--out", default=".")
    s.add_argument("--prefix", default="soliton")
    s.set_defaults(func=cmd_soliton)

    s = sub.add_parser("scatter", help="spectral data of a profile CSV")
    s.add_argument("--profile", required=True)
    s.add_argument("--out", default="spectral.json")
    s.add_argument("--n-mu", type=int, default=64)
    s.add_argument("--no-zeros", action="store_true")
    s.add_argument("--differentiation", choices=("finite-difference", "spectral"), default="finite-difference")
    s.set_defaults(func=cmd_scatter)

    s = sub.add_parser("verify", help="residual suite for a one-soliton")
    s.add_argument("--theta", required=True)
    s.add_argument("--delta", default="1")
    s.add_argument("--t", default="0,1")
    s.add_argument("--y", default="-40:40:2001")
    s.add_argument("--checks", default=None, help=f"comma list from {','.join(ALL_CHECKS)}")
    s.add_argument("--h", type=float, default=1e-4)
    s.add_argument("--dx", type=float, default=1e-3)
    s.add_argument("--perturb", type=float, default=1.0, help="scale u-hat (detector sanity)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=None, help="override every per-check tolerance")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("orbit", help="symmetry orbit of mu = re,im")
    s.add_argument("mu")
    s.add_argument("--tol", type=float, default=1e-4)
    s.set_defaults(func=cmd_orbit)
    return ap


_VALUE_OPTS = {"--theta", "--delta", "--t", "--y", "--x"}


def _join_values(argv):
    """Glue option values that start with '-' (e.g. ``--y -40:40:2001``) to their flag."""
    out, i = [], 0
    if argv[:1] == ["orbit"]:
        rest, opts, j = [], [], 1
        while j < len(argv):
            if argv[j] == "--tol" and j + 1 < len(argv):
                opts += argv[j:j + 2]
                j += 2
            elif argv[j] in ("-h", "--help") or argv[j].startswith("--tol="):
                opts.append(argv[j])
                j += 1
            else:
                rest.append(argv[j])
                j += 1
        return ["orbit", *opts, "--", *rest]
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = _join_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
