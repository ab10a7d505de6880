"""Command-line entry point ``jacobi-cs``.

Exit codes: 0 ok, 1 invariant failure, 2 domain or weight error, 3 parse
error, 4 dynamics event. Settings come from, lowest precedence first, the
built-in defaults, a ``--config`` file of ``key = value`` lines, then flags.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import algebra as alg
from . import coords, dynamics, kernel, verify
from ._util import complex_json, parse_complex, parse_number
from .config import RunConfig, Tolerances, read_config_file
from .errors import CutoffError, DomainError, WeightError

EXIT_OK, EXIT_INVARIANT, EXIT_DOMAIN, EXIT_PARSE, EXIT_EVENT = range(5)


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# argument types
# --------------------------------------------------------------------------

def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _number_arg(text: str):
    try:
        return parse_number(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _cutoff_arg(text: str) -> tuple[int, int]:
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cutoff must be N or N,M: {text!r}") from None
    if len(parts) == 1:
        parts *= 2
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"cutoff must be N or N,M: {text!r}")
    return parts[0], parts[1]


def _tol_arg(text: str) -> tuple[str | None, float]:
    key, _, val = text.rpartition("=")
    try:
        return key or None, float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance must be VALUE or NAME=VALUE: {text!r}") from None


def _weight_json(k):
    return str(k) if isinstance(k, Fraction) else repr(float(k))


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

def _apply_tols(tol: Tolerances, items) -> Tolerances:
    names = {f.name for f in dataclasses.fields(Tolerances)}
    upd = {}
    for key, val in items:
        if key is None:
            upd = {n: val for n in names}
        elif key in names:
            upd[key] = val
        else:
            raise ParseError(f"unknown tolerance {key!r}; choose from {', '.join(sorted(names))}")
    return dataclasses.replace(tol, **upd)


def build_config(args) -> RunConfig:
    """Merge defaults, the optional config file and explicit flags."""
    raw = read_config_file(args.config) if args.config else {}
    try:
        k = parse_number(raw["k"]) if "k" in raw else Fraction(1)
        cutoff = _cutoff_arg(raw["cutoff"]) if "cutoff" in raw else (60, 60)
        tols = [_tol_arg(t) for t in raw["tol"].split()] if "tol" in raw else []
        seed = int(raw.get("seed", 0))
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise ParseError(f"config file: {exc}") from None
    mode, fmt = raw.get("mode", "strict"), raw.get("format", "json")
    out = raw.get("out")
    if args.k is not None:
        k = args.k
    if args.cutoff is not None:
        cutoff = args.cutoff
    if args.tol:
        tols += args.tol
    if args.seed is not None:
        seed = args.seed
    mode = args.mode or mode
    fmt = args.format or fmt
    out = args.out or out
    try:
        return RunConfig(k=k, mode=mode, tol=_apply_tols(Tolerances(), tols), cutoff_n=cutoff[0],
                         cutoff_m=cutoff[1], seed=seed, out=Path(out) if out else None, fmt=fmt)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        cfg.out.write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _point_json(x: alg.JacobiCSPoint) -> dict:
    return {"z": complex_json(x.z), "w": complex_json(x.w)}


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_kernel(args, cfg: RunConfig) -> int:
    x, y = alg.JacobiCSPoint(args.z, args.w), alg.JacobiCSPoint(args.zp, args.wp)
    closed = kernel.kernel_closed(x, y, cfg.k)
    trunc = kernel.kernel_truncated(x, y, cfg.k, cfg.cutoff_n, cfg.cutoff_m)
    rec = {"k": _weight_json(cfg.k), "x": _point_json(x), "y": _point_json(y),
           "closed": complex_json(closed), "truncated": complex_json(trunc),
           "abs_err": abs(closed - trunc), "cutoffs": [cfg.cutoff_n, cfg.cutoff_m]}
    _emit(cfg, _dumps(rec))
    return EXIT_OK


def cmd_basis(args, cfg: RunConfig) -> int:
    x = alg.JacobiCSPoint(args.z, args.w)
    rows = []
    for n in range(args.n + 1):
        for m in range(args.m + 1):
            rows.append({"n": n, "m": m, "value": complex_json(kernel.basis_function(n, m, x, cfg.k))})
    if cfg.fmt == "csv":
        lines = ["n,m,re,im"] + [f"{r['n']},{r['m']},{r['value']['re']!r},{r['value']['im']!r}" for r in rows]
        _emit(cfg, "\n".join(lines))
    else:
        _emit(cfg, _dumps({"k": _weight_json(cfg.k), "x": _point_json(x), "basis": rows}))
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    suites = [s for item in args.suite for s in item.split(",")]
    try:
        report = verify.run_verify(cfg, suites)
    except ValueError as exc:
        if isinstance(exc, (WeightError, DomainError)):
            raise
        raise ParseError(str(exc)) from None
    if cfg.fmt == "csv":
        lines = ["suite,name,residual,tol,passed"]
        lines += [f"{c.suite},{c.name},{c.residual!r},{c.tol!r},{int(c.passed)}" for c in report.checks]
        _emit(cfg, "\n".join(lines))
    else:
        _emit(cfg, report.to_json())
    return EXIT_OK if report.passed else EXIT_INVARIANT


def _hamiltonian(args) -> dynamics.HamiltonianCoeffs:
    return dynamics.HamiltonianCoeffs(
        eps_a=args.eps_a, eps_0=args.eps0, eps_plus=args.eps_plus,
        eps_minus=args.eps_minus, eps_adag=args.eps_adag, hermitian=not args.non_hermitian)


def _write_trajectory(cfg: RunConfig, tr: dynamics.Trajectory, manifest: str) -> None:
    if cfg.out:
        cfg.out.write_text(tr.to_csv())
        cfg.out.with_suffix(".json").write_text(manifest + "\n")
    elif cfg.fmt == "csv":
        sys.stdout.write(tr.to_csv())
    else:
        sys.stdout.write(manifest + "\n")


def cmd_evolve(args, cfg: RunConfig) -> int:
    try:
        H = _hamiltonian(args)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    x0 = alg.JacobiCSPoint(args.z0, args.w0)
    tr = dynamics.integrate_flow(x0, H, (0.0, args.t1), dt=args.dt, sample_every=args.sample_every)
    manifest = tr.manifest(H=H.to_json(), x0=_point_json(x0), seed=cfg.seed, t_end=float(tr.t[-1]))
    _write_trajectory(cfg, tr, manifest)
    if tr.event:
        print(f"event: {tr.event}", file=sys.stderr)
        return EXIT_EVENT
    return EXIT_OK


def cmd_geodesic(args, cfg: RunConfig) -> int:
    x0 = alg.JacobiCSPoint(args.z0, args.w0)
    tr = dynamics.integrate_geodesic(x0, (args.dz0, args.dw0), cfg.k, (0.0, args.t1), dt=args.dt,
                                     sample_every=args.sample_every)
    manifest = tr.manifest(k=_weight_json(cfg.k), x0=_point_json(x0),
                           v0={"dz": complex_json(args.dz0), "dw": complex_json(args.dw0)},
                           speed_drift=tr.extra["speed_drift"], seed=cfg.seed, t_end=float(tr.t[-1]))
    _write_trajectory(cfg, tr, manifest)
    if tr.event:
        print(f"event: {tr.event}", file=sys.stderr)
        return EXIT_EVENT
    return EXIT_OK


def cmd_transform(args, cfg: RunConfig) -> int:
    rec = {}
    if args.v is not None:
        p = coords.UpperHalfPoint(args.v, args.u)
        d = coords.to_disk(p)
        back = coords.to_upper(d)
        rec["upper"] = {"v": complex_json(p.v), "u": complex_json(p.u)}
        rec["disk"] = _point_json(d)
        rec["roundtrip_residual"] = max(abs(back.v - p.v), abs(back.u - p.u))
        c = coords.ez_from_point(p)
        rec["ez"] = dataclasses.asdict(c)
    elif args.z is not None:
        d = alg.JacobiCSPoint(args.z, args.w)
        p = coords.to_upper(d)
        back = coords.to_disk(p)
        rec["disk"] = _point_json(d)
        rec["upper"] = {"v": complex_json(p.v), "u": complex_json(p.u)}
        rec["roundtrip_residual"] = max(abs(back.z - d.z), abs(back.w - d.w))
    if args.sl2 is not None:
        M = coords.SL2Matrix(*args.sl2)
        x, y, theta = coords.iwasawa(M)
        R = coords.iwasawa_reassemble(x, y, theta)
        g = coords.sl2_su11(M)
        rec["sl2"] = {"matrix": [[M.a, M.b], [M.c, M.d]], "iwasawa": {"x": x, "y": y, "theta": theta},
                      "reassembly_residual": float(abs(R.as_array() - M.as_array()).max()),
                      "su11": {"a": complex_json(g.a), "b": complex_json(g.b)}}
    if not rec:
        raise ParseError("transform needs --v/--u, --z/--w or --sl2")
    _emit(cfg, _dumps(rec))
    return EXIT_OK


def _element(z, theta, alpha, t) -> alg.JacobiElement:
    return alg.JacobiElement(alg.su11_exp(z, theta), alpha, t)


def _element_json(h: alg.JacobiElement) -> dict:
    return {"a": complex_json(h.g.a), "b": complex_json(h.g.b), "alpha": complex_json(h.alpha), "t": h.t}


def cmd_group(args, cfg: RunConfig) -> int:
    h1 = _element(args.z1, args.theta1, args.alpha1, args.t1)
    h2 = _element(args.z2, args.theta2, args.alpha2, args.t2)
    x = alg.JacobiCSPoint(args.z, args.w)
    alg.Weight(cfg.k, cfg.mode)
    h12 = alg.compose(h1, h2)
    rec = {
        "k": _weight_json(cfg.k),
        "h1": _element_json(h1), "h2": _element_json(h2),
        "compose": _element_json(h12), "inverse_h1": _element_json(alg.inverse(h1)),
        "x": _point_json(x), "h1_x": _point_json(alg.jacobi_act(h1, x)),
        "cocycle_h1_x": complex_json(alg.cocycle(h1, x, cfg.k)),
        "multiplier_h1_x": complex_json(alg.multiplier(h1, x, cfg.k)),
    }
    _emit(cfg, _dumps(rec))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--k", type=_number_arg, help="weight, e.g. 1, 3/2 or 1.75")
    g.add_argument("--mode", choices=("strict", "relaxed"), help="strict: 2k in {2,3,...}; relaxed: k > 3/4")
    g.add_argument("--cutoff", type=_cutoff_arg, help="series cutoffs N or N,M")
    g.add_argument("--tol", type=_tol_arg, action="append", help="VALUE for all tolerances or NAME=VALUE")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="output file (trajectories also write a .json manifest)")
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--config", help="key = value file; flags take precedence")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="jacobi-cs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kernel", parents=[common], help="closed and truncated reproducing kernel")
    for name in ("z", "w", "zp", "wp"):
        p.add_argument(f"--{name}", type=_complex_arg, default=0j)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("basis", parents=[common], help="orthonormal basis functions f_{n,m} at a point")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--z", type=_complex_arg, default=0j)
    p.add_argument("--w", type=_complex_arg, default=0j)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--suite", action="append", default=None,
                   help=f"one of {', '.join(verify.SUITE_NAMES)} or all; repeat or comma-separate")
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (("evolve", cmd_evolve, "Riccati flow of a linear Hamiltonian"),
                                 ("geodesic", cmd_geodesic, "geodesic of the invariant metric")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--z0", type=_complex_arg, default=0j)
        p.add_argument("--w0", type=_complex_arg, default=0j)
        p.add_argument("--t1", type=float, default=10.0 if name == "evolve" else 5.0)
        p.add_argument("--dt", type=float, default=1e-3)
        p.add_argument("--sample-every", type=int, default=10)
        if name == "evolve":
            p.add_argument("--eps-a", type=_complex_arg, default=0j)
            p.add_argument("--eps0", type=float, default=0.0)
            p.add_argument("--eps-plus", type=_complex_arg, default=0j)
            p.add_argument("--eps-minus", type=_complex_arg, default=None)
            p.add_argument("--eps-adag", type=_complex_arg, default=None)
            p.add_argument("--non-hermitian", action="store_true")
        else:
            p.add_argument("--dz0", type=_complex_arg, default=0j)
            p.add_argument("--dw0", type=_complex_arg, default=0j)
        p.set_defaults(func=func)

    p = sub.add_parser("transform", parents=[common], help="Cayley maps, EZ coordinates, Iwasawa")
    p.add_argument("--v", type=_complex_arg)
    p.add_argument("--u", type=_complex_arg, default=0j)
    p.add_argument("--z", type=_complex_arg)
    p.add_argument("--w", type=_complex_arg, default=0j)
    p.add_argument("--sl2", type=float, nargs=4, metavar=("A", "B", "C", "D"))
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("group", parents=[common], help="compose, invert and act with group elements")
    for i in ("1", "2"):
        p.add_argument(f"--z{i}", type=_complex_arg, default=0j, help="squeeze parameter")
        p.add_argument(f"--theta{i}", type=float, default=0.0)
        p.add_argument(f"--alpha{i}", type=_complex_arg, default=0j)
        p.add_argument(f"--t{i}", type=float, default=0.0)
    p.add_argument("--z", type=_complex_arg, default=0j)
    p.add_argument("--w", type=_complex_arg, default=0j)
    p.set_defaults(func=cmd_group)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not args.suite:
        args.suite = ["all"]
    try:
        cfg = build_config(args)
        alg.Weight(cfg.k, cfg.mode)
        return args.func(args, cfg)
    except ParseError as exc:
        print(f"jacobi-cs: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, WeightError, CutoffError, OverflowError) as exc:
        print(f"jacobi-cs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
