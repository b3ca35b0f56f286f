"""Command line entry point: ``arithradon {sieve,census,kernel,transform,probe}``.

Every subcommand writes a table to ``--out`` (``-`` for stdout), as CSV or,
with ``--format json``, as a JSON list of records with the same fields.
CSV floats carry 17 significant digits. Usage errors exit
with status 2, runtime failures with status 1.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from typing import Iterable, Optional, Sequence

import numpy as np

from . import arith, census, kernel, probe, transform
from .signals import SignalSpec, random_compact_unit

SIEVE_NAMES = sorted(arith.TABLE_BUILDERS)
FN_NAMES = SIEVE_NAMES + sorted(arith.RAW_FUNCTIONS)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else None


def _write_table(args, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with _open_out(args.out) as fh:
        if args.format == "json":
            recs = [dict(zip(header, map(_json_value, row))) for row in rows]
            fh.write(json.dumps(recs) + "\n")
            return
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def fn_spec(text: str) -> str:
    """argparse type for ``NAME[:PARITY]``; validates before any sieving."""
    name, _, parity = text.partition(":")
    if name not in FN_NAMES:
        raise argparse.ArgumentTypeError(f"unknown function {name!r} (choose from {', '.join(FN_NAMES)})")
    if parity and parity not in arith.PARITIES:
        raise argparse.ArgumentTypeError(f"unknown parity {parity!r}")
    if name in arith.RAW_FUNCTIONS and parity not in ("", "raw"):
        raise argparse.ArgumentTypeError(f"{name} is a raw function and takes no parity")
    if name in arith.TABLE_BUILDERS and parity == "raw":
        raise argparse.ArgumentTypeError(f"{name} needs parity even or signodd")
    return text


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _window(text: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like A:B") from None
    if b < a:
        raise argparse.ArgumentTypeError("window must have A <= B")
    return a, b


def _signal(kind: str, rng: np.random.Generator, width: int) -> SignalSpec:
    if kind == "cauchy":
        return SignalSpec.cauchy()
    if kind == "indicator":
        return SignalSpec.indicator(0)
    return random_compact_unit(rng, width)


# -- subcommands -----------------------------------------------------------

def cmd_sieve(args) -> None:
    table = arith.build_table(args.fn, args.limit)
    n = np.arange(1, args.limit + 1)
    _write_table(args, ("n", "value"), zip(n.tolist(), table.values[1:].tolist()))


def cmd_census(args) -> None:
    if args.star:
        R = arith.make_fn(args.fn, args.parity, args.limit)
        rep = census.star_report(R, args.limit)
        _write_table(args, ("D1", "D2", "range_limit"), [(rep.D1, rep.D2, rep.range_limit)])
        return
    R = arith.make_fn(args.fn, args.parity, 1 << (args.jmax + 1))
    recs = census.census_grid(R, args.jmax, args.delta, threads=args.threads)
    _write_table(args, ("j1", "j2", "M", "N", "count", "ratio"),
               ((r.j1, r.j2, r.M, r.N, r.count, r.ratio) for r in recs))


def cmd_kernel(args) -> None:
    rho = kernel.build_rho(args.smoothing)
    if args.check_telescope:
        x = np.geomspace(1.0, 2.0 ** (args.J - 1), args.samples)
        err = float(kernel.telescope_error(rho, args.J, x).max())
        _write_table(args, ("J", "samples", "max_error"), [(args.J, args.samples, err)])
        return
    if args.sigma is None:
        raise ValueError("kernel needs --check-telescope or --sigma J")
    limit = 1 << (args.sigma + 1)
    piece = kernel.KernelPiece(args.sigma, arith.parse_fn(args.P, limit),
                               arith.parse_fn(args.Q, limit), rho)
    t = np.arange(args.grid) / args.grid
    xi, eta = np.meshgrid(t, t, indexing="ij")
    vals = kernel.eval_sigma_j(piece, xi, eta)
    _write_table(args, ("xi", "eta", "re", "im"),
               zip(xi.ravel(), eta.ravel(), vals.real.ravel(), vals.imag.ravel()))


def cmd_transform(args, rng) -> None:
    P = arith.parse_fn(args.P, args.T0)
    Q = arith.parse_fn(args.Q, args.T0)
    f = g = _signal(args.signal, rng, args.width)
    series = transform.figure_series(f, g, P, Q, args.xmin, args.xmax, args.step, args.T0)
    try:
        tail = transform.tail_budget(f, g, P, Q, (args.xmin, args.xmax), args.T0).tail_bound
    except ValueError:
        tail = math.nan  # no growth minorant declared for P or Q
    _write_table(args, ("x", "re", "im", "tail_bound"),
               ((x, v.real, v.imag, tail) for x, v in series))


def cmd_probe(args, rng) -> None:
    if args.probe == "v":
        if args.M > args.Jmax:
            raise ValueError(f"empty scale range: --M {args.M} > --Jmax {args.Jmax}")
        limit = 1 << (args.Jmax + 1)
        P, Q = arith.parse_fn(args.P, limit), arith.parse_fn(args.Q, limit)
        etas = np.arange(args.eta_grid) / args.eta_grid
        exact = probe.v_exact(P, Q, etas, args.M, args.Jmax)
        bound = probe.v_census_bound(P, args.M, args.Jmax).bound * kernel.DyadicKernel().sup_abs ** 2
        _write_table(args, ("eta", "exact", "bound"), ((e, v, bound) for e, v in zip(etas, exact)))
        return
    P, Q = arith.parse_fn(args.P, args.T0), arith.parse_fn(args.Q, args.T0)
    f = _signal(args.signal, rng, args.width)
    g = _signal(args.signal, rng, args.width)
    if args.probe == "level-sets":
        if not f.is_compact and args.window is None:
            raise ValueError("analytic signals need --window")
        lams = probe.geometric_lambdas(args.lambda_min, args.lambda_max)
        prof = probe.level_sets(f.normalized(), g.normalized(), P, Q, args.T0,
                                args.window, lams, args.eps)
        _write_table(args, ("lambda", "size", "envelope"),
                   zip(prof.lambdas, prof.sizes.tolist(), prof.envelope))
    else:
        n = np.arange(args.nmin, args.nmax + 1)
        vals = probe.maximal_operator(f, g, P, Q, n, args.T0)
        _write_table(args, ("n", "value"), zip(n.tolist(), vals))


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output file, '-' for stdout (default)")
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="cap on worker threads (default 1)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomly generated signals (default 0)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default csv)")

    p = argparse.ArgumentParser(prog="arithradon", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="emit an arithmetic-function table",
                       description="Emit CSV n,value for n = 1..LIMIT.")
    s.add_argument("--fn", required=True, choices=SIEVE_NAMES)
    s.add_argument("--limit", required=True, type=_positive_int)

    c = sub.add_parser("census", parents=[common], help="dyadic-strip collision census",
                       description="Emit CSV j1,j2,M,N,count,ratio for 1 <= j1, j2 <= JMAX, "
                                   "or with --star the multiplicity constants D1, D2.")
    c.add_argument("--fn", required=True, choices=FN_NAMES)
    c.add_argument("--parity", choices=arith.PARITIES, default="even")
    c.add_argument("--jmax", type=_positive_int, default=10)
    c.add_argument("--delta", type=_positive_float, default=1.0)
    c.add_argument("--star", action="store_true", help="report multiplicity constants D1, D2")
    c.add_argument("--limit", type=_positive_int, default=10_000, help="scan range for --star")

    k = sub.add_parser("kernel", parents=[common], help="dyadic cutoff checks and multipliers",
                       description="--check-telescope reports the max telescoping error; "
                                   "--sigma J emits CSV xi,eta,re,im on a GRID x GRID torus grid.")
    k.add_argument("--check-telescope", action="store_true")
    k.add_argument("--J", type=_positive_int, default=20)
    k.add_argument("--samples", type=_positive_int, default=10_000)
    k.add_argument("--smoothing", type=_positive_int, default=None,
                   help="C^k cutoff instead of the C-infinity one")
    k.add_argument("--sigma", type=_nonneg_int, default=None, metavar="J")
    k.add_argument("--grid", type=_positive_int, default=64)
    k.add_argument("--P", type=fn_spec, default="phi:even")
    k.add_argument("--Q", type=fn_spec, default="d:signodd")

    t = sub.add_parser("transform", parents=[common], help="truncated transform on a real grid",
                       description="Emit CSV x,re,im,tail_bound for the T0-truncated transform.")
    t.add_argument("--P", type=fn_spec, required=True, help="NAME:PARITY, e.g. phi:even")
    t.add_argument("--Q", type=fn_spec, required=True, help="NAME:PARITY, e.g. d:signodd")
    t.add_argument("--signal", choices=("cauchy", "indicator", "random"), default="cauchy")
    t.add_argument("--width", type=_positive_int, default=16, help="support of random signals")
    t.add_argument("--xmin", type=float, default=-15.0)
    t.add_argument("--xmax", type=float, default=15.0)
    t.add_argument("--step", type=float, default=0.1)
    t.add_argument("--T0", type=_positive_int, default=1000)

    pr = sub.add_parser("probe", help="level-set, V functional and maximal-operator probes")
    psub = pr.add_subparsers(dest="probe", required=True)
    lv = psub.add_parser("level-sets", parents=[common],
                         description="Emit CSV lambda,size,envelope (envelope = lambda^(1+eps) |E|).")
    mx = psub.add_parser("maximal", parents=[common], description="Emit CSV n,value.")
    for q in (lv, mx):
        q.add_argument("--P", type=fn_spec, default="phi:even")
        q.add_argument("--Q", type=fn_spec, default="d:signodd")
        q.add_argument("--signal", choices=("cauchy", "indicator", "random"), default="random")
        q.add_argument("--width", type=_positive_int, default=16)
        q.add_argument("--T0", type=_positive_int, default=1000,
                       help="truncation (level-sets) or largest average length (maximal)")
    lv.add_argument("--window", type=_window, default=None, metavar="A:B",
                    help="integer window; default is the full output support (compact signals)")
    lv.add_argument("--eps", type=_positive_float, default=0.9)
    lv.add_argument("--lambda-min", type=_positive_float, default=1e-3)
    lv.add_argument("--lambda-max", type=_positive_float, default=1.0)
    mx.add_argument("--nmin", type=int, default=-20)
    mx.add_argument("--nmax", type=int, default=20)
    v = psub.add_parser("v", parents=[common],
                        description="Emit CSV eta,exact,bound where bound = census majorant * sup|rho|^2.")
    v.add_argument("--P", type=fn_spec, default="phi:even")
    v.add_argument("--Q", type=fn_spec, default="d:signodd")
    v.add_argument("--eta-grid", type=_positive_int, default=1024)
    v.add_argument("--M", type=_nonneg_int, default=2)
    v.add_argument("--Jmax", type=_nonneg_int, default=14)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rng = np.random.default_rng(args.seed)
    try:
        if args.command == "sieve":
            cmd_sieve(args)
        elif args.command == "census":
            cmd_census(args)
        elif args.command == "kernel":
            cmd_kernel(args)
        elif args.command == "transform":
            cmd_transform(args, rng)
        else:
            cmd_probe(args, rng)
    except (ValueError, KeyError, RuntimeError, OSError, MemoryError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"arithradon {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
