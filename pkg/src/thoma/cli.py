"""Command-line driver: verification suites, sampling, simulation,
evolution, and correlation queries with reproducible machine-readable
output.

Rationals on the command line are parsed exactly ("0.5" and "1/2" both
work); every stochastic record derives its randomness from the master seed
and its own index, so the byte output never depends on the worker count.
Output is JSON lines by default ({"cmd", "params", "seed", "record"} per
line); CSV is available for the flat tables.

Exit codes: 0 success, 1 check failure, 2 invalid configuration,
3 resource or truncation exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from . import correlations as cr
from . import generators as gn
from . import links as lk
from . import measures as ms
from . import partitions as pt
from . import polys
from . import symfunc as sf

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_EXHAUSTED = 3

SUITES = ("links", "intertwine", "eigen", "balance", "bounds", "plancherel", "all")


class ConfigError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not an exact rational: {text!r}") from exc


def parse_partition(text: str) -> pt.Partition:
    text = text.strip()
    if not text or text in ("-", "empty"):
        return ()
    try:
        parts = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"not a partition: {text!r}") from exc
    return pt.check_partition(parts)


def _record_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=[seed, index]))


class Writer:
    """Serializes records as JSON lines or a flat CSV table."""

    def __init__(self, cmd: str, params: dict, seed: int, fmt: str):
        if fmt not in ("json", "csv"):
            raise ConfigError(f"unknown format {fmt!r}")
        self.cmd = cmd
        self.seed = seed
        self.fmt = fmt
        self.params = {k: str(v) for k, v in params.items()}
        self.params["version"] = __version__
        self.rows: list[dict] = []

    def add(self, record: dict) -> None:
        self.rows.append(record)

    def dump(self) -> str:
        if self.fmt == "json":
            lines = [
                json.dumps(
                    {"cmd": self.cmd, "params": self.params, "seed": self.seed,
                     "record": row},
                    sort_keys=True,
                )
                for row in self.rows
            ]
            return "\n".join(lines) + "\n"
        fields = sorted({k for row in self.rows for k in row})
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row)
        return buf.getvalue()

    def write(self, out_path: str | None) -> str:
        path = out_path or _default_out_path(self.cmd, self.fmt)
        data = self.dump()
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        return path


def _default_out_path(cmd: str, fmt: str) -> str:
    directory = os.environ.get("THOMA_OUT_DIR", ".")
    ext = "jsonl" if fmt == "json" else "csv"
    return os.path.join(directory, f"thoma-{cmd}.{ext}")


def load_records(path: str):
    """Round-trip parser for the output files."""
    if path.endswith(".csv"):
        with open(path, encoding="utf-8", newline="") as fh:
            return list(csv.DictReader(fh))
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            for key in ("cmd", "params", "seed", "record"):
                if key not in obj:
                    raise ValueError(f"malformed record, missing {key!r}")
            records.append(obj)
    return records


def _format_partition(lam: pt.Partition) -> str:
    return " ".join(str(x) for x in lam) if lam else "-"


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def _suite_links(sigma, r, r_prime, n_max, tol):
    checks = []
    spec = lk.BouquetLinkSpec(r_prime, r)
    ok = all(
        sum(spec.row(lam).values()) == 1 for lam in pt.partitions_up_to(n_max)
    )
    checks.append(("bouquet-row-sums", ok, 0.0))

    mid = (r + r_prime) / 2
    comp_ok = True
    for lam in pt.partitions_up_to(min(n_max, 6)):
        step = lk.apply_link_to_measure({lam: Fraction(1)}, lk.BouquetLinkSpec(r_prime, mid))
        two = lk.apply_link_to_measure(step, lk.BouquetLinkSpec(mid, r))
        direct = {m: w for m, w in lk.BouquetLinkSpec(r_prime, r).row(lam).items() if w}
        comp_ok = comp_ok and two == direct
    checks.append(("bouquet-composition", comp_ok, 0.0))

    fs_ok = True
    for m in range(min(3, n_max) + 1):
        for mu in pt.enumerate_partitions(m):
            g = lk.apply_link_to_function(spec, lambda k, mu=mu: sf.fs_eval(mu, k))
            for lam in pt.partitions_up_to(n_max):
                fs_ok = fs_ok and g(lam) == (r / r_prime) ** m * sf.fs_eval(mu, lam)
    checks.append(("fs-action", fs_ok, 0.0))

    errs = [lk.binomial_sup_error(rr, r, 1, 40) for rr in (8 * r, 16 * r, 32 * r)]
    checks.append(("poisson-approx-trend", errs[0] > errs[1] > errs[2], errs[-1]))

    errs2 = [lk.approx_sup_error(rr, r, (1,), min(n_max + 6, 14)) for rr in (8 * r, 16 * r)]
    checks.append(("boundary-approx-trend", errs2[0] > errs2[1], errs2[-1]))
    return checks


def _suite_intertwine(sigma, r, r_prime, c, n_max, l_max=30):
    checks = []
    rep = gn.verify_intertwining(
        gn.Meixner1D(c, r_prime), gn.Meixner1D(c, r), l_max
    )
    checks.append(("meixner-1d", rep.ok, rep.max_defect))
    rep = gn.verify_intertwining(
        gn.ZMeasure(sigma, r_prime), gn.ZMeasure(sigma, r), n_max
    )
    checks.append(("z-chain", rep.ok, rep.max_defect))
    return checks


def _suite_eigen(sigma, r, c, n_max):
    checks = []
    spec1d = gn.Meixner1D(c, r)
    ok = True
    for n in range(7):
        mx = sf.meixner_poly_1d(n, c, r)
        for l in range(31):
            ok = ok and gn.apply_q(
                spec1d, lambda k: polys.ff_eval(mx, k), l
            ) == -n * polys.ff_eval(mx, l)
    checks.append(("meixner-poly-1d", ok, 0.0))

    ok = True
    for n in range(7):
        lg = sf.laguerre_poly_1d(n, c)
        out = gn.laguerre_op_1d(c, gn.ExpPoly1D(Fraction(0), lg))
        ok = ok and out.poly == polys.pscale(lg, -n)
    checks.append(("laguerre-poly-1d", ok, 0.0))

    spec = gn.ZMeasure(sigma, r)
    ok = True
    for n in range(5):
        for nu in pt.enumerate_partitions(n):
            fn = sf.meixner_sym(nu, sigma, r).as_diagram_function()
            for lam in pt.partitions_up_to(min(n_max, 7)):
                ok = ok and gn.apply_q(spec, fn, lam) == -n * fn(lam)
    checks.append(("meixner-sym", ok, 0.0))

    ok = True
    for n in range(5):
        for nu in pt.enumerate_partitions(n):
            lag = sf.convert(sf.laguerre_sym(nu, sigma), "e")
            out = gn.laguerre_op_sym(sigma, gn.ExpSymFn(Fraction(0), lag))
            ok = ok and out.fn == lag * -n
    checks.append(("laguerre-sym", ok, 0.0))
    return checks


def _suite_balance(sigma, r, n_max, tol):
    checks = []
    rep = ms.detailed_balance_check(sigma, r, min(n_max, 8))
    checks.append(("detailed-balance", rep.ok, rep.max_defect))
    rep = ms.stationarity_check(sigma, r, min(n_max, 20), [0.1, 1.0], tol)
    checks.append(("stationarity", rep.ok, rep.max_defect))
    rep = ms.coherence_check(sigma, 2 * r, r, min(n_max, 16))
    checks.append(("coherence", rep.ok, rep.max_defect))
    return checks


def _suite_bounds(sigma, r, c, n_max):
    checks = []
    rep = gn.verify_ek_bounds(gn.Meixner1D(c, r), 50)
    checks.append(("meixner-1d", rep.ok and rep.details["stabilized"], rep.max_defect))
    rep = gn.verify_ek_bounds(gn.ZMeasure(sigma, r), min(n_max, 8))
    checks.append(("z-chain", rep.ok and rep.details["stabilized"], rep.max_defect))
    ok = True
    spec = gn.ZMeasure(sigma, r)
    for lam in pt.partitions_up_to(min(n_max, 8)):
        up, down = gn.size_rate_sums(spec, lam)
        n = pt.size(lam)
        ok = ok and up == r * (sigma.sigma2 + n) and down == (r + 1) * n
    checks.append(("size-collapse", ok, 0.0))
    return checks


def _suite_plancherel(theta, n_max):
    checks = []
    sigmas = [sf.ParamPair(Fraction(0), Fraction(10 ** k)) for k in (2, 3, 4)]
    rep = gn.plancherel_limit_check(theta, sigmas, min(n_max, 4))
    checks.append(("q-matrix-limit", rep.ok, rep.max_defect))

    omega1 = sf.ThomaPoint((), (), Fraction(1))
    om = sf.ThomaPoint((Fraction(1, 2),), (Fraction(1, 3),), Fraction(2))
    flow_ok = ms.plancherel_flow_scale(Fraction(1, 2), omega1) == omega1
    for u, v in ((Fraction(1, 2), Fraction(2, 3)), (Fraction(3, 4), Fraction(1, 5))):
        two = ms.plancherel_flow_scale(u, ms.plancherel_flow_scale(v, om))
        flow_ok = flow_ok and two == ms.plancherel_flow_scale(u * v, om)
    checks.append(("flow-semigroup", flow_ok, 0.0))

    p = sf.SymFn.term("p", (1,))
    op_ok = gn.plancherel_limit_operator(p) == sf.SymFn("p", {(): 1, (1,): -1})
    for n in (2, 3):
        pn = sf.SymFn.term("p", (n,))
        op_ok = op_ok and gn.plancherel_limit_operator(pn) == pn * -n
    checks.append(("limit-operator", op_ok, 0.0))

    total = sum(
        ms.plancherel_measure(theta, lam) for lam in pt.partitions_up_to(min(n_max + 14, 22))
    )
    defect = abs(total - 1.0)
    checks.append(("measure-mass", defect < 1e-6, defect))
    return checks


def cmd_verify(args) -> int:
    sigma = sf.ParamPair(args.sigma1, args.sigma2)
    if not sigma.is_admissible():
        print(f"inadmissible parameters: sigma1={sigma.sigma1} sigma2={sigma.sigma2}",
              file=sys.stderr)
        return EXIT_BAD_CONFIG
    if not (args.r_prime > args.r > 0):
        print("need r_prime > r > 0", file=sys.stderr)
        return EXIT_BAD_CONFIG

    suites = SUITES[:-1] if args.suite == "all" else (args.suite,)
    writer = Writer("verify", _param_echo(args), args.seed, args.format)
    all_ok = True
    for suite in suites:
        if suite == "links":
            checks = _suite_links(sigma, args.r, args.r_prime, args.max_size, args.tolerance)
        elif suite == "intertwine":
            checks = _suite_intertwine(sigma, args.r, args.r_prime, args.c, args.max_size)
        elif suite == "eigen":
            checks = _suite_eigen(sigma, args.r, args.c, args.max_size)
        elif suite == "balance":
            checks = _suite_balance(sigma, args.r, args.max_size, args.tolerance)
        elif suite == "bounds":
            checks = _suite_bounds(sigma, args.r, args.c, args.max_size)
        else:
            checks = _suite_plancherel(args.theta, args.max_size)
        for check_id, ok, defect in checks:
            all_ok = all_ok and ok
            writer.add(
                {
                    "suite": suite,
                    "check_id": check_id,
                    "status": "pass" if ok else "fail",
                    "max_defect": float(defect),
                }
            )
    path = writer.write(args.out)
    print(f"wrote {path}")
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# stochastic commands
# ---------------------------------------------------------------------------


def cmd_sample(args) -> int:
    sigma = sf.ParamPair(args.sigma1, args.sigma2)
    if not sigma.is_admissible():
        print("inadmissible parameters", file=sys.stderr)
        return EXIT_BAD_CONFIG
    sampler = ms.ZMeasureSampler(sigma, args.r, cap=args.cap)

    def draw(index: int):
        lam = sampler.sample(_record_rng(args.seed, index), on_overflow="raise")
        return {"index": index, "size": pt.size(lam), "partition": _format_partition(lam)}

    writer = Writer("sample", _param_echo(args), args.seed, args.format)
    try:
        if args.workers > 1:
            with ThreadPoolExecutor(max_workers=args.workers) as pool:
                rows = list(pool.map(draw, range(args.n)))
        else:
            rows = [draw(i) for i in range(args.n)]
    except ms.CapExceeded as exc:
        print(f"size cap exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    for row in rows:
        writer.add(row)
    path = writer.write(args.out)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    sigma = sf.ParamPair(args.sigma1, args.sigma2)
    if not sigma.is_admissible():
        print("inadmissible parameters", file=sys.stderr)
        return EXIT_BAD_CONFIG
    spec = gn.ZMeasure(sigma, args.r)
    start = parse_partition(args.start)
    traj = ms.gillespie(spec, start, args.t_end, _record_rng(args.seed, 0))
    writer = Writer("simulate", _param_echo(args), args.seed, args.format)
    for i, (t, state) in enumerate(traj.events):
        writer.add({"event": i, "time": t, "state": _format_partition(state),
                    "size": pt.size(state)})
    path = writer.write(args.out)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    sigma = sf.ParamPair(args.sigma1, args.sigma2)
    if not sigma.is_admissible():
        print("inadmissible parameters", file=sys.stderr)
        return EXIT_BAD_CONFIG
    spec = gn.ZMeasure(sigma, args.r)
    if args.start == "stationary":
        m0 = ms.z_ensemble(sigma, args.r, args.max_size)
    else:
        m0 = ms.delta_ensemble(parse_partition(args.start), args.max_size)
    try:
        mt = ms.evolve(spec, m0, args.t, args.max_size, tol=args.tolerance,
                       max_leak=args.max_leak)
    except ms.TruncationExceeded as exc:
        print(f"truncation exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    writer = Writer("evolve", _param_echo(args), args.seed, args.format)
    for lam in sorted(mt.weights, key=lambda s: (pt.size(s), s), reverse=False):
        w = mt.weights[lam]
        if w > args.tolerance * 1e-3:
            writer.add({"partition": _format_partition(lam), "size": pt.size(lam),
                        "weight": w})
    writer.add({"partition": "<tail>", "size": -1, "weight": mt.tail_bound})
    path = writer.write(args.out)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_correlate(args) -> int:
    sigma = sf.ParamPair(args.sigma1, args.sigma2)
    if not sigma.is_admissible():
        print("inadmissible parameters", file=sys.stderr)
        return EXIT_BAD_CONFIG
    if args.format == "csv":
        print("correlate reports are nested; use json", file=sys.stderr)
        return EXIT_BAD_CONFIG
    points = [parse_rational(x) for x in args.points.split(",") if x.strip()]
    if args.times is None:
        result = cr.static_correlation(sigma, args.r, points, args.max_size)
        kind = "static"
    else:
        times = [float(parse_rational(x)) for x in args.times.split(",") if x.strip()]
        if len(times) != len(points):
            print("need one time per point", file=sys.stderr)
            return EXIT_BAD_CONFIG
        order = sorted(range(len(times)), key=lambda i: times[i])
        query = cr.SpaceTimeQuery(tuple((points[i], times[i]) for i in order))
        result = cr.dynamic_correlation(sigma, args.r, query, args.max_size)
        kind = "dynamic"
    writer = Writer("correlate", _param_echo(args), args.seed, "json")
    writer.add(
        {
            "kind": kind,
            "value": result.value,
            "error_bound": result.error_bound,
            "lattice_ok": result.lattice_ok,
        }
    )
    path = writer.write(args.out)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_plancherel(args) -> int:
    theta = args.theta
    if theta <= 0:
        print("need theta > 0", file=sys.stderr)
        return EXIT_BAD_CONFIG
    writer = Writer("plancherel", _param_echo(args), args.seed, args.format)
    total = 0.0
    for lam in pt.partitions_up_to(args.max_size):
        w = ms.plancherel_measure(theta, lam)
        total += w
        writer.add({"partition": _format_partition(lam), "size": pt.size(lam),
                    "weight": w})
    writer.add({"partition": "<tail>", "size": -1, "weight": max(0.0, 1.0 - total)})
    path = writer.write(args.out)
    print(f"wrote {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _param_echo(args) -> dict:
    # workers is an execution detail: the contract is that it never changes
    # the output bytes, so it cannot appear in the echo
    skip = {"func", "out", "format", "workers"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _add_common(p: argparse.ArgumentParser, stochastic: bool = False):
    p.add_argument("--sigma1", type=parse_rational, default=Fraction(0))
    p.add_argument("--sigma2", type=parse_rational, default=Fraction(1))
    p.add_argument("--r", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--r-prime", dest="r_prime", type=parse_rational,
                   default=Fraction(3, 2))
    p.add_argument("--theta", type=parse_rational, default=Fraction(1))
    p.add_argument("--c", type=parse_rational, default=Fraction(1))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-size", dest="max_size", type=int, default=8)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    if stochastic:
        p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thoma",
        description="Markov dynamics on Young diagrams and the Thoma cone",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="draw from the stationary measure")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--cap", type=int, default=50)
    _add_common(p, stochastic=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("simulate", help="simulate one trajectory")
    p.add_argument("--t-end", dest="t_end", type=float, default=10.0)
    p.add_argument("--start", default="-")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evolve", help="evolve a distribution by uniformization")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--start", default="stationary")
    p.add_argument("--max-leak", dest="max_leak", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("correlate", help="static or dynamical correlation query")
    p.add_argument("--points", required=True,
                   help="comma-separated lattice positions, e.g. 0.5,-0.5")
    p.add_argument("--times", default=None,
                   help="comma-separated times matching --points; omit for static")
    _add_common(p)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("plancherel", help="Poissonized Plancherel table")
    _add_common(p)
    p.set_defaults(func=cmd_plancherel)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses code 2 for bad usage, matching the config exit code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BAD_CONFIG
    except (ms.TruncationExceeded, ms.CapExceeded, lk.TruncationError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())
