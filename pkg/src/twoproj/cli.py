"""Command-line entry point: ``twoproj {sample,limit,rate,chi,verify}``.

Exit status is 0 on success, 1 when ``verify`` finds a failing check, 2 on
usage or input errors and 3 on numerical failures.  The default seed comes
from the ``TWOPROJ_SEED`` environment variable (0 when unset).
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .ensembles import sample_pair
from .errors import ExtractionError, NumericError, TwoProjError
from .harness import SUITES, ranks, run_suite
from .limits import minimizer_for
from .rate import free_entropy, rate_contracted
from .rng import RngStream
from .spectra import SpectralMeasure, Tag, catalog_from_name, catalog_spectrum
from .tracial import TracialState

SEED_ENV = "TWOPROJ_SEED"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _fmt(x):
    """Shortest round-trip decimal for a float."""
    return repr(float(x))


def _ext(x):
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return x


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _function(args):
    if args.fn == Tag.LINEAR.value and (args.a is None or args.b is None):
        raise UsageError("--fn linear needs --a and --b")
    return catalog_from_name(args.fn, args.a, args.b)


def _resolve_ranks(args):
    """``(k, l, note)`` from exactly one of ``--k/--l`` or ``--alpha/--beta``."""
    by_rank = args.k is not None or args.l is not None
    by_ratio = args.alpha is not None or args.beta is not None
    if by_rank == by_ratio:
        raise UsageError("give exactly one of --k/--l or --alpha/--beta")
    if by_rank:
        if args.k is None or args.l is None:
            raise UsageError("--k and --l go together")
        return args.k, args.l, "ranks given"
    if args.alpha is None or args.beta is None:
        raise UsageError("--alpha and --beta go together")
    k, l = ranks(args.N, args.alpha, args.beta)  # noqa: E741
    return k, l, "k=floor(alpha*N+1/2) l=floor(beta*N+1/2)"


def cmd_sample(args):
    if args.N < 1 or args.samples < 1:
        raise UsageError("--N and --samples must be positive")
    h = _function(args)
    k, l, note = _resolve_ranks(args)  # noqa: E741
    if not (0 <= k <= args.N and 0 <= l <= args.N):
        raise UsageError(f"ranks ({k}, {l}) outside [0, {args.N}]")

    def one(i):
        return catalog_spectrum(sample_pair(args.N, k, l, RngStream(args.seed, i)), h)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as ex:
            rows = list(ex.map(one, range(args.samples)))
    else:
        rows = [one(i) for i in range(args.samples)]
    meta = {
        "command": "sample",
        "N": args.N,
        "k": k,
        "l": l,
        "alpha": args.alpha,
        "beta": args.beta,
        "rank_rule": note,
        "fn": str(h),
        "samples": args.samples,
        "seed": args.seed,
        "values": "angles in (-pi, pi]" if h.is_unitary else "eigenvalues",
    }
    if args.format == "json":
        text = json.dumps({"meta": meta, "samples": [[float(v) for v in r] for r in rows]}) + "\n"
    else:
        head = "".join(f"# {key}={val}\n" for key, val in meta.items())
        text = head + "".join(",".join(_fmt(v) for v in r) + "\n" for r in rows)
    _write(text, args.out)
    return EXIT_OK


def cmd_limit(args):
    h = _function(args)
    law = minimizer_for(h, args.alpha, args.beta)
    d = law.to_dict(args.grid)
    d.update({"fn": str(h), "alpha": args.alpha, "beta": args.beta})
    _write(json.dumps(d) + "\n", args.out)
    if args.csv:
        rows = "".join(f"{_fmt(x)},{_fmt(y)}\n" for x, y in zip(d["grid"], d["density_values"]))
        _write("x,density\n" + rows, args.csv)
    return EXIT_OK


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def cmd_rate(args):
    h = _function(args)
    try:
        measure = SpectralMeasure.from_dict(_load_json(args.measure))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed measure file: {exc}") from exc
    value = rate_contracted(measure, h, args.alpha, args.beta)
    out = {"fn": str(h), "alpha": args.alpha, "beta": args.beta, "rate": _ext(value)}
    _write(json.dumps(out) + "\n", args.out)
    return EXIT_OK


def cmd_chi(args):
    try:
        tau = TracialState.from_dict(_load_json(args.state))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed state file: {exc}") from exc
    _write(json.dumps({"chi": _ext(free_entropy(tau))}) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args):
    config = {"threads": args.threads}
    report = run_suite(args.suite, config, args.seed)
    text = report.to_json() + "\n"
    _write(text, args.out)
    if args.out not in (None, "-"):
        for c in report.checks:
            sys.stderr.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.statistic:.3g} (<= {c.threshold:.3g})\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _catalog_args(p, need_ratio=False):
    p.add_argument("--fn", choices=[t.value for t in Tag], default="pqp", help="catalog function h(P, Q)")
    p.add_argument("--a", type=float, help="coefficient of P for --fn linear")
    p.add_argument("--b", type=float, help="coefficient of Q for --fn linear")
    if need_ratio:
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--beta", type=float, required=True)


def build_parser():
    parser = argparse.ArgumentParser(prog="twoproj", description="Random projection pairs: spectra, limit laws and rate functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="eigenvalues of h(P, Q) for random pairs, one CSV row per sample")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    _catalog_args(p)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("limit", help="limit law of h(P, Q) as JSON, optionally a density grid CSV")
    _catalog_args(p, need_ratio=True)
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.add_argument("--csv", help="also write the density grid as CSV")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("rate", help="rate function of a spectral measure stored as JSON")
    _catalog_args(p, need_ratio=True)
    p.add_argument("--measure", required=True, help="JSON file with atoms, cloud, cloud_mass")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("chi", help="free entropy of a tracial state stored as JSON")
    p.add_argument("--state", required=True, help="JSON file with a11, a10, a01, a00, mu")
    p.add_argument("--out")
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("verify", help="run a verification suite; exit 0 iff it passes")
    p.add_argument("--suite", default="all", type=str.upper, choices=sorted(SUITES) + ["ALL"])
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (NumericError, ExtractionError) as exc:
        sys.stderr.write(f"twoproj: numerical failure: {exc}\n")
        residual = getattr(exc, "residual", None)
        if residual is not None:
            sys.stderr.write(f"twoproj: residual={residual!r}\n")
        return EXIT_NUMERIC
    except (TwoProjError, ValueError) as exc:
        sys.stderr.write(f"twoproj: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
