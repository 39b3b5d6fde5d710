"""Command-line sweeps over the heralding pipeline, emitted as CSV.

Five subcommands: fidelity-sweep, prob-sweep, meanphoton-sweep,
detector-report, oracle-check.  All CSV output is deterministic: fixed
grid ordering, fixed significant-digit formatting, header always present,
so identical invocations produce byte-identical files.

Exit codes: 0 success, 1 usage error, 2 numeric/domain error, 3 oracle
check failure.
"""

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from .cats import mean_photon, optimal_y
from .detector import lossy_fidelity_exact
from .errors import DomainError, TruncationError
from .hub import HubConfig, Outcome
from .probabilities import joint_success_prob


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse failures through our exit-code convention
    def error(self, message):
        raise _UsageError(message)


def _parse_floats(text: str) -> list:
    """Comma list ("0.9,0.95") or inclusive range ("0.5:6:0.25")."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise _UsageError(f"range must be start:stop:step, got {text!r}")
            start, stop, step = (float(p) for p in parts)
            if step <= 0.0 or stop < start:
                raise _UsageError(f"empty or backwards range: {text!r}")
            count = int((stop - start) / step + 1e-9)
            vals = [round(start + i * step, 12) for i in range(count + 1)]
        else:
            vals = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise _UsageError(f"bad numeric list {text!r}: {exc}") from exc
    if not vals:
        raise _UsageError(f"empty grid: {text!r}")
    return vals


def _parse_ints(text: str) -> list:
    try:
        vals = [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise _UsageError(f"bad integer list {text!r}: {exc}") from exc
    if not vals:
        raise _UsageError(f"empty list: {text!r}")
    return vals


def _parse_counts(text: str) -> list:
    """Detector patterns: ';'-separated, each 'n1,n2' (two taps) or 'n' (one)."""
    out = []
    for entry in text.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        counts = tuple(_parse_ints(entry))
        if len(counts) not in (1, 2):
            raise _UsageError(f"count pattern must have 1 or 2 entries: {entry!r}")
        if any(c < 0 for c in counts):
            raise _UsageError(f"negative photon count in {entry!r}")
        out.append(counts)
    if not out:
        raise _UsageError(f"empty counts list: {text!r}")
    return out


def _fmt(value, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return "%.*g" % (precision, value)


def _write_csv(path: str, header, rows, precision: int) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(cell, precision) for cell in row))
    data = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(data)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(data)


def _map_tasks(func, tasks, workers: int) -> list:
    # pool.map keeps submission order, so grid order survives parallelism
    if workers <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks))


def _check_common(args) -> None:
    if args.workers < 1:
        raise _UsageError(f"--workers must be >= 1, got {args.workers}")
    if not 1 <= args.precision <= 17:
        raise _UsageError(f"--precision must be in [1, 17], got {args.precision}")


def _fidelity_row(task):
    parity, n, beta = task
    res = optimal_y(parity, n, beta)
    return (parity, n, beta, res.y_star, res.fidelity, res.evaluations)


def cmd_fidelity_sweep(args) -> int:
    _check_common(args)
    ns = _parse_ints(args.N)
    betas = _parse_floats(args.beta)
    offset = 0 if args.parity == "even" else 1
    for n in ns:
        if n < 0 or n % 2 != offset:
            raise _UsageError(
                f"count {n} does not have parity {args.parity!r}"
            )
    tasks = [(args.parity, n, beta) for n in ns for beta in betas]
    rows = _map_tasks(_fidelity_row, tasks, args.workers)
    header = ("parity", "N", "beta", "y_star", "fidelity", "evaluations")
    _write_csv(args.out, header, rows, args.precision)
    return 0


def _meanphoton_row(task):
    parity, n, beta = task
    res = optimal_y(parity, n, beta)
    mean_n = mean_photon(parity, n, res.y_star)
    return (parity, n, beta, res.y_star, mean_n, beta * beta)


def cmd_meanphoton_sweep(args) -> int:
    _check_common(args)
    ns = _parse_ints(args.N)
    betas = _parse_floats(args.beta)
    offset = 0 if args.parity == "even" else 1
    for n in ns:
        if n < 0 or n % 2 != offset:
            raise _UsageError(
                f"count {n} does not have parity {args.parity!r}"
            )
    tasks = [(args.parity, n, beta) for n in ns for beta in betas]
    rows = _map_tasks(_meanphoton_row, tasks, args.workers)
    header = ("parity", "N", "beta", "y_star", "mean_n", "beta_sq")
    _write_csv(args.out, header, rows, args.precision)
    return 0


def _prob_row(task):
    t, beta, counts = task
    total = sum(counts)
    parity = "even" if total % 2 == 0 else "odd"
    res = optimal_y(parity, total, beta)
    n1 = counts[0]
    n2 = counts[1] if len(counts) == 2 else None
    scale = (t * t) ** len(counts)
    # herald point fixed by the fidelity optimum; the source squeezing must
    # reach it through the taps, which fails once tanh(s) would hit 1
    if 2.0 * res.y_star / scale >= 1.0:
        return (t, beta, n1, n2, res.y_star, math.nan, math.nan)
    cfg = HubConfig.from_target_y(res.y_star, (t,) * len(counts))
    prob = joint_success_prob(cfg, Outcome(counts)).to_float()
    return (t, beta, n1, n2, res.y_star, cfg.squeezing, prob)


def cmd_prob_sweep(args) -> int:
    _check_common(args)
    ts = _parse_floats(args.t)
    for t in ts:
        if not 0.0 < t <= 1.0:
            raise _UsageError(f"transmittance must lie in (0, 1], got {t}")
    betas = _parse_floats(args.beta)
    counts = _parse_counts(args.counts)
    tasks = [(t, beta, c) for t in ts for beta in betas for c in counts]
    rows = _map_tasks(_prob_row, tasks, args.workers)
    header = ("t", "beta", "n1", "n2", "y2", "s_backsolved", "probability")
    _write_csv(args.out, header, rows, args.precision)
    return 0


def cmd_detector_report(args) -> int:
    _check_common(args)
    ts = _parse_floats(args.t)
    ks = _parse_ints(args.k)
    for t in ts:
        if not 0.0 < t <= 1.0:
            raise _UsageError(f"transmittance must lie in (0, 1], got {t}")
    for k in ks:
        if k < 1:
            raise _UsageError(f"splitter count must be >= 1, got {k}")
    if not 0.0 < args.eta <= 1.0:
        raise _UsageError(f"--eta must lie in (0, 1], got {args.eta}")
    if args.N % 2 != 0 or args.N < 0:
        raise _UsageError(f"reference count --N must be even and >= 0, got {args.N}")

    ref = optimal_y("even", args.N, args.beta)
    rows = []
    summary = []
    for k in ks:
        for t in ts:
            t_prod_sq = (t * t) ** k
            eps = (1.0 - t_prod_sq) / t_prod_sq
            rf = eps * args.mean_n
            mult_first = 1.0 - (1.0 - args.eta) * rf
            penalty = ((1.0 - args.eta) * rf) ** 2
            mult_exact = None
            if k == 1 and 2.0 * ref.y_star / t_prod_sq < 1.0:
                cfg = HubConfig.from_target_y(ref.y_star, (t,))
                exact = lossy_fidelity_exact(cfg, args.N, args.eta, args.beta)
                mult_exact = exact / ref.fidelity
            rows.append(
                (k, t, args.eta, args.mean_n, rf, mult_first, mult_exact, penalty)
            )
            summary.append(
                f"k={k} t={t:g}: reduction factor {rf:.4g}, "
                f"first-order multiplier {mult_first:.4g}"
                + (f", exact multiplier {mult_exact:.4g}" if mult_exact else "")
            )
    header = (
        "k",
        "t",
        "eta",
        "mean_n",
        "reduction_factor",
        "multiplier_firstorder",
        "multiplier_exact",
        "tradeoff_penalty",
    )
    _write_csv(args.out, header, rows, args.precision)
    print("\n".join(summary), file=sys.stderr)
    return 0


def cmd_oracle_check(args) -> int:
    _check_common(args)
    from .oracle import equivalence_grid

    ts = tuple(_parse_floats(args.t))
    ss = tuple(_parse_floats(args.s))
    report = equivalence_grid(
        k_max=args.k,
        total_max=args.N,
        transmittances=ts,
        squeezings=ss,
        cutoff=args.cutoff,
    )
    lines = [
        f"cases checked: {report.cases}",
        f"worst fidelity deficit: {report.worst_fidelity_deficit:.3e} "
        f"at {report.worst_fidelity_case}",
        f"worst probability relative error: {report.worst_prob_rel_error:.3e} "
        f"at {report.worst_prob_case}",
        f"tolerance: {args.tolerance:.3e}",
        "result: PASS" if report.passed(args.tolerance) else "result: FAIL",
    ]
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    return 0 if report.passed(args.tolerance) else 3


def _add_common(sub) -> None:
    sub.add_argument("--out", default="-", help="output path ('-' = stdout)")
    sub.add_argument(
        "--config", default=None, help="key=value defaults file; flags override"
    )
    sub.add_argument("--workers", type=int, default=1, help="parallel workers")
    sub.add_argument(
        "--precision", type=int, default=12, help="significant digits in output"
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cathub",
        description="Sweep heralded-cat fidelities, probabilities and "
        "detector effects; emit deterministic CSV.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("fidelity-sweep", help="optimal herald parameter per (N, beta)")
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--N", default="90", help="comma list of detected counts")
    p.add_argument("--beta", default="0.5:6:0.25", help="target amplitude grid")
    _add_common(p)
    p.set_defaults(func=cmd_fidelity_sweep)

    p = sub.add_parser("prob-sweep", help="heralding probability at optimal y")
    p.add_argument("--t", default="0.8", help="comma list of tap transmittances")
    p.add_argument("--beta", default="2:3:0.1", help="target amplitude grid")
    p.add_argument(
        "--counts",
        default="10,10",
        help="';'-separated patterns, each 'n1,n2' or a single 'n'",
    )
    _add_common(p)
    p.set_defaults(func=cmd_prob_sweep)

    p = sub.add_parser("meanphoton-sweep", help="mean photon number at optimal y")
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--N", default="10,20,40,90", help="comma list of detected counts")
    p.add_argument("--beta", default="0.5:6:0.25", help="target amplitude grid")
    _add_common(p)
    p.set_defaults(func=cmd_meanphoton_sweep)

    p = sub.add_parser(
        "detector-report", help="loss factors and fidelity multipliers"
    )
    p.add_argument("--t", default="0.9,0.95,0.98", help="tap transmittances")
    p.add_argument("--k", default="1,2", help="comma list of chain lengths")
    p.add_argument("--eta", type=float, default=0.98, help="detector efficiency")
    p.add_argument("--mean-n", type=float, default=35.0, help="pinned mean photons")
    p.add_argument("--N", type=int, default=90, help="reference detected count")
    p.add_argument("--beta", type=float, default=6.0, help="reference amplitude")
    _add_common(p)
    p.set_defaults(func=cmd_detector_report)

    p = sub.add_parser("oracle-check", help="brute-force equivalence certificate")
    p.add_argument("--k", type=int, default=3, help="max chain length")
    p.add_argument("--N", type=int, default=6, help="max total detected count")
    p.add_argument("--t", default="0.7,0.8,0.9", help="tap transmittance set")
    p.add_argument("--s", default="0.5,1.0", help="squeezing set")
    p.add_argument("--cutoff", type=int, default=40, help="stored state cutoff")
    p.add_argument("--tolerance", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=cmd_oracle_check)

    return parser


def _config_tokens(path: str) -> list:
    toks = []
    try:
        with open(path, encoding="utf-8") as handle:
            for raw in handle:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise _UsageError(f"config line is not key=value: {raw.strip()!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key == "config":
                    raise _UsageError("config file cannot set 'config'")
                toks += [f"--{key}", value]
    except OSError as exc:
        raise _UsageError(f"cannot read config file {path}: {exc}") from exc
    return toks


def _splice_config(argv: list) -> list:
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                raise _UsageError("--config needs a path")
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None or not argv:
        return argv
    # insert file-derived flags right after the subcommand so that flags
    # given on the command line, which come later, win
    return argv[:1] + _config_tokens(path) + argv[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _splice_config(argv)
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_usage(sys.stderr)
            print("cathub: a subcommand is required", file=sys.stderr)
            return 1
        return args.func(args)
    except _UsageError as exc:
        print(f"cathub: usage error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, TruncationError) as exc:
        print(f"cathub: numeric/domain error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
