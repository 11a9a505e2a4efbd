"""Command-line interface.

Exit codes: 0 when something was found, 2 when nothing was, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .channel import FrameSpec, frame, read_stream, write_stream
from .codes import CodeSpec, format_matrix, hamming74, parse_code, random_code
from .experiment import DEFAULT_PFA, DEFAULT_PND, ExperimentSpec, format_csv, run_table, synthesize
from .gf2 import BitMatrix, read_matrix
from .recovery import RecoveryConfig, iterative_eliminate, verify_candidates
from .rng import Rng, random_bits
from .search import SweepGrid, sweep
from .stats import NOISELESS_MARGIN, DetectionParams, default_wt_max, min_rows, plan, threshold, verification_cut

EXIT_FOUND, EXIT_ERROR, EXIT_NONE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def _load_stream(path: str, bits: int | None) -> np.ndarray:
    p = Path(path)
    if bits is None and _sidecar(p).exists():
        bits = json.loads(_sidecar(p).read_text()).get("bits")
    return read_stream(p, bits)


def _load_truth(path: str | None) -> CodeSpec | None:
    if not path:
        return None
    p = Path(path)
    text = p.read_text()
    if p.suffix == ".json" or text.lstrip().startswith("{"):
        return parse_code(json.loads(text)["code"])
    return parse_code(text)


def cmd_simulate(args) -> int:
    if not 1 <= args.k < args.n and not args.hamming:
        raise UsageError("need 1 <= k < n")
    if args.count < 1:
        raise UsageError("count must be >= 1")
    rng = Rng(args.seed)
    code = hamming74() if args.hamming else random_code(args.n, args.k, rng)
    clean, noisy = synthesize(code, args.count, args.epsilon, rng)
    stream = noisy.ravel()
    if args.prefix_bits:
        stream = np.concatenate([random_bits(rng, args.prefix_bits), stream])
    nbits = write_stream(args.out, stream)
    meta = {
        "bits": nbits,
        "n": code.n,
        "k": code.k,
        "epsilon": args.epsilon,
        "count": args.count,
        "seed": args.seed,
        "prefix_bits": args.prefix_bits,
        "flips": int((clean != noisy).sum()),
        "code": f"{code.n} {code.k}\n" + format_matrix(code.generator) + format_matrix(code.parity_check),
    }
    _sidecar(Path(args.out)).write_text(json.dumps(meta, indent=2) + "\n")
    print(f"wrote {nbits} bits to {args.out}", file=sys.stderr)
    return EXIT_FOUND


def _detection(args, n: int) -> DetectionParams:
    wt = args.wt_max or default_wt_max(n)
    return DetectionParams(args.epsilon or 0.0, args.pfa, args.pnd, wt)


def cmd_recover(args) -> int:
    if args.matrix:
        data = read_matrix(args.matrix)
        n = data.cols
    else:
        if not args.input or not args.n:
            raise UsageError("give --matrix, or --input together with --n")
        n = args.n
        stream = _load_stream(args.input, args.bits)
        data = frame(stream, FrameSpec(n, args.offset))
    if not args.k or not 1 <= args.k < n:
        raise UsageError("need --k with 1 <= k < n")
    k = args.k
    if args.epsilon is None and (args.rows is None or args.threshold is None):
        raise UsageError("need --epsilon, or both --rows and --threshold")
    params = _detection(args, n)
    available = data.rows
    if args.rows is not None:
        m = args.rows
    elif params.epsilon == 0:
        m = n + NOISELESS_MARGIN
    else:
        m = min_rows(params)
    if available < m:
        msg = f"{available} rows available, plan asks for M={m}"
        if not args.force:
            raise UsageError(msg + " (use --force to proceed)")
        warnings.warn(msg, stacklevel=1)
        m = available
    data = data.select_rows(range(m))
    if args.threshold is not None:
        t = args.threshold
    elif params.epsilon == 0:
        t = 1.0
    else:
        t = threshold(m, params.p_fa)
    config = RecoveryConfig(n, k, args.iterations, t, args.early_stop)
    report = iterative_eliminate(data, config)
    report = verify_candidates(report, data, verification_cut(max(1, m - k), params), drop=not args.keep_unverified)
    out = report.to_dict()
    out["plan"] = {"M": m, "T": t, "epsilon": params.epsilon, "p_fa": params.p_fa,
                   "p_nd": params.p_nd, "wt_max": params.wt_max}
    truth = _load_truth(args.truth)
    if truth is not None:
        out["true_dual_count"] = report.true_dual_count(truth)
        out["true_dual_rank"] = report.true_dual_rank(truth)
    text = json.dumps(out, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_FOUND if report.recovered_rank >= 1 else EXIT_NONE


def cmd_plan(args) -> int:
    n = args.n or 32
    params = _detection(args, n)
    print(json.dumps(plan(params).as_dict()))
    return EXIT_FOUND


def cmd_table2(args) -> int:
    cells = []
    for n in args.n:
        spec = ExperimentSpec(n, args.rate, tuple(args.epsilons), args.trials, args.m_multiplier,
                              args.iterations, args.seed, args.pfa)
        cells.extend(run_table(spec, workers=args.workers))
    text = format_csv(cells)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_FOUND


def cmd_sweep(args) -> int:
    stream = _load_stream(args.input, args.bits)
    grid = SweepGrid(list(range(args.n_min, args.n_max + 1)), rate_hypotheses=args.rates,
                     budget=args.budget, iterations=args.iterations)
    detection = DetectionParams(args.epsilon, args.pfa, args.pnd)
    result = sweep(stream, grid, detection, wt_max=args.wt_max)
    text = result.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for note in result.notes:
        print(note, file=sys.stderr)
    best = result.best
    if best is None or best.recovered_rank < 1 or best.normalized_score < 0.5:
        print("no code detected", file=sys.stderr)
        return EXIT_NONE
    print(f"best: n={best.n} offset={best.offset} k={best.k}", file=sys.stderr)
    return EXIT_FOUND


def _add_detection(p, epsilon_default=None):
    p.add_argument("--epsilon", type=float, default=epsilon_default, help="assumed crossover probability")
    p.add_argument("--pfa", type=float, default=DEFAULT_PFA, help="false-alarm probability")
    p.add_argument("--pnd", type=float, default=DEFAULT_PND, help="non-detection probability")
    p.add_argument("--wt-max", type=int, default=None, help="assumed max dual-word weight (default 2*ceil(log2 n))")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parelim", description="Recover parity-check words from intercepted bitstreams.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="encode random messages and pass them through a BSC")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--hamming", action="store_true", help="use Hamming(7,4) instead of a random code")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--count", type=int, required=True, help="number of codewords")
    p.add_argument("--prefix-bits", type=int, default=0, help="random bits prepended to the stream")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("recover", help="recover dual words from a stream or a matrix")
    p.add_argument("--input", help="packed bitstream file")
    p.add_argument("--bits", type=int, help="stream length in bits (default: sidecar JSON)")
    p.add_argument("--matrix", help="text matrix file, one frame per row")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--offset", type=int, default=0)
    _add_detection(p)
    p.add_argument("--rows", type=int, help="use exactly this many rows (M)")
    p.add_argument("--threshold", type=float, help="override the weight threshold T")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--early-stop", action="store_true")
    p.add_argument("--keep-unverified", action="store_true", help="report candidates that fail verification too")
    p.add_argument("--force", action="store_true", help="proceed when fewer rows than planned")
    p.add_argument("--truth", help="ground-truth code (simulate sidecar JSON or code text)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("sweep", help="search frame length and offset")
    p.add_argument("--input", required=True)
    p.add_argument("--bits", type=int)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--rates", type=_floats, default=None, help="comma-separated k/n guesses")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--iterations", type=int, default=None)
    _add_detection(p, epsilon_default=0.01)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table2", help="rate-1/2 random-code recovery experiment")
    p.add_argument("--n", type=_ints, default=[32])
    p.add_argument("--rate", type=float, default=0.5)
    p.add_argument("--epsilons", type=_floats, default=[0.001, 0.002, 0.005, 0.01, 0.02, 0.05])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--m-multiplier", type=int, default=10)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--pfa", type=float, default=DEFAULT_PFA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("plan", help="print the planned M and T as JSON")
    _add_detection(p, epsilon_default=0.01)
    p.add_argument("--n", type=int, help="code length, for the default wt-max")
    p.set_defaults(func=cmd_plan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
