"""Command-line interface: encode, decode, gen, entropy, experiment.

Exit codes: 0 success, 1 usage/input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiments, fileio, hmm
from .codec import DacParams, decode, encode
from .errors import DachmmError, InvalidParameter


def _add_model_args(sub):
    sub.add_argument("--model-file", help="JSON model file (full or 4-scalar form)")
    sub.add_argument("--a00", type=float)
    sub.add_argument("--a11", type=float)
    sub.add_argument("--b00", type=float)
    sub.add_argument("--b11", type=float)


def _model_from_args(args) -> hmm.HmmModel:
    if args.model_file:
        return hmm.load_model(args.model_file)
    scalars = (args.a00, args.a11, args.b00, args.b11)
    if any(v is None for v in scalars):
        raise InvalidParameter("give --model-file or all of --a00 --a11 --b00 --b11")
    return hmm.from_table_scalars(*scalars)


def _cmd_encode(args) -> int:
    x = fileio.read_sequence(args.input)
    params = DacParams(p=args.p, gamma=args.gamma, T=args.T, M=1)
    cw = encode(x, params)
    fileio.write_codeword(args.output, cw)
    print(f"rate {cw.rate:.6f} bits/symbol ({cw.n_bits} bits, {cw.n_symbols} symbols)")
    return 0


def _cmd_decode(args) -> int:
    cw = fileio.read_codeword(args.codeword)
    y = fileio.read_sequence(args.side_info)
    model = _model_from_args(args)
    params = DacParams(p=args.p, gamma=args.gamma, M=args.M, T=args.T)
    x_hat = decode(cw, y, model, params)
    fileio.write_sequence(args.output, x_hat, binary=args.binary)
    return 0


def _cmd_gen(args) -> int:
    model = _model_from_args(args)
    ss = np.random.SeedSequence(args.seed)
    x_seed, z_seed = ss.spawn(2)
    x = (np.random.default_rng(x_seed).random(args.n) < args.p).astype(np.uint8)
    _, z = hmm.sample(model, args.n, z_seed)
    z = z.astype(np.uint8)
    y = x ^ z
    for path, seq in ((args.x, x), (args.z, z), (args.y, y)):
        fileio.write_sequence(path, seq, binary=args.binary)
    return 0


def _cmd_entropy(args) -> int:
    model = _model_from_args(args)
    h = hmm.entropy_rate(model, args.n, args.seed)
    print(f"{h:.6f}")
    return 0


def _cmd_experiment(args) -> int:
    model_ids = [int(s) for s in args.models.split(",") if s]
    base = DacParams(p=args.p, gamma=1.0, M=args.M, T=args.T)

    def progress(mid, done, total, res):
        if args.verbose:
            print(f"model {mid}: trial {done}/{total} gamma={res.gamma_final:.2f} "
                  f"rate={res.rate:.4f} attempts={res.attempts}", file=sys.stderr)

    summaries, per_trial = experiments.run_models(
        model_ids, trials=args.trials, n=args.N, base=base,
        master_seed=args.seed, entropy_n=args.entropy_n, progress=progress)
    if args.out:
        experiments.write_trials_csv(args.out, per_trial)
    if args.summary_out:
        experiments.write_summary_csv(args.summary_out, summaries)
    print(experiments.format_summary_table(
        summaries, reference_scale=(args.N == experiments.DEFAULT_N)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dachmm",
        description="Distributed arithmetic coding with hidden-Markov correlated side information",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    enc = sp.add_parser("encode", help="compress a binary sequence file")
    enc.add_argument("input")
    enc.add_argument("output")
    enc.add_argument("--p", type=float, default=0.5)
    enc.add_argument("--gamma", type=float, required=True)
    enc.add_argument("--T", type=int, default=15)
    enc.set_defaults(func=_cmd_encode)

    dec = sp.add_parser("decode", help="jointly decode a codeword with side information")
    dec.add_argument("codeword")
    dec.add_argument("side_info")
    dec.add_argument("output")
    _add_model_args(dec)
    dec.add_argument("--p", type=float, default=0.5)
    dec.add_argument("--gamma", type=float, required=True)
    dec.add_argument("--M", type=int, default=2048)
    dec.add_argument("--T", type=int, default=15)
    dec.add_argument("--binary", action="store_true", help="write packed binary output")
    dec.set_defaults(func=_cmd_decode)

    gen = sp.add_parser("gen", help="generate correlated X, Z, Y sequence files")
    gen.add_argument("x")
    gen.add_argument("z")
    gen.add_argument("y")
    _add_model_args(gen)
    gen.add_argument("--n", type=int, default=1024)
    gen.add_argument("--p", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--binary", action="store_true")
    gen.set_defaults(func=_cmd_gen)

    ent = sp.add_parser("entropy", help="Monte-Carlo conditional entropy estimate")
    _add_model_args(ent)
    ent.add_argument("--n", type=int, default=10**6)
    ent.add_argument("--seed", type=int, default=0)
    ent.set_defaults(func=_cmd_entropy)

    exp = sp.add_parser("experiment", help="reproduce the benchmark rate table")
    exp.add_argument("--models", default="1,2,3,4")
    exp.add_argument("--trials", type=int, default=100)
    exp.add_argument("--N", type=int, default=experiments.DEFAULT_N)
    exp.add_argument("--M", type=int, default=2048)
    exp.add_argument("--T", type=int, default=15)
    exp.add_argument("--p", type=float, default=0.5)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--entropy-n", type=int, default=10**6)
    exp.add_argument("--out", help="per-trial CSV path")
    exp.add_argument("--summary-out", help="summary CSV path")
    exp.add_argument("--verbose", action="store_true")
    exp.set_defaults(func=_cmd_experiment)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InvalidParameter, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DachmmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # invariant violation: fail loudly but with a code
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
