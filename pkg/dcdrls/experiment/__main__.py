"""Command line entry point::

    python -m dcdrls.experiment run dcdrls/configs/mcc_sparse.ini -j 4
    python -m dcdrls.experiment channels --kind sparse --taps 128 --shift 12
    python -m dcdrls.experiment noise --alpha 1.4 --gamma 0.05 -n 1000

Exit status is 0 on success, 2 for invalid arguments or configuration and 1
for I/O errors.

"""

import sys
import logging
from argparse import ArgumentParser

import numpy as np
from tornado.options import options
from tornado.log import enable_pretty_logging

from ..exc import UsageError
from ..signals import AlphaStable, gen_alpha_stable, gen_channel, save_channel, shift_channel
from .config import load_config
from .outputs import emit_outputs
from .runner import run_experiment

logger = logging.getLogger("dcdrls")


def make_parser():
    parser = ArgumentParser(prog="dcdrls",
                            description="Monte-Carlo experiments with DCD-based robust RLS filters.")
    parser.add_argument("-d", "--debug", action="store_true", default=False,
                        help="Enable debug logging")
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    run = subparsers.add_parser("run", help="Run an experiment configuration")
    run.add_argument("config", type=str, help="Experiment INI file")
    run.add_argument("-o", "--output", type=str, default=None,
                     help="Output directory (overrides [output] directory)")
    run.add_argument("-j", "--jobs", type=int, default=None,
                     help="Worker processes (default: physical cores)")
    run.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    run.add_argument("--log-file", type=str, default=None, help="Also log to this file")

    channels = subparsers.add_parser("channels", help="Export a synthetic echo channel")
    channels.add_argument("--kind", choices=["sparse", "disperse"], default="sparse")
    channels.add_argument("--taps", type=int, default=128, help="Number of taps M")
    channels.add_argument("--seed", type=int, default=0)
    channels.add_argument("--shift", type=int, default=0, help="Delay the response by k taps")
    channels.add_argument("-o", "--output", type=str, default=None,
                          help="Output file (default: stdout)")

    noise = subparsers.add_parser("noise", help="Emit alpha-stable noise samples")
    noise.add_argument("--alpha", type=float, default=1.4)
    noise.add_argument("--gamma", type=float, default=0.05)
    noise.add_argument("-n", "--samples", type=int, default=1000)
    noise.add_argument("--seed", type=int, default=0)
    noise.add_argument("-o", "--output", type=str, default=None,
                       help="Output file (default: stdout)")
    return parser


def _run(args):
    handler = None
    if args.log_file is not None:
        handler = logging.FileHandler(args.log_file)
        logger.addHandler(handler)
    try:
        cfg = load_config(args.config, seed=args.seed)
        traces = run_experiment(cfg, processes=args.jobs)
        for path in emit_outputs(traces, cfg, directory=args.output):
            print(path)
    finally:
        if handler is not None:
            logger.removeHandler(handler)
            handler.close()


def _channels(args):
    channel = gen_channel(args.kind, args.taps, args.seed)
    if args.shift:
        channel = shift_channel(channel, args.shift)
    save_channel(channel, args.output if args.output is not None else sys.stdout)


def _noise(args):
    if args.samples < 1:
        raise UsageError("number of samples must be >= 1")
    samples = gen_alpha_stable(AlphaStable(args.alpha, args.gamma), args.samples, args.seed)
    np.savetxt(args.output if args.output is not None else sys.stdout, samples, fmt="%.17g")


commands = {
    "run": _run,
    "channels": _channels,
    "noise": _noise,
}


def main(argv=None):
    """Parse ``argv`` and dispatch the subcommand.

    :returns: process exit status

    """
    args = make_parser().parse_args(argv)

    options.logging = "debug" if args.debug else "info"
    enable_pretty_logging()

    try:
        commands[args.command](args)
    except UsageError as e:
        print("error: {}".format(e), file=sys.stderr)
        return 2
    except OSError as e:
        print("error: {}".format(e), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
