# -*- coding: utf-8 *-*
"""Command line front end

Subcommands:

    certify-convex --file region.json
    diagnose --scene prato --h 1/64 --samples 200000 --seed 1
    lgp --scene circle_height_space
    experiment schur-horn --lambda 2,1,0 --trials 10000 --seed 1

Exit codes: 0 affirmative, 1 negative verdict, 2 input error, 3 hypothesis
unavailable, 4 local to global alarm. Any other failure exits with 2. The
report goes to stdout.

"""
import argparse
import logging
import sys
from fractions import Fraction

from MomentumCheck.errors import (DisconnectedSampleGraphError,
                                  HypothesisUnavailableError, InputError,
                                  MomentumCheckError, SamplerMismatchError,
                                  UndecidableError)
from MomentumCheck.sessions import (ConvexitySession, DiagnoseSession,
                                    ExperimentSession, LgpSession)
from MomentumCheck.sessions.experiment_session import EXPERIMENTS

log = logging.getLogger(__name__)

COMMANDS = ['certify-convex', 'diagnose', 'lgp', 'experiment']
SAMPLING_COMMANDS = ['diagnose', 'experiment']
FORMATS = ['json', 'tsv']
DEFAULT_TOL = 1e-9

EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3


def parse_number(text):
    """A float from decimal or fraction text such as 1/64"""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise InputError("not a number: '{0}'".format(text))


def parse_vector(text):
    """Comma separated numbers"""
    if text is None:
        return None
    return [parse_number(t) for t in text.split(',') if t.strip()]


class RunConfig(object):
    def __init__(self, command, scene=None, file=None, h=None, samples=None, trials=None,
                 seed=None, tol=DEFAULT_TOL, radius=None, out=None, format='json',
                 verbose=False, experiment=None, lam=None, a=None, b=None):
        """RunConfig class initializer

        Raises:
            InputError: Unknown command or format, a sampling command
                without a seed, tol <= 0 or nonpositive counts

        """
        if command not in COMMANDS:
            raise InputError("unknown command '{0}'".format(command))
        if format not in FORMATS:
            raise InputError("unknown format '{0}'".format(format))
        if command in SAMPLING_COMMANDS and seed is None:
            raise InputError("--seed is required for {0}".format(command))
        if tol is None or tol <= 0:
            raise InputError("--tol must be positive")
        if h is not None and h <= 0:
            raise InputError("--h must be positive")
        for flag, value in (('samples', samples), ('trials', trials)):
            if value is not None and value < 1:
                raise InputError("--{0} must be positive".format(flag))
        if command == 'certify-convex' and not file:
            raise InputError("certify-convex needs --file")
        if command in ('diagnose', 'lgp') and not (file or scene):
            raise InputError("{0} needs --scene or --file".format(command))
        if command == 'experiment' and experiment not in EXPERIMENTS:
            raise InputError("experiment must be one of {0}".format(', '.join(EXPERIMENTS)))
        self.command = command
        self.scene = scene
        self.file = file
        self.h = h
        self.samples = samples
        self.trials = trials
        self.seed = seed
        self.tol = tol
        self.radius = radius
        self.out = out
        self.format = format
        self.verbose = verbose
        self.experiment = experiment
        self.lam = lam
        self.a = a
        self.b = b

    def h_or(self, default):
        return default if self.h is None else self.h

    @classmethod
    def from_args(cls, args):
        return cls(args.command, scene=args.scene, file=args.file,
                   h=None if args.h is None else parse_number(args.h),
                   samples=args.samples, trials=args.trials, seed=args.seed,
                   tol=parse_number(args.tol) if args.tol is not None else DEFAULT_TOL,
                   radius=None if args.radius is None else parse_number(args.radius),
                   out=args.out, format=args.format, verbose=args.verbose,
                   experiment=getattr(args, 'experiment', None),
                   lam=parse_vector(getattr(args, 'lam', None)),
                   a=parse_vector(getattr(args, 'a', None)),
                   b=parse_vector(getattr(args, 'b', None)))


def _add_common(parser):
    parser.add_argument("--scene", help="Built-in scene or space name")
    parser.add_argument("--file", help="JSON input file")
    parser.add_argument("--h", help="Raster cell size, e.g. 1/64")
    parser.add_argument("--samples", type=int, help="Number of domain samples")
    parser.add_argument("--trials", type=int, help="Number of trials")
    parser.add_argument("--seed", type=int, help="Run seed, required for sampling commands")
    parser.add_argument("--tol", help="Tolerance, > 0")
    parser.add_argument("--radius", help="Local convexity radius")
    parser.add_argument("--out", help="Output directory for reports and TSV dumps")
    parser.add_argument("--format", default='json', choices=FORMATS, help="Report format")
    parser.add_argument("--verbose", action='store_true', help="Verbosity")


def build_parser():
    parser = argparse.ArgumentParser(prog='mck',
                                     description="Checks for momentum map convexity theorems.")
    commands = parser.add_subparsers(dest='command')
    for name in ('certify-convex', 'diagnose', 'lgp'):
        _add_common(commands.add_parser(name))
    experiment = commands.add_parser('experiment')
    experiment.add_argument('experiment', choices=EXPERIMENTS)
    experiment.add_argument('--lambda', dest='lam', help="Spectrum, e.g. 2,1,0")
    experiment.add_argument('--a', help="Decreasing 2-vector")
    experiment.add_argument('--b', help="Decreasing 2-vector")
    _add_common(experiment)
    return parser


def cmd_certify_convex(config, stream=None):
    return ConvexitySession(config, config.verbose).run(stream)[0]


def cmd_diagnose(config, stream=None):
    return DiagnoseSession(config, config.verbose).run(stream)[0]


def cmd_lgp(config, stream=None):
    return LgpSession(config, config.verbose).run(stream)[0]


def cmd_experiment(config, stream=None):
    return ExperimentSession(config, config.verbose).run(stream)[0]


DISPATCH = {
    'certify-convex': cmd_certify_convex,
    'diagnose': cmd_diagnose,
    'lgp': cmd_lgp,
    'experiment': cmd_experiment,
}


def main(argv=None, stream=None):
    """Run one command and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else EXIT_INPUT
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        config = RunConfig.from_args(args)
        return DISPATCH[config.command](config, stream)
    except (InputError, SamplerMismatchError, DisconnectedSampleGraphError) as e:
        sys.stderr.write("error: {0}\n".format(e))
        return EXIT_INPUT
    except (HypothesisUnavailableError, UndecidableError) as e:
        sys.stderr.write("error: {0}\n".format(e))
        return EXIT_HYPOTHESIS
    except MomentumCheckError as e:
        sys.stderr.write("error: {0}\n".format(e))
        return EXIT_INPUT
    except Exception as e:
        log.debug("unexpected failure", exc_info=True)
        sys.stderr.write("error: unexpected {0}: {1}\n".format(type(e).__name__, e))
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
