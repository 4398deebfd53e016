"""Command-line runner of the *rcutils* experiments.

Every subcommand writes a table (CSV, or JSON with ``--json``) to the file
given with ``--out`` or to the standard output; log records go to the
standard error. Tables start with a ``#`` line echoing the version and every
parameter, seeds included. The exit code is 0 on success, 2 on usage errors
and 1 when an experiment fails.
"""

import sys
import argparse
from contextlib import nullcontext

import numpy as np

from rcutils.complexlib.complex import InvalidComplex
from rcutils.complexlib.homology import DEFAULT_PRIMES, NotPrime
from rcutils.complexlib.sampler import InvalidParameters, SampleParams, sample_complex
from rcutils.complexlib.treeproc import estimate_rho
from rcutils.complexlib.log import (LEVELS, LOGLEVELDEFAULT, setLogLevel, info, output,
                                    error, install_excepthook)
from rcutils.utils.constants import (BracketError, UnsupportedEll, SeriesDivergence,
                                     GF_TRUNCATION, DEFAULT_TOL, threshold_report, tree_gf,
                                     tilde_c1_residual, rho_recursion, rho_profile)
from rcutils.utils.formats import (ComplexFileError, header_line, dumps_complex, read_complex,
                                   write_csv, write_json)
from rcutils.utils.harness import (TRIAL_FIELDS, SUMMARY_FIELDS, HITTING_FIELDS,
                                   DEFAULT_JUMP_THRESHOLD, NoCoreReached, SweepConfig,
                                   analyze_complex, run_sweep, run_hitting,
                                   acyclic_probability_check)
from rcutils.utils.helper import load_conf, merge_dict, parse_list


RUNTIME_ERRORS = (InvalidComplex, InvalidParameters, NotPrime, BracketError, UnsupportedEll,
                  SeriesDivergence, ComplexFileError, NoCoreReached, OSError, ValueError)


def _open_out(path):
    if path is None:
        return nullcontext(sys.stdout)
    return open(path, 'w', newline='')


def _emit(args, command, params, fieldnames, rows, **extra):
    with _open_out(args.out) as f:
        if args.json:
            write_json(f, command, params, rows, **extra)
        else:
            write_csv(f, fieldnames, rows, header_line(command, params))


def cmd_constants(args):
    """Tabulates the threshold constants and checks the tree series."""
    params = {'d': args.d, 'tol': args.tol, 'truncation': args.truncation}
    rows = []
    for d in args.d:
        report = threshold_report(d, args.tol)
        rows.append({'d': d, 'c_d': report.c_d, 'gamma_d': report.gamma_d,
                     'x_star': report.x_star, 'c_d_1': report.c_d_1, 'c_d_2': report.c_d_2})
    R, T, tail = tree_gf(np.exp(-1), args.truncation)
    checks = {'R': R, 'T': T, 'tail_bound': tail,
              'tilde_c1_residual': tilde_c1_residual(1.0, args.truncation)}
    fieldnames = ['d', 'c_d', 'gamma_d', 'x_star', 'c_d_1', 'c_d_2']
    with _open_out(args.out) as f:
        if args.json:
            write_json(f, 'constants', params, rows, tree_series=checks)
        else:
            write_csv(f, fieldnames, rows, header_line('constants', params))
            write_csv(f, list(checks), [checks], '# tree series at z=1/e')


def cmd_sample(args):
    """Samples ``Y_d(n, c/n)`` and writes it as a ComplexFile."""
    params = SampleParams(n=args.n, d=args.d, seed=args.seed, c=args.c, p=args.p)
    Y = sample_complex(params)
    echo = {'n': args.n, 'd': args.d}
    if args.p is None:
        echo['c'] = args.c
    else:
        echo['p'] = args.p
    echo['seed'] = args.seed
    with _open_out(args.out) as f:
        f.write(dumps_complex(Y, header_line('sample', echo)))
    info('sampled f_d={}\n'.format(Y.f_d))


def cmd_analyze(args):
    """Runs the full pipeline on a ComplexFile."""
    Y = read_complex(args.input)
    report = analyze_complex(Y, args.primes)
    row = report.to_dict()
    params = {'in': args.input, 'primes': args.primes}
    if args.json:
        _emit(args, 'analyze', params, None, [row])
        return
    row['boundaries'] = ';'.join(' '.join(str(v) for v in S) for S in report.boundaries)
    _emit(args, 'analyze', params, list(row), [row])
    if report.field_dependent:
        output('h_d depends on the field: {}\n'.format(report.h_d))


def _sweep_config(args):
    conf = {}
    if args.config:
        conf = load_conf(args.config)
    flags = {'d': args.d, 'n_list': args.n, 'c_grid': args.c, 'trials': args.trials,
             'seed': args.seed, 'primes': args.primes, 'jobs': args.jobs}
    merge_dict(conf, {key: value for key, value in flags.items() if value is not None})
    if args.skip_homology:
        conf['skip_homology'] = True
    if args.skip_collapse:
        conf['skip_collapse'] = True
    missing = [key for key in ('d', 'n_list', 'c_grid', 'trials') if key not in conf]
    if missing:
        raise InvalidParameters('sweep needs {} (flags or --config).'.format(', '.join(missing)))
    for key, cast in (('n_list', int), ('c_grid', float), ('primes', int)):
        if key in conf:
            conf[key] = parse_list(conf[key], cast)
    return SweepConfig.from_dict(conf)


def cmd_sweep(args):
    """Runs a threshold sweep and writes the per-trial and summary tables."""
    config = _sweep_config(args)
    params = {'d': config.d, 'n': config.n_list, 'c': config.c_grid, 'trials': config.trials,
              'seed': config.seed, 'primes': config.primes,
              'skip_homology': config.skip_homology, 'skip_collapse': config.skip_collapse}
    records, rows = run_sweep(config)
    if args.json:
        _emit(args, 'sweep', params, None, [r.to_dict() for r in records])
    else:
        _emit(args, 'sweep', params, TRIAL_FIELDS, [r.to_row() for r in records])
    if args.summary:
        with open(args.summary, 'w', newline='') as f:
            if args.json:
                write_json(f, 'sweep-summary', params, [row.to_dict() for row in rows])
            else:
                write_csv(f, SUMMARY_FIELDS, [row.to_row() for row in rows],
                          header_line('sweep-summary', params))
    for row in rows:
        output('n={} c={}: Pr[F]={:.3f} Pr[collapse|F]={}\n'.format(
            row.n, row.c, row.pr_F,
            'n/a' if row.pr_collapse_given_F is None else '{:.3f}'.format(row.pr_collapse_given_F)))


def cmd_tree(args):
    """Compares estimated and analytic tree collapse probabilities."""
    params = {'d': args.d, 'k': args.k, 'gamma': args.gamma, 'trials': args.trials,
              'seed': args.seed}
    if args.profile:
        rows = [{'gamma': gamma, 'rho_k': rho_k, 'rho_limit': rho_limit}
                for gamma, rho_k, rho_limit in rho_profile(args.d, args.gamma, args.k)]
        _emit(args, 'tree-profile', params, ['gamma', 'rho_k', 'rho_limit'], rows)
        return
    rows = []
    for gamma in args.gamma:
        estimate, se = estimate_rho(args.d, args.k, gamma, args.trials, args.seed, args.jobs)
        curve = rho_recursion(args.d, gamma, args.k)
        rows.append({'d': args.d, 'k': args.k, 'gamma': gamma, 'trials': args.trials,
                     'estimate': estimate, 'se': se, 'rho_k': curve.values[-1],
                     'rho_limit': curve.fixed_point})
    _emit(args, 'tree', params, ['d', 'k', 'gamma', 'trials', 'estimate', 'se', 'rho_k',
                                 'rho_limit'], rows)


def cmd_hitting(args):
    """Runs the hitting-time experiment."""
    params = {'n': args.n, 'd': args.d, 'runs': args.runs, 'seed': args.seed,
              'jump_threshold': args.jump_threshold}
    records = run_hitting(args.n, args.d, args.runs, args.seed, args.jump_threshold, args.jobs)
    rows = [record.to_row() for record in records]
    _emit(args, 'hitting', params, HITTING_FIELDS, rows)
    covered = sum(row['core_covered_by_boundaries'] for row in rows)
    output('core covered by boundaries in {}/{} runs\n'.format(covered, len(rows)))


def cmd_acyclic(args):
    """Estimates the probability that ``G(n, c/n)`` is a forest."""
    params = {'n': args.n, 'c': args.c, 'trials': args.trials, 'seed': args.seed}
    estimate, reference = acyclic_probability_check(args.n, args.c, args.trials, args.seed,
                                                    args.jobs)
    _emit(args, 'acyclic', params, ['n', 'c', 'trials', 'estimate', 'reference'],
          [{'n': args.n, 'c': args.c, 'trials': args.trials, 'estimate': estimate,
            'reference': reference}])


def _int_list(value):
    try:
        return parse_list(value, int)
    except ValueError:
        raise argparse.ArgumentTypeError('expected a comma separated list of integers')


def _float_list(value):
    try:
        return parse_list(value, float)
    except ValueError:
        raise argparse.ArgumentTypeError('expected a comma separated list of numbers')


def get_parser():
    """Builds the argument parser.

    Here is the list of subcommands available with ``rcrun``:

    - ``constants`` tabulates ``c_d``, ``gamma_d``, ``x*``, ``c_{d,1}`` and
      ``c_{d,2}`` and checks the tree series at ``1/e``.
    - ``sample`` writes a ComplexFile drawn from ``Y_d(n, c/n)``.
    - ``analyze`` runs peeling, homology and the bounds on a ComplexFile.
    - ``sweep`` runs a threshold sweep (``--config`` reads a JSON object
      with the :py:class:`~rcutils.utils.harness.SweepConfig` fields,
      overridden by explicit flags).
    - ``tree`` compares the estimated tree collapse probability with the
      recursion (``--profile`` tabulates the recursion only).
    - ``hitting`` runs the hitting-time experiment.
    - ``acyclic`` estimates the forest probability of ``G(n, c/n)``.

    ``--verbosity`` selects the log level (default ``output``).
    """
    parser = argparse.ArgumentParser(prog='rcrun')
    parser.add_argument('--verbosity', help='Set messages verbosity.', type=str,
                        choices=list(LEVELS), default=LOGLEVELDEFAULT)
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    def add_output(sub):
        sub.add_argument('--out', help='Output file (default: standard output).', type=str,
                         default=None)
        sub.add_argument('--json', help='Write JSON instead of CSV.', action='store_true')

    def add_jobs(sub):
        sub.add_argument('--jobs', help='Worker processes (default: CPU count).', type=int,
                         default=None)

    sub = subparsers.add_parser('constants', help='Threshold constants.')
    sub.add_argument('--d', help='Dimensions.', type=_int_list, required=True)
    sub.add_argument('--tol', help='Bisection tolerance.', type=float, default=DEFAULT_TOL)
    sub.add_argument('--truncation', help='Terms of the tree series.', type=int,
                     default=GF_TRUNCATION)
    add_output(sub)
    sub.set_defaults(func=cmd_constants)

    sub = subparsers.add_parser('sample', help='Sample a random complex.')
    sub.add_argument('--n', type=int, required=True)
    sub.add_argument('--d', type=int, required=True)
    density = sub.add_mutually_exclusive_group(required=True)
    density.add_argument('--c', type=float, help='Scaled density, p = c/n.')
    density.add_argument('--p', type=float, help='Inclusion probability.')
    sub.add_argument('--seed', type=int, default=0)
    sub.add_argument('--out', help='Output file (default: standard output).', type=str,
                     default=None)
    sub.set_defaults(func=cmd_sample)

    sub = subparsers.add_parser('analyze', help='Analyze a ComplexFile.')
    sub.add_argument('--in', dest='input', help='ComplexFile to read.', type=str, required=True)
    sub.add_argument('--primes', type=_int_list, default=list(DEFAULT_PRIMES))
    add_output(sub)
    sub.set_defaults(func=cmd_analyze)

    sub = subparsers.add_parser('sweep', help='Threshold sweep.')
    sub.add_argument('--config', help='JSON sweep configuration.', type=str, default=None)
    sub.add_argument('--d', type=int, default=None)
    sub.add_argument('--n', type=_int_list, default=None)
    sub.add_argument('--c', type=_float_list, default=None)
    sub.add_argument('--trials', type=int, default=None)
    sub.add_argument('--seed', type=int, default=None)
    sub.add_argument('--primes', type=_int_list, default=None)
    sub.add_argument('--skip-homology', action='store_true')
    sub.add_argument('--skip-collapse', action='store_true')
    sub.add_argument('--summary', help='Summary output file.', type=str, default=None)
    add_jobs(sub)
    add_output(sub)
    sub.set_defaults(func=cmd_sweep)

    sub = subparsers.add_parser('tree', help='Random d-tree collapse probabilities.')
    sub.add_argument('--d', type=int, required=True)
    sub.add_argument('--k', type=int, required=True)
    sub.add_argument('--gamma', type=_float_list, required=True)
    sub.add_argument('--trials', type=int, default=10000)
    sub.add_argument('--seed', type=int, default=0)
    sub.add_argument('--profile', help='Tabulate the recursion only.', action='store_true')
    add_jobs(sub)
    add_output(sub)
    sub.set_defaults(func=cmd_tree)

    sub = subparsers.add_parser('hitting', help='Hitting time of the core.')
    sub.add_argument('--n', type=int, required=True)
    sub.add_argument('--d', type=int, required=True)
    sub.add_argument('--runs', type=int, required=True)
    sub.add_argument('--seed', type=int, default=0)
    sub.add_argument('--jump-threshold', type=float, default=DEFAULT_JUMP_THRESHOLD)
    add_jobs(sub)
    add_output(sub)
    sub.set_defaults(func=cmd_hitting)

    sub = subparsers.add_parser('acyclic', help='Forest probability of G(n, c/n).')
    sub.add_argument('--n', type=int, required=True)
    sub.add_argument('--c', type=float, required=True)
    sub.add_argument('--trials', type=int, required=True)
    sub.add_argument('--seed', type=int, default=0)
    add_jobs(sub)
    add_output(sub)
    sub.set_defaults(func=cmd_acyclic)

    return parser


def get_args(argv=None):
    """Parses command line options.

    Returns:
        argparse.Namespace: namespace containing all the argument parsed.
    """
    return get_parser().parse_args(argv)


def main(argv=None):
    """Parses the arguments and runs the subcommand.

    Returns:
        int: the exit code.
    """
    try:
        args = get_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    install_excepthook()
    setLogLevel(args.verbosity)
    try:
        args.func(args)
    except RUNTIME_ERRORS as e:
        error('{}\n'.format(e))
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
