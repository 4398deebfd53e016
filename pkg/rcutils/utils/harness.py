"""Monte Carlo experiments on random ``d``-complexes.

A trial samples ``Y_d(n, c/n)`` and runs the full pipeline on it: boundary
detection, peeling, top homology over every requested prime and the
degree-based cocycle bounds. Trials are grouped into sweep points ``(n, c)``
and aggregated into conditional probability estimates. The module also
drives the hitting-time experiment on the random process ``Y_d(n, M)`` and
the graph acyclicity check at ``d = 1``.
"""

import math
from math import comb
from dataclasses import dataclass, field, fields, asdict

from rcutils.complexlib.collapse import core, find_boundaries
from rcutils.complexlib.homology import DEFAULT_PRIMES, FieldPrime, betti, cocycle_counts
from rcutils.complexlib.sampler import (InvalidParameters, SampleParams, derive_trial_seed,
                                        sample_complex, sample_stream)
from rcutils.complexlib.log import debug, info
from rcutils.utils.task_pool import TaskPool


TRIAL_FIELDS = ['trial', 'seed', 'n', 'd', 'c', 'f_d', 'in_F', 'collapsible', 'rounds',
                'core_size', 'num_boundaries', 'h_d_p2', 'h_d_p3', 'h_d_p5', 'h_dm1_p2',
                'u', 'v']

SUMMARY_FIELDS = ['n', 'c', 'trials', 'pr_F', 'se_F', 'pr_F_limit', 'pr_collapse_given_F',
                  'se_cgF', 'pr_hd_nonzero_p2', 'se_hd', 'mean_v']

HITTING_FIELDS = ['run', 'n', 'd', 'seed', 'M_first_core', 'core_size_at_first',
                  'core_covered_by_boundaries', 'M_jump', 'core_size_at_jump']

DEFAULT_JUMP_THRESHOLD = 0.01


class NoCoreReached(Exception):
    """Exception raised when the whole simplex stream collapses."""

    def __init__(self, n, d, seed):
        self.message = 'the stream of n={}, d={}, seed={} never produces a core.'.format(n, d, seed)
        super().__init__('NoCoreReached: {}'.format(self.message))

    def __str__(self):
        return self.message


@dataclass
class SweepConfig:
    """Configuration of a threshold sweep.

    Attributes:
        d (:py:class:`int`)              : dimension
        n_list (:py:class:`list`)        : vertex counts
        c_grid (:py:class:`list`)        : scaled densities
        trials (:py:class:`int`)         : trials per point
        seed (:py:class:`int`)           : master seed
        primes (:py:class:`list`)        : field characteristics for homology
        skip_homology (:py:class:`bool`) : do not compute ``h_d``
        skip_collapse (:py:class:`bool`) : do not peel
        jobs (:py:class:`int`)           : worker processes (**None** for
                                           the CPU count)
    """
    d: int
    n_list: list
    c_grid: list
    trials: int
    seed: int = 0
    primes: list = field(default_factory=lambda: list(DEFAULT_PRIMES))
    skip_homology: bool = False
    skip_collapse: bool = False
    jobs: int = None

    def __post_init__(self):
        self.n_list = [int(n) for n in self.n_list]
        self.c_grid = [float(c) for c in self.c_grid]
        self.primes = [int(FieldPrime(p)) for p in self.primes]
        if self.d < 1:
            raise InvalidParameters('d must be at least 1, got {}.'.format(self.d))
        if self.trials < 1:
            raise InvalidParameters('trials must be at least 1, got {}.'.format(self.trials))
        if not self.n_list or not self.c_grid:
            raise InvalidParameters('n_list and c_grid must not be empty.')
        for n in self.n_list:
            if n < self.d + 1:
                raise InvalidParameters('n must be at least d+1={}, got {}.'.format(self.d + 1, n))
        for c in self.c_grid:
            if c < 0:
                raise InvalidParameters('c values must be nonnegative, got {}.'.format(c))

    @classmethod
    def from_dict(cls, conf):
        """Builds a configuration from a dictionary, ignoring unknown keys."""
        names = {f.name for f in fields(cls)}
        unknown = set(conf) - names
        if unknown:
            debug('ignoring unknown sweep keys: {}\n'.format(', '.join(sorted(unknown))))
        return cls(**{key: value for key, value in conf.items() if key in names})

    def points(self):
        """Returns the ``(n, c)`` points in sweep order."""
        return [(n, c) for n in self.n_list for c in self.c_grid]


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial.

    ``collapsible``, ``rounds`` and ``core_size`` are **None** when peeling
    is skipped; ``h_d`` is empty when homology is skipped.

    Attributes:
        trial (:py:class:`int`)        : trial index within its point
        seed (:py:class:`int`)         : trial seed
        n (:py:class:`int`)            : number of vertices
        d (:py:class:`int`)            : dimension
        c (:py:class:`float`)          : scaled density
        f_d (:py:class:`int`)          : number of simplices
        in_F (:py:class:`bool`)        : no boundary of a ``(d+1)``-simplex
        collapsible (:py:class:`bool`) : empty core
        rounds (:py:class:`int`)       : collapse rounds
        core_size (:py:class:`int`)    : simplices of the core
        num_boundaries (:py:class:`int`): copies of the boundary of a
                                          ``(d+1)``-simplex
        h_d (:py:class:`dict`)         : top Betti number per prime
        h_dm1_p2 (:py:class:`int`)     : reduced ``h_{d-1}`` over ``F_2``
        u (:py:class:`int`)            : cocycle lower bound
        v (:py:class:`int`)            : lower bound on ``h_d``
    """
    trial: int
    seed: int
    n: int
    d: int
    c: float
    f_d: int
    in_F: bool
    collapsible: bool
    rounds: int
    core_size: int
    num_boundaries: int
    h_d: dict
    h_dm1_p2: int
    u: int
    v: int

    def to_row(self):
        """Returns the record keyed by :py:data:`TRIAL_FIELDS`.

        Uncomputed values are **None**; primes outside ``2, 3, 5`` are left
        out (see :py:meth:`to_dict`).
        """
        row = asdict(self)
        h_d = row.pop('h_d')
        for p in (2, 3, 5):
            row['h_d_p{}'.format(p)] = h_d.get(p)
        return {key: row[key] for key in TRIAL_FIELDS}

    def to_dict(self):
        """Same as :py:meth:`to_row` plus ``h_d_p<p>`` for every computed prime."""
        row = self.to_row()
        for p, h in sorted(self.h_d.items()):
            row['h_d_p{}'.format(p)] = h
        return row


@dataclass(frozen=True)
class SweepRow:
    """Estimates of one sweep point.

    Conditional estimates are **None** when no trial lies in ``F``, and the
    homology estimates are **None** when ``F_2`` homology was not computed.

    Attributes:
        n (:py:class:`int`)                 : number of vertices
        c (:py:class:`float`)               : scaled density
        trials (:py:class:`int`)            : number of trials
        pr_F (:py:class:`float`)            : fraction of trials in ``F``
        se_F (:py:class:`float`)            : its standard error
        pr_F_limit (:py:class:`float`)      : ``exp(-c^{d+2}/(d+2)!)``
        pr_collapse_given_F (:py:class:`float`): collapsible fraction among
                                              the trials in ``F``
        se_cgF (:py:class:`float`)          : its standard error
        pr_hd_nonzero_p2 (:py:class:`float`): fraction with ``h_d > 0`` over ``F_2``
        se_hd (:py:class:`float`)           : its standard error
        mean_v (:py:class:`float`)          : average of ``v``
        in_F_count (:py:class:`int`)        : trials in ``F``
        pr_hd_zero_not_collapsible (:py:class:`float`): fraction with
                                              ``h_d = 0`` over ``F_2`` and
                                              a nonempty core
    """
    n: int
    c: float
    trials: int
    pr_F: float
    se_F: float
    pr_F_limit: float
    pr_collapse_given_F: float
    se_cgF: float
    pr_hd_nonzero_p2: float
    se_hd: float
    mean_v: float
    in_F_count: int
    pr_hd_zero_not_collapsible: float

    def to_row(self):
        """Returns the row keyed by :py:data:`SUMMARY_FIELDS`."""
        row = asdict(self)
        return {key: row[key] for key in SUMMARY_FIELDS}

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class HittingTimeRecord:
    """Outcome of one hitting-time run.

    Attributes:
        run (:py:class:`int`)                 : run index
        n (:py:class:`int`)                   : number of vertices
        d (:py:class:`int`)                   : dimension
        seed (:py:class:`int`)                : stream seed
        M_first_core (:py:class:`int`)        : least ``M`` whose prefix has a
                                                nonempty core
        core_size_at_first (:py:class:`int`)  : core size at ``M_first_core``
        core_covered_by_boundaries (:py:class:`bool`): every core simplex lies
                                                in a boundary copy of the prefix
        M_jump (:py:class:`int`)              : least ``M`` whose core reaches
                                                the jump size
        core_size_at_jump (:py:class:`int`)   : core size at ``M_jump``
    """
    run: int
    n: int
    d: int
    seed: int
    M_first_core: int
    core_size_at_first: int
    core_covered_by_boundaries: bool
    M_jump: int
    core_size_at_jump: int

    def to_row(self):
        return asdict(self)


@dataclass(frozen=True)
class ExpectedCounts:
    """Expected values of ``f_d``, ``a`` and ``alpha_0..alpha_d``.

    ``u`` and ``v`` are linear in the counts, so their expectations follow;
    ``faces`` is the number of ``(d-1)``-faces entering ``v``.
    """
    n: int
    d: int
    f_d: float
    a: float
    alpha: tuple
    faces: float

    @property
    def u(self):
        return self.a + sum(count * (self.d - j) for j, count in enumerate(self.alpha))

    @property
    def v(self):
        return self.f_d + self.u - self.faces


@dataclass(frozen=True)
class AnalysisReport:
    """Pipeline outcome on a single complex.

    Peeling fields are **None** when peeling is skipped; ``h_d`` is empty
    when homology is skipped.

    Attributes:
        n (:py:class:`int`)              : number of vertices
        d (:py:class:`int`)              : dimension
        f_d (:py:class:`int`)            : number of simplices
        boundaries (:py:class:`list`)    : vertex sets of the boundary copies
        collapsible (:py:class:`bool`)   : empty core
        rounds (:py:class:`int`)         : collapse rounds
        core_size (:py:class:`int`)      : simplices of the core
        h_d (:py:class:`dict`)           : top Betti number per prime
        h_dm1 (:py:class:`dict`)         : reduced ``h_{d-1}`` per prime
        u (:py:class:`int`)              : cocycle lower bound
        v (:py:class:`int`)              : lower bound on ``h_d``
    """
    n: int
    d: int
    f_d: int
    boundaries: list
    collapsible: bool
    rounds: int
    core_size: int
    h_d: dict
    h_dm1: dict
    u: int
    v: int

    @property
    def in_F(self):
        return not self.boundaries

    @property
    def field_dependent(self):
        """bool: whether the primes disagree on ``h_d``."""
        return len(set(self.h_d.values())) > 1

    def to_dict(self):
        row = {'n': self.n, 'd': self.d, 'f_d': self.f_d, 'in_F': self.in_F,
               'collapsible': self.collapsible, 'rounds': self.rounds,
               'core_size': self.core_size, 'num_boundaries': len(self.boundaries)}
        for p, h in sorted(self.h_d.items()):
            row['h_d_p{}'.format(p)] = h
        for p, h in sorted(self.h_dm1.items()):
            row['h_dm1_p{}'.format(p)] = h
        row.update({'u': self.u, 'v': self.v, 'field_dependent': self.field_dependent,
                    'boundaries': [list(S) for S in self.boundaries]})
        return row


def analyze_complex(Y, primes=DEFAULT_PRIMES, skip_homology=False, skip_collapse=False):
    """Runs boundary detection, peeling, homology and the cocycle bounds on ``Y``.

    Args:
        Y (Complex)         : the complex
        primes (list)       : field characteristics
        skip_homology (bool): do not compute Betti numbers
        skip_collapse (bool): do not peel

    Returns:
        AnalysisReport: the outcome.
    """
    collapsible = rounds = core_size = None
    if not skip_collapse:
        result = core(Y)
        collapsible, rounds, core_size = result.collapsible, result.rounds, result.r
    h_d, h_dm1 = {}, {}
    if not skip_homology:
        for p in primes:
            summary = betti(Y, p)
            h_d[int(p)] = summary.h_d
            h_dm1[int(p)] = summary.h_d_minus_1
    counts = cocycle_counts(Y)
    return AnalysisReport(n=Y.n, d=Y.d, f_d=Y.f_d, boundaries=find_boundaries(Y),
                          collapsible=collapsible, rounds=rounds, core_size=core_size,
                          h_d=h_d, h_dm1=h_dm1, u=counts.u, v=counts.v)


def run_trial(task):
    """Runs the pipeline on one sampled complex.

    Args:
        task (tuple): ``(n, d, c, trial, seed, primes, skip_homology,
                      skip_collapse)``

    Returns:
        TrialRecord: the outcome.
    """
    n, d, c, trial, seed, primes, skip_homology, skip_collapse = task
    Y = sample_complex(SampleParams(n=n, d=d, seed=seed, c=c))
    report = analyze_complex(Y, primes, skip_homology, skip_collapse)
    return TrialRecord(trial=trial, seed=seed, n=n, d=d, c=c, f_d=report.f_d,
                       in_F=report.in_F, collapsible=report.collapsible, rounds=report.rounds,
                       core_size=report.core_size, num_boundaries=len(report.boundaries),
                       h_d=report.h_d, h_dm1_p2=report.h_dm1.get(2), u=report.u, v=report.v)


def run_trials(config):
    """Runs every trial of a sweep.

    Trial ``t`` of every point uses ``derive_trial_seed(config.seed, t)``.
    Points follow :py:meth:`SweepConfig.points` and trials their index
    order, whatever the number of workers.

    Args:
        config (SweepConfig): the sweep

    Yields:
        TrialRecord: the outcomes, in order.
    """
    seeds = [derive_trial_seed(config.seed, t) for t in range(config.trials)]
    tasks = [(n, config.d, c, t, seeds[t], tuple(config.primes), config.skip_homology,
              config.skip_collapse)
             for n, c in config.points() for t in range(config.trials)]
    info('running {} trials over {} points\n'.format(len(tasks), len(config.points())))
    yield from TaskPool(config.jobs).imap(run_trial, tasks, chunksize=8)


def run_sweep(config):
    """Runs a sweep and aggregates every point.

    Returns:
        tuple: the list of :py:class:`TrialRecord` and the list of
        :py:class:`SweepRow`, one per point.
    """
    records = list(run_trials(config))
    groups = {point: [] for point in config.points()}
    for record in records:
        groups[(record.n, record.c)].append(record)
    rows = [aggregate(group, config.d, c) for (_, c), group in groups.items()]
    return records, rows


def expected_counts(n, d, p):
    """Exact expectations of ``f_d``, ``a`` and ``alpha_j`` under ``Y_d(n, p)``.

    - ``E[f_d] = C(n, d+1) p``,
    - ``E[a] = C(n, d) (1-p)^{n-d}``,
    - ``E[alpha_j] = C(n, d+1) C(d+1, j) p (1-p)^{(n-d-1)(d+1-j)}
      (1-(1-p)^{n-d-1})^j``.

    Args:
        n (int)  : number of vertices
        d (int)  : dimension
        p (float): inclusion probability

    Returns:
        ExpectedCounts: the expectations.
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidParameters('p={} is outside [0, 1].'.format(p))
    q = 1.0 - p
    m = comb(n, d + 1)
    alone = q ** (n - d - 1)
    alpha = tuple(m * comb(d + 1, j) * p * alone ** (d + 1 - j) * (1 - alone) ** j
                  for j in range(d + 1))
    return ExpectedCounts(n=n, d=d, f_d=m * p, a=comb(n, d) * q ** (n - d), alpha=alpha,
                          faces=comb(n, d))


def expected_counts_limit(n, d, c):
    """Leading-order expectations at ``p = c/n``.

    ``E[v]`` is ``n^d/(d+1)! (g_d(c) - d - 1)`` to leading order, positive
    exactly when ``c`` exceeds ``c_d``.

    Returns:
        ExpectedCounts: the approximations, whose ``v`` is the leading-order
        ``E[v]``.
    """
    scale = n ** d / math.factorial(d + 1)
    e = math.exp(-c)
    alpha = tuple(scale * c * comb(d + 1, j) * e ** (d + 1 - j) * (1 - e) ** j
                  for j in range(d + 1))
    faces = n ** d / math.factorial(d)
    return ExpectedCounts(n=n, d=d, f_d=scale * c, a=e * faces, alpha=alpha, faces=faces)


def pr_F_limit(d, c):
    """Limit of ``Pr[Y in F]``, ``exp(-c^{d+2}/(d+2)!)``."""
    return math.exp(-c ** (d + 2) / math.factorial(d + 2))


def _proportion(hits, count):
    if count == 0:
        return None, None
    estimate = hits / count
    return estimate, math.sqrt(estimate * (1 - estimate) / count)


def aggregate(records, d, c):
    """Aggregates the trials of one sweep point.

    Args:
        records (list): :py:class:`TrialRecord` objects sharing ``n``, ``d`` and ``c``
        d (int)       : dimension
        c (float)     : scaled density

    Returns:
        SweepRow: the estimates.
    """
    records = list(records)
    if not records:
        raise InvalidParameters('cannot aggregate an empty set of trials.')
    n = records[0].n
    if any(r.n != n or r.d != d or r.c != c for r in records):
        raise InvalidParameters('records do not share (n, d, c) = ({}, {}, {}).'.format(n, d, c))
    trials = len(records)
    pr_F, se_F = _proportion(sum(r.in_F for r in records), trials)
    peeled = [r for r in records if r.in_F and r.collapsible is not None]
    pr_cgF, se_cgF = _proportion(sum(r.collapsible for r in peeled), len(peeled))
    over_f2 = [r for r in records if 2 in r.h_d]
    pr_hd, se_hd = _proportion(sum(r.h_d[2] > 0 for r in over_f2), len(over_f2))
    gap = [r for r in over_f2 if r.collapsible is not None]
    pr_gap, _ = _proportion(sum(r.h_d[2] == 0 and not r.collapsible for r in gap), len(gap))
    return SweepRow(n=n, c=c, trials=trials, pr_F=pr_F, se_F=se_F, pr_F_limit=pr_F_limit(d, c),
                    pr_collapse_given_F=pr_cgF, se_cgF=se_cgF, pr_hd_nonzero_p2=pr_hd, se_hd=se_hd,
                    mean_v=sum(r.v for r in records) / trials,
                    in_F_count=sum(r.in_F for r in records),
                    pr_hd_zero_not_collapsible=pr_gap)


def hitting_time(n, d, seed, jump_threshold=DEFAULT_JUMP_THRESHOLD, run=0):
    """Locates the first nonempty core and the core jump of ``Y_d(n, M)``.

    Core sizes are nondecreasing in ``M``, so ``M_first_core`` is found by
    bisection over prefixes and ``M_jump``, the least ``M`` whose core has
    at least ``ceil(jump_threshold * C(n, d+1))`` simplices, by galloping
    from ``M_first_core`` and bisecting the last step. Every lookup
    recomputes the core of the prefix from scratch.

    Args:
        n (int)               : number of vertices, at least ``d+2``
        d (int)               : dimension
        seed (int)            : stream seed
        jump_threshold (float): jump size as a fraction of ``C(n, d+1)``
        run (int)             : run index echoed in the record

    Returns:
        HittingTimeRecord: the run outcome.

    Raises:
        NoCoreReached: if the full stream collapses.
    """
    if d < 1 or n < d + 2:
        raise InvalidParameters('need d >= 1 and n >= d+2, got n={}, d={}.'.format(n, d))
    if not 0 < jump_threshold <= 1:
        raise InvalidParameters('jump_threshold must lie in (0, 1], got {}.'.format(jump_threshold))
    stream = sample_stream(n, d, seed)
    total = len(stream)
    sizes = {}

    def core_size(M):
        if M not in sizes:
            sizes[M] = core(stream.prefix(M)).r
        return sizes[M]

    def first_reaching(target, lo, hi):
        # least M in (lo, hi] with core_size(M) >= target, given that lo misses it
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if core_size(mid) >= target:
                hi = mid
            else:
                lo = mid
        return hi

    if core_size(total) == 0:
        raise NoCoreReached(n, d, seed)
    first = first_reaching(1, 0, total)
    first_core = core(stream.prefix(first)).core
    boundaries = [set(S) for S in find_boundaries(stream.prefix(first))]
    covered = all(any(set(sigma) <= S for S in boundaries) for sigma in first_core)

    jump_size = max(1, math.ceil(jump_threshold * total))
    if core_size(first) >= jump_size:
        jump = first
    else:
        lo, step = first, 1
        hi = min(first + step, total)
        while core_size(hi) < jump_size and hi < total:
            lo, step = hi, step * 2
            hi = min(first + step, total)
        jump = first_reaching(jump_size, lo, hi) if core_size(hi) >= jump_size else total
    debug('hitting time n={} d={}: first core at {}, jump at {} ({} prefixes evaluated)\n'.format(
        n, d, first, jump, len(sizes)))
    return HittingTimeRecord(run=run, n=n, d=d, seed=seed, M_first_core=first,
                             core_size_at_first=core_size(first),
                             core_covered_by_boundaries=covered, M_jump=jump,
                             core_size_at_jump=core_size(jump))


def _hitting_run(task):
    n, d, seed, jump_threshold, run = task
    return hitting_time(n, d, seed, jump_threshold, run)


def run_hitting(n, d, runs, seed, jump_threshold=DEFAULT_JUMP_THRESHOLD, jobs=None):
    """Runs ``runs`` hitting-time experiments; run ``r`` uses
    ``derive_trial_seed(seed, r)``.

    Yields:
        HittingTimeRecord: the outcomes, in run order.
    """
    if runs < 1:
        raise InvalidParameters('runs must be at least 1, got {}.'.format(runs))
    tasks = [(n, d, derive_trial_seed(seed, r), jump_threshold, r) for r in range(runs)]
    yield from TaskPool(jobs).imap(_hitting_run, tasks, chunksize=1)


def acyclic_reference(c):
    """Limit probability that ``G(n, c/n)`` is a forest, ``sqrt(1-c) exp(c/2 + c^2/4)``."""
    return math.sqrt(1 - c) * math.exp(c / 2 + c * c / 4)


def _acyclic_trial(task):
    n, c, seed = task
    return int(core(sample_complex(SampleParams(n=n, d=1, seed=seed, c=c))).collapsible)


def acyclic_probability_check(n, c, trials, seed, jobs=1):
    """Estimates the probability that ``G(n, c/n)`` is acyclic.

    A graph is a forest exactly when it is 1-collapsible, so every trial
    samples ``Y_1(n, c/n)`` and peels it.

    Args:
        n (int)     : number of vertices
        c (float)   : scaled density in ``[0, 1)``
        trials (int): number of graphs
        seed (int)  : master seed
        jobs (int)  : worker processes

    Returns:
        tuple: ``(estimate, reference)``.
    """
    if not 0 <= c < 1:
        raise InvalidParameters('c must lie in [0, 1), got {}.'.format(c))
    if trials < 1:
        raise InvalidParameters('trials must be at least 1, got {}.'.format(trials))
    tasks = [(n, c, derive_trial_seed(seed, t)) for t in range(trials)]
    hits = sum(TaskPool(jobs).imap(_acyclic_trial, tasks, chunksize=16))
    return hits / trials, acyclic_reference(c)
