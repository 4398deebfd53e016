"""Threshold constants of random ``d``-complexes.

Closed forms and the numerical procedures that solve them:

- ``g_d(x) = (d+1)(x+1)e^{-x} + x(1-e^{-x})^{d+1}`` and ``c_d``, its positive
  root of ``g_d(x) = d+1`` (above ``c_d`` the top homology survives);
- ``u_d(gamma, x) = exp(-gamma(1-x)^d) - x`` and ``gamma_d``, the smallest
  rate for which ``u_d`` has a root below 1 (the collapsibility threshold);
- the tree recursion ``rho_d(k, gamma)`` and its limit ``rho_d(gamma)``;
- ``theta_{d,l}`` and ``c_{d,l}`` for ``l = 1, 2`` (and every ``l`` when
  ``d = 1``, through the tree series);
- the tree generating functions ``R(z) = z exp(R(z))`` and
  ``T(z) = R(z) - R(z)^2/2``.

Every root is found by bisection (:py:func:`scipy.optimize.bisect`) inside a
bracket established by a documented sign scan.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect
from scipy.special import gammaln

from rcutils.complexlib.log import debug


DEFAULT_TOL = 1e-10

# Left end of the scans for c_d and c_{d,l}: g_d(x) - (d+1) ~ -(d+1)x^2/2 there.
SCAN_START = 1e-3
SCAN_LIMIT = 1e6

# The trivial root x = 1 of the gamma_d equation is excluded.
X_CAP = 1 - 1e-6

RHO_TOL = 1e-12
RHO_MAX_ITER = 10**6

GF_TRUNCATION = 10**6
GF_CHUNK = 10**6


class BracketError(Exception):
    """Exception raised when a sign change cannot be bracketed."""

    def __init__(self, name, detail=''):
        self.message = 'could not bracket the root of {}{}.'.format(
            name, ' ({})'.format(detail) if detail else '')
        super().__init__('BracketError: {}'.format(self.message))

    def __str__(self):
        return self.message


class UnsupportedEll(Exception):
    """Exception raised for a support size without a closed form."""

    def __init__(self, d, ell):
        self.message = 'theta_{{d,l}} is available for l in (1, 2), or any l when d = 1; got d={}, l={}.'.format(d, ell)
        super().__init__('UnsupportedEll: {}'.format(self.message))

    def __str__(self):
        return self.message


class SeriesDivergence(Exception):
    """Exception raised when the tree series is evaluated beyond ``1/e``."""

    def __init__(self, z):
        self.message = 'z={} exceeds 1/e, where the tree series diverges.'.format(z)
        super().__init__('SeriesDivergence: {}'.format(self.message))

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class ThresholdReport:
    """Thresholds of one dimension.

    Attributes:
        d (:py:class:`int`)        : dimension
        c_d (:py:class:`float`)    : homology threshold constant
        gamma_d (:py:class:`float`): collapsibility threshold constant
        x_star (:py:class:`float`) : root of ``exp(-(1-x)/(dx)) = x``
        c_d_1 (:py:class:`float`)  : root of ``x + (d+1)theta_{d,1}(x) = d+1``
        c_d_2 (:py:class:`float`)  : root of ``x + (d+1)theta_{d,2}(x) = d+1``
        tolerance (:py:class:`float`): bisection tolerance used
    """
    d: int
    c_d: float
    gamma_d: float
    x_star: float
    c_d_1: float
    c_d_2: float
    tolerance: float


@dataclass(frozen=True)
class RhoCurve:
    """Iterates of the tree recursion at a fixed rate.

    Attributes:
        d (:py:class:`int`)          : dimension
        gamma (:py:class:`float`)    : Poisson rate
        values (:py:class:`tuple`)   : ``rho_d(0..k, gamma)``
        fixed_point (:py:class:`float`): limit ``rho_d(gamma)``
        iterations (:py:class:`int`) : iterations spent on the limit
        converged (:py:class:`bool`) : whether the limit met the tolerance
                                       before the iteration cap
    """
    d: int
    gamma: float
    values: tuple
    fixed_point: float
    iterations: int
    converged: bool


def g_d_eval(d, x):
    """Evaluates ``g_d(x) = (d+1)(x+1)e^{-x} + x(1-e^{-x})^{d+1}``."""
    e = math.exp(-x)
    return (d + 1) * (x + 1) * e + x * (-math.expm1(-x)) ** (d + 1)


def u_d_eval(gamma, x, d):
    """Evaluates ``u_d(gamma, x) = exp(-gamma(1-x)^d) - x``."""
    return math.exp(-gamma * (1 - x) ** d) - x


def _solve_increasing(f, name, tol, start=SCAN_START):
    """Bisects the first crossing of ``f`` from negative to positive.

    The scan starts at ``start``, where ``f`` must be negative, and doubles
    the abscissa until ``f`` turns positive; the last negative point and the
    first positive one bracket the root.
    """
    lo = start
    if not f(lo) < 0:
        raise BracketError(name, 'f({}) = {} is not negative'.format(lo, f(lo)))
    hi = lo
    while f(hi) <= 0:
        lo = hi
        hi *= 2
        if hi > SCAN_LIMIT:
            raise BracketError(name, 'no sign change below {}'.format(SCAN_LIMIT))
    debug('{}: bracket [{}, {}]\n'.format(name, lo, hi))
    return bisect(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=1000)


def solve_c_d(d, tol=DEFAULT_TOL):
    """Solves ``g_d(x) = d+1`` for its positive root ``c_d``.

    Args:
        d (int)    : dimension, at least 1
        tol (float): bisection tolerance

    Returns:
        float: ``c_d``.
    """
    return _solve_increasing(lambda x: g_d_eval(d, x) - (d + 1), 'g_{}(x) = {}'.format(d, d + 1), tol)


def solve_gamma_d(d, tol=DEFAULT_TOL):
    """Computes the collapsibility threshold ``gamma_d``.

    ``gamma_d = 1 / (d x (1-x)^{d-1})`` where ``x`` is the interior root of
    ``exp(-(1-x)/(dx)) = x``. The root is bracketed by scanning a grid that
    is geometric near 0 and uniform up to ``1 - 1e-6`` for the first
    negative-to-positive sign change. For ``d = 1`` no interior root exists
    and ``(1, 1)`` is returned.

    Args:
        d (int)    : dimension, at least 1
        tol (float): bisection tolerance

    Returns:
        tuple: ``(gamma_d, x_star)``.
    """
    if d == 1:
        return 1.0, 1.0

    def h(x):
        return math.exp(-(1 - x) / (d * x)) - x

    grid = np.concatenate((np.geomspace(1e-12, 1e-2, 200, endpoint=False),
                           np.linspace(1e-2, X_CAP, 4000)))
    values = np.array([h(x) for x in grid])
    positive = np.flatnonzero(values > 0)
    if positive.size == 0 or positive[0] == 0:
        raise BracketError('exp(-(1-x)/({}x)) = x'.format(d))
    i = int(positive[0])
    x_star = bisect(h, grid[i - 1], grid[i], xtol=tol * 1e-2, rtol=4 * np.finfo(float).eps,
                    maxiter=1000)
    gamma_d = 1.0 / (d * x_star * (1 - x_star) ** (d - 1))
    debug('gamma_{} = {} at x* = {}\n'.format(d, gamma_d, x_star))
    return gamma_d, x_star


def rho_recursion(d, gamma, k, tol=RHO_TOL, max_iter=RHO_MAX_ITER):
    """Iterates ``rho(0) = e^{-gamma}``, ``rho(k) = exp(-gamma(1-rho(k-1))^d)``.

    The sequence is nondecreasing and converges to the smallest root of
    ``u_d(gamma, x) = 0`` in ``(0, 1]``; the limit is computed by iterating
    until two iterates differ by less than ``tol`` or ``max_iter`` is hit.

    Args:
        d (int)      : dimension
        gamma (float): Poisson rate, nonnegative
        k (int)      : last index kept in ``values``
        tol (float)  : stopping tolerance of the limit
        max_iter (int): iteration cap of the limit

    Returns:
        RhoCurve: the iterates and the limit.
    """
    if k < 0:
        raise ValueError('k must be nonnegative, got {}.'.format(k))
    rho = math.exp(-gamma)
    values = [rho]
    for _ in range(k):
        rho = math.exp(-gamma * (1 - rho) ** d)
        values.append(rho)
    x = values[0]
    converged = False
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        nxt = math.exp(-gamma * (1 - x) ** d)
        if abs(nxt - x) < tol:
            x = nxt
            converged = True
            break
        x = nxt
    if not converged:
        debug('rho_{}({}) hit the iteration cap at {}\n'.format(d, gamma, x))
    return RhoCurve(d=d, gamma=gamma, values=tuple(values), fixed_point=x,
                    iterations=iterations, converged=converged)


def rho_profile(d, gammas, k):
    """Tabulates ``(gamma, rho_d(k, gamma), rho_d(gamma))`` over a grid of rates."""
    rows = []
    for gamma in gammas:
        curve = rho_recursion(d, gamma, k)
        rows.append((gamma, curve.values[-1], curve.fixed_point))
    return rows


def theta_tree(x, ell):
    """Truncated graphical cocycle density
    ``theta_{1,l}(x) = (1/x) sum_{k<=l} k^{k-2}/k! (x e^{-x})^k``.
    """
    if x == 0:
        return 1.0
    k = np.arange(1, ell + 1, dtype=float)
    log_terms = (k - 2) * np.log(k) - gammaln(k + 1) + k * (math.log(x) - x)
    return float(np.exp(log_terms).sum()) / x


def theta_d_ell(d, ell, x):
    """Evaluates the cocycle density ``theta_{d,l}(x)``.

    Closed forms exist for ``l = 1`` (``e^{-x}``) and ``l = 2``
    (``(1+x)e^{-x} - x/(d+1) (1-(1-e^{-x})^{d+1})``); for ``d = 1`` every
    ``l`` is available through :py:func:`theta_tree`.

    Raises:
        UnsupportedEll: for ``l`` without a closed form.
    """
    if ell == 1:
        return math.exp(-x)
    if ell == 2:
        return (1 + x) * math.exp(-x) - x / (d + 1) * (1 - (-math.expm1(-x)) ** (d + 1))
    if d == 1 and ell >= 1:
        return theta_tree(x, ell)
    raise UnsupportedEll(d, ell)


def solve_c_d_ell(d, ell, tol=DEFAULT_TOL):
    """Solves ``x + (d+1) theta_{d,l}(x) = d+1`` for its positive root.

    Args:
        d (int)    : dimension
        ell (int)  : support size
        tol (float): bisection tolerance

    Returns:
        float: ``c_{d,l}``.
    """
    theta_d_ell(d, ell, 0.0)
    # for d = 1 and large l the left end is scanned from 0.9, where the
    # truncated tail is still representable (every c_{1,l} exceeds 1)
    start = 0.9 if (d == 1 and ell > 2) else SCAN_START
    return _solve_increasing(lambda x: x + (d + 1) * theta_d_ell(d, ell, x) - (d + 1),
                             'x + {}theta_{{{},{}}}(x) = {}'.format(d + 1, d, ell, d + 1),
                             tol, start=start)


def solve_c1_ell(ell, tol=DEFAULT_TOL):
    """Graphical constant ``c_{1,l}``, decreasing towards 1 as ``l`` grows."""
    return solve_c_d_ell(1, ell, tol)


def tree_gf(z, truncation=GF_TRUNCATION):
    """Evaluates the tree generating functions at ``0 <= z <= 1/e``.

    ``R(z) = sum_k k^{k-1} z^k / k!`` is summed up to ``truncation`` in log
    space and ``T = R - R^2/2``. The tail is bounded with
    ``k^{k-1} e^{-k} / k! <= k^{-3/2} / sqrt(2 pi)``, which gives
    ``sum_{k>K} <= (ze)^{K+1} sqrt(2/(pi K))``; the same bound holds for
    ``T`` since ``|dT/dR| = |1 - R| <= 1``.

    Args:
        z (float)       : argument
        truncation (int): number of series terms ``K``

    Returns:
        tuple: ``(R, T, tail_bound)``.

    Raises:
        SeriesDivergence: if ``z > 1/e``.
    """
    boundary = math.exp(-1)
    if z < 0:
        raise ValueError('z must be nonnegative, got {}.'.format(z))
    if z > boundary * (1 + 1e-15):
        raise SeriesDivergence(z)
    if z == 0:
        return 0.0, 0.0, 0.0
    z = min(z, boundary)
    log_z = math.log(z)
    total = 0.0
    for start in range(1, truncation + 1, GF_CHUNK):
        k = np.arange(start, min(start + GF_CHUNK, truncation + 1), dtype=float)
        log_terms = (k - 1) * np.log(k) - gammaln(k + 1) + k * log_z
        total += float(np.exp(log_terms).sum())
    ratio = min(1.0, z * math.e)
    tail = ratio ** (truncation + 1) * math.sqrt(2 / (math.pi * truncation))
    R = total
    return R, R - R * R / 2, tail


def tilde_c1_residual(x=1.0, truncation=GF_TRUNCATION):
    """Evaluates ``x + 2T(x e^{-x})/x - 2``.

    The residual vanishes (up to the series tail) on ``(0, 1]`` and is
    positive beyond, so ``x = 1`` is the largest solution of the graphical
    equation, i.e. the limit of the constants ``c_{1,l}``.

    Args:
        x (float)       : point of evaluation, positive
        truncation (int): number of series terms

    Returns:
        float: the residual.
    """
    _, T, _ = tree_gf(x * math.exp(-x), truncation)
    return x + 2 * T / x - 2


def threshold_report(d, tol=DEFAULT_TOL):
    """Collects every threshold constant of dimension ``d``."""
    gamma_d, x_star = solve_gamma_d(d, tol)
    return ThresholdReport(d=d, c_d=solve_c_d(d, tol), gamma_d=gamma_d, x_star=x_star,
                           c_d_1=solve_c_d_ell(d, 1, tol), c_d_2=solve_c_d_ell(d, 2, tol),
                           tolerance=tol)
