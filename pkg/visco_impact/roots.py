'''Root bracketing and peak location shared by the closed-form modules.

All the contact problems here end at the first time the contact force drops
to zero, and none of them give that time in closed form once gravity or a
third element enters. The helpers scan a uniform grid for the first sign
change and hand the bracket to Brent.'''

import logging

import numpy as np
from scipy import optimize

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-15
ROOT_RTOL = 1e-12
PEAK_GRID = 2001
PEAK_TOL = 1e-12


def first_crossing(func, t_start, t_end, n_grid):
    '''First t in (t_start, t_end] where func goes from positive to <= 0.

    `func` must accept numpy arrays. Returns None if there is no crossing on
    the grid.'''
    grid = np.linspace(t_start, t_end, int(n_grid) + 1)
    values = func(grid)
    positive = values > 0
    # Index i such that values[i-1] > 0 and values[i] <= 0
    hits = np.flatnonzero(positive[:-1] & ~positive[1:])
    if not len(hits):
        return None
    i = hits[0] + 1
    if values[i] == 0:
        return float(grid[i])
    scalar = lambda t: float(func(np.asarray(t)))
    root = optimize.brentq(
        scalar, grid[i - 1], grid[i], xtol=ROOT_XTOL, rtol=ROOT_RTOL)
    logger.debug('crossing bracketed in [%g, %g], root %r', grid[i - 1],
        grid[i], root)
    return root


def first_root(func, a, b):
    '''Brent root of a scalar function known to change sign on [a, b]'''
    return optimize.brentq(
        lambda t: float(func(np.asarray(t))), a, b,
        xtol=ROOT_XTOL, rtol=ROOT_RTOL)


def golden_peak(func, a, b, n_grid=PEAK_GRID, tol=PEAK_TOL):
    '''Location and value of the maximum of func on [a, b].

    A dense grid picks the neighbourhood; golden-section search polishes it.
    Maxima sitting on an endpoint are returned as is.'''
    grid = np.linspace(a, b, int(n_grid))
    values = func(grid)
    i = int(np.argmax(values))
    if i == 0 or i == len(grid) - 1:
        return float(grid[i]), float(values[i])
    negated = lambda t: -float(func(np.asarray(t)))
    try:
        result = optimize.minimize_scalar(
            negated, bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method='golden', tol=tol)
    except ValueError:
        # Flat top: neighbours tie with the grid maximum
        result = optimize.minimize_scalar(
            negated, bounds=(grid[i - 1], grid[i + 1]), method='bounded',
            options={'xatol': tol * max(abs(b), 1.0)})
    t_peak = float(result.x)
    if not grid[i - 1] <= t_peak <= grid[i + 1] or -result.fun < values[i]:
        return float(grid[i]), float(values[i])
    return t_peak, float(-result.fun)
