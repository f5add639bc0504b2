"""Compiled inner loops for the spatial Monte Carlo estimators.

Each kernel runs one realization and consumes a ``numpy.random.Generator``
directly, so the draw sequence is an explicit contract shared with the
scene sampler in :mod:`.montecarlo` (numba reproduces numpy's generator
bit streams exactly).  Guard-zone queries use a counting-sort grid over
the hole points with a 3x3 toroidal cell scan, falling back to a direct
scan when the cells would be smaller than the guard radius.

All distances are toroidal; squared distances are compared against the
squared radius so no square roots are taken on the hot path.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _torus_d2(x1, y1, x2, y2, side):
    dx = abs(x1 - x2)
    alt = side - dx
    if alt < dx:
        dx = alt
    dy = abs(y1 - y2)
    alt = side - dy
    if alt < dy:
        dy = alt
    return dx * dx + dy * dy


@njit(cache=True)
def _grid_index(v, half, ncell):
    c = int((v + half) * ncell / (2.0 * half))
    if c < 0:
        c = 0
    elif c >= ncell:
        c = ncell - 1
    return c


@njit(cache=True)
def _choose_ncell(side, r_g):
    """Largest cell count (capped) keeping cell size >= r_g, so a 3x3
    neighborhood scan covers every point within the guard radius."""
    if r_g <= 0.0:
        return 1
    n = int(side / r_g)
    if n > 64:
        n = 64
    if n < 1:
        n = 1
    return n


@njit(cache=True)
def _bin_points(xs, ys, half, ncell):
    """Counting sort of points into ncell x ncell cells.

    Returns (starts, order): cell c owns order[starts[c]:starts[c+1]].
    """
    n = xs.shape[0]
    ncells = ncell * ncell
    starts = np.zeros(ncells + 1, np.int64)
    cell_of = np.empty(n, np.int64)
    for i in range(n):
        c = _grid_index(xs[i], half, ncell) * ncell + _grid_index(ys[i], half, ncell)
        cell_of[i] = c
        starts[c + 1] += 1
    for c in range(ncells):
        starts[c + 1] += starts[c]
    order = np.empty(n, np.int64)
    fill = starts[:ncells].copy()
    for i in range(n):
        c = cell_of[i]
        order[fill[c]] = i
        fill[c] += 1
    return starts, order


@njit(cache=True)
def _any_within(x, y, r2, xs, ys, half, ncell, starts, order):
    """True when any stored point lies within squared distance r2 of (x, y)."""
    side = 2.0 * half
    if ncell < 3:
        for i in range(xs.shape[0]):
            if _torus_d2(x, y, xs[i], ys[i], side) < r2:
                return True
        return False
    cx = _grid_index(x, half, ncell)
    cy = _grid_index(y, half, ncell)
    for ox in range(-1, 2):
        gx = (cx + ox) % ncell
        for oy in range(-1, 2):
            gy = (cy + oy) % ncell
            c = gx * ncell + gy
            for k in range(starts[c], starts[c + 1]):
                i = order[k]
                if _torus_d2(x, y, xs[i], ys[i], side) < r2:
                    return True
    return False


@njit(cache=True)
def pcon_realization(rng, lambda_p, lambda_s, r_g, r_1, alpha, beta_p,
                     noise_over_pt, half):
    """Connection indicator for the typical link at the window center.

    Returns 1 when the typical transmitter keeps its guard zone clear and
    the receiver at (r_1, 0) clears the SINR threshold against the
    aggregate interference of the surviving transmitters.
    """
    side = 2.0 * half
    area = side * side
    n_pt = rng.poisson(lambda_p * area)
    pt_x = rng.random(n_pt) * side - half
    pt_y = rng.random(n_pt) * side - half
    n_er = rng.poisson(lambda_s * area)
    er_x = rng.random(n_er) * side - half
    er_y = rng.random(n_er) * side - half

    rg2 = r_g * r_g
    ncell = 1
    starts = np.zeros(2, np.int64)
    order = np.empty(0, np.int64)
    carve = (r_g > 0.0) and (n_er > 0)
    if carve:
        ncell = _choose_ncell(side, r_g)
        starts, order = _bin_points(er_x, er_y, half, ncell)
        if _any_within(0.0, 0.0, rg2, er_x, er_y, half, ncell, starts, order):
            return np.uint8(0)      # typical transmitter silenced

    h1 = rng.exponential(1.0)
    signal = h1 * (r_1 * r_1) ** (-0.5 * alpha)
    interference = 0.0
    for i in range(n_pt):
        if carve and _any_within(pt_x[i], pt_y[i], rg2, er_x, er_y, half,
                                 ncell, starts, order):
            continue                # silenced: contributes nothing, no draw
        h = rng.exponential(1.0)
        d2 = _torus_d2(pt_x[i], pt_y[i], r_1, 0.0, side)
        interference += h * d2 ** (-0.5 * alpha)
    if signal >= beta_p * (interference + noise_over_pt):
        return np.uint8(1)
    return np.uint8(0)


@njit(cache=True)
def psec_realization(rng, lambda_p, lambda_s, r_g, alpha, beta_s,
                     noise_over_pt, half):
    """Secrecy indicator, conditioned on the typical transmitter active.

    The receiver field is restricted to the window minus the guard ball
    (count drawn at the reduced mean, positions by rejection).  Returns 0
    at the first receiver whose SINR reaches the decoding threshold.
    """
    side = 2.0 * half
    area = side * side
    n_pt = rng.poisson(lambda_p * area)
    pt_x = rng.random(n_pt) * side - half
    pt_y = rng.random(n_pt) * side - half
    rg2 = r_g * r_g
    n_er = rng.poisson(lambda_s * (area - np.pi * rg2))
    er_x = np.empty(n_er)
    er_y = np.empty(n_er)
    for j in range(n_er):
        while True:
            x = rng.random() * side - half
            y = rng.random() * side - half
            if x * x + y * y >= rg2:
                er_x[j] = x
                er_y[j] = y
                break

    ncell = 1
    starts = np.zeros(2, np.int64)
    order = np.empty(0, np.int64)
    carve = (r_g > 0.0) and (n_er > 0)
    if carve:
        ncell = _choose_ncell(side, r_g)
        starts, order = _bin_points(er_x, er_y, half, ncell)
    active = np.empty(n_pt, np.uint8)
    for i in range(n_pt):
        if carve and _any_within(pt_x[i], pt_y[i], rg2, er_x, er_y, half,
                                 ncell, starts, order):
            active[i] = 0
        else:
            active[i] = 1

    for j in range(n_er):
        g1 = rng.exponential(1.0)
        d2 = er_x[j] * er_x[j] + er_y[j] * er_y[j]
        signal = g1 * d2 ** (-0.5 * alpha)
        if signal < beta_s * noise_over_pt:
            continue                # noise alone keeps this receiver blind
        interference = 0.0
        for i in range(n_pt):
            if active[i] == 1:
                g = rng.exponential(1.0)
                di2 = _torus_d2(er_x[j], er_y[j], pt_x[i], pt_y[i], side)
                interference += g * di2 ** (-0.5 * alpha)
        if signal >= beta_s * (interference + noise_over_pt):
            return np.uint8(0)
    return np.uint8(1)


@njit(cache=True)
def penergy_realization(rng, lambda_p, lambda_s, r_g, alpha, energy_rate, half):
    """Harvesting indicator for the typical receiver at the window center.

    The typical receiver participates in carving like any other, so the
    nearest active transmitter is at distance >= r_g by construction.
    Returns (success, active_transmitter_seen).
    """
    side = 2.0 * half
    area = side * side
    n_pt = rng.poisson(lambda_p * area)
    pt_x = rng.random(n_pt) * side - half
    pt_y = rng.random(n_pt) * side - half
    n_er = rng.poisson(lambda_s * area)
    er_x = rng.random(n_er) * side - half
    er_y = rng.random(n_er) * side - half

    hx = np.empty(n_er + 1)
    hy = np.empty(n_er + 1)
    hx[:n_er] = er_x
    hy[:n_er] = er_y
    hx[n_er] = 0.0
    hy[n_er] = 0.0

    rg2 = r_g * r_g
    ncell = 1
    starts = np.zeros(2, np.int64)
    order = np.empty(0, np.int64)
    carve = r_g > 0.0
    if carve:
        ncell = _choose_ncell(side, r_g)
        starts, order = _bin_points(hx, hy, half, ncell)

    best_d2 = -1.0
    for i in range(n_pt):
        if carve and _any_within(pt_x[i], pt_y[i], rg2, hx, hy, half,
                                 ncell, starts, order):
            continue
        d2 = _torus_d2(pt_x[i], pt_y[i], 0.0, 0.0, side)
        if best_d2 < 0.0 or d2 < best_d2:
            best_d2 = d2
    if best_d2 < 0.0:
        return np.uint8(0), np.uint8(0)
    w = rng.exponential(1.0)
    if w >= energy_rate * best_d2 ** (0.5 * alpha):
        return np.uint8(1), np.uint8(1)
    return np.uint8(0), np.uint8(1)
