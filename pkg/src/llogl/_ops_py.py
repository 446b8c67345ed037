"""Pure numpy/scipy implementations of the hot kernels.

This is the fallback backend; llogl._ops is the compiled twin with
identical signatures and semantics.  Window conventions shared by both:

* windows are centred with integer half-widths k, i.e. 2k+1 cells;
* window sums treat cells outside the array as zero (functions are
  extended by zero outside their box);
* window maxima range over in-array cells only (ball centres must lie
  on the grid);
* "full count" divisors use the unclipped cell count (2k+1 per axis),
  which is the exact discrete measure of the lattice ball.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import maximum_filter1d

IS_COMPILED = False


def _gauge(diff: np.ndarray, kind: int) -> np.ndarray:
    """Homogeneous norm of displacement rows; kind 0 = euclid, 1 = heis."""
    if kind == 0:
        return np.sqrt(np.sum(diff * diff, axis=-1))
    xy2 = diff[..., 0] ** 2 + diff[..., 1] ** 2
    return (xy2 * xy2 + 16.0 * diff[..., 2] ** 2) ** 0.25


def _left_diff(src: np.ndarray, dst: np.ndarray, kind: int) -> np.ndarray:
    """Displacement src^{-1} * dst for a block of sources against one dst."""
    d = dst - src
    if kind == 1:
        d = d.copy()
        d[..., 2] -= 0.5 * (src[..., 0] * dst[..., 1] - src[..., 1] * dst[..., 0])
    return d


def point_dist(p: np.ndarray, points: np.ndarray, kind: int) -> np.ndarray:
    """Distances rho(p^{-1} x) from one point to many."""
    return _gauge(_left_diff(p, points, kind), kind)


def sliding_sum_2d(a: np.ndarray, k0: int, k1: int) -> np.ndarray:
    """Zero-padded window sum with half-widths (k0, k1)."""
    n0, n1 = a.shape
    c = np.zeros((n0 + 1, n1 + 1))
    np.cumsum(a, axis=0, out=c[1:, 1:])
    np.cumsum(c[1:, 1:], axis=1, out=c[1:, 1:])
    i = np.arange(n0)
    j = np.arange(n1)
    lo0 = np.clip(i - k0, 0, n0)
    hi0 = np.clip(i + k0 + 1, 0, n0)
    lo1 = np.clip(j - k1, 0, n1)
    hi1 = np.clip(j + k1 + 1, 0, n1)
    return (c[np.ix_(hi0, hi1)] - c[np.ix_(lo0, hi1)]
            - c[np.ix_(hi0, lo1)] + c[np.ix_(lo0, lo1)])


def sliding_max_2d(a: np.ndarray, k0: int, k1: int) -> np.ndarray:
    """Window max over in-array cells, half-widths (k0, k1)."""
    out = a
    if k0 > 0:
        out = maximum_filter1d(out, 2 * k0 + 1, axis=0, mode="constant",
                               cval=-np.inf)
    if k1 > 0:
        out = maximum_filter1d(out, 2 * k1 + 1, axis=1, mode="constant",
                               cval=-np.inf)
    return np.array(out, copy=True) if out is a else out


def strong_max_2d(absf: np.ndarray, k0s: np.ndarray, k1s: np.ndarray) -> np.ndarray:
    """sup over lattice ball products of box averages.

    For each half-width pair (k0, k1): box average at every centre
    (zero-padded sum over the window divided by the full cell count),
    then a window max spreads each centre's average to every cell the
    ball covers; the result is the elementwise max over all pairs.
    """
    out = np.full(absf.shape, -np.inf)
    for k0 in np.asarray(k0s, dtype=np.int64):
        rows = sliding_sum_2d(absf, int(k0), 0)
        for k1 in np.asarray(k1s, dtype=np.int64):
            k1 = int(k1)
            sums = sliding_sum_2d(rows, 0, k1)
            means = sums / float((2 * int(k0) + 1) * (2 * k1 + 1))
            np.maximum(out, sliding_max_2d(means, int(k0), k1), out=out)
    return out


def accumulate_window_mean(acc: np.ndarray, a: np.ndarray, k0: int, k1: int,
                           weight: float) -> None:
    """acc += weight * (window mean of a with full-count divisor)."""
    cnt = float((2 * k0 + 1) * (2 * k1 + 1))
    acc += (weight / cnt) * sliding_sum_2d(a, k0, k1)


def greedy_net(points: np.ndarray, kind: int, threshold: float,
               start: int) -> np.ndarray:
    """Greedy farthest-point net: separation >= threshold, cover < threshold.

    Deterministic: ties resolved by lowest index.
    """
    n = len(points)
    dist = point_dist(points[start], points, kind)
    net = [start]
    while True:
        i = int(np.argmax(dist))
        if dist[i] < threshold:
            break
        net.append(i)
        np.minimum(dist, point_dist(points[i], points, kind), out=dist)
    return np.asarray(net, dtype=np.int64)


def nearest_center(points: np.ndarray, centers: np.ndarray, kind: int) -> np.ndarray:
    """Index of the nearest centre for every point (first index on ties)."""
    n = len(points)
    out = np.zeros(n, dtype=np.int64)
    best = np.full(n, np.inf)
    block = 64
    for lo in range(0, len(centers), block):
        ctr = centers[lo:lo + block]
        d = _gauge(_left_diff(ctr[:, None, :], points[None, :, :], kind), kind)
        bi = np.argmin(d, axis=0)
        bd = d[bi, np.arange(n)]
        better = bd < best
        out[better] = lo + bi[better]
        best[better] = bd[better]
    return out


def group_radial_convolve(coords: np.ndarray, values: np.ndarray, kind: int,
                          prof_r: np.ndarray, prof_v: np.ndarray,
                          cell_measure: float) -> np.ndarray:
    """Direct group convolution with a radial kernel profile.

    out(g) = sum_h f(h) * P(rho(h^{-1} g)) * cell_measure, with P given by
    linear interpolation in the (prof_r, prof_v) table and zero beyond the
    last abscissa.
    """
    n = len(coords)
    out = np.empty(n)
    chunk = max(1, int(2_000_000 // max(n, 1)))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        # displacement h^{-1} g for h = all coords, g = chunk
        diff = coords[None, lo:hi, :] - coords[:, None, :]
        if kind == 1:
            diff[..., 2] -= 0.5 * (coords[:, None, 0] * coords[None, lo:hi, 1]
                                   - coords[:, None, 1] * coords[None, lo:hi, 0])
        rho = _gauge(diff, kind)
        kv = np.interp(rho, prof_r, prof_v, left=prof_v[0], right=0.0)
        out[lo:hi] = values @ kv
    return out * cell_measure


def hl_max_direct(coords: np.ndarray, values: np.ndarray, kind: int,
                  radii: np.ndarray) -> np.ndarray:
    """Uncentred Hardy-Littlewood maximal function over sampled balls.

    For every centre c and radius r, the discrete-count average of
    |values| over {x : rho(c, x) < r} is spread to each member cell;
    the output is the pointwise sup.
    """
    n = len(coords)
    absv = np.abs(values)
    out = np.zeros(n)
    radii = np.sort(np.asarray(radii, dtype=float))
    for ci in range(n):
        d = point_dist(coords[ci], coords, kind)
        order = np.argsort(d, kind="stable")
        dsorted = d[order]
        csum = np.cumsum(absv[order])
        counts = np.searchsorted(dsorted, radii, side="left")
        for m in counts:
            if m == 0:
                continue
            avg = csum[m - 1] / m
            members = order[:m]
            out[members] = np.maximum(out[members], avg)
    return out
