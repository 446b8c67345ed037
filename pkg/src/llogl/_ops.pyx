# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels; semantics match llogl._ops_py exactly.

Window conventions (shared with the fallback): centred windows with
integer half-widths, zero padding for sums, in-array cells only for
maxima, unclipped cell counts as divisors.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

IS_COMPILED = True


cdef inline double _gauge1(double dx, double dy, double dz, int kind) nogil:
    cdef double xy2
    if kind == 0:
        return sqrt(dx * dx + dy * dy + dz * dz)
    xy2 = dx * dx + dy * dy
    return (xy2 * xy2 + 16.0 * dz * dz) ** 0.25


cdef inline double _dist(const double* a, const double* b, int dim, int kind) nogil:
    """rho(a^{-1} b) for points of dimension dim (kind 1 implies dim 3)."""
    cdef double s = 0.0
    cdef double dz
    cdef int d
    if kind == 0:
        for d in range(dim):
            s += (b[d] - a[d]) * (b[d] - a[d])
        return sqrt(s)
    dz = b[2] - a[2] - 0.5 * (a[0] * b[1] - a[1] * b[0])
    return _gauge1(b[0] - a[0], b[1] - a[1], dz, 1)


def point_dist(p, points, int kind):
    """Distances rho(p^{-1} x) from one point to many."""
    cdef cnp.ndarray[double, ndim=1] pp = np.ascontiguousarray(p, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef int dim = pts.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _dist(&pp[0], &pts[i, 0], dim, kind)
    return out


cdef void _prefix2d(double[:, :] a, double[:, :] c) nogil:
    """c[i+1][j+1] = sum over a[:i+1,:j+1]; c zero on first row/col."""
    cdef Py_ssize_t n0 = a.shape[0], n1 = a.shape[1]
    cdef Py_ssize_t i, j
    for j in range(n1 + 1):
        c[0, j] = 0.0
    for i in range(n0):
        c[i + 1, 0] = 0.0
        for j in range(n1):
            c[i + 1, j + 1] = c[i, j + 1] + a[i, j]
    for i in range(1, n0 + 1):
        for j in range(1, n1 + 1):
            c[i, j] = c[i, j - 1] + c[i, j]


cdef void _window_sum_from_prefix(double[:, :] c, Py_ssize_t n0, Py_ssize_t n1,
                                  int k0, int k1, double[:, :] out) nogil:
    cdef Py_ssize_t i, j, lo0, hi0, lo1, hi1
    for i in range(n0):
        lo0 = i - k0
        if lo0 < 0:
            lo0 = 0
        hi0 = i + k0 + 1
        if hi0 > n0:
            hi0 = n0
        for j in range(n1):
            lo1 = j - k1
            if lo1 < 0:
                lo1 = 0
            hi1 = j + k1 + 1
            if hi1 > n1:
                hi1 = n1
            out[i, j] = c[hi0, hi1] - c[lo0, hi1] - c[hi0, lo1] + c[lo0, lo1]


def sliding_sum_2d(a, int k0, int k1):
    """Zero-padded window sum with half-widths (k0, k1)."""
    cdef cnp.ndarray[double, ndim=2] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t n0 = aa.shape[0], n1 = aa.shape[1]
    cdef cnp.ndarray[double, ndim=2] c = np.empty((n0 + 1, n1 + 1), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n0, n1), dtype=np.float64)
    _prefix2d(aa, c)
    _window_sum_from_prefix(c, n0, n1, k0, k1, out)
    return out


cdef void _smax_axis0(double[:, :] a, int k, double[:, :] out,
                      Py_ssize_t[:] deque) nogil:
    """Moving max along axis 0 with clipped window [i-k, i+k]."""
    cdef Py_ssize_t n0 = a.shape[0], n1 = a.shape[1]
    cdef Py_ssize_t i, j, r, head, tail
    for j in range(n1):
        head = 0
        tail = 0
        for r in range(0, min(k, n0)):
            while tail > head and a[deque[tail - 1], j] <= a[r, j]:
                tail -= 1
            deque[tail] = r
            tail += 1
        for i in range(n0):
            r = i + k
            if r < n0:
                while tail > head and a[deque[tail - 1], j] <= a[r, j]:
                    tail -= 1
                deque[tail] = r
                tail += 1
            while deque[head] < i - k:
                head += 1
            out[i, j] = a[deque[head], j]


cdef void _smax_axis1(double[:, :] a, int k, double[:, :] out,
                      Py_ssize_t[:] deque) nogil:
    cdef Py_ssize_t n0 = a.shape[0], n1 = a.shape[1]
    cdef Py_ssize_t i, j, r, head, tail
    for i in range(n0):
        head = 0
        tail = 0
        for r in range(0, min(k, n1)):
            while tail > head and a[i, deque[tail - 1]] <= a[i, r]:
                tail -= 1
            deque[tail] = r
            tail += 1
        for j in range(n1):
            r = j + k
            if r < n1:
                while tail > head and a[i, deque[tail - 1]] <= a[i, r]:
                    tail -= 1
                deque[tail] = r
                tail += 1
            while deque[head] < j - k:
                head += 1
            out[i, j] = a[i, deque[head]]


def sliding_max_2d(a, int k0, int k1):
    """Window max over in-array cells, half-widths (k0, k1)."""
    cdef cnp.ndarray[double, ndim=2] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t n0 = aa.shape[0], n1 = aa.shape[1]
    cdef cnp.ndarray[double, ndim=2] tmp = np.empty((n0, n1), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n0, n1), dtype=np.float64)
    cdef cnp.ndarray[Py_ssize_t, ndim=1] deq = np.empty(max(n0, n1) + 1, dtype=np.intp)
    if k0 > 0:
        _smax_axis0(aa, k0, tmp, deq)
    else:
        tmp[:, :] = aa
    if k1 > 0:
        _smax_axis1(tmp, k1, out, deq)
        return out
    return tmp


def strong_max_2d(absf, k0s, k1s):
    """sup over lattice ball products of box averages (see fallback doc)."""
    cdef cnp.ndarray[double, ndim=2] aa = np.ascontiguousarray(absf, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] kk0 = np.ascontiguousarray(k0s, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] kk1 = np.ascontiguousarray(k1s, dtype=np.int64)
    cdef Py_ssize_t n0 = aa.shape[0], n1 = aa.shape[1]
    cdef cnp.ndarray[double, ndim=2] c = np.empty((n0 + 1, n1 + 1), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] sums = np.empty((n0, n1), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] m1 = np.empty((n0, n1), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] m2 = np.empty((n0, n1), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] out = np.full((n0, n1), -INFINITY, dtype=np.float64)
    cdef cnp.ndarray[Py_ssize_t, ndim=1] deq = np.empty(max(n0, n1) + 1, dtype=np.intp)
    cdef Py_ssize_t a_i, b_i, i, j
    cdef int k0, k1
    cdef double inv_cnt
    _prefix2d(aa, c)
    for a_i in range(kk0.shape[0]):
        k0 = <int> kk0[a_i]
        for b_i in range(kk1.shape[0]):
            k1 = <int> kk1[b_i]
            _window_sum_from_prefix(c, n0, n1, k0, k1, sums)
            inv_cnt = 1.0 / ((2.0 * k0 + 1.0) * (2.0 * k1 + 1.0))
            for i in range(n0):
                for j in range(n1):
                    sums[i, j] *= inv_cnt
            if k0 > 0:
                _smax_axis0(sums, k0, m1, deq)
            else:
                m1[:, :] = sums
            if k1 > 0:
                _smax_axis1(m1, k1, m2, deq)
            else:
                m2[:, :] = m1
            for i in range(n0):
                for j in range(n1):
                    if m2[i, j] > out[i, j]:
                        out[i, j] = m2[i, j]
    return out


def accumulate_window_mean(acc, a, int k0, int k1, double weight):
    """acc += weight * (window mean of a with full-count divisor)."""
    cdef cnp.ndarray[double, ndim=2] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] ac = acc
    cdef Py_ssize_t n0 = aa.shape[0], n1 = aa.shape[1]
    cdef cnp.ndarray[double, ndim=2] c = np.empty((n0 + 1, n1 + 1), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] sums = np.empty((n0, n1), dtype=np.float64)
    cdef double scale = weight / ((2.0 * k0 + 1.0) * (2.0 * k1 + 1.0))
    cdef Py_ssize_t i, j
    _prefix2d(aa, c)
    _window_sum_from_prefix(c, n0, n1, k0, k1, sums)
    for i in range(n0):
        for j in range(n1):
            ac[i, j] += scale * sums[i, j]


def greedy_net(points, int kind, double threshold, Py_ssize_t start):
    """Greedy farthest-point net; ties resolved by lowest index."""
    cdef cnp.ndarray[double, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef int dim = pts.shape[1]
    cdef cnp.ndarray[double, ndim=1] dist = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, best
    cdef double d, bestd
    cdef list net = [start]
    for i in range(n):
        dist[i] = _dist(&pts[start, 0], &pts[i, 0], dim, kind)
    while True:
        best = 0
        bestd = dist[0]
        for i in range(1, n):
            if dist[i] > bestd:
                bestd = dist[i]
                best = i
        if bestd < threshold:
            break
        net.append(best)
        for i in range(n):
            d = _dist(&pts[best, 0], &pts[i, 0], dim, kind)
            if d < dist[i]:
                dist[i] = d
    return np.asarray(net, dtype=np.int64)


def nearest_center(points, centers, int kind):
    """Index of the nearest centre for every point (first index on ties)."""
    cdef cnp.ndarray[double, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] ctr = np.ascontiguousarray(centers, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0], m = ctr.shape[0]
    cdef int dim = pts.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i, ci
    cdef double d, bestd
    for i in range(n):
        bestd = INFINITY
        out[i] = 0
        for ci in range(m):
            d = _dist(&ctr[ci, 0], &pts[i, 0], dim, kind)
            if d < bestd:
                bestd = d
                out[i] = ci
    return out


def group_radial_convolve(coords, values, int kind, prof_r, prof_v,
                          double cell_measure):
    """Direct group convolution with a tabulated radial kernel profile.

    Linear interpolation in the table, zero beyond the last abscissa
    (matching np.interp with right=0).
    """
    cdef cnp.ndarray[double, ndim=2] xy = np.ascontiguousarray(coords, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] vals = np.ascontiguousarray(values, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] pr = np.ascontiguousarray(prof_r, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] pv = np.ascontiguousarray(prof_v, dtype=np.float64)
    cdef Py_ssize_t n = xy.shape[0], nt = pr.shape[0]
    cdef int dim = xy.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(n, dtype=np.float64)
    cdef Py_ssize_t g, h
    cdef double r, acc, kv, frac
    cdef double r0 = pr[0], rlast = pr[nt - 1]
    cdef double step = (rlast - r0) / (nt - 1) if nt > 1 else 1.0
    cdef Py_ssize_t idx
    for g in range(n):
        acc = 0.0
        for h in range(n):
            r = _dist(&xy[h, 0], &xy[g, 0], dim, kind)
            if r > rlast:
                continue
            if r <= r0:
                kv = pv[0]
            else:
                idx = <Py_ssize_t> ((r - r0) / step)
                if idx >= nt - 1:
                    idx = nt - 2
                frac = (r - pr[idx]) / (pr[idx + 1] - pr[idx])
                kv = pv[idx] + (pv[idx + 1] - pv[idx]) * frac
            acc += vals[h] * kv
        out[g] = acc * cell_measure
    return out


def hl_max_direct(coords, values, int kind, radii):
    """Uncentred Hardy-Littlewood maximal function over sampled balls."""
    cdef cnp.ndarray[double, ndim=2] xy = np.ascontiguousarray(coords, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] absv = np.abs(np.ascontiguousarray(values, dtype=np.float64))
    cdef cnp.ndarray[double, ndim=1] rr = np.sort(np.ascontiguousarray(radii, dtype=np.float64))
    cdef Py_ssize_t n = xy.shape[0], nr = rr.shape[0]
    cdef int dim = xy.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] d = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order
    cdef cnp.ndarray[double, ndim=1] csum = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t ci, i, m, ri
    cdef double avg, run
    for ci in range(n):
        for i in range(n):
            d[i] = _dist(&xy[ci, 0], &xy[i, 0], dim, kind)
        order = np.argsort(d, kind="stable")
        run = 0.0
        for i in range(n):
            run += absv[order[i]]
            csum[i] = run
        for ri in range(nr):
            # number of samples with distance strictly below the radius
            m = np.searchsorted(d[order], rr[ri], side="left")
            if m == 0:
                continue
            avg = csum[m - 1] / m
            for i in range(m):
                if avg > out[order[i]]:
                    out[order[i]] = avg
    return out
