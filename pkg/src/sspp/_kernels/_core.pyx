# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: raster disc updates and prefix distance scans.

Mirrors the signatures of ``pykernels``.
"""

from libc.math cimport sqrt

BACKEND = "cython"


def add_disc(unsigned char[:, ::1] covered,
             const double[::1] mx, const double[::1] my,
             const double[::1] wx, const double[::1] wy,
             double cx, double cy, double r,
             Py_ssize_t i0, Py_ssize_t i1,
             Py_ssize_t j0, Py_ssize_t j1):
    cdef double r2 = r * r
    cdef double area = 0.0
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t i, j
    cdef double dy2, d2
    for j in range(j0, j1):
        dy2 = (my[j] - cy) * (my[j] - cy)
        if dy2 > r2:
            continue
        for i in range(i0, i1):
            if covered[j, i]:
                continue
            d2 = dy2 + (mx[i] - cx) * (mx[i] - cx)
            if d2 <= r2:
                covered[j, i] = 1
                area += wy[j] * wx[i]
                count += 1
    return area, count


def ball_area(const double[::1] mx, const double[::1] my,
              const double[::1] wx, const double[::1] wy,
              double cx, double cy, double r,
              Py_ssize_t i0, Py_ssize_t i1,
              Py_ssize_t j0, Py_ssize_t j1):
    cdef double r2 = r * r
    cdef double area = 0.0
    cdef Py_ssize_t i, j
    cdef double dy2
    for j in range(j0, j1):
        dy2 = (my[j] - cy) * (my[j] - cy)
        if dy2 > r2:
            continue
        for i in range(i0, i1):
            if dy2 + (mx[i] - cx) * (mx[i] - cx) <= r2:
                area += wy[j] * wx[i]
    return area


def count_within(const double[::1] xs, const double[::1] ys,
                 double px, double py, double r):
    cdef double r2 = r * r
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double dx, dy
    for i in range(n):
        dx = xs[i] - px
        dy = ys[i] - py
        if dx * dx + dy * dy <= r2:
            count += 1
    return count


def any_within(const double[::1] xs, const double[::1] ys,
               double px, double py, double r):
    cdef double r2 = r * r
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i
    cdef double dx, dy
    for i in range(n):
        dx = xs[i] - px
        dy = ys[i] - py
        if dx * dx + dy * dy <= r2:
            return True
    return False


def min_dist(const double[::1] xs, const double[::1] ys, double px, double py):
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i
    cdef double dx, dy, d2
    cdef double best = -1.0
    for i in range(n):
        dx = xs[i] - px
        dy = ys[i] - py
        d2 = dx * dx + dy * dy
        if best < 0.0 or d2 < best:
            best = d2
    return sqrt(best)
