# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernels for the reduced and count-resolved systems.

``_core_py`` implements the same two entry points in pure Python with
identical call signatures; ``kernels`` picks whichever import succeeds.
Both kernels take ``n_intervals * substeps`` classical RK4 steps of size
``h`` and record the state at every interval boundary.
"""

import numpy as np

from libc.math cimport fabs, sqrt


def rk4_reduced(v0, double c, double e, double g,
                double h, Py_ssize_t n_intervals, Py_ssize_t substeps):
    """Propagate v = (p02, p11, Re rho12, Im rho12).

    c = T_c/hbar and e = eps/hbar in 1/ns, g = Gamma_d in 1/ns.  Returns
    ``(states, purity, max_trace_dev, min_det, max_purity_rise)`` where
    the trailing scalars are worst cases over every substep, so the
    structural invariants are monitored between recorded points too.
    """
    states_arr = np.empty((n_intervals + 1, 4), dtype=np.float64)
    purity_arr = np.empty(n_intervals + 1, dtype=np.float64)
    cdef double[:, ::1] states = states_arr
    cdef double[::1] purity = purity_arr

    cdef double y0 = v0[0], y1 = v0[1], y2 = v0[2], y3 = v0[3]
    cdef double a0, a1, a2, a3, b0, b1, b2, b3
    cdef double k0, k1, k2, k3, s0, s1, s2, s3
    cdef double hh = 0.5 * h, h6 = h / 6.0
    cdef double pur, pur_prev, det, trdev
    cdef double max_trace_dev, min_det, max_rise
    cdef Py_ssize_t i, j

    pur_prev = y0 * y0 + y1 * y1 + 2.0 * (y2 * y2 + y3 * y3)
    max_trace_dev = fabs(y0 + y1 - 1.0)
    min_det = y0 * y1 - y2 * y2 - y3 * y3
    max_rise = 0.0

    states[0, 0] = y0
    states[0, 1] = y1
    states[0, 2] = y2
    states[0, 3] = y3
    purity[0] = pur_prev

    with nogil:
        for i in range(n_intervals):
            for j in range(substeps):
                # stage 1
                k0 = -2.0 * c * y3
                k1 = 2.0 * c * y3
                k2 = -e * y3 - g * y2
                k3 = e * y2 + c * (y0 - y1) - g * y3
                s0 = k0; s1 = k1; s2 = k2; s3 = k3
                a0 = y0 + hh * k0; a1 = y1 + hh * k1
                a2 = y2 + hh * k2; a3 = y3 + hh * k3
                # stage 2
                k0 = -2.0 * c * a3
                k1 = 2.0 * c * a3
                k2 = -e * a3 - g * a2
                k3 = e * a2 + c * (a0 - a1) - g * a3
                s0 += 2.0 * k0; s1 += 2.0 * k1; s2 += 2.0 * k2; s3 += 2.0 * k3
                b0 = y0 + hh * k0; b1 = y1 + hh * k1
                b2 = y2 + hh * k2; b3 = y3 + hh * k3
                # stage 3
                k0 = -2.0 * c * b3
                k1 = 2.0 * c * b3
                k2 = -e * b3 - g * b2
                k3 = e * b2 + c * (b0 - b1) - g * b3
                s0 += 2.0 * k0; s1 += 2.0 * k1; s2 += 2.0 * k2; s3 += 2.0 * k3
                a0 = y0 + h * k0; a1 = y1 + h * k1
                a2 = y2 + h * k2; a3 = y3 + h * k3
                # stage 4
                k0 = -2.0 * c * a3
                k1 = 2.0 * c * a3
                k2 = -e * a3 - g * a2
                k3 = e * a2 + c * (a0 - a1) - g * a3
                y0 += h6 * (s0 + k0)
                y1 += h6 * (s1 + k1)
                y2 += h6 * (s2 + k2)
                y3 += h6 * (s3 + k3)

                trdev = fabs(y0 + y1 - 1.0)
                if trdev > max_trace_dev:
                    max_trace_dev = trdev
                det = y0 * y1 - y2 * y2 - y3 * y3
                if det < min_det:
                    min_det = det
                pur = y0 * y0 + y1 * y1 + 2.0 * (y2 * y2 + y3 * y3)
                if pur - pur_prev > max_rise:
                    max_rise = pur - pur_prev
                pur_prev = pur

            states[i + 1, 0] = y0
            states[i + 1, 1] = y1
            states[i + 1, 2] = y2
            states[i + 1, 3] = y3
            purity[i + 1] = pur_prev

    return states_arr, purity_arr, max_trace_dev, min_det, max_rise


cdef void _counting_rhs(double[:, ::1] y, double[:, ::1] out, Py_ssize_t m,
                        double c, double e, double d, double dp,
                        double half, double feed) nogil:
    cdef Py_ssize_t n
    cdef double p0, p1, re, im
    for n in range(m):
        p0 = y[n, 0]; p1 = y[n, 1]; re = y[n, 2]; im = y[n, 3]
        out[n, 0] = -dp * p0 - 2.0 * c * im
        out[n, 1] = -d * p1 + 2.0 * c * im
        out[n, 2] = -e * im - half * re
        out[n, 3] = e * re + c * (p0 - p1) - half * im
        if n > 0:
            # the n = 0 sector has no feeder below it
            out[n, 0] += dp * y[n - 1, 0]
            out[n, 1] += d * y[n - 1, 1]
            out[n, 2] += feed * y[n - 1, 2]
            out[n, 3] += feed * y[n - 1, 3]


def rk4_counting(y0, double c, double e, double d, double dp,
                 double h, Py_ssize_t n_intervals, Py_ssize_t substeps):
    """Propagate the count-resolved ladder, one (p02, p11, Re, Im) row per n.

    Returns an ``(n_intervals + 1, n_max + 1, 4)`` array of snapshots at
    the interval boundaries, starting with the initial state.
    """
    y_arr = np.array(y0, dtype=np.float64, copy=True, order="C")
    cdef Py_ssize_t m = y_arr.shape[0]
    snaps_arr = np.empty((n_intervals + 1, m, 4), dtype=np.float64)
    k_arr = np.empty((m, 4), dtype=np.float64)
    tmp_arr = np.empty((m, 4), dtype=np.float64)
    acc_arr = np.empty((m, 4), dtype=np.float64)

    cdef double[:, ::1] y = y_arr
    cdef double[:, :, ::1] snaps = snaps_arr
    cdef double[:, ::1] k = k_arr
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[:, ::1] acc = acc_arr

    cdef double half = 0.5 * (d + dp)
    cdef double feed = sqrt(d * dp)
    cdef double hh = 0.5 * h, h6 = h / 6.0
    cdef Py_ssize_t i, j, n, q

    for n in range(m):
        for q in range(4):
            snaps[0, n, q] = y[n, q]

    with nogil:
        for i in range(n_intervals):
            for j in range(substeps):
                _counting_rhs(y, k, m, c, e, d, dp, half, feed)  # stage 1
                for n in range(m):
                    for q in range(4):
                        acc[n, q] = k[n, q]
                        tmp[n, q] = y[n, q] + hh * k[n, q]
                _counting_rhs(tmp, k, m, c, e, d, dp, half, feed)  # stage 2
                for n in range(m):
                    for q in range(4):
                        acc[n, q] += 2.0 * k[n, q]
                        tmp[n, q] = y[n, q] + hh * k[n, q]
                _counting_rhs(tmp, k, m, c, e, d, dp, half, feed)  # stage 3
                for n in range(m):
                    for q in range(4):
                        acc[n, q] += 2.0 * k[n, q]
                        tmp[n, q] = y[n, q] + h * k[n, q]
                _counting_rhs(tmp, k, m, c, e, d, dp, half, feed)  # stage 4
                for n in range(m):
                    for q in range(4):
                        y[n, q] += h6 * (acc[n, q] + k[n, q])

            for n in range(m):
                for q in range(4):
                    snaps[i + 1, n, q] = y[n, q]

    return snaps_arr
