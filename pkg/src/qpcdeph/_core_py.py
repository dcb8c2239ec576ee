"""Pure-Python fallback for the integration kernels.

Same entry points and semantics as the compiled ``_core`` extension:
classical RK4 with identical stage arithmetic, recording and substep
diagnostics.  The reduced kernel runs on plain floats (a 4-dimensional
state is below the numpy break-even point); the ladder kernel is
vectorized over the count index.  Expect roughly one to two orders of
magnitude less throughput than the extension; ``benchmarks/`` measures
the gap.
"""

from __future__ import annotations

import numpy as np


def rk4_reduced(v0, c, e, g, h, n_intervals, substeps):
    y0, y1, y2, y3 = float(v0[0]), float(v0[1]), float(v0[2]), float(v0[3])
    states = np.empty((n_intervals + 1, 4))
    purity = np.empty(n_intervals + 1)
    hh = 0.5 * h
    h6 = h / 6.0

    pur_prev = y0 * y0 + y1 * y1 + 2.0 * (y2 * y2 + y3 * y3)
    max_trace_dev = abs(y0 + y1 - 1.0)
    min_det = y0 * y1 - y2 * y2 - y3 * y3
    max_rise = 0.0

    states[0] = (y0, y1, y2, y3)
    purity[0] = pur_prev

    for i in range(n_intervals):
        for _ in range(substeps):
            k0 = -2.0 * c * y3
            k1 = 2.0 * c * y3
            k2 = -e * y3 - g * y2
            k3 = e * y2 + c * (y0 - y1) - g * y3
            s0, s1, s2, s3 = k0, k1, k2, k3
            a0 = y0 + hh * k0
            a1 = y1 + hh * k1
            a2 = y2 + hh * k2
            a3 = y3 + hh * k3

            k0 = -2.0 * c * a3
            k1 = 2.0 * c * a3
            k2 = -e * a3 - g * a2
            k3 = e * a2 + c * (a0 - a1) - g * a3
            s0 += 2.0 * k0
            s1 += 2.0 * k1
            s2 += 2.0 * k2
            s3 += 2.0 * k3
            b0 = y0 + hh * k0
            b1 = y1 + hh * k1
            b2 = y2 + hh * k2
            b3 = y3 + hh * k3

            k0 = -2.0 * c * b3
            k1 = 2.0 * c * b3
            k2 = -e * b3 - g * b2
            k3 = e * b2 + c * (b0 - b1) - g * b3
            s0 += 2.0 * k0
            s1 += 2.0 * k1
            s2 += 2.0 * k2
            s3 += 2.0 * k3
            a0 = y0 + h * k0
            a1 = y1 + h * k1
            a2 = y2 + h * k2
            a3 = y3 + h * k3

            k0 = -2.0 * c * a3
            k1 = 2.0 * c * a3
            k2 = -e * a3 - g * a2
            k3 = e * a2 + c * (a0 - a1) - g * a3
            y0 += h6 * (s0 + k0)
            y1 += h6 * (s1 + k1)
            y2 += h6 * (s2 + k2)
            y3 += h6 * (s3 + k3)

            trdev = abs(y0 + y1 - 1.0)
            if trdev > max_trace_dev:
                max_trace_dev = trdev
            det = y0 * y1 - y2 * y2 - y3 * y3
            if det < min_det:
                min_det = det
            pur = y0 * y0 + y1 * y1 + 2.0 * (y2 * y2 + y3 * y3)
            if pur - pur_prev > max_rise:
                max_rise = pur - pur_prev
            pur_prev = pur

        states[i + 1] = (y0, y1, y2, y3)
        purity[i + 1] = pur_prev

    return states, purity, max_trace_dev, min_det, max_rise


def _counting_rhs(y, out, c, e, d, dp, half, feed):
    p0 = y[:, 0]
    p1 = y[:, 1]
    re = y[:, 2]
    im = y[:, 3]
    out[:, 0] = -dp * p0 - 2.0 * c * im
    out[:, 1] = -d * p1 + 2.0 * c * im
    out[:, 2] = -e * im - half * re
    out[:, 3] = e * re + c * (p0 - p1) - half * im
    # the n = 0 sector has no feeder below it
    out[1:, 0] += dp * p0[:-1]
    out[1:, 1] += d * p1[:-1]
    out[1:, 2] += feed * re[:-1]
    out[1:, 3] += feed * im[:-1]
    return out


def rk4_counting(y0, c, e, d, dp, h, n_intervals, substeps):
    y = np.array(y0, dtype=np.float64, copy=True, order="C")
    m = y.shape[0]
    snaps = np.empty((n_intervals + 1, m, 4))
    k = np.empty_like(y)
    half = 0.5 * (d + dp)
    feed = np.sqrt(d * dp)
    hh = 0.5 * h
    h6 = h / 6.0

    snaps[0] = y
    for i in range(n_intervals):
        for _ in range(substeps):
            _counting_rhs(y, k, c, e, d, dp, half, feed)
            acc = k.copy()
            _counting_rhs(y + hh * k, k, c, e, d, dp, half, feed)
            acc += 2.0 * k
            _counting_rhs(y + hh * k, k, c, e, d, dp, half, feed)
            acc += 2.0 * k
            _counting_rhs(y + h * k, k, c, e, d, dp, half, feed)
            acc += k
            y += h6 * acc
        snaps[i + 1] = y

    return snaps
