"""Pure-Python reference implementation of the hot kernels.

Keeps the exact operation order of ``_native.pyx`` so both backends are
bitwise interchangeable.
"""

import numpy as np


def em_cartesian(y1, y2, beta, tpo, sigma, dt, dw):
    """Euler-Maruyama path of the Cartesian bistable-oscillator SDE.

    ``dw`` is an (n, 2) array of Gaussian increments already scaled by
    sqrt(dt); returns an (n+1, 2) array including the initial state.
    """
    n = dw.shape[0]
    out = np.empty((n + 1, 2))
    out[0, 0] = y1
    out[0, 1] = y2
    one_m_beta = 1.0 - beta
    for t in range(n):
        r2 = y1 * y1 + y2 * y2
        f1 = beta * y1 - tpo * y2 + one_m_beta * y1 * r2 - y1 * r2 * r2
        f2 = tpo * y1 + beta * y2 + one_m_beta * y2 * r2 - y2 * r2 * r2
        y1 = y1 + f1 * dt + sigma * dw[t, 0]
        y2 = y2 + f2 * dt + sigma * dw[t, 1]
        out[t + 1, 0] = y1
        out[t + 1, 1] = y2
    return out


def em_polar(R, theta, beta, tpo, sigma, dt, dw, r_floor):
    """Euler-Maruyama path of the polar-form SDE with reflection at ``r_floor``.

    Includes the sigma^2/(2R) Ito drift and the sigma/R phase noise gain;
    returns an (n+1, 2) array of (R, theta) including the initial state.
    """
    n = dw.shape[0]
    out = np.empty((n + 1, 2))
    out[0, 0] = R
    out[0, 1] = theta
    one_m_beta = 1.0 - beta
    sig2h = 0.5 * sigma * sigma
    for t in range(n):
        r3 = R * R * R
        fR = beta * R + one_m_beta * r3 - r3 * R * R + sig2h / R
        theta = theta + tpo * dt + (sigma / R) * dw[t, 1]
        R = R + fR * dt + sigma * dw[t, 0]
        if R < r_floor:
            R = r_floor + (r_floor - R)
            if R < r_floor:
                R = r_floor
        out[t + 1, 0] = R
        out[t + 1, 1] = theta
    return out


def em_cartesian_escape(y1, y2, beta, tpo, sigma, dt, dw, r_escape):
    """Integrate until the radius first drops below ``r_escape``.

    Returns ``(step, y1, y2)`` where ``step`` is the 1-based step index of
    the first crossing within this increment chunk, or -1 if no crossing
    occurred; the final state allows chunked continuation.
    """
    n = dw.shape[0]
    one_m_beta = 1.0 - beta
    r_esc2 = r_escape * r_escape
    for t in range(n):
        r2 = y1 * y1 + y2 * y2
        f1 = beta * y1 - tpo * y2 + one_m_beta * y1 * r2 - y1 * r2 * r2
        f2 = tpo * y1 + beta * y2 + one_m_beta * y2 * r2 - y2 * r2 * r2
        y1 = y1 + f1 * dt + sigma * dw[t, 0]
        y2 = y2 + f2 * dt + sigma * dw[t, 1]
        if y1 * y1 + y2 * y2 < r_esc2:
            return t + 1, y1, y2
    return -1, y1, y2


def surrogate_walk(cum, start, u):
    """Walk a chain given cumulative row distributions.

    ``cum`` is (n, m) with each row a nondecreasing cumulative
    distribution ending at ~1; ``u`` the uniform draws.  Returns the
    0-based state positions including the start.
    """
    steps = u.shape[0]
    m = cum.shape[1]
    out = np.empty(steps + 1, dtype=np.int64)
    out[0] = start
    i = int(start)
    for t in range(steps):
        j = int(np.searchsorted(cum[i], u[t], side="right"))
        if j > m - 1:
            j = m - 1
        i = j
        out[t + 1] = i
    return out


def backend_name():
    return "fallback"
