"""Finite-difference helpers used wherever no analytic derivative exists."""

import numpy as np

_STENCIL_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_STENCIL_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


def default_step(E):
    """Stencil step for energy derivatives: max(1e-5 |E|, 1e-9)."""
    return max(1e-5 * abs(E), 1e-9)


def stencil_nodes(x, h):
    return x + h * _STENCIL_OFFSETS


def five_point(values, h):
    """Central 5-point derivative from values at x-2h, x-h, x+h, x+2h."""
    return np.dot(_STENCIL_WEIGHTS, np.asarray(values)) / h


def five_point_derivative(f, x, h=None):
    if h is None:
        h = default_step(x)
    return five_point([f(xi) for xi in stencil_nodes(x, h)], h)


def fornberg_weights(x0, nodes, order=1):
    """Finite-difference weights for the ``order``-th derivative at ``x0``.

    Fornberg's recursion; works on arbitrary (non-uniform) node sets.
    """
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = nodes[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for m in range(mn, 0, -1):
                    c[i, m] = c1 * (m * c[i - 1, m - 1] - c5 * c[i - 1, m]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for m in range(mn, 0, -1):
                c[j, m] = (c4 * c[j, m] - m * c[j, m - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def sampled_derivative(x, y):
    """First derivative of sampled data using local 5-point stencils.

    Interior points use centred stencils, the two points at each end use
    one-sided ones. Needs at least 5 samples.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    n = len(x)
    if n < 5:
        raise ValueError("need at least 5 samples for a 5-point derivative")
    out = np.empty(n, dtype=np.result_type(y, float))
    for i in range(n):
        lo = min(max(i - 2, 0), n - 5)
        window = slice(lo, lo + 5)
        out[i] = np.dot(fornberg_weights(x[i], x[window]), y[window])
    return out
