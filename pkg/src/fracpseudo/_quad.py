"""Small quadrature toolkit used by the density and sojourn routines."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_nodes(edges, n: int = 20):
    """Nodes and weights of an ``n``-point Gauss-Legendre rule on each panel."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) * 0.5 + half * x
    return nodes, half * w


def graded_edges(a: float, ratio: float = 0.125, levels: int = 16) -> np.ndarray:
    """Geometrically graded panel edges on ``[0, a]``, refined toward 0.

    Resolves algebraic behaviour such as ``xi**gamma`` at the origin.
    """
    inner = a * ratio ** np.arange(levels, 0, -1)
    return np.concatenate(([0.0], inner, [a]))


def log_trapezoid(f, lo: float, hi: float, step: float = 0.05) -> float:
    """``int_0^inf f(x) dx`` via the trapezoid rule in ``y = log x`` on ``[lo, hi]``.

    ``f`` must accept an array.  Algebraic behaviour at both ends becomes
    exponential decay in ``y``, where the trapezoid rule converges
    geometrically.
    """
    y = np.arange(lo, hi + 0.5 * step, step)
    x = np.exp(y)
    vals = np.asarray(f(x), dtype=float) * x
    return float(step * (vals.sum() - 0.5 * (vals[0] + vals[-1])))
