"""Quadrature on intervals and axis-aligned boxes.

Two families of rules live here:

* composite Gauss-Legendre rules, used for ``L^p`` norms of smooth or
  piecewise smooth functions on rectangles (cell edges can be supplied so that
  kinks of the integrand sit on cell boundaries);
* a truncated tanh-sinh (double exponential) rule for integrands with
  integrable endpoint singularities, returned in a form that exposes the
  distance of every node to both endpoints so that callers can evaluate
  singular factors without cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "MAX_TENSOR_DIM",
    "QuadratureRule",
    "QuadResult",
    "Rectangle",
    "TanhSinhRule",
    "composite_rule",
    "default_rule",
    "estimate_1d",
    "estimate_tensor",
    "integrate_1d",
    "integrate_grid",
    "integrate_tensor",
    "tanh_sinh_rule",
    "tensor_rule",
    "uniform_edges",
]

MAX_TENSOR_DIM = 4

# points evaluated per call of a user integrand in integrate_tensor
_CHUNK = 1 << 18


@dataclass(frozen=True)
class QuadratureRule:
    """Reference rule on ``[-1, 1]``.

    Attributes
    ----------
    nodes, weights : ndarray
        Abscissae and (positive) weights; weights sum to 2.
    order : int
        Degree of polynomial exactness per cell.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise DomainError("nodes and weights must be 1-D arrays of equal length")
        if np.any(np.abs(nodes) > 1.0):
            raise DomainError("reference nodes must lie in [-1, 1]")
        if np.any(weights <= 0.0):
            raise DomainError("weights must be positive")
        if abs(weights.sum() - 2.0) > 1e-12:
            raise DomainError(f"weights sum to {weights.sum()!r}, expected 2")
        if int(self.order) < 1:
            raise DomainError("order must be at least 1")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "order", int(self.order))

    def __len__(self):
        return self.nodes.size

    @classmethod
    def gauss_legendre(cls, npoints: int = 16) -> "QuadratureRule":
        """Gauss-Legendre rule with ``npoints`` nodes (exact to degree ``2n-1``)."""
        if npoints < 1:
            raise DomainError(f"npoints must be >= 1, got {npoints}")
        x, w = np.polynomial.legendre.leggauss(npoints)
        return cls(x, w, 2 * npoints - 1)


@lru_cache(maxsize=None)
def default_rule() -> QuadratureRule:
    """The 16-point Gauss-Legendre rule used throughout the package."""
    return QuadratureRule.gauss_legendre(16)


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned open box ``prod_i (a_i, b_i)``."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        if not ivs:
            raise DomainError("a rectangle needs at least one interval")
        for a, b in ivs:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise DomainError(f"interval ({a}, {b}) is not finite")
            if not a < b:
                raise DomainError(f"interval ({a}, {b}) is empty")
        object.__setattr__(self, "intervals", ivs)

    @property
    def ndim(self) -> int:
        return len(self.intervals)

    @property
    def lower(self) -> np.ndarray:
        return np.array([a for a, _ in self.intervals])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b for _, b in self.intervals])

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def volume(self) -> float:
        return float(np.prod(self.widths))

    def shifted(self, offsets) -> "Rectangle":
        offsets = np.broadcast_to(np.asarray(offsets, dtype=float), (self.ndim,))
        return Rectangle(tuple((a + s, b + s) for (a, b), s in zip(self.intervals, offsets)))

    def intersect(self, other: "Rectangle") -> "Rectangle | None":
        """Intersection of two boxes, or ``None`` if it has empty interior."""
        if other.ndim != self.ndim:
            raise DomainError("dimension mismatch")
        ivs = []
        for (a, b), (c, d) in zip(self.intervals, other.intervals):
            lo, hi = max(a, c), min(b, d)
            if not lo < hi:
                return None
            ivs.append((lo, hi))
        return Rectangle(tuple(ivs))

    def contains(self, points) -> np.ndarray:
        """Boolean mask of the points (shape ``(..., n)``) in the closed box."""
        x = np.asarray(points, dtype=float)
        return np.all((x >= self.lower) & (x <= self.upper), axis=-1)


class QuadResult(NamedTuple):
    value: float
    error: float


def uniform_edges(a: float, b: float, cells: int) -> np.ndarray:
    """Edges of ``cells`` equal subintervals of ``[a, b]``."""
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    if cells < 1:
        raise DomainError(f"cells must be >= 1, got {cells}")
    return np.linspace(a, b, int(cells) + 1)


def composite_rule(edges, rule: QuadratureRule | None = None):
    """Nodes and weights of ``rule`` applied on every cell between ``edges``.

    Returns
    -------
    x, w : ndarray
        Flattened nodes and weights, cell by cell in increasing order.
    """
    rule = rule or default_rule()
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise DomainError("edges must be a strictly increasing sequence of length >= 2")
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    x = (mid + half * rule.nodes).ravel()
    w = (half * rule.weights).ravel()
    return x, w


def integrate_1d(
    f: Callable,
    a: float,
    b: float,
    cells: int = 1,
    rule: QuadratureRule | None = None,
) -> float:
    """Composite quadrature of a vectorised ``f`` over ``[a, b]``."""
    x, w = composite_rule(uniform_edges(a, b, cells), rule)
    return float(np.dot(w, np.asarray(f(x), dtype=float)))


def estimate_1d(f, a, b, cells=1, rule=None) -> QuadResult:
    """:func:`integrate_1d` with ``2*cells`` plus a one-step refinement error."""
    coarse = integrate_1d(f, a, b, cells, rule)
    fine = integrate_1d(f, a, b, 2 * cells, rule)
    return QuadResult(fine, abs(fine - coarse))


def tensor_rule(edges_per_axis: Sequence, rule: QuadratureRule | None = None):
    """Per-axis composite nodes and weights for a tensor-product rule."""
    if len(edges_per_axis) > MAX_TENSOR_DIM:
        raise DimensionError(
            f"tensor quadrature supports at most {MAX_TENSOR_DIM} dimensions, "
            f"got {len(edges_per_axis)}"
        )
    pairs = [composite_rule(e, rule) for e in edges_per_axis]
    return [x for x, _ in pairs], [w for _, w in pairs]


def integrate_grid(values, weights_per_axis) -> float:
    """Contract an array of tensor-grid samples against per-axis weights."""
    values = np.asarray(values, dtype=float)
    for w in reversed(weights_per_axis):
        values = values @ w
    return float(values)


def _edges_for_box(box: Rectangle, cells_per_axis, edges):
    if edges is not None:
        if len(edges) != box.ndim:
            raise DomainError("need one edge array per axis")
        return [np.asarray(e, dtype=float) for e in edges]
    cells = np.broadcast_to(np.asarray(cells_per_axis), (box.ndim,))
    return [uniform_edges(a, b, int(c)) for (a, b), c in zip(box.intervals, cells)]


def integrate_tensor(
    f: Callable,
    box: Rectangle,
    cells_per_axis=1,
    rule: QuadratureRule | None = None,
    edges=None,
) -> float:
    """Tensor-product composite quadrature of ``f`` over ``box``.

    Parameters
    ----------
    f : callable
        Vectorised integrand taking points of shape ``(..., n)``.
    box : Rectangle
    cells_per_axis : int or sequence of int
        Equal cells per axis; ignored when ``edges`` is given.
    rule : QuadratureRule, optional
        Reference rule; defaults to 16-point Gauss-Legendre.
    edges : sequence of arrays, optional
        Explicit cell edges per axis (e.g. aligned with kinks of ``f``).
    """
    if box.ndim > MAX_TENSOR_DIM:
        raise DimensionError(
            f"tensor quadrature supports at most {MAX_TENSOR_DIM} dimensions, got {box.ndim}"
        )
    xs, ws = tensor_rule(_edges_for_box(box, cells_per_axis, edges), rule)
    # chunk along the first axis so large grids never materialise at once
    rest = int(np.prod([x.size for x in xs[1:]])) if box.ndim > 1 else 1
    step = max(1, _CHUNK // max(rest, 1))
    total = 0.0
    for start in range(0, xs[0].size, step):
        sub = [xs[0][start:start + step]] + xs[1:]
        grid = np.stack(np.meshgrid(*sub, indexing="ij"), axis=-1)
        vals = np.asarray(f(grid), dtype=float)
        total += integrate_grid(vals, [ws[0][start:start + step]] + ws[1:])
    return total


def estimate_tensor(f, box, cells_per_axis=1, rule=None) -> QuadResult:
    """:func:`integrate_tensor` at doubled cells with a refinement error estimate."""
    cells = np.broadcast_to(np.asarray(cells_per_axis), (box.ndim,))
    coarse = integrate_tensor(f, box, cells, rule)
    fine = integrate_tensor(f, box, 2 * cells, rule)
    return QuadResult(fine, abs(fine - coarse))


@dataclass(frozen=True)
class TanhSinhRule:
    """Truncated tanh-sinh rule on the unit interval ``[0, 1]``.

    ``left[k]`` and ``right[k]`` are the distances of node ``k`` to ``0`` and
    ``1``; both are computed directly so neither suffers cancellation near its
    endpoint. Nodes whose distance to either end underflows are dropped.
    """

    left: np.ndarray
    right: np.ndarray
    weights: np.ndarray
    step: float


@lru_cache(maxsize=32)
def tanh_sinh_rule(step: float = 1.0 / 16, tmax: float = 6.0) -> TanhSinhRule:
    """Tanh-sinh rule with trapezoid step ``step`` on ``|t| <= tmax``.

    With ``tmax = 6`` the smallest endpoint distance is about ``1e-275``, so
    singularities as strong as ``s**-0.9`` are resolved to double precision.
    """
    if step <= 0 or tmax <= 0:
        raise DomainError("step and tmax must be positive")
    kmax = int(math.floor(tmax / step))
    t = step * np.arange(-kmax, kmax + 1)
    z = 0.5 * np.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(z))
    near = e / (1.0 + e)
    far = 1.0 / (1.0 + e)
    left = np.where(z < 0, near, far)
    right = np.where(z < 0, far, near)
    # d/dt of (1 + tanh z)/2 is (pi/4) cosh t sech^2 z; sech^2 z = 4e/(1+e)^2
    weights = step * 0.25 * np.pi * np.cosh(t) * 4.0 * e / (1.0 + e) ** 2
    keep = (left > 0) & (right > 0)
    arrays = [a[keep] for a in (left, right, weights)]
    for a in arrays:
        a.flags.writeable = False
    return TanhSinhRule(*arrays, step)
