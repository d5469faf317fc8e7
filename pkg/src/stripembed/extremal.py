"""Extremal functions and Rayleigh quotients.

Functions are represented as finite sums of tensor products of one-dimensional
factors (:class:`SeparableFunction`). That covers the rectangle maximiser
``prod_i sin_p(pi_p (x_i - a_i)/(b_i - a_i))``, the strip trial family
``u_l``, their translates and sums, and polynomial bumps, and it lets
tensor-product quadrature evaluate integrands on full grids cheaply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .domain import StripDomain
from .errors import DomainError
from .ptrig import PExponent, as_exponent, sin_cos_p
from .quad import MAX_TENSOR_DIM, Rectangle, integrate_grid, tensor_rule, uniform_edges
from .quad import composite_rule, integrate_tensor

__all__ = [
    "AxisFactor",
    "BumpFactor",
    "ExtremalFunction",
    "RayleighReport",
    "SeparableFunction",
    "SinPFactor",
    "ULNormReport",
    "norm_integrals",
    "polynomial_bump",
    "rayleigh",
    "rectangle_maximizer",
    "strip_gap",
    "strip_trial",
    "ul_closed_forms",
    "verify_ul_norms",
]

DEFAULT_RESOLUTION = 32


class AxisFactor:
    """One-dimensional factor supported on the closed interval ``[lo, hi]``."""

    lo: float
    hi: float

    def evaluate(self, x):
        """Return ``(f(x), f'(x))``; both vanish outside ``[lo, hi]``."""
        x = np.asarray(x, dtype=float)
        f = np.zeros_like(x)
        df = np.zeros_like(x)
        inside = (x >= self.lo) & (x <= self.hi)
        if np.any(inside):
            f[inside], df[inside] = self._evaluate_inside(x[inside])
        return f, df

    def _evaluate_inside(self, x):
        raise NotImplementedError

    def edges(self, resolution: int) -> np.ndarray:
        """Cell edges over ``[lo, hi]`` with every kink on an edge."""
        raise NotImplementedError

    def shifted(self, s: float) -> "AxisFactor":
        raise NotImplementedError


@dataclass(frozen=True)
class SinPFactor(AxisFactor):
    """``sin_p(pi_p (x - origin) / scale)`` restricted to ``[lo, hi]``."""

    p: PExponent
    origin: float
    scale: float
    lo: float
    hi: float

    def _evaluate_inside(self, x):
        x = np.ascontiguousarray(x, dtype=float)
        return _sinp_factor_values(self, x.tobytes())

    def edges(self, resolution):
        # quarter periods: zeros and extrema of sin_p, where |.|^p has kinks
        quarter = 0.5 * self.scale
        j0 = math.ceil((self.lo - self.origin) / quarter - 1e-9)
        j1 = math.floor((self.hi - self.origin) / quarter + 1e-9)
        marks = self.origin + quarter * np.arange(j0, j1 + 1)
        marks = np.unique(np.concatenate([[self.lo], marks, [self.hi]]))
        marks = marks[(marks >= self.lo) & (marks <= self.hi)]
        marks = _merge_close(marks, 1e-12 * max(1.0, self.hi - self.lo))
        per_quarter = max(1, resolution // 2)
        pieces = []
        for a, b in zip(marks[:-1], marks[1:]):
            cells = max(1, round(per_quarter * (b - a) / quarter))
            pieces.append(np.linspace(a, b, cells + 1)[:-1])
        pieces.append([marks[-1]])
        return np.concatenate(pieces)

    def shifted(self, s):
        return SinPFactor(self.p, self.origin + s, self.scale, self.lo + s, self.hi + s)


@dataclass(frozen=True)
class BumpFactor(AxisFactor):
    """``(4 (x - lo)(hi - x) / (hi - lo)^2)^power``: 1 at the midpoint, 0 at the ends."""

    lo: float
    hi: float
    power: float = 2.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bump needs lo < hi, got ({self.lo}, {self.hi})")
        if self.power < 1.0:
            raise DomainError("bump power must be >= 1 for a W^{1,p} function")

    def _evaluate_inside(self, x):
        w2 = (self.hi - self.lo) ** 2
        q = 4.0 * (x - self.lo) * (self.hi - x) / w2
        dq = 4.0 * (self.hi + self.lo - 2.0 * x) / w2
        return q ** self.power, self.power * q ** (self.power - 1.0) * dq

    def edges(self, resolution):
        return uniform_edges(self.lo, self.hi, max(1, resolution))

    def shifted(self, s):
        return BumpFactor(self.lo + s, self.hi + s, self.power)


@lru_cache(maxsize=1024)
def _sinp_factor_values(factor: SinPFactor, raw: bytes):
    # quadrature grids are reused across many evaluations; inversion is the cost
    x = np.frombuffer(raw, dtype=float)
    k = factor.p.pi_p / factor.scale
    s, c = sin_cos_p(factor.p, k * (x - factor.origin))
    c = k * c
    s.flags.writeable = False
    c.flags.writeable = False
    return s, c


def _merge_close(marks, tol):
    keep = np.concatenate([[True], np.diff(marks) > tol])
    out = marks[keep]
    out[-1] = marks[-1]
    return out


def _unique_eval(factor: AxisFactor, axis: int, col, cache):
    # grids repeat coordinates heavily; evaluate each factor once per distinct value
    if ("u", axis) not in cache:
        cache["u", axis] = np.unique(col, return_inverse=True)
    key = (axis, id(factor))
    if key not in cache:
        uniq, inv = cache["u", axis]
        f, df = factor.evaluate(uniq)
        cache[key] = (f[inv].reshape(col.shape), df[inv].reshape(col.shape))
    return cache[key]


class SeparableFunction:
    """``sum_t coef_t * prod_axis factor_{t,axis}(x_axis)``.

    Parameters
    ----------
    terms : sequence of (float, sequence of AxisFactor)
    """

    def __init__(self, terms):
        terms = tuple((float(c), tuple(fs)) for c, fs in terms)
        if not terms:
            raise DomainError("a separable function needs at least one term")
        ndim = len(terms[0][1])
        if any(len(fs) != ndim for _, fs in terms):
            raise DomainError("all terms must have the same number of factors")
        self.terms = terms
        self.ndim = ndim

    # -- algebra -----------------------------------------------------------
    def scaled(self, c: float) -> "SeparableFunction":
        return SeparableFunction([(c * a, fs) for a, fs in self.terms])

    def translated(self, offsets) -> "SeparableFunction":
        offsets = np.broadcast_to(np.asarray(offsets, dtype=float), (self.ndim,))
        return SeparableFunction(
            [(a, tuple(f.shifted(s) for f, s in zip(fs, offsets))) for a, fs in self.terms]
        )

    def __add__(self, other):
        if not isinstance(other, SeparableFunction):
            return NotImplemented
        if other.ndim != self.ndim:
            raise DomainError("dimension mismatch")
        return SeparableFunction(self.terms + other.terms)

    def __sub__(self, other):
        if not isinstance(other, SeparableFunction):
            return NotImplemented
        return self + other.scaled(-1.0)

    def __mul__(self, c):
        return self.scaled(c)

    __rmul__ = __mul__

    # -- geometry ----------------------------------------------------------
    def term_boxes(self) -> list:
        return [Rectangle(tuple((f.lo, f.hi) for f in fs)) for _, fs in self.terms]

    @property
    def bounding_box(self) -> Rectangle:
        lo = np.min([b.lower for b in self.term_boxes()], axis=0)
        hi = np.max([b.upper for b in self.term_boxes()], axis=0)
        return Rectangle(tuple(zip(lo, hi)))

    def edges(self, axis: int, lo: float, hi: float, resolution: int) -> np.ndarray:
        """Cell edges on ``[lo, hi]`` merging the kinks of every term."""
        parts = [[lo, hi]]
        for _, fs in self.terms:
            f = fs[axis]
            if f.hi <= lo or f.lo >= hi:
                continue
            e = f.edges(resolution)
            parts.append(e[(e > lo) & (e < hi)])
        marks = np.unique(np.concatenate(parts))
        return _merge_close(marks, 1e-12 * max(1.0, hi - lo))

    # -- evaluation --------------------------------------------------------
    def __call__(self, points):
        return self._pointwise(points, gradient=False)

    def gradient(self, points):
        """Analytic gradient, shape ``(..., n)``."""
        return self._pointwise(points, gradient=True)

    def _pointwise(self, points, gradient):
        x = np.asarray(points, dtype=float)
        if x.shape[-1] != self.ndim:
            raise DomainError(f"expected points with last axis {self.ndim}, got {x.shape}")
        cols = [np.array(x[..., i]) for i in range(self.ndim)]
        cache = {}
        out = np.zeros(x.shape if gradient else x.shape[:-1])
        for c, fs in self.terms:
            vals = [_unique_eval(f, i, col, cache) for i, (f, col) in enumerate(zip(fs, cols))]
            if not gradient:
                out += c * np.prod([v[0] for v in vals], axis=0)
                continue
            for i in range(self.ndim):
                prod = vals[i][1]
                for j in range(self.ndim):
                    if j != i:
                        prod = prod * vals[j][0]
                out[..., i] += c * prod
        return out

    def on_grid(self, axes: Sequence[np.ndarray]):
        """Values and gradient components on the tensor grid ``axes``.

        Returns
        -------
        values : ndarray, shape ``tuple(len(a) for a in axes)``
        grads : list of ndarray, one per axis
        """
        if len(axes) != self.ndim:
            raise DomainError("need one node array per axis")
        coef = np.array([c for c, _ in self.terms])
        tables = []
        for i, x in enumerate(axes):
            seen = {}
            for _, fs in self.terms:
                if fs[i] not in seen:
                    seen[fs[i]] = fs[i].evaluate(x)
            pairs = [seen[fs[i]] for _, fs in self.terms]
            tables.append((np.stack([f for f, _ in pairs], axis=1),
                           np.stack([d for _, d in pairs], axis=1)))
        # drop terms that vanish on the whole grid along some axis
        live = np.ones(coef.size, dtype=bool)
        for f, d in tables:
            live &= np.any(f != 0, axis=0) | np.any(d != 0, axis=0)
        if not live.all():
            coef = coef[live]
            tables = [(f[:, live], d[:, live]) for f, d in tables]
        letters = "abcd"[: self.ndim]
        subs = "t," + ",".join(f"{a}t" for a in letters) + "->" + letters
        values = np.einsum(subs, coef, *[t[0] for t in tables], optimize=True)
        grads = []
        for i in range(self.ndim):
            ops = [tables[j][1] if j == i else tables[j][0] for j in range(self.ndim)]
            grads.append(np.einsum(subs, coef, *ops, optimize=True))
        return values, grads


class ExtremalFunction(SeparableFunction):
    """Product of scaled ``sin_p`` factors on ``support_box``, zero outside.

    Attributes
    ----------
    p : PExponent
    support_box : Rectangle
    shifts : tuple of float
        Accumulated translation per axis.
    amplitude : float
    """

    def __init__(self, p, factors, amplitude=1.0, shifts=None):
        super().__init__([(amplitude, factors)])
        self.p = as_exponent(p)
        self.factors = tuple(factors)
        self.amplitude = float(amplitude)
        self.shifts = tuple(float(s) for s in (shifts if shifts is not None else [0.0] * len(factors)))
        self.support_box = Rectangle(tuple((f.lo, f.hi) for f in self.factors))

    def scaled(self, c):
        return ExtremalFunction(self.p, self.factors, c * self.amplitude, self.shifts)

    def translated(self, offsets):
        offsets = np.broadcast_to(np.asarray(offsets, dtype=float), (self.ndim,))
        factors = tuple(f.shifted(s) for f, s in zip(self.factors, offsets))
        shifts = tuple(a + s for a, s in zip(self.shifts, offsets))
        return ExtremalFunction(self.p, factors, self.amplitude, shifts)

    def __repr__(self):
        return (f"ExtremalFunction(p={self.p.p}, support={self.support_box.intervals}, "
                f"amplitude={self.amplitude}, shifts={self.shifts})")


def rectangle_maximizer(p, r: Rectangle) -> ExtremalFunction:
    """``prod_i sin_p(pi_p (x_i - a_i)/(b_i - a_i))`` on ``r``, zero outside."""
    pe = as_exponent(p)
    factors = [SinPFactor(pe, a, b - a, a, b) for a, b in r.intervals]
    return ExtremalFunction(pe, factors)


def strip_trial(p, d: StripDomain, l: float) -> ExtremalFunction:
    """The trial function ``u_l`` on ``D_l = (-l, l)^k x prod_i (a_i, b_i)``.

    Free-axis factors are ``sin_p(pi_p x_j / l)`` exactly as written, so they
    also vanish on the hyperplanes ``x_j = 0``.
    """
    pe = as_exponent(p)
    if d.k < 1:
        raise DomainError("strip_trial needs at least one unbounded axis")
    if not l > 0:
        raise DomainError(f"l must be positive, got {l!r}")
    free = [SinPFactor(pe, 0.0, float(l), -float(l), float(l)) for _ in range(d.k)]
    bounded = [SinPFactor(pe, a, b - a, a, b) for a, b in d.intervals]
    return ExtremalFunction(pe, free + bounded)


def polynomial_bump(box: Rectangle, power: float = 2.0) -> SeparableFunction:
    """Tensor product of :class:`BumpFactor` on every side of ``box``."""
    return SeparableFunction([(1.0, [BumpFactor(a, b, power) for a, b in box.intervals])])


@dataclass(frozen=True)
class RayleighReport:
    """Quadrature values of ``|| |grad u|_{l^p} ||_p^p`` and ``||u||_p^p``."""

    grad_norm_p: float
    func_norm_p: float
    quotient: float
    quad_error: float


def norm_integrals(u: SeparableFunction, box: Rectangle, p: float, resolution: int):
    """Quadrature ``(|| |grad u|_{l^p} ||_p^p, ||u||_p^p)`` over ``box``."""
    if box.ndim != u.ndim:
        raise DomainError("box and function dimensions differ")
    edges = [u.edges(i, a, b, resolution) for i, (a, b) in enumerate(box.intervals)]
    if len(u.terms) == 1:
        # a single product: the tensor rule factorises into 1-D sums
        c, fs = u.terms[0]
        func_1d, grad_1d = [], []
        for f, e in zip(fs, edges):
            x, w = composite_rule(e)
            v, dv = f.evaluate(x)
            func_1d.append(float(w @ np.abs(v) ** p))
            grad_1d.append(float(w @ np.abs(dv) ** p))
        scale = abs(c) ** p
        func = scale * math.prod(func_1d)
        grad = scale * math.fsum(
            grad_1d[i] * math.prod(func_1d[:i] + func_1d[i + 1:]) for i in range(u.ndim)
        )
        return grad, func
    if box.ndim > MAX_TENSOR_DIM:
        raise DomainError(f"quadrature verification is capped at {MAX_TENSOR_DIM} dimensions")
    xs, ws = tensor_rule(edges)
    values, grads = u.on_grid(xs)
    func = integrate_grid(np.abs(values) ** p, ws)
    grad = integrate_grid(sum(np.abs(g) ** p for g in grads), ws)
    return grad, func


def _fd_gradient(f: Callable, points: np.ndarray, h: float) -> np.ndarray:
    out = np.empty(points.shape)
    for i in range(points.shape[-1]):
        e = np.zeros(points.shape[-1])
        e[i] = h
        out[..., i] = (f(points + e) - f(points - e)) / (2.0 * h)
    return out


def _generic_integrals(u, box, p, resolution, gradient):
    if gradient is None:
        h = 1e-5 * float(np.min(box.widths))
        gradient = lambda x: _fd_gradient(u, x, h)  # noqa: E731
    func = integrate_tensor(lambda x: np.abs(u(x)) ** p, box, resolution)
    grad = integrate_tensor(lambda x: np.sum(np.abs(gradient(x)) ** p, axis=-1), box, resolution)
    return grad, func


def rayleigh(u, box: Rectangle, p, resolution: int = DEFAULT_RESOLUTION, gradient=None) -> RayleighReport:
    """Rayleigh quotient ``|| |grad u|_{l^p} ||_p^p / ||u||_p^p`` over ``box``.

    Separable functions (including every :class:`ExtremalFunction`) use the
    analytic gradient and cells aligned with the kinks of their factors,
    ``resolution`` cells per half-period. Any other vectorised callable is
    integrated on ``resolution`` equal cells per axis, with ``gradient`` (or
    ``u.gradient`` if present) or else central differences of step
    ``1e-5 * min(box.widths)``.

    ``quad_error`` is the change in the quotient between ``resolution // 2``
    and ``resolution``.
    """
    pe = as_exponent(p)
    if resolution < 8:
        raise DomainError(f"resolution must be >= 8, got {resolution}")

    def quotient(res):
        if isinstance(u, SeparableFunction):
            return norm_integrals(u, box, pe.p, res)
        grad_fn = gradient if gradient is not None else getattr(u, "gradient", None)
        return _generic_integrals(u, box, pe.p, res, grad_fn)

    grad, func = quotient(resolution)
    if not func > 0:
        raise DomainError("the function vanishes on the integration box")
    g2, f2 = quotient(resolution // 2)
    q = grad / func
    return RayleighReport(grad, func, q, abs(q - g2 / f2))


def ul_closed_forms(p, d: StripDomain, l: float):
    """Exact ``(||u_l||_p^p, || |grad u_l|_{l^p} ||_p^p)``."""
    pe = as_exponent(p)
    P, k, m = pe.p, d.k, len(d.intervals)
    prod_w = math.prod(d.widths)
    func = (2.0 * l / P) ** k * math.prod(w / P for w in d.widths)
    grad = (pe.pi_p ** P / (pe.p_conj * P ** (m - 1)) * (2.0 * l / P) ** k * prod_w
            * (k / l ** P + math.fsum(w ** -P for w in d.widths)))
    return func, grad


@dataclass(frozen=True)
class ULNormReport:
    quad_func: float
    quad_grad: float
    closed_func: float
    closed_grad: float
    func_diff: float
    grad_diff: float
    quotient: float
    closed_quotient: float
    quad_error: float


def verify_ul_norms(p, d: StripDomain, l: float, resolution: int = DEFAULT_RESOLUTION) -> ULNormReport:
    """Compare quadrature norms of ``u_l`` with their closed forms."""
    pe = as_exponent(p)
    u = strip_trial(pe, d, l)
    rep = rayleigh(u, d.truncated(l), pe, resolution)
    func, grad = ul_closed_forms(pe, d, l)
    return ULNormReport(
        quad_func=rep.func_norm_p,
        quad_grad=rep.grad_norm_p,
        closed_func=func,
        closed_grad=grad,
        func_diff=abs(rep.func_norm_p - func),
        grad_diff=abs(rep.grad_norm_p - grad),
        quotient=rep.quotient,
        closed_quotient=grad / func,
        quad_error=rep.quad_error,
    )


def strip_gap(p, d: StripDomain, l: float) -> float:
    """``pi_p**p (p - 1) k / l**p``: excess of the ``u_l`` quotient over ``lambda``."""
    pe = as_exponent(p)
    return pe.pi_p ** pe.p * (pe.p - 1.0) * d.k / l ** pe.p
