"""Finite witnesses for the noncompactness of ``W_0^{1,p}(D) -> L^p(D)``.

Two constructions on a strip ``D = R^k x prod_i (a_i, b_i)``:

* translates ``u_1, ..., u_m`` of a normalised trial function with disjoint
  supports give operators ``B: l^p_m -> W_0^{1,p}(D)`` and
  ``A: L^p(D) -> l^p_m`` with ``A I B = id``, ``||B|| = 1`` and
  ``||A|| <= 1/||u||_p``; hence the isomorphism number ``i_m`` of the
  embedding is at least ``||u||_p``;
* a translate pushed past the supports of finitely many candidate centres is
  a unit-ball element at distance at least ``||u||_p`` from all of them, so
  no such net of smaller radius covers the image of the unit ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .domain import StripDomain
from .errors import CertificationError, DomainError, PreconditionError, RefutationError
from .extremal import (
    ExtremalFunction,
    SeparableFunction,
    norm_integrals,
    polynomial_bump,
    strip_trial,
)
from .ptrig import PExponent, as_exponent
from .quad import Rectangle, integrate_grid, tensor_rule, uniform_edges

__all__ = [
    "MAX_TRANSLATES",
    "NetCandidate",
    "NetCenter",
    "OperatorCertificate",
    "Refutation",
    "TranslateSystem",
    "a_operator",
    "b_operator",
    "build_translates",
    "certify_isomorphism_bound",
    "lp_norm",
    "random_net",
    "refute_net",
    "sobolev_norm",
]

MAX_TRANSLATES = 64
DEFAULT_RESOLUTION = 16
# cells per half-period for the certificate grids; sin_p factors are smooth per cell
CERT_RESOLUTION = 8


@dataclass(frozen=True)
class TranslateSystem:
    """Normalised base function and its ``m`` disjointly supported translates.

    Translate ``i`` (0-based) is the base shifted by ``2 i l`` along every
    free axis and lives on ``((2i - 1) l, (2i + 1) l)^k x prod (a_j, b_j)``.
    """

    p: PExponent
    d: StripDomain
    base: ExtremalFunction
    m: int
    l: float
    resolution: int
    base_lp_p: float
    translates: tuple = field(repr=False)
    boxes: tuple = field(repr=False)

    @property
    def base_lp_norm(self) -> float:
        return self.base_lp_p ** (1.0 / self.p.p)


def _offset(d: StripDomain, t: float) -> np.ndarray:
    return np.array([t] * d.k + [0.0] * len(d.intervals))


def build_translates(p, d: StripDomain, l: float, m: int,
                     resolution: int = DEFAULT_RESOLUTION) -> TranslateSystem:
    """Normalise ``u_l`` in ``W^{1,p}`` by quadrature and translate it ``m`` times."""
    pe = as_exponent(p)
    if d.k < 1:
        raise DomainError("translates need at least one unbounded axis")
    if not 1 <= int(m) <= MAX_TRANSLATES:
        raise DomainError(f"m must lie in [1, {MAX_TRANSLATES}], got {m}")
    u = strip_trial(pe, d, l)
    grad, func = norm_integrals(u, d.truncated(l), pe.p, resolution)
    c = (func + grad) ** (-1.0 / pe.p)
    base = u.scaled(c)
    translates = tuple(base.translated(_offset(d, 2.0 * i * l)) for i in range(int(m)))
    boxes = tuple(t.support_box for t in translates)
    return TranslateSystem(pe, d, base, int(m), float(l), int(resolution),
                           c ** pe.p * func, translates, boxes)


def b_operator(ts: TranslateSystem, alpha) -> SeparableFunction:
    """``B alpha = sum_i alpha_i u_i``."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (ts.m,):
        raise DomainError(f"alpha must have length {ts.m}, got shape {alpha.shape}")
    return SeparableFunction(
        [(a * t.amplitude, t.factors) for a, t in zip(alpha, ts.translates)]
    )


def _grid_values(v, xs):
    if isinstance(v, SeparableFunction):
        return v.on_grid(xs)[0]
    return np.asarray(v(np.stack(np.meshgrid(*xs, indexing="ij"), axis=-1)), dtype=float)


def _box_edges(box: Rectangle, funcs, resolution):
    """Cell edges on ``box`` honouring the kinks of every separable function given."""
    edges = []
    for axis, (a, b) in enumerate(box.intervals):
        parts = [uniform_edges(a, b, 1)]
        sep = [f for f in funcs if isinstance(f, SeparableFunction)]
        parts += [f.edges(axis, a, b, resolution) for f in sep]
        if len(sep) < len(funcs):
            parts.append(uniform_edges(a, b, resolution))
        marks = np.unique(np.concatenate(parts))
        keep = np.concatenate([[True], np.diff(marks) > 1e-12 * max(1.0, b - a)])
        marks = marks[keep]
        marks[-1] = b
        edges.append(marks)
    return edges


def lp_norm(v, boxes: Sequence[Rectangle], p, resolution: int = DEFAULT_RESOLUTION) -> float:
    """``||v||_p`` by quadrature over disjoint ``boxes`` covering the support of ``v``."""
    pe = as_exponent(p)
    total = 0.0
    for box in boxes:
        xs, ws = tensor_rule(_box_edges(box, [v], resolution))
        total += integrate_grid(np.abs(_grid_values(v, xs)) ** pe.p, ws)
    return total ** (1.0 / pe.p)


def sobolev_norm(v: SeparableFunction, boxes: Sequence[Rectangle], p,
                 resolution: int = DEFAULT_RESOLUTION) -> float:
    """``(||v||_p^p + || |grad v|_{l^p} ||_p^p)^(1/p)`` over disjoint ``boxes``."""
    pe = as_exponent(p)
    total = 0.0
    for box in boxes:
        xs, ws = tensor_rule(_box_edges(box, [v], resolution))
        values, grads = v.on_grid(xs)
        dens = np.abs(values) ** pe.p + sum(np.abs(g) ** pe.p for g in grads)
        total += integrate_grid(dens, ws)
    return total ** (1.0 / pe.p)


def _dual_weight(u_vals, p):
    # |u|^(p-2) u, defined as 0 where u = 0
    return np.sign(u_vals) * np.abs(u_vals) ** (p - 1.0)


def a_operator(ts: TranslateSystem, v, resolution: int | None = None) -> np.ndarray:
    """``(A v)_i = int_{D^i} v |u_i|^(p-2) u_i / ||u_i||_p^p``.

    This is the norming functional of ``u_i`` applied to ``v`` restricted to
    the support box of ``u_i``; it equals ``beta_i`` on ``sum_j beta_j u_j``
    and has norm ``1/||u_i||_p``.
    """
    res = resolution or ts.resolution
    p = ts.p.p
    out = np.empty(ts.m)
    for i, (ui, box) in enumerate(zip(ts.translates, ts.boxes)):
        xs, ws = tensor_rule(_box_edges(box, [ui, v], res))
        u_vals = ui.on_grid(xs)[0]
        norm_p = integrate_grid(np.abs(u_vals) ** p, ws)
        out[i] = integrate_grid(_grid_values(v, xs) * _dual_weight(u_vals, p), ws) / norm_p
    return out


@dataclass(frozen=True)
class OperatorCertificate:
    """Largest deviations observed over the random trials.

    ``lower_bound`` is ``||u||_p`` of the normalised base and is a valid lower
    bound for the ``m``-th isomorphism number when every deviation is within
    ``tol``.
    """

    b_isometry_dev: float
    a_bound_dev: float
    aib_identity_dev: float
    lower_bound: float
    disjointness_dev: float
    m: int
    trials: int
    tol: float

    @property
    def valid(self) -> bool:
        return max(self.b_isometry_dev, self.a_bound_dev, self.aib_identity_dev,
                   self.disjointness_dev) <= self.tol


class _BoxGrids:
    """Quadrature grids of every translate box, with factor tables of all translates.

    Evaluating ``sum_i c_i u_i`` on a grid then costs one contraction per
    component, which keeps hundreds of trials cheap.
    """

    def __init__(self, ts: TranslateSystem, resolution: int):
        self.p = ts.p.p
        self.grids = []
        for box, ui in zip(ts.boxes, ts.translates):
            xs, ws = tensor_rule(_box_edges(box, [ui], resolution))
            # translates whose support box meets this one (neighbours touch on a face)
            live = np.array([np.all(t.support_box.lower <= box.upper)
                             and np.all(t.support_box.upper >= box.lower)
                             for t in ts.translates])
            tables = []
            for axis, x in enumerate(xs):
                pairs = [t.factors[axis].evaluate(x) for t, on in zip(ts.translates, live) if on]
                tables.append((np.stack([f for f, _ in pairs], axis=1),
                               np.stack([df for _, df in pairs], axis=1)))
            self.grids.append((xs, ws, tables, live))
        self.amplitudes = np.array([t.amplitude for t in ts.translates])
        letters = "abcd"[: ts.d.n]
        self.subs = "t," + ",".join(f"{a}t" for a in letters) + "->" + letters

    def evaluate(self, j: int, coef, derivative_axis=None):
        _, _, tables, live = self.grids[j]
        ops = [tab[1] if axis == derivative_axis else tab[0] for axis, tab in enumerate(tables)]
        return np.einsum(self.subs, np.asarray(coef)[live], *ops, optimize=True)

    def combination(self, alpha):
        """Per-box values and gradient components of ``B alpha``."""
        coef = np.asarray(alpha) * self.amplitudes
        out = []
        for j, (xs, _, _, _) in enumerate(self.grids):
            vals = self.evaluate(j, coef)
            grads = [self.evaluate(j, coef, axis) for axis in range(len(xs))]
            out.append((vals, grads))
        return out


def _random_test_function(ts: TranslateSystem, rng: np.random.Generator) -> SeparableFunction:
    """Random ``L^p`` function supported in the union of the translate boxes."""
    kind = rng.integers(3)
    terms = []
    if kind != 1:
        beta = rng.standard_normal(ts.m)
        terms += [(b * t.amplitude, t.factors) for b, t in zip(beta, ts.translates)]
    if kind != 0:
        for box in ts.boxes:
            if rng.random() < 0.3:
                continue
            lo, hi = box.lower, box.upper
            a = lo + (hi - lo) * rng.uniform(0.0, 0.5, size=lo.size)
            b = a + (hi - a) * rng.uniform(0.2, 1.0, size=lo.size)
            bump = polynomial_bump(Rectangle(tuple(zip(a, b))), rng.uniform(1.0, 4.0))
            terms += [(rng.standard_normal() * c, fs) for c, fs in bump.terms]
    if not terms:
        return b_operator(ts, np.eye(ts.m)[0])
    return SeparableFunction(terms)


def _disjointness(ts: TranslateSystem, samples: int = 64) -> float:
    """Max of ``|u_i u_j|`` (i != j) on a dense grid covering all boxes."""
    if ts.m == 1:
        return 0.0
    lo = np.min([b.lower for b in ts.boxes], axis=0)
    hi = np.max([b.upper for b in ts.boxes], axis=0)
    axes = [np.linspace(a, b, samples * (ts.m if i < ts.d.k else 1))
            for i, (a, b) in enumerate(zip(lo, hi))]
    vals = [t.on_grid(axes)[0] for t in ts.translates]
    worst = 0.0
    for i in range(ts.m):
        for j in range(i + 1, ts.m):
            worst = max(worst, float(np.max(np.abs(vals[i] * vals[j]))))
    return worst


def certify_isomorphism_bound(ts: TranslateSystem, trials: int = 100, tol: float = 1e-6,
                              seed: int = 42, resolution: int | None = None) -> OperatorCertificate:
    """Check ``||B alpha|| = ||alpha||``, ``||A v|| <= ||v||/||u||`` and ``A I B = id``.

    Each trial draws a unit ``alpha`` in ``l^p_m`` and a random test function
    ``v`` supported in the translate boxes. All norms are computed by
    quadrature.

    Raises
    ------
    CertificationError
        If any maximal deviation exceeds ``tol``; ``violations`` names the checks.
    """
    if trials < 10:
        raise DomainError(f"need at least 10 trials, got {trials}")
    res = resolution or CERT_RESOLUTION
    p = ts.p.p
    rng = np.random.default_rng(seed)
    grids = _BoxGrids(ts, res)
    u_norm = ts.base_lp_norm
    b_dev = a_dev = aib_dev = 0.0
    for _ in range(trials):
        alpha = rng.standard_normal(ts.m)
        alpha /= np.sum(np.abs(alpha) ** p) ** (1.0 / p)
        w_p = 0.0
        aib = np.empty(ts.m)
        for j, (vals, grads) in enumerate(grids.combination(alpha)):
            ws = grids.grids[j][1]
            dens = np.abs(vals) ** p + sum(np.abs(g) ** p for g in grads)
            w_p += integrate_grid(dens, ws)
            u_vals = grids.evaluate(j, grids.amplitudes * np.eye(ts.m)[j])
            aib[j] = (integrate_grid(vals * _dual_weight(u_vals, p), ws)
                      / integrate_grid(np.abs(u_vals) ** p, ws))
        b_dev = max(b_dev, abs(w_p ** (1.0 / p) - 1.0))
        aib_dev = max(aib_dev, float(np.sum(np.abs(aib - alpha) ** p) ** (1.0 / p)))

        v = _random_test_function(ts, rng)
        av = a_operator(ts, v, res)
        ratio = np.sum(np.abs(av) ** p) ** (1.0 / p) * u_norm / lp_norm(v, ts.boxes, ts.p, res)
        a_dev = max(a_dev, ratio - 1.0)

    cert = OperatorCertificate(
        b_isometry_dev=float(b_dev),
        a_bound_dev=float(max(a_dev, 0.0)),
        aib_identity_dev=float(aib_dev),
        lower_bound=u_norm,
        disjointness_dev=_disjointness(ts),
        m=ts.m,
        trials=int(trials),
        tol=float(tol),
    )
    violations = {
        name: val for name, val in [
            ("b_isometry", cert.b_isometry_dev),
            ("a_bound", cert.a_bound_dev),
            ("aib_identity", cert.aib_identity_dev),
            ("disjointness", cert.disjointness_dev),
        ] if val > tol
    }
    if violations:
        detail = ", ".join(f"{k}={v:.3e}" for k, v in violations.items())
        raise CertificationError(f"certificate failed (tol={tol:g}): {detail}", violations)
    return cert


@dataclass(frozen=True)
class NetCenter:
    """A compactly supported centre ``g`` with a box containing its support."""

    func: Callable
    box: Rectangle

    def __post_init__(self):
        if isinstance(self.func, SeparableFunction):
            for tb in self.func.term_boxes():
                if np.any(tb.lower < self.box.lower) or np.any(tb.upper > self.box.upper):
                    raise DomainError("centre support is not inside its declared box")


@dataclass(frozen=True)
class NetCandidate:
    centers: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(self.centers))
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Refutation:
    """A unit-ball element ``witness`` farther than the radius from every centre."""

    translation: float
    witness: ExtremalFunction = field(repr=False)
    witness_norm: float
    margins: tuple
    verified_margins: tuple | None
    radius: float


def _check_center(d: StripDomain, c: NetCenter):
    if c.box.ndim != d.n:
        raise DomainError(f"centre box has dimension {c.box.ndim}, domain has {d.n}")
    for (a, b), (lo, hi) in zip(d.intervals, c.box.intervals[d.k:]):
        if lo < a or hi > b:
            raise DomainError("centre box leaves the bounded factor of the domain")


def _margin(w: ExtremalFunction, c: NetCenter, p, resolution) -> float:
    diff_boxes = [w.support_box, c.box]
    total = 0.0
    for box in diff_boxes:
        xs, ws = tensor_rule(_box_edges(box, [w, c.func], resolution))
        vals = w.on_grid(xs)[0] - _grid_values(c.func, xs)
        total += integrate_grid(np.abs(vals) ** p, ws)
    return total ** (1.0 / p)


def refute_net(p, d: StripDomain, l: float, net: NetCandidate, rtilde: float,
               resolution: int = DEFAULT_RESOLUTION, verify: bool = True) -> Refutation:
    """Translate the normalised ``u_l`` past every centre and measure the distances.

    The shift ``T`` (the same on every free axis) puts the witness support
    beyond all centre boxes along the first free axis. Each margin
    ``||w - g_j||_p`` is integrated over the two disjoint boxes; with
    ``verify=True`` every margin is recomputed at twice the resolution.

    Raises
    ------
    DomainError
        If ``rtilde <= net.radius`` or a centre box is incompatible with ``d``.
    PreconditionError
        If ``||w||_p <= rtilde``: this witness cannot refute the net.
    RefutationError
        If some margin does not exceed the radius.
    """
    pe = as_exponent(p)
    if not rtilde > net.radius:
        raise DomainError(f"need rtilde > radius, got {rtilde} <= {net.radius}")
    for c in net.centers:
        _check_center(d, c)
    ts = build_translates(pe, d, l, 1, resolution)
    w_norm = ts.base_lp_norm
    if not w_norm > rtilde:
        raise PreconditionError(
            f"witness norm {w_norm:.6f} does not exceed rtilde={rtilde}; "
            "increase l or lower rtilde (no witness exceeds the embedding norm)"
        )
    reach = max([l] + [float(np.max(c.box.upper[: d.k])) for c in net.centers])
    T = reach + l
    while T - l < reach:  # rounding can leave a one-ulp overlap
        T = float(np.nextafter(T, np.inf))
    w = ts.base.translated(_offset(d, T))
    for c in net.centers:
        if w.support_box.intersect(c.box) is not None:
            raise RefutationError("internal error: witness overlaps a centre box")
    margins = tuple(_margin(w, c, pe.p, resolution) for c in net.centers)
    verified = None
    if verify:
        verified = tuple(_margin(w, c, pe.p, 2 * resolution) for c in net.centers)
    bad = [i for i, mg in enumerate(verified or margins) if not mg > net.radius]
    bad += [i for i, mg in enumerate(margins) if not mg > net.radius]
    if bad:
        raise RefutationError(f"margins of centres {sorted(set(bad))} do not exceed the radius")
    return Refutation(T, w, w_norm, margins, verified, float(net.radius))


def random_net(d: StripDomain, rng: np.random.Generator, n_centers: int,
               extent: float, radius: float) -> NetCandidate:
    """Random polynomial bumps with boxes inside ``|x_free| <= extent``."""
    centers = []
    for _ in range(int(n_centers)):
        lo_free = rng.uniform(-extent, extent, size=d.k)
        hi_free = lo_free + rng.uniform(0.05, 1.0, size=d.k) * (extent - lo_free)
        ivs = list(zip(lo_free, np.maximum(hi_free, lo_free + 1e-3)))
        for a, b in d.intervals:
            s = np.sort(rng.uniform(a, b, size=2))
            if s[1] - s[0] < 1e-3 * (b - a):
                s = np.array([a, b])
            ivs.append((s[0], s[1]))
        box = Rectangle(tuple(ivs))
        g = polynomial_bump(box, rng.uniform(1.0, 4.0)).scaled(rng.uniform(-2.0, 2.0))
        centers.append(NetCenter(g, box))
    return NetCandidate(tuple(centers), radius)
