"""First Dirichlet eigenpair of the pseudo-p-Laplacian on a rectangle.

The operator is ``sum_i d/dx_i (|d u/dx_i|^(p-2) d u/dx_i)``. Its first
eigenvalue is the minimum of the discrete Rayleigh quotient

    R(u) = sum_i sum_edges |(u[node + e_i] - u[node]) / h_i|^p / sum |u|^p

over nonzero grid functions that vanish on the boundary. We minimise ``R``
by normalised descent with Armijo backtracking, starting from the all-ones
function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dstn, idstn

from .errors import ConvergenceError, DomainError
from .extremal import rectangle_maximizer
from .ptrig import as_exponent
from .quad import Rectangle

__all__ = [
    "EigenResult",
    "GridFunction",
    "discrete_rayleigh",
    "discrete_rayleigh_gradient",
    "eigenfunction_error",
    "first_eigenpair",
]

ARMIJO_SHRINK = 0.5
ARMIJO_SLOPE = 1e-4
MAX_BACKTRACK = 200


@dataclass(frozen=True)
class GridFunction:
    """Values at the interior nodes of a uniform grid on ``box``.

    ``values`` has shape ``shape``; boundary values are implicitly zero and the
    spacing along axis ``i`` is ``(b_i - a_i) / (shape[i] + 1)``.
    """

    box: Rectangle
    shape: tuple
    values: np.ndarray

    def __post_init__(self):
        shape = tuple(int(n) for n in self.shape)
        if len(shape) != self.box.ndim or any(n < 1 for n in shape):
            raise DomainError(f"shape {self.shape} does not match a {self.box.ndim}-D box")
        values = np.asarray(self.values, dtype=float)
        if values.size != int(np.prod(shape)):
            raise DomainError(f"{values.size} values for a grid of shape {shape}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "values", values.reshape(shape))

    @property
    def spacing(self) -> np.ndarray:
        return self.box.widths / (np.array(self.shape) + 1.0)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def nodes(self) -> list:
        """Interior node coordinates along each axis."""
        return [a + h * np.arange(1, n + 1)
                for (a, _), h, n in zip(self.box.intervals, self.spacing, self.shape)]

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.box, self.shape, values)


def _signed_pow(x, e):
    # |x|^e * sign(x); zero differences contribute zero for every p
    return np.sign(x) * np.abs(x) ** e


def _parts(values, spacing, p, want_grad):
    num = 0.0
    flux_div = np.zeros_like(values) if want_grad else None
    for ax, h in enumerate(spacing):
        pad = [(0, 0)] * values.ndim
        pad[ax] = (1, 1)
        diff = np.diff(np.pad(values, pad), axis=ax) / h
        num += float(np.sum(np.abs(diff) ** p))
        if want_grad:
            phi = _signed_pow(diff, p - 1.0)
            lo = [slice(None)] * values.ndim
            hi = [slice(None)] * values.ndim
            lo[ax] = slice(0, -1)
            hi[ax] = slice(1, None)
            flux_div += (phi[tuple(lo)] - phi[tuple(hi)]) / h
    den = float(np.sum(np.abs(values) ** p))
    return num, den, flux_div


def discrete_rayleigh(u: GridFunction, p) -> float:
    """Forward-difference Rayleigh quotient with zero boundary values."""
    return discrete_rayleigh_gradient(u, p, gradient=False)


def discrete_rayleigh_gradient(u: GridFunction, p, gradient: bool = True):
    """Discrete Rayleigh quotient and its gradient with respect to the values.

    Returns ``(R, dR/du)`` (or ``R`` alone with ``gradient=False``). The cell
    volume ``prod h_i`` multiplies numerator and denominator alike and cancels.
    """
    pe = as_exponent(p)
    num, den, flux_div = _parts(u.values, u.spacing, pe.p, gradient)
    if den == 0.0:
        raise DomainError("the Rayleigh quotient is undefined for the zero function")
    R = num / den
    if not gradient:
        return R
    grad = pe.p * (flux_div - R * _signed_pow(u.values, pe.p - 1.0)) / den
    return R, grad


@dataclass(frozen=True)
class EigenResult:
    """Output of :func:`first_eigenpair`.

    ``history`` holds the accepted quotient values, first entry the start.
    """

    lambda_h: float
    eigenfunction: GridFunction
    iterations: int
    residual: float
    history: np.ndarray = field(repr=False)


def _laplacian_symbol(shape, spacing):
    total = 0.0
    for ax, (n, h) in enumerate(zip(shape, spacing)):
        j = np.arange(1, n + 1)
        sym = 4.0 / h ** 2 * np.sin(np.pi * j / (2 * (n + 1))) ** 2
        s = [1] * len(shape)
        s[ax] = n
        total = total + sym.reshape(s)
    return total


def _normalise(values, p, vol):
    return values / (np.sum(np.abs(values) ** p) * vol) ** (1.0 / p)


def first_eigenpair(
    p,
    box: Rectangle,
    shape,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    precondition: bool = True,
) -> EigenResult:
    """Minimise the discrete Rayleigh quotient from the positive cone.

    Each iteration takes a step along a descent direction, backtracks
    (factor 0.5, slope 1e-4) until the quotient drops by the Armijo amount,
    and renormalises to unit discrete ``L^p`` norm. The first trial step is
    1.0; later trials start at twice the previously accepted step.

    With ``precondition=True`` (default) the direction is the gradient mapped
    through the inverse Dirichlet Laplacian of the grid (applied with a type-I
    sine transform); otherwise it is the plain negative gradient.

    Stops when the relative decrease of the quotient falls below ``tol``.

    Raises
    ------
    DomainError
        If ``tol <= 0`` or any grid count is below 7.
    ConvergenceError
        After ``max_iter`` iterations or when no step decreases the quotient;
        the exception carries the last iterate and residual.
    """
    pe = as_exponent(p)
    shape = tuple(int(n) for n in np.broadcast_to(np.asarray(shape), (box.ndim,)))
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if any(n < 7 for n in shape):
        raise DomainError(f"every grid count must be >= 7, got {shape}")
    u = GridFunction(box, shape, np.ones(shape))
    vol = u.cell_volume
    values = _normalise(u.values, pe.p, vol)
    symbol = _laplacian_symbol(shape, u.spacing) if precondition else None

    R, grad = discrete_rayleigh_gradient(u.with_values(values), pe)
    history = [R]
    step = 0.5
    rel = np.inf
    for it in range(1, max_iter + 1):
        if precondition:
            direction = -idstn(dstn(grad, type=1) / symbol, type=1) / vol
        else:
            direction = -grad
        slope = float(np.sum(grad * direction))
        trial = 2.0 * step
        for _ in range(MAX_BACKTRACK):
            cand = _normalise(values + trial * direction, pe.p, vol)
            R_new, grad_new = discrete_rayleigh_gradient(u.with_values(cand), pe)
            if R_new <= R + ARMIJO_SLOPE * trial * slope:
                break
            trial *= ARMIJO_SHRINK
        else:
            raise ConvergenceError(
                "line search failed to decrease the Rayleigh quotient",
                iterate=u.with_values(values),
                residual=rel,
            )
        rel = (R - R_new) / R
        step = trial
        values, R, grad = cand, R_new, grad_new
        history.append(R)
        if rel < tol:
            break
    else:
        raise ConvergenceError(
            f"no convergence after {max_iter} iterations (relative change {rel:.3e})",
            iterate=u.with_values(values),
            residual=rel,
        )
    # the minimiser is determined up to sign; report the positive one
    if np.sum(values) < 0:
        values = -values
    return EigenResult(R, u.with_values(values), it, rel, np.array(history))


def eigenfunction_error(res: EigenResult, p) -> float:
    """Max-norm distance from the best positive multiple of the closed-form maximiser."""
    ef = res.eigenfunction
    u = rectangle_maximizer(p, ef.box)
    grid = np.stack(np.meshgrid(*ef.nodes(), indexing="ij"), axis=-1)
    sampled = u(grid)
    c = float(np.sum(ef.values * sampled) / np.sum(sampled * sampled))
    return float(np.max(np.abs(ef.values - c * sampled)))
