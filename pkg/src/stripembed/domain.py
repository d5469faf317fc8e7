"""Strip-like domains and the closed-form embedding constants.

A strip-like domain is ``R^k x prod_i (a_i, b_i)``; free axes come first in
every coordinate vector used by this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .ptrig import PExponent, as_exponent
from .quad import Rectangle

__all__ = [
    "EmbeddingConstants",
    "StripDomain",
    "embedding_norm",
    "lambda_closed_form",
]


@dataclass(frozen=True)
class StripDomain:
    """``k`` unbounded axes followed by the bounded ``intervals``.

    With ``k == 0`` the domain is the rectangle ``prod_i (a_i, b_i)``.
    """

    k: int
    intervals: tuple

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"k must be a non-negative integer, got {self.k!r}")
        # Rectangle does the interval validation
        box = Rectangle(tuple(self.intervals))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "intervals", box.intervals)

    @property
    def n(self) -> int:
        return self.k + len(self.intervals)

    @property
    def widths(self) -> tuple:
        return tuple(b - a for a, b in self.intervals)

    @property
    def bounded_part(self) -> Rectangle:
        return Rectangle(self.intervals)

    def truncated(self, l: float) -> Rectangle:
        """The box ``(-l, l)^k x prod_i (a_i, b_i)``."""
        if not l > 0:
            raise DomainError(f"half-width must be positive, got {l!r}")
        return Rectangle(((-l, l),) * self.k + self.intervals)


@dataclass(frozen=True)
class EmbeddingConstants:
    """Infimum of the Rayleigh quotient and the norm ``(1 + lambda_)**(-1/p)``."""

    lambda_: float
    norm: float


def lambda_closed_form(p, d: StripDomain) -> float:
    """``pi_p**p * (p - 1) * sum_i (b_i - a_i)**(-p)``; does not depend on ``k``."""
    pe = as_exponent(p)
    return pe.pi_p ** pe.p * (pe.p - 1.0) * math.fsum(w ** -pe.p for w in d.widths)


def embedding_norm(p, d: StripDomain, verify: bool = False) -> EmbeddingConstants:
    """Norm of ``W_0^{1,p}(D) -> L^p(D)`` together with ``lambda``.

    With ``verify=True`` the closed-form ``pi_p`` is first checked against
    quadrature (raises :class:`~stripembed.errors.ConvergenceError` on mismatch).
    """
    pe: PExponent = as_exponent(p)
    if verify:
        pe.verify()
    lam = lambda_closed_form(pe, d)
    return EmbeddingConstants(lam, (1.0 + lam) ** (-1.0 / pe.p))
