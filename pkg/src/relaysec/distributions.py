"""Densities built from independent exponentials.

Two shapes appear throughout the outage analysis: the sum of two
exponentials (hypoexponential law) and the maximum of several independent
exponentials, whose density expands by inclusion-exclusion into a signed
mixture of exponentials.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "DEGENERACY_RTOL",
    "PERTURBATION",
    "HypoexpCoeffs",
    "MaxDistTerms",
    "hypoexp_coeffs",
    "max_pdf_terms",
    "separate",
]

DEGENERACY_RTOL = 1e-9
PERTURBATION = 1e-7


def separate(a: float, b: float) -> float:
    """Return ``a``, nudged by a factor ``1 + 1e-7`` when it nearly equals ``b``.

    Closed forms below divide by rate differences. Rather than carrying the
    confluent limits, the first operand is moved off the singular point.
    """
    if abs(a - b) < DEGENERACY_RTOL * max(abs(a), abs(b)):
        return a * (1.0 + PERTURBATION)
    return a


@dataclass(frozen=True)
class HypoexpCoeffs:
    """Partial fractions of the density ``b1*exp(-lambda1*x) + b2*exp(-lambda2*x)``."""

    lambda1: float
    lambda2: float
    b1: float
    b2: float

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return self.b1 * np.exp(-self.lambda1 * x) + self.b2 * np.exp(-self.lambda2 * x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return (
            1.0
            - self.b1 / self.lambda1 * np.exp(-self.lambda1 * x)
            - self.b2 / self.lambda2 * np.exp(-self.lambda2 * x)
        )

    def laplace(self, s):
        """``E[exp(-s X)]`` for ``s > -min(lambda)``."""
        return self.b1 / (self.lambda1 + s) + self.b2 / (self.lambda2 + s)


def hypoexp_coeffs(lambda1: float, lambda2: float) -> HypoexpCoeffs:
    """Coefficients of the density of a sum of two independent exponentials.

    Equal rates are perturbed apart (see :func:`separate`); the result then
    approximates the Erlang-2 density to about 1e-7 relative accuracy.
    """
    if not (lambda1 > 0 and lambda2 > 0):
        raise DomainError(f"rates must be positive, got {lambda1!r}, {lambda2!r}")
    lambda1 = separate(lambda1, lambda2)
    prod = lambda1 * lambda2
    return HypoexpCoeffs(lambda1, lambda2, prod / (lambda2 - lambda1), prod / (lambda1 - lambda2))


@dataclass(frozen=True)
class MaxDistTerms:
    """Density of the maximum of independent exponentials as a signed mixture.

    Each term is ``(sign, rate, m)`` where ``rate`` is the sum of ``m``
    distinct weights and ``sign = (-1)**(m+1)``; the density is
    ``sum(sign * rate * exp(-rate * y))``. With no weights the maximum is
    identically zero; ``terms`` is then empty and ``point_mass_at_zero`` set.
    """

    terms: tuple[tuple[int, float, int], ...]
    point_mass_at_zero: bool = False

    @property
    def signs(self) -> np.ndarray:
        return np.array([t[0] for t in self.terms], dtype=float)

    @property
    def rates(self) -> np.ndarray:
        return np.array([t[1] for t in self.terms], dtype=float)

    def pdf(self, y):
        y = np.asarray(y, dtype=float)
        if self.point_mass_at_zero:
            raise DomainError("maximum of no variables has no density")
        e = np.exp(-np.multiply.outer(y, self.rates))
        return e @ (self.signs * self.rates)

    def cdf(self, y):
        y = np.asarray(y, dtype=float)
        if self.point_mass_at_zero:
            return np.where(y >= 0, 1.0, 0.0)
        e = np.exp(-np.multiply.outer(y, self.rates))
        return 1.0 - e @ self.signs


def max_pdf_terms(weights: Sequence[float]) -> MaxDistTerms:
    """Inclusion-exclusion terms for ``max_i W_i`` with ``W_i ~ Exp(weights[i])``.

    Subsets are emitted by size, then in lexicographic index order, giving
    ``2**len(weights) - 1`` terms.
    """
    weights = [float(w) for w in weights]
    if any(not w > 0 for w in weights):
        raise DomainError(f"weights must be positive, got {weights!r}")
    if not weights:
        return MaxDistTerms((), point_mass_at_zero=True)
    terms = []
    for m in range(1, len(weights) + 1):
        sign = 1 if m % 2 else -1
        for combo in combinations(weights, m):
            terms.append((sign, float(sum(combo)), m))
    return MaxDistTerms(tuple(terms))
