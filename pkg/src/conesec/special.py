"""Gamma, Beta and binomial coefficients evaluated in log space."""

from __future__ import annotations

import math

from scipy.special import gammaln


def gamma(x: float) -> float:
    if x <= 0:
        raise ValueError("gamma requires a positive argument")
    return math.exp(gammaln(x))


def beta(x: float, y: float) -> float:
    if x <= 0 or y <= 0:
        raise ValueError("beta requires positive arguments")
    return math.exp(gammaln(x) + gammaln(y) - gammaln(x + y))


def binom(a: float, b: float) -> float:
    """Generalized binomial coefficient Gamma(a+1)/(Gamma(b+1)Gamma(a-b+1))."""
    if a < 0 or b < 0 or b > a:
        raise ValueError("binom requires 0 <= b <= a")
    return math.exp(gammaln(a + 1) - gammaln(b + 1) - gammaln(a - b + 1))
