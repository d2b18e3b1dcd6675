"""Order statistics of N i.i.d. unit-mean normalized channel gains.

Covers the density of the j-th ascendingly ordered gain, its expectation
(harmonic partial sums for Rayleigh, quadrature otherwise), and the ranking
of a realized gain vector.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import normalized_cdf, normalized_pdf
from .specfun import QuadratureSpec, integrate_semi_infinite


@dataclass(frozen=True)
class OrderSpec:
    """Selects the j-th ascending order statistic out of n_users draws."""

    n_users: int
    order_j: int

    def __post_init__(self):
        if self.n_users < 1:
            raise ValueError("n_users must be at least 1")
        if not 1 <= self.order_j <= self.n_users:
            raise ValueError(
                f"order_j must lie in 1..{self.n_users}, got {self.order_j}"
            )


def log_binom(n, k):
    """log of the binomial coefficient, for regimes where exact ints overflow floats."""
    return math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)


def harmonic_tail(n, j):
    """sum of 1/l for l = n-j+1 .. n, the Rayleigh ordered-gain expectation."""
    return math.fsum(1.0 / l for l in range(n - j + 1, n + 1))


def ordered_pdf(spec, k_factor, x):
    """Density of the j-th ascendingly ordered normalized gain at x.

    N C(N-1, j-1) f(x) F(x)^(j-1) (1-F(x))^(N-j); the binomial and the two
    powers move to log space once N exceeds 30 so large user counts cannot
    overflow.
    """
    n = spec.n_users
    j = spec.order_j
    f = normalized_pdf(k_factor, x)
    big_f = normalized_cdf(k_factor, x)
    if n <= 30:
        return (
            n
            * math.comb(n - 1, j - 1)
            * f
            * big_f ** (j - 1)
            * (1.0 - big_f) ** (n - j)
        )
    if f == 0.0:
        return 0.0
    if (j > 1 and big_f == 0.0) or (j < n and big_f == 1.0):
        return 0.0
    log_pdf = math.log(n) + log_binom(n - 1, j - 1) + math.log(f)
    if j > 1:
        log_pdf += (j - 1) * math.log(big_f)
    if j < n:
        log_pdf += (n - j) * math.log1p(-big_f)
    return math.exp(log_pdf)


@lru_cache(maxsize=None)
def _expected_ordered_ricean(n, j, k_factor):
    spec = OrderSpec(n_users=n, order_j=j)

    def integrand(x):
        return x * ordered_pdf(spec, k_factor, x)

    def envelope(x):
        # the slowest-decaying order (j = N) has tail mass <= N (1 - F)
        return 1.0 - n * (1.0 - normalized_cdf(k_factor, x))

    return integrate_semi_infinite(
        integrand,
        QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13, max_subdivisions=2000,
                       tail_cutoff_mass=1e-13),
        envelope_cdf=envelope,
    )


def expected_ordered_gain(spec, k_factor):
    """E of the j-th ascendingly ordered normalized gain.

    For k_factor = 0 this is the harmonic partial sum over the top j
    reciprocals; otherwise a cached quadrature of x times the ordered
    density. Strictly increasing in j.
    """
    if k_factor == 0.0:
        return harmonic_tail(spec.n_users, spec.order_j)
    return _expected_ordered_ricean(spec.n_users, spec.order_j, float(k_factor))


def rank_of_users(normalized_gains):
    """Map ascending order slots to 1-based user indices.

    Element j-1 of the result is the user whose normalized gain holds
    ascending rank j; ties go to the lower user index.
    """
    arr = np.asarray(normalized_gains, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("normalized_gains must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("normalized_gains must all be finite")
    order = np.argsort(arr, kind="stable")
    return tuple(int(i) + 1 for i in order)
