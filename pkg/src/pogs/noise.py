"""Noise-level estimation and regularization-weight selection."""
import numpy as np

from .exceptions import DomainError, OutOfTableError

__all__ = ["MAD_NORMAL", "LAMBDA_TABLE", "estimate_sigma", "lambda_multiplier", "lambda_from_table", "lambda_for_pattern"]

# Third quartile of the standard normal: MAD / 0.6745 estimates sigma.
MAD_NORMAL = 0.6745

# Multiplier r in lam = r * sigma, keyed by (m, n1): m periods per group,
# n1 ones per period. m = 1 is a contiguous group of n1 samples.
LAMBDA_TABLE = {
    (1, 1): 3.700, (1, 2): 1.700, (1, 3): 1.150, (1, 4): 0.925,
    (2, 1): 1.700, (2, 2): 0.850, (2, 3): 0.625, (2, 4): 0.475,
    (3, 1): 1.150, (3, 2): 0.625, (3, 3): 0.450, (3, 4): 0.375,
    (4, 1): 0.925, (4, 2): 0.475, (4, 3): 0.375, (4, 4): 0.325,
}


def estimate_sigma(y):
    """Robust noise standard deviation, ``median(|y - median(y)|) / 0.6745``.

    Even-length medians average the two central order statistics.
    """
    y = np.asarray(y, dtype=float).ravel()
    if y.size == 0:
        raise DomainError("cannot estimate noise level of an empty signal")
    mad = np.median(np.abs(y - np.median(y)))
    return float(mad / MAD_NORMAL)


def lambda_multiplier(m, n1):
    try:
        return LAMBDA_TABLE[(int(m), int(n1))]
    except (KeyError, TypeError, ValueError):
        raise OutOfTableError(
            f"no tabulated multiplier for m={m}, n1={n1} (table covers 1..4 x 1..4); "
            "pass lambda explicitly"
        ) from None


def lambda_from_table(sigma, m, n1):
    """Regularization weight ``r(m, n1) * sigma``. No extrapolation outside the table."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    return lambda_multiplier(m, n1) * float(sigma)


def lambda_for_pattern(sigma, pattern):
    """Tabulated weight for a periodic or contiguous pattern.

    A contiguous group of ``K`` ones is the ``m = 1, n1 = K`` entry.
    """
    if not pattern.periodic:
        raise OutOfTableError("explicit patterns have no tabulated multiplier; pass lambda explicitly")
    if pattern.n0 == 0:
        return lambda_from_table(sigma, 1, pattern.k1)
    return lambda_from_table(sigma, pattern.m, pattern.n1)
