"""scikit-learn compatible front end to the group-shrinkage solver."""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DomainError
from .noise import estimate_sigma, lambda_for_pattern
from .pattern import contiguous_pattern, explicit_pattern, parse_bitstring, periodic_pattern
from .penalty import Penalty, max_noncvx_a
from .solver import SolverConfig, denoise

__all__ = ["PeriodicGroupShrinkage", "resolve_pattern", "check_signals"]


def check_signals(X):
    """Validate ``X`` as one signal (1-D) or a stack of signals (2-D, one per row).

    Returns the 2-D float array and whether the input was 1-D.
    """
    X = check_array(X, ensure_2d=False, dtype=np.float64, ensure_all_finite=True)
    if X.ndim == 1:
        return X[None, :], True
    return X, False


def resolve_pattern(fs=None, fault_freq=None, n1=2, m=4, group_size=None, pattern=None):
    """Pick the pattern mode from whichever of the three groups of options is set."""
    modes = [fault_freq is not None, group_size is not None, pattern is not None]
    if sum(modes) != 1:
        raise DomainError("specify exactly one of fault_freq (with fs), group_size or pattern")
    if fault_freq is not None:
        if fs is None:
            raise DomainError("fault_freq requires fs")
        return periodic_pattern(fs, fault_freq, n1, m)
    if group_size is not None:
        return contiguous_pattern(group_size)
    if isinstance(pattern, str):
        return parse_bitstring(pattern)
    return explicit_pattern(pattern)


class PeriodicGroupShrinkage(TransformerMixin, BaseEstimator):
    """Denoise periodic group-sparse transients by convex non-convex-penalized shrinkage.

    Each row of ``X`` is one signal. ``fit`` fixes the pattern, the
    regularization weight and the non-convexity parameter; ``transform``
    runs the MM solver on every row. When ``lam`` is ``None`` it is set
    from the robust noise level of the fitted data times the tabulated
    multiplier for ``(m, n1)``, so fitting on healthy data and transforming
    new data mirrors the usual monitoring workflow.

    Parameters
    ----------
    lam : float, optional
        Regularization weight. Estimated in ``fit`` when omitted.
    penalty : {"atan", "log", "rat", "abs"}, default "atan"
    a : float, optional
        Non-convexity parameter; defaults to ``safety / (K1 * lam)``.
    safety : float, default 0.99
    fs, fault_freq : float, optional
        Sampling rate and fault frequency (Hz) for a periodic pattern.
    n1, m : int, default 2, 4
        Ones per period and periods per group.
    group_size : int, optional
        Contiguous group of this length instead of a periodic one.
    pattern : str or sequence of {0, 1}, optional
        Explicit binary layout.
    max_iter : int, default 200
    tol : float, default 1e-6
    support_eps : float, default 1e-10

    Attributes
    ----------
    pattern_ : GroupPattern
    lam_ : float
    a_ : float
    sigma_ : float or None
        Noise estimate used for ``lam_``; ``None`` when ``lam`` was given.
    config_ : SolverConfig
    n_iter_ : ndarray of int
        Sweeps used per row in the last ``transform``.
    converged_ : ndarray of bool
    """

    def __init__(
        self,
        lam=None,
        penalty="atan",
        a=None,
        safety=0.99,
        fs=None,
        fault_freq=None,
        n1=2,
        m=4,
        group_size=None,
        pattern=None,
        max_iter=200,
        tol=1e-6,
        support_eps=1e-10,
    ):
        self.lam = lam
        self.penalty = penalty
        self.a = a
        self.safety = safety
        self.fs = fs
        self.fault_freq = fault_freq
        self.n1 = n1
        self.m = m
        self.group_size = group_size
        self.pattern = pattern
        self.max_iter = max_iter
        self.tol = tol
        self.support_eps = support_eps

    def fit(self, X, y=None):
        X, _ = check_signals(X)
        pattern = resolve_pattern(self.fs, self.fault_freq, self.n1, self.m, self.group_size, self.pattern)
        if self.lam is None:
            sigma = estimate_sigma(X)
            if sigma == 0:
                raise DomainError("estimated noise level is zero; pass lam explicitly")
            lam = lambda_for_pattern(sigma, pattern)
        else:
            sigma = None
            lam = float(self.lam)
        a = self.a if self.a is not None else max_noncvx_a(pattern.k1, lam, self.safety)
        self.config_ = SolverConfig(
            lam=lam,
            penalty=Penalty(self.penalty, a),
            pattern=pattern,
            max_iters=self.max_iter,
            tol=self.tol,
            support_eps=self.support_eps,
        )
        self.pattern_ = pattern
        self.lam_ = lam
        self.a_ = self.config_.penalty.effective_a
        self.sigma_ = sigma
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        X, was_1d = check_signals(X)
        out = np.empty_like(X)
        iters, conv = [], []
        for i, row in enumerate(X):
            res = denoise(row, self.config_)
            out[i] = res.x
            iters.append(res.iters)
            conv.append(res.converged)
        self.n_iter_ = np.array(iters)
        self.converged_ = np.array(conv)
        return out[0] if was_1d else out
