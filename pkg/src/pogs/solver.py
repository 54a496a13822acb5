"""Overlapping group shrinkage with binary weights, solved by MM.

Minimizes

    P1(x) = 0.5 * ||y - x||**2 + lam * sum_s phi(bnorm(x, b, s); a)

where ``bnorm(x, b, s) = sqrt(sum_k b[k] * x[s + k]**2)`` and ``x`` is
zero outside ``[0, N)``. The sum runs over every block start ``s`` whose
block touches the signal, i.e. ``s = -(L - 1), ..., N - 1`` for a stored
pattern of length ``L``; blocks lying wholly outside contribute
``phi(0) = 0``.

Each MM step replaces ``phi`` by its quadratic majorizer and minimizes in
closed form, ``x[n] = y[n] / (1 + lam * r[n])`` with

    r[n] = sum_j b[j] / psi(bnorm(x, b, n - j)).

Samples are updated sequentially in index order, so each update sees the
neighbours already refreshed in the same sweep. A sample whose magnitude
drops to ``support_eps`` or below leaves the support at the end of its
sweep; it is set to zero there and never updated again.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .exceptions import ConvexityWarning, DomainError
from .pattern import GroupPattern, explicit_pattern
from .penalty import Penalty, _phi_scalar, _psi_scalar, max_noncvx_a, phi

__all__ = ["SolverConfig", "DenoiseResult", "make_config", "objective", "bnorm", "denoise"]

_TINY = 1e-300


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of one denoising run.

    Emits :class:`ConvexityWarning` when ``penalty.a > 1 / (pattern.k1 * lam)``,
    the regime in which the objective may lose convexity.
    """

    lam: float
    penalty: Penalty
    pattern: GroupPattern
    max_iters: int = 200
    tol: float = 1e-6
    support_eps: float = 1e-10

    def __post_init__(self):
        lam = float(self.lam)
        if not lam > 0 or not math.isfinite(lam):
            raise DomainError(f"lambda must be positive and finite, got {self.lam!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise DomainError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol!r}")
        if not self.support_eps >= 0:
            raise DomainError(f"support_eps must be >= 0, got {self.support_eps!r}")
        penalty = self.penalty
        if not isinstance(penalty, Penalty):
            penalty = Penalty(penalty)
        pattern = self.pattern
        if not isinstance(pattern, GroupPattern):
            pattern = explicit_pattern(pattern)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "penalty", penalty)
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "max_iters", int(self.max_iters))
        if not self.convex:
            warnings.warn(
                f"a={penalty.effective_a:.6g} exceeds 1/(K1*lambda)={self.a_bound:.6g}; "
                "the objective may be non-convex",
                ConvexityWarning,
                stacklevel=3,
            )

    @property
    def a_bound(self):
        """Supremum of ``a`` for which the objective is strictly convex."""
        return 1.0 / (self.pattern.k1 * self.lam)

    @property
    def convex(self):
        return self.penalty.effective_a <= self.a_bound

    @property
    def strictly_convex(self):
        return self.penalty.effective_a < self.a_bound


def make_config(lam, pattern, penalty="atan", a=None, safety=0.99, **kwargs):
    """Build a :class:`SolverConfig`, defaulting ``a`` to ``safety / (K1 * lam)``."""
    if isinstance(penalty, Penalty):
        family = penalty.family
        if a is None:
            a = penalty.a
    else:
        family = penalty
    if not isinstance(pattern, GroupPattern):
        pattern = explicit_pattern(pattern)
    if a is None:
        a = max_noncvx_a(pattern.k1, lam, safety)
    return SolverConfig(lam=lam, penalty=Penalty(family, a), pattern=pattern, **kwargs)


@dataclass
class DenoiseResult:
    """Output of :func:`denoise`.

    ``objective_history[0]`` is the objective at the initial point and
    ``objective_history[i]`` the value after sweep ``i``.
    """

    x: np.ndarray
    iters: int
    objective_history: np.ndarray = field(repr=False)
    converged: bool

    @property
    def final_objective(self):
        return float(self.objective_history[-1])


def _as_signal(v, name):
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


def bnorm(x, pattern, n):
    """Euclidean norm of the block of ``x`` starting at ``n``, weighted by ``b``.

    Indices outside ``[0, len(x))`` read as zero.
    """
    x = _as_signal(x, "x")
    b = pattern.b if isinstance(pattern, GroupPattern) else np.asarray(pattern)
    idx = n + np.flatnonzero(b)
    idx = idx[(idx >= 0) & (idx < x.size)]
    return float(np.sqrt(np.sum(x[idx] ** 2)))


def block_energies(x, pattern):
    """Squared block norms for every block start ``-(L-1) .. N-1``."""
    b = pattern.b.astype(float)
    return np.convolve(np.asarray(x, dtype=float) ** 2, b[::-1], mode="full")


def objective(y, x, cfg):
    """Evaluate the objective ``P1(x)`` for observation ``y``."""
    y = _as_signal(y, "y")
    x = _as_signal(x, "x")
    if y.shape != x.shape:
        raise DomainError(f"length mismatch: y has {y.size} samples, x has {x.size}")
    if y.size < len(cfg.pattern):
        raise DomainError(
            f"signal length {y.size} is shorter than the stored pattern length {len(cfg.pattern)}"
        )
    energies = np.maximum(block_energies(x, cfg.pattern), 0.0)
    fidelity = 0.5 * math.fsum((y - x) ** 2)
    return fidelity + cfg.lam * math.fsum(phi(cfg.penalty, np.sqrt(energies)))


@njit(cache=True, nogil=True)
def _objective_kernel(y, x, ones, lam, code, a):
    n_samples = y.size
    length = ones[-1] + 1
    # Neumaier-compensated sums keep the descent check meaningful at 1e-12
    s1 = 0.0
    c1 = 0.0
    for n in range(n_samples):
        d = y[n] - x[n]
        v = 0.5 * d * d
        t = s1 + v
        if abs(s1) >= abs(v):
            c1 += (s1 - t) + v
        else:
            c1 += (v - t) + s1
        s1 = t
    s2 = 0.0
    c2 = 0.0
    for s in range(-(length - 1), n_samples):
        g = 0.0
        for k in ones:
            i = s + k
            if i >= 0 and i < n_samples:
                g += x[i] * x[i]
        v = _phi_scalar(code, a, math.sqrt(g))
        t = s2 + v
        if abs(s2) >= abs(v):
            c2 += (s2 - t) + v
        else:
            c2 += (v - t) + s2
        s2 = t
    return (s1 + c1) + lam * (s2 + c2)


@njit(cache=True, nogil=True, error_model="numpy")
def _mm_kernel(y, x, active, ones, lam, code, a, max_iters, tol, eps, history):
    n_samples = y.size
    history[0] = _objective_kernel(y, x, ones, lam, code, a)
    for it in range(max_iters):
        max_old = 0.0
        for n in range(n_samples):
            v = abs(x[n])
            if v > max_old:
                max_old = v
        max_step = 0.0
        for n in range(n_samples):
            if not active[n]:
                continue
            r = 0.0
            for j in ones:
                s = n - j
                g = 0.0
                for k in ones:
                    i = s + k
                    if i >= 0 and i < n_samples:
                        g += x[i] * x[i]
                # the block contains x[n] itself, which is nonzero on the support
                r += 1.0 / _psi_scalar(code, a, math.sqrt(g))
            xn = y[n] / (1.0 + lam * r)
            step = abs(xn - x[n])
            if step > max_step:
                max_step = step
            x[n] = xn
        for n in range(n_samples):
            if active[n] and not abs(x[n]) > eps:
                active[n] = False
                x[n] = 0.0
        history[it + 1] = _objective_kernel(y, x, ones, lam, code, a)
        if max_step / (max_old + _TINY) < tol:
            return it + 1, True
    return max_iters, False


def denoise(y, cfg, init=None):
    """Denoise ``y`` by minimizing ``P1`` with the MM iteration.

    Parameters
    ----------
    y : array_like of shape (n_samples,)
        Noisy observation; must be finite.
    cfg : SolverConfig
    init : array_like, optional
        Starting point; defaults to ``y``. The support starts as the
        nonzero entries of ``init``; samples never leave zero once there.

    Returns
    -------
    DenoiseResult
        Samples whose magnitude fell to ``cfg.support_eps`` or below are
        returned as exact zeros.
    """
    y = _as_signal(y, "y")
    if not np.all(np.isfinite(y)):
        raise DomainError("input contains NaN or infinite values")
    if y.size < len(cfg.pattern):
        raise DomainError(
            f"signal length {y.size} is shorter than the stored pattern length {len(cfg.pattern)}"
        )
    if init is None:
        x = y.copy()
    else:
        x = _as_signal(init, "init").copy()
        if x.shape != y.shape:
            raise DomainError("init must have the same length as y")
        if not np.all(np.isfinite(x)):
            raise DomainError("init contains NaN or infinite values")
    y = np.ascontiguousarray(y)
    active = x != 0.0
    history = np.empty(cfg.max_iters + 1)
    ones = cfg.pattern.ones
    code = cfg.penalty.family.code
    a = cfg.penalty.effective_a
    if not active.any():
        history[0] = _objective_kernel(y, x, ones, cfg.lam, code, a)
        return DenoiseResult(x=np.zeros_like(y), iters=0, objective_history=history[:1], converged=True)
    iters, converged = _mm_kernel(
        y, x, active, ones, cfg.lam, code, a, cfg.max_iters, cfg.tol, cfg.support_eps, history
    )
    return DenoiseResult(
        x=x, iters=int(iters), objective_history=history[: iters + 1].copy(), converged=bool(converged)
    )
