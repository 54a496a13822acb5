"""Sparsity-promoting penalty functions and their MM companions.

Each family provides ``phi(x; a)``, a symmetric penalty that is concave on
the positive axis with unit slope at the origin and curvature bounded below
by ``-a``, and ``psi(x)``, the denominator of the quadratic majorizer

    g(u, v) = (u**2 - v**2) / (2 * psi(v)) + phi(v; a).

With ``a = 0`` every family reduces to ``|x|``.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .exceptions import DomainError

__all__ = ["Family", "Penalty", "phi", "psi", "max_noncvx_a"]

_SQRT3 = math.sqrt(3.0)


class Family(str, enum.Enum):
    ABS = "abs"
    LOG = "log"
    RAT = "rat"
    ATAN = "atan"

    @property
    def code(self):
        return _CODES[self]


_CODES = {Family.ABS: 0, Family.LOG: 1, Family.RAT: 2, Family.ATAN: 3}


@dataclass(frozen=True)
class Penalty:
    """A penalty family together with its non-convexity parameter ``a``.

    ``Penalty("abs")`` always behaves as ``|x|`` regardless of ``a``.
    """

    family: Family = Family.ATAN
    a: float = 0.0

    def __post_init__(self):
        try:
            family = Family(self.family)
        except ValueError:
            names = ", ".join(f.value for f in Family)
            raise DomainError(f"unknown penalty family {self.family!r}; expected one of {names}") from None
        a = float(self.a)
        if not a >= 0.0 or not math.isfinite(a):
            raise DomainError(f"non-convexity parameter a must be finite and >= 0, got {self.a!r}")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "a", a)

    @property
    def effective_a(self):
        return 0.0 if self.family is Family.ABS else self.a

    def with_a(self, a):
        return Penalty(self.family, a)

    def phi(self, x):
        return phi(self, x)

    def psi(self, x):
        return psi(self, x)


def phi(p, x):
    """Evaluate the penalty ``phi(x; a)`` elementwise.

    Returns a float for scalar input and an array otherwise.
    """
    ax = np.abs(np.asarray(x, dtype=float))
    a = p.effective_a
    if a == 0.0:
        out = ax
    elif p.family is Family.LOG:
        out = np.log1p(a * ax) / a
    elif p.family is Family.RAT:
        out = ax / (1.0 + a * ax / 2.0)
    else:
        # atan((1 + 2au)/sqrt3) - pi/6 folded into one arctan: exact zero at u = 0
        out = np.arctan(_SQRT3 * a * ax / (2.0 + a * ax)) / (0.5 * _SQRT3 * a)
    return out if out.ndim else float(out)


def psi(p, x):
    """Evaluate the majorizer denominator ``psi(x)`` elementwise.

    ``psi(0) == 0`` for every family; callers must avoid dividing by it.
    """
    ax = np.abs(np.asarray(x, dtype=float))
    a = p.effective_a
    if p.family is Family.ABS or a == 0.0:
        out = ax
    elif p.family is Family.LOG:
        out = ax * (1.0 + a * ax)
    elif p.family is Family.RAT:
        out = ax * (1.0 + a * ax) ** 2
    else:
        out = ax * (1.0 + a * ax + a * a * ax * ax)
    return out if out.ndim else float(out)


def max_noncvx_a(k1, lam, safety=0.99):
    """Largest non-convexity parameter keeping the objective strictly convex.

    The objective is strictly convex for ``0 <= a < 1 / (k1 * lam)``. The
    returned value is ``safety / (k1 * lam)``; ``safety=1`` gives the
    boundary itself, where strictness is lost.

    Parameters
    ----------
    k1 : int
        Number of ones in the group pattern.
    lam : float
        Regularization weight.
    safety : float, default 0.99
        Fraction of the bound to use, in ``(0, 1]``.
    """
    if int(k1) != k1 or k1 < 1:
        raise DomainError(f"k1 must be a positive integer, got {k1!r}")
    if not lam > 0 or not math.isfinite(lam):
        raise DomainError(f"lambda must be positive and finite, got {lam!r}")
    if not 0.0 < safety <= 1.0:
        raise DomainError(f"safety must lie in (0, 1], got {safety!r}")
    return safety / (int(k1) * float(lam))


# Scalar kernels used inside the compiled solver loops. ``code`` follows
# Family.code; ``ax`` is already nonnegative.

@njit(cache=True)
def _phi_scalar(code, a, ax):
    if code == 0 or a == 0.0:
        return ax
    if code == 1:
        return math.log1p(a * ax) / a
    if code == 2:
        return ax / (1.0 + a * ax / 2.0)
    return math.atan(_SQRT3 * a * ax / (2.0 + a * ax)) / (0.5 * _SQRT3 * a)


@njit(cache=True)
def _psi_scalar(code, a, ax):
    if code == 0 or a == 0.0:
        return ax
    if code == 1:
        return ax * (1.0 + a * ax)
    if code == 2:
        t = 1.0 + a * ax
        return ax * t * t
    return ax * (1.0 + a * ax + a * a * ax * ax)
