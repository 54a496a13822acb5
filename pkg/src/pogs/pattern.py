"""Binary group-weight patterns.

A pattern ``b`` selects which samples of a sliding block enter the block
norm. Periodic patterns repeat ``[1]*n1 + [0]*n0`` over ``m`` fault periods;
contiguous patterns are all ones (classic overlapping group shrinkage).
Trailing zeros never influence the objective, so they are always trimmed.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import DomainError, InvalidPatternError

__all__ = [
    "GroupPattern",
    "periodic_pattern",
    "contiguous_pattern",
    "explicit_pattern",
    "parse_bitstring",
    "round_half_up",
]


def round_half_up(v):
    return int(math.floor(v + 0.5))


@dataclass(frozen=True)
class GroupPattern:
    """Immutable binary weight vector with its derived counts.

    Attributes
    ----------
    b : ndarray of int8
        Weights with trailing zeros removed (read-only).
    k : int
        Nominal, untrimmed group length.
    k1 : int
        Number of ones.
    n1, n0, m : int or None
        Ones per period, zeros per period and periods per group. ``None``
        for explicit (non-periodic) layouts.
    """

    b: np.ndarray = field(repr=False)
    k: int
    k1: int
    n1: Optional[int] = None
    n0: Optional[int] = None
    m: Optional[int] = None

    def __post_init__(self):
        b = np.array(self.b, dtype=np.int8)
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @property
    def k0(self):
        return self.k - self.k1

    @property
    def periodic(self):
        return self.m is not None

    @property
    def ones(self):
        """Offsets ``k`` with ``b[k] == 1``, ascending."""
        return np.flatnonzero(self.b).astype(np.int64)

    @property
    def bitstring(self):
        return "".join(str(int(v)) for v in self.b)

    def to_dict(self):
        return {
            "b": self.bitstring,
            "k": self.k,
            "k0": self.k0,
            "k1": self.k1,
            "n1": self.n1,
            "n0": self.n0,
            "m": self.m,
            "stored_length": len(self.b),
        }

    def __len__(self):
        return len(self.b)

    def __eq__(self, other):
        if not isinstance(other, GroupPattern):
            return NotImplemented
        return (
            np.array_equal(self.b, other.b)
            and (self.k, self.k1, self.n1, self.n0, self.m)
            == (other.k, other.k1, other.n1, other.n0, other.m)
        )

    def __hash__(self):
        return hash((self.b.tobytes(), self.k, self.k1, self.n1, self.n0, self.m))


def periodic_pattern(fs, fault_freq, n1=2, m=4):
    """Periodic pattern spanning ``m`` fault periods with ``n1`` ones each.

    The period in samples is ``round(fs / fault_freq)``; the remaining
    ``period - n1`` samples of each period are zeros.

    >>> p = periodic_pattern(6400, 80, n1=4, m=4)
    >>> p.n0, p.k, p.k1, len(p.b)
    (76, 320, 16, 244)
    """
    if not fs > 0 or not math.isfinite(fs):
        raise DomainError(f"fs must be positive, got {fs!r}")
    if not fault_freq > 0 or not math.isfinite(fault_freq):
        raise DomainError(f"fault_freq must be positive, got {fault_freq!r}")
    if int(n1) != n1 or n1 < 1:
        raise DomainError(f"n1 must be a positive integer, got {n1!r}")
    if int(m) != m or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m!r}")
    n1, m = int(n1), int(m)
    period = round_half_up(fs / fault_freq)
    if n1 >= period:
        raise InvalidPatternError(
            f"n1={n1} leaves no zeros in a period of {period} samples "
            f"(fs={fs}, fault_freq={fault_freq})"
        )
    n0 = period - n1
    one_period = np.r_[np.ones(n1, dtype=np.int8), np.zeros(n0, dtype=np.int8)]
    b = np.tile(one_period, m)[: m * period - n0]
    return GroupPattern(b=b, k=m * period, k1=m * n1, n1=n1, n0=n0, m=m)


def contiguous_pattern(k):
    """All-ones pattern of length ``k``."""
    if int(k) != k or k < 1:
        raise DomainError(f"group size must be a positive integer, got {k!r}")
    k = int(k)
    return GroupPattern(b=np.ones(k, dtype=np.int8), k=k, k1=k, n1=k, n0=0, m=1)


def explicit_pattern(bits):
    """Pattern from an arbitrary 0/1 sequence; trailing zeros are dropped."""
    arr = np.asarray(bits)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidPatternError("pattern must be a nonempty 1-D sequence of bits")
    if not np.all((arr == 0) | (arr == 1)):
        raise InvalidPatternError("pattern entries must be 0 or 1")
    arr = arr.astype(np.int8)
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        raise InvalidPatternError("pattern has no ones (K1 = 0)")
    return GroupPattern(b=arr[: nz[-1] + 1], k=arr.size, k1=int(nz.size))


def parse_bitstring(text):
    """Parse ``"1100110"`` (commas and spaces allowed) into an explicit pattern."""
    cleaned = text.replace(",", "").replace(" ", "")
    if not cleaned or set(cleaned) - {"0", "1"}:
        raise InvalidPatternError(f"not a bitstring: {text!r}")
    return explicit_pattern([int(c) for c in cleaned])
