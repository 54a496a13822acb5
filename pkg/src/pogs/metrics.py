"""RMSE and transient-level ROC evaluation.

Detection is scored per transient: when any sample of a ground-truth
transient exceeds the threshold, the whole transient counts as detected.
Samples outside every transient are scored individually.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .exceptions import DomainError

__all__ = ["TransientLabels", "RocCurve", "rmse", "relabel", "roc", "threshold_at_detection"]


@dataclass(frozen=True)
class TransientLabels:
    """Ground-truth ``[start, end)`` transient intervals of a record."""

    intervals: Tuple[Tuple[int, int], ...]
    n_samples: int

    def __post_init__(self):
        ivs = tuple(sorted((int(s), int(e)) for s, e in self.intervals))
        prev_end = 0
        for s, e in ivs:
            if not 0 <= s < e <= self.n_samples:
                raise DomainError(f"interval [{s}, {e}) is empty or outside [0, {self.n_samples})")
            if s < prev_end:
                raise DomainError(f"interval [{s}, {e}) overlaps its predecessor")
            prev_end = e
        object.__setattr__(self, "intervals", ivs)

    def mask(self):
        m = np.zeros(self.n_samples, dtype=bool)
        for s, e in self.intervals:
            m[s:e] = True
        return m


@dataclass
class RocCurve:
    """Operating points ordered by decreasing threshold.

    ``auc`` integrates the points by the trapezoid rule, closing the curve
    with the corners (0, 0) and (1, 1).
    """

    points: List[Tuple[float, float]]
    thresholds: List[float]
    auc: float

    @property
    def false_alarm(self):
        return np.array([p[0] for p in self.points])

    @property
    def detection(self):
        return np.array([p[1] for p in self.points])

    def to_dict(self):
        return {
            "auc": self.auc,
            "threshold": list(self.thresholds),
            "false_alarm_prob": [p[0] for p in self.points],
            "detection_prob": [p[1] for p in self.points],
        }


def rmse(x, ref):
    x = np.asarray(x, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if x.shape != ref.shape:
        raise DomainError(f"length mismatch: {x.shape} vs {ref.shape}")
    if x.size == 0:
        raise DomainError("rmse of empty vectors is undefined")
    return float(np.sqrt(np.mean((x - ref) ** 2)))


def relabel(detected, labels):
    """Extend each partially detected transient to the whole transient."""
    detected = np.asarray(detected, dtype=bool)
    if detected.shape != (labels.n_samples,):
        raise DomainError(f"mask length {detected.size} != labels.n_samples {labels.n_samples}")
    out = detected.copy()
    for s, e in labels.intervals:
        if out[s:e].any():
            out[s:e] = True
    return out


def roc(x, labels, n_thresholds=256):
    """Sweep ``n_thresholds`` uniform amplitude thresholds from ``max|x|`` to 0.

    A sample is detected at threshold ``t`` when ``|x| > t``.
    """
    if n_thresholds < 2:
        raise DomainError("n_thresholds must be >= 2")
    ax = np.abs(np.asarray(x, dtype=float))
    truth = labels.mask()
    if ax.shape != truth.shape:
        raise DomainError(f"estimate has {ax.size} samples, labels expect {labels.n_samples}")
    n_pos = int(truth.sum())
    n_neg = truth.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DomainError("labels need both transient and transient-free samples")

    thresholds = np.linspace(ax.max(), 0.0, n_thresholds)
    points = []
    for t in thresholds:
        det = relabel(ax > t, labels)
        points.append((
            float(np.count_nonzero(det & ~truth)) / n_neg,
            float(np.count_nonzero(det & truth)) / n_pos,
        ))
    fa = np.r_[0.0, [p[0] for p in points], 1.0]
    pd = np.r_[0.0, [p[1] for p in points], 1.0]
    auc = float(np.trapezoid(pd, fa))
    return RocCurve(points=points, thresholds=[float(t) for t in thresholds], auc=min(max(auc, 0.0), 1.0))


def threshold_at_detection(curve, target=0.9):
    """First (largest) threshold in the sweep whose detection probability reaches ``target``."""
    for t, (_, pd) in zip(curve.thresholds, curve.points):
        if pd >= target:
            return t
    return None
