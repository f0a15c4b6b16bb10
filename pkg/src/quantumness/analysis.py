"""Distribution distances and log-log power-law fits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .walk import WalkSummary

__all__ = ["FitResult", "l1_distance", "loglog_fit", "correction_scatter", "fit_correction_exponent"]

# nodes whose correction falls at or below this are left out of the fit
CORRECTION_FLOOR = 1e-15


def l1_distance(p, q) -> float:
    """``sum_i |p_i - q_i|``; lies in [0, 2] for two distributions."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    return float(np.abs(p - q).sum())


def loglog_fit(x, y) -> tuple[float, float, float]:
    """Least-squares fit of ``ln y = ln c + s ln x``.

    Returns ``(c, s, rms)`` where ``rms`` is the root-mean-square residual in
    log space.
    """
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    if len(lx) < 2 or np.ptp(lx) == 0:
        raise ValueError("degenerate fit: need at least two distinct x values")
    design = np.column_stack([np.ones_like(lx), lx])
    (icpt, slope), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (icpt + slope * lx)
    return float(np.exp(icpt)), float(slope), float(np.sqrt(np.mean(resid**2)))


@dataclass(frozen=True)
class FitResult:
    """Power law ``correction / P_C ~ prefactor * d**(-exponent)``.

    A positive exponent means low-degree nodes are enhanced.
    """

    exponent: float
    prefactor: float
    residual: float
    points_used: int
    points_excluded: int = 0

    def to_dict(self) -> dict:
        return {
            "kappa3": self.exponent,
            "prefactor": self.prefactor,
            "residual": self.residual,
            "points_used": self.points_used,
            "points_excluded": self.points_excluded,
        }


def correction_scatter(summary: WalkSummary, degrees=None) -> tuple[np.ndarray, np.ndarray]:
    """Per-node ``(d_i, correction_i / P_C_i)`` pairs; needs a defined correction."""
    if summary.p_correction is None:
        raise ValueError("quantum correction is undefined (quantumness is zero)")
    d = summary.degrees if degrees is None else np.asarray(getattr(degrees, "d", degrees), dtype=float)
    return d, summary.p_correction / summary.p_classical


def fit_correction_exponent(summary: WalkSummary, degrees=None) -> FitResult:
    """Fit the enhancement exponent over raw per-node points (no binning)."""
    if summary.quantumness <= 1e-6 or summary.p_correction is None:
        raise ValueError(f"quantumness {summary.quantumness:.3g} too small for a correction fit")
    d, ratio = correction_scatter(summary, degrees)
    usable = summary.p_correction > CORRECTION_FLOOR
    if usable.sum() < 3:
        raise ValueError(f"only {int(usable.sum())} nodes with a non-zero correction; need 3")
    c, slope, rms = loglog_fit(d[usable], ratio[usable])
    return FitResult(
        exponent=-slope,
        prefactor=c,
        residual=rms,
        points_used=int(usable.sum()),
        points_excluded=int((~usable).sum()),
    )
