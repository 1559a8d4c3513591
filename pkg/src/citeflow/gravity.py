"""citeflow.gravity
~~~~~~~~~~~~~~~~~~~

Log-log gravity estimation by ordinary least squares.

Model: ln C = ln k + alpha * ln M_i + beta * ln M_j - gamma * ln d + eps.
``gamma`` is reported positive-for-decay (flows shrink as distance grows);
the raw regression coefficient on ln d is its negation and is exposed as
``coef_ln_d`` to avoid sign confusion against plotted curves.

The solver uses a QR decomposition; the raw 4x4 normal-equations solve is
kept in the test suite as an independent oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import stats

from .flows import GravityObservation, UnfitCell

_COLUMN_NAMES = ("intercept", "ln_m_i", "ln_m_j", "ln_d")

MIN_OBSERVATIONS = 5  # regressors + 1


class DegenerateDesign(Exception):
    """Design matrix is rank-deficient; names the offending columns."""

    def __init__(self, columns: list[str]):
        super().__init__(f"collinear design columns: {columns}")
        self.columns = columns


@dataclass(frozen=True)
class RegressionResult:
    ln_k: float
    alpha: float
    beta: float
    gamma: float
    std_errors: dict[str, float]
    t_stats: dict[str, float]
    p_values: dict[str, float]
    r_squared: float
    n_obs: int
    significance_level: float

    @property
    def coef_ln_d(self) -> float:
        return -self.gamma

    @property
    def significant_gamma(self) -> bool:
        return self.p_values["gamma"] < self.significance_level


def design_matrix(observations: Sequence[GravityObservation]):
    c = np.array([o.c_ij for o in observations], dtype=np.float64)
    m_i = np.array([o.m_i for o in observations], dtype=np.float64)
    m_j = np.array([o.m_j for o in observations], dtype=np.float64)
    d = np.array([o.d_km for o in observations], dtype=np.float64)
    if np.any(c <= 0) or np.any(m_i <= 0) or np.any(m_j <= 0) or np.any(d <= 0):
        raise ValueError("observations must be strictly positive to enter log space")
    X = np.column_stack([np.ones(len(c)), np.log(m_i), np.log(m_j), np.log(d)])
    return X, np.log(c)


def fit_loglog_arrays(
    X: np.ndarray, y: np.ndarray, significance_level: float = 0.05
) -> RegressionResult:
    """QR-based OLS on a prepared design matrix (columns per _COLUMN_NAMES)."""
    n, k = X.shape
    if n < MIN_OBSERVATIONS:
        raise UnfitCell(f"need at least {MIN_OBSERVATIONS} observations, got {n}")
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    tol = max(n, k) * np.finfo(np.float64).eps * (diag.max() if diag.size else 0.0)
    bad = [_COLUMN_NAMES[i] for i in range(k) if diag[i] <= tol]
    if bad:
        raise DegenerateDesign(bad)
    coef = np.linalg.solve(R, Q.T @ y)
    resid = y - X @ coef
    dof = n - k
    s2 = float(resid @ resid) / dof
    # (X'X)^{-1} = R^{-1} R^{-T}, from the same QR factors
    r_inv = np.linalg.solve(R, np.eye(k))
    cov = s2 * (r_inv @ r_inv.T)
    se = np.sqrt(np.diag(cov))
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if tss == 0.0 else 1.0 - float(resid @ resid) / tss
    t = coef / se
    p = 2.0 * stats.t.sf(np.abs(t), dof)

    names = ("ln_k", "alpha", "beta", "gamma")
    sign = np.array([1.0, 1.0, 1.0, -1.0])  # gamma is minus the ln_d coefficient
    est = coef * sign
    return RegressionResult(
        ln_k=float(est[0]),
        alpha=float(est[1]),
        beta=float(est[2]),
        gamma=float(est[3]),
        std_errors={nm: float(se[i]) for i, nm in enumerate(names)},
        t_stats={nm: float(est[i] / se[i]) for i, nm in enumerate(names)},
        p_values={nm: float(p[i]) for i, nm in enumerate(names)},
        r_squared=r2,
        n_obs=n,
        significance_level=significance_level,
    )


def fit_loglog_ols(
    observations: Sequence[GravityObservation], significance_level: float = 0.05
) -> RegressionResult:
    """Estimate the gravity model on positive-flow observations."""
    if len(observations) < MIN_OBSERVATIONS:
        raise UnfitCell(
            f"need at least {MIN_OBSERVATIONS} observations, got {len(observations)}"
        )
    X, y = design_matrix(observations)
    return fit_loglog_arrays(X, y, significance_level)


@dataclass(frozen=True)
class SeriesPoint:
    window_years: int
    result: Optional[RegressionResult]  # None marks an UNFIT/degenerate gap

    @property
    def is_gap(self) -> bool:
        return self.result is None


@dataclass(frozen=True)
class CoefficientSeries:
    group: str
    scale: str
    include_self: bool
    points: tuple[SeriesPoint, ...]


def coefficient_series(
    observations_by_window: dict[int, Sequence[GravityObservation]],
    group: str,
    scale: str,
    include_self: bool,
    significance_level: float = 0.05,
) -> CoefficientSeries:
    """One gravity fit per citation window; unfit cells become gaps.

    ``observations_by_window`` maps window length to the (possibly pooled
    across SCs) observation list for this group/scale/policy cell.
    """
    windows = sorted(observations_by_window)
    points = []
    for w in windows:
        try:
            result = fit_loglog_ols(
                list(observations_by_window[w]), significance_level
            )
        except (UnfitCell, DegenerateDesign):
            result = None
        points.append(SeriesPoint(window_years=w, result=result))
    return CoefficientSeries(
        group=group, scale=scale, include_self=include_self, points=tuple(points)
    )
