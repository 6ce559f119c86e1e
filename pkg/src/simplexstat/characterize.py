"""Numerical decision of the simplex/sphericity equivalence, both ways.

``n = p + 1`` points in R^p are pairwise at squared distance ``2 sigma2``
exactly when their scatter matrix is ``sigma2 I_p``. :func:`classify` decides
the scatter side and cross-checks it against the distance side.
"""

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .linalg import as_points, center, distance_matrix, frobenius, scatter
from .simplex import centering_matrix, circumradii, lemma_quantities, leave_one_out


class Verdict(str, Enum):
    REGULAR_SIMPLEX = "regular_simplex"
    NOT_EQUIDISTANT = "not_equidistant"
    NOT_SPHERICAL = "not_spherical"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class ToleranceConfig:
    equidist_rel: float = 1e-8
    sphericity_rel: float = 1e-8
    projection_rel: float = 1e-10
    ortho_cos: float = 1e-10

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (0.0 < value < 1.0):
                raise ValueError(f"tolerance {name} must lie in (0, 1), got {value}")

    def to_dict(self):
        return asdict(self)


DEFAULT_TOL = ToleranceConfig()


def _require_pairs(pts):
    if pts.shape[0] < 2:
        raise ValueError("need at least 2 points")


def _off_diagonal(d):
    n = d.shape[0]
    return d[~np.eye(n, dtype=bool)]


def equidistance_stats(u):
    """Mean off-diagonal squared distance ``m`` and max relative deviation from it.

    The deviation is reported as 0 when ``m == 0`` (all points coincide).
    """
    pts = as_points(u)
    _require_pairs(pts)
    off = _off_diagonal(distance_matrix(pts))
    m = float(off.mean())
    if m == 0.0:
        return 0.0, 0.0
    return m, float(np.max(np.abs(off - m)) / m)


def is_equidistant(u, tol=DEFAULT_TOL):
    """Return ``sigma2`` (half the common squared distance) or ``None``.

    Distance-side oracle: every off-diagonal squared distance must lie within
    ``tol.equidist_rel`` (relative) of their mean, and that mean must be
    positive.
    """
    m, resid = equidistance_stats(u)
    if m > 0.0 and resid <= tol.equidist_rel:
        return m / 2.0
    return None


def sphericity(u):
    """Trace-matched scale and relative distance of the scatter from ``sigma2 I``.

    Returns
    -------
    sigma2_hat : float
        ``tr(B) / p``, the least-squares fit of ``B`` by a multiple of ``I``.
    residual : float
        ``|B - sigma2_hat I|_F / |B|_F``, defined as 0 when ``B`` is exactly 0.
    """
    pts = as_points(u)
    b = scatter(pts)
    p = b.shape[0]
    sigma2_hat = float(np.trace(b)) / p
    norm_b = frobenius(b)
    if norm_b == 0.0:
        return sigma2_hat, 0.0
    return sigma2_hat, frobenius(b - sigma2_hat * np.eye(p)) / norm_b


@dataclass(frozen=True)
class ProjectionReport:
    """Residuals of ``A = X^T X / sigma2`` against the centering-projection properties."""

    symmetry: float
    idempotence: float
    trace_error: float
    null_residual: float
    centering_error: float
    tol: float

    @property
    def checks(self):
        return {
            "symmetry": self.symmetry <= self.tol,
            "idempotence": self.idempotence <= self.tol,
            "trace": self.trace_error <= self.tol,
            "null_space": self.null_residual <= self.tol,
            "centering_matrix": self.centering_error <= self.tol,
        }

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        d = asdict(self)
        d["checks"] = self.checks
        d["passed"] = self.passed
        return d


def gram_over_scale(u, sigma2):
    """``A = X_c^T X_c / sigma2`` for the centered points ``X_c``."""
    if not (math.isfinite(sigma2) and sigma2 > 0):
        raise ValueError("sigma2 must be a finite positive number")
    xc = center(u)
    return (xc @ xc.T) / sigma2


def projection_checks(u, sigma2, tol=DEFAULT_TOL):
    """Check that ``A = X^T X / sigma2`` is the centering projection of rank ``p``.

    Rank is read off the trace; this is valid because a symmetric idempotent
    matrix has rank equal to its trace, and both properties are checked.
    """
    a = gram_over_scale(u, sigma2)
    n = a.shape[0]
    p = as_points(u).shape[1]
    ones = np.ones(n)
    return ProjectionReport(
        symmetry=frobenius(a - a.T),
        idempotence=frobenius(a @ a - a),
        trace_error=abs(float(np.trace(a)) - p),
        null_residual=float(np.linalg.norm(a @ ones)),
        centering_error=frobenius(a - centering_matrix(n)),
        tol=tol.projection_rel,
    )


@dataclass(frozen=True)
class DiagnosticsReport:
    """Both sides of the characterization for one point set.

    ``equidistant`` is the distance-oracle result; ``inconsistent`` is raised
    when the theorem applies and the two sides disagree.
    """

    n: int
    p: int
    sigma2_from_distances: float
    sigma2_from_trace: float
    equidist_residual: float
    sphericity_residual: float
    theorem_applicable: bool
    verdict: Verdict
    equidistant: bool
    inconsistent: bool

    def to_dict(self):
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return d


def classify(u, tol=DEFAULT_TOL):
    """Classify ``u`` through its scatter matrix, cross-checked by distances.

    The verdict is ``regular_simplex`` iff ``n == p + 1``, the scale estimate
    is positive and the sphericity residual is within tolerance. Inputs with
    ``n != p + 1`` are ``not_applicable`` (residuals are still reported). A
    zero scatter (all points coincident) is ``not_equidistant``.
    """
    pts = as_points(u)
    _require_pairs(pts)
    n, p = pts.shape
    m, equi_resid = equidistance_stats(pts)
    equidistant = m > 0.0 and equi_resid <= tol.equidist_rel
    sigma2_hat, sph = sphericity(pts)
    spherical = sigma2_hat > 0.0 and sph <= tol.sphericity_rel
    applicable = n == p + 1

    if not applicable:
        verdict = Verdict.NOT_APPLICABLE
    elif spherical:
        verdict = Verdict.REGULAR_SIMPLEX
    elif sigma2_hat <= 0.0:
        verdict = Verdict.NOT_EQUIDISTANT
    else:
        verdict = Verdict.NOT_SPHERICAL

    return DiagnosticsReport(
        n=n,
        p=p,
        sigma2_from_distances=m / 2.0,
        sigma2_from_trace=sigma2_hat,
        equidist_residual=equi_resid,
        sphericity_residual=sph,
        theorem_applicable=applicable,
        verdict=verdict,
        equidistant=bool(equidistant),
        inconsistent=bool(applicable and spherical != equidistant),
    )


def backward_distance_recovery(u, sigma2, tol=DEFAULT_TOL):
    """Squared distances rebuilt from inner products alone.

    Uses ``|x_i - x_j|^2 = 2 (x_i.x_i - x_i.x_j)`` on the centered points,
    which holds because all centered points of a spherical configuration have
    the same norm. The input is centered here.

    Raises
    ------
    ValueError
        If ``sigma2 <= 0``, the scatter is not spherical within
        ``tol.sphericity_rel``, or its scale differs from ``sigma2`` by more
        than that relative tolerance.
    """
    if not (math.isfinite(sigma2) and sigma2 > 0):
        raise ValueError("sigma2 must be a finite positive number")
    sigma2_hat, sph = sphericity(u)
    if sph > tol.sphericity_rel or sigma2_hat <= 0.0:
        raise ValueError(f"scatter is not spherical (residual {sph:.3g})")
    if abs(sigma2_hat - sigma2) > tol.sphericity_rel * sigma2:
        raise ValueError(f"scatter scale {sigma2_hat!r} does not match sigma2 {sigma2!r}")
    xc = center(u)
    g = xc @ xc.T
    d = 2.0 * (np.diag(g)[:, None] - g)
    np.fill_diagonal(d, 0.0)
    return d


def analyze(u, tol=DEFAULT_TOL):
    """Every numeric diagnostic for ``u`` as a plain dict (never raises on geometry)."""
    pts = as_points(u)
    n, p = pts.shape
    b = scatter(pts)
    out = {
        "n": n,
        "p": p,
        "mean": pts.mean(axis=0).tolist(),
        "scatter": b.tolist(),
        "covariance": (b / n).tolist(),
        "distance_matrix": distance_matrix(pts).tolist(),
    }
    sigma2_hat, sph = sphericity(pts)
    out["sphericity"] = {"sigma2_hat": sigma2_hat, "residual": sph}
    if n < 2:
        out["diagnostics"] = None
        out["projection"] = None
        out["lemma"] = None
        return out
    out["diagnostics"] = classify(pts, tol).to_dict()
    if sigma2_hat > 0.0:
        out["projection"] = projection_checks(pts, sigma2_hat, tol).to_dict()
        out["A"] = gram_over_scale(pts, sigma2_hat).tolist()
    else:
        out["projection"] = None
    if n == p + 1 and sigma2_hat > 0.0:
        lq = lemma_quantities(n, sigma2_hat)
        loo = [leave_one_out(pts, i) for i in range(n)]
        out["lemma"] = {
            "r_expected": lq.r,
            "s_expected": lq.s,
            "h_expected": lq.h,
            "r_measured": circumradii(pts).tolist(),
            "s_measured": [q.shift for q in loo],
            "h_measured": [q.apex_height for q in loo],
            "max_cosine": max(q.max_cosine for q in loo),
        }
    else:
        out["lemma"] = None
    return out
