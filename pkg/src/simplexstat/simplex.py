"""Regular simplex constructors and the leave-one-out geometry they obey.

Two constructions are provided and kept independent of each other:

* ``incremental`` stacks vertices one axis at a time, placing each new vertex
  above the centroid of the previous ones at the height that makes it
  equidistant from all of them.
* ``projection`` factors ``sigma2 * (I - 11^T / n)`` as ``X^T X`` using an
  orthonormal basis of the complement of the all-ones vector.

Scale is ``sigma2``, half the common squared edge length.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    RigidMotion,
    as_points,
    gram_schmidt,
    scatter,
)

METHODS = ("incremental", "projection")


@dataclass(frozen=True)
class SimplexSpec:
    """What to build: dimension ``dim`` and exactly one of ``sigma2``/``edge``.

    ``edge`` is the common edge length ``L``; the two are tied by
    ``2 * sigma2 = L**2``.
    """

    dim: int
    sigma2: Optional[float] = None
    edge: Optional[float] = None
    method: str = "incremental"
    centered: bool = True

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError("dim must be an integer >= 1 (need n = p + 1 >= 2)")
        if (self.sigma2 is None) == (self.edge is None):
            raise ValueError("give exactly one of sigma2 or edge")
        given = self.sigma2 if self.sigma2 is not None else self.edge
        if not (math.isfinite(given) and given > 0):
            raise ValueError("scale must be a finite positive number")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")

    @property
    def n(self):
        return self.dim + 1

    @property
    def scale(self):
        """``sigma2`` whichever way the scale was given."""
        if self.sigma2 is not None:
            return float(self.sigma2)
        return float(self.edge) ** 2 / 2.0


@dataclass(frozen=True)
class LemmaQuantities:
    n: int
    r: float  # vertex to centroid
    s: float  # centroid shift when one vertex is removed
    h: float  # vertex to centroid of the others, r + s


def circumradius_sq(n, sigma2):
    """``sigma2 (n - 1) / n``; zero for a single point."""
    return sigma2 * (n - 1) / n


def lemma_quantities(n, sigma2):
    """Circumradius, centroid shift and apex height of a regular ``n``-point simplex.

    Raises
    ------
    ValueError
        For ``n < 2`` or non-positive ``sigma2``.
    """
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    if not (math.isfinite(sigma2) and sigma2 > 0):
        raise ValueError("sigma2 must be a finite positive number")
    r = math.sqrt(circumradius_sq(n, sigma2))
    s = math.sqrt(sigma2 / (n * (n - 1)))
    return LemmaQuantities(n=int(n), r=r, s=s, h=r + s)


def apex_height(k, sigma2):
    """Height of vertex ``k`` above the centroid of the ``k - 1`` before it.

    Uses ``sqrt(2 sigma2 - r_{k-1}^2)``, which avoids summing two square roots.
    """
    return math.sqrt(2.0 * sigma2 - circumradius_sq(k - 1, sigma2))


def construct_incremental(spec):
    """Regular simplex built vertex by vertex along the standard axes.

    Vertex 1 is the origin, vertex 2 is ``sqrt(2 sigma2) e_1``, and vertex
    ``k >= 3`` sits at the centroid of vertices ``1..k-1`` plus
    ``apex_height(k) e_{k-1}``.
    """
    p, sigma2 = spec.dim, spec.scale
    pts = np.zeros((p + 1, p))
    pts[1, 0] = math.sqrt(2.0 * sigma2)
    for k in range(3, p + 2):
        base = pts[: k - 1].mean(axis=0)
        pts[k - 1] = base
        pts[k - 1, k - 2] = apex_height(k, sigma2)
    if spec.centered:
        pts -= pts.mean(axis=0)
    return pts


def centering_matrix(n):
    """``I_n - (1/n) 1 1^T``, the projection onto the complement of the ones vector."""
    return np.eye(n) - np.full((n, n), 1.0 / n)


def construct_projection(spec):
    """Regular simplex from a factorization of the centering matrix.

    The orthonormal basis comes from Gram-Schmidt over ``e_i - (1/n) 1`` in
    order ``i = 1..n``; the last input is dependent and is dropped. The
    resulting ``X`` satisfies ``X^T X = sigma2 * centering_matrix(n)`` and is
    already centered, so ``spec.centered`` has no effect.
    """
    n, sigma2 = spec.n, spec.scale
    q = gram_schmidt(centering_matrix(n))
    if q.shape[0] != spec.dim:
        raise ArithmeticError(
            f"expected {spec.dim} basis vectors for the ones-complement, got {q.shape[0]}"
        )
    return math.sqrt(sigma2) * q.T


def construct(spec):
    if spec.method == "incremental":
        return construct_incremental(spec)
    return construct_projection(spec)


def circumradii(u):
    """Distance of every vertex to the centroid."""
    pts = as_points(u)
    return np.linalg.norm(pts - pts.mean(axis=0), axis=1)


@dataclass(frozen=True)
class LeaveOneOut:
    """Measured leave-one-out geometry for one vertex.

    ``max_cosine`` is the largest ``|cos|`` between ``x - mean(u - {x})`` and
    the centered vectors of ``u - {x}`` (zero if they are all zero).
    """

    index: int
    shift: float
    apex_height: float
    max_cosine: float


def leave_one_out(u, index):
    """Centroid shift, apex height and orthogonality for vertex ``index``."""
    pts = as_points(u)
    if pts.shape[0] < 2:
        raise ValueError("leave-one-out needs at least 2 points")
    x = pts[index]
    rest = np.delete(pts, index, axis=0)
    rest_mean = rest.mean(axis=0)
    apex = x - rest_mean
    shift = float(np.linalg.norm(pts.mean(axis=0) - rest_mean))
    beta = float(np.linalg.norm(apex))
    spans = rest - rest_mean
    norms = np.linalg.norm(spans, axis=1)
    keep = norms > 0
    if beta == 0.0 or not np.any(keep):
        max_cos = 0.0
    else:
        cos = (spans[keep] @ apex) / (norms[keep] * beta)
        max_cos = float(np.max(np.abs(cos)))
    return LeaveOneOut(index=int(index), shift=shift, apex_height=beta, max_cosine=max_cos)


def motion_to_axis(origin, target):
    """Proper rigid motion sending ``origin`` to 0 and ``target`` onto ``beta e_p``.

    ``beta = |target - origin|``. Built from a Householder reflection, with a
    sign flip on the first axis to restore determinant +1 (requires
    ``p >= 2``; in R^1 a negative direction cannot be rotated onto ``e_1``).
    """
    origin = np.asarray(origin, dtype=np.float64)
    d = np.asarray(target, dtype=np.float64) - origin
    p = d.shape[0]
    beta = np.linalg.norm(d)
    if beta == 0.0:
        raise ValueError("target coincides with origin")
    d = d / beta
    e = np.zeros(p)
    e[-1] = 1.0
    if p == 1:
        if d[0] < 0:
            raise ValueError("no proper rotation of R^1 reverses direction")
        o = np.eye(1)
    else:
        w = d - e
        nw = np.linalg.norm(w)
        h = np.eye(p) if nw == 0.0 else np.eye(p) - 2.0 * np.outer(w, w) / (nw * nw)
        if nw == 0.0:
            o = h
        else:
            f = np.ones(p)
            f[0] = -1.0
            o = f[:, None] * h
    return RigidMotion(o, -(o @ origin))


def apex_scatter(u, index):
    """Scatter of ``V(u - {x})`` and ``beta`` for ``x = u[index]``.

    ``V`` is :func:`motion_to_axis` from ``mean(u - {x})`` to ``x``. For a
    regular simplex with scale ``sigma2`` this satisfies

        B + ((n - 1) / n) beta^2 e_p e_p^T = sigma2 I_p,

    and in particular the leading ``(p-1) x (p-1)`` block of ``B`` is
    ``sigma2 I_{p-1}`` while its last row and column vanish.
    """
    pts = as_points(u)
    x = pts[index]
    rest = np.delete(pts, index, axis=0)
    v = motion_to_axis(rest.mean(axis=0), x)
    moved = rest @ v.rotation.T + v.translation
    beta = float(np.linalg.norm(x - rest.mean(axis=0)))
    return scatter(moved), beta
