"""Small dense linear algebra for point sets.

A point set is stored as an ``(n, p)`` float64 array with one point per row,
so the data matrix ``X`` with points as columns is ``points.T``.
"""

from dataclasses import dataclass

import numpy as np

# Rank decisions in gram_schmidt are relative to the largest input norm.
RANK_RTOL = 1e-10
ORTHO_TOL = 1e-9


def as_points(u):
    """Validate ``u`` and return it as a float64 ``(n, p)`` array.

    Raises
    ------
    ValueError
        If ``u`` is empty, not two-dimensional, or has non-finite entries.
    """
    pts = np.asarray(u, dtype=np.float64)
    if pts.size == 0:
        raise ValueError("empty input")
    if pts.ndim != 2:
        raise ValueError(f"point set must be 2-D (n, p), got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point set contains non-finite coordinates")
    return pts


def mean(u):
    """Coordinatewise arithmetic mean of the points."""
    return as_points(u).mean(axis=0)


def center(u):
    """Subtract the mean from every point."""
    pts = as_points(u)
    return pts - pts.mean(axis=0)


def scatter(u):
    """Scatter matrix ``sum (x - xbar)(x - xbar)^T``.

    The input is recentered here, so callers may pass raw points. The
    result equals ``n`` times the covariance.
    """
    xc = center(u)
    b = xc.T @ xc
    return 0.5 * (b + b.T)


def covariance(u):
    """Population covariance ``scatter(u) / n``."""
    pts = as_points(u)
    return scatter(pts) / pts.shape[0]


def distance_matrix(u):
    """Matrix of squared interpoint distances, zero on the diagonal.

    Entries are computed from explicit coordinate differences, not from the
    Gram matrix, so this stays independent of any inner-product route.
    """
    pts = as_points(u)
    diff = pts[:, None, :] - pts[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def frobenius(a):
    return float(np.sqrt(np.sum(np.square(a))))


def gram_schmidt(vectors, rtol=RANK_RTOL):
    """Orthonormal basis of the span of ``vectors``, in input order.

    Modified Gram-Schmidt with one reorthogonalization pass. A vector whose
    residual norm falls below ``rtol`` times the largest input norm is
    treated as dependent and dropped.

    Parameters
    ----------
    vectors : array_like, shape (k, d)
        Input vectors as rows.

    Returns
    -------
    ndarray, shape (m, d)
        Orthonormal rows, ``m <= min(k, d)``.
    """
    vs = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    dim = vs.shape[1]
    norms = np.sqrt(np.sum(vs * vs, axis=1))
    if norms.size == 0 or norms.max() == 0.0:
        return np.zeros((0, dim))
    threshold = rtol * norms.max()
    basis = []
    for v in vs:
        w = v.copy()
        for _ in range(2):
            for q in basis:
                w -= (q @ w) * q
        nw = np.sqrt(w @ w)
        if nw > threshold:
            basis.append(w / nw)
    if not basis:
        return np.zeros((0, dim))
    return np.array(basis)


@dataclass(frozen=True)
class RigidMotion:
    """Proper rotation followed by a translation, ``x -> O x + t``."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        o = np.array(self.rotation, dtype=np.float64)
        t = np.array(self.translation, dtype=np.float64).reshape(-1)
        if o.ndim != 2 or o.shape[0] != o.shape[1]:
            raise ValueError("rotation must be a square matrix")
        if t.shape[0] != o.shape[0]:
            raise ValueError("translation length must match rotation size")
        if not (np.all(np.isfinite(o)) and np.all(np.isfinite(t))):
            raise ValueError("motion contains non-finite entries")
        p = o.shape[0]
        if frobenius(o.T @ o - np.eye(p)) > ORTHO_TOL:
            raise ValueError("rotation is not orthogonal")
        if np.linalg.det(o) < 0:
            raise ValueError("rotation has determinant -1 (reflection)")
        o.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "rotation", o)
        object.__setattr__(self, "translation", t)

    @property
    def dim(self):
        return self.rotation.shape[0]

    @classmethod
    def identity(cls, p):
        return cls(np.eye(p), np.zeros(p))

    @classmethod
    def pure_translation(cls, t):
        t = np.asarray(t, dtype=np.float64).reshape(-1)
        return cls(np.eye(t.shape[0]), t)

    def with_translation(self, t):
        return RigidMotion(self.rotation, t)


def make_rng(seed):
    """The project's PRNG: numpy's PCG64 bit generator, explicitly seeded."""
    return np.random.Generator(np.random.PCG64(seed))


def random_rotation(p, seed):
    """Haar-distributed proper rotation of R^p as a :class:`RigidMotion`.

    A standard Gaussian matrix is orthonormalized column by column; Gram-
    Schmidt leaves every column positively aligned with its Gaussian source,
    which is the usual sign correction for QR. If the determinant comes out
    negative, the last column is negated.
    """
    if p < 1:
        raise ValueError("dimension must be >= 1")
    g = make_rng(seed).standard_normal((p, p))
    q = gram_schmidt(g.T).T
    if q.shape != (p, p):
        raise ArithmeticError("Gaussian sample was rank deficient")
    if np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return RigidMotion(q, np.zeros(p))


def apply_motion(u, m):
    """Map every point ``x`` to ``O x + t``."""
    pts = as_points(u)
    if pts.shape[1] != m.dim:
        raise ValueError(
            f"dimension mismatch: points in R^{pts.shape[1]}, motion in R^{m.dim}"
        )
    return pts @ m.rotation.T + m.translation
