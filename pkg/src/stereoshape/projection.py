"""Perspective projection and its compatibility with affine scene motions.

``iota`` sends each column ``(x, y, z, t)`` to ``(x/z, y/z, 1, t/z)``. For an
affine ``g`` (last row ``(0, 0, 0, 1)``) there is exactly one invertible
diagonal ``d`` with ``g @ iota(X) @ diag(d) == iota(g @ X)``; it is
``d_i = z_i / (g @ X)_{3i}``.
"""
from __future__ import annotations

import numpy as np

from .exceptions import DegenerateViewError, FocalPlaneError, InvalidInputError
from .group_action import AFFINE_LAST_ROW
from .linalg_core import DEFAULT_TOL, Tolerances, as_config, as_matrix, in_M_tilde, rel_residual


def iota(X, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Project each column onto the plane ``z = 1``.

    Raises :class:`FocalPlaneError` if any ``|z_i| <= tol.zero_tol``.
    """
    X = as_matrix(X)
    if X.shape[0] != 4:
        raise InvalidInputError(f"expected 4 rows, got {X.shape[0]}")
    z = X[2]
    bad = np.flatnonzero(np.abs(z) <= tol.zero_tol)
    if bad.size:
        raise FocalPlaneError(f"points {(bad + 1).tolist()} lie in the focal plane (z = 0)")
    out = X / z
    # Exact ones on the image row; x/x can round away from 1 for subnormals.
    out[2] = 1.0
    out.setflags(write=False)
    return out


def as_image(P) -> np.ndarray:
    """Validate an image matrix: a configuration whose third row is exactly 1."""
    P = as_config(P)
    if not np.all(P[2] == 1.0):
        raise InvalidInputError("image matrix must have its third row equal to 1")
    return P


def _affine_g(g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (4, 4):
        raise InvalidInputError(f"g must be 4x4, got {g.shape}")
    if not np.all(np.isfinite(g)):
        raise InvalidInputError("g has non-finite entries")
    if not np.array_equal(g[3], AFFINE_LAST_ROW):
        raise InvalidInputError("g must have last row (0, 0, 0, 1)")
    return g


def compatible_d(g, X, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Diagonal ``d_i = z_i / (g_31 x_i + g_32 y_i + g_33 z_i + g_34 t_i)``."""
    g = _affine_g(g)
    X = as_config(X)
    if not in_M_tilde(X, tol):
        raise InvalidInputError("X must belong to M~ (rank 4, zero-free third and fourth rows)")
    denom = g[2] @ X
    bad = np.flatnonzero(np.abs(denom) <= tol.zero_tol)
    if bad.size:
        raise DegenerateViewError(f"g moves points {(bad + 1).tolist()} into the focal plane")
    d = X[2] / denom
    if np.any(np.abs(d) <= tol.zero_tol):
        raise DegenerateViewError("compatible d has a (numerically) zero entry")
    return d


def verify_intertwining(g, X, tol: Tolerances = DEFAULT_TOL, check_uniqueness: bool = True) -> dict:
    """Relative residual of ``g iota(X) diag(d) = iota(g X)`` with ``d = compatible_d(g, X)``.

    When ``check_uniqueness`` is set, each ``d_i`` is bumped by
    ``10 * residual_rel_tol`` (relative to its magnitude) in turn and the
    identity must then fail on column ``i``, measured relative to that
    column; ``unique`` records that outcome.
    """
    g = _affine_g(g)
    X = as_config(X)
    d = compatible_d(g, X, tol)
    lhs_base = g @ iota(X, tol)
    rhs = iota(g @ X, tol)
    residual = rel_residual(lhs_base * d, rhs)
    report = {"residual": residual, "holds": residual <= tol.residual_rel_tol, "d": d.tolist()}
    if check_uniqueness:
        bump = 10 * tol.residual_rel_tol
        broken = []
        for i in range(d.size):
            d_i = d[i] + bump * max(1.0, abs(d[i])) * np.sign(d[i])
            broken.append(rel_residual(lhs_base[:, i] * d_i, rhs[:, i]) > tol.residual_rel_tol)
        report["unique"] = bool(all(broken))
    return report
