"""Dense matrix primitives, numerical rank and configuration-class predicates.

A configuration matrix is a 4 x n array whose columns are homogeneous scene
points ``(x, y, z, t)``. Two classes of configurations matter:

* ``M``: rank 4 (some 4 x 4 minor is non-zero) and no zero in the fourth row.
* ``M~`` ("M tilde"): members of ``M`` with no zero in the third row, i.e.
  no point lies in the focal plane.

Exact-arithmetic conditions such as "minor != 0" are replaced by
tolerance tests controlled by :class:`Tolerances`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, SamplerFailure

MAX_COLUMNS = 10_000
MAX_SAMPLER_ATTEMPTS = 10_000

CLASSES = ("M", "M_tilde", "t_ones")


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used by every decision in the package.

    Parameters
    ----------
    rank_rel_tol : float
        Singular values at or below ``rank_rel_tol * sigma_max`` count as zero.
    residual_rel_tol : float
        Relative residual accepted as "the linear system is consistent".
    zero_tol : float
        Absolute threshold for treating a single entry as zero.
    """

    rank_rel_tol: float = 1e-9
    residual_rel_tol: float = 1e-8
    zero_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rank_rel_tol", "residual_rel_tol", "zero_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidInputError(f"{name} must be a positive finite number, got {value!r}")
        if self.rank_rel_tol >= 1:
            raise InvalidInputError("rank_rel_tol must be < 1")


DEFAULT_TOL = Tolerances()


def as_matrix(A) -> np.ndarray:
    """Return ``A`` as a finite 2-D float array (copy, read-only)."""
    arr = np.array(A, dtype=float)
    if arr.ndim != 2:
        raise InvalidInputError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("matrix contains non-finite entries")
    arr.setflags(write=False)
    return arr


def as_config(A) -> np.ndarray:
    """Validate and return a 4 x n configuration matrix with n >= 4."""
    arr = as_matrix(A)
    rows, cols = arr.shape
    if rows != 4:
        raise InvalidInputError(f"configuration matrix must have 4 rows, got {rows}")
    if cols < 4:
        raise InvalidInputError(f"configuration matrix needs at least 4 columns, got {cols}")
    if cols > MAX_COLUMNS:
        raise InvalidInputError(f"at most {MAX_COLUMNS} columns are supported, got {cols}")
    return arr


def numerical_rank(A, tol: Tolerances = DEFAULT_TOL) -> int:
    """Number of singular values above ``tol.rank_rel_tol * sigma_max``.

    The zero matrix (and an empty matrix) has rank 0.
    """
    arr = as_matrix(A)
    if arr.size == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    smax = s[0]
    if smax == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel_tol * smax))


def _row_zero_free(row: np.ndarray, zero_tol: float) -> bool:
    return bool(np.all(np.abs(row) > zero_tol))


def in_M(A, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``A`` has rank 4 and a zero-free fourth row."""
    arr = as_config(A)
    return _row_zero_free(arr[3], tol.zero_tol) and numerical_rank(arr, tol) == 4


def in_M_tilde(A, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``A`` is in ``M`` and its third row is zero-free."""
    arr = as_config(A)
    return _row_zero_free(arr[2], tol.zero_tol) and in_M(arr, tol)


def _has_margin(A: np.ndarray, rows, tol: Tolerances) -> bool:
    if any(np.min(np.abs(A[r])) <= 10 * tol.zero_tol for r in rows):
        return False
    s = np.linalg.svd(A, compute_uv=False)
    return s[3] / s[0] > 10 * tol.rank_rel_tol


def random_config(n: int, seed=None, cls: str = "M", tol: Tolerances = DEFAULT_TOL,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Draw a random configuration of class ``M``, ``M_tilde`` or ``t_ones``.

    Entries are i.i.d. uniform on [-1, 1] and redrawn until the class
    predicate holds with a safety margin. ``t_ones`` draws an ``M_tilde``
    configuration whose fourth row is overwritten with ones.

    Either ``seed`` or an existing generator ``rng`` may be supplied.
    """
    if cls not in CLASSES:
        raise InvalidInputError(f"unknown configuration class {cls!r}; expected one of {CLASSES}")
    n = int(n)
    if not 4 <= n <= MAX_COLUMNS:
        raise InvalidInputError(f"n must lie in [4, {MAX_COLUMNS}], got {n}")
    if rng is None:
        rng = np.random.default_rng(seed)
    rows = (3,) if cls == "M" else (2, 3)
    for _ in range(MAX_SAMPLER_ATTEMPTS):
        A = rng.uniform(-1.0, 1.0, size=(4, n))
        if cls == "t_ones":
            A[3] = 1.0
        if _has_margin(A, rows, tol):
            A.setflags(write=False)
            return A
    raise SamplerFailure(
        f"no {cls} configuration found in {MAX_SAMPLER_ATTEMPTS} attempts; tolerances may be pathological"
    )


def rel_residual(lhs, rhs) -> float:
    """Relative Frobenius residual ``||lhs - rhs|| / ||rhs||`` (absolute if rhs is 0)."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    num = np.linalg.norm(lhs - rhs)
    den = np.linalg.norm(rhs)
    return float(num / den) if den > 0 else float(num)
