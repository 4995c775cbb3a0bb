"""Group actions ``A -> g A diag(d)`` on 4 x n configurations.

Two groups act on configurations:

* the full group ``GL(4) x diag(GL(n))``, which is neither free nor proper;
* the restricted group whose ``g`` is affine (last row ``(0, 0, 0, 1)``),
  which acts freely on the class ``M``.

The module also builds the two constructive counterexamples for the full
group: a scalar stabilizer element that fixes every configuration, and an
SVD-based witness that the set of group elements moving a compact set back
onto itself is unbounded.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .linalg_core import DEFAULT_TOL, Tolerances, as_config, in_M, rel_residual

AFFINE_LAST_ROW = np.array([0.0, 0.0, 0.0, 1.0])

# The displayed 4 x 6 example matrix: identity block plus (1,1,1,1) and (1,2,3,5).
PAPER_EXAMPLE_A = np.array(
    [
        [1, 0, 0, 0, 1, 1],
        [0, 1, 0, 0, 1, 2],
        [0, 0, 1, 0, 1, 3],
        [0, 0, 0, 1, 1, 5],
    ],
    dtype=float,
)


def _check_pair(g, d, zero_tol: float) -> tuple[np.ndarray, np.ndarray]:
    g = np.array(g, dtype=float)
    d = np.array(d, dtype=float).ravel()
    if g.shape != (4, 4):
        raise InvalidInputError(f"g must be 4x4, got shape {g.shape}")
    if d.size == 0:
        raise InvalidInputError("d must be non-empty")
    if not (np.all(np.isfinite(g)) and np.all(np.isfinite(d))):
        raise InvalidInputError("transform has non-finite entries")
    if abs(np.linalg.det(g)) <= zero_tol:
        raise InvalidInputError("g is singular")
    if np.any(np.abs(d) <= zero_tol):
        raise InvalidInputError("d has a zero entry")
    g.setflags(write=False)
    d.setflags(write=False)
    return g, d


@dataclass(frozen=True, eq=False)
class FullTransform:
    """An element ``(g, d)`` of ``GL(4) x diag(GL(n))``; ``d`` holds the diagonal."""

    g: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        g, d = _check_pair(self.g, self.d, DEFAULT_TOL.zero_tol)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return self.d.size

    def compose(self, other: "FullTransform") -> "FullTransform":
        """Group product ``(g1, d1) o (g2, d2) = (g1 g2, d1 d2)``."""
        if self.n != other.n:
            raise InvalidInputError(f"cannot compose transforms of sizes {self.n} and {other.n}")
        both_restricted = isinstance(self, RestrictedTransform) and isinstance(other, RestrictedTransform)
        cls = RestrictedTransform if both_restricted else FullTransform
        return cls(self.g @ other.g, self.d * other.d)

    __matmul__ = compose

    def inverse(self) -> "FullTransform":
        return type(self)(np.linalg.inv(self.g), 1.0 / self.d)

    @classmethod
    def identity(cls, n: int) -> "FullTransform":
        return cls(np.eye(4), np.ones(n))

    def distance_to_identity(self) -> float:
        """Max-norm distance of ``(g - Id, d - 1)`` from zero."""
        return float(max(np.max(np.abs(self.g - np.eye(4))), np.max(np.abs(self.d - 1.0))))

    def to_json_obj(self) -> dict:
        return {"g": self.g.ravel().tolist(), "d": self.d.tolist()}


class RestrictedTransform(FullTransform):
    """A full transform whose ``g`` has last row exactly ``(0, 0, 0, 1)``."""

    def __post_init__(self):
        super().__post_init__()
        if not np.array_equal(self.g[3], AFFINE_LAST_ROW):
            raise InvalidInputError(f"restricted g must have last row (0, 0, 0, 1), got {self.g[3].tolist()}")
        if self.n < 4:
            raise InvalidInputError("restricted transforms need n >= 4")

    def inverse(self) -> "RestrictedTransform":
        # Solve blockwise so the affine last row stays exact.
        lin_inv = np.linalg.inv(self.g[:3, :3])
        g = np.eye(4)
        g[:3, :3] = lin_inv
        g[:3, 3] = -lin_inv @ self.g[:3, 3]
        return RestrictedTransform(g, 1.0 / self.d)

    @classmethod
    def from_top_rows(cls, top, d) -> "RestrictedTransform":
        """Build ``g`` from its first three rows (a 3 x 4 array)."""
        g = np.vstack([np.asarray(top, dtype=float).reshape(3, 4), AFFINE_LAST_ROW])
        return cls(g, d)


def act(t: FullTransform, A) -> np.ndarray:
    """Return ``g @ A @ diag(d)``."""
    A = as_config(A)
    if t.n != A.shape[1]:
        raise InvalidInputError(f"transform has {t.n} diagonal entries but A has {A.shape[1]} columns")
    return (t.g @ A) * t.d


def scalar_stabilizer_check(lam: float, A, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Check that ``(lam * Id_4, lam^-1 * ones)`` fixes ``A``.

    This element is not the identity for ``lam != 1`` yet fixes every
    configuration, so the full group never acts freely.
    """
    lam = float(lam)
    if not np.isfinite(lam) or abs(lam) <= tol.zero_tol:
        raise InvalidInputError(f"lambda must be finite and non-zero, got {lam}")
    A = as_config(A)
    t = FullTransform(lam * np.eye(4), np.full(A.shape[1], 1.0 / lam))
    residual = rel_residual(act(t, A), A)
    return {"holds": residual <= tol.residual_rel_tol, "residual": residual, "lambda": lam}


def paper_example_report(alpha: float, beta: float, gamma: float, delta: float,
                         tol: Tolerances = DEFAULT_TOL) -> dict:
    """Evaluate ``g A d`` for the displayed 4 x 6 example.

    ``g = diag(alpha, beta, gamma, delta)`` and
    ``d = diag(1/alpha, 1/beta, 1/gamma, 1/delta, 1, 1)``. Columns 5 and 6 of
    ``g A d`` come out as ``(alpha, beta, gamma, delta)`` and
    ``(alpha, 2 beta, 3 gamma, 5 delta)``, so the identity only holds when all
    four parameters equal 1. Offending columns are reported 1-based.
    """
    params = np.array([alpha, beta, gamma, delta], dtype=float)
    if not np.all(np.isfinite(params)) or np.any(np.abs(params) <= tol.zero_tol):
        raise InvalidInputError("alpha, beta, gamma, delta must be finite and non-zero")
    t = FullTransform(np.diag(params), np.concatenate([1.0 / params, [1.0, 1.0]]))
    A = PAPER_EXAMPLE_A
    diff = act(t, A) - A
    col_err = np.max(np.abs(diff), axis=0)
    scale = np.max(np.abs(A))
    offending = [int(j + 1) for j in np.flatnonzero(col_err > tol.residual_rel_tol * scale)]
    residual = float(np.max(col_err))
    return {
        "holds": not offending,
        "residual": residual,
        "offending_columns": offending,
        "column_errors": col_err.tolist(),
    }


def random_restricted_transforms(rng: np.random.Generator, n: int, count: int,
                                 min_distance: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``count`` restricted transforms at max-norm distance >= ``min_distance`` from Id.

    Returns stacked arrays ``g`` of shape (count, 4, 4) and ``d`` of shape
    (count, n). The linear block is ``Id + U[-1/2, 1/2]``, the translation is
    ``U[-1, 1]``, and each ``d_i`` has modulus in [1/4, 2] with random sign.
    """
    gs = np.empty((count, 4, 4))
    ds = np.empty((count, n))
    filled = 0
    while filled < count:
        m = count - filled
        g = np.zeros((m, 4, 4))
        g[:, :3, :3] = np.eye(3) + rng.uniform(-0.5, 0.5, size=(m, 3, 3))
        g[:, :3, 3] = rng.uniform(-1.0, 1.0, size=(m, 3))
        g[:, 3, 3] = 1.0
        d = rng.uniform(0.25, 2.0, size=(m, n)) * rng.choice([-1.0, 1.0], size=(m, n))
        dist = np.maximum(
            np.abs(g - np.eye(4)).max(axis=(1, 2)),
            np.abs(d - 1.0).max(axis=1),
        )
        ok = (dist >= min_distance) & (np.abs(np.linalg.det(g)) > 1e-3)
        k = int(ok.sum())
        gs[filled:filled + k] = g[ok]
        ds[filled:filled + k] = d[ok]
        filled += k
    return gs, ds


def assert_free_restricted(A, trials: int = 1000, seed=None, tol: Tolerances = DEFAULT_TOL,
                           transforms: tuple[np.ndarray, np.ndarray] | None = None,
                           require_M: bool = True) -> dict:
    """Randomized falsification of freeness of the restricted action at ``A``.

    Samples ``trials`` restricted transforms away from the identity and checks
    that each one moves ``A`` by more than ``residual_rel_tol * ||A||``
    (max-norm, entrywise). ``transforms`` may supply pre-drawn ``(g, d)``
    stacks instead of sampling. ``require_M=False`` skips the membership
    check, which is only useful for probing counterexamples outside ``M``.
    """
    A = as_config(A)
    if require_M and not in_M(A, tol):
        raise InvalidInputError("assert_free_restricted requires a configuration in M")
    if transforms is None:
        gs, ds = random_restricted_transforms(np.random.default_rng(seed), A.shape[1], int(trials))
    else:
        gs, ds = transforms
    moved = np.einsum("kij,jn->kin", gs, A) * ds[:, None, :]
    scale = np.max(np.abs(A))
    displacement = np.abs(moved - A).max(axis=(1, 2)) / scale
    min_disp = float(displacement.min()) if displacement.size else float("inf")
    return {
        "all_moved": bool(np.all(displacement > tol.residual_rel_tol)),
        "max_fixed_residual": min_disp,
        "trials": int(displacement.size),
    }


def free_action_counterexample() -> tuple[np.ndarray, RestrictedTransform]:
    """A configuration outside ``M`` with a non-trivial restricted stabilizer.

    The configuration has a zero column; scaling that column by 2 (g = Id)
    leaves the matrix unchanged, so freeness genuinely needs the zero-free
    fourth row.
    """
    A = np.array(
        [
            [1, 0, 0, 0, 1],
            [0, 1, 0, 0, 1],
            [0, 0, 1, 0, 1],
            [1, 1, 1, 0, 1],
        ],
        dtype=float,
    )
    t = RestrictedTransform(np.eye(4), np.array([1.0, 1.0, 1.0, 2.0, 1.0]))
    return A, t


@dataclass(frozen=True, eq=False)
class ProperWitness:
    """Witness that ``g`` maps the compact set ``O(4) x {p}`` back onto itself."""

    g: np.ndarray
    k: np.ndarray
    p: np.ndarray
    d_prime: np.ndarray
    result: np.ndarray
    orthonormality_residual: float
    last_column_residual: float
    g_norm: float

    def to_json_obj(self) -> dict:
        return {
            "k": self.k.tolist(),
            "p": self.p.tolist(),
            "d_prime": self.d_prime.tolist(),
            "result": self.result.tolist(),
            "orthonormality_residual": self.orthonormality_residual,
            "last_column_residual": self.last_column_residual,
            "g_norm": self.g_norm,
        }


def nonproper_witness(g, p, tol: Tolerances = DEFAULT_TOL) -> ProperWitness:
    """Build the SVD witness for a ``g`` fixing the unit vector ``p``.

    With ``g = u s v^T``, the configuration ``[v | p]`` scaled by
    ``d' = (1/s_1, ..., 1/s_4, 1)`` is sent to ``[u | p]``, which again has four
    orthonormal columns followed by ``p``. Since this works for every ``g``
    fixing ``p``, including ones of arbitrarily large norm, the set of group
    elements returning ``O(4) x {p}`` to itself is not relatively compact.
    """
    g = np.array(g, dtype=float)
    p = np.array(p, dtype=float).ravel()
    if g.shape != (4, 4) or p.shape != (4,):
        raise InvalidInputError("g must be 4x4 and p a 4-vector")
    if not (np.all(np.isfinite(g)) and np.all(np.isfinite(p))):
        raise InvalidInputError("non-finite input")
    if abs(np.linalg.norm(p) - 1.0) > 1e-9:
        raise InvalidInputError("p must be a unit vector")
    if abs(np.linalg.det(g)) <= tol.zero_tol:
        raise InvalidInputError("g is singular")
    if np.linalg.norm(g @ p - p) > 1e-9:
        raise InvalidInputError("p must satisfy g p = p")
    u, s, vt = np.linalg.svd(g)
    v = vt.T
    config = np.column_stack([v, p])
    d_prime = np.concatenate([1.0 / s, [1.0]])
    result = (g @ config) * d_prime
    q = result[:, :4]
    return ProperWitness(
        g=g,
        k=v,
        p=p,
        d_prime=d_prime,
        result=result,
        orthonormality_residual=float(np.max(np.abs(q.T @ q - np.eye(4)))),
        last_column_residual=float(np.max(np.abs(result[:, 4] - p))),
        g_norm=float(s[0]),
    )
