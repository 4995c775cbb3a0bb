"""Orbit-equivalence of perspective images under the restricted group.

Two images ``P`` (columns ``(x, y, 1, t)``) and ``Q`` (columns
``(x', y', 1, t')``) are equivalent when an affine ``g`` satisfies
``iota(g P) == Q``. Writing this out column by column gives three linear
systems sharing one n x 4 coefficient matrix with rows
``(x t', y t', z t', t t')``::

    row 1 of g:  C r1 = t * x'
    row 2 of g:  C r2 = t * y'
    row 3 of g:  C r3 = t

Row 4 of ``g`` is pinned to ``(0, 0, 0, 1)``. The systems are solved by least
squares and accepted when every relative residual is within tolerance.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateViewError, InvalidInputError
from .group_action import AFFINE_LAST_ROW, random_restricted_transforms
from .linalg_core import DEFAULT_TOL, Tolerances, numerical_rank, random_config, rel_residual
from .projection import as_image, compatible_d, iota


class Status(str, enum.Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    DEGENERATE = "Degenerate"


EXIT_CODES = {Status.EQUIVALENT: 0, Status.NOT_EQUIVALENT: 1, Status.DEGENERATE: 2}


@dataclass(frozen=True, eq=False)
class EquivalenceDecision:
    status: Status
    residual: float
    ranks: list[int]
    g: np.ndarray | None = None
    d: np.ndarray | None = None
    system_residuals: list[float] = field(default_factory=list)

    @property
    def equivalent(self) -> bool:
        return self.status is Status.EQUIVALENT

    def to_json_obj(self) -> dict:
        return {
            "status": self.status.value,
            "g": None if self.g is None else self.g.ravel().tolist(),
            "d": None if self.d is None else self.d.tolist(),
            "residual": self.residual,
            "ranks": list(self.ranks),
        }


def _validate_pair(P, Q) -> tuple[np.ndarray, np.ndarray]:
    P = as_image(P)
    Q = as_image(Q)
    if P.shape != Q.shape:
        raise InvalidInputError(f"images have different sizes: {P.shape[1]} vs {Q.shape[1]} columns")
    for name, M in (("P", P), ("Q", Q)):
        if np.any(M[3] == 0.0):
            raise InvalidInputError(f"{name} has a zero entry in its fourth row")
    return P, Q


def build_systems(P, Q) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient matrix ``C`` (n x 4) and right-hand sides ``B`` (n x 3, one per row of g)."""
    P, Q = _validate_pair(P, Q)
    x, y, z, t = P
    xq, yq, _, tq = Q
    C = np.column_stack([x * tq, y * tq, z * tq, t * tq])
    B = np.column_stack([t * xq, t * yq, t])
    return C, B


def _ranks(C: np.ndarray, B: np.ndarray, tol: Tolerances) -> list[int]:
    return [numerical_rank(C, tol)] + [numerical_rank(np.column_stack([C, B[:, k]]), tol) for k in range(3)]


def degeneracy_check(P, Q, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Ranks of the coefficient matrix and of the three augmented n x 5 matrices.

    ``rank4_ok`` holds when all four ranks equal 4, i.e. each system has a
    unique exact solution.
    """
    C, B = build_systems(P, Q)
    ranks = _ranks(C, B, tol)
    return {"rank4_ok": all(r == 4 for r in ranks), "ranks": ranks}


def recover_transform(P, Q, tol: Tolerances = DEFAULT_TOL) -> EquivalenceDecision:
    """Decide whether ``Q`` lies in the restricted orbit of ``P`` and recover ``(g, d)``."""
    C, B = build_systems(P, Q)
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    ranks = _ranks(C, B, tol)
    sol, *_ = np.linalg.lstsq(C, B, rcond=None)
    sys_res = [rel_residual(C @ sol[:, k], B[:, k]) for k in range(3)]
    residual = max(sys_res)
    if ranks[0] < 4:
        return EquivalenceDecision(Status.DEGENERATE, residual, ranks, system_residuals=sys_res)

    g = np.vstack([sol.T, AFFINE_LAST_ROW])

    if residual > tol.residual_rel_tol or abs(np.linalg.det(g)) <= tol.zero_tol:
        return EquivalenceDecision(Status.NOT_EQUIVALENT, residual, ranks, system_residuals=sys_res)
    try:
        d = compatible_d(g, P, tol)
        reassembled = rel_residual(iota(g @ P, tol), Q)
    except DegenerateViewError:
        return EquivalenceDecision(Status.NOT_EQUIVALENT, residual, ranks, system_residuals=sys_res)
    residual = max(residual, reassembled)
    if reassembled > tol.residual_rel_tol:
        return EquivalenceDecision(Status.NOT_EQUIVALENT, residual, ranks, system_residuals=sys_res)
    if any(r > 4 for r in ranks[1:]):
        # Residual test says consistent, rank test says not: ambiguous instance.
        return EquivalenceDecision(Status.DEGENERATE, residual, ranks, system_residuals=sys_res)
    return EquivalenceDecision(Status.EQUIVALENT, residual, ranks, g=g, d=d, system_residuals=sys_res)


decide = recover_transform


def random_round_trip(rng: np.random.Generator, n: int, margin: float = 0.1,
                      tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Draw a scene ``X`` (fourth row ones) and an affine ``g`` for round-trip tests.

    Both ``X`` and ``g X`` keep every depth at least ``margin`` away from the
    focal plane, so the resulting images are well conditioned.
    """
    for _ in range(10_000):
        X = random_config(n, rng=rng, cls="t_ones", tol=tol)
        gs, _ = random_restricted_transforms(rng, n, 1)
        g = gs[0]
        if np.min(np.abs(X[2])) >= margin and np.min(np.abs(g[2] @ X)) >= margin:
            return X, g
    raise RuntimeError("could not draw a well-conditioned round-trip instance")


def _rel_err(A, B) -> float:
    return float(np.linalg.norm(A - B) / np.linalg.norm(B))


def relation_axioms_suite(samples: int = 100, seed=None, tol: Tolerances = DEFAULT_TOL,
                          pair_tol: float = 1e-8, transitive_tol: float = 1e-7) -> dict:
    """Check reflexivity, symmetry and transitivity on random image triples.

    Each sample draws a scene ``X`` and two affine motions ``g1, g2`` and
    forms ``P = iota(X)``, ``Q = iota(g1 X)``, ``R = iota(g2 g1 X)``.
    Symmetry additionally requires ``g_QP @ g_PQ == Id`` within ``pair_tol``;
    transitivity requires ``g_PR == g_QR @ g_PQ`` within ``transitive_tol``.
    """
    rng = np.random.default_rng(seed)
    ok = {"reflexive_ok": True, "symmetric_ok": True, "transitive_ok": True}
    worst = {"reflexive": 0.0, "symmetric": 0.0, "transitive": 0.0}
    for _ in range(int(samples)):
        n = int(rng.integers(4, 13))
        X, g1 = random_round_trip(rng, n, tol=tol)
        g2 = None
        for _ in range(1000):
            cand, _ = random_restricted_transforms(rng, n, 1)
            if np.min(np.abs(cand[0][2] @ (g1 @ X))) >= 0.1:
                g2 = cand[0]
                break
        if g2 is None:
            raise RuntimeError("could not draw a second motion")
        P, Q, R = iota(X, tol), iota(g1 @ X, tol), iota(g2 @ g1 @ X, tol)

        pp = recover_transform(P, P, tol)
        if not pp.equivalent:
            ok["reflexive_ok"] = False
        else:
            worst["reflexive"] = max(worst["reflexive"], _rel_err(pp.g, np.eye(4)))
            ok["reflexive_ok"] &= worst["reflexive"] <= pair_tol

        pq, qp = recover_transform(P, Q, tol), recover_transform(Q, P, tol)
        if pq.equivalent != qp.equivalent or not pq.equivalent:
            ok["symmetric_ok"] = False
        else:
            err = _rel_err(qp.g @ pq.g, np.eye(4))
            worst["symmetric"] = max(worst["symmetric"], err)
            ok["symmetric_ok"] &= err <= pair_tol

        qr, pr = recover_transform(Q, R, tol), recover_transform(P, R, tol)
        if not (pq.equivalent and qr.equivalent and pr.equivalent):
            ok["transitive_ok"] = False
        else:
            err = _rel_err(pr.g, qr.g @ pq.g)
            worst["transitive"] = max(worst["transitive"], err)
            ok["transitive_ok"] &= err <= transitive_tol
    return {**{k: bool(v) for k, v in ok.items()}, "samples": int(samples), "max_errors": worst}
