"""Acceptance battery: one function per property, each returning a :class:`CheckResult`."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import consistency as cons
from .equivalence import Status, random_round_trip, recover_transform, relation_axioms_suite
from .group_action import (
    assert_free_restricted,
    nonproper_witness,
    paper_example_report,
    random_restricted_transforms,
    scalar_stabilizer_check,
)
from .linalg_core import DEFAULT_TOL, Tolerances, in_M_tilde, random_config, rel_residual
from .projection import compatible_d, iota, verify_intertwining


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _rng(seed, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), index])


def _intertwining_pair(rng, tol):
    n = int(rng.integers(4, 13))
    X = random_config(n, rng=rng, cls="M_tilde", tol=tol)
    while True:
        gs, _ = random_restricted_transforms(rng, n, 1)
        if in_M_tilde(gs[0] @ X, tol) and np.min(np.abs(gs[0][2] @ X)) > 10 * tol.zero_tol:
            return gs[0], X


def check_intertwining(seed=0, trials=1000, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    rng = _rng(seed, 1)
    worst = 0.0
    for _ in range(trials):
        g, X = _intertwining_pair(rng, tol)
        worst = max(worst, verify_intertwining(g, X, tol, check_uniqueness=False)["residual"])
    return CheckResult("01_intertwining", worst < 1e-10, {"trials": trials, "max_residual": worst, "bound": 1e-10})


def check_round_trip(seed=0, trials=1000, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    rng = _rng(seed, 2)
    worst_g = worst_d = 0.0
    failures = 0
    for _ in range(trials):
        n = int(rng.integers(4, 13))
        X, g = random_round_trip(rng, n, tol=tol)
        P, Q = iota(X, tol), iota(g @ X, tol)
        dec = recover_transform(P, Q, tol)
        if not dec.equivalent:
            failures += 1
            continue
        worst_g = max(worst_g, float(np.linalg.norm(dec.g - g) / np.linalg.norm(g)))
        d_ref = compatible_d(g, P, tol)
        worst_d = max(worst_d, float(np.max(np.abs(dec.d - d_ref) / np.abs(d_ref))))
    passed = failures == 0 and worst_g <= 1e-8 and worst_d <= 1e-8
    return CheckResult("02_round_trip", passed, {
        "trials": trials, "not_equivalent": failures, "max_g_rel_err": worst_g, "max_d_rel_err": worst_d, "bound": 1e-8,
    })


def check_free_action(seed=0, configs=1000, transforms=1000, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    rng = _rng(seed, 3)
    min_disp = np.inf
    all_moved = True
    for _ in range(configs):
        n = int(rng.integers(4, 13))
        A = random_config(n, rng=rng, cls="M", tol=tol)
        batch = random_restricted_transforms(rng, n, transforms)
        report = assert_free_restricted(A, tol=tol, transforms=batch)
        all_moved &= report["all_moved"]
        min_disp = min(min_disp, report["max_fixed_residual"])
    passed = bool(all_moved) and min_disp > 1e-6
    return CheckResult("03_free_action", passed, {
        "pairs": configs * transforms, "min_relative_displacement": float(min_disp), "bound": 1e-6,
    })


def check_scalar_stabilizer(seed=0, trials=100, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    rng = _rng(seed, 4)
    worst = 0.0
    for _ in range(trials):
        lam = 0.0
        while abs(lam) <= tol.zero_tol:
            lam = float(rng.uniform(-1e3, 1e3))
        A = random_config(int(rng.integers(4, 13)), rng=rng, cls="M", tol=tol)
        worst = max(worst, scalar_stabilizer_check(lam, A, tol)["residual"])
    return CheckResult("04_full_action_not_free", worst < 1e-12, {"trials": trials, "max_residual": worst, "bound": 1e-12})


def check_paper_example(seed=0, trials=200, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    rng = _rng(seed, 5)
    ones = paper_example_report(1, 1, 1, 1, tol)
    flagged = paper_example_report(2, 1, 1, 1, tol)
    iff_ok = ones["holds"] and ones["residual"] == 0.0
    for _ in range(trials):
        params = rng.choice([1.0, 2.0, -1.0, 0.5, 3.0], size=4)
        holds = paper_example_report(*params, tol=tol)["holds"]
        iff_ok &= holds == bool(np.all(params == 1.0))
    passed = bool(iff_ok) and not flagged["holds"] and flagged["offending_columns"] == [5, 6] \
        and flagged["residual"] >= 1.0
    return CheckResult("05_printed_example", passed, {
        "unit_params": ones, "alpha_2": {k: flagged[k] for k in ("holds", "residual", "offending_columns")},
    })


def check_nonproper_witness(seed=0, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    p = np.array([0.0, 1.0, 0.0, 0.0])
    rows, norms = [], []
    passed = True
    for t in (10.0, 1e2, 1e3):
        w = nonproper_witness(np.diag([t, 1.0, 1.0, 1.0]), p, tol)
        ok = w.orthonormality_residual < 1e-12 and w.last_column_residual < 1e-12 and w.g_norm == t
        passed &= ok
        norms.append(w.g_norm)
        rows.append({"t": t, "orthonormality_residual": w.orthonormality_residual,
                     "last_column_residual": w.last_column_residual, "g_norm": w.g_norm})
    passed &= all(a < b for a, b in zip(norms, norms[1:]))
    return CheckResult("06_nonproper_witness", bool(passed), {"family": rows})


def check_relation_axioms(seed=0, samples=100, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    report = relation_axioms_suite(samples, seed=[int(seed), 7], tol=tol)
    passed = report["reflexive_ok"] and report["symmetric_ok"] and report["transitive_ok"]
    return CheckResult("07_relation_axioms", passed, report)


def check_consistency_theorem(seed=0) -> CheckResult:
    exhaustive = cons.exhaustive_theorem_check(max_size=5, max_tuples=3)
    S, reps = cons.fingers_instance()
    fingers = cons.pairwise_consistent(reps)
    G = cons.automorphisms(S)
    swap = reps[1]
    has_swap = any(phi.images == swap.images for phi in cons.involutions(G))
    witness_ok = fingers["witness"] is not None and tuple(fingers["witness"][2:]) == (1, 2)
    passed = exhaustive["counterexamples"] == 0 and not fingers["consistent"] and witness_ok and has_swap
    return CheckResult("08_consistency_theorem", passed, {
        **exhaustive, "fingers_witness": fingers["witness"], "fingers_swap_is_involution": has_swap,
    })


def check_idempotence(seed=0, trials=1000, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    rng = _rng(seed, 9)
    third_exact = True
    worst = 0.0
    for _ in range(trials):
        X = random_config(int(rng.integers(4, 13)), rng=rng, cls="M_tilde", tol=tol)
        once = iota(X, tol)
        twice = iota(once, tol)
        third_exact &= bool(np.all(twice[2] == once[2]) and np.all(once[2] == 1.0))
        rest = np.delete(np.arange(4), 2)
        worst = max(worst, rel_residual(twice[rest], once[rest]))
    passed = third_exact and worst < 1e-14
    return CheckResult("09_idempotence", passed, {"trials": trials, "third_row_exact": third_exact, "max_rel_diff": worst})


def check_negative_control(seed=0, trials=1000, delta=1e-3, tol: Tolerances = DEFAULT_TOL) -> CheckResult:
    """Perturb one entry (rows 1, 2 or 4) of a round-trip target image.

    Uses n >= 5: with four points every pair of generic images is
    equivalent, so a perturbed image is still in the orbit.
    """
    rng = _rng(seed, 10)
    counts = {s.value: 0 for s in Status}
    for _ in range(trials):
        n = int(rng.integers(5, 13))
        X, g = random_round_trip(rng, n, tol=tol)
        P = iota(X, tol)
        Q = np.array(iota(g @ X, tol))
        Q[rng.choice([0, 1, 3]), rng.integers(n)] += delta
        counts[recover_transform(P, Q, tol).status.value] += 1
    rate = counts[Status.NOT_EQUIVALENT.value] / trials
    passed = rate >= 0.99 and counts[Status.EQUIVALENT.value] == 0
    return CheckResult("10_negative_control", passed, {"trials": trials, "counts": counts, "not_equivalent_rate": rate})


CHECKS = (
    check_intertwining,
    check_round_trip,
    check_free_action,
    check_scalar_stabilizer,
    check_paper_example,
    check_nonproper_witness,
    check_relation_axioms,
    check_consistency_theorem,
    check_idempotence,
    check_negative_control,
)


def run_all(seed=0) -> list[CheckResult]:
    results = [check(seed=seed) for check in CHECKS]
    return sorted(results, key=lambda r: r.name)


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check'.ljust(width)}  result"]
    lines += [f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL'}" for r in results]
    return "\n".join(lines)
