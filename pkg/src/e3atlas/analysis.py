"""Numerical verification suites: orbit dimension by tangent rank,
local-unitary invariance fuzzing, Monte Carlo membership, and qubit
permutation symmetry checks.

Every report is a pure function of (parameters, seed): sample m of a run
draws its own child seed, so results do not depend on batching or on how
many workers execute the loop.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .invariants import invariants_J
from .orbitspace import ALL_CONDITIONS, membership
from .qstate import (
    Permutation,
    PureState2,
    PureState3,
    apply_local_unitary,
    apply_qubit_permutation,
    child_seed,
    haar_random_state3,
    random_local_unitary,
)

J_NAMES = ("J1", "J2", "J3", "J4", "J5", "J6")
GAP_FLOOR = 1e3

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True)
class TangentRankResult:
    """Rank decision for the tangent space of a local-unitary orbit."""

    dimension: int
    singular_values: tuple
    gap: float

    @property
    def indeterminate(self) -> bool:
        """True when retained and discarded singular values are not cleanly split."""
        return self.gap < GAP_FLOOR


@dataclass(frozen=True)
class VerificationReport:
    samples: int
    worst: dict
    failures: tuple
    tol: float

    def to_json_dict(self) -> dict:
        return {
            "samples": self.samples,
            "worst": dict(self.worst),
            "failures": [list(f) for f in self.failures],
            "tol": self.tol,
        }


def _apply_pauli(axis: str, amp: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    t = amp.reshape([2] * n_qubits)
    t = np.tensordot(_PAULI[axis], t, axes=([1], [qubit]))
    return np.moveaxis(t, 0, qubit).reshape(-1)


def _tangent_rank(amp: np.ndarray, n_qubits: int, rank_tol: float) -> TangentRankResult:
    # generators i*sigma_a on each qubit; project out the complex line
    # through the state so the count matches orbits of rays, not vectors
    rows = []
    for qubit in range(n_qubits):
        for axis in "xyz":
            v = 1j * _apply_pauli(axis, amp, qubit, n_qubits)
            v = v - amp * np.vdot(amp, v)
            rows.append(np.concatenate([v.real, v.imag]))
    s = np.linalg.svd(np.array(rows), compute_uv=False)
    threshold = rank_tol * max(float(s[0]), 1.0)
    dim = int(np.sum(s > threshold))
    if 0 < dim < s.shape[0] and s[dim] > 0:
        gap = float(s[dim - 1] / s[dim])
    else:
        gap = float("inf")
    return TangentRankResult(dimension=dim,
                             singular_values=tuple(float(v) for v in s),
                             gap=gap)


def orbit_dimension3(psi: PureState3, rank_tol: float = 1e-8) -> TangentRankResult:
    """Dimension of the local-unitary orbit through a three-qubit state.

    Builds the nine tangent vectors i*sigma_a applied per qubit, removes the
    components along the complex line through psi, stacks them as real
    16-vectors and counts singular values above rank_tol * max(s_max, 1).
    """
    return _tangent_rank(psi.amp, 3, rank_tol)


def orbit_dimension2(psi: PureState2, rank_tol: float = 1e-8) -> TangentRankResult:
    """Same construction with the six generators on two qubits."""
    return _tangent_rank(psi.amp, 2, rank_tol)


def check_lu_invariance(trials: int, seed: int = 0, tol: float = 1e-10) -> VerificationReport:
    """Fuzz the invariance of the coordinate map under local unitaries.

    Each trial draws an independent (state, local unitary) pair and compares
    the six coordinates before and after the action.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    worst = {name: 0.0 for name in J_NAMES}
    failures = []
    for m in range(trials):
        state_seed = child_seed(seed, 2 * m)
        psi = haar_random_state3(state_seed)
        u = random_local_unitary(child_seed(seed, 2 * m + 1))
        before = invariants_J(psi).to_array()
        after = invariants_J(apply_local_unitary(u, psi)).to_array()
        dev = np.abs(after - before)
        for idx, name in enumerate(J_NAMES):
            d = float(dev[idx])
            if d > worst[name]:
                worst[name] = d
            if d > tol:
                failures.append((state_seed, name, d))
    return VerificationReport(samples=trials, worst=worst,
                              failures=tuple(failures), tol=float(tol))


def _membership_violations(m: int, seed: int, tol: float):
    s = child_seed(seed, m)
    report = membership(invariants_J(haar_random_state3(s)), tol)
    return s, {name: report.violation(name) for name in ALL_CONDITIONS}


def monte_carlo_membership(samples: int, seed: int = 0, tol: float = 1e-9,
                           workers: int = 1) -> VerificationReport:
    """Check that Haar-random states land inside the orbit space.

    Reports the worst violation magnitude per condition (values <= tol mean
    the condition held).  The report is identical for any worker count.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda m: _membership_violations(m, seed, tol),
                                 range(samples), chunksize=256))
    else:
        rows = [_membership_violations(m, seed, tol) for m in range(samples)]
    worst = {name: 0.0 for name in ALL_CONDITIONS}
    failures = []
    for s, violations in rows:
        for name, v in violations.items():
            if v > worst[name]:
                worst[name] = v
            if v > tol:
                failures.append((s, name, v))
    return VerificationReport(samples=samples, worst=worst,
                              failures=tuple(failures), tol=float(tol))


_QUBIT_PERMS = ("e", "(12)", "(13)", "(23)", "(123)", "(132)")


def permutation_symmetry_check(psi: PureState3, tol: float = 1e-10) -> VerificationReport:
    """Verify the transformation law of the coordinates under qubit relabeling.

    For a qubit permutation p, component J_i of the permuted state equals
    J_{p^{-1}(i)} of the original for i = 1, 2, 3 (each of the first three
    coordinates follows the qubit it excludes), while J4, J5 and J6 must be
    strictly unchanged, with no sign flip, under every permutation.
    """
    base = invariants_J(psi).to_array()
    worst = {name: 0.0 for name in J_NAMES}
    failures = []
    for text in _QUBIT_PERMS:
        p = Permutation.from_cycles(text, 3)
        permuted = invariants_J(apply_qubit_permutation(p, psi)).to_array()
        inv = p.inverse()
        expected = np.array([base[inv(1) - 1], base[inv(2) - 1], base[inv(3) - 1],
                             base[3], base[4], base[5]])
        dev = np.abs(permuted - expected)
        for idx, name in enumerate(J_NAMES):
            d = float(dev[idx])
            if d > worst[name]:
                worst[name] = d
            if d > tol:
                failures.append((text, name, d))
    return VerificationReport(samples=len(_QUBIT_PERMS), worst=worst,
                              failures=tuple(failures), tol=float(tol))


def monte_carlo_permutation(trials: int, seed: int = 0, tol: float = 1e-10) -> VerificationReport:
    """Run the permutation symmetry check on Haar-random states."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    worst = {name: 0.0 for name in J_NAMES}
    failures = []
    for m in range(trials):
        s = child_seed(seed, m)
        report = permutation_symmetry_check(haar_random_state3(s), tol)
        for name, v in report.worst.items():
            if v > worst[name]:
                worst[name] = v
        for text, name, d in report.failures:
            failures.append((s, f"{name}@{text}", d))
    return VerificationReport(samples=trials, worst=worst,
                              failures=tuple(failures), tol=float(tol))
