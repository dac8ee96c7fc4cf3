"""Geometry of the three-qubit orbit space in (b1..b6) coordinates.

Membership in the image of the invariant map, the derived quantities
delta_beta and F, classification into the cell taxonomy, and synthesis of
a standard-form representative state from any feasible invariant vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConsistencyError,
    NegativeProductError,
    NotInOrbitSpaceError,
    OutOfRangeError,
    UnclassifiableError,
)
from .invariants import Beta, StandardState, invariants_J, j_of_standard
from .qstate import PureState3

DEFAULT_TOL = 1e-9
_SYNTH_DRIFT_TOL = 1e-6

# conditions are reported as slacks (satisfied when >= -tol) except the
# single equality, reported as an absolute residual (satisfied when <= tol)
INEQUALITY_CONDITIONS = (
    "b1_range", "b2_range", "b3_range", "b4_range",
    "b5_lower", "b4_plus_b5", "b5_sq_bound", "delta_beta",
)
EQUALITY_CONDITIONS = ("b6_circle",)
ALL_CONDITIONS = INEQUALITY_CONDITIONS + EQUALITY_CONDITIONS


def delta_beta(beta: Beta) -> float:
    """(b5+b4)^2 - 4 (b1+b4)(b2+b4)(b3+b4); nonnegative on the orbit space."""
    b1, b2, b3, b4, b5, _ = beta.as_tuple()
    return float((b5 + b4) ** 2 - 4.0 * (b1 + b4) * (b2 + b4) * (b3 + b4))


def f_value(beta: Beta) -> float:
    """Defining function of the fixed-b4 deformed tetrahedron.

    F = b4 (1/4 - b4) + sqrt(b1 b2 b3) - b1 b2 - b1 b3 - b2 b3
        - (b1 + b2 + b3) b4
    The region F >= 0 holds the admissible (b1, b2, b3) for 0 < b4 < 1/4.
    """
    b1, b2, b3, b4, _, _ = beta.as_tuple()
    prod = b1 * b2 * b3
    if prod < -1e-12:
        raise NegativeProductError(f"b1*b2*b3 = {prod} is negative")
    root = math.sqrt(max(prod, 0.0))
    return float(b4 * (0.25 - b4) + root
                 - b1 * b2 - b1 * b3 - b2 * b3 - (b1 + b2 + b3) * b4)


@dataclass(frozen=True)
class MembershipReport:
    """Per-condition residuals for the orbit-space inequality system."""

    in_x: bool
    residuals: dict
    tol: float

    def violated(self) -> tuple:
        out = []
        for name in INEQUALITY_CONDITIONS:
            if self.residuals[name] < -self.tol:
                out.append(name)
        for name in EQUALITY_CONDITIONS:
            if self.residuals[name] > self.tol:
                out.append(name)
        return tuple(out)

    def violation(self, name: str) -> float:
        """Magnitude of violation; <= tol means the condition holds."""
        r = self.residuals[name]
        return -r if name in INEQUALITY_CONDITIONS else r


def membership(beta: Beta, tol: float = DEFAULT_TOL) -> MembershipReport:
    """Check the six defining conditions plus the three implied ones.

    Inequalities enter as slacks (>= -tol passes); the sixth condition is
    the equality
        [ (b5+b4)^2 - 4 (b1+b4)(b2+b4)(b3+b4) ] * [ b5^2 - 4 b1 b2 b3 ]
        + 4 b6^2 = 0,
    whose absolute residual must stay <= tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    b1, b2, b3, b4, b5, b6 = beta.as_tuple()
    db = delta_beta(beta)
    bottom = b5 * b5 - 4.0 * b1 * b2 * b3
    res = {
        "b1_range": min(b1, 0.25 - b1),
        "b2_range": min(b2, 0.25 - b2),
        "b3_range": min(b3, 0.25 - b3),
        "b4_range": min(b4, 0.25 - b4),
        "b5_lower": b4 / 4.0 + b5 / 2.0
                    - (b1 * b2 + b1 * b3 + b2 * b3 + (b1 + b2 + b3) * b4 + b4 * b4),
        "b4_plus_b5": b4 + b5,
        "b5_sq_bound": -bottom,
        "delta_beta": db,
        "b6_circle": abs(db * bottom + 4.0 * b6 * b6),
    }
    res = {k: float(v) for k, v in res.items()}
    in_x = (all(res[k] >= -tol for k in INEQUALITY_CONDITIONS)
            and all(res[k] <= tol for k in EQUALITY_CONDITIONS))
    return MembershipReport(in_x=in_x, residuals=res, tol=float(tol))


# ---------------------------------------------------------------------------
# the cell taxonomy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellId:
    """One cell of the orbit-space decomposition, with its metadata row."""

    name: str
    acin_type: str | None
    slocc_class: str
    orbit_dimension: int


THREE_QUBIT_CELLS = (
    # b4 = 0 slice (where b5 = 2 sqrt(b1 b2 b3) and b6 = 0)
    CellId("e0_A-B-C", "1", "A-B-C", 6),
    CellId("e1_A-BC", "2a", "A-BC", 7),
    CellId("e0_A-BC", "2a", "A-BC", 5),
    CellId("e1_B-AC", "2a", "B-AC", 7),
    CellId("e0_B-AC", "2a", "B-AC", 5),
    CellId("e1_C-AB", "2a", "C-AB", 7),
    CellId("e0_C-AB", "2a", "C-AB", 5),
    CellId("e3_W", "4a", "W", 9),
    CellId("e2_W", "3a", "W", 8),
    # 0 < b4 < 1/4
    CellId("e1_GHZ", "2b", "GHZ", 7),
    CellId("e1_A_GHZ", "3b", "GHZ", 8),
    CellId("e1_B_GHZ", "3b", "GHZ", 8),
    CellId("e1_C_GHZ", "3b", "GHZ", 8),
    CellId("e2_A_GHZ", "3b", "GHZ", 8),
    CellId("e2_B_GHZ", "3b", "GHZ", 8),
    CellId("e2_C_GHZ", "3b", "GHZ", 8),
    CellId("e2_BC", "5", "GHZ", 9),
    CellId("e2_AC", "4b", "GHZ", 9),
    CellId("e2_AB", "4b", "GHZ", 9),
    CellId("e3_BC", "5", "GHZ", 9),
    CellId("e3_AC", "4b", "GHZ", 9),
    CellId("e3_AB", "4b", "GHZ", 9),
    CellId("e3_ABC", "5", "GHZ", 9),
    CellId("e4", "5", "GHZ", 9),
    CellId("e5", "5", "GHZ", 9),
    # b4 = 1/4
    CellId("e0_GHZ", "2b", "GHZ", 7),
)

TWO_QUBIT_CELLS = (
    CellId("e0_SEP", None, "unentangled", 4),
    CellId("e1", None, "entangled", 5),
    CellId("e0_EPR", None, "entangled", 3),
)

CELL_BY_NAME = {c.name: c for c in THREE_QUBIT_CELLS + TWO_QUBIT_CELLS}

_AXIS_CELL = {1: ("e1_A-BC", "e0_A-BC"), 2: ("e1_B-AC", "e0_B-AC"), 3: ("e1_C-AB", "e0_C-AB")}
_AXIS_GHZ_CELL = {1: ("e1_A_GHZ", "e2_A_GHZ"), 2: ("e1_B_GHZ", "e2_B_GHZ"), 3: ("e1_C_GHZ", "e2_C_GHZ")}
_PAIR_CELL = {1: ("e2_BC", "e3_BC"), 2: ("e2_AC", "e3_AC"), 3: ("e2_AB", "e3_AB")}


def classify(beta: Beta, tol: float = DEFAULT_TOL) -> CellId:
    """Assign a member vector to its cell.

    Equality-defined (lower-dimensional) cells win ties: every equality is
    tested before the corresponding strict inequality, so a vector within
    tol of a boundary lands on the boundary cell.
    """
    report = membership(beta, tol)
    if not report.in_x:
        raise NotInOrbitSpaceError(
            f"not in the orbit space; violated: {', '.join(report.violated())}",
            violated=report.violated(), report=report)
    b = beta.as_tuple()
    b1, b2, b3, b4, b5, _ = b

    if abs(b4 - 0.25) <= tol:
        return CELL_BY_NAME["e0_GHZ"]

    if b4 <= tol:
        big = [i for i in (1, 2, 3) if b[i - 1] > tol]
        if not big:
            return CELL_BY_NAME["e0_A-B-C"]
        if len(big) == 1:
            i = big[0]
            interior, endpoint = _AXIS_CELL[i]
            return CELL_BY_NAME[endpoint if abs(b[i - 1] - 0.25) <= tol else interior]
        if len(big) == 3:
            pair_sum = b1 * b2 + b1 * b3 + b2 * b3
            bubble = math.sqrt(max(b1 * b2 * b3, 0.0))
            if abs(pair_sum - bubble) <= tol:
                return CELL_BY_NAME["e2_W"]
            if pair_sum < bubble - tol:
                return CELL_BY_NAME["e3_W"]
        raise UnclassifiableError(f"no b4=0 cell matches {b}")

    # 0 < b4 < 1/4
    big = [i for i in (1, 2, 3) if b[i - 1] > tol]
    if not big:
        return CELL_BY_NAME["e1_GHZ"]
    if len(big) == 1:
        i = big[0]
        cap = 0.25 - b4
        endpoint, interior = _AXIS_GHZ_CELL[i]
        if abs(b[i - 1] - cap) <= tol:
            return CELL_BY_NAME[endpoint]
        if b[i - 1] < cap - tol:
            return CELL_BY_NAME[interior]
        raise UnclassifiableError(f"axis value exceeds 1/4 - b4 for {b}")
    fv = f_value(beta)
    if len(big) == 2:
        (zero,) = (i for i in (1, 2, 3) if i not in big)
        face, interior = _PAIR_CELL[zero]
        if abs(fv) <= tol:
            return CELL_BY_NAME[face]
        if fv > tol:
            return CELL_BY_NAME[interior]
        raise UnclassifiableError(f"F = {fv} negative for member {b}")
    # all of b1, b2, b3 positive
    if abs(fv) <= tol:
        return CELL_BY_NAME["e3_ABC"]
    if fv > tol:
        gap = 2.0 * math.sqrt(max(b1 * b2 * b3, 0.0)) - b5
        if abs(gap) <= tol:
            return CELL_BY_NAME["e4"]
        if gap > tol:
            return CELL_BY_NAME["e5"]
    raise UnclassifiableError(f"no interior cell matches {b}")


def classify_two_qubit(c: float, tol: float = DEFAULT_TOL) -> CellId:
    """Cell of a two-qubit entanglement type from its concurrence."""
    if c < -tol or c > 1.0 + tol:
        raise OutOfRangeError(f"concurrence {c} outside [0, 1]")
    if c <= tol:
        return CELL_BY_NAME["e0_SEP"]
    if c >= 1.0 - tol:
        return CELL_BY_NAME["e0_EPR"]
    return CELL_BY_NAME["e1"]


# ---------------------------------------------------------------------------
# synthesis: a standard-form state for any feasible invariant vector
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SynthesisResult:
    state: StandardState
    case_label: str


def _sqrt0(x: float) -> float:
    """sqrt with tiny negative radicands clamped to zero."""
    if x < -1e-12:
        raise ConsistencyError(f"radicand {x} below -1e-12")
    return math.sqrt(max(x, 0.0))


def _synthesis_parts(beta: Beta, tol: float):
    b1, b2, b3, b4, b5, b6 = beta.as_tuple()

    if b1 + b4 <= tol:
        # b1 = b4 = 0 forces b5 = b6 = 0 and b2*b3 = 0
        if b2 <= tol:
            lam0 = _sqrt0(0.5 + _sqrt0(0.25 - b3))
            return "1a", (lam0, 0j, 0.0, _sqrt0(0.5 - _sqrt0(0.25 - b3)), 0.0)
        lam0 = _sqrt0(0.5 + _sqrt0(0.25 - b2))
        return "1b", (lam0, 0j, _sqrt0(0.5 - _sqrt0(0.25 - b2)), 0.0, 0.0)

    db = delta_beta(beta)
    lam0 = _sqrt0((b4 + b5 + _sqrt0(db)) / (2.0 * (b1 + b4)))

    if lam0 <= math.sqrt(tol):
        # lam0 = 0 forces b4 = b5 = b6 = 0, b1 > 0, b2 = b3 = 0
        c1 = _sqrt0(0.5 + _sqrt0(0.25 - b1)) + 0j
        return "2a", (0.0, c1, 0.0, 0.0, _sqrt0(0.5 - _sqrt0(0.25 - b1)))

    if b4 <= tol:
        # here delta_beta = 0, so lam0^2 = b5 / (2 b1) with b5 > 0
        lam0 = _sqrt0(b5 / (2.0 * b1))
        c1 = _sqrt0(1.0 - b5 / (2.0 * b1) - 2.0 * b1 * b2 / b5 - 2.0 * b1 * b3 / b5) + 0j
        return "2b1", (lam0, c1, _sqrt0(2.0 * b1 * b2 / b5), _sqrt0(2.0 * b1 * b3 / b5), 0.0)

    if b2 <= tol:
        # b5 = b6 = 0 on this face
        return "2b2", (lam0, lam0 * _sqrt0(b1 / b4) + 0j,
                       0.0, _sqrt0(b3) / lam0, _sqrt0(b4) / lam0)
    if b3 <= tol:
        return "2b3", (lam0, lam0 * _sqrt0(b1 / b4) + 0j,
                       _sqrt0(b2) / lam0, 0.0, _sqrt0(b4) / lam0)

    # b2 b3 b4 > 0: the single phase carries the remaining freedom
    denom = math.sqrt(b2 * b3 * b4)
    re = (2.0 * b2 * b3 - lam0 * lam0 * b5) / (2.0 * lam0 * denom)
    if abs(db) <= tol:
        im = lam0 * _sqrt0(b1 * b2 * b3 - b5 * b5 / 4.0) / denom
        return "2b4", (lam0, re + 1j * im,
                       _sqrt0(b2) / lam0, _sqrt0(b3) / lam0, _sqrt0(b4) / lam0)
    im = lam0 * b6 / math.sqrt(b2 * b3 * b4 * db)
    return "2b5", (lam0, re + 1j * im,
                   _sqrt0(b2) / lam0, _sqrt0(b3) / lam0, _sqrt0(b4) / lam0)


def synthesize(beta: Beta, tol: float = DEFAULT_TOL) -> SynthesisResult:
    """Produce a standard-form state whose invariant vector is beta.

    The construction branches on which of (b1+b4), lam0, b4, b2, b3 and
    delta_beta vanish (to within tol); the selected branch is returned as
    the case_label for auditability.  The output is renormalized if its
    norm drifts beyond 1e-12 and is re-validated against beta; a mismatch
    above 1e-6 raises ConsistencyError instead of returning silently.
    """
    report = membership(beta, tol)
    if not report.in_x:
        raise NotInOrbitSpaceError(
            f"not in the orbit space; violated: {', '.join(report.violated())}",
            violated=report.violated(), report=report)
    label, parts = _synthesis_parts(beta, tol)
    lam0, c1, lam2, lam3, lam4 = parts
    norm = math.sqrt(lam0**2 + abs(c1) ** 2 + lam2**2 + lam3**2 + lam4**2)
    if abs(norm - 1.0) > 1e-12:
        lam0, c1, lam2, lam3, lam4 = (lam0 / norm, c1 / norm,
                                      lam2 / norm, lam3 / norm, lam4 / norm)
    state = StandardState(lam0, c1, lam2, lam3, lam4)
    achieved = j_of_standard(state)
    drift = float(np.max(np.abs(achieved.to_array() - beta.to_array())))
    if drift > _SYNTH_DRIFT_TOL:
        raise ConsistencyError(
            f"case {label} reproduced beta only to {drift:.3e} (> {_SYNTH_DRIFT_TOL})")
    return SynthesisResult(state=state, case_label=label)


def canonical_representative(psi: PureState3, tol: float = DEFAULT_TOL) -> SynthesisResult:
    """Standard-form state on the same orbit as psi.

    Computes the invariant vector of psi and synthesizes from it; since the
    six invariants separate orbits, the result is locally-unitarily
    equivalent to the input.
    """
    return synthesize(invariants_J(psi), tol)


# ---------------------------------------------------------------------------
# in-cell sample vectors (one interior point per cell)
# ---------------------------------------------------------------------------

# F = 0 at b4 = 1/8 with b1 = b2 = b3 = t: root of 1/64 + t^1.5 - 3t^2 - 3t/8
_T_FACE_SYM = 0.051624969019963926
# F = 0 at b4 = 1/8 with one coordinate zero and the other two equal
_T_FACE_PAIR = (math.sqrt(0.125) - 0.25) / 2.0


def _b4zero(b1: float, b2: float, b3: float) -> Beta:
    return Beta(b1, b2, b3, 0.0, 2.0 * math.sqrt(b1 * b2 * b3), 0.0)


def _cell_samples() -> dict:
    t = _T_FACE_SYM
    tp = _T_FACE_PAIR
    # a generic interior point: b5 = 0 is feasible there, then b6 is pinned up to sign
    g1 = g2 = g3 = 0.03
    g4 = 0.125
    db_at_zero = g4**2 - 4.0 * (g1 + g4) * (g2 + g4) * (g3 + g4)
    b6_gen = math.sqrt(db_at_zero * g1 * g2 * g3)
    return {
        "e0_A-B-C": _b4zero(0.0, 0.0, 0.0),
        "e1_A-BC": _b4zero(0.1, 0.0, 0.0),
        "e0_A-BC": _b4zero(0.25, 0.0, 0.0),
        "e1_B-AC": _b4zero(0.0, 0.1, 0.0),
        "e0_B-AC": _b4zero(0.0, 0.25, 0.0),
        "e1_C-AB": _b4zero(0.0, 0.0, 0.1),
        "e0_C-AB": _b4zero(0.0, 0.0, 0.25),
        "e3_W": _b4zero(0.05, 0.05, 0.05),
        "e2_W": _b4zero(1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0),
        "e1_GHZ": Beta(0.0, 0.0, 0.0, 0.1, 0.0, 0.0),
        "e1_A_GHZ": Beta(0.15, 0.0, 0.0, 0.1, 0.0, 0.0),
        "e1_B_GHZ": Beta(0.0, 0.15, 0.0, 0.1, 0.0, 0.0),
        "e1_C_GHZ": Beta(0.0, 0.0, 0.15, 0.1, 0.0, 0.0),
        "e2_A_GHZ": Beta(0.05, 0.0, 0.0, 0.1, 0.0, 0.0),
        "e2_B_GHZ": Beta(0.0, 0.05, 0.0, 0.1, 0.0, 0.0),
        "e2_C_GHZ": Beta(0.0, 0.0, 0.05, 0.1, 0.0, 0.0),
        "e2_BC": Beta(0.0, tp, tp, 0.125, 0.0, 0.0),
        "e2_AC": Beta(tp, 0.0, tp, 0.125, 0.0, 0.0),
        "e2_AB": Beta(tp, tp, 0.0, 0.125, 0.0, 0.0),
        "e3_BC": Beta(0.0, 0.03, 0.03, 0.125, 0.0, 0.0),
        "e3_AC": Beta(0.03, 0.0, 0.03, 0.125, 0.0, 0.0),
        "e3_AB": Beta(0.03, 0.03, 0.0, 0.125, 0.0, 0.0),
        "e3_ABC": Beta(t, t, t, 0.125, 2.0 * t**1.5, 0.0),
        "e4": Beta(g1, g2, g3, g4, 2.0 * 0.03**1.5, 0.0),
        "e5": Beta(g1, g2, g3, g4, 0.0, b6_gen),
        "e0_GHZ": Beta(0.0, 0.0, 0.0, 0.25, 0.0, 0.0),
    }


CELL_SAMPLES = _cell_samples()


def cell_sample(name: str) -> Beta:
    """An invariant vector lying in the named three-qubit cell."""
    try:
        return CELL_SAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown cell {name!r}; one of {sorted(CELL_SAMPLES)}") from None
