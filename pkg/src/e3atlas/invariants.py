"""Polynomial local-unitary invariants of three-qubit pure states.

The basic building block is the degree-2n invariant

    P[n, sigma, tau](psi) = sum over all i_1..i_n, j_1..j_n, k_1..k_n in {0,1} of
        psi[i_1 j_1 k_1] * .. * psi[i_n j_n k_n]
        * conj(psi[i_1 j_sigma(1) k_tau(1)]) * .. * conj(psi[i_n j_sigma(n) k_tau(n)])

with sigma, tau permutations on n elements acting on the middle and last
index groups of the conjugated factors.  Two evaluation routes are kept:
the literal sum over all 2^(3n) index assignments (the oracle) and an
optimized pairwise tensor contraction.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegreeTooLargeError, NegativeI5Error, NotNormalizedError
from .qstate import Permutation, PureState2, PureState3, as_permutation, make_state3

MAX_DEGREE = 6
IMAG_RESIDUE_TOL = 1e-12
I5_CLAMP = 1e-12


# ---------------------------------------------------------------------------
# invariant vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IVector:
    """The raw invariants (purities, degree-6 and degree-12 terms, tangle)."""

    i1: float
    i2: float
    i3: float
    i4: float
    i5: float
    i6: float

    def __post_init__(self):
        vals = self.as_tuple()
        if not all(np.isfinite(vals)):
            raise ValueError("invariants must be finite")
        if self.i5 < -I5_CLAMP:
            raise NegativeI5Error(f"i5 = {self.i5} below -1e-12")

    def as_tuple(self):
        return (self.i1, self.i2, self.i3, self.i4, self.i5, self.i6)


@dataclass(frozen=True)
class Beta:
    """A point (b1..b6) of the orbit-space coordinates."""

    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    b6: float

    def __post_init__(self):
        if not all(np.isfinite(self.as_tuple())):
            raise ValueError("beta components must be finite")

    def as_tuple(self):
        return (self.b1, self.b2, self.b3, self.b4, self.b5, self.b6)

    def to_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    @classmethod
    def from_array(cls, arr) -> "Beta":
        a = np.asarray(arr, dtype=float).reshape(-1)
        if a.shape != (6,):
            raise ValueError("beta vector needs exactly 6 components")
        return cls(*(float(v) for v in a))


@dataclass(frozen=True)
class StandardState:
    """Five-term standard form: lam0|000> + c1|100> + lam2|101> + lam3|110> + lam4|111>.

    The lam coefficients are real nonnegative; c1 carries the single phase.
    """

    lam0: float
    c1: complex
    lam2: float
    lam3: float
    lam4: float

    def __post_init__(self):
        lams = (self.lam0, self.lam2, self.lam3, self.lam4)
        if not all(np.isfinite(lams)) or not np.isfinite(complex(self.c1)):
            raise ValueError("standard-form coefficients must be finite")
        if min(lams) < 0:
            raise ValueError("lam coefficients must be nonnegative")
        object.__setattr__(self, "c1", complex(self.c1))

    def norm(self) -> float:
        return float(np.sqrt(self.lam0**2 + abs(self.c1) ** 2
                             + self.lam2**2 + self.lam3**2 + self.lam4**2))

    def amplitudes(self) -> np.ndarray:
        a = np.zeros(8, dtype=np.complex128)
        a[0] = self.lam0
        a[4] = self.c1
        a[5] = self.lam2
        a[6] = self.lam3
        a[7] = self.lam4
        return a

    def embed(self) -> PureState3:
        """The standard form as an 8-amplitude state (renormalized)."""
        return make_state3(self.amplitudes())


# ---------------------------------------------------------------------------
# P: the general polynomial invariant, two routes
# ---------------------------------------------------------------------------


def _check_degree(n) -> int:
    n = int(n)
    if n < 1:
        raise ValueError("degree n must be >= 1")
    if n > MAX_DEGREE:
        raise DegreeTooLargeError(f"n = {n} exceeds the supported maximum {MAX_DEGREE}")
    return n


def _eval_p_literal(n: int, sigma: Permutation, tau: Permutation, amp: np.ndarray) -> complex:
    # all 2^(3n) assignments at once; bit m of the counter is i_{m+1}, then j's, then k's
    idx = np.arange(1 << (3 * n))
    i = [(idx >> m) & 1 for m in range(n)]
    j = [(idx >> (n + m)) & 1 for m in range(n)]
    k = [(idx >> (2 * n + m)) & 1 for m in range(n)]
    term = np.ones(idx.shape[0], dtype=np.complex128)
    for m in range(n):
        term *= amp[4 * i[m] + 2 * j[m] + k[m]]
    conj = np.conj(amp)
    for m in range(n):
        term *= conj[4 * i[m] + 2 * j[sigma(m + 1) - 1] + k[tau(m + 1) - 1]]
    return complex(term.sum())


@lru_cache(maxsize=None)
def _contraction_plan(n: int, sigma_map: tuple, tau_map: tuple):
    """einsum subscripts and a precomputed pairwise contraction path."""
    letters = string.ascii_letters
    subs = []
    for m in range(n):
        subs.append(letters[m] + letters[n + m] + letters[2 * n + m])
    for m in range(n):
        subs.append(letters[m]
                    + letters[n + sigma_map[m] - 1]
                    + letters[2 * n + tau_map[m] - 1])
    expr = ",".join(subs) + "->"
    dummy = [np.empty((2, 2, 2), dtype=np.complex128)] * (2 * n)
    path = np.einsum_path(expr, *dummy, optimize="greedy")[0]
    return expr, path


def _eval_p_contract(n: int, sigma: Permutation, tau: Permutation, amp: np.ndarray) -> complex:
    expr, path = _contraction_plan(n, sigma.mapping, tau.mapping)
    t = amp.reshape(2, 2, 2)
    ops = [t] * n + [t.conj()] * n
    return complex(np.einsum(expr, *ops, optimize=path))


def eval_P(n: int, sigma, tau, psi: PureState3, method: str = "contract") -> complex:
    """Evaluate P[n, sigma, tau] on a state.

    sigma and tau may be Permutation objects or cycle strings on n elements.
    method selects the route: "contract" (default) or "literal" (the
    2^(3n)-term oracle sum).
    """
    n = _check_degree(n)
    sigma = as_permutation(sigma, n)
    tau = as_permutation(tau, n)
    if method == "literal":
        return _eval_p_literal(n, sigma, tau, psi.amp)
    if method == "contract":
        return _eval_p_contract(n, sigma, tau, psi.amp)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# hyperdeterminant
# ---------------------------------------------------------------------------


def hyperdeterminant(psi: PureState3) -> complex:
    """Cayley's 2x2x2 hyperdeterminant of the amplitude tensor.

    Degree 4 in the amplitudes a[ijk]:
      the four squared "antipodal pair" products
        a000^2 a111^2 + a001^2 a110^2 + a010^2 a101^2 + a011^2 a100^2,
      minus twice the six cross products of distinct antipodal pairs,
      plus four times the two "diagonal" quadruples
        a000 a011 a101 a110 and a001 a010 a100 a111.
    Its modulus is b4 (and 4x the modulus is the three-tangle); validated
    against |hdet(GHZ)| = 1/4 and hdet(W) = 0 in the test suite.
    """
    a = psi.amp
    pairs = (a[0] * a[7], a[1] * a[6], a[2] * a[5], a[3] * a[4])
    square_terms = sum(p * p for p in pairs)
    cross_terms = sum(pairs[r] * pairs[s] for r in range(4) for s in range(r + 1, 4))
    diagonal_terms = a[0] * a[3] * a[5] * a[6] + a[1] * a[2] * a[4] * a[7]
    return complex(square_terms - 2 * cross_terms + 4 * diagonal_terms)


# ---------------------------------------------------------------------------
# the invariant vectors I and J
# ---------------------------------------------------------------------------

# (degree, sigma, tau) for each P-type invariant
P_SPECS = {
    "i1": (2, "e", "(12)"),
    "i2": (2, "(12)", "e"),
    "i3": (2, "(12)", "(12)"),
    "i4": (3, "(123)", "(132)"),
    "i6": (6, "(34)(56)", "(13524)"),
}


def _real_part(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise ArithmeticError(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


def invariants_I(psi: PureState3, method: str = "contract") -> IVector:
    """The six raw invariants of a three-qubit state.

    i1, i2, i3 are single-qubit purities, i4 the degree-6 cyclic invariant,
    i5 the squared hyperdeterminant modulus, and i6 the imaginary part of
    the degree-12 invariant (the only one that can tell a state from its
    complex conjugate).
    """
    vals = {}
    for name in ("i1", "i2", "i3", "i4"):
        n, s, t = P_SPECS[name]
        vals[name] = _real_part(eval_P(n, s, t, psi, method=method), name)
    vals["i5"] = abs(hyperdeterminant(psi)) ** 2
    n, s, t = P_SPECS["i6"]
    vals["i6"] = eval_P(n, s, t, psi, method=method).imag
    return IVector(**vals)


def invariants_J_from_I(iv: IVector) -> Beta:
    """Invert the linear change of basis from the raw invariants to (b1..b6)."""
    if iv.i5 < -I5_CLAMP:
        raise NegativeI5Error(f"i5 = {iv.i5} below -1e-12")
    r5 = float(np.sqrt(max(iv.i5, 0.0)))
    b1 = (1.0 - iv.i1 - iv.i2 + iv.i3 - 2.0 * r5) / 4.0
    b2 = (1.0 - iv.i1 + iv.i2 - iv.i3 - 2.0 * r5) / 4.0
    b3 = (1.0 + iv.i1 - iv.i2 - iv.i3 - 2.0 * r5) / 4.0
    b4 = r5
    b5 = 5.0 / 12.0 - (iv.i1 + iv.i2 + iv.i3) / 4.0 + iv.i4 / 3.0 - r5 / 2.0
    b6 = iv.i6
    return Beta(b1, b2, b3, b4, b5, b6)


def invariants_J(psi: PureState3, method: str = "contract") -> Beta:
    """The orbit-space coordinates of a state."""
    return invariants_J_from_I(invariants_I(psi, method=method))


def j_of_standard(chi: StandardState) -> Beta:
    """Closed-form coordinates of a standard-form state.

    With c1 = lam1 e^{i phi}:
      b1 = |c1 lam4 - lam2 lam3|^2
      b2 = lam0^2 lam2^2,  b3 = lam0^2 lam3^2,  b4 = lam0^2 lam4^2
      b5 = 2 lam0^2 lam2^2 lam3^2 - 2 lam0^2 lam2 lam3 lam4 Re(c1)
      b6 = lam0^4 lam2 lam3 lam4 Im(c1)
           * (2 lam0^2 lam4^2 + 2 |c1|^2 lam4^2 - lam4^2 - 2 lam2 lam3 lam4 Re(c1))
    Agrees with invariants_J on the embedded 8-amplitude state to 1e-10.
    """
    if abs(chi.norm() - 1.0) > 1e-8:
        raise NotNormalizedError(f"standard state norm {chi.norm()} deviates from 1")
    l0, c1, l2, l3, l4 = chi.lam0, chi.c1, chi.lam2, chi.lam3, chi.lam4
    b1 = abs(c1 * l4 - l2 * l3) ** 2
    b2 = l0**2 * l2**2
    b3 = l0**2 * l3**2
    b4 = l0**2 * l4**2
    b5 = 2.0 * l0**2 * l2**2 * l3**2 - 2.0 * l0**2 * l2 * l3 * l4 * c1.real
    b6 = (l0**4 * l2 * l3 * l4 * c1.imag
          * (2.0 * l0**2 * l4**2 + 2.0 * abs(c1) ** 2 * l4**2
             - l4**2 - 2.0 * l2 * l3 * l4 * c1.real))
    return Beta(float(b1), float(b2), float(b3), float(b4), float(b5), float(b6))


def concurrence(psi: PureState2) -> float:
    """Two-qubit concurrence C = 2 |a00 a11 - a01 a10|, in [0, 1]."""
    a = psi.amp
    return float(2.0 * abs(a[0] * a[3] - a[1] * a[2]))
