"""Pure states of two and three qubits, local unitaries, qubit permutations,
and seeded Haar-random sampling.

Index convention: the amplitude of basis ket |ijk> sits at flat position
4i + 2j + k, i.e. qubit 1 is the most significant bit of the ket label.
All values are immutable after construction and every operation is a pure
function, so concurrent use needs no locking.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import ZeroVectorError

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12


def _complex_vector(amps, size: int) -> np.ndarray:
    a = np.array(amps, dtype=np.complex128).reshape(-1)
    if a.shape != (size,):
        raise ValueError(f"expected {size} amplitudes, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError("amplitudes must be finite")
    return a


@dataclass(frozen=True, eq=False)
class PureState3:
    """Normalized three-qubit state vector (8 complex amplitudes)."""

    amp: np.ndarray

    def __post_init__(self):
        a = _complex_vector(self.amp, 8)
        if abs(np.linalg.norm(a) - 1.0) > NORM_TOL:
            raise ValueError("three-qubit state must have unit norm within 1e-12")
        a.setflags(write=False)
        object.__setattr__(self, "amp", a)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to a (2, 2, 2) array indexed by (i, j, k)."""
        return self.amp.reshape(2, 2, 2)


@dataclass(frozen=True, eq=False)
class PureState2:
    """Normalized two-qubit state vector (4 complex amplitudes, index 2i+j)."""

    amp: np.ndarray

    def __post_init__(self):
        a = _complex_vector(self.amp, 4)
        if abs(np.linalg.norm(a) - 1.0) > NORM_TOL:
            raise ValueError("two-qubit state must have unit norm within 1e-12")
        a.setflags(write=False)
        object.__setattr__(self, "amp", a)


def _make_state(amps, size: int) -> np.ndarray:
    a = _complex_vector(amps, size)
    peak = np.max(np.abs(a))
    if peak < 1e-300:
        raise ZeroVectorError("all amplitudes are numerically zero")
    # scale by the peak first so subnormal inputs survive the norm
    a = a / peak
    return a / np.linalg.norm(a)


def make_state3(amps) -> PureState3:
    """Rescale 8 amplitudes to unit norm. Raises ZeroVectorError on zero input."""
    return PureState3(_make_state(amps, 8))


def make_state2(amps) -> PureState2:
    """Rescale 4 amplitudes to unit norm. Raises ZeroVectorError on zero input."""
    return PureState2(_make_state(amps, 4))


def basis_state3(label: str) -> PureState3:
    """Computational basis ket from a 3-bit label such as '010'."""
    if not re.fullmatch("[01]{3}", label):
        raise ValueError(f"bad basis label {label!r}")
    a = np.zeros(8, dtype=np.complex128)
    a[int(label, 2)] = 1.0
    return PureState3(a)


def basis_state2(label: str) -> PureState2:
    if not re.fullmatch("[01]{2}", label):
        raise ValueError(f"bad basis label {label!r}")
    a = np.zeros(4, dtype=np.complex128)
    a[int(label, 2)] = 1.0
    return PureState2(a)


def ghz_state() -> PureState3:
    """(|000> + |111>)/sqrt(2)."""
    return make_state3([1, 0, 0, 0, 0, 0, 0, 1])


def w_state() -> PureState3:
    """(|100> + |010> + |001>)/sqrt(3)."""
    return make_state3([0, 1, 1, 0, 1, 0, 0, 0])


def epr_state() -> PureState2:
    """The singlet (|01> - |10>)/sqrt(2)."""
    return make_state2([0, 1, -1, 0])


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([0-9]+)\)")


@dataclass(frozen=True)
class Permutation:
    """Bijection on {1, .., n}, stored as the image tuple (p(1), .., p(n)).

    Used both for qubit relabelings (n = 3) and for the index permutations
    of the polynomial invariants (n up to 6).  Constructible from disjoint
    cycle notation, e.g. "(12)", "(34)(56)", "(13524)", or "e" for the
    identity.
    """

    mapping: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.mapping)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise ValueError(f"not a bijection on 1..{len(m)}: {m}")
        object.__setattr__(self, "mapping", m)

    @property
    def size(self) -> int:
        return len(self.mapping)

    def __call__(self, m: int) -> int:
        return self.mapping[m - 1]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, text: str, n: int) -> "Permutation":
        """Parse disjoint cycle notation on n elements."""
        t = text.strip().replace(" ", "")
        mapping = list(range(1, n + 1))
        if t in ("e", "", "()"):
            return cls(tuple(mapping))
        if _CYCLE_RE.fullmatch(t) is None and not t.startswith("("):
            raise ValueError(f"bad cycle notation {text!r}")
        seen = set()
        cycles = _CYCLE_RE.findall(t)
        if "".join(f"({c})" for c in cycles) != t:
            raise ValueError(f"bad cycle notation {text!r}")
        for cyc in cycles:
            elems = [int(c) for c in cyc]
            if any(e < 1 or e > n for e in elems):
                raise ValueError(f"cycle element out of range 1..{n} in {text!r}")
            if len(set(elems)) != len(elems) or seen & set(elems):
                raise ValueError(f"repeated element in cycles {text!r}")
            seen |= set(elems)
            for a, b in zip(elems, elems[1:] + elems[:1]):
                mapping[a - 1] = b
        return cls(tuple(mapping))

    def cycles(self) -> str:
        """Canonical disjoint cycle string; 'e' for the identity."""
        out = []
        done = set()
        for start in range(1, self.size + 1):
            if start in done or self(start) == start:
                done.add(start)
                continue
            cyc = [start]
            done.add(start)
            m = self(start)
            while m != start:
                cyc.append(m)
                done.add(m)
                m = self(m)
            out.append("(" + "".join(str(v) for v in cyc) + ")")
        return "".join(out) if out else "e"

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for m in range(1, self.size + 1):
            inv[self(m) - 1] = m
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(m) = self(other(m))."""
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Permutation(tuple(self(other(m)) for m in range(1, self.size + 1)))


def as_permutation(p, n: int) -> Permutation:
    """Coerce a Permutation or a cycle string to a Permutation on n elements."""
    if isinstance(p, Permutation):
        if p.size != n:
            raise ValueError(f"permutation acts on {p.size} elements, expected {n}")
        return p
    return Permutation.from_cycles(p, n)


# ---------------------------------------------------------------------------
# local unitaries
# ---------------------------------------------------------------------------


def _check_unitary(u) -> np.ndarray:
    m = np.array(u, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError("local unitary factors must be 2x2")
    if np.max(np.abs(m.conj().T @ m - np.eye(2))) > UNITARY_TOL:
        raise ValueError("factor is not unitary within 1e-12")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """One 2x2 unitary per qubit, acting as u1 (x) u2 (x) u3."""

    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray

    def __post_init__(self):
        for name in ("u1", "u2", "u3"):
            object.__setattr__(self, name, _check_unitary(getattr(self, name)))

    def matrix(self) -> np.ndarray:
        return np.kron(np.kron(self.u1, self.u2), self.u3)


def apply_local_unitary(u: LocalUnitary, psi: PureState3) -> PureState3:
    """Act with u1 (x) u2 (x) u3 on the state. Norm is preserved."""
    return PureState3(u.matrix() @ psi.amp)


def apply_qubit_permutation(p: Permutation, psi: PureState3) -> PureState3:
    """Relabel qubits: the value of qubit m moves to slot p(m)."""
    if p.size != 3:
        raise ValueError("qubit permutations act on 3 elements")
    axes = np.argsort([p(1) - 1, p(2) - 1, p(3) - 1])
    return PureState3(np.transpose(psi.tensor(), axes=axes).reshape(8))


# ---------------------------------------------------------------------------
# seeded sampling
# ---------------------------------------------------------------------------


def _rng(seed: int) -> np.random.Generator:
    if int(seed) < 0:
        raise ValueError("seed must be a nonnegative integer")
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def child_seed(seed: int, index: int) -> int:
    """Derived seed for sample `index` of a run seeded with `seed`.

    Mixing (seed, index) through a counter-based hash keeps every sample's
    stream independent of batching or worker decomposition.
    """
    ss = np.random.SeedSequence(entropy=(int(seed), int(index)))
    return int(ss.generate_state(1, np.uint64)[0])


def haar_random_state3(seed: int) -> PureState3:
    """Haar-random state on the 15-sphere of normalized three-qubit vectors.

    16 independent standard normal reals, then normalize; this is the
    unitarily invariant measure.  Pure function of the seed.
    """
    z = _rng(seed).standard_normal((2, 8))
    return make_state3(z[0] + 1j * z[1])


def haar_random_state2(seed: int) -> PureState2:
    """Haar-random two-qubit state; 8 standard normal reals, normalized."""
    z = _rng(seed).standard_normal((2, 4))
    return make_state2(z[0] + 1j * z[1])


def random_local_unitary(seed: int) -> LocalUnitary:
    """Haar-random element of U(2) x U(2) x U(2), one factor per qubit.

    Each factor orthonormalizes a complex Gaussian 2x2 matrix and fixes the
    column phases so the triangular factor has a real positive diagonal,
    which makes the distribution exactly Haar.
    """
    rng = _rng(seed)
    factors = []
    for _ in range(3):
        z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        q, r = np.linalg.qr(z)
        ph = np.diagonal(r) / np.abs(np.diagonal(r))
        factors.append(q * ph)
    return LocalUnitary(*factors)


# ---------------------------------------------------------------------------
# state files
# ---------------------------------------------------------------------------

_LABELS3 = tuple(format(m, "03b") for m in range(8))
_LABELS2 = tuple(format(m, "02b") for m in range(4))


def state_to_json(state) -> dict:
    """JSON object for a state: amplitudes as [re, im] pairs plus ket labels."""
    labels = _LABELS3 if state.amp.shape[0] == 8 else _LABELS2
    return {
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amp],
        "labels": list(labels),
    }


def _amps_from_json(obj, size: int) -> np.ndarray:
    if not isinstance(obj, dict) or "amplitudes" not in obj:
        raise ValueError("state JSON must be an object with an 'amplitudes' key")
    raw = obj["amplitudes"]
    if not isinstance(raw, list) or len(raw) != size:
        raise ValueError(f"'amplitudes' must be an array of exactly {size} entries")
    amps = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 2:
            raise ValueError("each amplitude must be a two-element [re, im] array")
        amps.append(complex(float(entry[0]), float(entry[1])))
    return np.array(amps, dtype=np.complex128)


def state3_from_json(obj) -> PureState3:
    return make_state3(_amps_from_json(obj, 8))


def state2_from_json(obj) -> PureState2:
    return make_state2(_amps_from_json(obj, 4))


def load_state3(path) -> PureState3:
    with open(path, "r", encoding="utf-8") as fh:
        return state3_from_json(json.load(fh))


def load_state2(path) -> PureState2:
    with open(path, "r", encoding="utf-8") as fh:
        return state2_from_json(json.load(fh))


def save_state(path, state) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json(state), fh, indent=2)
        fh.write("\n")
