"""Exact dense simulation of n-qubit states and channels (n <= 12).

Basis index convention: qubit 0 (the "first coordinate" of GF(2) vectors) is
the most significant bit of the basis index, matching gf2.vec_to_int.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .gf2 import Gf2Coset, vec_to_int

NORM_TOL = 1e-10
DENSE_MAX_QUBITS = 12
DENSITY_MAX_DIM = 1 << 10


class DenseSimError(ValueError):
    pass


@lru_cache(maxsize=32)
def index_bits(n: int) -> np.ndarray:
    """(2^n, n) uint8 table mapping basis index -> bit string."""
    idx = np.arange(1 << n, dtype=np.uint32)
    return np.array([(idx >> (n - 1 - j)) & 1 for j in range(n)], dtype=np.uint8).T


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise DenseSimError(f"amplitude vector has shape {amps.shape}, expected (2^{self.n_qubits},)")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise DenseSimError(f"state not normalized: ||amps|| = {np.linalg.norm(amps)}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def density(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(self.n_qubits, np.outer(a, a.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    n_qubits: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=np.complex128)
        d = 1 << self.n_qubits
        if m.shape != (d, d):
            raise DenseSimError(f"density matrix has shape {m.shape}, expected ({d},{d})")
        if d > DENSITY_MAX_DIM:
            raise DenseSimError(f"density matrices capped at dimension {DENSITY_MAX_DIM}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    def validate(self) -> None:
        m = self.entries
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise DenseSimError("not Hermitian within 1e-10")
        if abs(np.trace(m).real - 1.0) > 1e-10:
            raise DenseSimError("trace != 1 within 1e-10")
        if np.min(np.linalg.eigvalsh(m)) < -1e-9:
            raise DenseSimError("not positive semidefinite within -1e-9")


def basis_state(n: int, bits: Sequence[int] | np.ndarray) -> StateVector:
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[vec_to_int(np.asarray(bits, dtype=np.uint8))] = 1.0
    return StateVector(n, amps)


def coset_to_state(coset: Gf2Coset) -> StateVector:
    """|S + v> = |S|^{-1/2} sum_{x in S} |x + v>: uniform amplitude over the coset."""
    if coset.n > DENSE_MAX_QUBITS:
        raise DenseSimError(f"ambient dimension {coset.n} too large for dense simulation")
    amps = np.zeros(1 << coset.n, dtype=np.complex128)
    w = 1.0 / np.sqrt(coset.size)
    for v in coset.members():
        amps[vec_to_int(v)] = w
    return StateVector(coset.n, amps)


def hadamard_all(s: StateVector) -> StateVector:
    """H on every qubit via the fast Walsh-Hadamard transform."""
    a = s.amplitudes.copy()
    h = 1
    d = a.shape[0]
    while h < d:
        for start in range(0, d, h * 2):
            x = a[start : start + h].copy()
            y = a[start + h : start + 2 * h].copy()
            a[start : start + h] = x + y
            a[start + h : start + 2 * h] = x - y
        h *= 2
    return StateVector(s.n_qubits, a / np.sqrt(d))


def phase_oracle(s: StateVector, pred: Callable[[np.ndarray], int]) -> StateVector:
    """|x> -> (-1)^{pred(x)} |x> for a 0/1 predicate on basis bit strings."""
    bits = index_bits(s.n_qubits)
    signs = np.array([(-1.0) ** int(pred(bits[i])) for i in range(bits.shape[0])])
    return StateVector(s.n_qubits, s.amplitudes * signs)


def measure_standard(
    s: StateVector, qubits: Sequence[int], rng: np.random.Generator
) -> tuple[tuple[int, ...], StateVector]:
    """Standard-basis measurement of a qubit subset; empty subset is the identity."""
    qubits = list(qubits)
    if any(q >= s.n_qubits or q < 0 for q in qubits):
        raise DenseSimError("qubit index out of range")
    if not qubits:
        return (), s
    bits = index_bits(s.n_qubits)
    probs = np.abs(s.amplitudes) ** 2
    keys = np.zeros(bits.shape[0], dtype=np.int64)
    for q in qubits:
        keys = (keys << 1) | bits[:, q]
    n_out = 1 << len(qubits)
    marginals = np.bincount(keys, weights=probs, minlength=n_out)
    outcome = int(rng.choice(n_out, p=marginals / marginals.sum()))
    mask = keys == outcome
    post = np.where(mask, s.amplitudes, 0.0)
    post = post / np.linalg.norm(post)
    out_bits = tuple((outcome >> (len(qubits) - 1 - i)) & 1 for i in range(len(qubits)))
    return out_bits, StateVector(s.n_qubits, post)


def measurement_distribution(s: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Exact Born probabilities over the 2^|qubits| outcomes of a standard measurement."""
    bits = index_bits(s.n_qubits)
    probs = np.abs(s.amplitudes) ** 2
    keys = np.zeros(bits.shape[0], dtype=np.int64)
    for q in qubits:
        keys = (keys << 1) | bits[:, q]
    return np.bincount(keys, weights=probs, minlength=1 << len(qubits))


def overlap(a: StateVector, b: StateVector) -> complex:
    if a.n_qubits != b.n_qubits:
        raise DenseSimError("qubit counts differ")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    return abs(overlap(a, b)) ** 2


def equal_up_to_phase(a: StateVector, b: StateVector, tol: float = 1e-9) -> bool:
    return abs(abs(overlap(a, b)) - 1.0) <= tol


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of (a - b), via eigenvalues of the Hermitian difference."""
    if a.n_qubits != b.n_qubits:
        raise DenseSimError("dimension mismatch")
    diff = a.entries - b.entries
    eigs = np.linalg.eigvalsh((diff + diff.conj().T) / 2)
    return 0.5 * float(np.sum(np.abs(eigs)))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(a.n_qubits + b.n_qubits, np.kron(a.amplitudes, b.amplitudes))
