"""Symbolic engine for the coset-state family the protocols produce.

A balanced affine subspace S splits into first-bit slices S_0, S_1.  Writing
S* for the linear part of S and S*_0 = {s in S* : s_1 = 0}, the slices are
S_b = S*_0 + v_b with v_0 + v_1 = w, where w is the unique RREF basis row of
S* with leading coordinate 0.  All states handled here are uniform over such
slices (or qubit-controlled pairs of them), so no per-element phases need to
be tracked; dense cross-checks of that simplification live in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .gf2 import Gf2Coset, Gf2Error, dual, dual_basis, rref, vec_to_int


class CosetStateError(ValueError):
    pass


def first_bit_slice(coset: Gf2Coset, b: int) -> Optional[Gf2Coset]:
    """S_b = {u in S : u_1 = b}, or None when the slice is empty."""
    first = np.zeros(coset.n, dtype=np.uint8)
    first[0] = 1
    target = np.zeros(coset.n, dtype=np.uint8)
    target[0] = b
    hyper = Gf2Coset.affine(dual_basis(first[None, :], coset.n), target, coset.n)
    return coset.intersect(hyper)


def is_balanced(coset: Gf2Coset) -> bool:
    """True when the first coordinate is non-constant over the coset."""
    return bool(coset.basis_rows[:, 0].any()) if coset.dim else False


@dataclass(frozen=True)
class SlicedCoset:
    """A balanced coset S with its first-bit slice decomposition precomputed."""

    parent: Gf2Coset
    slice_subspace: Gf2Coset  # S*_0, the common linear part of both slices
    v0: np.ndarray
    v1: np.ndarray
    w: np.ndarray

    @classmethod
    def from_coset(cls, coset: Gf2Coset) -> "SlicedCoset":
        if not is_balanced(coset):
            raise CosetStateError("first coordinate constant over the coset")
        rows = coset.basis_rows
        lead = [i for i in range(rows.shape[0]) if rows[i, 0]]
        w = rows[lead[0]].copy()
        sub_rows = np.array([rows[i] for i in range(rows.shape[0]) if i != lead[0]], dtype=np.uint8)
        sub = Gf2Coset.subspace(sub_rows.reshape((-1, coset.n)), coset.n)
        c = coset.shift
        v0 = c.copy() if c[0] == 0 else (c ^ w)
        v0 = sub.canonical_rep(v0)
        v1 = v0 ^ w
        for v in (w, v0, v1):
            v.flags.writeable = False
        return cls(coset, sub, v0, v1, w)

    @property
    def n(self) -> int:
        return self.parent.n

    def slice(self, b: int) -> Gf2Coset:
        return Gf2Coset(self.n, self.slice_subspace.basis_rows, self.v1 if b else self.v0)

    def slice_dual(self) -> Gf2Coset:
        """(S*_0)^perp: the support of any slice state in the Hadamard basis."""
        return dual(self.slice_subspace)

    def parent_dual(self) -> Gf2Coset:
        """S^perp = (S*)^perp."""
        return dual(self.parent.linear_part())


@dataclass(frozen=True)
class SliceState:
    """|S_b>: the uniform superposition over the first-bit-b slice."""

    sliced: SlicedCoset
    b: int

    def coset(self) -> Gf2Coset:
        return self.sliced.slice(self.b)


@dataclass(frozen=True)
class CosetQubitState:
    """alpha_0 |0>|S_0> + alpha_1 |1>|S_1>, the shape produced by committing a qubit."""

    amp0: complex
    amp1: complex
    sliced: SlicedCoset
    y: str = ""

    def __post_init__(self) -> None:
        if abs(abs(self.amp0) ** 2 + abs(self.amp1) ** 2 - 1.0) > 1e-10:
            raise CosetStateError("amplitudes not normalized")

    def coset(self, b: int) -> Gf2Coset:
        return self.sliced.slice(b)

    def to_text(self) -> str:
        return (
            f"y={self.y};amp0={self.amp0.real!r}{self.amp0.imag:+}j;"
            f"amp1={self.amp1.real!r}{self.amp1.imag:+}j;{self.sliced.parent.to_text()}"
        )


def restrict_first_bit(coset: Gf2Coset, rng: np.random.Generator) -> tuple[int, SliceState]:
    """Measure the first qubit of |S>: b with probability |S_b|/|S|, post-state |S_b>.

    For a balanced coset both slices have size |S|/2, so b is uniform.
    """
    sliced = SlicedCoset.from_coset(coset)
    b = int(rng.integers(0, 2))
    return b, SliceState(sliced, b)


def rotate_first_bit(state: SliceState, dual_predicate: Callable[[np.ndarray], int]) -> SliceState:
    """H^n . Phase[S^perp] . H^n applied to |S_{b}>, yielding |S_{1-b}> exactly.

    The predicate must agree with membership in S^perp on the Hadamard-basis
    support (S*_0)^perp, where the phase oracle acts; it is checked there.
    """
    sliced = state.sliced
    parent_dual = sliced.parent_dual()
    support = sliced.slice_dual()
    checked = 0
    if support.dim <= 12:
        for v in support.members():
            if bool(dual_predicate(v)) != parent_dual.contains(v):
                raise CosetStateError("dual predicate inconsistent with stored coset")
            checked += 1
    else:
        probe_rng = np.random.default_rng(vec_to_int(sliced.w))
        for _ in range(256):
            v = support.sample(probe_rng)
            if bool(dual_predicate(v)) != parent_dual.contains(v):
                raise CosetStateError("dual predicate inconsistent with stored coset")
            checked += 1
    return SliceState(sliced, 1 - state.b)


def measure_z_open(state: CosetQubitState, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Standard-basis measurement of all registers: (b, u) with u uniform in S_b."""
    b = int(rng.random() < abs(state.amp1) ** 2)
    u = state.coset(b).sample(rng)
    return b, u


def measure_x_open(state: CosetQubitState, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Hadamard-basis measurement of all registers.

    The coset register collapses to a uniform u in (S*_0)^perp; the control
    qubit is left in amp0|0> + (-1)^{u.w} amp1|1> and is then measured in the
    Hadamard basis.
    """
    u = state.sliced.slice_dual().sample(rng)
    r = int(np.bitwise_xor.reduce(u & state.sliced.w) & 1)
    a_plus = abs(state.amp0 + (-1) ** r * state.amp1) ** 2 / 2
    b_prime = int(rng.random() >= a_plus)
    return b_prime, u


def z_open_distribution(state: CosetQubitState) -> dict[tuple[int, int], float]:
    """Exact joint distribution of measure_z_open outcomes, keyed by (b, int(u))."""
    out: dict[tuple[int, int], float] = {}
    for b in (0, 1):
        p_b = abs((state.amp1 if b else state.amp0)) ** 2
        coset = state.coset(b)
        for u in coset.members():
            out[(b, vec_to_int(u))] = p_b / coset.size
    return out


def x_open_distribution(state: CosetQubitState) -> dict[tuple[int, int], float]:
    """Exact joint distribution of measure_x_open outcomes, keyed by (b', int(u))."""
    out: dict[tuple[int, int], float] = {}
    support = state.sliced.slice_dual()
    for u in support.members():
        r = int(np.bitwise_xor.reduce(u & state.sliced.w) & 1)
        p_plus = abs(state.amp0 + (-1) ** r * state.amp1) ** 2 / 2
        out[(0, vec_to_int(u))] = p_plus / support.size
        out[(1, vec_to_int(u))] = (1 - p_plus) / support.size
    return out
