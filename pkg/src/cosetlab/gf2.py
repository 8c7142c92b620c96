"""Exact linear algebra over GF(2): subspaces, cosets, duals, solvers, samplers.

Vectors are 1-D numpy uint8 arrays with entries in {0, 1}; matrices are 2-D.
Coordinate 0 of a vector is the "first coordinate" throughout the package and
maps to the most significant bit when vectors are packed into integers, so
integer order equals lexicographic order on bit strings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator, Optional, Sequence

import numpy as np

# All dimensions are desk-scale; enumeration helpers refuse anything larger.
MAX_DIM = 64
MAX_ENUM_DIM = 20


class Gf2Error(ValueError):
    pass


def as_vec(bits: Sequence[int] | np.ndarray) -> np.ndarray:
    v = (np.asarray(bits, dtype=np.uint8) & 1).astype(np.uint8)
    if v.ndim != 1:
        raise Gf2Error(f"expected 1-D bit vector, got shape {v.shape}")
    return v


def as_mat(rows: Sequence[Sequence[int]] | np.ndarray, n: Optional[int] = None) -> np.ndarray:
    m = (np.asarray(rows, dtype=np.uint8) & 1).astype(np.uint8)
    if m.size == 0:
        m = m.reshape((0, n if n is not None else 0))
    if m.ndim != 2:
        raise Gf2Error(f"expected 2-D bit matrix, got shape {m.shape}")
    return m


def vec_to_int(v: np.ndarray) -> int:
    out = 0
    for b in v:
        out = (out << 1) | int(b)
    return out


def int_to_vec(x: int, n: int) -> np.ndarray:
    return np.array([(x >> (n - 1 - j)) & 1 for j in range(n)], dtype=np.uint8)


def rref(rows: np.ndarray) -> np.ndarray:
    """Reduced row-echelon form with zero rows dropped; canonical for row spans."""
    m = as_mat(np.atleast_2d(rows)).copy()
    nrows, ncols = m.shape
    r = 0
    for c in range(ncols):
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        others = np.nonzero(m[:, c])[0]
        for o in others:
            if o != r:
                m[o] ^= m[r]
        r += 1
        if r == nrows:
            break
    return m[:r].copy()


def rank(mat: np.ndarray) -> int:
    return rref(mat).shape[0]


def pivot_columns(rref_rows: np.ndarray) -> list[int]:
    return [int(np.nonzero(row)[0][0]) for row in rref_rows]


def reduce_mod_rows(v: np.ndarray, rref_rows: np.ndarray) -> np.ndarray:
    """Canonical coset representative of v modulo the row span (zeroes pivots)."""
    out = v.copy()
    for row in rref_rows:
        p = int(np.nonzero(row)[0][0])
        if out[p]:
            out ^= row
    return out


def solve(a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """One solution x of A x = b over GF(2), or None; unique when A has full column rank."""
    a = as_mat(a)
    b = as_vec(b)
    m, n = a.shape
    if b.shape[0] != m:
        raise Gf2Error(f"dimension mismatch: A is {m}x{n}, b has length {b.shape[0]}")
    aug = np.concatenate([a, b[:, None]], axis=1)
    red = rref(aug)
    x = np.zeros(n, dtype=np.uint8)
    for row in red:
        lead = int(np.nonzero(row)[0][0])
        if lead == n:
            return None
        # back-substitution is immediate in RREF: pivot variable = rhs bit
        x[lead] = row[n]
    return x


def nullspace(a: np.ndarray) -> np.ndarray:
    """Row basis of {x : A x = 0}, in RREF."""
    a = as_mat(a)
    m, n = a.shape
    red = rref(a)
    pivots = pivot_columns(red)
    free = [c for c in range(n) if c not in pivots]
    rows = []
    for f in free:
        x = np.zeros(n, dtype=np.uint8)
        x[f] = 1
        for i, p in enumerate(pivots):
            x[p] = red[i, f]
        rows.append(x)
    if not rows:
        return np.zeros((0, n), dtype=np.uint8)
    return rref(np.array(rows, dtype=np.uint8))


def solve_affine(a: np.ndarray, b: np.ndarray, u: np.ndarray) -> Optional[np.ndarray]:
    """z with A z + b = u, or None when u is outside the affine image."""
    return solve(a, as_vec(b) ^ as_vec(u))


@dataclass(frozen=True)
class Gf2Coset:
    """Affine subspace of F_2^n given by a row basis (RREF) and a canonical shift.

    The stored form is unique per coset, so equality is bitwise comparison.
    A subspace is the special case shift = 0.
    """

    n: int
    basis_rows: np.ndarray = field(repr=False)
    shift: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not (0 < self.n <= MAX_DIM):
            raise Gf2Error(f"ambient dimension {self.n} outside 1..{MAX_DIM}")
        rows = rref(as_mat(self.basis_rows, self.n))
        if rows.shape[1] != self.n:
            raise Gf2Error("basis row length != ambient dimension")
        sh = as_vec(self.shift)
        if sh.shape[0] != self.n:
            raise Gf2Error("shift length != ambient dimension")
        sh = reduce_mod_rows(sh, rows)
        rows.flags.writeable = False
        sh.flags.writeable = False
        object.__setattr__(self, "basis_rows", rows)
        object.__setattr__(self, "shift", sh)

    # -- constructors -----------------------------------------------------
    @classmethod
    def subspace(cls, rows: np.ndarray | Sequence[Sequence[int]], n: int) -> "Gf2Coset":
        return cls(n, as_mat(rows, n), np.zeros(n, dtype=np.uint8))

    @classmethod
    def affine(cls, rows: np.ndarray | Sequence[Sequence[int]], shift: Sequence[int], n: int) -> "Gf2Coset":
        return cls(n, as_mat(rows, n), as_vec(shift))

    @classmethod
    def from_columns(cls, a: np.ndarray, shift: Sequence[int]) -> "Gf2Coset":
        """Coset {A z + shift} for a column map A (n x m)."""
        a = as_mat(a)
        return cls(a.shape[0], a.T, as_vec(shift))

    @classmethod
    def full(cls, n: int) -> "Gf2Coset":
        return cls.subspace(np.eye(n, dtype=np.uint8), n)

    @classmethod
    def zero(cls, n: int) -> "Gf2Coset":
        return cls.subspace(np.zeros((0, n), dtype=np.uint8), n)

    # -- basic queries -----------------------------------------------------
    @property
    def dim(self) -> int:
        return self.basis_rows.shape[0]

    @property
    def size(self) -> int:
        return 1 << self.dim

    @property
    def is_subspace(self) -> bool:
        return not self.shift.any()

    def contains(self, u: Sequence[int] | np.ndarray) -> bool:
        u = as_vec(u)
        if u.shape[0] != self.n:
            raise Gf2Error("vector length != ambient dimension")
        return not reduce_mod_rows(u ^ self.shift, self.basis_rows).any()

    def __contains__(self, u) -> bool:
        return self.contains(u)

    def canonical_rep(self, u: np.ndarray) -> np.ndarray:
        """Lexicographically smallest member of u + span(basis_rows)."""
        return reduce_mod_rows(as_vec(u), self.basis_rows)

    def members(self) -> Iterator[np.ndarray]:
        if self.dim > MAX_ENUM_DIM:
            raise Gf2Error(f"refusing to enumerate 2^{self.dim} members")
        for mask in range(self.size):
            v = self.shift.copy()
            for i in range(self.dim):
                if (mask >> i) & 1:
                    v ^= self.basis_rows[i]
            yield v

    def member_ints(self) -> list[int]:
        return sorted(vec_to_int(v) for v in self.members())

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        v = self.shift.copy()
        for row in self.basis_rows:
            if rng.integers(0, 2):
                v ^= row
        return v

    def translate(self, v: Sequence[int] | np.ndarray) -> "Gf2Coset":
        return Gf2Coset(self.n, self.basis_rows, self.shift ^ as_vec(v))

    def linear_part(self) -> "Gf2Coset":
        return Gf2Coset.subspace(self.basis_rows, self.n)

    def is_subset_of(self, other: "Gf2Coset") -> bool:
        if self.n != other.n:
            raise Gf2Error("ambient dimensions differ")
        return other.contains(self.shift) and all(
            other.linear_part().contains(row) for row in self.basis_rows
        )

    def intersect(self, other: "Gf2Coset") -> Optional["Gf2Coset"]:
        """Intersection of two cosets (None when empty)."""
        if self.n != other.n:
            raise Gf2Error("ambient dimensions differ")
        # Solve s1 + B1^T x1 = s2 + B2^T x2: stack the two bases as columns.
        k1, k2 = self.dim, other.dim
        a = np.concatenate([self.basis_rows.T, other.basis_rows.T], axis=1) if k1 + k2 else np.zeros((self.n, 0), dtype=np.uint8)
        rhs = self.shift ^ other.shift
        x = solve(a, rhs) if k1 + k2 else (None if rhs.any() else np.zeros(0, dtype=np.uint8))
        if x is None:
            return None if not (k1 + k2 == 0 and not rhs.any()) else Gf2Coset(self.n, np.zeros((0, self.n), np.uint8), self.shift)
        point = self.shift.copy()
        for i in range(k1):
            if x[i]:
                point ^= self.basis_rows[i]
        # Linear part: intersection of the two spans = nullspace trick over stacked duals.
        d1 = dual_basis(self.basis_rows, self.n)
        d2 = dual_basis(other.basis_rows, self.n)
        span = nullspace(np.concatenate([d1, d2], axis=0)) if d1.size + d2.size else rref(np.eye(self.n, dtype=np.uint8))
        return Gf2Coset(self.n, span, point)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Gf2Coset)
            and self.n == other.n
            and self.basis_rows.shape == other.basis_rows.shape
            and bool(np.all(self.basis_rows == other.basis_rows))
            and bool(np.all(self.shift == other.shift))
        )

    def __hash__(self) -> int:
        return hash((self.n, self.basis_rows.tobytes(), self.shift.tobytes()))

    # -- serialization -----------------------------------------------------
    def to_text(self) -> str:
        """Canonical text form "n=<n>;basis=<hex rows>;shift=<hex>" used in transcripts."""
        rows_hex = ",".join(_vec_hex(row) for row in self.basis_rows)
        return f"n={self.n};basis={rows_hex};shift={_vec_hex(self.shift)}"

    @classmethod
    def from_text(cls, text: str) -> "Gf2Coset":
        parts = dict(p.split("=", 1) for p in text.split(";"))
        n = int(parts["n"])
        rows_field = parts["basis"]
        rows = [_vec_from_hex(h, n) for h in rows_field.split(",")] if rows_field else []
        return cls(n, as_mat(rows, n), _vec_from_hex(parts["shift"], n))


def _vec_hex(v: np.ndarray) -> str:
    return bytes(np.packbits(v)).hex()


def _vec_from_hex(h: str, n: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(bytes.fromhex(h), dtype=np.uint8))
    return bits[:n].astype(np.uint8)


def dual_basis(rows: np.ndarray, n: int) -> np.ndarray:
    """RREF row basis of the orthogonal complement of the row span."""
    rows = as_mat(rows, n)
    if rows.shape[0] == 0:
        return rref(np.eye(n, dtype=np.uint8))
    return nullspace(rows)


def dual(s: Gf2Coset) -> Gf2Coset:
    """S^perp = {v : v . s = 0 for all s in S}; defined for subspaces only."""
    if not s.is_subspace:
        raise Gf2Error("not a subspace: dual of a proper coset is undefined")
    return Gf2Coset.subspace(dual_basis(s.basis_rows, s.n), s.n)


def sample_subspace(n: int, k: int, rng: np.random.Generator) -> Gf2Coset:
    """Uniformly random k-dimensional subspace of F_2^n, canonical RREF basis.

    Rejection-samples an n x k matrix until it has full column rank; every
    subspace has the same number of ordered bases, so the span is uniform.
    Per-attempt rejection probability is below 0.72 even at k = n.
    """
    if not 0 <= k <= n:
        raise Gf2Error(f"k={k} outside 0..{n}")
    if k == 0:
        return Gf2Coset.zero(n)
    while True:
        cand = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
        if rank(cand) == k:
            return Gf2Coset.subspace(cand, n)


def sample_subspace_of(ambient: Gf2Coset, k: int, rng: np.random.Generator) -> Gf2Coset:
    """Uniformly random k-dimensional subspace T of a given subspace."""
    if not ambient.is_subspace:
        raise Gf2Error("ambient must be a subspace")
    if not 0 <= k <= ambient.dim:
        raise Gf2Error(f"k={k} outside 0..{ambient.dim}")
    if k == 0:
        return Gf2Coset.zero(ambient.n)
    while True:
        coeff = rng.integers(0, 2, size=(k, ambient.dim), dtype=np.uint8)
        if rank(coeff) == k:
            rows = (coeff @ ambient.basis_rows) & 1
            return Gf2Coset.subspace(rows.astype(np.uint8), ambient.n)


def coset_representatives(t: Gf2Coset, ambient: Gf2Coset) -> list[np.ndarray]:
    """The |ambient|/|T| lex-min coset representatives of T inside ambient."""
    if not (t.is_subspace and ambient.is_subspace):
        raise Gf2Error("coset representatives are defined for subspaces")
    if not t.is_subset_of(ambient):
        raise Gf2Error("T is not a subspace of the ambient space")
    reps = {}
    for v in ambient.members():
        r = t.canonical_rep(v)
        reps.setdefault(vec_to_int(r), r)
    return [reps[i] for i in sorted(reps)]


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_2^n."""
    if not 0 <= k <= n:
        return 0
    num = reduce(lambda a, i: a * ((1 << (n - i)) - 1), range(k), 1)
    den = reduce(lambda a, i: a * ((1 << (k - i)) - 1), range(k), 1)
    return num // den


def enumerate_subspaces(n: int, k: int) -> Iterator[Gf2Coset]:
    """All k-dimensional subspaces of F_2^n via their unique RREF bases."""
    if n > 8:
        raise Gf2Error("subspace enumeration capped at n <= 8")
    if k == 0:
        yield Gf2Coset.zero(n)
        return
    from itertools import combinations

    for pivots in combinations(range(n), k):
        free_pos = []
        for i, p in enumerate(pivots):
            for c in range(p + 1, n):
                if c not in pivots:
                    free_pos.append((i, c))
        for mask in range(1 << len(free_pos)):
            rows = np.zeros((k, n), dtype=np.uint8)
            for i, p in enumerate(pivots):
                rows[i, p] = 1
            for j, (i, c) in enumerate(free_pos):
                rows[i, c] = (mask >> j) & 1
            yield Gf2Coset.subspace(rows, n)
