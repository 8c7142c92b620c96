"""Toy compressed standard oracle over query registers (x, u) and a database register.

Databases are partial functions {0,1}^n_in -> {0,1}^n_out, encoded as sorted
tuples of (input, value) pairs; an absent input is the bottom symbol.  In this
encoding the Increase step (appending an explicit empty slot) is the identity,
and a query applies Decomp . CStO' . Decomp.  Capped at n_in + n_out <= 6.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

Db = tuple[tuple[int, int], ...]

SCALE_LIMIT_BITS = 6
PRUNE_TOL = 1e-14


class CompressedOracleError(ValueError):
    pass


def db_get(db: Db, x: int) -> int | None:
    for k, v in db:
        if k == x:
            return v
    return None


def db_set(db: Db, x: int, v: int | None) -> Db:
    items = [(k, val) for k, val in db if k != x]
    if v is not None:
        items.append((x, v))
    return tuple(sorted(items))


@dataclass
class CompressedOracleState:
    """Sparse superposition over (x, u, database) basis states."""

    n_in: int
    n_out: int
    amplitudes: dict[tuple[int, int, Db], complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n_in + self.n_out > SCALE_LIMIT_BITS:
            raise CompressedOracleError(
                f"toy compressed oracle capped at {SCALE_LIMIT_BITS} total bits"
            )

    @classmethod
    def classical_query_state(cls, n_in: int, n_out: int, x: int, u: int = 0) -> "CompressedOracleState":
        return cls(n_in, n_out, {(x, u, ()): 1.0 + 0.0j})

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def prune(self) -> None:
        self.amplitudes = {k: a for k, a in self.amplitudes.items() if abs(a) > PRUNE_TOL}

    def database_distribution(self) -> dict[Db, float]:
        out: dict[Db, float] = {}
        for (x, u, db), a in self.amplitudes.items():
            out[db] = out.get(db, 0.0) + abs(a) ** 2
        return out

    def query_output_distribution(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for (x, u, db), a in self.amplitudes.items():
            out[u] = out.get(u, 0.0) + abs(a) ** 2
        return out

    def measure_database(self, rng: np.random.Generator) -> Db:
        dist = self.database_distribution()
        dbs = list(dist)
        probs = np.array([dist[d] for d in dbs])
        return dbs[int(rng.choice(len(dbs), p=probs / probs.sum()))]


def decomp(state: CompressedOracleState) -> CompressedOracleState:
    """Decomp, controlled on the query-input register.

    Per query input x, swaps |D with x unset> and |Y|^{-1/2} sum_y |D u (x,y)>
    and acts as the identity on their orthogonal complement.
    """
    y_size = 1 << state.n_out
    inv_sqrt = 1.0 / math.sqrt(y_size)
    out: dict[tuple[int, int, Db], complex] = {}

    # Group amplitudes by (x, u, database-without-x); within a group the state
    # is a vector over {bottom} u {y values} at position x.
    groups: dict[tuple[int, int, Db], dict[int | None, complex]] = {}
    for (x, u, db), a in state.amplitudes.items():
        rest = db_set(db, x, None)
        groups.setdefault((x, u, rest), {})[db_get(db, x)] = a

    for (x, u, rest), vec in groups.items():
        a_bot = vec.get(None, 0.0 + 0.0j)
        a_unif = inv_sqrt * sum(vec.get(y, 0.0) for y in range(y_size))
        # Swap of the two orthonormal vectors e_bot and unif: psi -> psi - (e_bot - unif)(<e_bot|psi> - <unif|psi>).
        delta = a_bot - a_unif
        new_vec: dict[int | None, complex] = dict(vec)
        new_vec[None] = a_bot - delta
        for y in range(y_size):
            new_vec[y] = new_vec.get(y, 0.0) + inv_sqrt * delta
        for slot, a in new_vec.items():
            if abs(a) <= PRUNE_TOL:
                continue
            key = (x, u, db_set(rest, x, slot))
            out[key] = out.get(key, 0.0) + a

    result = CompressedOracleState(state.n_in, state.n_out, out)
    result.prune()
    return result


def _csto_prime(state: CompressedOracleState) -> CompressedOracleState:
    """|x, u> |D> -> |x, u xor D(x)> |D>, identity on the absent-value branch."""
    out: dict[tuple[int, int, Db], complex] = {}
    for (x, u, db), a in state.amplitudes.items():
        val = db_get(db, x)
        u_new = u if val is None else (u ^ val)
        key = (x, u_new, db)
        out[key] = out.get(key, 0.0) + a
    return CompressedOracleState(state.n_in, state.n_out, out)


def cstso_query(state: CompressedOracleState) -> CompressedOracleState:
    """One oracle query: Decomp . CStO' . Decomp . Increase (Increase is implicit)."""
    return decomp(_csto_prime(decomp(state)))


def classical_query(state: CompressedOracleState, x: int, rng: np.random.Generator) -> tuple[int, CompressedOracleState]:
    """Feed a basis-state query |x, 0>, apply the oracle, measure the output register."""
    expanded: dict[tuple[int, int, Db], complex] = {}
    for (x_old, u_old, db), a in state.amplitudes.items():
        # A classical driver loads a fresh query register; previous query
        # registers have been consumed (their value is classical side info).
        key = (x, 0, db)
        expanded[key] = expanded.get(key, 0.0) + a
    stepped = cstso_query(CompressedOracleState(state.n_in, state.n_out, expanded))
    dist = stepped.query_output_distribution()
    outcomes = sorted(dist)
    probs = np.array([dist[u] for u in outcomes])
    u_meas = outcomes[int(rng.choice(len(outcomes), p=probs / probs.sum()))]
    post = {
        k: a / math.sqrt(dist[u_meas])
        for k, a in stepped.amplitudes.items()
        if k[1] == u_meas
    }
    return u_meas, CompressedOracleState(state.n_in, state.n_out, post)


def decomp_single_site_matrix(n_out: int) -> np.ndarray:
    """Decomp_x restricted to one database position: a (2^n_out + 1) square matrix.

    Basis order: bottom, then the 2^n_out values.  Decomp factorizes as this
    operator on the queried position tensored with identity elsewhere, so its
    involution property follows from this matrix squaring to the identity.
    """
    y = 1 << n_out
    dim = y + 1
    e_bot = np.zeros(dim)
    e_bot[0] = 1.0
    unif = np.zeros(dim)
    unif[1:] = 1.0 / math.sqrt(y)
    d = e_bot - unif
    return np.eye(dim) - np.outer(d, d)
