"""Seeded oracle infrastructure: lazy random permutations and functions, a keyed
PRF, query recording, and the small-range distribution sampler.

The PRF is a keyed BLAKE2b with 256-bit output.  Random functions are derived
from their seed pointwise (order-independent); random permutations are sampled
lazily without replacement, so two handles with the same seed agree whenever
they are queried in the same order.
"""
from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np


def prf(key: bytes, *parts: bytes) -> bytes:
    """Keyed 256-bit PRF: BLAKE2b(key=key, data=len-prefixed parts)."""
    h = hashlib.blake2b(key=key[:64], digest_size=32)
    for p in parts:
        h.update(len(p).to_bytes(8, "little"))
        h.update(p)
    return h.digest()


def derive_seed(seed: bytes, *labels: bytes | str) -> bytes:
    parts = [l.encode() if isinstance(l, str) else l for l in labels]
    return prf(seed, b"derive", *parts)


def rng_from_seed(seed: bytes) -> np.random.Generator:
    return np.random.default_rng(int.from_bytes(prf(seed, b"rng"), "little"))


def trial_seed(seed: bytes, trial: int) -> bytes:
    """Per-trial derived seed (seed || trial-index hashed), safe for parallel trials."""
    return prf(seed, b"trial", trial.to_bytes(8, "little"))


def parse_seed(hex_or_bytes: str | bytes) -> bytes:
    if isinstance(hex_or_bytes, bytes):
        raw = hex_or_bytes
    else:
        raw = bytes.fromhex(hex_or_bytes)
    return prf(raw, b"seed-normalize")


MATERIALIZE_BITS = 16


class PermHandle:
    """Seeded random permutation of {0,1}^n_bits with a consistent inverse.

    Small domains (n_bits <= 16) materialize a Fisher-Yates permutation on
    first use, so the function is determined by the seed alone, independent of
    query order; regenerating a handle from its seed reproduces it bit-for-bit.
    Larger domains fall back to lazy two-way sampling without replacement
    (exactly uniform, but dependent on the query order).  Internally
    synchronized: concurrent queries observe one function.
    """

    def __init__(self, n_bits: int, seed: bytes):
        if not 1 <= n_bits <= 64:
            raise ValueError("n_bits outside 1..64")
        self.n_bits = n_bits
        self.seed = seed
        self._fwd: dict[int, int] = {}
        self._bwd: dict[int, int] = {}
        self._table: Optional[np.ndarray] = None
        self._inv_table: Optional[np.ndarray] = None
        self._rng = rng_from_seed(derive_seed(seed, "perm"))
        self._lock = threading.Lock()

    def _ensure_table(self) -> None:
        if self._table is None:
            table = self._rng.permutation(1 << self.n_bits)
            inv = np.empty_like(table)
            inv[table] = np.arange(table.shape[0])
            self._table, self._inv_table = table, inv

    def _fresh(self, taken: dict[int, int]) -> int:
        size = 1 << self.n_bits
        while True:
            cand = int(self._rng.integers(0, size))
            if cand not in taken:
                return cand

    def eval(self, x: int) -> int:
        if not 0 <= x < (1 << self.n_bits):
            raise ValueError("input outside domain")
        with self._lock:
            if self.n_bits <= MATERIALIZE_BITS:
                self._ensure_table()
                return int(self._table[x])
            if x not in self._fwd:
                y = self._fresh(self._bwd)
                self._fwd[x] = y
                self._bwd[y] = x
            return self._fwd[x]

    def invert(self, y: int) -> int:
        if not 0 <= y < (1 << self.n_bits):
            raise ValueError("input outside codomain")
        with self._lock:
            if self.n_bits <= MATERIALIZE_BITS:
                self._ensure_table()
                return int(self._inv_table[y])
            if y not in self._bwd:
                x = self._fresh(self._fwd)
                self._fwd[x] = y
                self._bwd[y] = x
            return self._bwd[y]


class FnHandle:
    """Deterministic lazily-evaluated random function seed -> ({0,1}^domain_bits -> out_bytes).

    Values are derived pointwise from the seed, so they do not depend on query
    order and no synchronization is needed beyond the GIL.
    """

    def __init__(self, domain_bits: int, out_bytes: int, seed: bytes):
        self.domain_bits = domain_bits
        self.out_bytes = out_bytes
        self.seed = seed

    def value(self, x: int) -> bytes:
        if not 0 <= x < (1 << self.domain_bits):
            raise ValueError("input outside domain")
        out = b""
        ctr = 0
        while len(out) < self.out_bytes:
            out += prf(self.seed, b"fn", x.to_bytes(8, "little"), ctr.to_bytes(4, "little"))
            ctr += 1
        return out[: self.out_bytes]

    def __call__(self, x: int) -> bytes:
        return self.value(x)


@dataclass
class QueryDatabase:
    """Ordered record of (input, output) pairs with no duplicate inputs."""

    entries: list[tuple[bytes, bytes]] = field(default_factory=list)
    _index: dict[bytes, bytes] = field(default_factory=dict)

    def record(self, inp: bytes, out: bytes) -> None:
        if inp in self._index:
            if self._index[inp] != out:
                raise ValueError("inconsistent duplicate query")
            return
        self._index[inp] = out
        self.entries.append((inp, out))

    def lookup(self, inp: bytes) -> Optional[bytes]:
        return self._index.get(inp)

    def image(self) -> list[bytes]:
        seen, out = set(), []
        for _, v in self.entries:
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out

    def preimages(self, out: bytes) -> list[bytes]:
        return [i for i, v in self.entries if v == out]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterable[tuple[bytes, bytes]]:
        return iter(list(self.entries))


def recording_wrap(f: Callable[[bytes], bytes]) -> tuple[Callable[[bytes], bytes], QueryDatabase]:
    """Wrap a byte function so every evaluation is appended once to a database."""
    db = QueryDatabase()

    def wrapped(inp: bytes) -> bytes:
        out = f(inp)
        db.record(inp, out)
        return out

    return wrapped, db


def small_range_fn(base_sampler: Callable[[np.random.Generator], bytes], r: int, rng: np.random.Generator) -> Callable[[int], bytes]:
    """Random function whose outputs are drawn from only r sampled values.

    Samples y_1..y_r from the base distribution, then maps each input x to
    y_{i_x} for an independently random bucket i_x (derived pointwise, so the
    function is deterministic once built).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    values = [base_sampler(rng) for _ in range(r)]
    bucket_seed = rng.bytes(32)

    def fn(x: int) -> bytes:
        i = int.from_bytes(prf(bucket_seed, b"bucket", x.to_bytes(8, "little")), "little") % r
        return values[i]

    return fn
