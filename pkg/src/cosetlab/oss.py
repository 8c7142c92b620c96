"""One-shot signatures over explicit oracles P, P^{-1}, D.

Setup hides a random permutation Pi of {0,1}^n and a random function F mapping
r-bit labels y to pairs (A_y, b_y) with A_y a full-column-rank k x (n-r) bit
matrix and b_y a k-bit shift (k = n).  The oracles are

    P(x)       = (y, A_y J(x) + b_y)        with Pi(x) = y || J(x)
    P^{-1}(y,u) = Pi^{-1}(y || z)  if A_y z + b_y = u has a solution, else bottom
    D(y, v)    = 1  iff  v^T A_y = 0

so the strings u reachable under a label y form the coset S_y = {A_y z + b_y}.
Gen produces a verification key y and the uniform superposition |S_y> as the
quantum signing key; signing measures or rotates the first-bit slice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cosetstates import SliceState, is_balanced, restrict_first_bit, rotate_first_bit
from .gf2 import Gf2Coset, as_vec, rank, solve_affine, vec_to_int
from .oracles import FnHandle, PermHandle, derive_seed, prf


class OssError(ValueError):
    pass


class SignAbort(RuntimeError):
    """The post-rotation measurement produced a first bit different from the message.

    Asymptotically negligible, but visible at desk scale (it fires exactly on
    unbalanced cosets); callers retry key generation.
    """


@dataclass(frozen=True)
class OssParams:
    n: int = 8
    r: int = 3
    s: int = 2
    k: int = 8

    def __post_init__(self) -> None:
        if self.k != self.n:
            raise OssError("k must equal n")
        if not self.r < self.n:
            raise OssError("need r < n")
        if self.n - self.r < 2:
            raise OssError("need n - r >= 2 so cosets can be balanced")
        if not 0 <= self.s <= self.n - self.r:
            raise OssError("need 0 <= s <= n - r")


@dataclass
class OssOracles:
    """The oracle triple (P, P^{-1}, D) backed by a single seeded (Pi, F)."""

    params: OssParams
    perm: PermHandle
    f: FnHandle
    _coset_cache: dict[int, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    def _interpret(self, y: int) -> tuple[np.ndarray, np.ndarray]:
        """(A_y, b_y) from F(y), resampling deterministically until A_y has full column rank."""
        if y in self._coset_cache:
            return self._coset_cache[y]
        p = self.params
        base = self.f.value(y)
        ctr = 0
        while True:
            raw = prf(base, b"interpret", ctr.to_bytes(4, "little"))
            need = p.k * (p.n - p.r) + p.k
            stream = raw
            while len(stream) * 8 < need:
                stream += prf(base, b"interpret", ctr.to_bytes(4, "little"), len(stream).to_bytes(4, "little"))
            bits = np.unpackbits(np.frombuffer(stream, dtype=np.uint8))[:need]
            a = bits[: p.k * (p.n - p.r)].reshape(p.k, p.n - p.r).astype(np.uint8)
            b = bits[p.k * (p.n - p.r) :].astype(np.uint8)
            if rank(a) == p.n - p.r:
                self._coset_cache[y] = (a, b)
                return a, b
            ctr += 1

    def coset_for(self, y: int) -> Gf2Coset:
        a, b = self._interpret(y)
        return Gf2Coset.from_columns(a, b)

    def p(self, x: int) -> tuple[int, np.ndarray]:
        p = self.params
        if not 0 <= x < (1 << p.n):
            raise OssError("input outside domain")
        pix = self.perm.eval(x)
        y = pix >> (p.n - p.r)
        z = pix & ((1 << (p.n - p.r)) - 1)
        a, b = self._interpret(y)
        zv = np.array([(z >> (p.n - p.r - 1 - i)) & 1 for i in range(p.n - p.r)], dtype=np.uint8)
        u = ((a @ zv) & 1).astype(np.uint8) ^ b
        return y, u

    def p_inv(self, y: int, u: np.ndarray) -> Optional[int]:
        p = self.params
        a, b = self._interpret(y)
        z = solve_affine(a, b, as_vec(u))
        if z is None:
            return None
        z_int = vec_to_int(z)
        return self.perm.invert((y << (p.n - p.r)) | z_int)

    def d(self, y: int, v: np.ndarray) -> int:
        a, _ = self._interpret(y)
        v = as_vec(v)
        return int(not ((v @ a) & 1).any())

    def dual_predicate(self, y: int) -> Callable[[np.ndarray], int]:
        return lambda v: self.d(y, v)


@dataclass
class OssToken:
    """vk plus the signing state |S_y|>; consumed by sign (single use)."""

    vk: int
    state_coset: Gf2Coset
    used: bool = False


def setup(params: OssParams, seed: bytes) -> OssOracles:
    perm = PermHandle(params.n, derive_seed(seed, "oss-perm"))
    need_bytes = (params.k * (params.n - params.r + 1) + 7) // 8
    f = FnHandle(params.r, max(32, need_bytes), derive_seed(seed, "oss-f"))
    return OssOracles(params, perm, f)


def gen_verbose(oracles: OssOracles, rng: np.random.Generator) -> tuple[OssToken, int]:
    """gen plus the number of label draws needed to hit a balanced coset."""
    p = oracles.params
    attempts = 0
    while True:
        attempts += 1
        y = int(rng.integers(0, 1 << p.r))
        coset = oracles.coset_for(y)
        if is_balanced(coset):
            return OssToken(vk=y, state_coset=coset), attempts


def gen(oracles: OssOracles, rng: np.random.Generator) -> OssToken:
    """Key generation: a uniform label y with signing state |S_y>.

    The quantum procedure (uniform superposition, evaluate P, measure the label
    register, uncompute via P^{-1}) leaves exactly the uniform superposition
    over S_y, with y uniform because Pi is a permutation.  Labels are resampled
    until S_y is balanced, so that both message bits are signable.
    """
    return gen_verbose(oracles, rng)[0]


def sign(oracles: OssOracles, token: OssToken, m: int, rng: np.random.Generator) -> np.ndarray:
    """Consume the token and output u in S_{y,m} (first bit m).

    Measures the first qubit of |S_y>; on a mismatch applies the Hadamard-
    phase-Hadamard rotation, which exactly flips the slice for balanced
    cosets.  A post-rotation first bit different from m raises SignAbort.
    """
    if m not in (0, 1):
        raise OssError("message must be a single bit")
    if token.used:
        raise OssError("token already consumed")
    token.used = True
    coset = token.state_coset
    if is_balanced(coset):
        b_hat, slice_state = restrict_first_bit(coset, rng)
        if b_hat != m:
            slice_state = rotate_first_bit(slice_state, oracles.dual_predicate(token.vk))
        u = slice_state.coset().sample(rng)
    else:
        # Unbalanced: the first bit is constant, the rotation acts trivially.
        u = coset.sample(rng)
    if int(u[0]) != m:
        raise SignAbort(f"post-rotation first bit {int(u[0])} != message {m}")
    return u


def verify(oracles: OssOracles, vk: int, m: int, u: np.ndarray) -> bool:
    """Accept iff the first bit of u is m and P^{-1}(vk, u) is defined."""
    u = as_vec(u)
    if u.shape[0] != oracles.params.k:
        return False
    if int(u[0]) != m:
        return False
    return oracles.p_inv(vk, u) is not None


@dataclass
class ForgeryContext:
    oracles: OssOracles
    rng: np.random.Generator

    def gen_token(self) -> OssToken:
        return gen(self.oracles, self.rng)


Forgery = tuple[int, int, np.ndarray, int, np.ndarray]


def forgery_game(oracles: OssOracles, adversary: Callable[[ForgeryContext], Forgery], rng: np.random.Generator) -> bool:
    """Strong-unforgeability game: the adversary wins iff it outputs one vk and
    two verifying (message, signature) pairs with distinct signatures."""
    vk, m0, sig0, m1, sig1 = adversary(ForgeryContext(oracles, rng))
    if np.array_equal(as_vec(sig0), as_vec(sig1)):
        return False
    return verify(oracles, vk, m0, sig0) and verify(oracles, vk, m1, sig1)
