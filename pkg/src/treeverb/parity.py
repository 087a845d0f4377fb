"""Level parities, the parity map and the M_k chain.

The multiplicity vector of states at level n (mod 2) evolves linearly over
GF(2), so the level parities of a machine with m states form a linear
recurrent sequence of order at most m.  Its minimal recurrence is
recovered with Berlekamp-Massey from 2m terms, which gives the exact
eventually periodic sequence even when the vector orbit itself is long.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import perm as P
from .core import TreeAutomorphism

MAX_PERIOD = 1 << 20


@dataclass(frozen=True)
class ParitySequence:
    """Eventually periodic bit sequence ``pre + per + per + ...``, kept canonical."""

    pre: tuple[int, ...]
    per: tuple[int, ...]

    def __post_init__(self):
        pre = tuple(int(b) for b in self.pre)
        per = tuple(int(b) for b in self.per)
        if not per:
            raise ValueError("period must be nonempty")
        if any(b not in (0, 1) for b in pre + per):
            raise ValueError("bits must be 0 or 1")
        n = len(per)
        for k in range(1, n + 1):
            if n % k == 0 and per[:k] * (n // k) == per:
                per = per[:k]
                break
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    @classmethod
    def parse(cls, text: str) -> ParitySequence:
        parts = dict(item.split("=", 1) for item in text.strip().split(";") if item)
        if set(parts) != {"pre", "per"}:
            raise ValueError(f"expected 'pre=<bits>;per=<bits>', got {text!r}")
        try:
            return cls(tuple(map(int, parts["pre"])), tuple(map(int, parts["per"])))
        except ValueError as exc:
            raise ValueError(f"bad parity sequence {text!r}: {exc}") from None

    @classmethod
    def zero(cls) -> ParitySequence:
        return cls((), (0,))

    def bit(self, n: int) -> int:
        if n < len(self.pre):
            return self.pre[n]
        return self.per[(n - len(self.pre)) % len(self.per)]

    def bits(self, n: int) -> list[int]:
        return [self.bit(i) for i in range(n)]

    def is_zero(self) -> bool:
        return not self.pre and self.per == (0,)

    def __xor__(self, other: ParitySequence) -> ParitySequence:
        pre = max(len(self.pre), len(other.pre))
        per = math.lcm(len(self.per), len(other.per))
        bits = [self.bit(i) ^ other.bit(i) for i in range(pre + per)]
        return ParitySequence(tuple(bits[:pre]), tuple(bits[pre:]))

    def __str__(self) -> str:
        return "pre={};per={}".format("".join(map(str, self.pre)), "".join(map(str, self.per)))


# -- level parities -----------------------------------------------------------


def _masks(g: TreeAutomorphism) -> tuple[list[int], int]:
    child_mask = []
    for ch in g.children:
        m = 0
        for c in ch:
            m ^= 1 << c
        child_mask.append(m)
    odd = 0
    for s, lab in enumerate(g.labels):
        if P.parity(lab):
            odd |= 1 << s
    return child_mask, odd


def _step(vec: int, child_mask: Sequence[int]) -> int:
    out = 0
    s = 0
    while vec:
        if vec & 1:
            out ^= child_mask[s]
        vec >>= 1
        s += 1
    return out


def level_parities(g: TreeAutomorphism, n: int, start: int = 0) -> list[int]:
    """``[eps_0, ..., eps_{n-1}]`` for the section rooted at state ``start``."""
    child_mask, odd = _masks(g)
    vec = 1 << start
    out = []
    for _ in range(n):
        out.append(bin(vec & odd).count("1") & 1)
        vec = _step(vec, child_mask)
    return out


def epsilon(g: TreeAutomorphism, n: int) -> int:
    """Parity of the product of all level-``n`` labels (0 even, 1 odd)."""
    if n < 0:
        raise ValueError("level must be non-negative")
    return level_parities(g, n + 1)[n]


def berlekamp_massey(bits: Sequence[int]) -> list[int]:
    """Shortest connection polynomial ``[1, c_1, ..., c_L]`` over GF(2) with
    ``s_j = c_1 s_{j-1} + ... + c_L s_{j-L}`` for ``j >= L``."""
    n = len(bits)
    c = [1] + [0] * n
    b = [1] + [0] * n
    length, m = 0, -1
    for j in range(n):
        disc = bits[j]
        for i in range(1, length + 1):
            disc ^= c[i] & bits[j - i]
        if disc:
            t = c[:]
            shift = j - m
            for i in range(n + 1 - shift):
                c[i + shift] ^= b[i]
            if 2 * length <= j:
                length, m, b = j + 1 - length, j, t
    return c[: length + 1]


def _sequence_from_recurrence(
    bits: Sequence[int], conn: Sequence[int], max_period: int = MAX_PERIOD
) -> ParitySequence:
    length = len(conn) - 1
    if length == 0:
        return ParitySequence((), (0,))
    seq = list(bits[:length])
    taps = [i for i in range(1, length + 1) if conn[i]]
    seen: dict[tuple[int, ...], int] = {}
    j = length
    while True:
        window = tuple(seq[j - length : j])
        if window in seen:
            first = seen[window]
            return ParitySequence(tuple(seq[: first - length]), tuple(seq[first - length : j - length]))
        seen[window] = j
        if j - length > max_period + length:
            raise ValueError(f"parity period exceeds {max_period}")
        nxt = 0
        for i in taps:
            nxt ^= seq[j - i]
        seq.append(nxt)
        j += 1


def parity_sequence(g: TreeAutomorphism, start: int = 0) -> ParitySequence:
    """Exact ``P(g) = (eps_0, eps_1, ...)``."""
    m = g.num_states
    bits = level_parities(g, 2 * m + 2, start)
    conn = berlekamp_massey(bits)
    return _sequence_from_recurrence(bits, conn)


def _kernel_states(g: TreeAutomorphism) -> list[bool]:
    # A recurrence of order <= m vanishing on its first m terms vanishes everywhere.
    m = g.num_states
    child_mask, odd = _masks(g)
    # Track all start states at once: row s is the multiplicity vector from s.
    rows = [1 << s for s in range(m)]
    zero = [True] * m
    for _ in range(m):
        for s in range(m):
            if zero[s] and bin(rows[s] & odd).count("1") & 1:
                zero[s] = False
        rows = [_step(r, child_mask) for r in rows]
    return zero


def in_ker_P(g: TreeAutomorphism) -> bool:
    """Whether every level of the portrait multiplies to an even permutation."""
    return _kernel_states(g)[0]


# -- exponent of Alt(d) -------------------------------------------------------


def alt_exponent(d: int) -> int:
    """Exponent of Alt(d): lcm of element orders over even cycle types."""
    if d < 3:
        raise ValueError(f"Alt(d) exponent needs d >= 3, got {d}")
    e = 1
    for parts in P.partitions(d):
        if (d - len(parts)) % 2 == 0:
            e = math.lcm(e, math.lcm(*parts))
    return e


def two_adic_valuation(n: int) -> int:
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


def alt_exponent_two_part(d: int) -> int:
    """Predicted 2-adic valuation of ``e_d`` for odd ``d >= 3``:
    ``k - 1`` if ``d = 2^k + 1``, else ``k`` where ``2^k < d < 2^(k+1)``."""
    if d < 3 or d % 2 == 0:
        raise ValueError(f"formula covers odd d >= 3, got {d}")
    k = (d - 1).bit_length() - 1
    return k - 1 if d == 2 ** k + 1 else k


# -- chain ------------------------------------------------------------------


@dataclass(frozen=True)
class ChainIndex:
    """Largest ``k`` with ``g`` in ``M_k``; ``None`` marks the identity."""

    value: int | None

    @property
    def trivial(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "trivial" if self.value is None else f"M{self.value}"


TRIVIAL = ChainIndex(None)


class _ChainOracle:
    """Memoized ``in_M`` over the states of one machine."""

    def __init__(self, g: TreeAutomorphism):
        self.g = g
        self.kernel = _kernel_states(g)
        self.memo: dict[tuple[int, int], bool] = {}

    def stab1(self, s: int) -> bool:
        return P.is_identity(self.g.labels[s])

    def member(self, s: int, k: int) -> bool:
        if k == 0:
            return True
        if k == 1:
            return self.kernel[s]
        if k == 2:
            return self.kernel[s] and self.stab1(s)
        key = (s, k)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.stab1(s) and all(self.member(c, k - 2) for c in self.g.children[s])
            self.memo[key] = hit
        return hit


def in_M(g: TreeAutomorphism, k: int) -> bool:
    if k < 0:
        raise ValueError("k must be non-negative")
    return _ChainOracle(g).member(0, k)


def first_nontrivial_level(g: TreeAutomorphism) -> int | None:
    if g.is_identity():
        return None
    level = 0
    cur = {0}
    seen_sets = set()
    while True:
        if any(not P.is_identity(g.labels[s]) for s in cur):
            return level
        key = frozenset(cur)
        if key in seen_sets:  # unreachable for canonical non-identity machines
            return None
        seen_sets.add(key)
        cur = {c for s in cur for c in g.children[s]}
        level += 1


def classify_chain(g: TreeAutomorphism) -> ChainIndex:
    """Position of ``g`` in ``M_0 > M_1 > ...``.

    If level ``m`` carries the first nontrivial label then ``g`` is outside
    ``St(m+1)`` and hence outside ``M_{2m+2}``, which bounds the search.
    """
    m = first_nontrivial_level(g)
    if m is None:
        return TRIVIAL
    oracle = _ChainOracle(g)
    k = 0
    while k + 1 <= 2 * m + 1 and oracle.member(0, k + 1):
        k += 1
    return ChainIndex(k)


def chain_scope_note(d: int) -> str | None:
    """Warning text when the chain is not known to exhaust the fully invariant
    subgroups for this degree."""
    if d % 2 == 0 or d < 3:
        return (
            f"warning: d={d}: the M_k chain is only known to list all fully "
            "invariant subgroups for odd d >= 3"
        )
    return None
