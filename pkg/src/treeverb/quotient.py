"""Brute-force arithmetic in the finite quotients G_n = Aut T / St(n).

G_n is the n-fold iterated wreath product of Sym(d), represented by
depth-n portraits.  Everything here is dense enumeration: it is meant to be
a trustworthy oracle at desk scale, not a fast subgroup algorithm.
"""
from __future__ import annotations

import math
import os
from array import array
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from . import perm as P
from ._backend import KERNELS, PortraitKernel
from .core import Portrait, TreeAutomorphism, portrait_to_automaton, truncate
from .parity import alt_exponent

DEFAULT_LIMIT = 10 ** 7


def default_limit() -> int:
    raw = os.environ.get("TREEVERB_LIMIT")
    return int(raw) if raw else DEFAULT_LIMIT


class GroupTooLarge(ValueError):
    def __init__(self, d: int, n: int, order: int, limit: int):
        super().__init__(f"group too large: |G_{n}| = {order} for d={d} exceeds limit {limit}")
        self.order = order
        self.limit = limit


def group_order(d: int, n: int) -> int:
    return math.factorial(d) ** ((d ** n - 1) // (d - 1))


class QuotientGroup:
    """Tables and kernel for one ``G_n``; obtain instances via :func:`get_group`."""

    def __init__(self, d: int, n: int, backend: str | None = None):
        if d < 2 or n < 0:
            raise ValueError(f"need d >= 2 and n >= 0, got d={d}, n={n}")
        self.d = d
        self.n = n
        self.size = (d ** n - 1) // (d - 1)
        self.perms = P.all_perms(d)
        self.index = {p: i for i, p in enumerate(self.perms)}
        mul = [[self.index[P.compose(a, b)] for b in self.perms] for a in self.perms]
        inv = [self.index[P.invert(a)] for a in self.perms]
        self.parity = [P.parity(a) for a in self.perms]
        kernel_cls = PortraitKernel if backend is None else KERNELS[backend]
        self.kernel = kernel_cls(d, n, mul, inv, self.perms)
        self.identity = bytes(2 * self.size)
        self.level_bounds = [((d ** k - 1) // (d - 1), (d ** (k + 1) - 1) // (d - 1)) for k in range(n)]

    @property
    def order(self) -> int:
        return group_order(self.d, self.n)

    def __repr__(self) -> str:
        return f"QuotientGroup(d={self.d}, n={self.n})"

    # raw bytes <-> labels

    def encode(self, labels: Sequence[Sequence[int]]) -> bytes:
        return array("H", [self.index[tuple(lab)] for lab in labels]).tobytes()

    def decode(self, data: bytes) -> list[tuple[int, ...]]:
        return [self.perms[i] for i in memoryview(data).cast("H")]

    def from_portrait(self, p: Portrait) -> bytes:
        if (p.degree, p.depth) != (self.d, self.n):
            raise ValueError(f"portrait shape ({p.degree}, {p.depth}) is not ({self.d}, {self.n})")
        return self.encode(p.raw)

    def to_portrait(self, data: bytes) -> Portrait:
        return Portrait(self.d, self.n, tuple(self.decode(data)))

    def root_label(self, data: bytes) -> tuple[int, ...]:
        return self.perms[memoryview(data).cast("H")[0]]

    def sections(self, data: bytes) -> list[bytes]:
        """First-level sections as elements of ``G_{n-1}``."""
        d = self.d
        v = memoryview(data).cast("H")
        out = [array("H") for _ in range(d)]
        for k in range(1, self.n):
            start = self.level_bounds[k][0]
            block = d ** (k - 1)
            for i in range(d):
                out[i].extend(v[start + i * block : start + (i + 1) * block])
        return [a.tobytes() for a in out]

    def assemble(self, label: Sequence[int], sections: Sequence[bytes]) -> bytes:
        d = self.d
        out = array("H", [self.index[tuple(label)]])
        views = [memoryview(s).cast("H") for s in sections]
        for k in range(1, self.n):
            lo, hi = (d ** (k - 1) - 1) // (d - 1), (d ** k - 1) // (d - 1)
            for view in views:
                out.extend(view[lo:hi])
        return out.tobytes()

    def level_parities(self, data: bytes) -> list[int]:
        v = memoryview(data).cast("H")
        par = self.parity
        out = []
        for lo, hi in self.level_bounds:
            b = 0
            for p in range(lo, hi):
                b ^= par[v[p]]
            out.append(b)
        return out

    def element(self, data: bytes) -> QuotientElement:
        return QuotientElement(self, data)


@lru_cache(maxsize=None)
def get_group(d: int, n: int, backend: str | None = None) -> QuotientGroup:
    return QuotientGroup(d, n, backend)


class QuotientElement:
    """Element of ``G_n``; immutable and hashable."""

    __slots__ = ("group", "data")

    def __init__(self, group: QuotientGroup, data: bytes):
        self.group = group
        self.data = data

    def _check(self, other: QuotientElement) -> None:
        if (self.group.d, self.group.n) != (other.group.d, other.group.n):
            raise ValueError("elements of different quotients")

    def __mul__(self, other: QuotientElement) -> QuotientElement:
        self._check(other)
        return QuotientElement(self.group, self.group.kernel.mul(self.data, other.data))

    def inverse(self) -> QuotientElement:
        return QuotientElement(self.group, self.group.kernel.inv(self.data))

    def __pow__(self, m: int) -> QuotientElement:
        return QuotientElement(self.group, self.group.kernel.power(self.data, m))

    def is_identity(self) -> bool:
        return self.data == self.group.identity

    def portrait(self) -> Portrait:
        return self.group.to_portrait(self.data)

    def lift(self) -> TreeAutomorphism:
        return portrait_to_automaton(self.portrait())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuotientElement):
            return NotImplemented
        return (self.group.d, self.group.n, self.data) == (other.group.d, other.group.n, other.data)

    def __lt__(self, other: QuotientElement) -> bool:
        return self.data < other.data

    def __hash__(self) -> int:
        return hash((self.group.d, self.group.n, self.data))

    def __repr__(self) -> str:
        labels = " ".join(
            "".join(str(x + 1) for x in lab) for lab in self.group.decode(self.data)
        )
        return f"<G_{self.group.n}(d={self.group.d}) {labels}>"


def project(g: TreeAutomorphism, n: int) -> QuotientElement:
    G = get_group(g.degree, n)
    return G.element(G.from_portrait(truncate(g, n)))


def q_op(a: QuotientElement, b: QuotientElement) -> QuotientElement:
    return a * b


def q_inv(a: QuotientElement) -> QuotientElement:
    return a.inverse()


def enumerate_raw(G: QuotientGroup, limit: int | None = None) -> list[bytes]:
    limit = default_limit() if limit is None else limit
    if G.order > limit:
        raise GroupTooLarge(G.d, G.n, G.order, limit)
    return [array("H", t).tobytes() for t in product(range(len(G.perms)), repeat=G.size)]


def enumerate_group(d: int, n: int, limit: int | None = None) -> list[QuotientElement]:
    """Every element of ``G_n`` (all label assignments), in lexicographic order."""
    G = get_group(d, n)
    return [G.element(x) for x in enumerate_raw(G, limit)]


# -- closure ------------------------------------------------------------------


def closure_raw(G: QuotientGroup, seeds: Iterable[bytes], limit: int | None = None) -> set[bytes]:
    """Subgroup generated by ``seeds``, extended one new generator at a time."""
    limit = default_limit() if limit is None else limit
    elems = [G.identity]
    seen = {G.identity}
    gens: list[bytes] = []
    kernel = G.kernel
    for s in sorted(set(seeds)):
        if s in seen:
            continue
        gens.append(s)
        old = len(elems)
        kernel.expand(seen, elems, 0, old, [s], limit)
        kernel.expand(seen, elems, old, -1, gens, limit)
    return seen


def closure(seeds: Iterable[QuotientElement], limit: int | None = None) -> frozenset[QuotientElement]:
    seeds = list(seeds)
    if not seeds:
        raise ValueError("closure needs at least one seed to fix the quotient")
    G = seeds[0].group
    for s in seeds:
        seeds[0]._check(s)
    return frozenset(G.element(x) for x in closure_raw(G, (s.data for s in seeds), limit))


# -- word values --------------------------------------------------------------

WORDS = ("square", "power", "commutator")


def word_values_raw(
    G: QuotientGroup,
    elems: Sequence[bytes],
    word: str,
    exponent: int | None = None,
    whole_group: bool = False,
) -> set[bytes]:
    k = G.kernel
    if word == "square":
        return {k.mul(x, x) for x in elems}
    if word == "power":
        if exponent is None:
            raise ValueError("power word needs an exponent")
        return {k.power(x, exponent) for x in elems}
    if word == "commutator":
        if whole_group:
            # [a, b] = a^-1 a^b, and {a^b} is the conjugacy class of a.
            out: set[bytes] = set()
            done: set[bytes] = set()
            for a in elems:
                if a in done:
                    continue
                cls = k.conjugacy_class(a, list(elems))
                done |= cls
                members = list(cls)
                for x in members:
                    out.update(k.left_mul_all(k.inv(x), members))
            return out
        invs = [k.inv(x) for x in elems]
        return {
            k.mul(k.mul(ia, ib), k.mul(a, b))
            for a, ia in zip(elems, invs)
            for b, ib in zip(elems, invs)
        }
    raise ValueError(f"unknown word {word!r}; expected one of {WORDS}")


def word_values(
    source: QuotientGroup | Iterable[QuotientElement],
    word: str,
    exponent: int | None = None,
    limit: int | None = None,
) -> frozenset[QuotientElement]:
    """Raw value set of ``word`` over ``source`` (a whole ``G_n`` or a set)."""
    if isinstance(source, QuotientGroup):
        G = source
        elems = enumerate_raw(G, limit)
        whole = True
    else:
        items = list(source)
        if not items:
            return frozenset()
        G = items[0].group
        elems = [x.data for x in items]
        whole = False
    return frozenset(G.element(x) for x in word_values_raw(G, elems, word, exponent, whole))


# -- chain projections -------------------------------------------------------


def _member(G_by_depth: list[QuotientGroup], data: bytes, n: int, k: int) -> bool:
    if n == 0 or k == 0:
        return True
    G = G_by_depth[n]
    if k == 1:
        return not any(G.level_parities(data))
    root_id = memoryview(data).cast("H")[0] == 0
    if k == 2:
        return root_id and not any(G.level_parities(data))
    return root_id and all(_member(G_by_depth, s, n - 1, k - 2) for s in G.sections(data))


def chain_member_raw(G: QuotientGroup, elems: Iterable[bytes], k: int) -> set[bytes]:
    groups = [get_group(G.d, j) for j in range(G.n + 1)]
    return {x for x in elems if _member(groups, x, G.n, k)}


def in_chain_projection(a: QuotientElement, k: int) -> bool:
    G = a.group
    groups = [get_group(G.d, j) for j in range(G.n + 1)]
    return _member(groups, a.data, G.n, k)


def chain_member_set(d: int, n: int, k: int, limit: int | None = None) -> frozenset[QuotientElement]:
    """Image of ``M_k`` in ``G_n``."""
    G = get_group(d, n)
    return frozenset(G.element(x) for x in chain_member_raw(G, enumerate_raw(G, limit), k))


@dataclass
class Check:
    name: str
    d: int
    n: int
    lhs: int
    rhs: int
    passed: bool

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} d={self.d} n={self.n} lhs={self.lhs} rhs={self.rhs} {verdict}"


@dataclass
class ChainReport:
    d: int
    n: int
    order: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def verify_chain(d: int, n: int, limit: int | None = None) -> ChainReport:
    """Check, inside ``G_n``: squares and commutators generate the image of
    ``M_1``; ``e_d``-th powers of ``M_1`` generate ``M_2``; squares of
    ``M_2`` generate ``M_3``."""
    e = alt_exponent(d)
    G = get_group(d, n)
    elems = enumerate_raw(G, limit)
    lim = default_limit() if limit is None else limit
    m1 = chain_member_raw(G, elems, 1)
    m2 = chain_member_raw(G, m1, 2)
    m3 = chain_member_raw(G, m2, 3)
    report = ChainReport(d, n, len(elems))

    def add(name: str, generated: set[bytes], target: set[bytes]) -> None:
        report.checks.append(Check(name, d, n, len(generated), len(target), generated == target))

    add("squares", closure_raw(G, word_values_raw(G, elems, "square"), lim), m1)
    add("commutators", closure_raw(G, word_values_raw(G, elems, "commutator", whole_group=True), lim), m1)
    m1_list = sorted(m1)
    add("alt_exponent_powers", closure_raw(G, word_values_raw(G, m1_list, "power", e), lim), m2)
    add("m2_squares", closure_raw(G, word_values_raw(G, sorted(m2), "square"), lim), m3)
    return report
