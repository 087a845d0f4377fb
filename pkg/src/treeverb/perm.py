"""Permutations of {1..d} stored as image arrays.

Products are read left to right: ``(s * t)(i) == t(s(i))``, matching the
composition order used for tree automorphisms throughout the package.
"""
from __future__ import annotations

import math
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence


class Permutation:
    """Bijection of ``{1..d}``; ``images[i-1]`` is the image of ``i``."""

    __slots__ = ("_img",)

    def __init__(self, images: Sequence[int]):
        img = tuple(int(x) - 1 for x in images)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a bijection of 1..{len(img)}: {list(images)}")
        self._img = img

    @classmethod
    def from_zero_based(cls, img: Sequence[int]) -> Permutation:
        p = cls.__new__(cls)
        p._img = tuple(img)
        return p

    @classmethod
    def identity(cls, d: int) -> Permutation:
        return cls.from_zero_based(range(d))

    @classmethod
    def from_cycles(cls, d: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        img = list(range(d))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= d or a in seen:
                    raise ValueError(f"bad cycle {cyc} for degree {d}")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b - 1
        return cls.from_zero_based(img)

    @classmethod
    def standard_cycle(cls, d: int) -> Permutation:
        """The cycle ``(1 2 ... d)``."""
        return cls.from_zero_based([(i + 1) % d for i in range(d)])

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(x + 1 for x in self._img)

    @property
    def zero_based(self) -> tuple[int, ...]:
        return self._img

    def __call__(self, i: int) -> int:
        return self._img[i - 1] + 1

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other._img
        return Permutation.from_zero_based([o[x] for x in self._img])

    def inverse(self) -> Permutation:
        return Permutation.from_zero_based(invert(self._img))

    def __pow__(self, n: int) -> Permutation:
        return Permutation.from_zero_based(perm_power(self._img, n))

    def conjugate(self, by: Permutation) -> Permutation:
        """``by^-1 * self * by``."""
        return by.inverse() * self * by

    def cycles(self) -> list[tuple[int, ...]]:
        return [tuple(x + 1 for x in c) for c in cycles_of(self._img)]

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in cycles_of(self._img, keep_fixed=True)), reverse=True))

    @property
    def sign(self) -> int:
        return -1 if parity(self._img) else 1

    @property
    def is_even(self) -> bool:
        return parity(self._img) == 0

    def order(self) -> int:
        return math.lcm(*self.cycle_type()) if self.degree else 1

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._img))

    def is_full_cycle(self) -> bool:
        return is_full_cycle(self._img)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __lt__(self, other: Permutation) -> bool:
        return self._img < other._img

    def __hash__(self) -> int:
        return hash(self._img)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def __str__(self) -> str:
        if self.is_identity():
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())


# Raw helpers on 0-based image tuples; used by the automaton and quotient code.

def compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """First ``a`` then ``b``."""
    return tuple(b[x] for x in a)


def invert(a: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_power(a: Sequence[int], n: int) -> tuple[int, ...]:
    if n < 0:
        a, n = invert(a), -n
    result = tuple(range(len(a)))
    base = tuple(a)
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def cycles_of(a: Sequence[int], keep_fixed: bool = False) -> list[tuple[int, ...]]:
    seen = [False] * len(a)
    out = []
    for start in range(len(a)):
        if seen[start]:
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = a[j]
        if keep_fixed or len(cyc) > 1:
            out.append(tuple(cyc))
    return out


def parity(a: Sequence[int]) -> int:
    """0 for even, 1 for odd."""
    return sum(len(c) - 1 for c in cycles_of(a)) & 1


def is_identity(a: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(a))


def is_full_cycle(a: Sequence[int]) -> bool:
    d = len(a)
    j, steps = a[0], 1
    while j != 0:
        j = a[j]
        steps += 1
    return steps == d


@lru_cache(maxsize=None)
def all_perms(d: int) -> tuple[tuple[int, ...], ...]:
    """Sym(d) as 0-based image tuples in lexicographic order."""
    return tuple(permutations(range(d)))


@lru_cache(maxsize=None)
def full_cycles(d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(p for p in all_perms(d) if is_full_cycle(p))


def conjugators(s: Sequence[int], t: Sequence[int]) -> list[tuple[int, ...]]:
    """All ``b`` with ``b^-1 s b == t`` in lexicographic image order.

    The condition reads ``b(s(i)) == t(b(i))``; ``b`` is fixed by where it
    sends one point from each cycle of ``s``.
    """
    d = len(s)
    cs = sorted(cycles_of(s, keep_fixed=True), key=lambda c: (-len(c), c))
    ct = cycles_of(t, keep_fixed=True)
    if sorted(map(len, cs)) != sorted(map(len, ct)):
        return []
    out = []

    def extend(k: int, b: list[int], used: set[int]) -> None:
        if k == len(cs):
            out.append(tuple(b))
            return
        cyc = cs[k]
        for tc in ct:
            if len(tc) != len(cyc) or tc[0] in used:
                continue
            for start in tc:
                nb = list(b)
                j = start
                for x in cyc:
                    nb[x] = j
                    j = t[j]
                extend(k + 1, nb, used | set(tc))

    extend(0, [-1] * d, set())
    out.sort()
    return out


def partitions(n: int, max_part: int | None = None) -> Iterable[tuple[int, ...]]:
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def from_cycle_type(parts: Sequence[int]) -> tuple[int, ...]:
    img = []
    start = 0
    for k in parts:
        img.extend(start + (i + 1) % k for i in range(k))
        start += k
    return tuple(img)
