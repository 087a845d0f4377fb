"""Seeded random elements for property tests and the acceptance suite."""
from __future__ import annotations

import random

from . import perm as P
from .constructions import SpineSpec
from .core import Portrait, TreeAutomorphism, _canonical
from .parity import ParitySequence
from .perm import Permutation


def rng_for(seed: int | str) -> random.Random:
    return random.Random(seed)


def random_perm(rng: random.Random, d: int) -> tuple[int, ...]:
    img = list(range(d))
    rng.shuffle(img)
    return tuple(img)


def random_automaton(rng: random.Random, d: int, max_states: int = 4) -> TreeAutomorphism:
    """Random machine on at most ``max_states`` non-identity states."""
    k = rng.randint(1, max_states)
    ident = k
    labels = [random_perm(rng, d) for _ in range(k)] + [tuple(range(d))]
    children = [
        tuple(rng.randrange(k) if rng.random() < 0.6 else ident for _ in range(d))
        for _ in range(k)
    ] + [(ident,) * d]
    return _canonical(d, labels, children)


def random_portrait(rng: random.Random, d: int, n: int) -> Portrait:
    size = (d ** n - 1) // (d - 1)
    return Portrait(d, n, tuple(random_perm(rng, d) for _ in range(size)))


def _even_levels(p: Portrait, first_level: int = 0) -> Portrait:
    # flip the last label on each odd level by a transposition
    d, n = p.degree, p.depth
    raw = list(p.raw)
    swap = (1, 0) + tuple(range(2, d))
    for level in range(first_level, n):
        lo, hi = (d ** level - 1) // (d - 1), (d ** (level + 1) - 1) // (d - 1)
        if sum(P.parity(raw[i]) for i in range(lo, hi)) % 2:
            raw[hi - 1] = P.compose(raw[hi - 1], swap)
    return Portrait(d, n, tuple(raw))


def random_kerP_portrait(rng: random.Random, d: int, n: int) -> Portrait:
    """Random portrait with every level product even."""
    return _even_levels(random_portrait(rng, d, n))


def random_st1_portrait(rng: random.Random, d: int, n: int) -> Portrait:
    p = random_portrait(rng, d, n)
    return Portrait(d, n, (tuple(range(d)),) + p.raw[1:])


def random_m2_portrait(rng: random.Random, d: int, n: int) -> Portrait:
    return _even_levels(random_st1_portrait(rng, d, n))


def random_spine_spec(rng: random.Random, d: int, max_pre: int = 3, max_period: int = 3) -> SpineSpec:
    cycles = P.full_cycles(d)

    def pick(k):
        return tuple(Permutation.from_zero_based(rng.choice(cycles)) for _ in range(k))

    return SpineSpec(d, pick(rng.randint(0, max_pre)), pick(rng.randint(1, max_period)))


def random_parity_sequence(rng: random.Random, max_pre: int = 4, max_period: int = 4) -> ParitySequence:
    pre = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, max_pre)))
    per = tuple(rng.randint(0, 1) for _ in range(rng.randint(1, max_period)))
    return ParitySequence(pre, per)


def identity(d: int) -> TreeAutomorphism:
    return TreeAutomorphism.identity(d)
