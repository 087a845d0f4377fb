"""Witness-producing constructions for the derived subgroup and the M_k chain.

Structural constructions (odometer, spine elements and their conjugators,
order-two coset representatives) are exact finite-state machines.  Anything
that needs a conjugator solving ``x^-1 g x = h`` is computed in the quotient
``G_N`` and returned as a depth-``N`` truncation.  Every witness is checked
with the automaton arithmetic of :mod:`treeverb.core` before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import perm as P
from .core import (
    Portrait,
    TreeAutomorphism,
    _canonical,
    commutator,
    compose,
    conjugate,
    equals,
    in_stabilizer,
    inverse,
    portrait_to_automaton,
    power,
    truncate,
)
from .parity import ParitySequence, alt_exponent, epsilon, in_ker_P, in_M, parity_sequence
from .perm import Permutation
from .quotient import QuotientGroup, get_group


class ConstructionError(ValueError):
    """A precondition of a construction does not hold."""


class NotConjugate(ConstructionError):
    pass


class WitnessError(RuntimeError):
    """A produced witness failed its own check; this indicates a bug."""


def _congruent(a: TreeAutomorphism, b: TreeAutomorphism, depth: int) -> bool:
    return truncate(a, depth) == truncate(b, depth)


# -- odometer and spine elements ----------------------------------------------


def adding_machine(d: int) -> TreeAutomorphism:
    """``t = (1, ..., 1, t)(1 2 ... d)``: +1 on base-d strings, least significant first."""
    if d < 2:
        raise ValueError(f"degree must be at least 2, got {d}")
    cyc = tuple((i + 1) % d for i in range(d))
    ident = tuple(range(d))
    return _canonical(d, [cyc, ident], [(1,) * (d - 1) + (0,), (1,) * d])


@dataclass(frozen=True)
class SpineSpec:
    """Labels ``s_1, s_2, ...`` along the rightmost path, as ``pre`` then ``period`` repeated."""

    degree: int
    pre: tuple[Permutation, ...]
    period: tuple[Permutation, ...]

    def __post_init__(self):
        object.__setattr__(self, "pre", tuple(self.pre))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ConstructionError("spine period must be nonempty")
        for s in self.pre + self.period:
            if s.degree != self.degree:
                raise ConstructionError(f"{s!r} has degree {s.degree}, expected {self.degree}")
            if not s.is_full_cycle():
                raise ConstructionError(f"{s} is not a {self.degree}-cycle")

    @property
    def perms(self) -> tuple[Permutation, ...]:
        return self.pre + self.period

    def label(self, k: int) -> Permutation:
        """``s_k`` for ``k >= 1``."""
        i = k - 1
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]


def _spine_machine(d: int, labels: Sequence[tuple[int, ...]], loop_to: int, side: str) -> TreeAutomorphism:
    # side="spine": only child d continues; side="all": every child continues.
    n = len(labels)
    ident = n
    children = []
    for j in range(n):
        nxt = j + 1 if j + 1 < n else loop_to
        if side == "spine":
            children.append((ident,) * (d - 1) + (nxt,))
        else:
            children.append((nxt,) * d)
    return _canonical(d, list(labels) + [tuple(range(d))], children + [(ident,) * d])


def spine_automaton(spec: SpineSpec) -> TreeAutomorphism:
    """``a = (1, ..., 1, a_1) s_1`` with ``a_k = (1, ..., 1, a_{k+1}) s_{k+1}``."""
    return _spine_machine(
        spec.degree, [p.zero_based for p in spec.perms], len(spec.pre), "spine"
    )


def spine_alignment(s: Permutation) -> Permutation:
    """The unique ``a`` with ``a(d) = d`` and ``a^-1 s a = (1 2 ... d)``."""
    d = s.degree
    img = [0] * d
    j = d - 1
    img[j] = d - 1
    for m in range(1, d):
        j = s.zero_based[j]
        img[j] = m - 1
    return Permutation.from_zero_based(img)


def conjugator_to_odometer(spec: SpineSpec) -> TreeAutomorphism:
    """Exact ``x`` with ``x^-1 a x = t`` for the spine element ``a``.

    ``x = (x_1, ..., x_1) a_1`` and ``x_k = (x_{k+1}, ..., x_{k+1}) a_{k+1}``,
    where ``a_k`` aligns ``s_k`` with the standard cycle and fixes ``d``.
    """
    d = spec.degree
    x = _spine_machine(
        d, [spine_alignment(p).zero_based for p in spec.perms], len(spec.pre), "all"
    )
    if not equals(conjugate(spine_automaton(spec), x), adding_machine(d)):
        raise WitnessError("spine conjugator does not reach the adding machine")
    return x


def is_spine_form(g: TreeAutomorphism) -> bool:
    """All labels along the rightmost path are d-cycles and every other
    section hanging off that path is trivial."""
    d = g.degree
    ident = g.identity_state()
    s = 0
    seen = set()
    while s not in seen:
        seen.add(s)
        if not P.is_full_cycle(g.labels[s]):
            return False
        ch = g.children[s]
        if any(c != ident for c in ch[: d - 1]):
            return False
        s = ch[d - 1]
    return True


def order_two_rep(eps: ParitySequence, d: int) -> TreeAutomorphism:
    """``a = (1, ..., 1, a_1)(1 2)^{e_0}``, ``a_i = (1, ..., 1, a_{i+1})(1 2)^{e_i}``.

    ``P(a) = eps``, and since ``(1 2)`` fixes ``d`` when ``d >= 3`` we get ``a^2 = 1``.
    """
    if d < 3:
        raise ConstructionError("order-two representatives need d >= 3")
    swap = (1, 0) + tuple(range(2, d))
    ident = tuple(range(d))
    labels = [swap if b else ident for b in eps.pre + eps.per]
    a = _spine_machine(d, labels, len(eps.pre), "spine")
    if not power(a, 2).is_identity() or parity_sequence(a) != eps:
        raise WitnessError("order-two representative check failed")
    return a


# -- factoring even permutations into two d-cycles ----------------------------


@lru_cache(maxsize=None)
def _factor(sigma: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    for alpha in P.full_cycles(len(sigma)):
        gamma = P.compose(P.invert(alpha), sigma)
        if P.is_full_cycle(gamma):
            return alpha, P.conjugators(alpha, gamma)[0]
    return None


@lru_cache(maxsize=None)
def verify_two_cycle_products(d: int) -> bool:
    """Every even permutation of degree ``d`` is a product of two d-cycles.

    Checked on one representative per even cycle type; the property is
    invariant under conjugation.
    """
    for parts in P.partitions(d):
        if (d - len(parts)) % 2 == 0 and _factor(P.from_cycle_type(parts)) is None:
            return False
    return True


def two_dcycle_factorization(sigma: Permutation) -> tuple[Permutation, Permutation]:
    """First d-cycle ``alpha`` (lexicographic images) with ``alpha^-1 sigma`` a
    d-cycle, and the lexicographically first ``beta`` with
    ``alpha * alpha^beta = sigma``."""
    d = sigma.degree
    if not sigma.is_even and d > 1:
        raise ConstructionError(f"{sigma} is odd")
    if d <= 9 and not verify_two_cycle_products(d):
        raise ConstructionError(f"degree {d}: some even permutation is not a product of two {d}-cycles")
    hit = _factor(sigma.zero_based)
    if hit is None:
        raise ConstructionError(f"{sigma} is not a product of two {d}-cycles")
    return Permutation.from_zero_based(hit[0]), Permutation.from_zero_based(hit[1])


# -- product of two spherically transitive elements ---------------------------


class _TupleGroup:
    """Table-free ``G_n`` on tuples of label tuples, for degrees where the
    Sym(d) multiplication table of :class:`QuotientGroup` is too large."""

    def __init__(self, d: int, n: int):
        self.d, self.n = d, n
        self.size = (d ** n - 1) // (d - 1)
        self.inner = (d ** (n - 1) - 1) // (d - 1) if n else 0
        self.identity = (tuple(range(d)),) * self.size
        self.kernel = self

    def _positions(self, x):
        d = self.d
        pos = [0] * self.size
        for p in range(self.inner):
            base = d * pos[p] + 1
            q = d * p + 1
            lab = x[p]
            for i in range(d):
                pos[q + i] = base + lab[i]
        return pos

    def mul(self, x, y):
        pos = self._positions(x)
        return tuple(P.compose(x[p], y[pos[p]]) for p in range(self.size))

    def inv(self, x):
        pos = self._positions(x)
        out = [None] * self.size
        for p in range(self.size):
            out[pos[p]] = P.invert(x[p])
        return tuple(out)

    def encode(self, labels):
        return tuple(tuple(a) for a in labels)

    def from_portrait(self, p: Portrait):
        return tuple(p.raw)

    def to_portrait(self, x) -> Portrait:
        return Portrait(self.d, self.n, tuple(x))

    def root_label(self, x):
        return x[0]

    def sections(self, x):
        d = self.d
        out = [[] for _ in range(d)]
        for k in range(1, self.n):
            start = (d ** k - 1) // (d - 1)
            block = d ** (k - 1)
            for i in range(d):
                out[i].extend(x[start + i * block : start + (i + 1) * block])
        return [tuple(o) for o in out]

    def assemble(self, label, sections):
        d = self.d
        out = [tuple(label)]
        for k in range(1, self.n):
            lo, hi = (d ** (k - 1) - 1) // (d - 1), (d ** k - 1) // (d - 1)
            for sec in sections:
                out.extend(sec[lo:hi])
        return tuple(out)


_TABLE_MAX_DEGREE = 5


def _group(d: int, n: int):
    return get_group(d, n) if d <= _TABLE_MAX_DEGREE else _TupleGroup(d, n)


def _tower(d: int, n: int) -> list:
    return [_group(d, j) for j in range(n + 1)]


def _spine_bytes(G: QuotientGroup, alphas: Sequence[tuple[int, ...]]) -> bytes:
    d = G.d
    labels = [tuple(range(d))] * G.size
    for level, a in enumerate(alphas):
        labels[(d ** (level + 1) - 1) // (d - 1) - 1] = a
    return G.encode(labels)


def _product(G: QuotientGroup, items: Sequence[bytes]) -> bytes:
    out = G.identity
    for x in items:
        out = G.kernel.mul(out, x)
    return out


def _decompose_raw(tower: list[QuotientGroup], g: bytes, n: int) -> tuple[list[tuple[int, ...]], bytes]:
    """Spine labels of ``u`` and ``y`` in ``G_n`` with ``u u^y = g``.

    Writing ``u = (1, ..., 1, u_1) alpha`` and ``y = (x_1, ..., x_d) beta``,
    the section of ``u u^y`` at ``i`` is ``u_i p_i^-1 u_1^[k_i = d] p_rho(i)``
    with ``k_i = beta^-1(alpha(i))``, ``p_i = x_{k_i}`` and
    ``rho = alpha^-1 . sigma``.  Multiplying the equations along the cycle of
    ``rho`` through ``d`` leaves ``u_1 u_1^{p_d} = g_d g_rho(d) ...``, solved
    one level down; the remaining ``p`` follow along the cycle.
    """
    if n == 0:
        return [], tower[0].identity
    G, H = tower[n], tower[n - 1]
    d = G.d
    k = H.kernel
    sigma = G.root_label(g)
    alpha, beta = _factor(sigma) or (None, None)
    if alpha is None:
        raise ConstructionError(f"root label {sigma} has no two-cycle factorization")
    ainv, binv = P.invert(alpha), P.invert(beta)
    rho = [ainv[sigma[i]] for i in range(d)]
    kk = [binv[alpha[i]] for i in range(d)]
    secs = G.sections(g)
    order = [d - 1]
    while len(order) < d:
        order.append(rho[order[-1]])
    if rho[order[-1]] != d - 1:
        raise WitnessError("rho is not a d-cycle")
    alphas_sub, y1 = _decompose_raw(tower, _product(H, [secs[i] for i in order]), n - 1)
    u1 = _spine_bytes(H, alphas_sub)
    u1_inv = k.inv(u1)
    p: list[bytes | None] = [None] * d
    p[d - 1] = y1
    for idx in range(d - 1):
        i, nxt = order[idx], order[idx + 1]
        val = p[i]
        if kk[i] == d - 1:
            val = k.mul(u1_inv, val)
        if i == d - 1:
            val = k.mul(val, u1_inv)
        p[nxt] = k.mul(val, secs[i])
    x: list = [None] * d
    for i in range(d):
        x[kk[i]] = p[i]
    return [alpha] + alphas_sub, G.assemble(beta, x)


@dataclass(frozen=True)
class DecompositionWitness:
    """``u u^y`` agrees with ``target`` modulo ``St(depth)``; ``u`` is a spine element."""

    u: TreeAutomorphism
    y: TreeAutomorphism
    depth: int
    target: TreeAutomorphism
    spine: SpineSpec

    def verify(self) -> bool:
        return is_spine_form(self.u) and _congruent(
            compose(self.u, conjugate(self.u, self.y)), self.target, self.depth
        )

    def manifest(self) -> str:
        return f"depth={self.depth} verified={'true' if self.verify() else 'false'}"


def _require_kernel(g: TreeAutomorphism) -> None:
    if not in_ker_P(g):
        raise ConstructionError("g is not in ker P (some level has an odd label product)")


def decompose_transitive_pair(g: TreeAutomorphism, depth: int) -> DecompositionWitness:
    """``g = u u^y`` modulo ``St(depth)`` with ``u`` spherically transitive.

    Beyond the truncation depth the spine of ``u`` continues with the
    standard cycle, so ``u`` is an exact spine element.
    """
    d = g.degree
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if d % 2 == 0 and d != 2:
        raise ConstructionError(f"degree {d} is even; the construction needs odd d (or d = 2)")
    _require_kernel(g)
    tower = _tower(d, depth)
    G = tower[depth]
    alphas, y = _decompose_raw(tower, G.from_portrait(truncate(g, depth)), depth)
    spec = SpineSpec(
        d,
        tuple(Permutation.from_zero_based(a) for a in alphas),
        (Permutation.standard_cycle(d),),
    )
    w = DecompositionWitness(
        spine_automaton(spec), portrait_to_automaton(G.to_portrait(y)), depth, g, spec
    )
    if not w.verify():
        raise WitnessError("decomposition witness failed its check")
    return w


# -- conjugacy in the quotients -----------------------------------------------


def _solve_raw(
    tower: list[QuotientGroup], g: bytes, h: bytes, n: int, memo: dict
) -> bytes | None:
    if n == 0:
        return tower[0].identity
    key = (g, h, n)
    if key in memo:
        return memo[key]
    G, H = tower[n], tower[n - 1]
    k = H.kernel
    sigma, tau = G.root_label(g), G.root_label(h)
    gs, hs = G.sections(g), G.sections(h)
    result = None
    for beta in P.conjugators(sigma, tau):
        # Section at beta(j) of g^x is x_j^-1 g_j x_{sigma(j)}; around a cycle of
        # sigma this leaves one conjugacy problem for the cycle products.
        x: list = [None] * G.d
        for cyc in P.cycles_of(sigma, keep_fixed=True):
            xj = _solve_raw(
                tower,
                _product(H, [gs[c] for c in cyc]),
                _product(H, [hs[beta[c]] for c in cyc]),
                n - 1,
                memo,
            )
            if xj is None:
                break
            x[cyc[0]] = xj
            for c, nxt in zip(cyc, cyc[1:]):
                x[nxt] = k.mul(k.mul(k.inv(gs[c]), x[c]), hs[beta[c]])
        else:
            result = G.assemble(beta, x)
            break
    memo[key] = result
    return result


def solve_conjugacy(g: TreeAutomorphism, h: TreeAutomorphism, depth: int) -> TreeAutomorphism:
    """Some ``x`` with ``x^-1 g x == h`` modulo ``St(depth)`` (depth-``depth`` truncation).

    Root conjugators are tried in lexicographic order with backtracking; the
    first consistent lift wins.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if g.degree != h.degree:
        raise ValueError("degree mismatch")
    tower = _tower(g.degree, depth)
    G = tower[depth]
    x = _solve_raw(
        tower, G.from_portrait(truncate(g, depth)), G.from_portrait(truncate(h, depth)), depth, {}
    )
    if x is None:
        raise NotConjugate(f"not conjugate at depth {depth}")
    xm = portrait_to_automaton(G.to_portrait(x))
    if not _congruent(conjugate(g, xm), h, depth):
        raise WitnessError("conjugacy solution failed its check")
    return xm


# -- commutator forms -----------------------------------------------------------


def commutator_form(g: TreeAutomorphism, depth: int) -> tuple[TreeAutomorphism, TreeAutomorphism]:
    """``(a, b)`` with ``[t^a, b] == g`` modulo ``St(depth)``.

    From ``g = u u^y``, ``u = t^x`` and ``(t^-1)^z = t`` one gets
    ``g = [t^{zx}, x^-1 z^-1 x y]``.
    """
    d = g.degree
    if d % 2 == 0:
        raise ConstructionError(f"degree {d} is even; use binary_commutator_form for d = 2")
    w = decompose_transitive_pair(g, depth)
    t = adding_machine(d)
    x = inverse(conjugator_to_odometer(w.spine))
    z = solve_conjugacy(inverse(t), t, depth)
    G = _group(d, depth)
    k = G.kernel

    def q(m: TreeAutomorphism) -> bytes:
        return G.from_portrait(truncate(m, depth))

    xq, zq, yq = q(x), q(z), q(w.y)
    a = k.mul(zq, xq)
    b = k.mul(k.mul(k.inv(xq), k.inv(zq)), k.mul(xq, yq))
    am = portrait_to_automaton(G.to_portrait(a))
    bm = portrait_to_automaton(G.to_portrait(b))
    if not _congruent(commutator(conjugate(t, am), bm), g, depth):
        raise WitnessError("commutator form failed its check")
    return am, bm


def binary_commutator_form(g: TreeAutomorphism, depth: int) -> TreeAutomorphism:
    """``h`` with ``[t^-1, h] == g`` modulo ``St(depth)`` on the binary tree."""
    if g.degree != 2:
        raise ConstructionError(f"binary form needs d = 2, got {g.degree}")
    _require_kernel(g)
    t = adding_machine(2)
    w = decompose_transitive_pair(g, depth)
    if not equals(w.u, t):
        raise WitnessError("binary spine element is not the adding machine")
    yc = solve_conjugacy(inverse(t), t, depth)
    G = get_group(2, depth)
    h = G.kernel.mul(G.from_portrait(truncate(yc, depth)), G.from_portrait(truncate(w.y, depth)))
    hm = portrait_to_automaton(G.to_portrait(h))
    if not _congruent(commutator(inverse(t), hm), g, depth):
        raise WitnessError("binary commutator form failed its check")
    return hm


# -- endomorphisms ----------------------------------------------------------------


class Endomorphism:
    """A named endomorphism of Aut T acting on finite-state elements."""

    name = "endomorphism"

    def __call__(self, g: TreeAutomorphism) -> TreeAutomorphism:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<Endomorphism {self.name}>"


class IdentityEndo(Endomorphism):
    name = "id"

    def __call__(self, g):
        return g


class ShiftEndo(Endomorphism):
    """Cyclic shift of first-level sections, ``(g_1, ..., g_d) s -> (g_2, ..., g_d, g_1) s'``.

    Realized as conjugation by the rooted cycle ``(d ... 2 1)``, so ``s' = s``
    whenever ``s`` commutes with the standard cycle (in particular on St(1)).
    """

    name = "shift"

    def __call__(self, g):
        d = g.degree
        c = TreeAutomorphism.rooted(tuple((i - 1) % d for i in range(d)))
        return conjugate(g, c)


class LevelFloor(Endomorphism):
    """``(h_1, ..., h_d) s -> (1, ..., 1) s``; its kernel is St(1)."""

    name = "floor"

    def __call__(self, g):
        return TreeAutomorphism.rooted(g.labels[0])


class IndicatorEndo(Endomorphism):
    """``h -> 1`` when level ``k`` of ``h`` has even label product, else ``a``."""

    def __init__(self, a: TreeAutomorphism, level: int):
        if not power(a, 2).is_identity():
            raise ConstructionError("indicator endomorphism needs a^2 = 1")
        if level < 0:
            raise ValueError("level must be non-negative")
        self.a = a
        self.level = level
        self.name = f"indicator({level})"

    def __call__(self, g):
        if g.degree != self.a.degree:
            raise ValueError("degree mismatch")
        return self.a if epsilon(g, self.level) else TreeAutomorphism.identity(g.degree)


class Lift(Endomorphism):
    """``(x_1, ..., x_d) s -> (phi(x_1), ..., phi(x_d)) s``."""

    def __init__(self, inner: Endomorphism):
        if not isinstance(inner, Endomorphism):
            raise TypeError(f"unregistered endomorphism {inner!r}")
        self.inner = inner
        self.name = f"lift({inner.name})"

    def __call__(self, g):
        return TreeAutomorphism.from_sections([self.inner(s) for s in g.sections()], g.labels[0])


def shift_endo(g: TreeAutomorphism) -> TreeAutomorphism:
    return ShiftEndo()(g)


def level_floor(g: TreeAutomorphism) -> TreeAutomorphism:
    return LevelFloor()(g)


def indicator_endo(a: TreeAutomorphism, level: int) -> IndicatorEndo:
    return IndicatorEndo(a, level)


def lift_endo(phi: Endomorphism, g: TreeAutomorphism) -> TreeAutomorphism:
    if not isinstance(phi, Endomorphism):
        raise TypeError(f"unregistered endomorphism {phi!r}")
    return Lift(phi)(g)


# -- closure manipulations ------------------------------------------------------


def split_factorization(h: TreeAutomorphism, depth: int) -> list[TreeAutomorphism]:
    """``h = (h_1, h_1^-1, 1, ...)(1, h_1 h_2, (h_1 h_2)^-1, 1, ...) ... (1, ..., 1, h_1 ... h_d)``."""
    if not in_M(h, 2):
        raise ConstructionError("h must lie in the derived subgroup and in St(1)")
    d = h.degree
    one = TreeAutomorphism.identity(d)
    secs = h.sections()
    factors = []
    prefix = one
    for i in range(d - 1):
        prefix = compose(prefix, secs[i])
        row = [one] * d
        row[i] = prefix
        row[i + 1] = inverse(prefix)
        factors.append(TreeAutomorphism.from_sections(row))
    last = [one] * d
    last[d - 1] = compose(prefix, secs[d - 1])
    factors.append(TreeAutomorphism.from_sections(last))
    total = one
    for f in factors:
        total = compose(total, f)
    if not in_ker_P(last[d - 1]) or not equals(total, h) or not _congruent(total, h, depth):
        raise WitnessError("split factorization failed its check")
    return factors


def signed_section_conjugate(
    g: TreeAutomorphism, signs: Sequence[int], depth: int
) -> TreeAutomorphism:
    """A conjugate of ``g`` in St(1) whose i-th section agrees with
    ``g_i^{signs[i]}`` modulo ``St(depth - 1)``."""
    d = g.degree
    if len(signs) != d or any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be d entries of +1 or -1")
    if not in_stabilizer(g, 1):
        raise ConstructionError("g must fix the first level")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    secs = g.sections()
    xs = []
    for s, sign in zip(secs, signs):
        if sign == 1 or depth == 1:
            xs.append(TreeAutomorphism.identity(d))
        else:
            xs.append(solve_conjugacy(s, inverse(s), depth - 1))
    out = conjugate(g, TreeAutomorphism.from_sections(xs))
    if depth > 1:
        for got, s, sign in zip(out.sections(), secs, signs):
            if not _congruent(got, s if sign == 1 else inverse(s), depth - 1):
                raise WitnessError("signed section conjugate failed its check")
    return out


@dataclass(frozen=True)
class ProductTrace:
    """Product of two conjugates of ``g`` that reproduces ``(c, c^-1, 1, ..., 1)``."""

    first: TreeAutomorphism
    second: TreeAutomorphism
    product: TreeAutomorphism
    expected: TreeAutomorphism
    depth: int


def _rooted_arrangement(d: int, i: int, j: int) -> TreeAutomorphism:
    # rooted perm p with p(i) = 0, p(j) = 1; conjugating by it moves g_i, g_j to the front
    rest = [x for x in range(d) if x not in (i, j)]
    img = [0] * d
    img[i], img[j] = 0, 1
    for pos, x in enumerate(rest, start=2):
        img[x] = pos
    return TreeAutomorphism.rooted(tuple(img))


def derived_pair_trace(g: TreeAutomorphism, depth: int) -> ProductTrace:
    """For ``g`` in ``M_2 \\ M_3`` with odd ``d``: build
    ``(g_1 g_2, (g_1 g_2)^-1, 1, ..., 1)`` with ``g_1 g_2`` outside the derived
    subgroup, as a product of two conjugates of ``g`` (modulo ``St(depth)``)."""
    d = g.degree
    if d % 2 == 0:
        raise ConstructionError("needs odd d")
    if not in_M(g, 2) or in_M(g, 3):
        raise ConstructionError("g must lie in M_2 but not M_3")
    par = [parity_sequence(s) for s in g.sections()]
    i = next(k for k, p in enumerate(par) if not p.is_zero())
    j = next(k for k, p in enumerate(par) if p != par[i])
    g1 = conjugate(g, _rooted_arrangement(d, i, j))
    a = signed_section_conjugate(g1, [1, -1] + [1] * (d - 2), depth)
    swap = TreeAutomorphism.rooted((1, 0) + tuple(range(2, d)))
    g2 = conjugate(g1, swap)
    b = signed_section_conjugate(g2, [1] + [-1] * (d - 1), depth)
    s = g1.sections()
    c = compose(s[0], s[1])
    one = TreeAutomorphism.identity(d)
    expected = TreeAutomorphism.from_sections([c, inverse(c)] + [one] * (d - 2))
    prod = compose(a, b)
    if in_ker_P(c) or not _congruent(prod, expected, depth):
        raise WitnessError("derived pair trace failed its check")
    return ProductTrace(a, b, prod, expected, depth)


def _rooted_transposition(d: int) -> TreeAutomorphism:
    return TreeAutomorphism.rooted((1, 0) + tuple(range(2, d)))


def exponent_power_witness(d: int) -> tuple[TreeAutomorphism, TreeAutomorphism]:
    """An element ``g`` of the derived subgroup with
    ``g^{e_d} = (tau, ..., tau, 1, ..., 1)`` (``2^k`` copies of the rooted
    transposition, ``2^k < d``), and that power."""
    if d < 3 or d % 2 == 0:
        raise ConstructionError("needs odd d >= 3")
    k = (d - 1).bit_length() - 1
    tau = _rooted_transposition(d)
    one = TreeAutomorphism.identity(d)
    secs = [one] * d
    if d == 2 ** k + 1:
        h = 2 ** (k - 1)
        secs[0] = secs[h] = tau
        cycles = [tuple(range(1, h + 1)), tuple(range(h + 1, 2 * h + 1))]
    else:
        m = 2 ** k
        for pos in (0, m, m + 1, d - 1):
            secs[pos] = tau
        cycles = [tuple(range(1, m + 1)), (m + 1, m + 2)]
    sigma = Permutation.from_cycles(d, [c for c in cycles if len(c) > 1])
    g = TreeAutomorphism.from_sections(secs, sigma)
    gp = power(g, alt_exponent(d))
    expected = TreeAutomorphism.from_sections([tau] * 2 ** k + [one] * (d - 2 ** k))
    if not in_M(g, 1) or not equals(gp, expected):
        raise WitnessError("exponent power witness failed its check")
    return g, gp


def square_lift_witness(g: TreeAutomorphism) -> TreeAutomorphism:
    """``w = (g, h_g, 1, ..., 1)`` in ``M_2`` with ``w^2 = (g^2, 1, ..., 1)``,
    where ``h_g`` is the order-two element of the coset of ``g``."""
    d = g.degree
    h = order_two_rep(parity_sequence(g), d)
    one = TreeAutomorphism.identity(d)
    w = TreeAutomorphism.from_sections([g, h] + [one] * (d - 2))
    target = TreeAutomorphism.from_sections([power(g, 2)] + [one] * (d - 1))
    if not in_M(w, 2) or not equals(power(w, 2), target):
        raise WitnessError("square lift witness failed its check")
    return w
