"""Finite-state automorphisms of the d-adic rooted tree.

An element is stored as a minimal Mealy machine: every state carries a
root label (0-based image tuple) and one child state per letter.  The
element written ``(g_1, ..., g_d) s`` acts by ``g(i w) = s(i) g_i(w)``, and
products compose left to right, ``(fg)(u) = g(f(u))``.  Under these
conventions the first-level formulas are::

    gh      = (g_i h_{s(i)})_i  *  s t
    g^-1    = (g_{s^-1(i)}^-1)_i  *  s^-1
    x^-1 g x, x = (x_i) b:  section at i is
              x_{b^-1(i)}^-1  g_{b^-1(i)}  x_{s(b^-1(i))},  label b^-1 s b

After every construction the machine is pruned to reachable states, merged
by bisimulation, and renumbered breadth-first from the root, so two
canonical machines are equal as automorphisms iff they are equal as data.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _product
from typing import Iterable, Mapping, Sequence

from . import perm as P
from .perm import Permutation

Vertex = tuple[int, ...]


class AutomatonError(ValueError):
    """Malformed machine description."""


class DegreeMismatch(ValueError):
    pass


def parse_vertex(text: str) -> Vertex:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def format_vertex(v: Sequence[int]) -> str:
    return ",".join(map(str, v))


class TreeAutomorphism:
    """Canonical finite-state tree automorphism; state 0 is the root."""

    __slots__ = ("degree", "labels", "children", "_hash")

    def __init__(self, degree: int, labels: tuple, children: tuple):
        # Trusted constructor: use ``_canonical`` or ``validate_automaton``.
        self.degree = degree
        self.labels = labels
        self.children = children
        self._hash = None

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls, d: int) -> TreeAutomorphism:
        return cls(d, (tuple(range(d)),), ((0,) * d,))

    @classmethod
    def rooted(cls, sigma: Permutation | Sequence[int]) -> TreeAutomorphism:
        """Rooted automorphism ``(1, ..., 1) sigma``; raw sequences are 0-based."""
        img = sigma.zero_based if isinstance(sigma, Permutation) else tuple(sigma)
        d = len(img)
        return _canonical(d, [img, tuple(range(d))], [(1,) * d, (1,) * d])

    @classmethod
    def from_sections(
        cls,
        sections: Sequence[TreeAutomorphism],
        sigma: Permutation | Sequence[int] | None = None,
        minimize: bool = True,
    ) -> TreeAutomorphism:
        """Assemble ``(g_1, ..., g_d) sigma``."""
        d = len(sections)
        for s in sections:
            if s.degree != d:
                raise DegreeMismatch(f"section of degree {s.degree} in degree-{d} element")
        if sigma is None:
            img = tuple(range(d))
        else:
            img = sigma.zero_based if isinstance(sigma, Permutation) else tuple(sigma)
        labels = [img]
        children: list[tuple[int, ...]] = [()]
        roots = []
        for s in sections:
            off = len(labels)
            roots.append(off)
            labels.extend(s.labels)
            children.extend(tuple(c + off for c in ch) for ch in s.children)
        children[0] = tuple(roots)
        return _canonical(d, labels, children, 0, minimize)

    # -- basic queries ----------------------------------------------------

    @property
    def num_states(self) -> int:
        return len(self.labels)

    @property
    def root_label(self) -> Permutation:
        return Permutation.from_zero_based(self.labels[0])

    def is_identity(self) -> bool:
        return len(self.labels) == 1 and P.is_identity(self.labels[0])

    def identity_state(self) -> int | None:
        ident = _identity_states(self.labels, self.children)
        return min(ident) if ident else None

    def rerooted(self, state: int) -> TreeAutomorphism:
        return _canonical(self.degree, self.labels, self.children, state)

    def sections(self) -> list[TreeAutomorphism]:
        return [self.rerooted(c) for c in self.children[0]]

    def state_at(self, v: Sequence[int]) -> int:
        s = 0
        for x in v:
            if not 1 <= x <= self.degree:
                raise DegreeMismatch(f"letter {x} outside 1..{self.degree}")
            s = self.children[s][x - 1]
        return s

    def reachable_by_level(self, n: int) -> list[set[int]]:
        """Sets of states occupied at levels ``0..n-1``."""
        levels = []
        cur = {0}
        for _ in range(n):
            levels.append(cur)
            cur = {c for s in cur for c in self.children[s]}
        return levels

    def __mul__(self, other: TreeAutomorphism) -> TreeAutomorphism:
        return compose(self, other)

    def __pow__(self, n: int) -> TreeAutomorphism:
        return power(self, n)

    def __invert__(self) -> TreeAutomorphism:
        return inverse(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeAutomorphism):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.labels == other.labels
            and self.children == other.children
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.degree, self.labels, self.children))
        return self._hash

    def __repr__(self) -> str:
        return f"<TreeAutomorphism d={self.degree} states={self.num_states}>"


# -- canonicalization -----------------------------------------------------


def _identity_states(labels: Sequence, children: Sequence) -> set[int]:
    cand = {s for s, lab in enumerate(labels) if P.is_identity(lab)}
    changed = True
    while changed:
        changed = False
        for s in list(cand):
            if any(c not in cand for c in children[s]):
                cand.discard(s)
                changed = True
    return cand


def _minimize_blocks(labels: Sequence, children: Sequence, states: Sequence[int]) -> dict[int, int]:
    """Coarsest bisimulation (Moore refinement) restricted to ``states``."""
    index: dict = {}
    block = {}
    for s in states:
        block[s] = index.setdefault(labels[s], len(index))
    count = len(index)
    while True:
        index = {}
        nb = {}
        for s in states:
            key = (block[s], tuple(block[c] for c in children[s]))
            nb[s] = index.setdefault(key, len(index))
        if len(index) == count:
            return nb
        block, count = nb, len(index)


def _canonical(
    d: int,
    labels: Sequence,
    children: Sequence,
    root: int = 0,
    minimize: bool = True,
) -> TreeAutomorphism:
    # Reachable states.
    seen = {root}
    order = [root]
    i = 0
    while i < len(order):
        for c in children[order[i]]:
            if c not in seen:
                seen.add(c)
                order.append(c)
        i += 1
    if minimize:
        block = _minimize_blocks(labels, children, order)
    else:
        ident = _identity_states(labels, children)
        rep = min(ident) if ident else None
        block = {s: (-1 if s in ident else s) for s in order}
        if rep is not None:
            block = {s: (rep if b == -1 else b) for s, b in block.items()}
    # Breadth-first renumbering over blocks.
    rep_of: dict[int, int] = {}
    for s in order:
        rep_of.setdefault(block[s], s)
    new_id = {block[root]: 0}
    queue = [block[root]]
    k = 0
    while k < len(queue):
        b = queue[k]
        for c in children[rep_of[b]]:
            cb = block[c]
            if cb not in new_id:
                new_id[cb] = len(queue)
                queue.append(cb)
        k += 1
    new_labels = tuple(tuple(labels[rep_of[b]]) for b in queue)
    new_children = tuple(
        tuple(new_id[block[c]] for c in children[rep_of[b]]) for b in queue
    )
    return TreeAutomorphism(d, new_labels, new_children)


# -- validation -------------------------------------------------------------


def validate_automaton(
    degree: int,
    states: Mapping[str, tuple[Sequence[str], Sequence[int] | None]],
    root: str,
) -> TreeAutomorphism:
    """Build a machine from named states.

    ``states`` maps a name to ``(children, images)``; a child ``"1"`` is the
    identity, ``images`` are 1-based (``None`` for the identity label).
    """
    if degree < 2:
        raise AutomatonError(f"degree must be at least 2, got {degree}")
    if "1" in states:
        raise AutomatonError('"1" is reserved for the identity state')
    names = list(states)
    ids = {name: i + 1 for i, name in enumerate(names)}
    labels = [tuple(range(degree))]
    children: list[tuple[int, ...]] = [(0,) * degree]
    for name in names:
        kids, images = states[name]
        if len(kids) != degree:
            raise AutomatonError(
                f"state {name!r}: {len(kids)} children for degree {degree}"
            )
        if images is None:
            img = tuple(range(degree))
        else:
            if len(images) != degree:
                raise AutomatonError(
                    f"state {name!r}: permutation has {len(images)} entries for degree {degree}"
                )
            img = tuple(int(x) - 1 for x in images)
            if sorted(img) != list(range(degree)):
                raise AutomatonError(f"state {name!r}: {list(images)} is not a bijection")
        row = []
        for k in kids:
            if k == "1":
                row.append(0)
            elif k in ids:
                row.append(ids[k])
            else:
                raise AutomatonError(f"state {name!r}: unknown state {k!r}")
        labels.append(img)
        children.append(tuple(row))
    if root == "1":
        return TreeAutomorphism.identity(degree)
    if root not in ids:
        raise AutomatonError(f"unknown root state {root!r}")
    return _canonical(degree, labels, children, ids[root])


# -- action -----------------------------------------------------------------


def _check_degree(*gs: TreeAutomorphism) -> int:
    d = gs[0].degree
    for g in gs[1:]:
        if g.degree != d:
            raise DegreeMismatch(f"degrees {d} and {g.degree} differ")
    return d


def apply(g: TreeAutomorphism, v: Sequence[int]) -> Vertex:
    """Image of vertex ``v``; letters are 1-based."""
    out = []
    s = 0
    for x in v:
        if not 1 <= x <= g.degree:
            raise DegreeMismatch(f"letter {x} outside 1..{g.degree}")
        out.append(g.labels[s][x - 1] + 1)
        s = g.children[s][x - 1]
    return tuple(out)


def label_at(g: TreeAutomorphism, v: Sequence[int]) -> Permutation:
    return Permutation.from_zero_based(g.labels[g.state_at(v)])


def section_at(g: TreeAutomorphism, v: Sequence[int]) -> TreeAutomorphism:
    return g.rerooted(g.state_at(v))


# -- arithmetic -------------------------------------------------------------


def _word_machine(
    factors: Sequence[tuple[TreeAutomorphism, bool]], minimize: bool = True
) -> TreeAutomorphism:
    """Product ``f_1 f_2 ... f_m`` on tuples of states; ``True`` marks an inverse.

    Letter ``i`` enters ``f_1`` and the image fed to each factor is the
    output of the previous one, so the section at ``i`` is
    ``f_1|_i f_2|_{s_1(i)} f_3|_{s_2(s_1(i))} ...``.
    """
    d = _check_degree(*(f for f, _ in factors))
    inv_labels = [
        [P.invert(lab) for lab in f.labels] if flip else None for f, flip in factors
    ]
    start = tuple(0 for _ in factors)
    index = {start: 0}
    queue = [start]
    labels: list[tuple[int, ...]] = []
    children: list[tuple[int, ...]] = []
    k = 0
    while k < len(queue):
        st = queue[k]
        k += 1
        out = list(range(d))
        kids: list[list[int]] = [[] for _ in range(d)]
        for (f, flip), s, inv in zip(factors, st, inv_labels):
            if flip:
                lab = inv[s]
                ch = f.children[s]
                # inverse section at j is (f|_{lab(j)})^-1 since lab = s^-1
                for i in range(d):
                    j = out[i]
                    kids[i].append(ch[lab[j]])
                    out[i] = lab[j]
            else:
                lab = f.labels[s]
                ch = f.children[s]
                for i in range(d):
                    j = out[i]
                    kids[i].append(ch[j])
                    out[i] = lab[j]
        labels.append(tuple(out))
        row = []
        for kid in kids:
            t = tuple(kid)
            idx = index.get(t)
            if idx is None:
                idx = index[t] = len(queue)
                queue.append(t)
            row.append(idx)
        children.append(tuple(row))
    return _canonical(d, labels, children, 0, minimize)


def compose(g: TreeAutomorphism, h: TreeAutomorphism, minimize: bool = True) -> TreeAutomorphism:
    """``gh``: apply ``g`` first, then ``h``."""
    _check_degree(g, h)
    d = g.degree
    index = {(0, 0): 0}
    queue = [(0, 0)]
    labels = []
    children = []
    k = 0
    while k < len(queue):
        a, b = queue[k]
        k += 1
        la, lb = g.labels[a], h.labels[b]
        ca, cb = g.children[a], h.children[b]
        labels.append(tuple(lb[x] for x in la))
        row = []
        for i in range(d):
            pair = (ca[i], cb[la[i]])
            idx = index.get(pair)
            if idx is None:
                idx = index[pair] = len(queue)
                queue.append(pair)
            row.append(idx)
        children.append(tuple(row))
    return _canonical(d, labels, children, 0, minimize)


def inverse(g: TreeAutomorphism) -> TreeAutomorphism:
    labels = []
    children = []
    for lab, ch in zip(g.labels, g.children):
        inv = P.invert(lab)
        labels.append(inv)
        children.append(tuple(ch[inv[i]] for i in range(g.degree)))
    return _canonical(g.degree, labels, children, 0)


def conjugate(g: TreeAutomorphism, x: TreeAutomorphism) -> TreeAutomorphism:
    """``x^-1 g x`` from the section formula on state triples."""
    return _word_machine([(x, True), (g, False), (x, False)])


def conjugate_by_composition(g: TreeAutomorphism, x: TreeAutomorphism) -> TreeAutomorphism:
    return compose(compose(inverse(x), g), x)


def commutator(g: TreeAutomorphism, h: TreeAutomorphism) -> TreeAutomorphism:
    """``[g, h] = g^-1 h^-1 g h`` from the section formula on state 4-tuples."""
    return _word_machine([(g, True), (h, True), (g, False), (h, False)])


def commutator_by_composition(g: TreeAutomorphism, h: TreeAutomorphism) -> TreeAutomorphism:
    return compose(compose(inverse(g), inverse(h)), compose(g, h))


def power(g: TreeAutomorphism, n: int) -> TreeAutomorphism:
    """Square-and-multiply; negative exponents go through the inverse."""
    if n < 0:
        g, n = inverse(g), -n
    result = TreeAutomorphism.identity(g.degree)
    base = g
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def power_closed_form(g: TreeAutomorphism, n: int) -> TreeAutomorphism:
    """``g^n = v v^{s^-1} ... v^{s^-(n-1)} s^n`` for ``g = v s``, ``n >= 0``.

    The section at ``i`` is ``g_i g_{s(i)} ... g_{s^{n-1}(i)}``; recursing on
    these n-fold products gives a machine on n-tuples of states.
    """
    if n < 0:
        raise ValueError("closed form needs n >= 0")
    d = g.degree
    if n == 0:
        return TreeAutomorphism.identity(d)
    start = (0,) * n
    index = {start: 0}
    queue = [start]
    labels = []
    children = []
    k = 0
    while k < len(queue):
        st = queue[k]
        k += 1
        lab = tuple(range(d))
        for s in st:
            lab = P.compose(lab, g.labels[s])
        labels.append(lab)
        row = []
        for i in range(d):
            kid = []
            j = i
            for s in st:
                kid.append(g.children[s][j])
                j = g.labels[s][j]
            t = tuple(kid)
            idx = index.get(t)
            if idx is None:
                idx = index[t] = len(queue)
                queue.append(t)
            row.append(idx)
        children.append(tuple(row))
    return _canonical(d, labels, children)


def equals(g: TreeAutomorphism, h: TreeAutomorphism) -> bool:
    """Decide ``g == h`` by walking the reachable states of ``g h^-1``."""
    _check_degree(g, h)
    d = g.degree
    ident = tuple(range(d))
    hinv = [P.invert(lab) for lab in h.labels]
    seen = {(0, 0)}
    stack = [(0, 0)]
    while stack:
        a, b = stack.pop()
        la = g.labels[a]
        ib = hinv[b]
        if tuple(ib[x] for x in la) != ident:
            return False
        ca, cb = g.children[a], h.children[b]
        for i in range(d):
            # h^-1 reads letter la[i]; its section there is (h|_{ib[la[i]]})^-1
            pair = (ca[i], cb[ib[la[i]]])
            if pair not in seen:
                seen.add(pair)
                stack.append(pair)
    return True


def in_stabilizer(g: TreeAutomorphism, n: int) -> bool:
    """Whether ``g`` fixes level ``n`` pointwise."""
    if n < 0:
        raise ValueError("level must be non-negative")
    for level in g.reachable_by_level(n):
        if not all(P.is_identity(g.labels[s]) for s in level):
            return False
    return True


def is_level_transitive(g: TreeAutomorphism, depth: int) -> bool:
    """Bounded certificate: ``g`` acts as a single cycle on levels ``1..depth``.

    Passing says nothing about deeper levels.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    d = g.degree
    for n in range(1, depth + 1):
        start = (1,) * n
        v = apply(g, start)
        size = 1
        while v != start:
            v = apply(g, v)
            size += 1
            if size > d ** n:
                return False
        if size != d ** n:
            return False
    return True


# -- portraits --------------------------------------------------------------


@dataclass(frozen=True)
class Portrait:
    """Labels of levels ``0..depth-1`` in level order (root first, each level
    lexicographic); raw labels are 0-based image tuples."""

    degree: int
    depth: int
    raw: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        d, n = self.degree, self.depth
        expected = (d ** n - 1) // (d - 1)
        if len(self.raw) != expected:
            raise ValueError(f"depth-{n} portrait needs {expected} labels, got {len(self.raw)}")

    @property
    def labels(self) -> tuple[Permutation, ...]:
        return tuple(Permutation.from_zero_based(x) for x in self.raw)

    def index(self, v: Sequence[int]) -> int:
        p = 0
        for x in v:
            p = self.degree * p + x
        return p

    def label(self, v: Sequence[int]) -> Permutation:
        if len(v) >= self.depth:
            raise IndexError(f"vertex {format_vertex(v)} is below the truncation depth")
        return Permutation.from_zero_based(self.raw[self.index(v)])


def truncate(g: TreeAutomorphism, n: int) -> Portrait:
    if n < 0:
        raise ValueError("depth must be non-negative")
    d = g.degree
    size = (d ** n - 1) // (d - 1)
    inner = (d ** (n - 1) - 1) // (d - 1) if n else 0
    states = [0] * size
    for p in range(inner):
        ch = g.children[states[p]]
        base = d * p + 1
        for i in range(d):
            states[base + i] = ch[i]
    return Portrait(d, n, tuple(g.labels[s] for s in states))


def portrait_to_automaton(p: Portrait) -> TreeAutomorphism:
    """Tree-shaped machine with the given labels and trivial levels below."""
    d, n = p.degree, p.depth
    size = len(p.raw)
    ident = size  # extra state
    inner = (d ** (n - 1) - 1) // (d - 1) if n else 0
    labels = list(p.raw) + [tuple(range(d))]
    children = []
    for v in range(size):
        if v < inner:
            children.append(tuple(d * v + 1 + i for i in range(d)))
        else:
            children.append((ident,) * d)
    children.append((ident,) * d)
    root = 0 if size else ident
    return _canonical(d, labels, children, root)


def automaton_table(g: TreeAutomorphism) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """``(children, 1-based images)`` per state, convenient for display."""
    return [
        (ch, tuple(x + 1 for x in lab)) for lab, ch in zip(g.labels, g.children)
    ]


def iter_vertices(d: int, n: int) -> Iterable[Vertex]:
    return _product(range(1, d + 1), repeat=n)
