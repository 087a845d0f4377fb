"""The acceptance criteria as runnable checks, shared by ``selftest`` and pytest."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .constructions import (
    IndicatorEndo,
    Lift,
    LevelFloor,
    ShiftEndo,
    adding_machine,
    binary_commutator_form,
    commutator_form,
    conjugator_to_odometer,
    decompose_transitive_pair,
    is_spine_form,
    order_two_rep,
    spine_automaton,
)
from .core import (
    TreeAutomorphism,
    commutator,
    commutator_by_composition,
    compose,
    conjugate,
    conjugate_by_composition,
    equals,
    inverse,
    is_level_transitive,
    portrait_to_automaton,
    power_closed_form,
    truncate,
)
from .parity import (
    alt_exponent,
    alt_exponent_two_part,
    classify_chain,
    epsilon,
    in_M,
    parity_sequence,
    two_adic_valuation,
)
from .quotient import verify_chain
from .sampling import (
    random_automaton,
    random_kerP_portrait,
    random_parity_sequence,
    random_spine_spec,
    rng_for,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    elapsed: float
    budget: float | None

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.elapsed < self.budget

    def line(self) -> str:
        ok = self.passed and self.within_budget
        limit = f" < {self.budget:g}s" if self.budget is not None else ""
        return (
            f"[{'PASS' if ok else 'FAIL'}] criterion {self.number}: {self.title} "
            f"({self.elapsed:.2f}s{limit}) {self.detail}"
        )


def _chain_identities() -> tuple[bool, str]:
    r = verify_chain(3, 2)
    sizes = [(c.lhs, c.rhs) for c in r.checks]
    ok = r.order == 1296 and r.passed and sizes == [(324, 324), (324, 324), (108, 108), (27, 27)]
    small = [verify_chain(3, 1), verify_chain(5, 1)]
    ok = ok and all(s.passed for s in small)
    return ok, f"|G_2|={r.order} sizes={sizes} d3n1={small[0].passed} d5n1={small[1].passed}"


def _exponent() -> tuple[bool, str]:
    values = [alt_exponent(d) for d in (3, 5, 7)]
    bad = []
    for d in range(3, 16, 2):
        k = (d - 1).bit_length() - 1
        want = k - 1 if d == 2 ** k + 1 else k
        if two_adic_valuation(alt_exponent(d)) != want or alt_exponent_two_part(d) != want:
            bad.append(d)
    return values == [3, 30, 420] and not bad, f"e_3,e_5,e_7={values} valuation mismatches={bad}"


def _decomposition() -> tuple[bool, str]:
    rng = rng_for("decompose")
    fails = 0
    for d, count in ((3, 100), (5, 25)):
        for _ in range(count):
            g = portrait_to_automaton(random_kerP_portrait(rng, d, 4))
            w = decompose_transitive_pair(g, 4)
            u_ok = is_spine_form(w.u)
            if not (u_ok and truncate(compose(w.u, conjugate(w.u, w.y)), 4) == truncate(g, 4)):
                fails += 1
    return fails == 0, f"125 targets, failures={fails}"


def _commutator_forms() -> tuple[bool, str]:
    rng = rng_for("commutator")
    fails = 0
    t3 = adding_machine(3)
    for _ in range(50):
        g = portrait_to_automaton(random_kerP_portrait(rng, 3, 3))
        a, b = commutator_form(g, 3)
        fails += truncate(commutator(conjugate(t3, a), b), 3) != truncate(g, 3)
    t2 = adding_machine(2)
    for _ in range(50):
        g = portrait_to_automaton(random_kerP_portrait(rng, 2, 4))
        h = binary_commutator_form(g, 4)
        fails += truncate(commutator(inverse(t2), h), 4) != truncate(g, 4)
    return fails == 0, f"50 ternary + 50 binary targets, failures={fails}"


def _spine_conjugators() -> tuple[bool, str]:
    rng = rng_for("spine")
    fails = 0
    for d in (3, 5):
        t = adding_machine(d)
        for _ in range(20):
            spec = random_spine_spec(rng, d)
            a = spine_automaton(spec)
            x = conjugator_to_odometer(spec)
            fails += not (equals(conjugate(a, x), t) and is_level_transitive(a, 4))
    return fails == 0, f"40 spines, failures={fails}"


def _order_two() -> tuple[bool, str]:
    rng = rng_for("order-two")
    fails = 0
    for _ in range(10):
        eps = random_parity_sequence(rng)
        a = order_two_rep(eps, 3)
        fails += not (compose(a, a).is_identity() and parity_sequence(a) == eps)
    return fails == 0, f"10 targets, failures={fails}"


def _homomorphisms() -> tuple[bool, str]:
    rng = rng_for("epimorphism")
    fails: dict[str, int] = {}

    def check(name: str, ok: bool) -> None:
        if not ok:
            fails[name] = fails.get(name, 0) + 1

    endos = [ShiftEndo(), LevelFloor(), Lift(ShiftEndo()), Lift(LevelFloor())]
    for _ in range(200):
        g, h, x = (random_automaton(rng, 3) for _ in range(3))
        gh = compose(g, h)
        check("epsilon", all(epsilon(gh, n) == epsilon(g, n) ^ epsilon(h, n) for n in range(9)))
        pg = parity_sequence(g)
        check("P-inverse", parity_sequence(inverse(g)) == pg)
        check("P-conjugate", parity_sequence(conjugate(g, x)) == pg)
        check("monotone", all(in_M(g, k) or not in_M(g, k + 1) for k in range(8)))
        ind = IndicatorEndo(order_two_rep(random_parity_sequence(rng), 3), rng.randint(0, 4))
        for phi in endos + [ind, Lift(ind)]:
            check(phi.name, equals(phi(gh), compose(phi(g), phi(h))))
    return not fails, f"200 pairs, failures={fails or 0}"


def _formulas() -> tuple[bool, str]:
    rng = rng_for("formulas")
    fails = 0
    for _ in range(200):
        g, h = random_automaton(rng, 3), random_automaton(rng, 3)
        n = rng.randint(1, 6)
        rep = TreeAutomorphism.identity(3)
        for _ in range(n):
            rep = compose(rep, g)
        fails += not equals(conjugate(g, h), conjugate_by_composition(g, h))
        fails += not equals(commutator(g, h), commutator_by_composition(g, h))
        fails += not equals(power_closed_form(g, n), rep)
    return fails == 0, f"200 inputs x 3 formulas, failures={fails}"


def _classification() -> tuple[bool, str]:
    t = adding_machine(3)
    one = TreeAutomorphism.identity(3)
    got = [
        classify_chain(TreeAutomorphism.rooted((1, 0, 2))),
        classify_chain(TreeAutomorphism.rooted((1, 2, 0))),
        classify_chain(TreeAutomorphism.from_sections([t, inverse(t), one])),
        classify_chain(one),
    ]
    want = ["M0", "M1", "M3", "trivial"]
    return [str(c) for c in got] == want, "τ, (1 2 3), (t,t⁻¹,1), 1 -> " + ", ".join(map(str, got))


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]], float | None]] = [
    (1, "quotient chain identities", _chain_identities, 10.0),
    (2, "alternating-group exponent", _exponent, 1.0),
    (3, "two-transitive-factor decomposition", _decomposition, 30.0),
    (4, "commutator forms", _commutator_forms, None),
    (5, "spine conjugators", _spine_conjugators, None),
    (6, "order-two coset representatives", _order_two, None),
    (7, "epimorphism and endomorphism properties", _homomorphisms, None),
    (8, "formula consistency", _formulas, None),
    (9, "classification regression", _classification, None),
]


def run_criterion(number: int) -> CriterionResult:
    for num, title, fn, budget in CRITERIA:
        if num == number:
            start = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # report, don't crash the suite
                ok, detail = False, f"raised {type(exc).__name__}: {exc}"
            return CriterionResult(num, title, ok, detail, time.perf_counter() - start, budget)
    raise KeyError(number)


def run_all() -> list[CriterionResult]:
    return [run_criterion(num) for num, *_ in CRITERIA]
