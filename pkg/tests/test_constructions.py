import itertools
import random

import pytest

from treeverb import perm as P
from treeverb.constructions import (
    ConstructionError,
    Endomorphism,
    IdentityEndo,
    IndicatorEndo,
    LevelFloor,
    Lift,
    NotConjugate,
    ShiftEndo,
    SpineSpec,
    adding_machine,
    binary_commutator_form,
    commutator_form,
    conjugator_to_odometer,
    decompose_transitive_pair,
    derived_pair_trace,
    exponent_power_witness,
    indicator_endo,
    is_spine_form,
    level_floor,
    lift_endo,
    order_two_rep,
    shift_endo,
    signed_section_conjugate,
    solve_conjugacy,
    spine_alignment,
    spine_automaton,
    split_factorization,
    square_lift_witness,
    two_dcycle_factorization,
    verify_two_cycle_products,
)
from treeverb.core import (
    TreeAutomorphism,
    commutator,
    compose,
    conjugate,
    equals,
    in_stabilizer,
    inverse,
    is_level_transitive,
    label_at,
    portrait_to_automaton,
    power,
    section_at,
    truncate,
)
from treeverb.parity import ParitySequence, in_ker_P, in_M, parity_sequence
from treeverb.perm import Permutation
from treeverb.sampling import (
    random_automaton,
    random_kerP_portrait,
    random_m2_portrait,
    random_parity_sequence,
    random_portrait,
    random_spine_spec,
    random_st1_portrait,
)


def congruent(a, b, n):
    return truncate(a, n) == truncate(b, n)


# -- adding machine and spines ----------------------------------------------


def test_adding_machine():
    t2 = adding_machine(2)
    assert t2.root_label == Permutation([2, 1])
    assert section_at(t2, (2,)) == t2 and section_at(t2, (1,)).is_identity()
    t3 = adding_machine(3)
    assert t3.root_label.images == (2, 3, 1)
    assert section_at(t3, (3,)) == t3
    assert is_level_transitive(t3, 4)
    with pytest.raises(ValueError):
        adding_machine(1)


def test_spine_examples(t3):
    s = Permutation.standard_cycle(3)
    assert spine_automaton(SpineSpec(3, (), (s,))) == t3
    alt = spine_automaton(SpineSpec(3, (), (Permutation([2, 3, 1]), Permutation([3, 1, 2]))))
    assert alt.num_states == 3  # two spine states plus the identity
    assert is_spine_form(alt) and is_level_transitive(alt, 4)
    with pytest.raises(ConstructionError):
        SpineSpec(3, (), (Permutation([2, 1, 3]),))
    with pytest.raises(ConstructionError):
        SpineSpec(3, (), ())


def test_spine_form_predicate(t3, tt3, tau3):
    assert is_spine_form(t3)
    assert not is_spine_form(tt3)
    assert not is_spine_form(tau3)


def test_spine_labels_follow_sequence(rng):
    for _ in range(20):
        spec = random_spine_spec(rng, 5)
        a = spine_automaton(spec)
        for k in range(1, 9):
            assert label_at(a, (5,) * (k - 1)) == spec.label(k)
            assert section_at(a, (5,) * (k - 1) + (1,)).is_identity()


def test_alignment_examples():
    a = spine_alignment(Permutation([3, 1, 2]))  # (1 3 2)
    assert a == Permutation([2, 1, 3])
    assert a(3) == 3
    assert Permutation([3, 1, 2]).conjugate(a) == Permutation.standard_cycle(3)


def test_conjugator_examples(t3):
    s = Permutation.standard_cycle(3)
    assert conjugator_to_odometer(SpineSpec(3, (), (s,))).is_identity()
    x = conjugator_to_odometer(SpineSpec(3, (), (Permutation([3, 1, 2]),)))
    assert x.root_label == Permutation([2, 1, 3])
    assert all(sec == x for sec in x.sections())


@pytest.mark.parametrize("d", [3, 4, 5])
def test_conjugator_exact(d):
    rng = random.Random(d)
    t = adding_machine(d)
    for _ in range(20):
        spec = random_spine_spec(rng, d)
        a = spine_automaton(spec)
        x = conjugator_to_odometer(spec)
        assert equals(conjugate(a, x), t)
        assert is_level_transitive(a, 4 if d < 5 else 3)


# -- order-two representatives ----------------------------------------------


def test_order_two_examples():
    a = order_two_rep(ParitySequence.parse("pre=1;per=0"), 3)
    assert a == TreeAutomorphism.rooted((1, 0, 2))
    ones = order_two_rep(ParitySequence.parse("pre=;per=1"), 3)
    assert power(ones, 2).is_identity()
    assert parity_sequence(ones).bits(10) == [1] * 10
    assert order_two_rep(ParitySequence.zero(), 3).is_identity()
    with pytest.raises(ConstructionError):
        order_two_rep(ParitySequence.parse("pre=;per=1"), 2)


@pytest.mark.parametrize("d", [3, 4, 6])
def test_order_two_random(d):
    rng = random.Random(d)
    for _ in range(20):
        eps = random_parity_sequence(rng)
        a = order_two_rep(eps, d)
        assert compose(a, a).is_identity()
        assert parity_sequence(a) == eps


# -- two d-cycle factorization ----------------------------------------------


def _scan(sigma):
    d = len(sigma)
    for alpha in itertools.permutations(range(d)):
        if not P.is_full_cycle(alpha):
            continue
        gamma = P.compose(P.invert(alpha), sigma)
        if P.is_full_cycle(gamma):
            betas = [
                b for b in itertools.permutations(range(d))
                if P.compose(P.compose(P.invert(b), alpha), b) == gamma
            ]
            return alpha, min(betas)
    return None


def test_factorization_examples():
    a, b = two_dcycle_factorization(Permutation.identity(3))
    assert a == Permutation.from_cycles(3, [(1, 2, 3)])
    assert b == Permutation.from_cycles(3, [(2, 3)])
    assert a * a.conjugate(b) == Permutation.identity(3)
    s = Permutation.from_cycles(3, [(1, 3, 2)])
    a, b = two_dcycle_factorization(s)
    assert a * a.conjugate(b) == s
    with pytest.raises(ConstructionError):
        two_dcycle_factorization(Permutation([2, 1, 3]))


@pytest.mark.parametrize("d", [3, 5, 7])
def test_factorization_matches_scan(d):
    rng = random.Random(d)
    for _ in range(20):
        img = list(range(d))
        rng.shuffle(img)
        if P.parity(img):
            img[0], img[1] = img[1], img[0]
        sigma = Permutation.from_zero_based(img)
        a, b = two_dcycle_factorization(sigma)
        assert a.is_full_cycle() and a * a.conjugate(b) == sigma
        assert (a.zero_based, b.zero_based) == _scan(tuple(img))


@pytest.mark.parametrize("d", [2, 3, 5, 7, 9])
def test_every_even_class_factors(d):
    assert verify_two_cycle_products(d)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_class_check_matches_scan(d):
    even = [p for p in itertools.permutations(range(d)) if P.parity(p) == 0]
    assert verify_two_cycle_products(d) == all(_scan(p) is not None for p in even)


# -- decomposition ------------------------------------------------------------


def test_decompose_examples(one3):
    w = decompose_transitive_pair(one3, 3)
    assert w.verify() and w.manifest() == "depth=3 verified=true"
    c = TreeAutomorphism.rooted((1, 2, 0))
    w = decompose_transitive_pair(c, 4)
    assert congruent(compose(w.u, conjugate(w.u, w.y)), c, 4)
    assert is_level_transitive(w.u, 4)


@pytest.mark.parametrize("d,count", [(3, 30), (5, 8), (7, 3), (2, 20)])
def test_decompose_random(d, count):
    rng = random.Random(d)
    for _ in range(count):
        g = portrait_to_automaton(random_kerP_portrait(rng, d, 3))
        w = decompose_transitive_pair(g, 3)
        assert is_spine_form(w.u)
        assert congruent(compose(w.u, conjugate(w.u, w.y)), g, 3)


def test_decompose_finite_state_targets(rng):
    for _ in range(20):
        g = commutator(random_automaton(rng, 3), random_automaton(rng, 3))
        w = decompose_transitive_pair(g, 4)
        assert congruent(compose(w.u, conjugate(w.u, w.y)), g, 4)


def test_decompose_errors(tau3):
    with pytest.raises(ConstructionError, match="ker P"):
        decompose_transitive_pair(tau3, 3)
    with pytest.raises(ConstructionError, match="even"):
        decompose_transitive_pair(TreeAutomorphism.identity(4), 2)


# -- conjugacy ----------------------------------------------------------------


def test_solve_conjugacy_examples(t3):
    assert solve_conjugacy(t3, t3, 3).is_identity()
    x = solve_conjugacy(inverse(t3), t3, 4)
    assert congruent(conjugate(inverse(t3), x), t3, 4)
    with pytest.raises(NotConjugate, match="depth 1"):
        solve_conjugacy(t3, TreeAutomorphism.identity(3), 1)


def test_solve_conjugacy_random(rng):
    for _ in range(30):
        d = rng.choice([2, 3, 4])
        g = portrait_to_automaton(random_portrait(rng, d, 3))
        x0 = portrait_to_automaton(random_portrait(rng, d, 3))
        h = conjugate(g, x0)
        x = solve_conjugacy(g, h, 3)
        assert congruent(conjugate(g, x), h, 3)


def test_solve_conjugacy_detects_non_conjugate(t3):
    # (t, 1, 1) has a nontrivial label on level 1, so it is not conjugate to 1 mod St(2)
    g = TreeAutomorphism.from_sections([t3, TreeAutomorphism.identity(3), TreeAutomorphism.identity(3)])
    with pytest.raises(NotConjugate):
        solve_conjugacy(g, TreeAutomorphism.identity(3), 2)


# -- commutator forms ---------------------------------------------------------


def test_commutator_form_examples(t3, one3):
    t = t3
    for g in (power(t3, 2), one3):
        a, b = commutator_form(g, 3)
        assert congruent(commutator(conjugate(t, a), b), g, 3)


def test_commutator_form_random(rng):
    t = adding_machine(5)
    for _ in range(5):
        g = portrait_to_automaton(random_kerP_portrait(rng, 5, 3))
        a, b = commutator_form(g, 3)
        assert congruent(commutator(conjugate(t, a), b), g, 3)


def test_binary_form_examples():
    t = adding_machine(2)
    for g in (TreeAutomorphism.identity(2), power(t, 2)):
        h = binary_commutator_form(g, 4)
        assert congruent(commutator(inverse(t), h), g, 4)
    with pytest.raises(ConstructionError, match="ker P"):
        binary_commutator_form(TreeAutomorphism.rooted((1, 0)), 4)
    with pytest.raises(ConstructionError):
        binary_commutator_form(TreeAutomorphism.identity(3), 3)


# -- endomorphisms --------------------------------------------------------------


def test_shift_examples(t3, one3):
    x = t3
    xe = TreeAutomorphism.from_sections([x, one3, one3])
    prod = compose(compose(xe, shift_endo(xe)), shift_endo(shift_endo(xe)))
    assert equals(prod, TreeAutomorphism.from_sections([x, x, x]))
    assert shift_endo(one3).is_identity()
    g = TreeAutomorphism.from_sections([t3, one3, inverse(t3)])
    assert shift_endo(g).sections() == [one3, inverse(t3), t3]


def test_floor_examples(t3, tt3):
    assert level_floor(t3) == TreeAutomorphism.rooted(t3.root_label)
    assert level_floor(tt3).is_identity()


def test_lift_examples(rng):
    for _ in range(10):
        g = random_automaton(rng, 3)
        assert lift_endo(IdentityEndo(), g) == g
        lifted = lift_endo(LevelFloor(), g)
        want = TreeAutomorphism.from_sections(
            [TreeAutomorphism.rooted(s.root_label) for s in g.sections()], g.root_label
        )
        assert lifted == want
    with pytest.raises(TypeError):
        lift_endo(lambda h: h, g)


def test_indicator_examples(t3, tau3):
    a = order_two_rep(ParitySequence.parse("pre=;per=1"), 3)
    phi = indicator_endo(a, 0)
    assert phi(t3).is_identity()
    assert phi(tau3) == a
    with pytest.raises(ConstructionError):
        indicator_endo(t3, 0)


def test_endomorphisms_are_homomorphisms(rng):
    a = order_two_rep(ParitySequence.parse("pre=1;per=01"), 3)
    endos = [
        IdentityEndo(), ShiftEndo(), LevelFloor(), IndicatorEndo(a, 0), IndicatorEndo(a, 3),
        Lift(ShiftEndo()), Lift(LevelFloor()), Lift(IndicatorEndo(a, 1)), Lift(Lift(ShiftEndo())),
    ]
    for _ in range(50):
        g, h = random_automaton(rng, 3), random_automaton(rng, 3)
        for phi in endos:
            assert isinstance(phi, Endomorphism)
            assert equals(phi(compose(g, h)), compose(phi(g), phi(h))), phi.name


def test_endomorphisms_preserve_chain(rng):
    endos = [ShiftEndo(), LevelFloor(), Lift(ShiftEndo()), Lift(LevelFloor())]
    for _ in range(40):
        g = portrait_to_automaton(random_m2_portrait(rng, 3, 4))
        if rng.random() < 0.5:
            g = TreeAutomorphism.from_sections([g, inverse(g), g])
        for k in range(6):
            if in_M(g, k):
                assert all(in_M(phi(g), k) for phi in endos)


def test_endomorphism_names():
    assert Lift(Lift(ShiftEndo())).name == "lift(lift(shift))"
    assert IndicatorEndo(TreeAutomorphism.identity(3), 2).name == "indicator(2)"


# -- split factorization and signed conjugates -------------------------------------


def test_split_examples(one3, tau3):
    fs = split_factorization(one3, 3)
    assert len(fs) == 3 and all(f.is_identity() for f in fs)
    h = TreeAutomorphism.from_sections([tau3, tau3, one3])
    fs = split_factorization(h, 4)
    assert fs[0] == TreeAutomorphism.from_sections([tau3, tau3, one3])
    assert equals(compose(compose(fs[0], fs[1]), fs[2]), h)
    with pytest.raises(ConstructionError):
        split_factorization(tau3, 3)


def test_split_random(rng):
    for _ in range(50):
        h = portrait_to_automaton(random_m2_portrait(rng, 3, 3))
        fs = split_factorization(h, 3)
        assert len(fs) == 3
        total = TreeAutomorphism.identity(3)
        for f in fs:
            total = compose(total, f)
        assert congruent(total, h, 3)
        assert in_ker_P(fs[-1].sections()[-1])


def test_signed_examples(t3, one3):
    g = TreeAutomorphism.from_sections([t3, one3, one3])
    assert signed_section_conjugate(g, [1, 1, 1], 3) == g
    out = signed_section_conjugate(g, [-1, 1, 1], 3)
    assert congruent(out.sections()[0], inverse(t3), 2)
    with pytest.raises(ConstructionError):
        signed_section_conjugate(t3, [1, 1, 1], 3)


def test_signed_random(rng):
    for _ in range(30):
        g = portrait_to_automaton(random_st1_portrait(rng, 3, 3))
        signs = [rng.choice([1, -1]) for _ in range(3)]
        out = signed_section_conjugate(g, signs, 3)
        for got, s, e in zip(out.sections(), g.sections(), signs):
            assert congruent(got, s if e == 1 else inverse(s), 2)


# -- proof traces ---------------------------------------------------------------


def test_derived_pair_trace(t3, tau3, one3, rng):
    c = compose(t3, tau3)
    g = TreeAutomorphism.from_sections([c, inverse(c), one3])
    tr = derived_pair_trace(g, 4)
    assert congruent(tr.product, tr.expected, 4)
    first = tr.expected.sections()[0]
    assert not in_ker_P(first)
    hits = 0
    while hits < 10:
        g = portrait_to_automaton(random_m2_portrait(rng, 3, 4))
        if in_M(g, 3):
            continue
        hits += 1
        tr = derived_pair_trace(g, 4)
        assert congruent(tr.product, tr.expected, 4)
    with pytest.raises(ConstructionError):
        derived_pair_trace(tau3, 3)


@pytest.mark.parametrize("d", [3, 5, 7, 9, 11, 13])
def test_exponent_power_witness(d):
    g, gp = exponent_power_witness(d)
    assert in_M(g, 1)
    k = (d - 1).bit_length() - 1
    tau = TreeAutomorphism.rooted((1, 0) + tuple(range(2, d)))
    for i, s in enumerate(gp.sections()):
        assert s == (tau if i < 2 ** k else TreeAutomorphism.identity(d))
    assert in_stabilizer(gp, 1)


def test_square_lift(rng, t3, tau3):
    for g in [t3, tau3] + [random_automaton(rng, 3) for _ in range(10)]:
        w = square_lift_witness(g)
        assert in_M(w, 2)
        assert equals(power(w, 2), TreeAutomorphism.from_sections(
            [power(g, 2), TreeAutomorphism.identity(3), TreeAutomorphism.identity(3)]))


def test_table_free_group_matches_tables(monkeypatch, rng):
    import treeverb.constructions as C

    targets = [portrait_to_automaton(random_kerP_portrait(rng, 3, 3)) for _ in range(10)]
    with_tables = [decompose_transitive_pair(g, 3) for g in targets]
    conj_tables = solve_conjugacy(inverse(adding_machine(3)), adding_machine(3), 3)
    monkeypatch.setattr(C, "_TABLE_MAX_DEGREE", 2)
    for g, w in zip(targets, with_tables):
        w2 = decompose_transitive_pair(g, 3)
        assert (w2.u, w2.y) == (w.u, w.y)
    assert solve_conjugacy(inverse(adding_machine(3)), adding_machine(3), 3) == conj_tables
