import pytest

from oracles import alt_exponent_brute, parity_by_vector_cycle
from treeverb.constructions import order_two_rep
from treeverb.core import (
    TreeAutomorphism,
    commutator,
    compose,
    conjugate,
    in_stabilizer,
    inverse,
    portrait_to_automaton,
)
from treeverb.parity import (
    ChainIndex,
    ParitySequence,
    alt_exponent,
    alt_exponent_two_part,
    berlekamp_massey,
    chain_scope_note,
    classify_chain,
    epsilon,
    in_ker_P,
    in_M,
    level_parities,
    parity_sequence,
    two_adic_valuation,
)
from treeverb.sampling import random_automaton, random_kerP_portrait, random_parity_sequence


def test_sequence_canonical_form():
    assert ParitySequence((1, 0), (0, 0)) == ParitySequence((1,), (0,))
    assert ParitySequence((0, 1), (0, 1)) == ParitySequence((), (0, 1))
    assert str(ParitySequence.parse("pre=10;per=0")) == "pre=1;per=0"
    assert ParitySequence.parse("pre=;per=0").is_zero()
    with pytest.raises(ValueError):
        ParitySequence.parse("pre=1")
    with pytest.raises(ValueError):
        ParitySequence((), ())


def test_xor_is_bitwise(rng):
    for _ in range(30):
        a, b = random_parity_sequence(rng), random_parity_sequence(rng)
        assert (a ^ b).bits(30) == [x ^ y for x, y in zip(a.bits(30), b.bits(30))]


def test_epsilon_examples(t3, tau3, one3):
    assert epsilon(t3, 0) == 0
    assert epsilon(tau3, 0) == 1
    assert not any(level_parities(one3, 12))


def test_parity_sequence_examples(t3, tau3):
    assert str(parity_sequence(t3)) == "pre=;per=0"
    assert str(parity_sequence(tau3)) == "pre=1;per=0"
    eps = ParitySequence.parse("pre=01;per=110")
    assert parity_sequence(order_two_rep(eps, 3)) == eps


def test_parity_matches_vector_cycle_oracle(rng):
    for _ in range(200):
        g = random_automaton(rng, rng.choice([2, 3, 4, 5]), max_states=5)
        pre, per = parity_by_vector_cycle(g)
        want = ParitySequence(pre, per)
        assert parity_sequence(g) == want
        assert level_parities(g, 12) == want.bits(12)


def test_berlekamp_massey_recovers_recurrence():
    # Fibonacci mod 2: 0 1 1 0 1 1 ...
    bits = [0, 1, 1, 0, 1, 1, 0, 1]
    assert berlekamp_massey(bits) == [1, 1, 1]
    assert berlekamp_massey([0] * 6) == [1]


def test_kernel_examples(t3, tau3, rng):
    assert in_ker_P(t3)
    assert not in_ker_P(tau3)
    for _ in range(50):
        g, h = random_automaton(rng, 3), random_automaton(rng, 3)
        assert in_ker_P(commutator(g, h))
    for _ in range(30):
        assert in_ker_P(portrait_to_automaton(random_kerP_portrait(rng, 3, 4)))


def test_homomorphism_and_invariance(rng):
    for _ in range(100):
        g, h, x = (random_automaton(rng, 3) for _ in range(3))
        gh = compose(g, h)
        assert level_parities(gh, 11) == [
            a ^ b for a, b in zip(level_parities(g, 11), level_parities(h, 11))
        ]
        assert parity_sequence(gh) == parity_sequence(g) ^ parity_sequence(h)
        assert parity_sequence(inverse(g)) == parity_sequence(g)
        assert parity_sequence(conjugate(g, x)) == parity_sequence(g)


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
def test_alt_exponent_brute_force(d):
    assert alt_exponent(d) == alt_exponent_brute(d)


def test_alt_exponent_examples():
    assert [alt_exponent(d) for d in (3, 5, 7)] == [3, 30, 420]
    with pytest.raises(ValueError):
        alt_exponent(2)


@pytest.mark.parametrize("d", range(3, 16, 2))
def test_two_part_case_split(d):
    k = (d - 1).bit_length() - 1
    want = k - 1 if d == 2 ** k + 1 else k
    assert two_adic_valuation(alt_exponent(d)) == want == alt_exponent_two_part(d)


def test_in_M_examples(t3, tt3, one3):
    c = TreeAutomorphism.rooted((1, 2, 0))
    assert in_M(c, 1) and not in_M(c, 2)
    assert in_M(tt3, 3) and not in_M(tt3, 4)
    assert all(in_M(one3, k) for k in range(12))


def _in_M_by_definition(g, k):
    if k == 0:
        return True
    if k == 1:
        return in_ker_P(g)
    if k == 2:
        return in_ker_P(g) and in_stabilizer(g, 1)
    return in_stabilizer(g, 1) and all(_in_M_by_definition(s, k - 2) for s in g.sections())


def test_in_M_matches_definition(rng):
    for _ in range(100):
        g = random_automaton(rng, 3)
        if rng.random() < 0.5:
            g = TreeAutomorphism.from_sections([g, inverse(g), random_automaton(rng, 3)])
        for k in range(7):
            assert in_M(g, k) == _in_M_by_definition(g, k)
            assert in_M(g, k) or not in_M(g, k + 1)


def test_classification(t3, tau3, tt3, one3):
    assert classify_chain(tau3) == ChainIndex(0)
    assert classify_chain(TreeAutomorphism.rooted((1, 2, 0))) == ChainIndex(1)
    assert classify_chain(tt3) == ChainIndex(3)
    assert classify_chain(one3).trivial and str(classify_chain(one3)) == "trivial"
    assert str(classify_chain(t3)) == "M1"


def test_classification_is_exact_position(rng):
    for _ in range(100):
        g = random_automaton(rng, 3)
        for _ in range(rng.randint(0, 2)):
            g = TreeAutomorphism.from_sections([g, inverse(g), TreeAutomorphism.identity(3)])
        c = classify_chain(g)
        if c.trivial:
            assert g.is_identity()
            continue
        k = c.value
        assert in_M(g, k) and not in_M(g, k + 1)
        if k % 2 == 1:
            assert in_stabilizer(g, (k - 1) // 2)


def test_scope_note():
    assert chain_scope_note(3) is None
    assert chain_scope_note(5) is None
    for d in (2, 4, 6):
        assert "warning" in chain_scope_note(d)
