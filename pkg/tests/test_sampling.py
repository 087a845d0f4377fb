from treeverb.parity import in_M, in_ker_P
from treeverb.core import in_stabilizer, portrait_to_automaton
from treeverb.sampling import (
    random_automaton,
    random_kerP_portrait,
    random_m2_portrait,
    random_spine_spec,
    rng_for,
)


def test_seeded_generators_are_deterministic():
    a = [random_automaton(rng_for(7), 3) for _ in range(3)]
    b = [random_automaton(rng_for(7), 3) for _ in range(3)]
    assert a == b
    assert random_spine_spec(rng_for(1), 5) == random_spine_spec(rng_for(1), 5)


def test_random_automaton_state_bound(rng):
    for _ in range(50):
        assert random_automaton(rng, 3, max_states=4).num_states <= 5


def test_kernel_samplers(rng):
    for d in (2, 3, 5):
        for _ in range(20):
            assert in_ker_P(portrait_to_automaton(random_kerP_portrait(rng, d, 4)))
            g = portrait_to_automaton(random_m2_portrait(rng, d, 3))
            assert in_M(g, 2) and in_stabilizer(g, 1)
