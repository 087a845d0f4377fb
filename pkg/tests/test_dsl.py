import pytest

from treeverb.constructions import SpineSpec, adding_machine
from treeverb.core import TreeAutomorphism, equals
from treeverb.dsl import ParseError, parse, parse_spine, serialize, serialize_spine
from treeverb.perm import Permutation
from treeverb.sampling import random_automaton, random_spine_spec


def doc(*lines):
    return "\n".join(lines) + "\n"


def test_parse_examples():
    assert parse(doc("degree 3", "state t = (1, 1, t) [2 3 1]", "root t")) == adding_machine(3)
    tau = parse(doc("degree 3", "state a = (1, 1, 1) [2 1 3]", "root a"))
    assert tau == TreeAutomorphism.rooted((1, 0, 2))
    with pytest.raises(ParseError, match="children"):
        parse(doc("degree 3", "state a = (1, 1) id", "root a"))


def test_comments_and_blank_lines():
    text = doc("# odometer", "", "degree 2   # binary", "state t = (1, t) [2 1]  # t", "root t")
    assert parse(text) == adding_machine(2)


@pytest.mark.parametrize(
    "text,line,pattern",
    [
        (doc("degree 3", "state a = (1, 1, 1) [1 1 2]", "root a"), 2, "bijection"),
        (doc("degree 3", "state a = (1, 1, b) id", "root a"), 2, "unknown state"),
        (doc("degree 3", "state a = (1, 1, 1) (1 2)", "root a"), 2, "image list"),
        (doc("degree 3", "state a = (1, 1, 1) [2 1]", "root a"), 2, "entries"),
        (doc("degree 3", "state a = (1, 1, 1) id", "root b"), 3, "unknown root"),
        (doc("degree x"), 1, "degree"),
        (doc("state a = (1, 1, 1) id", "root a"), 1, "before degree"),
        (doc("degree 3", "state a = (1, 1, 1) id", "state a = (1, 1, 1) id", "root a"), 3, "twice"),
        (doc("degree 3", "stat a = (1, 1, 1) id", "root a"), 2, "unexpected"),
        (doc("degree 3", "state a = (1, 1, 1) id", "root a", "root a"), 4, "duplicate root"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, pattern):
    with pytest.raises(ParseError, match=pattern) as exc:
        parse(text)
    assert exc.value.line == line


def test_missing_root():
    with pytest.raises(ParseError, match="missing root"):
        parse(doc("degree 3", "state a = (1, 1, 1) id"))


def test_identity_serialization():
    text = serialize(TreeAutomorphism.identity(3))
    assert text == doc("degree 3", "state e = (1, 1, 1) id", "root e")
    assert parse(text).is_identity()


def test_roundtrip(rng):
    for _ in range(100):
        g = random_automaton(rng, rng.choice([2, 3, 4, 11]))
        text = serialize(g)
        assert parse(text) == g
        assert equals(parse(text), g)


def test_spine_roundtrip(rng):
    for _ in range(20):
        spec = random_spine_spec(rng, rng.choice([3, 5]))
        assert parse_spine(serialize_spine(spec)) == spec


def test_spine_errors():
    with pytest.raises(ParseError, match="cycle"):
        parse_spine(doc("degree 3", "period [2 1 3]"))
    with pytest.raises(ParseError, match="period"):
        parse_spine(doc("degree 3", "pre [2 3 1]"))
    spec = parse_spine(doc("degree 3", "pre [3 1 2]", "period [2 3 1]"))
    assert spec == SpineSpec(3, (Permutation([3, 1, 2]),), (Permutation([2, 3, 1]),))
