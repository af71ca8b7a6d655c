"""Core path algebra behaviour: composition, reduction, differentials, predicates."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfalg.errors import InputError, ReductionDivergence
from surfalg.quiver import Algebra, Arrow, Element, GradedQuiver, Path

from fixtures import (
    arrow_with_differential,
    free_loop,
    loop_killing_differential,
    point_algebra,
    six_vertex_chain,
    split_loop,
    square_zero_loop,
)


def test_path_endpoints_follow_written_order():
    alg = six_vertex_chain()
    q = alg.quiver
    p = Path.word("u1", "p1")  # u1 after p1
    assert q.src(p) == "1"
    assert q.tgt(p) == "3"
    assert q.degree(p) == 0
    assert q.is_composable_word(p.arrows)
    assert not q.is_composable_word(("p1", "u1"))


def test_splice_requires_matching_ends():
    alg = six_vertex_chain()
    q = alg.quiver
    left = Path.word("u1")
    right = Path.word("p1")
    assert q.splice(left, right) == Path.word("u1", "p1")
    assert q.splice(right, left) is None
    assert q.splice(Path.vertex("3"), left) == left


def test_compose_right_to_left():
    alg = six_vertex_chain()
    out = alg.mul(Path.word("u1"), Path.word("p1"))
    assert out == Element.of(Path.word("u1", "p1"))
    # q1 then u1 dies by the relation u1 q1
    dead = alg.mul(Path.word("u1"), Path.word("q1"))
    assert dead.is_zero()


def test_vertex_paths_act_as_local_units():
    alg = six_vertex_chain()
    p = Path.word("p1")
    assert alg.mul(Path.vertex("2"), p) == Element.of(p)
    assert alg.mul(p, Path.vertex("1")) == Element.of(p)
    assert alg.mul(Path.vertex("1"), p).is_zero()


def test_rewrite_reduction_split_loop():
    alg = split_loop(scalar=1)
    pp = Path.word("p", "p")
    assert alg.reduce_path(pp) == Element.of(Path.vertex("v"))
    ppp = Path.word("p", "p", "p")
    assert alg.reduce_path(ppp) == Element.of(Path.word("p"))
    lam = split_loop(scalar=Fraction(3, 2))
    assert lam.reduce_path(pp) == Element({Path.vertex("v"): Fraction(3, 2)})


def test_reduce_is_idempotent_on_fixture_words():
    alg = six_vertex_chain()
    words = [
        Path.word("u1", "p1"),
        Path.word("q2", "u1", "p1"),
        Path.word("p3", "u2", "p2", "u1", "p1"),
        Path.vertex("4"),
    ]
    x = Element({w: Fraction(i + 1) for i, w in enumerate(words)})
    once = alg.reduce(x)
    assert alg.reduce(once) == once


def test_reduction_divergence_is_reported():
    q = GradedQuiver(["v"], [Arrow("a", "v", "v", 0), Arrow("b", "v", "v", 0)])
    grow = Algebra(
        q,
        rewrites=[(Path.word("a", "a"), Element.of(Path.word("a", "b", "a", "a")))],
        length_bound=24,
    )
    with pytest.raises(ReductionDivergence):
        grow.reduce_path(Path.word("a", "a"))


def test_leibniz_sign_uses_degrees_to_the_left():
    alg = loop_killing_differential(u_degree=1)
    up = Path.word("u", "p")
    out = alg.apply_differential(up)
    assert out == Element({Path.word("u"): Fraction(-1)})
    even = loop_killing_differential(u_degree=2)
    assert even.apply_differential(up) == Element.of(Path.word("u"))


def test_differential_squares_to_zero_in_valid_fixture():
    alg = arrow_with_differential()
    dp = alg.apply_differential(Path.word("p"))
    assert dp == Element.of(Path.word("q"))
    assert alg.apply_differential(dp).is_zero()
    assert alg.validate() == []


def test_validate_catches_broken_differential():
    q = GradedQuiver(
        ["1", "2"],
        [Arrow("p", "1", "2", 0), Arrow("q", "1", "2", 1), Arrow("r", "1", "2", 2)],
    )
    alg = Algebra(q, differential={
        "p": Element.of(Path.word("q")),
        "q": Element.of(Path.word("r")),
    })
    probs = alg.validate()
    assert any("d^2" in m for m in probs)


def test_validate_catches_non_parallel_differential():
    q = GradedQuiver(["1", "2"], [Arrow("p", "1", "2", 0), Arrow("s", "1", "1", 1)])
    alg = Algebra(q, differential={"p": Element.of(Path.word("s"))})
    probs = alg.validate()
    assert any("not parallel" in m for m in probs)


def test_is_gentle_on_chain_fixture():
    ok, problems = six_vertex_chain().is_gentle()
    assert ok, problems


def test_is_gentle_rejects_three_outgoing():
    q = GradedQuiver(
        ["1", "2"],
        [Arrow("a", "1", "2", 0), Arrow("b", "1", "2", 0), Arrow("c", "1", "2", 0)],
    )
    ok, problems = Algebra(q).is_gentle()
    assert not ok
    assert any("outgoing" in m for m in problems)


def test_is_gentle_rejects_unpaired_compositions():
    # two nonzero successors of a: both b and c compose nonzero after a
    q = GradedQuiver(
        ["1", "2", "3"],
        [Arrow("a", "1", "2", 0), Arrow("b", "2", "3", 0), Arrow("c", "2", "1", 0)],
    )
    ok, problems = Algebra(q).is_gentle()
    assert not ok
    assert any("nonzero-successors" in m for m in problems)


def test_is_dg_gentle_flags_self_referential_differential():
    q = GradedQuiver(["1"], [Arrow("x", "1", "1", 0), Arrow("y", "1", "1", 1)])
    bad = Algebra(q, differential={"x": Element.of(Path.word("y", "x"))})
    ok, problems = bad.is_dg_gentle()
    assert not ok
    assert any("starts or ends" in m for m in problems)


def test_is_formal_short_values():
    assert arrow_with_differential().is_formal()
    with pytest.raises(InputError):
        arrow_with_differential().is_formal(disk_case=True)


def test_graded_dimension_of_chain_fixture():
    counts, growth = six_vertex_chain().graded_dimension(length_bound=10)
    assert not growth
    assert counts[0] == 21
    assert counts[1] == 3
    assert sum(counts.values()) == 24


def test_graded_dimension_flags_growth():
    counts, growth = free_loop(degree=0).graded_dimension(length_bound=8)
    assert growth
    assert counts[0] == 9  # e, q, ..., q^8


def test_point_algebra_is_one_dimensional():
    counts, growth = point_algebra().graded_dimension()
    assert counts == {0: 1}
    assert not growth


def test_properness_detection():
    flat = free_loop(degree=0)
    assert flat.relation_free_cycles() == [("q",)]
    assert not flat.locally_proper()[0]
    assert not flat.proper()[0]

    graded = free_loop(degree=1)
    assert graded.locally_proper()[0]
    assert not graded.proper()[0]

    nil = square_zero_loop()
    assert nil.proper()[0]


def test_confluence_check_catches_conflicting_rules():
    q = GradedQuiver(["v"], [Arrow("p", "v", "v", 0)])
    bad = Algebra(
        q,
        relations=[("p", "p")],
        rewrites=[(Path.word("p", "p"), Element.of(Path.vertex("v")))],
    )
    probs = bad.validate()
    assert any("critical pair" in m for m in probs)
    assert split_loop().validate() == []


# property tests -----------------------------------------------------------

_chain = six_vertex_chain()
_words = [
    Path.vertex("1"), Path.vertex("3"),
    Path.word("p1"), Path.word("q1"), Path.word("u1"),
    Path.word("u1", "p1"), Path.word("p2", "u1"), Path.word("q2", "u1"),
    Path.word("u2", "p2"), Path.word("p3", "u2"),
    Path.word("p2", "u1", "p1"), Path.word("p3", "u2", "p2"),
]


@st.composite
def chain_elements(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    terms = {}
    for _ in range(n):
        w = draw(st.sampled_from(_words))
        c = Fraction(draw(st.integers(min_value=-4, max_value=4)))
        if c:
            terms[w] = terms.get(w, Fraction(0)) + c
    return Element(terms)


@settings(max_examples=80, deadline=None)
@given(chain_elements(), chain_elements(), chain_elements())
def test_multiplication_is_associative(x, y, z):
    left = _chain.mul(_chain.mul(x, y), z)
    right = _chain.mul(x, _chain.mul(y, z))
    assert left == right


@settings(max_examples=60, deadline=None)
@given(chain_elements())
def test_reduce_idempotent_property(x):
    once = _chain.reduce(x)
    assert _chain.reduce(once) == once


@settings(max_examples=60, deadline=None)
@given(chain_elements(), chain_elements())
def test_degree_additivity_on_products(x, y):
    q = _chain.quiver
    prod = _chain.mul(x, y)
    degs_x = {q.degree(p) for p in x.terms}
    degs_y = {q.degree(p) for p in y.terms}
    if len(degs_x) == 1 and len(degs_y) == 1:
        want = degs_x.pop() + degs_y.pop()
        assert all(q.degree(p) == want for p in prod.terms)
