import itertools
import random

import pytest

from multispinal.gf2n import field_context
from multispinal.selfsim import STATE_A, STATE_E, GroupElement, MultispinalGroup

from reference import GRIG_REST, GRIG_SWAPS, grig_act


@pytest.fixture(scope="module")
def g2():
    return MultispinalGroup(field_context(2))


@pytest.fixture(scope="module")
def g3():
    return MultispinalGroup(field_context(3))


def classic(group):
    """The degree-2 states under their classical one-letter names."""
    return {
        "e": group.identity,
        "a": group.gen_a,
        "b": group.iota(2),  # alpha
        "c": group.iota(3),  # alpha^2 = 1 + alpha
        "d": group.iota(1),  # alpha^3 = 1
    }


# action ------------------------------------------------------------------


def test_act_basics(g2):
    names = classic(g2)
    assert g2.act(names["a"], "0110") == "1110"
    assert g2.act(names["e"], "0110") == "0110"
    assert g2.act(names["b"], "00") == "01"  # b|_0 = a since Tr(alpha) = 1


def test_act_is_length_preserving_bijection(g2):
    names = classic(g2)
    for g in names.values():
        for length in (1, 2, 3, 4, 5):
            words = ["".join(w) for w in itertools.product("01", repeat=length)]
            images = {g2.act(g, w) for w in words}
            assert len(images) == len(words)
            assert all(len(w) == length for w in images)


def test_act_matches_classical_table(g2):
    names = classic(g2)
    words = ["".join(w) for l in range(1, 7) for w in itertools.product("01", repeat=l)]
    for name, g in names.items():
        for w in words:
            assert g2.act(g, w) == grig_act(name, w)


def test_act_of_products_composes(g2):
    # library product action == functional composition of table actions
    names = classic(g2)
    words = ["".join(w) for w in itertools.product("01", repeat=5)]
    for n1, n2 in itertools.product("abcde", repeat=2):
        g = g2.multiply(names[n1], names[n2])
        for w in words:
            assert g2.act(g, w) == grig_act(n1, grig_act(n2, w))


# restriction ---------------------------------------------------------------


def test_degree2_wreath_recursion(g2):
    names = classic(g2)
    b, c, d, a, e = (names[x] for x in "bcdae")
    assert g2.equal(g2.restrict(b, "1"), c)
    assert g2.equal(g2.restrict(c, "1"), d)
    assert g2.equal(g2.restrict(d, "1"), b)
    assert g2.equal(g2.restrict(b, "0"), a)
    assert g2.equal(g2.restrict(c, "0"), a)
    assert g2.equal(g2.restrict(d, "0"), e)


def test_restriction_table_matches_classical(g2):
    names = classic(g2)
    for name, (on0, on1) in GRIG_REST.items():
        assert g2.equal(g2.restrict(names[name], "0"), names[on0])
        assert g2.equal(g2.restrict(names[name], "1"), names[on1])
    for name, swaps in GRIG_SWAPS.items():
        assert (g2.act_letter(names[name], "0") != "0") == swaps


@pytest.mark.parametrize("n", [2, 3, 4])
def test_directed_restriction_along_one_is_shift(n):
    group = MultispinalGroup(field_context(n))
    for x in group.ctx.nonzero_elements():
        got = group.restrict(group.iota(x), "1")
        assert g_equal_single(group, got, group.ctx.mul_alpha(x))


def g_equal_single(group, g, x):
    return group.equal(g, group.iota(x))


def test_a_restricts_to_identity(g2):
    assert g2.restrict(g2.gen_a, "0") == g2.identity
    assert g2.restrict(g2.gen_a, "1") == g2.identity


def test_iota_one_restriction_unwinds(g2):
    # phi^3(1) = 1, then Tr(1) = 0, so the restriction along 1110 dies
    d = g2.iota(1)
    assert g2.equal(g2.restrict(d, "1110"), g2.identity)


def test_self_similarity_law_degree2(g2):
    states = g2.nucleus_states
    products = [GroupElement(p) for r in range(1, 4)
                for p in itertools.product(states, repeat=r)]
    words = ["".join(w) for l in range(0, 7) for w in itertools.product("01", repeat=l)]
    long_words = ["".join(w) for w in itertools.product("01", repeat=10)]
    for g in products:
        for x in "01":
            gx = g2.act_letter(g, x)
            rest = g2.restrict(g, x)
            for w in words:
                assert g2.act(g, x + w) == gx + g2.act(rest, w)
    for s in states:  # full depth 10 for the generators themselves
        g = g2.element(s)
        for x in "01":
            gx = g2.act_letter(g, x)
            rest = g2.restrict(g, x)
            for w in long_words:
                assert g2.act(g, x + w) == gx + g2.act(rest, w)


def test_self_similarity_law_degree3_sampled(g3):
    states = g3.nucleus_states
    rng = random.Random(3)
    products = [GroupElement(p) for p in itertools.product(states, repeat=2)]
    products += [GroupElement(tuple(rng.choice(states) for _ in range(3)))
                 for _ in range(60)]
    for g in products:
        for x in "01":
            gx = g3.act_letter(g, x)
            rest = g3.restrict(g, x)
            for l in range(0, 11, 2):
                w = "".join(rng.choice("01") for _ in range(l))
                assert g3.act(g, x + w) == gx + g3.act(rest, w)


# equality -----------------------------------------------------------------


def test_equal_basics(g2):
    names = classic(g2)
    a, e = names["a"], names["e"]
    assert g2.equal(g2.multiply(a, a), e)
    assert not g2.equal(a, e)  # differ on the word 0
    assert g2.equal(g2.multiply(names["b"], names["c"]), names["d"])


def test_equal_cross_checked_by_field_addition(g2):
    # the directed part is the additive group: alpha + alpha^2 = 1
    assert g2.ctx.add(2, 3) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_directed_part_is_additive(n):
    group = MultispinalGroup(field_context(n))
    for x in group.ctx.elements():
        for y in group.ctx.elements():
            lhs = group.multiply(group.iota(x), group.iota(y))
            assert group.equal(lhs, group.iota(group.ctx.add(x, y)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_nucleus_states_are_involutions(n):
    group = MultispinalGroup(field_context(n))
    for s in group.nucleus_states:
        g = group.element(s)
        assert group.equal(group.multiply(g, g), group.identity)


def test_equal_agrees_with_finite_action_comparison(g2):
    # bisimulation verdicts match brute-force action comparison to depth 7
    states = g2.nucleus_states
    rng = random.Random(5)
    words = ["".join(w) for l in range(1, 8) for w in itertools.product("01", repeat=l)]
    for _ in range(40):
        g = GroupElement(tuple(rng.choice(states) for _ in range(rng.randrange(0, 4))))
        h = GroupElement(tuple(rng.choice(states) for _ in range(rng.randrange(0, 4))))
        same = all(g2.act(g, w) == g2.act(h, w) for w in words)
        if g2.equal(g, h):
            assert same
        else:
            assert not same  # depth 7 suffices to separate at degree 2


def test_inverse_is_reversed_word(g2):
    names = classic(g2)
    rng = random.Random(9)
    pool = list(names.values())
    for _ in range(30):
        g = g2.identity
        for _ in range(rng.randrange(0, 5)):
            g = g2.multiply(g, rng.choice(pool))
        assert g2.equal(g2.multiply(g, g2.inverse(g)), g2.identity)
        assert g2.equal(g2.multiply(g2.inverse(g), g), g2.identity)


# restriction period ---------------------------------------------------------


def test_restriction_period_examples(g2, g3):
    assert g2.restriction_period(("b", 2)) == 3
    for x in range(1, 8):
        assert g3.restriction_period(("b", x)) == 7
    assert g2.restriction_period(STATE_E) == 1


@pytest.mark.parametrize("n", range(2, 9))
def test_restriction_period_every_directed_state(n):
    group = MultispinalGroup(field_context(n))
    for s in group.nucleus_states:
        if s[0] == "b":
            assert group.restriction_period(s) == group.ctx.k


def test_restriction_period_rejects_swap_state(g2):
    with pytest.raises(ValueError):
        g2.restriction_period(STATE_A)


# nucleus verification --------------------------------------------------------


def test_verify_nucleus_degree2(g2):
    report = g2.verify_nucleus(8)
    assert report.passed
    assert report.state_count == 5
    assert {g2.state_name(s) for s in g2.nucleus_states} == {"e", "a", "b1", "b2", "b3"}


def test_verify_nucleus_degree3(g3):
    report = g3.verify_nucleus(16)
    assert report.passed
    assert report.state_count == 9


def test_verify_nucleus_degree4():
    group = MultispinalGroup(field_context(4))
    report = group.verify_nucleus(8)
    assert report.passed
    assert report.state_count == 17


def test_identity_pair_contracts_at_depth_zero(g2):
    assert g2.in_nucleus(g2.multiply(g2.identity, g2.identity)) == STATE_E


def test_verify_nucleus_rejects_bad_depth(g2):
    with pytest.raises(ValueError):
        g2.verify_nucleus(0)
