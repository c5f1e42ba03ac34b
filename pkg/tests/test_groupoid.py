import itertools
import random
from fractions import Fraction

import pytest

from multispinal.exact_linalg import build_W
from multispinal.gf2n import field_context
from multispinal.groupoid import (
    ONES,
    ZERO,
    GermPoint,
    SemigroupTriple,
    Tail,
    bound_check,
    default_search_depth,
    germ_equal,
    intersect_witness,
    is_idempotent,
    membership_matrix,
    point_in_bisection,
    region_pattern,
    region_sets,
    sample_bound_ratios,
    sg_equal,
    sg_multiply,
    sg_star,
    singular_system_certificate,
)
from multispinal.selfsim import MultispinalGroup


@pytest.fixture(scope="module")
def g2():
    return MultispinalGroup(field_context(2))


@pytest.fixture(scope="module")
def g3():
    return MultispinalGroup(field_context(3))


def random_word(rng, max_len=6):
    return "".join(rng.choice("01") for _ in range(rng.randrange(0, max_len + 1)))


def random_element(group, rng, max_factors=3):
    states = group.nucleus_states
    g = group.identity
    for _ in range(rng.randrange(0, max_factors + 1)):
        g = group.multiply(g, group.element(rng.choice(states)))
    return g


def random_triple(group, rng):
    return SemigroupTriple(random_word(rng), random_element(group, rng), random_word(rng))


# inverse semigroup ---------------------------------------------------------


def test_product_empty_extension_case(g2):
    rng = random.Random(0)
    for _ in range(50):
        eta, mu, nu = (random_word(rng) for _ in range(3))
        g, h = random_element(g2, rng), random_element(g2, rng)
        prod = sg_multiply(g2, SemigroupTriple(eta, g, mu), SemigroupTriple(mu, h, nu))
        assert prod.eta == eta and prod.mu == nu
        assert g2.equal(prod.g, g2.multiply(g, h))


def test_product_zero_case(g2):
    s = SemigroupTriple("", g2.identity, "0")
    t = SemigroupTriple("1", g2.identity, "")
    assert sg_multiply(g2, s, t) is ZERO
    assert sg_multiply(g2, ZERO, s) is ZERO
    assert sg_multiply(g2, s, ZERO) is ZERO


def test_idempotents(g2):
    for mu in ("", "0", "10", "111"):
        s = SemigroupTriple(mu, g2.identity, mu)
        assert sg_equal(g2, sg_multiply(g2, s, s), s)
        assert sg_equal(g2, sg_star(g2, s), s)
    assert sg_star(g2, ZERO) is ZERO


def test_star_involution_and_sss(g2, g3):
    for group, seed in ((g2, 1), (g3, 2)):
        rng = random.Random(seed)
        for _ in range(200):
            s = random_triple(group, rng)
            assert sg_equal(group, sg_star(group, sg_star(group, s)), s)
            sss = sg_multiply(group, sg_multiply(group, s, sg_star(group, s)), s)
            assert sg_equal(group, sss, s)
            ss = sg_multiply(group, sg_star(group, s), s)
            assert sg_equal(group, ss, SemigroupTriple(s.mu, group.identity, s.mu))


def test_idempotents_commute_and_have_triple_shape(g2):
    rng = random.Random(3)
    for _ in range(100):
        s, t = random_triple(g2, rng), random_triple(g2, rng)
        e1 = sg_multiply(g2, s, sg_star(g2, s))
        e2 = sg_multiply(g2, t, sg_star(g2, t))
        a = sg_multiply(g2, e1, e2)
        b = sg_multiply(g2, e2, e1)
        assert sg_equal(g2, a, b)
        # computed idempotency matches the (mu, e, mu) / Zero shape
        assert is_idempotent(g2, e1)
        if e1 is not ZERO:
            assert e1.eta == e1.mu
            assert g2.equal(e1.g, g2.identity)


def test_random_triple_idempotency_matches_shape(g2):
    rng = random.Random(4)
    for _ in range(300):
        s = random_triple(g2, rng)
        shape = s.eta == s.mu and g2.equal(s.g, g2.identity)
        assert is_idempotent(g2, s) == shape


# tails and germ points -------------------------------------------------------


def test_tail_letters_and_validation():
    t = Tail("10", "01")
    assert [t.letter(i) for i in range(6)] == ["1", "0", "0", "1", "0", "1"]
    assert ONES.starts_with_ones(25)
    with pytest.raises(ValueError):
        Tail("1", "")


def test_germ_point_requires_mu_prefix(g2):
    with pytest.raises(ValueError):
        GermPoint(SemigroupTriple("", g2.identity, "0"), ONES)
    GermPoint(SemigroupTriple("", g2.identity, "11"), ONES)


# germ equality ----------------------------------------------------------------


def test_germ_equal_reflexive(g2):
    for x in g2.ctx.elements():
        assert germ_equal(g2, g2.iota(x), g2.iota(x), ONES)


def test_germ_b_never_meets_e_on_all_ones(g2):
    b = g2.iota(2)
    # power-table oracle: restrictions along 1^t cycle through the three
    # nonzero directed states and never hit the identity
    seen = set()
    r = b
    for _ in range(6):
        assert not g2.equal(r, g2.identity)
        seen.add(r.factors)
        r = g2.restrict(r, "1")
    assert len(seen) == 3
    assert not germ_equal(g2, b, g2.identity, ONES)


def test_germ_b_meets_c_after_escape(g2):
    b, c = g2.iota(2), g2.iota(3)
    assert germ_equal(g2, b, c, Tail("1110", "1"))
    assert not germ_equal(g2, b, c, ONES)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_z_e_only_in_its_own_neighborhoods(n):
    group = MultispinalGroup(field_context(n))
    for x in group.ctx.nonzero_elements():
        assert not germ_equal(group, group.iota(x), group.identity, ONES)


# intersection witnesses ---------------------------------------------------------


def test_witness_bc_at_m1(g2):
    # b c^{-1} = d = iota(1), 1 lies in H_0, and 1 + 2 = 0 mod 3
    assert intersect_witness(g2, g2.iota(2), g2.iota(3), 1) == "1110"


def test_witness_bd_at_m0(g2):
    # b d^{-1} = iota(alpha + 1) = iota(alpha^2), which lies in H_1 only
    w = intersect_witness(g2, g2.iota(2), g2.iota(1), 0)
    assert w == "10"
    assert germ_equal(g2, g2.iota(2), g2.iota(1), Tail(w, "1"))


def test_witness_rejects_equal_elements(g2):
    with pytest.raises(ValueError):
        intersect_witness(g2, g2.iota(2), g2.iota(2), 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_witness_exists_for_all_pairs_and_m(n):
    group = MultispinalGroup(field_context(n))
    elems = list(group.ctx.elements())
    for m in range(0, 7):
        for x, y in itertools.combinations(elems, 2):
            w = intersect_witness(group, group.iota(x), group.iota(y), m)
            assert w.endswith("0")
            assert len(w) - 1 >= m
            assert germ_equal(group, group.iota(x), group.iota(y), Tail(w, "1"))


# regions -------------------------------------------------------------------------


def test_region_pattern_subgroup_zero(g2):
    p = region_pattern(g2, 1, "H", 0)
    assert p.witness == "1110"  # prefix 1^(3t) 0 with 3t >= m
    assert p.membership_row == (1, 0, 0, 1)  # exactly {e, d}
    assert p.members == (0, 1)


def test_region_pattern_complement(g3):
    p = region_pattern(g3, 2, "Hc", 5)
    W = build_W(g3.ctx)
    col = 5 + g3.ctx.k
    assert p.membership_row == tuple(W.entry(i, col) for i in range(2 * g3.ctx.q))


def test_region_pattern_rejects_inadmissible_sets(g2):
    with pytest.raises(ValueError):
        region_pattern(g2, 1, "everything", 0)
    with pytest.raises(ValueError):
        region_pattern(g2, 1, "H", 3)


def test_region_sets_cover_and_partition(g2):
    sets = region_sets(g2.ctx)
    assert len(sets) == 2 * g2.ctx.k
    for kind, j, members in sets:
        assert len(members) == g2.ctx.q


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_membership_matrix_equals_transpose_degree2(g2, m):
    result = membership_matrix(g2, m)
    assert result.matches_transpose
    assert len(result.rows) == 6
    W = build_W(g2.ctx)
    for r, row in enumerate(result.rows):
        assert row == tuple(W.entry(i, r) for i in range(4))


@pytest.mark.parametrize("m", [1, 3, 5])
def test_membership_matrix_equals_transpose_degree3(g3, m):
    assert membership_matrix(g3, m).matches_transpose


def test_membership_matrix_independent_of_m(g2):
    rows1 = membership_matrix(g2, 1).rows
    rows4 = membership_matrix(g2, 4).rows
    assert rows1 == rows4


def test_monotone_neighborhoods(g3):
    # U_l(z_g) contained in U_m(z_g) for l >= m, on sampled germ points
    rng = random.Random(8)
    for _ in range(60):
        x = rng.randrange(8)
        h = rng.randrange(8)
        s = rng.randrange(0, 15)
        point = GermPoint(
            SemigroupTriple("", g3.iota(x), ""), Tail("1" * s + "0", "1")
        )
        for l, m in ((5, 2), (4, 1), (3, 3)):
            if point_in_bisection(g3, point, g3.iota(h), l):
                assert point_in_bisection(g3, point, g3.iota(h), m)


def test_default_search_depth_formula(g2):
    assert default_search_depth(g2.ctx, 4) == 4 + 2 * 3 + 1


# singular system and bound --------------------------------------------------------


def test_singular_certificate_degree2(g2):
    cert = singular_system_certificate(g2, 1)
    assert cert["pass"]
    assert cert["rank_over_Q"] == 4
    assert cert["matrix_source"] == "germ-search"


def test_singular_certificate_degree3(g3):
    cert = singular_system_certificate(g3, 1)
    assert cert["pass"]
    assert cert["rank_over_Q"] == 8


def test_bound_check_identity_indicator(g2):
    c = [Fraction(1), Fraction(0), Fraction(0), Fraction(0)]
    report = bound_check(g2.ctx, 1, c)
    for j in range(3):
        assert report["kappa"][f"H{j}"] == 1
        assert report["kappa"][f"H{j}c"] == 0
    assert report["max_abs_kappa"] == 1
    assert report["passes_2n_bound"] and report["passes_sharp_bound"]


def test_bound_check_all_ones(g2):
    report = bound_check(g2.ctx, 1, [Fraction(1)] * 4)
    assert report["max_abs_kappa"] == 2
    assert report["passes_2n_bound"] and report["passes_sharp_bound"]


def test_bound_check_rejects_zero_identity_coefficient(g2):
    with pytest.raises(ValueError):
        bound_check(g2.ctx, 1, [Fraction(0), Fraction(1), Fraction(1), Fraction(1)])


def test_bound_check_kappa_matches_transpose_product(g3):
    # kappa vector must equal W^t c computed by plain exact arithmetic
    rng = random.Random(13)
    W = build_W(g3.ctx)
    order = g3.ctx.canonical_elements()
    for _ in range(25):
        c = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 10)) for _ in order]
        if c[0] == 0:
            c[0] = Fraction(1)
        report = bound_check(g3.ctx, 1, c)
        labels = [f"H{j}" for j in range(7)] + [f"H{j}c" for j in range(7)]
        for col, label in enumerate(labels):
            want = sum(
                (c[i] for i in range(len(order)) if W.entry(i, col)), start=Fraction(0)
            )
            assert report["kappa"][label] == want


def test_sharp_bound_implies_stated_bound(g2):
    # q/(2q-1) > 1/2^n, so the sharp inequality forces the strict one
    rng = random.Random(17)
    for _ in range(200):
        c = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 10)) for _ in range(4)]
        if c[0] == 0:
            c[0] = Fraction(-2, 3)
        report = bound_check(g2.ctx, 1, c)
        assert report["passes_sharp_bound"]
        assert report["passes_2n_bound"]


@pytest.mark.parametrize("n", [2, 3])
def test_sampler_matches_bound_check(n):
    ctx = field_context(n)
    report = sample_bound_ratios(ctx, 1, 500, seed=42)
    assert report["all_pass_2n_bound"]
    assert report["all_pass_sharp_bound"]
    assert report["min_ratio"] >= report["sharp_threshold"]


def test_sampler_deterministic(g2):
    r1 = sample_bound_ratios(g2.ctx, 1, 300, seed=7)
    r2 = sample_bound_ratios(g2.ctx, 1, 300, seed=7)
    assert r1 == r2
