"""Inverse semigroup of tree symmetries, germ points, and region searches.

The semigroup consists of triples (eta, g, mu) with eta, mu finite binary
words and g a group element, plus an absorbing Zero.  Points of interest
in the groupoid of germs are classes [(empty, g, empty), tail] with an
eventually periodic tail; the basic neighborhoods are

    U_m(z_g) = the germs of (empty, g, empty) over the cylinder of 1^m.

Two such points with the same tail coincide exactly when the two group
elements act the same on some finite prefix of the tail and restrict to
equal elements there; this is decidable because restriction along
1-blocks cycles with period 2^n - 1 and collapses into {e, a} after a 0.

For each subgroup image K = iota(H_j) (or complement image) the
intersection of the U_m over K minus the union over the complement is
nonempty, witnessed by a tail 1^s 0 1^infinity with s = j mod (2^n - 1);
stacking the membership indicator rows of all 2k such regions over the
2q nucleus columns reproduces the transpose of the inclusion matrix.
That full-rank transpose forces any vanishing combination of region
indicators to have zero coefficients, and bounds from the explicit
right-inverse give |max region value| strictly above |c_e| / 2^n (and at
least |c_e| * q / (2q - 1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exact_linalg import (
    InclusionMatrix,
    RationalMatrix,
    build_T,
    build_W,
    rank_over_Q,
    verify_right_inverse,
)
from .gf2n import FieldContext
from .hyperplanes import build_hyperplanes
from .selfsim import GroupElement, MultispinalGroup


class _Zero:
    """Absorbing zero of the inverse semigroup."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Zero"


ZERO = _Zero()


@dataclass(frozen=True)
class SemigroupTriple:
    eta: str
    g: GroupElement
    mu: str


@dataclass(frozen=True)
class Tail:
    """Eventually periodic infinite word prefix . period period ..."""

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")

    def letter(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def fold(self, i: int) -> int:
        """Canonical position index for cycle detection."""
        if i < len(self.prefix):
            return i
        return len(self.prefix) + (i - len(self.prefix)) % len(self.period)

    def starts_with_ones(self, m: int) -> bool:
        return all(self.letter(i) == "1" for i in range(m))


ONES = Tail("", "1")


@dataclass(frozen=True)
class GermPoint:
    triple: SemigroupTriple
    tail: Tail

    def __post_init__(self):
        mu = self.triple.mu
        if any(self.tail.letter(i) != ch for i, ch in enumerate(mu)):
            raise ValueError("mu must be a prefix of the tail")


@dataclass(frozen=True)
class BisectionDescriptor:
    """The compact open bisection of (gamma, g, mu) over the cylinder of
    mu + eta.  The basic neighborhoods of the distinguished points are the
    descriptors ("", g, "", 1^m)."""

    gamma: str
    g: GroupElement
    mu: str
    eta: str

    @classmethod
    def basic_neighborhood(cls, g: GroupElement, m: int) -> "BisectionDescriptor":
        return cls("", g, "", "1" * m)


@dataclass(frozen=True)
class RegionPattern:
    """One disjointified region: its defining set, witness and indicator row."""

    kind: str                         # "H" or "Hc"
    j: int
    witness: str                      # finite word; the tail continues 1^infinity
    membership_row: tuple[int, ...]   # over the canonical 2q nucleus columns
    members: tuple[int, ...]          # field elements of K, canonical order

    @property
    def label(self) -> str:
        return f"H{self.j}" + ("c" if self.kind == "Hc" else "")


class MembershipMismatch(AssertionError):
    """Germ-derived membership matrix disagrees with the inclusion transpose."""

    def __init__(self, row_label: str, col_label: str):
        super().__init__(f"membership mismatch at row {row_label}, column {col_label}")
        self.row_label = row_label
        self.col_label = col_label


class RegionSearchError(RuntimeError):
    """No witness found within the search depth; this contradicts the
    structure of the disjointified regions and must be surfaced loudly."""


# -- inverse semigroup --------------------------------------------------


def sg_multiply(group: MultispinalGroup, s, t):
    """Product in the inverse semigroup; Zero absorbs."""
    if s is ZERO or t is ZERO:
        return ZERO
    eta, g, mu = s.eta, s.g, s.mu
    gamma, h, nu = t.eta, t.g, t.mu
    if gamma.startswith(mu):
        eps = gamma[len(mu):]
        return SemigroupTriple(
            eta + group.act(g, eps),
            group.multiply(group.restrict(g, eps), h),
            nu,
        )
    if mu.startswith(gamma):
        eps = mu[len(gamma):]
        hinv = group.inverse(h)
        return SemigroupTriple(
            eta,
            group.multiply(g, group.inverse(group.restrict(hinv, eps))),
            nu + group.act(hinv, eps),
        )
    return ZERO


def sg_star(group: MultispinalGroup, s):
    """Involution (eta, g, mu)* = (mu, g^{-1}, eta)."""
    if s is ZERO:
        return ZERO
    return SemigroupTriple(s.mu, group.inverse(s.g), s.eta)


def sg_equal(group: MultispinalGroup, s, t) -> bool:
    """Semantic equality: words match and group parts are bisimilar."""
    if s is ZERO or t is ZERO:
        return s is t
    return s.eta == t.eta and s.mu == t.mu and group.equal(s.g, t.g)


def is_idempotent(group: MultispinalGroup, s) -> bool:
    if s is ZERO:
        return True
    return sg_equal(group, sg_multiply(group, s, s), s)


# -- germs ---------------------------------------------------------------


def germ_equal(group: MultispinalGroup, g1: GroupElement, g2: GroupElement, tail: Tail) -> bool:
    """Whether [(empty, g1, empty), tail] and [(empty, g2, empty), tail]
    are the same germ.

    Walks the tail keeping the pair of restrictions; succeeds at the first
    prefix where the restrictions are equal (the acted prefixes must have
    agreed the whole way, by the prefix property of the action).  A
    revisited (restriction pair, tail position) state without success can
    never succeed later, so the walk terminates.
    """
    r1, r2 = g1, g2
    pos = 0
    seen = set()
    while True:
        if group.equal(r1, r2):
            return True
        key = (r1.factors, r2.factors, tail.fold(pos))
        if key in seen:
            return False
        seen.add(key)
        ch = tail.letter(pos)
        if group.act_letter(r1, ch) != group.act_letter(r2, ch):
            return False
        r1 = group.restrict(r1, ch)
        r2 = group.restrict(r2, ch)
        pos += 1


def point_in_bisection(group: MultispinalGroup, point: GermPoint, h: GroupElement, m: int) -> bool:
    """Whether a germ point lies in U_m(z_h).

    Supported for points carried by triples (empty, g, empty) - every
    witness in this package has that shape.
    """
    t = point.triple
    if t.eta or t.mu:
        raise ValueError("only (empty, g, empty) germ points are supported")
    if not point.tail.starts_with_ones(m):
        return False
    return germ_equal(group, t.g, h, point.tail)


def point_in_descriptor(group: MultispinalGroup, desc: BisectionDescriptor, point: GermPoint) -> bool:
    """Whether a germ point lies in the bisection of a descriptor with
    matching words (gamma = mu), the shape all isotropy-type neighborhoods
    here share.

    The point [(empty, h, empty), tail] belongs iff the tail extends
    mu + eta and some prefix v = mu e of the tail satisfies
    h.v = mu (g.e) with h|_v equal to g|_e.  Same cycle-detected walk as
    plain germ equality, offset by |mu| letters on the descriptor side.
    """
    if desc.gamma != desc.mu:
        raise ValueError("only descriptors with gamma = mu are supported")
    t = point.triple
    if t.eta or t.mu:
        raise ValueError("only (empty, g, empty) germ points are supported")
    tail = point.tail
    required = desc.mu + desc.eta
    if any(tail.letter(i) != ch for i, ch in enumerate(required)):
        return False
    rh = t.g
    # the first |mu| output letters must reproduce mu literally
    for i, ch in enumerate(desc.mu):
        if group.act_letter(rh, ch) != ch:
            return False
        rh = group.restrict(rh, ch)
    # fast-forward through eta, comparing outputs letterwise; success
    # checks may wait (an earlier witness propagates to longer prefixes)
    rg = desc.g
    pos = len(desc.mu)
    while pos < len(required):
        ch = tail.letter(pos)
        if group.act_letter(rh, ch) != group.act_letter(rg, ch):
            return False
        rh = group.restrict(rh, ch)
        rg = group.restrict(rg, ch)
        pos += 1
    # then the usual cycle-detected germ walk
    seen = set()
    while True:
        if group.equal(rh, rg):
            return True
        key = (rh.factors, rg.factors, tail.fold(pos))
        if key in seen:
            return False
        seen.add(key)
        ch = tail.letter(pos)
        if group.act_letter(rh, ch) != group.act_letter(rg, ch):
            return False
        rh = group.restrict(rh, ch)
        rg = group.restrict(rg, ch)
        pos += 1


def default_search_depth(ctx: FieldContext, m: int) -> int:
    # one full shift-register period past the congruence window, plus the 0
    return m + 2 * ctx.k + 1


def intersect_witness(group: MultispinalGroup, g1: GroupElement, g2: GroupElement, m: int) -> str:
    """A word 1^(m+m') 0 witnessing that U_m(z_g1) and U_m(z_g2) intersect.

    m' is the least shift making m + m' land on an index j with the
    difference of the two field elements in H_j; the result is validated
    by an actual germ-equality run before being returned.
    """
    ctx = group.ctx
    x1 = _directed_value(g1)
    x2 = _directed_value(g2)
    if x1 == x2:
        raise ValueError("witness requires distinct elements")
    y = x1 ^ x2
    tp = ctx.trace_of_power
    ly = ctx.discrete_log[y]
    for mp in range(ctx.k):
        j = (m + mp) % ctx.k
        if tp[(ly + j) % ctx.k] == 0:  # y lies in H_j
            word = "1" * (m + mp) + "0"
            if not germ_equal(group, g1, g2, Tail(word, "1")):
                raise RegionSearchError(
                    f"congruence witness {word!r} failed germ validation"
                )
            return word
    raise RegionSearchError(f"no witness for elements {x1}, {x2} at m={m}")


def _directed_value(g: GroupElement) -> int:
    """Field element of a purely directed group element (no letter swaps)."""
    acc = 0
    for s in g.factors:
        if s[0] != "b":
            raise ValueError(f"element contains the swap generator: {g.factors}")
        acc ^= s[1]
    return acc


def region_sets(ctx: FieldContext) -> list[tuple[str, int, tuple[int, ...]]]:
    """The 2k admissible sets K in canonical region order
    [H_0 .. H_(k-1), H_0^c .. H_(k-1)^c], members in canonical element order."""
    planes = build_hyperplanes(ctx)
    order = ctx.canonical_elements()
    out = []
    for h in planes:
        out.append(("H", h.index, tuple(x for x in order if x in h)))
    for h in planes:
        out.append(("Hc", h.index, tuple(x for x in order if x not in h)))
    return out


def region_pattern(
    group: MultispinalGroup,
    m: int,
    kind: str,
    j: int,
    search_depth: int | None = None,
) -> RegionPattern:
    """Search for a germ point separating one admissible K from the rest.

    Tries tails 1^s 0 1^infinity for s = m, m+1, ... and keeps the first
    whose full membership row (one genuine germ check per nucleus column)
    is exactly the indicator of K.  Sets other than the subgroup images
    and their complements are not admissible and are rejected.
    """
    ctx = group.ctx
    if kind not in ("H", "Hc"):
        raise ValueError(f"kind must be 'H' or 'Hc', got {kind!r}")
    if not 0 <= j < ctx.k:
        raise ValueError(f"subgroup index {j} outside 0..{ctx.k - 1}")
    if search_depth is None:
        search_depth = default_search_depth(ctx, m)
    if search_depth < m + 2:
        raise ValueError("search depth too small to hold any witness")

    planes = build_hyperplanes(ctx)
    order = ctx.canonical_elements()
    members = tuple(
        x for x in order if (x in planes[j]) == (kind == "H")
    )
    target = tuple(1 if ((x in planes[j]) == (kind == "H")) else 0 for x in order)
    g0 = group.iota(members[0])

    for s in range(m, search_depth):
        tail = Tail("1" * s + "0", "1")
        row = []
        ok = True
        for x, want in zip(order, target):
            got = 1 if germ_equal(group, g0, group.iota(x), tail) else 0
            row.append(got)
            if got != want:
                ok = False
                break
        if ok and len(row) == len(order):
            return RegionPattern(
                kind=kind,
                j=j,
                witness="1" * s + "0",
                membership_row=tuple(row),
                members=members,
            )
    raise RegionSearchError(
        f"no witness for K={kind}{j} within depth {search_depth} (m={m}); "
        "this contradicts the region structure"
    )


@dataclass
class MembershipResult:
    rows: tuple[tuple[int, ...], ...]
    patterns: list[RegionPattern]
    matches_transpose: bool


def membership_matrix(
    group: MultispinalGroup,
    m: int,
    search_depth: int | None = None,
    W: InclusionMatrix | None = None,
) -> MembershipResult:
    """Stack all 2k region rows and assert equality with the inclusion
    transpose under the shared labeling.  Raises MembershipMismatch naming
    the offending (row, column) on disagreement."""
    ctx = group.ctx
    patterns = []
    for kind in ("H", "Hc"):
        for j in range(ctx.k):
            patterns.append(region_pattern(group, m, kind, j, search_depth))
    rows = tuple(p.membership_row for p in patterns)
    if W is None:
        W = build_W(ctx)
    for r, pattern in enumerate(patterns):
        col = r  # region order matches the column order of W
        for i in range(2 * ctx.q):
            if rows[r][i] != W.entry(i, col):
                raise MembershipMismatch(pattern.label, W.row_labels[i])
    return MembershipResult(rows=rows, patterns=patterns, matches_transpose=True)


# -- singular system and magnitude bound ---------------------------------


def singular_system_certificate(
    group: MultispinalGroup,
    m: int,
    use_germ: bool | None = None,
    rank_elimination: bool = True,
) -> dict:
    """Certify that sum_{g in K} c_g = 0 over all 2k admissible K forces
    c = 0, via full column rank 2q of the membership matrix.

    The right-inverse identity W T = I is a complete rank certificate;
    Bareiss elimination is run as well when requested.  The matrix itself
    comes from germ searches when use_germ is set (default: only for
    small fields, n <= 4), otherwise from the inclusion matrix transpose.
    """
    ctx = group.ctx
    if use_germ is None:
        use_germ = ctx.n <= 4
    W = build_W(ctx)
    T = build_T(ctx.q, W)
    source = "inclusion-transpose"
    germ_verified = False
    if use_germ:
        membership_matrix(group, m, W=W)  # raises on mismatch
        source = "germ-search"
        germ_verified = True
    wt_ok = verify_right_inverse(W, T)
    result = {
        "n": ctx.n,
        "m": m,
        "unknowns": 2 * ctx.q,
        "equations": 2 * ctx.k,
        "matrix_source": source,
        "germ_verified": germ_verified,
        "right_inverse_identity": wt_ok,
    }
    rank = None
    if rank_elimination:
        rank = rank_over_Q(W)
        result["rank_over_Q"] = rank
    passed = wt_ok and (rank is None or rank == 2 * ctx.q)
    result["trivial_solution_only"] = passed
    result["pass"] = passed
    return result


def bound_check(ctx: FieldContext, m: int, coeffs) -> dict:
    """Exact region sums for one coefficient vector and the two bounds.

    coeffs is indexed by the canonical element order [0, alpha, ...,
    alpha^(2^n-1) = 1]; entry 0 is the coefficient of the identity and
    must be nonzero.  Verifies max_K |kappa_K| > |c_e| / 2^n and the
    sharper max_K |kappa_K| >= |c_e| * q / (2q - 1) coming from the exact
    column sums of the right-inverse.
    """
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) != 2 * ctx.q:
        raise ValueError(f"need {2 * ctx.q} coefficients, got {len(coeffs)}")
    c_e = coeffs[0]
    if c_e == 0:
        raise ValueError("coefficient of the identity must be nonzero")
    order = ctx.canonical_elements()
    index = {x: i for i, x in enumerate(order)}
    kappa = {}
    for kind, j, members in region_sets(ctx):
        label = f"H{j}" + ("c" if kind == "Hc" else "")
        kappa[label] = sum((coeffs[index[x]] for x in members), start=Fraction(0))
    max_abs = max(abs(v) for v in kappa.values())
    threshold = abs(c_e) / (2 ** ctx.n)
    sharp = abs(c_e) * Fraction(ctx.q, 2 * ctx.q - 1)
    return {
        "m": m,
        "kappa": kappa,
        "max_abs_kappa": max_abs,
        "threshold_2n": threshold,
        "sharp_threshold": sharp,
        "passes_2n_bound": max_abs > threshold,
        "passes_sharp_bound": max_abs >= sharp,
    }


def sample_bound_ratios(ctx: FieldContext, m: int, samples: int, seed: int) -> dict:
    """Seeded random rational vectors, all checked exactly in bulk.

    Numerators are drawn from [-9, 9] (identity coefficient from
    +-[1, 9]), denominators from [1, 9]; scaling by the common
    denominator turns both bound comparisons into int64 comparisons, so
    the whole batch is exact.  Reports the minimum observed ratio
    max_K |kappa| / |c_e| as an exact fraction.
    """
    import numpy as np

    if samples < 1:
        raise ValueError("need at least one sample")
    regions = region_sets(ctx)
    order = ctx.canonical_elements()
    index = {x: i for i, x in enumerate(order)}
    ncols = 2 * ctx.q
    M = np.zeros((len(regions), ncols), dtype=np.int64)
    for r, (_, _, members) in enumerate(regions):
        for x in members:
            M[r, index[x]] = 1

    L = lcm(*range(1, 10))  # 2520
    rng = np.random.default_rng(seed)
    nums = rng.integers(-9, 10, size=(samples, ncols), dtype=np.int64)
    dens = rng.integers(1, 10, size=(samples, ncols), dtype=np.int64)
    ce_mag = rng.integers(1, 10, size=samples, dtype=np.int64)
    ce_sign = rng.integers(0, 2, size=samples, dtype=np.int64) * 2 - 1
    nums[:, 0] = ce_mag * ce_sign

    scaled = nums * (L // dens)  # |entries| <= 9 * 2520
    kappas = M @ scaled.T        # (regions, samples); sums stay far below 2^63
    max_abs = np.abs(kappas).max(axis=0)
    ce_abs = np.abs(scaled[:, 0])
    pass_2n = max_abs * (2 ** ctx.n) > ce_abs
    pass_sharp = max_abs * (2 * ctx.q - 1) >= ce_abs * ctx.q

    # exact minimum of max_abs / ce_abs by cross-multiplication
    best = 0
    for i in range(1, samples):
        if max_abs[i] * ce_abs[best] < max_abs[best] * ce_abs[i]:
            best = i
    min_ratio = Fraction(int(max_abs[best]), int(ce_abs[best]))
    return {
        "m": m,
        "samples": samples,
        "seed": seed,
        "all_pass_2n_bound": bool(pass_2n.all()),
        "all_pass_sharp_bound": bool(pass_sharp.all()),
        "min_ratio": min_ratio,
        "threshold_2n": Fraction(1, 2 ** ctx.n),
        "sharp_threshold": Fraction(ctx.q, 2 * ctx.q - 1),
    }
