"""The self-similar automaton over the binary alphabet for a GF(2^n) field.

States of the nucleus automaton:

    e     identity: fixes both letters, both restrictions e
    a     swaps the letters, both restrictions e
    b(x)  one per nonzero field element x: fixes both letters,
          restriction under '1' is b(alpha*x), under '0' it is
          a when Tr(x) = 1 and e otherwise

b(0) is identified with e at construction.  Group elements are finite
products of states (leftmost factor acts last); since every generator is
an involution, the inverse is the reversed factor sequence.  Equality of
elements is decided semantically by bisimulation: restriction maps a
tuple of nucleus states to a tuple of nucleus states of the same or
smaller length, so the reachable pair space is finite and the worklist
search terminates.  Resolved comparisons are memoized in an insert-only
cache, the only shared mutable state on the object.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .gf2n import FieldContext

STATE_E = ("e",)
STATE_A = ("a",)

_SWAP = {"0": "1", "1": "0"}


def directed_state(x: int):
    """The state b(x); b(0) collapses to the identity."""
    return STATE_E if x == 0 else ("b", x)


@dataclass(frozen=True)
class GroupElement:
    """A word in nucleus states.  == and hash are syntactic (factor tuples);
    semantic equality lives in MultispinalGroup.equal."""

    factors: tuple

    def __len__(self) -> int:
        return len(self.factors)


class MultispinalGroup:
    """Automaton, action, restriction and decidable equality for one field."""

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.identity = GroupElement(())
        self.gen_a = GroupElement((STATE_A,))
        self._eq_memo: dict = {}

    # -- states ---------------------------------------------------------

    @property
    def nucleus_states(self) -> tuple:
        """e, the directed states by power of alpha, then a."""
        ctx = self.ctx
        directed = tuple(("b", ctx.pow_alpha(j)) for j in range(1, ctx.k + 1))
        return (STATE_E,) + directed + (STATE_A,)

    def state_name(self, s) -> str:
        if s == STATE_E:
            return "e"
        if s == STATE_A:
            return "a"
        return f"b{self.ctx.discrete_log[s[1]]}" if s[1] != 1 else f"b{self.ctx.k}"

    def output_swaps(self, s) -> bool:
        return s == STATE_A

    def act_letter_state(self, s, ch: str) -> str:
        return _SWAP[ch] if s == STATE_A else ch

    def restrict_letter_state(self, s, ch: str):
        if s == STATE_E or s == STATE_A:
            return STATE_E
        x = s[1]
        if ch == "1":
            return directed_state(self.ctx.mul_alpha(x))
        return STATE_A if self.ctx.trace(x) else STATE_E

    # -- elements ---------------------------------------------------------

    def element(self, *states) -> GroupElement:
        return GroupElement(tuple(s for s in states if s != STATE_E))

    def iota(self, x: int) -> GroupElement:
        """Embedding of the additive group: field element -> directed state."""
        self.ctx._check(x)
        return self.element(directed_state(x))

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement(g.factors + h.factors)

    def inverse(self, g: GroupElement) -> GroupElement:
        # every nucleus state is an involution, so reversing suffices
        return GroupElement(tuple(reversed(g.factors)))

    def _step(self, factors: tuple, ch: str) -> tuple[tuple, str]:
        """Restrict a factor tuple along one letter; also return the output
        letter.  The rightmost factor touches the letter first."""
        restricted = []
        c = ch
        for s in reversed(factors):
            restricted.append(self.restrict_letter_state(s, c))
            if s == STATE_A:
                c = _SWAP[c]
        restricted.reverse()
        return tuple(t for t in restricted if t != STATE_E), c

    def act(self, g: GroupElement, word: str) -> str:
        """Image of a finite word; length-preserving."""
        factors = g.factors
        out = []
        for ch in word:
            factors, c = self._step(factors, ch)
            out.append(c)
        return "".join(out)

    def act_letter(self, g: GroupElement, ch: str) -> str:
        return self._step(g.factors, ch)[1]

    def restrict(self, g: GroupElement, word: str) -> GroupElement:
        """g|_word, composed letter by letter."""
        factors = g.factors
        for ch in word:
            factors, _ = self._step(factors, ch)
        return GroupElement(factors)

    # -- semantic equality ------------------------------------------------

    def equal(self, g: GroupElement, h: GroupElement) -> bool:
        """True iff g and h act identically on every finite word.

        Coinductive check: breadth-first search over pairs of factor
        tuples, failing on the first output mismatch.  Soundness rests on
        the action being faithful; termination on restriction keeping
        tuples inside a finite set.
        """
        root = (g.factors, h.factors) if g.factors <= h.factors else (h.factors, g.factors)
        memo = self._eq_memo
        cached = memo.get(root)
        if cached is not None:
            return cached
        seen = {root}
        queue = deque([root])
        while queue:
            u, v = queue.popleft()
            for ch in "01":
                u2, cu = self._step(u, ch)
                v2, cv = self._step(v, ch)
                if cu != cv:
                    memo[root] = False
                    memo.setdefault((u, v), False)  # (u, v) is normalized in the queue
                    return False
                pair = (u2, v2) if u2 <= v2 else (v2, u2)
                known = memo.get(pair)
                if known is False:
                    memo[root] = False
                    return False
                if known is None and pair not in seen:
                    seen.add(pair)
                    queue.append(pair)
        for pair in seen:
            memo[pair] = True
        return True

    def in_nucleus(self, g: GroupElement):
        """The nucleus state g is equal to, or None.

        Tries the likely candidate first: products of directed states sum
        their field elements, so the XOR of directed parts (or a, when the
        element swaps) is checked before the full scan.
        """
        swaps = self.act_letter(g, "0") != "0"
        if swaps:
            if self.equal(g, self.gen_a):
                return STATE_A
            return None
        acc = 0
        for s in g.factors:
            if s[0] == "b":
                acc ^= s[1]
        guess = directed_state(acc)
        if self.equal(g, GroupElement(() if guess == STATE_E else (guess,))):
            return guess
        for s in self.nucleus_states:
            if s == STATE_A or s == guess:
                continue
            if self.equal(g, self.element(s)):
                return s
        return None

    # -- nucleus checks -----------------------------------------------------

    def restriction_period(self, s) -> int:
        """Least p >= 1 with s|_(1^p) = s for a directed state.

        The identity (b(0)) has the trivial period 1; a has no period
        under '1' and is rejected.
        """
        if s == STATE_E:
            return 1
        if s == STATE_A:
            raise ValueError("a is not a directed state; restriction leaves it")
        x = s[1]
        y = self.ctx.mul_alpha(x)
        p = 1
        while y != x:
            y = self.ctx.mul_alpha(y)
            p += 1
        return p

    def verify_nucleus(self, depth: int) -> "NucleusReport":
        """Check restriction-closure and contraction of products of pairs.

        For every pair (g, h) of nucleus states, finds the least d such
        that every restriction of g*h at a word of length d is again a
        nucleus element (then all longer words follow by closure).  Fails
        loudly if some pair does not contract within the given depth.
        Only pairs are within finite reach; contraction of longer
        products follows from iterating the pair statement.
        """
        if depth < 1:
            raise ValueError("depth must be >= 1")
        states = self.nucleus_states
        closure_ok = all(
            self.restrict_letter_state(s, ch) in states for s in states for ch in "01"
        )
        max_depth = 0
        failures = []
        pairs = 0
        for g in states:
            for h in states:
                pairs += 1
                frontier = {self.element(g, h).factors}
                d = 0
                while frontier and d <= depth:
                    frontier = {
                        t for t in frontier if self.in_nucleus(GroupElement(t)) is None
                    }
                    if not frontier:
                        break
                    nxt = set()
                    for t in frontier:
                        for ch in "01":
                            nxt.add(self._step(t, ch)[0])
                    frontier = nxt
                    d += 1
                if frontier:
                    failures.append((self.state_name(g), self.state_name(h)))
                else:
                    max_depth = max(max_depth, d)
        return NucleusReport(
            n=self.ctx.n,
            state_count=len(states),
            closure_ok=closure_ok,
            pairs_checked=pairs,
            max_contraction_depth=max_depth,
            depth_limit=depth,
            failures=failures,
        )


@dataclass
class NucleusReport:
    n: int
    state_count: int
    closure_ok: bool
    pairs_checked: int
    max_contraction_depth: int
    depth_limit: int
    failures: list

    @property
    def passed(self) -> bool:
        return self.closure_ok and not self.failures

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "state_count": self.state_count,
            "closure_ok": self.closure_ok,
            "pairs_checked": self.pairs_checked,
            "max_contraction_depth": self.max_contraction_depth,
            "depth_limit": self.depth_limit,
            "failures": [list(f) for f in self.failures],
            "pass": self.passed,
        }
