"""Subshifts of finite type over digit alphabets, cut out by forbidden words.

A finite set F of words over {1..A} determines the set of bi-infinite digit
sequences containing no word of F as a factor.  This module builds the
follower automaton of that subshift -- an Aho-Corasick-style factor
automaton pruned to its maximal bi-infinite live part -- and implements the
"maximized with / minimized with" machinery on top of it:

* ``extremal_tail``: for each automaton state, the one-sided infinite
  continuation with the largest or smallest continued-fraction value,
  found by the alternating greedy rule (continued fractions compare
  lexicographically with flipping direction at each depth) and certified
  by exact comparison against every one-digit deviation;
* ``extremal_extension``: the public wrapper realizing the extremal
  continuation of a concrete prefix;
* ``extremal_lambda0``: exact max/min of the bi-infinite value at a marked
  position of a word over all completions inside the subshift;
* ``sft_max_markov``: the exact supremum of the Markov value over the
  whole subshift, with an attaining witness.

Automata are immutable after construction apart from internal memo tables;
all queries are referentially transparent and instances can be shared.
"""

from __future__ import annotations

from collections import namedtuple

from .cf import cf_periodic_tail
from .exact import sign_of_difference
from .words import EpSeq, as_word, word_str


class EmptySubshift(ValueError):
    """No bi-infinite sequence avoids the forbidden set."""


class DeadPrefix(ValueError):
    """The given word cannot occur inside the subshift."""


MAXIMIZE = 1
MINIMIZE = -1

_GOALS = {
    MAXIMIZE: MAXIMIZE,
    MINIMIZE: MINIMIZE,
    "max": MAXIMIZE,
    "maximize": MAXIMIZE,
    "min": MINIMIZE,
    "minimize": MINIMIZE,
}


def _as_goal(goal):
    try:
        return _GOALS[goal if isinstance(goal, int) else str(goal).lower()]
    except KeyError:
        raise ValueError(f"unknown goal {goal!r}") from None


def _occurs(u, v):
    """True when word u occurs in word v as a factor."""
    n = len(u)
    return any(v[i : i + n] == u for i in range(len(v) - n + 1))


class ForbiddenSet:
    """A reduced set of forbidden digit words over {1..alphabet}.

    Any word containing another forbidden word as a factor is dropped at
    construction (banning the shorter word already bans it), so the stored
    set is an antichain under the factor order.  ``include_transposes``
    closes the set under digit reversal before reducing.
    """

    __slots__ = ("alphabet", "words", "include_transposes", "maxlen")

    def __init__(self, words, alphabet=2, include_transposes=False):
        ws = {as_word(w, alphabet) for w in words}
        if () in ws:
            raise ValueError("the empty word cannot be forbidden")
        if include_transposes:
            ws |= {w[::-1] for w in ws}
        self.alphabet = int(alphabet)
        self.words = frozenset(
            v for v in ws if not any(u != v and _occurs(u, v) for u in ws)
        )
        self.include_transposes = bool(include_transposes)
        self.maxlen = max((len(w) for w in self.words), default=0)

    def transpose(self):
        return ForbiddenSet(
            {w[::-1] for w in self.words}, self.alphabet, self.include_transposes
        )

    def is_clean(self, word):
        """True when the finite word contains no forbidden factor."""
        word = tuple(word)
        return not any(_occurs(f, word) for f in self.words)

    def allows_orbit(self, period):
        """True when the bi-infinite periodic sequence avoids the set."""
        period = as_word(period, self.alphabet)
        reps = 2 + (2 * self.maxlen) // len(period)
        return self.is_clean(period * reps)

    def to_json(self):
        return {
            "alphabet": self.alphabet,
            "include_transposes": self.include_transposes,
            "words": sorted(word_str(w) for w in self.words),
        }

    @staticmethod
    def from_json(obj):
        return ForbiddenSet(
            obj["words"], obj["alphabet"], obj.get("include_transposes", False)
        )

    def __eq__(self, other):
        if not isinstance(other, ForbiddenSet):
            return NotImplemented
        return self.alphabet == other.alphabet and self.words == other.words

    def __hash__(self):
        return hash((self.alphabet, self.words))

    def __repr__(self):
        inner = ",".join(sorted(word_str(w) for w in self.words))
        return f"ForbiddenSet({{{inner}}}, alphabet={self.alphabet})"


def build_automaton(f):
    """Follower automaton of the subshift avoiding ``f``, pruned to the
    maximal subautomaton in which every state lies on a bi-infinite path.

    States are the proper prefixes of forbidden words (the classical
    "longest suffix of the history that could still grow into a forbidden
    word"); a transition completing a forbidden word is dead.  Iteratively
    removing states with no live successor or no live predecessor leaves
    exactly the states through which a bi-infinite legal walk passes.
    """
    digits = range(1, f.alphabet + 1)
    nodes = {w[:i] for w in f.words for i in range(len(w) + 1)}
    nodes.add(())
    forbidden = f.words
    proper = sorted((w for w in nodes if w not in forbidden), key=lambda w: (len(w), w))

    def step(q, d):
        s = q + (d,)
        while s not in nodes:
            s = s[1:]
        return None if s in forbidden else s

    trans = {q: {d: r for d in digits if (r := step(q, d)) is not None} for q in proper}

    alive = set(proper)
    while True:
        targets = {r for q in alive for r in trans[q].values() if r in alive}
        keep = {
            q
            for q in alive
            if q in targets and any(r in alive for r in trans[q].values())
        }
        if keep == alive:
            break
        alive = keep
    if not alive:
        raise EmptySubshift(f"no bi-infinite sequence avoids {f!r}")

    states = sorted(alive, key=lambda w: (len(w), w))
    index = {w: i for i, w in enumerate(states)}
    table = tuple(
        {d: index[r] for d, r in trans[q].items() if r in alive} for q in states
    )
    return SftAutomaton(f, states, table)


class SftAutomaton:
    """Pruned follower automaton; built via :func:`build_automaton`."""

    __slots__ = (
        "forbidden",
        "alphabet",
        "maxlen",
        "_states",
        "_trans",
        "_transpose",
        "_tails",
        "_tail_values",
    )

    def __init__(self, forbidden, states, table):
        self.forbidden = forbidden
        self.alphabet = forbidden.alphabet
        self.maxlen = forbidden.maxlen
        self._states = tuple(states)
        self._trans = table
        self._transpose = None
        self._tails = {}
        self._tail_values = {}

    @property
    def n_states(self):
        return len(self._states)

    def state_word(self, i):
        return self._states[i]

    def transitions(self, i):
        """Live transitions out of state ``i`` as a digit -> state dict."""
        return dict(self._trans[i])

    @property
    def transpose(self):
        """Automaton of the digit-reversed subshift (built once, linked back)."""
        if self._transpose is None:
            other = build_automaton(self.forbidden.transpose())
            other._transpose = self
            self._transpose = other
        return self._transpose

    # -- factor language ---------------------------------------------------

    def end_states(self, word):
        """States reachable after reading ``word`` from some live state.

        Empty iff the word is not a factor of the subshift: every live
        state has arbitrarily long live histories and futures, so a word
        embeds bi-infinitely exactly when some live run survives it.
        """
        word = as_word(word, self.alphabet)
        cur = frozenset(range(len(self._states)))
        for d in word:
            cur = frozenset(
                t for q in cur if (t := self._trans[q].get(d)) is not None
            )
            if not cur:
                break
        return cur

    def is_factor(self, word):
        return bool(self.end_states(word))

    def iter_factors(self, length):
        """All distinct factors of the given length, lexicographically."""
        digits = range(1, self.alphabet + 1)
        trans = self._trans

        def rec(states, word):
            if len(word) == length:
                yield word
                return
            for d in digits:
                nxt = frozenset(
                    t for q in states if (t := trans[q].get(d)) is not None
                )
                if nxt:
                    yield from rec(nxt, word + (d,))

        yield from rec(frozenset(range(len(self._states))), ())

    def count_factors(self, length):
        digits = range(1, self.alphabet + 1)
        trans = self._trans
        memo = {}

        def count(states, m):
            if m == 0:
                return 1
            key = (states, m)
            if key not in memo:
                total = 0
                for d in digits:
                    nxt = frozenset(
                        t for q in states if (t := trans[q].get(d)) is not None
                    )
                    if nxt:
                        total += count(nxt, m - 1)
                memo[key] = total
            return memo[key]

        return count(frozenset(range(len(self._states))), length)

    # -- extremal tails ----------------------------------------------------
    #
    # Among infinite digit tails t1 t2 t3 ... admissible from a state, the
    # continued fraction [0; t1, t2, ...] is maximized by taking the
    # SMALLEST live digit at the first position (values with different
    # first digits lie in disjoint intervals (1/(d+1), 1/d)), and then
    # recursively MINIMIZING the continuation, flipping direction at every
    # depth.  The walk is deterministic on (state, direction), so a cycle
    # appears within 2 * n_states steps and the tail is eventually periodic.

    def _greedy_walk(self, state, goal):
        """(preperiod, period, per-step (state, goal) list) of the greedy tail."""
        path, meta = [], []
        seen = {(state, goal): 0}
        cur, g = state, goal
        while True:
            ds = self._trans[cur]
            d = min(ds) if g == MAXIMIZE else max(ds)
            meta.append((cur, g))
            path.append(d)
            cur, g = ds[d], -g
            pos = seen.get((cur, g))
            if pos is not None:
                if len(path) > 2 * len(self._states):
                    raise RuntimeError("greedy tail failed to cycle in 2N steps")
                return tuple(path[:pos]), tuple(path[pos:]), meta
            seen[(cur, g)] = len(path)

    def verify_tail(self, state, goal):
        """Exchange certificate: the greedy tail from (state, goal) beats
        every single-digit deviation followed by the greedy rule, compared
        exactly.  Raises RuntimeError on failure (which would indicate an
        implementation bug, not a mathematical possibility)."""
        goal = _as_goal(goal)
        pre, per, meta = self._greedy_walk(state, goal)
        stream = pre + per
        base = cf_periodic_tail(pre, per, leading=0)
        for j, (q, _g) in enumerate(meta):
            for d in self._trans[q]:
                if d == stream[j]:
                    continue
                alt_pre, alt_per, _ = self._greedy_walk(self._trans[q][d], -_g)
                alt = cf_periodic_tail(stream[:j] + (d,) + alt_pre, alt_per, leading=0)
                if goal * sign_of_difference(base, alt) < 0:
                    raise RuntimeError(
                        f"exchange certificate failed at step {j} "
                        f"(state {self._states[q]}, digit {d})"
                    )
        return pre, per

    def extremal_tail(self, state, goal):
        """(preperiod, period) of the extremal [0; tail] from ``state``.

        ``goal`` is MAXIMIZE/MINIMIZE for the value [0; t1, t2, ...].
        Verified on first computation, then memoized.
        """
        goal = _as_goal(goal)
        key = (state, goal)
        if key not in self._tails:
            self._tails[key] = self.verify_tail(state, goal)
        return self._tails[key]

    def tail_value(self, state, goal):
        """Exact value of the extremal [0; tail] from ``state``."""
        goal = _as_goal(goal)
        key = (state, goal)
        if key not in self._tail_values:
            pre, per = self.extremal_tail(state, goal)
            self._tail_values[key] = cf_periodic_tail(pre, per, leading=0)
        return self._tail_values[key]

    def __repr__(self):
        return (
            f"SftAutomaton({self.forbidden!r}, {len(self._states)} states)"
        )


# ---------------------------------------------------------------------------
# extremal extensions of a concrete prefix
# ---------------------------------------------------------------------------

ExtremalTail = namedtuple("ExtremalTail", "pre per value")
ExtremalTail.__doc__ += """: eventually periodic extension digits.

``pre`` and ``per`` are the digits appended after the prefix (reading
outward: rightward for side='right', leftward for side='left'); ``value``
is the exact continued-fraction value of the full extended expansion.
"""


def _tail_goal(goal, fixed_digits):
    """Direction for [0; tail] after ``fixed_digits`` digits inside [0; ...]."""
    return goal if fixed_digits % 2 == 0 else -goal


def _extend_candidates(a, word, goal, fixed_in_zero_part, leading, head):
    """Extremal (pre, per, value) over end states of ``word`` in ``a``.

    ``fixed_in_zero_part`` = number of digits preceding the tail inside the
    [0; ...] bracket; ``leading``/``head`` describe how to evaluate the full
    expansion: value = [leading; head..., tail...].
    """
    ends = a.end_states(word)
    if not ends:
        raise DeadPrefix(f"{word_str(word)} is not a factor of the subshift")
    gt = _tail_goal(goal, fixed_in_zero_part)
    best = None
    for e in sorted(ends):
        pre, per = a.extremal_tail(e, gt)
        val = cf_periodic_tail(head + pre, per, leading=leading)
        if best is None or goal * sign_of_difference(val, best[2]) > 0:
            best = (pre, per, val, e, gt)
    return best


def extremal_extension(prefix, a, side="right", goal="maximize", form="integer"):
    """Extremal live continuation of ``prefix`` in the subshift.

    ``form`` fixes the continued-fraction reading of the prefix digits
    p1..pk: "integer" evaluates [p1; p2, ..., pk, tail] (the first digit is
    the integer part, as in a forward value at a sequence position);
    "fractional" evaluates [0; p1, ..., pk, tail] (as in a backward value).

    ``side='left'`` extends leftward: the prefix digits are then given in
    outward order (innermost digit first, exactly as they appear in the
    expansion [0; b1, b2, ...] of a backward value), and the returned
    digits continue the history outward.  Since the outward reading of a
    leftward fragment is the reversal of its sequence order, this is a
    plain rightward extension on the transposed automaton.

    The greedy tail is re-certified against all one-digit deviations on
    every call.  Raises DeadPrefix when the prefix is not a factor.
    """
    goal = _as_goal(goal)
    word = as_word(prefix, a.alphabet)
    if not word:
        raise ValueError("empty prefix")
    if side not in ("left", "right"):
        raise ValueError(f"unknown side {side!r}")
    aa = a.transpose if side == "left" else a
    if form == "integer":
        fixed, leading, head = len(word) - 1, word[0], word[1:]
    elif form == "fractional":
        fixed, leading, head = len(word), 0, word
    else:
        raise ValueError(f"unknown form {form!r}")
    pre, per, val, end, gt = _extend_candidates(aa, word, goal, fixed, leading, head)
    aa.verify_tail(end, gt)
    return ExtremalTail(pre, per, val)


# ---------------------------------------------------------------------------
# exact extremal bi-infinite value at a marked position
# ---------------------------------------------------------------------------

Lambda0Extremum = namedtuple("Lambda0Extremum", "value witness")


def extremal_lambda0(a, word, mark, goal):
    """Exact max/min of the value at position ``mark`` of ``word`` over all
    bi-infinite completions inside the subshift of ``a``.

    Forward and backward sides are bounded independently through the
    extremal tail tables (forward on ``a``, backward on the transposed
    automaton), which always gives a valid bound; the two extremal tails
    are then combined and the junction window is scanned for forbidden
    factors.  A clean scan certifies attainment.  A dirty scan is only
    possible while the word is shorter than the longest forbidden word
    (any straddling factor must contain the whole word), in which case the
    word is extended by one digit on its shorter side in every live way
    and the extremum is taken over the children.

    Returns (value, witness EpSeq); the witness attains the value at its
    marked position.
    """
    goal = _as_goal(goal)
    word = as_word(word, a.alphabet)
    if not 0 <= mark < len(word):
        raise ValueError("mark outside word")

    after = word[mark:]
    f_pre, f_per, f_val, _, _ = _extend_candidates(
        a, word, goal, len(after) - 1, after[0], after[1:]
    )
    before = word[:mark][::-1]
    b_pre, b_per, b_val, _, _ = _extend_candidates(
        a.transpose, word[::-1], goal, len(before), 0, before
    )
    total = f_val + b_val

    if a.maxlen:
        need = a.maxlen
        right = (f_pre + f_per * (1 + need // len(f_per)))[:need]
        left = (b_pre + b_per * (1 + need // len(b_per)))[:need]
        window = tuple(reversed(left)) + word + right
        if not a.forbidden.is_clean(window):
            # independently extremal tails clash across the word; refine
            best = None
            left_side = mark <= len(word) - 1 - mark
            for d in range(1, a.alphabet + 1):
                cand = ((d,) + word, mark + 1) if left_side else (word + (d,), mark)
                if not a.end_states(cand[0]):
                    continue
                v, wit = extremal_lambda0(a, cand[0], cand[1], goal)
                if best is None or goal * sign_of_difference(v, best[0]) > 0:
                    best = (v, wit)
            return Lambda0Extremum(*best)

    witness = EpSeq(
        tuple(reversed(b_per)),
        tuple(reversed(b_pre)) + word + f_pre,
        len(b_pre) + mark,
        f_per,
    )
    return Lambda0Extremum(total, witness)


MaxMarkov = namedtuple("MaxMarkov", "value witness")


def sft_max_markov(a):
    """Exact supremum of the Markov value over the subshift, with witness.

    The sup over all sequences and all positions of the positional value is
    itself a Markov value (the maximizing completion attains it at the
    marked position, and no position of any sequence exceeds it), so it
    equals the max of extremal_lambda0 over single marked letters.
    """
    best = None
    for d in range(1, a.alphabet + 1):
        try:
            v, wit = extremal_lambda0(a, (d,), 0, MAXIMIZE)
        except DeadPrefix:
            continue
        if best is None or sign_of_difference(v, best[0]) > 0:
            best = (v, wit)
    if best is None:
        raise EmptySubshift("automaton has no live letter")
    return MaxMarkov(*best)
