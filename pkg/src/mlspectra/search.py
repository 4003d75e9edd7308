"""Certified search over subshift completions.

This module answers global questions about Markov values of bi-infinite
sequences ranging over a subshift of finite type: how small or large the
value at one marked position can be (:func:`bound_lambda0`), whether every
sequence containing a given factor has Markov value above a threshold
(:func:`factor_floor`, :func:`verify_forbidden_lemma`), what the exact
minimum Markov value over all sequences containing a factor is
(:func:`min_markov_containing`), and whether an open interval contains no
Markov value at all (:func:`verify_gap`).

All verdicts are exact.  Floating point appears only as a prefilter for
choosing which positions or branches to examine first; every comparison
that a result depends on is settled with :func:`~.exact.sign_of_difference`
on quadratic-surd arithmetic.

The searches share one engine: a branch grows a finite context outward one
digit at a time, each node is bounded by relaxing every position of the
context against the extremal legal tails on both sides, and branches that
follow an eventually periodic sequence are closed by detecting a repeated
(state-set, window) key and certifying every one-digit deviation from the
repeating blocks separately.  Branch exploration touches no shared mutable
state other than a monotone incumbent, so subtrees may be explored in any
order or stolen by parallel workers without affecting soundness.
"""

from fractions import Fraction
from functools import lru_cache
import heapq
import itertools

from .cf import markov_value
from .exact import decimal_render, sign_of_difference
from .sft import (
    MAXIMIZE,
    MINIMIZE,
    DeadPrefix,
    ForbiddenSet,
    build_automaton,
    extremal_lambda0,
    _tail_goal,
)
from .words import EpSeq, MarkedWord, as_word, word_str


class CertificateFailed(ValueError):
    """A word's certified floor falls short of the requested threshold."""

    def __init__(self, word, bound, threshold, witness, certificates):
        self.word = word
        self.bound = bound
        self.threshold = threshold
        self.witness = witness
        self.certificates = certificates
        super().__init__(
            "floor %s for word %s is below threshold %s (witness %s)"
            % (decimal_render(bound, 12), word_str(word), threshold, witness)
        )


class GapRefuted(ValueError):
    """A sequence with Markov value strictly inside the claimed gap."""

    def __init__(self, witness, value):
        self.witness = witness
        self.value = value
        super().__init__(
            "Markov value %s of %s lies inside the interval"
            % (decimal_render(value, 12), witness)
        )


class DepthExceeded(RuntimeError):
    """The search hit its depth or node budget before deciding.

    Carries the best rigorous two-sided information available at the point
    of failure: ``lower`` and ``upper`` bound the undecided quantity and
    ``witness`` attains ``upper`` when one is known.
    """

    def __init__(self, message, lower=None, upper=None, witness=None):
        self.lower = lower
        self.upper = upper
        self.witness = witness
        super().__init__(message)


# ---------------------------------------------------------------------------
# shared plumbing


@lru_cache(maxsize=None)
def _automaton(f):
    return build_automaton(f)


def _as_threshold(t):
    """Coerce a threshold to an exactly comparable number.

    Decimal strings become :class:`~fractions.Fraction` so that thresholds
    quoted to a fixed number of digits are compared as written.
    """
    if isinstance(t, str):
        return Fraction(t)
    if isinstance(t, float):
        raise TypeError("pass thresholds as strings or Fractions, not floats")
    return t


def _as_marked(w, alphabet):
    """Coerce ``w`` to a MarkedWord; accepts "212*2"-style strings."""
    if isinstance(w, MarkedWord):
        return w
    if isinstance(w, str):
        if "*" not in w:
            raise ValueError("mark a position with '*' after its digit: %r" % (w,))
        pos = w.index("*")
        if pos == 0:
            raise ValueError("'*' must follow the marked digit: %r" % (w,))
        return MarkedWord(as_word(w.replace("*", ""), alphabet), pos - 1)
    raise TypeError("expected a MarkedWord or a starred string, got %r" % (w,))


def _exact_json(x):
    """JSON encoding of an exact value as a rational plus surd terms."""
    if isinstance(x, (int, Fraction)):
        rat, terms = Fraction(x), ()
    else:
        rat, terms = x.as_terms()
    return {
        "rational": [str(rat.numerator), str(rat.denominator)],
        "surd_terms": [
            [str(c.numerator), str(c.denominator), str(d)] for c, d in terms
        ],
    }


def _mm(m1, m2):
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    return (
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
    )


_MAT_ID = (1, 0, 0, 1)


def _digit_mat(d):
    return (d, 1, 1, 0)


@lru_cache(maxsize=None)
def _tail_float(a, state, goal):
    return float(a.tail_value(state, goal))


@lru_cache(maxsize=None)
def _tail_agg(a, states, goal):
    """Extremal [0; tail] value over live tails from any state in ``states``."""
    best_f = None
    for q in states:
        fv = _tail_float(a, q, goal)
        if best_f is None or (fv > best_f if goal == MAXIMIZE else fv < best_f):
            best_f = fv
    best = None
    for q in sorted(states):
        if abs(_tail_float(a, q, goal) - best_f) >= 1e-9:
            continue
        v = a.tail_value(q, goal)
        if best is None or goal * sign_of_difference(v, best) > 0:
            best = v
    return best


class _Info(object):
    """Per-context node data: exact relaxed bound and branching hints."""

    __slots__ = ("value", "khat", "side", "rset", "lset")

    def __init__(self, value, khat, side, rset, lset):
        self.value = value
        self.khat = khat
        self.side = side
        self.rset = rset
        self.lset = lset


def _analyze(a, at, word):
    """Exact lower bound for sup_k lambda_k over completions of ``word``.

    Relaxes each position independently: the two sides of the position are
    completed by extremal legal tails chosen from the end-state sets of the
    whole context, with tail goals alternating by distance to match how a
    continued-fraction value responds to its partial quotients.  The bound
    is the max over positions of these per-position minima; it is attained
    or undercut by every completion, never overshot.

    Returns ``None`` when ``word`` is not a factor of the subshift.
    Positions are screened with floats, then every candidate within 1e-6 of
    the float max (float error here is ~1e-12) is settled exactly.
    """
    rset = a.end_states(word)
    if not rset:
        return None
    lset = at.end_states(word[::-1])
    if not lset:
        return None
    n = len(word)

    suff = [None] * (n + 1)
    suff[n] = _MAT_ID
    for k in range(n - 1, -1, -1):
        suff[k] = _mm(_digit_mat(word[k]), suff[k + 1])
    pref = [_MAT_ID]
    for k in range(1, n + 1):
        pref.append(_mm(_digit_mat(word[k - 1]), pref[k - 1]))

    fwd_x = {
        g: 1.0 / float(_tail_agg(a, rset, g)) for g in (MAXIMIZE, MINIMIZE)
    }
    bwd_x = {
        g: 1.0 / float(_tail_agg(at, lset, g)) for g in (MAXIMIZE, MINIMIZE)
    }

    lo_f = []
    for k in range(n):
        A, B, C, D = suff[k]
        x = fwd_x[_tail_goal(MINIMIZE, n - 1 - k)]
        fwd = (A * x + B) / (C * x + D)
        A, B, C, D = pref[k]
        x = bwd_x[_tail_goal(MINIMIZE, k)]
        bwd = (C * x + D) / (A * x + B)
        lo_f.append(fwd + bwd)
    peak = max(lo_f)

    def exact_lo(k, goal):
        y = _tail_agg(a, rset, _tail_goal(goal, n - 1 - k))
        v = y.invert().mobius(*suff[k])
        yb = _tail_agg(at, lset, _tail_goal(goal, k))
        A, B, C, D = pref[k]
        return v + yb.invert().mobius(C, D, A, B)

    best = None
    khat = None
    for k in range(n):
        if lo_f[k] < peak - 1e-6:
            continue
        v = exact_lo(k, MINIMIZE)
        if best is None or sign_of_difference(v, best) > 0:
            best, khat = v, k

    width_f = _fwd_width(a, rset, suff[khat], n - 1 - khat)
    width_b = _bwd_width(at, lset, pref[khat], khat)
    side = "right" if sign_of_difference(width_f, width_b) >= 0 else "left"
    return _Info(best, khat, side, rset, lset)


def _fwd_width(a, rset, mat, fixed):
    lo = _tail_agg(a, rset, _tail_goal(MINIMIZE, fixed)).invert().mobius(*mat)
    hi = _tail_agg(a, rset, _tail_goal(MAXIMIZE, fixed)).invert().mobius(*mat)
    return hi - lo


def _bwd_width(at, lset, mat, fixed):
    A, B, C, D = mat
    lo = _tail_agg(at, lset, _tail_goal(MINIMIZE, fixed)).invert().mobius(C, D, A, B)
    hi = _tail_agg(at, lset, _tail_goal(MAXIMIZE, fixed)).invert().mobius(C, D, A, B)
    return hi - lo


def _children(a, at, word, lpad, side):
    """Live one-digit extensions of ``word`` on ``side``, with their node data."""
    out = []
    for d in range(1, a.alphabet + 1):
        if side == "right":
            w2, lp2 = word + (d,), lpad
        else:
            w2, lp2 = (d,) + word, lpad + 1
        info = _analyze(a, at, w2)
        if info is not None:
            out.append((w2, lp2, info))
    return out


def _chain_blocks(word1, lpad1, word2, lpad2):
    """Left/right blocks accumulated between two snapshots of a chain."""
    left = word2[: lpad2 - lpad1]
    right = word2[(lpad2 - lpad1) + len(word1):]
    return left, right


def _seq_clean(f, s):
    """Whether the eventually periodic sequence ``s`` avoids ``f`` everywhere."""
    if f.maxlen == 0:
        return True
    lo = s.start - 2 * len(s.left) - f.maxlen
    hi = s.end + 2 * len(s.right) + f.maxlen
    return f.is_clean(s.digits_range(lo, hi))


def _deviation_words(left, right, alphabet):
    """Finite words covering every one-digit deviation from repeating blocks.

    A sequence that repeats ``right`` forever after some point and first
    deviates at offset ``i`` of some repetition contains
    ``right + right[:i] + (d,)``; symmetrically on the left.  Yields the
    words in sequence order.
    """
    for i in range(len(right)):
        for d in range(1, alphabet + 1):
            if d != right[i]:
                yield right + right[:i] + (d,)
    for i in range(len(left)):
        keep = left[len(left) - 1 - i]
        for d in range(1, alphabet + 1):
            if d != keep:
                yield (d,) + left[len(left) - i:] + left


# ---------------------------------------------------------------------------
# position bounds and containment floors


class Lambda0Bounds(tuple):
    """Exact extremal values at a marked position, as a (min, max) pair."""

    __slots__ = ()

    def __new__(cls, mn, mx):
        return tuple.__new__(cls, (mn, mx))

    @property
    def min(self):
        return self[0]

    @property
    def max(self):
        return self[1]


def bound_lambda0(w, f):
    """Exact min and max of the value at the marked position of ``w``.

    ``w`` is a :class:`~.words.MarkedWord` or a starred string like
    ``"33*3"`` (the star follows the marked digit); ``f`` is the
    :class:`~.sft.ForbiddenSet` constraining completions.  Both extrema are
    attained by eventually periodic completions and returned as exact
    values.  Raises :class:`~.sft.DeadPrefix` if ``w`` is not a factor of
    the subshift.
    """
    a = _automaton(f)
    mw = _as_marked(w, f.alphabet)
    mn, _ = extremal_lambda0(a, mw.word, mw.mark, MINIMIZE)
    mx, _ = extremal_lambda0(a, mw.word, mw.mark, MAXIMIZE)
    return Lambda0Bounds(mn, mx)


@lru_cache(maxsize=None)
def _floor_at(a, word, k):
    return extremal_lambda0(a, word, k, MINIMIZE)


@lru_cache(maxsize=None)
def _word_floor(a, word):
    """(value, position, witness): the best single-position floor of ``word``."""
    best = None
    for k in range(len(word)):
        v, wit = _floor_at(a, word, k)
        if best is None or sign_of_difference(v, best[0]) > 0:
            best = (v, k, wit)
    return best


def factor_floor(factor, f):
    """Certified floor for the Markov value of sequences containing ``factor``.

    Returns ``(value, position, witness)``: every bi-infinite sequence of
    the subshift containing ``factor`` has Markov value >= ``value``,
    because the value at ``position`` alone cannot be pushed below it; the
    ``witness`` completion attains it there.  Raises
    :class:`~.sft.DeadPrefix` if ``factor`` is not a factor of the subshift.
    """
    a = _automaton(f)
    word = as_word(factor, f.alphabet)
    if not a.is_factor(word):
        raise DeadPrefix("%s is not a factor of the subshift" % word_str(word))
    return _word_floor(a, word)


class _Excluder(object):
    """Certifies "every sequence containing W has Markov value >= t".

    Tries the single-position floor first and falls back to splitting on
    the next digit to the right or to the left, recursively.  Verdicts are
    cached; a certificate stays valid for any smaller threshold and a
    failure stays decisive for any larger one, which matches how the
    minimum-Markov search lowers its incumbent over time.
    """

    def __init__(self, a):
        self.a = a
        self._hits = {}
        self._misses = {}

    def check(self, word, threshold, depth=8, budget=None):
        got = self._hits.get(word)
        if got is not None and sign_of_difference(threshold, got[0]) <= 0:
            return got[1]
        miss = self._misses.get(word)
        if (miss is not None and depth <= miss[1]
                and sign_of_difference(threshold, miss[0]) >= 0):
            return None
        fuel = [budget if budget is not None else (1 << 62)]
        cert = self._check(word, threshold, depth, set(), fuel)
        if cert is None:
            if (miss is None or depth > miss[1]
                    or sign_of_difference(threshold, miss[0]) < 0):
                self._misses[word] = (threshold, depth)
        else:
            self._hits[word] = (threshold, cert)
        return cert

    def _check(self, word, threshold, depth, busy, fuel):
        fuel[0] -= 1
        if fuel[0] < 0 or word in busy:
            return None
        a = self.a
        if not a.is_factor(word):
            return {"word": word_str(word), "verdict": "dead"}
        got = self._hits.get(word)
        if got is not None and sign_of_difference(threshold, got[0]) <= 0:
            return got[1]
        v, k, wit = _word_floor(a, word)
        if sign_of_difference(v, threshold) >= 0:
            cert = {
                "word": word_str(word),
                "verdict": "floor",
                "position": k,
                "floor": decimal_render(v, 12),
                "floor_exact": _exact_json(v),
                "completion": str(wit),
            }
            self._hits[word] = (threshold, cert)
            return cert
        if depth <= 0:
            return None
        busy.add(word)
        try:
            for side in ("right", "left"):
                cases = []
                for d in range(1, a.alphabet + 1):
                    w2 = word + (d,) if side == "right" else (d,) + word
                    sub = self._check(w2, threshold, depth - 1, busy, fuel)
                    if sub is None:
                        cases = None
                        break
                    cases.append(sub)
                if cases is not None:
                    cert = {
                        "word": word_str(word),
                        "verdict": "split",
                        "side": side,
                        "cases": cases,
                    }
                    self._hits[word] = (threshold, cert)
                    return cert
        finally:
            busy.discard(word)
        return None


# ---------------------------------------------------------------------------
# forbidden-word lemmas


class WordCertificate(object):
    """Per-word certificate produced by :func:`verify_forbidden_lemma`."""

    __slots__ = ("word", "threshold", "bound", "position", "completion",
                 "satisfied", "proof")

    def __init__(self, word, threshold, bound, position, completion,
                 satisfied, proof):
        self.word = word
        self.threshold = threshold
        self.bound = bound
        self.position = position
        self.completion = completion
        self.satisfied = satisfied
        self.proof = proof

    def __repr__(self):
        return "WordCertificate(%s, bound=%s, satisfied=%r)" % (
            word_str(self.word), decimal_render(self.bound, 10), self.satisfied)

    def to_json(self):
        return {
            "word": word_str(self.word),
            "threshold": str(self.threshold),
            "bound": decimal_render(self.bound, 12),
            "bound_exact": _exact_json(self.bound),
            "position": self.position,
            "completion": str(self.completion),
            "verdict": "certified" if self.satisfied else "failed",
            "proof": self.proof,
        }


def verify_forbidden_lemma(words, f_context, threshold, *, split_depth=6):
    """Certify that each word forces Markov values >= ``threshold``.

    For every word in ``words``, establishes that any bi-infinite sequence
    of the subshift of ``f_context`` containing the word has Markov value
    at least ``threshold`` (so the words may all be forbidden when studying
    values below it).  Returns a list of :class:`WordCertificate`, one per
    word in order.  Decimal-string thresholds are compared exactly as
    written.  Raises :class:`CertificateFailed` on the first word whose
    floor cannot be pushed to the threshold, carrying the extremal
    completion that witnesses the shortfall.
    """
    t = _as_threshold(threshold)
    a = _automaton(f_context)
    excl = _Excluder(a)
    out = []
    for w in words:
        word = as_word(w, f_context.alphabet)
        if not a.is_factor(word):
            raise DeadPrefix("%s is not a factor of the subshift" % word_str(word))
        v, k, wit = _word_floor(a, word)
        if sign_of_difference(v, t) >= 0:
            out.append(WordCertificate(word, threshold, v, k, wit, True,
                                       {"verdict": "floor"}))
            continue
        cert = excl.check(word, t, split_depth)
        if cert is not None:
            out.append(WordCertificate(word, threshold, v, k, wit, True, cert))
            continue
        failed = WordCertificate(word, threshold, v, k, wit, False,
                                 {"verdict": "failed"})
        raise CertificateFailed(word, v, threshold, wit, out + [failed])
    return out


# ---------------------------------------------------------------------------
# minimum Markov value over sequences containing a factor


class MinMarkov(tuple):
    """Exact minimum Markov value and an attaining sequence."""

    __slots__ = ()

    def __new__(cls, value, witness):
        return tuple.__new__(cls, (value, witness))

    @property
    def value(self):
        return self[0]

    @property
    def witness(self):
        return self[1]


def _closure_key(info, word, lpad, window):
    return (info.rset, info.lset, word[:window], word[-window:])


def _greedy_min_chain(a, at, f, word, lpad, *, cap=400):
    """Heuristic incumbent: follow minimal-bound children, close on repeats.

    Returns the best ``(value, sequence)`` found among periodic closures of
    the greedy chain, or ``None``.  Used only to seed the incumbent; plays
    no role in soundness.
    """
    info = _analyze(a, at, word)
    if info is None:
        return None
    window = max(f.maxlen, 12)
    seen = {}
    best = None
    for step in range(cap):
        key = _closure_key(info, word, lpad, window)
        if key in seen:
            w1, lp1 = seen[key]
            left, right = _chain_blocks(w1, lp1, word, lpad)
            if (left and right and word[:len(left)] == left
                    and word[-len(right):] == right):
                s = EpSeq(left, word, lpad, right)
                if _seq_clean(f, s):
                    v = markov_value(s).value
                    if best is None or sign_of_difference(v, best[0]) < 0:
                        best = (v, s)
        else:
            seen[key] = (word, lpad)
        kids = _children(a, at, word, lpad, info.side)
        if not kids:
            break
        word, lpad, info = min(kids, key=lambda k: float(k[2].value))
    return best


def min_markov_containing(factor, f, *, max_depth=120, max_nodes=200000):
    """Exact minimum Markov value over subshift sequences containing ``factor``.

    Returns :class:`MinMarkov` ``(value, witness)`` where ``witness`` is an
    eventually periodic sequence containing ``factor`` whose Markov value
    equals ``value`` exactly.  (The minimum is always attained: Markov
    value is lower semicontinuous on the compact set of sequences carrying
    the factor at a fixed position.)

    Branch and bound over finite contexts around the factor: nodes are
    bounded by :func:`_analyze`, extended on the side with the wider value
    enclosure at the dominating position (ties extend right), and chains
    that follow an eventually periodic sequence are closed by certifying
    every one-digit deviation from the repeating blocks via the containment
    floors of :class:`_Excluder`.  Raises :class:`~.sft.DeadPrefix` if
    ``factor`` is not a factor of the subshift, and :class:`DepthExceeded`
    (carrying the best rigorous enclosure) if a branch needs more than
    ``max_depth`` digits on one side of the factor.
    """
    a = _automaton(f)
    at = a.transpose
    word0 = as_word(factor, f.alphabet)
    info0 = _analyze(a, at, word0)
    if info0 is None:
        raise DeadPrefix("%s is not a factor of the subshift" % word_str(word0))
    excl = _Excluder(a)
    window = max(f.maxlen, 12)
    best = [None, None]

    def consider(cand):
        if cand is None:
            return
        v, s = cand
        if not s.contains_factor(word0):
            return
        if best[0] is None or sign_of_difference(v, best[0]) < 0:
            best[0], best[1] = v, s

    wit0 = _floor_at(a, word0, info0.khat)[1]
    consider((markov_value(wit0).value, wit0))
    consider(_greedy_min_chain(a, at, f, word0, 0))

    counter = itertools.count()
    heap = [(float(info0.value), next(counter), word0, 0, info0, ({}, 0))]
    nodes = 0

    def open_lower(extra):
        vals = [e[4].value for e in heap] + list(extra)
        lo = vals[0]
        for v in vals[1:]:
            if sign_of_difference(v, lo) < 0:
                lo = v
        return lo

    while heap:
        _, _, word, lpad, info, chain = heapq.heappop(heap)
        if sign_of_difference(info.value, best[0]) >= 0:
            continue
        # chain snapshots survive branch points: each pushed child inherits
        # a copy of the closure keys seen along its root path
        seen, step = dict(chain[0]), chain[1]
        while True:
            nodes += 1
            if nodes > max_nodes:
                raise DepthExceeded(
                    "node budget exhausted after %d nodes" % max_nodes,
                    lower=open_lower([info.value]), upper=best[0],
                    witness=best[1])
            if lpad > max_depth or len(word) - lpad - len(word0) > max_depth:
                raise DepthExceeded(
                    "context grew past %d digits on one side" % max_depth,
                    lower=open_lower([info.value]), upper=best[0],
                    witness=best[1])
            key = _closure_key(info, word, lpad, window)
            closed = False
            if key in seen:
                w1, lp1 = seen[key]
                left, right = _chain_blocks(w1, lp1, word, lpad)
                if (left and right and word[:len(left)] == left
                        and word[-len(right):] == right):
                    s = EpSeq(left, word, lpad, right)
                    if _seq_clean(f, s):
                        consider((markov_value(s).value, s))
                        closed = all(
                            excl.check(u, best[0]) is not None
                            for u in _deviation_words(left, right, f.alphabet))
            else:
                seen[key] = (word, lpad)
            if closed:
                break
            kids = [
                (w2, lp2, ci)
                for w2, lp2, ci in _children(a, at, word, lpad, info.side)
                if sign_of_difference(ci.value, best[0]) < 0
            ]
            if not kids:
                break
            if len(kids) == 1:
                word, lpad, info = kids[0]
                step += 1
                continue
            for w2, lp2, ci in kids:
                heapq.heappush(heap, (float(ci.value), next(counter), w2, lp2,
                                      ci, (dict(seen), step + 1)))
            break
    return MinMarkov(best[0], best[1])


# ---------------------------------------------------------------------------
# gap certification


class GapCertificate(object):
    """Proof object returned by :func:`verify_gap`.

    ``nodes`` is the closed case tree: each node records the marked word it
    covers, its verdict, and the data that closes it.  ``roots`` indexes
    the one-letter root cases.
    """

    __slots__ = ("lo", "hi", "forbidden", "nodes", "roots", "chain_steps",
                 "scope", "exclusions")

    def __init__(self, lo, hi, forbidden, nodes, roots, chain_steps, scope,
                 exclusions):
        self.lo = lo
        self.hi = hi
        self.forbidden = forbidden
        self.nodes = nodes
        self.roots = roots
        self.chain_steps = chain_steps
        self.scope = scope
        self.exclusions = exclusions

    def __repr__(self):
        return "GapCertificate((%s, %s), %d nodes)" % (
            decimal_render(self.lo, 10), decimal_render(self.hi, 10),
            len(self.nodes))

    def to_json(self):
        return {
            "interval": {
                "lo": decimal_render(self.lo, 15),
                "lo_exact": _exact_json(self.lo),
                "hi": decimal_render(self.hi, 15),
                "hi_exact": _exact_json(self.hi),
            },
            "scope": self.scope,
            "forbidden": self.forbidden.to_json(),
            "forbidden_exclusions": self.exclusions,
            "roots": self.roots,
            "nodes": self.nodes,
            "chain_steps": self.chain_steps,
        }


class _GapSearch(object):
    def __init__(self, a, at, f, lo, hi, max_depth, max_nodes, probe_cap,
                 split_depth, deviation_depth):
        self.a = a
        self.at = at
        self.f = f
        self.lo = lo
        self.hi = hi
        self.max_depth = max_depth
        self.max_nodes = max_nodes
        self.probe_cap = probe_cap
        self.split_depth = split_depth
        self.deviation_depth = deviation_depth
        self.excl = _Excluder(a)
        self.memo = {}
        self.nodes = []
        self.window = max(f.maxlen, 12)
        self.count = 0
        self.chain_steps = 0

    def _record(self, **kw):
        self.nodes.append(kw)
        return len(self.nodes) - 1

    def _budget(self):
        self.count += 1
        if self.count > self.max_nodes:
            raise DepthExceeded(
                "node budget exhausted after %d nodes" % self.max_nodes,
                lower=self.lo, upper=self.hi)

    def _marked(self, word, mark):
        return str(MarkedWord(word, mark))

    def _probe(self, word, lpad):
        got = _greedy_min_chain(self.a, self.at, self.f, word, lpad, cap=200)
        if got is None:
            return
        v, s = got
        if (sign_of_difference(v, self.lo) > 0
                and sign_of_difference(v, self.hi) < 0):
            raise GapRefuted(s, v)

    def _quick_close(self, word, mark):
        """Verdict dict if a rule closes (word, mark) immediately, else None."""
        hi_mark = extremal_lambda0(self.a, word, mark, MAXIMIZE).value
        if sign_of_difference(hi_mark, self.lo) <= 0:
            return {
                "word": self._marked(word, mark),
                "verdict": "lambda_below",
                "lambda_max": decimal_render(hi_mark, 12),
                "lambda_max_exact": _exact_json(hi_mark),
            }
        lo_mark = extremal_lambda0(self.a, word, mark, MINIMIZE).value
        if sign_of_difference(lo_mark, self.hi) >= 0:
            return {
                "word": self._marked(word, mark),
                "verdict": "lambda_above",
                "lambda_min": decimal_render(lo_mark, 12),
                "lambda_min_exact": _exact_json(lo_mark),
            }
        cert = self.excl.check(word, self.hi, self.split_depth)
        if cert is not None:
            return {
                "word": self._marked(word, mark),
                "verdict": "forces_hi",
                "proof": cert,
            }
        return None

    def explore(self, word, mark, chain_state=None):
        """Close the case of sequences carrying ``word`` around position ``mark``.

        Returns the index of a closed certificate node; raises
        :class:`GapRefuted` or :class:`DepthExceeded` otherwise.
        ``chain_state`` carries closure snapshots from the parent chain so
        periodic structure spanning a branch point is still detected.
        """
        key = (word, mark)
        got = self.memo.get(key)
        if got is not None:
            return got
        self._budget()
        if _analyze(self.a, self.at, word) is None:
            idx = self._record(word=self._marked(word, mark), verdict="dead")
            self.memo[key] = idx
            return idx
        verdict = self._quick_close(word, mark)
        if verdict is not None:
            idx = self._record(**verdict)
            self.memo[key] = idx
            return idx
        if len(word) <= self.probe_cap:
            self._probe(word, mark)
        idx = self._chain(word, mark, chain_state)
        self.memo[key] = idx
        return idx

    def _parity_devs_closed(self, word, mark, left, right, mv):
        """Close every block deviation at once by the parity argument.

        Requires the survivor's value to be at least hi, attained at
        positions ``P`` inside the word.  A germ sequence other than the
        survivor first deviates from a block at some continued-fraction
        depth ``n`` from an attaining position ``p``, writing ``d`` where
        the block has ``b``: the two possible tails then lie in the
        disjoint intervals ``(d, d+1)`` and ``(b, b+1)``, so lambda_p
        moves by a strictly signed amount -- sign ``(-1)^n sign(d - b)``
        -- whatever follows the flip.  Even block lengths make the sign
        independent of how many whole blocks precede the flip, so each
        (side, offset, digit) class has one direction for all
        repetitions.  A class pushing some attaining position up forces
        lambda_p > hi there.  When both sides deviate, a flip's effect
        attenuates strictly across each depth level, so if a class pair
        is upward at positions p1 <= p2 (left flip at p1, right flip at
        p2), the two lambdas cannot both drop: the contrary would need
        each effect to dominate the other's attenuated copy.  Dead
        deviations (never a factor, checked across a full block cycle of
        anchorings) are skipped.
        """
        if len(left) % 2 or len(right) % 2:
            return False
        if sign_of_difference(mv.value, self.hi) < 0:
            return False
        pos = mv.positions
        if not pos or min(pos) < -mark or max(pos) >= len(word) - mark:
            return False
        up_right, up_left = [], []
        reps_r = (self.f.maxlen - 2) // len(right) + 2
        for i in range(len(right)):
            for d in range(1, self.f.alphabet + 1):
                if d == right[i]:
                    continue
                if not any(self.a.is_factor(word + right * r + right[:i] + (d,))
                           for r in range(reps_r + 1)):
                    continue
                flip = (len(word) - mark) + i
                ups = [p for p in pos
                       if ((flip - p) % 2 == 0) == (d > right[i])]
                if not ups:
                    return False
                up_right.append(max(ups))
        reps_l = (self.f.maxlen - 2) // len(left) + 2
        for i in range(len(left)):
            b = left[len(left) - 1 - i]
            for d in range(1, self.f.alphabet + 1):
                if d == b:
                    continue
                if not any(
                        self.a.is_factor(
                            (d,) + left[len(left) - i:] + left * r + word)
                        for r in range(reps_l + 1)):
                    continue
                ups = [p for p in pos
                       if ((p + mark + i + 1) % 2 == 0) == (d > b)]
                if not ups:
                    return False
                up_left.append(min(ups))
        if up_right and up_left and max(up_left) > min(up_right):
            return False
        return True

    def _deviations_closed(self, word, mark, left, right):
        """Whether every one-digit deviation from the repeating blocks closes.

        A sequence of this germ either repeats the blocks forever (the
        survivor, classified by the caller) or first deviates somewhere.  A
        deviation is closed when its block-context word forces values >= hi
        anywhere it occurs, or -- for a first-repetition deviation -- when
        anchoring it at the chain's end keeps the marked position's maximum
        at or below lo.  The anchored fallback covers later repetitions
        through a blanket bound: one further full block keeps the mark's
        maximum at or below lo, so only first-repetition deviations remain.
        """
        blanket = {}

        def _blanket_ok(side):
            if side not in blanket:
                if side == "right":
                    ext, em = word + right, mark
                else:
                    ext, em = left + word, mark + len(left)
                mx, _ = extremal_lambda0(self.a, ext, em, MAXIMIZE)
                blanket[side] = sign_of_difference(mx, self.lo) <= 0
            return blanket[side]

        def _anchored_ok(side, ext, em):
            if not _blanket_ok(side):
                return False
            if not self.a.is_factor(ext):
                return True
            mx, _ = extremal_lambda0(self.a, ext, em, MAXIMIZE)
            return sign_of_difference(mx, self.lo) <= 0

        def _excluded(u):
            if self.excl.check(u, self.hi, depth=self.split_depth):
                return True
            return self.excl.check(u, self.hi, depth=self.deviation_depth,
                                   budget=50000) is not None

        for i in range(len(right)):
            for d in range(1, self.f.alphabet + 1):
                if d == right[i]:
                    continue
                u = right + right[:i] + (d,)
                if _excluded(u):
                    continue
                if not _anchored_ok("right", word + right[:i] + (d,), mark):
                    return False
        for i in range(len(left)):
            keep = left[len(left) - 1 - i]
            for d in range(1, self.f.alphabet + 1):
                if d == keep:
                    continue
                u = (d,) + left[len(left) - i:] + left
                if _excluded(u):
                    continue
                ext = (d,) + left[len(left) - i:] + word
                if not _anchored_ok("left", ext, mark + i + 1):
                    return False
        return True

    def _chain(self, word, mark, chain_state=None):
        """Iterate forced extensions of an open case until it closes.

        Each step extends on the wider-enclosure side; siblings that close
        immediately are recorded, siblings that stay open are explored
        recursively, and a repeated closure key triggers the periodic
        closure: the surviving eventually periodic sequence is classified
        exactly (a value inside the interval refutes the gap) and every
        one-digit deviation from the repeating blocks is certified to force
        values >= hi.
        """
        first = self._marked(word, mark)
        if chain_state is None:
            seen, step = {}, 0
        else:
            seen, step = dict(chain_state[0]), chain_state[1]
        closed_kids = []
        while True:
            self._budget()
            if max(mark, len(word) - 1 - mark) > 2 * self.max_depth:
                raise DepthExceeded(
                    "context grew past %d digits" % (2 * self.max_depth),
                    lower=self.lo, upper=self.hi)
            info = _analyze(self.a, self.at, word)
            key = _closure_key(info, word, mark, self.window)
            if key in seen:
                w1, m1 = seen[key]
                left, right = _chain_blocks(w1, m1, word, mark)
                if (left and right and word[:len(left)] == left
                        and word[-len(right):] == right):
                    s = EpSeq(left, word, mark, right)
                    if _seq_clean(self.f, s):
                        mv = markov_value(s)
                        v = mv.value
                        if (sign_of_difference(v, self.lo) > 0
                                and sign_of_difference(v, self.hi) < 0):
                            raise GapRefuted(s, v)
                        if self._parity_devs_closed(word, mark, left,
                                                    right, mv):
                            how = "parity"
                        elif self._deviations_closed(word, mark, left, right):
                            how = "excluded"
                        else:
                            how = None
                        if how is not None:
                            return self._record(
                                word=first,
                                verdict="periodic_close",
                                survivor=str(s),
                                survivor_value=decimal_render(v, 12),
                                deviations=how,
                                chain_end=self._marked(word, mark),
                                steps=step,
                                children=closed_kids,
                            )
            else:
                seen[key] = (word, mark)
            open_kids = []
            for d in range(1, self.f.alphabet + 1):
                if info.side == "right":
                    w2, m2 = word + (d,), mark
                else:
                    w2, m2 = (d,) + word, mark + 1
                if _analyze(self.a, self.at, w2) is None:
                    closed_kids.append(self._record(
                        word=self._marked(w2, m2), verdict="dead"))
                    continue
                verdict = self._quick_close(w2, m2)
                if verdict is not None:
                    closed_kids.append(self._record(**verdict))
                else:
                    open_kids.append((w2, m2))
            if not open_kids:
                return self._record(
                    word=first, verdict="all_children_closed",
                    chain_end=self._marked(word, mark), steps=step,
                    children=closed_kids)
            if len(open_kids) == 1:
                (word, mark), = open_kids
                step += 1
                self.chain_steps += 1
                continue
            inherit = (seen, step + 1)
            for w2, m2 in open_kids:
                closed_kids.append(self.explore(w2, m2, inherit))
            return self._record(
                word=first, verdict="branch",
                chain_end=self._marked(word, mark), steps=step,
                children=closed_kids)


def verify_gap(lo_seq, hi_seq, f, *, scope="spectrum", max_depth=120,
               max_nodes=200000, probe_cap=10, split_depth=10,
               deviation_depth=40):
    """Certify that no sequence has Markov value strictly between two others.

    ``lo_seq`` and ``hi_seq`` are eventually periodic sequences
    (:class:`~.words.EpSeq`) whose Markov values bound the claimed gap.
    With the default ``scope="spectrum"`` the claim certified is that NO
    bi-infinite positive-integer sequence at all has Markov value in the
    open interval ``(m(lo_seq), m(hi_seq))``.  Restricting the search to
    the subshift of ``f`` is justified inside the certificate itself: every
    word of ``f`` is first certified to force Markov values >= the upper
    endpoint over the unrestricted alphabet shift, and digits above the
    alphabet are ruled out by a largest-digit argument: a sequence whose
    largest digit is D has, at a D position, a value of at least
    D + 2/(D + 1) (each tail is at least 1/(D + 1)), an increasing function
    of D, so any digit above ``N = f.alphabet`` forces a value of at least
    ``N + 1 + 2/(N + 2)``, which is required to be >= the upper endpoint.
    ``scope="subshift"`` skips both steps and certifies only that no
    sequence of the subshift has a value inside the interval.

    Returns a :class:`GapCertificate` whose case tree covers every marked
    word germ: each case is closed because the marked position cannot
    exceed the lower endpoint, because every completion already places the
    marked position at or above the upper endpoint, because the word forces
    Markov values at or above the upper endpoint, or by periodic closure of
    a forced chain.  Raises
    :class:`GapRefuted` with an exact witness if the search constructs a
    sequence whose value lies inside the interval, :class:`DepthExceeded`
    if the tree cannot be closed within its budget, and ``ValueError`` if a
    spectrum-scope prerequisite fails.
    """
    if scope not in ("spectrum", "subshift"):
        raise ValueError("scope must be 'spectrum' or 'subshift'")
    lo = markov_value(lo_seq).value
    hi = markov_value(hi_seq).value
    if sign_of_difference(lo, hi) >= 0:
        raise ValueError("interval endpoints are not increasing")
    exclusions = []
    if scope == "spectrum":
        ceiling = Fraction(f.alphabet + 1) + Fraction(2, f.alphabet + 2)
        if sign_of_difference(hi, ceiling) > 0:
            raise ValueError(
                "upper endpoint exceeds %s; digits outside the alphabet "
                "could carry values inside the interval" % ceiling)
        if f.words:
            full = _Excluder(_automaton(ForbiddenSet([], f.alphabet)))
            for w in sorted(f.words):
                cert = full.check(w, hi, depth=split_depth)
                if cert is None:
                    raise ValueError(
                        "cannot certify that forbidden word %s forces values "
                        "above the interval; rerun with scope='subshift' for "
                        "the restricted claim" % word_str(w))
                exclusions.append(cert)
    a = _automaton(f)
    search = _GapSearch(a, a.transpose, f, lo, hi, max_depth, max_nodes,
                        probe_cap, split_depth, deviation_depth)
    roots = [search.explore((d,), 0) for d in range(1, f.alphabet + 1)]
    return GapCertificate(lo, hi, f, search.nodes, roots, search.chain_steps,
                          scope, exclusions)
