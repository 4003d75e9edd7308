"""Shared test oracles: high-precision numerics and random generators.

The mpmath evaluations here are an independent check on the exact kernel --
they never feed values back into the package, only into assertions.
"""

import random

import mpmath

from mlspectra.words import EpSeq

mpmath.mp.dps = 200


def mpf_of(x):
    """200-digit value of a Fraction/QuadSurd/BiSurd/SurdSum."""
    from fractions import Fraction

    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return mpmath.mpf(x.numerator) / x.denominator
    rat, terms = x.as_terms()
    acc = mpmath.mpf(rat.numerator) / rat.denominator
    for coef, d in terms:
        acc += mpmath.mpf(coef.numerator) / coef.denominator * mpmath.sqrt(d)
    return acc


def lambda_float(seq, k, depth=400):
    """Floating lambda_k by brute truncation of both tails."""
    fwd = mpmath.mpf(0)
    for i in range(k + depth, k, -1):
        fwd = 1 / (seq.digit(i) + fwd)
    fwd = seq.digit(k) + fwd
    bwd = mpmath.mpf(0)
    for i in range(k - depth, k - 1):
        bwd = 1 / (seq.digit(i) + bwd)
    bwd = 1 / (seq.digit(k - 1) + bwd)
    return fwd + bwd


def cf_float(digits, depth=None):
    """Floating [d0; d1, ...] truncated."""
    digits = list(digits)
    acc = mpmath.mpf(0)
    for d in reversed(digits[1:]):
        acc = 1 / (d + acc)
    return digits[0] + acc


def random_word(rng, alphabet=2, lo=1, hi=6):
    return tuple(rng.randint(1, alphabet) for _ in range(rng.randint(lo, hi)))


def random_epseq(rng, alphabet=2, center_hi=8, period_hi=5):
    left = random_word(rng, alphabet, 1, period_hi)
    right = random_word(rng, alphabet, 1, period_hi)
    center = random_word(rng, alphabet, 1, center_hi)
    mark = rng.randrange(len(center))
    return EpSeq(left, center, mark, right)


def seeded(seed):
    return random.Random(seed)


def brute_factor_language(words, alphabet, length):
    """Factor language of the bi-infinite avoidance shift, brute force.

    Deliberately a different construction from the package's follower
    automaton: build the overlap graph on clean windows of length
    maxlen - 1, prune to the part with bi-infinite walks, and read factors
    off nodes/paths.
    """
    from itertools import product

    words = [
        tuple(int(c) for c in w) if isinstance(w, str) else tuple(w) for w in words
    ]
    maxlen = max((len(w) for w in words), default=1)
    W = max(maxlen - 1, 1)

    def clean(t):
        return not any(
            t[i : i + len(w)] == w for w in words for i in range(len(t) - len(w) + 1)
        )

    nodes = {t for t in product(range(1, alphabet + 1), repeat=W) if clean(t)}

    def succs(u, within):
        out = []
        for d in range(1, alphabet + 1):
            v = u[1:] + (d,)
            if v in within and clean(u + (d,)):
                out.append(v)
        return out

    while True:
        has_succ = {u for u in nodes if succs(u, nodes)}
        has_pred = {v for u in has_succ for v in succs(u, nodes)}
        keep = has_succ & has_pred
        if keep == nodes:
            break
        nodes = keep
    if not nodes:
        return set()
    if length <= W:
        return {u[:length] for u in nodes}

    found = set()

    def rec(u, word):
        if len(word) == length:
            found.add(word)
            return
        for v in succs(u, nodes):
            rec(v, word + v[-1:])

    for u in nodes:
        rec(u, u)
    return found


def random_live_tail(a, state, rng):
    """Random eventually periodic live tail (pre, per) from an automaton state."""
    digits = []
    seen = {state: 0}
    cur = state
    while True:
        opts = sorted(a.transitions(cur).items())
        d, nxt = opts[rng.randrange(len(opts))]
        digits.append(d)
        cur = nxt
        if cur in seen:
            i = seen[cur]
            return tuple(digits[:i]), tuple(digits[i:])
        seen[cur] = len(digits)
