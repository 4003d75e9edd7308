"""Continued-fraction evaluation and the lambda/Markov/Lagrange functionals.

lambda_k(a) = [a_k; a_{k+1}, ...] + [0; a_{k-1}, a_{k-2}, ...]; the Markov
value is sup_k lambda_k, the Lagrange value is limsup.  Everything here is
exact: finite continued fractions are Fractions, periodic tails are
QuadSurds (the positive fixed point of the period's Moebius matrix), and a
two-sided lambda value is a BiSurd (collapsing when both tails share a
discriminant).

Purely periodic orbits get a dedicated fast path built on the identity

    lambda_k(orbit) = sqrt(D) / c_k,

where D = tr(M)^2 - 4 det(M) for the period's digit-matrix product M (the
trace is rotation-invariant, so D is shared by every position) and c_k is
the lower-left continuant of the rotation starting at k.  The identity
follows from the digit matrices being symmetric: the backward period matrix
is the transpose of the forward one, so the rational parts of the forward
and backward fixed points cancel.  The census leans on this: the Markov
value of an orbit is sqrt(D)/min(c_k), and threshold tests are pure integer
comparisons.  (Cross-checked against direct two-tail evaluation in tests.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import QuadSurd, sign_of_difference
from .words import EpSeq, PeriodicOrbit, is_semisymmetric_orbit

__all__ = [
    "continuant_matrix",
    "cf_finite",
    "cf_periodic_tail",
    "periodic_fixed_point",
    "orbit_disc_and_continuants",
    "orbit_markov",
    "lambda_k",
    "markov_value",
    "lagrange_value",
    "flahive_check",
    "MarkovResult",
]


def continuant_matrix(word):
    """Product of digit matrices A(d) = [[d,1],[1,0]] over the word.

    Returns (a, b, c, d) for [[a, b], [c, d]]; a/c is the value of the
    finite continued fraction [w0; w1, ..., wn-1] in lowest terms.
    """
    a, b, c, d = 1, 0, 0, 1
    for x in word:
        a, b, c, d = a * x + b, a, c * x + d, c
    return a, b, c, d


def cf_finite(digits, leading=None):
    """Exact value of [leading; digits...] (or [d0; d1...] with leading None)."""
    word = tuple(digits) if leading is None else (leading,) + tuple(digits)
    if not word:
        raise ValueError("empty continued fraction")
    a, _, c, _ = continuant_matrix(word)
    return Fraction(a, c)


def periodic_fixed_point(period):
    """Positive fixed point of the period's Moebius map, as a QuadSurd.

    This is the value of the purely periodic continued fraction
    [p0; p1, ..., pn-1, p0, p1, ...].
    """
    period = tuple(period)
    if not period:
        raise ValueError("empty period")
    a, b, c, d = continuant_matrix(period)
    # x = (a x + b) / (c x + d)  =>  c x^2 + (d - a) x - b = 0
    disc = (a + d) * (a + d) - 4 * (a * d - b * c)
    return QuadSurd(a - d, 1, disc, 2 * c)


def cf_periodic_tail(preperiod, period, leading=None):
    """Exact value of [leading; preperiod..., overline(period)].

    With leading None the first preperiod digit plays the leading role
    (the preperiod must then be nonempty, or the period is used directly).
    """
    x = periodic_fixed_point(period)
    word = tuple(preperiod) if leading is None else (leading,) + tuple(preperiod)
    if not word:
        return x
    a, b, c, d = continuant_matrix(word)
    return x.mobius(a, b, c, d)


# --------------------------------------------------------------------------
# fast orbit path
# --------------------------------------------------------------------------


def orbit_disc_and_continuants(period):
    """(D, [c_0, ..., c_{n-1}]) for a periodic orbit.

    D = tr(M)^2 - 4 det(M) is shared by every rotation; c_k is the
    lower-left entry of the rotation-k matrix, computed incrementally via
    M_{k+1} = A(w_k)^{-1} M_k A(w_k).
    """
    w = tuple(period)
    a, b, c, d = continuant_matrix(w)
    disc = (a + d) * (a + d) - 4 * (a * d - b * c)
    cs = []
    for x in w:
        cs.append(c)
        # A(x)^{-1} [[a,b],[c,d]] A(x) with A(x)=[[x,1],[1,0]]
        a, b, c, d = (
            c * x + d,
            c,
            (a - x * c) * x + (b - x * d),
            a - x * c,
        )
    return disc, cs


def orbit_lambda(period, k):
    """lambda_k of the orbit, as a QuadSurd sqrt(D)/c_k."""
    disc, cs = orbit_disc_and_continuants(period)
    return QuadSurd(0, 1, disc, cs[k % len(cs)])


def orbit_markov(period):
    """(markov value, argmin-continuant positions) for a pure orbit."""
    disc, cs = orbit_disc_and_continuants(period)
    cmin = min(cs)
    positions = tuple(i for i, c in enumerate(cs) if c == cmin)
    return QuadSurd(0, 1, disc, cmin), positions


# --------------------------------------------------------------------------
# two-sided evaluation on EpSeq
# --------------------------------------------------------------------------


def _forward_value(s, k):
    """[a_k; a_{k+1}, ...] for the EpSeq s, exactly."""
    if k > s.end:
        # purely inside the right tiling: rotate the period to start at k
        phase = (k - s.end - 1) % len(s.right)
        per = s.right[phase:] + s.right[:phase]
        return periodic_fixed_point(per)
    pre = s.digits_range(k, s.end)
    return cf_periodic_tail(pre[1:], s.right, leading=pre[0])


def _backward_value(s, k):
    """[0; a_{k-1}, a_{k-2}, ...] for the EpSeq s, exactly."""
    L = len(s.left)
    if k - 1 < s.start:
        # purely inside the left tiling, read right-to-left
        j = (k - 1 + s.mark) % L
        per = tuple(s.left[(j - t) % L] for t in range(L))
        return cf_periodic_tail((), per, leading=0)
    pre = tuple(s.digit(i) for i in range(k - 1, s.start - 1, -1))
    per = tuple(reversed(s.left))
    return cf_periodic_tail(pre, per, leading=0)


def lambda_k(s, k=0):
    """Exact lambda at position k (relative to the mark) of an EpSeq."""
    if isinstance(s, PeriodicOrbit):
        return orbit_lambda(s.period, k)
    return _forward_value(s, k) + _backward_value(s, k)


@dataclass(frozen=True)
class MarkovResult:
    value: object
    positions: tuple
    attained_in_limit: bool = False

    def __iter__(self):
        return iter((self.value, self.positions))


def markov_value(s, window_periods=3):
    """Exact sup of lambda_k with the attaining positions.

    For a pure orbit this is sqrt(D)/min(c_k).  For an EpSeq the sup over
    the infinite tails is certified finitely: along each tail phase the
    backward value is a Moebius iteration with positive entries, hence
    monotone (det +1) or alternating and strictly contracting (det -1)
    toward the tail orbit's own value; either way every lambda beyond the
    explicit window lies in the hull of the last two explicit iterates and
    the limit, all of which are inspected.  Limits are the tail orbits'
    lambda values.  `positions` lists the finite attaining positions inside
    the window; attained_in_limit reports sup reached only asymptotically.
    """
    if isinstance(s, PeriodicOrbit):
        value, positions = orbit_markov(s.period)
        return MarkovResult(value, positions)
    lo = s.start - window_periods * len(s.left)
    hi = s.end + window_periods * len(s.right)
    best = None
    positions = []
    for k in range(lo, hi + 1):
        v = lambda_k(s, k)
        cmpv = sign_of_difference(v, best) if best is not None else 1
        if cmpv > 0:
            best, positions = v, [k]
        elif cmpv == 0:
            positions.append(k)
    limit = None
    for per in (s.left, s.right):
        v, _ = orbit_markov(per)
        if limit is None or sign_of_difference(v, limit) > 0:
            limit = v
    cmp_limit = sign_of_difference(limit, best)
    if cmp_limit > 0:
        return MarkovResult(limit, (), attained_in_limit=True)
    return MarkovResult(best, tuple(positions), attained_in_limit=(cmp_limit == 0))


def lagrange_value(s):
    """Exact limsup of lambda_k: the right tail orbit's Markov value."""
    if isinstance(s, PeriodicOrbit):
        return orbit_markov(s.period)[0]
    return orbit_markov(s.right)[0]


def flahive_check(s):
    """Sufficient criterion for a Markov value to lie in L'.

    Requires both tail periods to be semisymmetric orbits and the value
    m(s) -- attained at the mark -- to differ from both tail orbits' own
    Markov values.  Returns "certified_Lprime" or "inapplicable".
    """
    if isinstance(s, PeriodicOrbit):
        return "inapplicable"
    res = markov_value(s)
    if 0 not in res.positions:
        raise ValueError("Markov value not attained at the mark")
    if not (is_semisymmetric_orbit(PeriodicOrbit(s.left)) and
            is_semisymmetric_orbit(PeriodicOrbit(s.right))):
        return "inapplicable"
    m = res.value
    for per in (s.left, s.right):
        if sign_of_difference(m, orbit_markov(per)[0]) == 0:
            return "inapplicable"
    return "certified_Lprime"
