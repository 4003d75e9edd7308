"""Exact arithmetic over rationals, real quadratic surds, and sums of surds.

Every number handled by this package is one of

  * ``Fraction``  -- exact rational (stdlib),
  * ``QuadSurd``  -- (p + q*sqrt(d)) / r with integers p, q, d > 0, r > 0,
  * ``BiSurd``    -- a sum of two QuadSurds over incommensurable radicands.

All comparisons are decided by integer arithmetic alone (squaring cascades
and directed integer square roots); no floating point is used anywhere and
no comparison ever answers "unknown".  Values are immutable and hashable,
with hash/equality keyed on the value itself, not its representation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "QuadSurd",
    "BiSurd",
    "SurdSum",
    "surd_arith",
    "bisurd_sign",
    "sign_of_difference",
    "decimal_render",
    "matches_decimal",
    "square_free_split",
]


# --------------------------------------------------------------------------
# square-free reduction
# --------------------------------------------------------------------------

_TRIAL_LIMIT = 10_000


@lru_cache(maxsize=1)
def _small_primes():
    """Primes below _TRIAL_LIMIT via a plain sieve."""
    sieve = bytearray([1]) * _TRIAL_LIMIT
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(_TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(_TRIAL_LIMIT) if sieve[i]]


def _is_square(n):
    if n < 0:
        return False
    s = math.isqrt(n)
    return s * s == n


@lru_cache(maxsize=None)
def square_free_split(n):
    """Write n = s*s*c with c square-free, returning (s, c).

    Exact for every n whose cofactor after small trial division is below
    ~1e30 (covers all discriminants arising here); beyond that the cofactor
    is left unreduced after a perfect-power check.  Partial reduction is
    harmless: value comparison and hashing never rely on square-freeness,
    only rendering does, and the split is deterministic either way.
    """
    if n <= 0:
        raise ValueError("radicand must be positive")
    s, c = 1, 1
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                c *= p
    if n == 1:
        return s, c
    # n now has no prime factor below the trial limit
    if _is_square(n):
        return s * math.isqrt(n), c
    if n < _TRIAL_LIMIT ** 2:
        return s, c * n  # prime
    if n < 10 ** 30:
        try:
            from sympy import factorint

            for p, e in factorint(n).items():
                s *= p ** (e // 2)
                if e % 2:
                    c *= p
            return s, c
        except Exception:  # pragma: no cover - factorization gave up
            pass
    return s, c * n  # pragma: no cover - cofactor beyond reduction budget


def _gcd3(a, b, c):
    return math.gcd(math.gcd(abs(a), abs(b)), abs(c))


# --------------------------------------------------------------------------
# QuadSurd
# --------------------------------------------------------------------------


class QuadSurd:
    """The exact real number (p + q*sqrt(d)) / r.

    Canonical form: r > 0, gcd(p, q, r) = 1, the square part of d pulled
    into q, and d = 1 exactly when the value is rational (then q = 0).
    Rationals are therefore QuadSurds too; see ``QuadSurd.from_rational``.
    """

    __slots__ = ("p", "q", "d", "r")

    def __init__(self, p, q, d, r=1):
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        if q:
            sq, d = square_free_split(d)
            q *= sq
            if d == 1:
                p += q
                q = 0
        else:
            d = 1
        if r < 0:
            p, q, r = -p, -q, -r
        g = _gcd3(p, q, r)
        if g > 1:
            p //= g
            q //= g
            r //= g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "r", r)

    def __setattr__(self, *a):
        raise AttributeError("QuadSurd is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(x):
        x = Fraction(x)
        return QuadSurd(x.numerator, 0, 1, x.denominator)

    @staticmethod
    def sqrt_int(n):
        return QuadSurd(0, 1, n, 1)

    # -- basic queries -----------------------------------------------------

    @property
    def is_rational(self):
        return self.q == 0

    def as_fraction(self):
        if self.q:
            raise ValueError("not rational: %r" % (self,))
        return Fraction(self.p, self.r)

    def key(self):
        """Hashable canonical value key, independent of reduction of d.

        (rational part, sign of the radical part, square of the radical
        part) pins the value uniquely without needing d square-free.
        """
        return (
            Fraction(self.p, self.r),
            (self.q > 0) - (self.q < 0),
            Fraction(self.q * self.q * self.d, self.r * self.r),
        )

    def sign(self):
        """Exact sign of the value: -1, 0 or +1."""
        p, q, d = self.p, self.q, self.d
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return (q > 0) - (q < 0)
        sp = 1 if p > 0 else -1
        sq = 1 if q > 0 else -1
        if sp == sq:
            return sp
        # opposite signs: |p| vs |q|sqrt(d), decided by squaring
        lhs, rhs = p * p, q * q * d
        if lhs == rhs:  # impossible for non-square d; defensive only
            return 0
        return sp if lhs > rhs else sq

    def conj(self):
        return QuadSurd(self.p, -self.q, self.d, self.r)

    # -- arithmetic --------------------------------------------------------

    def _same_field(self, other):
        return self.q == 0 or other.q == 0 or self.d == other.d

    def __neg__(self):
        return QuadSurd(-self.p, -self.q, self.d, self.r)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadSurd.from_rational(other)
        if isinstance(other, QuadSurd):
            a, b = self, other
            if a.q == 0 and b.q:
                a, b = b, a
            if b.q == 0 or a.d == b.d:
                return QuadSurd(
                    a.p * b.r + b.p * a.r, a.q * b.r + b.q * a.r, a.d, a.r * b.r
                )
            if _is_square(a.d * b.d):
                # commensurable radicands: fold b into a's field
                root = math.isqrt(a.d * b.d)
                return QuadSurd(
                    (a.p * b.r + b.p * a.r) * a.d,
                    a.q * b.r * a.d + b.q * a.r * root,
                    a.d,
                    a.r * b.r * a.d,
                )
            return BiSurd(a, b)
        if isinstance(other, BiSurd):
            return other + self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QuadSurd, BiSurd)):
            return self + (-_coerce(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadSurd.from_rational(other)
        if isinstance(other, QuadSurd):
            if not self._same_field(other):
                raise ValueError("product of incommensurable surds")
            d = self.d if self.q else other.d
            return QuadSurd(
                self.p * other.p + self.q * other.q * d,
                self.p * other.q + self.q * other.p,
                d,
                self.r * other.r,
            )
        return NotImplemented

    __rmul__ = __mul__

    def invert(self):
        """Exact reciprocal (same field)."""
        if self.p == 0 and self.q == 0:
            raise ZeroDivisionError("inverting zero")
        # 1/((p+q*sqrt(d))/r) = r*(p - q*sqrt(d)) / (p^2 - q^2 d)
        norm = self.p * self.p - self.q * self.q * self.d
        return QuadSurd(self.r * self.p, -self.r * self.q, self.d, norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadSurd.from_rational(other)
        if isinstance(other, QuadSurd):
            if not self._same_field(other):
                raise ValueError("quotient of incommensurable surds")
            return self * other.invert()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.invert() * other

    def mobius(self, a, b, c, e):
        """(a*x + b) / (c*x + e) for integer coefficients, exactly."""
        num = QuadSurd(a * self.p + b * self.r, a * self.q, self.d, self.r)
        den = QuadSurd(c * self.p + e * self.r, c * self.q, self.d, self.r)
        return num / den

    # -- comparison and hashing -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and Fraction(self.p, self.r) == other
        if isinstance(other, QuadSurd):
            return self.key() == other.key()
        if isinstance(other, (BiSurd, SurdSum)):
            return sign_of_difference(self, other) == 0
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.r))
        return hash(self.key())

    def __lt__(self, other):
        return sign_of_difference(self, other) < 0

    def __le__(self, other):
        return sign_of_difference(self, other) <= 0

    def __gt__(self, other):
        return sign_of_difference(self, other) > 0

    def __ge__(self, other):
        return sign_of_difference(self, other) >= 0

    # -- conversion / rendering -------------------------------------------

    def as_terms(self):
        """(rational part, ((coefficient, radicand), ...)) decomposition."""
        rat = Fraction(self.p, self.r)
        if self.q == 0:
            return rat, ()
        return rat, ((Fraction(self.q, self.r), self.d),)

    def enclosure(self, bits):
        """Directed integer bounds: lo <= value * 2**bits <= hi."""
        scale = 1 << bits
        lo = hi = self.p * scale
        if self.q:
            t = self.d * scale * scale
            root = math.isqrt(t)
            exact = root * root == t
            if self.q > 0:
                lo += self.q * root
                hi += self.q * (root if exact else root + 1)
            else:
                lo += self.q * (root if exact else root + 1)
                hi += self.q * root
        return lo // self.r, -((-hi) // self.r)

    def decimal(self, digits=12, mode="nearest"):
        return decimal_render(self, digits, mode)

    def __float__(self):
        lo, hi = self.enclosure(64)
        return (lo + hi) / 2 / 2.0 ** 64

    def __repr__(self):
        return "QuadSurd(p=%d, q=%d, d=%d, r=%d)" % (self.p, self.q, self.d, self.r)

    def __str__(self):
        if self.q == 0:
            return str(Fraction(self.p, self.r))
        qs = "" if self.q == 1 else ("-" if self.q == -1 else str(self.q))
        qpart = "%s√%d" % (qs, self.d)
        if self.p == 0:
            return qpart if self.r == 1 else "%s/%d" % (qpart, self.r)
        body = "%d%s%s" % (self.p, "+" if self.q > 0 else "", qpart)
        return body if self.r == 1 else "(%s)/%d" % (body, self.r)

    def to_json(self):
        return {"p": self.p, "q": self.q, "d": self.d, "r": self.r}

    @staticmethod
    def from_json(obj):
        return QuadSurd(obj["p"], obj["q"], obj["d"], obj["r"])


# --------------------------------------------------------------------------
# BiSurd
# --------------------------------------------------------------------------


class BiSurd:
    """Exact sum a + b of two QuadSurds over incommensurable radicands.

    Normal form: the whole rational part lives in ``a``; ``b`` is a pure
    radical; a.d < b.d.  Collapsible sums (same or commensurable radicands,
    or a rational operand) should be built through ``+`` on QuadSurd, which
    returns a plain QuadSurd instead.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        if a.q == 0 or b.q == 0 or _is_square(a.d * b.d):
            raise ValueError("collapsible BiSurd; use QuadSurd addition")
        if b.p:
            a = a + Fraction(b.p, b.r)
            b = QuadSurd(0, b.q, b.d, b.r)
        if b.d < a.d:
            rat = Fraction(a.p, a.r)
            pure_a = QuadSurd(0, a.q, a.d, a.r)
            a = b + rat
            b = pure_a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, *x):
        raise AttributeError("BiSurd is immutable")

    def sign(self):
        """Exact sign by the squaring cascade (at most two squarings)."""
        s1 = self.a.sign()
        s2 = (self.b.q > 0) - (self.b.q < 0)
        if s1 == 0:
            return s2
        if s1 == s2:
            return s1
        # opposite signs: compare a^2 (a QuadSurd) with b^2 (a rational)
        asq = self.a * self.a
        bsq = Fraction(self.b.q * self.b.q * self.b.d, self.b.r * self.b.r)
        s = (asq - bsq).sign()
        if s == 0:
            return 0
        return s1 if s > 0 else s2

    def as_terms(self):
        rat, ta = self.a.as_terms()
        _, tb = self.b.as_terms()
        return rat, ta + tb

    def __neg__(self):
        return BiSurd(-self.a, -self.b)

    def __add__(self, other):
        return SurdSum.of(self, other).collapse()

    __radd__ = __add__

    def __sub__(self, other):
        return SurdSum.of(self, -_coerce(other)).collapse()

    def __rsub__(self, other):
        return SurdSum.of(-self, other).collapse()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return QuadSurd.from_rational(0)
            return BiSurd(self.a * other, self.b * other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadSurd, BiSurd, SurdSum)):
            return sign_of_difference(self, other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.a.key(), self.b.key()))

    def __lt__(self, other):
        return sign_of_difference(self, other) < 0

    def __le__(self, other):
        return sign_of_difference(self, other) <= 0

    def __gt__(self, other):
        return sign_of_difference(self, other) > 0

    def __ge__(self, other):
        return sign_of_difference(self, other) >= 0

    def enclosure(self, bits):
        alo, ahi = self.a.enclosure(bits)
        blo, bhi = self.b.enclosure(bits)
        return alo + blo, ahi + bhi

    def decimal(self, digits=12, mode="nearest"):
        return decimal_render(self, digits, mode)

    def __float__(self):
        lo, hi = self.enclosure(64)
        return (lo + hi) / 2 / 2.0 ** 64

    def __repr__(self):
        return "BiSurd(%r, %r)" % (self.a, self.b)

    def __str__(self):
        bs = str(self.b)
        if bs.startswith("-"):
            return "%s - %s" % (self.a, bs[1:])
        return "%s + %s" % (self.a, bs)

    def to_json(self):
        return {"a": self.a.to_json(), "b": self.b.to_json()}

    @staticmethod
    def from_json(obj):
        return QuadSurd.from_json(obj["a"]) + QuadSurd.from_json(obj["b"])


# --------------------------------------------------------------------------
# SurdSum: rational + arbitrarily many radical terms (internal workhorse)
# --------------------------------------------------------------------------


def _coerce(x):
    if isinstance(x, (int, Fraction)):
        return QuadSurd.from_rational(x)
    return x


class SurdSum:
    """rational + sum of coefficient*sqrt(radicand) over many radicands.

    Comparing two BiSurds produces up to four incommensurable radicands,
    which is outside the BiSurd algebra; this class decides such signs
    exactly.  Zero detection is structural (square roots of pairwise
    incommensurable non-squares are linearly independent over Q, whether or
    not the radicands are fully square-free), and nonzero values are then
    separated by directed integer-sqrt enclosures, whose termination that
    independence guarantees.
    """

    __slots__ = ("rational", "terms")

    def __init__(self, rational, terms):
        rational = Fraction(rational)
        merged = {}  # radicand -> Fraction coefficient
        for coef, d in terms:
            if coef == 0:
                continue
            s, c = square_free_split(d)
            if c == 1:
                rational += Fraction(coef) * s
                continue
            coef = Fraction(coef) * s
            home = None
            for known in list(merged):
                if known == c:
                    home = c
                    break
                if _is_square(known * c):
                    # commensurable despite partial reduction: rewrite the
                    # larger radicand onto the smaller
                    t = math.isqrt(known * c)
                    if c < known:
                        merged[c] = merged.get(c, Fraction(0)) + merged.pop(
                            known
                        ) * Fraction(t, c)
                        home = c
                    else:
                        coef = coef * Fraction(t, known)
                        home = known
                    break
            if home is None:
                home = c
            merged[home] = merged.get(home, Fraction(0)) + coef
        kept = sorted((d, coef) for d, coef in merged.items() if coef != 0)
        object.__setattr__(self, "rational", rational)
        object.__setattr__(self, "terms", tuple((coef, d) for d, coef in kept))

    def __setattr__(self, *x):
        raise AttributeError("SurdSum is immutable")

    @staticmethod
    def of(*values):
        rational = Fraction(0)
        terms = []
        for v in values:
            rat, t = _coerce(v).as_terms()
            rational += rat
            terms.extend(t)
        return SurdSum(rational, terms)

    def as_terms(self):
        return self.rational, self.terms

    def collapse(self):
        """Downgrade to QuadSurd/BiSurd when few enough terms remain."""
        ts = self.terms
        if not ts:
            return QuadSurd.from_rational(self.rational)
        parts = [QuadSurd(0, c.numerator, d, c.denominator) for c, d in ts]
        first = parts[0] + self.rational
        if len(ts) == 1:
            return first
        if len(ts) == 2:
            return BiSurd(first, parts[1])
        return self

    def __neg__(self):
        return SurdSum(-self.rational, [(-c, d) for c, d in self.terms])

    def enclosure(self, bits):
        scale = 1 << bits
        lo = hi = 0
        for coef, d in self.terms:
            t = d * scale * scale
            root = math.isqrt(t)
            exact = root * root == t
            rlo, rhi = root, root if exact else root + 1
            n, den = coef.numerator, coef.denominator
            if n > 0:
                lo += (n * rlo) // den
                hi += -((-n * rhi) // den)
            else:
                lo += (n * rhi) // den
                hi += -((-n * rlo) // den)
        rn, rd = self.rational.numerator, self.rational.denominator
        lo += (rn * scale) // rd
        hi += -((-rn * scale) // rd)
        return lo, hi

    def sign(self):
        if not self.terms:
            r = self.rational
            return (r > 0) - (r < 0)
        if len(self.terms) <= 2:
            return self.collapse().sign()
        # three or more pairwise incommensurable radicals: the sum is
        # structurally nonzero, so enclosures must eventually separate
        bits = 64
        while True:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
            if bits > 1 << 22:  # pragma: no cover - independence guarantees exit
                raise RuntimeError("sign separation did not converge")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadSurd, BiSurd, SurdSum)):
            return sign_of_difference(self, other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.rational, self.terms))

    def __lt__(self, other):
        return sign_of_difference(self, other) < 0

    def __le__(self, other):
        return sign_of_difference(self, other) <= 0

    def __gt__(self, other):
        return sign_of_difference(self, other) > 0

    def __ge__(self, other):
        return sign_of_difference(self, other) >= 0

    def __add__(self, other):
        return SurdSum.of(self, other).collapse()

    __radd__ = __add__

    def __sub__(self, other):
        return SurdSum.of(self, -_coerce(other)).collapse()

    def __rsub__(self, other):
        return SurdSum.of(-self, other).collapse()

    def decimal(self, digits=12, mode="nearest"):
        return decimal_render(self, digits, mode)

    def __float__(self):
        lo, hi = self.enclosure(64)
        return (lo + hi) / 2 / 2.0 ** 64

    def __repr__(self):
        return "SurdSum(%r, %r)" % (self.rational, self.terms)


# --------------------------------------------------------------------------
# module-level helpers
# --------------------------------------------------------------------------


def sign_of_difference(x, y):
    """Exact sign of x - y for any mix of rational/QuadSurd/BiSurd/SurdSum."""
    x = _coerce(x)
    y = _coerce(y)
    if isinstance(x, QuadSurd) and isinstance(y, QuadSurd):
        return (x - y).sign()  # QuadSurd or BiSurd; both decide exactly
    return SurdSum.of(x, -y).sign()


def bisurd_sign(x):
    """Exact sign of a rational/QuadSurd/BiSurd/SurdSum: -1, 0 or +1."""
    return _coerce(x).sign()


def surd_arith(x, y, op):
    """Spec-surface arithmetic dispatcher.

    op in {add, sub, mul, div, invert, conj}; invert/conj ignore y.
    mul/div require same-field operands (ValueError otherwise); add/sub
    across fields return a BiSurd.
    """
    x = _coerce(x)
    if op == "invert":
        return x.invert()
    if op == "conj":
        return x.conj()
    y = _coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError("unknown op %r" % (op,))


def decimal_render(x, digits=12, mode="nearest"):
    """Decimal string of x with ``digits`` places after the point.

    mode="nearest" rounds to nearest (rational ties away from zero;
    irrational values never tie), mode="trunc" truncates toward zero.  The
    result is certified by refining directed enclosures until the digit
    decision is unambiguous.
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    if mode not in ("nearest", "trunc"):
        raise ValueError("mode must be 'nearest' or 'trunc'")
    x = _coerce(x)
    if isinstance(x, QuadSurd) and x.q == 0:
        return _render_fraction(Fraction(x.p, x.r), digits, mode)
    if isinstance(x, SurdSum) and not x.terms:
        return _render_fraction(x.rational, digits, mode)
    pow10 = 10 ** digits
    bits = 64
    while True:
        lo, hi = x.enclosure(bits)
        scale = 1 << bits
        if mode == "trunc":
            nlo = (lo * pow10) // scale if lo >= 0 else -((-lo * pow10) // scale)
            nhi = (hi * pow10) // scale if hi >= 0 else -((-hi * pow10) // scale)
        else:
            # nearest: floor((v*pow10*2 + 1)/2); irrational v never ties
            nlo = (2 * lo * pow10 + scale) // (2 * scale)
            nhi = (2 * hi * pow10 + scale) // (2 * scale)
        if nlo == nhi:
            return _format_scaled(nlo, digits)
        bits *= 2
        if bits > 1 << 22:  # pragma: no cover
            raise RuntimeError("decimal rendering did not converge")


def _render_fraction(f, digits, mode):
    n = f * 10 ** digits
    if mode == "trunc":
        scaled = n.numerator // n.denominator if n >= 0 else -((-n.numerator) // n.denominator)
    else:
        scaled = _round_half_away(n)
    return _format_scaled(scaled, digits)


def _round_half_away(f):
    n, d = f.numerator, f.denominator
    if n >= 0:
        return (2 * n + d) // (2 * d)
    return -((2 * (-n) + d) // (2 * d))


def _format_scaled(scaled, digits):
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return sign + str(scaled)
    s = str(scaled).rjust(digits + 1, "0")
    return "%s%s.%s" % (sign, s[:-digits], s[-digits:])


def matches_decimal(x, printed):
    """Does x agree with a printed decimal prefix like "3.8340731702"?

    Sources truncate or round their last digit inconsistently, so accept
    either convention; the integer part must match exactly.  Trailing dots
    or an ellipsis on `printed` are ignored.
    """
    printed = printed.strip().rstrip(".").rstrip("…").rstrip(".")
    if "." not in printed:
        return decimal_render(x, 0, "trunc") == printed
    places = len(printed.split(".")[1])
    return printed in (
        decimal_render(x, places, "trunc"),
        decimal_render(x, places, "nearest"),
    )
