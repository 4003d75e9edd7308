"""Words, marked words, periodic orbits, and eventually periodic sequences.

A Word is a plain tuple of digits 1..9 (tuples keep the hot paths cheap);
this module provides the constructors, the transpose/semisymmetry predicates,
canonical orbit representatives, and the sequence literal grammar

    (<left period>)<center with one mark *>(<right period>)

e.g. "(21)122213*22(12)", optionally interpolating {name} / {name^T} macros.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "as_word",
    "word_str",
    "transpose",
    "rotations",
    "least_rotation",
    "primitive_root",
    "is_semisymmetric_word",
    "is_semisymmetric_orbit",
    "canonical_orbit",
    "PeriodicOrbit",
    "MarkedWord",
    "EpSeq",
    "parse_seq",
    "format_seq",
    "ParseError",
]


class ParseError(ValueError):
    pass


def as_word(x, alphabet=9):
    """Coerce a digit string / iterable of ints into a validated Word tuple."""
    if isinstance(x, str):
        if not x or not x.isdigit():
            raise ParseError("word must be a nonempty digit string: %r" % (x,))
        w = tuple(int(ch) for ch in x)
    else:
        w = tuple(int(v) for v in x)
    if not w:
        raise ParseError("empty word")
    for a in w:
        if not 1 <= a <= alphabet:
            raise ParseError("letter %d outside alphabet 1..%d" % (a, alphabet))
    return w


def word_str(w):
    return "".join(str(a) for a in w)


def transpose(x):
    """Reverse a word, or mirror an EpSeq about its mark."""
    if isinstance(x, EpSeq):
        return x.transpose()
    if isinstance(x, PeriodicOrbit):
        return PeriodicOrbit(tuple(reversed(x.period)))
    return tuple(reversed(x))


def rotations(w):
    return [w[i:] + w[:i] for i in range(len(w))]


def least_rotation(w):
    """Lexicographically least rotation via Booth's algorithm."""
    s = w + w
    n = len(s)
    f = [-1] * n
    k = 0
    for j in range(1, n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return w[k % len(w):] + w[:k % len(w)]


def primitive_root(w):
    """Shortest u with w = u^k."""
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w  # pragma: no cover


def is_semisymmetric_word(w):
    """Palindrome, or concatenation of two palindromes.

    The empty factor is allowed on either side, so every palindrome counts.
    """
    n = len(w)
    for cut in range(n + 1):
        u, v = w[:cut], w[cut:]
        if u == tuple(reversed(u)) and v == tuple(reversed(v)):
            return True
    return False


def is_semisymmetric_orbit(p):
    """True iff the orbit equals the orbit of its transpose."""
    w = p.period if isinstance(p, PeriodicOrbit) else primitive_root(tuple(p))
    return least_rotation(w) == least_rotation(tuple(reversed(w)))


@dataclass(frozen=True)
class PeriodicOrbit:
    """A bi-infinite periodic sequence, stored by a canonical period.

    The representative is the lexicographic minimum over the rotations of
    the (minimal) period and of its transpose, so equal orbits -- up to
    shift and reversal -- compare equal structurally.
    """

    period: tuple

    def __post_init__(self):
        w = primitive_root(tuple(self.period))
        rep = min(least_rotation(w), least_rotation(tuple(reversed(w))))
        object.__setattr__(self, "period", rep)

    def __len__(self):
        return len(self.period)

    def __str__(self):
        return "(" + word_str(self.period) + ")"

    def marked_seq(self, mark=0):
        """The orbit as an EpSeq with the mark on position `mark` of the period."""
        w = self.period
        return EpSeq(w, w, mark % len(w), w)

    def is_semisymmetric(self):
        return is_semisymmetric_orbit(self)


def canonical_orbit(w):
    return PeriodicOrbit(as_word(w))


@dataclass(frozen=True)
class MarkedWord:
    word: tuple
    mark: int

    def __post_init__(self):
        object.__setattr__(self, "word", as_word(self.word))
        if not 0 <= self.mark < len(self.word):
            raise ParseError("mark %d outside word of length %d" % (self.mark, len(self.word)))

    def transpose(self):
        return MarkedWord(tuple(reversed(self.word)), len(self.word) - 1 - self.mark)

    def __str__(self):
        w = self.word
        return word_str(w[: self.mark + 1]) + "*" + word_str(w[self.mark + 1 :])


class EpSeq:
    """Eventually periodic bi-infinite sequence ...LLL | center | RRR...

    The mark fixes position 0 inside the center; the center occupies
    positions [-mark, len(center)-1-mark]; the left period tiles leftward
    ending just before the center, the right period tiles rightward just
    after it.  Periods are reduced to primitive roots on construction.
    """

    __slots__ = ("left", "center", "mark", "right")

    def __init__(self, left, center, mark, right):
        left = primitive_root(as_word(left))
        right = primitive_root(as_word(right))
        center = as_word(center)
        if not 0 <= mark < len(center):
            raise ParseError("mark %d outside center of length %d" % (mark, len(center)))
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "mark", mark)
        object.__setattr__(self, "right", right)

    def __setattr__(self, *a):
        raise AttributeError("EpSeq is immutable")

    # -- geometry ----------------------------------------------------------

    @property
    def start(self):
        return -self.mark

    @property
    def end(self):
        return len(self.center) - 1 - self.mark

    def digit(self, i):
        if i < self.start:
            return self.left[(i + self.mark) % len(self.left)]
        if i > self.end:
            return self.right[(i - self.end - 1) % len(self.right)]
        return self.center[i + self.mark]

    def digits_range(self, lo, hi):
        """Digits at positions lo..hi inclusive."""
        return tuple(self.digit(i) for i in range(lo, hi + 1))

    # -- transforms ----------------------------------------------------------

    def transpose(self):
        return EpSeq(
            tuple(reversed(self.right)),
            tuple(reversed(self.center)),
            len(self.center) - 1 - self.mark,
            tuple(reversed(self.left)),
        )

    def shift(self, j):
        """Sequence with position j moved to the mark (lambda_0 of the
        shift equals lambda_j of the original)."""
        m = self.mark + j
        if 0 <= m < len(self.center):
            return EpSeq(self.left, self.center, m, self.right)
        # extend the center with period copies until the new mark fits
        left, center, right = self.left, self.center, self.right
        while m < 0:
            center = left + center
            m += len(left)
        while m >= len(center):
            center = center + right
        return EpSeq(left, center, m, right)

    def contains_factor(self, factor):
        """Does `factor` occur anywhere (center region or tails)?"""
        f = tuple(factor)
        lo = self.start - len(self.left) - len(f)
        hi = self.end + len(self.right) + len(f)
        window = self.digits_range(lo, hi)
        return any(window[i : i + len(f)] == f for i in range(len(window) - len(f) + 1))

    # -- value semantics -----------------------------------------------------

    def _key(self):
        return (self.left, self.center, self.mark, self.right)

    def __eq__(self, other):
        return isinstance(other, EpSeq) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "EpSeq(%r)" % (format_seq(self),)

    def __str__(self):
        return format_seq(self)


# -- literal grammar ---------------------------------------------------------

_MACRO = re.compile(r"\{([A-Za-z_][A-Za-z_0-9]*)(\^T)?\}")
_SHAPE = re.compile(r"^\(([^()]*)\)([^()]+)\(([^()]*)\)$")


def _expand(text, macros):
    def sub(m):
        name, transp = m.group(1), m.group(2)
        if macros is None or name not in macros:
            raise ParseError("unknown macro {%s}" % name)
        w = macros[name]
        w = as_word(w)
        if transp:
            w = tuple(reversed(w))
        return word_str(w)

    return _MACRO.sub(sub, text)


def parse_seq(text, macros=None, alphabet=9):
    """Parse "(L)cen*ter(R)" into an EpSeq; see the module docstring."""
    text = text.strip().replace(" ", "")
    expanded = _expand(text, macros)
    m = _SHAPE.match(expanded)
    if not m:
        raise ParseError("sequence literal must look like (L)center(R): %r" % (text,))
    lraw, braw, rraw = m.groups()
    if not lraw or not rraw:
        raise ParseError("empty period in %r" % (text,))
    stars = braw.count("*")
    if stars == 0:
        raise ParseError("no mark: put * after the marked digit")
    if stars > 1:
        raise ParseError("more than one mark in %r" % (text,))
    pos = braw.index("*")
    if pos == 0:
        raise ParseError("mark must follow a digit")
    body = braw.replace("*", "")
    if not body.isdigit():
        raise ParseError("center must be digits (and one *): %r" % (braw,))
    return EpSeq(
        as_word(lraw, alphabet), as_word(body, alphabet), pos - 1, as_word(rraw, alphabet)
    )


def format_seq(s):
    c = word_str(s.center)
    marked = c[: s.mark + 1] + "*" + c[s.mark + 1 :]
    return "(%s)%s(%s)" % (word_str(s.left), marked, word_str(s.right))
