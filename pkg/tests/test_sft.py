"""Subshift automaton, factor language, and extremal-extension tests."""

import pytest

from mlspectra.cf import cf_periodic_tail, lambda_k, markov_value
from mlspectra.exact import QuadSurd, matches_decimal, sign_of_difference
from mlspectra.sft import (
    DeadPrefix,
    EmptySubshift,
    ForbiddenSet,
    build_automaton,
    extremal_extension,
    extremal_lambda0,
    sft_max_markov,
)
from mlspectra.words import EpSeq, canonical_orbit

from oracles import brute_factor_language, random_live_tail, seeded

SIGMA_MU2 = [
    "121",
    "212",
    "2111222",
    "2221112",
    "1222111112",
    "2111112221",
    "1111111222111",
    "1112221111111",
]
# the six-word subset in force where the two "minimized with" facts below
# are quoted (the two 13-letter words are only established afterwards)
SIX_WORDS = SIGMA_MU2[:6]


# ---------------------------------------------------------------------------
# ForbiddenSet
# ---------------------------------------------------------------------------


def test_forbidden_set_reduction():
    f = ForbiddenSet(["12", "212", "11212"], 2)
    assert f.words == {(1, 2)}
    assert f.maxlen == 2


def test_forbidden_set_transpose_closure():
    f = ForbiddenSet(["112"], 2, include_transposes=True)
    assert f.words == {(1, 1, 2), (2, 1, 1)}
    assert f.transpose() == f
    g = ForbiddenSet(["112"], 2)
    assert g.transpose().words == {(2, 1, 1)}


def test_forbidden_set_json_roundtrip():
    f = ForbiddenSet(SIGMA_MU2, 2, include_transposes=True)
    g = ForbiddenSet.from_json(f.to_json())
    assert f == g and g.include_transposes


def test_forbidden_rejects_empty_word():
    with pytest.raises(ValueError):
        ForbiddenSet(["12", ""], 2)


def test_orbit_filter():
    f = ForbiddenSet(["212"], 2)
    assert f.allows_orbit("1112")
    # the occurrence is only visible across the wrap: 21|21 reads 212
    assert not f.allows_orbit("21")
    assert f.is_clean((2, 1))


# ---------------------------------------------------------------------------
# automaton construction and factor language
# ---------------------------------------------------------------------------


def test_automaton_alternating_pair():
    a = build_automaton(ForbiddenSet(["11", "22"], 2))
    assert a.count_factors(5) == 2
    assert set(a.iter_factors(5)) == {(1, 2, 1, 2, 1), (2, 1, 2, 1, 2)}
    assert a.is_factor("1212") and not a.is_factor("11")


def test_automaton_fixed_points():
    a = build_automaton(ForbiddenSet(["12", "21"], 2))
    for n in (1, 2, 7):
        assert set(a.iter_factors(n)) == {(1,) * n, (2,) * n}


def test_empty_subshift():
    with pytest.raises(EmptySubshift):
        build_automaton(ForbiddenSet(["1", "2"], 2))
    with pytest.raises(EmptySubshift):
        build_automaton(ForbiddenSet(["11", "12", "21", "22"], 2))


def test_empty_forbidden_full_shift():
    a = build_automaton(ForbiddenSet([], 2))
    assert a.n_states == 1
    assert a.count_factors(5) == 32


@pytest.mark.parametrize(
    "words,alphabet,maxn",
    [
        (["11", "22"], 2, 12),
        (["12", "21"], 2, 12),
        (["212"], 2, 12),
        (SIGMA_MU2, 2, 12),
        (["13", "31", "32322", "32323"], 3, 10),
    ],
)
def test_factor_language_matches_bruteforce(words, alphabet, maxn):
    a = build_automaton(ForbiddenSet(words, alphabet))
    for n in range(maxn + 1):
        assert set(a.iter_factors(n)) == brute_factor_language(words, alphabet, n), n
        assert a.count_factors(n) == len(brute_factor_language(words, alphabet, n))


def test_factor_counts_sigma_mu2_deep():
    a = build_automaton(ForbiddenSet(SIGMA_MU2, 2))
    for n in (13, 14):
        assert a.count_factors(n) == len(brute_factor_language(SIGMA_MU2, 2, n))


# ---------------------------------------------------------------------------
# extremal extensions
# ---------------------------------------------------------------------------


def test_extremal_extension_max_from_02():
    # over {1,2,3} avoiding 13, 31, 32322, 32323, the largest continued
    # fraction beginning [0;2] is [0;2,3,2,3,2,1,ov(1,2)]
    a = build_automaton(ForbiddenSet(["13", "31", "32322", "32323"], 3))
    t = extremal_extension("2", a, goal="maximize", form="fractional")
    assert t.value == cf_periodic_tail((2, 3, 2, 3, 2, 1), (1, 2), leading=0)


def test_extremal_extension_min_from_023():
    a = build_automaton(ForbiddenSet(["13", "31", "32322", "32323"], 3))
    t = extremal_extension("23", a, goal="minimize", form="fractional")
    assert t.value == cf_periodic_tail((2, 3, 3, 2, 3, 2, 1), (1, 2), leading=0)


def test_extremal_extension_sigma_mu2_maximized():
    a = build_automaton(ForbiddenSet(SIGMA_MU2, 2))
    t = extremal_extension("221122", a, goal="maximize", form="fractional")
    per = (2, 2, 1, 1, 2, 2, 1, 1, 1, 2, 2, 1, 1, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 2)
    assert t.value == cf_periodic_tail((), per, leading=0)
    t = extremal_extension("111111", a, goal="maximize", form="fractional")
    per = (1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 1, 1, 2, 2, 1, 1, 1, 2, 2, 1, 1, 2, 2, 2)
    assert t.value == cf_periodic_tail((), per, leading=0)


def test_extremal_extension_minimized_rows_true_minima():
    # Two classically quoted "minimized with" expansions hold only inside
    # their original branch context.  Machine-checked state of affairs:
    per3 = (2, 2, 1, 1, 1, 1, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 2)
    printed3 = cf_periodic_tail((), per3, leading=2)
    per4 = (1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 1, 1, 1, 1, 2, 2, 2)
    printed4 = cf_periodic_tail((), per4, leading=2)

    # (a) under the full 8-word set the printed period-18 stream is not
    # even admissible: right after its 8-ones run it reads 222 111
    w13 = ForbiddenSet(["1111111222111"], 2)
    assert not w13.is_clean((2,) + per3 * 3)
    full = build_automaton(ForbiddenSet(SIGMA_MU2, 2))
    t = extremal_extension("222111", full, goal="minimize", form="integer")
    assert sign_of_difference(t.value, printed3) > 0

    # (b) under the six-word set actually quoted, both printed streams are
    # admissible but beaten by seven-ones-run completions
    six = build_automaton(ForbiddenSet(SIX_WORDS, 2))
    assert ForbiddenSet(SIX_WORDS, 2).is_clean((2,) + per3 * 3)
    t3 = extremal_extension("222111", six, goal="minimize", form="integer")
    assert sign_of_difference(t3.value, printed3) < 0
    t4 = extremal_extension("21111111", six, goal="minimize", form="integer")
    assert sign_of_difference(t4.value, printed4) < 0


def test_extremal_tail_beats_random_completions():
    rng = seeded(0x5F7)
    for words, alphabet in ((SIGMA_MU2, 2), (["13", "31", "32322", "32323"], 3)):
        a = build_automaton(ForbiddenSet(words, alphabet))
        for goal in (1, -1):
            for i in range(250):
                state = i % a.n_states
                pre, per = random_live_tail(a, state, rng)
                sample = cf_periodic_tail(pre, per, leading=0)
                best = a.tail_value(state, goal)
                assert goal * sign_of_difference(best, sample) >= 0


def test_tail_cycle_bound():
    for words, alphabet in ((SIGMA_MU2, 2), (["13", "31", "32322", "32323"], 3)):
        a = build_automaton(ForbiddenSet(words, alphabet))
        for auto in (a, a.transpose):
            for state in range(auto.n_states):
                for goal in (1, -1):
                    pre, per = auto.extremal_tail(state, goal)
                    assert 0 < len(pre) + len(per) <= 2 * auto.n_states


def test_dead_prefix_errors():
    a = build_automaton(ForbiddenSet(["11", "22"], 2))
    with pytest.raises(DeadPrefix):
        extremal_extension("11", a)
    with pytest.raises(DeadPrefix):
        extremal_lambda0(a, "211", 1, "max")


# ---------------------------------------------------------------------------
# extremal lambda_0 over completions
# ---------------------------------------------------------------------------


def test_extremal_lambda0_unconstrained():
    a = build_automaton(ForbiddenSet([], 2))
    # the ov(21)/ov(12)-style completions dominate everything over {1,2}:
    # a value is lowered by larger digits at odd depth, raised at even
    cases = {
        ("1", -1): QuadSurd(0, 1, 3, 1),  # [1;ov(2,1)] + [0;ov(2,1)] = sqrt3
        ("1", 1): QuadSurd(-1, 2, 3, 1),  # [1;ov(1,2)] + [0;ov(1,2)] = 2sqrt3 - 1
        ("2", -1): QuadSurd(1, 1, 3, 1),  # [2;ov(2,1)] + [0;ov(2,1)] = 1 + sqrt3
        ("2", 1): QuadSurd(0, 2, 3, 1),  # [2;ov(1,2)] + [0;ov(1,2)] = 2sqrt3
    }
    for (word, goal), expect in cases.items():
        v, wit = extremal_lambda0(a, word, 0, goal)
        assert v == expect
        assert lambda_k(wit, 0) == v


def test_extremal_lambda0_couples_sides():
    # with 212 forbidden, the two sides of a marked 1 cannot both start
    # with digit 2: independently extremal tails are jointly illegal and
    # the refinement recursion must resolve the clash.  Exact optima over
    # all periodic completions of period <= 7 (an exhaustive oracle):
    f = ForbiddenSet(["212"], 2)
    a = build_automaton(f)
    lo, lo_wit = extremal_lambda0(a, "1", 0, -1)
    hi, hi_wit = extremal_lambda0(a, "1", 0, 1)
    assert lo == QuadSurd(0, 4, 6, 5)  # 4*sqrt6/5, at ov(1112)
    assert hi == QuadSurd(0, 1, 6, 1)  # sqrt6, at ov(1121)
    assert lambda_k(lo_wit, 0) == lo and lambda_k(hi_wit, 0) == hi

    from itertools import product

    seen_lo = seen_hi = None
    for n in range(1, 8):
        for w in product((1, 2), repeat=n):
            if not f.allows_orbit(w):
                continue
            for r in range(n):
                if w[r] != 1:
                    continue
                rot = w[r:] + w[:r]
                lam = lambda_k(EpSeq(rot, rot, 0, rot), 0)
                assert sign_of_difference(lo, lam) <= 0 <= sign_of_difference(hi, lam)
                if seen_lo is None or sign_of_difference(lam, seen_lo) < 0:
                    seen_lo = lam
                if seen_hi is None or sign_of_difference(lam, seen_hi) > 0:
                    seen_hi = lam
    assert seen_lo == lo and seen_hi == hi


# ---------------------------------------------------------------------------
# supremum of the Markov value over a subshift
# ---------------------------------------------------------------------------


def test_sft_max_markov_trivial():
    a = build_automaton(ForbiddenSet(["12", "21"], 2))
    assert sft_max_markov(a).value == QuadSurd(0, 2, 2, 1)  # m(ov 2) = sqrt8
    b = build_automaton(ForbiddenSet(["11", "22"], 2))
    mm = sft_max_markov(b)
    assert mm.value == QuadSurd(0, 2, 3, 1)  # m(ov 12) = 2 sqrt3
    assert mm.value == markov_value(EpSeq("12", "2", 0, "12")).value


def test_sft_max_markov_sigma_mu2():
    mu2_word = "111221122211111112221122"
    a = build_automaton(ForbiddenSet(SIGMA_MU2, 2))
    mm = sft_max_markov(a)
    orbit = markov_value(EpSeq(mu2_word, mu2_word, 0, mu2_word))
    assert mm.value == orbit.value
    assert matches_decimal(mm.value, "3.037311")
    # the maximizing witness is the periodic sequence itself
    assert canonical_orbit(mm.witness.left) == canonical_orbit(mu2_word)
    assert canonical_orbit(mm.witness.right) == canonical_orbit(mu2_word)
    assert markov_value(mm.witness).value == mm.value
