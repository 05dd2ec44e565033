import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import member, point_orbit, probe_points, word_pieces
from qextend.errors import AnotSubsetOfI, UNotNontrivial, UNotSubsetOfI, XNotInI
from qextend.extend import apply_e, cover, iterate_e, orbit_of_point, orbit_words, ratio_condition
from qextend.intervals import Interval, IntervalUnion, parse_union
from qextend.scales import make_scale_set

T = make_scale_set([F(1, 2), 3])
I_OPEN = Interval(1, 8, False, False)
I_CLOSED = Interval(F(1, 2), F(5, 2))



# -- apply_e -------------------------------------------------------------------


def test_apply_e_scale_and_clip():
    A = parse_union("(2, 11/5)")
    assert apply_e(A, T, I_OPEN) == parse_union("(1, 11/10) U (2, 11/5) U (4, 22/5) U (6, 33/5)")


def test_apply_e_singleton():
    assert apply_e(IntervalUnion.points([1]), T, I_CLOSED) == IntervalUnion.points([F(1, 2), 1, 2])


def test_apply_e_whole_interval_is_fixed():
    whole = IntervalUnion.of(I_CLOSED)
    assert apply_e(whole, T, I_CLOSED) == whole


def test_apply_e_flags_follow_scaling():
    A = parse_union("(1, 2]")
    out = apply_e(A, T, Interval(F(1, 10), 100))
    assert Interval(3, 6, False, True) in out.pieces or F(6) in out
    assert F(6) in out and F(3) not in apply_e(parse_union("(1, 11/10]"), T, Interval(F(1, 10), 100))


def test_apply_e_requires_subset():
    with pytest.raises(AnotSubsetOfI):
        apply_e(parse_union("[1, 9]"), T, I_OPEN)
    with pytest.raises(AnotSubsetOfI):
        apply_e(parse_union("[1, 2]"), T, I_OPEN)  # 1 is not in (1, 8)


def test_apply_e_rejects_degenerate_interval():
    with pytest.raises(ValueError):
        apply_e(IntervalUnion.points([1]), T, Interval(1, 1))


# -- cover ---------------------------------------------------------------------------


def test_cover_above_ratio_fills_interval():
    r = cover(parse_union("(2, 11/5)"), T, I_OPEN, max_rounds=40, eps=0.01)
    assert r.uncovered_log_length < 0.01 and r.rounds_used <= 40
    assert r.covered_within_eps
    assert r.ratio_condition.prediction.startswith("full coverage")
    assert all(b <= a + 1e-15 for a, b in zip(r.history, r.history[1:]))


def test_cover_below_ratio_reaches_fixpoint():
    r = cover(parse_union("(15/16, 1)"), T, I_CLOSED)
    assert r.converged and r.uncovered
    assert r.covered == parse_union("(5/8, 2/3) U (15/16, 1) U (5/4, 4/3) U (15/8, 2)")
    assert iterate_e(r.covered, T, I_CLOSED, 10) == r.covered
    assert r.ratio_condition.prediction.startswith("no prediction")


def test_cover_trivial():
    r = cover(IntervalUnion.of(I_CLOSED), T, I_CLOSED)
    assert r.rounds_used == 0 and r.converged and not r.uncovered


def test_cover_errors():
    with pytest.raises(UNotNontrivial):
        cover(IntervalUnion.points([1]), T, I_CLOSED)
    with pytest.raises(UNotSubsetOfI):
        cover(parse_union("(2, 3)"), T, I_CLOSED)


def test_cover_covered_and_uncovered_partition():
    r = cover(parse_union("(2, 11/5)"), T, I_OPEN, max_rounds=6)
    assert not r.covered.intersect(r.uncovered)
    assert r.covered.union(r.uncovered) == IntervalUnion.of(I_OPEN)


def test_ratio_condition_boundary():
    assert ratio_condition(Interval(F(1, 2), 3), T).prediction.startswith("no prediction (ratio equals")


def test_endpoint_reached_when_small_step_fits():
    # ratio 8 > 6 and 2 ∈ T* ∩ (1, 8): the closed left end 1 = 2·(1/2) is reached
    I = Interval(1, 8, True, False)
    r = cover(parse_union("(2, 11/5)"), T, I, max_rounds=60)
    assert F(1) in r.covered and r.covered == IntervalUnion.of(I)


# -- orbits ---------------------------------------------------------------------------


def test_orbit_examples():
    assert orbit_of_point(1, T, I_CLOSED, 2) == (F(1, 2), F(2, 3), 1, F(3, 2), 2)
    assert orbit_of_point(2, T, I_CLOSED, 1) == (F(2, 3), 1, 2)
    assert orbit_of_point(F(7, 5), T, I_CLOSED, 0) == (F(7, 5),)
    with pytest.raises(XNotInI):
        orbit_of_point(3, T, I_CLOSED, 1)


def test_orbit_words_are_valid_paths():
    words = orbit_words(1, T, I_CLOSED, 5)
    for y, w in words.items():
        x = F(1)
        for t in w:
            x *= t
            assert x in I_CLOSED
        assert x == y


def test_orbit_matches_singleton_iteration():
    for x in [F(1), F(2), F(3, 5), F(9, 4)]:
        for n in range(4):
            pts = set(orbit_of_point(x, T, I_CLOSED, n))
            assert IntervalUnion.points(pts) == iterate_e(IntervalUnion.points([x]), T, I_CLOSED, n)
            assert pts == point_orbit(x, [F(1, 2), 3], F(1, 2), F(5, 2), n)


# -- properties -----------------------------------------------------------------------

fr = st.fractions(min_value=F(1, 4), max_value=6, max_denominator=8)
gens_st = st.lists(st.sampled_from([F(1, 2), 3, 2, F(3, 2), F(2, 3), F(5, 4), 5]), min_size=1, max_size=2)


@st.composite
def instance(draw):
    a, b = sorted([draw(fr), draw(fr)])
    if a == b:
        b = a * 2
    I = (a, b, draw(st.booleans()), draw(st.booleans()))
    pieces = []
    for _ in range(draw(st.integers(1, 2))):
        u, v = sorted([draw(fr), draw(fr)])
        cand = (max(u, a), min(v, b), draw(st.booleans()), draw(st.booleans()))
        if cand[0] < cand[1]:
            pieces.append(cand)
    iv = Interval(*I)
    U = IntervalUnion.of(*(Interval(*p) for p in pieces)).intersect(iv)
    return draw(gens_st), I, U


def _tup_list(u):
    return [(p.lo, p.hi, p.lo_closed, p.hi_closed) for p in u]


@settings(max_examples=120, deadline=None)
@given(instance(), st.integers(1, 3))
def test_iterates_match_word_enumeration(inst, n):
    gens, I, U = inst
    Ts = make_scale_set(gens)
    iv = Interval(*I)
    got = iterate_e(U, Ts, iv, n)
    ref = word_pieces(_tup_list(U), gens, I, n)
    probes = probe_points(ref + _tup_list(got) + [I])
    for x in probes:
        assert (x in got) == member(x, ref), (x, gens, I, str(U), n)


@settings(max_examples=120, deadline=None)
@given(instance(), instance())
def test_apply_e_monotone(a, b):
    gens, I, U = a
    Ts = make_scale_set(gens)
    iv = Interval(*I)
    E = apply_e(U, Ts, iv)
    assert U.issubset(E)
    V = U.union(b[2].intersect(iv))
    assert E.issubset(apply_e(V, Ts, iv))


def test_coverage_consistent_with_ratio_random():
    rng = random.Random(17)
    for _ in range(15):
        lo = F(rng.randint(1, 6), rng.randint(2, 6))
        above = lo * F(rng.randint(61, 90), 10)
        below = lo * F(rng.randint(12, 59), 10)
        for hi, full in ((above, True), (below, False)):
            I = Interval(lo, hi, False, False)
            mid = lo * F(11, 10)
            r = cover(IntervalUnion.of(Interval(mid, mid * F(21, 20), False, False)), T, I, max_rounds=60)
            if full:
                assert r.uncovered_log_length <= 0.01
            else:
                assert r.converged and r.uncovered
                assert iterate_e(r.covered, T, I, 10) == r.covered
