import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_m_fold, naive_subset_sums, naive_sumset, naive_translate
from sumsetlab.groups import GroupSpec, encode, parse_group_spec
from sumsetlab.setops import (
    ElementMultiset,
    GroupSet,
    SpecMismatchError,
    is_cover,
    m_fold,
    set_from_json,
    set_to_json,
    subset_sums,
    sumset,
    translate,
)

Z5 = GroupSpec((5,))


def gset(spec, coords):
    return GroupSet.from_coords(spec, coords)


@st.composite
def spec_with_sets(draw, n_sets=2, max_order=256):
    factors = draw(
        st.lists(st.integers(2, 12), min_size=1, max_size=3).filter(
            lambda f: math.prod(f) <= max_order
        )
    )
    spec = GroupSpec(tuple(factors))
    sets = tuple(
        GroupSet(spec, draw(st.integers(0, (1 << spec.order) - 1))) for _ in range(n_sets)
    )
    return (spec, *sets)


# ---------------------------------------------------------------------------
# GroupSet basics


def test_constructors_and_views():
    spec = GroupSpec((6, 10))
    a = gset(spec, [(0, 0), (1, 2), (5, 9)])
    assert a.card == 3
    assert len(a) == 3
    assert a.coords() == [(0, 0), (1, 2), (5, 9)]
    assert list(a) == [0, 13, 59]
    assert 13 in a and 14 not in a
    assert GroupSet.from_indices(spec, [0, 13, 59]) == a
    assert GroupSet.empty(spec).card == 0
    assert GroupSet.full(spec).card == 60
    assert GroupSet.identity(spec).coords() == [(0, 0)]


def test_bitmask_validation():
    spec = GroupSpec((5,))
    with pytest.raises(ValueError):
        GroupSet(spec, 1 << 5)
    with pytest.raises(ValueError):
        GroupSet(spec, -1)
    with pytest.raises(ValueError):
        GroupSet.from_indices(spec, [5])


def test_card_tracks_population_count():
    spec = GroupSpec((3, 3))
    for bits in range(1 << 9):
        assert GroupSet(spec, bits).card == bin(bits).count("1")


# ---------------------------------------------------------------------------
# translate


def test_translate_examples():
    a = gset(Z5, [(0,), (1,)])
    assert translate(a, 0) == a
    assert sorted(translate(a, 4).indices()) == [0, 4]


@settings(max_examples=60)
@given(spec_with_sets(n_sets=1), st.data())
def test_translate_matches_naive(args, data):
    spec, a = args
    g = data.draw(st.integers(0, spec.order - 1))
    got = frozenset(translate(a, g).coords())
    from sumsetlab.groups import decode

    assert got == naive_translate(spec.factors, a.coords(), decode(spec, g))
    assert translate(a, g).card == a.card


# ---------------------------------------------------------------------------
# sumset


def test_sumset_examples():
    a = gset(Z5, [(0,), (1,)])
    b = gset(Z5, [(0,), (2,)])
    assert sorted(sumset(a, b).indices()) == [0, 1, 2, 3]
    assert sumset(a, GroupSet.identity(Z5)) == a
    assert sumset(a, GroupSet.empty(Z5)).card == 0
    assert sumset(GroupSet.empty(Z5), a).card == 0


def test_sumset_spec_mismatch():
    a = GroupSet.full(GroupSpec((5,)))
    b = GroupSet.full(GroupSpec((7,)))
    with pytest.raises(SpecMismatchError):
        sumset(a, b)


@settings(max_examples=100)
@given(spec_with_sets(n_sets=2))
def test_sumset_matches_naive(args):
    spec, a, b = args
    got = frozenset(sumset(a, b).coords())
    assert got == naive_sumset(spec.factors, a.coords(), b.coords())


@settings(max_examples=60)
@given(spec_with_sets(n_sets=3))
def test_sumset_commutative_associative(args):
    spec, a, b, c = args
    assert sumset(a, b) == sumset(b, a)
    assert sumset(sumset(a, b), c) == sumset(a, sumset(b, c))


def test_sumset_laws_exhaustive_small_orders():
    """Commutativity/associativity spot-checked across every order up to 256."""
    rng = random.Random(7)
    for n in range(1, 257):
        if n == 1:
            continue  # factors must be >= 2
        spec = GroupSpec((n,))
        full = (1 << n) - 1
        a = GroupSet(spec, rng.randint(0, full))
        b = GroupSet(spec, rng.randint(0, full))
        c = GroupSet(spec, rng.randint(0, full))
        assert sumset(a, b) == sumset(b, a)
        assert sumset(sumset(a, b), c) == sumset(a, sumset(b, c))


@settings(max_examples=60)
@given(spec_with_sets(n_sets=2), st.data())
def test_sumset_monotone(args, data):
    spec, a, b = args
    sub_bits = a.bits & data.draw(st.integers(0, (1 << spec.order) - 1))
    sub = GroupSet(spec, sub_bits)
    assert sumset(sub, b).bits & sumset(a, b).bits == sumset(sub, b).bits


@settings(max_examples=60)
@given(spec_with_sets(n_sets=2))
def test_sumset_size_bounds(args):
    spec, a, b = args
    if a.card == 0 or b.card == 0:
        assert sumset(a, b).card == 0
        return
    s = sumset(a, b)
    assert max(a.card, b.card) <= s.card <= min(a.card * b.card, spec.order)


# ---------------------------------------------------------------------------
# m_fold


def test_m_fold_examples():
    a = gset(Z5, [(0,), (1,)])
    assert is_cover(m_fold(a, 4))
    assert m_fold(a, 1) == a
    assert m_fold(a, 0) == GroupSet.identity(Z5)
    ident = GroupSet.identity(Z5)
    for m in range(5):
        assert m_fold(ident, m) == ident
    with pytest.raises(ValueError):
        m_fold(a, -1)


@settings(max_examples=80, deadline=None)
@given(spec_with_sets(n_sets=1, max_order=125), st.integers(0, 8))
def test_m_fold_matches_naive(args, m):
    spec, a = args
    got = frozenset(m_fold(a, m).coords())
    assert got == naive_m_fold(spec.factors, a.coords(), m)


# ---------------------------------------------------------------------------
# subset_sums and multisets


def test_multiset_normalization():
    spec = GroupSpec((3,))
    b = ElementMultiset(spec, ((1, 1), (1, 1), (2, 3)))
    assert b.entries == ((1, 2), (2, 3))
    assert b.size == 5
    assert b.expand() == [1, 1, 2, 2, 2]
    with pytest.raises(ValueError):
        ElementMultiset(spec, ((0, 0),))
    with pytest.raises(ValueError):
        ElementMultiset(spec, ((7, 1),))


def test_subset_sums_examples():
    spec = GroupSpec((3,))
    b = ElementMultiset(spec, ((1, 2),))
    assert sorted(subset_sums(b).indices()) == [0, 1, 2]

    spec2 = GroupSpec((3, 3))
    b2 = ElementMultiset.from_coords(spec2, [(1, 0), (0, 1)])
    assert frozenset(subset_sums(b2).coords()) == {(0, 0), (1, 0), (0, 1), (1, 1)}

    empty = ElementMultiset(spec, ())
    assert subset_sums(empty) == GroupSet.identity(spec)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_subset_sums_matches_naive(data):
    factors = tuple(data.draw(st.lists(st.integers(2, 7), min_size=1, max_size=2)))
    spec = GroupSpec(factors)
    size = data.draw(st.integers(0, 9))
    idxs = data.draw(st.lists(st.integers(0, spec.order - 1), min_size=size, max_size=size))
    b = ElementMultiset.from_indices(spec, idxs)
    got = frozenset(subset_sums(b).coords())
    from sumsetlab.groups import decode

    assert got == naive_subset_sums(spec.factors, [decode(spec, x) for x in idxs])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_subset_sums_decomposition(data):
    """S(B1 u B2) = S(B1) + S(B2), the closure-splitting identity."""
    spec = GroupSpec((data.draw(st.integers(2, 30)),))
    idx = st.integers(0, spec.order - 1)
    b1 = ElementMultiset.from_indices(spec, data.draw(st.lists(idx, max_size=6)))
    b2 = ElementMultiset.from_indices(spec, data.draw(st.lists(idx, max_size=6)))
    assert subset_sums(b1.union(b2)) == sumset(subset_sums(b1), subset_sums(b2))


# ---------------------------------------------------------------------------
# is_cover


def test_is_cover():
    assert is_cover(GroupSet.full(Z5))
    assert not is_cover(GroupSet.empty(Z5))
    assert is_cover(m_fold(gset(Z5, [(0,), (1,)]), 4))


# ---------------------------------------------------------------------------
# JSON round trips


def test_json_round_trips():
    spec = parse_group_spec("Z6xZ10")
    a = gset(spec, [(0, 0), (1, 2), (5, 9)])
    for form in ("bitmask", "elements"):
        payload = set_to_json(a, form=form)
        assert set_from_json(spec, payload) == a
    assert set_to_json(a, form="bitmask")["bitmask_hex"] == a.bits.to_bytes(8, "little").hex()


def test_json_both_forms_equal():
    spec = parse_group_spec("Z3^4")
    a = GroupSet(spec, random.Random(0).getrandbits(81))
    from_mask = set_from_json(spec, set_to_json(a, form="bitmask"))
    from_elems = set_from_json(spec, set_to_json(a, form="elements"))
    assert from_mask == from_elems == a


def test_json_errors():
    spec = parse_group_spec("Z5")
    with pytest.raises(ValueError, match="exactly one"):
        set_from_json(spec, {})
    with pytest.raises(ValueError, match="exactly one"):
        set_from_json(spec, {"elements": [], "bitmask_hex": "00"})
    with pytest.raises(ValueError, match=r"\[7\]"):
        set_from_json(spec, {"elements": [[0], [7]]})
    with pytest.raises(ValueError, match="length mismatch"):
        set_from_json(spec, {"bitmask_hex": "0000"})
    with pytest.raises(ValueError, match="hex"):
        set_from_json(spec, {"bitmask_hex": "zz"})
    with pytest.raises(ValueError, match="beyond"):
        set_from_json(spec, {"bitmask_hex": "ff"})  # bits 5..7 out of range for Z5
