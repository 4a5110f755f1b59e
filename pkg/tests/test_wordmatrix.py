import random

import pytest
from hypothesis import given, strategies as st

from dynconn import wordmatrix as wm
from dynconn.wordmatrix import rows_to_word as R, word_to_rows

import reference as ref

H_VALUES = [2, 4, 6, 8]
MASKS = {h: wm.build_masks(h, 64) for h in H_VALUES}


def words(h):
    return st.integers(min_value=0, max_value=(1 << (h * h)) - 1)


def test_mu_and_nu_for_h4():
    m = wm.build_masks(4)
    assert m.mu == 0b1111000011110000
    assert m.nu[1] == 0b0111011101110111


def test_nu0_selects_everything_for_h2():
    m = wm.build_masks(2)
    assert m.nu[0] == 0b1111


@pytest.mark.parametrize("h", H_VALUES)
def test_nu_popcounts(h):
    m = MASKS[h]
    for k in range(h + 1):
        assert bin(m.nu[k]).count("1") == h * (h - k)


@pytest.mark.parametrize("h,w", [(3, 64), (10, 64), (0, 64)])
def test_bad_h_rejected(h, w):
    with pytest.raises(ValueError):
        wm.build_masks(h, w)


m4 = wm.build_masks(4)


def test_insert_zero_row_examples():
    a = R(["1010", "0110", "0001", "0000"], 4)
    assert word_to_rows(wm.insert_zero_row(a, 1, m4), 4) == ["1010", "0000", "0110", "0001"]
    full = R(["1111"] * 4, 4)
    assert word_to_rows(wm.insert_zero_row(full, 0, m4), 4) == ["0000", "1111", "1111", "1111"]
    for k in range(4):
        assert wm.insert_zero_row(0, k, m4) == 0


def test_insert_zero_col_examples():
    a = R(["1111", "0000", "1010", "0001"], 4)
    assert word_to_rows(wm.insert_zero_col(a, 2, m4), 4) == ["1101", "0000", "1001", "0000"]
    ident = R(["1000", "0100", "0010", "0001"], 4)
    assert word_to_rows(wm.insert_zero_col(ident, 0, m4), 4) == ["0100", "0010", "0001", "0000"]
    for k in range(4):
        assert wm.insert_zero_col(0, k, m4) == 0


def test_copy_interval_examples():
    src = R(["1100", "0011", "0000", "0000"], 4)
    assert word_to_rows(wm.copy_row_interval(src, 0, 0, 2, 2, m4), 4) == ["0000", "0000", "1100", "0011"]
    col0 = R(["1000"] * 4, 4)
    assert word_to_rows(wm.copy_col_interval(col0, 0, 0, 1, 3, m4), 4) == ["0001"] * 4
    dst = 0b1010010100001111
    assert wm.copy_row_interval(src, dst, 1, 1, 0, m4) == dst
    assert wm.copy_col_interval(src, dst, 2, 2, 0, m4) == dst
    assert wm.copy_row_interval(dst, dst, 0, 4, 0, m4) == dst
    assert wm.copy_col_interval(dst, dst, 0, 4, 0, m4) == dst


def test_copy_overflow_rejected():
    with pytest.raises(wm.MatrixIndexError):
        wm.copy_row_interval(1, 0, 0, 3, 2, m4)
    with pytest.raises(wm.MatrixIndexError):
        wm.copy_col_interval(1, 0, 1, 4, 2, m4)


def test_merge_examples():
    a = R(["0011", "0101", "1000", "0001"], 4)
    assert word_to_rows(wm.merge_rows(a, 0, m4), 4) == ["0111", "1000", "0001", "0000"]
    t = ref.from_array(ref.to_array(a, 4).T)
    merged = wm.merge_cols(t, 0, m4)
    assert ref.to_array(merged, 4).T.tolist() == ref.to_array(wm.merge_rows(a, 0, m4), 4).tolist()
    assert wm.merge_rows(0, 2, m4) == 0 and wm.merge_cols(0, 2, m4) == 0
    same = R(["1001", "1001", "0110", "0000"], 4)
    assert word_to_rows(wm.merge_rows(same, 0, m4), 4) == ["1001", "0110", "0000", "0000"]
    with pytest.raises(wm.MatrixIndexError):
        wm.merge_rows(a, 3, m4)


def test_find_one_examples():
    assert wm.find_one(0, m4) is None
    assert wm.find_one(wm.set_bit(0, 2, 3, m4), m4) == (2, 3)
    a = wm.set_bit(wm.set_bit(0, 1, 3, m4), 2, 0, m4)
    assert wm.find_one(a, m4) == (1, 3)


def test_bit_addressing():
    a = wm.set_bit(0, 1, 2, m4)
    assert wm.get_bit(a, 1, 2, m4) == 1
    assert wm.get_bit(wm.clear_bit(a, 1, 2, m4), 1, 2, m4) == 0
    with pytest.raises(wm.MatrixIndexError):
        wm.get_bit(a, 4, 0, m4)


@pytest.mark.parametrize("h", H_VALUES)
def test_random_bit_sequence_matches_oracle(h):
    m = MASKS[h]
    rng = random.Random(h)
    a = 0
    arr = ref.to_array(0, h)
    for _ in range(300):
        k, l = rng.randrange(h), rng.randrange(h)
        if rng.random() < 0.6:
            a = wm.set_bit(a, k, l, m)
            arr[k, l] = True
        else:
            a = wm.clear_bit(a, k, l, m)
            arr[k, l] = False
        assert a == ref.from_array(arr)


@st.composite
def matrix_and_index(draw, span=0):
    h = draw(st.sampled_from(H_VALUES))
    a = draw(words(h))
    k = draw(st.integers(0, h - 1 - span))
    return h, a, k


@given(matrix_and_index())
def test_insert_zero_row_matches_oracle(args):
    h, a, k = args
    out = wm.insert_zero_row(a, k, MASKS[h])
    assert out == ref.from_array(ref.insert_zero_row(ref.to_array(a, h), k))
    assert out >> (h * h) == 0


@given(matrix_and_index())
def test_insert_zero_col_matches_oracle(args):
    h, a, k = args
    out = wm.insert_zero_col(a, k, MASKS[h])
    assert out == ref.from_array(ref.insert_zero_col(ref.to_array(a, h), k))
    assert out >> (h * h) == 0


@given(matrix_and_index(span=1))
def test_merges_match_oracle(args):
    h, a, k = args
    m = MASKS[h]
    arr = ref.to_array(a, h)
    assert wm.merge_rows(a, k, m) == ref.from_array(ref.merge_rows(arr, k))
    assert wm.merge_cols(a, k, m) == ref.from_array(ref.merge_cols(arr, k))


@given(st.data())
def test_interval_copies_match_oracle(data):
    h = data.draw(st.sampled_from(H_VALUES))
    m = MASKS[h]
    src, dst = data.draw(words(h)), data.draw(words(h))
    a = data.draw(st.integers(0, h))
    b = data.draw(st.integers(a, h))
    t = data.draw(st.integers(0, h - (b - a)))
    s_arr, d_arr = ref.to_array(src, h), ref.to_array(dst, h)
    assert wm.copy_row_interval(src, dst, a, b, t, m) == ref.from_array(ref.copy_rows(s_arr, d_arr, a, b, t))
    assert wm.copy_col_interval(src, dst, a, b, t, m) == ref.from_array(ref.copy_cols(s_arr, d_arr, a, b, t))


@given(matrix_and_index(span=1))
def test_open_then_merge_restores(args):
    h, a, k = args
    m = MASKS[h]
    if wm.find_one(a & m.rows[h - 1], m) is None:
        assert wm.merge_rows(wm.insert_zero_row(a, k, m), k, m) == a


@given(st.sampled_from(H_VALUES).flatmap(lambda h: st.tuples(st.just(h), words(h))))
def test_find_one_matches_scan(args):
    h, a = args
    assert wm.find_one(a, MASKS[h]) == ref.find_one(ref.to_array(a, h))
