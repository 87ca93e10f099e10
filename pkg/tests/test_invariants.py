from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from treesimple.codes import almost_biregular_code, biregular_code, extend_code
from treesimple.invariants import (MissingBlock, OutOfRange, ShapeViolation, L_inf, L_m,
                                   check_block_shape, color_bound, find_forbidden_config, gen_tn,
                                   i_sequence, linear_gaps, occurrences, offaxis_shape_check,
                                   rotation_lower_bound, same_cyclic, shape_row, star_sequence,
                                   substitute_blocks, two_rotation_shape_check,
                                   unboundedness_certificates, zgap_sequence)
from treesimple.typecalc import heart_word, make_type

words = st.lists(st.integers(0, 3), min_size=1, max_size=16)


def test_gaps_small():
    assert linear_gaps((0, 1, 0, 1, 1), 0) == [2, 3]
    assert linear_gaps((0, 1, 0, 1, 1), 1, start=3) == [1, 2, 2]
    assert list(i_sequence((0, 1, 0, 1, 1), 1)) == [2, 1, 2]
    assert list(i_sequence((1, 2), 0)) == []


@given(words, st.integers(0, 3))
def test_gaps_sum_to_length(w, i):
    g = i_sequence(w, i)
    assert len(g) == occurrences(w, i)
    if len(g):
        assert sum(g) == len(w)


@given(words, st.integers(0, 3))
def test_L_inf_bounds(w, i):
    L = L_inf(w, i)
    assert 0 <= L <= occurrences(w, i) and L % 2 == 0
    assert L == sum(L_m(w, i, m) for m in set(i_sequence(w, i)))


def test_t2_and_lower_bound():
    t2 = gen_tn(2)
    assert t2 == (1, 2, 1, 0, 1, 2, 1, 2, 1, 0)
    cert = rotation_lower_bound(t2)
    # 0-sequence [6,4]: N = 2, nothing paired, (2 + 6 - 0) / 4 = 2
    assert cert.color == 0 and (cert.N, cert.Linf, cert.raw, cert.bound) == (2, 0, Fraction(2), 2)
    assert color_bound(t2, 1) == Fraction(5 + 6 - 4, 4)


def test_tn_lengths():
    # |t_{n+1}| = |t_n| + 4 + 4(2n - 1) + 2
    for n in range(2, 12):
        assert len(gen_tn(n + 1)) == len(gen_tn(n)) + 8 * n + 2
        assert occurrences(gen_tn(n), 0) == 2 * (n - 1)
    with pytest.raises(OutOfRange):
        gen_tn(1)
    with pytest.raises(OutOfRange):
        gen_tn(65)


def test_star_sequence_small():
    assert star_sequence(2) == [10, 6, 8, 4]
    assert star_sequence(3) == [14, 10, 6, 8, 12, 4]
    assert zgap_sequence(2, 2, 4) == [2 + 4 * 4, 2 + 2 * 4, 2 + 3 * 4, 2 + 4]


def test_same_cyclic():
    assert same_cyclic([1, 2, 3], [3, 1, 2])
    assert not same_cyclic([1, 2, 3], [3, 2, 1])


def test_block_shape():
    check_block_shape(())
    check_block_shape((1, 0))
    check_block_shape((1, 3, 1, 3))
    with pytest.raises(ShapeViolation):
        check_block_shape((1, 3, 2))
    with pytest.raises(ShapeViolation):
        check_block_shape((1, 2, 3, 4))


def test_substitute_blocks():
    t = substitute_blocks((1, 0, 2), {0: (5, 6), 1: (), 2: (5, 7, 8, 7)})
    assert t == make_type((5, 6, 5, 7, 8, 7))
    with pytest.raises(MissingBlock):
        substitute_blocks((1, 0, 2), {0: (5, 6)})
    with pytest.raises(ShapeViolation):
        substitute_blocks((0, 2), {0: (5, 6), 2: (6, 5)})


WITNESS = extend_code(almost_biregular_code(3, 3, 2), {1: (2, 2)}, "c")


def test_forbidden_config_found():
    cfg = find_forbidden_config(WITNESS)
    assert cfg is not None
    b = cfg.blocks
    for w in b.values():
        check_block_shape(w)
    assert cfg.p == len(b[0]) + len(b[1]) and cfg.q == len(b[1]) + len(b[2])
    assert cfg.p % 2 == 0 and cfg.q % 2 == 0 and cfg.q > 0
    # z occurs exactly once, at the end of the spur block
    assert sum(w.count(cfg.z_color) for w in b.values()) == 1
    assert b[0][1:].count(cfg.z_color) == 1


def test_no_forbidden_config_in_biregular():
    assert find_forbidden_config(biregular_code(3, 3)) is None
    assert find_forbidden_config(almost_biregular_code(3, 4, 3)) is None


def test_unboundedness_certificates():
    cfg = find_forbidden_config(WITNESS)
    certs = unboundedness_certificates(cfg, 10)
    assert [c.n for c in certs] == list(range(2, 11))
    raws = [c.cert.raw for c in certs]
    assert all(b > a for a, b in zip(raws, raws[1:]))
    with pytest.raises(OutOfRange):
        unboundedness_certificates(cfg, 1)


def test_shape_rows():
    assert shape_row((0, 1, 0), 0) == 1
    assert shape_row((0, 1, 2), 0) == 2
    assert shape_row((1, 2, 0), 0) == 3
    assert shape_row((1, 0, 2), 0) == 4


@given(st.lists(st.integers(0, 3), min_size=2, max_size=7), st.integers(0, 3))
def test_two_rotation_shapes(path, i):
    if i not in path:
        return
    row, ok = two_rotation_shape_check(path, i)
    assert ok and row == shape_row(path, i)


@given(st.lists(st.integers(0, 3), min_size=2, max_size=6),
       st.lists(st.integers(0, 3), min_size=0, max_size=8), st.integers(0, 3))
def test_offaxis_shapes(spur, rest, i):
    reading = (spur[0], *rest)
    res = offaxis_shape_check(spur, reading, i)
    if i not in heart_word(spur) or i not in reading:
        assert res is None
    else:
        assert res[1]
