import itertools

import pytest
from hypothesis import given, strategies as st

from treesimple.codes import (ALMOST_BIREGULAR, DEGENERATE, INDETERMINATE, WITNESS,
                              CodeFormatError, DisconnectedColorGraph, EmptyAlphabet,
                              ZeroAsymmetry, almost_biregular_code, biregular_code,
                              bounded_constant_from_K, classify_code, extend_code, format_code,
                              is_almost_biregular, is_almost_biregular_bruteforce, is_biregular,
                              parse_code, ramification_colors, validate_code)


def test_biregular_shape():
    c = biregular_code(3, 5)
    assert c.size == 2 and c.a(0, 1) == 3 and c.a(1, 0) == 5
    assert is_biregular(c) == (3, 5)
    assert is_almost_biregular(c) == (3, 5, 1)


def test_zero_asymmetry_reported():
    with pytest.raises(ZeroAsymmetry) as e:
        validate_code([[0, 3], [0, 0]])
    assert (e.value.i, e.value.j) in {(0, 1), (1, 0)}


def test_disconnected_reported():
    with pytest.raises(DisconnectedColorGraph):
        validate_code([[2, 0], [0, 2]])


def test_empty_alphabet():
    with pytest.raises(EmptyAlphabet):
        validate_code([])
    with pytest.raises(EmptyAlphabet):
        parse_code("# nothing\n")


def test_parse_round_trip():
    text = "# comment\ncolors: a b\na b 3\nb a 4\n"
    c = parse_code(text)
    assert c.names == ("a", "b")
    assert parse_code(format_code(c)) == c


@pytest.mark.parametrize("text", [
    "a b 3\n",
    "colors: a b\na b\n",
    "colors: a b\na q 3\n",
    "colors: a b\na b x\n",
    "colors: a b\na b 3\na b 3\nb a 3\n",
    "colors: a a\n",
])
def test_parse_errors(text):
    with pytest.raises((CodeFormatError, EmptyAlphabet)):
        parse_code(text)


@pytest.mark.parametrize("n,m,k", [(3, 3, 1), (3, 4, 2), (5, 3, 3), (4, 4, 4)])
def test_almost_biregular_recognized(n, m, k):
    c = almost_biregular_code(n, m, k)
    assert is_almost_biregular(c) == (n, m, k)
    assert ramification_colors(c) == {0, k}


def test_relabeled_almost_biregular():
    c = almost_biregular_code(3, 4, 3)
    for perm in itertools.permutations(range(4)):
        r = c.relabel(perm)
        hit = is_almost_biregular(r)
        assert hit is not None and sorted(hit[:2]) == [3, 4] and hit[2] == 3


def test_not_almost_biregular():
    assert is_almost_biregular(biregular_code(2, 3)) is None
    witness = extend_code(almost_biregular_code(3, 3, 2), {1: (2, 2)})
    assert is_almost_biregular(witness) is None


def test_bounded_constant():
    assert bounded_constant_from_K(2) == 32
    assert bounded_constant_from_K(3) == 72


def test_classify_verdicts():
    assert classify_code(biregular_code(3, 3)).verdict == ALMOST_BIREGULAR
    assert classify_code(biregular_code(3, 3)).certificate["constant"] == 32
    assert classify_code(validate_code([[2]])).verdict == DEGENERATE
    w = extend_code(almost_biregular_code(3, 3, 2), {1: (2, 2)})
    assert classify_code(w).verdict == WITNESS


# -- random small codes ------------------------------------------------------

@st.composite
def raw_codes(draw, max_colors=6, max_deg=5):
    n = draw(st.integers(1, max_colors))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if draw(st.booleans()):
                rows[i][j] = draw(st.integers(1, max_deg))
                rows[j][i] = draw(st.integers(1, max_deg)) if i != j else rows[i][j]
    return rows


@st.composite
def valid_codes(draw):
    n = draw(st.integers(1, 5))
    rows = [[0] * n for _ in range(n)]
    # spanning tree first so the color graph is connected
    for j in range(1, n):
        i = draw(st.integers(0, j - 1))
        rows[i][j] = draw(st.integers(1, 4))
        rows[j][i] = draw(st.integers(1, 4))
    for i in range(n):
        for j in range(i, n):
            if not rows[i][j] and draw(st.integers(0, 3)) == 0:
                rows[i][j] = draw(st.integers(1, 4))
                rows[j][i] = draw(st.integers(1, 4)) if i != j else rows[i][j]
    return validate_code(rows)


@given(raw_codes())
def test_validate_accepts_exactly_valid(rows):
    n = len(rows)
    sym = all((rows[i][j] == 0) == (rows[j][i] == 0) for i in range(n) for j in range(n))
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for v in range(n):
            if rows[u][v] and v not in seen:
                seen.add(v)
                stack.append(v)
    ok = sym and len(seen) == n
    try:
        validate_code(rows)
        accepted = True
    except (ZeroAsymmetry, DisconnectedColorGraph):
        accepted = False
    assert accepted == ok


@given(valid_codes())
def test_almost_biregular_matches_bruteforce(code):
    assert is_almost_biregular(code) == is_almost_biregular_bruteforce(code)


@given(valid_codes())
def test_almost_biregular_postcondition(code):
    hit = is_almost_biregular(code)
    if hit is not None:
        n, m, k = hit
        assert n >= 3 and m >= 3
        assert len(ramification_colors(code)) == 2


@given(valid_codes())
def test_classify_total_and_exclusive(code):
    r = classify_code(code)
    assert r.verdict in {ALMOST_BIREGULAR, WITNESS, DEGENERATE, INDETERMINATE}
    if is_almost_biregular(code) is not None:
        assert r.verdict == ALMOST_BIREGULAR


@given(valid_codes(), st.randoms(use_true_random=False))
def test_classify_relabel_invariant(code, rnd):
    perm = list(code.colors)
    rnd.shuffle(perm)
    assert classify_code(code.relabel(perm)).verdict == classify_code(code).verdict
