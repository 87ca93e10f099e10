import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treesimple.codes import almost_biregular_code, biregular_code, validate_code
from treesimple.treeengine import (Ball, BudgetExceeded, ColorNotInCode, DomainExhausted,
                                   NotASubtree, NotBiregular, Rotation, Symmetry, Translation,
                                   classify, compose, deserialize, edge_stabilizer,
                                   empirical_type, extend_isometry, factor_translation_biregular,
                                   fixed_tree, helly_common_vertex, identity, inverse,
                                   is_color_preserving, is_edge_preserving, median, parse_addr,
                                   parity_check, projected_size, random_rotation, render_addr,
                                   rotation_fixes_ramification, serialize, spade_holds)
from treesimple.typecalc import make_type

B33 = Ball(biregular_code(3, 3), 0, 6)
B34 = Ball(biregular_code(3, 4), 0, 6)


def test_ball_size_matches_projection():
    for code, r in [(biregular_code(3, 3), 6), (biregular_code(3, 4), 5),
                    (almost_biregular_code(3, 4, 3), 8)]:
        for c in code.colors:
            b = Ball(code, c, r)
            assert b.size == projected_size(code, c, r)
            assert b.check_degrees()


def test_ball_errors():
    with pytest.raises(BudgetExceeded):
        Ball(biregular_code(5, 5), 0, 30, budget=1000)
    with pytest.raises(ColorNotInCode):
        Ball(biregular_code(3, 3), 2, 3)


def test_addresses_round_trip():
    b = B34
    for v in range(0, b.size, 37):
        assert b.vertex(b.addr(v)) == v
        assert parse_addr(b.render(v)) == b.addr(v)
    assert render_addr(()) == "/"


def test_metric():
    b = B33
    rng = np.random.default_rng(1)
    for _ in range(50):
        u, v = (int(x) for x in rng.integers(b.size, size=2))
        p = b.path(u, v)
        assert len(p) - 1 == b.dist(u, v)
        assert all(b.adjacent(x, y) for x, y in zip(p, p[1:]))


@given(st.integers(0, 10 ** 6), st.integers(0, 2000))
@settings(max_examples=40, deadline=None)
def test_random_rotation_is_automorphism(seed, v):
    b = B34
    v = v % int((b.depth <= 3).sum())
    a = random_rotation(b, v, seed)
    assert a(v) == v
    assert is_color_preserving(a) and is_edge_preserving(a)
    dom = a.domain
    assert len(set(a.img[dom].tolist())) == len(dom)
    assert a.r_valid >= b.radius - 2 * int(b.depth[v])


def test_compose_inverse_identity():
    b = B33
    a = random_rotation(b, 0, 3)
    ok, n = compose(a, inverse(a)).agrees_with(identity(b))
    assert ok and n > 0


def test_compose_exhausts_domain():
    b = B33
    far = int(b.at_depth(6)[0])
    a = extend_isometry(b, 0, far)
    with pytest.raises(DomainExhausted):
        compose(a, a)


def test_classify_rotation_symmetry_translation():
    b = B33
    assert isinstance(classify(identity(b)), Rotation)
    # a code with a color adjacent to itself allows edge swaps
    c = validate_code([[1, 2], [3, 0]])
    bb = Ball(c, 0, 6)
    u = 0
    v = [int(w) for w in bb.nbr[u] if w >= 0 and bb.color[w] == 0][0]
    s = extend_isometry(bb, u, v, pins={v: u})
    assert isinstance(classify(s), Symmetry)
    # product of rotations about x and y at distance 2
    x = 0
    y = int(b.at_depth(2)[0])
    mid = int(b.parent[y])
    alpha = random_rotation(b, x, 0, pins={mid: [w for w in b.children[0] if w != mid][0]})
    beta = random_rotation(b, y, 0, pins={mid: b.children[y][0]})
    t = classify(compose(alpha, beta))
    assert isinstance(t, Translation) and t.length == 4
    assert empirical_type(compose(alpha, beta), t) == make_type((0, 1, 0, 1))
    assert spade_holds(compose(alpha, beta), t.axis[1], t.axis[0])


def test_edge_stabilizer_fixes_edge():
    b = B34
    v = int(b.children[0][0])
    a = edge_stabilizer(b, 0, v, 5)
    assert a(0) == 0 and a(v) == v
    assert {0, v} <= fixed_tree(a)


def test_fixed_tree_is_connected():
    b = B34
    a = random_rotation(b, int(b.at_depth(2)[3]), 11)
    f = sorted(fixed_tree(a))
    for u in f:
        assert all(x in fixed_tree(a) for x in b.path(f[0], u))


def test_rotation_fixes_ramification():
    code = almost_biregular_code(3, 3, 3)
    b = Ball(code, 1, 7)
    for v in np.flatnonzero(b.depth <= 3):
        a = random_rotation(b, int(v), int(v))
        assert rotation_fixes_ramification(a)


def test_median_and_helly():
    b = B33
    x, y, z = (int(b.at_depth(3)[k]) for k in (0, 5, 11))
    m = median(b, x, y, z)
    for p, q in [(x, y), (y, z), (x, z)]:
        assert m in b.path(p, q)
    trees = [b.path(x, y), b.path(y, z), b.path(x, z)]
    assert helly_common_vertex(b, trees) == m
    assert helly_common_vertex(b, [[x], [y]]) is None
    with pytest.raises(NotASubtree):
        helly_common_vertex(b, [[x, y]])


def test_serialize_round_trip():
    b = B34
    a = random_rotation(b, 0, 9)
    text = serialize(a)
    assert text.splitlines()[0] == "/ -> /"
    assert deserialize(b, text) == a


def _centered_translation(b, half, seed):
    rng = np.random.default_rng(seed)
    level = b.at_depth(half)
    u = int(level[0])
    w = next(int(x) for x in level if int(b.lca([u], [x])[0]) == 0)
    ahead = [int(x) for x in b.children[w] if b.color[x] == b.color[b.step_toward(u, w)]]
    return extend_isometry(b, u, w, rng, pins={b.step_toward(u, w): ahead[0]})


@pytest.mark.parametrize("half", [1, 2, 3])
def test_factor_translation(half):
    b = Ball(biregular_code(3, 4), 0, 10)
    g = _centered_translation(b, half, half)
    cls = classify(g)
    assert isinstance(cls, Translation) and cls.length == 2 * half
    assert parity_check(g)
    r1, r2 = factor_translation_biregular(g, seed=1)
    assert isinstance(classify(r1), Rotation) and isinstance(classify(r2), Rotation)
    ok, n = compose(r1, r2).agrees_with(g)
    assert ok and n > 0


def test_factor_rejects_non_biregular():
    b = Ball(almost_biregular_code(3, 3, 2), 0, 6)
    with pytest.raises(NotBiregular):
        factor_translation_biregular(identity(b))
