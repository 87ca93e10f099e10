"""Finite balls of the colored tree of a code, and automorphisms on them.

Vertices are integer ids in breadth-first order (children of a vertex are
listed color-major, index-minor), so ids and addresses are stable across
runs.  An automorphism is stored as an image array over the whole ball with
``-1`` where it is undefined; its valid radius is the largest ``r`` such
that every vertex within distance ``r`` of the root has an image.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .codes import Code, is_biregular
from .typecalc import CyclicType, make_type

BUDGET = 10 ** 6
_PAD_COLOR = 1 << 20


class EngineError(ValueError):
    pass


class BudgetExceeded(EngineError):
    pass


class ColorNotInCode(EngineError):
    pass


class VertexNotInBall(EngineError):
    pass


class DomainExhausted(EngineError):
    pass


class InsufficientRadius(EngineError):
    pass


class NotATranslation(EngineError):
    pass


class NotARotation(EngineError):
    pass


class NotBiregular(EngineError):
    pass


class NotASubtree(EngineError):
    pass


def projected_size(code: Code, root_color: int, radius: int) -> int:
    """Vertex count of the ball, computed from per-level color counts."""
    # level state: counts keyed by (color, parent color or -1)
    level = {(root_color, -1): 1}
    total = 1
    for _ in range(radius):
        nxt: dict = {}
        for (c, pc), cnt in level.items():
            for j in code.colors:
                k = code.a(c, j) - (1 if j == pc else 0)
                if k > 0:
                    nxt[(j, c)] = nxt.get((j, c), 0) + cnt * k
        level = nxt
        total += sum(level.values())
        if total > 10 ** 12:
            break
    return total


class Ball:
    """The radius-``radius`` ball around a root of color ``root_color``."""

    def __init__(self, code: Code, root_color: int, radius: int, budget: int = BUDGET):
        if not 0 <= root_color < code.size:
            raise ColorNotInCode(f"color {root_color} not in code")
        if radius < 0:
            raise EngineError("radius must be >= 0")
        size = projected_size(code, root_color, radius)
        if size > budget:
            raise BudgetExceeded(f"ball would have {size} vertices (budget {budget})")
        self.code = code
        self.root_color = root_color
        self.radius = radius

        color = [root_color]
        parent = [-1]
        depth = [0]
        sib = [0]
        children: list[list[int]] = []
        head = 0
        while head < len(color):
            u = head
            head += 1
            kids = []
            if depth[u] < radius:
                c = color[u]
                pc = color[parent[u]] if parent[u] >= 0 else -1
                for j in code.colors:
                    k = code.a(c, j) - (1 if j == pc else 0)
                    for idx in range(max(k, 0)):
                        kids.append(len(color))
                        color.append(j)
                        parent.append(u)
                        depth.append(depth[u] + 1)
                        sib.append(idx)
            children.append(kids)
        self.color = np.array(color, dtype=np.int64)
        self.parent = np.array(parent, dtype=np.int64)
        self.depth = np.array(depth, dtype=np.int64)
        self.sib = np.array(sib, dtype=np.int64)
        self.children = children
        n = len(color)
        width = max((len(k) + 1 for k in children), default=1)
        nbr = np.full((n, width), -1, dtype=np.int64)
        for u in range(n):
            row = list(children[u])
            p = parent[u]
            if p >= 0:
                # parent slots in before the children of its color
                pos = 0
                while pos < len(row) and color[row[pos]] < color[p]:
                    pos += 1
                row.insert(pos, p)
            nbr[u, :len(row)] = row
        self.nbr = nbr
        self.size = n

    def __len__(self):
        return self.size

    @property
    def root(self) -> int:
        return 0

    # -- addressing -------------------------------------------------------
    def addr(self, v: int) -> tuple[tuple[int, int], ...]:
        steps = []
        while v > 0:
            steps.append((int(self.color[v]), int(self.sib[v])))
            v = int(self.parent[v])
        return tuple(reversed(steps))

    def vertex(self, addr: Sequence[tuple[int, int]]) -> int:
        v = 0
        for c, i in addr:
            hit = [w for w in self.children[v] if self.color[w] == c and self.sib[w] == i]
            if not hit:
                raise VertexNotInBall(f"address {render_addr(addr)} not in ball")
            v = hit[0]
        return v

    def render(self, v: int) -> str:
        return render_addr(self.addr(v))

    def degree(self, v: int) -> int:
        return self.code.total_degree(int(self.color[v]))

    def is_interior(self, v: int) -> bool:
        return self.depth[v] < self.radius

    def at_depth(self, d: int) -> np.ndarray:
        return np.nonzero(self.depth == d)[0]

    # -- metric -----------------------------------------------------------
    def lca(self, a, b):
        a = np.array(a, dtype=np.int64, copy=True)
        b = np.array(b, dtype=np.int64, copy=True)
        da, db = self.depth[a], self.depth[b]
        while True:
            m = da > db
            if not m.any():
                break
            a[m] = self.parent[a[m]]
            da = self.depth[a]
        while True:
            m = db > da
            if not m.any():
                break
            b[m] = self.parent[b[m]]
            db = self.depth[b]
        while True:
            m = a != b
            if not m.any():
                break
            a[m] = self.parent[a[m]]
            b[m] = self.parent[b[m]]
        return a

    def dist(self, a, b):
        scalar = np.isscalar(a) and np.isscalar(b)
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        a, b = np.broadcast_arrays(a, b)
        c = self.lca(a, b)
        d = self.depth[a] + self.depth[b] - 2 * self.depth[c]
        return int(d[0]) if scalar else d

    def path(self, u: int, v: int) -> list[int]:
        """Vertices of the geodesic from ``u`` to ``v`` inclusive."""
        c = int(self.lca([u], [v])[0])
        up, x = [], u
        while x != c:
            up.append(x)
            x = int(self.parent[x])
        down, x = [], v
        while x != c:
            down.append(x)
            x = int(self.parent[x])
        return up + [c] + down[::-1]

    def step_toward(self, u: int, v: int) -> int:
        """Neighbour of ``u`` on the geodesic to ``v`` (``u != v``)."""
        return self.path(u, v)[1]

    def adjacent(self, u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        return (self.parent[u] == v) | (self.parent[v] == u)

    def check_degrees(self) -> bool:
        """Every interior vertex has exactly a(i, j) neighbours of color j."""
        for u in range(self.size):
            if not self.is_interior(u):
                continue
            row = self.nbr[u][self.nbr[u] >= 0]
            cols = np.bincount(self.color[row], minlength=self.code.size)
            if list(cols) != list(self.code.degree[int(self.color[u])]):
                return False
        return True


def render_addr(addr) -> str:
    if not addr:
        return "/"
    return "".join(f"/{c}.{i}" for c, i in addr)


def parse_addr(text: str) -> tuple[tuple[int, int], ...]:
    text = text.strip()
    if text == "/":
        return ()
    out = []
    for part in text.strip("/").split("/"):
        c, i = part.split(".")
        out.append((int(c), int(i)))
    return tuple(out)


def build_ball(code: Code, root_color: int, radius: int, budget: int = BUDGET) -> Ball:
    return Ball(code, root_color, radius, budget)


# -- automorphisms ------------------------------------------------------------

class BallAutomorphism:
    __slots__ = ("ball", "img", "_r")

    def __init__(self, ball: Ball, img: np.ndarray):
        self.ball = ball
        img = np.asarray(img, dtype=np.int64)
        img.setflags(write=False)
        self.img = img
        self._r = None

    @property
    def r_valid(self) -> int:
        if self._r is None:
            undefined = self.img < 0
            if undefined.any():
                self._r = int(self.ball.depth[undefined].min()) - 1
            else:
                self._r = self.ball.radius
        return self._r

    @property
    def domain(self) -> np.ndarray:
        return np.nonzero(self.img >= 0)[0]

    def __call__(self, v: int) -> int:
        w = int(self.img[v])
        if w < 0:
            raise DomainExhausted(f"vertex {self.ball.render(v)} outside the domain")
        return w

    def agrees_with(self, other: "BallAutomorphism") -> tuple[bool, int]:
        """Pointwise equality where both are defined; also the count compared."""
        both = (self.img >= 0) & (other.img >= 0)
        return bool((self.img[both] == other.img[both]).all()), int(both.sum())

    def __eq__(self, other):
        return (isinstance(other, BallAutomorphism) and other.ball is self.ball
                and np.array_equal(self.img, other.img))

    __hash__ = None

    def __repr__(self):
        return f"BallAutomorphism(r_valid={self.r_valid}, defined={int((self.img >= 0).sum())})"


def identity(ball: Ball) -> BallAutomorphism:
    return BallAutomorphism(ball, np.arange(ball.size))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def extend_isometry(ball: Ball, v: int, v_img: int, rng=None,
                    pins: Mapping[int, int] | None = None) -> BallAutomorphism:
    """Extend ``v -> v_img`` to a color-preserving map, as far as the ball allows.

    Working outward from ``v``, at each mapped pair the remaining neighbours
    are matched color block by color block; each block gets a uniformly random
    bijection (``rng``) or the order-preserving one (``rng=None``).
    ``pins`` forces chosen neighbours onto chosen images and must be
    consistent with adjacency.
    """
    if not (0 <= v < ball.size and 0 <= v_img < ball.size):
        raise VertexNotInBall("vertex not in ball")
    if ball.color[v] != ball.color[v_img]:
        raise EngineError("cannot map between different colors")
    rng = _rng(rng) if rng is not None else None
    n, width = ball.nbr.shape
    img = np.full(n, -1, dtype=np.int64)
    img[v] = v_img
    # a pinned neighbour c of u (u = c's step toward v) sorts with rank 1 + e
    # on the source side and so does its target among u's image's neighbours,
    # so the block-wise matching pairs them up
    src_owner = np.full(n, -1, dtype=np.int64)
    dst_owner = np.full(n, -1, dtype=np.int64)
    src_rank = np.zeros(n)
    dst_rank = np.zeros(n)
    if pins:
        for k, (c, c_img) in enumerate(pins.items()):
            if c == v:
                continue
            if ball.color[c] != ball.color[c_img]:
                raise EngineError("pin maps between different colors")
            e = 1.0 + (k + 1) / (len(pins) + 2)
            src_owner[c], src_rank[c] = ball.step_toward(c, v), e
            dst_owner[c_img], dst_rank[c_img] = c, e
    U = np.array([v]); Ui = np.array([v_img])
    P = np.array([-1]); Pi = np.array([-1])
    colors = np.append(ball.color, _PAD_COLOR)
    slot = np.arange(width) / (width + 1.0)
    while len(U):
        keep = (ball.depth[U] < ball.radius) & (ball.depth[Ui] < ball.radius)
        U, Ui, P, Pi = U[keep], Ui[keep], P[keep], Pi[keep]
        if not len(U):
            break
        nb, nbi = ball.nbr[U], ball.nbr[Ui]
        col, coli = colors[nb], colors[nbi]
        rank = np.where(nb == P[:, None], 0, 2)
        ranki = np.where(nbi == Pi[:, None], 0, 2)
        if pins:
            own = (src_owner[nb] == U[:, None]) & (nb >= 0)
            rank = np.where(own, src_rank[nb], rank)
            # the target counts only if its pin source hangs off this row's U
            owner = dst_owner[nbi]
            owner_toward = np.where(owner >= 0, src_owner[np.maximum(owner, 0)], -2)
            owni = (owner_toward == U[:, None]) & (nbi >= 0)
            ranki = np.where(owni, dst_rank[nbi], ranki)
        key = col * 4.0 + rank + np.where(rank == 2, slot, 0.0)
        noise = rng.random(nb.shape) if rng is not None else slot[None, :].repeat(len(U), 0)
        keyi = coli * 4.0 + ranki + np.where(ranki == 2, noise, 0.0)
        src = np.take_along_axis(nb, np.argsort(key, axis=1, kind="stable"), 1)
        dst = np.take_along_axis(nbi, np.argsort(keyi, axis=1, kind="stable"), 1)
        new = (src >= 0) & (src != P[:, None])
        if (colors[src[new]] != colors[dst[new]]).any():
            raise EngineError("neighbour color blocks do not match")
        img[src[new]] = dst[new]
        rows = np.nonzero(new)[0]
        P, Pi = U[rows], Ui[rows]
        U, Ui = src[new], dst[new]
    if pins:
        for c, c_img in pins.items():
            if img[c] != c_img:
                raise EngineError(f"pin {c}->{c_img} could not be honoured")
    return BallAutomorphism(ball, img)


def random_rotation(ball: Ball, fixed: int, seed=None,
                    pins: Mapping[int, int] | None = None) -> BallAutomorphism:
    """Uniformly random automorphism fixing ``fixed`` (per color block)."""
    if not 0 <= fixed < ball.size:
        raise VertexNotInBall(f"vertex {fixed} not in ball")
    return extend_isometry(ball, fixed, fixed, _rng(seed), pins)


def compose(a: BallAutomorphism, b: BallAutomorphism) -> BallAutomorphism:
    """``a o b`` (apply ``b`` first)."""
    if a.ball is not b.ball:
        raise EngineError("automorphisms live on different balls")
    bi = b.img
    ok = bi >= 0
    out = np.full_like(bi, -1)
    out[ok] = a.img[bi[ok]]
    res = BallAutomorphism(a.ball, out)
    if res.r_valid < 1:
        raise DomainExhausted(f"composition valid only to radius {res.r_valid}")
    return res


def compose_all(maps: Sequence[BallAutomorphism]) -> BallAutomorphism:
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def inverse(a: BallAutomorphism) -> BallAutomorphism:
    dom = a.img >= 0
    inv = np.full_like(a.img, -1)
    inv[a.img[dom]] = np.nonzero(dom)[0]
    return BallAutomorphism(a.ball, inv)


def is_color_preserving(a: BallAutomorphism) -> bool:
    dom = a.domain
    return bool((a.ball.color[a.img[dom]] == a.ball.color[dom]).all())


def is_edge_preserving(a: BallAutomorphism) -> bool:
    b = a.ball
    dom = a.domain
    child = dom[dom > 0]
    child = child[a.img[b.parent[child]] >= 0]
    return bool(b.adjacent(a.img[child], a.img[b.parent[child]]).all())


def displacement(a: BallAutomorphism) -> tuple[np.ndarray, np.ndarray]:
    dom = a.domain
    return dom, a.ball.dist(dom, a.img[dom])


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class Rotation:
    fixed: frozenset

    kind = "rotation"


@dataclass(frozen=True)
class Symmetry:
    edge: tuple[int, int]

    kind = "symmetry"


@dataclass(frozen=True)
class Translation:
    length: int
    axis: tuple[int, ...]

    kind = "translation"


def fixed_tree(a: BallAutomorphism) -> frozenset[int]:
    dom = a.domain
    return frozenset(int(v) for v in dom[a.img[dom] == dom])


def spade_holds(a: BallAutomorphism, x: int, y: int) -> bool:
    """Tits' translation criterion for the edge {x, y}.

    x lies on the geodesic from y to a(y), and a(y) lies on the geodesic
    from x to a(x).
    """
    b = a.ball
    gx, gy = int(a.img[x]), int(a.img[y])
    if gx < 0 or gy < 0 or not b.adjacent(x, y):
        return False
    d = b.dist
    on1 = d(y, x) + d(x, gy) == d(y, gy)
    on2 = d(x, gy) + d(gy, gx) == d(x, gx)
    return bool(on1 and on2 and d(y, gy) > 0)


def classify(a: BallAutomorphism):
    b = a.ball
    dom = a.domain
    fixed = dom[a.img[dom] == dom]
    if len(fixed):
        return Rotation(frozenset(int(v) for v in fixed))
    w = a.img[dom]
    back = a.img[w]
    swap = (back == dom) & b.adjacent(dom, w)
    if swap.any():
        v = int(dom[swap][0])
        return Symmetry((min(v, int(a.img[v])), max(v, int(a.img[v]))))
    disp = b.dist(dom, w)
    ell = int(disp.min())
    for u in dom[disp == ell]:
        u = int(u)
        nxt = b.step_toward(u, int(a.img[u]))
        if spade_holds(a, nxt, u):
            return Translation(ell, tuple(b.path(u, int(a.img[u]))))
    raise InsufficientRadius("no axis edge passes the translation criterion inside the domain")


def axis_reading(a: BallAutomorphism, x: int) -> tuple[int, ...]:
    """Colors from axis vertex ``x`` up to (excluding) ``a(x)``."""
    b = a.ball
    return tuple(int(c) for c in b.color[b.path(x, a(x))[:-1]])


def empirical_type(a: BallAutomorphism, cls=None) -> CyclicType:
    cls = cls or classify(a)
    if not isinstance(cls, Translation):
        raise NotATranslation(f"automorphism is a {cls.kind}")
    return make_type(int(c) for c in a.ball.color[list(cls.axis[:-1])])


def on_axis(a: BallAutomorphism, cls: Translation, v: int) -> bool:
    return a.img[v] >= 0 and a.ball.dist(v, int(a.img[v])) == cls.length


def helly_common_vertex(ball: Ball, trees: Sequence[Iterable[int]]) -> int | None:
    """A vertex common to all subtrees, or None if two of them are disjoint.

    Three pairwise-meeting subtrees share the median of one point from each
    pairwise intersection; more subtrees reduce to fewer by intersecting all
    with the last one.
    """
    sets = [frozenset(int(v) for v in t) for t in trees]
    for s in sets:
        _check_subtree(ball, s)
    return _helly(ball, sets)


def _check_subtree(ball: Ball, s: frozenset) -> None:
    if not s:
        raise NotASubtree("empty vertex set")
    inner = sum(1 for v in s if v > 0 and int(ball.parent[v]) in s)
    if inner != len(s) - 1:
        raise NotASubtree("vertex set is not connected")


def median(ball: Ball, x: int, y: int, z: int) -> int:
    c = ball.lca([x, y, x], [y, z, z])
    return int(c[np.argmax(ball.depth[c])])


def _helly(ball: Ball, sets: list[frozenset]) -> int | None:
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if not sets[i] & sets[j]:
                return None
    if len(sets) == 1:
        return min(sets[0])
    if len(sets) == 2:
        return min(sets[0] & sets[1])
    if len(sets) == 3:
        a, b, c = sets
        return median(ball, min(b & c), min(a & c), min(a & b))
    last = sets[-1]
    return _helly(ball, [s & last for s in sets[:-1]])


def project(ball: Ball, v: int, path: Sequence[int]) -> int:
    if not len(path):
        raise EngineError("empty path")
    d = ball.dist(np.full(len(path), v), np.asarray(path))
    return int(path[int(np.argmin(d))])


def rotation_fixes_ramification(a: BallAutomorphism, cls=None) -> bool:
    cls = cls or classify(a)
    if not isinstance(cls, Rotation):
        raise NotARotation(f"automorphism is a {cls.kind}")
    b = a.ball
    return any(b.degree(v) >= 3 for v in cls.fixed)


def parity_check(a: BallAutomorphism) -> bool:
    dom, disp = displacement(a)
    return bool((disp % 2 == 0).all())


def edge_stabilizer(ball: Ball, u: int, v: int, seed=None) -> BallAutomorphism:
    """Random automorphism fixing both ends of the edge {u, v}."""
    if not ball.adjacent(u, v):
        raise EngineError("not an edge")
    return random_rotation(ball, u, seed, pins={v: v})


def factor_translation_biregular(a: BallAutomorphism, ball: Ball | None = None,
                                 seed=None, cls=None):
    """Write a translation of a biregular tree as (rotation, rotation).

    Picks rotations ``alpha`` (fixing the axis midpoint ``x_{l/2}``) and
    ``beta`` (fixing ``x_0``) whose product translates the same axis by the
    same amount, then returns ``(delta o alpha, beta)`` with the correction
    ``delta = a o (alpha o beta)^-1`` fixing the axis.
    """
    ball = ball or a.ball
    if is_biregular(ball.code) is None:
        raise NotBiregular("code is not biregular")
    cls = cls or classify(a)
    if not isinstance(cls, Translation):
        raise NotATranslation(f"automorphism is a {cls.kind}")
    ell = cls.length
    if ell % 2:
        raise NotATranslation("odd translation length")
    half = ell // 2
    rng = _rng(seed)
    axis = list(cls.axis)  # x_0 .. x_ell
    inv = inverse(a)
    back = [axis[0]]  # x_0, x_-1, ..., x_-half
    for k in range(1, half + 1):
        w = int(inv.img[axis[ell - k]])
        if w < 0:
            raise InsufficientRadius("axis not visible far enough behind x_0")
        back.append(w)
    mid = axis[half]
    a_pins, b_pins = {}, {}
    for k in range(1, half + 1):
        a_pins[axis[half - k]], a_pins[axis[half + k]] = axis[half + k], axis[half - k]
        b_pins[axis[k]], b_pins[back[k]] = back[k], axis[k]
    try:
        alpha = random_rotation(ball, mid, rng, pins=a_pins)
        beta = random_rotation(ball, axis[0], rng, pins=b_pins)
    except EngineError as exc:
        raise InsufficientRadius(f"reflection does not fit in the ball: {exc}") from exc
    try:
        ab = compose(alpha, beta)
        delta = compose(a, inverse(ab))
        r1 = compose(delta, alpha)
    except DomainExhausted as exc:
        raise InsufficientRadius(str(exc)) from exc
    return r1, beta


# -- serialization -----------------------------------------------------------

def serialize(a: BallAutomorphism) -> str:
    b = a.ball
    lines = [f"{b.render(int(v))} -> {b.render(int(a.img[v]))}" for v in a.domain]
    return "\n".join(lines) + "\n"


def deserialize(ball: Ball, text: str) -> BallAutomorphism:
    img = np.full(ball.size, -1, dtype=np.int64)
    for line in text.splitlines():
        if not line.strip():
            continue
        lhs, rhs = line.split("->")
        img[ball.vertex(parse_addr(lhs))] = ball.vertex(parse_addr(rhs))
    return BallAutomorphism(ball, img)
