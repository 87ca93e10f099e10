"""Gap sequences, the rotation-count lower bound, and unboundedness witnesses."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Mapping, Sequence

from .codes import Code
from .typecalc import (ColorWord, CyclicType, TypeLike, make_type, rotate, heart_word,
                       least_rotation)

TN_CAP = 64


class InvariantError(ValueError):
    pass


class OutOfRange(InvariantError):
    pass


class MissingBlock(InvariantError):
    pass


class ShapeViolation(InvariantError):
    pass


def _word(t: TypeLike) -> ColorWord:
    return t.canonical if isinstance(t, CyclicType) else tuple(t)


@dataclass(frozen=True)
class GapSequence:
    gaps: tuple[int, ...]

    def __len__(self):
        return len(self.gaps)

    def __iter__(self):
        return iter(self.gaps)

    def __str__(self):
        return "[" + ",".join(map(str, self.gaps)) + "]"


def linear_gaps(word: Sequence[int], i: int, start: int | None = None) -> list[int]:
    """Gaps between consecutive occurrences of ``i``, reading cyclically.

    Reading starts at ``start`` (an occurrence) or at the first occurrence.
    """
    pos = [k for k, c in enumerate(word) if c == i]
    if not pos:
        return []
    n = len(word)
    if start is not None:
        pos = sorted(pos, key=lambda p: (p - start) % n)
    return [(pos[(k + 1) % len(pos)] - pos[k]) % n or n for k in range(len(pos))]


def i_sequence(t: TypeLike, i: int) -> GapSequence:
    """Cyclic gaps between copies of ``i``.

    Read from the first copy in the word as given (for a ``CyclicType``, its
    canonical rotation); compare across readings with :func:`same_cyclic`.
    """
    return GapSequence(tuple(linear_gaps(_word(t), i)))


def occurrences(t: TypeLike, i: int) -> int:
    return sum(1 for c in _word(t) if c == i)


def L_m(t: TypeLike, i: int, m: int) -> int:
    count = sum(1 for g in i_sequence(t, i) if g == m)
    return count - count % 2


def L_inf(t: TypeLike, i: int) -> int:
    return sum(c - c % 2 for c in Counter(i_sequence(t, i).gaps).values())


@dataclass(frozen=True)
class LowerBoundCertificate:
    type: CyclicType
    color: int
    N: int
    Linf: int
    bound: int
    raw: Fraction

    def line(self, n: int | None = None) -> str:
        head = f"n={n} " if n is not None else ""
        return f"{head}N={self.N} Linf={self.Linf} bound={self.bound}"


def color_bound(t: TypeLike, i: int) -> Fraction:
    """(N + 6 - L_inf) / 4: fewer rotations than this cannot produce ``t``."""
    return Fraction(occurrences(t, i) + 6 - L_inf(t, i), 4)


def rotation_lower_bound(t: TypeLike, colors: Sequence[int] | None = None) -> LowerBoundCertificate:
    t = t if isinstance(t, CyclicType) else make_type(t)
    if colors is None:
        colors = sorted(set(t.canonical))
    best = None
    for i in colors:
        raw = color_bound(t, i)
        if best is None or raw > best[0]:
            best = (raw, i)
    raw, i = best
    return LowerBoundCertificate(t, i, occurrences(t, i), L_inf(t, i),
                                 max(2, ceil(raw)), raw)


def gen_tn(n: int, cap: int = TN_CAP) -> ColorWord:
    """The witness word t_n over the block alphabet {0, 1, 2}."""
    if not 2 <= n <= cap:
        raise OutOfRange(f"n must be in [2, {cap}], got {n}")
    t = (1, 2, 1, 0) + (1, 2) * 2 + (1, 0)
    for k in range(2, n):
        flank = (1, 2) * (2 * k - 1)
        t = (1, 2, 1, 0) + flank + t + flank + (1, 0)
    return t


def star_sequence(n: int) -> list[int]:
    """The closed-form 0-sequence of t_{n+1}, in its printed order."""
    down = list(range(4 * n + 2, 5, -4))
    up = list(range(8, 4 * n + 1, 4))
    return down + up + [4]


def zgap_sequence(n: int, p: int, q: int) -> list[int]:
    """Closed-form z-gap sequence of substituted t_{n+1} (printed order)."""
    return [p + (g // 2 - 1) * q for g in star_sequence(n)]


def same_cyclic(a: Sequence[int], b: Sequence[int]) -> bool:
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    return rotate(a, least_rotation(a)) == rotate(b, least_rotation(b))


def check_block_shape(word: Sequence[int]) -> None:
    w = tuple(word)
    if not w:
        return
    tail = w[1:]
    if len(w) % 2 or tail != tail[::-1]:
        raise ShapeViolation(f"block {w} is not of the form (c1, c2..cr..c2)")


def substitute_blocks(t: TypeLike, blocks: Mapping[int, Sequence[int]]) -> CyclicType:
    word = _word(t)
    missing = sorted(set(word) - set(blocks))
    if missing:
        raise MissingBlock(f"no image for blocks {missing}")
    firsts = set()
    for b in set(word):
        img = tuple(blocks[b])
        check_block_shape(img)
        if img:
            firsts.add(img[0])
    if len(firsts) > 1:
        raise ShapeViolation(f"blocks start with different colors {sorted(firsts)}")
    out = tuple(c for b in word for c in blocks[b])
    if not out:
        raise ShapeViolation("substitution produced an empty word")
    return make_type(out)


# -- forbidden configurations -------------------------------------------------

@dataclass(frozen=True)
class ForbiddenConfig:
    axis_path1: ColorWord
    axis_path2: ColorWord
    spur_path0: ColorWord
    z_color: int
    p: int
    q: int
    s_color: int = -1
    axis_walk: ColorWord = ()
    t_index: int = 0
    spur_walk: ColorWord = ()

    @property
    def blocks(self) -> dict[int, ColorWord]:
        return {0: self.spur_path0, 1: self.axis_path1, 2: self.axis_path2}

    def describe(self, code: Code | None = None) -> dict:
        nm = (lambda w: ",".join(code.name(c) for c in w)) if code else (lambda w: ",".join(map(str, w)))
        return {
            "axis_walk": nm(self.axis_walk),
            "t_index": self.t_index,
            "spur_walk": nm(self.spur_walk),
            "block0": nm(self.spur_path0),
            "block1": nm(self.axis_path1) or "-",
            "block2": nm(self.axis_path2) or "-",
            "p": self.p,
            "q": self.q,
        }


def _bfs(starts, succ):
    dist, parent = {}, {}
    dq = deque()
    for s in starts:
        if s not in dist:
            dist[s] = 0
            parent[s] = None
            dq.append(s)
    while dq:
        u = dq.popleft()
        for v in succ(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                parent[v] = u
                dq.append(v)
    return dist, parent


def _chain(parent, s):
    out = []
    while s is not None:
        out.append(s)
        s = parent[s]
    return out


def find_forbidden_config(code: Code, *, walk_cap: int = 12) -> ForbiddenConfig | None:
    """Search the color graph for the configuration that rules out bounded simplicity.

    Needed: a color ``z`` with a neighbour color ``j`` and ``a(z, j) >= 2``;
    a closed-up axis of a product of two rotations (a non-backtracking walk
    whose end colors are ramification colors able to move their path
    neighbour) avoiding ``z``; and a spur leaving the axis at some vertex
    ``t`` and reaching ``z`` through ``j`` without meeting ``z`` earlier.

    Walks are lifted to the tree: ``(u, v, u)`` is non-backtracking only if
    ``a(v, u) >= 2``.  The search is complete for walks up to ``walk_cap``
    edges and returns the shortest hit (axis length, then spur length, then
    color order).
    """
    a = code.a
    ram = {i for i in code.colors if code.total_degree(i) >= 3}
    best = None
    for z in code.colors:
        js = [j for j in code.colors if j != z and a(z, j) >= 2]
        if not js:
            continue
        edges = [(u, v) for u in code.colors for v in code.colors
                 if u != z and v != z and a(u, v)]

        def succ(e, rev=False):
            u, v = e
            for w in code.colors:
                if w == z or not a(v, w):
                    continue
                if w == u and a(v, u) < 2:
                    continue
                yield (v, w)

        def pred(e):
            v, w = e
            for u in code.colors:
                if u == z or not a(u, v):
                    continue
                if u == w and a(v, w) < 2:
                    continue
                yield (u, v)

        starts = [(u, v) for (u, v) in edges if u in ram and a(u, v) >= 2]
        ends = [(u, v) for (u, v) in edges if v in ram and a(v, u) >= 2]
        if not starts or not ends:
            continue
        df, pf = _bfs(sorted(starts), succ)
        db, pb = _bfs(sorted(ends), pred)

        # candidate positions for t: (walk, index)
        candidates = []
        for e in sorted(starts):
            if e in db:
                walk_states = [e] + _chain(pb, e)[1:]
                walk = [walk_states[0][0]] + [s[1] for s in walk_states]
                if len(walk) - 1 <= walk_cap:
                    candidates.append((walk, 0))
        for e1 in sorted(df):
            for e2 in succ(e1):
                if e2 not in db:
                    continue
                L = df[e1] + db[e2] + 2
                if L > walk_cap:
                    continue
                head = list(reversed(_chain(pf, e1)))
                tail = _chain(pb, e2)
                states = head + tail
                walk = [states[0][0]] + [s[1] for s in states]
                candidates.append((walk, len(head)))
        for walk, p in candidates:
            walk = tuple(walk)
            c = walk[p]
            if p == 0:
                axis_nb = Counter([walk[1], walk[1]])
            else:
                axis_nb = Counter([walk[p - 1], walk[p + 1]])
            spur = _find_spur(code, c, axis_nb, z, walk_cap)
            if spur is None:
                continue
            key = (len(walk), len(spur), walk, p, spur)
            if best is None or key < best[0]:
                best = (key, walk, p, spur, z)
        if best is not None:
            break
    if best is None:
        return None
    _, walk, p, spur, z = best
    return _assemble(walk, p, spur, z)


def _find_spur(code: Code, c: int, axis_nb: Counter, z: int, cap: int):
    a = code.a
    firsts = [(c, w) for w in code.colors if a(c, w) > axis_nb[w]]

    def succ(e):
        u, v = e
        if v == z:
            return
        for w in code.colors:
            if not a(v, w) or (w == u and a(v, u) < 2):
                continue
            yield (v, w)

    dist, parent = _bfs(sorted(firsts), succ)
    hits = [e for e in dist if e[1] == z and e[0] != z and a(z, e[0]) >= 2
            and dist[e] + 1 <= cap]
    ok = []
    for e in hits:
        states = list(reversed(_chain(parent, e)))
        walk = (states[0][0],) + tuple(s[1] for s in states)
        if z not in walk[:-1]:
            ok.append((len(walk), walk))
    if not ok:
        return None
    return min(ok)[1]


def _assemble(walk, p, spur, z) -> ForbiddenConfig:
    L = len(walk) - 1
    block1 = tuple(walk[p::-1]) + tuple(walk[1:p]) if p > 0 else ()
    block2 = tuple(walk[p:]) + tuple(walk[L - 1:p:-1]) if p < L else ()
    block0 = heart_word(spur)
    return ForbiddenConfig(block1, block2, block0, z,
                           p=len(block0) + len(block1), q=len(block1) + len(block2),
                           s_color=spur[-2], axis_walk=tuple(walk), t_index=p,
                           spur_walk=tuple(spur))


@dataclass(frozen=True)
class WitnessCertificate:
    n: int
    cert: LowerBoundCertificate
    z_N: int
    z_Linf: int
    z_raw: Fraction

    def line(self) -> str:
        return (f"n={self.n} N={self.cert.N} Linf={self.cert.Linf} bound={self.cert.bound}")


def unboundedness_certificates(cfg: ForbiddenConfig, up_to: int) -> list[WitnessCertificate]:
    """Lower-bound certificates for the substituted t_n, n = 2..up_to."""
    if up_to < 2:
        raise OutOfRange("up_to must be >= 2")
    out = []
    for n in range(2, up_to + 1):
        t = substitute_blocks(gen_tn(n), cfg.blocks)
        cert = rotation_lower_bound(t)
        out.append(WitnessCertificate(n, cert, occurrences(t, cfg.z_color),
                                      L_inf(t, cfg.z_color), color_bound(t, cfg.z_color)))
    return out


# -- case tables for products of rotations ------------------------------------

def _is_pal(xs) -> bool:
    xs = list(xs)
    return xs == xs[::-1]


def shape_row(path: Sequence[int], i: int) -> int:
    first, last = path[0] == i, path[-1] == i
    return {(True, True): 1, (True, False): 2, (False, True): 3, (False, False): 4}[(first, last)]


def two_rotation_shape_check(path: Sequence[int], i: int) -> tuple[int, bool]:
    """Row of the two-rotation case table and whether the gap shape fits it.

    Rows 1-2 read gaps from the fixed point of the first rotation and must
    form a palindrome (even/odd length).  Rows 3-4 read from the first
    occurrence after it; the last gap (``m0``) wraps past it and the rest
    must be an even/odd palindrome.
    """
    word = heart_word(path)
    row = shape_row(path, i)
    N = occurrences(word, i)
    if N == 0:
        return row, False
    parity_ok = (N % 2 == 0) == (row in (1, 4))
    if row in (1, 2):
        gaps = linear_gaps(word, i, start=0)
        return row, parity_ok and _is_pal(gaps)
    gaps = linear_gaps(word, i, start=1)
    return row, parity_ok and _is_pal(gaps[:-1])


def offaxis_shape_check(path: Sequence[int], s_reading: Sequence[int], i: int) -> tuple[int, bool] | None:
    """Shape check for one off-axis step (rotation added to translation of type s).

    ``s_reading`` is the reading of ``s`` starting at the anchor.  Returns
    None when ``i`` is missing from either part (the table does not apply).
    """
    heart = heart_word(path)
    word = heart + tuple(s_reading)
    h = len(heart)
    N1 = occurrences(heart, i)
    N2 = occurrences(s_reading, i)
    if N1 == 0 or N2 == 0:
        return None
    row = shape_row(path, i)
    s_gaps = linear_gaps(s_reading, i, start=0 if s_reading[0] == i else None)
    if row in (1, 2):
        gaps = linear_gaps(word, i, start=0)
        ok = _is_pal(gaps[:N1]) and gaps[N1:] == s_gaps
        return row, ok
    gaps = linear_gaps(word, i, start=1)
    m_part, rest = gaps[:N1 - 1], gaps[N1:]
    ok = _is_pal(m_part) and rest[:-1] == s_gaps[:N2 - 1]
    return row, ok
