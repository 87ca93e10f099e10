"""Cross-validation of the symbolic type rules against concrete automorphisms.

Every trial draws its own generator from ``SeedSequence(seed).spawn``, so a
summary depends only on (code, trials, seed, radius), never on execution
order or on the number of worker processes.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .codes import Code
from .invariants import (L_inf, occurrences, two_rotation_shape_check, shape_row, offaxis_shape_check)
from .treeengine import (Ball, InsufficientRadius, DomainExhausted, Rotation, Symmetry,
                         Translation, axis_reading, classify, compose, empirical_type,
                         extend_isometry, factor_translation_biregular, fixed_tree, inverse,
                         random_rotation, rotation_fixes_ramification)
from .typecalc import (RotationFixing, TranslationType, compose_rot_rot,
                       compose_rot_trans_offaxis, fold_outcomes, heart_word, make_type)


class OracleError(ValueError):
    pass


class BudgetExceeded(OracleError):
    pass


@dataclass
class TrialReport:
    trial: int
    seed: int
    predicted: tuple
    observed: object
    match: bool
    status: str = "checked"  # checked | skipped
    diagnostics: str = ""


@dataclass
class Summary:
    scenario: str
    trials: int
    matches: int = 0
    skipped: int = 0
    mismatches: int = 0
    reports: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def line(self) -> str:
        return (f"scenario={self.scenario} trials={self.trials} matches={self.matches} "
                f"skipped={self.skipped} mismatches={self.mismatches}")

    def lines(self) -> list[str]:
        out = [self.line()]
        for key in sorted(self.extra):
            out.append(f"{key}={self.extra[key]}")
        for r in self.reports:
            if r.status == "checked" and not r.match:
                out.append(f"mismatch trial={r.trial} predicted={_fmt(r.predicted)} "
                           f"observed={_fmt(r.observed)} {r.diagnostics}".rstrip())
        return out


def _fmt(x):
    if isinstance(x, (tuple, list, set, frozenset)):
        return "{" + ";".join(sorted(str(v) for v in x)) + "}"
    return str(x)


def _summarize(scenario: str, reports: list[TrialReport]) -> Summary:
    reports = sorted(reports, key=lambda r: r.trial)
    s = Summary(scenario, len(reports), reports=reports)
    for r in reports:
        if r.status != "checked":
            s.skipped += 1
        elif r.match:
            s.matches += 1
        else:
            s.mismatches += 1
    skip_kinds = Counter(r.diagnostics.split(":")[0] for r in reports if r.status != "checked")
    for k, v in sorted(skip_kinds.items()):
        s.extra[f"skipped.{k}"] = v
    return s


# -- sampling helpers --------------------------------------------------------

def movable_root_color(code: Code) -> int:
    for c in code.colors:
        if code.total_degree(c) >= 3 and any(code.a(c, j) >= 2 for j in code.colors):
            return c
    raise OracleError("code has no ramification color that can move a neighbour")


@lru_cache(maxsize=8)
def _ball(code: Code, radius: int) -> Ball:
    return Ball(code, movable_root_color(code), radius)


def _siblings(ball: Ball, center: int, v: int) -> list[int]:
    row = ball.nbr[center]
    return [int(w) for w in row if w >= 0 and w != v and ball.color[w] == ball.color[v]]


def _random_outward_path(ball: Ball, start: int, length: int, rng) -> list[int] | None:
    path = [start]
    prev = int(ball.parent[start]) if start > 0 else -1
    for _ in range(length):
        u = path[-1]
        options = [int(w) for w in ball.nbr[u] if w >= 0 and w != prev
                   and ball.depth[w] > ball.depth[u]] if u != start else \
                  [int(w) for w in ball.nbr[u] if w >= 0 and w != prev]
        if not options:
            return None
        prev = u
        path.append(options[rng.integers(len(options))])
    return path


def _movable(ball: Ball, v: int, toward: int) -> bool:
    return ball.degree(v) >= 3 and bool(_siblings(ball, v, toward))


def _moving_rotation(ball: Ball, fixed: int, toward: int, rng):
    """Random rotation fixing ``fixed`` that moves its neighbour ``toward``."""
    sibs = _siblings(ball, fixed, toward)
    if not sibs:
        return None
    target = sibs[rng.integers(len(sibs))]
    return random_rotation(ball, fixed, rng, pins={toward: target})


def max_separation(radius: int) -> int:
    return max(1, (radius - 1) // 4)


@lru_cache(maxsize=32)
def min_separation(code: Code) -> int:
    """Shortest non-backtracking color walk from the root color to a movable end.

    Both ends must be ramification colors able to move their path neighbour,
    otherwise no pair of rotations with disjoint fixed trees exists along it.
    """
    a = code.a
    root = movable_root_color(code)
    frontier = {(root, j) for j in code.colors if a(root, j) >= 2}
    seen = set(frontier)
    for L in range(1, 4 * code.size + 2):
        for u, v in frontier:
            if code.total_degree(v) >= 3 and a(v, u) >= 2:
                return L
        nxt = set()
        for u, v in frontier:
            for w in code.colors:
                if a(v, w) and (w != u or a(v, u) >= 2) and (v, w) not in seen:
                    seen.add((v, w))
                    nxt.add((v, w))
        frontier = nxt
        if not frontier:
            break
    raise OracleError("no pair of rotations with disjoint fixed trees exists")


def _two_rotation_translation(ball: Ball, rng, dmax: int, dmin: int = 1):
    """Sample alpha (fixing x), beta (fixing y) with disjoint fixed trees.

    Returns (alpha, beta, path y..x) so that alpha o beta is the translation
    predicted from the colors of the path.
    """
    for _ in range(50):
        d = int(rng.integers(dmin, max(dmin, dmax) + 1))
        path = _random_outward_path(ball, ball.root, d, rng)
        if path is None or not (_movable(ball, path[0], path[1])
                                and _movable(ball, path[-1], path[-2])):
            continue
        if rng.random() < 0.5:
            path = path[::-1]  # path runs y -> x
        y, x = path[0], path[-1]
        beta = _moving_rotation(ball, y, path[1], rng)
        alpha = _moving_rotation(ball, x, path[-2], rng)
        if alpha is None or beta is None:
            continue
        return alpha, beta, path
    return None


def _seeds(seed: int, trials: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(trials)


def _run(worker, code: Code, trials: int, seed: int, radius: int, jobs: int):
    ss = _seeds(seed, trials)
    args = [(code, radius, i, ss[i]) for i in range(trials)]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(worker, args, chunksize=max(1, trials // (4 * jobs))))
    return [worker(a) for a in args]


def _colors(ball: Ball, verts) -> tuple[int, ...]:
    return tuple(int(c) for c in ball.color[list(verts)])


# -- rotation o rotation -----------------------------------------------------

def _rot_rot_trial(args) -> TrialReport:
    code, radius, i, ss = args
    ball = _ball(code, radius)
    rng = np.random.default_rng(ss)
    seed_id = int(ss.generate_state(1)[0])
    if i % 10 == 9:
        # shared fixed vertex: the product must be a rotation again
        a = random_rotation(ball, ball.root, rng)
        b = random_rotation(ball, ball.root, rng)
        cls = classify(compose(a, b))
        ok = isinstance(cls, Rotation)
        return TrialReport(i, seed_id, ("rotation",), cls.kind, ok,
                           "skipped" if ok else "checked", "degenerate:shared fixed vertex")
    dmin = min_separation(code)
    sample = _two_rotation_translation(ball, rng, max_separation(radius), dmin)
    if sample is None:
        return TrialReport(i, seed_id, (), None, False, "skipped", "unsampled:no movable path")
    alpha, beta, path = sample
    pred = compose_rot_rot(_colors(ball, path))
    try:
        g = compose(alpha, beta)
        cls = classify(g)
        obs = empirical_type(g, cls)
    except (InsufficientRadius, DomainExhausted) as exc:
        return TrialReport(i, seed_id, (pred,), None, False, "skipped", f"radius:{exc}")
    ok = obs == pred and cls.length == 2 * (len(path) - 1)
    return TrialReport(i, seed_id, (pred,), obs, ok,
                       diagnostics=f"path={_colors(ball, path)} length={cls.length}")


def crosscheck_rot_rot(code: Code, trials: int = 1000, seed: int = 0, radius: int = 10,
                       jobs: int = 1) -> Summary:
    return _summarize("rot-rot", _run(_rot_rot_trial, code, trials, seed, radius, jobs))


# -- rotation o translation, fixed set off the axis --------------------------

def _axis_neighbors(g, ginv, v: int) -> set[int]:
    ball = g.ball
    out = set()
    for w in (int(g.img[v]), int(ginv.img[v])):
        if w >= 0 and w != v:
            out.add(ball.step_toward(v, w))
    return out


def _offaxis_trial(args) -> TrialReport:
    code, radius, i, ss = args
    ball = _ball(code, radius)
    rng = np.random.default_rng(ss)
    seed_id = int(ss.generate_state(1)[0])
    dmin = min_separation(code)
    dmax = max(1, max_separation(radius) - 1)
    sample = _two_rotation_translation(ball, rng, dmax, dmin)
    if sample is None:
        return TrialReport(i, seed_id, (), None, False, "skipped", "unsampled:no movable path")
    alpha, beta, _ = sample
    try:
        g = compose(alpha, beta)
        gcls = classify(g)
    except (InsufficientRadius, DomainExhausted) as exc:
        return TrialReport(i, seed_id, (), None, False, "skipped", f"radius:{exc}")
    ginv = inverse(g)
    for _ in range(50):
        anchor_v = gcls.axis[int(rng.integers(len(gcls.axis) - 1))]
        blocked = _axis_neighbors(g, ginv, anchor_v)
        if len(blocked) < 2:
            continue
        h = int(rng.integers(1, max(2, dmin) + 1))
        spur = [anchor_v]
        prev = None
        for _step in range(h):
            u = spur[-1]
            opts = [int(w) for w in ball.nbr[u] if w >= 0 and w != prev
                    and (u != anchor_v or int(w) not in blocked)]
            if not opts:
                break
            prev = u
            spur.append(opts[rng.integers(len(opts))])
        if len(spur) < 2 or not _movable(ball, spur[-1], spur[-2]):
            continue
        w, toward = spur[-1], spur[-2]
        rho = _moving_rotation(ball, w, toward, rng)
        if rho is None:
            continue
        break
    else:
        return TrialReport(i, seed_id, (), None, False, "skipped", "unsampled:no movable spur")
    reading = axis_reading(g, anchor_v)
    pred = compose_rot_trans_offaxis(_colors(ball, spur), reading, reading[0])
    try:
        prod = compose(rho, g) if rng.random() < 0.5 else compose(g, rho)
        obs = empirical_type(prod)
    except (InsufficientRadius, DomainExhausted) as exc:
        return TrialReport(i, seed_id, (pred,), None, False, "skipped", f"radius:{exc}")
    except Exception as exc:  # NotATranslation is a genuine mismatch
        return TrialReport(i, seed_id, (pred,), type(exc).__name__, False,
                           diagnostics=str(exc))
    return TrialReport(i, seed_id, (pred,), obs, obs == pred,
                       diagnostics=f"spur={_colors(ball, spur)} axis={reading}")


def crosscheck_offaxis(code: Code, trials: int = 1000, seed: int = 0, radius: int = 10,
                       jobs: int = 1) -> Summary:
    return _summarize("off-axis", _run(_offaxis_trial, code, trials, seed, radius, jobs))


# -- rotation fixing an axis vertex ------------------------------------------

def _onaxis_trial(args) -> TrialReport:
    code, radius, i, ss = args
    ball = _ball(code, radius)
    rng = np.random.default_rng(ss)
    seed_id = int(ss.generate_state(1)[0])
    sample = _two_rotation_translation(ball, rng, max_separation(radius), min_separation(code))
    if sample is None:
        return TrialReport(i, seed_id, (), None, False, "skipped", "unsampled:no movable path")
    alpha, beta, _ = sample
    try:
        g = compose(alpha, beta)
        gcls = classify(g)
    except (InsufficientRadius, DomainExhausted) as exc:
        return TrialReport(i, seed_id, (), None, False, "skipped", f"radius:{exc}")
    x0 = gcls.axis[int(rng.integers(len(gcls.axis) - 1))]
    rho = random_rotation(ball, x0, rng)
    reading = axis_reading(g, x0)
    predicted = tuple(fold_outcomes(reading))
    try:
        prod = compose(g, rho) if rng.random() < 0.5 else compose(rho, g)
        cls = classify(prod)
    except (InsufficientRadius, DomainExhausted) as exc:
        return TrialReport(i, seed_id, predicted, None, False, "skipped", f"radius:{exc}")
    if isinstance(cls, Translation):
        obs_type = empirical_type(prod, cls)
        depth = (len(reading) - len(obs_type)) // 2
        ok = any(isinstance(o, TranslationType) and o.type == obs_type and o.depth == depth
                 for o in predicted)
        observed = TranslationType(obs_type, depth)
    elif isinstance(cls, Rotation):
        fixed_colors = {int(ball.color[v]) for v in cls.fixed}
        rot = [o for o in predicted if isinstance(o, RotationFixing)]
        ok = any(o.color in fixed_colors for o in rot)
        observed = RotationFixing(rot[0].color) if ok else ("rotation", tuple(sorted(fixed_colors)))
    else:
        ok, observed = False, cls
    return TrialReport(i, seed_id, predicted, observed, ok, diagnostics=f"axis={reading}")


def crosscheck_onaxis(code: Code, trials: int = 1000, seed: int = 0, radius: int = 10,
                      jobs: int = 1) -> Summary:
    s = _summarize("on-axis", _run(_onaxis_trial, code, trials, seed, radius, jobs))
    realized = Counter()
    for r in s.reports:
        if r.status == "checked" and r.match:
            if isinstance(r.observed, TranslationType):
                realized[f"depth{r.observed.depth}"] += 1
            else:
                realized["rotation"] += 1
    for k, v in sorted(realized.items()):
        s.extra[f"realized.{k}"] = v
    return s


# -- translation length of uniformly sampled disjoint pairs -----------------

def fixed_tree_distance(ball: Ball, f1, f2) -> int:
    """Distance between two disjoint subtrees (0 if they meet)."""
    f1, f2 = np.fromiter(f1, dtype=np.int64), np.fromiter(f2, dtype=np.int64)
    if np.intersect1d(f1, f2).size:
        return 0
    p = f1[np.argmin(ball.dist(f1, np.full(len(f1), f2[0])))]
    return int(ball.dist(f2, np.full(len(f2), p)).min())


def _disjoint_pair_trial(args):
    code, radius, i, ss = args
    ball = _ball(code, radius)
    rng = np.random.default_rng(ss)
    rejected = 0
    dmin = min_separation(code)
    dmax = max(dmin, max_separation(radius))
    while True:
        d = int(rng.integers(dmin, dmax + 1))
        path = _random_outward_path(ball, ball.root, d, rng)
        if path is None:
            rejected += 1
            continue
        a = random_rotation(ball, path[0], rng)
        b = random_rotation(ball, path[-1], rng)
        fa, fb = fixed_tree(a), fixed_tree(b)
        if fa & fb:
            rejected += 1
            continue
        dist = fixed_tree_distance(ball, fa, fb)
        try:
            cls = classify(compose(a, b))
        except (InsufficientRadius, DomainExhausted):
            rejected += 1
            continue
        ok = isinstance(cls, Translation) and cls.length == 2 * dist and cls.length % 2 == 0
        return i, ok, dist, getattr(cls, "length", None), rejected


def disjoint_rotation_trials(code: Code, trials: int = 1000, seed: int = 0, radius: int = 10,
                   jobs: int = 1):
    """Uniform rotation pairs, rejected until their fixed trees are disjoint."""
    return _run(_disjoint_pair_trial, code, trials, seed, radius, jobs)


# -- factoring translations and fixed points of rotations --------------------

@dataclass(frozen=True)
class FactorReport:
    trial: int
    length: int
    ok: bool
    compared: int
    diagnostics: str = ""


def _random_translation(ball: Ball, rng, max_length: int):
    """Random translation of even length <= max_length whose axis has the root
    as the midpoint of x_0 .. x_l; this keeps the whole period well inside the ball."""
    for _ in range(200):
        half = int(rng.integers(1, max_length // 2 + 1))
        level = ball.at_depth(half)
        if len(level) < 2:
            continue
        u, w = (int(x) for x in rng.choice(level, 2, replace=False))
        if int(ball.lca([u], [w])[0]) != 0:
            continue
        ahead = [int(x) for x in ball.nbr[w] if x >= 0 and ball.depth[x] > ball.depth[w]
                 and ball.color[x] == ball.color[ball.step_toward(u, w)]]
        if not ahead:
            continue
        pin = {ball.step_toward(u, w): ahead[int(rng.integers(len(ahead)))]}
        g = extend_isometry(ball, u, w, rng, pins=pin)
        try:
            cls = classify(g)
        except InsufficientRadius:
            continue
        if isinstance(cls, Translation) and cls.length <= max_length:
            return g, cls
    return None


def _factor_trial(args) -> FactorReport:
    code, radius, i, ss, max_length = args
    ball = _ball(code, radius)
    rng = np.random.default_rng(ss)
    sample = _random_translation(ball, rng, max_length)
    if sample is None:
        return FactorReport(i, 0, False, 0, "no translation sampled")
    g, cls = sample
    try:
        r1, r2 = factor_translation_biregular(g, seed=rng, cls=cls)
        prod = compose(r1, r2)
        k1, k2 = classify(r1), classify(r2)
    except (InsufficientRadius, DomainExhausted) as exc:
        return FactorReport(i, cls.length, False, 0, f"radius:{exc}")
    agree, compared = prod.agrees_with(g)
    rotations = isinstance(k1, Rotation) and isinstance(k2, Rotation)
    return FactorReport(i, cls.length, agree and rotations and compared > 0, compared,
                        f"kinds={k1.kind},{k2.kind}")


def factorization_trials(code: Code, trials: int = 200, seed: int = 0, radius: int = 12,
                         max_length: int = 8, jobs: int = 1) -> list[FactorReport]:
    """Sample translations of length <= max_length and split each into two rotations."""
    ss = _seeds(seed, trials)
    args = [(code, radius, i, ss[i], max_length) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_factor_trial, args))
    return [_factor_trial(a) for a in args]


def _ramification_trial(args):
    code, radius, i, ss = args
    ball = _ball(code, radius)
    rng = np.random.default_rng(ss)
    near = np.flatnonzero(ball.depth <= max(1, radius // 3))
    v = int(rng.choice(near))
    g = random_rotation(ball, v, rng)
    return i, int(ball.color[v]), rotation_fixes_ramification(g)


def ramification_trials(code: Code, trials: int = 500, seed: int = 0, radius: int = 10,
                        jobs: int = 1):
    """Random rotations; each must fix some vertex of degree >= 3.

    Returns (trial, color of the chosen fixed vertex, ok) triples.
    """
    return _run(_ramification_trial, code, trials, seed, radius, jobs)


# -- symbolic enumeration for the rotation-count lower bound -----------------

def restricted_growth_words(alphabet: int, length: int):
    """Words up to relabeling: each new letter is the next unused one."""
    def rec(prefix, used):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for c in range(min(used + 1, alphabet)):
            yield from rec(prefix + [c], max(used, c + 1))
    yield from rec([], 0)


@dataclass
class GapBoundSummary:
    K: int
    instances: int = 0
    checks: int = 0
    violations: int = 0
    table_counts: Counter = field(default_factory=Counter)
    table_exceptions: int = 0
    table_skipped: int = 0
    tightest: list = field(default_factory=list)
    min_slack: int | None = None
    examples: list = field(default_factory=list)

    def line(self) -> str:
        rows = ",".join(f"{k}:{self.table_counts[k]}" for k in sorted(self.table_counts))
        return (f"scenario=lemma39 K={self.K} instances={self.instances} checks={self.checks} "
                f"violations={self.violations} table_rows={rows or '-'} "
                f"table_exceptions={self.table_exceptions} min_slack={self.min_slack}")

    @property
    def mismatches(self) -> int:
        return self.violations + self.table_exceptions


def _record(summary: GapBoundSummary, t, K: int, tag) -> None:
    word = tuple(t)
    for i in sorted(set(word)):
        N = occurrences(word, i)
        rhs = N - 4 * K + 6
        if rhs <= 0:
            continue
        summary.checks += 1
        slack = L_inf(word, i) - rhs
        if slack < 0:
            summary.violations += 1
            if len(summary.examples) < 10:
                summary.examples.append((tag, i, N, slack))
        if summary.min_slack is None or slack < summary.min_slack:
            summary.min_slack = slack
            summary.tightest = [(tag, i, N)]
        elif slack == summary.min_slack and len(summary.tightest) < 5:
            summary.tightest.append((tag, i, N))


def _positions(word) -> dict[int, list[int]]:
    pos: dict[int, list[int]] = {}
    for k, c in enumerate(word):
        pos.setdefault(c, []).append(k)
    return pos


def _cyc_gaps(pos: list[int], n: int) -> list[int]:
    return [b - a for a, b in zip(pos, pos[1:])] + [pos[0] + n - pos[-1]]


def _even_part(gaps) -> int:
    return sum(v - v % 2 for v in Counter(gaps).values())


def _gap_bound_offaxis_fast(s: GapBoundSummary, alphabet_size: int, lengths, budget: int) -> None:
    spurs_by_anchor: dict[int, list] = {}
    for n in lengths:
        for spur in itertools.product(range(alphabet_size), repeat=n):
            hs = heart_word(spur)
            spurs_by_anchor.setdefault(spur[0], []).append(
                (spur, len(hs), _positions(hs)))
    for n in lengths:
        for path in restricted_growth_words(alphabet_size, n):
            heart = heart_word(path)
            hl = len(heart)
            for k, anchor in enumerate(heart):
                reading = heart[k:] + heart[:k]
                rpos = _positions(reading)
                rgaps = {c: _cyc_gaps(v, hl) for c, v in rpos.items()}
                for spur, sl, spos in spurs_by_anchor.get(anchor, ()):
                    s.instances += 1
                    if s.instances > budget:
                        raise BudgetExceeded("enumeration budget exceeded")
                    total = sl + hl
                    for c in spos.keys() | rpos.keys():
                        a = spos.get(c, [])
                        b = rpos.get(c, [])
                        P = a + [sl + x for x in b]
                        gaps = _cyc_gaps(P, total)
                        N = len(P)
                        rhs = N - 6
                        if rhs > 0:
                            s.checks += 1
                            slack = _even_part(gaps) - rhs
                            if slack < 0:
                                s.violations += 1
                                if len(s.examples) < 10:
                                    s.examples.append(((path, spur, k), c, N, slack))
                            if s.min_slack is None or slack < s.min_slack:
                                s.min_slack = slack
                                s.tightest = [((path, spur, k), c, N)]
                            elif slack == s.min_slack and len(s.tightest) < 5:
                                s.tightest.append(((path, spur, k), c, N))
                        if not a or not b:
                            s.table_skipped += 1
                            continue
                        N1, N2 = len(a), len(b)
                        row = shape_row(spur, c)
                        sg = rgaps[c]
                        if row in (1, 2):
                            head = gaps[:N1]
                            ok = head == head[::-1] and gaps[N1:] == sg
                        else:
                            head = gaps[:N1 - 1]
                            ok = head == head[::-1] and gaps[N1:-1] == sg[:N2 - 1]
                        s.table_counts[row] += 1
                        if not ok:
                            s.table_exceptions += 1


def crosscheck_gap_bound(alphabet_size: int = 4, max_path_len: int = 6, K: int = 2,
                       budget: int = 5 * 10 ** 6, fast: bool = True) -> GapBoundSummary:
    """Enumerate symbolic products of K rotations and test the gap inequality.

    K = 2: every connecting path (all words of length 2..max_path_len).
    K = 3: a two-rotation type (paths up to relabeling) followed by an
    off-axis rotation with every spur word and every anchor occurrence.
    ``fast`` switches the K = 3 sweep to precomputed occurrence lists; the
    slow path goes through the generic gap functions and gives the same tallies.
    """
    if K not in (2, 3):
        raise OracleError("K must be 2 or 3")
    s = GapBoundSummary(K)
    lengths = range(2, max_path_len + 1)
    if K == 2:
        for n in lengths:
            for path in itertools.product(range(alphabet_size), repeat=n):
                s.instances += 1
                if s.instances > budget:
                    raise BudgetExceeded("enumeration budget exceeded")
                _record(s, heart_word(path), 2, path)
                for i in set(path):
                    row, ok = two_rotation_shape_check(path, i)
                    s.table_counts[row] += 1
                    if not ok:
                        s.table_exceptions += 1
        return s
    if fast:
        _gap_bound_offaxis_fast(s, alphabet_size, lengths, budget)
        return s
    spurs = [p for n in lengths for p in itertools.product(range(alphabet_size), repeat=n)]
    for n in lengths:
        for path in restricted_growth_words(alphabet_size, n):
            heart = heart_word(path)
            for spur in spurs:
                anchor = spur[0]
                for k, c in enumerate(heart):
                    if c != anchor:
                        continue
                    s.instances += 1
                    if s.instances > budget:
                        raise BudgetExceeded("enumeration budget exceeded")
                    reading = heart[k:] + heart[:k]
                    t = heart_word(spur) + reading
                    _record(s, t, 3, (path, spur, k))
                    for i in set(t):
                        res = offaxis_shape_check(spur, reading, i)
                        if res is None:
                            s.table_skipped += 1
                            continue
                        row, ok = res
                        s.table_counts[row] += 1
                        if not ok:
                            s.table_exceptions += 1
    return s


# -- free simulation ----------------------------------------------------------

@dataclass(frozen=True)
class SimulatedProduct:
    trial: int
    kind: str
    length: int | None
    type: str

    def line(self) -> str:
        length = "-" if self.length is None else str(self.length)
        return f"class={self.kind} length={length} type={self.type}"


def _simulate_trial(args) -> SimulatedProduct:
    code, radius, i, ss = args
    ball = _ball(code, radius)
    rng = np.random.default_rng(ss)
    sample = _two_rotation_translation(ball, rng, max_separation(radius), 1) \
        if rng.random() < 0.5 else None
    if sample is None:
        # two rotations about vertices near the root, not necessarily far apart
        near = np.flatnonzero(ball.depth <= max_separation(radius))
        x, y = (int(v) for v in rng.choice(near, 2))
        alpha, beta = random_rotation(ball, x, rng), random_rotation(ball, y, rng)
    else:
        alpha, beta, _ = sample
    try:
        g = compose(alpha, beta)
        cls = classify(g)
    except (InsufficientRadius, DomainExhausted):
        return SimulatedProduct(i, "unresolved", None, "-")
    if isinstance(cls, Translation):
        return SimulatedProduct(i, cls.kind, cls.length, str(empirical_type(g, cls)))
    return SimulatedProduct(i, cls.kind, 0 if isinstance(cls, Rotation) else None, "-")


def simulate_compose_rots(code: Code, trials: int = 1000, seed: int = 0, radius: int = 10,
                          jobs: int = 1) -> list[SimulatedProduct]:
    """Classify products of two random rotations; half the pairs are steered
    to disjoint fixed trees so translations show up regularly."""
    return _run(_simulate_trial, code, trials, seed, radius, jobs)
