"""Colored-tree codes: parsing, validation and classification.

A code over a color alphabet ``I`` is a matrix ``a(i, j)`` giving, for a
vertex of color ``i``, the number of neighbours of color ``j``.  Colors are
small integers ``0..|I|-1``; ``Code.names`` keeps the human-readable labels
used by the text file format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Mapping, Sequence

DEGREE_CAP = 255
MAX_COLORS = 16


class CodeError(ValueError):
    """Base class for rejected codes."""


class EmptyAlphabet(CodeError):
    pass


class ZeroAsymmetry(CodeError):
    def __init__(self, i: int, j: int):
        super().__init__(f"a({i},{j}) = 0 but a({j},{i}) != 0")
        self.i, self.j = i, j


class DisconnectedColorGraph(CodeError):
    def __init__(self, components):
        super().__init__(f"color graph has {len(components)} components: {components}")
        self.components = components


class CodeFormatError(CodeError):
    pass


@dataclass(frozen=True)
class Code:
    degree: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(len(self.degree))))

    @property
    def size(self) -> int:
        return len(self.degree)

    @property
    def colors(self) -> range:
        return range(self.size)

    def a(self, i: int, j: int) -> int:
        return self.degree[i][j]

    def total_degree(self, i: int) -> int:
        return sum(self.degree[i])

    def neighbors(self, i: int) -> list[int]:
        """Colors adjacent to ``i`` in the color graph G(a)."""
        return [j for j in self.colors if self.degree[i][j]]

    def name(self, i: int) -> str:
        return self.names[i]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown color {name!r}") from None

    def relabel(self, perm: Sequence[int]) -> "Code":
        """Return the code with old color ``c`` renamed to ``perm[c]``."""
        n = self.size
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        deg = tuple(tuple(self.degree[inv[i]][inv[j]] for j in range(n)) for i in range(n))
        return Code(deg, tuple(self.names[inv[i]] for i in range(n)))


def _components(n: int, adjacent) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in range(n):
                if v not in seen and adjacent(u, v):
                    seen.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def validate_code(degree: Sequence[Sequence[int]] | Mapping[tuple[int, int], int],
                  names: Sequence[str] | None = None, *, size: int | None = None,
                  cap: int = DEGREE_CAP) -> Code:
    """Build a :class:`Code` after checking the two code conditions.

    ``degree`` is either a square matrix or a sparse ``{(i, j): a}`` mapping
    (then ``size`` or ``names`` fixes the alphabet, missing pairs are 0).
    """
    if isinstance(degree, Mapping):
        n = size if size is not None else (len(names) if names else 0)
        if not n and degree:
            n = 1 + max(max(k) for k in degree)
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in degree.items():
            if not (0 <= i < n and 0 <= j < n):
                raise CodeError(f"pair ({i},{j}) outside alphabet of size {n}")
            rows[i][j] = v
    else:
        rows = [list(r) for r in degree]
        n = len(rows)
    if n == 0:
        raise EmptyAlphabet("alphabet is empty")
    if n > MAX_COLORS:
        raise CodeError(f"at most {MAX_COLORS} colors supported, got {n}")
    for r in rows:
        if len(r) != n:
            raise CodeError("degree matrix is not square")
        for v in r:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise CodeError(f"degree entries must be nonnegative integers, got {v!r}")
            if v > cap:
                raise CodeError(f"degree {v} exceeds cap {cap}")
    for i in range(n):
        for j in range(n):
            if rows[i][j] == 0 and rows[j][i] != 0:
                raise ZeroAsymmetry(i, j)
    comps = _components(n, lambda u, v: rows[u][v] != 0)
    if len(comps) > 1:
        raise DisconnectedColorGraph(comps)
    if names is not None:
        names = tuple(names)
        if len(names) != n or len(set(names)) != n:
            raise CodeError("names must be distinct and match the alphabet size")
    return Code(tuple(tuple(r) for r in rows), names or ())


def parse_code(text: str, cap: int = DEGREE_CAP) -> Code:
    """Parse the line-based code file format.

    First meaningful line: ``colors: c0 c1 ...``; then ``<ci> <cj> <degree>``
    triples.  Lines starting with ``#`` and blank lines are ignored.
    """
    names = None
    entries: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if names is None:
            if not line.startswith("colors:"):
                raise CodeFormatError(f"line {lineno}: expected 'colors: ...'")
            names = line[len("colors:"):].split()
            if not names:
                raise EmptyAlphabet("alphabet is empty")
            if len(set(names)) != len(names):
                raise CodeFormatError(f"line {lineno}: duplicate color names")
            continue
        parts = line.split()
        if len(parts) != 3:
            raise CodeFormatError(f"line {lineno}: expected '<ci> <cj> <degree>'")
        try:
            i, j = names.index(parts[0]), names.index(parts[1])
        except ValueError:
            raise CodeFormatError(f"line {lineno}: unknown color") from None
        try:
            v = int(parts[2])
        except ValueError:
            raise CodeFormatError(f"line {lineno}: degree is not an integer") from None
        if (i, j) in entries:
            raise CodeFormatError(f"line {lineno}: duplicate entry for ({parts[0]},{parts[1]})")
        entries[(i, j)] = v
    if names is None:
        raise EmptyAlphabet("no 'colors:' line")
    return validate_code(entries, names, cap=cap)


def format_code(code: Code) -> str:
    lines = ["colors: " + " ".join(code.names)]
    for i in code.colors:
        for j in code.colors:
            if code.a(i, j):
                lines.append(f"{code.name(i)} {code.name(j)} {code.a(i, j)}")
    return "\n".join(lines) + "\n"


def load_code(path) -> Code:
    with open(path, encoding="utf-8") as fh:
        return parse_code(fh.read())


def biregular_code(n: int, m: int) -> Code:
    return validate_code([[0, n], [m, 0]])


def almost_biregular_code(n: int, m: int, k: int) -> Code:
    """Subdivided (n, m)-biregular code on colors ``0..k`` (k = path edges)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rows = [[0] * (k + 1) for _ in range(k + 1)]
    if k == 1:
        rows[0][1], rows[1][0] = n, m
    else:
        rows[0][1], rows[k][k - 1] = n, m
        for i in range(1, k):
            rows[i][i - 1] = rows[i][i + 1] = 1
    return validate_code(rows)


def extend_code(code: Code, attach: Mapping[int, tuple[int, int]], name: str | None = None) -> Code:
    """Add one new color ``k``; ``attach[j] = (a'(k, j), a'(j, k))``."""
    n = code.size
    rows = [list(r) + [0] for r in code.degree]
    rows.append([0] * (n + 1))
    for j, (out, back) in attach.items():
        rows[n][j] = out
        rows[j][n] = back
    names = code.names + (name or str(n),)
    return validate_code(rows, names)


def ramification_colors(code: Code) -> frozenset[int]:
    return frozenset(i for i in code.colors if code.total_degree(i) >= 3)


def is_biregular(code: Code) -> tuple[int, int] | None:
    if code.size != 2 or code.a(0, 0) or code.a(1, 1):
        return None
    n, m = code.a(0, 1), code.a(1, 0)
    if n >= 3 and m >= 3:
        return n, m
    return None


def _match_subdivided_path(code: Code, order: Sequence[int]) -> tuple[int, int, int] | None:
    k = len(order) - 1
    pos = {c: p for p, c in enumerate(order)}
    for i in code.colors:
        for j in code.colors:
            v = code.a(i, j)
            pi, pj = pos[i], pos[j]
            if k == 1:
                want = v if {pi, pj} == {0, 1} else 0
            elif abs(pi - pj) != 1:
                want = 0
            elif pi in (0, k):
                want = v
            else:
                want = 1
            if v != want:
                return None
    n = code.a(order[0], order[1])
    m = code.a(order[k], order[k - 1])
    if n >= 3 and m >= 3:
        return n, m, k
    return None


def is_almost_biregular(code: Code) -> tuple[int, int, int] | None:
    """Match the code against an equivariantly subdivided biregular code.

    Returns ``(n, m, k)`` with ``k`` the number of edges on the subdivision
    path between the two ramification colors (``k = 1``: plain biregular).
    A valid ordering is a Hamiltonian path in G(a) whose ends are the only
    colors of degree >= 3, so only the orderings fixed by a choice of start
    color need checking; this enumerates exactly the orderings that can
    match.
    """
    if code.size < 2:
        return None
    for start in code.colors:
        order = [start]
        prev = None
        while True:
            nxt = [j for j in code.neighbors(order[-1]) if j != prev and j not in order]
            if len(nxt) != 1:
                break
            prev = order[-1]
            order.append(nxt[0])
        if len(order) != code.size:
            continue
        hit = _match_subdivided_path(code, order)
        if hit is not None:
            return hit
    return None


def is_almost_biregular_bruteforce(code: Code) -> tuple[int, int, int] | None:
    """Exhaustive search over all orderings of the alphabet (small |I|)."""
    if code.size < 2:
        return None
    for order in permutations(code.colors):
        hit = _match_subdivided_path(code, order)
        if hit is not None:
            return hit
    return None


def bounded_constant_from_K(K: int) -> int:
    """Bounded-simplicity constant when every translation needs K rotations."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return 8 * K * K


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class CodeReport:
    verdict: str
    certificate: dict = field(default_factory=dict)

    def lines(self, code: Code | None = None) -> list[str]:
        out = [f"verdict: {self.verdict}"]
        for key, value in self.certificate.items():
            out.append(f"{key}: {value}")
        return out

    def machine_lines(self) -> list[str]:
        out = [f"verdict={self.verdict}"]
        for key, value in self.certificate.items():
            out.append(f"{key}={str(value).replace(' ', '_')}")
        return out


ALMOST_BIREGULAR = "AlmostBiregular"
WITNESS = "NotBoundedlySimpleWitness"
DEGENERATE = "Degenerate"
INDETERMINATE = "Indeterminate"


def classify_code(code: Code, *, walk_cap: int = 12) -> CodeReport:
    """Give exactly one verdict for a (normal) code.

    Only sufficient conditions are used; anything not settled by them is
    reported as ``Indeterminate`` together with what was left unchecked.
    """
    from .invariants import find_forbidden_config

    hit = is_almost_biregular(code)
    if hit is not None:
        n, m, k = hit
        K = 2
        return CodeReport(ALMOST_BIREGULAR, {
            "n": n, "m": m, "k": k,
            "k_convention": "edges on subdivision path (1 = no subdivision)",
            "rotations_per_translation": K,
            "constant": bounded_constant_from_K(K),
        })
    if all(code.total_degree(i) <= 2 for i in code.colors):
        return CodeReport(DEGENERATE, {"reason": "no ramification point"})
    cfg = find_forbidden_config(code, walk_cap=walk_cap)
    if cfg is not None:
        cert = {"z_color": code.name(cfg.z_color), "s_color": code.name(cfg.s_color),
                "z_ramification": "yes" if code.total_degree(cfg.z_color) >= 3 else "no"}
        cert.update(cfg.describe(code))
        return CodeReport(WITNESS, cert)
    no_ones = all(code.a(i, j) != 1 for i in code.colors for j in code.colors)
    if no_ones:
        reason = ("no invariant proper subtree (no degree 1 in code) and not almost biregular, "
                  f"but no explicit forbidden configuration within walk cap {walk_cap}")
    else:
        reason = "invariant proper subtree not excluded"
    return CodeReport(INDETERMINATE, {"reason": reason, "walk_cap": walk_cap})
