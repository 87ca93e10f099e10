"""Translation types as cyclic color words, and how they compose.

A type is a color word modulo cyclic shift.  ``CyclicType`` stores the
lexicographically least rotation so equality and hashing are structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

ColorWord = tuple[int, ...]


class TypeCalcError(ValueError):
    pass


class EmptyWord(TypeCalcError):
    pass


class PathTooShort(TypeCalcError):
    pass


class AnchorAbsent(TypeCalcError):
    pass


def least_rotation(word: Sequence[int]) -> int:
    """Start index of the lexicographically least rotation (Booth)."""
    s = list(word) * 2
    n = len(word)
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n if n else 0


def rotate(word: Sequence[int], k: int) -> ColorWord:
    word = tuple(word)
    k %= len(word)
    return word[k:] + word[:k]


@dataclass(frozen=True, order=True)
class CyclicType:
    canonical: ColorWord

    def __len__(self):
        return len(self.canonical)

    def __iter__(self):
        return iter(self.canonical)

    def __str__(self):
        return ",".join(map(str, self.canonical))

    def rotations(self) -> list[ColorWord]:
        return [rotate(self.canonical, k) for k in range(len(self.canonical))]

    def readings(self, anchor: int) -> list[ColorWord]:
        """All rotations starting with ``anchor`` (one per occurrence)."""
        c = self.canonical
        return [rotate(c, k) for k, x in enumerate(c) if x == anchor]


def make_type(word: Iterable[int]) -> CyclicType:
    word = tuple(word)
    if not word:
        raise EmptyWord("a type needs a nonempty word")
    return CyclicType(rotate(word, least_rotation(word)))


TypeLike = Union[CyclicType, Sequence[int]]


def _as_type(t: TypeLike) -> CyclicType:
    return t if isinstance(t, CyclicType) else make_type(t)


def type_length(t: TypeLike) -> int:
    return len(_as_type(t))


def heart_word(path: Sequence[int]) -> ColorWord:
    """(i1..in) -> (i1, ..., i_{n-1}, in, i_{n-1}, ..., i2)."""
    path = tuple(path)
    if len(path) < 2:
        raise PathTooShort("the connecting path needs at least two vertices")
    return path + path[-2:0:-1]


def compose_rot_rot(path: Sequence[int]) -> CyclicType:
    """Type of a product of two rotations whose fixed sets are joined by ``path``."""
    return make_type(heart_word(path))


def _anchored(t: TypeLike, anchor: int) -> list[ColorWord]:
    if isinstance(t, CyclicType):
        reads = t.readings(anchor)
    else:
        w = tuple(t)
        if not w:
            raise EmptyWord("empty type word")
        reads = [rotate(w, k) for k, x in enumerate(w) if x == anchor]
    if not reads:
        raise AnchorAbsent(f"color {anchor} does not occur in the type")
    return reads


def compose_rot_trans_offaxis(spur: Sequence[int], t: TypeLike, anchor: int,
                              occurrence: int = 0) -> CyclicType:
    """Type of rotation composed with a translation whose axis misses its fixed set.

    ``spur`` is the color of the path from the projection on the axis
    (color ``anchor``) to the fixed vertex.  ``t`` is read starting at the
    ``occurrence``-th copy of the anchor; passing a concrete reading (a plain
    sequence starting at the projection vertex) pins the occurrence exactly.
    """
    spur = tuple(spur)
    if len(spur) < 2:
        raise PathTooShort("spur needs at least two vertices")
    if spur[0] != anchor:
        raise TypeCalcError("spur must start at the anchor color")
    reads = _anchored(t, anchor)
    if not 0 <= occurrence < len(reads):
        raise AnchorAbsent(f"anchor occurrence {occurrence} out of range")
    return make_type(heart_word(spur) + reads[occurrence])


def offaxis_types(spur: Sequence[int], t: TypeLike, anchor: int) -> frozenset[CyclicType]:
    """Union of :func:`compose_rot_trans_offaxis` over every anchor occurrence."""
    n = len(_anchored(t, anchor))
    return frozenset(compose_rot_trans_offaxis(spur, t, anchor, k) for k in range(n))


@dataclass(frozen=True)
class TranslationType:
    type: CyclicType
    depth: int = 0

    def __str__(self):
        return str(self.type)


@dataclass(frozen=True)
class RotationFixing:
    color: int

    def __str__(self):
        return f"rotation-fixing:{self.color}"


OnAxisOutcome = Union[TranslationType, RotationFixing]


def fold_outcomes(word: Sequence[int]) -> list[OnAxisOutcome]:
    """Outcomes for one fixed reading ``(i1, j2, ..., jm)`` of the type.

    Fold depth ``d`` keeps ``word[d : m-d]`` and needs ``word[k] ==
    word[m-k]`` for ``k = 1..d``; when the folds meet in the middle (``m``
    even) the result fixes a vertex of color ``word[m/2]``.
    """
    w = tuple(word)
    m = len(w)
    out: list[OnAxisOutcome] = [TranslationType(make_type(w), 0)]
    d = 0
    while True:
        nxt = d + 1
        if m - 2 * nxt < 1 or w[nxt] != w[m - nxt]:
            break
        d = nxt
        out.append(TranslationType(make_type(w[d:m - d]), d))
    if m % 2 == 0 and all(w[k] == w[m - k] for k in range(1, m // 2)):
        out.append(RotationFixing(w[m // 2]))
    return out


def onaxis_outcomes(t: TypeLike, anchor: int) -> frozenset[OnAxisOutcome]:
    """All outcomes for a rotation fixing an axis vertex of color ``anchor``."""
    res: set[OnAxisOutcome] = set()
    for w in _anchored(t, anchor):
        res.update(fold_outcomes(w))
    return frozenset(res)


def is_two_rotation_type(t: TypeLike) -> ColorWord | None:
    """Return a connecting path whose doubling gives ``t``, if any."""
    t = _as_type(t)
    L = len(t)
    if L % 2:
        return None
    n = L // 2 + 1
    for w in t.rotations():
        if all(w[k] == w[L - k] for k in range(1, L // 2)):
            return w[:n]
    return None


def parse_word(text: str, names: Sequence[str] | None = None) -> ColorWord:
    """Parse ``"1,2,1,0"``; with ``names`` the entries are color names."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise EmptyWord("empty color list")
    if names is not None:
        try:
            return tuple(list(names).index(p) for p in parts)
        except ValueError:
            raise TypeCalcError(f"unknown color in {text!r}") from None
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise TypeCalcError(f"colors must be integers: {text!r}") from None
