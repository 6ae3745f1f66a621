"""Surface group words: reduction, Dehn's algorithm, conjugacy classes.

Words are tuples of signed generator indices: ``(1, -2, 3, -4)`` is
``a B c D`` where an uppercase letter denotes the inverse generator.
The group is the fundamental group of a closed orientable surface,
presented with generators a_1, b_1, ..., a_g, b_g and the single
relator prod_i [a_i, b_i].
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

Word = tuple

__all__ = [
    "Word",
    "Presentation",
    "genus2_presentation",
    "parse_word",
    "format_word",
    "inverse_word",
    "reduce",
    "cyclic_reduce",
    "dehn_reduce",
    "conjugacy_length",
    "enumerate_conjugacy_classes",
    "class_arrays",
]


@dataclass(frozen=True)
class Presentation:
    """One-relator surface group presentation of genus g >= 2."""

    genus: int

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")

    @property
    def n_generators(self) -> int:
        return 2 * self.genus

    @property
    def generators(self) -> tuple:
        return tuple(string.ascii_lowercase[: self.n_generators])

    @property
    def relator(self) -> Word:
        r = []
        for i in range(self.genus):
            a, b = 2 * i + 1, 2 * i + 2
            r += [a, b, -a, -b]
        return tuple(r)


def genus2_presentation() -> Presentation:
    return Presentation(genus=2)


def parse_word(text: str, p: Presentation | None = None) -> Word:
    """Parse ``"a B c D"`` (or ``"aBcD"``) into a word tuple."""
    p = p or genus2_presentation()
    names = p.generators
    out = []
    for ch in text.replace(" ", ""):
        low = ch.lower()
        if low not in names:
            raise ValueError(f"unknown generator letter {ch!r}")
        idx = names.index(low) + 1
        out.append(idx if ch.islower() else -idx)
    return tuple(out)


def format_word(w: Word, p: Presentation | None = None) -> str:
    p = p or genus2_presentation()
    names = p.generators
    return " ".join(names[abs(s) - 1] if s > 0 else names[abs(s) - 1].upper() for s in w)


def inverse_word(w: Word) -> Word:
    return tuple(-s for s in reversed(w))


def reduce(w: Word) -> Word:
    """Freely reduce: cancel adjacent x x^-1 pairs."""
    out = []
    for s in w:
        if s == 0:
            raise ValueError("0 is not a generator index")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def cyclic_reduce(w: Word) -> Word:
    """Freely reduce, then strip matching first/last letters."""
    w = list(reduce(w))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


@lru_cache(maxsize=8)
def _dehn_table(genus: int):
    """Replacement table u -> v^-1 for every cyclic subword u of the
    relator (or its inverse) strictly longer than half the relator."""
    p = Presentation(genus)
    rel = p.relator
    n = len(rel)
    half = n // 2
    table = {}
    for base in (rel, inverse_word(rel)):
        for s in range(n):
            rot = base[s:] + base[:s]
            for lu in range(half + 1, n + 1):
                u, v = rot[:lu], rot[lu:]
                table[u] = inverse_word(v)
    return table


def dehn_reduce(w: Word, p: Presentation | None = None) -> Word:
    """Cyclic Dehn reduction: repeatedly replace any cyclic subword that
    is more than half of the relator (or its inverse, any rotation) by
    the shorter complement, interleaved with free and cyclic reduction.

    The result is a geodesic representative of the conjugacy class; its
    length is the conjugacy length.
    """
    p = p or genus2_presentation()
    table = _dehn_table(p.genus)
    n_rel = len(p.relator)
    half = n_rel // 2
    w = cyclic_reduce(w)
    while True:
        n = len(w)
        hit = None
        for lu in range(min(n, n_rel), half, -1):
            for s in range(n):
                u = tuple(w[(s + i) % n] for i in range(lu))
                if u in table:
                    hit = (s, lu, table[u])
                    break
            if hit:
                break
        if hit is None:
            return w
        s, lu, repl = hit
        rest = tuple(w[(s + lu + i) % n] for i in range(n - lu))
        w = cyclic_reduce(repl + rest)


def conjugacy_length(w: Word, p: Presentation | None = None) -> int:
    """Length of the shortest word conjugate to w."""
    return len(dehn_reduce(w, p))


# ---------------------------------------------------------------------------
# conjugacy-class enumeration
#
# Representatives are lex-minimal rotations of freely and cyclically
# reduced words, in the letter order a < a^-1 < b < b^-1 < ... (encoded
# 0..2n-1 with inverse = code ^ 1).  Words containing a cyclic relator
# subword longer than half the relator are dropped: they Dehn-reduce to
# strictly shorter words whose classes are already listed.  Classes that
# differ by a half-relator exchange are kept as distinct representatives.
# ---------------------------------------------------------------------------


def _encode(w: Word) -> tuple:
    return tuple((abs(s) - 1) * 2 + (0 if s > 0 else 1) for s in w)


def _decode(codes) -> Word:
    return tuple(int(c // 2 + 1) * (1 if c % 2 == 0 else -1) for c in codes)


@lru_cache(maxsize=8)
def _forbidden_grams(genus: int):
    """Cyclic (half+1)-letter windows of the relator and its inverse."""
    p = Presentation(genus)
    rel = p.relator
    n = len(rel)
    k = n // 2 + 1
    grams = set()
    for base in (rel, inverse_word(rel)):
        enc = _encode(base)
        for s in range(n):
            grams.add(tuple(enc[(s + i) % n] for i in range(k)))
    return grams


def _is_lexmin(word) -> bool:
    n = len(word)
    for s in range(1, n):
        for i in range(n):
            a, b = word[(s + i) % n], word[i]
            if a < b:
                return False
            if a > b:
                break
    return True


def _enumerate_py(length: int, genus: int):
    """Reference enumeration of canonical cyclic words of one exact length."""
    n_letters = 4 * genus
    grams = _forbidden_grams(genus)
    k = 2 * genus + 1
    out = []
    word = [0] * length

    def rec(d):
        lo = word[0] if d > 0 else 0
        for lt in range(lo, n_letters):
            if d > 0 and (word[d - 1] ^ 1) == lt:
                continue
            word[d] = lt
            if d == length - 1:
                if length > 1 and (word[-1] ^ 1) == word[0]:
                    continue
                if not _is_lexmin(word):
                    continue
                if length >= k and any(
                    tuple(word[(s + i) % length] for i in range(k)) in grams
                    for s in range(length)
                ):
                    continue
                out.append(np.array(word, dtype=np.int8))
            else:
                rec(d + 1)

    rec(0)
    return np.array(out, dtype=np.int8).reshape(len(out), length)


def _enumerate_numba(length: int):
    from . import _fastwords

    grams = _forbidden_grams(2)
    lut = np.zeros(8 ** 5, dtype=np.bool_)
    for g in grams:
        code = 0
        for c in g:
            code = code * 8 + c
        lut[code] = True
    count = _fastwords.dfs_count(length, lut)
    out = np.empty((count, length), dtype=np.int8)
    _fastwords.dfs_fill(length, lut, out)
    return out


def class_arrays(max_len: int, p: Presentation | None = None):
    """Yield (length, array) pairs of encoded class representatives.

    Array rows are int8 letter codes (0..2n-1, inverse = code ^ 1); this
    is the bulk interface used by spectrum scans over many classes.
    """
    p = p or genus2_presentation()
    if max_len > 14:
        raise ValueError("maxLen capped at 14")
    use_numba = p.genus == 2
    if use_numba:
        try:
            from . import _fastwords  # noqa: F401
        except ImportError:
            use_numba = False
    for length in range(1, max_len + 1):
        if use_numba:
            yield length, _enumerate_numba(length)
        else:
            yield length, _enumerate_py(length, p.genus)


def enumerate_conjugacy_classes(max_len: int, p: Presentation | None = None):
    """All nontrivial conjugacy classes with conjugacy length <= maxLen,
    one canonical representative each, sorted by length then letter order.
    """
    p = p or genus2_presentation()
    out = []
    for _, arr in class_arrays(max_len, p):
        out.extend(_decode(row) for row in arr)
    return out
