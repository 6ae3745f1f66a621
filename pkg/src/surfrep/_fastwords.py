"""JIT-compiled depth-first enumeration of canonical cyclic words.

Genus 2 only: 8 letter codes, inverse = code ^ 1.  The forbidden-gram
lookup table marks cyclic 5-letter windows of the relator and its
inverse; words containing one reduce to shorter classes and are skipped.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _is_lexmin(word, n):
    for s in range(1, n):
        for i in range(n):
            a = word[(s + i) % n]
            b = word[i]
            if a < b:
                return False
            if a > b:
                break
    return True


@njit(cache=True, inline="always")
def _has_forbidden(word, n, lut):
    for s in range(n):
        code = 0
        for i in range(5):
            code = code * 8 + word[(s + i) % n]
        if lut[code]:
            return True
    return False


@njit(cache=True)
def _dfs(length, lut, out, fill):
    word = np.empty(length, np.int8)
    nxt = np.zeros(length, np.int8)
    count = 0
    d = 0
    while d >= 0:
        lt = nxt[d]
        if lt > 7:
            d -= 1
            continue
        nxt[d] = lt + 1
        if d > 0 and (word[d - 1] ^ 1) == lt:
            continue
        word[d] = lt
        if d == length - 1:
            if length > 1 and (word[length - 1] ^ 1) == word[0]:
                continue
            if not _is_lexmin(word, length):
                continue
            if length >= 5 and _has_forbidden(word, length, lut):
                continue
            if fill:
                out[count, :] = word
            count += 1
            continue
        d += 1
        nxt[d] = word[0]
    return count


def dfs_count(length, lut):
    return _dfs(length, lut, np.empty((0, length), np.int8), False)


def dfs_fill(length, lut, out):
    return _dfs(length, lut, out, True)
