"""Computable model of the boundary circle of a genus-2 surface group.

Boundary points are fixed points of group elements (dense in the full
boundary), tagged attracting or repelling and positioned on the circle
by the Mobius action of a base Fuchsian representation in the disk
model.  Limit maps send boundary points to flags (special linear case)
or Lagrangians (symplectic case) through eigendata of the word's image.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from scipy.linalg import schur

from .representations import LinearRepresentation, evaluate, fuchsian_genus2
from .symplectic import LagrangianFrame
from .words import Word, format_word, inverse_word, parse_word, reduce

__all__ = [
    "BoundaryPoint",
    "boundary_point",
    "circle_order",
    "fixed_points_psl2",
    "limit_flag",
    "limit_lagrangian",
    "translate_point",
    "veronese_lift",
]

ATTRACTING = "attracting"
REPELLING = "repelling"


@lru_cache(maxsize=1)
def _base_fuchsian() -> LinearRepresentation:
    return fuchsian_genus2()


def _disk_angle(v0: float, v1: float) -> float:
    # boundary point v0/v1 of the upper half plane, sent to the disk by
    # z -> (z - i)/(z + i); homogeneous form is stable at infinity
    ang = np.angle(complex(v0, -v1)) - np.angle(complex(v0, v1))
    return float(ang % (2.0 * np.pi))


def fixed_points_psl2(m: np.ndarray) -> tuple:
    """Fixed-point angles (attracting, repelling) of a hyperbolic 2x2
    matrix acting on the boundary circle of the disk model."""
    m = np.asarray(m, dtype=float)
    tr = m[0, 0] + m[1, 1]
    if abs(tr) <= 2.0:
        raise ValueError("not hyperbolic")
    disc = np.sqrt(tr * tr - 4.0)
    dominant = (tr + np.copysign(disc, tr)) / 2.0
    angles = []
    for lam in (dominant, 1.0 / dominant):
        # rows of m - lam: eigenvector from whichever row is better scaled
        v1 = (m[0, 1], lam - m[0, 0])
        v2 = (lam - m[1, 1], m[1, 0])
        v = v1 if np.hypot(*v1) >= np.hypot(*v2) else v2
        angles.append(_disk_angle(*v))
    return tuple(angles)


@dataclass(frozen=True)
class BoundaryPoint:
    """Fixed point of a group element on the boundary circle."""

    word: Word
    pole: str
    angle: float

    def __post_init__(self):
        if self.pole not in (ATTRACTING, REPELLING):
            raise ValueError("pole must be attracting or repelling")
        if len(self.word) == 0:
            raise ValueError("trivial word has no fixed points")

    def serialized(self) -> tuple:
        return (format_word(self.word), self.pole)


def boundary_point(word, pole: str = ATTRACTING, base=None) -> BoundaryPoint:
    """Boundary point at a fixed point of `word`, positioned on the
    circle of the base Fuchsian representation (canonical by default)."""
    if isinstance(word, str):
        word = parse_word(word)
    word = reduce(word)
    if not word:
        raise ValueError("trivial word has no fixed points")
    rep = base if base is not None else _base_fuchsian()
    att, repl = fixed_points_psl2(evaluate(rep, word))
    angle = att if pole == ATTRACTING else repl
    return BoundaryPoint(word, pole, angle)


def translate_point(gamma, p: BoundaryPoint, base=None) -> BoundaryPoint:
    """Image of a boundary point under a group element: the fixed point
    of the conjugated word, same pole."""
    if isinstance(gamma, str):
        gamma = parse_word(gamma)
    return boundary_point(gamma + p.word + inverse_word(gamma), p.pole, base)


def _angle_of(x) -> float:
    return x.angle if isinstance(x, BoundaryPoint) else float(x)


def circle_order(x, y, z) -> int:
    """Cyclic orientation of three boundary points: +1 counterclockwise,
    -1 clockwise, 0 when two coincide (within 1e-12 on the circle)."""
    two_pi = 2.0 * np.pi
    a, b, c = (_angle_of(t) % two_pi for t in (x, y, z))
    for u, v in ((a, b), (b, c), (a, c)):
        d = (u - v) % two_pi
        if min(d, two_pi - d) < 1e-12:
            return 0
    ab = (b - a) % two_pi
    ac = (c - a) % two_pi
    return 1 if ab < ac else -1


def _real_eigvec(m: np.ndarray, which: str) -> np.ndarray:
    """Unit real eigenvector of the eigenvalue of max or min modulus.
    Requires the extreme modulus to be attained by a single real
    eigenvalue with relative gap 1e-8."""
    lam, vecs = np.linalg.eig(m)
    mod = np.abs(lam)
    order = np.argsort(mod)
    idx = order[-1] if which == "max" else order[0]
    neighbor = mod[order[-2]] if which == "max" else mod[order[1]]
    extreme = mod[idx]
    gap = abs(extreme - neighbor) / max(extreme, neighbor)
    if gap < 1e-8 or abs(lam[idx].imag) > 1e-12 * extreme:
        raise ValueError("not proximal at this word")
    v = vecs[:, idx]
    pivot = np.argmax(np.abs(v))
    v = (v / v[pivot]).real
    v /= np.linalg.norm(v)
    if v[pivot] < 0:
        v = -v
    return v


def _split_conjugator(word):
    # longest prefix u with word = u core u^-1; fixed points and limit
    # data transform equivariantly under u, and working with the short
    # core avoids eigensolves on badly conditioned conjugated images
    k = 0
    while k < (len(word) - 1) // 2 and word[k] == -word[len(word) - 1 - k]:
        k += 1
    return word[:k], word[k:len(word) - k]


def limit_flag(rep: LinearRepresentation, p: BoundaryPoint) -> tuple:
    """Limit flag (line, hyperplane covector) at a boundary point.

    The line is the dominant eigenvector of the word's image (attracting
    pole) or of its inverse; the covector annihilates everything except
    the weakest direction, so the line lies inside the hyperplane."""
    conj, core = _split_conjugator(p.word)
    m = evaluate(rep, core)
    if p.pole == REPELLING:
        m = np.linalg.inv(m)
    line = _real_eigvec(m, "max")
    cov = _real_eigvec(m.T, "min")
    if conj:
        g = evaluate(rep, conj)
        line = g @ line
        line /= np.linalg.norm(line)
        cov = np.linalg.inv(g).T @ cov
        cov /= np.linalg.norm(cov)
    # the flag condition <line, cov> = 0 holds exactly in theory
    # (biorthogonality); remove the independent rounding of the two
    # eigensolves so degenerate cross ratios vanish cleanly
    cov = cov - (cov @ line) * line
    cov /= np.linalg.norm(cov)
    return line, cov


def limit_lagrangian(rep: LinearRepresentation, p: BoundaryPoint) -> LagrangianFrame:
    """Attracting (or repelling) Lagrangian at a boundary point: the sum
    of generalized eigenspaces with eigenvalue modulus above one (below
    one for the repelling pole), via sorted real Schur form."""
    conj, core = _split_conjugator(p.word)
    m = evaluate(rep, core)
    if p.pole == REPELLING:
        m = np.linalg.inv(m)
    mods = np.abs(np.linalg.eigvals(m))
    if np.min(np.abs(mods - 1.0)) < 1e-8:
        raise ValueError("no dominated splitting at this word")
    _, z, sdim = schur(m, output="real", sort="ouc")
    if sdim != rep.size // 2:
        raise ValueError("no dominated splitting at this word")
    frame = z[:, :sdim]
    if conj:
        # symplectic images keep Lagrangians Lagrangian; re-orthonormalize
        # the pushed frame for scale only
        frame = np.linalg.qr(evaluate(rep, conj) @ frame)[0]
    return LagrangianFrame(frame)


def veronese_lift(v: np.ndarray, n: int) -> np.ndarray:
    """Lift of a 2-vector to the degree n-1 symmetric power, the curve
    traced by limit lines of irreducibly embedded Fuchsian reps."""
    a, b = v
    out = np.array([comb(n - 1, k) * a ** (n - 1 - k) * b ** k for k in range(n)])
    return out / np.linalg.norm(out)
