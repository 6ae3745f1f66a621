"""Cross ratios on the boundary circle.

Three evaluator kinds: the classical projective cross ratio of a
Fuchsian action, the flag cross ratio of an irreducibly embedded (or
deformed) special linear representation, and the Lagrangian determinant
cross ratio of a symplectic one.  On top of them: the five-rule axiom
checker, periods of group elements, the compatible flow solver, and the
period-vs-length comparison over conjugacy classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .boundary import (
    ATTRACTING,
    REPELLING,
    BoundaryPoint,
    _base_fuchsian,
    boundary_point,
    fixed_points_psl2,
    limit_flag,
    limit_lagrangian,
    translate_point,
    veronese_lift,
)
from .representations import LinearRepresentation, evaluate, fuchsian_genus2
from .symplectic import LagrangianFrame, cross_ratio_B
from .words import enumerate_conjugacy_classes, format_word, parse_word, reduce

__all__ = [
    "CrossRatioEvaluator",
    "classical_cross_ratio",
    "classical_evaluator",
    "hitchin_cross_ratio",
    "maximal_cross_ratio",
    "check_axioms",
    "period",
    "flow_point",
    "compare_periods",
]

AXIOM_NAMES = ("symmetry", "zero_iff", "cocycle_t", "cocycle_x", "one_iff")


def _angle_of(p) -> float:
    return p.angle if isinstance(p, BoundaryPoint) else float(p)


def _chord(angle: float) -> complex:
    return complex(np.cos(angle), np.sin(angle))


def classical_cross_ratio(x, y, z, t) -> float:
    """Projective cross ratio (y-x)(t-z)/((y-z)(t-x)) of four circle
    points, computed on unit-circle chords (Mobius invariant, so the
    chordal value equals the projective one and infinity needs no
    special case)."""
    ax, ay, az, at = (_angle_of(p) for p in (x, y, z, t))
    cx, cy, cz, ct = (_chord(a) for a in (ax, ay, az, at))
    if abs(cx - ct) < 1e-12 or abs(cy - cz) < 1e-12:
        raise ValueError("degenerate quadruple")
    val = ((cy - cx) * (ct - cz)) / ((cy - cz) * (ct - cx))
    return float(val.real)


@dataclass(frozen=True)
class CrossRatioEvaluator:
    """Cross ratio as a callable on quadruples of boundary points.

    `fn` evaluates quadruples of BoundaryPoint.  `angle_fn`, when
    available, evaluates quadruples of raw circle angles; only
    evaluators tied to an explicit limit curve provide it, and the flow
    solver requires it."""

    kind: str
    fn: Callable
    rep: LinearRepresentation | None = None
    angle_fn: Callable | None = None
    angle_at: Callable | None = None

    def point_angle(self, p) -> float:
        """Circle coordinate of a boundary point on this evaluator's own
        circle (raw floats pass through unchanged)."""
        if isinstance(p, BoundaryPoint) and self.angle_at is not None:
            return float(self.angle_at(p))
        return _angle_of(p)

    def __call__(self, x, y, z, t) -> float:
        if all(isinstance(p, BoundaryPoint) for p in (x, y, z, t)):
            return self.fn(x, y, z, t)
        if self.angle_fn is None:
            raise ValueError("evaluator does not support arbitrary circle points")
        return self.angle_fn(*(self.point_angle(p) for p in (x, y, z, t)))


def _anchored_angle_map(base: LinearRepresentation) -> Callable:
    # circle coordinate of fixed points under a specific Fuchsian
    # representation; BoundaryPoint.angle is anchored to the canonical
    # one and would mix up two different boundary parametrizations
    cache: dict = {}

    def angle_at(p: BoundaryPoint) -> float:
        key = (p.word, p.pole)
        if key not in cache:
            att, repl = fixed_points_psl2(evaluate(base, p.word))
            cache[key] = att if p.pole == ATTRACTING else repl
        return cache[key]

    return angle_at


def classical_evaluator(rep: LinearRepresentation | None = None) -> CrossRatioEvaluator:
    """Classical cross ratio of the Mobius action of a Fuchsian
    representation; boundary points are re-anchored to this
    representation's own circle."""
    base = rep if rep is not None else _base_fuchsian()
    if base.size != 2:
        raise ValueError("classical evaluator needs a 2x2 representation")
    angle_at = _anchored_angle_map(base)

    def fn(x, y, z, t):
        return classical_cross_ratio(*(angle_at(p) for p in (x, y, z, t)))

    return CrossRatioEvaluator("classical", fn, base, classical_cross_ratio, angle_at)


def _dual_lift(v: np.ndarray, n: int) -> np.ndarray:
    # covector of the osculating hyperplane along the Veronese curve:
    # <lift(v), dual_lift(w)> is proportional to (v wedge w)^(n-1)
    a, b = v
    out = np.array([b ** (n - 1 - k) * (-a) ** k for k in range(n)])
    return out / np.linalg.norm(out)


def _boundary_vector(angle: float) -> np.ndarray:
    # homogeneous coordinates of the circle point at a disk angle
    return np.array([np.cos(angle / 2.0), -np.sin(angle / 2.0)])


def hitchin_cross_ratio(rep: LinearRepresentation) -> CrossRatioEvaluator:
    """Flag cross ratio b = <l_x,h_y><l_z,h_t> / (<l_x,h_t><l_z,h_y>)
    through the limit flags of a special linear representation.

    For an undeformed irreducible embed the limit curve is the Veronese
    curve of the underlying Fuchsian circle, which extends the evaluator
    to arbitrary circle angles (needed by the flow solver)."""
    if rep.family != "SL":
        raise ValueError("flag cross ratio needs a special linear representation")
    cache: dict = {}

    def flag_at(p: BoundaryPoint):
        key = (p.word, p.pole)
        if key not in cache:
            cache[key] = limit_flag(rep, p)
        return cache[key]

    def from_flags(fx, fy, fz, ft) -> float:
        den = (fx[0] @ ft[1]) * (fz[0] @ fy[1])
        if den == 0.0:
            raise ValueError("degenerate quadruple")
        if fx is fy or fz is ft:
            # coincident points vanish identically; the flag pairing
            # would only reproduce that up to rounding, which near
            # tangent denominators can amplify
            return 0.0
        num = (fx[0] @ fy[1]) * (fz[0] @ ft[1])
        return float(num / den)

    def fn(x, y, z, t):
        return from_flags(*(flag_at(p) for p in (x, y, z, t)))

    angle_fn = None
    angle_at = None
    if rep.embed_kind == "sym" and rep.base2 is not None:
        n = rep.size
        angle_at = _anchored_angle_map(rep.base2)

        def veronese_flag(angle: float):
            v = _boundary_vector(angle)
            return veronese_lift(v, n), _dual_lift(v, n)

        def angle_fn(ax, ay, az, at):
            return from_flags(*(veronese_flag(a) for a in (ax, ay, az, at)))

    return CrossRatioEvaluator("hitchin_flag", fn, rep, angle_fn, angle_at)


def maximal_cross_ratio(rep: LinearRepresentation) -> CrossRatioEvaluator:
    """Lagrangian determinant cross ratio b = B(xi(x),..,xi(t)) through
    the limit Lagrangians of a symplectic representation.  Undeformed
    diagonal embeds extend to arbitrary circle angles via the n-fold
    copy of the circle direction."""
    if rep.family != "Sp":
        raise ValueError("Lagrangian cross ratio needs a symplectic representation")
    cache: dict = {}

    def frame_at(p: BoundaryPoint) -> LagrangianFrame:
        key = (p.word, p.pole)
        if key not in cache:
            cache[key] = limit_lagrangian(rep, p)
        return cache[key]

    def fn(x, y, z, t):
        return cross_ratio_B(*(frame_at(p) for p in (x, y, z, t)))

    angle_fn = None
    angle_at = None
    if rep.embed_kind == "diag" and rep.base2 is not None:
        n = rep.size // 2
        eye = np.eye(n)
        angle_at = _anchored_angle_map(rep.base2)

        def circle_frame(angle: float) -> LagrangianFrame:
            v = _boundary_vector(angle)
            return LagrangianFrame(np.vstack([v[0] * eye, v[1] * eye]))

        def angle_fn(ax, ay, az, at):
            return cross_ratio_B(*(circle_frame(a) for a in (ax, ay, az, at)))

    return CrossRatioEvaluator("maximal_lagrangian", fn, rep, angle_fn, angle_at)


def _sample_points(sample_size: int, seed: int, max_len: int = 5) -> list:
    """Pool of boundary points at fixed points of short random words,
    deduplicated by circle angle."""
    rng = np.random.default_rng(seed)
    pool: list[BoundaryPoint] = []
    angles: list[float] = []
    target = max(8, min(4 * sample_size, 400))
    attempts = 0
    while len(pool) < target and attempts < 200 * target:
        attempts += 1
        length = int(rng.integers(1, max_len + 1))
        letters = []
        while len(letters) < length:
            s = int(rng.integers(1, 5)) * (1 if rng.random() < 0.5 else -1)
            if letters and letters[-1] == -s:
                continue
            letters.append(s)
        word = reduce(tuple(letters))
        if not word:
            continue
        for pole in (ATTRACTING, REPELLING):
            p = boundary_point(word, pole)
            if all(abs((p.angle - a + np.pi) % (2 * np.pi) - np.pi) > 1e-10 for a in angles):
                pool.append(p)
                angles.append(p.angle)
    return pool


def check_axioms(b: CrossRatioEvaluator, sample_size: int, seed: int) -> dict:
    """Max relative violation of the five cross-ratio rules on random
    fixed-point quadruples: symmetry b(x,y,z,t) = b(z,t,x,y); vanishing
    at x = y or z = t; the two multiplicative cocycles (chaining the
    second/fourth and first/third slots); normalization b = 1 at x = z
    or y = t.  Passes when every violation is at most 1e-8."""
    pool = _sample_points(sample_size, seed)
    rng = np.random.default_rng(seed + 1)
    worst = {name: 0.0 for name in AXIOM_NAMES}
    done = 0
    attempts = 0
    while done < sample_size and attempts < 50 * sample_size:
        attempts += 1
        idx = rng.choice(len(pool), size=5, replace=False)
        x, y, z, t, w = (pool[i] for i in idx)
        try:
            bxyzt = b(x, y, z, t)
            scale = max(1.0, abs(bxyzt))
            worst["symmetry"] = max(worst["symmetry"], abs(bxyzt - b(z, t, x, y)) / scale)
            worst["zero_iff"] = max(worst["zero_iff"], abs(b(x, x, z, t)), abs(b(x, y, z, z)))
            worst["cocycle_t"] = max(
                worst["cocycle_t"], abs(bxyzt - b(x, y, z, w) * b(x, w, z, t)) / scale)
            worst["cocycle_x"] = max(
                worst["cocycle_x"], abs(bxyzt - b(x, y, w, t) * b(w, y, z, t)) / scale)
            worst["one_iff"] = max(
                worst["one_iff"], abs(b(x, y, x, t) - 1.0), abs(b(x, y, z, y) - 1.0))
        except ValueError:
            continue
        done += 1
    worst["pass"] = bool(all(worst[name] <= 1e-8 for name in AXIOM_NAMES))
    worst["samples"] = done
    return worst


def period(b: CrossRatioEvaluator, gamma, y: BoundaryPoint | None = None) -> float:
    """Period of a group element: log |b(g-, g y, g+, y)|.  Independent
    of the probe point y, which defaults to a fixed point of a word
    away from the poles of gamma."""
    if isinstance(gamma, str):
        gamma = parse_word(gamma)
    gamma = reduce(gamma)
    if not gamma:
        raise ValueError("trivial word has no period")
    plus = boundary_point(gamma, ATTRACTING)
    minus = boundary_point(gamma, REPELLING)
    pole_angles = (b.point_angle(plus), b.point_angle(minus))

    def pole_gap(q: BoundaryPoint) -> float:
        # measured on the evaluator's own circle: a probe that looks
        # clear of the poles in the canonical coordinate can sit nearly
        # on top of one in another hyperbolic structure
        qa = b.point_angle(q)
        return min(abs((qa - a + np.pi) % (2 * np.pi) - np.pi) for a in pole_angles)

    if y is None:
        candidates = [boundary_point(w) for w in ("a", "b", "c", "d", "a b", "c d")]
        y = max(candidates, key=pole_gap)
    if pole_gap(y) <= 1e-8:
        raise ValueError("probe point coincides with a pole")
    gy = translate_point(gamma, y)
    return float(np.log(abs(b(minus, gy, plus, y))))


def flow_point(b: CrossRatioEvaluator, x, z, y, t: float) -> float:
    """The unique circle point u on the arc from x to y through z with
    log b(x, u, y, z) = t, by monotone root finding in the arc
    coordinate.  Returns the angle of u."""
    if b.angle_fn is None:
        raise ValueError("evaluator does not support arbitrary circle points")
    two_pi = 2.0 * np.pi
    ax, az, ay = (b.point_angle(p) % two_pi for p in (x, z, y))
    span = (ay - ax) % two_pi
    pz = (az - ax) % two_pi
    if not (1e-12 < pz < span - 1e-12):
        # z sits on the complementary arc: parametrize clockwise
        span = two_pi - span
        pz = two_pi - pz
        direction = -1.0
    else:
        direction = 1.0
    if not (1e-12 < pz < span - 1e-12):
        raise ValueError("flow endpoints are degenerate")

    def logb(s: float) -> float:
        u = (ax + direction * s) % two_pi
        val = b.angle_fn(ax, u, ay, az)
        if not np.isfinite(val) or val <= 0.0:
            raise ValueError("not a strict cross ratio on this arc")
        return float(np.log(val))

    def arcval(s: float) -> float:
        # the cross ratio degenerates at the arc ends (limit 0 at x,
        # infinity at y); an evaluation failure there stands in for the
        # corresponding signed limit
        try:
            return logb(s)
        except ValueError:
            return np.inf if s >= pz else -np.inf

    # the arc function runs from -inf at x to +inf at y; expand a
    # bracket around z and verify monotonicity on the way
    lo = hi = pz
    flo = fhi = 0.0
    step = min(pz, span - pz) / 4.0
    while flo > t - 1e-12:
        lo = max(lo - step, span * 1e-9)
        fnew = arcval(lo)
        if fnew > flo + 1e-9:
            raise ValueError("not a strict cross ratio on this arc")
        flo = fnew
        step *= 1.7
        if lo <= span * 1e-9 and flo > t:
            raise ValueError("not a strict cross ratio on this arc")
    step = min(pz, span - pz) / 4.0
    while fhi < t + 1e-12:
        hi = min(hi + step, span * (1.0 - 1e-9))
        fnew = arcval(hi)
        if fnew < fhi - 1e-9:
            raise ValueError("not a strict cross ratio on this arc")
        fhi = fnew
        step *= 1.7
        if hi >= span * (1.0 - 1e-9) and fhi < t:
            raise ValueError("not a strict cross ratio on this arc")
    if abs(t) < 1e-15:
        root = pz
    else:
        # bisect until both ends evaluate, then hand off to brentq
        root = None
        for _ in range(200):
            if np.isfinite(flo) and np.isfinite(fhi):
                root = brentq(lambda s: arcval(s) - t, lo, hi,
                              xtol=1e-14, rtol=8.9e-16)
                break
            mid = 0.5 * (lo + hi)
            fmid = arcval(mid)
            if fmid < t:
                lo, flo = mid, fmid
            else:
                hi, fhi = mid, fmid
            if hi - lo <= 1e-15:
                break
        if root is None:
            root = 0.5 * (lo + hi)
    if abs(logb(root) - t) > 1e-10:
        raise ValueError("not a strict cross ratio on this arc")
    return float((ax + direction * root) % two_pi)


def compare_periods(b: CrossRatioEvaluator, fn_base, max_len: int) -> dict:
    """Periods against Fuchsian translation lengths over all conjugacy
    classes up to max_len: rows (word, length, period, ratio) plus the
    empirical comparison constant A = max(max ratio, 1/min ratio)."""
    base = fuchsian_genus2(fn_base)
    rows = []
    for word in enumerate_conjugacy_classes(max_len):
        m = evaluate(base, word)
        tr = abs(np.trace(m))
        if tr <= 2.0:
            continue
        half = np.arccosh(tr / 2.0)
        lam = 2.0 * half  # log of (eigenvalue ratio) of the 2x2 image
        lb = period(b, word)
        rows.append((format_word(word), float(lam), float(lb), float(lb / lam)))
    if not rows:
        raise ValueError("no hyperbolic classes up to this length")
    ratios = [r[3] for r in rows]
    lo, hi = min(ratios), max(ratios)
    return {
        "rows": rows,
        "min_ratio": float(lo),
        "max_ratio": float(hi),
        "A": float(max(hi, 1.0 / lo)),
    }
