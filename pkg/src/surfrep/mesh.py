"""Equivariant triangulations of the genus-2 surface.

The domain is a one-vertex octagon fundamental polygon realized in the
Poincare disk by the prefix orbit of a corner seed: the k-th corner is
the image of the seed under the first k letters of the relator.  Sides
are subdivided at equal arclength fractions (paired sides share the
segment count, so the pairing isometry matches subdivision points
exactly) and the interior is filled with a hyperbolically uniform
point sample at the same spacing, smoothed and Delaunay triangulated
in Poincare coordinates, where Euclidean Delaunay agrees with the
intrinsic hyperbolic Delaunay triangulation.  Boundary vertices are
glued in pairs by side-pairing words; all eight corners form a single
vertex orbit whose gluing cycle composes to the relator.  Edge weights
are Euclidean cotangents of the comparison triangles built from
hyperbolic side lengths.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .representations import FNCoordinates, fuchsian_genus2
from .words import Word, dehn_reduce, format_word, genus2_presentation, parse_word, reduce

__all__ = [
    "TriangulatedDomain",
    "build_mesh",
    "hyp_dist",
    "hyp_midpoint",
    "mesh_to_dict",
    "mesh_from_dict",
]

_TWO_PI = 2.0 * np.pi

# Cayley transform: upper half plane Mobius action conjugated to the disk
_T = np.array([[1.0, -1.0j], [1.0, 1.0j]])
_TI = np.linalg.inv(_T)


def _disk_matrix(m: np.ndarray) -> np.ndarray:
    return _T @ np.asarray(m, dtype=complex) @ _TI


def _act(md: np.ndarray, z):
    return (md[0, 0] * z + md[0, 1]) / (md[1, 0] * z + md[1, 1])


def hyp_dist(z, w):
    """Hyperbolic distance between Poincare-disk points (vectorized)."""
    delta = np.abs(z - w) / np.abs(1.0 - np.conj(z) * w)
    delta = np.minimum(delta, 1.0 - 1e-16)
    return 2.0 * np.arctanh(delta)


def _to_origin(z, w):
    return (w - z) / (1.0 - np.conj(z) * w)


def _from_origin(z, u):
    return (u + z) / (1.0 + np.conj(z) * u)


def geodesic_point(z, w, t: float):
    """Point at parameter t along the geodesic from z to w (t in [0,1])."""
    u = _to_origin(z, w)
    r = abs(u)
    if r < 1e-300:
        return complex(z)
    rt = np.tanh(t * np.arctanh(r))
    return complex(_from_origin(z, rt * u / r))


def hyp_midpoint(z, w):
    """Midpoint of the geodesic segment between two disk points."""
    return geodesic_point(z, w, 0.5)


def _angle_at(z, u, v) -> float:
    a = _to_origin(z, u)
    b = _to_origin(z, v)
    ang = abs(np.angle(a * np.conj(b)))
    return float(min(ang, _TWO_PI - ang))


def _klein(z):
    return 2.0 * z / (1.0 + np.abs(z) ** 2)


def _karcher_mean_disk(pts) -> complex:
    def variance(z):
        return float(sum(hyp_dist(z, p) ** 2 for p in pts))

    def mean_tangent(z):
        tangents = []
        for p in pts:
            u = _to_origin(z, p)
            r = abs(u)
            tangents.append(0.0 if r < 1e-15 else 2.0 * np.arctanh(r) * u / r)
        return complex(np.mean(tangents))

    z = complex(np.mean(pts))
    value = variance(z)
    for _ in range(200):
        g = mean_tangent(z)
        if abs(g) < 1e-13:
            break
        # backtracking: the full step overshoots for spread-out points
        step = 1.0
        while step > 1e-6:
            v = step * g
            cand = complex(_from_origin(z, np.tanh(abs(v) / 2.0) * v / abs(v)))
            cand_value = variance(cand)
            if cand_value < value - 1e-15:
                z, value = cand, cand_value
                break
            step *= 0.5
        else:
            break
    return z


def _segments_cross(a, b, c, d) -> bool:
    # proper crossing of Klein-model chords, shared endpoints excluded
    def orient(p, q, r):
        return np.sign((q.real - p.real) * (r.imag - p.imag)
                       - (q.imag - p.imag) * (r.real - p.real))

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


# ---------------------------------------------------------------------------
# octagon construction
# ---------------------------------------------------------------------------


def _side_partner(relator: Word) -> dict:
    partner = {}
    for k, s in enumerate(relator):
        for m, t in enumerate(relator):
            if t == -s:
                partner[k] = m
    return partner


def _octagon_valid(corners) -> bool:
    n = len(corners)
    angles = [_angle_at(corners[k], corners[k - 1], corners[(k + 1) % n])
              for k in range(n)]
    if abs(sum(angles) - _TWO_PI) > 1e-8:
        return False
    kl = [_klein(z) for z in corners]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(kl[i], kl[(i + 1) % n], kl[j], kl[(j + 1) % n]):
                return False
    # require convexity in the Klein model (= hyperbolic convexity), which
    # makes point-in-polygon tests exact sign tests against the sides
    turns = [((kl[(k + 1) % n] - kl[k]).real * (kl[(k + 2) % n] - kl[(k + 1) % n]).imag
              - (kl[(k + 1) % n] - kl[k]).imag * (kl[(k + 2) % n] - kl[(k + 1) % n]).real)
             for k in range(n)]
    return all(t > 1e-12 for t in turns) or all(t < -1e-12 for t in turns)


def _octagon_quality(corners) -> float:
    q = list(corners)
    n = len(q)
    sides = np.array([hyp_dist(q[k], q[(k + 1) % n]) for k in range(n)])
    angles = np.array([_angle_at(q[k], q[k - 1], q[(k + 1) % n]) for k in range(n)])
    mean = sides.mean()
    return float(np.sum((sides - mean) ** 2) / mean ** 2
                 + np.sum((angles - angles.mean()) ** 2))


def _find_corner_seed(prefix_mats) -> complex:
    def corners_of(v):
        return [_act(pm, v) for pm in prefix_mats[:-1]]

    def penalized(x):
        r = float(np.hypot(*x))
        if r < 1e-9 or r > 7.0:
            return 1e9
        v = np.tanh(r) * complex(*x) / r
        q = corners_of(v)
        if not _octagon_valid(q):
            return 1e6 + abs(sum(_angle_at(q[k], q[k - 1], q[(k + 1) % 8])
                                 for k in range(8)) - _TWO_PI)
        return _octagon_quality(q)

    candidates = []
    for r in np.linspace(0.35, 0.93, 9):
        for phi in np.linspace(0.0, _TWO_PI, 25)[:-1]:
            v = r * np.exp(1j * phi)
            q = corners_of(v)
            if _octagon_valid(q):
                candidates.append((_octagon_quality(q), v))
    if not candidates:
        raise ValueError("octagon construction failed for these coordinates")
    candidates.sort(key=lambda t: t[0])
    best_val, best_v = candidates[0]
    for _, v in candidates[:3]:
        x0 = np.arctanh(abs(v)) * np.array([v.real, v.imag]) / abs(v)
        res = minimize(penalized, x0, method="Nelder-Mead",
                       options={"maxiter": 300, "xatol": 1e-10, "fatol": 1e-12})
        if res.fun < best_val:
            r = float(np.hypot(*res.x))
            cand = np.tanh(r) * complex(*res.x) / r
            if _octagon_valid(corners_of(cand)):
                best_val, best_v = res.fun, cand
    return best_v


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


def _cotangent_weights(vertices, triangles):
    """Per-edge sums of half-cotangents from comparison triangles with the
    hyperbolic side lengths."""
    weights = {}
    for t in triangles:
        p = vertices[list(t)]
        lengths = np.array([hyp_dist(p[1], p[2]), hyp_dist(p[2], p[0]),
                            hyp_dist(p[0], p[1])])
        a, b, c = lengths
        cos = np.array([(b * b + c * c - a * a) / (2 * b * c),
                        (c * c + a * a - b * b) / (2 * c * a),
                        (a * a + b * b - c * c) / (2 * a * b)])
        cos = np.clip(cos, -1.0, 1.0)
        sin2 = 1.0 - cos * cos
        if np.any(sin2 < 1e-24):
            raise ValueError("degenerate comparison triangle in weight computation")
        cot = cos / np.sqrt(sin2)
        for i in range(3):
            u, v = t[(i + 1) % 3], t[(i + 2) % 3]
            key = (min(u, v), max(u, v))
            weights[key] = weights.get(key, 0.0) + 0.5 * float(cot[i])
    edges = np.array(sorted(weights), dtype=np.int64)
    w = np.array([weights[tuple(e)] for e in edges])
    return edges, w


def _flip_nonpositive(vertices, triangles, protected) -> np.ndarray:
    """Delaunay-like flips of interior edges until every accumulated
    cotangent weight is positive; protected (glued) edges cannot flip."""
    tris = [tuple(t) for t in triangles]
    for _ in range(200):
        edges, w = _cotangent_weights(vertices, np.array(tris))
        bad = [tuple(e) for e, wv in zip(edges, w) if wv <= 1e-12]
        if not bad:
            return np.array(tris, dtype=np.int64)
        progressed = False
        for u, v in bad:
            if (u, v) in protected:
                continue
            side = [(i, t) for i, t in enumerate(tris) if u in t and v in t]
            if len(side) != 2:
                continue
            (i1, t1), (i2, t2) = side
            a = next(x for x in t1 if x not in (u, v))
            b = next(x for x in t2 if x not in (u, v))
            if a == b or (min(a, b), max(a, b)) in {(min(p, q), max(p, q))
                                                    for t in tris for p, q in
                                                    ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))}:
                continue
            # keep the orientation of the quad u, a, v, b
            if t1.index(u) == (t1.index(v) + 1) % 3:
                u, v = v, u
            tris[i1] = (u, a, b)
            tris[i2] = (v, b, a)
            progressed = True
            break
        if not progressed:
            break
    edges, w = _cotangent_weights(vertices, np.array(tris))
    if np.any(w <= 1e-12):
        raise ValueError("mesh quality enforcement failed: nonpositive cotangent weight")
    return np.array(tris, dtype=np.int64)


# ---------------------------------------------------------------------------
# the domain type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangulatedDomain:
    """A triangulated octagon fundamental domain with side gluings.

    vertices are Poincare-disk positions; side_gluings sends each
    boundary vertex to its glued partner and the pairing word; orbits
    group vertices into surface vertex classes, each member carrying the
    word whose holonomy moves the class representative onto it.
    """

    fn: FNCoordinates
    refine: int
    vertices: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray
    weights: np.ndarray
    side_gluings: dict
    orbit_index: np.ndarray
    orbit_words: tuple
    representatives: tuple

    @property
    def positions(self) -> np.ndarray:
        return np.column_stack([self.vertices.real, self.vertices.imag])

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_classes(self) -> int:
        return len(self.representatives)

    def refined(self) -> "TriangulatedDomain":
        return build_mesh(self.fn, self.refine + 1)

    def boundary_vertices(self) -> tuple:
        return tuple(sorted(self.side_gluings))


def _orbits_from_gluings(n_vertices, gluings, rep2, vertices):
    """Union boundary vertices into classes, accumulating the words that
    realize each member from the class representative."""
    neighbors = {v: [] for v in range(n_vertices)}
    for v, (v2, word) in gluings.items():
        neighbors[v].append((v2, word))
        neighbors[v2].append((v, tuple(-s for s in reversed(word))))
    orbit_index = -np.ones(n_vertices, dtype=np.int64)
    orbit_words = [None] * n_vertices
    reps = []
    for v in range(n_vertices):
        if orbit_index[v] >= 0:
            continue
        cls = len(reps)
        reps.append(v)
        orbit_index[v] = cls
        orbit_words[v] = ()
        stack = [v]
        while stack:
            u = stack.pop()
            for u2, word in neighbors[u]:
                if orbit_index[u2] >= 0:
                    continue
                orbit_index[u2] = cls
                # pos(u2) = rho(word) pos(u) = rho(word . w_u) pos(rep)
                orbit_words[u2] = reduce(word + orbit_words[u])
                stack.append(u2)
    for v in range(n_vertices):
        word = orbit_words[v]
        if word:
            from .representations import evaluate

            moved = _act(_disk_matrix(evaluate(rep2, word)), vertices[reps[orbit_index[v]]])
            if abs(moved - vertices[v]) > 1e-7:
                raise ValueError("gluing words are inconsistent with positions")
    return orbit_index, tuple(orbit_words), tuple(reps)


def _corner_cycle_word(relator, partner, side_words) -> Word:
    """Compose the gluing words met when walking once around the corner
    orbit; the walk visits every corner exactly once."""
    k = 0
    seen = []
    letters = []
    for _ in range(len(relator)):
        seen.append(k)
        letters.append(side_words[k])
        k = (partner[k] + 1) % len(relator)
    if k != 0 or len(set(seen)) != len(relator):
        raise ValueError("corner gluings do not form a single vertex orbit")
    word = ()
    for w in letters:
        word = reduce(w + word)
    return word


@lru_cache(maxsize=64)
def _octagon_cached(fn_key):
    lengths, twists = fn_key
    fn = FNCoordinates(lengths, twists)
    rep2 = fuchsian_genus2(fn)
    relator = genus2_presentation().relator
    prefix_words = [relator[:k] for k in range(len(relator) + 1)]
    from .representations import evaluate

    prefix_mats = [_disk_matrix(evaluate(rep2, w)) for w in prefix_words]
    seed = _find_corner_seed(prefix_mats)
    corners = [_act(prefix_mats[k], seed) for k in range(len(relator))]
    if not _octagon_valid(corners):
        raise ValueError("octagon construction failed for these coordinates")
    # translate the polygon's hyperbolic mean point to the origin: with the
    # origin inside, every side arc bows into the polygon relative to its
    # chart chord, which the triangle filters rely on
    center = _karcher_mean_disk(corners)
    centered = [_to_origin(center, q) for q in corners]
    return fn, rep2, relator, prefix_words, centered, center


def _ccw_polygon(poly):
    """Orient a convex complex polygon counterclockwise."""
    n = len(poly)
    area2 = sum((poly[k].real * poly[(k + 1) % n].imag
                 - poly[(k + 1) % n].real * poly[k].imag) for k in range(n))
    return poly if area2 > 0 else poly[::-1]


def _inside_margin(points, poly_ccw):
    """Signed distance (in chart units) of points to the sides of a convex
    counterclockwise polygon: positive strictly inside, ~0 on the boundary."""
    points = np.asarray(points)
    margins = np.full(points.shape, np.inf)
    n = len(poly_ccw)
    for k in range(n):
        a, b = poly_ccw[k], poly_ccw[(k + 1) % n]
        side = b - a
        cross = (side.real * (points.imag - a.imag)
                 - side.imag * (points.real - a.real)) / abs(side)
        margins = np.minimum(margins, cross)
    return margins


def _seed_points(corners, partner, refine: int):
    """Seed positions at a common target spacing h: paired sides get
    matching equal-arclength subdivisions, the interior gets a thinned
    hyperbolically uniform sample."""
    from scipy.spatial import cKDTree

    n_sides = len(corners)
    # equilateral triangles of side h tile the 4 pi octagon area in
    # roughly 8 * 4^refine pieces; undershoot so thinning losses still
    # leave at least that many
    h = 0.85 * np.sqrt(16.0 * np.pi / (np.sqrt(3.0) * 8.0 * 4.0 ** refine))

    segments = {}
    for k in range(n_sides):
        key = min(k, partner[k])
        if key not in segments:
            a, b = corners[key], corners[(key + 1) % n_sides]
            segments[key] = max(1, int(round(hyp_dist(a, b) / h)))

    vertices = list(corners)
    side_lists = []
    for k in range(n_sides):
        m = segments[min(k, partner[k])]
        a, b = corners[k], corners[(k + 1) % n_sides]
        lst = [k]
        for j in range(1, m):
            lst.append(len(vertices))
            vertices.append(geodesic_point(a, b, j / m))
        lst.append((k + 1) % n_sides)
        side_lists.append(lst)
    boundary = list(range(len(vertices)))

    # one interior point on each corner bisector: corner wedges are too
    # narrow for the sampled points, and without an interior point they
    # triangulate into boundary-only slivers
    bisector = []
    for k in range(n_sides):
        c = corners[k]
        u = _to_origin(c, corners[(k - 1) % n_sides])
        v = _to_origin(c, corners[(k + 1) % n_sides])
        direction = u / abs(u) + v / abs(v)
        direction /= abs(direction)
        bisector.append(complex(_from_origin(c, np.tanh(0.4 * h) * direction)))

    # hyperbolically uniform interior sample: inverse-CDF polar draws on
    # the hyperbolic disk covering the polygon, restricted to the polygon
    kl = _ccw_polygon(np.array([_klein(z) for z in corners]))
    radius = max(hyp_dist(0.0, z) for z in corners)
    target = max(4, int(round(8.0 * np.pi / (np.sqrt(3.0) * h * h))))
    rng = np.random.default_rng(20120 + refine)
    candidates = []
    for _ in range(400):
        n_draw = 4 * (target + 32)
        rho = np.arccosh(1.0 + rng.uniform(size=n_draw) * (np.cosh(radius) - 1.0))
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n_draw)
        z = np.tanh(0.5 * rho) * np.exp(1j * theta)
        zk = 2.0 * z / (1.0 + np.abs(z) ** 2)
        candidates.extend(z[_inside_margin(zk, kl) > 1e-10])
        if len(candidates) >= 8 * target:
            break

    kept = list(vertices) + bisector
    recent = []
    tree = cKDTree(np.array([[z.real, z.imag] for z in kept]))
    spacing = 0.72 * h
    th = np.tanh(0.5 * spacing)
    for z in candidates:
        euclid = th * (1.0 - abs(z) ** 2) / max(0.05, 1.0 - abs(z) * th)
        near = tree.query_ball_point([z.real, z.imag], euclid)
        if any(hyp_dist(z, kept[i]) < spacing for i in near):
            continue
        if any(hyp_dist(z, w) < spacing for w in recent):
            continue
        kept.append(z)
        recent.append(z)
        if len(recent) >= 64:
            tree = cKDTree(np.array([[z.real, z.imag] for z in kept]))
            recent = []
    return np.array(kept, dtype=complex), boundary, side_lists


def _lloyd_smooth(pts, boundary_mask, poly_klein, rounds: int = 8):
    """Damped hyperbolic Laplacian smoothing of interior points over the
    current hyperbolic Delaunay adjacency."""
    from scipy.spatial import Delaunay

    pts = pts.copy()
    for _ in range(rounds):
        tri = Delaunay(np.column_stack([pts.real, pts.imag]))
        cent = _klein(pts)[tri.simplices].mean(axis=1)
        keep = tri.simplices[_inside_margin(cent, poly_klein) > 1e-12]
        pairs = np.concatenate([keep[:, [0, 1]], keep[:, [1, 2]], keep[:, [2, 0]]])
        pairs = np.unique(np.sort(pairs, axis=1), axis=0)
        src = np.concatenate([pairs[:, 0], pairs[:, 1]])
        dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
        u = (pts[dst] - pts[src]) / (1.0 - np.conj(pts[src]) * pts[dst])
        r = np.abs(u)
        tangent = np.where(r > 1e-15, 2.0 * np.arctanh(np.minimum(r, 1 - 1e-16))
                           * u / np.maximum(r, 1e-300), 0.0)
        total = np.zeros(len(pts), dtype=complex)
        count = np.zeros(len(pts))
        np.add.at(total, src, tangent)
        np.add.at(count, src, 1.0)
        g = 0.5 * total / np.maximum(count, 1.0)
        g[boundary_mask] = 0.0
        step = np.tanh(np.abs(g) / 2.0)
        unit = np.where(np.abs(g) > 0, g / np.maximum(np.abs(g), 1e-300), 0.0)
        moved = (step * unit + pts) / (1.0 + np.conj(pts) * step * unit)
        pts = np.where(boundary_mask, pts, moved)
    return pts


def _force_edges(chart, simplices, required):
    """Flip crossed diagonals (in the given chart positions, which must be
    the chart the triangulation was built in) until every required edge is
    present."""
    tris = [tuple(t) for t in simplices]
    for a, b in required:
        for _ in range(200):
            edge_map = {}
            for i, t in enumerate(tris):
                for j in range(3):
                    u, v = t[j], t[(j + 1) % 3]
                    edge_map.setdefault((min(u, v), max(u, v)), []).append(i)
            if (min(a, b), max(a, b)) in edge_map:
                break
            flipped = False
            for (u, v), owners in edge_map.items():
                if len(owners) != 2 or not {u, v}.isdisjoint({a, b}):
                    continue
                if not _segments_cross(chart[a], chart[b], chart[u], chart[v]):
                    continue
                i1, i2 = owners
                w1 = next(x for x in tris[i1] if x not in (u, v))
                w2 = next(x for x in tris[i2] if x not in (u, v))
                if w1 == w2 or not _segments_cross(chart[w1], chart[w2],
                                                   chart[u], chart[v]):
                    continue
                tris[i1] = (u, w1, w2)
                tris[i2] = (v, w2, w1)
                flipped = True
                break
            if not flipped:
                raise ValueError("triangulation lost a boundary edge")
        else:
            raise ValueError("triangulation lost a boundary edge")
    return np.array(tris, dtype=np.int64)


@lru_cache(maxsize=32)
def _build_mesh_cached(fn_key, refine: int) -> TriangulatedDomain:
    from scipy.spatial import Delaunay

    fn, rep2, relator, prefix_words, corners, center = _octagon_cached(fn_key)
    n_sides = len(relator)
    from .representations import evaluate

    partner = _side_partner(relator)
    vertices, boundary, side_lists = _seed_points(corners, partner, refine)
    boundary_mask = np.zeros(len(vertices), dtype=bool)
    boundary_mask[boundary] = True
    poly_klein = _ccw_polygon(np.array([_klein(z) for z in corners]))
    vertices = _lloyd_smooth(vertices, boundary_mask, poly_klein)

    tri = Delaunay(np.column_stack([vertices.real, vertices.imag]))
    required = [(u, v) for lst in side_lists for u, v in zip(lst, lst[1:])]
    simplices = _force_edges(vertices, tri.simplices, required)
    # the Delaunay triangulation covers the convex hull of the Poincare
    # coordinates; the polygon sides bow inward of their chords, so the
    # hull also contains crescents outside the polygon and zero-area lens
    # triangles of collinear side points.  Both kinds sit at Klein margin
    # ~0 while genuine triangles keep a margin of order their size.
    cent = _klein(vertices)[simplices].mean(axis=1)
    kept = simplices[_inside_margin(cent, poly_klein) > 1e-11]
    kv = _klein(vertices)[kept]
    cross = ((kv[:, 1] - kv[:, 0]).real * (kv[:, 2] - kv[:, 0]).imag
             - (kv[:, 1] - kv[:, 0]).imag * (kv[:, 2] - kv[:, 0]).real)
    if np.any(np.abs(cross) <= 1e-13):
        raise ValueError("degenerate triangle survived the polygon filter")
    kept[cross < 0] = kept[cross < 0][:, ::-1]
    triangles = kept.astype(np.int64)

    edge_set = {(min(u, v), max(u, v)) for t in triangles
                for u, v in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))}
    protected = set()
    for lst in side_lists:
        for u, v in zip(lst, lst[1:]):
            key = (min(u, v), max(u, v))
            if key not in edge_set:
                raise ValueError("triangulation lost a boundary edge")
            protected.add(key)
        pos = {v: i for i, v in enumerate(lst)}
        for u, v in edge_set:
            if u in pos and v in pos and abs(pos[u] - pos[v]) >= 2:
                raise ValueError("a chord between side points survived the filter")
    if len(np.unique(triangles)) != len(vertices):
        raise ValueError("triangulation is not a disk")
    if len(vertices) - len(edge_set) + len(triangles) != 1:
        raise ValueError("triangulation is not a disk")

    # side-pairing words: side k maps onto side partner[k] reversed
    side_words = {}
    for k in range(n_sides):
        m = partner[k]
        word = reduce(prefix_words[m] + (-relator[k],)
                      + tuple(-s for s in reversed(prefix_words[k])))
        side_words[k] = word
    cycle = _corner_cycle_word(relator, partner, side_words)
    if dehn_reduce(cycle) != ():
        raise ValueError("corner gluing cycle does not compose to the relator")

    triangles = _flip_nonpositive(vertices, triangles, protected)
    edges, weights = _cotangent_weights(vertices, triangles)

    # back to the coordinates in which the holonomy of the representation
    # acts: undo the centering translation
    vertices = np.asarray(_from_origin(center, vertices))

    gluings = {}
    for k in range(n_sides):
        m = partner[k]
        if m < k:
            continue
        g = _disk_matrix(evaluate(rep2, side_words[k]))
        for v, v2 in zip(side_lists[k], reversed(side_lists[m])):
            if abs(_act(g, vertices[v]) - vertices[v2]) > 1e-8:
                raise ValueError("side subdivisions do not match under gluing")
            if v not in gluings:
                gluings[v] = (v2, side_words[k])

    orbit_index, orbit_words, reps = _orbits_from_gluings(
        len(vertices), gluings, rep2, vertices)
    corner_class = orbit_index[side_lists[0][0]]
    if int(np.sum(orbit_index == corner_class)) != n_sides:
        raise ValueError("corner gluings do not form a single vertex orbit")

    return TriangulatedDomain(fn, refine, vertices, triangles, edges, weights,
                              gluings, orbit_index, orbit_words, reps)


def build_mesh(fn, refine: int = 3) -> TriangulatedDomain:
    """Triangulate the octagon fundamental domain of the hyperbolic
    structure with the given Fenchel-Nielsen coordinates.

    Every edge targets a common hyperbolic length that halves with each
    refine level, giving roughly 8 * 4^refine triangles; paired boundary
    sides receive matching equal-arclength subdivisions."""
    if not isinstance(fn, FNCoordinates):
        fn = FNCoordinates(tuple(fn[0]), tuple(fn[1]))
    if refine < 0:
        raise ValueError("refine must be nonnegative")
    key = (tuple(float(x) for x in fn.lengths), tuple(float(x) for x in fn.twists))
    return _build_mesh_cached(key, int(refine))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def mesh_to_dict(mesh: TriangulatedDomain) -> dict:
    return {
        "fn": {"lengths": list(mesh.fn.lengths), "twists": list(mesh.fn.twists)},
        "refine": mesh.refine,
        "vertices": [[float(z.real), float(z.imag)] for z in mesh.vertices],
        "triangles": mesh.triangles.tolist(),
        "edges": mesh.edges.tolist(),
        "weights": mesh.weights.tolist(),
        "side_gluings": {str(v): [int(v2), format_word(w)]
                         for v, (v2, w) in sorted(mesh.side_gluings.items())},
        "orbit_index": mesh.orbit_index.tolist(),
        "orbit_words": [format_word(w) if w else "" for w in mesh.orbit_words],
        "representatives": list(mesh.representatives),
    }


def mesh_from_dict(data: dict) -> TriangulatedDomain:
    fn = FNCoordinates(tuple(data["fn"]["lengths"]), tuple(data["fn"]["twists"]))
    verts = np.array([complex(x, y) for x, y in data["vertices"]])
    gluings = {int(v): (int(pair[0]), parse_word(pair[1]))
               for v, pair in data["side_gluings"].items()}
    words = tuple(parse_word(s) if s else () for s in data["orbit_words"])
    return TriangulatedDomain(
        fn, int(data["refine"]), verts,
        np.array(data["triangles"], dtype=np.int64),
        np.array(data["edges"], dtype=np.int64),
        np.array(data["weights"], dtype=float),
        gluings,
        np.array(data["orbit_index"], dtype=np.int64),
        words,
        tuple(data["representatives"]),
    )
