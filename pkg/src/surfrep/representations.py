"""Explicit linear representations of the genus-2 surface group.

Three families of instances: Fuchsian SL(2,R) holonomies (an octagon
quadruple and a Fenchel-Nielsen chart), their symmetric-power embeddings
into SL(n,R), and their diagonal embeddings into Sp(2n,R).  A seeded
Newton-projected deformation moves instances off the embedded locus
while keeping the defining relator exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from .words import Presentation, Word, genus2_presentation
from .words import reduce as free_reduce

__all__ = [
    "FNCoordinates",
    "LinearRepresentation",
    "fuchsian_genus2",
    "evaluate",
    "irreducible_embed",
    "diagonal_embed",
    "deform",
    "trivial_representation",
    "symplectic_form",
]

# common |trace| of the four octagon generators: 2 cosh(l/2) for the
# translation length l = 2 arccosh(1 + sqrt 2) of the regular octagon
OCTAGON_TRACE = 2.0 + 2.0 * np.sqrt(2.0)


@dataclass(frozen=True)
class FNCoordinates:
    """Fenchel-Nielsen coordinates: three curve lengths and three twists.

    The pants decomposition is two one-holed tori glued along a
    separating curve; lengths[0], lengths[1] are the torus waist curves,
    lengths[2] the separating curve.
    """

    lengths: tuple
    twists: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if len(self.lengths) != 3 or len(self.twists) != 3:
            raise ValueError("FN coordinates need 3 lengths and 3 twists")
        if any(not np.isfinite(l) or l <= 0 for l in self.lengths):
            raise ValueError("degenerate FN coordinates")
        object.__setattr__(self, "lengths", tuple(float(l) for l in self.lengths))
        object.__setattr__(self, "twists", tuple(float(t) for t in self.twists))

    def scaled(self, s: float) -> "FNCoordinates":
        return FNCoordinates(tuple(s * l for l in self.lengths), self.twists)


def symplectic_form(size: int) -> np.ndarray:
    """The standard form J0 = [[0, I], [-I, 0]] on R^size (size even)."""
    n = size // 2
    J = np.zeros((size, size))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


@dataclass(eq=False)
class LinearRepresentation:
    """A homomorphism of the surface group into SL(n,R) or Sp(2n,R),
    given by its generator images.  Construction validates determinants,
    the symplectic form when family is "Sp", and the defining relator.
    """

    family: str  # "SL" or "Sp"
    size: int
    images: tuple
    presentation: Presentation = field(default_factory=genus2_presentation)
    fn: FNCoordinates | None = None
    base2: "LinearRepresentation | None" = None  # SL(2) rep this embeds
    embed_kind: str | None = None  # "sym" | "diag" when embedded

    def __post_init__(self):
        if self.family not in ("SL", "Sp"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "Sp" and self.size % 2:
            raise ValueError("Sp representations need even size")
        imgs = tuple(np.asarray(m, dtype=float) for m in self.images)
        if len(imgs) != self.presentation.n_generators:
            raise ValueError("one image per generator required")
        for m in imgs:
            if m.shape != (self.size, self.size):
                raise ValueError("image has wrong shape")
            # det of a stiff matrix cannot be evaluated more accurately
            # than its condition number allows, so scale the gate
            gate = max(1e-6, 64 * np.finfo(float).eps * np.linalg.cond(m))
            if abs(np.linalg.det(m) - 1.0) > gate:
                raise ValueError("image determinant is not 1")
        if self.family == "Sp":
            J = symplectic_form(self.size)
            for m in imgs:
                defect = np.linalg.norm(m.T @ J @ m - J)
                if defect > 1e-6 * max(1.0, np.linalg.norm(m) ** 2):
                    raise ValueError("not symplectic")
        self.images = imgs
        self._inv = tuple(np.linalg.inv(m) for m in imgs)
        res = self.relator_residual()
        if not res <= 1e-6:
            raise ValueError(f"relator residual too large: {res:.3e}")

    @property
    def group_tag(self) -> str:
        return f"{self.family}({self.size})"

    def generator_image(self, signed_index: int) -> np.ndarray:
        if signed_index > 0:
            return self.images[signed_index - 1]
        return self._inv[-signed_index - 1]

    def relator_residual(self) -> float:
        """Residual of the defining relation, measured as the relative
        deviation between the first half of the relator product and the
        inverse of the second half.  The split keeps the measurement
        well conditioned when matrix norms are large (high symmetric
        powers), where the plain product R - I drowns in rounding."""
        return _relator_residual_raw(self.images, self.size, self.presentation)

    def to_json(self) -> str:
        payload = {
            "group": self.group_tag,
            "n": self.size,
            "generators": [
                [f"{x:.17g}" for x in m.reshape(-1)] for m in self.images
            ],
        }
        return json.dumps(payload, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "LinearRepresentation":
        payload = json.loads(text)
        family, size = payload["group"].split("(")
        size = int(size.rstrip(")"))
        mats = [
            np.array([float(x) for x in row]).reshape(size, size)
            for row in payload["generators"]
        ]
        genus = len(mats) // 2
        return cls(family, size, tuple(mats), Presentation(genus))


def evaluate(rep: LinearRepresentation, word: Word) -> np.ndarray:
    """The image matrix of a word."""
    M = np.eye(rep.size)
    for s in word:
        M = M @ rep.generator_image(s)
    return M


# ---------------------------------------------------------------------------
# Fuchsian instances
# ---------------------------------------------------------------------------


def _inv2(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def _canonical_images():
    """Octagon quadruple: the regular hyperbolic octagon with a single
    vertex orbit has eight side-pairing translations g_k of equal length
    l = 2 arccosh(1 + sqrt 2) along axes at angles k pi/4.  Suitable
    products of them give a quadruple satisfying [a,b][c,d] = 1 with all
    four traces equal to 2 cosh(l/2) = 2 + 2 sqrt 2."""

    def rot(t):
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, s], [-s, c]])

    ell = 2.0 * np.arccosh(1.0 + np.sqrt(2.0))
    T = np.diag([np.exp(ell / 2), np.exp(-ell / 2)])
    g = [rot(k * np.pi / 4) @ T @ rot(k * np.pi / 4).T for k in range(4)]
    a = g[0]
    b = -(_inv2(g[1]) @ g[2] @ _inv2(g[3]))
    c = _inv2(g[1]) @ g[2]
    d = _inv2(g[3]) @ g[2]
    return _balance2((a, b, c, d))


def _eigenframe2(M):
    """Unit-determinant eigenvector frame of a hyperbolic 2x2 matrix,
    columns ordered by decreasing |eigenvalue|, deterministic signs."""
    w, V = np.linalg.eig(M)
    w, V = w.real, V.real
    order = np.argsort(-np.abs(w))
    V = V[:, order]
    for k in range(2):
        col = V[:, k]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            col = -col
        V[:, k] = col / np.linalg.norm(col)
    det = np.linalg.det(V)
    if det < 0:
        V[:, 1] = -V[:, 1]
        det = -det
    return V / np.sqrt(det)


def _fn_images(fn: FNCoordinates):
    l1, l2, l3 = fn.lengths
    t1, t2, t3 = fn.twists

    def torus(l, t):
        A = np.diag([np.exp(l / 2), np.exp(-l / 2)])
        # boundary trace of [A,B] must be -2 cosh(l3/2)
        m = np.arcsinh(np.cosh(l3 / 4) / np.sinh(l / 2))
        B0 = np.array([[np.cosh(m), np.sinh(m)], [np.sinh(m), np.cosh(m)]])
        Tw = np.diag([np.exp(t / 2), np.exp(-t / 2)])
        return A, Tw @ B0

    def comm(X, Y):
        return X @ Y @ _inv2(X) @ _inv2(Y)

    A1, B1 = torus(l1, t1)
    A2, B2 = torus(l2, t2)
    P = _eigenframe2(_inv2(comm(A1, B1)))
    P2 = _eigenframe2(comm(A2, B2))
    Tw3 = np.diag([np.exp(t3 / 2), np.exp(-t3 / 2)])
    G = P @ Tw3 @ _inv2(P2)
    return _balance2((A1, B1, G @ A2 @ _inv2(G), G @ B2 @ _inv2(G)))


def _balance2(mats):
    """Conjugate 2x2 generator images into the gauge minimizing the total
    squared Frobenius norm.  The gluing map can land far off center, and
    oversized images inflate symmetric-power norms downstream until even
    determinant checks drown in rounding.  Rotations do not change
    Frobenius norms, so symmetric conjugators suffice."""

    def conjugated(x):
        X = np.array([[x[0], x[1]], [x[1], -x[0]]])
        S, Si = expm(X), expm(-X)
        return tuple(Si @ m @ S for m in mats)

    def cost(x):
        return sum(float(np.sum(c * c)) for c in conjugated(x))

    opt = minimize(cost, np.zeros(2), method="Nelder-Mead",
                   options={"xatol": 1e-13, "fatol": 1e-13, "maxiter": 2000})
    return conjugated(opt.x)


def fuchsian_genus2(fn="canonical") -> LinearRepresentation:
    """A discrete faithful SL(2,R) representation: either the octagon
    quadruple ("canonical") or the holonomy of the hyperbolic structure
    with the given Fenchel-Nielsen coordinates."""
    if isinstance(fn, str):
        if fn != "canonical":
            raise ValueError(f"unknown chart {fn!r}")
        images, chart = _canonical_images(), None
    else:
        if not isinstance(fn, FNCoordinates):
            fn = FNCoordinates(*fn)
        images, chart = _fn_images(fn), fn
    # polish to the rounding floor: symmetric-power embeddings amplify
    # the relator residual by powers of the matrix norms
    res = _relator_residual_raw(images, 2)
    if res > 1e-14:
        images = _newton_project("SL", 2, images, tol=1e-15)
    rep = LinearRepresentation("SL", 2, tuple(images), fn=chart)
    for m in rep.images:
        if abs(np.trace(m)) <= 2.0:
            raise ValueError("degenerate FN coordinates")
    return rep


def trivial_representation(size: int = 2, family: str = "SL") -> LinearRepresentation:
    """All generators map to the identity; the displacement-free control."""
    return LinearRepresentation(family, size, tuple(np.eye(size) for _ in range(4)))


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------


def _sym_power(M: np.ndarray, n: int) -> np.ndarray:
    """Action of a 2x2 matrix on degree-(n-1) binary forms in the
    monomial basis x^(n-1), x^(n-2) y, ..., y^(n-1)."""
    k = n - 1
    a, c = M[0, 0], M[1, 0]  # image of x
    b, d = M[0, 1], M[1, 1]  # image of y
    out = np.empty((n, n))
    for j in range(n):
        p, q = k - j, j
        c1 = np.array([comb(p, i) * a ** (p - i) * c ** i for i in range(p + 1)])
        c2 = np.array([comb(q, i) * b ** (q - i) * d ** i for i in range(q + 1)])
        out[:, j] = np.convolve(c1, c2)
    return out


def irreducible_embed(rep2: LinearRepresentation, n: int) -> LinearRepresentation:
    """Symmetric-power embedding SL(2) -> SL(n) applied to a rank-2 rep."""
    if rep2.size != 2 or rep2.family != "SL":
        raise ValueError("irreducible_embed needs an SL(2) representation")
    if n < 2:
        raise ValueError("n must be at least 2")
    images = tuple(_sym_power(m, n) for m in rep2.images)
    if _relator_residual_raw(images, n, rep2.presentation) > 1e-8:
        images = _newton_project("SL", n, images, tol=1e-10,
                                 presentation=rep2.presentation)
    return LinearRepresentation(
        "SL", n, images, rep2.presentation, fn=rep2.fn, base2=rep2, embed_kind="sym"
    )


def diagonal_embed(rep2: LinearRepresentation, n: int) -> LinearRepresentation:
    """Diagonal embedding SL(2) -> Sp(2n): [[a,b],[c,d]] acts as
    [[a I_n, b I_n],[c I_n, d I_n]], preserving J0 exactly."""
    if rep2.size != 2 or rep2.family != "SL":
        raise ValueError("diagonal_embed needs an SL(2) representation")
    if n < 1:
        raise ValueError("n must be at least 1")
    I = np.eye(n)
    images = tuple(
        np.block([[m[0, 0] * I, m[0, 1] * I], [m[1, 0] * I, m[1, 1] * I]])
        for m in rep2.images
    )
    return LinearRepresentation(
        "Sp", 2 * n, images, rep2.presentation, fn=rep2.fn, base2=rep2,
        embed_kind="diag",
    )


# ---------------------------------------------------------------------------
# deformation
# ---------------------------------------------------------------------------


def _tangent_basis(family: str, size: int):
    basis = []
    if family == "SL":
        for i in range(size):
            for j in range(size):
                if i != j:
                    E = np.zeros((size, size))
                    E[i, j] = 1.0
                    basis.append(E)
        for k in range(size - 1):
            E = np.zeros((size, size))
            E[k, k], E[k + 1, k + 1] = 1.0, -1.0
            basis.append(E / np.sqrt(2.0))
    else:
        n = size // 2
        for i in range(n):
            for j in range(n):
                E = np.zeros((size, size))
                E[i, j], E[n + j, n + i] = 1.0, -1.0
                basis.append(E / np.sqrt(2.0))
        for block in (0, 1):
            for i in range(n):
                for j in range(i, n):
                    E = np.zeros((size, size))
                    r, c = (0, n) if block == 0 else (n, 0)
                    E[r + i, c + j] = E[r + j, c + i] = 1.0
                    basis.append(E / (np.sqrt(2.0) if i != j else 1.0))
    return basis


def _half_products(images, invs, size, presentation):
    rel = presentation.relator
    h = len(rel) // 2
    H1, H2 = np.eye(size), np.eye(size)
    for s in rel[:h]:
        H1 = H1 @ (images[s - 1] if s > 0 else invs[-s - 1])
    for s in rel[h:]:
        H2 = H2 @ (images[s - 1] if s > 0 else invs[-s - 1])
    return H1, H2


def _relator_residual_raw(images, size, presentation=None):
    p = presentation or genus2_presentation()
    invs = [np.linalg.inv(m) for m in images]
    H1, H2 = _half_products(images, invs, size, p)
    T = np.linalg.inv(H2)
    scale = max(np.linalg.norm(H1), np.linalg.norm(T), 1.0)
    return float(np.linalg.norm(H1 - T) / scale)


def _newton_project(family, size, images, tol=1e-10, max_iter=100, presentation=None):
    """Project generator images back onto the relator variety: damped
    Newton in exponential coordinates recentered at the current images,
    with the analytic Jacobian of the split residual H1 - H2^-1 and
    Moore-Penrose steps.  tol is relative to the half-product norms."""
    p = presentation or genus2_presentation()
    rel = p.relator
    half = len(rel) // 2
    basis = _tangent_basis(family, size)
    nb = len(basis)
    ngen = p.n_generators
    cur = [np.asarray(m, float).copy() for m in images]
    eye = np.eye(size)

    def apply_steps(mats, t):
        out = []
        for i in range(ngen):
            X = np.zeros((size, size))
            for k in range(nb):
                c = t[i * nb + k]
                if c:
                    X += c * basis[k]
            out.append(mats[i] @ expm(X))
        return out

    def split_state(mats):
        invs = [np.linalg.inv(m) for m in mats]
        H1, H2 = _half_products(mats, invs, size, p)
        T = np.linalg.inv(H2)
        scale = max(np.linalg.norm(H1), np.linalg.norm(T), 1.0)
        return invs, H1, H2, T, (H1 - T).reshape(-1), scale

    invs, H1, H2, T, F, scale = split_state(cur)
    # entry rounding of the stored images is amplified by the relator
    # map's largest singular values, so iterates jitter near the floor;
    # keep the best images ever seen rather than the last accepted ones
    best_res = np.linalg.norm(F) / scale
    best_cur = cur
    for _ in range(max_iter):
        if best_res <= tol:
            break
        seq = [cur[s - 1] if s > 0 else invs[-s - 1] for s in rel]

        def chains(lo, hi):
            pre = [eye]
            for M in seq[lo:hi]:
                pre.append(pre[-1] @ M)
            suf = [eye]
            for M in reversed(seq[lo:hi]):
                suf.append(M @ suf[-1])
            return pre, suf[::-1]

        pre1, suf1 = chains(0, half)
        pre2, suf2 = chains(half, len(rel))
        # G_i -> G_i exp(t E) inserts G_i E at positive occurrences and
        # -E G_i^-1 at inverse occurrences; second-half occurrences act
        # on H2^-1 by -T dH2 T
        Jac = np.empty((size * size, ngen * nb))
        for i in range(ngen):
            occ = [(q, s) for q, s in enumerate(rel) if abs(s) == i + 1]
            for k, E in enumerate(basis):
                ins_pos = cur[i] @ E
                ins_neg = -(E @ invs[i])
                dF = np.zeros((size, size))
                for q, s in occ:
                    ins = ins_pos if s > 0 else ins_neg
                    if q < half:
                        dF += pre1[q] @ ins @ suf1[q + 1]
                    else:
                        dH2 = pre2[q - half] @ ins @ suf2[q - half + 1]
                        dF += T @ dH2 @ T
                Jac[:, i * nb + k] = dF.reshape(-1)
        # gauge directions (simultaneous conjugation) are an exact kernel
        # of the relator map; keep the cut well above their rounding-level
        # singular values so they are never inverted
        step = np.linalg.lstsq(Jac, -F, rcond=1e-9)[0]
        norm = np.linalg.norm(step)
        if norm > 0.5:
            step *= 0.5 / norm
        damp, improved = 1.0, False
        here = np.linalg.norm(F) / scale
        for _ in range(40):
            cand = apply_steps(cur, damp * step)
            try:
                state = split_state(cand)
            except np.linalg.LinAlgError:
                damp /= 2
                continue
            res = np.linalg.norm(state[4]) / state[5]
            if res < here:
                cur = cand
                invs, H1, H2, T, F, scale = state
                improved = True
                if res < best_res:
                    best_res, best_cur = res, cand
                break
            damp /= 2
        if not improved:
            break
    return tuple(best_cur)


def deform(rep: LinearRepresentation, seed: int, eps: float) -> LinearRepresentation:
    """Seeded random perturbation of the generator images in the group's
    tangent directions, Newton-projected back onto the relator variety.
    eps = 0 returns an identical copy."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0:
        return LinearRepresentation(
            rep.family, rep.size, rep.images, rep.presentation, fn=rep.fn,
            base2=rep.base2, embed_kind=rep.embed_kind,
        )
    rng = np.random.default_rng(seed)
    basis = _tangent_basis(rep.family, rep.size)
    perturbed = []
    for m in rep.images:
        X = sum(c * E for c, E in zip(rng.standard_normal(len(basis)), basis))
        # eps measures the move of the image matrix, not of the algebra
        # element, so embedded images with large norms are not amplified
        X *= eps / np.linalg.norm(m @ X)
        perturbed.append(m @ expm(X))
    images = _newton_project(rep.family, rep.size, perturbed, tol=1e-10)
    return LinearRepresentation(rep.family, rep.size, images, rep.presentation)
