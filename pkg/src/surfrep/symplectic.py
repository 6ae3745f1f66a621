"""Symplectic linear algebra on R^2n: Lagrangian frames, transversality,
the determinant cross ratio on quadruples of Lagrangians, positivity of
triples, and the period identity for symplectic maps fixing two
transverse Lagrangians.

The symplectic form is x^T J0 y with J0 = [[0, I], [-I, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .representations import symplectic_form

__all__ = [
    "LagrangianFrame",
    "is_transverse",
    "pairing_matrix",
    "cross_ratio_B",
    "is_positive_triple",
    "symplectic_period",
    "random_symplectic",
]


@dataclass(frozen=True)
class LagrangianFrame:
    """n independent spanning vectors of a Lagrangian subspace of R^2n,
    stored as the columns of a 2n x n matrix."""

    frame: np.ndarray

    def __post_init__(self):
        f = np.atleast_2d(np.asarray(self.frame, dtype=float))
        if f.ndim != 2 or f.shape[0] != 2 * f.shape[1]:
            raise ValueError("frame must be a 2n x n matrix")
        object.__setattr__(self, "frame", f)
        sv = np.linalg.svd(f, compute_uv=False)
        if sv[-1] < 1e-10 * sv[0]:
            raise ValueError("frame is rank deficient")
        J = symplectic_form(f.shape[0])
        if np.linalg.norm(f.T @ J @ f) > 1e-8 * np.linalg.norm(f) ** 2:
            raise ValueError("frame is not isotropic")

    @property
    def n(self) -> int:
        return self.frame.shape[1]

    def transformed(self, m: np.ndarray) -> "LagrangianFrame":
        return LagrangianFrame(np.asarray(m, float) @ self.frame)


def _col_norm_product(*frames: LagrangianFrame) -> float:
    out = 1.0
    for L in frames:
        out *= float(np.prod(np.linalg.norm(L.frame, axis=0)))
    return out


def is_transverse(l1: LagrangianFrame, l2: LagrangianFrame) -> bool:
    """Whether two Lagrangians span the whole space.

    Decided on the determinant of the concatenated frame, relative to the
    product of column norms so the answer does not depend on frame scale.
    """
    if l1.n != l2.n:
        raise ValueError("frames have different n")
    det = np.linalg.det(np.hstack([l1.frame, l2.frame]))
    return bool(abs(det) >= 1e-10 * _col_norm_product(l1, l2))


def pairing_matrix(la: LagrangianFrame, lb: LagrangianFrame) -> np.ndarray:
    """Matrix of symplectic pairings, entry (i,j) = omega(la_i, lb_j)."""
    if la.n != lb.n:
        raise ValueError("frames have different n")
    J = symplectic_form(2 * la.n)
    return la.frame.T @ J @ lb.frame


def cross_ratio_B(l1: LagrangianFrame, l2: LagrangianFrame,
                  l3: LagrangianFrame, l4: LagrangianFrame) -> float:
    """Determinant cross ratio of four Lagrangians,

        B = det A(l1,l2) det A(l3,l4) / (det A(l1,l4) det A(l3,l2)),

    where A is the pairing matrix.  Changing any frame by GL(n) scales a
    numerator and a denominator determinant alike, so the value only
    depends on the subspaces."""
    if not (is_transverse(l1, l4) and is_transverse(l3, l2)):
        raise ValueError("denominator Lagrangians not transverse")
    num = np.linalg.det(pairing_matrix(l1, l2)) * np.linalg.det(pairing_matrix(l3, l4))
    den = np.linalg.det(pairing_matrix(l1, l4)) * np.linalg.det(pairing_matrix(l3, l2))
    return float(num / den)


def is_positive_triple(f: LagrangianFrame, g: LagrangianFrame,
                       l: LagrangianFrame) -> bool:
    """Positivity of the triple (f, g, l): every nonzero u in g, written
    u = u_f + u_l along the splitting f + l, must satisfy
    omega(u_f, u_l) > 0.  Decided by the eigenvalues of the symmetrized
    Gram form on a frame of g."""
    if not is_transverse(f, l):
        raise ValueError("first and last Lagrangians not transverse")
    n = f.n
    coords = np.linalg.solve(np.hstack([f.frame, l.frame]), g.frame)
    alpha, beta = coords[:n], coords[n:]
    # entry (i,j) = omega((g_i)_f, (g_j)_l)
    m = alpha.T @ pairing_matrix(f, l) @ beta
    q = (m + m.T) / 2.0
    eig = np.linalg.eigvalsh(q)
    return bool(eig[0] > 1e-10 * max(1.0, abs(eig[-1])))


def _span_residual(target: np.ndarray, frame: np.ndarray) -> float:
    # distance of target columns from the span of frame, relative
    qf, _ = np.linalg.qr(frame)
    resid = target - qf @ (qf.T @ target)
    return float(np.linalg.norm(resid) / max(np.linalg.norm(target), 1e-30))


def symplectic_period(s: np.ndarray, e: LagrangianFrame, f: LagrangianFrame,
                      g: LagrangianFrame) -> float:
    """Cross ratio B(e, g, f, s(g)) for a symplectic s preserving the two
    transverse Lagrangians e and f.  Equals det(s restricted to e)
    squared, independent of the probe g."""
    s = np.asarray(s, dtype=float)
    if _span_residual(s @ e.frame, e.frame) > 1e-8:
        raise ValueError("first Lagrangian is not invariant under the map")
    if _span_residual(s @ f.frame, f.frame) > 1e-8:
        raise ValueError("second Lagrangian is not invariant under the map")
    if not is_transverse(e, f):
        raise ValueError("invariant Lagrangians must be transverse")
    return cross_ratio_B(e, g, f, g.transformed(s))


def random_symplectic(size: int, rng: np.random.Generator,
                      scale: float = 1.0) -> np.ndarray:
    """Random element of Sp(size), size even: exp of a random Hamiltonian
    matrix J0 S with S symmetric."""
    from scipy.linalg import expm

    if size % 2:
        raise ValueError("size must be even")
    s = rng.standard_normal((size, size))
    s = (s + s.T) / 2.0
    return expm(scale * (symplectic_form(size) @ s))
