"""Integer invariants and the intersection estimator.

Euler numbers are computed by lifting the boundary-circle action of each
generator to the real line and evaluating the relator's composite lift,
which translates by 2 pi times the Euler number.  Toledo numbers are
defined here for product-type symplectic representations only, as sums
of factor Euler numbers.  The intersection of two hyperbolic metrics is
estimated by averaging geodesic-length ratios over all conjugacy classes
up to a combinatorial length cutoff.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .boundary import _disk_angle
from .crossratio import _boundary_vector
from .representations import LinearRepresentation, fuchsian_genus2
from .spectral import _generator_stack
from .words import _decode, class_arrays, format_word

__all__ = [
    "LiftedCircleMap",
    "euler_number",
    "toledo_product",
    "milnor_wood_check",
    "intersection",
    "intersection_report",
    "intersection_rows",
]

_TWO_PI = 2.0 * np.pi
_CHUNK = 1 << 17


@dataclass(frozen=True)
class LiftedCircleMap:
    """Monotone lift to the line of the circle action of a 2x2 matrix.

    The canonical lift sends 0 into [0, 2 pi); offset, a multiple of
    2 pi, selects the other lifts.  translation_number_window brackets
    the translation number by the extremes of (F(x) - x)/2 pi on a grid.
    """

    matrix: np.ndarray
    offset: float = 0.0
    translation_number_window: tuple = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (2, 2) or abs(np.linalg.det(m) - 1.0) > 1e-8:
            raise ValueError("lift needs a determinant-one 2x2 matrix")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_phi0", self.circle(0.0))
        grid = np.linspace(0.0, _TWO_PI, 65)[:-1]
        disp = np.array([self(x) - x for x in grid]) / _TWO_PI
        object.__setattr__(self, "translation_number_window",
                           (float(disp.min()), float(disp.max())))

    def circle(self, theta: float) -> float:
        """The underlying circle action on disk-boundary angles."""
        v = self.matrix @ _boundary_vector(theta)
        return _disk_angle(v[0], v[1])

    def __call__(self, x: float) -> float:
        n, theta = divmod(x, _TWO_PI)
        phi = self.circle(theta)
        # the unique continuous monotone branch with value at 0 in
        # [phi0, phi0 + 2 pi)
        lifted = self._phi0 + ((phi - self._phi0) % _TWO_PI)
        return lifted + _TWO_PI * n + self.offset

    def inverse(self) -> "LiftedCircleMap":
        """The functional inverse, a specific lift of the inverse matrix's
        circle action; composing with self gives the identity on the line."""
        base = LiftedCircleMap(np.linalg.inv(self.matrix))
        shifts = [base(self(x)) - x for x in (0.0, 1.0, 2.5)]
        k = round(shifts[0] / _TWO_PI)
        if any(abs(s - _TWO_PI * k) > 1e-8 for s in shifts):
            raise ValueError("lift failed")
        return replace(base, offset=base.offset - _TWO_PI * k)


def euler_number(rep: LinearRepresentation) -> int:
    """Integer translation number of the relator's lifted circle action.

    Generators are lifted canonically and inverse letters use functional
    inverses, so the composite lift of the relator is independent of all
    lift choices.  The sign follows the counterclockwise orientation of
    the disk boundary; holonomies of hyperbolic structures come out +2.
    Conjugation- and deformation-invariant, and bounded by 2g - 2 in
    absolute value for every representation.
    """
    if rep.size != 2 or rep.family != "SL":
        raise ValueError("euler number needs a 2x2 linear representation")
    gens = range(1, 2 * rep.presentation.genus + 1)
    lifts = {i: LiftedCircleMap(rep.generator_image(i)) for i in gens}
    for i in gens:
        lifts[-i] = lifts[i].inverse()
    # matrices act on the left, so the first letter acts last
    x = 0.0
    for s in reversed(rep.presentation.relator):
        x = lifts[s](x)
    e = x / _TWO_PI
    k = round(e)
    if abs(e - k) > 1e-6:
        raise ValueError("lift failed")
    return int(k)


def toledo_product(reps) -> int:
    """Toledo number of a product of SL(2,R) factors sitting block-wise
    in Sp(2n,R): the sum of the factor Euler numbers.  Maximal (equal to
    n(2g-2) in absolute value) exactly when every factor is extremal
    with a common sign."""
    reps = list(reps)
    if not reps:
        raise ValueError("need at least one factor")
    return sum(euler_number(r) for r in reps)


def milnor_wood_check(tau: int, n: int, genus: int) -> bool:
    """Whether |tau| <= n(2g - 2), the flat-bundle bound."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    return abs(tau) <= n * (2 * genus - 2)


def _length_batches(stacks, max_len, arrays):
    batches = arrays if arrays is not None else class_arrays(max_len)
    for length, codes in batches:
        if length > max_len:
            continue
        for lo in range(0, len(codes), _CHUNK):
            sub = codes[lo:lo + _CHUNK]
            lams = []
            for stack in stacks:
                out = stack[sub[:, 0]]
                for pos in range(1, length):
                    out = out @ stack[sub[:, pos]]
                tr = np.abs(out[:, 0, 0] + out[:, 1, 1])
                if np.any(tr <= 2.0):
                    raise ValueError("not hyperbolic")
                lams.append(2.0 * np.arccosh(tr / 2.0))
            yield sub, lams


def intersection_report(g, g0, max_len: int, arrays=None) -> dict:
    """Finite-truncation intersection of two hyperbolic metrics.

    Averages the geodesic-length ratio lambda_g0(class)/lambda_g(class)
    over every conjugacy class of combinatorial length <= max_len, with
    both metrics uniformized from their Fenchel-Nielsen coordinates.
    Equal metrics give exactly 1; degenerating the numerator metric g0
    drives the estimate up, which is the properness witness the reports
    use.  arrays may supply precomputed class batches, possibly from a
    larger cutoff, so several estimates share one enumeration.
    """
    if max_len < 4:
        raise ValueError("maxLen must be at least 4")
    stacks = (_generator_stack(fuchsian_genus2(g)),
              _generator_stack(fuchsian_genus2(g0)))
    total = 0.0
    count = 0
    for _, (lam, lam0) in _length_batches(stacks, max_len, arrays):
        total += float(np.sum(lam0 / lam))
        count += lam.size
    return {"estimate": total / count, "count": count, "maxLen": max_len}


def intersection(g, g0, max_len: int, arrays=None) -> float:
    """The estimate of intersection_report alone."""
    return intersection_report(g, g0, max_len, arrays=arrays)["estimate"]


def intersection_rows(g, g0, max_len: int):
    """Per-class rows (word, lambda_g, lambda_g0, ratio) behind the
    estimate, in enumeration order; the CSV-report payload."""
    if max_len < 4:
        raise ValueError("maxLen must be at least 4")
    stacks = (_generator_stack(fuchsian_genus2(g)),
              _generator_stack(fuchsian_genus2(g0)))
    for sub, (lam, lam0) in _length_batches(stacks, max_len, None):
        for row, a, b in zip(sub, lam, lam0):
            yield format_word(_decode(row)), float(a), float(b), float(b / a)
