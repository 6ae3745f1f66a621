"""Eigenvalue functionals: spectral periods, the symplectic c-value,
displacement, and the well-displacing verifier over conjugacy classes."""

from dataclasses import dataclass

import numpy as np

from .representations import LinearRepresentation, evaluate, symplectic_form
from .words import Word, class_arrays, format_word

__all__ = [
    "SpectrumSummary",
    "spectrum_summary",
    "eigen_period_sl",
    "c_value",
    "displacement",
    "translation_length_h2",
    "well_displacing_rows",
    "verify_well_displacing",
    "displacement_spectrum",
]

_CHUNK = 1 << 17


@dataclass(frozen=True)
class SpectrumSummary:
    """Sorted eigenvalue moduli of a determinant-one matrix."""

    moduli: tuple
    is_real_split: bool

    def __post_init__(self):
        prod = float(np.prod(self.moduli))
        if abs(prod - 1.0) > 1e-8 * max(1.0, prod):
            raise ValueError("eigenvalue moduli do not multiply to one")


def spectrum_summary(m: np.ndarray) -> SpectrumSummary:
    lam = np.linalg.eigvals(np.asarray(m, dtype=float))
    moduli = np.sort(np.abs(lam))
    split = bool(np.all(np.abs(lam.imag) <= 1e-10 * np.abs(lam).max())
                 and np.all(np.diff(moduli) > 1e-10))
    return SpectrumSummary(tuple(float(x) for x in moduli), split)


def eigen_period_sl(m: np.ndarray) -> float:
    """log |lambda_max / lambda_min| over eigenvalue moduli; zero exactly
    when all moduli coincide."""
    mods = np.abs(np.linalg.eigvals(np.asarray(m, dtype=float)))
    return float(np.log(mods.max() / mods.min()))


def c_value(m: np.ndarray) -> float:
    """Product of the n largest eigenvalue moduli of a 2n x 2n symplectic
    matrix; always >= 1, and 1 exactly when every modulus is 1."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError("c needs a 2n x 2n matrix")
    J = symplectic_form(m.shape[0])
    defect = np.linalg.norm(m.T @ J @ m - J)
    if defect > 1e-6 * max(1.0, np.linalg.norm(m) ** 2):
        raise ValueError("matrix does not preserve the symplectic form")
    mods = np.sort(np.abs(np.linalg.eigvals(m)))
    return float(np.prod(mods[m.shape[0] // 2:]))


def displacement(m: np.ndarray, riemannian: bool = False) -> float:
    """Displacement functional log((1/n) sum |lambda_i|^2).  The
    riemannian flag switches to sqrt(sum log^2 |lambda_i|), the exact
    symmetric-space translation length, for comparisons; both are
    coarsely equivalent."""
    mods = np.abs(np.linalg.eigvals(np.asarray(m, dtype=float)))
    if riemannian:
        return float(np.sqrt(np.sum(np.log(mods) ** 2)))
    return float(np.log(np.mean(mods ** 2)))


def translation_length_h2(m: np.ndarray) -> float:
    """Hyperbolic-plane translation length 2 arccosh(|tr|/2)."""
    m = np.asarray(m, dtype=float)
    tr = abs(m[0, 0] + m[1, 1])
    if tr <= 2.0:
        raise ValueError("not hyperbolic")
    return float(2.0 * np.arccosh(tr / 2.0))


def _generator_stack(rep: LinearRepresentation) -> np.ndarray:
    # index order matches the int8 class encoding: a, a^-1, b, b^-1, ...
    mats = []
    for i in range(1, 2 * rep.presentation.genus + 1):
        mats.append(rep.generator_image(i))
        mats.append(rep.generator_image(-i))
    return np.stack(mats)


def _batched_moduli(rep: LinearRepresentation, max_len: int):
    """Yield (length, codes, moduli) per enumeration chunk, with moduli
    sorted ascending along the last axis."""
    stack = _generator_stack(rep)
    for length, arr in class_arrays(max_len, rep.presentation):
        for start in range(0, len(arr), _CHUNK):
            codes = arr[start:start + _CHUNK]
            out = stack[codes[:, 0]]
            for pos in range(1, length):
                out = out @ stack[codes[:, pos]]
            mods = np.sort(np.abs(np.linalg.eigvals(out)), axis=1)
            yield length, codes, mods


def _chain_terms(rep: LinearRepresentation, mods: np.ndarray):
    # exact inequality chain: d + log n >= (2/n) l_SL for special linear,
    # d + log 2n >= (1/n) 2 log c for symplectic
    d = np.log(np.mean(mods ** 2, axis=1))
    if rep.family == "Sp":
        n = rep.size // 2
        per = 2.0 * np.sum(np.log(mods[:, n:]), axis=1)
        slack = d + np.log(rep.size) - per / n
    else:
        per = np.log(mods[:, -1] / mods[:, 0])
        slack = d + np.log(rep.size) - 2.0 * per / rep.size
    return d, per, slack


def well_displacing_rows(rep: LinearRepresentation, max_len: int):
    """Stream (word, conjugacy_length, displacement, period_term, slack)
    over all conjugacy classes up to max_len; period_term is the spectral
    period for SL and 2 log c for Sp."""
    from .words import _decode

    for length, codes, mods in _batched_moduli(rep, max_len):
        d, per, slack = _chain_terms(rep, mods)
        for row, di, pi, si in zip(codes, d, per, slack):
            yield format_word(_decode(row)), length, float(di), float(pi), float(si)


def verify_well_displacing(rep: LinearRepresentation, max_len: int) -> dict:
    """Check the displacement chain inequality on every conjugacy class
    up to max_len and fit the best linear lower bound.

    Returns A, B with displacement >= A * conjugacy_length - B and zero
    violations (B = 0 and A = min displacement/length, clamped at 0), the
    count of chain violations below -1e-9, and the minimal chain slack."""
    violations = 0
    min_slack = np.inf
    min_ratio = np.inf
    classes = 0
    for length, codes, mods in _batched_moduli(rep, max_len):
        _, _, slack = _chain_terms(rep, mods)
        d = np.log(np.mean(mods ** 2, axis=1))
        violations += int(np.sum(slack < -1e-9))
        min_slack = min(min_slack, float(slack.min()))
        min_ratio = min(min_ratio, float((d / length).min()))
        classes += len(codes)
    return {
        "A": max(0.0, min_ratio),
        "B": 0.0,
        "violations": violations,
        "chain_residual": min_slack,
        "classes": classes,
    }


def displacement_spectrum(rep: LinearRepresentation, words) -> dict:
    """Displacement of each word's image, keyed by the word."""
    out = {}
    for w in words:
        key = tuple(w)
        out[key] = displacement(evaluate(rep, key))
    return out
