"""Spectral periods, displacement, c-values, and the well-displacing check."""

import numpy as np
import pytest

from surfrep.representations import (
    diagonal_embed,
    evaluate,
    fuchsian_genus2,
    irreducible_embed,
    trivial_representation,
)
from surfrep.spectral import (
    SpectrumSummary,
    c_value,
    displacement,
    displacement_spectrum,
    eigen_period_sl,
    spectrum_summary,
    translation_length_h2,
    verify_well_displacing,
    well_displacing_rows,
)
from surfrep.symplectic import random_symplectic
from surfrep.words import enumerate_conjugacy_classes, parse_word


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@pytest.fixture(scope="module")
def canonical():
    return fuchsian_genus2()


class TestSpectrumSummary:
    def test_sorted_moduli_and_split(self):
        s = spectrum_summary(np.diag([2.0, 1.0, 0.5]))
        assert s.moduli == pytest.approx((0.5, 1.0, 2.0))
        assert s.is_real_split

    def test_rotation_is_not_split(self):
        assert not spectrum_summary(rotation(0.4)).is_real_split

    def test_determinant_gate(self):
        with pytest.raises(ValueError):
            SpectrumSummary((0.5, 3.0), True)


class TestEigenPeriod:
    def test_diagonal(self):
        assert eigen_period_sl(np.diag([np.e, 1 / np.e])) == pytest.approx(2.0, abs=1e-14)

    def test_identity(self):
        assert eigen_period_sl(np.eye(4)) == 0.0

    def test_symmetric_square_doubles(self):
        lam = 1.3
        m = np.diag([np.exp(lam / 2), np.exp(-lam / 2)])
        sym2 = np.diag([np.exp(lam), 1.0, np.exp(-lam)])
        assert eigen_period_sl(sym2) == pytest.approx(2 * lam, rel=1e-12)
        assert eigen_period_sl(m) == pytest.approx(lam, rel=1e-12)

    def test_power_scaling(self, canonical):
        m = evaluate(canonical, parse_word("a b"))
        assert eigen_period_sl(m @ m @ m) == pytest.approx(3 * eigen_period_sl(m), rel=1e-9)

    def test_matches_translation_length_on_embeds(self, canonical):
        # Sym^(n-1) multiplies the hyperbolic translation length by n-1
        s4 = irreducible_embed(canonical, 4)
        for wstr in ("a", "b c", "a b C"):
            w = parse_word(wstr)
            want = 3 * translation_length_h2(evaluate(canonical, w))
            assert eigen_period_sl(evaluate(s4, w)) == pytest.approx(want, abs=1e-8)


class TestCValue:
    def test_frozen_quadruple(self):
        assert c_value(np.diag([3.0, 2.0, 1 / 3, 1 / 2])) == pytest.approx(6.0, rel=1e-12)

    def test_identity(self):
        assert c_value(np.eye(6)) == 1.0

    def test_rank_one(self):
        assert c_value(np.diag([2.5, 0.4])) == pytest.approx(2.5, rel=1e-12)

    def test_at_least_one_and_inverse_symmetric(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            m = random_symplectic(2, rng)
            c = c_value(m)
            assert c >= 1.0 - 1e-10
            assert c_value(np.linalg.inv(m)) == pytest.approx(c, rel=1e-8)

    def test_rejects_non_symplectic(self):
        with pytest.raises(ValueError):
            c_value(np.diag([2.0, 2.0, 1.0, 1.0]))
        with pytest.raises(ValueError):
            c_value(np.eye(3))


class TestDisplacement:
    def test_identity_zero(self):
        assert displacement(np.eye(5)) == 0.0

    def test_two_by_two_example(self):
        assert displacement(np.diag([2.0, 0.5])) == pytest.approx(np.log(2.125), abs=1e-14)

    def test_rotation_zero(self):
        assert displacement(rotation(0.9)) == pytest.approx(0.0, abs=1e-12)

    def test_conjugation_invariant(self, canonical):
        rng = np.random.default_rng(5)
        m = evaluate(irreducible_embed(canonical, 3), parse_word("a b"))
        g = np.eye(3) + 0.3 * rng.standard_normal((3, 3))
        assert displacement(g @ m @ np.linalg.inv(g)) == pytest.approx(
            displacement(m), abs=1e-9)

    def test_riemannian_variant(self):
        m = np.diag([np.e, 1 / np.e])
        assert displacement(m, riemannian=True) == pytest.approx(np.sqrt(2.0), rel=1e-12)

    def test_nonnegative_on_group_elements(self, canonical):
        for w in enumerate_conjugacy_classes(3):
            assert displacement(evaluate(canonical, w)) >= -1e-12


class TestTranslationLength:
    def test_diagonal(self):
        assert translation_length_h2(np.diag([np.e, 1 / np.e])) == pytest.approx(2.0, rel=1e-12)

    def test_parabolic_rejected(self):
        with pytest.raises(ValueError):
            translation_length_h2(np.array([[1.0, 1.0], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            translation_length_h2(rotation(1.0))

    def test_conjugation_invariant(self, canonical):
        m = evaluate(canonical, parse_word("a b"))
        g = evaluate(canonical, parse_word("c"))
        moved = g @ m @ np.linalg.inv(g)
        assert translation_length_h2(moved) == pytest.approx(
            translation_length_h2(m), rel=1e-10)

    def test_matches_eigen_period(self, canonical):
        for wstr in ("a", "b", "c d"):
            m = evaluate(canonical, parse_word(wstr))
            assert translation_length_h2(m) == pytest.approx(eigen_period_sl(m), rel=1e-10)


class TestWellDisplacing:
    def test_hitchin_chain_holds(self, canonical):
        report = verify_well_displacing(irreducible_embed(canonical, 3), 4)
        assert report["violations"] == 0
        assert report["chain_residual"] >= -1e-9
        assert report["A"] > 0.5
        assert report["B"] == 0.0
        assert report["classes"] == 780

    def test_symplectic_chain_holds(self, canonical):
        report = verify_well_displacing(diagonal_embed(canonical, 2), 4)
        assert report["violations"] == 0
        assert report["chain_residual"] >= -1e-9
        assert report["A"] > 0.0

    def test_base_fuchsian_is_sharp(self, canonical):
        # for SL(2) the chain slack is log(1 + lambda^-4), tiny but positive
        report = verify_well_displacing(canonical, 4)
        assert report["violations"] == 0
        assert -1e-9 <= report["chain_residual"] < 0.01

    def test_trivial_rep_is_not_well_displacing(self):
        report = verify_well_displacing(trivial_representation(3), 3)
        assert report["A"] == 0.0
        assert report["violations"] == 0

    def test_rows_match_report(self, canonical):
        s3 = irreducible_embed(canonical, 3)
        rows = list(well_displacing_rows(s3, 2))
        assert len(rows) == 40
        report = verify_well_displacing(s3, 2)
        assert min(r[4] for r in rows) == pytest.approx(report["chain_residual"], abs=1e-12)
        # row fields agree with the scalar functionals
        word, length, d, per, slack = rows[0]
        m = evaluate(s3, parse_word(word))
        assert length == 1
        assert d == pytest.approx(displacement(m), abs=1e-10)
        assert per == pytest.approx(eigen_period_sl(m), abs=1e-10)
        assert slack == pytest.approx(d + np.log(3) - 2 * per / 3, abs=1e-12)

    def test_symplectic_rows_use_c(self, canonical):
        sp = diagonal_embed(canonical, 2)
        word, _, d, per, slack = next(iter(well_displacing_rows(sp, 1)))
        m = evaluate(sp, parse_word(word))
        assert per == pytest.approx(2 * np.log(c_value(m)), abs=1e-9)
        assert slack == pytest.approx(d + np.log(4) - per / 2, abs=1e-12)


class TestDisplacementSpectrum:
    def test_identity_word(self, canonical):
        assert displacement_spectrum(canonical, [()])[()] == 0.0

    def test_pointwise_agreement(self, canonical):
        s3 = irreducible_embed(canonical, 3)
        words = [parse_word(s) for s in ("a", "b C", "a b c d")]
        spec = displacement_spectrum(s3, words)
        for w in words:
            assert spec[w] == displacement(evaluate(s3, w))

    def test_automorphism_relabels(self, canonical):
        # swapping the two handles is a group automorphism; precomposing
        # the representation matches relabeling the words
        from surfrep.representations import LinearRepresentation

        a, b, c, d = canonical.images
        swapped = LinearRepresentation("SL", 2, (c, d, a, b))
        words = [parse_word(s) for s in ("a", "c", "a b", "c d", "a d")]
        swap = {1: 3, 2: 4, 3: 1, 4: 2}
        relabeled = [tuple(int(np.sign(s)) * swap[abs(s)] for s in w) for w in words]
        lhs = displacement_spectrum(swapped, words)
        rhs = displacement_spectrum(canonical, relabeled)
        for w, r in zip(words, relabeled):
            assert lhs[w] == pytest.approx(rhs[r], abs=1e-12)
