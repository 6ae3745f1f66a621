"""Tests for Lagrangian frames and the determinant cross ratio.

The n = 1 case has a closed-form oracle: Lagrangians in R^2 are lines
through the origin, and for lines at angles t1..t4

    B = sin(t2-t1) sin(t4-t3) / (sin(t4-t1) sin(t2-t3)).
"""

import numpy as np
import pytest

from surfrep.symplectic import (
    LagrangianFrame,
    cross_ratio_B,
    is_positive_triple,
    is_transverse,
    pairing_matrix,
    random_symplectic,
    symplectic_period,
)


def line(theta):
    return LagrangianFrame(np.array([[np.cos(theta)], [np.sin(theta)]]))


def sin_oracle(t1, t2, t3, t4):
    return (np.sin(t2 - t1) * np.sin(t4 - t3)) / (np.sin(t4 - t1) * np.sin(t2 - t3))


def model_triple(n):
    # x-plane, graph of the identity, y-plane: the standard positive triple
    top = np.eye(n)
    f = LagrangianFrame(np.vstack([top, np.zeros((n, n))]))
    g = LagrangianFrame(np.vstack([top, top]))
    l = LagrangianFrame(np.vstack([np.zeros((n, n)), top]))
    return f, g, l


class TestFrameValidation:
    def test_rank_deficient(self):
        with pytest.raises(ValueError, match="rank"):
            LagrangianFrame(np.array([[1.0, 2.0], [0, 0], [0, 0], [0, 0]]))

    def test_not_isotropic(self):
        # e1 and e3 pair to omega = 1
        f = np.zeros((4, 2))
        f[0, 0] = 1.0
        f[2, 1] = 1.0
        with pytest.raises(ValueError, match="isotropic"):
            LagrangianFrame(f)

    def test_shape(self):
        with pytest.raises(ValueError, match="2n x n"):
            LagrangianFrame(np.ones((3, 2)))

    def test_n(self):
        f, _, _ = model_triple(3)
        assert f.n == 3


class TestTransversality:
    def test_coordinate_planes(self):
        f, _, l = model_triple(2)
        assert is_transverse(f, l)

    def test_self(self):
        f, _, _ = model_triple(2)
        assert not is_transverse(f, f)

    def test_tiny_perturbation_still_fails(self):
        f, _, _ = model_triple(2)
        rng = np.random.default_rng(0)
        g = LagrangianFrame(f.frame + 1e-12 * rng.standard_normal(f.frame.shape))
        assert not is_transverse(f, g)


class TestPairingMatrix:
    def test_standard_pair(self):
        la = LagrangianFrame(np.array([[1.0], [0.0]]))
        lb = LagrangianFrame(np.array([[0.0], [1.0]]))
        assert np.allclose(pairing_matrix(la, lb), [[1.0]])

    def test_isotropy_zero(self):
        _, g, _ = model_triple(3)
        assert np.allclose(pairing_matrix(g, g), 0.0, atol=1e-14)

    def test_antisymmetry(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            m = random_symplectic(6, rng)
            f, g, _ = model_triple(3)
            la, lb = f.transformed(m), g.transformed(m)
            assert np.allclose(pairing_matrix(la, lb), -pairing_matrix(lb, la).T)


class TestCrossRatio:
    def test_quarter_turn_quadruple(self):
        b = cross_ratio_B(line(0), line(np.pi / 4), line(np.pi / 2), line(3 * np.pi / 4))
        assert abs(b - (-1.0)) < 1e-12

    def test_matches_sine_formula(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            t = np.sort(rng.uniform(0, np.pi, 4)) + rng.uniform(0, np.pi)
            t1, t2, t3, t4 = t[[0, 2, 1, 3]]  # keep denominators away from zero
            b = cross_ratio_B(line(t1), line(t2), line(t3), line(t4))
            assert abs(b - sin_oracle(t1, t2, t3, t4)) < 1e-9 * max(1, abs(b))

    def test_repeat_first_and_third(self):
        f, g, l = model_triple(2)
        rng = np.random.default_rng(3)
        v = LagrangianFrame(random_symplectic(4, rng) @ g.frame)
        assert abs(cross_ratio_B(f, g, f, v) - 1.0) < 1e-12

    def test_repeat_first_and_second(self):
        f, g, l = model_triple(2)
        assert abs(cross_ratio_B(f, f, g, l)) < 1e-12

    def test_cocycle(self):
        rng = np.random.default_rng(4)
        f, g, l = model_triple(2)
        ms = [random_symplectic(4, rng, scale=0.4) for _ in range(3)]
        l1, l3 = f, l
        l2, l4, l5 = g.transformed(ms[0]), g.transformed(ms[1]), g.transformed(ms[2])
        lhs = cross_ratio_B(l1, l2, l3, l4) * cross_ratio_B(l1, l4, l3, l5)
        rhs = cross_ratio_B(l1, l2, l3, l5)
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))

    def test_pair_swap_symmetry(self):
        rng = np.random.default_rng(5)
        f, g, l = model_triple(2)
        l1, l3 = f.transformed(random_symplectic(4, rng, 0.3)), l
        l2, l4 = g, g.transformed(random_symplectic(4, rng, 0.3))
        b1 = cross_ratio_B(l1, l2, l3, l4)
        b2 = cross_ratio_B(l2, l1, l4, l3)
        assert abs(b1 - b2) < 1e-9 * max(1.0, abs(b1))

    def test_frame_independence(self):
        rng = np.random.default_rng(6)
        f, g, l = model_triple(3)
        v = g.transformed(random_symplectic(6, rng, 0.5))
        b0 = cross_ratio_B(f, g, l, v)
        for L, idx in [(f, 0), (g, 1), (l, 2), (v, 3)]:
            args = [f, g, l, v]
            args[idx] = LagrangianFrame(L.frame @ rng.standard_normal((3, 3)))
            assert abs(cross_ratio_B(*args) - b0) < 1e-9 * max(1.0, abs(b0))

    def test_symplectic_invariance(self):
        rng = np.random.default_rng(7)
        f, g, l = model_triple(2)
        v = g.transformed(random_symplectic(4, rng, 0.5))
        b0 = cross_ratio_B(f, g, l, v)
        for _ in range(5):
            m = random_symplectic(4, rng, 0.5)
            b = cross_ratio_B(*(x.transformed(m) for x in (f, g, l, v)))
            assert abs(b - b0) < 1e-9 * max(1.0, abs(b0))

    def test_nontransverse_denominator(self):
        f, g, l = model_triple(2)
        with pytest.raises(ValueError, match="not transverse"):
            cross_ratio_B(f, g, l, f)


class TestPositivity:
    def test_diagonal_line_positive(self):
        assert is_positive_triple(line(0.0), line(np.pi / 4), line(np.pi / 2))

    def test_antidiagonal_negative(self):
        assert not is_positive_triple(line(0.0), line(-np.pi / 4), line(np.pi / 2))

    def test_degenerate_middle(self):
        f, _, l = model_triple(2)
        assert not is_positive_triple(f, f, l)

    def test_model_triple_all_n(self):
        for n in (1, 2, 3):
            assert is_positive_triple(*model_triple(n))

    def test_invariant_under_symplectic(self):
        rng = np.random.default_rng(8)
        f, g, l = model_triple(2)
        for _ in range(10):
            m = random_symplectic(4, rng, 0.6)
            assert is_positive_triple(f.transformed(m), g.transformed(m), l.transformed(m))

    def test_requires_transverse_ends(self):
        f, g, _ = model_triple(2)
        with pytest.raises(ValueError, match="not transverse"):
            is_positive_triple(f, g, f)

    def test_graph_characterization(self):
        # over the splitting x-plane / y-plane, (F, graph S, L) is positive
        # exactly for positive definite symmetric S
        n = 3
        f, _, l = model_triple(n)
        rng = np.random.default_rng(9)
        a = rng.standard_normal((n, n))
        spd = a @ a.T + n * np.eye(n)
        g_pos = LagrangianFrame(np.vstack([np.eye(n), spd]))
        g_neg = LagrangianFrame(np.vstack([np.eye(n), -spd]))
        assert is_positive_triple(f, g_pos, l)
        assert not is_positive_triple(f, g_neg, l)


class TestPeriod:
    def test_diagonal_oracle(self):
        lam = 1.7
        s = np.diag([lam, 1 / lam])
        e, f, g = line(0), line(np.pi / 2), line(np.pi / 4)
        assert abs(symplectic_period(s, e, f, g) - lam ** 2) < 1e-12

    def test_identity(self):
        e, f, g = line(0), line(np.pi / 2), line(np.pi / 4)
        assert abs(symplectic_period(np.eye(2), e, f, g) - 1.0) < 1e-12

    def test_inverse(self):
        lam = 1.7
        s = np.diag([1 / lam, lam])
        e, f, g = line(0), line(np.pi / 2), line(np.pi / 4)
        assert abs(symplectic_period(s, e, f, g) - lam ** -2) < 1e-12

    def test_probe_independence(self):
        s = np.diag([2.0, 3.0, 0.5, 1 / 3.0])
        e, _, f = model_triple(2)
        rng = np.random.default_rng(10)
        vals = []
        for _ in range(5):
            a = rng.standard_normal((2, 2))
            spd = a @ a.T + 2 * np.eye(2)
            g = LagrangianFrame(np.vstack([np.eye(2), spd]))
            vals.append(symplectic_period(s, e, f, g))
        assert np.ptp(vals) < 1e-8 * abs(vals[0])
        assert abs(vals[0] - (2.0 * 3.0) ** 2) < 1e-8 * 36

    def test_invariance_violation(self):
        s = np.diag([2.0, 0.5])
        with pytest.raises(ValueError, match="not invariant"):
            symplectic_period(s, line(np.pi / 4), line(np.pi / 2), line(0.3))
