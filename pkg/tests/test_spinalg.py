import math
from fractions import Fraction

import numpy as np
import pytest

from artifact import spinalg, symgrp
from artifact.spinalg import CliffordEven, QSqrt2


def as_float_terms(z):
    return {blade: float(c) for blade, c in z.to_float().terms}


def assert_close(z, w, tol=1e-12):
    d = z.to_float() - w.to_float()
    assert all(abs(float(c)) < tol for _, c in d.terms)


class TestQSqrt2:
    def test_arithmetic(self):
        half = QSqrt2(0, Fraction(1, 2))  # 1/sqrt(2)
        assert (half * half).p == Fraction(1, 2)
        assert (half * half).q == 0

    def test_exactness(self):
        a = QSqrt2(Fraction(1, 3), Fraction(2, 7))
        b = QSqrt2(Fraction(-2, 5), Fraction(1, 2))
        prod = a * b
        # (p1 + q1 s)(p2 + q2 s) = p1 p2 + 2 q1 q2 + (p1 q2 + p2 q1) s
        assert prod.p == Fraction(1, 3) * Fraction(-2, 5) + 2 * Fraction(2, 7) * Fraction(1, 2)
        assert prod.q == Fraction(1, 3) * Fraction(1, 2) + Fraction(-2, 5) * Fraction(2, 7)


class TestGenerators:
    def test_basis_vectors_square_to_plus_one(self):
        # e_i e_j * e_j e_i = +1 for the bivector blades
        for n in (2, 3):
            for i in range(1, n + 1):
                blade = CliffordEven.make(n, {(i, i + 1): QSqrt2(1)})
                sq = blade * blade
                assert_close(sq, CliffordEven.make(n, {(): QSqrt2(-1)}))
                # e_{i+1}e_i e_{i+1}e_i = -e_{i+1}e_{i+1}e_i e_i = -1
                # confirms e_i^2 = +1 convention

    def test_alpha_two_pi_is_minus_one(self):
        for n in (2, 3, 4):
            for j in range(1, n + 1):
                z = spinalg.alpha(n, j, 2 * math.pi)
                minus_one = CliffordEven.make(n, {(): -1.0})
                assert_close(z, minus_one, tol=1e-12)

    def test_alpha_projects_to_givens(self):
        n, j, theta = 3, 2, 0.7
        M = np.array(
            spinalg.project(spinalg.alpha(n, j, theta)), dtype=float
        )
        expected = np.eye(n + 1)
        c, s = math.cos(theta), math.sin(theta)
        expected[j - 1 : j + 1, j - 1 : j + 1] = [[c, -s], [s, c]]
        assert np.allclose(M, expected, atol=1e-12)


class TestLiftedGroup:
    def test_acute_reduced_word_independence(self):
        for n in (2, 3):
            for sigma in symgrp.all_permutations(n):
                words = symgrp.all_reduced_words(sigma)
                vals = set()
                for w in words:
                    z = CliffordEven.one(n)
                    for i in w:
                        z = z * spinalg.alpha_exact(n, i, +1)
                    vals.add(z.terms)
                assert len(vals) == 1

    def test_hat_in_quat(self):
        for n in (2, 3):
            quat = {z.terms for z in spinalg.quat_elements(n)}
            for sigma in symgrp.all_permutations(n):
                assert spinalg.hat(sigma).terms in quat

    def test_quat_has_two_to_n_plus_one_elements(self):
        for n in (2, 3):
            elems = spinalg.quat_elements(n)
            assert len(elems) == 2 ** (n + 1)
            assert len({z.terms for z in elems}) == 2 ** (n + 1)

    def test_hat_is_acute_grave_quotient(self):
        for sigma in symgrp.all_permutations(2):
            lhs = spinalg.hat(sigma)
            grave = spinalg.grave(sigma)
            acute = spinalg.acute(sigma)
            assert_close(lhs * grave, acute)


class TestWordTable:
    def test_endpoint_identity(self):
        n = 2
        word = symgrp.word_from_name(n, "abab")
        table = spinalg.word_table(word, n)
        eta = symgrp.longest_element(n)
        ell = len(word)
        endpoint = table.half[ell] * spinalg.acute(eta)
        assert_close(endpoint, table.integer[ell + 1])

    def test_q_values_in_quat(self):
        n = 2
        word = symgrp.word_from_name(n, "a[ba]")
        table = spinalg.word_table(word, n)
        quat = {z.terms for z in spinalg.quat_elements(n)}
        for j in range(len(word) + 1):
            assert table.q(j).terms in quat

    def test_q_of_word_quat(self):
        n = 3
        quat = {z.terms for z in spinalg.quat_elements(n)}
        word = symgrp.word_from_name(n, "a[cb]a")
        assert spinalg.q_of_word(word, n).terms in quat


class TestThetaExit:
    def test_roundtrip(self):
        rho = symgrp.Permutation((3, 1, 2))
        i = 2
        base = spinalg.acute(symgrp.compose(rho, symgrp.coxeter_generator(2, i)))
        for theta0 in (0.3, 1.1, 2.6):
            y = base.to_float() * spinalg.alpha(2, i, theta0)
            theta = spinalg.theta_exit(y, i, rho)
            assert abs(theta - theta0) < 1e-10

    def test_degenerate_raises(self):
        # acute(eta)^2 lies in Quat: a cell corner with a degenerate
        # pivot minor, not an interior point of the chart
        eta = symgrp.longest_element(2)
        z = (spinalg.acute(eta) * spinalg.acute(eta)).to_float()
        with pytest.raises(spinalg.NoRootInInterval):
            spinalg.theta_exit(z, symgrp.reduced_word(eta)[-1], eta)


class TestSignedCell:
    def test_alpha_products_in_positive_cell(self):
        import random

        rng = random.Random(7)
        n = 2
        eta = symgrp.longest_element(n)
        word = symgrp.reduced_word(eta)
        for _ in range(10):
            z = CliffordEven.one(n).to_float()
            for i in word:
                z = z * spinalg.alpha(n, i, rng.uniform(0.1, 3.0))
            assert spinalg.in_positive_cell(z)
            assert not spinalg.in_positive_cell(z * CliffordEven.make(n, {(): -1.0}))

    def test_positive_chart_roundtrip(self):
        n = 2
        eta = symgrp.longest_element(n)
        word = symgrp.reduced_word(eta)
        thetas = [0.4, 1.3, 2.2]
        z = CliffordEven.one(n).to_float()
        for i, th in zip(word, thetas):
            z = z * spinalg.alpha(n, i, th)
        rec = spinalg.positive_chart(z)
        assert max(abs(a - b) for a, b in zip(rec, thetas)) < 1e-10


class TestCellOfMatrix:
    def test_cell_of_acute(self):
        for n in (2, 3):
            for sigma in symgrp.all_permutations(n):
                M = spinalg.project(spinalg.acute(sigma))
                assert spinalg.cell_of_matrix(M) == sigma


class TestSpinExpH:
    def test_circle_column(self):
        n = 2
        for t in (0.0, 0.25, 0.4, 1.0):
            z = spinalg.spin_exp_h(n, math.pi * t)
            M = np.array(spinalg.project(z), dtype=float)
            col = M[:, 0]
            expected = 0.5 * np.array(
                [
                    1 + math.cos(2 * math.pi * t),
                    math.sqrt(2) * math.sin(2 * math.pi * t),
                    1 - math.cos(2 * math.pi * t),
                ]
            )
            assert np.allclose(col, expected, atol=1e-12)
