# Copyright 2025 John Brosnihan
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Tests for Hasse invariants, the R/S series and the point-count oracles."""

import random

import pytest

from eulerflow.algebra.padic import PAdicContext
from eulerflow.algebra.poly import LEVEL_VARIABLES, MultiPoly
from eulerflow.services.geometry import DegenerateFiber, make_F
from eulerflow.services.hasse import (
    UnsupportedDegree,
    point_count_congruences,
    check_series_identity,
    count_affine,
    hasse_data,
    hasse_homogeneity_check,
    hasse_invariant,
    homogeneity_suite,
    is_squarefree_mod_p,
    is_supersingular,
    point_count_suite,
    random_squarefree_polynomial,
    random_system_params,
    supersingular_levels,
    univariate,
)

F3 = PAdicContext(3, 1)
F5 = PAdicContext(5, 1)


def test_count_affine_small_examples():
    """Test y^2 = x^3 + x has 3 affine points and y^2 = x^4 + 1 has 2 over F_3."""
    assert count_affine(univariate([0, 1, 0, 1], F3), 3) == 3
    assert count_affine(univariate([1, 0, 0, 0, 1], F3), 3) == 2


def test_hasse_invariant_of_cubic():
    """Test A = 2 for x^3 + x over F_5, the x^4 coefficient of (x^3 + x)^2."""
    f = univariate([0, 1, 0, 1], F5)
    assert hasse_invariant(f, "x", 5).constant_term().residue == 2


def test_hasse_invariant_rejects_wrong_prime():
    with pytest.raises(ValueError):
        hasse_invariant(univariate([0, 1, 0, 1], F5), "x", 3)


@pytest.mark.parametrize(
    "coeffs,p,expected_a,expected_n",
    [
        ([0, 1, 0, 1], 3, 0, 3),
        ([0, 1, 0, 1], 5, 2, 3),
        ([1, 0, 0, 0, 1], 3, 0, 2),
    ],
)
def test_point_count_congruences(coeffs, p, expected_a, expected_n):
    """Test the Hasse invariant against exhaustive counts for small curves."""
    report = point_count_congruences(univariate(coeffs, PAdicContext(p, 1)), p)

    assert report.A == expected_a
    assert report.N_p == expected_n
    assert report.squarefree
    assert report.holds
    assert set(report.deltas) == {"affine", "projective"}


def test_point_count_reduces_higher_precision():
    """Test that a polynomial over Z/p^2 is reduced before counting."""
    f = univariate([5, 6, 0, 1], PAdicContext(5, 2))
    report = point_count_congruences(f, 5)
    assert report.poly == [0, 1, 0, 1]
    assert report.holds


def test_unsupported_degree():
    with pytest.raises(UnsupportedDegree):
        point_count_congruences(univariate([1, 0, 1], F5), 5)


def test_squarefree_detection():
    assert not is_squarefree_mod_p(univariate([0, 0, 1, 1], F5), 5)
    assert is_squarefree_mod_p(univariate([0, 1, 0, 1], F5), 5)


def test_random_squarefree_polynomial_is_squarefree(rng):
    for _ in range(10):
        f = random_squarefree_polynomial(rng, 7, 3, monic=True)
        assert f.degree("x") == 3
        assert f.terms[(3,)] == 1
        assert is_squarefree_mod_p(f, 7)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_point_count_suite_holds(p):
    """Test that every random squarefree cubic and quartic satisfies the congruences."""
    report = point_count_suite(p, 20, random.Random(p))
    assert report.holds
    assert report.failures == []


def test_hasse_invariant_of_euler_quartic_p3(params3):
    """Test A_2(F) = 3 z1 - 2 z2 for p=3, a=(0,1,2)."""
    data = hasse_data(params3)
    z1 = MultiPoly.variable(LEVEL_VARIABLES, params3.context, "z1")
    z2 = MultiPoly.variable(LEVEL_VARIABLES, params3.context, "z2")
    assert data.A == z1 * 3 - z2 * 2


def test_hasse_homogeneity(params5):
    report = hasse_homogeneity_check(params5)
    assert report.expected_degree == 2
    assert report.homogeneous
    assert report.nonzero_mod_p
    assert report.quartic_weighted
    assert report.holds


def test_homogeneity_suite(rng):
    reports = homogeneity_suite(5, 3, rng)
    assert len(reports) == 3
    assert all(r.holds for r in reports)


def test_series_identity(params3, params5):
    """Test A x^(p-1) + sum R_i x^i = F^((p-1)/2), with S an antiderivative."""
    assert check_series_identity(params3)
    assert check_series_identity(params5)


def test_series_identity_detects_tampering(params5):
    data = hasse_data(params5)
    tampered = type(data)(A=data.A + 1, R=data.R, S=data.S, F_power=data.F_power)
    assert not check_series_identity(params5, tampered)


def test_series_has_no_p_minus_one_term(params5):
    data = hasse_data(params5)
    assert data.R[4].is_zero()
    assert data.F_power == make_F(params5) ** 2


def test_supersingular_levels_p3(params3):
    """Test that A mod 3 = z2, so the supersingular levels are (1, 0) and (2, 0)."""
    assert supersingular_levels(params3) == [(1, 0), (2, 0)]
    assert is_supersingular(params3, (1, 0))


def test_is_supersingular_rejects_degenerate_fiber(params3):
    with pytest.raises(DegenerateFiber):
        is_supersingular(params3, (0, 0))


def test_random_system_params(rng):
    for _ in range(5):
        params = random_system_params(rng, 7, 2)
        residues = {a.residue % 7 for a in params.a}
        assert len(residues) == 3
