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
"""Tests for functions on X with A(H), N(H), x1 and x2 inverted."""

from concurrent.futures import ThreadPoolExecutor

import pytest

from eulerflow.algebra.padic import ContextMismatch
from eulerflow.algebra.poly import SPACE_VARIABLES, MultiPoly, NotDivisible
from eulerflow.services.localized import LocalizedRing, as_localized, localized_ring


@pytest.fixture(scope="module")
def ring(params5):
    return localized_ring(params5)


@pytest.fixture(scope="module")
def gens(ring):
    return ring.generator("x1"), ring.generator("x2"), ring.generator("x3")


def test_ring_is_cached(params5, ring):
    assert localized_ring(params5) is ring


def test_inverses_of_factors(ring, gens):
    """Test that each denominator factor times its inverse is one."""
    x1, x2, _ = gens
    assert x1 * ring.inverse_of_factor(2) == ring.one()
    assert x2 ** 3 * ring.inverse_of_factor(3, 3) == ring.one()
    assert ring.from_poly(ring.A_H) * ring.inverse_of_factor(0) == 1
    assert ring.from_poly(ring.N_H) * ring.inverse_of_factor(1) == 1


def test_addition_over_common_denominator(ring, gens):
    x1, x2, _ = gens
    total = ring.inverse_of_factor(2) + ring.inverse_of_factor(3)
    assert total.denominator == (0, 0, 1, 1)
    assert total == (x1 + x2) * ring.inverse_of_factor(2) * ring.inverse_of_factor(3)


def test_equality_ignores_representation(ring, gens):
    """Test x1 x3 / x1^2 equals x3 / x1."""
    x1, _, x3 = gens
    a = ring.element((x1 * x3).numerator, (0, 0, 2, 0))
    b = x3 * ring.inverse_of_factor(2)
    assert a == b
    assert a != x3


def test_cancel(ring, gens):
    x1, _, x3 = gens
    element = ring.element((x1 ** 2 * x3).numerator, (1, 0, 1, 0))
    cancelled = element.cancel()
    assert cancelled.denominator == (1, 0, 0, 0)
    assert cancelled.numerator == (x1 * x3).numerator
    assert cancelled == element


def test_compose_with_localized_images(ring, gens):
    """Test f(1/x1, x2, x3) for f = x1^2 + x2."""
    x1, x2, x3 = gens
    f = (x1 ** 2 + x2).numerator
    image = ring.compose(f, (ring.inverse_of_factor(2), x2, x3))
    assert image == ring.inverse_of_factor(2, 2) + x2
    assert image.denominator == (0, 0, 2, 0)


def test_compose_rejects_wrong_arity(ring, gens):
    x1, _, _ = gens
    with pytest.raises(ValueError):
        ring.compose(x1.numerator, (x1,))


def test_precision_changes(params5, ring, gens):
    x1, _, _ = gens
    element = (x1 * 5 + 1) * ring.inverse_of_factor(0)
    reduced = element.reduce_mod_p()
    assert reduced.context.N == 1
    assert reduced == ring.reduce_mod_p().inverse_of_factor(0)
    lifted = reduced.lift_into(ring)
    assert lifted.context.N == 3
    assert (lifted - ring.inverse_of_factor(0)).is_zero()


def test_lift_into_coarser_ring_raises(ring, gens):
    x1, _, _ = gens
    coarse = ring.with_precision(2)
    with pytest.raises(ContextMismatch):
        x1.lift_into(coarse)


def test_divide_by_p(ring, gens):
    x1, _, _ = gens
    quotient = (x1 * 10).divide_by_p()
    assert quotient.context.N == 2
    assert quotient == ring.with_precision(2).generator("x1") * 2
    with pytest.raises(NotDivisible):
        x1.divide_by_p()


def test_elements_of_different_rings_differ(params3, ring):
    other = localized_ring(params3)
    assert ring.one() != other.one()


def test_as_localized(ring):
    poly = MultiPoly.variable(SPACE_VARIABLES, ring.context, "x3")
    assert as_localized(poly, ring) == ring.generator("x3")
    with pytest.raises(ValueError):
        as_localized(poly)


def test_str_names_denominator_factors(ring):
    assert str(ring.inverse_of_factor(0, 2)) == "(1) / (A(H)^2)"


def test_factor_powers_shared_across_threads(params3):
    """Test that concurrent callers all get the single cached power."""
    fresh = LocalizedRing(params3)
    with ThreadPoolExecutor(max_workers=8) as pool:
        powers = list(pool.map(lambda k: fresh.factor_power(1, k), [7] * 16))

    assert all(power is powers[0] for power in powers)
    assert powers[0] == fresh.N_H ** 7
    assert fresh.factor_power(1, 7) is powers[0]
