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
"""Tests for sparse polynomials over Z/p^N."""

import random

import pytest

from eulerflow.algebra.padic import ContextMismatch, PAdicContext, PrecisionExhausted
from eulerflow.algebra.poly import (
    SPACE_VARIABLES,
    ExponentWeights,
    MultiPoly,
    NotDivisible,
    UnboundVariable,
    VariableMismatch,
    polynomial_ring,
)

CTX = PAdicContext(5, 2)


@pytest.fixture
def xyz():
    return polynomial_ring(SPACE_VARIABLES, CTX)


def test_zero_coefficients_are_dropped(xyz):
    """Test canonical form: 25*x1 vanishes mod 25."""
    x1, x2, _ = xyz
    assert (x1 * 25).is_zero()
    assert (x1 + x2 - x1) == x2
    assert len(x1 + x2) == 2


def test_binomial_expansion(xyz):
    """Test (x1 + x2)^2 = x1^2 + 2 x1 x2 + x2^2."""
    x1, x2, _ = xyz
    assert (x1 + x2) ** 2 == x1 ** 2 + 2 * x1 * x2 + x2 ** 2
    assert ((x1 + x2) ** 5).terms[(1, 4, 0)] == 5


def test_frobenius_congruence_mod_p(xyz):
    """Test (x1 + x2)^p = x1^p + x2^p mod p but not mod p^2."""
    x1, x2, _ = xyz
    lhs = (x1 + x2) ** 5
    rhs = x1 ** 5 + x2 ** 5
    assert (lhs - rhs).reduce_mod_p().is_zero()
    assert not (lhs - rhs).is_zero()


def test_degrees(xyz):
    x1, x2, x3 = xyz
    f = x1 ** 3 * x2 + x3 ** 2
    assert f.degree("x1") == 3
    assert f.degree("x3") == 2
    assert f.total_degree() == 4
    assert MultiPoly.zero(SPACE_VARIABLES, CTX).degree("x1") == -1


def test_partial_derivative(xyz):
    """Test d/dx1 of x1^5 is 5 x1^4, which is zero mod p."""
    x1, x2, _ = xyz
    d = (x1 ** 5 + 3 * x1 * x2).partial("x1")
    assert d == 5 * x1 ** 4 + 3 * x2
    assert d.reduce_mod_p() == (3 * x2).reduce_mod_p()


def test_substitute_and_evaluate(xyz):
    x1, x2, x3 = xyz
    f = x1 * x2 + x3
    g = f.substitute({"x1": x2, "x2": x3, "x3": x1})
    assert g == x2 * x3 + x1
    assert f.evaluate({"x1": 2, "x2": 3, "x3": 4}).residue == 10


def test_substitute_requires_all_bindings(xyz):
    x1, x2, _ = xyz
    with pytest.raises(UnboundVariable):
        (x1 + x2).substitute({"x1": 1})


def test_substitute_into_other_variables():
    """Test substituting space variables by polynomials in z1, z2."""
    z1, z2 = polynomial_ring(("z1", "z2"), CTX)
    x1, x2, x3 = polynomial_ring(SPACE_VARIABLES, CTX)
    image = (x1 + x2 * x3).substitute({"x1": z1, "x2": z2, "x3": z1 + 1})
    assert image == z1 + z2 * z1 + z2
    assert image.variables == ("z1", "z2")


def test_mixing_variable_lists_raises(xyz):
    x1, _, _ = xyz
    (z1,) = polynomial_ring(("z1",), CTX)
    with pytest.raises(VariableMismatch):
        _ = x1 + z1


def test_mixing_contexts_raises(xyz):
    x1, _, _ = xyz
    other = MultiPoly.variable(SPACE_VARIABLES, PAdicContext(5, 3), "x1")
    with pytest.raises(ContextMismatch):
        _ = x1 + other


def test_unknown_variable_rejected():
    with pytest.raises(VariableMismatch):
        MultiPoly.variable(("y",), CTX, "y")


def test_divide_by_p():
    """Test exact division by p lands at precision N-1."""
    ctx = PAdicContext(5, 3)
    x1 = MultiPoly.variable(SPACE_VARIABLES, ctx, "x1")
    halved = (x1 * 10 + 5).divide_by_p()

    assert halved.context == PAdicContext(5, 2)
    assert halved.terms == {(1, 0, 0): 2, (0, 0, 0): 1}
    with pytest.raises(NotDivisible):
        (x1 + 5).divide_by_p()
    with pytest.raises(PrecisionExhausted):
        MultiPoly.constant(SPACE_VARIABLES, PAdicContext(5, 1), 0).divide_by_p()


def test_precision_changes(xyz):
    x1, _, _ = xyz
    f = x1 * 7
    assert f.with_precision(1).terms == {(1, 0, 0): 2}
    assert f.lift(3).context.N == 3
    assert f.lift(3).terms == {(1, 0, 0): 7}
    with pytest.raises(PrecisionExhausted):
        f.with_precision(3)


def test_divide_by_unit(xyz):
    x1, _, _ = xyz
    assert (x1 * 7).divide_by_unit(7) == x1


def test_weighted_homogeneity():
    """Test x^2 + z1 is homogeneous when x has weight 1 and z1 weight 2."""
    z1, z2, x = polynomial_ring(("z1", "z2", "x"), CTX)
    weights = ExponentWeights({"z1": 2, "z2": 2, "x": 1})
    assert (x ** 2 + z1).weighted_degree_check(weights, 2)
    assert not (x + z1).weighted_degree_check(weights, 2)
    assert (x ** 3 + z1 * x).is_homogeneous(3) is False
    with pytest.raises(ValueError):
        ExponentWeights({"x": 0})


def test_coefficient_of_and_embed(xyz):
    x1, x2, x3 = xyz
    f = x3 ** 2 * x1 + x3 ** 2 * 3 + x2
    c2 = f.coefficient_of("x3", 2)
    assert c2.variables == ("x1", "x2")
    assert c2.terms == {(1, 0): 1, (0, 0): 3}
    embedded = c2.embed(SPACE_VARIABLES)
    assert embedded == x1 + 3


def test_str_uses_signed_coefficients(xyz):
    x1, _, _ = xyz
    assert str(x1 - 1) == "x1 - 1"
    assert str(MultiPoly.zero(SPACE_VARIABLES, CTX)) == "0"


# -- randomized ring properties ----------------------------------------------------

SMALL_CONTEXTS = [PAdicContext(3, 2), PAdicContext(3, 3), PAdicContext(5, 2)]


def random_poly(rng, variables, context, terms=4, max_degree=3):
    """Sparse polynomial with random exponents and residues."""
    out = {}
    for _ in range(terms):
        exps = tuple(rng.randint(0, max_degree) for _ in variables)
        out[exps] = out.get(exps, 0) + rng.randrange(context.modulus)
    return MultiPoly(variables, context, out)


@pytest.mark.parametrize("ctx", SMALL_CONTEXTS, ids=str)
def test_ring_axioms_on_random_triples(ctx):
    rng = random.Random(20)
    for _ in range(10):
        f, g, h = (random_poly(rng, SPACE_VARIABLES, ctx) for _ in range(3))
        assert (f + g) * h == f * h + g * h
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert (f + g) + h == f + (g + h)
        assert f - f == MultiPoly.zero(SPACE_VARIABLES, ctx)


@pytest.mark.parametrize("ctx", SMALL_CONTEXTS, ids=str)
def test_substitute_is_a_ring_homomorphism(ctx):
    """Test that substituting polynomials in z1, z2 respects sums and products."""
    rng = random.Random(21)
    for _ in range(5):
        f, g = (random_poly(rng, SPACE_VARIABLES, ctx, max_degree=2) for _ in range(2))
        bindings = {v: random_poly(rng, ("z1", "z2"), ctx, terms=3, max_degree=2) for v in SPACE_VARIABLES}

        assert (f * g).substitute(bindings) == f.substitute(bindings) * g.substitute(bindings)
        assert (f + g).substitute(bindings) == f.substitute(bindings) + g.substitute(bindings)


@pytest.mark.parametrize("ctx", SMALL_CONTEXTS, ids=str)
def test_partial_satisfies_leibniz(ctx):
    rng = random.Random(22)
    for _ in range(10):
        f, g = (random_poly(rng, SPACE_VARIABLES, ctx) for _ in range(2))
        for v in SPACE_VARIABLES:
            assert (f * g).partial(v) == f.partial(v) * g + f * g.partial(v)


@pytest.mark.parametrize("ctx", SMALL_CONTEXTS, ids=str)
def test_coefficients_rebuild_the_polynomial(ctx):
    """Test sum_k coefficient_of(f, v, k) v^k == f for every variable."""
    rng = random.Random(23)
    generators = dict(zip(SPACE_VARIABLES, polynomial_ring(SPACE_VARIABLES, ctx)))
    for _ in range(10):
        f = random_poly(rng, SPACE_VARIABLES, ctx, terms=6)
        for v in SPACE_VARIABLES:
            rebuilt = MultiPoly.zero(SPACE_VARIABLES, ctx)
            for k in range(f.degree(v) + 1):
                rebuilt = rebuilt + f.coefficient_of(v, k).embed(SPACE_VARIABLES) * generators[v] ** k
            assert rebuilt == f
