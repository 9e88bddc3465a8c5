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
"""Hasse invariants, the R/S series and point-count oracles.

This module provides:
- hasse_invariant: coefficient of x^(p-1) in f^((p-1)/2)
- r_series / hasse_data: A_{p-1}(F), the R_i and the antiderivative S for the
  Euler quartic, stored as numerators over A (cached per SystemParams)
- count_affine, point_count_congruences: brute-force point counts against the Hasse
  invariant congruences for cubics and quartics
- is_supersingular, supersingular_levels
- Seeded random generators and the randomized suites used by the CLI
"""

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from sympy import Poly, Symbol

from eulerflow.algebra.padic import PAdicContext, inv, legendre
from eulerflow.algebra.poly import (
    LEVEL_VARIABLES,
    QUARTIC_VARIABLES,
    ExponentWeights,
    MultiPoly,
)
from eulerflow.logging import PhaseTimer, StructuredLogger
from eulerflow.models import HasseHomogeneityReport, PointCountReport, PointCountSuiteReport
from eulerflow.services.geometry import (
    DegenerateFiber,
    SystemParams,
    iter_level_residues,
    make_F,
    make_N,
)

logger = StructuredLogger(__name__)

UNIVARIATE = ("x",)
_SYMPY_X = Symbol("x")


class HasseError(Exception):
    """Base exception for Hasse invariant computations."""
    pass


class NonUnitDenominator(HasseError):
    """Raised when the antiderivative needs to divide by a multiple of p."""
    pass


class UnsupportedDegree(HasseError):
    """Raised when a point-count congruence is requested for a degree other than 3 or 4."""
    pass


def hasse_invariant(f: MultiPoly, x: str, p: int) -> MultiPoly:
    """Coefficient of x^(p-1) in f^((p-1)/2), a polynomial in the other variables."""
    if p != f.context.p:
        raise ValueError(f"polynomial lives over p={f.context.p}, asked for p={p}")
    if p % 2 == 0:
        raise ValueError("p must be odd")
    return (f ** ((p - 1) // 2)).coefficient_of(x, p - 1)


@dataclass(frozen=True)
class HasseData:
    """Hasse invariant of the Euler quartic with its R and S series.

    Attributes:
        A: A_{p-1}(F) in z1, z2
        R: i -> numerator of R_i over A, polynomials in z1, z2
        S: numerator of S = sum R_i x^(i+1)/(i+1) over A, in z1, z2, x
        F_power: F^((p-1)/2)
    """
    A: MultiPoly
    R: dict[int, MultiPoly] = field(hash=False)
    S: MultiPoly
    F_power: MultiPoly
    denominator_power: int = 1


def r_series(params: SystemParams) -> HasseData:
    """Expand A^{-1} F^((p-1)/2) - x^(p-1) = sum_i R_i x^i and integrate.

    Raises:
        NonUnitDenominator: If some R_i with p | (i+1) is nonzero
    """
    p = params.p
    ctx = params.context
    with PhaseTimer("hasse_series", logger):
        f = make_F(params)
        f_power = f ** ((p - 1) // 2)
        a = f_power.coefficient_of("x", p - 1)
        x = MultiPoly.variable(QUARTIC_VARIABLES, ctx, "x")
        remainder = f_power - a.embed(QUARTIC_VARIABLES) * x ** (p - 1)
        series: dict[int, MultiPoly] = {}
        s_num = MultiPoly.zero(QUARTIC_VARIABLES, ctx)
        for i in range(2 * p - 1):
            r_i = remainder.coefficient_of("x", i)
            series[i] = r_i
            if r_i.is_zero():
                continue
            if (i + 1) % p == 0:
                raise NonUnitDenominator(f"R_{i} is nonzero but {i + 1} is divisible by {p}")
            s_num = s_num + r_i.embed(QUARTIC_VARIABLES) * x ** (i + 1) * inv(ctx.scalar(i + 1))
    logger.debug(
        "Computed Hasse series",
        p=p,
        precision=ctx.N,
        nonzero_terms=sum(1 for r in series.values() if r),
    )
    return HasseData(A=a, R=series, S=s_num, F_power=f_power)


@lru_cache(maxsize=64)
def hasse_data(params: SystemParams) -> HasseData:
    """Cached :func:`r_series`."""
    return r_series(params)


def check_series_identity(params: SystemParams, data: Optional[HasseData] = None) -> bool:
    """A(x^(p-1) + sum R_i x^i) = F^((p-1)/2) and d/dx (A S) = A sum R_i x^i, with R_{p-1} = 0."""
    data = data or hasse_data(params)
    p = params.p
    ctx = params.context
    x = MultiPoly.variable(QUARTIC_VARIABLES, ctx, "x")
    series_sum = MultiPoly.zero(QUARTIC_VARIABLES, ctx)
    for i, r_i in data.R.items():
        series_sum = series_sum + r_i.embed(QUARTIC_VARIABLES) * x ** i
    reconstructed = data.A.embed(QUARTIC_VARIABLES) * x ** (p - 1) + series_sum
    return (
        data.R.get(p - 1, MultiPoly.zero(LEVEL_VARIABLES, ctx)).is_zero()
        and reconstructed == data.F_power
        and data.S.partial("x") == series_sum
    )


def univariate(coefficients: list[int], context: PAdicContext) -> MultiPoly:
    """Polynomial in x from ascending coefficients."""
    return MultiPoly(UNIVARIATE, context, {(k,): c for k, c in enumerate(coefficients)})


def _ascending(f: MultiPoly) -> list[int]:
    degree = f.degree("x")
    return [f.terms.get((k,), 0) for k in range(degree + 1)]


def count_affine(f: MultiPoly, p: int) -> int:
    """Number of (x, y) in F_p^2 with y^2 = f(x), by exhaustive enumeration."""
    coeffs = [c % p for c in _ascending(f)]
    roots_of = [0] * p
    for y in range(p):
        roots_of[y * y % p] += 1
    total = 0
    for x in range(p):
        value = 0
        for c in reversed(coeffs):
            value = (value * x + c) % p
        total += roots_of[value]
    return total


def is_squarefree_mod_p(f: MultiPoly, p: int) -> bool:
    """Nonzero discriminant mod p (leading coefficient assumed a unit)."""
    coeffs = [c % p for c in _ascending(f)]
    disc = Poly(list(reversed(coeffs)), _SYMPY_X).discriminant()
    return int(disc) % p != 0


def point_count_congruences(f: MultiPoly, p: int) -> PointCountReport:
    """Compare the Hasse invariant of y^2 = f(x) with brute-force point counts.

    Cubics: A = -N_p. Quartics with leading coefficient a: A = -N_p - (a/p).
    When f has distinct roots, the projective count (affine points plus one
    point at infinity for cubics, 1 + (a/p) for quartics) is 1 - A. All
    congruences are mod p.

    Raises:
        UnsupportedDegree: If deg f is not 3 or 4
    """
    f_p = f.reduce_mod_p() if f.context.N > 1 else f
    degree = f_p.degree("x")
    if degree not in (3, 4):
        raise UnsupportedDegree(f"point-count congruences cover degrees 3 and 4, got {degree}")
    coeffs = _ascending(f_p)
    a_inv = hasse_invariant(f_p, "x", p).constant_term().residue
    n_p = count_affine(f_p, p)
    lead = coeffs[-1]
    squarefree = is_squarefree_mod_p(f_p, p)
    deltas: dict[str, int] = {}
    if degree == 3:
        deltas["affine"] = (a_inv + n_p) % p
        projective = n_p + 1
    else:
        symbol = legendre(lead, p)
        deltas["affine"] = (a_inv + n_p + symbol) % p
        projective = n_p + 1 + symbol
    if squarefree:
        deltas["projective"] = (projective - (1 - a_inv)) % p
    return PointCountReport(
        p=p,
        poly=coeffs,
        degree=degree,
        A=a_inv,
        N_p=n_p,
        projective_count=projective if squarefree else None,
        squarefree=squarefree,
        deltas=deltas,
    )


def is_supersingular(params: SystemParams, residues: tuple[int, int]) -> bool:
    """True iff A_{p-1}(c) vanishes in F_p.

    Raises:
        DegenerateFiber: If N(c) = 0 in F_p
    """
    reduced = params.reduce_mod_p()
    values = {"z1": residues[0], "z2": residues[1]}
    if not make_N(reduced).evaluate(values):
        raise DegenerateFiber(f"N vanishes at {residues} mod {params.p}")
    return not hasse_data(reduced).A.evaluate(values)


def supersingular_levels(params: SystemParams) -> list[tuple[int, int]]:
    """Points of F_p^2 off N = 0 where A_{p-1} vanishes."""
    found = []
    for residues in iter_level_residues(params.p):
        try:
            if is_supersingular(params, residues):
                found.append(residues)
        except DegenerateFiber:
            continue
    return found


def random_polynomial(
    rng: random.Random, p: int, degree: int, monic: bool = False
) -> list[int]:
    """Ascending coefficients of a random polynomial over F_p with unit leading coefficient."""
    coeffs = [rng.randrange(p) for _ in range(degree)]
    coeffs.append(1 if monic else rng.randrange(1, p))
    return coeffs


def random_squarefree_polynomial(
    rng: random.Random, p: int, degree: int, monic: bool = False, max_attempts: int = 1000
) -> MultiPoly:
    """Random polynomial over F_p with nonzero discriminant."""
    ctx = PAdicContext(p, 1)
    for _ in range(max_attempts):
        f = univariate(random_polynomial(rng, p, degree, monic), ctx)
        if is_squarefree_mod_p(f, p):
            return f
    raise HasseError(f"no squarefree polynomial of degree {degree} found over F_{p}")


def random_system_params(rng: random.Random, p: int, precision: int) -> SystemParams:
    """Random a with distinct residues mod p and random higher digits."""
    ctx = PAdicContext(p, precision)
    residues = rng.sample(range(p), 3)
    values = [r + p * rng.randrange(ctx.modulus // p) for r in residues]
    return SystemParams.from_residues(ctx, values)


def hasse_homogeneity_check(params: SystemParams) -> HasseHomogeneityReport:
    """A_{p-1}(F) is homogeneous of degree (p-1)/2 in z1, z2 and nonzero mod p."""
    data = hasse_data(params)
    degree = (params.p - 1) // 2
    weights = ExponentWeights.uniform(LEVEL_VARIABLES)
    quartic = make_F(params).weighted_degree_check(ExponentWeights({"z1": 2, "z2": 2, "x": 1}), 4)
    return HasseHomogeneityReport(
        p=params.p,
        a=[str(a) for a in params.a],
        expected_degree=degree,
        homogeneous=data.A.weighted_degree_check(weights, degree),
        nonzero_mod_p=not data.A.reduce_mod_p().is_zero(),
        quartic_weighted=quartic,
        invariant=str(data.A),
    )


def point_count_suite(p: int, trials: int, rng: random.Random) -> PointCountSuiteReport:
    """Randomized congruence suite over squarefree cubics (monic) and quartics."""
    cubic_holds = quartic_holds = 0
    failures: list[PointCountReport] = []
    for _ in range(trials):
        report = point_count_congruences(random_squarefree_polynomial(rng, p, 3, monic=True), p)
        if report.holds:
            cubic_holds += 1
        else:
            failures.append(report)
    for _ in range(trials):
        report = point_count_congruences(random_squarefree_polynomial(rng, p, 4), p)
        if report.holds:
            quartic_holds += 1
        else:
            failures.append(report)
    logger.info(
        "Point-count suite finished",
        p=p,
        trials=trials,
        cubic_holds=cubic_holds,
        quartic_holds=quartic_holds,
    )
    return PointCountSuiteReport(
        p=p,
        trials=trials,
        cubic_holds=cubic_holds,
        quartic_holds=quartic_holds,
        failures=failures,
    )


def homogeneity_suite(p: int, trials: int, rng: random.Random, precision: int = 2) -> list[HasseHomogeneityReport]:
    """Homogeneity and nonvanishing of A over random valid parameters."""
    return [
        hasse_homogeneity_check(random_system_params(rng, p, precision))
        for _ in range(trials)
    ]
