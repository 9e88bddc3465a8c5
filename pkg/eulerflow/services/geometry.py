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
"""Geometry of the Euler top: quadrics, level sets and their normal form.

This module provides:
- SystemParams: the moments a1, a2, a3 with (a1-a2)(a2-a3)(a3-a1) a unit
- make_H, make_N, make_F, make_Q: the defining polynomials
- LevelSpec / LevelSetRing: the fiber E_c of (H1, H2) over c, with arithmetic
  in the basis {1, x1, x2, x1x2} over polynomials in x3
- cleared_derivative: (a1-a2) x1 x2 d/dx3 on E_c, by implicit differentiation
- canonical_form_identity_check, isogeny_identity_check

On E_c the relations
    (a1-a2) x1^2 = (a2-a3) x3^2 + c1 - a2 c2
    (a1-a2) x2^2 = (a3-a1) x3^2 - c1 + a1 c2
are solved for x1^2 and x2^2 (a1-a2 is a unit), which makes the coordinate
ring free of rank 4 over the polynomials in x3. Reduction is rewriting, not
ideal membership.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from eulerflow.algebra.padic import (
    ContextMismatch,
    PAdicContext,
    PAdicScalar,
    fermat_quotient,
    inv,
    teichmuller,
)
from eulerflow.algebra.poly import (
    LEVEL_VARIABLES,
    QUARTIC_VARIABLES,
    SPACE_VARIABLES,
    ExponentWeights,
    MultiPoly,
)
from eulerflow.logging import StructuredLogger

logger = StructuredLogger(__name__)

X3_ONLY = ("x3",)
QUARTIC_WEIGHTS = ExponentWeights({"z1": 2, "z2": 2, "x": 1})


class GeometryError(Exception):
    """Base exception for geometry errors."""
    pass


class InvalidParameters(GeometryError):
    """Raised when (a1-a2)(a2-a3)(a3-a1) is not a unit."""
    pass


class DegenerateFiber(GeometryError):
    """Raised when a level c has N(c) or A(c) divisible by p."""
    pass


class NotTeichmuller(GeometryError):
    """Raised when a level coordinate is not fixed by x -> x^p."""
    pass


@dataclass(frozen=True)
class SystemParams:
    """Moments of inertia data a1, a2, a3 over a common PAdicContext."""
    context: PAdicContext
    a1: PAdicScalar
    a2: PAdicScalar
    a3: PAdicScalar

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "a3"):
            if getattr(self, name).context != self.context:
                raise InvalidParameters(f"{name} does not live in {self.context}")
        product = (self.a1 - self.a2) * (self.a2 - self.a3) * (self.a3 - self.a1)
        if not product.is_unit():
            raise InvalidParameters(
                f"a_i not distinct mod {self.context.p}: "
                f"({self.a1}, {self.a2}, {self.a3})"
            )

    @classmethod
    def from_residues(
        cls, context: PAdicContext, values: Sequence[int], use_teichmuller: bool = False
    ) -> "SystemParams":
        """Build params from integers, optionally replacing each by its Teichmüller lift."""
        if len(values) != 3:
            raise InvalidParameters(f"expected three coefficients, got {len(values)}")
        if use_teichmuller:
            scalars = [teichmuller(v % context.p, context) for v in values]
        else:
            scalars = [context.scalar(v) for v in values]
        return cls(context, *scalars)

    @property
    def a(self) -> tuple[PAdicScalar, PAdicScalar, PAdicScalar]:
        return (self.a1, self.a2, self.a3)

    @property
    def p(self) -> int:
        return self.context.p

    def with_precision(self, precision: int) -> "SystemParams":
        ctx = self.context.with_precision(precision)
        return SystemParams(ctx, *(a.reduce(precision) for a in self.a))

    def reduce_mod_p(self) -> "SystemParams":
        return self.with_precision(1)

    def replace(self, **changes: PAdicScalar) -> "SystemParams":
        values = {"a1": self.a1, "a2": self.a2, "a3": self.a3, **changes}
        return SystemParams(self.context, values["a1"], values["a2"], values["a3"])

    def __str__(self) -> str:
        return f"a=({self.a1}, {self.a2}, {self.a3}) over {self.context}"


def space_generators(context: PAdicContext) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    return tuple(MultiPoly.variable(SPACE_VARIABLES, context, v) for v in SPACE_VARIABLES)


def make_H(params: SystemParams) -> tuple[MultiPoly, MultiPoly]:
    """H1 = a1 x1^2 + a2 x2^2 + a3 x3^2 and H2 = x1^2 + x2^2 + x3^2."""
    xs = space_generators(params.context)
    squares = [x * x for x in xs]
    h1 = sum((s * a for s, a in zip(squares, params.a)), MultiPoly.zero(SPACE_VARIABLES, params.context))
    h2 = squares[0] + squares[1] + squares[2]
    return h1, h2


def make_N(params: SystemParams) -> MultiPoly:
    """N(z1, z2) = prod_i (z1 - a_i z2)."""
    ctx = params.context
    z1 = MultiPoly.variable(LEVEL_VARIABLES, ctx, "z1")
    z2 = MultiPoly.variable(LEVEL_VARIABLES, ctx, "z2")
    result = MultiPoly.one(LEVEL_VARIABLES, ctx)
    for a in params.a:
        result = result * (z1 - z2 * a)
    return result


def make_F(params: SystemParams) -> MultiPoly:
    """The quartic ((a2-a3)x^2 + z1 - a2 z2)((a3-a1)x^2 - z1 + a1 z2)."""
    ctx = params.context
    z1, z2, x = (MultiPoly.variable(QUARTIC_VARIABLES, ctx, v) for v in QUARTIC_VARIABLES)
    a1, a2, a3 = params.a
    x2 = x * x
    first = x2 * (a2 - a3) + z1 - z2 * a2
    second = x2 * (a3 - a1) - z1 + z2 * a1
    return first * second


def pull_back_to_space(f: MultiPoly, params: SystemParams) -> MultiPoly:
    """Substitute z1 -> H1, z2 -> H2 (and x -> x3 when present)."""
    h1, h2 = make_H(params)
    bindings: dict[str, MultiPoly] = {"z1": h1, "z2": h2}
    if "x" in f.variables:
        bindings["x"] = MultiPoly.variable(SPACE_VARIABLES, params.context, "x3")
    return f.substitute(bindings)


def make_Q(params: SystemParams) -> MultiPoly:
    """Q = x1 x2 N(H1, H2) A_{p-1}(H1, H2), the function inverted on X."""
    from eulerflow.services.hasse import hasse_data

    x1, x2, _ = space_generators(params.context)
    n_h = pull_back_to_space(make_N(params), params)
    a_h = pull_back_to_space(hasse_data(params).A, params)
    return x1 * x2 * n_h * a_h


@dataclass(frozen=True)
class LevelSpec:
    """A level c = (c1, c2) of the map (H1, H2)."""
    c1: PAdicScalar
    c2: PAdicScalar

    def __post_init__(self) -> None:
        if self.c1.context != self.c2.context:
            raise DegenerateFiber("c1 and c2 must share a context")

    @classmethod
    def teichmuller(cls, context: PAdicContext, r1: int, r2: int) -> "LevelSpec":
        return cls(teichmuller(r1 % context.p, context), teichmuller(r2 % context.p, context))

    @property
    def context(self) -> PAdicContext:
        return self.c1.context

    @property
    def residues(self) -> tuple[int, int]:
        p = self.context.p
        return (self.c1.residue % p, self.c2.residue % p)

    def with_precision(self, precision: int) -> "LevelSpec":
        return LevelSpec(self.c1.reduce(precision), self.c2.reduce(precision))

    def reduce_mod_p(self) -> "LevelSpec":
        return self.with_precision(1)

    def __str__(self) -> str:
        return f"c=({self.c1}, {self.c2})"


def validate_level(
    params: SystemParams,
    spec: LevelSpec,
    *,
    require_hasse_unit: bool = True,
    require_teichmuller: bool = True,
) -> None:
    """Check the admissibility conditions on a level.

    Raises:
        DegenerateFiber: If N(c) or (when required) A_{p-1}(c) is not a unit
        NotTeichmuller: If (when required) some c_i has nonzero Fermat quotient
    """
    if spec.context != params.context:
        raise DegenerateFiber(f"{spec} lives in {spec.context}, params in {params.context}")
    values = {"z1": spec.c1, "z2": spec.c2}
    if not make_N(params).evaluate(values).is_unit():
        raise DegenerateFiber(f"N(c) is divisible by {params.p} at {spec}")
    if require_hasse_unit:
        from eulerflow.services.hasse import hasse_data

        if not hasse_data(params).A.evaluate(values).is_unit():
            raise DegenerateFiber(f"A_(p-1)(c) is divisible by {params.p} at {spec}")
    if require_teichmuller and spec.context.N > 1:
        for name, c in (("c1", spec.c1), ("c2", spec.c2)):
            if fermat_quotient(c):
                raise NotTeichmuller(f"{name}={c} is not a Teichmüller representative")


def make_level_spec(params: SystemParams, c1: int, c2: int, **requirements: bool) -> LevelSpec:
    """Build and validate a level from integer coordinates."""
    ctx = params.context
    spec = LevelSpec(ctx.scalar(c1), ctx.scalar(c2))
    validate_level(params, spec, **requirements)
    return spec


Scalarish = Union[PAdicScalar, int]


@dataclass(frozen=True, eq=False)
class LevelSetElement:
    """b0 + b1 x1 + b2 x2 + b12 x1 x2 with each b a polynomial in x3."""
    b0: MultiPoly
    b1: MultiPoly
    b2: MultiPoly
    b12: MultiPoly
    ring: "LevelSetRing" = field(repr=False)

    @property
    def components(self) -> tuple[MultiPoly, MultiPoly, MultiPoly, MultiPoly]:
        return (self.b0, self.b1, self.b2, self.b12)

    def _lift(self, other: Union["LevelSetElement", Scalarish]) -> "LevelSetElement":
        if isinstance(other, LevelSetElement):
            return other
        return self.ring.constant(other)

    def __add__(self, other: Union["LevelSetElement", Scalarish]) -> "LevelSetElement":
        other = self._lift(other)
        return self.ring.element(*(a + b for a, b in zip(self.components, other.components)))

    __radd__ = __add__

    def __neg__(self) -> "LevelSetElement":
        return self.ring.element(*(-a for a in self.components))

    def __sub__(self, other: Union["LevelSetElement", Scalarish]) -> "LevelSetElement":
        return self + (-self._lift(other))

    def __rsub__(self, other: Scalarish) -> "LevelSetElement":
        return self._lift(other) - self

    def __mul__(self, other: Union["LevelSetElement", Scalarish]) -> "LevelSetElement":
        if isinstance(other, LevelSetElement):
            return self.ring.multiply(self, other)
        return self.ring.element(*(a * other for a in self.components))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LevelSetElement":
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LevelSetElement):
            return NotImplemented
        return self.components == other.components

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_constant(self) -> bool:
        return self.b0.is_constant() and all(c.is_zero() for c in self.components[1:])

    def reduce_mod_p(self) -> "LevelSetElement":
        target = self.ring.reduce_mod_p()
        return target.element(*(c.reduce_mod_p() for c in self.components))

    def derivative(self) -> "LevelSetElement":
        return self.ring.cleared_derivative(self)

    def to_document(self) -> dict[str, list[str]]:
        """Coefficient lists (ascending powers of x3) per basis element."""
        doc = {}
        for name, poly in zip(("1", "x1", "x2", "x1x2"), self.components):
            degree = max(poly.degree("x3"), -1)
            doc[name] = [str(poly.coefficient_of("x3", k).constant_term()) for k in range(degree + 1)]
        return doc

    def __str__(self) -> str:
        parts = []
        for label, poly in zip(("", "x1", "x2", "x1*x2"), self.components):
            if poly.is_zero():
                continue
            parts.append(f"({poly})" + (f"*{label}" if label else ""))
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class LevelSetForm:
    """A 1-form on E_c: (coefficient / denominator) dx3."""
    coefficient: LevelSetElement
    denominator: Optional[LevelSetElement] = None

    def cleared_difference(self, other: "LevelSetForm") -> LevelSetElement:
        """Numerator of self - other over the product of both denominators."""
        ring = self.coefficient.ring
        d_self = self.denominator if self.denominator is not None else ring.one()
        d_other = other.denominator if other.denominator is not None else ring.one()
        return self.coefficient * d_other - other.coefficient * d_self


class LevelSetRing:
    """Coordinate ring of E_c in normal form.

    Args:
        params: System parameters
        spec: The level c; N(c) must be a unit
        validate: Set False to skip the N(c) check (used for perturbed charts)
    """

    def __init__(self, params: SystemParams, spec: LevelSpec, validate: bool = True):
        if validate:
            validate_level(params, spec, require_hasse_unit=False, require_teichmuller=False)
        self.params = params
        self.spec = spec
        self.context = params.context
        a1, a2, a3 = params.a
        c1, c2 = spec.c1, spec.c2
        self.d = a1 - a2
        d_inv = inv(self.d)
        x3 = MultiPoly.variable(X3_ONLY, self.context, "x3")
        self._x3 = x3
        self.q1 = (x3 * x3 * (a2 - a3) + (c1 - a2 * c2)) * d_inv
        self.q2 = (x3 * x3 * (a3 - a1) + (a1 * c2 - c1)) * d_inv
        self._q1_powers = [MultiPoly.one(X3_ONLY, self.context), self.q1]
        self._q2_powers = [MultiPoly.one(X3_ONLY, self.context), self.q2]
        self._q1q2 = self.q1 * self.q2

    # -- elements -----------------------------------------------------------

    def _zero_poly(self) -> MultiPoly:
        return MultiPoly.zero(X3_ONLY, self.context)

    def element(
        self,
        b0: Optional[MultiPoly] = None,
        b1: Optional[MultiPoly] = None,
        b2: Optional[MultiPoly] = None,
        b12: Optional[MultiPoly] = None,
    ) -> LevelSetElement:
        z = self._zero_poly()
        return LevelSetElement(
            b0 if b0 is not None else z,
            b1 if b1 is not None else z,
            b2 if b2 is not None else z,
            b12 if b12 is not None else z,
            self,
        )

    def constant(self, value: Scalarish) -> LevelSetElement:
        return self.element(MultiPoly.constant(X3_ONLY, self.context, value))

    def zero(self) -> LevelSetElement:
        return self.element()

    def one(self) -> LevelSetElement:
        return self.constant(1)

    def x1(self) -> LevelSetElement:
        return self.element(b1=MultiPoly.one(X3_ONLY, self.context))

    def x2(self) -> LevelSetElement:
        return self.element(b2=MultiPoly.one(X3_ONLY, self.context))

    def x1x2(self) -> LevelSetElement:
        return self.element(b12=MultiPoly.one(X3_ONLY, self.context))

    def x3(self) -> LevelSetElement:
        return self.element(self._x3)

    def tangent_multiplier(self) -> LevelSetElement:
        """(a1 - a2) x1 x2, the factor clearing dx3-denominators on E_c."""
        return self.x1x2() * self.d

    # -- arithmetic ---------------------------------------------------------

    def multiply(self, u: LevelSetElement, v: LevelSetElement) -> LevelSetElement:
        u0, u1, u2, u3 = u.components
        v0, v1, v2, v3 = v.components
        r0 = u0 * v0 + self.q1 * (u1 * v1) + self.q2 * (u2 * v2) + self._q1q2 * (u3 * v3)
        r1 = u0 * v1 + u1 * v0 + self.q2 * (u2 * v3 + u3 * v2)
        r2 = u0 * v2 + u2 * v0 + self.q1 * (u1 * v3 + u3 * v1)
        r12 = u0 * v3 + u3 * v0 + u1 * v2 + u2 * v1
        return self.element(r0, r1, r2, r12)

    def _q_power(self, powers: list[MultiPoly], k: int) -> MultiPoly:
        while len(powers) <= k:
            powers.append(powers[-1] * powers[1])
        return powers[k]

    def level_reduce(self, f: MultiPoly) -> LevelSetElement:
        """Normal form of a polynomial in x1, x2, x3 on E_c."""
        if f.context != self.context:
            if f.context.p != self.context.p or f.context.N < self.context.N:
                raise ContextMismatch(f"cannot reduce a polynomial over {f.context} on a level over {self.context}")
            f = f.with_precision(self.context.N)
        names = f.variables
        idx = [names.index(v) if v in names else None for v in SPACE_VARIABLES]
        if any(v not in SPACE_VARIABLES for v in names):
            raise ValueError(f"level_reduce expects a polynomial in x1, x2, x3, got {names}")
        grouped: dict[tuple[int, int, int, int], dict[tuple[int, ...], int]] = {}
        for exps, c in f.terms.items():
            i, j, k = (exps[t] if t is not None else 0 for t in idx)
            key = (i // 2, j // 2, i % 2, j % 2)
            bucket = grouped.setdefault(key, {})
            bucket[(k,)] = bucket.get((k,), 0) + c
        sums = [self._zero_poly() for _ in range(4)]
        for (hi, hj, ri, rj), bucket in grouped.items():
            poly = MultiPoly(X3_ONLY, self.context, bucket)
            if hi:
                poly = poly * self._q_power(self._q1_powers, hi)
            if hj:
                poly = poly * self._q_power(self._q2_powers, hj)
            slot = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}[(ri, rj)]
            sums[slot] = sums[slot] + poly
        return self.element(*sums)

    def cleared_derivative(self, e: LevelSetElement) -> LevelSetElement:
        """(a1 - a2) x1 x2 * d(e)/dx3 on E_c.

        Derived from the rewriting rules alone: differentiating x1^2 = q1(x3)
        gives (a1-a2) x1 x2 dx1/dx3 = (a1-a2) x2 q1'(x3) / 2, and likewise for x2.
        The result is a derivation, so it extends to the basis by Leibniz.
        """
        half = inv(self.context.scalar(2))
        t = self.tangent_multiplier()
        dx1 = self.element(b2=self.q1.partial("x3") * (self.d * half))
        dx2 = self.element(b1=self.q2.partial("x3") * (self.d * half))
        b0, b1, b2, b12 = e.components
        along_x3 = t * self.element(
            b0.partial("x3"), b1.partial("x3"), b2.partial("x3"), b12.partial("x3")
        )
        x1, x2 = self.x1(), self.x2()
        basis_part = (
            self.element(b1) * dx1
            + self.element(b2) * dx2
            + self.element(b12) * (dx1 * x2 + x1 * dx2)
        )
        return along_x3 + basis_part

    def cleared_generator_derivatives(self) -> tuple[LevelSetElement, LevelSetElement, LevelSetElement]:
        return (
            self.cleared_derivative(self.x1()),
            self.cleared_derivative(self.x2()),
            self.cleared_derivative(self.x3()),
        )

    def reduce_mod_p(self) -> "LevelSetRing":
        if self.context.N == 1:
            return self
        return LevelSetRing(self.params.reduce_mod_p(), self.spec.reduce_mod_p(), validate=False)

    def with_precision(self, precision: int) -> "LevelSetRing":
        if precision == self.context.N:
            return self
        return LevelSetRing(
            self.params.with_precision(precision), self.spec.with_precision(precision), validate=False
        )

    def canonical_form(self) -> LevelSetForm:
        """omega_c = dx3 / ((a1 - a2) x1 x2)."""
        return LevelSetForm(self.one(), self.tangent_multiplier())


def level_reduce(f: MultiPoly, params: SystemParams, spec: LevelSpec) -> LevelSetElement:
    """Normal form of ``f`` on E_c."""
    return LevelSetRing(params, spec).level_reduce(f)


def quartic_at_level(params: SystemParams, spec: LevelSpec, quartic: Optional[MultiPoly] = None) -> MultiPoly:
    """F(x3, c1, c2) as a polynomial over the space variables."""
    f = quartic if quartic is not None else make_F(params)
    x3 = MultiPoly.variable(SPACE_VARIABLES, params.context, "x3")
    return f.substitute({"z1": spec.c1, "z2": spec.c2, "x": x3})


@dataclass
class IdentityCheck:
    """Outcome of a cleared identity check on E_c.

    Attributes:
        name: Identity name
        holds: True iff every residual is zero
        residuals: Named cleared differences (all zero when the identity holds)
    """
    name: str
    holds: bool
    residuals: dict[str, LevelSetElement] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def from_residuals(cls, name: str, residuals: dict[str, LevelSetElement]) -> "IdentityCheck":
        return cls(name, all(r.is_zero() for r in residuals.values()), residuals)

    def failing(self) -> dict[str, str]:
        return {k: str(v) for k, v in self.residuals.items() if not v.is_zero()}


@dataclass
class CanonicalFormReport(IdentityCheck):
    """Canonical form check with separate exact and mod-p verdicts."""
    holds_mod_p: bool = True


def canonical_form_identity_check(
    params: SystemParams,
    spec: LevelSpec,
    chart_params: Optional[SystemParams] = None,
) -> CanonicalFormReport:
    """Check that the three chart expressions of omega_c agree on E_c.

    omega_c = dx1/((a2-a3)x2x3) = dx2/((a3-a1)x3x1) = dx3/((a1-a2)x1x2).
    With dx_i written as cleared_derivative(x_i)/((a1-a2)x1x2) dx3, the
    cleared identities are cd(x1) = (a2-a3)x2x3, cd(x2) = (a3-a1)x3x1 and the
    cross relation between the first two charts. The tangency relations
    sum a_i x_i cd(x_i) = sum x_i cd(x_i) = 0 are checked alongside.

    Args:
        params: Parameters defining E_c
        spec: The level
        chart_params: Parameters used for the chart denominators; defaults to
            ``params``. Passing perturbed values (for example a3 + p) exercises
            the exact-versus-mod-p distinction.
    """
    ring = LevelSetRing(params, spec)
    chart = chart_params or params
    a1, a2, a3 = chart.a
    x1, x2, x3 = ring.x1(), ring.x2(), ring.x3()
    cd1, cd2, cd3 = ring.cleared_generator_derivatives()
    chart1 = x2 * x3 * (a2 - a3)
    chart2 = x3 * x1 * (a3 - a1)
    residuals = {
        "chart_x1": cd1 - chart1,
        "chart_x2": cd2 - chart2,
        "chart_x3": cd3 - x1 * x2 * (a1 - a2),
        "charts_x1_x2": cd1 * chart2 - cd2 * chart1,
        "tangent_H1": (x1 * cd1) * params.a1 + (x2 * cd2) * params.a2 + (x3 * cd3) * params.a3,
        "tangent_H2": x1 * cd1 + x2 * cd2 + x3 * cd3,
    }
    exact = all(r.is_zero() for r in residuals.values())
    mod_p = all(r.reduce_mod_p().is_zero() for r in residuals.values())
    if exact != mod_p:
        logger.warning(
            "Canonical form identity holds only mod p",
            level=str(spec),
            params=str(params),
        )
    return CanonicalFormReport("canonical_form", exact, residuals, holds_mod_p=mod_p)


def isogeny_identity_check(
    params: SystemParams,
    spec: LevelSpec,
    y_image: Optional[MultiPoly] = None,
    quartic: Optional[MultiPoly] = None,
) -> IdentityCheck:
    """Check the degree-2 map E_c -> {y^2 = F(x, c)}, x -> x3, y -> (a1-a2)x1x2.

    Three cleared identities on E_c:
    - the curve equation: y^2 - F(x3, c) reduces to 0
    - the differential of the curve equation: 2 y dy = F'(x3) dx3
    - the pullback of dx/y equals omega_c

    Args:
        params: System parameters
        spec: The level
        y_image: Alternative image of y (a polynomial in x1, x2, x3)
        quartic: Alternative quartic in (z1, z2, x) replacing F
    """
    ring = LevelSetRing(params, spec)
    x1, x2, _ = space_generators(params.context)
    y_poly = y_image if y_image is not None else x1 * x2 * ring.d
    f_at_c = quartic_at_level(params, spec, quartic)
    y = ring.level_reduce(y_poly)
    f_prime = ring.level_reduce(f_at_c.partial("x3"))
    t = ring.tangent_multiplier()
    pullback = LevelSetForm(ring.one(), y)
    residuals = {
        "curve_equation": ring.level_reduce(y_poly * y_poly - f_at_c),
        "curve_differential": y * ring.cleared_derivative(y) * 2 - f_prime * t,
        "form_pullback": pullback.cleared_difference(ring.canonical_form()),
    }
    return IdentityCheck.from_residuals("isogeny", residuals)


def weighted_homogeneity_of_F(params: SystemParams) -> bool:
    return make_F(params).weighted_degree_check(QUARTIC_WEIGHTS, 4)


def iter_level_residues(p: int) -> Iterable[tuple[int, int]]:
    """Points of F_p^2 in lexicographic order."""
    for r1 in range(p):
        for r2 in range(p):
            yield r1, r2
