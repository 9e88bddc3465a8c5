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
"""The arithmetic Euler flow: a p-derivation on X killing H1 and H2.

A flow is determined by Delta3 in O(X). From it:
- Phi3 = x3^p + p Delta3
- Phi1^2, Phi2^2 solve the linear system
      a1 Phi1^2 + a2 Phi2^2 + a3 Phi3^2 = H1^p
         Phi1^2 +    Phi2^2 +    Phi3^2 = H2^p
  by Cramer's rule (phi is the identity on constants)
- Phi_i = x_i^p (1 + p G_i)^(1/2), the principal square root, optional

The construction takes Delta3 = S(H1, H2, x3) / A(H1, H2), for which the flow
linearizes on every ordinary level set: (1/p) phi* omega_c = A(c)^-1 omega_c
mod p. The checks in this module verify both properties and the
independence of the flow class mod p^2 from the lift of Delta3.
"""

import random
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Sequence, Union

from eulerflow.algebra.padic import PAdicScalar, PrecisionExhausted, inv, principal_sqrt_series
from eulerflow.algebra.poly import SPACE_VARIABLES, MultiPoly
from eulerflow.logging import PhaseTimer, StructuredLogger
from eulerflow.models import ManifestEntry
from eulerflow.services.geometry import (
    IdentityCheck,
    LevelSetElement,
    LevelSetRing,
    LevelSpec,
    SystemParams,
    iter_level_residues,
    make_H,
    make_N,
    pull_back_to_space,
    validate_level,
)
from eulerflow.services.hasse import hasse_data
from eulerflow.services.localized import LocalizedElement, LocalizedRing, localized_ring

logger = StructuredLogger(__name__)


class FlowError(Exception):
    """Base exception for arithmetic flow errors."""
    pass


class SingularSystem(FlowError):
    """Raised when the Cramer determinant a1 - a2 is not a unit."""
    pass


class NotCongruent(FlowError):
    """Raised when Phi_i^2 is not congruent to x_i^(2p) mod p."""
    pass


class RootsUnavailable(FlowError):
    """Raised when phi is applied to a flow without extracted Phi1, Phi2."""
    pass


class NoAdmissibleLevel(FlowError):
    """Raised when no level c in F_p^2 has N(c) A(c) nonzero."""
    pass


class NotPrimeIntegral(FlowError):
    """Raised when a torsor shift is requested by a function not killed by the Euler derivation."""
    pass


class ParamsMismatch(FlowError):
    """Raised when two flows (or a flow and an element) live over different parameters."""
    pass


@dataclass(frozen=True, eq=False)
class GUnit:
    """G1, G2 with Phi_i^2 = x_i^(2p) (1 + p G_i), known at precision N-1."""
    g1: LocalizedElement
    g2: LocalizedElement

    def __iter__(self):
        return iter((self.g1, self.g2))

    def with_precision(self, precision: int) -> "GUnit":
        return GUnit(self.g1.with_precision(precision), self.g2.with_precision(precision))


@dataclass(frozen=True)
class FlowDescriptor:
    """An arithmetic Euler flow on X, immutable once built.

    Attributes:
        params: System parameters at precision N
        delta3: Delta3, determining the flow
        phi3: x3^p + p Delta3
        phi1_sq, phi2_sq: Phi1^2, Phi2^2 from Cramer's rule
        phi1, phi2: Principal roots, present when extracted
        lift_mode: How the parameters were lifted (recorded in flow files)
        construction: Construction log (degrees, denominators, term counts)
        manifest: Verification runs recorded against this flow
    """
    params: SystemParams
    delta3: LocalizedElement
    phi3: LocalizedElement
    phi1_sq: LocalizedElement
    phi2_sq: LocalizedElement
    phi1: Optional[LocalizedElement] = None
    phi2: Optional[LocalizedElement] = None
    lift_mode: str = "exact"
    construction: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)
    manifest: tuple[ManifestEntry, ...] = field(default=(), compare=False, hash=False)

    __hash__ = None  # type: ignore[assignment]

    @property
    def ring(self) -> LocalizedRing:
        return self.delta3.ring

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def precision(self) -> int:
        return self.params.context.N

    @property
    def has_roots(self) -> bool:
        return self.phi1 is not None and self.phi2 is not None

    def replace(self, **changes: Any) -> "FlowDescriptor":
        return replace(self, **changes)

    def with_roots(self) -> "FlowDescriptor":
        """Copy with Phi1, Phi2 extracted (no-op if already present)."""
        if self.has_roots:
            return self
        phi1, phi2 = phi_roots(self.params, extract_g(self.params, self.phi1_sq, self.phi2_sq))
        log = dict(self.construction)
        log["roots"] = _element_summary(phi1, phi2)
        return self.replace(phi1=phi1, phi2=phi2, construction=log)

    def record(self, entry: ManifestEntry) -> "FlowDescriptor":
        return self.replace(manifest=self.manifest + (entry,))


def _element_summary(*elements: LocalizedElement) -> list[dict[str, Any]]:
    return [
        {"degree": e.numerator_degree(), "terms": e.term_count(), "denominator": list(e.denominator)}
        for e in elements
    ]


def _require_params(element: LocalizedElement, params: SystemParams) -> None:
    if element.ring.params != params:
        raise ParamsMismatch(f"element lives over {element.ring.params}, expected {params}")


def x_power(ring: LocalizedRing, name: str, k: int) -> LocalizedElement:
    return ring.from_poly(MultiPoly.monomial(SPACE_VARIABLES, ring.context, {name: k}))


# -- construction -------------------------------------------------------------

def construct_delta3(params: SystemParams) -> LocalizedElement:
    """Delta3 = S(H1, H2, x3) / A(H1, H2).

    The numerator is homogeneous of degree 2p - 1; the denominator exponents
    are (1, 0, 0, 0).
    """
    data = hasse_data(params)
    ring = localized_ring(params)
    numerator = pull_back_to_space(data.S, params)
    return ring.element(numerator, (data.denominator_power, 0, 0, 0))


def phi3_from_delta3(delta3: LocalizedElement) -> LocalizedElement:
    ring = delta3.ring
    return x_power(ring, "x3", ring.context.p) + delta3 * ring.context.p


def cramer_phi_squared(
    params: SystemParams, delta3: LocalizedElement
) -> tuple[LocalizedElement, LocalizedElement]:
    """Solve the linear system for Phi1^2, Phi2^2.

    The coefficient matrix is [[a1, a2], [1, 1]] with determinant a1 - a2;
    the right-hand sides are H1^p - a3 Phi3^2 and H2^p - Phi3^2. Any Delta3
    is admissible.

    Raises:
        SingularSystem: If a1 - a2 is divisible by p
        ParamsMismatch: If delta3 lives over other parameters
    """
    _require_params(delta3, params)
    a1, a2, a3 = params.a
    det = a1 - a2
    if not det.is_unit():
        raise SingularSystem(f"determinant a1 - a2 = {det} is not a unit")
    ring = delta3.ring
    p = params.p
    h1, h2 = (ring.from_poly(h) for h in make_H(params))
    phi3_sq = phi3_from_delta3(delta3) ** 2
    r1 = h1 ** p - phi3_sq * a3
    r2 = h2 ** p - phi3_sq
    det_inv = inv(det)
    phi1_sq = (r1 - r2 * a2) * det_inv
    phi2_sq = (r2 * a1 - r1) * det_inv
    return phi1_sq, phi2_sq


def extract_g_component(phi_sq: LocalizedElement, index: int) -> LocalizedElement:
    """G = (Phi^2 / x^(2p) - 1) / p for x = x1 (index 0) or x2 (index 1).

    Raises:
        NotCongruent: If Phi^2 is not x^(2p) mod p
    """
    ring = phi_sq.ring
    p = ring.context.p
    name = SPACE_VARIABLES[index]
    difference = phi_sq - x_power(ring, name, 2 * p)
    if not difference.reduce_mod_p().is_zero():
        raise NotCongruent(f"Phi_{index + 1}^2 is not congruent to {name}^{2 * p} mod {p}")
    shifted = difference * ring.inverse_of_factor(2 + index, 2 * p)
    return shifted.divide_by_p().cancel()


def extract_g(
    params: SystemParams, phi1_sq: LocalizedElement, phi2_sq: LocalizedElement
) -> GUnit:
    """G1, G2 at precision N-1 from the Cramer squares."""
    _require_params(phi1_sq, params)
    _require_params(phi2_sq, params)
    return GUnit(extract_g_component(phi1_sq, 0), extract_g_component(phi2_sq, 1))


def phi_roots(
    params: SystemParams, g: GUnit, precision: Optional[int] = None
) -> tuple[LocalizedElement, LocalizedElement]:
    """Phi_i = x_i^p (1 + p G_i)^(1/2) with the root congruent to 1 mod p.

    The square root is the power series sqrt(1 + p t) = sum s_k t^k evaluated
    at t = G_i by Horner's rule. s_k is divisible by p^k, so terms with
    k >= precision vanish and G_i is only needed mod p^(precision-1).

    Args:
        params: System parameters (precision at least ``precision``)
        g: The G_i
        precision: Target precision; defaults to one more than that of G
    """
    target = precision if precision is not None else g.g1.context.N + 1
    if target > params.context.N:
        raise PrecisionExhausted(f"roots at precision {target} need parameters at precision {target}")
    ring = localized_ring(params.with_precision(target))
    with PhaseTimer("roots", logger):
        if target == 1:
            return x_power(ring, "x1", params.p), x_power(ring, "x2", params.p)
        if g.g1.context.N < target - 1:
            raise PrecisionExhausted(f"G is known mod p^{g.g1.context.N}, roots at precision {target} need more")
        series = principal_sqrt_series(ring.context, target)
        roots = []
        for index, g_i in enumerate(g):
            lifted = g_i.with_precision(target - 1).lift_into(ring)
            root = ring.constant(series[-1])
            for s_k in reversed(series[:-1]):
                root = root * lifted + ring.constant(s_k)
            roots.append(x_power(ring, SPACE_VARIABLES[index], params.p) * root)
    return roots[0], roots[1]


def build_flow(
    params: SystemParams,
    delta3: Optional[LocalizedElement] = None,
    *,
    extract_roots: bool = False,
    lift_mode: str = "exact",
) -> FlowDescriptor:
    """Build the flow attached to ``delta3`` (the constructed Delta3 by default)."""
    with PhaseTimer("delta3", logger):
        if delta3 is None:
            delta3 = construct_delta3(params)
        _require_params(delta3, params)
    with PhaseTimer("cramer", logger):
        phi3 = phi3_from_delta3(delta3)
        phi1_sq, phi2_sq = cramer_phi_squared(params, delta3)
    construction: dict[str, Any] = {
        "delta3": _element_summary(delta3)[0],
        "phi3": _element_summary(phi3)[0],
        "phi_sq": _element_summary(phi1_sq, phi2_sq),
    }
    flow = FlowDescriptor(
        params=params,
        delta3=delta3,
        phi3=phi3,
        phi1_sq=phi1_sq,
        phi2_sq=phi2_sq,
        lift_mode=lift_mode,
        construction=construction,
    )
    if extract_roots:
        flow = flow.with_roots()
    logger.info(
        "Flow constructed",
        p=params.p,
        precision=params.context.N,
        delta3_degree=delta3.numerator_degree(),
        delta3_terms=delta3.term_count(),
        roots=flow.has_roots,
    )
    return flow


# -- phi and delta -------------------------------------------------------------

def _as_space_poly(f: Union[MultiPoly, PAdicScalar, int], flow: FlowDescriptor) -> MultiPoly:
    ctx = flow.params.context
    if isinstance(f, MultiPoly):
        if f.variables != SPACE_VARIABLES:
            f = f.embed(SPACE_VARIABLES)
        if f.context != ctx:
            f = f.with_precision(ctx.N) if f.context.N > ctx.N else f.lift(ctx.N)
        return f
    return MultiPoly.constant(SPACE_VARIABLES, ctx, f)


def flow_apply_phi(flow: FlowDescriptor, f: Union[MultiPoly, PAdicScalar, int]) -> LocalizedElement:
    """phi(f) = f(Phi1, Phi2, Phi3); constants are fixed.

    Raises:
        RootsUnavailable: If the flow carries no Phi1, Phi2
    """
    if not flow.has_roots:
        raise RootsUnavailable("phi needs Phi1 and Phi2; extract roots first")
    poly = _as_space_poly(f, flow)
    return flow.ring.compose(poly, (flow.phi1, flow.phi2, flow.phi3))  # type: ignore[arg-type]


def flow_delta(flow: FlowDescriptor, f: Union[MultiPoly, PAdicScalar, int]) -> LocalizedElement:
    """delta(f) = (phi(f) - f^p) / p, at precision N-1."""
    poly = _as_space_poly(f, flow)
    image = flow_apply_phi(flow, poly)
    return (image - flow.ring.from_poly(poly ** flow.p)).divide_by_p()


# -- prime integrals ------------------------------------------------------------

def prime_integral_residuals(flow: FlowDescriptor) -> dict[str, LocalizedElement]:
    """sum_j a_ij Phi_j^2 - H_i^p for i = 1, 2; all zero iff delta H1 = delta H2 = 0."""
    params = flow.params
    ring = flow.ring
    a1, a2, a3 = params.a
    h1, h2 = (ring.from_poly(h) for h in make_H(params))
    phi3_sq = flow.phi3 ** 2
    p = params.p
    return {
        "H1": flow.phi1_sq * a1 + flow.phi2_sq * a2 + phi3_sq * a3 - h1 ** p,
        "H2": flow.phi1_sq + flow.phi2_sq + phi3_sq - h2 ** p,
    }


def verify_prime_integrals(flow: FlowDescriptor) -> bool:
    """Exact check of the defining system at precision N (no roots needed)."""
    return all(r.is_zero() for r in prime_integral_residuals(flow).values())


# -- admissible levels ------------------------------------------------------------

def sample_admissible_c(params: SystemParams, count: int) -> list[LevelSpec]:
    """Teichmüller levels c with N(c) A(c) nonzero mod p, scanning F_p^2 lexicographically.

    Raises:
        NoAdmissibleLevel: If no point of F_p^2 qualifies
    """
    reduced = params.reduce_mod_p()
    n_bar = make_N(reduced)
    a_bar = hasse_data(reduced).A
    found: list[LevelSpec] = []
    for r1, r2 in iter_level_residues(params.p):
        values = {"z1": r1, "z2": r2}
        if n_bar.evaluate(values) and a_bar.evaluate(values):
            found.append(LevelSpec.teichmuller(params.context, r1, r2))
            if len(found) >= count:
                break
    if not found:
        raise NoAdmissibleLevel(f"no admissible level sets over F_{params.p} for {params}")
    logger.debug("Sampled admissible levels", p=params.p, requested=count, found=len(found))
    return found


# -- linearization -----------------------------------------------------------------

def _level_quotient(
    ring: LevelSetRing, element: LocalizedElement
) -> tuple[LevelSetElement, LevelSetElement]:
    return ring.level_reduce(element.numerator), ring.level_reduce(element.denominator_poly())


def _derivative_numerator(
    ring: LevelSetRing, n: LevelSetElement, d: LevelSetElement
) -> LevelSetElement:
    """cd(n) d - n cd(d): the cleared derivative of n/d, over d^2."""
    return ring.cleared_derivative(n) * d - n * ring.cleared_derivative(d)


def _space_monomial(params: SystemParams, **exponents: int) -> MultiPoly:
    return MultiPoly.monomial(SPACE_VARIABLES, params.context, exponents)


def verify_linearization(flow: FlowDescriptor, spec: LevelSpec) -> IdentityCheck:
    """(1/p) phi* omega_c = A(c)^-1 omega_c mod p on E_c.

    With Delta3 = (Phi3 - x3^p)/p = n/d restricted to E_c, and t = (a1-a2) x1 x2
    the multiplier clearing omega_c, the cleared identity mod p is

        t x3^(p-1) d^2 + cd(n) d - n cd(d)
            = A(c)^-1 (a1-a2)^(p-1) [x1^(p-1) x2^(p-1)] t d^2

    The left side comes from the stored Phi3 through the cleared derivative.
    The bracket on the right is the normal form of x1^(p-1) x2^(p-1).

    Raises:
        DegenerateFiber: If N(c) or A(c) vanishes mod p
        NotTeichmuller: If c is not a Teichmüller level
    """
    params = flow.params
    validate_level(params, spec)
    p = params.p
    params_p = params.reduce_mod_p()
    spec_p = spec.reduce_mod_p()
    ring = LevelSetRing(params_p, spec_p, validate=False)
    x3p = x_power(flow.ring, "x3", p)
    delta = (flow.phi3 - x3p).divide_by_p().reduce_mod_p()
    n, d = _level_quotient(ring, delta)
    t = ring.tangent_multiplier()
    lhs = t * ring.x3() ** (p - 1) * d * d + _derivative_numerator(ring, n, d)
    a_c = hasse_data(params_p).A.evaluate({"z1": spec_p.c1, "z2": spec_p.c2})
    scale = inv(a_c) * (params_p.a1 - params_p.a2) ** (p - 1)
    bracket = ring.level_reduce(_space_monomial(params_p, x1=p - 1, x2=p - 1))
    rhs = bracket * t * d * d * scale
    return IdentityCheck.from_residuals("linearization", {"cleared_difference": lhs - rhs})


@dataclass
class LinearizationDefect:
    """The mod p^2 residual of the linearization congruence, divided by p.

    Attributes:
        level: Residues of c
        divisible_by_p: The residual vanishes mod p (the congruence holds)
        zero_mod_p2: The quotient is zero, i.e. the congruence holds mod p^2
        degree: Top power of x3 across the quotient's basis components
        terms: Number of nonzero terms of the quotient
        quotient: The reduced quotient, when divisible
    """
    level: tuple[int, int]
    divisible_by_p: bool
    zero_mod_p2: bool
    degree: int
    terms: int
    quotient: Optional[LevelSetElement] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": list(self.level),
            "divisible_by_p": self.divisible_by_p,
            "zero_mod_p2": self.zero_mod_p2,
            "degree": self.degree,
            "terms": self.terms,
        }


def linearization_defect(flow: FlowDescriptor, spec: LevelSpec) -> LinearizationDefect:
    """Defect of (1/p) phi* omega_c - A(c)^-1 omega_c at precision 2.

    Mod p^2, Phi1 Phi2 = x1^p x2^p (1 + p (G1 + G2)/2), so with E the dx3
    coefficient of d(Phi3)/p and G_i = g_i/h_i, the residual
        E x1 x2 - A(c)^-1 x1^p x2^p (1 + p (G1 + G2)/2)
    is cleared by 2 t d^2 h1 h2 and evaluated on E_c. No roots are needed.

    Raises:
        PrecisionExhausted: If the flow has precision below 2
    """
    params = flow.params
    if params.context.N < 2:
        raise PrecisionExhausted("the linearization defect needs precision at least 2")
    validate_level(params, spec)
    p = params.p
    params2 = params.with_precision(2)
    spec2 = spec.with_precision(2)
    ring = LevelSetRing(params2, spec2, validate=False)
    n, d = _level_quotient(ring, flow.delta3.with_precision(2))
    t = ring.tangent_multiplier()
    m = t * ring.x3() ** (p - 1) * d * d + _derivative_numerator(ring, n, d)

    g = extract_g(params, flow.phi1_sq, flow.phi2_sq).with_precision(1)
    target = localized_ring(params2)
    (g1, h1), (g2, h2) = (_level_quotient(ring, g_i.lift_into(target)) for g_i in g)
    a_c = hasse_data(params2).A.evaluate({"z1": spec2.c1, "z2": spec2.c2})
    x1p_x2p = ring.level_reduce(_space_monomial(params2, x1=p, x2=p))
    h = h1 * h2
    residual = m * ring.x1x2() * h * 2 - x1p_x2p * t * d * d * inv(a_c) * (h * 2 + (g1 * h2 + g2 * h1) * p)

    level = spec.residues
    divisible = residual.reduce_mod_p().is_zero()
    if not divisible:
        logger.warning("Linearization residual not divisible by p", level=str(level))
        return LinearizationDefect(level, False, False, -1, 0)
    reduced_ring = ring.reduce_mod_p()
    quotient = reduced_ring.element(*(c.divide_by_p() for c in residual.components))
    degree = max(c.degree("x3") for c in quotient.components)
    terms = sum(len(c) for c in quotient.components)
    return LinearizationDefect(level, True, quotient.is_zero(), degree, terms, quotient)


# -- lift independence and consistency ---------------------------------------------

def random_space_polynomial(
    rng: random.Random, params: SystemParams, max_degree: int = 2, terms: int = 4
) -> MultiPoly:
    """Random polynomial in x1, x2, x3 with residues in [0, p^N)."""
    ctx = params.context
    out: dict[tuple[int, ...], int] = {}
    for _ in range(terms):
        degree = rng.randint(0, max_degree)
        e1 = rng.randint(0, degree)
        e2 = rng.randint(0, degree - e1)
        exps = (e1, e2, degree - e1 - e2)
        out[exps] = out.get(exps, 0) + rng.randrange(1, ctx.modulus)
    return MultiPoly(SPACE_VARIABLES, ctx, out)


def lift_independence_check(
    flow: FlowDescriptor, perturbation: Union[MultiPoly, LocalizedElement]
) -> IdentityCheck:
    """Delta3 and Delta3 + p f give phi(x1), phi(x2), phi(x3) agreeing mod p^2.

    phi(x3) is compared directly; phi(x1), phi(x2) are the principal roots at
    precision 2, which depend on G_i mod p only.

    Raises:
        PrecisionExhausted: If the flow has precision below 2
    """
    params = flow.params
    if params.context.N < 2:
        raise PrecisionExhausted("lift independence needs precision at least 2")
    ring = flow.ring
    f = perturbation if isinstance(perturbation, LocalizedElement) else ring.from_poly(perturbation)
    _require_params(f, params)
    shifted = build_flow(params, flow.delta3 + f * params.p, lift_mode=flow.lift_mode)

    def images(fl: FlowDescriptor) -> tuple[LocalizedElement, ...]:
        g = extract_g(params, fl.phi1_sq, fl.phi2_sq).with_precision(1)
        phi1, phi2 = phi_roots(params, g, precision=2)
        return phi1, phi2, fl.phi3.with_precision(2)

    residuals = {
        f"phi_x{i + 1}": a - b for i, (a, b) in enumerate(zip(images(flow), images(shifted)))
    }
    for name, (a, b) in (("phi1_sq", (flow.phi1_sq, shifted.phi1_sq)), ("phi2_sq", (flow.phi2_sq, shifted.phi2_sq))):
        residuals[name] = (a - b).with_precision(2)
    return IdentityCheck.from_residuals("lift_independence", residuals)


def check_flow_consistency(flow: FlowDescriptor) -> IdentityCheck:
    """Internal consistency of a (possibly reloaded) flow.

    - Phi3 = x3^p + p Delta3 exactly
    - Phi3 = x3^p and Phi_i^2 = x_i^(2p) mod p
    - stored roots square to the stored Phi_i^2

    Raises:
        ParamsMismatch: If the components live over different parameters
    """
    params = flow.params
    parts = [flow.delta3, flow.phi3, flow.phi1_sq, flow.phi2_sq]
    if flow.has_roots:
        parts += [flow.phi1, flow.phi2]  # type: ignore[list-item]
    for part in parts:
        _require_params(part, params)
    ring = flow.ring
    p = params.p
    residuals = {
        "phi3_definition": flow.phi3 - phi3_from_delta3(flow.delta3),
        "phi3_mod_p": (flow.phi3 - x_power(ring, "x3", p)).reduce_mod_p(),
        "phi1_sq_mod_p": (flow.phi1_sq - x_power(ring, "x1", 2 * p)).reduce_mod_p(),
        "phi2_sq_mod_p": (flow.phi2_sq - x_power(ring, "x2", 2 * p)).reduce_mod_p(),
    }
    if flow.has_roots:
        residuals["phi1_root"] = flow.phi1 ** 2 - flow.phi1_sq  # type: ignore[operator]
        residuals["phi2_root"] = flow.phi2 ** 2 - flow.phi2_sq  # type: ignore[operator]
    return IdentityCheck.from_residuals("flow_consistency", residuals)


def perturbation_library(
    flow: FlowDescriptor, rng: random.Random, count: int = 3
) -> list[MultiPoly]:
    """Random perturbations f used for the lift-independence check."""
    return [random_space_polynomial(rng, flow.params) for _ in range(count)]


def tamper(flow: FlowDescriptor, component: str, bump: Optional[MultiPoly] = None) -> FlowDescriptor:
    """Copy of ``flow`` with p^(N-1) x1 (or ``bump``) added to one component numerator."""
    ring = flow.ring
    if bump is None:
        bump = MultiPoly.variable(SPACE_VARIABLES, ring.context, "x1") * flow.p ** (flow.precision - 1)
    element: LocalizedElement = getattr(flow, component)
    changed = ring.element(element.numerator + bump, element.denominator)
    return flow.replace(**{component: changed})


def admissible_or_empty(params: SystemParams, count: int) -> Sequence[LevelSpec]:
    """:func:`sample_admissible_c` returning an empty list instead of raising."""
    try:
        return sample_admissible_c(params, count)
    except NoAdmissibleLevel:
        return []
