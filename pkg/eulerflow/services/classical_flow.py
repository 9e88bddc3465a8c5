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
"""The classical Euler flow and the torsor of arithmetic flows mod p.

This module provides:
- ClassicalDerivation / classical_delta: dx1 = (a2-a3) x2 x3 and cyclic,
  extended by Leibniz and the quotient rule
- duality_check, lie_identity_check, is_prime_integral on level sets
- torsor_shift / flow_difference: arithmetic flows mod p^2 differ exactly by
  prime integrals mod p of the classical flow
- integrate_demo: fixed-step RK4 over the reals with a CSV trajectory
"""

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from eulerflow.algebra.poly import SPACE_VARIABLES, MultiPoly
from eulerflow.logging import StructuredLogger
from eulerflow.services.arithmetic_flow import (
    FlowDescriptor,
    NotPrimeIntegral,
    ParamsMismatch,
    build_flow,
    random_space_polynomial,
)
from eulerflow.services.geometry import (
    IdentityCheck,
    LevelSetElement,
    LevelSetRing,
    LevelSpec,
    SystemParams,
    make_H,
    space_generators,
)
from eulerflow.services.localized import LocalizedElement, localized_ring

logger = StructuredLogger(__name__)

CSV_HEADER = "t,x1,x2,x3,H1,H2"

Function = Union[MultiPoly, LocalizedElement]


@dataclass(frozen=True)
class ClassicalDerivation:
    """The Euler vector field, or a variant with replaced generator images.

    Attributes:
        params: Parameters (any precision, including mod p)
        images: Overrides for (delta x1, delta x2, delta x3)
    """
    params: SystemParams
    images: Optional[tuple[MultiPoly, MultiPoly, MultiPoly]] = field(default=None, compare=False)

    @classmethod
    def perturbed(cls, params: SystemParams, generator: int = 0) -> "ClassicalDerivation":
        """Swap a1 and a2 in the rule for one generator."""
        swapped = euler_images(params.replace(a1=params.a2, a2=params.a1))
        images = list(euler_images(params))
        images[generator] = swapped[generator]
        return cls(params, tuple(images))  # type: ignore[arg-type]

    def generator_images(self) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
        return self.images if self.images is not None else euler_images(self.params)

    def with_precision(self, precision: int) -> "ClassicalDerivation":
        if precision == self.params.context.N:
            return self
        images = None
        if self.images is not None:
            images = tuple(img.with_precision(precision) for img in self.images)
        return ClassicalDerivation(self.params.with_precision(precision), images)  # type: ignore[arg-type]

    def reduce_mod_p(self) -> "ClassicalDerivation":
        return self.with_precision(1)


def euler_images(params: SystemParams) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """((a2-a3) x2 x3, (a3-a1) x3 x1, (a1-a2) x1 x2)."""
    x1, x2, x3 = space_generators(params.context)
    a1, a2, a3 = params.a
    return (x2 * x3 * (a2 - a3), x3 * x1 * (a3 - a1), x1 * x2 * (a1 - a2))


def _apply_poly(d: ClassicalDerivation, f: MultiPoly) -> MultiPoly:
    if f.variables != SPACE_VARIABLES:
        f = f.embed(SPACE_VARIABLES)
    result = MultiPoly.zero(SPACE_VARIABLES, f.context)
    for name, image in zip(SPACE_VARIABLES, d.generator_images()):
        result = result + f.partial(name) * image
    return result


def classical_delta(d: ClassicalDerivation, f: Function) -> Function:
    """Apply the derivation to a polynomial or a localized element.

    The derivation is brought to the precision of ``f``. On localized
    elements the quotient rule gives (dn D - n dD) / D^2.
    """
    precision = f.context.N
    if precision > d.params.context.N:
        raise ValueError(f"derivation over {d.params.context} cannot act at precision {precision}")
    d = d.with_precision(precision)
    if isinstance(f, MultiPoly):
        return _apply_poly(d, f)
    denominator = f.denominator_poly()
    numerator = _apply_poly(d, f.numerator) * denominator - f.numerator * _apply_poly(d, denominator)
    return f.ring.element(numerator, tuple(2 * e for e in f.denominator))  # type: ignore[arg-type]


def is_prime_integral(k: Function, params: SystemParams) -> bool:
    """The classical derivation kills k mod p."""
    d = ClassicalDerivation(params).reduce_mod_p()
    reduced = k.reduce_mod_p() if k.context.N > 1 else k
    return classical_delta(d, reduced).is_zero()


# -- level set identities -------------------------------------------------------

def duality_check(
    params: SystemParams, spec: LevelSpec, derivation: Optional[ClassicalDerivation] = None
) -> IdentityCheck:
    """<delta_c, omega_c> = 1 on E_c, chart by chart.

    - pairing in each chart: delta x_i equals the chart denominator of omega_c
    - tangency: delta x_i * t = cd(x_i) * delta x3, where cd is the cleared
      derivative obtained by implicit differentiation

    Raises:
        DegenerateFiber: If N(c) vanishes mod p
    """
    ring = LevelSetRing(params, spec)
    d = derivation or ClassicalDerivation(params)
    dx1, dx2, dx3 = (ring.level_reduce(img) for img in d.generator_images())
    chart1, chart2, chart3 = (ring.level_reduce(img) for img in euler_images(params))
    cd1, cd2, _ = ring.cleared_generator_derivatives()
    t = ring.tangent_multiplier()
    residuals = {
        "pairing_x1": dx1 - chart1,
        "pairing_x2": dx2 - chart2,
        "pairing_x3": dx3 - t,
        "tangent_x1": dx1 * t - cd1 * dx3,
        "tangent_x2": dx2 * t - cd2 * dx3,
    }
    return IdentityCheck.from_residuals("duality", residuals)


def _level_numerator_denominator(
    ring: LevelSetRing, k: Function
) -> tuple[LevelSetElement, LevelSetElement]:
    if isinstance(k, MultiPoly):
        return ring.level_reduce(k), ring.one()
    return ring.level_reduce(k.numerator), ring.level_reduce(k.denominator_poly())


def lie_identity_check(k: Function, spec: LevelSpec, params: SystemParams) -> IdentityCheck:
    """d(k restricted to E_c) = (delta k restricted to E_c) omega_c, over F_p.

    Both sides are compared as dx3 coefficients cleared by t = (a1-a2) x1 x2.
    For k = n/D the left side is cd(n) D - n cd(D) and the right side the
    numerator of the quotient rule, both over D^2.

    Raises:
        DegenerateFiber: If N(c) vanishes mod p
    """
    params_p = params.reduce_mod_p()
    ring = LevelSetRing(params_p, spec.reduce_mod_p())
    reduced = k.reduce_mod_p() if k.context.N > 1 else k
    n, dd = _level_numerator_denominator(ring, reduced)
    lhs = ring.cleared_derivative(n) * dd - n * ring.cleared_derivative(dd)
    image = classical_delta(ClassicalDerivation(params_p), reduced)
    rhs = ring.level_reduce(image if isinstance(image, MultiPoly) else image.numerator)
    return IdentityCheck.from_residuals("lie_identity", {"cleared_difference": lhs - rhs})


def closed_on_level(k: Function, spec: LevelSpec, params: SystemParams) -> bool:
    """d(k restricted to E_c) = 0 mod p."""
    ring = LevelSetRing(params.reduce_mod_p(), spec.reduce_mod_p(), validate=False)
    reduced = k.reduce_mod_p() if k.context.N > 1 else k
    n, dd = _level_numerator_denominator(ring, reduced)
    return (ring.cleared_derivative(n) * dd - n * ring.cleared_derivative(dd)).is_zero()


# -- torsor -------------------------------------------------------------------------

@dataclass
class PrimeIntegralCandidate:
    """A function mod p produced by comparing two arithmetic flows.

    Attributes:
        value: The function mod p, as a localized element
        prime_integral: Whether the classical derivation kills it
        closed_on_levels: Level residues -> whether its restriction is constant
    """
    value: LocalizedElement
    prime_integral: bool
    closed_on_levels: dict[tuple[int, int], bool] = field(default_factory=dict)

    @property
    def closed(self) -> bool:
        return all(self.closed_on_levels.values())


def _as_mod_p_element(k: Function, params: SystemParams) -> LocalizedElement:
    ring_p = localized_ring(params.reduce_mod_p())
    if isinstance(k, LocalizedElement):
        return k.reduce_mod_p() if k.context.N > 1 else k
    poly = k.reduce_mod_p() if k.context.N > 1 else k
    return ring_p.from_poly(poly)


def torsor_shift(flow: FlowDescriptor, k: Function) -> FlowDescriptor:
    """Flow with Delta3 + lift(k), where k is a prime integral mod p.

    The lift takes residues in [0, p) coefficient-wise; the flow class mod p^2
    does not depend on that choice.

    Raises:
        NotPrimeIntegral: If the classical derivation does not kill k mod p
    """
    params = flow.params
    k_bar = _as_mod_p_element(k, params)
    if not is_prime_integral(k_bar, params):
        raise NotPrimeIntegral(f"{k_bar} is not a prime integral mod {params.p}")
    lifted = k_bar.lift_into(flow.ring)
    shifted = build_flow(
        params, flow.delta3 + lifted, extract_roots=flow.has_roots, lift_mode=flow.lift_mode
    )
    logger.debug("Torsor shift applied", shift_terms=k_bar.term_count())
    return shifted


def flow_difference(
    flow_a: FlowDescriptor, flow_b: FlowDescriptor, specs: Iterable[LevelSpec] = ()
) -> PrimeIntegralCandidate:
    """(Delta3_a - Delta3_b) mod p, with its prime-integral and closedness status.

    Raises:
        ParamsMismatch: If the flows live over different parameters
    """
    if flow_a.params != flow_b.params:
        raise ParamsMismatch(f"flows over {flow_a.params} and {flow_b.params}")
    params = flow_a.params
    k_bar = (flow_a.delta3 - flow_b.delta3).reduce_mod_p()
    closed = {spec.residues: closed_on_level(k_bar, spec, params) for spec in specs}
    return PrimeIntegralCandidate(k_bar, is_prime_integral(k_bar, params), closed)


def torsor_library(params: SystemParams, rng: random.Random) -> dict[str, LocalizedElement]:
    """Prime integrals mod p used to shift flows.

    H1, H2, H1 H2, a random p-th power and H1 H2 / A(H1, H2).
    """
    params_p = params.reduce_mod_p()
    ring_p = localized_ring(params_p)
    h1, h2 = (ring_p.from_poly(h) for h in make_H(params_p))
    f = random_space_polynomial(rng, params_p, max_degree=2, terms=3)
    return {
        "H1": h1,
        "H2": h2,
        "H1H2": h1 * h2,
        "f^p": ring_p.from_poly(f ** params.p),
        "H1H2/A": h1 * h2 * ring_p.inverse_of_factor(0),
    }


def random_lie_candidates(
    params: SystemParams, rng: random.Random, trials: int, max_degree: int = 4
) -> list[MultiPoly]:
    """Random K of degree at most ``max_degree`` over F_p."""
    params_p = params.reduce_mod_p()
    return [random_space_polynomial(rng, params_p, max_degree=max_degree, terms=5) for _ in range(trials)]


# -- demo integrator -------------------------------------------------------------------

def euler_rhs(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.array([
        (a[1] - a[2]) * x[1] * x[2],
        (a[2] - a[0]) * x[2] * x[0],
        (a[0] - a[1]) * x[0] * x[1],
    ])


def first_integrals(a: np.ndarray, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    squares = states ** 2
    return squares @ a, squares.sum(axis=1)


@dataclass
class DemoTrajectory:
    """Floating-point trajectory of the Euler top.

    Attributes:
        times: Shape (n,)
        states: Shape (n, 3)
        h1, h2: First integrals along the trajectory
        max_drift: max |H_i(t) - H_i(0)| for i = 1, 2
    """
    times: np.ndarray
    states: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    max_drift: tuple[float, float]

    def table(self) -> np.ndarray:
        """Rows (t, x1, x2, x3, H1, H2)."""
        if len(self.times) == 0:
            return np.empty((0, 6))
        return np.column_stack([self.times, self.states, self.h1, self.h2])

    def to_csv(self, path: Path) -> Path:
        np.savetxt(path, self.table(), delimiter=",", header=CSV_HEADER, comments="", fmt="%.17g")
        return path

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def integrate_demo(
    a: Sequence[float], x0: Sequence[float], dt: float, steps: int
) -> DemoTrajectory:
    """Classical fixed-step fourth-order Runge-Kutta for the Euler top.

    With ``steps == 0`` the trajectory is empty. Negating ``a`` reverses time.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    coeffs = np.asarray(a, dtype=float)
    if steps == 0:
        empty = np.empty(0)
        return DemoTrajectory(empty, np.empty((0, 3)), empty, empty, (0.0, 0.0))
    states = np.empty((steps + 1, 3))
    states[0] = np.asarray(x0, dtype=float)
    x = states[0].copy()
    for n in range(steps):
        k1 = euler_rhs(coeffs, x)
        k2 = euler_rhs(coeffs, x + 0.5 * dt * k1)
        k3 = euler_rhs(coeffs, x + 0.5 * dt * k2)
        k4 = euler_rhs(coeffs, x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        states[n + 1] = x
    times = dt * np.arange(steps + 1)
    h1, h2 = first_integrals(coeffs, states)
    drift = (float(np.max(np.abs(h1 - h1[0]))), float(np.max(np.abs(h2 - h2[0]))))
    logger.debug("Demo integration finished", steps=steps, drift_h1=drift[0], drift_h2=drift[1])
    return DemoTrajectory(times, states, h1, h2, drift)
