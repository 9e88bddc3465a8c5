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
"""Functions on X: polynomials in x1, x2, x3 with A(H1,H2), N(H1,H2), x1, x2 inverted.

An element is a numerator over A(H)^eA N(H)^eN x1^e1 x2^e2. Denominators are
tracked as exponent vectors and never expanded unless two elements are
combined. Every denominator factor is nonzero mod p, hence not a zero divisor
in (Z/p^N)[x1, x2, x3], so equality is decided by cross-multiplying over the
least common denominator.
"""

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence, Union

from eulerflow.algebra.padic import ContextMismatch, PAdicContext, PAdicScalar
from eulerflow.algebra.poly import SPACE_VARIABLES, MultiPoly, VariableMismatch
from eulerflow.services.geometry import SystemParams, make_N, pull_back_to_space, space_generators
from eulerflow.services.hasse import hasse_data

Denominator = tuple[int, int, int, int]
NO_DENOMINATOR: Denominator = (0, 0, 0, 0)
FACTOR_NAMES = ("A(H)", "N(H)", "x1", "x2")

Operand = Union["LocalizedElement", MultiPoly, PAdicScalar, int]


class LocalizedRing:
    """The ring O(X) over Z/p^N for fixed system parameters.

    Use :func:`localized_ring` to get a cached instance.
    """

    def __init__(self, params: SystemParams):
        self.params = params
        self.context: PAdicContext = params.context
        x1, x2, _ = space_generators(self.context)
        self.A_H = pull_back_to_space(hasse_data(params).A, params)
        self.N_H = pull_back_to_space(make_N(params), params)
        self.factors = (self.A_H, self.N_H, x1, x2)
        self._powers: list[dict[int, MultiPoly]] = [
            {0: MultiPoly.one(SPACE_VARIABLES, self.context), 1: f} for f in self.factors
        ]
        # shared by CheckPool worker threads
        self._powers_lock = threading.Lock()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalizedRing):
            return NotImplemented
        return self.params == other.params

    def __hash__(self) -> int:
        return hash(self.params)

    def __repr__(self) -> str:
        return f"LocalizedRing({self.params})"

    def factor_power(self, index: int, k: int) -> MultiPoly:
        cache = self._powers[index]
        with self._powers_lock:
            cached = cache.get(k)
        if cached is not None:
            return cached
        value = self.factor_power(index, k // 2) * self.factor_power(index, k - k // 2)
        with self._powers_lock:
            return cache.setdefault(k, value)

    def denominator_poly(self, exponents: Denominator) -> MultiPoly:
        """A(H)^eA N(H)^eN x1^e1 x2^e2 as a polynomial."""
        result = MultiPoly.one(SPACE_VARIABLES, self.context)
        for i, k in enumerate(exponents):
            if k:
                result = result * self.factor_power(i, k)
        return result

    # -- constructors -------------------------------------------------------

    def element(self, numerator: MultiPoly, denominator: Denominator = NO_DENOMINATOR) -> "LocalizedElement":
        return LocalizedElement(numerator, tuple(denominator), self)  # type: ignore[arg-type]

    def from_poly(self, poly: MultiPoly) -> "LocalizedElement":
        if poly.variables != SPACE_VARIABLES:
            poly = poly.embed(SPACE_VARIABLES)
        if poly.context != self.context:
            raise ContextMismatch(f"polynomial over {poly.context} used in ring over {self.context}")
        return self.element(poly)

    def constant(self, value: Union[PAdicScalar, int]) -> "LocalizedElement":
        return self.element(MultiPoly.constant(SPACE_VARIABLES, self.context, value))

    def zero(self) -> "LocalizedElement":
        return self.element(MultiPoly.zero(SPACE_VARIABLES, self.context))

    def one(self) -> "LocalizedElement":
        return self.constant(1)

    def generator(self, name: str) -> "LocalizedElement":
        return self.element(MultiPoly.variable(SPACE_VARIABLES, self.context, name))

    def inverse_of_factor(self, index: int, k: int = 1) -> "LocalizedElement":
        """1 / factor^k, e.g. ``inverse_of_factor(0)`` is A(H1,H2)^-1."""
        exps = [0, 0, 0, 0]
        exps[index] = k
        return self.element(MultiPoly.one(SPACE_VARIABLES, self.context), tuple(exps))  # type: ignore[arg-type]

    # -- composition --------------------------------------------------------

    def compose(self, f: MultiPoly, images: Sequence["LocalizedElement"]) -> "LocalizedElement":
        """f(images[0], images[1], images[2]) for f in x1, x2, x3.

        Works over a single common denominator: with K_i the top power of
        x_i in f, each term c * prod x_i^k_i becomes
        c * prod num_i^k_i * den_i^(K_i - k_i) over prod den_i^K_i.
        """
        if f.variables != SPACE_VARIABLES:
            raise VariableMismatch(f"compose expects a polynomial in {SPACE_VARIABLES}, got {f.variables}")
        if f.context != self.context:
            raise ContextMismatch(f"polynomial over {f.context} composed in ring over {self.context}")
        if len(images) != len(SPACE_VARIABLES):
            raise ValueError(f"expected {len(SPACE_VARIABLES)} images, got {len(images)}")
        for image in images:
            image._check(self)
        tops = [max((e[i] for e in f.terms), default=0) for i in range(3)]
        one = MultiPoly.one(SPACE_VARIABLES, self.context)
        num_powers: list[dict[int, MultiPoly]] = [{0: one, 1: img.numerator} for img in images]
        den_polys = [img.denominator_poly() for img in images]
        den_powers: list[dict[int, MultiPoly]] = [{0: one, 1: d} for d in den_polys]

        def power(cache: dict[int, MultiPoly], k: int) -> MultiPoly:
            if k not in cache:
                cache[k] = power(cache, k // 2) * power(cache, k - k // 2)
            return cache[k]

        total = MultiPoly.zero(SPACE_VARIABLES, self.context)
        for exps, c in f.terms.items():
            term = MultiPoly.constant(SPACE_VARIABLES, self.context, c)
            for i, k in enumerate(exps):
                if k:
                    term = term * power(num_powers[i], k)
                if tops[i] - k:
                    term = term * power(den_powers[i], tops[i] - k)
            total = total + term
        denominator = [0, 0, 0, 0]
        for image, top in zip(images, tops):
            for j in range(4):
                denominator[j] += image.denominator[j] * top
        return self.element(total, tuple(denominator))  # type: ignore[arg-type]

    # -- precision ----------------------------------------------------------

    def with_precision(self, precision: int) -> "LocalizedRing":
        if precision == self.context.N:
            return self
        return localized_ring(self.params.with_precision(precision))

    def reduce_mod_p(self) -> "LocalizedRing":
        return self.with_precision(1)


@lru_cache(maxsize=64)
def localized_ring(params: SystemParams) -> LocalizedRing:
    """Cached :class:`LocalizedRing` per parameter set."""
    return LocalizedRing(params)


@dataclass(frozen=True, eq=False)
class LocalizedElement:
    """numerator / (A(H)^eA N(H)^eN x1^e1 x2^e2)."""
    numerator: MultiPoly
    denominator: Denominator
    ring: LocalizedRing = field(repr=False)

    def __post_init__(self) -> None:
        if self.numerator.variables != SPACE_VARIABLES:
            raise VariableMismatch(f"numerator must be over {SPACE_VARIABLES}, got {self.numerator.variables}")
        if self.numerator.context != self.ring.context:
            raise ContextMismatch(
                f"numerator over {self.numerator.context} in ring over {self.ring.context}"
            )
        if len(self.denominator) != 4 or any(e < 0 for e in self.denominator):
            raise ValueError(f"denominator must be four non-negative exponents, got {self.denominator}")

    @property
    def context(self) -> PAdicContext:
        return self.ring.context

    def _check(self, ring: LocalizedRing) -> None:
        if self.ring is not ring and self.ring != ring:
            raise ContextMismatch(f"elements of {self.ring} and {ring} cannot be combined")

    def _coerce(self, other: Operand) -> "LocalizedElement":
        if isinstance(other, LocalizedElement):
            other._check(self.ring)
            return other
        if isinstance(other, MultiPoly):
            return self.ring.from_poly(other)
        return self.ring.constant(other)

    def denominator_poly(self) -> MultiPoly:
        return self.ring.denominator_poly(self.denominator)

    def rescale(self, target: Sequence[int]) -> MultiPoly:
        """Numerator over the larger denominator ``target``."""
        result = self.numerator
        for i, (have, want) in enumerate(zip(self.denominator, target)):
            if want < have:
                raise ValueError(f"cannot rescale {self.denominator} to {tuple(target)}")
            if want > have:
                result = result * self.ring.factor_power(i, want - have)
        return result

    def _common(self, other: "LocalizedElement") -> tuple[Denominator, MultiPoly, MultiPoly]:
        common = tuple(max(a, b) for a, b in zip(self.denominator, other.denominator))
        return common, self.rescale(common), other.rescale(common)  # type: ignore[return-value]

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: Operand) -> "LocalizedElement":
        other = self._coerce(other)
        common, a, b = self._common(other)
        return self.ring.element(a + b, common)

    __radd__ = __add__

    def __neg__(self) -> "LocalizedElement":
        return self.ring.element(-self.numerator, self.denominator)

    def __sub__(self, other: Operand) -> "LocalizedElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Operand) -> "LocalizedElement":
        return self._coerce(other) - self

    def __mul__(self, other: Operand) -> "LocalizedElement":
        if isinstance(other, (PAdicScalar, int)):
            return self.ring.element(self.numerator * other, self.denominator)
        other = self._coerce(other)
        denominator = tuple(a + b for a, b in zip(self.denominator, other.denominator))
        return self.ring.element(self.numerator * other.numerator, denominator)  # type: ignore[arg-type]

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LocalizedElement":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {k}")
        return self.ring.element(self.numerator ** k, tuple(e * k for e in self.denominator))  # type: ignore[arg-type]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (MultiPoly, int, PAdicScalar)):
            other = self._coerce(other)
        if not isinstance(other, LocalizedElement):
            return NotImplemented
        if self.ring != other.ring:
            return False
        _, a, b = self._common(other)
        return a == b

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    # -- structure ----------------------------------------------------------

    def cancel(self) -> "LocalizedElement":
        """Cancel powers of x1 and x2 dividing every numerator term."""
        terms = self.numerator.terms
        if not terms:
            return self.ring.element(self.numerator)
        eA, eN, e1, e2 = self.denominator
        k1 = min(e1, min(e[0] for e in terms))
        k2 = min(e2, min(e[1] for e in terms))
        if not k1 and not k2:
            return self
        shifted = {(e[0] - k1, e[1] - k2, e[2]): c for e, c in terms.items()}
        return self.ring.element(
            MultiPoly(SPACE_VARIABLES, self.context, shifted), (eA, eN, e1 - k1, e2 - k2)
        )

    def numerator_degree(self) -> int:
        return self.numerator.total_degree()

    def term_count(self) -> int:
        return len(self.numerator)

    # -- precision ----------------------------------------------------------

    def with_precision(self, precision: int) -> "LocalizedElement":
        ring = self.ring.with_precision(precision)
        return ring.element(self.numerator.with_precision(precision), self.denominator)

    def reduce_mod_p(self) -> "LocalizedElement":
        return self.with_precision(1)

    def lift_into(self, ring: LocalizedRing) -> "LocalizedElement":
        """Coefficient-wise lift (residues as representatives) into a finer ring.

        ``ring`` must reduce to this element's ring.
        """
        if ring.context.p != self.context.p or ring.context.N < self.context.N:
            raise ContextMismatch(f"cannot lift from {self.ring} into {ring}")
        if ring.with_precision(self.context.N) != self.ring:
            raise ContextMismatch(f"{ring} does not reduce to {self.ring}")
        return ring.element(self.numerator.lift(ring.context.N), self.denominator)

    def divide_by_p(self) -> "LocalizedElement":
        """Exact division by p, landing in the ring at precision N-1.

        Raises:
            NotDivisible: If the numerator is not divisible by p
            PrecisionExhausted: If N = 1
        """
        quotient = self.numerator.divide_by_p()
        return self.ring.with_precision(self.context.N - 1).element(quotient, self.denominator)

    def __str__(self) -> str:
        factors = [
            name if k == 1 else f"{name}^{k}"
            for name, k in zip(FACTOR_NAMES, self.denominator) if k
        ]
        if not factors:
            return str(self.numerator)
        return f"({self.numerator}) / ({'*'.join(factors)})"

    def __repr__(self) -> str:
        return f"LocalizedElement({self}, {self.context})"


def as_localized(value: Union[LocalizedElement, MultiPoly], ring: Optional[LocalizedRing] = None) -> LocalizedElement:
    """Promote a polynomial in x1, x2, x3 to a localized element."""
    if isinstance(value, LocalizedElement):
        return value
    if ring is None:
        raise ValueError("a ring is needed to promote a polynomial")
    return ring.from_poly(value)
