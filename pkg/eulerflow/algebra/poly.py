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
"""Sparse multivariate polynomials over Z/p^N.

A MultiPoly is a map from exponent vectors to nonzero residues, tagged with an
ordered variable list and a PAdicContext. Values are immutable; every
operation returns a new polynomial in canonical form (no zero coefficients),
so structural equality is polynomial equality.

Division is only by unit constants. Quotient-ring work lives in the geometry
service, which rewrites x1^2 and x2^2 instead of dividing.
"""

from dataclasses import dataclass
from operator import add
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from eulerflow.algebra.padic import (
    ContextMismatch,
    PAdicContext,
    PAdicScalar,
    PrecisionExhausted,
    inv,
)

ALLOWED_VARIABLES = ("x1", "x2", "x3", "z1", "z2", "x")
SPACE_VARIABLES = ("x1", "x2", "x3")
LEVEL_VARIABLES = ("z1", "z2")
QUARTIC_VARIABLES = ("z1", "z2", "x")

Monomial = tuple[int, ...]
Coefficient = Union[PAdicScalar, int]


class PolynomialError(Exception):
    """Base exception for polynomial errors."""
    pass


class UnboundVariable(PolynomialError):
    """Raised when a substitution leaves a variable of the polynomial unbound."""
    pass


class VariableMismatch(PolynomialError):
    """Raised when polynomials over different variable lists are combined."""
    pass


class NotDivisible(PolynomialError):
    """Raised when dividing by p a polynomial with a coefficient prime to p."""
    pass


@dataclass(frozen=True)
class ExponentWeights:
    """Positive integer weight per variable."""
    weights: Mapping[str, int]

    def __post_init__(self) -> None:
        for name, weight in self.weights.items():
            if weight < 1:
                raise ValueError(f"weight of {name} must be at least 1, got {weight}")

    @classmethod
    def uniform(cls, variables: Iterable[str]) -> "ExponentWeights":
        return cls({v: 1 for v in variables})

    def __getitem__(self, name: str) -> int:
        try:
            return self.weights[name]
        except KeyError:
            raise VariableMismatch(f"no weight declared for variable {name}") from None


def _validate_variables(variables: Sequence[str]) -> tuple[str, ...]:
    variables = tuple(variables)
    unknown = [v for v in variables if v not in ALLOWED_VARIABLES]
    if unknown:
        raise VariableMismatch(f"unknown variables {unknown}; allowed: {ALLOWED_VARIABLES}")
    if len(set(variables)) != len(variables):
        raise VariableMismatch(f"duplicate variables in {variables}")
    return variables


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(add, a, b))


class MultiPoly:
    """Sparse polynomial with coefficients in Z/p^N.

    Coefficients are stored as residues in [1, p^N); ``coefficients`` exposes
    them as PAdicScalar values.
    """

    __slots__ = ("variables", "context", "_terms", "_hash")

    def __init__(
        self,
        variables: Sequence[str],
        context: PAdicContext,
        terms: Optional[Mapping[Monomial, int]] = None,
    ):
        self.variables = _validate_variables(variables)
        self.context = context
        m = context.modulus
        n = len(self.variables)
        clean: dict[Monomial, int] = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != n:
                raise VariableMismatch(
                    f"exponent vector {exps} does not match variables {self.variables}"
                )
            c = int(coeff) % m
            if c:
                clean[tuple(exps)] = c
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _raw(
        cls, variables: tuple[str, ...], context: PAdicContext, terms: dict[Monomial, int]
    ) -> "MultiPoly":
        # terms already reduced, nonzero and shaped
        poly = cls.__new__(cls)
        poly.variables = variables
        poly.context = context
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def _reduced(
        cls, variables: tuple[str, ...], context: PAdicContext, terms: dict[Monomial, int]
    ) -> "MultiPoly":
        m = context.modulus
        clean = {}
        for e, c in terms.items():
            c %= m
            if c:
                clean[e] = c
        return cls._raw(variables, context, clean)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str], context: PAdicContext) -> "MultiPoly":
        return cls(variables, context)

    @classmethod
    def constant(
        cls, variables: Sequence[str], context: PAdicContext, value: Coefficient
    ) -> "MultiPoly":
        variables = _validate_variables(variables)
        return cls(variables, context, {(0,) * len(variables): _residue(value, context)})

    @classmethod
    def one(cls, variables: Sequence[str], context: PAdicContext) -> "MultiPoly":
        return cls.constant(variables, context, 1)

    @classmethod
    def variable(cls, variables: Sequence[str], context: PAdicContext, name: str) -> "MultiPoly":
        variables = _validate_variables(variables)
        if name not in variables:
            raise VariableMismatch(f"{name} is not one of {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, context, {exps: 1})

    @classmethod
    def monomial(
        cls,
        variables: Sequence[str],
        context: PAdicContext,
        exponents: Mapping[str, int],
        coefficient: Coefficient = 1,
    ) -> "MultiPoly":
        variables = _validate_variables(variables)
        for name in exponents:
            if name not in variables:
                raise VariableMismatch(f"{name} is not one of {variables}")
        exps = tuple(exponents.get(v, 0) for v in variables)
        return cls(variables, context, {exps: _residue(coefficient, context)})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, int]:
        """Read-only view of exponent vector -> residue."""
        return MappingProxyType(self._terms)

    def coefficients(self) -> Iterator[tuple[Monomial, PAdicScalar]]:
        for exps, c in self._terms.items():
            yield exps, PAdicScalar(c, self.context)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        zero = (0,) * len(self.variables)
        return all(e == zero for e in self._terms)

    def constant_term(self) -> PAdicScalar:
        return PAdicScalar(self._terms.get((0,) * len(self.variables), 0), self.context)

    def degree(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = self._index(name)
        return max((e[i] for e in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise VariableMismatch(f"{name} is not one of {self.variables}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.context == other.context
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, self.context, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in lexicographic order of exponent vectors."""
        return sorted(self._terms.items())

    def __repr__(self) -> str:
        return f"MultiPoly({self}, {self.context})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in sorted(self._terms.items(), reverse=True):
            signed = c - self.context.modulus if c > self.context.modulus // 2 else c
            factors = [
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            ]
            if not factors:
                body = str(abs(signed))
            elif abs(signed) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(signed))] + factors)
            parts.append(("- " if signed < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if other.context != self.context:
            raise ContextMismatch(f"cannot combine polynomials over {self.context} and {other.context}")
        if other.variables != self.variables:
            raise VariableMismatch(
                f"cannot combine polynomials over {self.variables} and {other.variables}"
            )

    def _as_poly(self, other: Union["MultiPoly", Coefficient]) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.variables, self.context, other)

    def __add__(self, other: Union["MultiPoly", Coefficient]) -> "MultiPoly":
        other = self._as_poly(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly._reduced(self.variables, self.context, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        m = self.context.modulus
        return MultiPoly._raw(self.variables, self.context, {e: m - c for e, c in self._terms.items()})

    def __sub__(self, other: Union["MultiPoly", Coefficient]) -> "MultiPoly":
        return self + (-self._as_poly(other))

    def __rsub__(self, other: Coefficient) -> "MultiPoly":
        return self._as_poly(other) - self

    def scale(self, factor: Coefficient) -> "MultiPoly":
        f = _residue(factor, self.context)
        if f == 0:
            return MultiPoly.zero(self.variables, self.context)
        return MultiPoly._reduced(
            self.variables, self.context, {e: c * f for e, c in self._terms.items()}
        )

    def __mul__(self, other: Union["MultiPoly", Coefficient]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        if len(other._terms) == 1:
            (eb, cb), = other._terms.items()
            return MultiPoly._reduced(
                self.variables,
                self.context,
                {_mono_mul(e, eb): c * cb for e, c in self._terms.items()},
            )
        out: dict[Monomial, int] = {}
        get = out.get
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = _mono_mul(ea, eb)
                out[e] = get(e, 0) + ca * cb
        return MultiPoly._reduced(self.variables, self.context, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {k}")
        result = MultiPoly.one(self.variables, self.context)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- calculus and structure ---------------------------------------------

    def partial(self, name: str) -> "MultiPoly":
        """Formal partial derivative."""
        i = self._index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                shifted = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[shifted] = c * e[i]
        return MultiPoly._reduced(self.variables, self.context, out)

    def coefficient_of(self, name: str, k: int) -> "MultiPoly":
        """Coefficient of name^k, as a polynomial in the remaining variables."""
        i = self._index(name)
        rest = self.variables[:i] + self.variables[i + 1:]
        out = {e[:i] + e[i + 1:]: c for e, c in self._terms.items() if e[i] == k}
        return MultiPoly._raw(rest, self.context, out)

    def weighted_degree_check(self, weights: ExponentWeights, degree: int) -> bool:
        """True iff every term has weighted degree exactly ``degree``."""
        w = [weights[v] for v in self.variables] if self._terms else []
        return all(sum(a * b for a, b in zip(e, w)) == degree for e in self._terms)

    def is_homogeneous(self, degree: int) -> bool:
        return self.weighted_degree_check(ExponentWeights.uniform(self.variables), degree)

    def substitute(
        self,
        bindings: Mapping[str, Union["MultiPoly", Coefficient]],
        variables: Optional[Sequence[str]] = None,
    ) -> "MultiPoly":
        """Compose: replace every variable by its binding.

        Bindings are polynomials over one shared target variable list, or
        scalars. ``variables`` names the target list when no binding is a
        polynomial.

        Raises:
            UnboundVariable: If a variable of this polynomial has no binding
        """
        missing = [v for v in self.variables if v not in bindings]
        if missing:
            raise UnboundVariable(f"no binding for {missing}")
        polys = [b for b in bindings.values() if isinstance(b, MultiPoly)]
        target = tuple(variables) if variables is not None else (
            polys[0].variables if polys else ()
        )
        images = []
        for v in self.variables:
            b = bindings[v]
            if isinstance(b, MultiPoly):
                if b.context != self.context:
                    raise ContextMismatch(f"binding for {v} lives in {b.context}, not {self.context}")
                if b.variables != target:
                    raise VariableMismatch(f"binding for {v} is over {b.variables}, expected {target}")
                images.append(b)
            else:
                images.append(MultiPoly.constant(target, self.context, b))
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.one(target, self.context), 1: img} for img in images]

        def power(i: int, k: int) -> MultiPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k // 2) * power(i, k - k // 2)
            return cache[k]

        result: dict[Monomial, int] = {}
        for exps, c in self._terms.items():
            term = MultiPoly.constant(target, self.context, c)
            for i, k in enumerate(exps):
                if k:
                    term = term * power(i, k)
            for e, tc in term._terms.items():
                result[e] = result.get(e, 0) + tc
        return MultiPoly._reduced(target, self.context, result)

    def evaluate(self, values: Mapping[str, Coefficient]) -> PAdicScalar:
        """Evaluate at scalar values for every variable."""
        return self.substitute(values, variables=()).constant_term()

    def embed(self, variables: Sequence[str]) -> "MultiPoly":
        """View this polynomial inside a larger variable list."""
        variables = _validate_variables(variables)
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise VariableMismatch(f"{missing} not present in {variables}")
        positions = [self.variables.index(v) if v in self.variables else None for v in variables]
        out = {
            tuple(e[i] if i is not None else 0 for i in positions): c
            for e, c in self._terms.items()
        }
        return MultiPoly._raw(variables, self.context, out)

    # -- precision ----------------------------------------------------------

    def with_precision(self, precision: int) -> "MultiPoly":
        """Reduce coefficients to a coarser precision."""
        if precision > self.context.N:
            raise PrecisionExhausted(
                f"cannot raise precision from {self.context.N} to {precision} by reduction"
            )
        return MultiPoly._reduced(
            self.variables, self.context.with_precision(precision), dict(self._terms)
        )

    def reduce_mod_p(self) -> "MultiPoly":
        return self.with_precision(1)

    def lift(self, precision: int) -> "MultiPoly":
        """Coefficient-wise lift using residues in [0, p^N) as representatives."""
        return MultiPoly._raw(
            self.variables, self.context.with_precision(precision), dict(self._terms)
        )

    def divide_by_p(self) -> "MultiPoly":
        """Exact division by p, landing at precision N-1.

        Raises:
            NotDivisible: If some coefficient is prime to p
            PrecisionExhausted: If N = 1
        """
        ctx = self.context
        if ctx.N == 1:
            raise PrecisionExhausted("dividing by p needs precision at least 2")
        p = ctx.p
        out = {}
        for e, c in self._terms.items():
            if c % p:
                raise NotDivisible(f"coefficient {c} of {e} is not divisible by {p}")
            out[e] = c // p
        return MultiPoly._reduced(self.variables, ctx.with_precision(ctx.N - 1), out)

    def divide_by_unit(self, unit: Coefficient) -> "MultiPoly":
        return self.scale(inv(PAdicScalar(_residue(unit, self.context), self.context)))


def _residue(value: Coefficient, context: PAdicContext) -> int:
    if isinstance(value, PAdicScalar):
        if value.context != context:
            raise ContextMismatch(f"scalar from {value.context} used in {context}")
        return value.residue
    return int(value) % context.modulus


def polynomial_ring(
    variables: Sequence[str], context: PAdicContext
) -> tuple[MultiPoly, ...]:
    """Generators of the polynomial ring over ``variables``."""
    return tuple(MultiPoly.variable(variables, context, v) for v in variables)
