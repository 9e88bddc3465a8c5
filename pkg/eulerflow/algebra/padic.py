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
"""Exact arithmetic in Z/p^N (truncated p-adic integers).

This module provides:
- PAdicContext: the (p, N) pair every value is known modulo
- PAdicScalar: an immutable residue class with operator overloading
- inv, teichmuller, fermat_quotient, legendre, sqrt_principal
- principal_sqrt_series: coefficients of sqrt(1 + p*t) mod (p^N, t^L)

Residues are plain Python integers reduced after every operation. Values from
different contexts never mix implicitly; plain ints are coerced into the
context of the scalar they meet.
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache, wraps
from typing import Callable, Union

from sympy import isprime


class PAdicError(Exception):
    """Base exception for p-adic arithmetic errors."""
    pass


class InvalidContext(PAdicError):
    """Raised when p is not an odd prime or the precision is not positive."""
    pass


class NotAUnit(PAdicError):
    """Raised when inverting an element divisible by p."""
    pass


class PrecisionExhausted(PAdicError):
    """Raised when an operation would leave no p-adic digits."""
    pass


class NotPrincipalUnit(PAdicError):
    """Raised when a square root is requested of an element not congruent to 1 mod p."""
    pass


class ContextMismatch(PAdicError):
    """Raised when combining values from different (p, N) contexts."""
    pass


@lru_cache(maxsize=256)
def _check_prime(p: int) -> None:
    if p < 3 or not isprime(p):
        raise InvalidContext(f"p must be an odd prime, got {p}")


@dataclass(frozen=True)
class PAdicContext:
    """The ring Z/p^N.

    Attributes:
        p: Odd prime
        N: Precision exponent; values are known mod p^N
    """
    p: int
    N: int

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.N < 1:
            raise InvalidContext(f"precision must be at least 1, got {self.N}")

    @cached_property
    def modulus(self) -> int:
        return self.p ** self.N

    def scalar(self, value: int) -> "PAdicScalar":
        """Reduce an integer into this context."""
        return PAdicScalar(value % self.modulus, self)

    def zero(self) -> "PAdicScalar":
        return PAdicScalar(0, self)

    def one(self) -> "PAdicScalar":
        return PAdicScalar(1, self)

    def with_precision(self, precision: int) -> "PAdicContext":
        return PAdicContext(self.p, precision)

    def mod_p(self) -> "PAdicContext":
        return PAdicContext(self.p, 1)

    def __str__(self) -> str:
        return f"Z/{self.p}^{self.N}"


Operand = Union["PAdicScalar", int]


def _coerce(func: Callable[["PAdicScalar", "PAdicScalar"], "PAdicScalar"]):
    """Bring the right operand into the left operand's context."""
    @wraps(func)
    def method(self: "PAdicScalar", other: Operand):
        if isinstance(other, int):
            other = self.context.scalar(other)
        elif not isinstance(other, PAdicScalar):
            return NotImplemented
        elif other.context != self.context:
            raise ContextMismatch(
                f"cannot combine values from {self.context} and {other.context}"
            )
        return func(self, other)
    return method


@dataclass(frozen=True)
class PAdicScalar:
    """A residue class in Z/p^N.

    Attributes:
        residue: Representative in [0, p^N)
        context: The ring the value lives in
    """
    residue: int
    context: PAdicContext

    def __post_init__(self) -> None:
        if not 0 <= self.residue < self.context.modulus:
            raise ValueError(
                f"residue {self.residue} outside [0, {self.context.modulus})"
            )

    @property
    def p(self) -> int:
        return self.context.p

    @_coerce
    def __add__(self, other: "PAdicScalar") -> "PAdicScalar":
        return self.context.scalar(self.residue + other.residue)

    __radd__ = __add__

    @_coerce
    def __sub__(self, other: "PAdicScalar") -> "PAdicScalar":
        return self.context.scalar(self.residue - other.residue)

    @_coerce
    def __rsub__(self, other: "PAdicScalar") -> "PAdicScalar":
        return self.context.scalar(other.residue - self.residue)

    @_coerce
    def __mul__(self, other: "PAdicScalar") -> "PAdicScalar":
        return self.context.scalar(self.residue * other.residue)

    __rmul__ = __mul__

    @_coerce
    def __truediv__(self, other: "PAdicScalar") -> "PAdicScalar":
        return self * inv(other)

    def __neg__(self) -> "PAdicScalar":
        return self.context.scalar(-self.residue)

    def __pow__(self, exponent: int) -> "PAdicScalar":
        if not isinstance(exponent, int):
            raise TypeError(f"exponent must be an integer, got {type(exponent).__name__}")
        if exponent < 0:
            return inv(self) ** (-exponent)
        return PAdicScalar(pow(self.residue, exponent, self.context.modulus), self.context)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.residue == other % self.context.modulus
        if not isinstance(other, PAdicScalar):
            return NotImplemented
        return self.residue == other.residue and self.context == other.context

    def __int__(self) -> int:
        return self.residue

    def __bool__(self) -> bool:
        return self.residue != 0

    def __str__(self) -> str:
        return str(self.residue)

    def is_unit(self) -> bool:
        return self.residue % self.context.p != 0

    def valuation(self) -> int:
        """p-adic valuation, capped at N for zero."""
        if self.residue == 0:
            return self.context.N
        v, r = 0, self.residue
        while r % self.context.p == 0:
            r //= self.context.p
            v += 1
        return v

    def signed(self) -> int:
        """Representative in (-p^N/2, p^N/2]."""
        m = self.context.modulus
        return self.residue - m if self.residue > m // 2 else self.residue

    def reduce(self, precision: int) -> "PAdicScalar":
        """Forget digits beyond ``precision``."""
        if precision > self.context.N:
            raise PrecisionExhausted(
                f"cannot raise precision from {self.context.N} to {precision} by reduction"
            )
        return self.context.with_precision(precision).scalar(self.residue)

    def lift(self, precision: int) -> "PAdicScalar":
        """Lift to a finer context using the residue in [0, p^N) as representative."""
        return self.context.with_precision(precision).scalar(self.residue)


def inv(a: PAdicScalar) -> PAdicScalar:
    """Multiplicative inverse of a unit.

    Raises:
        NotAUnit: If p divides a
    """
    if not a.is_unit():
        raise NotAUnit(f"{a} is divisible by {a.p} in {a.context}")
    return PAdicScalar(pow(a.residue, -1, a.context.modulus), a.context)


def teichmuller(r: int, context: PAdicContext) -> PAdicScalar:
    """Teichmüller representative of the residue ``r`` mod p.

    Iterates x -> x^p starting from r; each step gains one p-adic digit, so N
    iterations reach the fixed point.
    """
    if not 0 <= r < context.p:
        raise ValueError(f"residue must lie in [0, {context.p}), got {r}")
    x = context.scalar(r)
    for _ in range(context.N):
        nxt = x ** context.p
        if nxt == x:
            break
        x = nxt
    return x


def fermat_quotient(a: PAdicScalar) -> PAdicScalar:
    """The p-derivation of Z_p: (a - a^p)/p, known mod p^(N-1).

    Raises:
        PrecisionExhausted: If N = 1
    """
    ctx = a.context
    if ctx.N == 1:
        raise PrecisionExhausted("fermat quotient needs precision at least 2")
    diff = (a.residue - pow(a.residue, ctx.p, ctx.modulus)) % ctx.modulus
    return ctx.with_precision(ctx.N - 1).scalar(diff // ctx.p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    _check_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _newton_steps(precision: int) -> int:
    return max(1, (precision - 1).bit_length()) + 1


def sqrt_principal(u: PAdicScalar) -> PAdicScalar:
    """The square root of u congruent to 1 mod p.

    Newton iteration on the inverse square root z <- z(3 - u z^2)/2 from z = 1,
    then root = u*z.

    Raises:
        NotPrincipalUnit: If u is not 1 mod p
    """
    ctx = u.context
    if u.residue % ctx.p != 1:
        raise NotPrincipalUnit(f"{u} is not congruent to 1 mod {ctx.p}")
    half = inv(ctx.scalar(2))
    z = ctx.one()
    for _ in range(_newton_steps(ctx.N)):
        z = z * (3 - u * z * z) * half
    return u * z


def _series_mul(f: list[int], g: list[int], length: int, modulus: int) -> list[int]:
    out = [0] * length
    for i, fi in enumerate(f):
        if fi == 0:
            continue
        for j in range(min(len(g), length - i)):
            out[i + j] = (out[i + j] + fi * g[j]) % modulus
    return out


def principal_sqrt_series(context: PAdicContext, length: int) -> list[PAdicScalar]:
    """Coefficients s_0..s_{length-1} of sqrt(1 + p*t) in (Z/p^N)[t]/(t^length).

    Same Newton inverse-root scheme as :func:`sqrt_principal`, run on truncated
    power series. The root is the one congruent to 1 mod p.
    """
    if length < 1:
        raise ValueError("length must be positive")
    m = context.modulus
    half = pow(2, -1, m)
    u = [1, context.p % m] + [0] * (length - 2) if length > 1 else [1]
    z = [1] + [0] * (length - 1)
    for _ in range(_newton_steps(context.N)):
        uz2 = _series_mul(u, _series_mul(z, z, length, m), length, m)
        three_minus = [(-c) % m for c in uz2]
        three_minus[0] = (three_minus[0] + 3) % m
        z = [(c * half) % m for c in _series_mul(z, three_minus, length, m)]
    root = _series_mul(u, z, length, m)
    return [context.scalar(c) for c in root]
