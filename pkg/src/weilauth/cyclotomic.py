"""Exact arithmetic in Z[zeta_p] for odd prime p.

Values are kept in the power basis {1, zeta, ..., zeta^(p-2)}, which is
a Z-basis of the ring, so representations are unique and equality is
coefficient-wise.  The single reduction rule is
zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)).
"""

from __future__ import annotations

import cmath


class CyclotomicInt:
    """An exact element of Z[zeta_p]."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if p < 3:
            raise ValueError("p must be an odd prime >= 3")
        if len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} coefficients, got {len(coeffs)}")
        self.p = p
        self.coeffs = coeffs

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "CyclotomicInt":
        return cls(p, (0,) * (p - 1))

    @classmethod
    def one(cls, p: int) -> "CyclotomicInt":
        return cls.from_int(p, 1)

    @classmethod
    def from_int(cls, p: int, m: int) -> "CyclotomicInt":
        return cls(p, (m,) + (0,) * (p - 2))

    @classmethod
    def zeta_pow(cls, p: int, e: int) -> "CyclotomicInt":
        """zeta_p^e, reduced into the power basis."""
        e %= p
        if e < p - 1:
            return cls(p, tuple(1 if i == e else 0 for i in range(p - 1)))
        return cls(p, (-1,) * (p - 1))

    @classmethod
    def from_exponent_counts(cls, p: int, counts) -> "CyclotomicInt":
        """sum_e counts[e] * zeta^e for exponent weights of length p."""
        counts = list(counts)
        if len(counts) != p:
            raise ValueError(f"expected {p} exponent weights, got {len(counts)}")
        top = counts[p - 1]
        return cls(p, tuple(int(counts[i]) - int(top) for i in range(p - 1)))

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CyclotomicInt):
            if other.p != self.p:
                raise ValueError(f"mixed cyclotomic orders {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return CyclotomicInt.from_int(self.p, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicInt(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return CyclotomicInt(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(self.p, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.p
        acc = [0] * p
        for i, ai in enumerate(self.coeffs):
            if ai:
                for j, bj in enumerate(other.coeffs):
                    if bj:
                        acc[(i + j) % p] += ai * bj
        return CyclotomicInt.from_exponent_counts(p, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = CyclotomicInt.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    # -- views -----------------------------------------------------------

    def conjugate(self) -> "CyclotomicInt":
        """Complex conjugation zeta -> zeta^(-1)."""
        p = self.p
        acc = [0] * p
        for i, c in enumerate(self.coeffs):
            acc[(p - i) % p] += c
        return CyclotomicInt.from_exponent_counts(p, acc)

    def to_complex(self) -> complex:
        """Floating-point value at zeta = exp(2*pi*i/p); display only."""
        return sum(c * cmath.exp(2j * cmath.pi * i / self.p)
                   for i, c in enumerate(self.coeffs))

    def is_rational_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def as_int(self) -> int:
        if not self.is_rational_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def __repr__(self):
        return f"CyclotomicInt(p={self.p}, coeffs={self.coeffs})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                sym = "z" if i == 1 else f"z^{i}"
                terms.append(("-" if c < 0 else "+") + f"{mag}{sym}"
                             if terms else ("-" if c < 0 else "") + f"{mag}{sym}")
        return " ".join(terms) if terms else "0"
