"""Exact n-adic rationals, the coordinate ring of the horizontal axis.

A :class:`Dyadic` stores an integer numerator and a non-negative exponent
and represents ``num * base**(-exp)``.  For base 2 these are the classical
dyadic rationals.  All arithmetic is exact; there is no floating point in
this module.
"""

from __future__ import annotations

from fractions import Fraction


class Dyadic:
    """Immutable exact rational of the form ``num * base**(-exp)``.

    Canonical form: either ``exp == 0`` or ``base`` does not divide ``num``.
    Mixed-base arithmetic is rejected.
    """

    __slots__ = ("num", "exp", "base")

    def __init__(self, num: int, exp: int = 0, base: int = 2):
        if base < 2:
            raise ValueError("base must be >= 2")
        if exp < 0:
            num *= base ** (-exp)
            exp = 0
        while exp > 0 and num % base == 0:
            num //= base
            exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)
        object.__setattr__(self, "base", base)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, base: int = 2) -> "Dyadic":
        return cls(0, 0, base)

    @classmethod
    def from_fraction(cls, f: Fraction, base: int = 2) -> "Dyadic":
        """Convert an exact fraction whose denominator is a power of base."""
        den = f.denominator
        exp = 0
        while den % base == 0:
            den //= base
            exp += 1
        if den != 1:
            raise ValueError(f"{f} is not {base}-adic")
        return cls(f.numerator, exp, base)

    # -- queries -------------------------------------------------------

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.base**self.exp)

    def __float__(self) -> float:
        return self.num / self.base**self.exp

    def is_integer(self) -> bool:
        return self.exp == 0

    def floor(self) -> int:
        q, r = divmod(self.num, self.base**self.exp)
        return q

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Dyadic":
        if isinstance(other, Dyadic):
            if other.base != self.base:
                raise ValueError("mixed dyadic bases")
            return other
        if isinstance(other, int):
            return Dyadic(other, 0, self.base)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "Dyadic":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        e = max(self.exp, o.exp)
        b = self.base
        return Dyadic(
            self.num * b ** (e - self.exp) + o.num * b ** (e - o.exp), e, b
        )

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp, self.base)

    def __sub__(self, other) -> "Dyadic":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Dyadic":
        return (-self) + other

    def __mul__(self, other) -> "Dyadic":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Dyadic(self.num * o.num, self.exp + o.exp, self.base)

    __rmul__ = __mul__

    def times_pow(self, k: int) -> "Dyadic":
        """Multiply by base**k (k may be negative)."""
        return Dyadic(self.num, self.exp - k, self.base)

    # -- comparisons ----------------------------------------------------

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        e = max(self.exp, o.exp)
        b = self.base
        lhs = self.num * b ** (e - self.exp)
        rhs = o.num * b ** (e - o.exp)
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other) -> bool:
        try:
            return self._cmp(other) == 0
        except (ValueError, TypeError):
            return NotImplemented

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __repr__(self) -> str:
        if self.exp == 0:
            return f"Dyadic({self.num})"
        return f"Dyadic({self.num}/{self.base}^{self.exp})"
