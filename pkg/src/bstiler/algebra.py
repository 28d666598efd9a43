"""Exact scalar arithmetic for eigenvalue data.

Expanding eigenvalues of small incidence matrices are algebraic integers.
When the minimal polynomial has degree one or two we keep the value exact:
a :class:`Surd` is ``a + b*sqrt(d)`` with rational a, b and a squarefree
integer d.  Higher-degree eigenvalues fall back to floats (interval checks
are then done at 1e-12 tolerance by the callers).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy


def _squarefree_split(d: int) -> Tuple[int, int]:
    """Return (s, f) with d = s*s*f and f squarefree."""
    s, f = 1, 1
    n = d
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            f *= p
        p += 1
    return s, f * n


class Surd:
    """Exact value a + b*sqrt(d), a and b rational, d squarefree > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        a, b = Fraction(a), Fraction(b)
        if d <= 1:
            raise ValueError("d must be a squarefree integer > 1")
        s, f = _squarefree_split(d)
        if f == 1:
            raise ValueError("d must not be a perfect square")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b * s)
        object.__setattr__(self, "d", f)

    def __setattr__(self, name, value):
        raise AttributeError("Surd is immutable")

    # -- arithmetic (Surd is closed under ring ops within one field) ----

    def _lift(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.d != self.d:
                raise ValueError("mixed quadratic fields")
            return other
        return Surd.__new_raw__(Fraction(other), Fraction(0), self.d)

    @classmethod
    def __new_raw__(cls, a: Fraction, b: Fraction, d: int) -> "Surd":
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "d", d)
        return obj

    def __add__(self, other):
        o = self._lift(other)
        return Surd.__new_raw__(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd.__new_raw__(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return Surd.__new_raw__(
            self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        norm = o.a * o.a - o.b * o.b * o.d
        if norm == 0:
            raise ZeroDivisionError
        inv = Surd.__new_raw__(o.a / norm, -o.b / norm, self.d)
        return self * inv

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (Surd.__new_raw__(Fraction(1), Fraction(0), self.d) / self) ** (-k)
        out = Surd.__new_raw__(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order ----------------------------------------------------------

    def _sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = a * a, b * b * self.d
        if a > 0:  # b < 0
            return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
        return -1 if lhs > rhs else (1 if lhs < rhs else 0)

    def _cmp(self, other) -> int:
        return (self - self._lift(other))._sign()

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (ValueError, TypeError):
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def floor(self) -> int:
        lo = math.floor(float(self)) - 2
        while not (self._cmp(lo + 1) < 0):
            lo += 1
        return lo

    def __repr__(self):
        return f"Surd({self.a} + {self.b}*sqrt({self.d}))"


Exact = Union[Fraction, Surd]


def exact_floor(x: Exact) -> int:
    if isinstance(x, Surd):
        return x.floor()
    return math.floor(x)


def to_float(x) -> float:
    return float(x)


def exact_pow(x: Exact, k: int) -> Exact:
    return x**k


# -- incidence-matrix eigen machinery ---------------------------------


def charpoly(m: Sequence[Sequence[int]]) -> List[Fraction]:
    """Characteristic polynomial coefficients, highest degree first.

    Faddeev-LeVerrier over exact rationals.
    """
    n = len(m)
    A = [[Fraction(x) for x in row] for row in m]
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A @ (M_{k-1} + c_{k-1} I)
        prev = Mk
        Mk = [
            [
                sum(A[i][t] * prev[t][j] for t in range(n)) + coeffs[-1] * A[i][j]
                for j in range(n)
            ]
            for i in range(n)
        ]
        trace = sum(Mk[i][i] for i in range(n))
        coeffs.append(-trace / k)
    return coeffs


def perron_root_exact(m: Sequence[Sequence[int]]) -> Optional[Exact]:
    """Largest real eigenvalue as an exact number, or None if degree > 2.

    The characteristic polynomial is factored over the rationals; the
    factor containing the dominant root is solved exactly when linear or
    quadratic.
    """
    lam_float = perron_root_float(m)
    x = sympy.Symbol("x")
    coeffs = charpoly(m)
    poly = sum(
        sympy.Rational(c.numerator, c.denominator) * x ** (len(coeffs) - 1 - i)
        for i, c in enumerate(coeffs)
    )
    _, factors = sympy.factor_list(sympy.Poly(poly, x))
    for fac, _mult in factors:
        fpoly = sympy.Poly(fac, x)
        roots = sympy.real_roots(fpoly)
        for r in roots:
            if abs(float(r) - lam_float) < 1e-9 * max(1.0, lam_float):
                deg = fpoly.degree()
                if deg == 1:
                    return Fraction(sympy.Rational(r).p, sympy.Rational(r).q)
                if deg == 2:
                    c2, c1, c0 = [Fraction(str(c)) for c in fpoly.all_coeffs()]
                    # root = (-c1 + sqrt(c1^2 - 4 c2 c0)) / (2 c2), pick sign by value
                    disc = c1 * c1 - 4 * c2 * c0
                    s, f = _squarefree_split(disc.numerator * disc.denominator)
                    if f == 1:
                        val = Fraction(
                            -c1 + Fraction(s, disc.denominator), 2 * c2
                        )
                        for cand in (
                            val,
                            Fraction(-c1 - Fraction(s, disc.denominator), 2 * c2),
                        ):
                            if abs(float(cand) - lam_float) < 1e-9:
                                return cand
                        return None
                    scale = Fraction(s, disc.denominator)
                    for sign in (1, -1):
                        cand = Surd(
                            -c1 / (2 * c2), sign * scale / (2 * c2), f
                        )
                        if abs(float(cand) - lam_float) < 1e-9:
                            return cand
                return None
    return None


def perron_root_float(m: Sequence[Sequence[int]]) -> float:
    arr = np.array(m, dtype=float)
    eig = np.linalg.eigvals(arr)
    return float(max(e.real for e in eig if abs(e.imag) < 1e-9))


def power_iteration(
    m: Sequence[Sequence[int]], tol: float = 1e-14, max_iter: int = 100_000
) -> Tuple[float, List[float]]:
    """Dominant eigenpair of a non-negative matrix by power iteration."""
    arr = np.array(m, dtype=float)
    n = arr.shape[0]
    v = np.ones(n) / n
    lam = 0.0
    for _ in range(max_iter):
        w = arr @ v
        lam_new = float(np.max(w))
        if lam_new == 0:
            raise ValueError("matrix is nilpotent along the iteration")
        w = w / lam_new
        if np.max(np.abs(w - v)) < tol and abs(lam_new - lam) < tol * lam_new:
            v = w
            lam = lam_new
            break
        v, lam = w, lam_new
    v = v / np.min(v[v > 0]) if np.any(v > 0) else v
    return lam, [float(x) for x in v]


def solve_eigenvector_exact(
    m: Sequence[Sequence[int]], lam: Exact
) -> Optional[List[Exact]]:
    """Nullspace vector of (m - lam I), normalised to minimum entry 1.

    Gaussian elimination in Q or Q(sqrt(d)); returns None if the nullspace
    is not one-dimensional or not strictly positive.
    """
    n = len(m)

    def lift(x) -> Exact:
        if isinstance(lam, Surd):
            return Surd.__new_raw__(Fraction(x), Fraction(0), lam.d)
        return Fraction(x)

    A = [[lift(m[i][j]) - (lam if i == j else lift(0)) for j in range(n)] for i in range(n)]
    # row echelon
    pivots = []
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if A[r][col] != lift(0):
                piv = r
                break
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = A[row][col]
        A[row] = [x / inv for x in A[row]]
        for r in range(n):
            if r != row and A[r][col] != lift(0):
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    v: List[Exact] = [lift(0)] * n
    v[fc] = lift(1)
    for r, pc in enumerate(pivots):
        v[pc] = -A[r][fc]
    if any(not (x > lift(0)) for x in v):
        v = [-x for x in v]
    if any(not (x > lift(0)) for x in v):
        return None
    mn = v[0]
    for x in v[1:]:
        if x < mn:
            mn = x
    return [x / mn for x in v]
