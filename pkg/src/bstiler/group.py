"""Exact arithmetic in the solvable Baumslag-Solitar group BS(1,n).

Elements are kept in the normal form t^i a^j t^-k with

* i = 0, or
* k = 0 and i > 0, or
* i > 0, k > 0 and n does not divide j,

which is unique.  The isomorphism ``phi`` onto Z[1/n] x| Z sends
t^i a^j t^-k to (j*n^-i, k-i); the first coordinate is an exact
:class:`~bstiler.dyadic.Dyadic`.

The plane geometry attached to an element g is its box: the half-open
rectangle anchored at phi(g) = (x, m), of width n^m and height 1,
covering [x, x + n^m) x (m-1, m].  Boxes of the elements of one sheet
partition the plane; one level down, each box splits into n children
reached by t, ta, ..., t a^(n-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Set, Tuple

from .dyadic import Dyadic

Word = Sequence[str]

_TOKEN_ALIASES = {
    "a": "a",
    "t": "t",
    "A": "A",
    "T": "T",
    "a^-1": "A",
    "t^-1": "T",
    "a-": "A",
    "t-": "T",
}


def parse_word(text: str) -> List[str]:
    """Split a word like "a t t a^-1" into generator tokens."""
    out = []
    for tok in text.replace(",", " ").split():
        if tok not in _TOKEN_ALIASES:
            raise ValueError(f"unknown generator token {tok!r}")
        out.append(_TOKEN_ALIASES[tok])
    return out


@dataclass(frozen=True)
class GroupElement:
    """Normal-form triple t^i a^j t^-k over base n."""

    i: int
    j: int
    k: int
    n: int = 2

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("base must be >= 2")
        if self.i < 0 or self.k < 0:
            raise ValueError("exponents i, k must be non-negative")
        if self.i > 0 and self.k > 0 and self.j % self.n == 0:
            raise ValueError("not in normal form: n divides j with i,k > 0")
        if self.i > 0 and self.k > 0 and self.j == 0:
            raise ValueError("not in normal form")

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, n: int = 2) -> "GroupElement":
        return cls(0, 0, 0, n)

    @classmethod
    def from_triple(cls, i: int, j: int, k: int, n: int = 2) -> "GroupElement":
        """Normalise an arbitrary (not necessarily reduced) triple."""
        while i > 0 and k > 0 and j % n == 0:
            i -= 1
            k -= 1
            j //= n
        return cls(i, j, k, n)

    # -- word interface ---------------------------------------------------

    def append(self, token: str) -> "GroupElement":
        """Right-multiply by one generator."""
        i, j, k, n = self.i, self.j, self.k, self.n
        if token == "a":
            return GroupElement.from_triple(i, j + n**k, k, n)
        if token == "A":
            return GroupElement.from_triple(i, j - n**k, k, n)
        if token == "t":
            if k > 0:
                return GroupElement.from_triple(i, j, k - 1, n)
            return GroupElement.from_triple(i + 1, j * n, 0, n)
        if token == "T":
            return GroupElement.from_triple(i, j, k + 1, n)
        raise ValueError(f"unknown generator token {token!r}")

    def to_word(self) -> List[str]:
        """Canonical word t^i a^j t^-k as generator tokens."""
        out = ["t"] * self.i
        out += (["a"] if self.j >= 0 else ["A"]) * abs(self.j)
        out += ["T"] * self.k
        return out

    # -- group operations ---------------------------------------------------

    def mul(self, other: "GroupElement") -> "GroupElement":
        if other.n != self.n:
            raise ValueError("mixed group bases")
        n = self.n
        # self * t^i' a^j' t^-k'
        g = self
        if other.i:
            i, j, k = g.i, g.j, g.k
            if k >= other.i:
                k -= other.i
            else:
                j *= n ** (other.i - k)
                i += other.i - k
                k = 0
            g = GroupElement.from_triple(i, j, k, n)
        if other.j:
            g = GroupElement.from_triple(g.i, g.j + other.j * n**g.k, g.k, n)
        if other.k:
            g = GroupElement.from_triple(g.i, g.j, g.k + other.k, n)
        return g

    def inv(self) -> "GroupElement":
        # (t^i a^j t^-k)^-1 = t^k a^-j t^-i
        return GroupElement.from_triple(self.k, -self.j, self.i, self.n)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.mul(other)

    # -- the additive picture --------------------------------------------

    @property
    def level(self) -> int:
        """Second phi coordinate k - i; boxes at level m have width n^m."""
        return self.k - self.i

    def phi(self) -> Tuple[Dyadic, int]:
        """Image (j*n^-i, k-i) under the isomorphism onto Z[1/n] x| Z."""
        return Dyadic(self.j, self.i, self.n), self.k - self.i

    @property
    def anchor(self) -> Dyadic:
        return Dyadic(self.j, self.i, self.n)

    # -- serialisation ------------------------------------------------------

    def __str__(self) -> str:
        return f"t^{self.i} a^{self.j} t^{-self.k}"

    def to_json(self) -> Dict[str, int]:
        return {"i": self.i, "j": self.j, "k": self.k, "n": self.n}

    @classmethod
    def from_json(cls, obj: Dict[str, int]) -> "GroupElement":
        return cls(obj["i"], obj["j"], obj["k"], obj.get("n", 2))

    @classmethod
    def parse(cls, text: str, n: int = 2) -> "GroupElement":
        """Parse either the normal-form string or a plain generator word."""
        text = text.strip()
        if "^" in text and text.startswith("t^"):
            parts = text.split()
            if len(parts) == 3 and parts[1].startswith("a^"):
                i = int(parts[0][2:])
                j = int(parts[1][2:])
                k = -int(parts[2][2:])
                return cls.from_triple(i, j, k, n)
        return normalize(parse_word(text), n)


def normalize(word: Iterable[str], n: int = 2) -> GroupElement:
    """Fold a generator word into its unique normal form."""
    g = GroupElement.identity(n)
    for token in word:
        g = g.append(token)
    return g


def phi(g: GroupElement) -> Tuple[Dyadic, int]:
    return g.phi()


def phi_inverse(x, m: int, n: int = 2) -> GroupElement:
    """Unique element with phi image (x, m).

    Picks the minimal i with x*n^i integral, then k = m + i; if that k is
    negative, i is raised until k = 0.
    """
    if isinstance(x, Dyadic):
        d = x
        if d.base != n:
            raise ValueError("dyadic base mismatch")
    else:
        d = Dyadic.from_fraction(Fraction(x), n)
    i = d.exp
    j = d.num
    k = m + i
    if k < 0:
        j *= n ** (-k)
        i += -k
        k = 0
    return GroupElement.from_triple(i, j, k, n)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    return g.mul(h)


# -- boxes --------------------------------------------------------------


@dataclass(frozen=True)
class PhiBox:
    """Half-open rectangle [x, x+width) x (y-1, y] attached to an element."""

    x: Dyadic
    y: int
    level: int

    @property
    def width(self) -> Dyadic:
        return Dyadic(1, 0, self.x.base).times_pow(self.level)

    @property
    def x_hi(self) -> Dyadic:
        return self.x + self.width

    def child_anchor(self, c: int) -> Dyadic:
        """Anchor of the c-th child box one level down (0 <= c < n)."""
        return self.x + Dyadic(c, 0, self.x.base).times_pow(self.level - 1)


def box_of(g: GroupElement) -> PhiBox:
    x, m = g.phi()
    return PhiBox(x, m, m)


# -- standard finite subsets ----------------------------------------------


def rectangle(k: int, ell: int, n: int = 2) -> List[GroupElement]:
    """The rectangle with parameters (k, ell): elements t^ell a^i t^-j.

    i runs over [0, (k+1)*n^(ell-1) - 1] and j over [0, ell].  For ell = 0
    the index set degenerates; the convention here is {a^i : 0 <= i <= k}.
    All listed elements are distinct.
    """
    if k < 0 or ell < 0:
        raise ValueError("parameters must be non-negative")
    if ell == 0:
        return [GroupElement.from_triple(0, i, 0, n) for i in range(k + 1)]
    out = []
    imax = (k + 1) * n ** (ell - 1)
    for j in range(ell + 1):
        for i in range(imax):
            out.append(
                GroupElement.from_triple(ell, i, j, n)
            )
    seen: Set[GroupElement] = set()
    dedup = []
    for g in out:
        if g not in seen:
            seen.add(g)
            dedup.append(g)
    return dedup


def rectangle_closed_form(k: int, ell: int, n: int = 2) -> Tuple[int, int]:
    """Both candidate cardinality formulas: (enumeration-backed, stated).

    Direct enumeration gives (ell+1)*(k+1)*n^(ell-1); a closed form used
    elsewhere states ell*(k+1)*2^(ell-1).  Enumeration is ground truth.
    """
    base = (k + 1) * n ** (ell - 1) if ell >= 1 else k + 1
    return (ell + 1) * base if ell >= 1 else k + 1, ell * base


GENERATORS = ("a", "A", "t", "T")


def folner_ratio(k: int, ell: int, n: int = 2) -> Fraction:
    """|boundary R| / |R| with the 4-generator boundary."""
    elems = rectangle(k, ell, n)
    inside = set(elems)
    boundary = 0
    for g in elems:
        if any(g.append(s) not in inside for s in GENERATORS):
            boundary += 1
    return Fraction(boundary, len(elems))


def cone(g: GroupElement, ell: int, m: int) -> List[GroupElement]:
    """The cone {g a^i t^-j : 0 <= i < ell, 0 <= j <= m}, deduplicated."""
    if ell < 1 or m < 0:
        raise ValueError("need ell >= 1 and m >= 0")
    seen: Set[GroupElement] = set()
    out = []
    for j in range(m + 1):
        for i in range(ell):
            e = g.mul(GroupElement.from_triple(0, i, j, g.n))
            if e not in seen:
                seen.add(e)
                out.append(e)
    return out


def sheet_mates(g: GroupElement) -> Tuple[GroupElement, GroupElement]:
    """(g t a t^-1, g t a^-1 t^-1): same level, anchors shifted by n^(m-1)."""
    n = g.n
    right = g.mul(GroupElement.from_triple(1, 1, 1, n))
    left = g.mul(GroupElement.from_triple(1, -1, 1, n))
    return right, left


def upper_neighbour(g: GroupElement) -> Tuple[GroupElement, int]:
    """The element whose box sits directly above g's box, and g's child slot.

    Every box is the c-th child (0-based) of exactly one box one level up;
    returns (parent, c).
    """
    n = g.n
    x = g.anchor
    digit = (x.times_pow(-g.level).floor()) % n
    parent = g.mul(GroupElement.from_triple(0, -digit, 0, n)).mul(
        GroupElement.from_triple(0, 0, 1, n)
    )
    return parent, digit


def sheet_key(g: GroupElement) -> Fraction:
    """Anchor residue of g's sheet row at g's own level."""
    x = g.anchor.as_fraction()
    mod = Fraction(g.n) ** g.level
    return x % mod


def sheets_of(
    support: Iterable[GroupElement],
) -> Dict[Fraction, List[GroupElement]]:
    """Group a finite support into sheets.

    Sheets branch upward, so they are keyed by the anchor residues seen at
    the coarsest (highest) level present.  An element belongs to every
    sheet whose key matches its anchor modulo n^level; elements of low
    levels are shared between sheets, mirroring how sheets merge going
    down.
    """
    elems = list(support)
    if not elems:
        return {}
    n = elems[0].n
    top = max(g.level for g in elems)
    mod_top = Fraction(n) ** top
    keys = sorted(
        {g.anchor.as_fraction() % mod_top for g in elems if g.level == top}
    )
    out: Dict[Fraction, List[GroupElement]] = {key: [] for key in keys}
    for g in elems:
        mod = Fraction(n) ** g.level
        for key in keys:
            if (key - g.anchor.as_fraction()) % mod == 0:
                out[key].append(g)
    return out
