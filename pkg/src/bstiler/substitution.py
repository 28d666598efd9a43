"""Substitution rules, incidence data and the unique-size normalisation.

A substitution maps each letter to a non-empty set of non-empty words;
it is deterministic when every set is a singleton.  An expanding
eigenvalue is a real lambda > 1 together with a positive vector v such
that lambda*v(a) equals the v-mass of every rule word for a.  Powering
the substitution and rescaling v produces the unique size property
(lambda large enough and v(a) >= 3) needed by the box coding; the
associated integer constants h and w_a are derived here.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .algebra import (
    Exact,
    Surd,
    exact_floor,
    perron_root_exact,
    perron_root_float,
    power_iteration,
    solve_eigenvector_exact,
)


@dataclass(frozen=True)
class Substitution:
    alphabet: Tuple[str, ...]
    rules: Dict[str, Tuple[str, ...]]
    base: int = 2

    def __post_init__(self):
        for a in self.alphabet:
            words = self.rules.get(a)
            if not words:
                raise ValueError(f"letter {a!r} has no rule")
            for w in words:
                if not w:
                    raise ValueError("empty rule word")
                for c in w:
                    if c not in self.alphabet:
                        raise ValueError(f"rule for {a!r} uses unknown letter {c!r}")

    @classmethod
    def make(cls, rules: Dict[str, Sequence[str]], base: int = 2) -> "Substitution":
        alphabet = tuple(rules.keys())
        return cls(alphabet, {a: tuple(ws) for a, ws in rules.items()}, base)

    @property
    def deterministic(self) -> bool:
        return all(len(ws) == 1 for ws in self.rules.values())

    def word(self, a: str, choice: int = 0) -> str:
        return self.rules[a][choice]

    def image_words(self, a: str) -> Tuple[str, ...]:
        return self.rules[a]

    def max_image_length(self) -> int:
        return max(len(w) for ws in self.rules.values() for w in ws)

    def power(self, k: int) -> "Substitution":
        """The k-th iterate; rule sets are all concatenations of choices."""
        if k < 1:
            raise ValueError("power must be >= 1")
        cur = self
        for _ in range(k - 1):
            new_rules: Dict[str, Tuple[str, ...]] = {}
            for a in self.alphabet:
                words: Set[str] = set()
                for w in cur.rules[a]:
                    parts = [self.rules[c] for c in w]
                    for combo in itertools.product(*parts):
                        words.add("".join(combo))
                new_rules[a] = tuple(sorted(words))
            cur = Substitution(self.alphabet, new_rules, self.base)
        return cur

    # -- serialisation ---------------------------------------------------

    def to_json(self) -> Dict:
        return {
            "n": self.base,
            "alphabet": list(self.alphabet),
            "rules": {a: list(ws) for a, ws in self.rules.items()},
        }

    @classmethod
    def from_json(cls, obj: Dict) -> "Substitution":
        rules = {a: tuple(ws) for a, ws in obj["rules"].items()}
        return cls(tuple(obj["alphabet"]), rules, obj.get("n", 2))

    @classmethod
    def load(cls, path) -> "Substitution":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass
class EigenData:
    """Expanding eigenvalue and the unique-size constants.

    lam and v are exact (Fraction or Surd) when the minimal polynomial
    has degree <= 2, otherwise floats.  After normalisation:

    * lam >= base**3, so log_base(lam) >= 3;
    * v(a) >= 3 for every letter;
    * h_box = floor(log_base lam), h_rule = h_box - 1, w[a] = floor(v(a)) - 1.
    """

    lam: object
    v: Dict[str, object]
    exact: bool
    base: int = 2
    k: int = 1
    scale: Fraction = Fraction(1)
    h_box: int = 0
    h_rule: int = 0
    w: Dict[str, int] = field(default_factory=dict)
    max_len: int = 0

    @property
    def lam_float(self) -> float:
        return float(self.lam)

    def v_float(self, a: str) -> float:
        return float(self.v[a])

    def row_height(self) -> float:
        """Tile row height log_base(lam)."""
        import math

        return math.log(self.lam_float, self.base)


def incidence_matrix(s: Substitution) -> List[List[int]]:
    """M[i][j] = occurrences of letter j in the image of letter i."""
    if not s.deterministic:
        raise ValueError(
            "incidence matrix needs a deterministic substitution; "
            "use the eigen-system solver for non-deterministic rules"
        )
    idx = {a: p for p, a in enumerate(s.alphabet)}
    m = [[0] * len(s.alphabet) for _ in s.alphabet]
    for a in s.alphabet:
        for c in s.rules[a][0]:
            m[idx[a]][idx[c]] += 1
    return m


def is_primitive(s: Substitution) -> bool:
    """Some power of the incidence matrix (within Wielandt's bound) is positive."""
    import numpy as np

    m = np.array(incidence_matrix(s), dtype=object)
    size = len(s.alphabet)
    bound = (size - 1) ** 2 + 1
    p = np.identity(size, dtype=object)
    for _ in range(bound):
        p = p @ m
        if (p > 0).all():
            return True
    return False


def _selection_matrix(s: Substitution) -> List[List[int]]:
    """Incidence matrix after choosing the first rule word per letter."""
    det = Substitution(
        s.alphabet, {a: (s.rules[a][0],) for a in s.alphabet}, s.base
    )
    return incidence_matrix(det)


def _rule_residual(s: Substitution, lam, v) -> float:
    worst = 0.0
    for a in s.alphabet:
        for w in s.rules[a]:
            total = sum(float(v[c]) for c in w)
            worst = max(worst, abs(float(lam) * float(v[a]) - total))
    return worst


def expanding_eigen(s: Substitution) -> EigenData:
    """Expanding eigenvalue lambda > 1 and positive v with min v = 1.

    Exact values are used when the dominant root is rational or quadratic;
    non-deterministic rule sets are validated against the eigen equation
    for every rule word.
    """
    m = _selection_matrix(s)
    lam_exact = perron_root_exact(m)
    eig: Optional[EigenData] = None
    if lam_exact is not None and lam_exact > 1:
        vec = solve_eigenvector_exact(m, lam_exact)
        if vec is not None:
            v = {a: vec[p] for p, a in enumerate(s.alphabet)}
            # exact validation of every rule
            ok = all(
                lam_exact * v[a] == sum_exact([v[c] for c in w], lam_exact)
                for a in s.alphabet
                for w in s.rules[a]
            )
            if ok:
                eig = EigenData(lam=lam_exact, v=v, exact=True, base=s.base)
    if eig is None:
        lam_f, vec_f = power_iteration(m)
        if lam_f <= 1:
            raise ValueError("no expanding eigenvalue")
        v = {a: vec_f[p] for p, a in enumerate(s.alphabet)}
        if _rule_residual(s, lam_f, v) > 1e-12 * lam_f:
            raise ValueError("no expanding eigenvalue consistent with all rules")
        eig = EigenData(lam=lam_f, v=v, exact=False, base=s.base)
    eig.max_len = s.max_image_length()
    return eig


def sum_exact(values, like):
    """Sum values in the exact field of `like` (keeps Surd arithmetic closed)."""
    if isinstance(like, Surd):
        total = Surd.__new_raw__(Fraction(0), Fraction(0), like.d)
    else:
        total = Fraction(0)
    for x in values:
        total = total + x
    return total


def _ceil_3dec(x: Fraction) -> Fraction:
    """Smallest multiple of 1/1000 that is >= x."""
    q = x * 1000
    n = q.numerator // q.denominator
    if n < q:
        n += 1
    return Fraction(n, 1000)


def normalize_unique_size(
    s: Substitution, eig: Optional[EigenData] = None
) -> Tuple[Substitution, EigenData]:
    """Power and rescale until the unique size property holds.

    Returns (s^k, full EigenData) where k is minimal with lam^k >= base^3
    and the scale C is the smallest 1/1000-granular rational making every
    scaled v(a) >= 3.
    """
    if eig is None:
        eig = expanding_eigen(s)
    base = s.base
    threshold = base**3
    k = 1
    lam_k = eig.lam
    while not _ge(lam_k, threshold):
        k += 1
        lam_k = _mul(lam_k, eig.lam)
    if eig.exact:
        minv = min(eig.v.values())
        c = _smallest_scale(minv, Fraction(3))
    else:
        minv = min(float(x) for x in eig.v.values())
        c = _ceil_3dec(Fraction(3) / Fraction(minv).limit_denominator(10**9))
        while float(c) * minv < 3:
            c += Fraction(1, 1000)
    v_scaled = {a: _mul_scalar(val, c) for a, val in eig.v.items()}
    s_k = s.power(k)
    h_box = _floor_log(lam_k, base)
    out = EigenData(
        lam=lam_k,
        v=v_scaled,
        exact=eig.exact,
        base=base,
        k=k,
        scale=c,
        h_box=h_box,
        h_rule=h_box - 1,
        w={a: _floor_of(v_scaled[a]) - 1 for a in s.alphabet},
        max_len=s_k.max_image_length(),
    )
    if out.h_rule < 2:
        raise ValueError("normalisation failed to reach h >= 2")
    for a, wa in out.w.items():
        if wa < 2:
            raise ValueError("normalisation failed to reach w >= 2")
    return s_k, out


def _ge(x, bound) -> bool:
    if isinstance(x, (Fraction, Surd)):
        return x >= bound
    return float(x) >= bound


def _mul(x, y):
    return x * y


def _mul_scalar(x, c: Fraction):
    if isinstance(x, Surd):
        return x * Surd.__new_raw__(c, Fraction(0), x.d)
    if isinstance(x, Fraction):
        return x * c
    return float(x) * float(c)


def _floor_of(x) -> int:
    if isinstance(x, (Fraction, Surd)):
        return exact_floor(x)
    return int(x // 1)


def _floor_log(lam, base: int) -> int:
    """floor(log_base(lam)), exact when lam is exact."""
    if isinstance(lam, (Fraction, Surd)):
        h = 0
        power = Fraction(1)
        while _ge(lam, power * base):
            power *= base
            h += 1
        return h
    import math

    h = int(math.floor(math.log(float(lam), base) + 1e-12))
    return h


def _smallest_scale(minv, target) -> Fraction:
    """Smallest multiple of 1/1000 with c*minv >= target (exact minv)."""
    lo = Fraction(0)
    c = _ceil_3dec(Fraction(float(target) / float(minv)).limit_denominator(10**9))
    while not _ge(_mul_scalar(minv, c), target):
        c += Fraction(1, 1000)
    while c > Fraction(1, 1000) and _ge(_mul_scalar(minv, c - Fraction(1, 1000)), target):
        c -= Fraction(1, 1000)
    return c


def language(s: Substitution, depth: int, seed: str, max_len: int = 64) -> Set[str]:
    """All factors (up to max_len) of depth-fold images of the seed letter."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    words = {seed}
    for _ in range(depth):
        nxt: Set[str] = set()
        for w in words:
            parts = [s.rules[c] for c in w]
            for combo in itertools.product(*parts):
                nxt.add("".join(combo))
        words = nxt
    factors: Set[str] = set()
    for w in words:
        for i in range(len(w)):
            for j in range(i + 1, min(len(w), i + max_len) + 1):
                factors.add(w[i:j])
    return factors


def desubstitute(row: str, s: Substitution) -> Set[Tuple[str, int]]:
    """All parses of `row` as a factor of the image of a parent word.

    Returns pairs (parent word, cut) where cut is the offset in `row` at
    which the image of the parent's first fully contained letter starts
    (capped at len(row) when the row ends inside the leading image).
    Edge letters whose images only partially overlap the row are included
    in the parent.  The empty set means no parse exists.
    """
    if not row:
        raise ValueError("row must be non-empty")
    out: Set[Tuple[str, int]] = set()
    memo: Dict[int, Set[str]] = {}

    def covers_from(pos: int) -> Set[str]:
        """Parent words whose images cover row[pos:] starting block-aligned."""
        if pos >= len(row):
            return {""}
        if pos in memo:
            return memo[pos]
        found: Set[str] = set()
        for a in s.alphabet:
            for w in s.rules[a]:
                rest = len(row) - pos
                if rest < len(w):
                    if w[:rest] == row[pos:]:
                        found.add(a)
                elif row[pos : pos + len(w)] == w:
                    for tail in covers_from(pos + len(w)):
                        found.add(a + tail)
        memo[pos] = found
        return found

    for p in covers_from(0):
        out.add((p, 0))
    for a in s.alphabet:
        for w in s.rules[a]:
            for o in range(1, len(w)):
                overlap = len(w) - o
                m = min(overlap, len(row))
                if w[o : o + m] != row[:m]:
                    continue
                if overlap > len(row):
                    out.add((a, len(row)))
                else:
                    for tail in covers_from(overlap):
                        out.add((a + tail, overlap))
    return out
