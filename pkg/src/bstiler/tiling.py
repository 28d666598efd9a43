"""Tile geometry for substitution tilings and finite windows of them.

An a-tile at (x, y) is a rectangle of width v(a)*n^y and height
log_n(lambda) whose top edge is at height y; its bottom edge is cut into
the widths of the children prescribed by the chosen rule word.  A window
is a stack of rows, each row the substitution image of the row above,
anchored at caller-chosen coordinates.

Real coordinates are floats with tolerance TOL; every comparison against
the box grid goes through a guard that raises on values inside the
ambiguous band between TOL and 10*TOL, so silently misclassified geometry
is impossible.  Callers retry with a jittered anchor.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .group import GroupElement, PhiBox, box_of
from .substitution import EigenData, Substitution

TOL = 1e-9
BAND = 10 * TOL


class AmbiguousGeometry(Exception):
    """A float landed in the guard band around a grid line."""


class OutsideWindow(Exception):
    """Requested geometry is not covered by the window."""


def _guard(delta: float) -> float:
    """Snap |delta| < TOL to zero; reject the ambiguous band."""
    ad = abs(delta)
    if ad < TOL:
        return 0.0
    if ad < BAND:
        raise AmbiguousGeometry(f"value within guard band: delta={delta}")
    return delta


def guarded_cmp(a: float, b: float) -> int:
    d = _guard(a - b)
    return (d > 0) - (d < 0)


def floor_guarded(x: float) -> int:
    """Floor with snapping: near-integers count as that integer."""
    r = round(x)
    if abs(x - r) < TOL:
        return int(r)
    if abs(x - r) < BAND:
        raise AmbiguousGeometry(f"{x} within guard band of integer {r}")
    return math.floor(x)


@dataclass(frozen=True)
class SigmaTile:
    """One positioned tile; child_pos is its 1-based slot in the parent rule."""

    letter: str
    x: float
    y_top: float
    width: float
    rule_choice: int
    child_pos: Optional[int] = None

    @property
    def x_right(self) -> float:
        return self.x + self.width

    def bottom_cuts(self, subst: Substitution, eig: EigenData) -> List[float]:
        """Widths of the bottom sub-edges, one per child letter."""
        word = subst.rules[self.letter][self.rule_choice]
        total = sum(eig.v_float(c) for c in word)
        return [self.width * eig.v_float(c) / total for c in word]


def make_tile(
    letter: str,
    x: float,
    y: float,
    subst: Substitution,
    eig: EigenData,
    rule_choice: int = 0,
    child_pos: Optional[int] = None,
) -> SigmaTile:
    """The letter's tile at position (x, y) (top-left corner)."""
    if letter not in subst.alphabet:
        raise ValueError(f"unknown letter {letter!r}")
    if rule_choice >= len(subst.rules[letter]):
        raise ValueError("rule index out of range")
    width = eig.v_float(letter) * eig.base**y
    return SigmaTile(letter, x, y, width, rule_choice, child_pos)


@dataclass
class Row:
    y_top: float
    tiles: List[SigmaTile]
    _edges: Optional[List[float]] = field(default=None, repr=False, compare=False)

    @property
    def x_left(self) -> float:
        return self.tiles[0].x

    @property
    def x_right(self) -> float:
        return self.tiles[-1].x_right

    def word(self) -> str:
        return "".join(t.letter for t in self.tiles)

    def edges(self) -> List[float]:
        """All vertical edge positions of the row, left to right."""
        if self._edges is None:
            self._edges = [t.x for t in self.tiles] + [self.tiles[-1].x_right]
        return self._edges

    def edges_between(self, x_lo: float, x_hi: float) -> List[float]:
        """Edges e with x_lo <= e < x_hi under the grid guard."""
        import bisect

        es = self.edges()
        i = bisect.bisect_left(es, x_lo - BAND)
        out = []
        while i < len(es) and es[i] < x_hi + BAND:
            e = es[i]
            if guarded_cmp(e, x_lo) >= 0 and guarded_cmp(e, x_hi) < 0:
                out.append(e)
            i += 1
        return out

    def has_edge_at(self, x: float) -> bool:
        import bisect

        es = self.edges()
        i = bisect.bisect_left(es, x - BAND)
        while i < len(es) and es[i] < x + BAND:
            if guarded_cmp(es[i], x) == 0:
                return True
            i += 1
        return False

    def find_tile(self, x: float) -> Optional[SigmaTile]:
        """Tile with x in [t.x, t.x_right), or None."""
        import bisect

        xs = [t.x for t in self.tiles]
        i = bisect.bisect_right(xs, x + BAND) - 1
        for cand in (i, i + 1, i - 1):
            if 0 <= cand < len(self.tiles):
                t = self.tiles[cand]
                if guarded_cmp(x, t.x) >= 0 and guarded_cmp(x, t.x_right) < 0:
                    return t
        return None


RowChooser = Callable[[Sequence[str], int], Sequence[int]]


@dataclass
class TilingWindow:
    """Rows of tiles, top row first; row r+1 is the image of row r."""

    subst: Substitution
    eig: EigenData
    rows: List[Row]
    viewport: Tuple[float, float, float, float]  # x0, x1, y_bot, y_top
    seed_row: int = 0
    meta: Dict = field(default_factory=dict)

    @property
    def base(self) -> int:
        return self.eig.base

    @property
    def row_height(self) -> float:
        return self.eig.row_height()

    def row_at(self, y: float) -> Optional[int]:
        """Index of the row whose vertical span (y_bot, y_top] contains y."""
        H = self.row_height
        for r, row in enumerate(self.rows):
            top = row.y_top
            if guarded_cmp(y, top) <= 0 and guarded_cmp(y, top - H) > 0:
                return r
        return None

    def tile_at(self, x: float, y: float) -> Tuple[SigmaTile, int]:
        """Tile whose half-open extent [x_l, x_r) x (y_b, y_t] contains (x, y)."""
        r = self.row_at(y)
        if r is None:
            raise OutsideWindow(f"no row covers y={y}")
        t = self.rows[r].find_tile(x)
        if t is None:
            raise OutsideWindow(f"no tile covers x={x} in row {r}")
        return t, r

    def to_json(self) -> Dict:
        return {
            "n": self.base,
            "subst": self.subst.to_json(),
            "rows": [
                {
                    "y_top": row.y_top,
                    "tiles": [
                        {
                            "letter": t.letter,
                            "x": t.x,
                            "width": t.width,
                            "rule": t.rule_choice,
                            "child_pos": t.child_pos,
                        }
                        for t in row.tiles
                    ],
                }
                for row in self.rows
            ],
            "viewport": list(self.viewport),
            "seed_row": self.seed_row,
            "meta": {k: v for k, v in self.meta.items() if isinstance(v, (int, float, str))},
        }

    @classmethod
    def from_json(cls, obj: Dict, eig: EigenData) -> "TilingWindow":
        subst = Substitution.from_json(obj["subst"])
        rows = [
            Row(
                rd["y_top"],
                [
                    SigmaTile(
                        td["letter"], td["x"], rd["y_top"], td["width"], td["rule"], td["child_pos"]
                    )
                    for td in rd["tiles"]
                ],
            )
            for rd in obj["rows"]
        ]
        return cls(subst, eig, rows, tuple(obj["viewport"]), obj.get("seed_row", 0), obj.get("meta", {}))


def _children_of(
    t: SigmaTile, subst: Substitution, eig: EigenData, choices: Sequence[int]
) -> List[SigmaTile]:
    """Children tiles of t, one per letter of its rule word."""
    word = subst.rules[t.letter][t.rule_choice]
    total_v = sum(eig.v_float(c) for c in word)
    y_top = t.y_top - eig.row_height()
    out = []
    x = t.x
    for p, c in enumerate(word):
        w = t.width * eig.v_float(c) / total_v
        out.append(SigmaTile(c, x, y_top, w, choices[p], p + 1))
        x += w
    return out


def grow_window(
    subst: Substitution,
    eig: EigenData,
    seed_letter: str,
    up: int,
    down: int,
    half_width: float,
    y0: float = 0.0,
    rng_seed: int = 0,
    row_chooser: Optional[RowChooser] = None,
    parent_choices: Optional[Sequence[Tuple[str, int, int]]] = None,
    pad: bool = True,
) -> TilingWindow:
    """Window with `up` rows above and `down` rows below the seed row.

    Rows above come from de-substitution (the parent chain is chosen by the
    seeded policy, or given explicitly as (letter, rule_choice, position)
    triples); the top row is then extended sideways until it covers the
    requested half-width plus a margin, and everything below is generated
    by substitution, cropped to the viewport.  The seed tile's left edge is
    placed at exactly x = 0 and its top edge at y0.  With pad=False the
    window is just the ancestor tile's descendants.
    """
    if up < 0 or down < 0:
        raise ValueError("up and down must be >= 0")
    rng = random.Random(rng_seed)
    n = eig.base
    H = eig.row_height()

    # parent chain, seed upward
    chain: List[Tuple[str, int, int]] = []  # (letter, rule_choice, child position)
    cur = seed_letter
    for step in range(up):
        if parent_choices is not None:
            letter, choice, pos = parent_choices[step]
            if subst.rules[letter][choice][pos] != cur:
                raise ValueError("explicit parent choice does not cover the child letter")
        else:
            options = [
                (a, ci, p)
                for a in subst.alphabet
                for ci, w in enumerate(subst.rules[a])
                for p, c in enumerate(w)
                if c == cur
            ]
            if not options:
                raise ValueError(f"dead end: letter {cur!r} never occurs in any rule image")
            letter, choice, pos = options[rng.randrange(len(options))]
        chain.append((letter, choice, pos))
        cur = letter

    def default_rows(letters: Sequence[str], row_index: int) -> Sequence[int]:
        return [rng.randrange(len(subst.rules[c])) for c in letters]

    chooser = row_chooser or default_rows

    top_letter = chain[-1][0] if chain else seed_letter
    y_top0 = y0 + up * H
    top_scale = float(n) ** y_top0

    # provisional seed offset, only used for padding and cropping bounds;
    # the exact anchor comes from translating the built rows at the end
    probe = make_tile(top_letter, 0.0, y_top0, subst, eig, chain[-1][1] if chain else 0, None)
    cursor = probe
    for lvl in range(len(chain) - 1, -1, -1):
        letter_, choice, pos = chain[lvl]
        cursor = SigmaTile(letter_, cursor.x, cursor.y_top, cursor.width, choice, cursor.child_pos)
        kids = _children_of(cursor, subst, eig, [0] * len(subst.rules[letter_][choice]))
        cursor = kids[pos]
    seed_x = cursor.x

    # pad the top row; padding letters are policy-chosen
    margin = 2.0 * max(eig.v_float(c) for c in subst.alphabet) * top_scale + 2.0
    need = half_width + margin if pad else 0.0
    left_pad: List[str] = []
    right_pad: List[str] = []
    lo = -seed_x
    hi = lo + probe.width

    while pad:
        if lo <= -need and hi >= need:
            break
        if lo > -need:
            c = subst.alphabet[rng.randrange(len(subst.alphabet))]
            left_pad.insert(0, c)
            lo -= eig.v_float(c) * top_scale
        if hi < need:
            c = subst.alphabet[rng.randrange(len(subst.alphabet))]
            right_pad.append(c)
            hi += eig.v_float(c) * top_scale

    letters0 = left_pad + [top_letter] + right_pad
    choices0 = list(chooser(letters0, 0))
    if chain:
        choices0[len(left_pad)] = chain[-1][1]

    # rows are built with the ancestor at provisional x, then translated so
    # that the seed tile's left edge is exactly 0.0
    rows: List[Row] = []
    x = lo + seed_x
    tiles0 = []
    for c, ch in zip(letters0, choices0):
        t = make_tile(c, x, y_top0, subst, eig, ch, None)
        tiles0.append(t)
        x = t.x_right
    rows.append(Row(y_top0, tiles0))

    path_idx = len(left_pad)  # index of the ancestor-path tile in the current row

    total_rows = up + down + 1
    for r in range(1, total_rows):
        prev = rows[-1]
        letters = []
        for t in prev.tiles:
            letters.extend(subst.rules[t.letter][t.rule_choice])
        choices = list(chooser(letters, r))
        if r <= up:
            # pin the rule choice of the tile on the ancestor path
            lvl = up - r
            child_pos = chain[lvl][2]
            offset = sum(
                len(subst.rules[t.letter][t.rule_choice]) for t in prev.tiles[:path_idx]
            )
            new_path_idx = offset + child_pos
            choices[new_path_idx] = chain[lvl - 1][1] if lvl > 0 else choices[new_path_idx]
            path_idx = new_path_idx
        tiles = []
        ci = 0
        y_top = prev.y_top - H
        for t in prev.tiles:
            word = subst.rules[t.letter][t.rule_choice]
            tiles.extend(_children_of(t, subst, eig, choices[ci : ci + len(word)]))
            ci += len(word)
        if pad:
            crop = 2.0 * max(u.width for u in tiles) + 2.0
            kept = [
                (idx, u)
                for idx, u in enumerate(tiles)
                if u.x_right > -half_width - crop and u.x < half_width + crop
            ]
            if r <= up:
                shift = next(pos for pos, (idx, _u) in enumerate(kept) if idx == path_idx)
                path_idx = shift
            tiles = [u for _idx, u in kept]
        rows.append(Row(y_top, tiles))

    viewport = (-half_width, half_width, y_top0 - total_rows * H, y_top0)
    win = TilingWindow(subst, eig, rows, viewport, seed_row=up)
    win.meta["rng_seed"] = rng_seed
    win.meta["y0"] = y0
    return win


def shift_window(w: TilingWindow, alpha: float, beta: float) -> TilingWindow:
    """Apply the plane action (x, y) -> (alpha + n^beta x, beta + y)."""
    n = w.base
    s = float(n) ** beta
    rows = [
        Row(
            row.y_top + beta,
            [
                SigmaTile(
                    t.letter,
                    alpha + s * t.x,
                    t.y_top + beta,
                    s * t.width,
                    t.rule_choice,
                    t.child_pos,
                )
                for t in row.tiles
            ],
        )
        for row in w.rows
    ]
    x0, x1, yb, yt = w.viewport
    vp = (alpha + s * x0, alpha + s * x1, yb + beta, yt + beta)
    return TilingWindow(w.subst, w.eig, rows, vp, w.seed_row, dict(w.meta))


# -- box classification ---------------------------------------------------


class BoxContent(Enum):
    EMPTY = "empty"
    VERTICAL = "vertical"
    HORIZONTAL = "horizontal"
    CROSS = "cross"
    TEE = "tee"


@dataclass(frozen=True)
class BoxReport:
    content: BoxContent
    line_y: Optional[float] = None
    edge_x: Optional[float] = None


def classify_box(w: TilingWindow, box: PhiBox) -> BoxReport:
    """Content of one grid box: line piece, corner type, or nothing.

    The box is [x, x+width) x (y-1, y].  The unique-size property makes
    the content unambiguous: at most one horizontal row boundary and at
    most one vertical tile edge can meet the box.
    """
    n = w.base
    x_lo = float(box.x)
    x_hi = float(box.x_hi)
    y_hi = float(box.y)
    y_lo = y_hi - 1.0
    H = w.row_height

    covering = []
    for r, row in enumerate(w.rows):
        if guarded_cmp(row.y_top - H, y_hi) < 0 and guarded_cmp(row.y_top, y_lo) > 0:
            covering.append(r)
    if not covering:
        raise OutsideWindow(f"box at level {box.level} not covered vertically")
    for r in covering:
        row = w.rows[r]
        if guarded_cmp(row.x_left, x_lo) > 0 or guarded_cmp(row.x_right, x_hi) < 0:
            raise OutsideWindow("box not covered horizontally")

    # horizontal row boundaries strictly inside (y_lo, y_hi]
    lines = [
        w.rows[r].y_top
        for r in covering
        if guarded_cmp(w.rows[r].y_top, y_lo) > 0 and guarded_cmp(w.rows[r].y_top, y_hi) <= 0
    ]
    if len(lines) > 1:
        raise AmbiguousGeometry("two row boundaries in one box; tiles too small")
    line_y = lines[0] if lines else None

    # vertical edges meeting the box
    hits: List[Tuple[float, int]] = []  # (edge_x, row index)
    for r in covering:
        for e in w.rows[r].edges_between(x_lo, x_hi):
            hits.append((e, r))

    if line_y is None:
        if not hits:
            return BoxReport(BoxContent.EMPTY)
        first = hits[0][0]
        if any(guarded_cmp(e, first) != 0 for e, _ in hits[1:]):
            raise AmbiguousGeometry("two vertical edges in one box")
        return BoxReport(BoxContent.VERTICAL, edge_x=first)

    # a row boundary is present; edges at or through it decide T vs cross
    below_rows = [r for r in covering if guarded_cmp(w.rows[r].y_top, line_y) == 0]
    above_rows = [r for r in covering if guarded_cmp(w.rows[r].y_top - H, line_y) == 0]
    edge_points: List[float] = []
    for e, r in hits:
        if r in below_rows or r in above_rows:
            edge_points.append(e)
    if not edge_points:
        return BoxReport(BoxContent.HORIZONTAL, line_y=line_y)
    ex = edge_points[0]
    if any(guarded_cmp(e, ex) != 0 for e in edge_points[1:]):
        raise AmbiguousGeometry("two corner points in one box")
    below_edge = any(w.rows[r].has_edge_at(ex) for r in below_rows)
    above_edge = any(w.rows[r].has_edge_at(ex) for r in above_rows)
    if below_edge and above_edge:
        return BoxReport(BoxContent.CROSS, line_y=line_y, edge_x=ex)
    if below_edge:
        return BoxReport(BoxContent.TEE, line_y=line_y, edge_x=ex)
    # an edge ending at the line from above always continues below
    raise AmbiguousGeometry("dangling edge above a row boundary")


# -- unique-size audit -----------------------------------------------------


@dataclass
class SizeViolation:
    tile: SigmaTile
    item: int
    message: str


def _interval_box_count(x0: float, x1: float, level: int, n: int) -> int:
    """Number of level-`level` boxes meeting [x0, x1)."""
    w = float(n) ** level
    lo = floor_guarded(x0 / w)
    hi = floor_guarded(x1 / w)
    if guarded_cmp(x1, hi * w) == 0:
        hi -= 1
    return hi - lo + 1


def check_unique_size(w: TilingWindow, include_partial: bool = False) -> List[SizeViolation]:
    """Audit every fully visible tile against the box-count laws.

    Checks, per tile: the vertical count (integer levels in (y_bot, y_top])
    lies in {h_box, h_box+1}; the top edge meets between v(a) and 2 v(a)
    boxes of the matching scale; and the alpha/beta bottom-count test picks
    the branch matching the vertical count.  Counts are taken against the
    box row of level floor(edge height).
    """
    eig = w.eig
    n = w.base
    H = w.row_height
    h_box = eig.h_box
    out: List[SizeViolation] = []
    x0, x1, _yb, _yt = w.viewport
    for row in w.rows:
        for t in row.tiles:
            if not include_partial and (t.x < x0 or t.x_right > x1):
                continue
            y_top = t.y_top
            y_bot = t.y_top - H
            try:
                m_top = floor_guarded(y_top)
                m_bot = floor_guarded(y_bot)
                v_count = m_top - m_bot
                if v_count not in (h_box, h_box + 1):
                    out.append(
                        SizeViolation(t, 1, f"vertical count {v_count} not in {{{h_box},{h_box + 1}}}")
                    )
                top_count = _interval_box_count(t.x, t.x_right, m_top, n)
                va = eig.v_float(t.letter)
                if not (va <= top_count < 2 * va):
                    out.append(
                        SizeViolation(t, 2, f"top count {top_count} outside [{va}, {2 * va})")
                    )
                bottom_count = _interval_box_count(t.x, t.x_right, m_bot, n)
                alpha = -(-bottom_count // n**h_box)
                beta = -(-bottom_count // n ** (h_box + 1))
                alpha_ok = va <= alpha < 2 * va
                beta_ok = va <= beta < 2 * va
                if not (alpha_ok or beta_ok):
                    out.append(SizeViolation(t, 3, f"neither alpha={alpha} nor beta={beta} fits"))
                elif v_count == h_box and not alpha_ok:
                    out.append(SizeViolation(t, 3, f"count {v_count} but alpha={alpha} misses"))
                elif v_count == h_box + 1 and not beta_ok:
                    out.append(SizeViolation(t, 3, f"count {v_count} but beta={beta} misses"))
            except AmbiguousGeometry as exc:
                out.append(SizeViolation(t, 0, f"ambiguous geometry: {exc}"))
    return out
