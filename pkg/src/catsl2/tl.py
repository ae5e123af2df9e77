"""Temperley-Lieb algebra over truncated Laurent series.

Conventions for a diagram on n strands: 2n boundary points, labelled 0..n-1
along the bottom (left to right) and n..2n-1 along the top (left to right).
A diagram is a fixed-point-free involution of the labels that is planar for
the boundary cyclic order (bottom left-to-right, then top right-to-left).

Multiplication a * b stacks a on top of b; each closed loop created in the
middle contributes a factor (q + q^-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterator

from .series import DEFAULT_PRECISION, PrecisionError, TruncatedSeries

if TYPE_CHECKING:  # pragma: no cover
    from .complexes import Complex

Arc = frozenset  # frozenset({p, q}) of boundary labels, within one diagram


def _cyclic_pos(p: int, n: int) -> int:
    """Position of label p in the boundary cyclic order (bottom L2R, top R2L)."""
    return p if p < n else 3 * n - 1 - p


def is_planar_matching(pairing: tuple[int, ...]) -> bool:
    m = len(pairing)
    n = m // 2
    if m % 2:
        return False
    for i, j in enumerate(pairing):
        if not 0 <= j < m or j == i or pairing[j] != i:
            return False
    pos = [_cyclic_pos(p, n) for p in range(m)]
    chords = []
    for i, j in enumerate(pairing):
        if i < j:
            a, b = sorted((pos[i], pos[j]))
            chords.append((a, b))
    for idx, (a, b) in enumerate(chords):
        for c, d in chords[idx + 1:]:
            if a < c < b < d or c < a < d < b:
                return False
    return True


@dataclass(frozen=True, order=True)
class Matching:
    """A crossingless matching of the 2n boundary points."""

    n: int
    pairing: tuple[int, ...]

    def __post_init__(self):
        assert len(self.pairing) == 2 * self.n, "pairing length must be 2n"
        assert is_planar_matching(self.pairing), f"non-planar pairing {self.pairing}"

    @classmethod
    def identity(cls, n: int) -> Matching:
        pairing = tuple((p + n) % (2 * n) for p in range(2 * n))
        return cls(n, pairing)

    @classmethod
    def e(cls, i: int, n: int) -> Matching:
        """Cup-cap generator joining strands i, i+1 (1-indexed, 1 <= i <= n-1)."""
        assert 1 <= i <= n - 1, f"e_{i} undefined in TL_{n}"
        pairing = list((p + n) % (2 * n) for p in range(2 * n))
        a, b = i - 1, i
        pairing[a], pairing[b] = b, a
        pairing[n + a], pairing[n + b] = n + b, n + a
        return cls(n, tuple(pairing))

    def arcs(self) -> list[Arc]:
        return [frozenset((i, j)) for i, j in enumerate(self.pairing) if i < j]

    def through_strands(self) -> int:
        return sum(1 for i in range(self.n) if self.pairing[i] >= self.n)

    def flip(self) -> Matching:
        """Reflect top-to-bottom."""
        n = self.n
        phi = lambda p: p + n if p < n else p - n
        pairing = [0] * (2 * n)
        for p, q in enumerate(self.pairing):
            pairing[phi(p)] = phi(q)
        return Matching(n, tuple(pairing))

    def rotate(self) -> Matching:
        """Rotate the rectangle by pi."""
        n = self.n
        rho = lambda p: 2 * n - 1 - p
        pairing = [0] * (2 * n)
        for p, q in enumerate(self.pairing):
            pairing[rho(p)] = rho(q)
        return Matching(n, tuple(pairing))


@lru_cache(maxsize=None)
def all_matchings(n: int) -> tuple[Matching, ...]:
    """All crossingless matchings on 2n points (Catalan(n) of them)."""
    m = 2 * n
    pos_to_label = [0] * m
    for p in range(m):
        pos_to_label[_cyclic_pos(p, n)] = p
    def gen(points: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
        if not points:
            yield ()
            return
        first, rest = points[0], points[1:]
        for k in range(0, len(rest), 2):
            for inside in gen(rest[:k]):
                for outside in gen(rest[k + 1:]):
                    yield ((first, rest[k]),) + inside + outside

    results = []
    for pairs in gen(tuple(range(m))):
        pairing = [0] * m
        for a, b in pairs:
            la, lb = pos_to_label[a], pos_to_label[b]
            pairing[la], pairing[lb] = lb, la
        results.append(Matching(n, tuple(pairing)))
    return tuple(sorted(results))


# ---------------------------------------------------------------------------
# Stacking and partial trace, with enough bookkeeping for the cobordism layer.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StackInfo:
    """Result of gluing diagram `top` onto diagram `bottom`.

    arc_map sends a constituent arc, keyed by ('T'|'B', arc), to its location
    in the result: ('arc', arc) or ('circle', index).  Indices enumerate the
    loops created in the middle, ordered by their smallest middle point.
    """

    result: Matching
    circles: int
    arc_map: dict  # ('T'|'B', Arc) -> ('arc', Arc) | ('circle', int)


@lru_cache(maxsize=None)
def stack_matchings(top: Matching, bottom: Matching) -> StackInfo:
    assert top.n == bottom.n, "strand count mismatch"
    n = top.n
    # Middle identification: bottom's top point (n+j) == top's bottom point j.
    visited_mid = [False] * n  # indexed by j
    pairing = [-1] * (2 * n)
    arc_owner: dict[tuple[str, Arc], list] = {}

    def walk(layer: str, point: int):
        """Follow the strand from (layer, point) to its exit, collecting arcs."""
        arcs = []
        while True:
            m = bottom if layer == "B" else top
            mate = m.pairing[point]
            arcs.append((layer, frozenset((point, mate))))
            if layer == "B":
                if mate < n:
                    return ("B", mate), arcs
                visited_mid[mate - n] = True
                layer, point = "T", mate - n
            else:
                if mate >= n:
                    return ("T", mate), arcs
                visited_mid[mate] = True
                layer, point = "B", n + mate

    arc_map: dict = {}
    seen_start = set()
    starts = [("B", p) for p in range(n)] + [("T", n + t) for t in range(n)]
    for layer, point in starts:
        if (layer, point) in seen_start:
            continue
        (l2, p2), arcs = walk(layer, point)
        a, b = point, p2  # boundary labels agree between layers and result
        seen_start.add((layer, point))
        seen_start.add((l2, p2))
        pairing[a] = b
        pairing[b] = a
        res_arc = frozenset((a, b))
        for key in arcs:
            arc_map[key] = ("arc", res_arc)

    circles = 0
    for j in range(n):
        if visited_mid[j]:
            continue
        # trace the loop through middle point j
        arcs = []
        layer, point = "T", j
        while True:
            visited_mid[point if layer == "T" else point - n] = True
            m = top if layer == "T" else bottom
            mate = m.pairing[point]
            arcs.append((layer, frozenset((point, mate))))
            if layer == "T":
                layer, point = "B", n + mate
            else:
                layer, point = "T", mate - n
            if layer == "T" and point == j:
                break
        for key in arcs:
            arc_map[key] = ("circle", circles)
        circles += 1

    return StackInfo(Matching(n, tuple(pairing)), circles, arc_map)


@dataclass(frozen=True)
class TraceInfo:
    """Closing the rightmost strand: connect bottom point n-1 to top point 2n-1."""

    result: Matching
    closed_circle: bool  # True when the traced strand was the arc {n-1, 2n-1}
    arc_map: dict  # Arc -> ('arc', Arc) | ('circle', 0)


@lru_cache(maxsize=None)
def trace_matching(m: Matching) -> TraceInfo:
    n = m.n
    assert n >= 1, "cannot trace on zero strands"
    lo, hi = n - 1, 2 * n - 1

    def relabel(p: int) -> int:
        return p if p < n - 1 else p - 1  # labels n-1 and 2n-1 are dropped

    arc_map: dict = {}
    if m.pairing[lo] == hi:
        pairing = []
        for p in range(2 * n):
            if p in (lo, hi):
                continue
            pairing.append(relabel(m.pairing[p]))
        for a in m.arcs():
            arc_map[a] = ("circle", 0) if a == frozenset((lo, hi)) else ("arc",
                frozenset(relabel(p) for p in a))
        return TraceInfo(Matching(n - 1, tuple(pairing)), True, arc_map)

    x, y = m.pairing[lo], m.pairing[hi]
    joined = frozenset((relabel(x), relabel(y)))
    pairing = [0] * (2 * n - 2)
    for p in range(2 * n):
        if p in (lo, hi):
            continue
        q = m.pairing[p]
        if q == lo:
            q = y
        elif q == hi:
            q = x
        pairing[relabel(p)] = relabel(q)
    for a in m.arcs():
        if lo in a or hi in a:
            arc_map[a] = ("arc", joined)
        else:
            arc_map[a] = ("arc", frozenset(relabel(p) for p in a))
    return TraceInfo(Matching(n - 1, tuple(pairing)), False, arc_map)


def juxtapose_matchings(left: Matching, right: Matching) -> tuple[Matching, dict]:
    """Place `right` to the right of `left`; returns (result, label map per side)."""
    nl, nr = left.n, right.n
    n = nl + nr

    def map_l(p: int) -> int:
        return p if p < nl else p + nr

    def map_r(p: int) -> int:
        # right bottom j -> nl + j; right top nr + t -> n + nl + t
        return nl + p if p < nr else n + nl + (p - nr)

    pairing = [0] * (2 * n)
    for p, q in enumerate(left.pairing):
        pairing[map_l(p)] = map_l(q)
    for p, q in enumerate(right.pairing):
        pairing[map_r(p)] = map_r(q)
    return Matching(n, tuple(pairing)), {"L": map_l, "R": map_r}


# ---------------------------------------------------------------------------
# TL elements
# ---------------------------------------------------------------------------

class TLElement:
    """Formal sum of crossingless matchings with truncated-series coefficients."""

    __slots__ = ("n", "terms", "precision")

    def __init__(self, n: int, terms: dict[Matching, TruncatedSeries] | None = None,
                 precision: int = DEFAULT_PRECISION):
        self.n = n
        self.precision = precision
        self.terms: dict[Matching, TruncatedSeries] = {}
        for m, s in sorted((terms or {}).items()):
            assert m.n == n, "mixed strand counts in TL element"
            if not s.is_zero():
                self.terms[m] = s

    @classmethod
    def identity(cls, n: int, precision: int = DEFAULT_PRECISION) -> TLElement:
        return cls(n, {Matching.identity(n): TruncatedSeries.one(precision)}, precision)

    @classmethod
    def generator(cls, i: int, n: int, precision: int = DEFAULT_PRECISION) -> TLElement:
        return cls(n, {Matching.e(i, n): TruncatedSeries.one(precision)}, precision)

    @classmethod
    def from_matching(cls, m: Matching, precision: int = DEFAULT_PRECISION) -> TLElement:
        return cls(m.n, {m: TruncatedSeries.one(precision)}, precision)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m: Matching) -> TruncatedSeries:
        return self.terms.get(m, TruncatedSeries.zero(self.precision))

    def __add__(self, other: TLElement) -> TLElement:
        assert self.n == other.n
        acc = dict(self.terms)
        for m, s in other.terms.items():
            acc[m] = acc[m] + s if m in acc else s
        return TLElement(self.n, acc, self.precision)

    def __neg__(self) -> TLElement:
        return TLElement(self.n, {m: -s for m, s in self.terms.items()}, self.precision)

    def __sub__(self, other: TLElement) -> TLElement:
        return self + (-other)

    def scale(self, s: TruncatedSeries | int) -> TLElement:
        return TLElement(self.n, {m: c * s for m, c in self.terms.items()}, self.precision)

    def __mul__(self, other: TLElement) -> TLElement:
        return tl_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TLElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({s})*{m.pairing}" for m, s in self.terms.items())

    def to_json(self) -> list[dict]:
        return [{"matching": list(m.pairing), "series": s.to_json()}
                for m, s in self.terms.items()]


def tl_mul(a: TLElement, b: TLElement) -> TLElement:
    """Stack each diagram of a on top of each diagram of b; loops give (q+q^-1)."""
    if a.n != b.n:
        raise ValueError(f"strand-count mismatch {a.n} != {b.n}")
    if a.precision != b.precision:
        raise PrecisionError("precision mismatch")
    circle = TruncatedSeries.circle(a.precision)
    acc: dict[Matching, TruncatedSeries] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            info = stack_matchings(ma, mb)
            coeff = ca * cb
            for _ in range(info.circles):
                coeff = coeff * circle
            m = info.result
            acc[m] = acc[m] + coeff if m in acc else coeff
    return TLElement(a.n, acc, a.precision)


def through_degree(a: TLElement) -> int:
    """Largest number of top-to-bottom strands among contributing diagrams."""
    if a.is_zero():
        raise ValueError("through-degree of the zero element is undefined")
    return max(m.through_strands() for m in a.terms)


@lru_cache(maxsize=None)
def jw(n: int, precision: int = DEFAULT_PRECISION) -> TLElement:
    """The Jones-Wenzl projector p_n, coefficients expanded as truncated series."""
    if n < 1:
        raise ValueError("jw(n) needs n >= 1")
    if precision < n:
        raise PrecisionError(f"precision {precision} too small to expand [ {n} ]^-1")
    if n == 1:
        return TLElement.identity(1, precision)
    prev = jw(n - 1, precision)
    boxed = juxtapose_tl(prev, TLElement.identity(1, precision))
    coeff = (TruncatedSeries.quantum_integer(n - 1, precision)
             * TruncatedSeries.quantum_integer(n, precision).inverse())
    e_last = TLElement.generator(n - 1, n, precision)
    return boxed - (boxed * e_last * boxed).scale(coeff)


def juxtapose_tl(a: TLElement, b: TLElement) -> TLElement:
    assert a.precision == b.precision
    acc: dict[Matching, TruncatedSeries] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m, _ = juxtapose_matchings(ma, mb)
            c = ca * cb
            acc[m] = acc[m] + c if m in acc else c
    return TLElement(a.n + b.n, acc, a.precision)


def closure_evaluate(a: TLElement) -> TruncatedSeries:
    """Markov-trace closure: close all strands, each loop contributing q+q^-1."""
    circle = TruncatedSeries.circle(a.precision)
    total = TruncatedSeries.zero(a.precision)
    for m, c in a.terms.items():
        loops = 0
        cur = m
        for _ in range(m.n):
            info = trace_matching(cur)
            loops += 1 if info.closed_circle else 0
            cur = info.result
        val = c
        for _ in range(loops):
            val = val * circle
        total = total + val
    return total


def partial_trace_tl(a: TLElement) -> TLElement:
    """Close only the rightmost strand."""
    if a.n < 1:
        raise ValueError("nothing to trace")
    circle = TruncatedSeries.circle(a.precision)
    acc: dict[Matching, TruncatedSeries] = {}
    for m, c in a.terms.items():
        info = trace_matching(m)
        val = c * circle if info.closed_circle else c
        r = info.result
        acc[r] = acc[r] + val if r in acc else val
    return TLElement(a.n - 1, acc, a.precision)


def euler_characteristic(complex_: "Complex", precision: int = DEFAULT_PRECISION) -> TLElement:
    """Alternating sum of chain objects, loops evaluated at q+q^-1."""
    circle = TruncatedSeries.circle(precision)
    acc: dict[Matching, TruncatedSeries] = {}
    for h in complex_.degrees():
        sign = -1 if h % 2 else 1
        for obj in complex_.objects[h]:
            c = TruncatedSeries.monomial(obj.qshift, sign, precision)
            for _ in range(obj.tangle.circles):
                c = c * circle
            m = obj.tangle.matching
            acc[m] = acc[m] + c if m in acc else c
    return TLElement(complex_.n, acc, precision)
