"""The named complexes: crossings, Q2, Q3, truncated projectors, quasi-projectors.

A truncated Cooper-Krushkal projector is materialized at whole-block
granularity: finitely many shifted copies of the bounded quasi-idempotent
block, glued by the connecting map -eta o eps (project to a copy's bottom
object, include into the next copy's top).  Cutting only at copy boundaries
keeps d^2 = 0 exact everywhere and keeps the stored ring-action maps u_k
exact cycles (the block shift vanishing on the deepest copy is a module
structure, not a brutal cutoff).  The recorded window is the range of
degrees in which the truncation agrees with the untruncated projector; the
deepest copy's own objects are truncation artifacts outside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cobordism import CobMorphism, FlatTangle, GradedObject, stack_tangles
from .cobordism import stack as stack_morphism
from .complexes import (ChainMap, Complex, cone, convolution_complete,
                        deloop, juxtapose_complexes, shift, simplify, tensor,
                        tensor_endomorphism, tensor_indexed,
                        transport_endomorphism)

# extra projector depth used when feeding a truncated projector into the
# convolution solver, keeping the guarded equations clear of its artifacts
DEPTH_MARGIN = 8


# ---------------------------------------------------------------------------
# Crossings and brackets
# ---------------------------------------------------------------------------

def crossing_complex(sign: int, n: int = 2, at: int = 1) -> Complex:
    """The oriented crossing complexes: + is q^2 e -> q 1 at degrees (-1, 0);
    - is q^-1 e -> q^-2 1 at degrees (0, 1)."""
    assert sign in (1, -1)
    return braid_letter_complex(1, parallel=(sign > 0), n=n, at=at)


def braid_letter_complex(eps: int, parallel: bool, n: int = 2, at: int = 1) -> Complex:
    """Khovanov complex of one braid letter with given strand orientations.

    eps is the letter's chirality (+1 for sigma, -1 for its inverse); the
    crossing sign is eps for parallel strands and -eps for antiparallel.
    Sigma-letters resolve as (e, 1) with the saddle e -> 1; inverse letters
    swap the two resolutions.
    """
    assert eps in (1, -1)
    e = FlatTangle.e(at, n)
    one = FlatTangle.identity(n)
    b, a = (e, one) if eps > 0 else (one, e)
    sad = CobMorphism.canonical(b, a)
    sign = eps if parallel else -eps
    if sign > 0:
        objs = {-1: [GradedObject(b, 2)], 0: [GradedObject(a, 1)]}
        diff = {-1: {(0, 0): sad}}
    else:
        objs = {0: [GradedObject(b, -1)], 1: [GradedObject(a, -2)]}
        diff = {0: {(0, 0): sad}}
    return Complex(n, objs, diff)


def khovanov_bracket(n: int, word: list, boxes: dict | None = None,
                     incremental: bool = True) -> Complex:
    """Fold a word of square slices bottom-to-top, simplifying along the way.

    Slice vocabulary: an integer +-i is the braid letter sigma_i^{+-1} with
    parallel (upward) orientations; ('e', i) the flat cup-cap generator;
    ('box', label, offset) splices in boxes[label] starting at that column.
    """
    cur = Complex.identity_complex(n)
    for item in word:
        if isinstance(item, int):
            i = abs(item)
            assert 1 <= i <= n - 1, f"bad crossing index {item}"
            sl = pad_columns(braid_letter_complex(1 if item > 0 else -1, True), i, n)
        elif item[0] == "e":
            sl = Complex.generator_complex(item[1], n)
        elif item[0] == "box":
            if boxes is None or item[1] not in boxes:
                raise ValueError(f"unknown box label {item[1]!r}")
            offset = item[2] if len(item) > 2 else 0
            sl = pad_columns(boxes[item[1]], offset + 1, n)
        else:
            raise ValueError(f"unknown slice {item!r}")
        cur = tensor(sl, cur)
        if incremental:
            cur, _ = simplify(cur)
    return cur


def pad_columns(c: Complex, at: int, n: int) -> Complex:
    """Pad a complex to n strands so that it occupies columns at..at+width-1."""
    left, right = at - 1, n - c.n - (at - 1)
    assert left >= 0 and right >= 0, "slice does not fit"
    out = c
    if left:
        out = juxtapose_complexes(Complex.identity_complex(left), out)
    if right:
        out = juxtapose_complexes(out, Complex.identity_complex(right))
    return out


# ---------------------------------------------------------------------------
# The bounded complexes Q2, Q3
# ---------------------------------------------------------------------------

def _dotted(t: FlatTangle, where) -> CobMorphism:
    return CobMorphism.dotted_identity(t, where)


@lru_cache(maxsize=None)
def q2() -> Complex:
    """q^4 1 -> q^3 e -> q e -> 1: saddle, cap-dot minus cup-dot, saddle."""
    one, e = FlatTangle.identity(2), FlatTangle.e(1, 2)
    objs = {-3: [GradedObject(one, 4)], -2: [GradedObject(e, 3)],
            -1: [GradedObject(e, 1)], 0: [GradedObject(one, 0)]}
    diff = {
        -3: {(0, 0): CobMorphism.canonical(one, e)},
        -2: {(0, 0): _dotted(e, 2) - _dotted(e, 0)},
        -1: {(0, 0): CobMorphism.canonical(e, one)},
    }
    c = Complex(2, objs, diff)
    c.check()
    return c


@lru_cache(maxsize=None)
def q3() -> Complex:
    """The bounded 3-strand quasi-idempotent, graded ranks 1,2,2,2,2,1."""
    one = FlatTangle.identity(3)
    e1, e2 = FlatTangle.e(1, 3), FlatTangle.e(2, 3)
    e12 = stack_tangles(e1, e2).tangle   # cup {1,2}, cap {3,4}, strand 0-5
    e21 = stack_tangles(e2, e1).tangle   # cup {0,1}, cap {4,5}, strand 2-3
    sad = CobMorphism.canonical
    objs = {
        -5: [GradedObject(one, 6)],
        -4: [GradedObject(e1, 5), GradedObject(e2, 5)],
        -3: [GradedObject(e12, 4), GradedObject(e21, 4)],
        -2: [GradedObject(e12, 2), GradedObject(e21, 2)],
        -1: [GradedObject(e1, 1), GradedObject(e2, 1)],
        0: [GradedObject(one, 0)],
    }
    diff = {
        -5: {(0, 0): sad(one, e1), (1, 0): sad(one, e2)},
        -4: {(0, 0): sad(e1, e12), (0, 1): -sad(e2, e12),
             (1, 0): -sad(e1, e21), (1, 1): sad(e2, e21)},
        -3: {(0, 0): _dotted(e12, 3) + _dotted(e12, 1), (0, 1): sad(e21, e12),
             (1, 0): sad(e12, e21), (1, 1): _dotted(e21, 4) + _dotted(e21, 0)},
        -2: {(0, 0): sad(e12, e1), (0, 1): -sad(e21, e1),
             (1, 0): -sad(e12, e2), (1, 1): sad(e21, e2)},
        -1: {(0, 0): sad(e1, one), (0, 1): sad(e2, one)},
    }
    c = Complex(3, objs, diff)
    c.check()
    return c


# ---------------------------------------------------------------------------
# Symmetric sequences and the convolution construction of Q_n
# ---------------------------------------------------------------------------

def _hook_tangles(n: int):
    """Cascades D_0 = 1_n, D_k = D_{k-1} over e_{n-k}; also the arcs of the
    deepest cascade carrying the middle dot map (innermost cap and cup)."""
    tangles = [FlatTangle.identity(n)]
    cap_arc = None
    for k in range(1, n):
        lo = n - k - 1  # 0-indexed left foot of the new hook
        hook = FlatTangle.e(n - k, n)
        st = stack_tangles(tangles[-1], hook)
        if k == n - 1:
            kind, val = st.arc_map[("B", frozenset((n + lo, n + lo + 1)))]
            assert kind == "arc"
            cap_arc = val
        tangles.append(st.tangle)
    if n == 2:
        cap_arc = frozenset((2, 3))
    cup_arc = frozenset((0, 1))
    return tangles, cup_arc, cap_arc


def symmetric_sequence(k_complex: Complex, n: int):
    """The 2n-term homotopy chain complex relative to a turnback-killing
    complex on n-1 strands: returns (pieces, alphas) in homological order,
    the last piece at shift zero."""
    assert k_complex.n == n - 1
    hooks, cup_arc, cap_arc = _hook_tangles(n)
    k1 = juxtapose_complexes(k_complex, Complex.identity_complex(1))

    raw_pieces, infos, d_indices = [], [], []
    for k in range(2 * n):
        d_idx = k if k <= n - 1 else 2 * n - 1 - k
        qs = 2 * n - k if k <= n - 1 else 2 * n - 1 - k
        hook_cx = Complex.from_object(GradedObject(hooks[d_idx], 0), n)
        raw, _ = tensor_indexed(k1, hook_cx)
        raw_pieces.append(shift(raw, 0, qs))
        d_indices.append(d_idx)

    def stacked_map(src: Complex, k: int, tgt: Complex, morph_for) -> ChainMap:
        comps = {}
        for h, objs in src.objects.items():
            comps[h] = {}
            for i, obj in enumerate(objs):
                box = k1.objects[h][i].tangle
                comps[h][(i, i)] = morph_for(box, obj)
        return ChainMap(src, tgt, 0, 0, comps)

    raw_alphas = []
    for k in range(2 * n - 1):
        src, tgt = raw_pieces[k], raw_pieces[k + 1]
        di, dj = d_indices[k], d_indices[k + 1]
        if di != dj:
            saddle = CobMorphism.canonical(hooks[di], hooks[dj])

            def morph(box, obj, saddle=saddle):
                return stack_morphism(CobMorphism.identity(box), saddle)
        else:
            def morph(box, obj, di=di):
                st = stack_tangles(box, hooks[di])
                assert st.tangle == obj.tangle
                top = _arc_in(st, cap_arc)
                bot = _arc_in(st, cup_arc)
                return _dotted(obj.tangle, top) - _dotted(obj.tangle, bot)
        raw_alphas.append(stacked_map(src, k, tgt, morph))

    pieces, sdrs = [], []
    for raw in raw_pieces:
        piece, sdr = deloop(raw, track_sdr=True)
        pieces.append(piece)
        sdrs.append(sdr)
    alphas = [sdrs[k].sigma.then(raw_alphas[k]).then(sdrs[k + 1].pi)
              for k in range(2 * n - 1)]
    return pieces, alphas


def _arc_in(st, arc):
    kind, val = st.arc_map[("B", arc)]
    assert kind == "arc"
    return val


@dataclass
class QnBuild:
    complex: Complex
    valid_h_min: int | None  # None: exact everywhere


def build_qn(n: int, window: int = 12) -> QnBuild:
    """A convolution of the symmetric sequence: exact for n = 2, window-valid
    for n = 3 (relative to a truncated 2-strand projector)."""
    if n == 2:
        pieces, alphas = symmetric_sequence(Complex.identity_complex(1), 2)
        out = convolution_complete(pieces, alphas)
        out.check()
        return QnBuild(out, None)
    if n == 3:
        proj = truncated_pn(2, window + DEPTH_MARGIN)
        pieces, alphas = symmetric_sequence(proj.complex, 3)
        guard = -(window + 2)
        out = convolution_complete(pieces, alphas, min_total_degree=guard)
        out = out.truncate_below(guard + 2)
        out.check()
        # the trim edge itself carries truncation artifacts
        return QnBuild(out, guard + 3)
    raise ValueError("build_qn supports n in {2, 3} at desk scale")


# ---------------------------------------------------------------------------
# Truncated projectors
# ---------------------------------------------------------------------------

@dataclass
class TruncatedProjector:
    n: int
    window: int                      # stored degrees reach down to -window
    complex: Complex
    unit: ChainMap                   # 1_n -> complex (inclusion of the top)
    u_maps: dict[int, ChainMap]      # k -> exact cycle of bidegree (2-2k, 2k)

    def check(self) -> None:
        self.complex.check()
        top = self.complex.objects.get(0, [])
        assert len(top) == 1 and top[0].tangle == FlatTangle.identity(self.n) \
            and top[0].qshift == 0, "degree zero is not exactly 1_n"
        assert self.unit.is_cycle(), "unit is not a chain map"
        for k, u in self.u_maps.items():
            assert (u.dh, u.dq) == (2 - 2 * k, 2 * k), f"u_{k} bidegree"
            u.check_degrees()
            assert u.is_cycle(), f"u_{k} is not a chain map"


def _periodic_model(block: Complex, n: int, window: int):
    """Z[u_n]/(u^B) tensored with the block: shifted copies glued by -identity
    from each copy's bottom object into the next copy's top.

    Whole copies only: the u-shift map (zero on the deepest copy) then
    commutes with the differential exactly, and d^2 = 0 holds everywhere.
    """
    dh, dq = 2 - 2 * n, 2 * n
    span = -block.h_min()
    copies = 1
    # the deepest copy's own objects are truncation artifacts; overshoot so
    # that degrees >= -window agree with the untruncated projector
    while (copies - 1) * (-dh) + span < window + span:
        copies += 1
    shifted = [shift(block, b * dh, b * dq) for b in range(copies)]
    objects: dict[int, list[GradedObject]] = {}
    place: dict[tuple[int, int, int], tuple[int, int]] = {}
    for b, cpy in enumerate(shifted):
        for h, objs in cpy.objects.items():
            lst = objects.setdefault(h, [])
            for idx, o in enumerate(objs):
                place[(b, h, idx)] = (h, len(lst))
                lst.append(o)
    diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for b, cpy in enumerate(shifted):
        for h, entries in cpy.diff.items():
            for (i, j), m in entries.items():
                (_, sidx) = place[(b, h, j)]
                (_, tidx) = place[(b, h + 1, i)]
                slot = diff.setdefault(h, {})
                slot[(tidx, sidx)] = m
    bottom_rel = block.h_min()
    bottom_obj = block.objects[bottom_rel][0]
    assert len(block.objects[bottom_rel]) == 1, "block bottom is not a single object"
    for b in range(copies - 1):
        hs = bottom_rel + b * dh
        (_, sidx) = place[(b, hs, 0)]
        (_, tidx) = place[(b + 1, block.h_max() + (b + 1) * dh, 0)]
        assert block.h_max() + (b + 1) * dh == hs + 1, "connector degree mismatch"
        slot = diff.setdefault(hs, {})
        key = (tidx, sidx)
        delta = CobMorphism.identity(bottom_obj.tangle).scale(-1)
        slot[key] = slot[key] + delta if key in slot else delta
    per = Complex(n, objects, diff)

    u_comps: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for b in range(copies - 1):
        for h, objs in shifted[b].objects.items():
            for idx, o in enumerate(objs):
                src = place[(b, h, idx)]
                tgt = place.get((b + 1, h + dh, idx))
                if tgt is None:
                    continue
                u_comps.setdefault(h, {})[(tgt[1], src[1])] = \
                    CobMorphism.identity(o.tangle)
    u_map = ChainMap(per, per, dh, dq, u_comps)
    return per, u_map


def _bare_unit(c: Complex, n: int) -> ChainMap:
    """Inclusion of the 1_n chain object at degree zero (always a chain map)."""
    ident = Complex.identity_complex(n)
    top = c.objects[0]
    idx = next(i for i, o in enumerate(top)
               if o.tangle == FlatTangle.identity(n) and o.qshift == 0)
    return ChainMap(ident, c, 0, 0,
                    {0: {(idx, 0): CobMorphism.identity(FlatTangle.identity(n))}})


def _u1_map(c: Complex) -> ChainMap:
    """Dot on the sheet at the bottom-left boundary point of every object."""
    comps = {h: {(i, i): _dotted(o.tangle, 0) for i, o in enumerate(objs)}
             for h, objs in c.objects.items()}
    return ChainMap(c, c, 0, 2, comps)


@lru_cache(maxsize=None)
def truncated_pn(n: int, window: int = 12) -> TruncatedProjector:
    """Truncated Cooper-Krushkal projector with unit and u-action maps."""
    if n == 1:
        c = Complex.identity_complex(1)
        proj = TruncatedProjector(1, window, c, _bare_unit(c, 1), {1: _u1_map(c)})
        proj.check()
        return proj
    if n == 2:
        per, u2per = _periodic_model(q2(), 2, window)
        simp, sdr = simplify(per, track_sdr=True)
        u2 = transport_endomorphism(u2per, sdr)
        proj = TruncatedProjector(2, window, simp, _bare_unit(simp, 2),
                                  {1: _u1_map(simp), 2: u2})
        proj.check()
        return proj
    if n == 3:
        p2 = truncated_pn(2, window)
        per3, u3per = _periodic_model(q3(), 3, window)
        left = juxtapose_complexes(p2.complex, Complex.identity_complex(1))
        raw, index = tensor_indexed(left, per3)
        u2raw = tensor_endomorphism(_pad_right(p2.u_maps[2], left), None,
                                    left, per3, raw, index)
        u3raw = tensor_endomorphism(None, u3per, left, per3, raw, index)
        delooped, dsdr = deloop(raw, track_sdr=True)
        u2d = transport_endomorphism(u2raw, dsdr)
        u3d = transport_endomorphism(u3raw, dsdr)
        simp, sdr = simplify(delooped, track_sdr=True)
        u2 = transport_endomorphism(u2d, sdr)
        u3 = transport_endomorphism(u3d, sdr)
        proj = TruncatedProjector(3, window, simp, _bare_unit(simp, 3),
                                  {1: _u1_map(simp), 2: u2, 3: u3})
        proj.check()
        return proj
    raise ValueError("truncated_pn supports n <= 3 at desk scale")


def _pad_right(f: ChainMap, padded: Complex) -> ChainMap:
    """Extend an endomorphism of `original` to `original u 1` by the identity.

    Object order in juxtapose_complexes with a one-object factor matches the
    original's object order degree by degree.
    """
    comps: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    from .cobordism import juxtapose as juxtapose_morphism
    strand = CobMorphism.identity(FlatTangle.identity(1))
    for h, entries in f.components.items():
        comps[h] = {k: juxtapose_morphism(m, strand) for k, m in entries.items()}
    return ChainMap(padded, padded, f.dh, f.dq, comps)


# ---------------------------------------------------------------------------
# Quasi-projectors and turnback reports
# ---------------------------------------------------------------------------

def q1() -> Complex:
    """Cone of the dotted identity q^2 1_1 -> 1_1."""
    src = Complex.identity_complex(1, 2)
    tgt = Complex.identity_complex(1)
    dot = ChainMap(src, tgt, 0, 0,
                   {0: {(0, 0): _dotted(FlatTangle.identity(1), 0)}})
    return cone(dot)


def _q_piece(k: int, n: int) -> Complex:
    if k == 1:
        base = q1()
    elif k == 2:
        base = q2()
    elif k == 3:
        base = q3()
    else:
        raise ValueError(f"no bounded quasi-idempotent block for k = {k}")
    return pad_columns(base, 1, n)


def quasi_projector(n: int, indices: tuple[int, ...] | list[int],
                    window: int = 12) -> QnBuild:
    """P_n(i_1, ..., i_r): bounded when n appears among the indices.

    Realized as (Q_{i_1} u 1) (x) ... (x) (Q_{i_r} u 1) (x) P_n, with the
    projector factor absorbed when some index equals n; empty indices give
    the truncated projector itself.
    """
    indices = tuple(indices)
    assert all(1 <= i <= n for i in indices), "index out of range"
    if not indices:
        proj = truncated_pn(n, window)
        return QnBuild(proj.complex, None if n == 1 else -window + 2)
    cur = None
    for k in indices:
        piece = _q_piece(k, n)
        cur = piece if cur is None else tensor(cur, piece)
        cur, _ = simplify(cur)
    if n in indices:
        return QnBuild(cur, None)
    proj = truncated_pn(n, window)
    cur, _ = simplify(tensor(cur, proj.complex))
    return QnBuild(cur, -window + 4)


def turnback_check(c: Complex, valid_h_min: int | None = None) -> dict:
    """Simplify c (x) e_i and e_i (x) c for every generator; report residues."""
    report: dict = {"n": c.n, "valid_h_min": valid_h_min, "generators": {}}
    for i in range(1, c.n):
        gen = Complex.generator_complex(i, c.n)
        right, _ = simplify(tensor(c, gen))
        left, _ = simplify(tensor(gen, c))
        def summarize(s: Complex) -> dict:
            ranks = s.graded_ranks()
            if valid_h_min is not None:
                ranks = {k: v for k, v in ranks.items() if k[0] >= valid_h_min}
            return {"ranks": {f"{h},{q}": r for (h, q), r in sorted(ranks.items())},
                    "zero": not ranks}
        report["generators"][i] = {"right": summarize(right),
                                   "left": summarize(left)}
    report["kills_turnbacks"] = all(
        v["right"]["zero"] and v["left"]["zero"]
        for v in report["generators"].values()) if c.n > 1 else True
    return report
