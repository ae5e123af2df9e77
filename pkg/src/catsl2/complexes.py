"""Chain complexes over the additive closure of the dotted cobordism category.

A Complex stores, per homological degree, an ordered list of GradedObjects
and a sparse differential matrix of CobMorphisms.  Shift conventions: the
upward shift t flips the sign of the differential, and tensor differentials
follow the Koszul rule d(a x b) = d(a) x b + (-1)^deg(a) a x d(b).

Everything here returns new complexes; values are immutable by convention.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations, product

from .cobordism import (CobMorphism, FlatTangle, GradedObject, compose, dual as
                        dual_morphism, glue, juxtapose as juxtapose_morphism,
                        juxtapose_tangles, partial_trace as trace_morphism,
                        flip_tangle, stack, stack_tangles, trace_tangle)


class EngineLimitError(RuntimeError):
    """Object-count ceiling exceeded (see QPE_MAX_OBJECTS)."""


def object_ceiling() -> int:
    return int(os.environ.get("QPE_MAX_OBJECTS", "200000"))


class Complex:
    __slots__ = ("n", "objects", "diff")

    def __init__(self, n: int, objects: dict[int, list[GradedObject]],
                 diff: dict[int, dict[tuple[int, int], CobMorphism]]):
        self.n = n
        self.objects = {h: list(objs) for h, objs in sorted(objects.items()) if objs}
        self.diff = {}
        for h, entries in sorted(diff.items()):
            kept = {k: m for k, m in entries.items() if not m.is_zero()}
            if kept and h in self.objects and h + 1 in self.objects:
                self.diff[h] = kept

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_object(cls, obj: GradedObject, n: int, h: int = 0) -> Complex:
        return cls(n, {h: [obj]}, {})

    @classmethod
    def identity_complex(cls, n: int, qshift: int = 0) -> Complex:
        return cls.from_object(GradedObject(FlatTangle.identity(n), qshift), n)

    @classmethod
    def generator_complex(cls, i: int, n: int, qshift: int = 0) -> Complex:
        return cls.from_object(GradedObject(FlatTangle.e(i, n), qshift), n)

    @classmethod
    def empty_diagram(cls) -> Complex:
        return cls.identity_complex(0)

    @classmethod
    def zero(cls, n: int) -> Complex:
        return cls(n, {}, {})

    # -- inspection ----------------------------------------------------------

    def degrees(self) -> list[int]:
        return list(self.objects)

    def is_zero(self) -> bool:
        return not self.objects

    def h_min(self) -> int:
        return min(self.objects) if self.objects else 0

    def h_max(self) -> int:
        return max(self.objects) if self.objects else 0

    def total_objects(self) -> int:
        return sum(len(o) for o in self.objects.values())

    def graded_ranks(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for h, objs in self.objects.items():
            for o in objs:
                out[(h, o.qshift)] = out.get((h, o.qshift), 0) + 1
        return out

    def entry(self, h: int, i: int, j: int) -> CobMorphism | None:
        return self.diff.get(h, {}).get((i, j))

    def check(self, d_squared: bool = True) -> None:
        """Validate entry degrees (and d^2 = 0)."""
        for h, entries in self.diff.items():
            for (i, j), m in entries.items():
                src = self.objects[h][j]
                tgt = self.objects[h + 1][i]
                assert m.src == src.tangle and m.tgt == tgt.tangle, "entry endpoints"
                assert m.deg_raw() == src.qshift - tgt.qshift, \
                    f"entry degree at h={h} ({i},{j})"
        if d_squared:
            for h in self.diff:
                if h + 1 not in self.diff:
                    continue
                acc: dict[tuple[int, int], CobMorphism] = {}
                for (i, j), m in self.diff[h].items():
                    for (k, i2), m2 in self.diff[h + 1].items():
                        if i2 != i:
                            continue
                        c = compose(m2, m)
                        if (k, j) in acc:
                            acc[(k, j)] = acc[(k, j)] + c
                        else:
                            acc[(k, j)] = c
                for key, m in acc.items():
                    assert m.is_zero(), f"d^2 != 0 at h={h} {key}: {m}"

    def truncate_below(self, h_cut: int) -> Complex:
        """Brutal truncation keeping degrees >= h_cut (d^2 = 0 is preserved)."""
        objects = {h: objs for h, objs in self.objects.items() if h >= h_cut}
        diff = {h: dict(entries) for h, entries in self.diff.items() if h >= h_cut}
        return Complex(self.n, objects, diff)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degrees": [{"h": h, "objects": [{"matching": list(o.tangle.matching.pairing),
                                              "circles": o.tangle.circles,
                                              "qshift": o.qshift}
                                             for o in objs]}
                        for h, objs in self.objects.items()],
            "differential": [{"h": h, "entries": [{"row": i, "col": j,
                                                   "morphism": m.to_json()}
                                                  for (i, j), m in sorted(entries.items())]}
                             for h, entries in self.diff.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> Complex:
        from .tl import Matching
        n = data["n"]
        objects = {}
        for row in data["degrees"]:
            objs = [GradedObject(FlatTangle(n, Matching(n, tuple(o["matching"])),
                                            o.get("circles", 0)), o["qshift"])
                    for o in row["objects"]]
            objects[row["h"]] = objs
        diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}
        for row in data.get("differential", []):
            h = row["h"]
            entries = {}
            for e in row["entries"]:
                src = objects[h][e["col"]].tangle
                tgt = objects[h + 1][e["row"]].tangle
                info = glue(src, tgt)
                terms = {}
                for t in e["morphism"]["terms"]:
                    mask = 0
                    for c in t["dots"]:
                        mask |= 1 << c
                    terms[mask] = t["coeff"]
                entries[(e["row"], e["col"])] = CobMorphism(src, tgt, terms)
            diff[h] = entries
        return cls(n, objects, diff)


# ---------------------------------------------------------------------------
# Chain maps and deformation retracts
# ---------------------------------------------------------------------------

class ChainMap:
    """Bihomogeneous map of complexes; components[h][(i, j)] sends
    src.objects[h][j] to tgt.objects[h + dh][i]."""

    __slots__ = ("src", "tgt", "dh", "dq", "components")

    def __init__(self, src: Complex, tgt: Complex, dh: int, dq: int,
                 components: dict[int, dict[tuple[int, int], CobMorphism]]):
        self.src, self.tgt, self.dh, self.dq = src, tgt, dh, dq
        self.components = {}
        for h, entries in sorted(components.items()):
            kept = {k: m for k, m in entries.items() if not m.is_zero()}
            if kept:
                self.components[h] = kept

    @classmethod
    def zero(cls, src: Complex, tgt: Complex, dh: int = 0, dq: int = 0) -> ChainMap:
        return cls(src, tgt, dh, dq, {})

    @classmethod
    def identity(cls, c: Complex) -> ChainMap:
        comps = {h: {(i, i): CobMorphism.identity(o.tangle)
                     for i, o in enumerate(objs)}
                 for h, objs in c.objects.items()}
        return cls(c, c, 0, 0, comps)

    def component(self, h: int, i: int, j: int) -> CobMorphism | None:
        return self.components.get(h, {}).get((i, j))

    def check_degrees(self) -> None:
        for h, entries in self.components.items():
            for (i, j), m in entries.items():
                src = self.src.objects[h][j]
                tgt = self.tgt.objects[h + self.dh][i]
                assert m.src == src.tangle and m.tgt == tgt.tangle
                assert m.deg_raw() == src.qshift + self.dq - tgt.qshift, \
                    f"component degree at h={h} ({i},{j})"

    def __add__(self, other: ChainMap) -> ChainMap:
        assert (self.src, self.tgt, self.dh, self.dq) == \
               (other.src, other.tgt, other.dh, other.dq)
        comps = {h: dict(entries) for h, entries in self.components.items()}
        for h, entries in other.components.items():
            tgt = comps.setdefault(h, {})
            for k, m in entries.items():
                tgt[k] = tgt[k] + m if k in tgt else m
        return ChainMap(self.src, self.tgt, self.dh, self.dq, comps)

    def __neg__(self) -> ChainMap:
        return self.scale(-1)

    def __sub__(self, other: ChainMap) -> ChainMap:
        return self + (-other)

    def scale(self, k: int) -> ChainMap:
        return ChainMap(self.src, self.tgt, self.dh, self.dq,
                        {h: {key: m.scale(k) for key, m in entries.items()}
                         for h, entries in self.components.items()})

    def then(self, other: ChainMap) -> ChainMap:
        """other after self (self first)."""
        assert self.tgt is other.src or self.tgt.objects == other.src.objects
        comps: dict[int, dict[tuple[int, int], CobMorphism]] = {}
        for h, entries in self.components.items():
            mid_h = h + self.dh
            other_entries = other.components.get(mid_h, {})
            for (i, j), m in entries.items():
                for (k, i2), m2 in other_entries.items():
                    if i2 != i:
                        continue
                    c = compose(m2, m)
                    if c.is_zero():
                        continue
                    tgt = comps.setdefault(h, {})
                    key = (k, j)
                    tgt[key] = tgt[key] + c if key in tgt else c
        return ChainMap(self.src, other.tgt, self.dh + other.dh,
                        self.dq + other.dq, comps)

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return ((self.dh, self.dq) == (other.dh, other.dq)
                and (self - other).is_zero())

    def commutator(self) -> ChainMap:
        """[d, f] = d_tgt o f - (-1)^dh f o d_src (zero iff f is a chain map)."""
        left = self.then(differential_map(self.tgt))
        right = differential_map(self.src).then(self)
        sign = -1 if self.dh % 2 else 1
        return left - right.scale(sign)

    def is_cycle(self) -> bool:
        return self.commutator().is_zero()


def differential_map(c: Complex) -> ChainMap:
    """The differential packaged as a bidegree (1, 0) map (not a chain map)."""
    return ChainMap(c, c, 1, 0, {h: dict(e) for h, e in c.diff.items()})


@dataclass
class SDRData:
    """Strong deformation retract: pi: M -> N, sigma: N -> M, h: M -> M (-1,0)."""

    pi: ChainMap
    sigma: ChainMap
    homotopy: ChainMap

    def verify(self) -> None:
        m, n = self.pi.src, self.pi.tgt
        assert (self.sigma.then(self.pi) - ChainMap.identity(n)).is_zero(), "pi o sigma"
        dh = differential_map(m)
        lhs = (ChainMap.identity(m) - self.pi.then(self.sigma))
        rhs = self.homotopy.then(dh) + dh.then(self.homotopy)
        assert (lhs - rhs).is_zero(), "Id - sigma pi = dh + hd"
        assert self.homotopy.then(self.pi).is_zero(), "pi o h = 0"
        assert self.sigma.then(self.homotopy).is_zero(), "h o sigma = 0"
        assert self.homotopy.then(self.homotopy).is_zero(), "h^2 = 0"

    @classmethod
    def identity(cls, c: Complex) -> SDRData:
        ident = ChainMap.identity(c)
        return cls(ident, ident, ChainMap.zero(c, c, -1, 0))

    def then(self, other: SDRData) -> SDRData:
        """Compose retracts M -> N -> L."""
        return SDRData(self.pi.then(other.pi),
                       other.sigma.then(self.sigma),
                       self.homotopy + self.pi.then(other.homotopy).then(self.sigma))


def transport_endomorphism(f: ChainMap, sdr: SDRData) -> ChainMap:
    """Conjugate an endomorphism of sdr's source through the retract."""
    return sdr.sigma.then(f).then(sdr.pi)


# ---------------------------------------------------------------------------
# Delooping
# ---------------------------------------------------------------------------

def deloop(c: Complex, track_sdr: bool = False) -> tuple[Complex, SDRData | None]:
    """Replace every circle by the pair of q-shifted circle-free objects."""
    if all(o.tangle.circles == 0 for objs in c.objects.values() for o in objs):
        return c, (SDRData.identity(c) if track_sdr else None)

    new_objects: dict[int, list[GradedObject]] = {}
    # per degree, per old index: list of (new index, pi morphism, sigma morphism)
    expansion: dict[int, list[list[tuple[int, CobMorphism, CobMorphism]]]] = {}
    for h, objs in c.objects.items():
        new_objects[h] = []
        expansion[h] = []
        for obj in objs:
            t = obj.tangle
            cnum = t.circles
            exp = []
            if cnum == 0:
                idx = len(new_objects[h])
                new_objects[h].append(obj)
                exp.append((idx, CobMorphism.identity(t), CobMorphism.identity(t)))
            else:
                for signs in product((1, -1), repeat=cnum):
                    # pi: cap circles from the last down to index 0
                    # (undotted cap lands in the q+1 summand, dotted in q-1)
                    pi = None
                    cur = t
                    for k in range(cnum - 1, -1, -1):
                        cap = CobMorphism.cap_circle(cur, dotted=(signs[k] == -1))
                        pi = cap if pi is None else compose(cap, pi)
                        cur = cur.drop_circle()
                    # sigma: cup the circles back, dotted from the q+1 summand
                    sigma = None
                    cur = FlatTangle(t.n, t.matching, 0)
                    for k in range(0, cnum):
                        grown = cur.add_circles(1)
                        cup = CobMorphism.cup_circle(grown, dotted=(signs[k] == 1))
                        sigma = cup if sigma is None else compose(cup, sigma)
                        cur = grown
                    idx = len(new_objects[h])
                    new_objects[h].append(
                        GradedObject(FlatTangle(t.n, t.matching, 0),
                                     obj.qshift + sum(signs)))
                    exp.append((idx, pi, sigma))
            expansion[h].append(exp)
        if len(new_objects[h]) > object_ceiling():
            raise EngineLimitError(f"deloop exceeded ceiling at degree {h}")

    new_diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for h, entries in c.diff.items():
        out: dict[tuple[int, int], CobMorphism] = {}
        for (i, j), m in entries.items():
            if (c.objects[h][j].tangle.circles == 0
                    and c.objects[h + 1][i].tangle.circles == 0):
                key = (expansion[h + 1][i][0][0], expansion[h][j][0][0])
                out[key] = out[key] + m if key in out else m
                continue
            for (aj, _, sig) in expansion[h][j]:
                m_sig = compose(m, sig)
                for (bi, pi, _) in expansion[h + 1][i]:
                    r = compose(pi, m_sig)
                    if r.is_zero():
                        continue
                    key = (bi, aj)
                    out[key] = out[key] + r if key in out else r
        new_diff[h] = out

    result = Complex(c.n, new_objects, new_diff)
    if not track_sdr:
        return result, None
    pi_comps: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    sg_comps: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for h, rows in expansion.items():
        pi_comps[h] = {}
        sg_comps[h] = {}
        for j, exp in enumerate(rows):
            for (idx, pi, sig) in exp:
                pi_comps[h][(idx, j)] = pi
                sg_comps[h][(j, idx)] = sig
    sdr = SDRData(ChainMap(c, result, 0, 0, pi_comps),
                  ChainMap(result, c, 0, 0, sg_comps),
                  ChainMap.zero(c, c, -1, 0))
    return result, sdr


# ---------------------------------------------------------------------------
# Gaussian elimination and the simplifier
# ---------------------------------------------------------------------------

def gauss(c: Complex, h: int, i: int, j: int,
          track_sdr: bool = False) -> tuple[Complex, SDRData | None]:
    """Cancel the invertible entry objects[h][j] -> objects[h+1][i]."""
    pivot = c.entry(h, i, j)
    assert pivot is not None and pivot.is_identity_entry(), \
        "pivot entry is not +-identity"
    eps = pivot.terms[0]  # +-1; the inverse is the same morphism scaled by eps

    ins = {s: m for (ti, s), m in c.diff.get(h, {}).items() if ti == i and s != j}
    outs = {t: m for (t, sj), m in c.diff.get(h, {}).items() if sj == j and t != i}

    new_objects = {}
    for hh, objs in c.objects.items():
        keep = [o for idx, o in enumerate(objs)
                if not (hh == h and idx == j) and not (hh == h + 1 and idx == i)]
        new_objects[hh] = keep

    def reindex(hh: int, idx: int) -> int:
        if hh == h and idx > j:
            return idx - 1
        if hh == h + 1 and idx > i:
            return idx - 1
        return idx

    new_diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for hh, entries in c.diff.items():
        out: dict[tuple[int, int], CobMorphism] = {}
        for (ti, sj), m in entries.items():
            if hh == h and (sj == j or ti == i):
                continue
            if hh == h - 1 and ti == j:
                continue
            if hh == h + 1 and sj == i:
                continue
            out[(reindex(hh + 1, ti), reindex(hh, sj))] = m
        new_diff[hh] = out
    corr = new_diff.setdefault(h, {})
    for s, a in ins.items():
        for t, b in outs.items():
            key = (reindex(h + 1, t), reindex(h, s))
            delta = compose(b, a).scale(-eps)
            corr[key] = corr[key] + delta if key in corr else delta

    result = Complex(c.n, new_objects, new_diff)
    if not track_sdr:
        return result, None

    pi_comps: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    sg_comps: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for hh, objs in c.objects.items():
        for idx, o in enumerate(objs):
            if (hh == h and idx == j) or (hh == h + 1 and idx == i):
                continue
            ident = CobMorphism.identity(o.tangle)
            pi_comps.setdefault(hh, {})[(reindex(hh, idx), idx)] = ident
            sg_comps.setdefault(hh, {})[(idx, reindex(hh, idx))] = ident
    for t, b in outs.items():
        # pi component from the removed object at h+1 into survivors at h+1
        pi_comps.setdefault(h + 1, {})[(reindex(h + 1, t), i)] = b.scale(-eps)
    for s, a in ins.items():
        # sigma component from survivors at h into the removed object at h
        sg_comps.setdefault(h, {})[(j, reindex(h, s))] = a.scale(-eps)
    hom = ChainMap(c, c, -1, 0,
                   {h + 1: {(j, i): CobMorphism.identity(pivot.src).scale(eps)}})
    sdr = SDRData(ChainMap(c, result, 0, 0, pi_comps),
                  ChainMap(result, c, 0, 0, sg_comps), hom)
    return result, sdr


def _find_pivot(c: Complex) -> tuple[int, int, int] | None:
    for h in c.diff:
        best = None
        for (i, j), m in c.diff[h].items():
            if m.is_identity_entry():
                key = (j, i)
                if best is None or key < best:
                    best = key
        if best is not None:
            return h, best[1], best[0]
    return None


def simplify(c: Complex, track_sdr: bool = False) -> tuple[Complex, SDRData | None]:
    """Deloop, then cancel +-identity entries until none remain."""
    cur, sdr = deloop(c, track_sdr)
    while True:
        pivot = _find_pivot(cur)
        if pivot is None:
            break
        h, i, j = pivot
        cur, step = gauss(cur, h, i, j, track_sdr)
        if track_sdr:
            sdr = sdr.then(step)
    return cur, sdr


# ---------------------------------------------------------------------------
# Functors
# ---------------------------------------------------------------------------

def tensor(a: Complex, b: Complex, delooped: bool = True) -> Complex:
    """Vertical stacking (a on top of b) with the Koszul sign on d_b."""
    raw, _ = tensor_indexed(a, b)
    if not delooped:
        return raw
    return deloop(raw)[0]


def tensor_indexed(a: Complex, b: Complex):
    """Undelooped tensor plus the map (ha, ia, hb, ib) -> (h, index)."""
    if a.n != b.n:
        raise ValueError("strand-count mismatch in tensor")
    index: dict[tuple[int, int, int, int], tuple[int, int]] = {}
    objects: dict[int, list[GradedObject]] = {}
    for ha, objas in a.objects.items():
        for hb, objbs in b.objects.items():
            h = ha + hb
            lst = objects.setdefault(h, [])
            for ia, oa in enumerate(objas):
                for ib, ob in enumerate(objbs):
                    st = stack_tangles(oa.tangle, ob.tangle)
                    index[(ha, ia, hb, ib)] = (h, len(lst))
                    lst.append(GradedObject(st.tangle, oa.qshift + ob.qshift))
            if len(lst) > object_ceiling():
                raise EngineLimitError("tensor exceeded object ceiling")
    diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}

    def add(hsrc: int, src_idx: int, tgt_idx: int, m: CobMorphism):
        if m.is_zero():
            return
        entries = diff.setdefault(hsrc, {})
        key = (tgt_idx, src_idx)
        entries[key] = entries[key] + m if key in entries else m

    for (ha, ia, hb, ib), (h, idx) in index.items():
        oa = a.objects[ha][ia]
        ob = b.objects[hb][ib]
        for (i2, j2), m in a.diff.get(ha, {}).items():
            if j2 != ia:
                continue
            _, tidx = index[(ha + 1, i2, hb, ib)]
            add(h, idx, tidx, stack(m, CobMorphism.identity(ob.tangle)))
        sign = -1 if ha % 2 else 1
        for (i2, j2), m in b.diff.get(hb, {}).items():
            if j2 != ib:
                continue
            _, tidx = index[(ha, ia, hb + 1, i2)]
            add(h, idx, tidx, stack(CobMorphism.identity(oa.tangle), m).scale(sign))

    return Complex(a.n, objects, diff), index


def tensor_endomorphism(f: ChainMap | None, g: ChainMap | None,
                        a: Complex, b: Complex, raw: Complex, index) -> ChainMap:
    """f (x) id + Koszul-signed id (x) g on an undelooped tensor (one of f, g).

    For f on the left factor: (f x id)(x (x) y) = f(x) (x) y; for g on the
    right: (id x g)(x (x) y) = (-1)^(deg x * deg g) x (x) g(y).
    """
    assert (f is None) != (g is None)
    dh = f.dh if f else g.dh
    dq = f.dq if f else g.dq
    comps: dict[int, dict[tuple[int, int], CobMorphism]] = {}

    def add(h, sidx, tidx, m):
        if m.is_zero():
            return
        slot = comps.setdefault(h, {})
        key = (tidx, sidx)
        slot[key] = slot[key] + m if key in slot else m

    for (ha, ia, hb, ib), (h, idx) in index.items():
        oa, ob = a.objects[ha][ia], b.objects[hb][ib]
        if f is not None:
            for (i2, j2), m in f.components.get(ha, {}).items():
                if j2 != ia:
                    continue
                key = (ha + f.dh, i2, hb, ib)
                if key not in index:
                    continue
                _, tidx = index[key]
                add(h, idx, tidx, stack(m, CobMorphism.identity(ob.tangle)))
        else:
            sign = -1 if (ha * g.dh) % 2 else 1
            for (i2, j2), m in g.components.get(hb, {}).items():
                if j2 != ib:
                    continue
                key = (ha, ia, hb + g.dh, i2)
                if key not in index:
                    continue
                _, tidx = index[key]
                add(h, idx, tidx,
                    stack(CobMorphism.identity(oa.tangle), m).scale(sign))
    return ChainMap(raw, raw, dh, dq, comps)


def restrict_endomorphism(f: ChainMap, newc: Complex) -> ChainMap:
    """Reattach an endomorphism to a degree-truncation of its complex."""
    comps = {h: dict(entries) for h, entries in f.components.items()
             if h in newc.objects and h + f.dh in newc.objects}
    return ChainMap(newc, newc, f.dh, f.dq, comps)


def juxtapose_complexes(a: Complex, b: Complex, delooped: bool = True) -> Complex:
    """Horizontal disjoint union (a on the left), Koszul sign on the right factor."""
    index: dict[tuple[int, int, int, int], tuple[int, int]] = {}
    objects: dict[int, list[GradedObject]] = {}
    for ha, objas in a.objects.items():
        for hb, objbs in b.objects.items():
            h = ha + hb
            lst = objects.setdefault(h, [])
            for ia, oa in enumerate(objas):
                for ib, ob in enumerate(objbs):
                    t, _ = juxtapose_tangles(oa.tangle, ob.tangle)
                    index[(ha, ia, hb, ib)] = (h, len(lst))
                    lst.append(GradedObject(t, oa.qshift + ob.qshift))
    diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}

    def add(hsrc, src_idx, tgt_idx, m):
        if m.is_zero():
            return
        entries = diff.setdefault(hsrc, {})
        key = (tgt_idx, src_idx)
        entries[key] = entries[key] + m if key in entries else m

    for (ha, ia, hb, ib), (h, idx) in index.items():
        oa, ob = a.objects[ha][ia], b.objects[hb][ib]
        for (i2, j2), m in a.diff.get(ha, {}).items():
            if j2 != ia:
                continue
            _, tidx = index[(ha + 1, i2, hb, ib)]
            add(h, idx, tidx, juxtapose_morphism(m, CobMorphism.identity(ob.tangle)))
        sign = -1 if ha % 2 else 1
        for (i2, j2), m in b.diff.get(hb, {}).items():
            if j2 != ib:
                continue
            _, tidx = index[(ha, ia, hb + 1, i2)]
            add(h, idx, tidx,
                juxtapose_morphism(CobMorphism.identity(oa.tangle), m).scale(sign))

    out = Complex(a.n + b.n, objects, diff)
    return deloop(out)[0] if delooped else out


def partial_trace_complex(c: Complex, delooped: bool = True) -> Complex:
    if c.n < 1:
        raise ValueError("partial trace needs at least one strand")
    objects = {h: [GradedObject(trace_tangle(o.tangle).tangle, o.qshift)
                   for o in objs]
               for h, objs in c.objects.items()}
    diff = {h: {k: trace_morphism(m) for k, m in entries.items()}
            for h, entries in c.diff.items()}
    out = Complex(c.n - 1, objects, diff)
    return deloop(out)[0] if delooped else out


def shift(c: Complex, dh: int, dq: int) -> Complex:
    """t^dh q^dq; the differential picks up (-1)^dh."""
    sign = -1 if dh % 2 else 1
    objects = {h + dh: [GradedObject(o.tangle, o.qshift + dq) for o in objs]
               for h, objs in c.objects.items()}
    diff = {h + dh: {k: m.scale(sign) for k, m in entries.items()}
            for h, entries in c.diff.items()}
    return Complex(c.n, objects, diff)


def direct_sum(a: Complex, b: Complex) -> Complex:
    assert a.n == b.n
    objects: dict[int, list[GradedObject]] = {}
    offset: dict[int, int] = {}
    for h, objs in a.objects.items():
        objects[h] = list(objs)
    for h, objs in b.objects.items():
        offset[h] = len(objects.get(h, []))
        objects.setdefault(h, []).extend(objs)
    diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for h, entries in a.diff.items():
        diff[h] = dict(entries)
    for h, entries in b.diff.items():
        o_src, o_tgt = offset.get(h, 0), offset.get(h + 1, 0)
        tgt = diff.setdefault(h, {})
        for (i, j), m in entries.items():
            tgt[(i + o_tgt, j + o_src)] = m
    return Complex(a.n, objects, diff)


def dual(c: Complex) -> Complex:
    """Reverse both gradings, flip diagrams and cobordisms."""
    objects = {-h: [GradedObject(flip_tangle(o.tangle), -o.qshift) for o in objs]
               for h, objs in c.objects.items()}
    diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for h, entries in c.diff.items():
        out = diff.setdefault(-h - 1, {})
        for (i, j), m in entries.items():
            out[(j, i)] = dual_morphism(m)
    return Complex(c.n, objects, diff)


def cone(f: ChainMap) -> Complex:
    """Mapping cone of a cycle f; for bidegree (0,0) this is t^-1 src + tgt."""
    assert f.is_cycle(), "cone of a non-chain-map"
    dh, dq = f.dh, f.dq
    src, tgt = f.src, f.tgt
    sign = -1 if (dh - 1) % 2 else 1
    objects: dict[int, list[GradedObject]] = {}
    src_pos: dict[tuple[int, int], tuple[int, int]] = {}
    tgt_pos: dict[tuple[int, int], tuple[int, int]] = {}
    degrees = sorted(set(
        [k + dh - 1 for k in src.objects] + list(tgt.objects)))
    for h in degrees:
        lst: list[GradedObject] = []
        for idx, o in enumerate(src.objects.get(h - dh + 1, [])):
            src_pos[(h - dh + 1, idx)] = (h, len(lst))
            lst.append(GradedObject(o.tangle, o.qshift + dq))
        for idx, o in enumerate(tgt.objects.get(h, [])):
            tgt_pos[(h, idx)] = (h, len(lst))
            lst.append(o)
        objects[h] = lst
    diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}

    def add(h, sidx, tidx, m):
        if m.is_zero():
            return
        entries = diff.setdefault(h, {})
        key = (tidx, sidx)
        entries[key] = entries[key] + m if key in entries else m

    for k, entries in src.diff.items():
        for (i, j), m in entries.items():
            (h, sidx) = src_pos[(k, j)]
            (_, tidx) = src_pos[(k + 1, i)]
            add(h, sidx, tidx, m.scale(sign))
    for k, entries in tgt.diff.items():
        for (i, j), m in entries.items():
            (h, sidx) = tgt_pos[(k, j)]
            (_, tidx) = tgt_pos[(k + 1, i)]
            add(h, sidx, tidx, m)
    for k, entries in f.components.items():
        for (i, j), m in entries.items():
            (h, sidx) = src_pos[(k, j)]
            (_, tidx) = tgt_pos[(k + dh, i)]
            add(h, sidx, tidx, m)
    out = Complex(src.n, objects, diff)
    if __debug__:
        out.check()
    return out


# ---------------------------------------------------------------------------
# HOM complexes of free abelian groups
# ---------------------------------------------------------------------------

class ZComplex:
    """Bigraded free Z-complex with differential of bidegree (1, 0)."""

    __slots__ = ("groups", "diffs")

    def __init__(self, groups: dict[tuple[int, int], list],
                 diffs: dict[tuple[int, int], list[list[int]]]):
        self.groups = {k: list(v) for k, v in sorted(groups.items()) if v}
        self.diffs = {k: m for k, m in sorted(diffs.items())
                      if any(any(row) for row in m)}

    def rank(self, i: int, j: int) -> int:
        return len(self.groups.get((i, j), []))

    def bidegrees(self) -> list[tuple[int, int]]:
        return list(self.groups)

    def matrix(self, i: int, j: int) -> list[list[int]]:
        """Matrix of d: (i, j) -> (i+1, j); rows indexed by target basis."""
        rows = self.rank(i + 1, j)
        cols = self.rank(i, j)
        m = self.diffs.get((i, j))
        if m is None:
            return [[0] * cols for _ in range(rows)]
        return m

    def check(self) -> None:
        for (i, j), m in self.diffs.items():
            nxt = self.matrix(i + 1, j)
            cols = self.rank(i, j)
            rows2 = self.rank(i + 2, j)
            for cidx in range(cols):
                col = [m[r][cidx] for r in range(len(m))]
                out = [sum(nxt[r][k] * col[k] for k in range(len(col)))
                       for r in range(rows2)]
                assert not any(out), f"d^2 != 0 at {(i, j)}"


def _hom_basis(a: Complex, b: Complex):
    """Basis of HOM(a, b): labels (k, ia, ib, mask) grouped by bidegree (i, j)."""
    groups: dict[tuple[int, int], list] = {}
    for k, objas in a.objects.items():
        for kb, objbs in b.objects.items():
            i = kb - k
            for ia, oa in enumerate(objas):
                for ib, ob in enumerate(objbs):
                    info = glue(oa.tangle, ob.tangle)
                    nc = len(info)
                    base = a.n - nc  # deg_raw with no dots
                    for dots in range(nc + 1):
                        deg_raw = base + 2 * dots
                        # f in HOM^{i,j} maps q^j A -> B, so each component
                        # q^(j+qa) S -> q^(qb) T has deg_raw + qb - qa - j = 0
                        j = deg_raw + ob.qshift - oa.qshift
                        for combo in combinations(range(nc), dots):
                            mask = 0
                            for cc in combo:
                                mask |= 1 << cc
                            groups.setdefault((i, j), []).append((k, ia, ib, mask))
    for lst in groups.values():
        lst.sort()
    return groups


def hom_complex(a: Complex, b: Complex,
                bidegrees: list[tuple[int, int]] | None = None) -> ZComplex:
    """HOM(a, b) as integer matrices over the dotted-disk basis.

    The differential is f -> d_b o f - (-1)^deg_h(f) f o d_a.
    """
    groups = _hom_basis(a, b)
    if bidegrees is not None:
        want = set(bidegrees)
        want |= {(i + 1, j) for (i, j) in bidegrees}
        want |= {(i - 1, j) for (i, j) in bidegrees}
        groups = {k: v for k, v in groups.items() if k in want}
    pos = {key: {lab: r for r, lab in enumerate(lst)} for key, lst in groups.items()}
    diffs: dict[tuple[int, int], list[list[int]]] = {}
    for (i, j), basis in groups.items():
        tgt_basis = groups.get((i + 1, j))
        if not tgt_basis:
            continue
        matrix = [[0] * len(basis) for _ in range(len(tgt_basis))]
        tgt_pos = pos[(i + 1, j)]
        sign = -1 if i % 2 else 1
        nonzero = False
        for cidx, (k, ia, ib, mask) in enumerate(basis):
            oa, ob = a.objects[k][ia], b.objects[k + i][ib]
            f = CobMorphism(oa.tangle, ob.tangle, {mask: 1})
            for (i2, j2), m in b.diff.get(k + i, {}).items():
                if j2 != ib:
                    continue
                r = compose(m, f)
                for mask2, coeff in r.terms.items():
                    row = tgt_pos.get((k, ia, i2, mask2))
                    if row is not None:
                        matrix[row][cidx] += coeff
                        nonzero = True
            for (i2, j2), m in a.diff.get(k - 1, {}).items():
                if i2 != ia:
                    continue
                r = compose(f, m)
                for mask2, coeff in r.terms.items():
                    row = tgt_pos.get((k - 1, j2, ib, mask2))
                    if row is not None:
                        matrix[row][cidx] -= sign * coeff
                        nonzero = True
        if nonzero:
            diffs[(i, j)] = matrix
    return ZComplex(groups, diffs)


def tautological_complex(c: Complex) -> ZComplex:
    """HOM(empty diagram, c) for a fully delooped complex over Cob_0."""
    assert c.n == 0, "tautological functor needs a closed diagram"
    return hom_complex(Complex.empty_diagram(), c)


# ---------------------------------------------------------------------------
# Convolutions
# ---------------------------------------------------------------------------

class ObstructionError(RuntimeError):
    """A Massey-product obstruction could not be solved."""

    def __init__(self, length: int, position: int, msg: str = ""):
        super().__init__(f"unsolvable obstruction at length {length}, "
                         f"position {position}{': ' + msg if msg else ''}")
        self.length = length
        self.position = position


def convolution_complete(pieces: list[Complex], alphas: list[ChainMap],
                         min_total_degree: int | None = None) -> Complex:
    """Build a convolution of E_0 -> E_1 -> ... -> E_{m-1} (last term at shift 0).

    E_k is placed at homological offset k - (m-1) with differential sign
    (-1)^offset; alphas[k]: E_k -> E_{k+1} must be degree-(0,0) chain maps
    whose consecutive composites are null-homotopic.  Pieces are attached
    right to left as iterated mapping cones: at each attachment all higher
    components out of the new piece are solved jointly as one integer linear
    system over the dotted-disk basis (Smith normal form), so earlier greedy
    choices cannot obstruct later lengths within one attachment.

    With min_total_degree set, obstruction equations whose target lies below
    that total degree are skipped (used for window-truncated inputs); the
    caller is expected to truncate the result and re-check d^2 = 0.
    """
    m = len(pieces)
    assert len(alphas) == m - 1
    offs = [k - (m - 1) for k in range(m)]
    comps: dict[tuple[int, int], dict[int, dict[tuple[int, int], CobMorphism]]] = {}
    for k, alpha in enumerate(alphas):
        assert alpha.src is pieces[k] and alpha.tgt is pieces[k + 1]
        assert (alpha.dh, alpha.dq) == (0, 0)
        comps[(k + 1, k)] = {h: dict(e) for h, e in alpha.components.items()}

    def dcomp(k2: int, k1: int) -> dict[int, dict[tuple[int, int], CobMorphism]]:
        if k1 == k2:
            sign = -1 if offs[k1] % 2 else 1
            return {h: {key: mm.scale(sign) for key, mm in e.items()}
                    for h, e in pieces[k1].diff.items()}
        return comps.get((k2, k1), {})

    for k in range(m - 2, -1, -1):
        solved = _attach_piece(pieces, offs, comps, dcomp, k, m,
                               min_total_degree)
        for j, block in solved.items():
            if block:
                comps[(j, k)] = block

    # assemble the total complex
    objects: dict[int, list[GradedObject]] = {}
    place: dict[tuple[int, int, int], tuple[int, int]] = {}
    keys = []
    for k in range(m):
        for h, objs in pieces[k].objects.items():
            for idx, o in enumerate(objs):
                keys.append((h + offs[k], k, h, idx, o))
    keys.sort(key=lambda t: (t[0], t[1], t[3]))
    for (tot, k, h, idx, o) in keys:
        lst = objects.setdefault(tot, [])
        place[(k, h, idx)] = (tot, len(lst))
        lst.append(o)
    diff: dict[int, dict[tuple[int, int], CobMorphism]] = {}
    for k1 in range(m):
        for k2 in range(k1, m):
            for h, entries in dcomp(k2, k1).items():
                for (i, j), mm in entries.items():
                    (tot, sidx) = place[(k1, h, j)]
                    (_, tidx) = place[(k2, h + 1 - (k2 - k1), i)]
                    slot = diff.setdefault(tot, {})
                    key = (tidx, sidx)
                    slot[key] = slot[key] + mm if key in slot else mm
    return Complex(pieces[0].n, objects, diff)


def _deg0_basis(src_obj: GradedObject, tgt_obj: GradedObject, n: int):
    """Dot masks of degree-zero disk morphisms between two graded objects."""
    info = glue(src_obj.tangle, tgt_obj.tangle)
    nc = len(info)
    need2 = nc - n + src_obj.qshift - tgt_obj.qshift
    if need2 < 0 or need2 % 2 or need2 // 2 > nc:
        return []
    masks = []
    for combo in combinations(range(nc), need2 // 2):
        mask = 0
        for cc in combo:
            mask |= 1 << cc
        masks.append(mask)
    return masks


def _attach_piece(pieces, offs, comps, dcomp, k, m, min_total_degree):
    """Solve jointly for all components D_{j,k}, j >= k+2, attaching E_k.

    The constraints are (D^2)_{j,k} = 0 for j = k+2..m-1:
        sign_j d X_j + sign_k X_j d + sum_{k<mid<j} D_{j,mid} X_{mid} = 0
    with X_{k+1} = alpha_k fixed.  Linear over Z in the X's.
    """
    from .homology import solve_integer

    src = pieces[k]
    n = src.n
    sign_k = -1 if offs[k] % 2 else 1
    unknowns: list[tuple[int, int, int, int, int]] = []  # (j, h, ia, ib, mask)
    equations: list[tuple[int, int, int, int, int]] = []
    for j in range(k + 2, m):
        tgt = pieces[j]
        length = j - k
        for h, objas in src.objects.items():
            for ia, oa in enumerate(objas):
                for ib, ob in enumerate(tgt.objects.get(h + 1 - length, [])):
                    for mask in _deg0_basis(oa, ob, n):
                        unknowns.append((j, h, ia, ib, mask))
                tot = h + offs[j] + 2 - length
                if min_total_degree is not None and tot < min_total_degree:
                    continue
                for ib, ob in enumerate(tgt.objects.get(h + 2 - length, [])):
                    for mask in _deg0_basis(oa, ob, n):
                        equations.append((j, h, ia, ib, mask))
    unknowns.sort()
    equations.sort()
    epos = {e: idx for idx, e in enumerate(equations)}
    rows, cols = len(equations), len(unknowns)
    rhs = [0] * rows

    def add_rhs(j, h, entries_map):
        """Accumulate -(entries) into the rhs at rows (j, h, ...)."""
        for (i, jj), mm in entries_map.items():
            for mask, coeff in mm.terms.items():
                ridx = epos.get((j, h, jj, i, mask))
                if ridx is None:
                    if min_total_degree is None:
                        raise ObstructionError(j - k, offs[k],
                                               "obstruction outside basis")
                    continue
                rhs[ridx] -= coeff

    # fixed contribution: D_{j,k+1} o alpha_k
    alpha = dcomp(k + 1, k)
    for j in range(k + 2, m):
        left = dcomp(j, k + 1)
        for h, entries in alpha.items():
            lentries = left.get(h, {})
            acc: dict[tuple[int, int], CobMorphism] = {}
            for (i1, j1), m1 in entries.items():
                for (i2, j2), m2 in lentries.items():
                    if j2 != i1:
                        continue
                    r = compose(m2, m1)
                    if r.is_zero():
                        continue
                    key = (i2, j1)
                    acc[key] = acc[key] + r if key in acc else r
            if acc:
                add_rhs(j, h, acc)
    if not any(rhs):
        return {j: {} for j in range(k + 2, m)}

    matrix = [[0] * cols for _ in range(rows)]
    for cidx, (j, h, ia, ib, mask) in enumerate(unknowns):
        tgt = pieces[j]
        length = j - k
        sign_j = -1 if offs[j] % 2 else 1
        oa = src.objects[h][ia]
        ob = tgt.objects[h + 1 - length][ib]
        x = CobMorphism(oa.tangle, ob.tangle, {mask: 1})
        # sign_j * d_tgt o X_j
        for (i2, j2), mm in tgt.diff.get(h + 1 - length, {}).items():
            if j2 != ib:
                continue
            r = compose(mm, x).scale(sign_j)
            for mask2, coeff in r.terms.items():
                ridx = epos.get((j, h, ia, i2, mask2))
                if ridx is not None:
                    matrix[ridx][cidx] += coeff
        # sign_k * X_j o d_src  (lands in equations at source degree h-1)
        for (i2, j2), mm in src.diff.get(h - 1, {}).items():
            if i2 != ia:
                continue
            r = compose(x, mm).scale(sign_k)
            for mask2, coeff in r.terms.items():
                ridx = epos.get((j, h - 1, j2, ib, mask2))
                if ridx is not None:
                    matrix[ridx][cidx] += coeff
        # D_{j2,j} o X_j for j2 > j
        for j2 in range(j + 1, m):
            left = dcomp(j2, j)
            lentries = left.get(h + 1 - length, {})
            for (i2, jj2), mm in lentries.items():
                if jj2 != ib:
                    continue
                r = compose(mm, x)
                for mask2, coeff in r.terms.items():
                    ridx = epos.get((j2, h, ia, i2, mask2))
                    if ridx is not None:
                        matrix[ridx][cidx] += coeff
    sol = solve_integer(matrix, rhs)
    if sol is None:
        raise ObstructionError(m - 1 - k, offs[k])
    out: dict[int, dict[int, dict[tuple[int, int], CobMorphism]]] = \
        {j: {} for j in range(k + 2, m)}
    acc: dict[tuple[int, int, int, int], dict[int, int]] = {}
    for val, (j, h, ia, ib, mask) in zip(sol, unknowns):
        if not val:
            continue
        acc.setdefault((j, h, ia, ib), {})[mask] = val
    for (j, h, ia, ib), terms in acc.items():
        oa = src.objects[h][ia]
        ob = pieces[j].objects[h + 1 - (j - k)][ib]
        out[j].setdefault(h, {})[(ib, ia)] = CobMorphism(oa.tangle, ob.tangle,
                                                         terms)
    return out
