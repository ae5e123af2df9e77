"""Integer homological algebra: Smith normal form and bigraded homology.

All matrices are dense lists of lists of Python ints (arbitrary precision);
pivoting picks the smallest nonzero absolute value to limit entry growth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import (ChainMap, Complex, ZComplex, hom_complex,
                        partial_trace_complex, shift, tautological_complex)


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: list[list[int]]):
    """Return (U, D, V) with U*M*V = D diagonal, d1 | d2 | ..., U, V unimodular."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    d = [list(map(int, row)) for row in matrix]
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(a, b):
        d[a], d[b] = d[b], d[a]
        u[a], u[b] = u[b], u[a]

    def swap_cols(a, b):
        for row in d:
            row[a], row[b] = row[b], row[a]
        for row in v:
            row[a], row[b] = row[b], row[a]

    def add_row(src, dst, k):  # row_dst += k * row_src
        drow, srow = d[dst], d[src]
        for idx in range(cols):
            drow[idx] += k * srow[idx]
        drow2, srow2 = u[dst], u[src]
        for idx in range(rows):
            drow2[idx] += k * srow2[idx]

    def add_col(src, dst, k):  # col_dst += k * col_src
        for row in d:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    def negate_row(a):
        d[a] = [-x for x in d[a]]
        u[a] = [-x for x in u[a]]

    def move_best_pivot(t: int) -> bool:
        best = None
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = d[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            return False
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        return True

    t = 0
    while t < min(rows, cols):
        if not move_best_pivot(t):
            break
        while True:
            # reduce column and row t against the pivot; re-pick the smallest
            # nonzero pivot whenever a smaller residue shows up
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        dirty = True
            if dirty:
                move_best_pivot(t)
                continue
            # pivot must divide the remaining block
            culprit = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if d[i][j] % d[t][t]:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            add_row(culprit, t, 1)
        if d[t][t] < 0:
            negate_row(t)
        t += 1
    return u, d, v


def kernel_basis(matrix: list[list[int]]) -> list[list[int]]:
    """Columns generating ker(M) over Z (a primitive basis, via SNF)."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    u, d, v = smith_normal_form(matrix)
    r = sum(1 for i in range(min(rows, cols)) if d[i][i])
    return [[v[i][j] for j in range(r, cols)] for i in range(cols)]


def solve_integer(matrix: list[list[int]], rhs: list[int]) -> list[int] | None:
    """One integer solution of M x = b, or None; free parameters are zero."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0:
        return [0] * cols
    if cols == 0:
        return None if any(rhs) else []
    u, d, v = smith_normal_form(matrix)
    ub = [sum(u[i][k] * rhs[k] for k in range(rows)) for i in range(rows)]
    y = [0] * cols
    for i in range(rows):
        di = d[i][i] if i < min(rows, cols) else 0
        if di:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
        elif ub[i]:
            return None
    return [sum(v[i][k] * y[k] for k in range(cols)) for i in range(cols)]


# ---------------------------------------------------------------------------
# Bigraded homology
# ---------------------------------------------------------------------------

@dataclass
class BigradedGroups:
    """Per (h, q): free rank and torsion invariant factors (each > 1, dividing)."""

    groups: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = field(default_factory=dict)

    def set(self, h: int, q: int, rank: int, torsion: tuple[int, ...] = ()):
        if rank or torsion:
            self.groups[(h, q)] = (rank, tuple(torsion))

    def rank(self, h: int, q: int) -> int:
        return self.groups.get((h, q), (0, ()))[0]

    def torsion(self, h: int, q: int) -> tuple[int, ...]:
        return self.groups.get((h, q), (0, ()))[1]

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def is_zero(self) -> bool:
        return not self.groups

    def shifted(self, dh: int, dq: int) -> BigradedGroups:
        return BigradedGroups({(h + dh, q + dq): v for (h, q), v in self.groups.items()})

    def __add__(self, other: BigradedGroups) -> BigradedGroups:
        out = dict(self.groups)
        for key, (r, t) in other.groups.items():
            r0, t0 = out.get(key, (0, ()))
            out[key] = (r0 + r, tuple(sorted(t0 + t)))
        return BigradedGroups(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigradedGroups):
            return NotImplemented
        norm = lambda g: {k: (r, tuple(sorted(t))) for k, (r, t) in g.items()
                          if r or t}
        return norm(self.groups) == norm(other.groups)

    def restrict(self, keep) -> BigradedGroups:
        return BigradedGroups({k: v for k, v in self.groups.items() if keep(*k)})

    def to_json(self) -> list[dict]:
        return [{"h": h, "q": q, "rank": r, "torsion": list(t)}
                for (h, q), (r, t) in sorted(self.groups.items())]

    def __repr__(self):
        bits = []
        for (h, q), (r, t) in sorted(self.groups.items()):
            s = f"({h},{q}): Z^{r}" if r else f"({h},{q}):"
            for f in t:
                s += f" + Z/{f}"
            bits.append(s)
        return "{" + "; ".join(bits) + "}"


def integer_homology(z: ZComplex) -> BigradedGroups:
    """Kernel mod image per bidegree, with torsion via Smith normal form."""
    out = BigradedGroups()
    for (i, j) in sorted(z.groups):
        n = z.rank(i, j)
        if n == 0:
            continue
        b_out = z.diffs.get((i, j))
        kb = kernel_basis(b_out) if b_out else \
            [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        kdim = len(kb[0]) if kb else 0
        if kdim == 0:
            continue
        a_in = z.diffs.get((i - 1, j))
        if not a_in:
            out.set(i, j, kdim)
            continue
        # express the image inside the kernel lattice: kb * X = a_in
        cols_in = len(a_in[0])
        x = []
        for cidx in range(cols_in):
            col = [a_in[r][cidx] for r in range(len(a_in))]
            sol = solve_integer(kb, col)
            assert sol is not None, "image not contained in kernel (d^2 != 0?)"
            x.append(sol)
        xm = [[x[c][r] for c in range(cols_in)] for r in range(kdim)]
        _, dmat, _ = smith_normal_form(xm)
        factors = [dmat[k][k] for k in range(min(kdim, cols_in)) if dmat[k][k]]
        free = kdim - len(factors)
        torsion = tuple(f for f in factors if f > 1)
        out.set(i, j, free, torsion)
    return out


def homology_mod_p(z: ZComplex, p: int) -> dict[tuple[int, int], int]:
    """Dimensions of homology with F_p coefficients."""
    def rank_mod(m) -> int:
        if not m or not m[0]:
            return 0
        mm = [[x % p for x in row] for row in m]
        rows, cols = len(mm), len(mm[0])
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, rows) if mm[i][c] % p), None)
            if piv is None:
                continue
            mm[r], mm[piv] = mm[piv], mm[r]
            inv = pow(mm[r][c], -1, p)
            mm[r] = [(x * inv) % p for x in mm[r]]
            for i in range(rows):
                if i != r and mm[i][c]:
                    f = mm[i][c]
                    mm[i] = [(a - f * b) % p for a, b in zip(mm[i], mm[r])]
            r += 1
        return r

    dims = {}
    for (i, j) in z.groups:
        n = z.rank(i, j)
        r_out = rank_mod(z.diffs.get((i, j), []))
        r_in = rank_mod(z.diffs.get((i - 1, j), []))
        d = n - r_out - r_in
        if d:
            dims[(i, j)] = d
    return dims


def poincare_polynomial(groups: BigradedGroups, field: str = "z") -> dict[tuple[int, int], int]:
    """Free ranks as a dict (h, q) -> coefficient of t^h q^q."""
    assert field in ("z", "q")
    return {k: r for k, (r, _) in groups.groups.items() if r}


def poincare_string(coeffs: dict[tuple[int, int], int]) -> str:
    if not coeffs:
        return "0"
    bits = []
    for (h, q), c in sorted(coeffs.items()):
        term = ""
        if h:
            term += f"t^{h}"
        if q:
            term += f"q^{q}"
        if c != 1 or not term:
            term = f"{c}" + ("*" + term if term else "")
        bits.append(term)
    return " + ".join(bits)


# ---------------------------------------------------------------------------
# Ext groups and the partial-trace adjunction
# ---------------------------------------------------------------------------

def adjunction_reduce(m: Complex, n: Complex) -> tuple[Complex, Complex]:
    """Rewrite HOM_n(m u 1, n) as HOM_{n-1}(m, q T(n)): returns the new pair."""
    if n.n < 1:
        raise ValueError("nothing to trace on the right argument")
    return m, shift(partial_trace_complex(n), 0, 1)


def closure_complex(c: Complex) -> Complex:
    """q^n T^n(c): the HOM(1_n, c) computation pushed down to Cob_0."""
    cur = c
    while cur.n > 0:
        cur = shift(partial_trace_complex(cur), 0, 1)
    return cur


def closure_with_transport(c: Complex, maps: list[ChainMap]):
    """Close all strands while transporting endomorphisms of c along.

    Each strand closure traces every component, then conjugates through the
    delooping retract; returns (closed complex, transported endomorphisms).
    """
    from .cobordism import partial_trace as trace_morphism
    from .complexes import deloop, transport_endomorphism
    cur, fs = c, list(maps)
    while cur.n > 0:
        raw = partial_trace_complex(cur, delooped=False)
        fs = [ChainMap(raw, raw, f.dh, f.dq,
                       {h: {k: trace_morphism(m) for k, m in e.items()}
                        for h, e in f.components.items()})
              for f in fs]
        dl, sdr = deloop(raw, track_sdr=True)
        fs = [transport_endomorphism(f, sdr) for f in fs]
        cur = shift(dl, 0, 1)
        fs = [ChainMap(cur, cur, f.dh, f.dq, f.components) for f in fs]
    return cur, fs


def u_action_on_homology(proj, k: int):
    """Induced action of u_k on the homology of the projector's closure.

    Returns (homology, action) where action maps (h, q) to (cols, src_orders,
    tgt_orders) in homology-generator coordinates.  The homology computed is
    that of the truncation; interpret bidegrees within the projector's safe
    window only.
    """
    u = proj.u_maps[k]
    closed, (uc,) = closure_with_transport(proj.complex, [u])
    z = tautological_complex(closed)
    mats = taut_chain_map(uc, z, z)
    groups = integer_homology(z)
    return groups, induced_map_on_homology(z, z, mats, u.dh, u.dq)


def projector_end_complex(c: Complex) -> ZComplex:
    """Integer complex computing HOM(1_n, c) via the partial-trace adjunction."""
    return tautological_complex(closure_complex(c))


def ext_groups(a: Complex, b: Complex,
               safe: "SafeWindow | None" = None) -> BigradedGroups:
    """Homology of HOM(a, b); with `safe` given, restricted to its region.

    For self-Ext of a window-truncated projector do not use this directly:
    cycle maps supported near the cut corrupt fixed bidegrees for every
    finite window.  Use projector_end_complex (the unit reduction, valid for
    complexes that kill turnbacks), whose homology is provably exact above
    the truncation depth.
    """
    groups = integer_homology(hom_complex(a, b))
    if safe is not None:
        return groups.restrict(safe.contains)
    return groups


@dataclass(frozen=True)
class SafeWindow:
    """Bidegrees (h, q) provably unaffected by a homological truncation at -N."""

    h_min: int

    def contains(self, h: int, q: int) -> bool:
        return h >= self.h_min

    def require(self, h: int, q: int) -> None:
        if not self.contains(h, q):
            raise ValueError(
                f"bidegree ({h},{q}) is outside the safe window h >= {self.h_min}")


# ---------------------------------------------------------------------------
# Induced maps on homology
# ---------------------------------------------------------------------------

def taut_chain_map(f: ChainMap, src_z: ZComplex, tgt_z: ZComplex):
    """Matrices of taut(f) between tautological complexes of Cob_0 complexes.

    Basis labels are (k, 0, ib, mask) as produced by hom_complex against the
    empty diagram; returns dict (i, j) -> matrix into (i + dh, j + dq).
    """
    from .cobordism import CobMorphism, FlatTangle, compose
    from .tl import Matching
    empty = FlatTangle(0, Matching(0, ()), 0)
    out: dict[tuple[int, int], list[list[int]]] = {}
    tgt_pos = {key: {lab: r for r, lab in enumerate(lst)}
               for key, lst in tgt_z.groups.items()}
    for (i, j), basis in src_z.groups.items():
        key_t = (i + f.dh, j + f.dq)
        tbasis = tgt_z.groups.get(key_t)
        if not tbasis:
            continue
        mat = [[0] * len(basis) for _ in range(len(tbasis))]
        nonzero = False
        for cidx, (k, _ia, ib, mask) in enumerate(basis):
            # labels carry the empty-diagram degree k = 0; the chain lives at
            # degree i of the target complex
            assert k == 0
            x = CobMorphism(empty, f.src.objects[i][ib].tangle, {mask: 1})
            for (i2, j2), m in f.components.get(i, {}).items():
                if j2 != ib:
                    continue
                for mask2, coeff in compose(m, x).terms.items():
                    row = tgt_pos[key_t].get((0, 0, i2, mask2))
                    if row is not None:
                        mat[row][cidx] += coeff
                        nonzero = True
        if nonzero:
            out[(i, j)] = mat
    return out


def homology_generators(z: ZComplex, key: tuple[int, int]):
    """Generators of H at `key` as chain vectors plus their orders (0 = free)."""
    i, j = key
    n = z.rank(i, j)
    if n == 0:
        return [], []
    b_out = z.diffs.get((i, j))
    kb = kernel_basis(b_out) if b_out else \
        [[1 if a == b else 0 for b in range(n)] for a in range(n)]
    kdim = len(kb[0]) if kb else 0
    if kdim == 0:
        return [], []
    a_in = z.diffs.get((i - 1, j))
    if not a_in:
        gens = [[kb[r][c] for r in range(n)] for c in range(kdim)]
        return gens, [0] * kdim
    cols_in = len(a_in[0])
    x = []
    for cidx in range(cols_in):
        col = [a_in[r][cidx] for r in range(len(a_in))]
        sol = solve_integer(kb, col)
        assert sol is not None
        x.append(sol)
    xm = [[x[c][r] for c in range(cols_in)] for r in range(kdim)]
    u, d, v = smith_normal_form(xm)
    # new kernel basis: columns of kb * u^-1; with U X V = D, take kb' = kb U^{-1}
    uinv = matrix_inverse_unimodular(u)
    gens, orders = [], []
    for c in range(kdim):
        dc = d[c][c] if c < min(kdim, cols_in) else 0
        if dc == 1:
            continue
        col = [sum(kb[r][k] * uinv[k][c] for k in range(kdim)) for r in range(n)]
        gens.append(col)
        orders.append(dc)
    return gens, orders


def matrix_inverse_unimodular(u: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix."""
    n = len(u)
    cols = [solve_integer(u, [1 if r == c else 0 for r in range(n)])
            for c in range(n)]
    assert all(c is not None for c in cols)
    return [[cols[c][r] for c in range(n)] for r in range(n)]


def induced_map_on_homology(z_src: ZComplex, z_tgt: ZComplex,
                            matrices, dh: int, dq: int):
    """Induced action on homology classes, per bidegree.

    `matrices` maps (i, j) -> chain-level matrix into (i + dh, j + dq).
    Returns dict (i, j) -> (cols, src_orders, tgt_orders) where cols[c] are
    the coordinates of the image of the c-th source generator over the target
    generators (well-defined modulo the target orders; order 0 means free).
    """
    out = {}
    for key, mat in matrices.items():
        i, j = key
        key_t = (i + dh, j + dq)
        gens_s, ord_s = homology_generators(z_src, key)
        gens_t, ord_t = homology_generators(z_tgt, key_t)
        if not gens_s:
            continue
        n_t = z_tgt.rank(*key_t)
        a_in = z_tgt.diffs.get((key_t[0] - 1, key_t[1]))
        g = len(gens_t)
        cols = []
        for gen in gens_s:
            img = [sum(mat[r][c] * gen[c] for c in range(len(gen)))
                   for r in range(len(mat))]
            # img = sum y_i * G_i + boundary; generators + boundaries span cycles
            big_cols = g + (len(a_in[0]) if a_in else 0)
            big = [[(gens_t[c][r] if c < g else a_in[r][c - g])
                    for c in range(big_cols)] for r in range(n_t)]
            sol = solve_integer(big, img) if big_cols else ([] if not any(img) else None)
            assert sol is not None, "image of a cycle is not a cycle"
            cols.append(sol[:g])
        out[key] = (cols, ord_s, ord_t)
    return out
