"""Hochschild cohomology of quadratic monomial (DG) quotients via overlaps.

The cochain complex used here has a very small basis: a cochain in total
degree t is a finite sum of pairs (w, v) where w is an overlap — a word
w_1 ... w_i whose consecutive letter pairs are all relations — and v is an
irreducible path parallel to w with degree(v) = degree(w) - i + t.  The
differential has four parts:

* extend w on the left by a letter a with (a, w_1) a relation and multiply the
  value by a, with coefficient -(-1)^((|a|-1) t);
* extend w on the right by b with (w_i, b) a relation and multiply the value
  by b, with coefficient (-1)^(degree(w) - i - t);
* post-compose the value with the algebra differential, coefficient +1;
* on length-one overlaps only, transport along the arrow differential: the
  pair ((y,), v) is sent to ((x,), v) with coefficient (-1)^t c whenever
  d(x) contains y with coefficient c.

For i = 0 the overlap is a vertex and "extensions" are the arrows leaving
and entering it.  The sign on the transport term is pinned by the exact
matrix identity delta^2 = 0, which is asserted on every slice we build.

This route requires a monomial presentation whose differential sends arrows
to sums of single arrows and vanishes on all arrows appearing in relations;
anything else goes through the independent bar-complex oracle instead.

Relation chains can close into cycles ("towers"), making the overlap sets
nonzero in every length, so slices are built inside a truncation window and
dimensions are only reported when two successive windows agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, InternalInvariantError
from .linalg import SparseMatrix, nullspace, reduce_mod_rowspace, rref
from .quiver import Algebra, Element, Path

ONE = Fraction(1)

__all__ = [
    "OverlapSet",
    "HHReport",
    "OverlapComplex",
    "enumerate_overlaps",
    "relation_towers",
    "overlap_route_problems",
    "overlap_delta",
    "hh_dimension",
    "extract_standard_cocycles",
    "default_schedule",
]


def extension_maps(algebra: Algebra):
    """For each arrow the relation partners on either side.

    left[name] lists the arrows a with (a, name) a relation (prepending a
    keeps the word an overlap); right[name] lists b with (name, b) one.
    Gentle presentations have at most one of each, but nothing here assumes
    that.
    """
    left, right = {}, {}
    for a, b in algebra.relations:
        left.setdefault(b, []).append(a)
        right.setdefault(a, []).append(b)
    for m in (left, right):
        for k in m:
            m[k] = tuple(sorted(m[k]))
    return left, right


def relation_towers(algebra: Algebra):
    """Cycles in the relation-successor graph, canonically rotated.

    A tower spawns an overlap in every length, which is what forces the
    truncation window of the cochain complex.
    """
    _, right = extension_maps(algebra)
    towers = []
    seen = set()
    for start in sorted(algebra.quiver.arrows):
        if start in seen:
            continue
        walk, pos = [], {}
        cur = start
        while cur is not None and cur not in pos and cur not in seen:
            pos[cur] = len(walk)
            walk.append(cur)
            nxt = right.get(cur)
            cur = nxt[0] if nxt else None
        if cur is not None and cur in pos:
            cyc = walk[pos[cur]:]
            k = cyc.index(min(cyc))
            towers.append(tuple(cyc[k:] + cyc[:k]))
        seen.update(walk)
    return towers


@dataclass(frozen=True)
class OverlapSet:
    n: int
    elements: tuple
    maximal: frozenset


def enumerate_overlaps(algebra: Algebra, n_max: int):
    """All overlap sets up to length n_max, with per-element maximality.

    Length 0 is the vertex set, length 1 the arrow set, length 2 exactly the
    relations; longer overlaps extend on the right through the relation
    successor map.
    """
    if not algebra.is_monomial():
        raise InputError("overlap sets need a monomial presentation")
    q = algebra.quiver
    left, right = extension_maps(algebra)
    out = []

    verts = tuple(Path.vertex(v) for v in sorted(q.vertices))
    vmax = frozenset(p for p in verts
                     if not q.out_arrows(p.base) and not q.in_arrows(p.base))
    out.append(OverlapSet(0, verts, vmax))
    if n_max == 0:
        return out

    level = [Path.word(a) for a in sorted(q.arrows)]
    for n in range(1, n_max + 1):
        if n > 1:
            nxt = []
            for w in level:
                for b in right.get(w.arrows[-1], ()):
                    nxt.append(Path(w.arrows + (b,)))
            level = sorted(nxt, key=lambda p: p.arrows)
        maximal = frozenset(
            w for w in level
            if not left.get(w.arrows[0]) and not right.get(w.arrows[-1]))
        out.append(OverlapSet(n, tuple(level), maximal))
        if not level:
            # no overlap of this length, so none of any longer length
            out.extend(OverlapSet(m, (), frozenset()) for m in range(n + 1, n_max + 1))
            break
    return out


def overlap_route_problems(algebra: Algebra):
    """Why the overlap complex does not apply; empty list when it does."""
    problems = []
    if not algebra.is_monomial():
        problems.append("presentation has rewrites (non-monomial)")
    for name, val in algebra.differential.items():
        for p in val.terms:
            if len(p) != 1:
                problems.append(
                    f"d({name}) has a term of length {len(p)}; need single arrows")
    in_rel = {a for r in algebra.relations for a in r}
    for name in sorted(in_rel):
        if algebra.differential.get(name):
            problems.append(f"arrow {name!r} sits in a relation but d({name}) != 0")
    return problems


class _Ctx:
    __slots__ = ("algebra", "left", "right", "mid")

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self.left, self.right = extension_maps(algebra)
        # transpose of the arrow differential: y -> [(x, c)] with d(x) = ... + c*y
        mid = {}
        for x, val in algebra.differential.items():
            for p, c in val.terms.items():
                if len(p) == 1:
                    mid.setdefault(p.arrows[0], []).append((x, c))
        for k in mid:
            mid[k].sort()
        self.mid = mid


def _column_terms(ctx: _Ctx, w: Path, v: Path, t: int):
    """Yield ((w', v''), coef) over all differential terms of the pair (w, v).

    Values are kept reduced, so each product contributes at most one path in
    a monomial algebra; the post-composition term can still fan out.
    """
    alg = ctx.algebra
    q = alg.quiver
    i = len(w)
    degw = q.degree(w)

    if w.is_vertex:
        lefts = q.out_arrows(w.base)
        rights = q.in_arrows(w.base)
    else:
        lefts = ctx.left.get(w.arrows[0], ())
        rights = ctx.right.get(w.arrows[-1], ())

    for a in lefts:
        ext = Path((a,)) if w.is_vertex else Path((a,) + w.arrows)
        val = alg.mul(Path((a,)), v)
        if val:
            sign = -ONE if ((q.arrow(a).degree - 1) * t) % 2 == 0 else ONE
            for p, c in val.terms.items():
                yield (ext, p), sign * c

    for b in rights:
        ext = Path((b,)) if w.is_vertex else Path(w.arrows + (b,))
        val = alg.mul(v, Path((b,)))
        if val:
            sign = ONE if (degw - i - t) % 2 == 0 else -ONE
            for p, c in val.terms.items():
                yield (ext, p), sign * c

    dv = alg.apply_differential(v)
    for p, c in dv.terms.items():
        yield (w, p), c

    if i == 1:
        y = w.arrows[0]
        sign = ONE if t % 2 == 0 else -ONE
        for x, c in ctx.mid.get(y, ()):
            yield (Path((x,)), v), sign * c


def _pair_degree(q, w: Path, v: Path) -> int:
    return len(w) + q.degree(v) - q.degree(w)


def overlap_delta(algebra: Algebra, cochain, trunc=None):
    """Differential of a finitely supported homogeneous cochain.

    The cochain is a map overlap -> value given as a dict or pair list.  The
    result again maps overlaps to values; besides the extended overlaps it
    can touch the same lengths through the two internal terms.  No window is
    applied unless ``trunc = (overlap_len, path_len)`` is passed.
    """
    pairs = list(cochain.items() if isinstance(cochain, dict) else cochain)
    ctx = _Ctx(algebra)
    q = algebra.quiver
    t = None
    for w, val in pairs:
        if not isinstance(val, Element):
            val = Element.of(val)
        for v, c in val.terms.items():
            if q.src(v) != q.src(w) or q.tgt(v) != q.tgt(w):
                raise InputError(f"value {v!r} is not parallel to overlap {w!r}")
            tt = _pair_degree(q, w, v)
            if t is None:
                t = tt
            elif tt != t:
                raise InputError(
                    f"cochain is not homogeneous: degrees {t} and {tt}")
    out = {}
    for w, val in pairs:
        if not isinstance(val, Element):
            val = Element.of(val)
        for v, c in val.terms.items():
            for (w2, v2), coef in _column_terms(ctx, w, v, t):
                if trunc is not None and (len(w2) > trunc[0] or len(v2) > trunc[1]):
                    continue
                cur = out.setdefault(w2, Element())
                out[w2] = cur + Element.of(v2, coef * c)
    return {w: val for w, val in out.items() if val}


class OverlapComplex:
    """Truncated overlap cochain complex of a monomial (DG) presentation.

    Slices and differentials are cached per total degree.  Differential
    entries that would land outside the window are accumulated on phantom
    rows: a nonzero phantom row means the source element genuinely leaves
    the window, so it is counted out of the kernel rather than silently
    dropped.
    """

    def __init__(self, algebra: Algebra, overlap_len: int, path_len: int):
        problems = overlap_route_problems(algebra)
        if problems:
            raise InputError(
                "overlap complex does not apply (use bar_oracle_hh): "
                + "; ".join(problems))
        self.algebra = algebra
        self.overlap_len = overlap_len
        self.path_len = path_len
        self.ctx = _Ctx(algebra)
        self.sets = enumerate_overlaps(algebra, overlap_len)
        self.towers = relation_towers(algebra)
        self._tower_words = set()
        for cyc in self.towers:
            self._tower_words.update(cyc)
        self._slices = {}
        self._deltas = {}

    # basis ---------------------------------------------------------------

    def extendable(self, w: Path) -> bool:
        if w.is_vertex:
            q = self.algebra.quiver
            return bool(q.out_arrows(w.base) or q.in_arrows(w.base))
        return bool(self.ctx.left.get(w.arrows[0]) or self.ctx.right.get(w.arrows[-1]))

    def is_full_cycle(self, w: Path) -> bool:
        """The overlap closes up: its last letter relates back to its first."""
        if w.is_vertex:
            return False
        return self.algebra.has_relation(w.arrows[-1], w.arrows[0])

    def slice_basis(self, t: int):
        """(basis, growth) for total degree t; basis entries are (w, v) pairs."""
        cached = self._slices.get(t)
        if cached is not None:
            return cached
        alg = self.algebra
        q = alg.quiver
        basis = []
        growth = False
        for oset in self.sets:
            for w in oset.elements:
                need = q.degree(w) - oset.n + t
                found, hit = alg.parallel_paths(q.src(w), q.tgt(w), need, self.path_len)
                if hit:
                    growth = True
                for v in found:
                    basis.append((w, v))
                if oset.n == self.overlap_len and found and self.extendable(w):
                    growth = True
        basis.sort(key=lambda wv: (len(wv[0]), wv[0].key(), wv[1].key()))
        index = {wv: k for k, wv in enumerate(basis)}
        self._slices[t] = (basis, index, growth)
        return self._slices[t]

    # differential ----------------------------------------------------------

    def delta(self, t: int):
        """Matrix of the degree-t differential, with phantom overflow rows.

        Returns (matrix, overflow_cols): matrix rows are the degree t+1 basis
        followed by one phantom row per out-of-window target actually hit;
        overflow_cols are the source indices with a nonzero phantom entry.
        """
        cached = self._deltas.get(t)
        if cached is not None:
            return cached
        src_basis, _, _ = self.slice_basis(t)
        tgt_basis, tgt_index, _ = self.slice_basis(t + 1)
        entries = {}
        phantom = {}
        for j, (w, v) in enumerate(src_basis):
            for (w2, v2), coef in _column_terms(self.ctx, w, v, t):
                key = (w2, v2)
                row = tgt_index.get(key)
                if row is None:
                    if len(w2) <= self.overlap_len and len(v2) <= self.path_len:
                        raise InternalInvariantError(
                            f"differential target {w2!r}, {v2!r} missing from its slice")
                    row = phantom.get(key)
                    if row is None:
                        row = len(tgt_basis) + len(phantom)
                        phantom[key] = row
                cur = entries.get((row, j))
                entries[(row, j)] = coef if cur is None else cur + coef
        mat = SparseMatrix(len(tgt_basis) + len(phantom), len(src_basis))
        for (r, c), val in entries.items():
            mat.add(r, c, val)
        overflow = set()
        for r, cols in mat.rows.items():
            if r >= len(tgt_basis):
                overflow.update(cols)
        self._deltas[t] = (mat, overflow)
        return self._deltas[t]

    def projected_delta(self, t: int):
        """The same matrix with phantom rows cut off (image inside the window)."""
        mat, _ = self.delta(t)
        nreal = len(self.slice_basis(t + 1)[0])
        proj = SparseMatrix(nreal, mat.ncols)
        for r, cols in mat.rows.items():
            if r < nreal:
                for c, val in cols.items():
                    proj.add(r, c, val)
        return proj

    def check_square_zero(self, t: int):
        """Assert delta_{t} after delta_{t-1} vanishes where the window allows.

        Columns whose first step already leaks out of the window are skipped:
        the cancelling partner of a surviving composite term may live beyond
        the truncation.  Everything else must cancel exactly.
        """
        lo_mat, lo_over = self.delta(t - 1)
        hi_mat, hi_over = self.delta(t)
        nreal_mid = len(self.slice_basis(t)[0])
        nreal_top = len(self.slice_basis(t + 1)[0])
        lo_proj = self.projected_delta(t - 1)
        skip = set(lo_over)
        for r, cols in lo_proj.rows.items():
            if r in hi_over:
                skip.update(cols)
        prod = hi_mat.matmul(lo_proj)
        for r, cols in prod.rows.items():
            if r >= nreal_top:
                continue
            for c in cols:
                if c not in skip:
                    raise InternalInvariantError(
                        f"delta^2 != 0 at degree {t - 1}: row {r}, column {c}")

    # cohomology ------------------------------------------------------------

    def hh(self, t: int, want_representatives: bool = True):
        """Raw cohomology data of the window at total degree t.

        Returns a dict with the slice dimension, both ranks, the kernel
        dimension, the dimension of the quotient, growth flags, and (when
        requested) representative cochains normalized to avoid overlaps that
        sit strictly inside longer ones.
        """
        basis, _, growth_t = self.slice_basis(t)
        _, _, growth_up = self.slice_basis(t + 1)
        _, _, growth_dn = self.slice_basis(t - 1)
        self.check_square_zero(t)
        hi, hi_over = self.delta(t)
        lo_proj = self.projected_delta(t - 1)
        rank_hi = hi.rank()
        rank_lo = lo_proj.rank()
        kernel_dim = len(basis) - rank_hi
        dim = kernel_dim - rank_lo
        out = {
            "slice_dim": len(basis),
            "rank_out": rank_hi,
            "rank_in": rank_lo,
            "kernel_dim": kernel_dim,
            "dimension": dim,
            "growth": growth_t or growth_up or growth_dn or bool(hi_over),
            "representatives": [],
        }
        if want_representatives and dim > 0:
            out["representatives"] = self._representatives(t, dim)
        return out

    def _representatives(self, t: int, dim: int):
        basis, _, _ = self.slice_basis(t)
        n = len(basis)
        hi, _ = self.delta(t)
        dense = hi.to_dense()
        kernel = nullspace(dense, n)
        lo_proj = self.projected_delta(t - 1)
        cobound = []
        lo_dense = lo_proj.to_dense()
        for j in range(lo_proj.ncols):
            vec = [lo_dense[i][j] for i in range(n)]
            if any(vec):
                cobound.append(vec)
        # overlaps strictly inside a longer one can be traded away, so spend
        # the coboundary pivots on them first
        reducible = [
            k for k, (w, v) in enumerate(basis)
            if len(w) >= 1 and self.extendable(w) and not self.is_full_cycle(w)
        ]
        preferred = [k for k in range(n) if k not in set(reducible)]
        order = reducible + preferred
        red, piv = rref(cobound, n, col_order=order) if cobound else ([], [])
        reduced = [reduce_mod_rowspace(vec, red, piv) for vec in kernel]
        reps_rows, _ = rref(reduced, n, col_order=preferred + reducible)
        reps = []
        for row in reps_rows[:dim]:
            support = {}
            for k, c in enumerate(row):
                if c:
                    w, v = basis[k]
                    cur = support.setdefault(w, Element())
                    support[w] = cur + Element.of(v, c)
            reps.append(sorted(support.items(), key=lambda wv: (len(wv[0]), wv[0].key())))
        return reps


@dataclass
class HHReport:
    n: int
    dimension: object          # int when stable, None otherwise
    stable: bool
    bounds: tuple              # the two (overlap_len, path_len) windows
    dims_by_level: tuple
    kernel_dims: tuple
    growth: bool
    towers: tuple
    representatives: list

    @property
    def dimension_or_flag(self):
        return self.dimension if self.stable else "unstable"


def default_schedule(algebra: Algebra, n: int):
    na = len(algebra.quiver.arrows)
    base_l = max(4, na + 2, n + 3 if n > 0 else 4)
    base_p = max(6, na + abs(n) + 3)
    return ((base_l, base_p), (base_l + 2, base_p + 2))


def hh_dimension(algebra: Algebra, n: int, trunc_schedule=None,
                 want_representatives: bool = True) -> HHReport:
    """Cohomology dimension in total degree n with two-window stabilization.

    The dimension is only trusted (and representatives only extracted) when
    both windows of the schedule agree; otherwise the report says unstable
    and carries the per-window values for diagnosis.
    """
    if trunc_schedule is None:
        trunc_schedule = default_schedule(algebra, n)
    (l1, p1), (l2, p2) = trunc_schedule
    if l2 < l1 or p2 < p1:
        raise InputError("second truncation window must contain the first")
    cx1 = OverlapComplex(algebra, l1, p1)
    cx2 = OverlapComplex(algebra, l2, p2)
    d1 = cx1.hh(n, want_representatives=False)
    d2 = cx2.hh(n, want_representatives=want_representatives)
    stable = d1["dimension"] == d2["dimension"]
    return HHReport(
        n=n,
        dimension=d2["dimension"] if stable else None,
        stable=stable,
        bounds=((l1, p1), (l2, p2)),
        dims_by_level=(d1["dimension"], d2["dimension"]),
        kernel_dims=(d1["kernel_dim"], d2["kernel_dim"]),
        growth=d2["growth"],
        towers=tuple(cx2.towers),
        representatives=d2["representatives"] if stable else [],
    )


# standard cocycle families -------------------------------------------------

def extract_standard_cocycles(standard):
    """The labeled degree-2 cocycles carried by a standard dissection algebra.

    ``standard`` is the wrapper returned by the surface module: it has the
    presentation under ``.algebra``, the per-block metadata under ``.blocks``
    and the originating surface under ``.surface``.  Families:

    * ``arrow_swap``: one-stop boundary of winding 1, sends the stop arrow to
      the parallel winding arrow;
    * ``relation_cycle_unit``: fully stopped boundary, sends the looping
      relation cycle (length 1 or 2 by winding) to the idempotent;
    * ``loop_power``: stopless boundary, sends the block vertex to the loop
      or its square by winding;
    * ``long_overlap``: when the distinguished boundary has a single stop of
      winding 1, transports the longest maximal overlap to a parallel path.

    Every returned cochain is checked to be a cocycle.
    """
    alg = standard.algebra
    blocks = standard.blocks
    q = alg.quiver
    found = []

    for blk in blocks:
        kind = blk["kind"]
        if kind == "stopped" and blk.get("stops") == 1 and blk.get("winding") == 1:
            p1 = blk["arrows"]["p1"]
            qa = blk["arrows"]["q"]
            found.append({
                "label": "arrow_swap",
                "component": blk["index"],
                "cochain": {Path.word(p1): Element.of(Path.word(qa))},
            })
        elif kind == "full_stop" and blk.get("winding") in (1, 2):
            p = blk["arrows"]["p"]
            h = blk["vertices"][0]
            w = Path.word(p) if blk["winding"] == 2 else Path.word(p, p)
            found.append({
                "label": "relation_cycle_unit",
                "component": blk["index"],
                "cochain": {w: Element.of(Path.vertex(h))},
            })
        elif kind == "stopless" and blk.get("winding") in (1, 2):
            qa = blk["arrows"]["q"]
            f = blk["vertices"][0]
            val = Path.word(qa, qa) if blk["winding"] == 1 else Path.word(qa)
            found.append({
                "label": "loop_power",
                "component": blk["index"],
                "cochain": {Path.vertex(f): Element.of(val)},
            })

    surf = standard.surface
    dist = surf.boundary[surf.distinguished] if surf.distinguished is not None else None
    if dist is not None and dist.stops == 1 and dist.winding == 1:
        cocycle = _long_overlap_cocycle(alg)
        if cocycle is not None:
            found.append({
                "label": "long_overlap",
                "component": surf.distinguished,
                "cochain": cocycle,
            })

    for item in found:
        img = overlap_delta(alg, item["cochain"])
        if img:
            raise InternalInvariantError(
                f"standard cocycle {item['label']} fails to close: {img}")
    return found


def _long_overlap_cocycle(alg: Algebra):
    """Longest maximal overlap with a degree-2 parallel transport, if any."""
    bound = len(alg.quiver.arrows) + 1
    sets = enumerate_overlaps(alg, bound)
    q = alg.quiver
    candidates = []
    for oset in reversed(sets):
        if oset.n < 2:
            break
        for w in sorted(oset.maximal, key=lambda p: p.key()):
            need = q.degree(w) - oset.n + 2
            found, _ = alg.parallel_paths(q.src(w), q.tgt(w), need, bound + 4)
            for v in found:
                if not alg.apply_differential(v):
                    candidates.append({w: Element.of(v)})
        if candidates:
            return candidates[0]
    return None
