"""Hochschild cohomology through the reduced bar cochain complex.

This is the second, deliberately independent route to the same numbers as
the overlap complex: a cochain of arity n assigns to each composable tuple
(a_1, ..., a_n) of nontrivial irreducible paths a parallel value in the
algebra, where parallel means source(v) = source(a_n) and
target(v) = target(a_1).  Arity 0 cochains pick a cycle at each vertex.

Total degree of a basis pair ((a_1 .. a_n), v) is
t = degree(v) - sum(degree(a_k) - 1).  The differential, written on shifted
tensors with suffix-side Koszul signs, has five term families:

* post-compose the value with the algebra differential,    (-1)^|v| d(v);
* append a path b on the right,   (-1)^((t-1)(|b|-1)) (-1)^|b| v b;
* prepend a path b on the left,   (-1)^|v| b v;
* replace an entry a_j by a path b whose differential contains a_j
  (the transpose of inserting d into slot j), with the suffix sign
  (-1)^(sum_{k>j} (|a_k|-1)), the gauge sign (-1)^|b|, and a global
  -(-1)^(t-1);
* expand an entry a_j into a composable pair (b_1, b_2) whose reduced
  product contains a_j, with the same suffix sign, gauge sign (-1)^|b_2|,
  and the same global -(-1)^(t-1).

Vertex components arising inside tensor slots are dropped (the tensor
entries live in the quotient by the vertex span); values keep them.  All
signs are pinned by the exact delta^2 = 0 assertion run on every slice.

Tuples of arbitrary arity can carry a fixed total degree (degree-one loops
are arity-neutral), so slices are windowed by arity and path length with
the same two-window stabilization policy as the overlap route.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError, InternalInvariantError
from .hochschild import HHReport
from .linalg import SparseMatrix, nullspace, reduce_mod_rowspace, rref
from .quiver import Algebra, Element, Path

ONE = Fraction(1)

__all__ = ["BarComplex", "bar_oracle_hh", "bar_default_schedule"]


def _sign(e: int):
    return ONE if e % 2 == 0 else -ONE


class BarComplex:
    """Windowed reduced bar cochain complex of a presented algebra.

    The window is (arity_bound, path_len): tensor entries are irreducible
    paths of length 1..path_len, tuples have at most arity_bound entries.
    Out-of-window differential targets accumulate on phantom rows exactly
    like the overlap route, so leaking sources are counted out of kernels
    instead of being dropped.
    """

    def __init__(self, algebra: Algebra, arity_bound: int, path_len: int):
        self.algebra = algebra
        self.arity_bound = arity_bound
        self.path_len = path_len
        q = algebra.quiver
        self.paths = [p for p in algebra.irreducible_paths(path_len) if len(p) >= 1]
        self.paths.sort(key=lambda p: (len(p), p.key()))
        self._by_tgt = {}
        self._by_src = {}
        for p in self.paths:
            self._by_tgt.setdefault(q.tgt(p), []).append(p)
            self._by_src.setdefault(q.src(p), []).append(p)
        # transpose of the induced differential on tensor entries
        self._dT = {}
        for b in self.paths:
            for u, c in algebra.apply_differential(b).terms.items():
                if len(u) >= 1 and len(u) <= path_len:
                    self._dT.setdefault(u, []).append((b, c))
        # transpose of the reduced product over window pairs
        self._mulT = {}
        for b1 in self.paths:
            for b2 in self._by_tgt.get(q.src(b1), ()):
                for u, c in algebra.mul(b1, b2).terms.items():
                    if len(u) >= 1 and len(u) <= path_len:
                        self._mulT.setdefault(u, []).append((b1, b2, c))
        for idx in (self._dT, self._mulT):
            for k in idx:
                idx[k].sort(key=lambda it: tuple(p.key() for p in it[:-1]))
        self._tuples = {0: [()]}
        self._slices = {}
        self._deltas = {}

    # basis -----------------------------------------------------------------

    def tuples(self, n: int):
        """All composable window tuples of arity n.

        Written order: entry k acts after entry k+1, so appending a path on
        the right needs src(last entry) = tgt(new entry).
        """
        cached = self._tuples.get(n)
        if cached is not None:
            return cached
        q = self.algebra.quiver
        prev = self.tuples(n - 1)
        out = []
        if n == 1:
            out = [(p,) for p in self.paths]
        else:
            for tup in prev:
                anchor = q.src(tup[-1])
                for p in self._by_tgt.get(anchor, ()):
                    out.append(tup + (p,))
        out.sort(key=lambda tup: tuple(p.key() for p in tup))
        self._tuples[n] = out
        return out

    def _shift(self, tup) -> int:
        q = self.algebra.quiver
        return sum(q.degree(p) - 1 for p in tup)

    def slice_basis(self, t: int):
        cached = self._slices.get(t)
        if cached is not None:
            return cached
        alg = self.algebra
        q = alg.quiver
        basis = []
        growth = False
        for x in sorted(q.vertices):
            found, hit = alg.parallel_paths(x, x, t, self.path_len)
            growth = growth or hit
            basis.extend(((), v) for v in found)
        for n in range(1, self.arity_bound + 1):
            for tup in self.tuples(n):
                need = t + self._shift(tup)
                found, hit = alg.parallel_paths(q.src(tup[-1]), q.tgt(tup[0]),
                                                need, self.path_len)
                growth = growth or hit
                if found and n == self.arity_bound:
                    growth = True
                basis.extend((tup, v) for v in found)
        basis.sort(key=lambda bv: (len(bv[0]),
                                   tuple(p.key() for p in bv[0]),
                                   bv[1].key()))
        index = {bv: k for k, bv in enumerate(basis)}
        self._slices[t] = (basis, index, growth)
        return self._slices[t]

    # differential ------------------------------------------------------------

    def _column_terms(self, tup, v: Path, t: int):
        alg = self.algebra
        q = alg.quiver
        n = len(tup)
        degv = q.degree(v)

        for u, c in alg.apply_differential(v).terms.items():
            yield (tup, u), _sign(degv) * c

        right_anchor = q.src(tup[-1]) if tup else q.src(v)
        for b in self._by_tgt.get(right_anchor, ()):
            val = alg.mul(v, b)
            if val:
                degb = q.degree(b)
                coef = _sign((t - 1) * (degb - 1)) * _sign(degb)
                for u, c in val.terms.items():
                    yield (tup + (b,), u), coef * c

        left_anchor = q.tgt(tup[0]) if tup else q.tgt(v)
        for b in self._by_src.get(left_anchor, ()):
            val = alg.mul(b, v)
            if val:
                coef = _sign(degv)
                for u, c in val.terms.items():
                    yield ((b,) + tup, u), coef * c

        glob = -_sign(t - 1)
        suffix = 0
        for j in range(n - 1, -1, -1):
            aj = tup[j]
            for b, c in self._dT.get(aj, ()):
                coef = glob * _sign(suffix) * _sign(q.degree(b)) * c
                yield (tup[:j] + (b,) + tup[j + 1:], v), coef
            for b1, b2, c in self._mulT.get(aj, ()):
                coef = glob * _sign(suffix) * _sign(q.degree(b2)) * c
                yield (tup[:j] + (b1, b2) + tup[j + 1:], v), coef
            suffix += q.degree(aj) - 1

    def delta(self, t: int):
        cached = self._deltas.get(t)
        if cached is not None:
            return cached
        src_basis, _, _ = self.slice_basis(t)
        tgt_basis, tgt_index, _ = self.slice_basis(t + 1)
        entries = {}
        phantom = {}
        for j, (tup, v) in enumerate(src_basis):
            for key, coef in self._column_terms(tup, v, t):
                row = tgt_index.get(key)
                if row is None:
                    tup2, v2 = key
                    if len(tup2) <= self.arity_bound and len(v2) <= self.path_len:
                        raise InternalInvariantError(
                            f"bar differential target {key!r} missing from its slice")
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
        mat, _ = self.delta(t)
        nreal = len(self.slice_basis(t + 1)[0])
        proj = SparseMatrix(nreal, mat.ncols)
        for r, cols in mat.rows.items():
            if r < nreal:
                for c, val in cols.items():
                    proj.add(r, c, val)
        return proj

    def check_square_zero(self, t: int):
        lo_mat, lo_over = self.delta(t - 1)
        hi_mat, hi_over = self.delta(t)
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
                        f"bar delta^2 != 0 at degree {t - 1}: row {r}, column {c}")

    # cohomology ---------------------------------------------------------------

    def hh(self, t: int, want_representatives: bool = True):
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
        kernel = nullspace(hi.to_dense(), n)
        lo_proj = self.projected_delta(t - 1)
        lo_dense = lo_proj.to_dense()
        cobound = []
        for j in range(lo_proj.ncols):
            vec = [lo_dense[i][j] for i in range(n)]
            if any(vec):
                cobound.append(vec)
        red, piv = rref(cobound, n)
        reduced = [reduce_mod_rowspace(vec, red, piv) for vec in kernel]
        rows, _ = rref(reduced, n)
        reps = []
        for row in rows[:dim]:
            support = {}
            for k, c in enumerate(row):
                if c:
                    tup, v = basis[k]
                    cur = support.setdefault(tup, Element())
                    support[tup] = cur + Element.of(v, c)
            reps.append(sorted(support.items(),
                               key=lambda tv: (len(tv[0]),
                                               tuple(p.key() for p in tv[0]))))
        return reps

    # cochain plumbing for callers that bring their own cocycles --------------

    def cochain_vector(self, t: int, cochain):
        """Coordinates of a finitely supported cochain in the degree-t slice.

        The cochain maps tuples of paths to Elements.  Support outside the
        window is an error: widen the window rather than silently truncate a
        caller-supplied cocycle.
        """
        basis, index, _ = self.slice_basis(t)
        vec = [Fraction(0)] * len(basis)
        pairs = cochain.items() if isinstance(cochain, dict) else cochain
        for tup, val in pairs:
            tup = tuple(tup)
            if not isinstance(val, Element):
                val = Element.of(val)
            for v, c in val.terms.items():
                k = index.get((tup, v))
                if k is None:
                    raise InputError(
                        f"cochain support ({tup!r}, {v!r}) is outside the window")
                vec[k] = vec[k] + c
        return vec

    def delta_of_vector(self, t: int, vec):
        """Image of a coordinate vector under the degree-t differential.

        Returns (real_part, phantom_part) as row->value dicts; a nonzero
        phantom part means the image leaks out of the window.
        """
        mat, _ = self.delta(t)
        nreal = len(self.slice_basis(t + 1)[0])
        real, phantom = {}, {}
        for r, cols in mat.rows.items():
            acc = Fraction(0)
            for c, val in cols.items():
                if vec[c]:
                    acc += val * vec[c]
            if acc:
                (real if r < nreal else phantom)[r] = acc
        return real, phantom

    def class_ranks(self, t: int, vectors):
        """Rank of the span of the given cocycle vectors modulo coboundaries.

        Returns (rank_mod_coboundaries, per_vector_is_coboundary).
        """
        basis, _, _ = self.slice_basis(t)
        n = len(basis)
        lo_dense = self.projected_delta(t - 1).to_dense()
        cobound = []
        for j in range(len(lo_dense[0]) if lo_dense else 0):
            col = [row[j] for row in lo_dense]
            if any(col):
                cobound.append(col)
        red, piv = rref(cobound, n)
        reduced = [reduce_mod_rowspace(v, red, piv) for v in vectors]
        flags = [not any(v) for v in reduced]
        rows, _ = rref(reduced, n)
        return len(rows), flags


def bar_default_schedule(algebra: Algebra, n: int):
    na = len(algebra.quiver.arrows)
    base_a = max(4, n + 3)
    base_p = max(6, na + abs(n) + 3)
    return ((base_a, base_p), (base_a + 2, base_p + 2))


def bar_oracle_hh(algebra: Algebra, n: int, trunc_schedule=None,
                  want_representatives: bool = True) -> HHReport:
    """Bar-complex cohomology dimension with two-window stabilization.

    Independent of the overlap route end to end; agreement of the two on
    every applicable fixture is one of the package-level invariants.
    """
    if trunc_schedule is None:
        trunc_schedule = bar_default_schedule(algebra, n)
    (a1, p1), (a2, p2) = trunc_schedule
    if a2 < a1 or p2 < p1:
        raise InputError("second truncation window must contain the first")
    cx1 = BarComplex(algebra, a1, p1)
    cx2 = BarComplex(algebra, a2, p2)
    d1 = cx1.hh(n, want_representatives=False)
    d2 = cx2.hh(n, want_representatives=want_representatives)
    stable = d1["dimension"] == d2["dimension"]
    return HHReport(
        n=n,
        dimension=d2["dimension"] if stable else None,
        stable=stable,
        bounds=((a1, p1), (a2, p2)),
        dims_by_level=(d1["dimension"], d2["dimension"]),
        kernel_dims=(d1["kernel_dim"], d2["kernel_dim"]),
        growth=d2["growth"],
        towers=(),
        representatives=d2["representatives"] if stable else [],
    )
