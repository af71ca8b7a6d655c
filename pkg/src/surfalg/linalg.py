"""Exact linear algebra over the rationals.

Two code paths: a sparse row-dict elimination for rank queries on the large
but very sparse differential matrices (a handful of entries per column), and
a dense reduced row echelon form for the small matrices where kernel bases
and quotient representatives are actually extracted.

Pivoting is deterministic everywhere: columns are visited in a fixed order
and ties between candidate pivot rows break by fill-in count and then index,
so reports are byte-identical across runs.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)


class SparseMatrix:
    """Rational matrix stored as {row: {col: nonzero}}."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {}

    def add(self, r, c, v):
        if not v:
            return
        if not (0 <= r < self.nrows and 0 <= c < self.ncols):
            raise IndexError(f"entry ({r}, {c}) outside {self.nrows}x{self.ncols}")
        row = self.rows.setdefault(r, {})
        cur = row.get(c)
        if cur is None:
            row[c] = v
        else:
            cur = cur + v
            if cur:
                row[c] = cur
            else:
                del row[c]
                if not row:
                    del self.rows[r]

    def entry(self, r, c):
        return self.rows.get(r, {}).get(c, ZERO)

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def is_zero(self):
        return not self.rows

    def copy_rows(self):
        return {r: dict(cols) for r, cols in self.rows.items()}

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = SparseMatrix(self.nrows, other.ncols)
        for r, cols in self.rows.items():
            acc = {}
            for k, v in cols.items():
                brow = other.rows.get(k)
                if not brow:
                    continue
                for c, w in brow.items():
                    cur = acc.get(c)
                    if cur is None:
                        acc[c] = v * w
                    else:
                        cur = cur + v * w
                        if cur:
                            acc[c] = cur
                        else:
                            del acc[c]
            if acc:
                out.rows[r] = acc
        return out

    def rank(self) -> int:
        """Exact rank by sparse Gaussian elimination, column order fixed."""
        rows = self.copy_rows()
        # index: col -> set of live row ids containing it
        by_col = {}
        for r, cols in rows.items():
            for c in cols:
                by_col.setdefault(c, set()).add(r)
        rank = 0
        for c in range(self.ncols):
            live = by_col.get(c)
            if not live:
                continue
            pivot = min(live, key=lambda r: (len(rows[r]), r))
            live.discard(pivot)
            prow = rows.pop(pivot)
            pval = prow[c]
            rank += 1
            for cc in prow:
                s = by_col.get(cc)
                if s is not None:
                    s.discard(pivot)
            # eliminate c from every other live row
            for r in list(live):
                row = rows[r]
                factor = row[c] / pval
                for cc, vv in prow.items():
                    cur = row.get(cc)
                    if cur is None:
                        row[cc] = -factor * vv
                        by_col.setdefault(cc, set()).add(r)
                    else:
                        cur = cur - factor * vv
                        if cur:
                            row[cc] = cur
                        else:
                            del row[cc]
                            s = by_col.get(cc)
                            if s is not None:
                                s.discard(r)
                if not row:
                    del rows[r]
            live.clear()
        return rank

    def to_dense(self):
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for r, cols in self.rows.items():
            for c, v in cols.items():
                out[r][c] = v
        return out


def rref(rows, ncols, col_order=None):
    """Dense reduced row echelon form; returns (reduced rows, pivot cols).

    ``col_order`` lets the caller steer which coordinates get consumed as
    pivots first; that is how cohomology representatives are pushed onto a
    preferred span.  Input rows are not mutated.
    """
    work = [list(r) for r in rows]
    order = list(col_order) if col_order is not None else list(range(ncols))
    pivots = []
    top = 0
    for c in order:
        sel = None
        for i in range(top, len(work)):
            if work[i][c]:
                sel = i
                break
        if sel is None:
            continue
        work[top], work[sel] = work[sel], work[top]
        pv = work[top][c]
        work[top] = [x / pv for x in work[top]]
        prow = work[top]
        for i in range(len(work)):
            if i != top and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], prow)]
        pivots.append(c)
        top += 1
        if top == len(work):
            break
    return work[:top], pivots


def rank_dense(rows, ncols):
    return len(rref(rows, ncols)[0])


def nullspace(rows, ncols):
    """Basis of the right kernel as dense vectors (deterministic order)."""
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(red, pivots):
            if row[f]:
                vec[p] = -row[f]
        basis.append(vec)
    return basis


def reduce_mod_rowspace(vec, red_rows, pivots):
    """Subtract row-space multiples so the pivot coordinates vanish."""
    out = list(vec)
    for row, p in zip(red_rows, pivots):
        f = out[p]
        if f:
            out = [a - f * b for a, b in zip(out, row)]
    return out


def in_rowspace(vec, red_rows, pivots) -> bool:
    return not any(reduce_mod_rowspace(vec, red_rows, pivots))
