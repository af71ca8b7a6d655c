"""Semi-universal deformation families of standard dissection algebras.

Every boundary component contributing to the second Hochschild cohomology
donates one coordinate of a polynomial base.  The perturbation depends on
the component class:

* single stop, winding 1: the differential of the stop arrow gains the
  parallel long arrow, scaled by the coordinate;
* full stop, winding 1: the square of the boundary loop, formerly zero,
  splits into the coordinate times the vertex idempotent;
* full stop, winding 2: the boundary loop, of degree -1, becomes exact
  with value the coordinate times the vertex idempotent.

All entries stay linear in the coordinates (a product of two basis paths
crosses at most one loop-square junction, and a junction never creates
another), so the fiber structure constants are affine in the base point
and the infinitesimal direction cochains can be read off the linear parts
directly.  Those cochains are spread over the whole bar basis: the entry
on a tuple is the coordinate-linear part of the full structure map, not
just of the generator that was perturbed.

Stopless components are refused; take the weak dual first so the algebra
is proper.  A contributing distinguished component is also refused: its
direction perturbs the curvature, which the associative family cannot
carry, and is handled by the curved pillowcase family instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bar import BarComplex
from .errors import InputError, InternalInvariantError
from .hochschild import hh_dimension, overlap_route_problems
from .linalg import nullspace, rank_dense, reduce_mod_rowspace, rref
from .poly import Poly
from .quiver import Algebra, Element, Path
from .surface import (
    STOPLESS,
    StandardAlgebra,
    deform_surface,
    predicted_hh2,
    standard_algebra,
    toggle_full_stops,
)

_EFFECTS = {
    "one_stop_w1": "add_long_arrow_to_differential",
    "full_stop_w1": "split_loop_square",
    "full_stop_w2": "make_loop_exact",
}

# base coordinates are ordered by class, then by component index
_KIND_ORDER = {"one_stop_w1": 0, "full_stop_w1": 1, "full_stop_w2": 2}


def _sgn(k: int) -> int:
    return 1 if k % 2 == 0 else -1


@dataclass(frozen=True)
class Direction:
    """One tangent direction of the family.

    ``slot`` is the base coordinate index, ``component`` the boundary
    component of the base surface, ``block`` the index into the standard
    algebra's block list, ``arrow`` the generator whose structure the
    direction perturbs.
    """

    slot: int
    component: int
    kind: str
    block: int
    arrow: str
    effect: str


@dataclass
class DeformationFamily:
    """Presentation of the base algebra with polynomial coefficients."""

    base: StandardAlgebra
    directions: tuple
    nvars: int
    algebra: Algebra

    def fiber(self, lam) -> Algebra:
        return evaluate_fiber(self, lam)

    def validate(self) -> list:
        """Identities that must hold in every coordinate simultaneously.

        The underlying presentation check (d squared, Leibniz through the
        rewrite system, confluence of critical pairs) runs with polynomial
        coefficients, so passing it means the identities hold for every
        fiber at once.  On top of that the entries must be linear and the
        zero fiber must restore the base presentation on the nose.
        """
        problems = list(self.algebra.validate())
        for lhs, rhs in self.algebra.rewrites:
            for _, coef in rhs.items():
                if isinstance(coef, Poly):
                    if coef.total_degree() > 1:
                        problems.append(
                            f"rewrite {lhs!r} is not linear in the base coordinates")
                    if coef.constant_term():
                        problems.append(
                            f"rewrite {lhs!r} does not vanish at the base point")
        for name, val in self.algebra.differential.items():
            for _, coef in val.items():
                if isinstance(coef, Poly) and coef.total_degree() > 1:
                    problems.append(
                        f"d({name}) is not linear in the base coordinates")
        base = self.base.algebra
        center = evaluate_fiber(self, (0,) * self.nvars)
        if tuple(center.relations) != tuple(base.relations):
            problems.append("zero fiber does not restore the base relations")
        if center.rewrites != base.rewrites:
            problems.append("zero fiber does not restore the base rewrites")
        if center.differential != base.differential:
            problems.append("zero fiber does not restore the base differential")
        return problems


def build_family(standard: StandardAlgebra, surface=None) -> DeformationFamily:
    """Assemble the family of a standard dissection presentation.

    ``standard`` must come from ``standard_algebra``; the block metadata
    locates the arrows each direction perturbs.  The optional ``surface``
    argument is a consistency guard and must equal ``standard.surface``.
    """
    if not isinstance(standard, StandardAlgebra):
        raise InputError(
            "build_family needs the standard_algebra bundle; the block "
            "layout determines where the directions act")
    if surface is not None and surface != standard.surface:
        raise InputError("surface does not match the presentation bundle")
    s = standard.surface

    loose = [i for i, c in enumerate(s.boundary) if c.stops == STOPLESS]
    if loose:
        raise InputError(
            f"components {loose} carry no stops, so the presentation is not "
            f"proper; toggle them to full stops (weak dual) first")
    count, contributions = predicted_hh2(s)
    for contrib in contributions:
        if contrib["component"] == s.distinguished:
            raise InputError(
                "the distinguished component contributes through the "
                "curvature; the associative family cannot carry that "
                "direction (the curved pillowcase family does)")

    ordered = sorted(contributions,
                     key=lambda c: (_KIND_ORDER[c["class"]], c["component"]))
    block_of = {blk["index"]: k for k, blk in enumerate(standard.blocks)
                if blk["kind"] in ("stopped", "full_stop")}

    base_alg = standard.algebra
    relations = list(base_alg.relations)
    rewrites = list(base_alg.rewrites)
    differential = dict(base_alg.differential)
    directions = []
    d = len(ordered)

    for slot, contrib in enumerate(ordered):
        comp = contrib["component"]
        kind = contrib["class"]
        blk_i = block_of.get(comp)
        if blk_i is None:
            raise InternalInvariantError(
                f"no block found for contributing component {comp}")
        blk = standard.blocks[blk_i]
        x = Poly.variable(d, slot)
        if kind == "one_stop_w1":
            if blk["kind"] != "stopped" or blk["stops"] != 1:
                raise InternalInvariantError(
                    f"component {comp} classified {kind} but its block is "
                    f"{blk['kind']} with {blk.get('stops')} stops")
            arrow = blk["arrows"]["p1"]
            if arrow in differential:
                raise InternalInvariantError(
                    f"stop arrow {arrow} already carries a differential")
            differential[arrow] = Element.of(
                Path.word(blk["arrows"]["q"]), x)
        elif kind == "full_stop_w1":
            arrow = blk["arrows"]["p"]
            relations.remove((arrow, arrow))
            rewrites.append((Path.word(arrow, arrow),
                             Element.of(Path.vertex(blk["vertices"][0]), x)))
        else:
            arrow = blk["arrows"]["p"]
            if arrow in differential:
                raise InternalInvariantError(
                    f"boundary loop {arrow} already carries a differential")
            differential[arrow] = Element.of(
                Path.vertex(blk["vertices"][0]), x)
        directions.append(Direction(slot=slot, component=comp, kind=kind,
                                    block=blk_i, arrow=arrow,
                                    effect=_EFFECTS[kind]))

    fam_alg = Algebra(base_alg.quiver, relations=relations, rewrites=rewrites,
                      differential=differential,
                      length_bound=base_alg.length_bound,
                      max_steps=base_alg.max_steps)
    family = DeformationFamily(base=standard, directions=tuple(directions),
                               nvars=d, algebra=fam_alg)
    problems = family.validate()
    if problems:
        raise InternalInvariantError(
            "family identities fail: " + "; ".join(problems))
    return family


def evaluate_fiber(family: DeformationFamily, lam) -> Algebra:
    """Specialize the base coordinates to rational values.

    At zero the output is the base presentation itself: split rewrites
    whose right-hand side vanishes are dropped and the loop-square
    relations they replaced come back, in the original order.
    """
    lam = tuple(Fraction(v) for v in lam)
    if len(lam) != family.nvars:
        raise InputError(
            f"expected {family.nvars} coordinates, got {len(lam)}")
    base = family.base.algebra

    def specialize(coef):
        return coef.evaluate(lam) if isinstance(coef, Poly) else coef

    live = {(dr.arrow, dr.arrow) for dr in family.directions
            if dr.effect == "split_loop_square" and lam[dr.slot]}
    relations = tuple(r for r in base.relations if r not in live)
    rewrites = []
    for lhs, rhs in family.algebra.rewrites:
        val = rhs.map_coefficients(specialize)
        if val:
            rewrites.append((lhs, val))
    differential = {}
    for name, val in family.algebra.differential.items():
        ev = val.map_coefficients(specialize)
        if ev:
            differential[name] = ev

    fiber = Algebra(base.quiver, relations=relations, rewrites=rewrites,
                    differential=differential,
                    length_bound=base.length_bound, max_steps=base.max_steps)
    problems = fiber.validate()
    if problems:
        raise InternalInvariantError(
            f"fiber at {lam!r} fails validation: " + "; ".join(problems))
    return fiber


# fiber cohomology ------------------------------------------------------------


def _solve_in_span(rows, target):
    """Coordinates of ``target`` in the span of ``rows``, or None."""
    k = len(rows)
    if k == 0:
        return None if any(target) else []
    n = len(target)
    aug = [[rows[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    red, piv = rref(aug, k + 1)
    coords = [Fraction(0)] * k
    for row, p in zip(red, piv):
        if p == k:
            return None
        coords[p] = row[k]
    check = [sum((coords[j] * rows[j][i] for j in range(k)), Fraction(0))
             for i in range(n)]
    if check != [Fraction(v) for v in target]:
        return None
    return coords


def _sqrt_fraction(value: Fraction):
    """Rational square root, or None when there is none."""
    if value < 0:
        return None
    rn = math.isqrt(value.numerator)
    rd = math.isqrt(value.denominator)
    if rn * rn == value.numerator and rd * rd == value.denominator:
        return Fraction(rn, rd)
    return None


class FiberCohomology:
    """Graded cohomology of a presentation inside a degree window.

    The basis in each degree is the set of irreducible paths, enumerated
    up to a length cap; paths showing up at the cap itself set the
    ``truncated`` flag and every dimension becomes a window statement.
    Images leaving the window land on phantom rows, so leaking sources
    are counted out of the kernel rather than silently dropped, while
    incoming ranks use only the visible rows.

    ``dims`` maps degree to dimension, zero entries omitted.
    ``representatives`` maps each window degree to cocycle elements whose
    classes form a basis.
    """

    def __init__(self, algebra: Algebra, degree_window, length_bound=None):
        lo, hi = degree_window
        if lo > hi:
            raise InputError(f"empty degree window {degree_window!r}")
        self.algebra = algebra
        self.window = (lo, hi)
        cap = 40 if length_bound is None else length_bound
        self._cap = cap
        q = algebra.quiver
        paths = list(algebra.irreducible_paths(cap))
        self.truncated = any(len(p) == cap for p in paths)
        self.basis = {t: [] for t in range(lo - 1, hi + 2)}
        for p in paths:
            t = q.degree(p)
            if lo - 1 <= t <= hi + 1:
                self.basis[t].append(p)
        for ps in self.basis.values():
            ps.sort(key=lambda p: (len(p), p.key()))
        self._index = {t: {p: k for k, p in enumerate(ps)}
                       for t, ps in self.basis.items()}

        self._mats = {t: self._matrix(t) for t in range(lo - 1, hi + 1)}
        self.dims = {}
        self.representatives = {}
        self._cobound = {}
        self._repvecs = {}
        for t in range(lo, hi + 1):
            n = len(self.basis[t])
            full = self._mats[t]
            rank_out = rank_dense(full, n) if n else 0
            below = self._mats[t - 1]
            cols = []
            for j in range(len(self.basis[t - 1])):
                col = [below[i][j] for i in range(n)]
                if any(col):
                    cols.append(col)
            red, piv = rref(cols, n)
            self._cobound[t] = (red, piv)
            kernel = nullspace(full, n) if n else []
            dim = len(kernel) - len(red)
            if dim < 0:
                raise InternalInvariantError(
                    f"negative cohomology dimension in degree {t}")
            if dim:
                self.dims[t] = dim
            reduced = [reduce_mod_rowspace(v, red, piv) for v in kernel]
            reps, _ = rref(reduced, n)
            self._repvecs[t] = reps
            self.representatives[t] = [self._element(t, v) for v in reps]
            del rank_out

    def _matrix(self, t):
        """Dense differential matrix out of degree t, phantom rows last."""
        src = self.basis[t]
        index = self._index[t + 1]
        ntgt = len(self.basis[t + 1])
        phantom = {}
        entries = []
        for j, p in enumerate(src):
            img = self.algebra.apply_differential(p)
            for u, c in img.items():
                r = index.get(u)
                if r is None:
                    r = phantom.setdefault(u, ntgt + len(phantom))
                entries.append((r, j, c))
        mat = [[Fraction(0)] * len(src) for _ in range(ntgt + len(phantom))]
        for r, j, c in entries:
            mat[r][j] += c
        return mat

    def _element(self, t, vec) -> Element:
        return Element({self.basis[t][k]: c for k, c in enumerate(vec) if c})

    def _require_window(self, t):
        if not (self.window[0] <= t <= self.window[1]):
            raise InputError(f"degree {t} outside the window {self.window}")

    def _require_cocycle(self, element: Element):
        if self.algebra.apply_differential(element):
            raise InputError("element is not a cocycle")

    def total_dimension(self) -> int:
        return sum(self.dims.values())

    def slice_vector(self, t, element):
        """Coordinates of a reduced element in the degree-t basis."""
        self._require_window(t)
        if isinstance(element, Path):
            element = Element.of(element)
        element = self.algebra.reduce(element)
        idx = self._index[t]
        vec = [Fraction(0)] * len(self.basis[t])
        for p, c in element.items():
            k = idx.get(p)
            if k is None:
                raise InputError(
                    f"term {p!r} is outside the degree-{t} basis")
            vec[k] += c
        return vec

    def is_coboundary(self, t, element) -> bool:
        self._require_cocycle(element)
        vec = self.slice_vector(t, element)
        red, piv = self._cobound[t]
        return not any(reduce_mod_rowspace(vec, red, piv))

    def class_rank(self, t, elements):
        """Rank of the classes spanned by cocycles, with coboundary flags."""
        self._require_window(t)
        vectors = []
        for e in elements:
            self._require_cocycle(e)
            vectors.append(self.slice_vector(t, e))
        red, piv = self._cobound[t]
        reduced = [reduce_mod_rowspace(v, red, piv) for v in vectors]
        flags = [not any(v) for v in reduced]
        rows, _ = rref(reduced, len(self.basis[t]))
        return len(rows), flags

    def express_class(self, t, element):
        """Representative coordinates of a cocycle class, or None."""
        self._require_cocycle(element)
        vec = self.slice_vector(t, element)
        red, piv = self._cobound[t]
        reduced = reduce_mod_rowspace(vec, red, piv)
        return _solve_in_span(self._repvecs.get(t, []), reduced)

    def structure_constants(self):
        """Multiplication table of a degree-zero-concentrated cohomology."""
        if self.truncated:
            raise InputError(
                "basis truncated at the length cap; raise it before reading "
                "off a presentation")
        if any(t != 0 for t in self.dims):
            raise InputError("cohomology is not concentrated in degree zero")
        self._require_window(0)
        reps = self.representatives.get(0, [])
        k = len(reps)
        unit = Element({Path.vertex(v): Fraction(1)
                        for v in self.algebra.quiver.vertices})
        ucoords = self.express_class(0, unit)
        if ucoords is None:
            raise InternalInvariantError(
                "unit class escapes the representative span")
        table = {}
        for i in range(k):
            for j in range(k):
                prod = self.algebra.mul(reps[i], reps[j])
                coords = self.express_class(0, prod)
                if coords is None:
                    raise InternalInvariantError(
                        "a product of classes escapes the representative span")
                table[(i, j)] = tuple(coords)
        return {"dimension": k, "unit": tuple(ucoords), "table": table}

    def orthogonal_idempotents(self):
        """Split a two-dimensional degree-zero cohomology into idempotents.

        Writes the algebra as the span of the unit and one complement z
        with z*z = c + b*z; the split exists over the rationals exactly
        when b*b + 4*c is a square.  Returns the two idempotent elements.
        """
        sc = self.structure_constants()
        if sc["dimension"] != 2:
            raise InputError(
                "idempotent splitting needs a two-dimensional cohomology")
        unit_coords = list(sc["unit"])
        pick = None
        for m in range(2):
            probe = [Fraction(0), Fraction(0)]
            probe[m] = Fraction(1)
            if rank_dense([unit_coords, probe], 2) == 2:
                pick = m
                break
        if pick is None:
            raise InternalInvariantError("unit spans the whole cohomology")
        zz = list(sc["table"][(pick, pick)])
        probe = [Fraction(0), Fraction(0)]
        probe[pick] = Fraction(1)
        cb = _solve_in_span([unit_coords, probe], zz)
        if cb is None:
            raise InternalInvariantError("loop square escapes the basis")
        c, b = cb
        disc = b * b + 4 * c
        beta = None
        root = _sqrt_fraction(disc)
        if root:
            beta = 1 / root
        if beta is None:
            raise InputError(
                f"no rational splitting: the discriminant {disc} is not a "
                f"nonzero rational square")
        alpha = (1 - beta * b) / 2
        unit = Element({Path.vertex(v): Fraction(1)
                        for v in self.algebra.quiver.vertices})
        z = self.representatives[0][pick]
        first = self.algebra.reduce(unit.scale(alpha) + z.scale(beta))
        second = self.algebra.reduce(unit - first)
        for e in (first, second):
            defect = self.algebra.mul(e, e) - e
            if defect and not self.is_coboundary(0, self.algebra.reduce(defect)):
                raise InternalInvariantError("idempotent defect is not exact")
        cross = self.algebra.reduce(self.algebra.mul(first, second))
        if cross and not self.is_coboundary(0, cross):
            raise InternalInvariantError("idempotents are not orthogonal")
        return first, second


def fiber_cohomology(algebra: Algebra, degree_window,
                     length_bound=None) -> FiberCohomology:
    return FiberCohomology(algebra, degree_window, length_bound)


# the tangent map --------------------------------------------------------------


@dataclass
class KodairaSpencerMatrix:
    """Classes of the coordinate-linear infinitesimals at a base point.

    ``columns`` are coordinate vectors in the degree-2 slice of the bar
    complex of the fiber, one per base direction.  ``vector_rank`` is the
    rank before passing to cohomology (the direction supports are
    disjoint, so it equals the number of directions), ``class_rank`` the
    rank modulo coboundaries.  ``overlap_hh2`` carries the independent
    overlap-complex dimension on monomial fibers, None otherwise.
    """

    basepoint: tuple
    columns: tuple
    slice_dim: int
    hh2_dim: int
    vector_rank: int
    class_rank: int
    coboundary_columns: tuple
    versal: bool
    semi_universal: bool
    window: tuple
    overlap_hh2: object

    @property
    def rank(self) -> int:
        return self.class_rank

    @property
    def overlap_agrees(self):
        if self.overlap_hh2 is None:
            return None
        return self.overlap_hh2 == self.hh2_dim


_PATH_CAP = 24
_ARITY_STEPS = (4, 6, 8, 10, 12)


def _linear_part(element: Element, slot: int) -> Element:
    terms = {}
    for path, coef in element.items():
        if isinstance(coef, Poly):
            if coef.total_degree() > 1:
                raise InternalInvariantError(
                    "family structure constants are not linear in the base")
            lc = coef.linear_coefficient(slot)
            if lc:
                terms[path] = lc
    return Element(terms)


def _direction_cochain(family: DeformationFamily, fiber: Algebra,
                       cx: BarComplex, slot: int) -> dict:
    """Spread bar cochain of one direction: the coordinate-linear part of
    the family's differential and product on every window tuple, in the
    shifted-tensor gauge."""
    q = fiber.quiver
    fam = family.algebra
    cochain = {}
    for u in cx.paths:
        val = _linear_part(fam.apply_differential(u), slot)
        if val:
            cochain[(u,)] = val.scale(_sgn(q.degree(u)))
    for tup in cx.tuples(2):
        a, b = tup
        val = _linear_part(fam.mul(a, b), slot)
        if val:
            cochain[tup] = val.scale(_sgn(q.degree(b)))
    return cochain


def kodaira_spencer(family: DeformationFamily, lam) -> KodairaSpencerMatrix:
    """Tangent map of the family at a base point, in bar coordinates.

    The window is stabilized before anything is read off: the path length
    covers the whole fiber basis and the arity bound is raised until no
    slice around degree 2 grows.  Every direction cochain is checked to be
    closed; a failure there means the gauge is wrong and raises.
    """
    lam = tuple(Fraction(v) for v in lam)
    fiber = evaluate_fiber(family, lam)

    paths = list(fiber.irreducible_paths(_PATH_CAP))
    maxlen = max((len(p) for p in paths), default=0)
    if maxlen >= _PATH_CAP:
        raise InputError(
            "fiber basis reaches the path cap; the base presentation must "
            "be proper for the tangent computation")
    # one past the longest irreducible path: the window provably holds the
    # whole basis, so no slice can flag growth on the path side
    path_len = maxlen + 1

    cx = None
    report = None
    for arity in _ARITY_STEPS:
        cx = BarComplex(fiber, arity, path_len)
        report = cx.hh(2, want_representatives=False)
        if not report["growth"]:
            break
    if report["growth"]:
        raise InputError(
            f"bar window still grows at arity {_ARITY_STEPS[-1]}")
    hh2 = report["dimension"]

    columns = []
    for dr in family.directions:
        cochain = _direction_cochain(family, fiber, cx, dr.slot)
        try:
            vec = cx.cochain_vector(2, cochain)
        except InputError as exc:
            raise InternalInvariantError(
                f"direction {dr.slot} cochain escapes the bar window: {exc}"
            ) from exc
        real, phantom = cx.delta_of_vector(2, vec)
        if real or phantom:
            raise InternalInvariantError(
                f"direction {dr.slot} infinitesimal is not closed; the "
                f"cochain gauge is broken")
        columns.append(vec)

    n = report["slice_dim"]
    vrank = rank_dense(columns, n) if columns else 0
    if columns:
        crank, flags = cx.class_ranks(2, columns)
    else:
        crank, flags = 0, []
    versal = crank == hh2
    semi = versal and not any(lam) and crank == family.nvars

    overlap = None
    if fiber.is_monomial() and not overlap_route_problems(fiber):
        rep = hh_dimension(fiber, 2, want_representatives=False)
        overlap = rep.dimension if rep.stable else None

    return KodairaSpencerMatrix(
        basepoint=lam,
        columns=tuple(tuple(v) for v in columns),
        slice_dim=n,
        hh2_dim=hh2,
        vector_rank=vrank,
        class_rank=crank,
        coboundary_columns=tuple(flags),
        versal=versal,
        semi_universal=semi,
        window=(cx.arity_bound, cx.path_len),
        overlap_hh2=overlap,
    )


# morphism verification --------------------------------------------------------


def _as_element(value) -> Element:
    if isinstance(value, Element):
        return value
    if isinstance(value, Path):
        return Element.of(value)
    raise InputError(f"assignment {value!r} is neither a Path nor an Element")


def verify_morphism(source: Algebra, target: Algebra, mapping,
                    degree_window=None, length_bound=None) -> dict:
    """Check a generator assignment and classify it.

    ``mapping`` holds two dicts: ``vertices`` sends every source vertex to
    an idempotent of the target, ``arrows`` sends every arrow to a
    homogeneous element.  The verdict is ``iso`` when the induced linear
    map is bijective on the window basis, ``quasi_iso`` when it is only
    bijective on cohomology, and ``fail`` otherwise, with the reasons
    listed.  The unit may be preserved up to an exact term; that still
    allows ``quasi_iso`` but rules out ``iso``.
    """
    if not isinstance(mapping, dict) or "vertices" not in mapping \
            or "arrows" not in mapping:
        raise InputError("mapping needs 'vertices' and 'arrows' tables")
    sq, tq = source.quiver, target.quiver
    vmap = {}
    for v in sq.vertices:
        if v not in mapping["vertices"]:
            raise InputError(f"vertex {v!r} has no assignment")
        vmap[v] = target.reduce(_as_element(mapping["vertices"][v]))
    amap = {}
    for name in sq.arrows:
        if name not in mapping["arrows"]:
            raise InputError(f"arrow {name!r} has no assignment")
        amap[name] = target.reduce(_as_element(mapping["arrows"][name]))

    def image(x) -> Element:
        if isinstance(x, Path):
            x = Element.of(x)
        out = Element()
        for p, c in x.items():
            if p.is_vertex:
                piece = vmap[p.base]
            else:
                piece = amap[p.arrows[0]]
                for nm in p.arrows[1:]:
                    piece = target.mul(piece, amap[nm])
            out = out + piece.scale(c)
        return target.reduce(out)

    problems = []
    for v in sq.vertices:
        fv = vmap[v]
        if target.mul(fv, fv) != fv:
            problems.append(f"image of vertex {v!r} is not idempotent")
        if any(tq.degree(p) != 0 for p, _ in fv.items()):
            problems.append(f"image of vertex {v!r} is not of degree zero")
        if target.apply_differential(fv):
            problems.append(f"image of vertex {v!r} is not a cocycle")
    verts = list(sq.vertices)
    for i, v in enumerate(verts):
        for w in verts[i + 1:]:
            if target.mul(vmap[v], vmap[w]) or target.mul(vmap[w], vmap[v]):
                problems.append(
                    f"images of vertices {v!r} and {w!r} are not orthogonal")

    unit_src = Element({Path.vertex(v): Fraction(1) for v in sq.vertices})
    unit_tgt = target.reduce(Element(
        {Path.vertex(w): Fraction(1) for w in tq.vertices}))
    unit_defect = target.reduce(image(unit_src) - unit_tgt)
    unital = not unit_defect

    for name, ar in sq.arrows.items():
        fa = amap[name]
        if target.mul(vmap[ar.tgt], fa) != fa or \
                target.mul(fa, vmap[ar.src]) != fa:
            problems.append(
                f"image of arrow {name!r} is not framed by its endpoints")
        if any(tq.degree(p) != ar.degree for p, _ in fa.items()):
            problems.append(
                f"image of arrow {name!r} is not homogeneous of degree "
                f"{ar.degree}")
    for a, b in source.relations:
        if target.mul(amap[a], amap[b]):
            problems.append(f"relation ({a}, {b}) is not preserved")
    for lhs, rhs in source.rewrites:
        if image(lhs) != image(rhs):
            problems.append(f"rewrite {lhs!r} -> ... is not preserved")
    zero = Element.zero()
    for name in sq.arrows:
        want = image(source.differential.get(name, zero))
        got = target.apply_differential(amap[name])
        if target.reduce(want - got):
            problems.append(
                f"the map does not intertwine the differentials at {name!r}")

    cap = 30 if length_bound is None else length_bound
    scounts, sgrow = source.graded_dimension(length_bound=cap)
    tcounts, tgrow = target.graded_dimension(length_bound=cap)
    degrees = set(scounts) | set(tcounts) | {0}
    if degree_window is None:
        lo, hi = min(degrees), max(degrees)
    else:
        lo, hi = degree_window
    truncated = sgrow or tgrow
    dims_source = {t: c for t, c in sorted(scounts.items()) if lo <= t <= hi}
    dims_target = {t: c for t, c in sorted(tcounts.items()) if lo <= t <= hi}

    report = {
        "verdict": "fail",
        "problems": problems,
        "degree_window": (lo, hi),
        "truncated": truncated,
        "unital": unital,
        "dims_source": dims_source,
        "dims_target": dims_target,
        "h_source": None,
        "h_target": None,
    }
    if problems:
        return report

    if unital and dims_source == dims_target:
        tpaths = [p for p in target.irreducible_paths(cap)
                  if lo <= tq.degree(p) <= hi]
        tindex = {p: k for k, p in enumerate(tpaths)}
        vectors = []
        escaped = False
        for p in source.irreducible_paths(cap):
            if not (lo <= sq.degree(p) <= hi):
                continue
            img = image(p)
            vec = [Fraction(0)] * len(tpaths)
            for u, c in img.items():
                k = tindex.get(u)
                if k is None:
                    escaped = True
                    break
                vec[k] += c
            if escaped:
                break
            vectors.append(vec)
        if not escaped and len(vectors) == len(tpaths) \
                and rank_dense(vectors, len(tpaths)) == len(tpaths):
            report["verdict"] = "iso"
            return report

    srcH = FiberCohomology(source, (lo, hi), cap)
    tgtH = FiberCohomology(target, (lo, hi), cap)
    report["h_source"] = dict(srcH.dims)
    report["h_target"] = dict(tgtH.dims)
    if not unital and not tgtH.is_coboundary(0, unit_defect):
        problems.append("the unit defect is not exact")
        return report
    if srcH.dims != tgtH.dims:
        problems.append(
            f"cohomology dimensions differ: {srcH.dims} vs {tgtH.dims}")
        return report
    for t in sorted(srcH.dims):
        mapped = [image(rep) for rep in srcH.representatives[t]]
        rank, _ = tgtH.class_rank(t, mapped)
        if rank != srcH.dims[t]:
            problems.append(f"induced map drops rank in degree {t}")
            return report
    report["verdict"] = "quasi_iso"
    return report


# matching fibers against deformed surfaces -------------------------------------


def _common_window(*algebras, cap=30):
    degrees = set()
    for alg in algebras:
        counts, _ = alg.graded_dimension(length_bound=cap)
        degrees.update(counts)
    if not degrees:
        return (0, 0)
    return (min(degrees), max(degrees))


def _identity_mapping(algebra: Algebra) -> dict:
    q = algebra.quiver
    return {
        "vertices": {v: Path.vertex(v) for v in q.vertices},
        "arrows": {a: Path.word(a) for a in q.arrows},
    }


def identify_deformed_surface(family: DeformationFamily, lam,
                              surface) -> dict:
    """Match a fiber against the algebra of the deformed surface.

    The supported components of the given surface are compactified
    (winding 1 leaves an orbifold point, winding 2 fills smoothly), the
    result is stop toggled back to the proper side, and its standard
    algebra is compared with the fiber.  A single explicit map is
    assembled only in the one-block cases; anything mixed would need a
    zigzag of quasi-isomorphisms, and the report then carries the
    cohomology dimensions of both sides instead.
    """
    lam = tuple(Fraction(v) for v in lam)
    if len(lam) != family.nvars:
        raise InputError(
            f"expected {family.nvars} coordinates, got {len(lam)}")
    loose = [i for i, c in enumerate(surface.boundary) if c.stops == STOPLESS]
    dualized = toggle_full_stops(surface, loose) if loose else surface
    if dualized != family.base.surface:
        raise InputError(
            "the family was not built from this surface's stop-toggled form")

    live = [dr for dr in family.directions if lam[dr.slot]]
    support = sorted(dr.component for dr in live)
    deformed = deform_surface(surface, support)
    loose2 = [i for i, c in enumerate(deformed.boundary)
              if c.stops == STOPLESS]
    toggled = toggle_full_stops(deformed, loose2) if loose2 else deformed
    target_std = standard_algebra(toggled)

    fiber = evaluate_fiber(family, lam)
    window = _common_window(fiber, target_std.algebra)
    fibH = FiberCohomology(fiber, window)
    tgtH = FiberCohomology(target_std.algebra, window)
    dims_match = fibH.dims == tgtH.dims

    morphism = None
    note = None
    orbifold_blocks = [blk for blk in target_std.blocks
                       if blk["kind"] == "orbifold"]
    if not live:
        morphism = verify_morphism(fiber, target_std.algebra,
                                   _identity_mapping(fiber))
        note = "zero deformation: the fiber is the base presentation itself"
    elif len(live) == 1 and len(family.base.blocks) == 1:
        dr = live[0]
        value = lam[dr.slot]
        blk = family.base.blocks[dr.block]
        if dr.kind == "one_stop_w1" and len(target_std.blocks) == 1 \
                and orbifold_blocks:
            tblk = orbifold_blocks[0]
            va, vb = blk["vertices"]
            ta, tb = tblk["vertices"]
            mapping = {
                "vertices": {va: Path.vertex(ta), vb: Path.vertex(tb)},
                "arrows": {
                    blk["arrows"]["p1"]: Path.word(tblk["arrows"]["p"]),
                    blk["arrows"]["q"]: Element.of(
                        Path.word(tblk["arrows"]["q"]), 1 / value),
                },
            }
            morphism = verify_morphism(fiber, target_std.algebra, mapping)
            note = ("the stop arrow matches the orbifold arrow and the long "
                    "arrow rescales by the coordinate")
        elif dr.kind == "full_stop_w1" and len(target_std.blocks) == 1 \
                and orbifold_blocks:
            root = _sqrt_fraction(value)
            if root is None:
                note = ("splitting the loop square over the rationals needs "
                        "a square coordinate; only dimensions are compared")
            else:
                tblk = orbifold_blocks[0]
                ta, tb = tblk["vertices"]
                ea, eb = Path.vertex(ta), Path.vertex(tb)
                mapping = {
                    "vertices": {blk["vertices"][0]: Element(
                        {ea: Fraction(1), eb: Fraction(1)})},
                    "arrows": {blk["arrows"]["p"]: Element(
                        {ea: root, eb: -root})},
                }
                morphism = verify_morphism(fiber, target_std.algebra, mapping)
                note = ("the boundary loop splits into the difference of the "
                        "two orbifold idempotents")
        elif dr.kind == "full_stop_w2":
            note = ("the fiber is acyclic while the filled surface keeps an "
                    "arc with ground-field endomorphisms that the old arc "
                    "system never sees; the presentations honestly differ "
                    "even though both categories kill the old arc")
        else:
            note = ("no single map is assembled for this block layout; "
                    "a zigzag of quasi-isomorphisms would be needed")
    else:
        note = ("comparison beyond one deformed component needs a zigzag of "
                "quasi-isomorphisms; only cohomology dimensions are compared")

    return {
        "support": support,
        "deformed_surface": deformed,
        "toggled_surface": toggled,
        "standard": target_std,
        "window": window,
        "fiber_dims": dict(fibH.dims),
        "target_dims": dict(tgtH.dims),
        "dims_match": dims_match,
        "morphism": morphism,
        "note": note,
    }
