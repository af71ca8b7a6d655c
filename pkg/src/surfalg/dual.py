"""Weak duals of standard dissection presentations.

Vertices come in three local shapes.  A square-zero loop makes the local
endomorphism algebra k[p]/(p^2): finite dimensional, infinite global
dimension.  A relation-free loop makes it k[q]: smooth but infinite
dimensional.  No loop gives the ground field, which is both.  Dualizing at a
set of loop vertices exchanges the first two shapes; on the surface it is
the involution swapping full boundary stops with unstopped components, and
on loop degrees it is deg -> 1 - deg.

The dual presentation is built through the surface round trip (toggle the
stops, rebuild the standard presentation).  :func:`end_of_two_term_twist` is
the independent local check: the cohomology of the 2x2 endomorphism complex
of the one-sided twist at a relation-free loop vertex collapses onto
k[p]/(p^2) in the complementary degree.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import InputError, InternalInvariantError
from .linalg import rank_dense
from .quiver import Algebra, Arrow, Element, GradedQuiver, Path
from .surface import (
    FULL,
    STOPLESS,
    BoundaryComponent,
    StandardAlgebra,
    standard_algebra,
    toggle_full_stops,
)

PROPER_NOT_SMOOTH = "proper_not_smooth"
SMOOTH_NOT_PROPER = "smooth_not_proper"
BOTH = "both"


@dataclass(frozen=True)
class VertexClass:
    vertex: object
    kind: str
    loop: object = None  # witnessing loop arrow, None for plain vertices


@dataclass(frozen=True)
class VertexClassification:
    classes: tuple
    smooth: tuple  # vertices carrying a relation-free loop
    proper: tuple  # vertices carrying a square-zero loop

    def kind_of(self, vertex):
        for c in self.classes:
            if c.vertex == vertex:
                return c
        raise InputError(f"unknown vertex {vertex!r}")


def _unwrap(p) -> Algebra:
    return p.algebra if isinstance(p, StandardAlgebra) else p


def classify_vertices(p) -> VertexClassification:
    """Partition the vertices by their local loop structure.

    Exclusive and exhaustive: square-zero loop, relation-free loop, or no
    loop at all.  Two loops at one vertex never happen on standard
    presentations and are refused.
    """
    alg = _unwrap(p)
    if not alg.is_monomial():
        raise InputError("vertex classification needs a monomial presentation")
    q = alg.quiver
    classes, smooth, proper = [], [], []
    for v in q.vertices:
        loops = [a for a in q.out_arrows(v) if q.arrows[a].tgt == v]
        if len(loops) > 1:
            raise InputError(f"vertex {v!r} carries two loops; not a standard shape")
        if not loops:
            classes.append(VertexClass(v, BOTH))
            continue
        loop = loops[0]
        if alg.has_relation(loop, loop):
            classes.append(VertexClass(v, PROPER_NOT_SMOOTH, loop))
            proper.append(v)
        else:
            classes.append(VertexClass(v, SMOOTH_NOT_PROPER, loop))
            smooth.append(v)
    return VertexClassification(tuple(classes), tuple(smooth), tuple(proper))


def _owning_component(standard: StandardAlgebra, vertex):
    for blk in standard.blocks:
        if blk["kind"] in ("stopless", "full_stop") and vertex in blk["vertices"]:
            return blk["index"]
    raise InputError(
        f"vertex {vertex!r} does not sit on an unstopped or fully stopped "
        "boundary component")


def weak_dual(standard: StandardAlgebra, vertices) -> StandardAlgebra:
    """Dual presentation obtained by toggling stops under the given vertices.

    ``vertices`` must carry loops (either shape).  Refuses presentations
    that are not locally proper, naming the offending degree class: a
    relation-free cycle of total degree zero spans an infinite-dimensional
    degree-0 component, and no dual exists on that side.
    """
    alg = standard.algebra
    ok, bad = alg.locally_proper()
    if not ok:
        cyc, deg = bad[0]
        raise InputError(
            "not locally proper: relation-free cycle "
            f"{'.'.join(cyc)} has total degree {deg}, so the degree-{deg} "
            "component is infinite dimensional")
    cls = classify_vertices(alg)
    allowed = set(cls.smooth) | set(cls.proper)
    chosen = list(vertices)
    stray = [v for v in chosen if v not in allowed]
    if stray:
        raise InputError(
            f"vertices {stray} carry no loop; the weak dual toggles loop "
            "vertices only")
    comps = sorted({_owning_component(standard, v) for v in chosen})
    dual = standard_algebra(toggle_full_stops(standard.surface, comps))
    _check_degree_involution(standard, dual, comps)
    return dual


def _loop_block(standard: StandardAlgebra, component):
    for blk in standard.blocks:
        if blk["kind"] in ("stopless", "full_stop") and blk["index"] == component:
            return blk
    raise InternalInvariantError(f"component {component} has no loop block")


def _check_degree_involution(standard, dual, comps) -> None:
    # toggled loop degrees must pair up as deg + deg' = 1
    for ci in comps:
        old = _loop_block(standard, ci)
        new = _loop_block(dual, ci)
        names_old = old["arrows"]
        names_new = new["arrows"]
        d_old = standard.algebra.quiver.arrows[
            names_old.get("q", names_old.get("p"))].degree
        d_new = dual.algebra.quiver.arrows[
            names_new.get("q", names_new.get("p"))].degree
        if d_old + d_new != 1:
            raise InternalInvariantError(
                f"loop degrees {d_old} and {d_new} on component {ci} do not "
                "satisfy deg + deg' = 1")


# --- the 2x2 endomorphism complex of the one-sided twist ------------------
#
# X = P[1 - w] (+) P over the local algebra k[q], |q| = w, with the strictly
# lower-triangular connecting map q.  A basis element is q^k placed in one
# matrix corner; corners are addressed "rc" with r the target summand and c
# the source summand, so "21" is the lower-left corner holding the
# connecting map and "12" the upper-right one.

CORNERS = ("11", "12", "21", "22")


def twist_degree(w: int, corner: str, k: int) -> int:
    """Hom-degree of q^k in the given corner (shift offset s = 1 - w)."""
    plain = k * w
    if corner == "21":
        return plain + (1 - w)
    if corner == "12":
        return plain - (1 - w)
    return plain


def twist_delta(w: int, corner: str, k: int):
    """d(f) = delta f - (-1)^{|f|} f delta on one matrix unit.

    Returns a list of ((corner, power), coefficient) pairs.  Strictly
    lower-triangular times strictly lower-triangular vanishes, so the
    lower-left corner is closed.
    """
    if corner == "11":
        return [(("21", k + 1), 1)]
    if corner == "22":
        return [(("21", k + 1), 1 if (k * w) % 2 else -1)]
    if corner == "12":
        fdeg = twist_degree(w, corner, k)
        return [(("22", k + 1), 1), (("11", k + 1), 1 if fdeg % 2 else -1)]
    return []


def _assert_local_polynomial(alg: Algebra, v, loop, max_len=8) -> None:
    for path in alg.irreducible_paths(max_len, src=v, tgt=v):
        letters = set(path.arrows)
        if letters and letters != {loop}:
            raise InputError(
                f"cycles at {v!r} are not powers of {loop}; the two-term "
                "twist needs a polynomial local algebra")


def end_of_two_term_twist(p, j, degree_pad=3):
    """Local dual check at a relation-free loop vertex.

    Computes the cohomology of the 2x2 endomorphism complex over a degree
    window and verifies it collapses onto exactly two classes, the identity
    in degree 0 and a square-zero class in degree 1 - |q|.  Returns the
    k[p]/(p^2) presentation together with a report of the window dimensions.
    """
    alg = _unwrap(p)
    cls = classify_vertices(alg)
    info = cls.kind_of(j)
    if info.kind != SMOOTH_NOT_PROPER:
        raise InputError(f"vertex {j!r} carries no relation-free loop")
    loop = info.loop
    w = alg.quiver.arrows[loop].degree
    if w == 0:
        raise InputError(
            "degree-0 loop: the local endomorphism algebra is infinite "
            "dimensional in degree 0")
    _assert_local_polynomial(alg, j, loop)

    lo = min(0, 1 - w) - degree_pad
    hi = max(0, 1 - w) + degree_pad
    max_power = (max(abs(lo), abs(hi)) + abs(1 - w)) // abs(w) + 2
    slices = {}
    for k in range(max_power + 1):
        for corner in CORNERS:
            n = twist_degree(w, corner, k)
            if lo - 1 <= n <= hi + 1:
                slices.setdefault(n, []).append((corner, k))

    rank_at = {}
    for n in range(lo - 1, hi + 1):
        dom = slices.get(n, [])
        cod = slices.get(n + 1, [])
        if not dom or not cod:
            rank_at[n] = 0
            continue
        col = {key: i for i, key in enumerate(cod)}
        rows = []
        for corner, k in dom:
            vec = [0] * len(cod)
            for key, coef in twist_delta(w, corner, k):
                # images one power up always land inside the padded window
                vec[col[key]] = coef
            rows.append(vec)
        rank_at[n] = rank_dense(rows, len(cod))

    dims = {}
    for n in range(lo, hi + 1):
        dim = len(slices.get(n, ())) - rank_at.get(n, 0) - rank_at.get(n - 1, 0)
        if dim:
            dims[n] = dim

    expect = {0: 1}
    expect[1 - w] = expect.get(1 - w, 0) + 1
    if dims != expect:
        raise InternalInvariantError(
            f"two-term twist cohomology {dims} differs from the square-zero "
            f"pattern {expect}")

    local = Algebra(GradedQuiver([j], [Arrow("p", j, j, 1 - w)]),
                    relations=[("p", "p")])
    report = {"loop": loop, "loop_degree": w, "dual_loop_degree": 1 - w,
              "window": (lo, hi), "dims": dims}
    return local, report


def koszul_relation_check(standard: StandardAlgebra) -> dict:
    """Surface-level comparison of dualizing everywhere with the stop swap.

    Needs a smooth input (no square-zero loops).  The toggled surface must
    equal the surface produced by swapping full stops and unstopped
    components outright, and toggling twice must return the original.
    """
    cls = classify_vertices(standard.algebra)
    if cls.proper:
        raise InputError(
            f"square-zero loops at {sorted(cls.proper)}; the Koszul "
            "comparison needs a smooth presentation")
    s = standard.surface
    loose = [i for i, c in enumerate(s.boundary) if c.stops == STOPLESS]
    dual_surface = toggle_full_stops(s, loose) if loose else s
    swapped = tuple(
        BoundaryComponent(FULL, c.winding) if c.stops == STOPLESS
        else BoundaryComponent(STOPLESS, c.winding) if c.stops == FULL
        else c
        for c in s.boundary)
    koszul_surface = replace(s, boundary=swapped)
    back = toggle_full_stops(dual_surface, loose) if loose else dual_surface
    return {
        "match": dual_surface == koszul_surface,
        "involution": back == s,
        "dual_surface": dual_surface.to_dict(),
        "koszul_surface": koszul_surface.to_dict(),
    }


# --- presentation isomorphism ---------------------------------------------


def presentation_isomorphism(a: Algebra, b: Algebra):
    """Bijection of presentations, or None.

    Searches for a vertex/arrow bijection preserving degrees, endpoints,
    the relation set, the rewrite set, and the differential on the nose.
    Quivers here are small, so plain backtracking over arrows is fine.
    """
    qa, qb = a.quiver, b.quiver
    if (len(qa.vertices) != len(qb.vertices)
            or len(qa.arrows) != len(qb.arrows)
            or len(a.relations) != len(b.relations)
            or len(a.rewrites) != len(b.rewrites)
            or len(a.differential) != len(b.differential)):
        return None

    def sig(q, name):
        ar = q.arrows[name]
        return (ar.degree, ar.src == ar.tgt)

    pool = {}
    for nb in qb.arrows:
        pool.setdefault(sig(qb, nb), []).append(nb)
    names_a = sorted(qa.arrows)

    def extend(i, amap, vmap, used_arrows, used_verts):
        if i == len(names_a):
            if _structure_matches(a, b, amap, vmap):
                return dict(amap), dict(vmap)
            return None
        na = names_a[i]
        ara = qa.arrows[na]
        for nb in pool.get(sig(qa, na), ()):
            if nb in used_arrows:
                continue
            arb = qb.arrows[nb]
            add_v = {}
            ok = True
            for va, vb in ((ara.src, arb.src), (ara.tgt, arb.tgt)):
                cur = vmap.get(va, add_v.get(va))
                if cur is None:
                    if vb in used_verts or vb in add_v.values():
                        ok = False
                        break
                    add_v[va] = vb
                elif cur != vb:
                    ok = False
                    break
            if not ok:
                continue
            amap[na] = nb
            vmap.update(add_v)
            used_arrows.add(nb)
            used_verts.update(add_v.values())
            found = extend(i + 1, amap, vmap, used_arrows, used_verts)
            if found:
                return found
            del amap[na]
            for va in add_v:
                del vmap[va]
            used_arrows.discard(nb)
            used_verts.difference_update(add_v.values())
        return None

    found = extend(0, {}, {}, set(), set())
    if found is None:
        return None
    amap, vmap = found
    return {"arrows": amap, "vertices": vmap}


def _map_path(path: Path, amap, vmap) -> Path:
    if path.is_vertex:
        return Path.vertex(vmap[path.base])
    return Path(tuple(amap[x] for x in path.arrows))


def _map_element(el: Element, amap, vmap) -> Element:
    return Element({_map_path(p, amap, vmap): c for p, c in el.terms.items()})


def _structure_matches(a: Algebra, b: Algebra, amap, vmap) -> bool:
    if {(amap[x], amap[y]) for x, y in a.relations} != set(b.relations):
        return False
    rw_b = {lhs: rhs for lhs, rhs in b.rewrites}
    for lhs, rhs in a.rewrites:
        img = rw_b.get(_map_path(lhs, amap, vmap))
        if img is None or img != _map_element(rhs, amap, vmap):
            return False
    for name, val in a.differential.items():
        # stored differentials are never zero, so a missing key is a mismatch
        other = b.differential.get(amap[name])
        if other is None or _map_element(val, amap, vmap) != other:
            return False
    return True
