"""Graded orbifold surfaces with boundary stops and their dissection algebras.

A surface is described combinatorially: genus, number of (order two) orbifold
points, and a list of boundary components, each carrying a stop configuration
(a positive number of stops, a full boundary stop, or none) and an integer
winding number for the grading structure.  One stopped component is marked as
distinguished; the standing assumption is that it exists.

``standard_algebra`` emits the DG gentle presentation of the standard
dissection.  The quiver is assembled from blocks laid out in a fixed order
along the distinguished boundary:

* ``genus``     one block per handle: arrows p, r (forward), q (backward)
                with relations q.p, r.q, u.r and a connector u;
* ``orbifold``  one block per orbifold point: parallel arrows p, q with
                d(p) = q, |q| = 1, and a connector;
* ``stopped``   one block per additional stopped boundary: a stop chain of
                degree-0 arrows (consecutive products vanish), a long arrow q
                of degree equal to the winding number, and a connector
                pairing with q;
* ``full_stop`` a loop p of degree 1 - winding with p.p = 0; the connector
                chains directly into the next connector;
* ``stopless``  a loop q of degree equal to the winding number; the final
                such block feeds the front chain without a connector;
* ``front``     the stop chain of the distinguished boundary itself,
                s0 - 1 arrows with consecutive products vanishing.

Each connector lands on the first vertex of the next nonempty block, and the
entry arrow of that block forms a relation with the incoming connector.  The
last nonempty block never gets a connector.  A surface with no blocks at all
(a disk with a single stop) yields the ground field.

Validation is report based.  Alongside the structural checks it computes the
line-field index defect

    orbifold_points - sum(windings) - (4 - 4*genus - 2*#boundary)

which vanishes for every honestly graded surface.  For inputs where every
boundary component is one of the five second-cohomology classes the identity
specializes to  orbifold_points + #one_stop_w1 + #full_stop_w1 + #stopless_w1
== 4 - 4*genus  and is enforced exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .errors import InputError, InternalInvariantError
from .quiver import Algebra, Arrow, Element, GradedQuiver, Path

FULL = "full"
STOPLESS = "none"

# Boundary classes contributing to the second cohomology, by stop shape and
# winding.  Components outside these five classes contribute nothing.
CONTRIBUTION_CLASSES = (
    "one_stop_w1",
    "full_stop_w1",
    "full_stop_w2",
    "stopless_w1",
    "stopless_w2",
)


@dataclass(frozen=True)
class BoundaryComponent:
    """One boundary circle: stop configuration plus winding number.

    ``stops`` is a positive integer, ``"full"`` or ``"none"``.
    """

    stops: object
    winding: int = 0

    def is_stopped(self) -> bool:
        return isinstance(self.stops, int) and self.stops >= 1


@dataclass(frozen=True)
class SurfaceData:
    genus: int = 0
    orbifold_points: int = 0
    boundary: tuple = ()
    distinguished: object = None

    @classmethod
    def from_dict(cls, data) -> "SurfaceData":
        try:
            comps = tuple(
                BoundaryComponent(c["stops"], int(c["winding"]))
                for c in data["boundary"]
            )
            return cls(
                genus=int(data["genus"]),
                orbifold_points=int(data["orbifold_points"]),
                boundary=comps,
                distinguished=data.get("distinguished"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed surface description: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "orbifold_points": self.orbifold_points,
            "boundary": [
                {"stops": c.stops, "winding": c.winding} for c in self.boundary
            ],
            "distinguished": self.distinguished,
        }


def classify_component(comp: BoundaryComponent):
    """The contribution class of one boundary component, or None."""
    if comp.is_stopped() and comp.stops == 1 and comp.winding == 1:
        return "one_stop_w1"
    if comp.stops == FULL and comp.winding in (1, 2):
        return f"full_stop_w{comp.winding}"
    if comp.stops == STOPLESS and comp.winding in (1, 2):
        return f"stopless_w{comp.winding}"
    return None


def _component_problems(i, comp) -> list:
    out = []
    if not isinstance(comp, BoundaryComponent):
        return [f"boundary[{i}] is not a BoundaryComponent"]
    ok_stops = comp.is_stopped() or comp.stops in (FULL, STOPLESS)
    if not ok_stops:
        out.append(f"boundary[{i}].stops must be a positive integer, 'full' or 'none'")
    if not isinstance(comp.winding, int) or isinstance(comp.winding, bool):
        out.append(f"boundary[{i}].winding must be an integer")
    return out


def validate_surface(s: SurfaceData) -> dict:
    """Structural report for a surface description.  Never raises.

    ``index_defect`` is reported for every structurally sound surface with
    boundary; it only invalidates the input when the surface is pillowcase
    shaped (every component in a contribution class), where the identity is
    exact.
    """
    problems = []
    if not isinstance(s.genus, int) or isinstance(s.genus, bool) or s.genus < 0:
        problems.append("genus must be a nonnegative integer")
    if (not isinstance(s.orbifold_points, int)
            or isinstance(s.orbifold_points, bool) or s.orbifold_points < 0):
        problems.append("orbifold_points must be a nonnegative integer")

    comp_ok = True
    for i, comp in enumerate(s.boundary):
        ps = _component_problems(i, comp)
        problems.extend(ps)
        comp_ok = comp_ok and not ps

    closed = len(s.boundary) == 0
    if closed:
        problems.append("no boundary components (standing assumption needs a stopped one)")
    else:
        if s.distinguished is None:
            problems.append("no distinguished boundary component selected")
        elif not isinstance(s.distinguished, int) or not (
                0 <= s.distinguished < len(s.boundary)):
            problems.append("distinguished index out of range")
        elif comp_ok and not s.boundary[s.distinguished].is_stopped():
            problems.append("distinguished component must carry boundary stops")

    structural_ok = not problems

    index_defect = None
    pillowcase_shaped = False
    index_identity = None
    if comp_ok and not closed and isinstance(s.genus, int) \
            and isinstance(s.orbifold_points, int):
        b = len(s.boundary)
        wsum = sum(c.winding for c in s.boundary)
        index_defect = s.orbifold_points - wsum - (4 - 4 * s.genus - 2 * b)
        classes = [classify_component(c) for c in s.boundary]
        pillowcase_shaped = (structural_ok and all(classes)
                             and classes.count("one_stop_w1") >= 1)
        if pillowcase_shaped:
            counts = {
                "orbifold_points": s.orbifold_points,
                "one_stop_w1": classes.count("one_stop_w1"),
                "full_stop_w1": classes.count("full_stop_w1"),
                "stopless_w1": classes.count("stopless_w1"),
            }
            total = sum(counts.values())
            index_identity = dict(counts, sum=total, expected=4 - 4 * s.genus,
                                  holds=total == 4 - 4 * s.genus)
            if not index_identity["holds"]:
                problems.append(
                    f"index identity fails: orbifold_points + single-stop and "
                    f"full-stop and stopless winding-1 components = {total}, "
                    f"expected {4 - 4 * s.genus}")

    return {
        "valid": not problems,
        "problems": problems,
        "closed": closed,
        "pillowcase_shaped": pillowcase_shaped,
        "index_defect": index_defect,
        "index_identity": index_identity,
    }


def _require_valid(s: SurfaceData) -> None:
    report = validate_surface(s)
    if not report["valid"]:
        raise InputError("invalid surface: " + "; ".join(report["problems"]))


def predicted_hh2(s: SurfaceData):
    """Predicted dimension of the second cohomology, with the contributor list.

    Returns ``(count, contributions)`` where each contribution is a dict with
    the component index and its class label.
    """
    _require_valid(s)
    contributions = []
    for i, comp in enumerate(s.boundary):
        label = classify_component(comp)
        if label is not None:
            contributions.append({"component": i, "class": label})
    return len(contributions), contributions


@dataclass
class StandardAlgebra:
    """Presentation of the standard dissection plus per-block metadata."""

    algebra: Algebra
    blocks: list
    surface: SurfaceData


def standard_algebra(s: SurfaceData) -> StandardAlgebra:
    """The DG gentle algebra of the standard dissection of ``s``.

    Refuses invalid surfaces.  The output is checked to be DG gentle and the
    graded arrow families are re-checked against the winding numbers.
    """
    _require_valid(s)

    stopped_idx = [i for i, c in enumerate(s.boundary)
                   if c.is_stopped() and i != s.distinguished]
    full_idx = [i for i, c in enumerate(s.boundary) if c.stops == FULL]
    loose_idx = [i for i, c in enumerate(s.boundary) if c.stops == STOPLESS]
    s0 = s.boundary[s.distinguished].stops

    plan = []
    plan.extend(("genus", h) for h in range(1, s.genus + 1))
    plan.extend(("orbifold", o) for o in range(1, s.orbifold_points + 1))
    plan.extend(("stopped", ci) for ci in stopped_idx)
    plan.extend(("full_stop", ci) for ci in full_idx)
    plan.extend(("stopless", ci) for ci in loose_idx)
    if s0 >= 2:
        plan.append(("front", s.distinguished))

    vertices = []
    arrows = []
    rels = []
    diff = {}
    blocks = []

    def new_vertex() -> str:
        vertices.append(str(len(vertices) + 1))
        return vertices[-1]

    attach = None   # vertex the next block starts on, when already created
    pending = None  # arrow whose relation partner is the next entry arrow

    ordinal = {"stopped": 0, "full_stop": 0, "stopless": 0}

    for pos, (kind, ident) in enumerate(plan):
        last = pos == len(plan) - 1
        following = plan[pos + 1][0] if not last else None

        if kind == "genus":
            a = attach or new_vertex()
            b = new_vertex()
            p, qn, r = f"gp{ident}", f"gq{ident}", f"gr{ident}"
            arrows += [Arrow(p, a, b, 0), Arrow(qn, b, a, 0), Arrow(r, a, b, 0)]
            rels += [(qn, p), (r, qn)]
            if pending:
                rels.append((p, pending))
            names = {"p": p, "q": qn, "r": r}
            attach = pending = None
            exit_ = None
            if not last:
                exit_ = f"gu{ident}"
                arrows.append(Arrow(exit_, b, new_vertex(), 0))
                rels.append((exit_, r))
                names["u"] = exit_
                attach, pending = vertices[-1], exit_
            blocks.append({"kind": "genus", "index": ident, "vertices": (a, b),
                           "arrows": names, "entry": p, "exit": exit_})

        elif kind == "orbifold":
            a = attach or new_vertex()
            b = new_vertex()
            p, qn = f"op{ident}", f"oq{ident}"
            arrows += [Arrow(p, a, b, 0), Arrow(qn, a, b, 1)]
            diff[p] = Element.of(Path.word(qn))
            if pending:
                rels.append((qn, pending))
            names = {"p": p, "q": qn}
            attach = pending = None
            exit_ = None
            if not last:
                exit_ = f"ou{ident}"
                arrows.append(Arrow(exit_, b, new_vertex(), 0))
                rels.append((exit_, qn))
                names["u"] = exit_
                attach, pending = vertices[-1], exit_
            blocks.append({"kind": "orbifold", "index": ident, "vertices": (a, b),
                           "arrows": names, "entry": qn, "exit": exit_})

        elif kind == "stopped":
            comp = s.boundary[ident]
            ordinal["stopped"] += 1
            j = ordinal["stopped"]
            count = comp.stops
            b0 = attach or new_vertex()
            verts = [b0] + [new_vertex() for _ in range(count)]
            chain = []
            for t in range(count):
                name = f"p{j}" if t == 0 else f"p{j}x{t + 1}"
                arrows.append(Arrow(name, verts[t], verts[t + 1], 0))
                chain.append(name)
            # stops break composability: consecutive chain arrows multiply to zero
            rels += [(chain[t + 1], chain[t]) for t in range(count - 1)]
            qn = f"q{j}"
            arrows.append(Arrow(qn, b0, verts[-1], comp.winding))
            if pending:
                rels.append((qn, pending))
            names = {"p1": chain[0], "chain": tuple(chain), "q": qn}
            attach = pending = None
            exit_ = None
            if not last:
                exit_ = f"u{j}"
                arrows.append(Arrow(exit_, verts[-1], new_vertex(), 0))
                rels.append((exit_, qn))
                names["u"] = exit_
                attach, pending = vertices[-1], exit_
            blocks.append({"kind": "stopped", "index": ident, "stops": count,
                           "winding": comp.winding, "vertices": tuple(verts),
                           "arrows": names, "entry": qn, "exit": exit_})

        elif kind == "full_stop":
            comp = s.boundary[ident]
            ordinal["full_stop"] += 1
            f = ordinal["full_stop"]
            h = attach or new_vertex()
            p = f"fp{f}"
            arrows.append(Arrow(p, h, h, 1 - comp.winding))
            rels.append((p, p))
            names = {"p": p}
            attach = None
            exit_ = None
            if not last:
                # the connector doubles as the entry arrow of this block
                exit_ = f"fu{f}"
                arrows.append(Arrow(exit_, h, new_vertex(), 0))
                if pending:
                    rels.append((exit_, pending))
                names["u"] = exit_
                attach = vertices[-1]
            pending = exit_
            blocks.append({"kind": "full_stop", "index": ident,
                           "winding": comp.winding, "vertices": (h,),
                           "arrows": names, "entry": exit_, "exit": exit_})

        elif kind == "stopless":
            comp = s.boundary[ident]
            ordinal["stopless"] += 1
            v = ordinal["stopless"]
            vx = attach or new_vertex()
            qn = f"sq{v}"
            arrows.append(Arrow(qn, vx, vx, comp.winding))
            if pending:
                rels.append((qn, pending))
            names = {"q": qn}
            attach = pending = None
            exit_ = None
            if following == "stopless":
                exit_ = f"su{v}"
                arrows.append(Arrow(exit_, vx, new_vertex(), 0))
                rels.append((exit_, qn))
                names["u"] = exit_
                attach, pending = vertices[-1], exit_
            elif following == "front":
                # the front chain starts on this vertex; the loop itself is
                # the relation partner of the first chain arrow
                attach, pending = vx, qn
            blocks.append({"kind": "stopless", "index": ident,
                           "winding": comp.winding, "vertices": (vx,),
                           "arrows": names, "entry": qn, "exit": exit_})

        else:  # front
            c0 = attach or new_vertex()
            verts = [c0] + [new_vertex() for _ in range(s0 - 1)]
            chain = []
            for t in range(s0 - 1):
                name = f"z{t + 1}"
                arrows.append(Arrow(name, verts[t], verts[t + 1], 0))
                chain.append(name)
            rels += [(chain[t + 1], chain[t]) for t in range(s0 - 2)]
            if pending:
                rels.append((chain[0], pending))
            attach = pending = None
            blocks.append({"kind": "front", "index": ident, "stops": s0,
                           "winding": s.boundary[ident].winding,
                           "vertices": tuple(verts),
                           "arrows": {"chain": tuple(chain)},
                           "entry": chain[0], "exit": None})

    if not vertices:
        new_vertex()  # disk with a single stop: the ground field

    alg = Algebra(GradedQuiver(vertices, arrows), relations=rels,
                  differential=diff)

    problems = alg.validate()
    if problems or not alg.is_dg_gentle():
        raise InternalInvariantError(
            f"standard dissection emitted a non DG gentle presentation: "
            f"{problems or 'gentleness fails'}")
    _check_block_degrees(alg, blocks)
    return StandardAlgebra(algebra=alg, blocks=blocks, surface=s)


def _check_block_degrees(alg: Algebra, blocks) -> None:
    """Winding bookkeeping: graded arrow families match their components."""
    q = alg.quiver
    for blk in blocks:
        names = blk["arrows"]
        if blk["kind"] == "orbifold":
            expect = {names["p"]: 0, names["q"]: 1}
        elif blk["kind"] == "stopped":
            expect = {names["q"]: blk["winding"]}
            expect.update({a: 0 for a in names["chain"]})
        elif blk["kind"] == "full_stop":
            expect = {names["p"]: 1 - blk["winding"]}
        elif blk["kind"] == "stopless":
            expect = {names["q"]: blk["winding"]}
        elif blk["kind"] == "front":
            expect = {a: 0 for a in names["chain"]}
        else:
            expect = {names[r]: 0 for r in ("p", "q", "r")}
        if "u" in names:
            expect[names["u"]] = 0
        for name, deg in expect.items():
            if q.arrow(name).degree != deg:
                raise InternalInvariantError(
                    f"arrow {name} has degree {q.arrow(name).degree}, "
                    f"expected {deg}")


def add_stops(s: SurfaceData) -> SurfaceData:
    """Add one stop to every stopless winding-0 component (localization)."""
    _require_valid(s)
    comps = tuple(
        replace(c, stops=1) if c.stops == STOPLESS and c.winding == 0 else c
        for c in s.boundary)
    return replace(s, boundary=comps)


def toggle_full_stops(s: SurfaceData, components) -> SurfaceData:
    """Swap full stop and no stop on the listed components (an involution)."""
    _require_valid(s)
    chosen = set(components)
    for i in chosen:
        if not isinstance(i, int) or not (0 <= i < len(s.boundary)):
            raise InputError(f"component index {i} out of range")
        if s.boundary[i].stops not in (FULL, STOPLESS):
            raise InputError(
                f"component {i} carries ordinary stops; only full-stop or "
                f"stopless components can be toggled")
    comps = tuple(
        replace(c, stops=STOPLESS if c.stops == FULL else FULL)
        if i in chosen else c
        for i, c in enumerate(s.boundary))
    return replace(s, boundary=comps)


def deform_surface(s: SurfaceData, support) -> SurfaceData:
    """Partial compactification along contributing boundary components.

    Winding-1 contributors are replaced by an orbifold point; winding-2
    contributors are filled in smoothly.  ``support`` must be a subset of the
    contributing components reported by ``predicted_hh2``.
    """
    _, contributions = predicted_hh2(s)
    by_index = {c["component"]: c["class"] for c in contributions}
    chosen = set(support)
    for i in chosen:
        if i not in by_index:
            raise InputError(
                f"component {i} does not contribute to the second cohomology")

    new_orbifold = s.orbifold_points + sum(
        1 for i in chosen if by_index[i].endswith("_w1"))
    keep = [i for i in range(len(s.boundary)) if i not in chosen]
    boundary = tuple(s.boundary[i] for i in keep)

    distinguished = None
    if s.distinguished is not None and s.distinguished not in chosen:
        distinguished = keep.index(s.distinguished)
    else:
        for new_i, old_i in enumerate(keep):
            if s.boundary[old_i].is_stopped():
                distinguished = new_i
                break

    return SurfaceData(genus=s.genus, orbifold_points=new_orbifold,
                       boundary=boundary, distinguished=distinguished)


def random_surfaces(count=20, seed=2024, max_genus=2, max_components=5,
                    max_winding=3, max_orbifold=6):
    """A reproducible sample of valid surfaces for cross-checking.

    Windings are drawn freely and the orbifold point count is then forced by
    the line-field index identity, so every emitted surface has index defect
    zero.  Draws violating the orbifold bound are rejected.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = rng.randint(0, max_genus)
        b = rng.randint(1, max_components)
        comps = []
        for i in range(b):
            w = rng.choice([-3, -2, -1, 0, 1, 1, 2, 2, 3])
            w = max(-max_winding, min(max_winding, w))
            if i == 0:
                comps.append(BoundaryComponent(rng.choice([1, 1, 1, 2, 3]), w))
                continue
            shape = rng.choice(["stops", "stops", FULL, STOPLESS])
            if shape == "stops":
                comps.append(BoundaryComponent(rng.choice([1, 1, 2]), w))
            else:
                comps.append(BoundaryComponent(shape, w))
        wsum = sum(c.winding for c in comps)
        k = 4 - 4 * g - 2 * b + wsum
        if not (0 <= k <= max_orbifold):
            continue
        surf = SurfaceData(genus=g, orbifold_points=k,
                           boundary=tuple(comps), distinguished=0)
        if validate_surface(surf)["valid"]:
            out.append(surf)
    return out
