"""Finite curved A-infinity presentations and exact identity checking.

A presentation stores structure maps on the shift of a finite path basis.
Input tuples follow the same order as path words: the rightmost entry acts
first.  Signs use the Koszul rule on the shifted complex, so the term that
contracts s consecutive inputs with t inputs to their right enters the
identity sum with sign (-1)^e, e the sum of the shifted degrees of those t
rightmost inputs.  A differential graded presentation embeds through the
gauge

    mu1(s a)      = (-1)^{|a|} s(d a)
    mu2(s a, s b) = (-1)^{|b|} s(ab)      (b acts first)

and that embedding is what pins the convention: with it the quadratic and
cubic identities reduce to d^2 = 0, the Leibniz rule and associativity with
no leftover signs.

Units are kept out of the basis.  They still show up inside outputs (a
rewrite or a differential may produce a vertex term), and the checker then
applies the strict unit action

    mu2(s a, s e_v) = s a,   mu2(s e_v, s b) = (-1)^{|b|} s b,

with units annihilating every other arity.  These are the gauge values of
the binary product on a unit, so the extension is forced, not a choice.

Curvature is a degree-2 element per vertex.  The arity-0 identity is
mu1(mu0) = 0 and the curvature insertions enter every higher identity at
the composition gaps, one insertion per term.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .deformation import verify_morphism
from .errors import InputError, InternalInvariantError
from .hochschild import overlap_delta
from .quiver import Algebra, Arrow, Element, GradedQuiver, Path

_PROBE = 24


def _shifted(quiver, path) -> int:
    return quiver.degree(path) - 1


@dataclass
class AInfinityPresentation:
    """Sparse structure maps over a finite basis of nonunit paths.

    ``mu`` maps arity to a table of input tuples; absent tuples act as
    zero.  ``curvature`` holds the arity-0 values keyed by vertex.  The
    quiver of ``algebra`` is the authority for degrees and endpoints;
    ``truncated`` records that the basis is a length window of an
    infinite path set rather than the whole of it.
    """

    algebra: Algebra
    basis: tuple
    mu: dict
    curvature: dict = field(default_factory=dict)
    max_arity: int = 2
    truncated: bool = False

    def validate(self) -> list:
        """Collect structural problems; an empty list means well formed."""
        problems = []
        quiver = self.algebra.quiver
        seen = set()
        for p in self.basis:
            if not isinstance(p, Path) or p.is_vertex:
                problems.append(f"basis entry {p!r} is not a nonunit path")
                continue
            if p in seen:
                problems.append(f"duplicate basis entry {p.key()}")
            seen.add(p)
            try:
                ok = quiver.is_composable_word(p.arrows)
            except Exception:
                ok = False
            if not ok:
                problems.append(f"basis entry {p.key()} does not compose")
        basis_set = seen

        for v, val in self.curvature.items():
            if v not in quiver.vertices:
                problems.append(f"curvature at unknown vertex {v!r}")
                continue
            if not isinstance(val, Element) or not val:
                problems.append(f"curvature at {v!r} must be nonzero")
                continue
            for p, _ in val.items():
                if p not in basis_set:
                    problems.append(
                        f"curvature term {p.key()} at {v!r} is off basis")
                elif quiver.src(p) != v or quiver.tgt(p) != v:
                    problems.append(
                        f"curvature term {p.key()} is not a loop at {v!r}")
                elif quiver.degree(p) != 2:
                    problems.append(
                        f"curvature term {p.key()} has degree "
                        f"{quiver.degree(p)}, expected 2")

        for arity, table in self.mu.items():
            if not isinstance(arity, int) or arity < 1:
                problems.append(f"bad arity key {arity!r}")
                continue
            if arity > self.max_arity:
                problems.append(f"arity {arity} exceeds bound {self.max_arity}")
            for key, val in table.items():
                label = "(" + ", ".join(
                    p.key() if isinstance(p, Path) else repr(p)
                    for p in key) + ")"
                if len(key) != arity:
                    problems.append(f"entry {label} under arity {arity}")
                    continue
                if any(p not in basis_set for p in key):
                    problems.append(f"entry {label} uses off-basis inputs")
                    continue
                if any(quiver.src(key[i]) != quiver.tgt(key[i + 1])
                       for i in range(len(key) - 1)):
                    problems.append(f"entry {label} is not composable")
                    continue
                if not isinstance(val, Element) or not val:
                    problems.append(f"entry {label} must be a nonzero element")
                    continue
                want = 2 - arity + sum(quiver.degree(p) for p in key)
                src, tgt = quiver.src(key[-1]), quiver.tgt(key[0])
                for p, _ in val.items():
                    if p.is_vertex:
                        ok_frame = p.base == src and p.base == tgt
                    else:
                        ok_frame = p in basis_set and \
                            quiver.src(p) == src and quiver.tgt(p) == tgt
                    if not ok_frame:
                        problems.append(
                            f"output term {p.key()} of {label} is not "
                            f"parallel (or off basis)")
                        continue
                    if quiver.degree(p) != want:
                        problems.append(
                            f"output term {p.key()} of {label} has degree "
                            f"{quiver.degree(p)}, expected {want}")
        return problems


# dg embedding ----------------------------------------------------------------


def dg_presentation(algebra: Algebra, path_len=None) -> AInfinityPresentation:
    """Gauge a quiver presentation into a two-map structure.

    Without ``path_len`` the full set of irreducible paths must be
    finite.  With it the basis is cut at that length, which is only a
    coherent quotient for monomial presentations carrying no
    differential; anything else could rewrite a long path back inside
    the window and the cut tables would lie.
    """
    truncated = False
    if path_len is None:
        paths = list(algebra.irreducible_paths(_PROBE))
        if any(len(p) >= _PROBE for p in paths):
            raise InputError(
                "path basis does not stay finite; pass an explicit "
                "path_len window")
    else:
        if int(path_len) < 1:
            raise InputError(f"path_len must be positive, got {path_len!r}")
        if not algebra.is_monomial():
            raise InputError(
                "length truncation needs a monomial presentation; "
                "rewrites can leave the window incoherently")
        if algebra.differential:
            raise InputError(
                "length truncation does not commute with a differential")
        paths = list(algebra.irreducible_paths(int(path_len) + 1))
        truncated = any(len(p) > int(path_len) for p in paths)
        paths = [p for p in paths if len(p) <= int(path_len)]
    basis = tuple(sorted((p for p in paths if not p.is_vertex),
                         key=lambda p: (len(p), p.key())))
    quiver = algebra.quiver
    inside = set(basis)

    mu1 = {}
    for u in basis:
        image = algebra.apply_differential(u)
        if not image:
            continue
        sign = -1 if quiver.degree(u) % 2 else 1
        mu1[(u,)] = image.scale(Fraction(sign))
    mu2 = {}
    for a in basis:
        for b in basis:
            if quiver.src(a) != quiver.tgt(b):
                continue
            prod = algebra.mul(a, b)
            if truncated:
                prod = Element({p: c for p, c in prod.items()
                                if p.is_vertex or p in inside})
            if not prod:
                continue
            sign = -1 if quiver.degree(b) % 2 else 1
            mu2[(a, b)] = prod.scale(Fraction(sign))
    mu = {}
    if mu1:
        mu[1] = mu1
    if mu2:
        mu[2] = mu2
    return AInfinityPresentation(algebra=algebra, basis=basis, mu=mu,
                                 curvature={}, max_arity=2,
                                 truncated=truncated)


# identity checking -----------------------------------------------------------


def _unit_action(quiver, outer_ar, r, t, tuple_in, base):
    """Strict unit value when an inner output term is a vertex.

    Returns the resulting element or None; only the binary product sees
    units, once on either side.
    """
    if outer_ar != 2:
        return None
    if r == 1 and t == 0:
        other = tuple_in[0]
        if quiver.src(other) != base:
            return None
        return Element.of(other)
    if r == 0 and t == 1:
        other = tuple_in[-1]
        if quiver.tgt(other) != base:
            return None
        sign = -1 if quiver.degree(other) % 2 else 1
        return Element.of(other, Fraction(sign))
    return None


def _identity_sum(presentation, inputs):
    """Signed Stasheff sum on one input tuple, with its term trace."""
    quiver = presentation.algebra.quiver
    mu = presentation.mu
    curvature = presentation.curvature
    m = len(inputs)
    total = Element.zero()
    terms = []

    if m == 0:
        for v in sorted(curvature):
            for c, coef in sorted(curvature[v].items(),
                                  key=lambda it: it[0].key()):
                entry = mu.get(1, {}).get((c,))
                if entry is None:
                    continue
                value = entry.scale(coef)
                total = total + value
                terms.append({"r": 0, "s": 0, "t": 0, "sign": 1,
                              "inner": f"mu0@{v}", "inner_term": c.key(),
                              "outer": f"({c.key()})",
                              "value": {p.key(): str(x)
                                        for p, x in value.items()}})
        return total, terms

    for s in range(0, m + 1):
        if s == 0 and not curvature:
            continue
        outer_ar = m - s + 1
        for t in range(0, m - s + 1):
            r = m - s - t
            exponent = sum(_shifted(quiver, inputs[i])
                           for i in range(m - t, m))
            sign = -1 if exponent % 2 else 1
            if s == 0:
                if t == 0:
                    v = quiver.src(inputs[-1])
                elif t == m:
                    v = quiver.tgt(inputs[0])
                else:
                    v = quiver.tgt(inputs[m - t])
                inner_val = curvature.get(v)
                inner_desc = f"mu0@{v}"
            else:
                block = inputs[r:r + s]
                inner_val = mu.get(s, {}).get(block)
                inner_desc = "(" + ", ".join(p.key() for p in block) + ")"
            if inner_val is None:
                continue
            for c, coef in sorted(inner_val.items(),
                                  key=lambda it: it[0].key()):
                if c.is_vertex:
                    acted = _unit_action(quiver, outer_ar, r, t,
                                         inputs, c.base)
                    if acted is None:
                        continue
                    value = acted.scale(coef * sign)
                    outer_desc = f"unit@{c.base}"
                else:
                    okey = inputs[:r] + (c,) + inputs[m - t:]
                    entry = mu.get(outer_ar, {}).get(okey)
                    if entry is None:
                        continue
                    value = entry.scale(coef * sign)
                    outer_desc = "(" + ", ".join(p.key() for p in okey) + ")"
                total = total + value
                terms.append({"r": r, "s": s, "t": t, "sign": sign,
                              "inner": inner_desc, "inner_term": c.key(),
                              "outer": outer_desc,
                              "value": {p.key(): str(x)
                                        for p, x in value.items()}})
    return total, terms


def check_stasheff(presentation: AInfinityPresentation, arity_bound) -> dict:
    """Verify every identity up to ``arity_bound`` inputs.

    Tuples are enumerated by joining table entries: a term is nonzero
    only when an inner entry (or curvature value) lands in a slot of an
    outer entry or triggers the unit action, so every tuple outside the
    join set satisfies its identity for free.  The report carries the
    first violating tuple with the complete signed term trace.
    """
    bound = int(arity_bound)
    if bound < 0:
        raise InputError(f"arity bound must be nonnegative, got {arity_bound!r}")
    report = {"ok": False, "arity_bound": bound, "tuples_checked": 0,
              "problems": presentation.validate(), "violation": None}
    if report["problems"]:
        return report

    quiver = presentation.algebra.quiver
    by_src, by_tgt = {}, {}
    for p in presentation.basis:
        by_src.setdefault(quiver.src(p), []).append(p)
        by_tgt.setdefault(quiver.tgt(p), []).append(p)
    slots = {}
    for arity, table in presentation.mu.items():
        for key in table:
            for pos, p in enumerate(key):
                slots.setdefault(p, []).append((key, pos))

    inner_entries = [((), val) for val in presentation.curvature.values()]
    for table in presentation.mu.values():
        inner_entries.extend(table.items())

    candidates = set()
    if presentation.curvature:
        candidates.add(())
    for key_w, val in inner_entries:
        for c, _ in val.items():
            if c.is_vertex:
                for a in by_src.get(c.base, ()):
                    candidates.add((a,) + key_w)
                for b in by_tgt.get(c.base, ()):
                    candidates.add(key_w + (b,))
            else:
                for okey, pos in slots.get(c, ()):
                    candidates.add(okey[:pos] + key_w + okey[pos + 1:])

    for inputs in sorted((T for T in candidates if len(T) <= bound),
                         key=lambda T: (len(T),
                                        tuple(p.key() for p in T))):
        total, terms = _identity_sum(presentation, inputs)
        report["tuples_checked"] += 1
        if total:
            report["violation"] = {
                "arity": len(inputs),
                "inputs": [p.key() for p in inputs],
                "terms": terms,
                "total": {p.key(): str(c) for p, c in total.items()},
            }
            return report
    report["ok"] = True
    return report


# boundary loops and curvature classes ----------------------------------------


def _normalize_designations(loops):
    if isinstance(loops, str):
        return [(loops,)]
    items = list(loops)
    if not items:
        raise InputError("no designated loops")
    if all(isinstance(x, str) for x in items):
        if len(items) > 2:
            raise InputError("a designation holds one loop or a crossing pair")
        return [tuple(items)]
    out = []
    for x in items:
        if isinstance(x, str):
            out.append((x,))
        else:
            pair = tuple(x)
            if not 1 <= len(pair) <= 2 or \
                    not all(isinstance(s, str) for s in pair):
                raise InputError(f"bad loop designation {x!r}")
            out.append(pair)
    return out


def curved_cocycle_check(algebra: Algebra, loops) -> list:
    """Build and verify the curvature class of designated boundary loops.

    Each designation is one relation-free loop of degree 1 or 2, or a
    crossing pair of loops at a shared vertex with square-zero relations
    and total degree 1 or 2.  The associated cochain sends the base
    vertex to the degree-2 monodromy value (the squared loop, the loop
    itself, or the alternating words), and it must be closed in the
    overlap complex; a nonzero differential means the designated data
    does not bound a relation-free cycle and is rejected.
    """
    quiver = algebra.quiver
    records = []
    for names in _normalize_designations(loops):
        arrows = []
        for name in names:
            try:
                arrows.append(quiver.arrow(name))
            except Exception:
                raise InputError(f"unknown arrow {name!r}")
        base = arrows[0].src
        for ar in arrows:
            if ar.src != ar.tgt:
                raise InputError(f"arrow {ar.name!r} is not a loop")
            if ar.src != base:
                raise InputError("designated loops sit at different vertices")
        winding = sum(ar.degree for ar in arrows)
        if winding not in (1, 2):
            raise InputError(
                f"total loop degree {winding} admits no degree-2 value")

        if len(arrows) == 1:
            q = arrows[0].name
            if algebra.has_relation(q, q) and winding == 1:
                raise InputError(f"loop {q!r} squares to zero")
            word = Path.word(*([q, q] if winding == 1 else [q]))
            value = Element.of(word)
        else:
            q1, q2 = (ar.name for ar in arrows)
            for a, b in ((q1, q1), (q2, q2)):
                if not algebra.has_relation(a, b):
                    raise InputError(
                        f"crossing loops need the square relation on {a!r}")
            if winding == 1:
                value = Element.of(Path.word(q1, q2, q1, q2)) + \
                    Element.of(Path.word(q2, q1, q2, q1))
            else:
                value = Element.of(Path.word(q1, q2)) + \
                    Element.of(Path.word(q2, q1))
        reduced = algebra.reduce(value)
        if reduced != value or not reduced:
            raise InputError(
                "monodromy value collapses under the relations; the "
                "designated loops are not relation free")

        image = overlap_delta(algebra, {Path.vertex(base): value})
        if image:
            bad = {w.key(): {p.key(): str(c) for p, c in el.items()}
                   for w, el in image.items()}
            raise InputError(
                f"designated value is not closed, differential hits {bad}")
        records.append({
            "vertex": base,
            "loops": tuple(ar.name for ar in arrows),
            "winding": winding,
            "value": value,
            "cochain_arity": 0,
            "internal_degree": 2,
            "total_degree": 2,
            "closed": True,
            "exact": False,
            "note": "vertex-supported cochains have nothing to bound them",
        })
    return records


# the four-parameter family ----------------------------------------------------


def pillowcase_algebra() -> Algebra:
    """Six-vertex gentle chain with three parallel degree-1 arrows."""
    quiver = GradedQuiver(
        ["1", "2", "3", "4", "5", "6"],
        [Arrow("p1", "1", "2", 0), Arrow("q1", "1", "2", 1),
         Arrow("u1", "2", "3", 0),
         Arrow("p2", "3", "4", 0), Arrow("q2", "3", "4", 1),
         Arrow("u2", "4", "5", 0),
         Arrow("p3", "5", "6", 0), Arrow("q3", "5", "6", 1)])
    return Algebra(quiver, relations=[("u1", "q1"), ("q2", "u1"),
                                      ("u2", "q2"), ("q3", "u2")])


def _family_tables(lams):
    l1, l2, l3, l4 = lams
    total = l1 * l2 * l3 * l4
    P = Path.word("p3", "u2", "p2", "u1", "p1")
    out = Element.of(P)

    def scaled(coef):
        return out.scale(coef)

    w = Path.word
    mu1 = {}
    for i, li in (("1", l1), ("2", l2), ("3", l3)):
        if li:
            mu1[(w("p" + i),)] = Element.of(w("q" + i), li)
    # every composable product of basis paths is a plain word here (the
    # degree-1 arrows compose with nothing), so the binary gauge sign is
    # always +1 and only the filled square carries a corrected coefficient
    mu3 = {
        (w("q3"), w("u2", "p2"), w("u1", "p1")): -l1 * l2 * l4,
        (w("p3", "u2"), w("q2"), w("u1", "p1")): l1 * l3 * l4,
        (w("p3", "u2", "p2"), w("u1"), w("q1")): l2 * l3 * l4,
    }
    mu4 = {
        (w("q3"), w("u2"), w("q2"), w("u1", "p1")): l1 * l4,
        (w("q3"), w("u2", "p2"), w("u1"), w("q1")): l2 * l4,
        (w("p3", "u2"), w("q2"), w("u1"), w("q1")): -l3 * l4,
    }
    mu5 = {
        (w("q3"), w("u2"), w("q2"), w("u1"), w("q1")): -l4,
    }
    tables = {}
    if mu1:
        tables[1] = mu1
    for arity, tab in ((3, mu3), (4, mu4), (5, mu5)):
        kept = {key: scaled(coef) for key, coef in tab.items() if coef}
        if kept:
            tables[arity] = kept
    return tables, P, total


def pillowcase_family(l1, l2, l3, l4) -> AInfinityPresentation:
    """Four-parameter curved-free deformation of the six-vertex chain.

    The first three parameters scale the arrow differentials p_i -> q_i,
    the fourth switches on the length-five products.  The stored tables
    are the unique sparse solution of the identity system in this
    module's sign convention whose binary correction sits on the filled
    square (p3u2p2, u1p1) with coefficient 1 - l1*l2*l3*l4; relative to
    that normalization the top product carries -l4.  check_stasheff
    confirms the whole table at any arity bound.
    """
    lams = tuple(Fraction(x) for x in (l1, l2, l3, l4))
    algebra = pillowcase_algebra()
    quiver = algebra.quiver
    basis = tuple(sorted(
        (p for p in algebra.irreducible_paths(6) if not p.is_vertex),
        key=lambda p: (len(p), p.key())))
    tables, P, total = _family_tables(lams)

    square = (Path.word("p3", "u2", "p2"), Path.word("u1", "p1"))
    mu2 = {}
    for a in basis:
        for b in basis:
            if quiver.src(a) != quiver.tgt(b):
                continue
            if (a, b) == square:
                coef = 1 - total
                if coef:
                    mu2[(a, b)] = Element.of(P, coef)
                continue
            prod = algebra.mul(a, b)
            if not prod:
                continue
            sign = -1 if quiver.degree(b) % 2 else 1
            mu2[(a, b)] = prod.scale(Fraction(sign))
    tables[2] = mu2

    presentation = AInfinityPresentation(
        algebra=algebra, basis=basis, mu=tables, curvature={},
        max_arity=5, truncated=False)
    problems = presentation.validate()
    if problems:
        raise InternalInvariantError(
            f"family tables are malformed: {problems}")
    return presentation


# cohomology of a family member ------------------------------------------------


def _cohomology_quiver():
    return GradedQuiver(
        ["1+", "1-", "2+", "2-", "3+", "3-"],
        [Arrow("u1p1", "1+", "2+", 0), Arrow("p2u1p1", "1+", "2-", 0),
         Arrow("u1", "1-", "2+", 0), Arrow("p2u1", "1-", "2-", 0),
         Arrow("u2p2", "2+", "3+", 0), Arrow("p3u2p2", "2+", "3-", 0),
         Arrow("u2", "2-", "3+", 0), Arrow("p3u2", "2-", "3-", 0)])


def _skew_gentle_model() -> Algebra:
    """Three involutive loops along a two-step chain, one gentle relation."""
    quiver = GradedQuiver(
        ["1", "2", "3"],
        [Arrow("p1", "1", "1", 0), Arrow("p2", "2", "2", 0),
         Arrow("p3", "3", "3", 0),
         Arrow("u1", "1", "2", 0), Arrow("u2", "2", "3", 0)])
    rewrites = [(Path.word("p" + i, "p" + i),
                 Element.of(Path.vertex(i))) for i in ("1", "2", "3")]
    return Algebra(quiver, relations=[("u2", "u1")], rewrites=rewrites)


def _skew_gentle_mapping():
    def spread(names, signs):
        out = Element.zero()
        for name, sgn in zip(names, signs):
            out = out + Element.of(Path.word(name), Fraction(sgn))
        return out

    vertices = {}
    arrows = {}
    for i in ("1", "2", "3"):
        plus, minus = Path.vertex(i + "+"), Path.vertex(i + "-")
        vertices[i] = Element.of(plus) + Element.of(minus)
        arrows["p" + i] = Element.of(plus) - Element.of(minus)
    arrows["u1"] = spread(("u1p1", "p2u1p1", "u1", "p2u1"), (1, 1, 1, 1))
    arrows["u2"] = spread(("u2p2", "p3u2p2", "u2", "p3u2"), (1, 1, -1, -1))
    return {"vertices": vertices, "arrows": arrows}


def pillowcase_cohomology(l1, l2, l3, l4) -> dict:
    """Cohomology of a family member as a quiver presentation.

    Needs the first three parameters nonzero; otherwise some arrow
    differential vanishes, extra classes survive and the report flags
    the member as degenerate without emitting a presentation.  In the
    regular range the result is the eight-arrow two-square quiver whose
    only non-strict square carries the factor 1 - l1*l2*l3*l4; when that
    factor is zero the relation turns monomial and is flagged, and when
    the parameter product vanishes the presentation is compared against
    the involutive-loop model.
    """
    lams = tuple(Fraction(x) for x in (l1, l2, l3, l4))
    total = lams[0] * lams[1] * lams[2] * lams[3]
    skew = 1 - total
    family = pillowcase_family(*lams)
    quiver = family.algebra.quiver

    dead = {Path.word(kind + i)
            for i, li in (("1", lams[0]), ("2", lams[1]), ("3", lams[2]))
            if li for kind in ("p", "q")}
    reps = [Path.vertex(v) for v in quiver.vertices]
    reps += [p for p in family.basis if p not in dead]
    dims = {}
    for p in reps:
        dims[quiver.degree(p)] = dims.get(quiver.degree(p), 0) + 1

    report = {
        "parameters": lams,
        "skew_coefficient": skew,
        "degenerate": any(not li for li in lams[:3]),
        "monomial_degenerate": total == 1,
        "dims": dims,
        "total_dimension": len(reps),
        "representatives": [p.key() for p in reps],
        "presentation": None,
        "squares": None,
        "formal": None,
        "skew_gentle": None,
        "notes": [],
    }
    if report["degenerate"]:
        report["notes"].append(
            "a vanishing parameter leaves its arrow pair in cohomology; "
            "no finite square presentation is emitted")
        return report

    w = Path.word
    rewrites = [
        (w("u2p2", "u1p1"), Element.of(w("u2", "p2u1p1"))),
        (w("u2p2", "u1"), Element.of(w("u2", "p2u1"))),
        (w("p3u2p2", "u1"), Element.of(w("p3u2", "p2u1"))),
    ]
    relations = []
    if skew:
        rewrites.append((w("p3u2p2", "u1p1"),
                         Element.of(w("p3u2", "p2u1p1"), skew)))
    else:
        relations.append(("p3u2p2", "u1p1"))
    presentation = Algebra(_cohomology_quiver(), relations=relations,
                           rewrites=rewrites)
    problems = presentation.validate()
    if problems:
        raise InternalInvariantError(
            f"cohomology presentation is malformed: {problems}")
    report["presentation"] = presentation

    # the representatives multiply inside themselves, so each square of the
    # emitted quiver must equal the corresponding binary product upstairs
    mu2 = family.mu[2]
    value = Element.of(w("p3", "u2", "p2", "u1", "p1"))
    skew_ok = (mu2.get((w("p3", "u2", "p2"), w("u1", "p1")))
               == (value.scale(skew) if skew else None)) and \
        mu2.get((w("p3", "u2"), w("p2", "u1", "p1"))) == value
    strict = []
    for upper, lower in (
            ((w("u2", "p2"), w("u1", "p1")), (w("u2"), w("p2", "u1", "p1"))),
            ((w("u2", "p2"), w("u1")), (w("u2"), w("p2", "u1"))),
            ((w("p3", "u2", "p2"), w("u1")), (w("p3", "u2"), w("p2", "u1")))):
        strict.append({
            "through_plus": [p.key() for p in upper],
            "through_minus": [p.key() for p in lower],
            "ok": mu2.get(upper) == mu2.get(lower) and mu2.get(upper)
            is not None,
        })
    report["squares"] = {
        "skew": {
            "through_plus": ["p3u2p2", "u1p1"],
            "through_minus": ["p3u2", "p2u1p1"],
            "factor": skew,
            "ok": skew_ok,
        },
        "strict": strict,
    }

    rep_set = set(reps)
    higher_dead = all(
        any(p not in rep_set for p in key)
        for arity, table in family.mu.items() if arity != 2
        for key in table)
    report["formal"] = higher_dead

    if total == 1:
        report["notes"].append(
            "skew coefficient zero: the filled square degenerates to a "
            "monomial relation")
    if total == 0:
        report["skew_gentle"] = verify_morphism(
            _skew_gentle_model(), presentation, _skew_gentle_mapping())
        report["notes"].append(
            "both squares commute strictly; the involutive-loop comparison "
            "is attached under 'skew_gentle'")
    return report
