"""JSON forms of algebras, surfaces, structure tables, and reports.

Coefficients travel as "num/den" strings so a round trip is bit exact;
floats never appear.  Paths are written as lists of arrow names where
the position is structural (relations, rewrite sides, basis entries,
structure-map inputs) and as single key strings inside elements, where
JSON forces an object key: a word is its comma-joined name sequence and
a vertex is "@" plus the vertex name, matching Path.key().
"""

import json
from fractions import Fraction

from .ainfinity import AInfinityPresentation
from .errors import InputError
from .poly import Poly
from .quiver import Algebra, Arrow, Element, GradedQuiver, Path
from .surface import BoundaryComponent, SurfaceData


# scalars and elements ----------------------------------------------------------


def fraction_to_text(value) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def fraction_from_text(value) -> Fraction:
    if isinstance(value, bool):
        raise InputError(f"rational expected, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot read rational {value!r}")
    raise InputError(
        f"rational must be an integer or 'num/den' string, got {value!r}")


def _coefficient_to_json(c):
    # family presentations carry polynomial coefficients; everything else
    # is a plain rational
    if isinstance(c, Poly):
        return {"nvars": c.nvars,
                "terms": [{"exponents": list(mono),
                           "coefficient": fraction_to_text(coef)}
                          for mono, coef in sorted(c.coeffs.items())]}
    return fraction_to_text(c)


def path_from_key(key) -> Path:
    if not isinstance(key, str) or not key:
        raise InputError(f"path key must be a nonempty string, got {key!r}")
    if key.startswith("@"):
        return Path.vertex(key[1:])
    return Path.word(*key.split(","))


def element_to_json(el) -> dict:
    items = sorted(el.items(), key=lambda it: (len(it[0]), it[0].key()))
    return {p.key(): _coefficient_to_json(c) for p, c in items}


def element_from_json(data) -> Element:
    if not isinstance(data, dict):
        raise InputError(f"element must be an object, got {data!r}")
    total = Element.zero()
    for key, val in data.items():
        total = total + Element.of(path_from_key(key), fraction_from_text(val))
    return total


# algebra presentations ----------------------------------------------------------


def _field(data, key, kind, where):
    if key not in data:
        raise InputError(f"{where} is missing the {key!r} field")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise InputError(f"{where} field {key!r} has the wrong shape")
    return value


def algebra_to_json(alg: Algebra) -> dict:
    q = alg.quiver
    return {
        "vertices": list(q.vertices),
        "arrows": [{"id": a.name, "src": a.src, "tgt": a.tgt,
                    "deg": a.degree} for a in q.arrows.values()],
        "relations": [list(r) for r in alg.relations],
        "rewrites": [{"lhs": list(lhs.arrows), "rhs": element_to_json(rhs)}
                     for lhs, rhs in alg.rewrites],
        "differential": {name: element_to_json(el)
                         for name, el in sorted(alg.differential.items())},
    }


def algebra_from_json(data) -> Algebra:
    if not isinstance(data, dict):
        raise InputError("algebra input must be a JSON object")
    vertices = _field(data, "vertices", list, "algebra")
    raw_arrows = _field(data, "arrows", list, "algebra")
    arrows = []
    for entry in raw_arrows:
        if not isinstance(entry, dict):
            raise InputError(f"arrow entry must be an object, got {entry!r}")
        arrows.append(Arrow(_field(entry, "id", str, "arrow"),
                            _field(entry, "src", str, "arrow"),
                            _field(entry, "tgt", str, "arrow"),
                            int(entry.get("deg", 0))))
    relations = []
    for r in data.get("relations", []):
        if not isinstance(r, list) or len(r) != 2:
            raise InputError(f"relation must be a pair of names, got {r!r}")
        relations.append(tuple(r))
    rewrites = []
    for rw in data.get("rewrites", []):
        if not isinstance(rw, dict):
            raise InputError(f"rewrite entry must be an object, got {rw!r}")
        lhs = _field(rw, "lhs", list, "rewrite")
        rewrites.append((Path.word(*lhs),
                         element_from_json(_field(rw, "rhs", dict, "rewrite"))))
    differential = {name: element_from_json(el)
                    for name, el in data.get("differential", {}).items()}
    alg = Algebra(GradedQuiver(vertices, arrows), relations=relations,
                  rewrites=rewrites, differential=differential)
    problems = alg.validate()
    if problems:
        raise InputError("presentation fails validation: "
                         + "; ".join(problems[:3]))
    return alg


# surfaces ------------------------------------------------------------------------


def surface_to_json(s: SurfaceData) -> dict:
    return {"genus": s.genus,
            "orbifold_points": s.orbifold_points,
            "boundary": [{"stops": c.stops, "winding": c.winding}
                         for c in s.boundary],
            "distinguished": s.distinguished}


def surface_from_json(data) -> SurfaceData:
    if not isinstance(data, dict):
        raise InputError("surface input must be a JSON object")
    comps = []
    for entry in _field(data, "boundary", list, "surface"):
        if not isinstance(entry, dict):
            raise InputError(f"boundary entry must be an object, got {entry!r}")
        stops = _field(entry, "stops", None, "boundary component")
        if not (stops in ("none", "full") or isinstance(stops, int)):
            raise InputError(f"stops must be 'none', 'full' or a count, "
                             f"got {stops!r}")
        comps.append(BoundaryComponent(stops, int(entry.get("winding", 0))))
    return SurfaceData(genus=int(data.get("genus", 0)),
                       orbifold_points=int(data.get("orbifold_points", 0)),
                       boundary=tuple(comps),
                       distinguished=int(data.get("distinguished", 0)))


def load_input(path):
    """Read a JSON file and classify it: ("surface" | "algebra", value)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}")
    if not isinstance(data, dict):
        raise InputError(f"{path} must hold a JSON object")
    if "genus" in data:
        return "surface", surface_from_json(data)
    if "mu" in data:
        return "ainfinity", presentation_from_json(data)
    return "algebra", algebra_from_json(data)


# structure tables -----------------------------------------------------------------


def presentation_to_json(pres: AInfinityPresentation) -> dict:
    data = algebra_to_json(pres.algebra)
    data["basis"] = [list(p.arrows) for p in pres.basis]
    data["mu"] = {
        str(arity): [{"inputs": [list(p.arrows) for p in key],
                      "output": element_to_json(val)}
                     for key, val in sorted(
                         table.items(),
                         key=lambda kv: tuple(p.key() for p in kv[0]))]
        for arity, table in sorted(pres.mu.items())}
    data["curvature"] = {v: element_to_json(el)
                         for v, el in sorted(pres.curvature.items())}
    data["max_arity"] = pres.max_arity
    data["truncated"] = pres.truncated
    return data


def presentation_from_json(data) -> AInfinityPresentation:
    algebra = algebra_from_json(data)
    basis = tuple(Path.word(*names)
                  for names in _field(data, "basis", list, "presentation"))
    mu = {}
    for arity, entries in _field(data, "mu", dict, "presentation").items():
        try:
            ar = int(arity)
        except ValueError:
            raise InputError(f"arity key {arity!r} is not an integer")
        table = {}
        for entry in entries:
            if not isinstance(entry, dict):
                raise InputError(f"mu entry must be an object, got {entry!r}")
            key = tuple(Path.word(*names)
                        for names in _field(entry, "inputs", list, "mu entry"))
            table[key] = element_from_json(
                _field(entry, "output", dict, "mu entry"))
        mu[ar] = table
    curvature = {v: element_from_json(el)
                 for v, el in data.get("curvature", {}).items()}
    max_arity = int(data.get("max_arity", max(mu) if mu else 2))
    pres = AInfinityPresentation(
        algebra=algebra, basis=basis, mu=mu, curvature=curvature,
        max_arity=max_arity, truncated=bool(data.get("truncated", False)))
    problems = pres.validate()
    if problems:
        raise InputError("structure tables fail validation: "
                         + "; ".join(problems[:3]))
    return pres


# reports --------------------------------------------------------------------------


def hh_report_to_json(rep) -> dict:
    return {
        "n": rep.n,
        "dimension": rep.dimension,
        "stable": rep.stable,
        "bounds": [list(b) for b in rep.bounds],
        "representatives": [
            {"support": [[w.key(), element_to_json(el)] for w, el in r]}
            for r in rep.representatives],
    }


def kodaira_spencer_to_json(ks) -> dict:
    return {
        "basepoint": [fraction_to_text(x) for x in ks.basepoint],
        "slice_dim": ks.slice_dim,
        "hh2_dim": ks.hh2_dim,
        "vector_rank": ks.vector_rank,
        "class_rank": ks.class_rank,
        "coboundary_columns": list(ks.coboundary_columns),
        "versal": ks.versal,
        "semi_universal": ks.semi_universal,
        "window": list(ks.window),
        "overlap_hh2": ks.overlap_hh2,
        "overlap_agrees": ks.overlap_agrees,
    }


def fiber_cohomology_to_json(fib) -> dict:
    return {
        "dims": {str(t): d for t, d in sorted(fib.dims.items())},
        "total_dimension": fib.total_dimension(),
        "truncated": fib.truncated,
        "representatives": {str(t): [element_to_json(el) for el in reps]
                            for t, reps in sorted(fib.representatives.items())},
    }


def family_to_json(fam) -> dict:
    return {
        "surface": surface_to_json(fam.base.surface),
        "nvars": fam.nvars,
        "directions": [{"slot": d.slot, "component": d.component,
                        "kind": d.kind, "block": d.block,
                        "arrow": d.arrow, "effect": d.effect}
                       for d in fam.directions],
        "base": algebra_to_json(fam.base.algebra),
        "algebra": algebra_to_json(fam.algebra),
    }


def dump_json(data, path=None) -> str:
    """Canonical text form: sorted keys, two-space indent, one trailing
    newline; identical input gives identical bytes."""
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
