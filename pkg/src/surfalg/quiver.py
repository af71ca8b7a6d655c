"""Graded quivers, paths, and presentations of graded or DG quotient path algebras.

Composition is right to left: in the written word ``p = p2 p1`` the arrow ``p1``
acts first.  A :class:`Path` stores its arrows in written order, so
``arrows[0]`` is the last arrow applied and ``arrows[-1]`` the first.  Two
consecutive letters ``arrows[i]``, ``arrows[i+1]`` compose exactly when
``src(arrows[i]) == tgt(arrows[i+1])``.

A presentation consists of a graded quiver, a set of quadratic monomial
relations (written pairs ``(a, b)`` meaning the word ``ab`` is zero), an
optional list of rewrites ``lhs -> rhs`` for non-monomial quotients, and an
optional differential given on arrows and extended by the Leibniz rule.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError, ReductionDivergence

ONE = Fraction(1)


class Arrow:
    __slots__ = ("name", "src", "tgt", "degree")

    def __init__(self, name, src, tgt, degree=0):
        self.name = name
        self.src = src
        self.tgt = tgt
        self.degree = degree

    def __repr__(self):
        return f"Arrow({self.name!r}, {self.src!r} -> {self.tgt!r}, deg {self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, Arrow)
            and self.name == other.name
            and self.src == other.src
            and self.tgt == other.tgt
            and self.degree == other.degree
        )

    def __hash__(self):
        return hash((self.name, self.src, self.tgt, self.degree))


class Path:
    """A composable word of arrows, or a lazy path sitting at a vertex.

    Vertex paths have ``arrows == ()`` and carry the vertex in ``base``.
    Equality and hashing look only at the written word (and the vertex for
    lazy paths), never at a quiver, so paths are safe dict keys.
    """

    __slots__ = ("arrows", "base", "_h")

    def __init__(self, arrows=(), base=None):
        arrows = tuple(arrows)
        if arrows and base is not None:
            raise InputError("a path is either a word of arrows or a vertex, not both")
        if not arrows and base is None:
            raise InputError("empty path needs a base vertex")
        self.arrows = arrows
        self.base = base
        self._h = hash((arrows, base))

    @classmethod
    def vertex(cls, v):
        return cls((), v)

    @classmethod
    def word(cls, *names):
        return cls(tuple(names))

    @property
    def is_vertex(self):
        return not self.arrows

    def __len__(self):
        return len(self.arrows)

    def __eq__(self, other):
        return (
            isinstance(other, Path)
            and self.arrows == other.arrows
            and self.base == other.base
        )

    def __hash__(self):
        return self._h

    def __repr__(self):
        if self.is_vertex:
            return f"e[{self.base}]"
        return ".".join(str(a) for a in self.arrows)

    def key(self):
        """Stable serialization key: '@v' for vertices, comma-joined word else."""
        if self.is_vertex:
            return "@" + str(self.base)
        return ",".join(str(a) for a in self.arrows)


class Element:
    """Finite rational (or polynomial) linear combination of paths.

    Coefficients are normally :class:`fractions.Fraction`; anything with
    ring arithmetic and a truthiness test works, which is how the
    deformation module threads polynomial coefficients through the same
    reduction machinery.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for path, coef in (terms.items() if isinstance(terms, dict) else terms):
                if isinstance(coef, int):
                    coef = Fraction(coef)
                if coef:
                    cur = clean.get(path)
                    if cur is None:
                        clean[path] = coef
                    else:
                        cur = cur + coef
                        if cur:
                            clean[path] = cur
                        else:
                            del clean[path]
        self.terms = clean

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def of(cls, path, coef=ONE):
        return cls({path: coef})

    def items(self):
        return self.terms.items()

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for p, c in other.terms.items():
            cur = out.get(p)
            if cur is None:
                out[p] = c
            else:
                cur = cur + c
                if cur:
                    out[p] = cur
                else:
                    del out[p]
        res = Element()
        res.terms = out
        return res

    def __neg__(self):
        res = Element()
        res.terms = {p: -c for p, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coef):
        if isinstance(coef, int):
            coef = Fraction(coef)
        if not coef:
            return Element()
        res = Element()
        res.terms = {p: coef * c for p, c in self.terms.items()}
        return res

    def map_coefficients(self, fn):
        return Element({p: fn(c) for p, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for p, c in sorted(self.terms.items(), key=lambda kv: kv[0].key()):
            bits.append(f"{c}*{p!r}")
        return " + ".join(bits)


class GradedQuiver:
    """Finite quiver with integer-graded arrows."""

    __slots__ = ("vertices", "arrows", "_out", "_in")

    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex ids")
        vset = set(self.vertices)
        amap = {}
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            if a.name in amap:
                raise InputError(f"duplicate arrow name {a.name!r}")
            if a.src not in vset or a.tgt not in vset:
                raise InputError(f"arrow {a.name!r} has endpoints outside the vertex set")
            amap[a.name] = a
            self._out[a.src].append(a.name)
            self._in[a.tgt].append(a.name)
        self.arrows = amap

    def arrow(self, name) -> Arrow:
        try:
            return self.arrows[name]
        except KeyError:
            raise InputError(f"unknown arrow {name!r}") from None

    def out_arrows(self, v):
        return tuple(self._out[v])

    def in_arrows(self, v):
        return tuple(self._in[v])

    # path geometry -------------------------------------------------------

    def src(self, path: Path):
        if path.is_vertex:
            return path.base
        return self.arrow(path.arrows[-1]).src

    def tgt(self, path: Path):
        if path.is_vertex:
            return path.base
        return self.arrow(path.arrows[0]).tgt

    def degree(self, path: Path) -> int:
        return sum(self.arrow(a).degree for a in path.arrows)

    def is_composable_word(self, names) -> bool:
        names = tuple(names)
        for i in range(len(names) - 1):
            if self.arrow(names[i]).src != self.arrow(names[i + 1]).tgt:
                return False
        return True

    def splice(self, left: Path, right: Path):
        """Raw concatenation left*right (right acts first); None if ends mismatch."""
        if self.src(left) != self.tgt(right):
            return None
        if left.is_vertex:
            return right
        if right.is_vertex:
            return left
        return Path(left.arrows + right.arrows)


class Algebra:
    """Presentation of a graded (possibly DG) quotient path algebra.

    Parameters
    ----------
    quiver:
        the underlying :class:`GradedQuiver`
    relations:
        iterable of written pairs ``(a, b)``: the word ``ab`` is zero
    rewrites:
        iterable of ``(Path, Element)``: the monomial lhs equals rhs in the
        quotient; reduction replaces lhs by rhs wherever it appears
    differential:
        map arrow name -> Element; extended to words by the graded Leibniz
        rule with the sign of the degrees written to the left of the letter
        being differentiated
    length_bound:
        hard cap on word length during reduction; exceeding it (or the step
        budget) raises :class:`ReductionDivergence`
    """

    __slots__ = (
        "quiver",
        "relations",
        "rewrites",
        "differential",
        "length_bound",
        "max_steps",
        "_rel_set",
        "_lhs_by_len",
    )

    def __init__(self, quiver, relations=(), rewrites=(), differential=None,
                 length_bound=64, max_steps=200_000):
        self.quiver = quiver
        rels = []
        for a, b in relations:
            qa, qb = quiver.arrow(a), quiver.arrow(b)
            if qa.src != qb.tgt:
                raise InputError(f"relation ({a}, {b}) is not composable")
            rels.append((a, b))
        self.relations = tuple(rels)
        self._rel_set = frozenset(rels)

        rws = []
        for lhs, rhs in rewrites:
            if lhs.is_vertex:
                raise InputError("rewrite lhs must be a nontrivial word")
            if not quiver.is_composable_word(lhs.arrows):
                raise InputError(f"rewrite lhs {lhs!r} is not composable")
            if not isinstance(rhs, Element):
                rhs = Element(rhs)
            rws.append((lhs, rhs))
        # deterministic application order: shortest lhs first, then by word
        rws.sort(key=lambda lr: (len(lr[0]), lr[0].arrows))
        self.rewrites = tuple(rws)
        by_len = {}
        for lhs, rhs in self.rewrites:
            by_len.setdefault(len(lhs), []).append((lhs.arrows, rhs))
        self._lhs_by_len = by_len

        diff = {}
        if differential:
            for name, val in differential.items():
                quiver.arrow(name)
                if not isinstance(val, Element):
                    val = Element(val)
                if val:
                    diff[name] = val
        self.differential = diff

        self.length_bound = length_bound
        self.max_steps = max_steps

    # basic predicates ----------------------------------------------------

    def is_monomial(self) -> bool:
        return not self.rewrites

    def has_relation(self, a, b) -> bool:
        return (a, b) in self._rel_set

    def word_hits_relation(self, names) -> bool:
        rel = self._rel_set
        for i in range(len(names) - 1):
            if (names[i], names[i + 1]) in rel:
                return True
        return False

    def _find_rewrite(self, names):
        """Leftmost match wins; ties broken by the fixed rewrite order."""
        n = len(names)
        lens = self._lhs_by_len
        for i in range(n):
            for k, rules in lens.items():
                if i + k > n:
                    continue
                window = names[i:i + k]
                for lhs_arrows, rhs in rules:
                    if window == lhs_arrows:
                        return i, k, rhs
        return None

    def irreducible(self, path: Path) -> bool:
        """True when the word contains no relation pair and no rewrite lhs."""
        if path.is_vertex:
            return True
        names = path.arrows
        if self.word_hits_relation(names):
            return False
        return self._find_rewrite(names) is None

    # reduction -----------------------------------------------------------

    def reduce_path(self, path: Path, _budget=None) -> Element:
        return self.reduce(Element.of(path), _budget=_budget)

    def reduce(self, x, _budget=None) -> Element:
        """Normal form of an element under relations and rewrites.

        Raises :class:`ReductionDivergence` when a word grows past
        ``length_bound`` or the rewrite step budget is exhausted.
        """
        if isinstance(x, Path):
            x = Element.of(x)
        budget = [self.max_steps] if _budget is None else _budget
        out = {}
        stack = list(x.terms.items())
        while stack:
            path, coef = stack.pop()
            if path.is_vertex:
                _accumulate(out, path, coef)
                continue
            names = path.arrows
            if len(names) > self.length_bound:
                raise ReductionDivergence(
                    f"word length {len(names)} exceeds bound {self.length_bound}")
            if self.word_hits_relation(names):
                continue
            hit = self._find_rewrite(names)
            if hit is None:
                _accumulate(out, path, coef)
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise ReductionDivergence("rewrite step budget exhausted")
            i, k, rhs = hit
            prefix = names[:i]
            suffix = names[i + k:]
            for rpath, rcoef in rhs.terms.items():
                word = prefix + rpath.arrows + suffix
                if word:
                    stack.append((Path(word), coef * rcoef))
                else:
                    # lhs was the whole word and rhs term is a vertex
                    stack.append((Path.vertex(rpath.base), coef * rcoef))
        res = Element()
        res.terms = out
        return res

    def mul(self, x, y) -> Element:
        """Reduced product x*y (y acts first)."""
        if isinstance(x, Path):
            x = Element.of(x)
        if isinstance(y, Path):
            y = Element.of(y)
        acc = {}
        for px, cx in x.terms.items():
            for py, cy in y.terms.items():
                sp = self.quiver.splice(px, py)
                if sp is None:
                    continue
                _accumulate(acc, sp, cx * cy)
        raw = Element()
        raw.terms = acc
        return self.reduce(raw)

    compose = mul

    # differential --------------------------------------------------------

    def apply_differential(self, x) -> Element:
        """Leibniz extension of the arrow-level differential, reduced.

        The letter at position i picks up the parity of the total degree of
        the letters written to its left, e.g. d(u p) = d(u) p + (-1)^{|u|} u d(p).
        """
        if isinstance(x, Path):
            x = Element.of(x)
        total = Element()
        q = self.quiver
        for path, coef in x.terms.items():
            if path.is_vertex:
                continue
            names = path.arrows
            left_parity = 0
            for i, nm in enumerate(names):
                val = self.differential.get(nm)
                if val:
                    sign = -1 if (left_parity & 1) else 1
                    prefix = names[:i]
                    suffix = names[i + 1:]
                    for dpath, dcoef in val.terms.items():
                        word = prefix + dpath.arrows + suffix
                        if word:
                            piece = Element.of(Path(word), coef * dcoef * sign)
                        else:
                            piece = Element.of(Path.vertex(dpath.base), coef * dcoef * sign)
                        total = total + piece
                left_parity += q.arrow(nm).degree
        return self.reduce(total)

    d = apply_differential

    # enumeration ---------------------------------------------------------

    def irreducible_paths(self, max_len, src=None, tgt=None):
        """Yield all irreducible paths of length <= max_len, shortest first.

        Restricting src/tgt filters the output but the walk is still pruned
        only by irreducibility, so this stays cheap on gentle-sized quivers.
        """
        q = self.quiver
        rel = self._rel_set
        frontier = []
        for v in q.vertices:
            p = Path.vertex(v)
            if (src is None or v == src) and (tgt is None or v == tgt):
                yield p
            frontier.append(p)
        length = 0
        while frontier and length < max_len:
            length += 1
            nxt = []
            for path in frontier:
                head_tgt = q.tgt(path)
                first = path.arrows[0] if path.arrows else None
                for name in q.out_arrows(head_tgt):
                    # extend on the left: new letter applied after the rest
                    if first is not None and (name, first) in rel:
                        continue
                    word = (name,) + path.arrows
                    cand = Path(word)
                    if self._lhs_by_len and self._hits_lhs_prefix(word):
                        continue
                    nxt.append(cand)
                    if (src is None or q.src(cand) == src) and (tgt is None or q.tgt(cand) == tgt):
                        yield cand
            frontier = nxt

    def _hits_lhs_prefix(self, word) -> bool:
        # only prefixes are new subwords when extending on the left
        for k, rules in self._lhs_by_len.items():
            if k > len(word):
                continue
            pre = word[:k]
            for lhs_arrows, _ in rules:
                if pre == lhs_arrows:
                    return True
        return False

    def parallel_paths(self, src, tgt, degree, max_len):
        """Irreducible paths src -> tgt of the given degree.

        Returns (paths, hit_bound): hit_bound is set when some irreducible
        path of the requested degree shows up at exactly max_len, meaning
        longer ones may exist beyond the window.
        """
        q = self.quiver
        found = []
        hit_bound = False
        for p in self.irreducible_paths(max_len, src=src, tgt=tgt):
            if q.degree(p) == degree:
                found.append(p)
                if len(p) == max_len:
                    hit_bound = True
        return found, hit_bound

    def graded_dimension(self, degree_window=None, length_bound=30):
        """Count irreducible paths per degree within a length window.

        Returns (counts, growth) where growth flags paths seen at the length
        bound itself: the count in the affected degrees is then only a lower
        bound and the presentation may be infinite dimensional.
        """
        counts = {}
        growth = False
        q = self.quiver
        for p in self.irreducible_paths(length_bound):
            deg = q.degree(p)
            if degree_window is not None and not (degree_window[0] <= deg <= degree_window[1]):
                continue
            counts[deg] = counts.get(deg, 0) + 1
            if len(p) == length_bound:
                growth = True
        return counts, growth

    def total_dimension(self, length_bound=30):
        counts, growth = self.graded_dimension(length_bound=length_bound)
        return sum(counts.values()), growth

    # structure checks ----------------------------------------------------

    def validate(self, check_confluence_to=6) -> list:
        """Return a list of problems (empty when the presentation is sound)."""
        problems = []
        q = self.quiver
        for lhs, rhs in self.rewrites:
            want = q.degree(lhs)
            s, t = q.src(lhs), q.tgt(lhs)
            for p in rhs.terms:
                if q.degree(p) != want:
                    problems.append(f"rewrite {lhs!r}: rhs term {p!r} has wrong degree")
                if q.src(p) != s or q.tgt(p) != t:
                    problems.append(f"rewrite {lhs!r}: rhs term {p!r} is not parallel")
        for name, val in self.differential.items():
            ar = q.arrow(name)
            for p in val.terms:
                if q.degree(p) != ar.degree + 1:
                    problems.append(f"d({name}) term {p!r} does not raise degree by 1")
                if q.src(p) != ar.src or q.tgt(p) != ar.tgt:
                    problems.append(f"d({name}) term {p!r} is not parallel to {name}")
        for name in self.differential:
            dd = self.apply_differential(self.differential[name])
            if dd:
                problems.append(f"d^2({name}) != 0: {dd!r}")
        # d must map the defining ideal into itself
        for a, b in self.relations:
            img = self.apply_differential(Path.word(a, b))
            if img:
                problems.append(f"d of zero word {a}{b} does not reduce to zero: {img!r}")
        for lhs, rhs in self.rewrites:
            diff = self.apply_differential(lhs) - self.apply_differential(rhs)
            diff = self.reduce(diff)
            if diff:
                problems.append(f"d is not compatible with rewrite {lhs!r}")
        problems.extend(self._confluence_problems(check_confluence_to))
        return problems

    def _confluence_problems(self, max_len) -> list:
        """Resolve all small critical pairs between rules (rewrites and relations).

        Every relation is treated as a rule (a, b) -> 0.  For each pair of
        rules whose lhs words overlap, the overlap word is reduced starting
        with either rule; the two normal forms must agree.
        """
        problems = []
        rules = [(lhs.arrows, rhs) for lhs, rhs in self.rewrites]
        rules += [((a, b), Element()) for a, b in self.relations]
        for la, ra in rules:
            for lb, rb in rules:
                # suffix of la overlapping a prefix of lb
                for k in range(1, min(len(la), len(lb))):
                    if la[len(la) - k:] != lb[:k]:
                        continue
                    word = la + lb[k:]
                    if len(word) > max_len:
                        continue
                    if not self.quiver.is_composable_word(word):
                        continue
                    left = self._apply_rule_at(word, 0, la, ra)
                    right = self._apply_rule_at(word, len(la) - k, lb, rb)
                    if self.reduce(left) != self.reduce(right):
                        problems.append(
                            f"critical pair {'.'.join(map(str, word))} does not resolve")
        return problems

    def _apply_rule_at(self, word, i, lhs, rhs) -> Element:
        prefix, suffix = word[:i], word[i + len(lhs):]
        acc = Element()
        for rpath, rcoef in rhs.terms.items():
            mid = rpath.arrows
            new = prefix + mid + suffix
            if new:
                acc = acc + Element.of(Path(new), rcoef)
            else:
                acc = acc + Element.of(Path.vertex(rpath.base), rcoef)
        return acc

    def is_gentle(self):
        """Gentleness of the underlying graded quotient, with a violation report.

        Requires a monomial presentation.  Checks: at most two arrows in and
        out of each vertex, and for each arrow at most one zero-continuation
        and at most one nonzero-continuation on each side.
        """
        problems = []
        if self.rewrites:
            problems.append("presentation has rewrites; gentle means quadratic monomial")
        q = self.quiver
        for v in q.vertices:
            if len(q.out_arrows(v)) > 2:
                problems.append(f"vertex {v!r} has more than two outgoing arrows")
            if len(q.in_arrows(v)) > 2:
                problems.append(f"vertex {v!r} has more than two incoming arrows")
        rel = self._rel_set
        for name, ar in q.arrows.items():
            after = q.out_arrows(ar.tgt)          # candidates applied after `name`
            zero = [b for b in after if (b, name) in rel]
            nonzero = [b for b in after if (b, name) not in rel]
            if len(zero) > 1:
                problems.append(f"arrow {name!r} has two zero-successors {zero}")
            if len(nonzero) > 1:
                problems.append(f"arrow {name!r} has two nonzero-successors {nonzero}")
            before = q.in_arrows(ar.src)
            zero_p = [c for c in before if (name, c) in rel]
            nonzero_p = [c for c in before if (name, c) not in rel]
            if len(zero_p) > 1:
                problems.append(f"arrow {name!r} has two zero-predecessors {zero_p}")
            if len(nonzero_p) > 1:
                problems.append(f"arrow {name!r} has two nonzero-predecessors {nonzero_p}")
        return (not problems), problems

    def is_dg_gentle(self):
        """Gentle plus a well-behaved degree +1 differential."""
        ok, problems = self.is_gentle()
        q = self.quiver
        for name, val in self.differential.items():
            ar = q.arrow(name)
            for p in val.terms:
                if q.degree(p) != ar.degree + 1:
                    problems.append(f"d({name}) does not raise degree by one")
                if q.src(p) != ar.src or q.tgt(p) != ar.tgt:
                    problems.append(f"d({name}) is not parallel to {name}")
                if p.arrows and (p.arrows[0] == name or p.arrows[-1] == name):
                    problems.append(f"a path in d({name}) starts or ends with {name}")
        for name in self.differential:
            if self.apply_differential(self.differential[name]):
                problems.append(f"d^2({name}) != 0")
        for a, b in self.relations:
            if self.apply_differential(Path.word(a, b)):
                problems.append(f"d does not preserve the ideal at relation ({a}, {b})")
        return (not problems), problems

    def is_formal(self, disk_case=False) -> bool:
        """Formality criterion for DG gentle presentations.

        The caller must assert that the excluded disk case does not apply;
        passing disk_case=True refuses outright.
        """
        if disk_case:
            raise InputError("formality criterion does not cover the excluded disk case")
        ok, problems = self.is_dg_gentle()
        if not ok:
            raise InputError("is_formal requires a DG gentle presentation: " + "; ".join(problems))
        q = self.quiver
        for name, val in self.differential.items():
            if all(len(p) <= 1 for p in val.terms):
                continue
            # x must then multiply to zero with every composable arrow
            ar = q.arrow(name)
            for b in q.out_arrows(ar.tgt):
                if (b, name) not in self._rel_set:
                    return False
            for c in q.in_arrows(ar.src):
                if (name, c) not in self._rel_set:
                    return False
        return True

    # properness ----------------------------------------------------------

    def relation_free_cycles(self):
        """Simple cycles in the nonzero-composition digraph, as written words.

        On gentle input each arrow has at most one nonzero successor, so the
        digraph is functional and the cycles are disjoint; we assert that.
        """
        q = self.quiver
        rel = self._rel_set
        succ = {}
        for name, ar in q.arrows.items():
            nz = [b for b in q.out_arrows(ar.tgt) if (b, name) not in rel]
            assert len(nz) <= 1, "relation_free_cycles needs gentle input"
            if nz:
                succ[name] = nz[0]
        cycles = []
        seen = set()
        for start in q.arrows:
            if start in seen:
                continue
            walk, pos = [], {}
            cur = start
            while cur is not None and cur not in pos and cur not in seen:
                pos[cur] = len(walk)
                walk.append(cur)
                cur = succ.get(cur)
            if cur is not None and cur in pos:
                cyc = walk[pos[cur]:]
                # written order puts the later arrow on the left
                cycles.append(tuple(reversed(cyc)))
            seen.update(walk)
        return cycles

    def locally_proper(self):
        """Finite dimension in every single degree.

        Fails exactly when some relation-free cycle has total degree zero;
        returns (flag, offending cycles with their degrees).
        """
        bad = []
        q = self.quiver
        for cyc in self.relation_free_cycles():
            deg = sum(q.arrow(a).degree for a in cyc)
            if deg == 0:
                bad.append((cyc, deg))
        return (not bad), bad

    def proper(self):
        """Finite total dimension: no relation-free cycles at all."""
        cycles = self.relation_free_cycles()
        return (not cycles), cycles


def _accumulate(acc: dict, path: Path, coef):
    cur = acc.get(path)
    if cur is None:
        acc[path] = coef
    else:
        cur = cur + coef
        if cur:
            acc[path] = cur
        else:
            del acc[path]
