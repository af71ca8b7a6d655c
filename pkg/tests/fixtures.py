"""Hand-built algebra fixtures shared across the test suite.

These are written out arrow by arrow, independently of the surface
dictionary, so they can serve as oracles for the generated presentations.
"""

from fractions import Fraction

from surfalg.quiver import Algebra, Arrow, Element, GradedQuiver, Path


def free_loop(degree=1, name="q"):
    """Polynomial algebra on one loop: k[q] with the loop in the given degree."""
    q = GradedQuiver(["v"], [Arrow(name, "v", "v", degree)])
    return Algebra(q)


def square_zero_loop(degree=0, name="p"):
    """k[p]/(p^2) with the loop in the given degree (monomial relation)."""
    q = GradedQuiver(["v"], [Arrow(name, "v", "v", degree)])
    return Algebra(q, relations=[(name, name)])


def split_loop(scalar=1, degree=0, name="p"):
    """k[p]/(p^2 - scalar e): non-monomial, reduces p.p to scalar times the vertex."""
    q = GradedQuiver(["v"], [Arrow(name, "v", "v", degree)])
    rhs = Element({Path.vertex("v"): Fraction(scalar)})
    return Algebra(q, rewrites=[(Path.word(name, name), rhs)])


def point_algebra():
    """The ground field: one vertex, no arrows."""
    return Algebra(GradedQuiver(["pt"], []))


def six_vertex_chain():
    """Six vertices in a line with parallel (p_i, q_i) pairs and connectors u_i.

    The q_i sit in degree 1, everything else in degree 0.  Relations kill
    u1 q1, q2 u1, u2 q2, q3 u2; the degree-0 part has dimension 21 and the
    whole algebra dimension 24.
    """
    vs = ["1", "2", "3", "4", "5", "6"]
    arrows = [
        Arrow("p1", "1", "2", 0), Arrow("q1", "1", "2", 1), Arrow("u1", "2", "3", 0),
        Arrow("p2", "3", "4", 0), Arrow("q2", "3", "4", 1), Arrow("u2", "4", "5", 0),
        Arrow("p3", "5", "6", 0), Arrow("q3", "5", "6", 1),
    ]
    rels = [("u1", "q1"), ("q2", "u1"), ("u2", "q2"), ("q3", "u2")]
    return Algebra(GradedQuiver(vs, arrows), relations=rels)


def arrow_with_differential():
    """Two parallel arrows p, q with d(p) = q; the smallest honest DG fixture."""
    q = GradedQuiver(["1", "2"], [Arrow("p", "1", "2", 0), Arrow("q", "1", "2", 1)])
    return Algebra(q, differential={"p": Element.of(Path.word("q"))})


def loop_killing_differential(u_degree=1):
    """A degree -1 loop p with d(p) = e, and a through arrow u.

    d(u p) must come out as (-1)^{|u|} u.
    """
    qv = GradedQuiver(
        ["1", "2"],
        [Arrow("p", "1", "1", -1), Arrow("u", "1", "2", u_degree)],
    )
    return Algebra(qv, differential={"p": Element.of(Path.vertex("1"))})
