"""Curved A-infinity presentations: gauge embedding, identity checking,
curvature classes, and the four-parameter pillowcase family."""

import random
from fractions import Fraction

import pytest

from fixtures import (
    arrow_with_differential,
    free_loop,
    loop_killing_differential,
    point_algebra,
    six_vertex_chain,
    split_loop,
    square_zero_loop,
)
from surfalg.ainfinity import (
    AInfinityPresentation,
    check_stasheff,
    curved_cocycle_check,
    dg_presentation,
    pillowcase_algebra,
    pillowcase_cohomology,
    pillowcase_family,
)
from surfalg.deformation import fiber_cohomology, verify_morphism
from surfalg.errors import InputError
from surfalg.hochschild import hh_dimension
from surfalg.quiver import Algebra, Arrow, Element, GradedQuiver, Path
from surfalg.surface import BoundaryComponent, SurfaceData, standard_algebra

w = Path.word
P_LONG = w("p3", "u2", "p2", "u1", "p1")


def chain_with_differential():
    """The six-vertex chain with d(p_i) = q_i on all three parallel pairs."""
    base = six_vertex_chain()
    diff = {f"p{i}": Element.of(w(f"q{i}")) for i in "123"}
    return Algebra(base.quiver, relations=base.relations, differential=diff)


def crossing_loops(d1=1, d2=1):
    quiver = GradedQuiver(["v"], [Arrow("q1", "v", "v", d1),
                                  Arrow("q2", "v", "v", d2)])
    return Algebra(quiver, relations=[("q1", "q1"), ("q2", "q2")])


# the dg gauge -----------------------------------------------------------------


def test_chain_gauge_satisfies_associativity():
    pres = dg_presentation(six_vertex_chain())
    assert len(pres.basis) == 18 and not pres.truncated
    assert set(pres.mu) == {2}
    report = check_stasheff(pres, 4)
    assert report["ok"] and report["problems"] == []
    assert report["tuples_checked"] == 15


def test_split_loop_gauge_exercises_unit_outputs():
    # p.p rewrites to 3e, so the only identity tuple runs the strict
    # unit action on both sides of the outer product
    pres = dg_presentation(split_loop(scalar=3))
    assert pres.basis == (w("p"),)
    assert pres.mu[2][(w("p"), w("p"))] == Element({Path.vertex("v"): Fraction(3)})
    report = check_stasheff(pres, 3)
    assert report["ok"] and report["tuples_checked"] == 1


def test_point_and_square_zero_have_empty_tables():
    pres = dg_presentation(point_algebra())
    assert pres.basis == () and pres.mu == {}
    assert check_stasheff(pres, 5)["ok"]

    pres = dg_presentation(square_zero_loop())
    assert pres.basis == (w("p"),) and pres.mu == {}
    assert check_stasheff(pres, 5)["ok"]


def test_arrow_differential_gauge():
    pres = dg_presentation(arrow_with_differential())
    assert pres.mu == {1: {(w("p"),): Element.of(w("q"))}}
    report = check_stasheff(pres, 3)
    assert report["ok"] and report["tuples_checked"] == 0


def test_contracted_loop_mixes_units_and_differential():
    # d(p) = e on an odd loop: mu1 output is a unit, so d^2 = 0 and the
    # Leibniz identities must pass through the strict unit action
    quiver = GradedQuiver(
        ["1", "2", "3"],
        [Arrow("v1", "1", "2", 0), Arrow("p", "2", "2", -1),
         Arrow("v2", "2", "3", 0)])
    alg = Algebra(quiver, relations=[("p", "p")],
                  differential={"p": Element.of(Path.vertex("2"))})
    pres = dg_presentation(alg)
    assert pres.mu[1][(w("p"),)] == Element({Path.vertex("2"): Fraction(-1)})
    report = check_stasheff(pres, 4)
    assert report["ok"] and report["tuples_checked"] > 0


def test_exact_mode_refuses_infinite_bases():
    with pytest.raises(InputError, match="path_len"):
        dg_presentation(free_loop())
    with pytest.raises(InputError, match="path_len"):
        dg_presentation(loop_killing_differential())


def test_truncation_policy():
    with pytest.raises(InputError, match="monomial"):
        dg_presentation(split_loop(), path_len=3)
    with pytest.raises(InputError, match="differential"):
        dg_presentation(loop_killing_differential(), path_len=3)
    with pytest.raises(InputError, match="positive"):
        dg_presentation(free_loop(), path_len=0)


def test_truncated_window_drops_long_products():
    pres = dg_presentation(free_loop(1), path_len=5)
    assert pres.truncated
    assert max(len(p) for p in pres.basis) == 5
    q3 = w("q", "q", "q")
    assert (q3, w("q", "q")) in pres.mu[2]
    assert (q3, q3) not in pres.mu[2]
    # products falling out of the window vanish in pairs, so the cut
    # tables still satisfy every identity
    assert check_stasheff(pres, 4)["ok"]


# presentation validation -------------------------------------------------------


def test_validate_reports_structural_defects():
    chain = six_vertex_chain()
    basis = dg_presentation(chain).basis

    pres = AInfinityPresentation(
        algebra=chain, basis=basis,
        mu={2: {(w("q1"), w("q1")): Element.of(w("p1"))}})
    assert any("not composable" in p for p in pres.validate())

    pres = AInfinityPresentation(
        algebra=chain, basis=basis,
        mu={1: {(w("p1"),): Element.of(w("p1"))}})
    assert any("degree" in p for p in pres.validate())

    pres = AInfinityPresentation(
        algebra=chain, basis=basis + (w("p1"),), mu={})
    assert any("duplicate" in p for p in pres.validate())

    pres = AInfinityPresentation(
        algebra=chain, basis=basis,
        mu={3: {(w("p3"), w("u2"), w("p2")): Element.of(w("p3", "u2", "p2"))}},
        max_arity=2)
    assert any("exceeds bound" in p for p in pres.validate())

    pres = AInfinityPresentation(
        algebra=chain, basis=basis, mu={},
        curvature={"1": Element.of(w("p1"))})
    problems = pres.validate()
    assert problems and all("curvature" in p for p in problems)


def test_checker_surfaces_validation_problems():
    chain = six_vertex_chain()
    pres = AInfinityPresentation(
        algebra=chain, basis=(w("p1"), w("p1")), mu={})
    report = check_stasheff(pres, 2)
    assert not report["ok"] and report["problems"]
    assert report["violation"] is None


def test_arity_bound_edges():
    pres = dg_presentation(six_vertex_chain())
    report = check_stasheff(pres, 0)
    assert report["ok"] and report["tuples_checked"] == 0
    with pytest.raises(InputError):
        check_stasheff(pres, -1)


# curvature ---------------------------------------------------------------------


def test_curved_fibers_of_a_free_loop_pass():
    for degree in (1, 2):
        alg = free_loop(degree)
        rec, = curved_cocycle_check(alg, "q")
        pres = dg_presentation(alg, path_len=7)
        pres.curvature[rec["vertex"]] = rec["value"]
        report = check_stasheff(pres, 4)
        assert report["ok"], degree
        assert report["tuples_checked"] > 0


def test_crossing_pair_curvature_passes():
    alg = crossing_loops()
    rec, = curved_cocycle_check(alg, ("q1", "q2"))
    assert rec["value"] == Element.of(w("q1", "q2")) + Element.of(w("q2", "q1"))
    pres = dg_presentation(alg, path_len=6)
    pres.curvature["v"] = rec["value"]
    assert check_stasheff(pres, 4)["ok"]


def test_noncentral_curvature_fails_at_arity_one():
    # q1q2 alone is not central: inserting it left or right of q1 gives
    # q1q2q1 exactly once
    pres = dg_presentation(crossing_loops(), path_len=6)
    pres.curvature["v"] = Element.of(w("q1", "q2"))
    report = check_stasheff(pres, 4)
    assert not report["ok"]
    assert report["violation"]["arity"] == 1
    assert report["violation"]["inputs"] == ["q1"]


def test_unclosed_curvature_fails_at_arity_zero():
    quiver = GradedQuiver(["v"], [Arrow("x", "v", "v", 2),
                                  Arrow("y", "v", "v", 3)])
    alg = Algebra(
        quiver,
        relations=[("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")],
        differential={"x": Element.of(w("y"))})
    pres = dg_presentation(alg)
    pres.curvature["v"] = Element.of(w("x"))
    report = check_stasheff(pres, 0)
    assert not report["ok"]
    assert report["violation"]["arity"] == 0
    assert report["violation"]["inputs"] == []


# designated boundary loops ------------------------------------------------------


def test_single_loop_records():
    rec, = curved_cocycle_check(free_loop(1), "q")
    assert rec["winding"] == 1 and rec["loops"] == ("q",)
    assert rec["value"] == Element.of(w("q", "q"))
    assert rec["closed"] and not rec["exact"]
    assert rec["total_degree"] == 2 and rec["cochain_arity"] == 0

    rec, = curved_cocycle_check(free_loop(2), "q")
    assert rec["winding"] == 2
    assert rec["value"] == Element.of(w("q"))


def test_crossing_pair_records():
    # total winding 1 forces the alternating length-four words
    alg = crossing_loops(0, 1)
    rec, = curved_cocycle_check(alg, ("q1", "q2"))
    assert rec["winding"] == 1
    assert rec["value"] == (Element.of(w("q1", "q2", "q1", "q2"))
                            + Element.of(w("q2", "q1", "q2", "q1")))

    rec, = curved_cocycle_check(crossing_loops(), [("q1", "q2")])
    assert rec["winding"] == 2
    assert rec["value"] == Element.of(w("q1", "q2")) + Element.of(w("q2", "q1"))


def test_designation_input_errors():
    with pytest.raises(InputError, match="degree"):
        curved_cocycle_check(free_loop(3), "q")
    with pytest.raises(InputError, match="squares to zero"):
        curved_cocycle_check(square_zero_loop(degree=1), "p")
    with pytest.raises(InputError, match="unknown arrow"):
        curved_cocycle_check(free_loop(1), "z")
    with pytest.raises(InputError, match="not a loop"):
        curved_cocycle_check(arrow_with_differential(), "p")
    with pytest.raises(InputError, match="no designated loops"):
        curved_cocycle_check(free_loop(1), [])
    with pytest.raises(InputError, match="one loop or a crossing pair"):
        curved_cocycle_check(free_loop(1), ("q", "q", "q"))

    quiver = GradedQuiver(["v"], [Arrow("q1", "v", "v", 1),
                                  Arrow("q2", "v", "v", 1)])
    half = Algebra(quiver, relations=[("q1", "q1")])
    with pytest.raises(InputError, match="square relation"):
        curved_cocycle_check(half, ("q1", "q2"))

    apart = Algebra(GradedQuiver(
        ["1", "2"], [Arrow("a", "1", "1", 1), Arrow("b", "2", "2", 0)]))
    with pytest.raises(InputError, match="different vertices"):
        curved_cocycle_check(apart, ("a", "b"))

    # a through arrow sees the monodromy value on one side only
    leaky = Algebra(GradedQuiver(
        ["v", "u"], [Arrow("q", "v", "v", 1), Arrow("t", "v", "u", 0)]))
    with pytest.raises(InputError, match="not closed"):
        curved_cocycle_check(leaky, "q")


def test_boundary_loop_from_the_surface_dictionary():
    surf = SurfaceData(genus=0, orbifold_points=0,
                       boundary=(BoundaryComponent(1, -1),
                                 BoundaryComponent("none", 1)),
                       distinguished=0)
    std = standard_algebra(surf)
    rec, = curved_cocycle_check(std.algebra, "sq1")
    assert rec["winding"] == 1
    assert rec["value"] == Element.of(w("sq1", "sq1"))
    pres = dg_presentation(std.algebra, path_len=6)
    pres.curvature[rec["vertex"]] = rec["value"]
    assert check_stasheff(pres, 4)["ok"]


# the pillowcase family ----------------------------------------------------------


def test_family_zero_point_is_the_plain_chain():
    fam = pillowcase_family(0, 0, 0, 0)
    gauge = dg_presentation(pillowcase_algebra())
    assert fam.basis == gauge.basis
    assert fam.mu == gauge.mu
    assert set(fam.mu) == {2}
    assert fam.mu[2][(w("p3", "u2", "p2"), w("u1", "p1"))] == Element.of(P_LONG)


def test_family_dg_member_matches_the_gauge():
    # with the fourth parameter off the family member is honestly dg and
    # must coincide with the gauge of d(p_i) = q_i, signs included
    fam = pillowcase_family(1, 1, 1, 0)
    gauge = dg_presentation(chain_with_differential())
    assert fam.basis == gauge.basis
    assert fam.mu == gauge.mu


def test_family_coefficients_at_a_sample_point():
    fam = pillowcase_family(2, 3, 5, 7)
    assert fam.mu[1][(w("p1"),)] == Element.of(w("q1"), 2)
    assert fam.mu[1][(w("p2"),)] == Element.of(w("q2"), 3)
    assert fam.mu[1][(w("p3"),)] == Element.of(w("q3"), 5)

    mu3 = fam.mu[3]
    assert mu3[(w("q3"), w("u2", "p2"), w("u1", "p1"))] == Element.of(P_LONG, -42)
    assert mu3[(w("p3", "u2"), w("q2"), w("u1", "p1"))] == Element.of(P_LONG, 70)
    assert mu3[(w("p3", "u2", "p2"), w("u1"), w("q1"))] == Element.of(P_LONG, 105)

    mu4 = fam.mu[4]
    assert mu4[(w("q3"), w("u2"), w("q2"), w("u1", "p1"))] == Element.of(P_LONG, 14)
    assert mu4[(w("q3"), w("u2", "p2"), w("u1"), w("q1"))] == Element.of(P_LONG, 21)
    assert mu4[(w("p3", "u2"), w("q2"), w("u1"), w("q1"))] == Element.of(P_LONG, -35)

    assert fam.mu[5] == {
        (w("q3"), w("u2"), w("q2"), w("u1"), w("q1")): Element.of(P_LONG, -7)}

    skew = fam.mu[2][(w("p3", "u2", "p2"), w("u1", "p1"))]
    assert skew == Element.of(P_LONG, 1 - 210)


def test_family_satisfies_stasheff_at_the_corner():
    fam = pillowcase_family(1, 1, 1, 1)
    assert fam.validate() == []
    report = check_stasheff(fam, 7)
    assert report["ok"]
    assert report["tuples_checked"] == 24


def test_family_satisfies_stasheff_on_random_parameters():
    rng = random.Random(20260819)
    for _ in range(20):
        lams = [Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                for _ in range(4)]
        report = check_stasheff(pillowcase_family(*lams), 7)
        assert report["ok"], (lams, report["violation"])


def test_family_mutations_are_caught():
    top = (w("q3"), w("u2"), w("q2"), w("u1"), w("q1"))

    fam = pillowcase_family(1, 1, 1, 1)
    fam.mu[5][top] = fam.mu[5][top].scale(-1)
    report = check_stasheff(fam, 7)
    assert not report["ok"]
    assert report["violation"]["inputs"] == ["p3", "u2", "q2", "u1", "q1"]

    fam = pillowcase_family(1, 1, 1, 1)
    key = (w("p2"), w("u1"))
    fam.mu[2][key] = fam.mu[2][key].scale(2)
    assert not check_stasheff(fam, 7)["ok"]

    fam = pillowcase_family(1, 1, 1, 1)
    fam.mu[1][(w("p1"),)] = fam.mu[1][(w("p1"),)].scale(2)
    assert not check_stasheff(fam, 7)["ok"]


# cohomology of family members ---------------------------------------------------


def _glue_mapping():
    vertices = {"1+": Path.vertex("1"), "1-": Path.vertex("2"),
                "2+": Path.vertex("3"), "2-": Path.vertex("4"),
                "3+": Path.vertex("5"), "3-": Path.vertex("6")}
    arrows = {"u1p1": w("u1", "p1"), "p2u1p1": w("p2", "u1", "p1"),
              "u1": w("u1"), "p2u1": w("p2", "u1"),
              "u2p2": w("u2", "p2"), "p3u2p2": w("p3", "u2", "p2"),
              "u2": w("u2"), "p3u2": w("p3", "u2")}
    return {"vertices": vertices, "arrows": arrows}


def test_cohomology_of_a_regular_member():
    coh = pillowcase_cohomology(1, 1, 1, Fraction(7, 2))
    assert coh["total_dimension"] == 18
    assert coh["dims"] == {0: 18}
    assert coh["skew_coefficient"] == Fraction(-5, 2)
    assert not coh["degenerate"] and not coh["monomial_degenerate"]
    assert coh["formal"] is True

    reps = coh["representatives"]
    assert "@1" in reps and "u2,p2,u1,p1" in reps and "p1" not in reps

    assert coh["squares"]["skew"]["ok"]
    assert coh["squares"]["skew"]["factor"] == Fraction(-5, 2)
    assert all(sq["ok"] for sq in coh["squares"]["strict"])

    h = coh["presentation"]
    assert h.validate() == []
    assert len(list(h.irreducible_paths(6))) == 18
    prod = h.mul(w("p3u2p2"), w("u1p1"))
    assert prod == Element.of(w("p3u2", "p2u1p1"), Fraction(-5, 2))


def test_cohomology_dimension_is_constant_in_parameters():
    for lams in ((1, 1, 1, 0), (1, 1, 1, 2), (1, 1, 1, -1),
                 (2, Fraction(1, 3), -1, 5)):
        coh = pillowcase_cohomology(*lams)
        assert coh["total_dimension"] == 18, lams
        assert coh["dims"] == {0: 18}, lams


def test_cohomology_against_the_fiber_oracle():
    fib = fiber_cohomology(chain_with_differential(), (-1, 2))
    assert fib.dims == {0: 18}
    assert fib.total_dimension() == 18
    assert not fib.truncated


def test_presentation_glues_quasi_isomorphically():
    # the emitted quiver presentation maps onto the dg member by sending
    # each arrow to the path it names; this pins the algebra structure,
    # not just the dimension count
    coh = pillowcase_cohomology(1, 1, 1, 0)
    report = verify_morphism(coh["presentation"], chain_with_differential(),
                             _glue_mapping())
    assert report["verdict"] == "quasi_iso"
    assert report["problems"] == []


def test_skew_gentle_comparison_at_vanishing_product():
    coh = pillowcase_cohomology(2, Fraction(1, 2), 1, 0)
    assert coh["skew_coefficient"] == 1
    assert coh["skew_gentle"] is not None
    assert coh["skew_gentle"]["verdict"] == "iso"


def test_monomial_degenerate_member():
    coh = pillowcase_cohomology(1, 1, 1, 1)
    assert coh["monomial_degenerate"]
    assert coh["skew_coefficient"] == 0
    assert coh["total_dimension"] == 18
    h = coh["presentation"]
    assert h.has_relation("p3u2p2", "u1p1")
    assert not h.mul(w("p3u2p2"), w("u1p1"))
    assert any("monomial" in note for note in coh["notes"])


def test_degenerate_parameters_report():
    coh = pillowcase_cohomology(0, 1, 1, 5)
    assert coh["degenerate"]
    assert coh["presentation"] is None
    assert coh["dims"] == {0: 19, 1: 1}
    assert coh["total_dimension"] == 20
    assert coh["notes"]


def test_hochschild_anchor_of_the_base():
    rep = hh_dimension(pillowcase_algebra(), 2)
    assert rep.stable and rep.dimension == 4
