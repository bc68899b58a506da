"""Positive subsets, sign vectors and facet enumeration.

The facet counts are checked against an independent oracle: sampling
all primitive integer single forms on a grid large enough to hit every
facet of these small line arrangements, and counting distinct sign
vectors, with no feasibility search involved.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klcells import coxeter, paramspace as ps
from klcells.errors import ParseError, ValidationError

B2E = ps.symmetrize([(1, 0), (0, 1), (-1, 1), (1, 1)])

F4_HALF = ["s", "t", "s-2t", "s-t", "2s-t", "s+2t", "s+t", "2s+t"]


def _f4_elements():
    f4 = coxeter.from_type("F4")
    return ps.symmetrize([ps.parse_element(x, f4) for x in F4_HALF])


def _sampled_sign_vectors(elements, dim, bound=8):
    """Oracle: distinct sign vectors over all primitive forms on a grid,
    plus the zero form."""
    import itertools

    seen = set()
    for form in itertools.product(range(-bound, bound + 1), repeat=dim):
        pos = ps.PositiveSubset(dim, (form,) if any(form) else ())
        seen.add(tuple(pos.contains(v) for v in elements))
    return seen


# -- parsing ------------------------------------------------------------------


def test_parse_element(groups):
    assert ps.parse_element("s+t", groups("B2")) == (1, 1)
    assert ps.parse_element("t-2s", groups("B3")) == (-2, 1)
    assert ps.parse_element("2s-t", groups("F4")) == (2, -1)
    assert ps.parse_element("-s", groups("B2")) == (-1, 0)
    assert ps.parse_element("3t", groups("B2")) == (0, 3)


def test_parse_element_errors(groups):
    with pytest.raises(ParseError) as err:
        ps.parse_element("s+q", groups("B2"))
    assert err.value.position == 2
    with pytest.raises(ParseError):
        ps.parse_element("", groups("B2"))
    with pytest.raises(ParseError):
        ps.parse_element("2*s", groups("B2"))


def test_format_element(groups):
    b2 = groups("B2")
    for text in ("s+t", "t-2s", "-s", "2s-t"):
        vec = ps.parse_element(text, b2)
        assert ps.parse_element(ps.format_element(vec, b2), b2) == vec


# -- canonical flags ----------------------------------------------------------


def test_canonicalize_examples():
    assert ps.canonicalize([(2, 2), (0, 3)], 2).flag == ((1, 1), (0, 1))
    assert ps.canonicalize([(1, 1), (2, 2)], 2).flag == ((1, 1),)
    assert ps.canonicalize([], 2).flag == ()
    # reduction modulo earlier forms makes equivalent flags identical
    assert (
        ps.canonicalize([(1, 1), (1, 0)], 2).flag
        == ps.canonicalize([(2, 2), (5, 2)], 2).flag
    )


def test_canonicalize_idempotent_and_scaling_invariant():
    import random

    rng = random.Random(7)
    for _ in range(40):
        dim = rng.randint(1, 3)
        forms = [
            tuple(rng.randint(-4, 4) for _ in range(dim))
            for _ in range(rng.randint(0, 3))
        ]
        pos = ps.PositiveSubset(dim, forms)
        assert ps.PositiveSubset(dim, pos.flag).flag == pos.flag
        scaled = [tuple(rng.randint(1, 4) * x for x in f) for f in forms]
        assert ps.PositiveSubset(dim, scaled).flag == pos.flag
        padded = list(forms)
        for f in forms:
            padded.append(tuple(2 * x for x in f))
        assert ps.PositiveSubset(dim, padded).flag == pos.flag


def test_contains_examples():
    X = ps.PositiveSubset(2, [(1, 1)])
    assert X.contains((1, -1)) == 0
    X2 = ps.PositiveSubset(2, [(1, 1), (0, 1)])
    assert X2.contains((1, -1)) == -1
    assert X2.contains((0, 0)) == 0
    everything = ps.PositiveSubset(2, [])
    assert everything.contains((3, -5)) == 0


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_positivity_axioms(data):
    dim = data.draw(st.integers(1, 3))
    forms = data.draw(
        st.lists(
            st.tuples(*[st.integers(-3, 3)] * dim).map(tuple),
            min_size=0,
            max_size=3,
        )
    )
    pos = ps.PositiveSubset(dim, forms)
    vecs = st.tuples(*[st.integers(-6, 6)] * dim).map(tuple)
    lam = data.draw(vecs)
    mu = data.draw(vecs)
    # X u (-X) covers everything
    assert pos.contains(lam) >= 0 or pos.contains(tuple(-x for x in lam)) >= 0
    # X + X inside X
    if pos.contains(lam) >= 0 and pos.contains(mu) >= 0:
        total = tuple(a + b for a, b in zip(lam, mu))
        assert pos.contains(total) >= 0
    # the kernel is a subgroup
    if pos.contains(lam) == 0 and pos.contains(mu) == 0:
        assert pos.contains(tuple(a + b for a, b in zip(lam, mu))) == 0
        assert pos.contains(tuple(-x for x in lam)) == 0


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_trichotomy(data):
    dim = data.draw(st.integers(1, 3))
    forms = data.draw(
        st.lists(
            st.tuples(*[st.integers(-3, 3)] * dim).map(tuple),
            min_size=0,
            max_size=3,
        )
    )
    pos = ps.PositiveSubset(dim, forms)
    lam = data.draw(
        st.tuples(*[st.integers(-6, 6)] * dim).map(tuple).filter(any)
    )
    value = pos.contains(lam)
    mirrored = pos.contains(tuple(-x for x in lam))
    assert value in (-1, 0, 1)
    assert mirrored == -value


def test_sgn_examples():
    E = [(1, 0), (0, 1), (-1, 1), (1, 1)]
    assert ps.PositiveSubset(2, [(2, 1)]).sgn(E).text() == "++-+"
    assert ps.PositiveSubset(2, [(1, 1)]).sgn(E).text() == "++0+"
    sv = ps.PositiveSubset(2, [(2, 1)]).sgn(B2E)
    for v in B2E:
        assert sv.sign_of(tuple(-x for x in v)) == -sv.sign_of(v)


def test_quotient_embedding_examples():
    rank, embed = ps.quotient_embedding(ps.PositiveSubset(2, [(1, 2)]))
    assert rank == 1 and embed((1, 0)) == (1,) and embed((0, 1)) == (2,)
    rank, embed = ps.quotient_embedding(ps.PositiveSubset(2, [(1, 1), (0, 1)]))
    assert rank == 2 and embed((1, 0)) == (1, 0) and embed((0, 1)) == (1, 1)
    rank, embed = ps.quotient_embedding(ps.PositiveSubset(2, []))
    assert rank == 0 and embed((4, -7)) == ()


def test_is_reduced():
    assert ps.is_reduced((1, 1))
    assert ps.is_reduced((-2, 1))
    assert not ps.is_reduced((2, 2))
    assert not ps.is_reduced((0, 0))


# -- arrangements ---------------------------------------------------------------


def test_b2_arrangement_counts():
    arr = ps.Arrangement(B2E, 2)
    assert len(arr.facets) == 17
    assert len(arr.chambers) == 8
    dims = sorted(f.dimension for f in arr.facets)
    assert dims == [0] + [1] * 8 + [2] * 8
    assert len(_sampled_sign_vectors(B2E, 2)) == 17


def test_f4_arrangement_counts():
    elements = _f4_elements()
    arr = ps.Arrangement(elements, 2)
    assert len(arr.facets) == 33
    assert len(_sampled_sign_vectors(elements, 2)) == 33


def test_rank1_arrangement():
    arr = ps.Arrangement([(1,), (-1,)], 1)
    assert len(arr.facets) == 3


def test_validation_errors():
    with pytest.raises(ValidationError, match="symmetric"):
        ps.Arrangement([(1, 0), (0, 1), (0, -1)], 2)
    with pytest.raises(ValidationError, match="reduced"):
        ps.Arrangement(ps.symmetrize([(2, 0), (0, 1)]), 2)
    with pytest.raises(ValidationError, match="complete"):
        ps.Arrangement(ps.symmetrize([(1, 1), (1, 0)]), 2)


def test_facet_representatives_realize_signs():
    arr = ps.Arrangement(B2E, 2)
    for facet in arr.facets:
        rep_signs = tuple(facet.representative.contains(v) for v in arr.elements)
        assert rep_signs == facet.signs
        assert facet.is_chamber == (facet.dimension == 2)
    origin = [f for f in arr.facets if f.dimension == 0]
    assert len(origin) == 1 and origin[0].representative.flag == ()


def test_closure_order_and_adjacency():
    arr = ps.Arrangement(B2E, 2)
    origin = next(f for f in arr.facets if f.dimension == 0)
    for f in arr.facets:
        assert ps.closure_leq(origin, f)
        assert ps.closure_leq(f, f)
    chambers = arr.chambers
    for c1 in chambers:
        for c2 in chambers:
            if c1 is not c2:
                assert not ps.closure_leq(c1, c2)
    ray = arr.facet_of(ps.PositiveSubset(2, [(1, 1)]))
    adj = arr.adjacent_chambers(ray)
    assert len(adj) == 2
    for c in adj:
        assert c.sign_of((1, 0)) > 0 and c.sign_of((0, 1)) > 0
    assert len(arr.adjacent_chambers(origin)) == 8
    chamber = chambers[0]
    assert arr.adjacent_chambers(chamber) == (chamber,)


def test_closure_is_partial_order():
    for elements in (B2E, _f4_elements()):
        arr = ps.Arrangement(elements, 2)
        facets = arr.facets
        for f in facets:
            assert ps.closure_leq(f, f)
        for f in facets:
            for g in facets:
                if ps.closure_leq(f, g) and ps.closure_leq(g, f):
                    assert f is g
                for h in facets:
                    if ps.closure_leq(f, g) and ps.closure_leq(g, h):
                        assert ps.closure_leq(f, h)


def test_closure_mismatch_rejected():
    arr1 = ps.Arrangement(B2E, 2)
    arr2 = ps.Arrangement(ps.symmetrize([(1, 0), (0, 1)]), 2)
    with pytest.raises(ValidationError):
        ps.closure_leq(arr1.facets[0], arr2.facets[0])


def test_zero_classes_of_facets():
    arr = ps.Arrangement(B2E, 2)
    for f in arr.chambers:
        assert f.zero_classes(2) == ()
    wall_s = arr.facet_of(ps.PositiveSubset(2, [(0, 1)]))
    assert wall_s.zero_classes(2) == (0,)
    origin = next(f for f in arr.facets if f.dimension == 0)
    assert origin.zero_classes(2) == (0, 1)


def test_chamber_refinement_keeps_signs():
    arr = ps.Arrangement(B2E, 2)
    for chamber in arr.chambers:
        refined = ps.refined_representative(chamber)
        assert refined is not None and refined.rank == 2
        assert tuple(refined.contains(v) for v in arr.elements) == chamber.signs
    ray = arr.facet_of(ps.PositiveSubset(2, [(1, 1)]))
    assert ps.refined_representative(ray) is None


def test_tau_flip():
    X = ps.PositiveSubset(2, [(1, 2)])
    assert X.tau_flip(0).flag == ((-1, 2),)
    assert X.tau_flip(0).tau_flip(0) == X
    import random

    rng = random.Random(3)
    for _ in range(20):
        forms = [
            tuple(rng.randint(-3, 3) for _ in range(2))
            for _ in range(rng.randint(0, 2))
        ]
        Y = ps.PositiveSubset(2, forms)
        assert Y.tau_flip(1).tau_flip(1) == Y
        both = Y.tau_flip(0).tau_flip(1)
        negated = ps.PositiveSubset(2, [tuple(-x for x in f) for f in Y.flag])
        assert both == negated


def test_tau_flip_facet():
    arr = ps.Arrangement(B2E, 2)
    ray = arr.facet_of(ps.PositiveSubset(2, [(1, 1)]))
    flipped = ps.tau_flip_facet(arr, ray, 0)
    assert flipped.sign_of((1, 0)) == -ray.sign_of((1, 0))
    assert flipped.sign_of((0, 1)) == ray.sign_of((0, 1))


def test_interior_variants_counts():
    arr = ps.Arrangement(B2E, 2)
    chamber = arr.chambers[0]
    variants = ps.interior_variants(chamber, 3, seed=5)
    assert len(variants) == 3
    assert len({v.flag for v in variants}) == 3
    for v in variants:
        assert tuple(v.contains(x) for x in arr.elements) == chamber.signs
    ray = arr.facet_of(ps.PositiveSubset(2, [(1, 1)]))
    assert ps.interior_variants(ray, 3, seed=5) == [ray.representative]
