"""Group construction and enumeration, checked against independent
models: signed permutations for types A/B/D and the rotation model for
dihedral groups.  The production path identifies elements through the
integer reflection representation, which shares nothing with these."""

import itertools

import pytest

from klcells import coxeter
from klcells.errors import ElementCapExceeded, ParseError, ValidationError

# -- independent group models -------------------------------------------------


def _signed_perm_group(n, even_signs=False):
    """Closure of the type-B (or D) generators acting on signed
    permutations, as tuples of signed images of 1..n."""
    ident = tuple(range(1, n + 1))

    def compose(a, b):  # a after b
        return tuple((a[x - 1] if x > 0 else -a[-x - 1]) for x in b)

    gens = []
    if not even_signs:
        gens.append(tuple([-1] + list(range(2, n + 1))))  # t: flip first
    else:
        flip2 = [-2, -1] + list(range(3, n + 1))
        gens.append(tuple(flip2))  # flips two signs
    for i in range(1, n):
        img = list(range(1, n + 1))
        img[i - 1], img[i] = img[i], img[i - 1]
        gens.append(tuple(img))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                prod = compose(h, g)
                if prod not in group:
                    group.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return group


def _conjugacy_count(group):
    group = list(group)
    index = {g: i for i, g in enumerate(group)}

    def compose(a, b):
        return tuple((a[x - 1] if x > 0 else -a[-x - 1]) for x in b)

    def inverse(a):
        out = [0] * len(a)
        for i, img in enumerate(a):
            if img > 0:
                out[img - 1] = i + 1
            else:
                out[-img - 1] = -(i + 1)
        return tuple(out)

    seen = [False] * len(group)
    count = 0
    for i, g in enumerate(group):
        if seen[i]:
            continue
        count += 1
        for h in group:
            conj = compose(compose(h, g), inverse(h))
            seen[index[conj]] = True
    return count


# -- catalog ------------------------------------------------------------------


def test_catalog_orders_match_independent_models(groups):
    assert groups("A1").order == 2
    assert groups("A2").order == len(list(itertools.permutations(range(3))))
    assert groups("A3").order == len(list(itertools.permutations(range(4))))
    assert groups("B2").order == len(_signed_perm_group(2))
    assert groups("B3").order == len(_signed_perm_group(3))
    assert groups("B4").order == len(_signed_perm_group(4))
    assert groups("D4").order == len(_signed_perm_group(4, even_signs=True))
    for m in (2, 3, 4, 5, 6, 7):
        assert groups(f"I2:{m}").order == 2 * m
    assert groups("F4").order == 1152


def test_catalog_class_structure(groups):
    b3 = groups("B3")
    assert b3.class_names == ("s", "t")
    assert [tuple(b3.generators[i] for i in c) for c in b3.classes] == [
        ("s1", "s2"),
        ("t",),
    ]
    f4 = groups("F4")
    assert f4.class_names == ("s", "t")
    assert set(f4.generators[i] for i in f4.classes[0]) == {"s1", "s2"}
    assert set(f4.generators[i] for i in f4.classes[1]) == {"t1", "t2"}
    # odd bond merges classes
    assert groups("A2").class_names == ("s",)
    assert groups("I2:5").class_names == ("s",)
    assert groups("I2:4").class_names == ("s", "t")


def test_unknown_type_rejected():
    with pytest.raises(ValidationError, match="B7"):
        coxeter.from_type("B7")
    with pytest.raises(ValidationError, match="E8"):
        coxeter.from_type("E8")
    with pytest.raises(ValidationError):
        coxeter.from_type("I2:1")


def test_element_cap():
    with pytest.raises(ElementCapExceeded) as err:
        coxeter.from_type("F4", element_cap=100)
    assert err.value.cap == 100
    # affine-looking custom matrix fails fast
    matrix = [[1, 3, 2], [3, 1, 6], [2, 6, 1]]
    with pytest.raises(ElementCapExceeded):
        coxeter.CoxeterSystem(("a", "b", "c"), matrix, element_cap=2000)


def test_enumeration_order(groups):
    for name in ("I2:4", "B3"):
        sys = groups(name)
        keys = [(e.length, e.word) for e in sys.elements]
        assert keys == sorted(keys)
        assert sys.elements[0].word == ()
        assert [e.id for e in sys.elements] == list(range(sys.order))


def test_i24_longest_word(groups):
    i24 = groups("I2:4")
    assert i24.longest_element().length == 4
    assert i24.word_text(i24.longest_element()) == "s*t*s*t"


# -- operations ---------------------------------------------------------------


def test_apply_generator(groups):
    i24 = groups("I2:4")
    s, t = i24.parse_word("s"), i24.parse_word("t")
    assert i24.apply_generator(s, "t", "left") == i24.parse_word("ts")
    b3 = groups("B3")
    assert b3.apply_generator(b3.elements[0], "t", "right") == b3.parse_word("t")
    w0 = i24.longest_element()
    assert i24.word_text(i24.apply_generator(w0, "s", "left")) == "t*s*t"


def test_length_changes_by_one(groups):
    for name in ("I2:6", "B3", "A3", "D4"):
        sys = groups(name)
        for w in sys.elements:
            for s in sys.generators:
                for side in ("left", "right"):
                    moved = sys.apply_generator(w, s, side)
                    assert abs(moved.length - w.length) == 1


def test_invert(groups):
    i24 = groups("I2:4")
    assert i24.invert(i24.elements[0]) == i24.elements[0]
    assert i24.invert(i24.parse_word("st")) == i24.parse_word("ts")
    b3 = groups("B3")
    for w in b3.elements:
        inv = b3.invert(w)
        assert b3.multiply(w, inv).id == 0
        assert b3.invert(inv) == w
        assert inv.length_vector == w.length_vector


def test_right_descent_set(groups):
    i24 = groups("I2:4")
    assert i24.right_descent_set(i24.elements[0]) == frozenset()
    assert i24.right_descent_set(i24.parse_word("sts")) == frozenset({"s"})
    assert i24.right_descent_set(i24.longest_element()) == frozenset({"s", "t"})


def test_longest_element_unique_full_descents(groups):
    for name in ("I2:4", "I2:6", "B3", "A3"):
        sys = groups(name)
        full = [
            w
            for w in sys.elements
            if sys.right_descent_set(w) == frozenset(sys.generators)
        ]
        assert full == [sys.longest_element()]


def test_longest_element_central_in_even_dihedral(groups):
    for m in (4, 6, 8):
        sys = groups(f"I2:{m}")
        w0 = sys.longest_element()
        for w in sys.elements:
            assert sys.multiply(w0, w) == sys.multiply(w, w0)


def test_parabolic_elements(groups):
    b3 = groups("B3")
    assert [w.id for w in b3.parabolic_elements([])] == [0]
    b2 = groups("B2")
    sub = b2.parabolic_elements(["s1"])
    assert [b2.word_text(w) for w in sub] == ["1", "s1"]
    sym3 = b3.parabolic_elements(["s1", "s2"])
    assert len(sym3) == 6
    ids = {w.id for w in sym3}
    for a in sym3:
        assert b3.invert(a).id in ids
        for b in sym3:
            assert b3.multiply(a, b).id in ids


def test_conjugacy_classes(groups):
    a1 = groups("A1")
    assert len(a1.conjugacy_classes()) == 2
    assert len(groups("I2:4").conjugacy_classes()) == 5
    b3 = groups("B3")
    classes = b3.conjugacy_classes()
    assert len(classes) == _conjugacy_count(_signed_perm_group(3))
    covered = sorted(w.id for orbit in classes for w in orbit)
    assert covered == list(range(48))
    for orbit in classes:
        assert orbit[0].id == min(w.id for w in orbit)


# -- length vectors -----------------------------------------------------------


def _reduced_words(sys, w, limit=3):
    """A few distinct reduced words, by peeling left descents."""
    if w.length == 0:
        return [()]
    out = []
    for s in range(len(sys.generators)):
        shorter = sys.elements[sys._left[w.id][s]]
        if shorter.length < w.length:
            for word in _reduced_words(sys, shorter, limit):
                out.append((s,) + word)
                if len(out) >= limit:
                    return out
    return out


def test_length_vector_independent_of_reduced_word(groups):
    for name in ("B3", "I2:6", "A3"):
        sys = groups(name)
        for w in sys.elements:
            counts = []
            for word in _reduced_words(sys, w, limit=3):
                vec = [0] * sys.num_classes
                for s in word:
                    vec[sys.generator_class[s]] += 1
                counts.append(tuple(vec))
            assert len(set(counts)) == 1
            assert counts[0] == w.length_vector
            assert sum(w.length_vector) == w.length


def test_length_vector_additive_on_length_additive_products(groups):
    sys = groups("B3")
    for a in sys.elements[::5]:
        for b in sys.elements[::7]:
            ab = sys.multiply(a, b)
            if ab.length == a.length + b.length:
                assert ab.length_vector == tuple(
                    x + y for x, y in zip(a.length_vector, b.length_vector)
                )


# -- words and parsing ----------------------------------------------------------


def test_parse_word_forms(groups):
    b3 = groups("B3")
    assert b3.parse_word("t*s1*t") == b3.parse_word("ts1t")
    assert b3.parse_word("1").id == 0
    assert b3.parse_word("").id == 0
    with pytest.raises(ParseError):
        b3.parse_word("t*q*t")
    with pytest.raises(ParseError):
        b3.parse_word("xyz")


def test_word_text_round_trip(groups):
    sys = groups("B3")
    for w in sys.elements:
        assert sys.parse_word(sys.word_text(w)) == w
        assert sys.element_from_letters(sys.word_names(w)) == w
