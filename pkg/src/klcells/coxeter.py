"""Finite Coxeter groups with exact element enumeration.

A group is built either from a named catalog type (A_n, B_n, D4, F4,
I2(m)) or from an explicit Coxeter matrix.  Elements are identified by
breadth-first search over an exact model of the group:

* rank 2 uses the dihedral model (rotation, reflection) over Z_m, which
  covers every I2(m);
* higher ranks with all bonds in {2, 3, 4, 6} use the integer reflection
  representation derived from the Coxeter matrix.

Both models are exact, so two words name the same element iff their model
values coincide.  The BFS explores words in ShortLex order (generator
order = declaration order), which makes the first word found for each
element its canonical reduced word, and element ids increase by (length,
word).  The identity always has id 0 and the longest element, when the
group is finite, has id |W|-1.

Generators fall into classes under the relation "conjugate in W", which
for simple reflections is the transitive closure of sharing an odd bond.
Classes are ordered by name (the common alphabetic prefix of their
members, e.g. {s1, s2} -> "s"); integer vectors indexed by classes in
that order represent elements of the lattice Z[classes] used throughout
the parameter-space machinery.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ElementCapExceeded, ParseError, ValidationError

DEFAULT_ELEMENT_CAP = 10_000

# Off-diagonal Cartan pairs (c_ij, c_ji) with c_ij*c_ji = 4cos^2(pi/m).
_CARTAN_PAIRS = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3)}


@dataclass(frozen=True)
class Element:
    """A group element: dense id, canonical reduced word, lengths.

    ``word`` holds generator indices; ``length_vector`` counts the letters
    of the canonical word per generator class (any reduced word gives the
    same counts).
    """

    id: int
    word: tuple[int, ...]
    length: int
    length_vector: tuple[int, ...]


def _class_name(member_names: tuple[str, ...]) -> str:
    prefixes = {re.sub(r"\d+$", "", name) for name in member_names}
    if len(prefixes) == 1:
        prefix = prefixes.pop()
        if prefix:
            return prefix
    return min(member_names)


class _MatrixModel:
    """Integer reflection representation for bonds in {2, 3, 4, 6}."""

    def __init__(self, matrix):
        n = len(matrix)
        cartan = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                m = matrix[i][j]
                if m not in _CARTAN_PAIRS:
                    raise ValidationError(
                        f"bond {m} has no integer reflection model; "
                        "only bonds 2, 3, 4, 6 are supported beyond rank 2"
                    )
                cij, cji = _CARTAN_PAIRS[m]
                cartan[i][j] = cij
                cartan[j][i] = cji
        self.identity = tuple(
            tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
        )
        # generator i reflects: e_j -> e_j - cartan[i][j] e_i
        self.gens = []
        for i in range(n):
            rows = [list(row) for row in self.identity]
            for j in range(n):
                rows[i][j] = (1 if i == j else 0) - cartan[i][j]
            self.gens.append(tuple(tuple(row) for row in rows))

    @staticmethod
    def mul(a, b):
        n = len(a)
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )


class _DihedralModel:
    """I2(m) as Z_m x {0,1}: (r, f) means rho^r sigma^f with rho = s*t."""

    def __init__(self, m: int):
        self.m = m
        self.identity = (0, 0)
        self.gens = [(0, 1), (m - 1, 1)]

    def mul(self, a, b):
        r1, f1 = a
        r2, f2 = b
        return ((r1 - r2 if f1 else r1 + r2) % self.m, f1 ^ f2)


class CoxeterSystem:
    """A finite Coxeter group, fully enumerated at construction time.

    Construction raises ElementCapExceeded when the presented group has
    more than ``element_cap`` elements, which is how accidental infinite
    (e.g. affine) inputs fail fast.
    """

    def __init__(
        self,
        generators,
        matrix,
        catalog_type: str | None = None,
        element_cap: int | None = None,
    ):
        self.generators = tuple(generators)
        n = len(self.generators)
        if len(set(self.generators)) != n or n == 0:
            raise ValidationError("generator names must be nonempty and distinct")
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValidationError("Coxeter matrix shape does not match generators")
        for i in range(n):
            if matrix[i][i] != 1:
                raise ValidationError("Coxeter matrix diagonal must be 1")
            for j in range(n):
                if matrix[i][j] != matrix[j][i]:
                    raise ValidationError("Coxeter matrix must be symmetric")
                if i != j and matrix[i][j] < 2:
                    raise ValidationError("off-diagonal Coxeter entries must be >= 2")
        self.matrix = matrix
        self.catalog_type = catalog_type
        self.element_cap = DEFAULT_ELEMENT_CAP if element_cap is None else element_cap

        self._gen_index = {name: i for i, name in enumerate(self.generators)}
        self._build_classes()
        self._enumerate()
        self._conjugacy_classes: tuple[tuple[int, ...], ...] | None = None

    # -- structure ------------------------------------------------------

    def _build_classes(self) -> None:
        # generators are conjugate iff joined by a path of odd bonds
        n = len(self.generators)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if self.matrix[i][j] % 2 == 1:
                    parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        named = []
        for members in groups.values():
            names = tuple(self.generators[i] for i in members)
            named.append((_class_name(names), tuple(members)))
        named.sort()
        if len({name for name, _ in named}) != len(named):
            raise ValidationError("generator class names collide; rename generators")
        self.class_names = tuple(name for name, _ in named)
        self.classes = tuple(members for _, members in named)
        self.generator_class = [0] * n
        for ci, members in enumerate(self.classes):
            for i in members:
                self.generator_class[i] = ci

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def generator_index(self, s) -> int:
        if isinstance(s, int):
            if not 0 <= s < len(self.generators):
                raise ValidationError(f"no generator with index {s}")
            return s
        try:
            return self._gen_index[s]
        except KeyError:
            raise ValidationError(f"unknown generator {s!r}") from None

    def class_index(self, name: str) -> int:
        try:
            return self.class_names.index(name)
        except ValueError:
            raise ValidationError(f"unknown generator class {name!r}") from None

    # -- enumeration ------------------------------------------------------

    def _model(self):
        if len(self.generators) == 2:
            return _DihedralModel(self.matrix[0][1])
        return _MatrixModel(self.matrix)

    def _enumerate(self) -> None:
        model = self._model()
        n_gens = len(self.generators)
        mul = model.mul
        gens = model.gens

        id_of = {model.identity: 0}
        values = [model.identity]
        words: list[tuple[int, ...]] = [()]
        layer = [0]
        while layer:
            next_layer = []
            for wid in layer:
                wval = values[wid]
                word = words[wid]
                for s in range(n_gens):
                    val = mul(wval, gens[s])
                    if val in id_of:
                        continue
                    new_id = len(values)
                    if new_id >= self.element_cap:
                        raise ElementCapExceeded(self.element_cap)
                    id_of[val] = new_id
                    values.append(val)
                    words.append(word + (s,))
                    next_layer.append(new_id)
            layer = next_layer

        n = len(values)
        self._right = [[0] * n_gens for _ in range(n)]
        self._left = [[0] * n_gens for _ in range(n)]
        for wid, wval in enumerate(values):
            for s in range(n_gens):
                self._right[wid][s] = id_of[mul(wval, gens[s])]
                self._left[wid][s] = id_of[mul(gens[s], wval)]

        elements = []
        for wid, word in enumerate(words):
            vec = [0] * self.num_classes
            for s in word:
                vec[self.generator_class[s]] += 1
            elements.append(Element(wid, word, len(word), tuple(vec)))
        self.elements = tuple(elements)

        self._inverse = [0] * n
        for wid, word in enumerate(words):
            inv = 0
            for s in reversed(word):
                inv = self._right[inv][s]
            self._inverse[wid] = inv

    @property
    def order(self) -> int:
        return len(self.elements)

    def element(self, wid: int) -> Element:
        return self.elements[wid]

    # -- operations --------------------------------------------------------

    def apply_generator(self, w: Element, s, side: str = "left") -> Element:
        si = self.generator_index(s)
        table = self._left if side == "left" else self._right
        return self.elements[table[w.id][si]]

    def invert(self, w: Element) -> Element:
        return self.elements[self._inverse[w.id]]

    def right_descent_set(self, w: Element) -> frozenset[str]:
        out = []
        for s in range(len(self.generators)):
            if self.elements[self._right[w.id][s]].length < w.length:
                out.append(self.generators[s])
        return frozenset(out)

    def left_descent_set(self, w: Element) -> frozenset[str]:
        out = []
        for s in range(len(self.generators)):
            if self.elements[self._left[w.id][s]].length < w.length:
                out.append(self.generators[s])
        return frozenset(out)

    def longest_element(self) -> Element:
        return self.elements[-1]

    def parabolic_elements(self, subset) -> tuple[Element, ...]:
        """All elements of the standard parabolic subgroup generated by
        the given generators (names or indices)."""
        gens = sorted(self.generator_index(s) for s in subset)
        seen = {0}
        queue = [0]
        while queue:
            wid = queue.pop()
            for s in gens:
                nxt = self._right[wid][s]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return tuple(self.elements[i] for i in sorted(seen))

    def conjugacy_classes(self) -> tuple[tuple[Element, ...], ...]:
        """Disjoint conjugation orbits covering W, each sorted by id; the
        orbits themselves are sorted by (hence represented by) their least
        element."""
        if self._conjugacy_classes is None:
            n = len(self.elements)
            n_gens = len(self.generators)
            seen = [False] * n
            classes = []
            for start in range(n):
                if seen[start]:
                    continue
                orbit = [start]
                seen[start] = True
                queue = [start]
                while queue:
                    wid = queue.pop()
                    for s in range(n_gens):
                        conj = self._left[self._right[wid][s]][s]
                        if not seen[conj]:
                            seen[conj] = True
                            orbit.append(conj)
                            queue.append(conj)
                classes.append(tuple(sorted(orbit)))
            self._conjugacy_classes = tuple(sorted(classes))
        return tuple(
            tuple(self.elements[i] for i in orbit)
            for orbit in self._conjugacy_classes
        )

    # -- products and words --------------------------------------------------

    def multiply(self, a: Element, b: Element) -> Element:
        wid = a.id
        for s in b.word:
            wid = self._right[wid][s]
        return self.elements[wid]

    def element_from_letters(self, letters) -> Element:
        wid = 0
        for s in letters:
            wid = self._right[wid][self.generator_index(s)]
        return self.elements[wid]

    def word_text(self, w: Element) -> str:
        if not w.word:
            return "1"
        return "*".join(self.generators[s] for s in w.word)

    def word_names(self, w: Element) -> list[str]:
        return [self.generators[s] for s in w.word]

    def parse_word(self, text: str) -> Element:
        """Parse generator-name concatenation, with optional ``*``
        separators; ``1`` denotes the identity."""
        text = text.strip()
        if text in ("", "1"):
            return self.elements[0]
        if "*" in text:
            letters = text.split("*")
            for pos, name in enumerate(letters):
                if name not in self._gen_index:
                    raise ParseError("unknown generator", text, pos)
            return self.element_from_letters(letters)
        # greedy longest-match tokenization
        letters = []
        pos = 0
        by_length = sorted(self.generators, key=len, reverse=True)
        while pos < len(text):
            for name in by_length:
                if text.startswith(name, pos):
                    letters.append(name)
                    pos += len(name)
                    break
            else:
                raise ParseError("unknown generator", text, pos)
        return self.element_from_letters(letters)

    # -- identity / serialization -------------------------------------------

    def descriptor(self) -> dict:
        """Canonical JSON-ready identity of the system."""
        return {
            "generators": list(self.generators),
            "matrix": [list(row) for row in self.matrix],
        }

    def __repr__(self) -> str:
        tag = self.catalog_type or "custom"
        return f"CoxeterSystem({tag}, order={self.order})"


def _chain_matrix(bonds: list[int]):
    """Coxeter matrix of a chain with the given consecutive bonds."""
    n = len(bonds) + 1
    matrix = [[2] * n for _ in range(n)]
    for i in range(n):
        matrix[i][i] = 1
    for i, m in enumerate(bonds):
        matrix[i][i + 1] = matrix[i + 1][i] = m
    return matrix


_I2_RE = re.compile(r"^I2[:(](\d+)\)?$")


def from_type(name: str, element_cap: int | None = None) -> CoxeterSystem:
    """Catalog constructor: A_n (n<=4), B_n (2<=n<=4), D4, F4, I2(m).

    The generator labelling follows the conventions used for the worked
    examples: B_n is t, s1, ..., s_{n-1} with the double bond at t--s1;
    F4 is s2, s1, t1, t2 with the double bond at s1--t1; I2(m) is s, t.
    """
    name = name.strip()
    m = _I2_RE.match(name)
    if m:
        bond = int(m.group(1))
        if bond < 2:
            raise ValidationError(f"unsupported catalog type {name!r}: need m >= 2")
        return CoxeterSystem(
            ("s", "t"), [[1, bond], [bond, 1]], f"I2({bond})", element_cap
        )
    if re.fullmatch(r"A[1-4]", name):
        n = int(name[1])
        gens = tuple(f"s{i}" for i in range(1, n + 1)) if n > 1 else ("s1",)
        return CoxeterSystem(gens, _chain_matrix([3] * (n - 1)), name, element_cap)
    if re.fullmatch(r"B[2-4]", name):
        n = int(name[1])
        gens = ("t",) + tuple(f"s{i}" for i in range(1, n))
        return CoxeterSystem(
            gens, _chain_matrix([4] + [3] * (n - 2)), name, element_cap
        )
    if name == "D4":
        # s2 is the branch node
        matrix = [[2] * 4 for _ in range(4)]
        for i in range(4):
            matrix[i][i] = 1
        for i, j in ((0, 1), (1, 2), (1, 3)):
            matrix[i][j] = matrix[j][i] = 3
        return CoxeterSystem(("s1", "s2", "s3", "s4"), matrix, "D4", element_cap)
    if name == "F4":
        matrix = _chain_matrix([3, 4, 3])
        return CoxeterSystem(("s2", "s1", "t1", "t2"), matrix, "F4", element_cap)
    raise ValidationError(f"unknown or unsupported catalog type {name!r}")
