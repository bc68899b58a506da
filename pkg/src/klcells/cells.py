"""Cell partitions of W from the canonical-basis structure constants.

The left preorder is generated by the directed edges x <- y whenever
some generator gives C_x a nonzero coefficient in the expansion of
T_s * C_y; since the T_s generate the algebra over the group ring, the
transitive closure already equals the preorder over arbitrary left
multipliers.  Left cells are the strongly connected components, the
induced order on cells is condensation reachability, and right and
two-sided data are transported through inversion:
x ~R y iff x^{-1} ~L y^{-1}.

The module also hosts the small lattice of equivalence relations on W
needed by the semicontinuity checks: translation relations by a
subgroup, joins, and finer-than tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import CoxeterSystem, Element
from .errors import ValidationError
from .hecke import KLTable


@dataclass(frozen=True)
class CellPartition:
    """Blocks partition the element ids 0..n-1; ``order`` holds every
    pair (i, j) with block i below block j in the cell preorder
    (reflexive pairs included).  Blocks are sorted by least member."""

    side: str  # "L", "R" or "LR"
    blocks: tuple[tuple[int, ...], ...]
    order: frozenset[tuple[int, int]]

    @property
    def num_elements(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self, wid: int) -> int:
        for i, block in enumerate(self.blocks):
            if wid in block:
                return i
        raise ValidationError(f"element id {wid} not covered by partition")

    def as_relation(self) -> "RelationHandle":
        return RelationHandle(self.blocks)


@dataclass(frozen=True)
class RelationHandle:
    """An equivalence relation on W, held as its canonical partition."""

    blocks: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_blocks(blocks) -> "RelationHandle":
        return RelationHandle(_canonical_blocks(blocks))

    @staticmethod
    def discrete(n: int) -> "RelationHandle":
        return RelationHandle(tuple((i,) for i in range(n)))


def _canonical_blocks(blocks) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


def _strongly_connected_components(n: int, succ: list[set[int]]):
    """Iterative Kosaraju; returns (component id per node, components)."""
    order = []
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        stack = [(start, iter(succ[start]))]
        seen[start] = True
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    pred: list[list[int]] = [[] for _ in range(n)]
    for node, outs in enumerate(succ):
        for nxt in outs:
            pred[nxt].append(node)
    comp = [-1] * n
    comps: list[list[int]] = []
    for start in reversed(order):
        if comp[start] != -1:
            continue
        cid = len(comps)
        members = [start]
        comp[start] = cid
        queue = [start]
        while queue:
            node = queue.pop()
            for nxt in pred[node]:
                if comp[nxt] == -1:
                    comp[nxt] = cid
                    members.append(nxt)
                    queue.append(nxt)
        comps.append(members)
    return comp, comps


def _partition_from_edges(n: int, succ: list[set[int]], side: str) -> CellPartition:
    """Cells and order from the edge sets; an arc y -> x means x <- y,
    i.e. x lies below y in the preorder."""
    comp, comps = _strongly_connected_components(n, succ)
    k = len(comps)
    # condensation: arc from component of y to component of x
    csucc: list[set[int]] = [set() for _ in range(k)]
    for y in range(n):
        for x in succ[y]:
            if comp[x] != comp[y]:
                csucc[comp[y]].add(comp[x])
    # reach[j] = all components at or below component j
    reach: list[set[int]] = [set() for _ in range(k)]
    # Kosaraju emits components in reverse topological order of csucc,
    # so dependencies of j have larger indices and are filled first.
    for j in range(k - 1, -1, -1):
        below = {j}
        for nxt in csucc[j]:
            below |= reach[nxt]
        reach[j] = below

    blocks = _canonical_blocks(comps)
    index_of = {block[0]: i for i, block in enumerate(blocks)}
    relabel = [index_of[min(members)] for members in comps]
    order = set()
    for j in range(k):
        for i in reach[j]:
            order.add((relabel[i], relabel[j]))
    return CellPartition(side, blocks, frozenset(order))


def _left_edges(table: KLTable) -> list[set[int]]:
    n = table.ctx.sys.order
    succ: list[set[int]] = [set() for _ in range(n)]
    for per_y in table.c_products():
        for y, expansion in enumerate(per_y):
            for x in expansion:
                if x != y:
                    succ[y].add(x)
    return succ


def left_cells(table: KLTable) -> CellPartition:
    return _partition_from_edges(table.ctx.sys.order, _left_edges(table), "L")


def right_cells(table: KLTable) -> CellPartition:
    sys = table.ctx.sys
    inv = sys._inverse
    succ = [set() for _ in range(sys.order)]
    for y, outs in enumerate(_left_edges(table)):
        for x in outs:
            succ[inv[y]].add(inv[x])
    return _partition_from_edges(sys.order, succ, "R")


def two_sided_cells(table: KLTable) -> CellPartition:
    sys = table.ctx.sys
    inv = sys._inverse
    left = _left_edges(table)
    succ = [set(outs) for outs in left]
    for y, outs in enumerate(left):
        for x in outs:
            succ[inv[y]].add(inv[x])
    return _partition_from_edges(sys.order, succ, "LR")


def cells_for_side(table: KLTable, side: str) -> CellPartition:
    if side == "L":
        return left_cells(table)
    if side == "R":
        return right_cells(table)
    if side == "LR":
        return two_sided_cells(table)
    raise ValidationError(f"side must be L, R or LR, got {side!r}")


def translation_relation(sys: CoxeterSystem, subgroup, side: str) -> RelationHandle:
    """Orbits of W under left / right / two-sided translation by a
    subgroup (given as elements or ids)."""
    ids = sorted(h.id if isinstance(h, Element) else h for h in subgroup)
    idset = set(ids)
    if 0 not in idset:
        raise ValidationError("subgroup must contain the identity")
    for a in ids:
        if sys._inverse[a] not in idset:
            raise ValidationError("set is not closed under inversion")
        for b in ids:
            if sys.multiply(sys.elements[a], sys.elements[b]).id not in idset:
                raise ValidationError("set is not closed under multiplication")
    if side not in ("L", "R", "LR"):
        raise ValidationError(f"side must be L, R or LR, got {side!r}")
    n = sys.order
    seen = [False] * n
    blocks = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = {start}
        queue = [start]
        seen[start] = True
        while queue:
            wid = queue.pop()
            w = sys.elements[wid]
            nxt = []
            if side in ("L", "LR"):
                nxt += [sys.multiply(sys.elements[h], w).id for h in ids]
            if side in ("R", "LR"):
                nxt += [sys.multiply(w, sys.elements[h]).id for h in ids]
            for v in nxt:
                if not seen[v]:
                    seen[v] = True
                    orbit.add(v)
                    queue.append(v)
        blocks.append(tuple(sorted(orbit)))
    return RelationHandle(_canonical_blocks(blocks))


def sup_relations(relations) -> RelationHandle:
    """Join in the lattice of equivalence relations: the finest common
    coarsening, by union-find over all blocks."""
    relations = list(relations)
    if not relations:
        raise ValidationError("need at least one relation")
    n = sum(len(b) for b in relations[0].blocks)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for rel in relations:
        if sum(len(b) for b in rel.blocks) != n:
            raise ValidationError("relations live on different ground sets")
        for block in rel.blocks:
            root = find(block[0])
            for x in block[1:]:
                parent[find(x)] = root
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return RelationHandle(_canonical_blocks(groups.values()))


def is_coarsening(fine: RelationHandle, coarse: RelationHandle) -> bool:
    """True when every block of ``fine`` sits inside a block of
    ``coarse`` (i.e. fine is finer or equal)."""
    owner: dict[int, int] = {}
    for i, block in enumerate(coarse.blocks):
        for x in block:
            owner[x] = i
    for block in fine.blocks:
        try:
            first = owner[block[0]]
        except KeyError:
            raise ValidationError("relations live on different ground sets") from None
        if any(owner.get(x) != first for x in block[1:]):
            return False
    return True


# -- canonical JSON form -----------------------------------------------------


def partition_json(partition: CellPartition, sys: CoxeterSystem) -> dict:
    """The canonical serialized form: blocks as sorted word strings,
    order as sorted index pairs.  This is the fingerprint contract."""
    return {
        "schema": "klcells/1",
        "side": partition.side,
        "blocks": [
            [sys.word_text(sys.elements[wid]) for wid in block]
            for block in partition.blocks
        ],
        "order": sorted([i, j] for i, j in partition.order),
    }


def partition_fingerprint(partition: CellPartition, sys: CoxeterSystem) -> str:
    import hashlib
    import json

    blob = json.dumps(
        partition_json(partition, sys), sort_keys=True, separators=(",", ":")
    ).encode()
    return hashlib.sha256(blob).hexdigest()
