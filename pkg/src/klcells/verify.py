"""Mechanical checks of the semicontinuity statements at desk scale.

For a finite complete arrangement the statements under test are:

* facet constancy: the cell partitions agree across distinct positive
  subsets lying on one facet (proved for finite groups; expected pass);
* the supremum formula: the relation on a facet is the join of the
  relations of its adjacent chambers together with translation by the
  facet parabolic (the subgroup generated by the classes whose weight
  vanishes on the facet);
* character decomposition: each facet cell is a union of adjacent
  chamber cells, and its cell-module character is the sum of theirs
  (a union failure and a character mismatch are distinct outcomes);
* rank-2 wall scans: sampling slopes p/q on a Farey-style grid and
  fingerprinting the partitions locates the walls where cells change.

All checks are exact; reports carry the witnesses that were used.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import cellrep, cells, hecke, paramspace
from .coxeter import CoxeterSystem
from .errors import ValidationError
from .paramspace import Arrangement, Facet, PositiveSubset

SIDES = ("L", "R", "LR")


class TableCache:
    """Per-run memo of KL tables keyed by canonical flag, optionally
    backed by the on-disk cache."""

    def __init__(self, sys: CoxeterSystem, cache_dir: str | None = None):
        self.sys = sys
        self.cache_dir = cache_dir
        self._tables: dict = {}
        self._partitions: dict = {}

    def table(self, pos: PositiveSubset) -> hecke.KLTable:
        key = pos.flag
        if key not in self._tables:
            ctx = hecke.specialize(self.sys, pos)
            self._tables[key] = hecke.kl_table(ctx, self.cache_dir)
        return self._tables[key]

    def partition(self, pos: PositiveSubset, side: str) -> cells.CellPartition:
        key = (pos.flag, side)
        if key not in self._partitions:
            self._partitions[key] = cells.cells_for_side(self.table(pos), side)
        return self._partitions[key]


@dataclass
class FacetReport:
    signs: str
    constancy_ok: bool
    sup_ok: dict
    partitions: dict
    witnesses: list
    seconds: float

    @property
    def ok(self) -> bool:
        return self.constancy_ok and all(self.sup_ok.values())


@dataclass
class WallReport:
    slopes: list[str]
    fingerprints: dict
    walls: list[str]

    def constant_between_walls(self) -> bool:
        """Fingerprints must agree on every run of grid slopes strictly
        between consecutive walls; the boundary slopes 0 and inf are
        hyperplanes of the complete arrangement, not chamber points, so
        they are excluded from the runs."""
        runs: list[list[str]] = [[]]
        for slope in self.slopes[1:-1]:
            if slope in self.walls:
                runs.append([])
            else:
                runs[-1].append(slope)
        for run in runs:
            if len({self.fingerprints[s] for s in run}) > 1:
                return False
        return True


def facet_witnesses(facet: Facet, k: int) -> list[PositiveSubset]:
    """Up to k distinct positive subsets on the facet: the canonical
    representative, perturbed interior forms, and one depth-2 flag
    refinement when the facet admits one.  Low-dimensional facets may
    carry fewer than k."""
    witnesses = paramspace.interior_variants(facet, max(1, k - 1), seed=20_26)
    refined = paramspace.refined_representative(facet)
    if refined is not None and refined not in witnesses:
        witnesses.append(refined)
    return witnesses[:k] if len(witnesses) > k else witnesses


def check_facet_constancy(
    sys: CoxeterSystem,
    facet: Facet,
    k: int = 3,
    table_cache: TableCache | None = None,
    sides=SIDES,
) -> tuple[bool, list[PositiveSubset]]:
    """Whether all witnesses on the facet produce identical partitions
    for every requested side."""
    cache = table_cache or TableCache(sys)
    witnesses = facet_witnesses(facet, k)
    for side in sides:
        partitions = {cache.partition(pos, side).blocks for pos in witnesses}
        if len(partitions) > 1:
            return False, witnesses
    return True, witnesses


def check_sup_formula(
    sys: CoxeterSystem,
    arr: Arrangement,
    facet: Facet,
    side: str,
    table_cache: TableCache | None = None,
) -> bool:
    """Facet relation == join of adjacent-chamber relations with the
    translation relation of the facet parabolic."""
    cache = table_cache or TableCache(sys)
    parabolic = facet_parabolic(sys, facet)
    relations = [cells.translation_relation(sys, parabolic, side)]
    for chamber in arr.adjacent_chambers(facet):
        relations.append(cache.partition(chamber.representative, side).as_relation())
    joined = cells.sup_relations(relations)
    actual = cache.partition(facet.representative, side).as_relation()
    return joined == actual


def facet_parabolic(sys: CoxeterSystem, facet: Facet):
    """Elements of the standard parabolic generated by the union of the
    classes vanishing on the facet."""
    gens = []
    for ci in facet.zero_classes(sys.num_classes):
        gens.extend(sys.generators[i] for i in sys.classes[ci])
    return sys.parabolic_elements(gens)


def parabolic_of_facet(sys: CoxeterSystem, facet: Facet) -> frozenset[str]:
    """Generator names spanning the facet parabolic."""
    gens = []
    for ci in facet.zero_classes(sys.num_classes):
        gens.extend(sys.generators[i] for i in sys.classes[ci])
    return frozenset(gens)


def facet_report(
    sys: CoxeterSystem,
    arr: Arrangement,
    facet: Facet,
    k: int = 3,
    table_cache: TableCache | None = None,
    sides=SIDES,
) -> FacetReport:
    cache = table_cache or TableCache(sys)
    start = time.perf_counter()
    constancy, witnesses = check_facet_constancy(sys, facet, k, cache, sides)
    sup_ok = {
        side: check_sup_formula(sys, arr, facet, side, cache) for side in sides
    }
    partitions = {
        side: cells.partition_json(
            cache.partition(facet.representative, side), sys
        )["blocks"]
        for side in sides
    }
    return FacetReport(
        signs=facet.sign_text(),
        constancy_ok=constancy,
        sup_ok=sup_ok,
        partitions=partitions,
        witnesses=[[list(f) for f in pos.flag] for pos in witnesses],
        seconds=round(time.perf_counter() - start, 6),
    )


class BMinusViolation(Exception):
    """Distinguishes the two failure modes of the character check."""

    def __init__(self, kind: str, detail: str):
        super().__init__(f"{kind}: {detail}")
        self.kind = kind  # "union" (falsifies the cell statement) or "character"


def check_bminus(
    sys: CoxeterSystem,
    facet: Facet,
    chamber: Facet,
    side: str,
    table_cache: TableCache | None = None,
) -> bool:
    """Character decomposition of every facet cell into the adjacent
    chamber's cells.  Raises BMinusViolation("union", ...) when a facet
    cell is not a union of chamber cells (a failure of the cell
    statement, not of the character one)."""
    if side not in ("L", "R"):
        raise ValidationError("the character check runs for sides L and R")
    if not paramspace.closure_leq(facet, chamber):
        raise ValidationError("facet does not lie in the chamber's closure")
    cache = table_cache or TableCache(sys)
    facet_table = cache.table(facet.representative)
    chamber_table = cache.table(chamber.representative)
    facet_part = cache.partition(facet.representative, side)
    chamber_part = cache.partition(chamber.representative, side)
    classes = sys.conjugacy_classes()
    for block in facet_part.blocks:
        members = set(block)
        pieces = [b for b in chamber_part.blocks if set(b) <= members]
        covered = set().union(*map(set, pieces)) if pieces else set()
        if covered != members:
            raise BMinusViolation(
                "union",
                f"facet cell {sorted(members)} is not a union of chamber cells",
            )
        chi = cellrep.character(
            cellrep.cell_module(facet_table, facet_part, block), classes
        )
        total = None
        for piece in pieces:
            part_chi = cellrep.character(
                cellrep.cell_module(chamber_table, chamber_part, piece), classes
            )
            total = part_chi if total is None else total + part_chi
        if chi != total:
            return False
    return True


def _scan_worker(payload):
    """Fingerprint one slope in a separate process; the system is
    rebuilt from its descriptor and the disk cache is shared."""
    descriptor, element_cap, weights, cache_dir, side = payload
    from .coxeter import CoxeterSystem

    sys = CoxeterSystem(descriptor["generators"], descriptor["matrix"],
                        element_cap=element_cap)
    pos = PositiveSubset(2, (tuple(weights),))
    table = hecke.kl_table(hecke.specialize(sys, pos), cache_dir)
    return cells.partition_fingerprint(cells.cells_for_side(table, side), sys)


def scan_walls_rank2(
    sys: CoxeterSystem,
    max_denominator: int,
    table_cache: TableCache | None = None,
    side: str = "L",
    jobs: int = 1,
) -> WallReport:
    """Fingerprint the cell partition at every slope p/q (weights
    (q, p) on the name-ordered classes) with p, q up to the bound, plus
    the boundary weights (1, 0) and (0, 1).  A slope whose fingerprint
    differs from both grid neighbours is reported as a wall.

    The grid is closed under mediants of consecutive slopes (against
    0/1 and 1/0 at the ends), so every chamber that contains a grid
    point contains at least two; without that, a chamber sampled once
    would be indistinguishable from a wall.  A wall strictly between
    two grid slopes is invisible; the bound must exceed the numerator
    and denominator of the largest expected wall.
    """
    if sys.num_classes != 2:
        raise ValidationError("wall scans need exactly two generator classes")
    cache = table_cache or TableCache(sys)
    base = sorted(
        {
            Fraction(p, q)
            for p in range(1, max_denominator + 1)
            for q in range(1, max_denominator + 1)
        }
    )
    fenced = [Fraction(0, 1)] + base + [None]  # None stands for 1/0
    slopes = set(base)
    for a, b in zip(fenced, fenced[1:]):
        if b is None:
            slopes.add(Fraction(a.numerator + 1, a.denominator))
        else:
            slopes.add(
                Fraction(a.numerator + b.numerator, a.denominator + b.denominator)
            )
    grid: list[tuple[str, tuple[int, int]]] = [("0", (1, 0))]
    grid += [
        (str(slope), (slope.denominator, slope.numerator))
        for slope in sorted(slopes)
    ]
    grid.append(("inf", (0, 1)))

    fingerprints = {}
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        payloads = [
            (sys.descriptor(), sys.element_cap, weights, cache.cache_dir, side)
            for _, weights in grid
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for (label, _), fp in zip(grid, pool.map(_scan_worker, payloads)):
                fingerprints[label] = fp
    else:
        for label, weights in grid:
            pos = PositiveSubset(2, (weights,))
            fingerprints[label] = cells.partition_fingerprint(
                cache.partition(pos, side), sys
            )
    labels = [label for label, _ in grid]
    walls = []
    for i in range(1, len(labels) - 1):
        here = fingerprints[labels[i]]
        if here != fingerprints[labels[i - 1]] and here != fingerprints[labels[i + 1]]:
            walls.append(labels[i])
    return WallReport(slopes=labels, fingerprints=fingerprints, walls=walls)


@dataclass
class InvarianceReport:
    draws: int
    scaling_ok: bool = True
    flag_equivalence_ok: bool = True
    tau_ok: bool = True
    zero_class_ok: bool = True
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.scaling_ok
            and self.flag_equivalence_ok
            and self.tau_ok
            and self.zero_class_ok
        )


def _partition_from_raw_weights(sys, weights, rank, side):
    """Cells from an explicitly given exponent assignment, bypassing
    canonicalization (used to exercise the invariance statements on
    genuinely different parameter embeddings)."""
    carrier = PositiveSubset(sys.num_classes, ())
    ctx = hecke.HeckeContext(sys, carrier, rank, tuple(weights))
    return cells.cells_for_side(hecke.kl_table(ctx), side)


def check_invariances(
    sys: CoxeterSystem,
    samples: int = 20,
    seed: int = 0,
    table_cache: TableCache | None = None,
    sides=("L",),
) -> InvarianceReport:
    """Regression properties on random parameters: invariance of cells
    under positive scaling and equivalent flags (checked against raw,
    uncanonicalized embeddings), under every coordinate flip, and
    stability of cells under the parabolic of a zero class."""
    import random

    cache = table_cache or TableCache(sys)
    rng = random.Random(seed)
    d = sys.num_classes
    report = InvarianceReport(draws=samples)
    for trial in range(samples):
        form = tuple(rng.randint(-3, 3) for _ in range(d))
        if trial % 4 == 3 and d > 1:
            # force a zero class weight now and then
            idx = rng.randrange(d)
            form = tuple(0 if i == idx else x for i, x in enumerate(form))
        pos = PositiveSubset(d, (form,))
        ctx = hecke.specialize(sys, pos)
        for side in sides:
            base = cache.partition(pos, side)

            # positive scaling of the parameter group is strictly
            # increasing, so cells may not move
            scale = rng.randint(2, 5)
            scaled_weights = tuple(
                tuple(scale * x for x in w) for w in ctx.weights
            )
            scaled = _partition_from_raw_weights(sys, scaled_weights, ctx.rank, side)
            if scaled.blocks != base.blocks:
                report.scaling_ok = False
                report.failures.append(("scaling", form, side))

            # a redundant flag refinement defines the same positive
            # subset; compare against its raw rank-2 embedding
            if any(form):
                extra = tuple(rng.randint(-2, 2) for _ in range(d))
                refined = PositiveSubset(d, (form, extra))
                raw_weights = []
                for s in range(len(sys.generators)):
                    ci = sys.generator_class[s]
                    basis = tuple(1 if j == ci else 0 for j in range(d))
                    raw_weights.append(
                        (
                            sum(a * b for a, b in zip(form, basis)),
                            sum(a * b for a, b in zip(extra, basis)),
                        )
                    )
                raw = _partition_from_raw_weights(sys, tuple(raw_weights), 2, side)
                if raw.blocks != cache.partition(refined, side).blocks:
                    report.flag_equivalence_ok = False
                    report.failures.append(("flag", form, extra, side))

            for omega in range(d):
                flipped = pos.tau_flip(omega)
                if cache.partition(flipped, side).blocks != base.blocks:
                    report.tau_ok = False
                    report.failures.append(("tau", form, omega, side))

            for omega in range(d):
                weight = pos.embed(
                    tuple(1 if i == omega else 0 for i in range(d))
                )
                if any(weight):
                    continue
                gens = [sys.generators[i] for i in sys.classes[omega]]
                parabolic = sys.parabolic_elements(gens)
                blocks = {wid: bi for bi, b in enumerate(base.blocks) for wid in b}
                for block in base.blocks:
                    for wid in block:
                        for h in parabolic:
                            moved = (
                                sys.multiply(h, sys.elements[wid])
                                if side in ("L", "LR")
                                else sys.multiply(sys.elements[wid], h)
                            )
                            if blocks[moved.id] != blocks[wid]:
                                report.zero_class_ok = False
                                report.failures.append(
                                    ("zero-class", form, omega, side)
                                )
    return report
