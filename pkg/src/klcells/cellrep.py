"""Cell modules over the integral group algebra and their characters.

A cell C of the canonical-basis preorder spans a subquotient of the
Hecke algebra with basis the images of (C_w), w in C.  Specializing
e^g -> 1 (the total coefficient sum) turns that subquotient into a
ZW-module: the matrix of a generator s on the basis records the
coefficients of T_s * C_w (or C_w * T_s on the right side) at cell
members, everything outside the cell being killed by the quotient.

The generator matrices must satisfy the full Coxeter presentation
(order 2 and braid relations); that they do certifies the
specialization really lands in the group algebra.  Characters are exact
integer traces of matrix products along conjugacy-class
representatives; no character-table lookup is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cells import CellPartition, cells_for_side
from .coxeter import Element
from .errors import ValidationError
from .hecke import KLTable


@dataclass
class CellModule:
    """Basis = cell members in id (ShortLex) order; one integer matrix
    per generator, columns giving the images of the basis vectors."""

    table: KLTable
    side: str
    cell: tuple[int, ...]
    matrices: tuple[np.ndarray, ...]

    @property
    def dimension(self) -> int:
        return len(self.cell)

    def action(self, w: Element) -> np.ndarray:
        """Matrix of the group element acting on the module."""
        n = self.dimension
        out = np.identity(n, dtype=object)
        letters = w.word if self.side == "L" else tuple(reversed(w.word))
        for s in letters:
            out = out @ self.matrices[s]
        return out

    def satisfies_presentation(self) -> bool:
        """Exact check of s^2 = 1 and all braid relations."""
        sys = self.table.ctx.sys
        n = self.dimension
        ident = np.identity(n, dtype=object)
        mats = self.matrices
        for a in mats:
            if not np.array_equal(a @ a, ident):
                return False
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                m = sys.matrix[i][j]
                left = ident.copy()
                right = ident.copy()
                for k in range(m):
                    left = left @ (mats[i] if k % 2 == 0 else mats[j])
                    right = right @ (mats[j] if k % 2 == 0 else mats[i])
                if not np.array_equal(left, right):
                    return False
        return True


@dataclass(frozen=True)
class Character:
    """Integer class function, keyed by conjugacy-class representative id."""

    values: tuple[tuple[int, int], ...]  # (representative id, value)

    def value_at(self, rep_id: int) -> int:
        for rid, val in self.values:
            if rid == rep_id:
                return val
        raise ValidationError(f"no class with representative id {rep_id}")

    def dimension(self) -> int:
        return self.value_at(0)

    def __add__(self, other: "Character") -> "Character":
        if [r for r, _ in self.values] != [r for r, _ in other.values]:
            raise ValidationError("characters on different class systems")
        return Character(
            tuple((r, a + b) for (r, a), (_, b) in zip(self.values, other.values))
        )


def cell_module(table: KLTable, partition: CellPartition, block) -> CellModule:
    """Module of one cell of a left or right partition."""
    side = partition.side
    if side not in ("L", "R"):
        raise ValidationError("cell modules are built for sides L and R only")
    cell = tuple(sorted(block))
    if cell not in partition.blocks:
        raise ValidationError("block is not a cell of the partition")
    sys = table.ctx.sys
    index = {wid: i for i, wid in enumerate(cell)}
    products = table.c_products()
    inv = sys._inverse
    n = len(cell)
    matrices = []
    for s in range(len(sys.generators)):
        mat = np.zeros((n, n), dtype=object)
        for j, wid in enumerate(cell):
            if side == "L":
                expansion = products[s][wid]
                for x, poly in expansion.items():
                    i = index.get(x)
                    if i is not None:
                        mat[i, j] = sum(poly.values())
            else:
                # coefficient of C_x in C_w T_s equals the coefficient of
                # C_{x^{-1}} in T_s C_{w^{-1}}
                expansion = products[s][inv[wid]]
                for x, poly in expansion.items():
                    i = index.get(inv[x])
                    if i is not None:
                        mat[i, j] = sum(poly.values())
        matrices.append(mat)
    return CellModule(table, side, cell, tuple(matrices))


def character(module: CellModule, classes) -> Character:
    """Trace of the module action at each conjugacy-class
    representative (the least member of each class)."""
    values = []
    for orbit in classes:
        rep = orbit[0]
        values.append((rep.id, int(np.trace(module.action(rep)))))
    return Character(tuple(values))


def sign_twist_check(
    table_pos: KLTable,
    table_flipped: KLTable,
    partition: CellPartition,
    block,
    flipped_class: int,
) -> bool:
    """Character identity under negating one class weight: the flipped
    character must equal the original twisted by (-1)^{l_omega}."""
    sys = table_pos.ctx.sys
    if sys is not table_flipped.ctx.sys:
        raise ValidationError("tables must come from the same group")
    flipped_partition = cells_for_side(table_flipped, partition.side)
    if tuple(sorted(block)) not in flipped_partition.blocks:
        raise ValidationError(
            "partitions of the two parameters disagree on the given block"
        )
    classes = sys.conjugacy_classes()
    chi = character(cell_module(table_pos, partition, block), classes)
    chi_flipped = character(cell_module(table_flipped, partition, block), classes)
    for orbit in classes:
        rep = orbit[0]
        gamma = -1 if rep.length_vector[flipped_class] % 2 else 1
        if chi_flipped.value_at(rep.id) != gamma * chi.value_at(rep.id):
            return False
    return True
