"""Alternating k-cut partitions and choice predicates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .backend import kernels
from .errors import ContractError
from .valuations import Density, Piece, piece, value_of

ENVY_TOL = 1e-12


def cut_vector(cuts, k: Optional[int] = None) -> tuple:
    """Validate a sorted tuple of cut points; duplicates are allowed."""
    out = tuple(float(c) for c in cuts)
    if k is not None and len(out) != k:
        raise ContractError(f"expected {k} cuts, got {len(out)}")
    prev = 0.0
    for c in out:
        if c < prev:
            raise ContractError(f"cuts not sorted ascending: {out}")
        prev = c
    if out and out[-1] > 1.0:
        raise ContractError(f"cut beyond the end of the cake: {out}")
    if out and out[0] < 0.0:
        raise ContractError(f"cut before the start of the cake: {out}")
    return out


@dataclass(frozen=True)
class Allocation:
    piece_one: Piece
    piece_two: Piece
    chosen_by_bob: Optional[int] = None

    def chosen_piece(self) -> Piece:
        if self.chosen_by_bob is None:
            raise ContractError("no choice recorded on this allocation")
        return self.piece_one if self.chosen_by_bob == 1 else self.piece_two

    def other_piece(self) -> Piece:
        if self.chosen_by_bob is None:
            raise ContractError("no choice recorded on this allocation")
        return self.piece_two if self.chosen_by_bob == 1 else self.piece_one

    def with_choice(self, index: int) -> "Allocation":
        if index not in (1, 2):
            raise ContractError("choice index must be 1 or 2")
        return Allocation(self.piece_one, self.piece_two, index)


def alternating_partition(cuts) -> tuple:
    """Pieces (even-index intervals, odd-index intervals) for sorted cuts.

    With cut points c_1..c_k and sentinels c_0=0, c_{k+1}=1, piece one
    collects [c_j, c_{j+1}) for even j and piece two the rest. Duplicate
    cuts create empty intervals that vanish in normalization, which is
    how a strategy plays fewer than k effective cuts.
    """
    cuts = cut_vector(cuts)
    points = (0.0,) + cuts + (1.0,)
    one = []
    two = []
    for j in range(len(points) - 1):
        iv = (points[j], points[j + 1])
        (one if j % 2 == 0 else two).append(iv)
    return piece(*one), piece(*two)


def allocation_from_cuts(cuts) -> Allocation:
    p1, p2 = alternating_partition(cuts)
    return Allocation(p1, p2)


def piece_values_for_cuts(d: Density, cuts) -> tuple:
    """(piece one, piece two) masses without building Piece objects."""
    return kernels.alternating_values(d.breaks, d.vals, d.cum, cuts)


def bob_preferred(vB: Density, alloc: Allocation, tie_favors: Piece) -> int:
    """Index of the piece a myopic responder takes; ties go to tie_favors."""
    v1 = value_of(vB, alloc.piece_one)
    v2 = value_of(vB, alloc.piece_two)
    if v1 > v2:
        return 1
    if v2 > v1:
        return 2
    if tie_favors == alloc.piece_one:
        return 1
    if tie_favors == alloc.piece_two:
        return 2
    raise ContractError("tie_favors is not a piece of this allocation")


def alice_tie_piece(vA: Density, alloc: Allocation) -> Piece:
    """The piece Alice prefers Bob to take: her lower-valued one.

    On a full tie piece two is used, matching the kernel scan convention.
    """
    v1 = value_of(vA, alloc.piece_one)
    v2 = value_of(vA, alloc.piece_two)
    return alloc.piece_one if v1 < v2 else alloc.piece_two


def is_envy_free(alloc: Allocation, vA: Density, vB: Density) -> bool:
    """Each player's own piece worth at least 1/2 (Bob chose; Alice has the rest)."""
    if alloc.chosen_by_bob is None:
        raise ContractError("allocation has no recorded choice")
    bob_piece = alloc.chosen_piece()
    alice_piece = alloc.other_piece()
    return (
        value_of(vB, bob_piece) >= 0.5 - ENVY_TOL
        and value_of(vA, alice_piece) >= 0.5 - ENVY_TOL
    )
