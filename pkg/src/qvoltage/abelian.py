"""Finite abelian groups as products of cyclic factors, and their duals.

Elements of ``G`` and characters of ``Ĝ`` share one representation: a tuple of
residues ``(r_1, ..., r_k)`` with ``0 <= r_j < n_j``.  The pairing is
``χ(g) = exp(2πi Σ_j χ_j g_j / n_j)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import StructureError

Residues = tuple[int, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    cyclic_orders: tuple[int, ...]

    def __init__(self, cyclic_orders: Iterable[int]):
        orders = tuple(int(n) for n in cyclic_orders)
        if any(n < 1 for n in orders):
            raise StructureError(f"cyclic orders must be positive, got {orders}")
        object.__setattr__(self, "cyclic_orders", orders)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteAbelianGroup":
        return cls([n])

    @property
    def order(self) -> int:
        return int(np.prod(self.cyclic_orders, dtype=np.int64)) if self.cyclic_orders else 1

    def __len__(self) -> int:
        return self.order

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @cached_property
    def elements(self) -> tuple[Residues, ...]:
        # lexicographic on residue vectors, identity first
        return tuple(itertools.product(*(range(n) for n in self.cyclic_orders)))

    @cached_property
    def _index(self) -> dict[Residues, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def enumerate(self) -> list[Residues]:
        return list(self.elements)

    def enumerate_dual(self) -> list[Residues]:
        return list(self.elements)

    @property
    def identity(self) -> Residues:
        return tuple(0 for _ in self.cyclic_orders)

    trivial_character = identity

    def generators(self) -> list[Residues]:
        """Unit residue vectors, one per cyclic factor."""
        gens = []
        for j in range(self.rank):
            gens.append(tuple(1 if i == j else 0 for i in range(self.rank)))
        return gens

    def reduce(self, g: Sequence[int]) -> Residues:
        if len(g) != self.rank:
            raise StructureError(
                f"residue vector {list(g)} does not match factor shape {list(self.cyclic_orders)}"
            )
        return tuple(int(r) % n for r, n in zip(g, self.cyclic_orders))

    def index(self, g: Sequence[int]) -> int:
        return self._index[self.reduce(g)]

    def op(self, g: Sequence[int], h: Sequence[int]) -> Residues:
        return self.reduce([a + b for a, b in zip(self.reduce(g), self.reduce(h))])

    def inverse(self, g: Sequence[int]) -> Residues:
        return tuple((n - r) % n for r, n in zip(self.reduce(g), self.cyclic_orders))

    def power(self, g: Sequence[int], k: int) -> Residues:
        return self.reduce([k * r for r in self.reduce(g)])

    def pairing(self, chi: Sequence[int], g: Sequence[int]) -> complex:
        chi, g = self.reduce(chi), self.reduce(g)
        phase = sum(c * r / n for c, r, n in zip(chi, g, self.cyclic_orders))
        return complex(np.exp(2j * np.pi * phase))

    @cached_property
    def character_table(self) -> np.ndarray:
        """``table[a, b] = χ_a(g_b)`` in enumeration order."""
        els = self.elements
        table = np.array([[self.pairing(c, g) for g in els] for c in els], dtype=complex)
        table.setflags(write=False)
        return table

    @cached_property
    def mult_table(self) -> np.ndarray:
        els = self.elements
        table = np.array([[self.index(self.op(a, b)) for b in els] for a in els], dtype=int)
        table.setflags(write=False)
        return table

    @cached_property
    def inverse_index(self) -> np.ndarray:
        inv = np.array([self.index(self.inverse(g)) for g in self.elements], dtype=int)
        inv.setflags(write=False)
        return inv

    def orthogonality_sum(self, chi: Sequence[int], xi: Sequence[int]) -> complex:
        return complex(sum(self.pairing(chi, g) * np.conj(self.pairing(xi, g)) for g in self.elements))

    def to_json(self) -> dict:
        return {"cyclic_orders": list(self.cyclic_orders)}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteAbelianGroup":
        try:
            return cls(data["cyclic_orders"])
        except (KeyError, TypeError) as exc:
            raise StructureError(f"group spec needs 'cyclic_orders': {data!r}") from exc

    def __repr__(self) -> str:
        if not self.cyclic_orders:
            return "Z1"
        return "x".join(f"Z{n}" for n in self.cyclic_orders)


def pairing(group: FiniteAbelianGroup, chi: Sequence[int], g: Sequence[int]) -> complex:
    return group.pairing(chi, g)


def orthogonality_sum(group: FiniteAbelianGroup, chi: Sequence[int], xi: Sequence[int]) -> complex:
    return group.orthogonality_sum(chi, xi)
