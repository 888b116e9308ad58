"""Orthonormal bases of the Hermitian and skew-Hermitian anti-linear spaces.

The canonical form is positive definite on Hermitian anti-linear operators
and negative definite on skew ones, so the natural bases below have Gram
matrix ``+I`` and ``-I`` respectively.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .core import AntiLinearOp, DimensionError, canonical_form, rank_one_c

Parity = Literal["plus", "minus"]


@dataclass(frozen=True)
class OperatorBasis:
    dim: int
    parity: Parity
    ops: tuple[AntiLinearOp, ...]

    def __len__(self):
        return len(self.ops)


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def max_offdiag(self) -> float:
        if self.size < 2:
            return 0.0
        off = self.entries - np.diag(np.diag(self.entries))
        return float(np.max(np.abs(off)))


def _check_d(d) -> int:
    if int(d) != d or d < 1:
        raise DimensionError(f"dimension must be a positive integer, got {d}")
    return int(d)


def _e(d: int, j: int) -> np.ndarray:
    v = np.zeros(d)
    v[j] = 1.0
    return v


def _pairs(d: int):
    # lexicographic in (j, k) with k < j
    for j in range(d):
        for k in range(j):
            yield j, k


def basis_plus(d: int) -> OperatorBasis:
    """Orthonormal basis of the Hermitian anti-linear operators on C^d.

    Diagonal rank-one operators first, then symmetrized pairs ``(j, k)``
    with ``k < j`` in lexicographic order.
    """
    d = _check_d(d)
    ops = [rank_one_c(_e(d, j), _e(d, j)) for j in range(d)]
    for j, k in _pairs(d):
        m = rank_one_c(_e(d, j), _e(d, k)).mat + rank_one_c(_e(d, k), _e(d, j)).mat
        ops.append(AntiLinearOp(m / np.sqrt(2)))
    return OperatorBasis(d, "plus", tuple(ops))


def basis_minus(d: int) -> OperatorBasis:
    """Basis of the skew anti-linear operators on C^d, Gram matrix ``-I``."""
    d = _check_d(d)
    ops = []
    for j, k in _pairs(d):
        m = rank_one_c(_e(d, j), _e(d, k)).mat - rank_one_c(_e(d, k), _e(d, j)).mat
        ops.append(AntiLinearOp(m / np.sqrt(2)))
    return OperatorBasis(d, "minus", tuple(ops))


def stack(ops: Sequence[AntiLinearOp]) -> np.ndarray:
    """Matrices of ``ops`` as a ``(k, d, d)`` array."""
    if len(ops) == 0:
        raise ValueError("empty operator list")
    dims = {op.dim for op in ops}
    if len(dims) != 1:
        raise DimensionError(f"operators act on spaces of different dimension: {sorted(dims)}")
    return np.stack([op.mat for op in ops])


def gram_of_stack(mats: np.ndarray) -> np.ndarray:
    # G[a, b] = Tr(M_b conj(M_a)) = sum_ij conj(M_a)_ji (M_b)_ij
    return np.einsum("aji,bij->ab", np.conj(mats), mats)


def gram(ops: Sequence[AntiLinearOp]) -> GramMatrix:
    """Pairwise canonical-form table ``G[a, b] = (ops[a], ops[b])``."""
    return GramMatrix(gram_of_stack(stack(ops)))


def space_dims(d: int) -> tuple[int, int]:
    """Dimensions of the Hermitian and skew anti-linear spaces on C^d."""
    d = _check_d(d)
    return d * (d + 1) // 2, d * (d - 1) // 2


def signature(d: int) -> int:
    n_plus, n_minus = space_dims(d)
    return n_plus - n_minus


def expand(op: AntiLinearOp) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of ``op`` over ``basis_plus`` and ``basis_minus``.

    The minus basis has norm -1, so its coefficients carry a sign:
    ``op = sum c_j b_j`` with ``c_j = (b_j, op)`` on the plus side and
    ``c_j = -(b_j, op)`` on the minus side.
    """
    plus, minus = basis_plus(op.dim), basis_minus(op.dim)
    cp = np.array([canonical_form(b, op) for b in plus.ops], dtype=complex)
    cm = np.array([-canonical_form(b, op) for b in minus.ops], dtype=complex)
    return cp, cm


def reconstruct(d: int, plus_coeffs, minus_coeffs) -> AntiLinearOp:
    plus, minus = basis_plus(d), basis_minus(d)
    m = np.zeros((d, d), dtype=complex)
    for c, b in zip(plus_coeffs, plus.ops):
        m += c * b.mat
    for c, b in zip(minus_coeffs, minus.ops):
        m += c * b.mat
    return AntiLinearOp(m)
