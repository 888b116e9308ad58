"""Explicit sets of mutually orthogonal (skew) conjugations.

``max_sets`` reaches the upper bound ``d(d+1)/2`` / ``d(d-1)/2`` for every
power of two by tensoring copies of the d=2 quadruple.  ``fourier_set`` is a
size-d baseline that works for any d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .core import AntiLinearOp, DimensionError
from .structure import space_dims

Kind = Literal["conjugation", "skew"]
KINDS = ("conjugation", "skew")


class BoundError(ValueError):
    """A request exceeds the maximal possible size of an orthogonal set."""


def check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


def bound(d: int, kind: Kind) -> int:
    """Upper bound on the number of orthogonal (skew) conjugations on C^d."""
    n_plus, n_minus = space_dims(d)
    return n_plus if check_kind(kind) == "conjugation" else n_minus


@dataclass(frozen=True)
class OrthoSet:
    """Operators claimed to be mutually orthogonal (skew) conjugations.

    Only shape, kind and the size bound are enforced here.  Use
    :func:`antilinear.search.verify_set` for a numerical certificate.
    """

    dim: int
    kind: Kind
    ops: tuple[AntiLinearOp, ...]
    meta: str = ""

    def __post_init__(self):
        check_kind(self.kind)
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            if op.dim != self.dim:
                raise DimensionError(f"operator of dim {op.dim} in a set of dim {self.dim}")
        limit = bound(self.dim, self.kind)
        if len(self.ops) > limit:
            raise BoundError(f"{len(self.ops)} operators exceed the bound {limit} "
                             f"for kind={self.kind}, d={self.dim}")

    def __len__(self):
        return len(self.ops)

    @property
    def bound_achieved(self) -> bool:
        return len(self.ops) == bound(self.dim, self.kind)


TAU0 = np.array([[0, -1], [1, 0]], dtype=complex)
TAU1 = np.diag([-1, 1]).astype(complex)
TAU2 = 1j * np.eye(2)
TAU3 = np.array([[0, 1], [1, 0]], dtype=complex)

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]])
SIGMA3 = np.diag([1, -1]).astype(complex)


def tau_set() -> tuple[OrthoSet, OrthoSet]:
    """The three orthogonal conjugations tau1..tau3 and the skew tau0 on C^2.

    Basis images: tau0 e1 = e2, tau0 e2 = -e1; tau1 = diag(-1, 1);
    tau2 = i * identity; tau3 swaps e1 and e2.
    """
    conj = OrthoSet(2, "conjugation", tuple(AntiLinearOp(m) for m in (TAU1, TAU2, TAU3)), "tau2")
    skew = OrthoSet(2, "skew", (AntiLinearOp(TAU0),), "tau2")
    return conj, skew


def tensor(theta1: AntiLinearOp, theta2: AntiLinearOp) -> AntiLinearOp:
    """``theta1 (x) theta2``; the left factor is the slow Kronecker index."""
    return AntiLinearOp(np.kron(theta1.mat, theta2.mat))


def _products(left: Sequence[AntiLinearOp], right: Sequence[AntiLinearOp]):
    return [tensor(a, b) for a in left for b in right]


def combine_sets(c1: OrthoSet, s1: OrthoSet, c2: OrthoSet,
                 s2: OrthoSet) -> tuple[OrthoSet, OrthoSet]:
    """Orthogonal sets on C^(d1 d2) from sets on C^d1 and C^d2.

    conj = c1 (x) c2  +  s1 (x) s2,   skew = c1 (x) s2  +  s1 (x) c2
    """
    for s, kind in ((c1, "conjugation"), (s1, "skew"), (c2, "conjugation"), (s2, "skew")):
        if s.kind != kind:
            raise ValueError(f"expected a {kind} set, got kind={s.kind}")
    if c1.dim != s1.dim or c2.dim != s2.dim:
        raise DimensionError("each factor's conjugation and skew sets must share a dimension")
    d = c1.dim * c2.dim
    tag = f"tensor({c1.dim},{c2.dim})"
    conj = OrthoSet(d, "conjugation", _products(c1.ops, c2.ops) + _products(s1.ops, s2.ops), tag)
    skew = OrthoSet(d, "skew", _products(c1.ops, s2.ops) + _products(s1.ops, c2.ops), tag)
    return conj, skew


def is_power_of_two(d: int) -> bool:
    return int(d) == d and d >= 1 and (int(d) & (int(d) - 1)) == 0


def max_sets(d: int) -> tuple[OrthoSet, OrthoSet]:
    """Maximal orthogonal conjugation and skew-conjugation sets for d = 2**n."""
    if not is_power_of_two(d):
        raise BoundError(f"d={d} is not a power of two; no explicit maximal construction "
                         "is known, use antilinear.search instead")
    if d == 1:
        return (OrthoSet(1, "conjugation", (AntiLinearOp([[1]]),), "trivial(1)"),
                OrthoSet(1, "skew", (), "trivial(1)"))
    tau_c, tau_s = tau_set()
    conj, skew = tau_c, tau_s
    while conj.dim < d:
        conj, skew = combine_sets(conj, skew, tau_c, tau_s)
    return conj, skew


def fourier_set(d: int) -> OrthoSet:
    """d orthogonal conjugations ``diag(w**(j k))``, ``w = exp(2 pi i / d)``.

    Not maximal for d > 1; a baseline for dimensions outside the
    power-of-two family.
    """
    if int(d) != d or d < 1:
        raise DimensionError(f"dimension must be a positive integer, got {d}")
    d = int(d)
    j = np.arange(d)
    ops = [AntiLinearOp(np.diag(np.exp(2j * np.pi * ((j * k) % d) / d))) for k in range(d)]
    return OrthoSet(d, "conjugation", tuple(ops), f"fourier({d})")
