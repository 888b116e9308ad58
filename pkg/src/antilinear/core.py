"""Anti-linear operators on C^d and their algebra.

An anti-linear operator is stored as a d x d complex matrix ``M`` acting by
``phi -> M @ conj(phi)``.  With this representation the Wigner adjoint is the
plain transpose and the product of two anti-linear operators is the linear
operator ``M2 @ conj(M1)``.

The scalar product is conjugate-linear in its first slot,
``<x, y> = sum(conj(x) * y)``, i.e. ``np.vdot(x, y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np

DEFAULT_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when operator or vector dimensions do not fit together."""


def _as_square(mat, dim: int | None = None) -> np.ndarray:
    arr = np.array(mat, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"matrix side {arr.shape[0]} does not match dim {dim}")
    if arr.shape[0] < 1:
        raise DimensionError("dimension must be positive")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    arr.setflags(write=False)
    return arr


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")


@dataclass(frozen=True, eq=False)
class AntiLinearOp:
    """Anti-linear operator ``phi -> mat @ conj(phi)``."""

    mat: np.ndarray

    # keeps numpy scalars from broadcasting over the operator in c * op
    __array_ufunc__ = None

    def __post_init__(self):
        object.__setattr__(self, "mat", _as_square(self.mat))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __call__(self, phi):
        return apply(self, phi)

    def __add__(self, other):
        if not isinstance(other, AntiLinearOp):
            return NotImplemented
        _same_dim(self, other)
        return AntiLinearOp(self.mat + other.mat)

    def __sub__(self, other):
        if not isinstance(other, AntiLinearOp):
            return NotImplemented
        _same_dim(self, other)
        return AntiLinearOp(self.mat - other.mat)

    def __neg__(self):
        return AntiLinearOp(-self.mat)

    def __rmul__(self, c):
        # c * theta is the operator phi -> c * theta(phi)
        if not isinstance(c, Number):
            return NotImplemented
        return scale(c, self)

    def __repr__(self):
        return f"AntiLinearOp(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class LinearOp:
    """Ordinary linear operator ``phi -> mat @ phi``."""

    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", _as_square(self.mat))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "LinearOp":
        return cls(np.eye(dim))

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def __call__(self, phi):
        return self.mat @ _as_vector(phi, self.dim)

    def __repr__(self):
        return f"LinearOp(dim={self.dim})"


@dataclass(frozen=True)
class NumericalRangeEstimate:
    """Sampled values of ``<phi, theta phi>`` over unit vectors.

    ``phase_residual`` is the worst deviation seen when checking that the
    value at ``exp(i t) phi`` equals ``exp(-2 i t)`` times the value at phi.
    """

    samples: np.ndarray
    radius_estimate: float
    phase_residual: float


def _same_dim(*ops) -> int:
    dims = {op.dim for op in ops}
    if len(dims) != 1:
        raise DimensionError(f"operators act on spaces of different dimension: {sorted(dims)}")
    return dims.pop()


def _as_vector(phi, dim: int) -> np.ndarray:
    v = np.asarray(phi, dtype=np.complex128)
    if v.shape != (dim,):
        raise DimensionError(f"expected a vector of length {dim}, got shape {v.shape}")
    return v


def inner(x, y) -> complex:
    """Scalar product, conjugate-linear in ``x``."""
    return complex(np.vdot(x, y))


def make_op(dim: int, mat) -> AntiLinearOp:
    """Build the anti-linear operator ``phi -> mat @ conj(phi)`` on C^dim."""
    if int(dim) != dim or dim < 1:
        raise DimensionError(f"dim must be a positive integer, got {dim}")
    return AntiLinearOp(_as_square(mat, int(dim)))


def conjugation_k(dim: int) -> AntiLinearOp:
    """Componentwise complex conjugation on C^dim."""
    return make_op(dim, np.eye(dim))


def apply(op: AntiLinearOp, phi) -> np.ndarray:
    return op.mat @ np.conj(_as_vector(phi, op.dim))


def adjoint(op: AntiLinearOp) -> AntiLinearOp:
    """Wigner adjoint: ``<x, adj(op) y> == <y, op x>``.

    In this representation it is the transpose, so taking adjoints is a
    complex *linear* operation.
    """
    return AntiLinearOp(op.mat.T)


def scale(c: complex, op: AntiLinearOp) -> AntiLinearOp:
    return AntiLinearOp(complex(c) * op.mat)


def compose_aa(theta2: AntiLinearOp, theta1: AntiLinearOp) -> LinearOp:
    """The linear operator ``theta2 o theta1``."""
    _same_dim(theta2, theta1)
    return LinearOp(theta2.mat @ np.conj(theta1.mat))


def compose_al(theta: AntiLinearOp, a: LinearOp) -> AntiLinearOp:
    """The anti-linear operator ``theta o a``."""
    _same_dim(theta, a)
    return AntiLinearOp(theta.mat @ np.conj(a.mat))


def compose_la(a: LinearOp, theta: AntiLinearOp) -> AntiLinearOp:
    """The anti-linear operator ``a o theta``."""
    _same_dim(a, theta)
    return AntiLinearOp(a.mat @ theta.mat)


def hermitian_part(op: AntiLinearOp) -> AntiLinearOp:
    return AntiLinearOp((op.mat + op.mat.T) / 2)


def skew_part(op: AntiLinearOp) -> AntiLinearOp:
    return AntiLinearOp((op.mat - op.mat.T) / 2)


def rank_one_c(phi_prime, phi_dblprime) -> AntiLinearOp:
    """Anti-linear rank-one operator ``phi -> <phi, phi''> phi'``."""
    a = np.asarray(phi_prime, dtype=np.complex128)
    b = np.asarray(phi_dblprime, dtype=np.complex128)
    if a.ndim != 1 or a.shape != b.shape:
        raise DimensionError(f"vector shapes differ: {a.shape} vs {b.shape}")
    return AntiLinearOp(np.outer(a, b))


def canonical_form(theta1: AntiLinearOp, theta2: AntiLinearOp) -> complex:
    """Canonical Hermitian form ``Tr(theta2 theta1) = Tr(M2 conj(M1))``."""
    _same_dim(theta1, theta2)
    # Tr(M2 conj(M1)) = sum_ij M2_ij conj(M1_ji)
    return complex(np.vdot(theta1.mat.T, theta2.mat))


def hermitian_residual(op: AntiLinearOp) -> float:
    return float(np.linalg.norm(op.mat - op.mat.T))


def skew_residual(op: AntiLinearOp) -> float:
    return float(np.linalg.norm(op.mat + op.mat.T))


def unitarity_residual(op: AntiLinearOp) -> float:
    return float(np.linalg.norm(op.mat @ op.mat.conj().T - np.eye(op.dim)))


def is_hermitian(op: AntiLinearOp, tol: float = DEFAULT_TOL) -> bool:
    _check_tol(tol)
    return hermitian_residual(op) <= tol


def is_skew(op: AntiLinearOp, tol: float = DEFAULT_TOL) -> bool:
    _check_tol(tol)
    return skew_residual(op) <= tol


def is_antiunitary(op: AntiLinearOp, tol: float = DEFAULT_TOL) -> bool:
    _check_tol(tol)
    return unitarity_residual(op) <= tol


def is_conjugation(op: AntiLinearOp, tol: float = DEFAULT_TOL) -> bool:
    return is_hermitian(op, tol) and is_antiunitary(op, tol)


def is_skew_conjugation(op: AntiLinearOp, tol: float = DEFAULT_TOL) -> bool:
    return is_skew(op, tol) and is_antiunitary(op, tol)


def random_unit_vectors(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` unit vectors as rows, Gaussian-then-normalize."""
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_op(dim: int, rng: np.random.Generator) -> AntiLinearOp:
    """Anti-linear operator with i.i.d. complex Gaussian matrix entries."""
    return AntiLinearOp(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))


def _expectations(op: AntiLinearOp, phis: np.ndarray) -> np.ndarray:
    # <phi, M conj(phi)> for each row phi
    images = np.conj(phis) @ op.mat.T
    return np.einsum("ni,ni->n", np.conj(phis), images)


def numerical_range_samples(op: AntiLinearOp, n: int, seed=None,
                            n_phases: int = 16) -> NumericalRangeEstimate:
    """Sample ``<phi, op phi>`` over ``n`` random unit vectors.

    Every sample is also re-evaluated at ``exp(i t) phi`` for ``t = k pi / 8``
    (by default) and compared with ``exp(-2 i t)`` times the original value;
    the worst deviation is reported as ``phase_residual``.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"need at least one sample, got n={n}")
    rng = np.random.default_rng(seed)
    phis = random_unit_vectors(op.dim, int(n), rng)
    values = _expectations(op, phis)
    residual = 0.0
    for t in np.arange(n_phases) * np.pi / 8:
        rotated = _expectations(op, np.exp(1j * t) * phis)
        residual = max(residual, float(np.max(np.abs(rotated - np.exp(-2j * t) * values))))
    return NumericalRangeEstimate(samples=values,
                                  radius_estimate=float(np.max(np.abs(values))),
                                  phase_residual=residual)
