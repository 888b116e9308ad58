"""Takagi factorization of complex symmetric matrices."""

import numpy as np


def takagi(m, tol: float = 1e-10):
    """Factor a complex symmetric ``m`` as ``u @ diag(sigma) @ u.T``.

    Uses the real symmetric embedding ``B = [[Re m, Im m], [Im m, -Re m]]``:
    ``[x; y]`` is an eigenvector of ``B`` with eigenvalue ``s`` exactly when
    ``m @ conj(x + i y) = s (x + i y)``.  The spectrum of ``B`` is ``+-sigma``
    so the top half of its eigenvectors gives the Takagi vectors.  Repeated
    singular values need no special treatment; the null space is handled
    separately because there the ``+`` and ``-`` halves mix.

    Args:
        m: complex symmetric matrix.
        tol: allowed Frobenius norm of ``m - m.T``.

    Returns:
        ``(u, sigma)`` with ``u`` unitary and ``sigma`` sorted descending.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if np.linalg.norm(m - m.T) > tol:
        raise ValueError("matrix is not symmetric")
    d = m.shape[0]
    m = (m + m.T) / 2
    b = np.block([[m.real, m.imag], [m.imag, -m.real]])
    evals, evecs = np.linalg.eigh(b)
    evals, evecs = evals[::-1], evecs[:, ::-1]

    scale = max(np.linalg.norm(m, 2), 1.0)
    n_pos = int(np.sum(evals[:d] > 1e-13 * scale * d))
    u = evecs[:d, :n_pos] + 1j * evecs[d:, :n_pos]
    sigma = np.zeros(d)
    sigma[:n_pos] = evals[:n_pos]

    # vectors with sigma near zero pick up a component of their -sigma
    # partner; re-orthonormalize (the change is O(eps / sigma) and only
    # multiplies sigma in the reconstruction)
    u, r = np.linalg.qr(u)
    u = u * np.sign(np.diag(r).real)

    if n_pos < d:
        # numerically zero singular values: any orthonormal basis of the
        # complement of the range works
        q, _ = np.linalg.qr(np.hstack([u, np.eye(d)]))
        u = np.hstack([u, q[:, n_pos:d]])
    return u, sigma
