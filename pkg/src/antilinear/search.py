"""Numerical search for large orthogonal sets of (skew) conjugations.

A conjugation is a symmetric unitary ``M = V V^T`` and a skew conjugation an
antisymmetric unitary ``M = V J V^T`` (``J`` block-diagonal copies of
``[[0, 1], [-1, 0]]``), with ``V`` unitary.  Each member of a candidate set is
parameterized as ``V = B exp(i H)`` with ``H`` Hermitian and ``B`` the current
base point, so every iterate is exactly on the manifold.  After each accepted
step the base is moved to the new point and ``H`` reset to zero.

The objective is the normalized pairwise overlap

    L = sum_{a<b} |(M_a, M_b)|^2 / d^2

which vanishes exactly for mutually orthogonal sets.  A search failure is only
"no witness found within budget"; it never proves nonexistence.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from .construct import BoundError, Kind, OrthoSet, bound, check_kind
from .core import (AntiLinearOp, hermitian_residual, skew_residual,
                   unitarity_residual)
from .io import OperatorSetFile, matrices_to_ops
from .structure import GramMatrix, gram_of_stack, stack
from .takagi import takagi

log = logging.getLogger(__name__)

Strategy = Literal["joint", "greedy"]

GRADCHECK_TOL = 1e-5


class GradientCheckError(RuntimeError):
    pass


# -- structured unitaries ---------------------------------------------------

def symplectic_form(d: int) -> np.ndarray:
    if d % 2:
        raise ValueError(f"skew conjugations exist in even dimension only, got d={d}")
    return np.kron(np.eye(d // 2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _form(d: int, kind: str) -> np.ndarray:
    return np.eye(d) if kind == "conjugation" else symplectic_form(d)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_structured_unitary(d: int, kind: Kind, rng: np.random.Generator) -> AntiLinearOp:
    """Random conjugation ``V V^T`` or skew conjugation ``V J V^T``."""
    check_kind(kind)
    s = _form(d, kind)
    v = haar_unitary(d, rng)
    return AntiLinearOp(v @ s @ v.T)


def structured_factor(op: AntiLinearOp, kind: Kind) -> np.ndarray:
    """Unitary ``V`` with ``op.mat == V S V^T`` (``S`` = identity or ``J``).

    Conjugations go through the Takagi factorization.  For a skew conjugation
    ``theta`` the vectors ``v`` and ``-theta v`` are orthogonal and span an
    invariant plane, so ``V`` is built pair by pair.
    """
    m = op.mat
    d = op.dim
    if check_kind(kind) == "conjugation":
        u, sigma = takagi(m, tol=1e-8)
        if np.max(np.abs(sigma - 1)) > 1e-8:
            raise ValueError("matrix is not unitary")
        return u
    symplectic_form(d)
    cols: list[np.ndarray] = []
    for j in range(d):
        if len(cols) == d:
            break
        v = np.eye(d, dtype=complex)[j]
        for c in cols:
            v = v - np.vdot(c, v) * c
        n = np.linalg.norm(v)
        if n < 1e-8:
            continue
        v = v / n
        cols += [v, -(m @ np.conj(v))]
    if len(cols) != d:
        raise ValueError("could not factor the skew conjugation")
    return np.stack(cols, axis=1)


# -- loss and gradient ------------------------------------------------------

def orthogonality_loss(ops: Sequence) -> float:
    """``sum_{a<b} |(op_a, op_b)|^2 / d^2`` for a list of operators."""
    ops = matrices_to_ops(ops)
    if len(ops) < 2:
        raise ValueError("orthogonality loss needs at least two operators")
    mats = stack(ops)
    g = gram_of_stack(mats)
    off = np.abs(g) ** 2
    np.fill_diagonal(off, 0.0)
    return float(np.sum(np.triu(off, 1)) / ops[0].dim ** 2)


def _swap(a):
    return np.swapaxes(a, -1, -2)


def _assemble(bases: np.ndarray, s: np.ndarray) -> np.ndarray:
    return bases @ s @ _swap(bases)


def herm_from_params(x: np.ndarray) -> np.ndarray:
    """Real ``(..., d, d)`` parameters to Hermitian matrices.

    Diagonal entries are the diagonal of ``x``; above the diagonal
    ``H[j, k] = x[j, k] + i x[k, j]``.
    """
    upper = np.triu(x, 1) + 1j * _swap(np.tril(x, -1))
    diag = np.einsum("...ii->...i", x)
    return upper + np.conj(_swap(upper)) + diag[..., None] * np.eye(x.shape[-1])


def _param_grad(gh: np.ndarray) -> np.ndarray:
    # gradient of Re<dH, gh> in the coordinates of herm_from_params
    out = np.triu(2 * gh.real, 1) + _swap(np.triu(2 * gh.imag, 1))
    diag = np.einsum("...ii->...i", gh).real
    return out + diag[..., None] * np.eye(gh.shape[-1])


def _expi(h: np.ndarray) -> np.ndarray:
    w, q = np.linalg.eigh(h)
    return (q * np.exp(1j * w)[..., None, :]) @ np.conj(_swap(q))


def _loss_grad(bases, s, weights):
    """Loss and parameter gradient at ``H = 0`` for every member.

    With ``E_a = (2/d^2) sum_b w_ab conj(G_ab) M_b^T`` we have
    ``dL = Re<dM_a, E_a>``; pulling back through ``M = V S V^T`` and
    ``V = B exp(i H)`` gives the Hermitian gradient ``herm(-i B^H G_V)``.
    """
    d = bases.shape[-1]
    mats = _assemble(bases, s)
    g = gram_of_stack(mats)
    loss = 0.5 * float(np.sum(weights * np.abs(g) ** 2)) / d ** 2
    e = (2.0 / d ** 2) * np.einsum("ab,bji->aij", weights * np.conj(g), mats)
    cv = np.conj(bases)
    gv = e @ cv @ s.T + _swap(e) @ cv @ s
    r = -1j * np.conj(_swap(bases)) @ gv
    gh = (r + np.conj(_swap(r))) / 2
    return loss, _param_grad(gh)


def _loss_only(bases, s, weights) -> float:
    d = bases.shape[-1]
    g = gram_of_stack(_assemble(bases, s))
    return 0.5 * float(np.sum(weights * np.abs(g) ** 2)) / d ** 2


def _pair_weights(k: int, active: np.ndarray | None = None) -> np.ndarray:
    w = np.ones((k, k)) - np.eye(k)
    if active is not None:
        # only pairs that touch an active member change
        w *= (active[:, None] | active[None, :])
    return w


def _move(bases, x, active):
    out = bases.copy()
    out[active] = bases[active] @ _expi(herm_from_params(x[active]))
    return out


def loss_at_params(bases, kind: str, x: np.ndarray, weights=None) -> float:
    """Loss at ``V_a = B_a exp(i H(x_a))``; used for finite-difference checks."""
    k, d = bases.shape[0], bases.shape[-1]
    w = _pair_weights(k) if weights is None else weights
    moved = bases @ _expi(herm_from_params(x))
    return _loss_only(moved, _form(d, kind), w)


def loss_and_gradient(bases, kind: str, weights=None):
    """Loss and gradient w.r.t. the stacked real parameters, at ``H = 0``."""
    k, d = bases.shape[0], bases.shape[-1]
    w = _pair_weights(k) if weights is None else weights
    return _loss_grad(np.asarray(bases, dtype=complex), _form(d, kind), w)


def gradient_check(bases, kind: str, weights=None, h: float = 1e-6) -> float:
    """Relative L2 error between analytic and central-difference gradients.

    The denominator is floored at 1e-3 so that at stationary points (where
    both gradients vanish) rounding noise is not divided by rounding noise.
    """
    _, grad = loss_and_gradient(bases, kind, weights)
    fd = np.zeros_like(grad)
    x = np.zeros_like(grad)
    for idx in np.ndindex(*grad.shape):
        x[idx] = h
        up = loss_at_params(bases, kind, x, weights)
        x[idx] = -h
        down = loss_at_params(bases, kind, x, weights)
        x[idx] = 0.0
        fd[idx] = (up - down) / (2 * h)
    scale = max(np.linalg.norm(fd), np.linalg.norm(grad), 1e-3)
    return float(np.linalg.norm(grad - fd) / scale)


@dataclass
class DescentResult:
    bases: np.ndarray
    loss: float
    iterations: int


def descend(bases, kind: str, *, weights=None, active=None, max_iters: int = 2000,
            step_size: float = 0.1, stop_loss: float = 1e-20,
            stall_window: int = 200, memory: int = 10) -> DescentResult:
    """Gradient descent with Barzilai-Borwein steps and Armijo backtracking.

    The sufficient-decrease test compares against the largest of the last
    ``memory`` losses (nonmonotone line search), which lets BB steps through.
    ``active`` masks which members move; the others stay fixed.
    """
    bases = np.array(bases, dtype=complex)
    k, d = bases.shape[0], bases.shape[-1]
    s = _form(d, kind)
    active = np.ones(k, dtype=bool) if active is None else np.asarray(active, dtype=bool)
    w = _pair_weights(k, active) if weights is None else weights
    loss, g = _loss_grad(bases, s, w)
    g[~active] = 0.0
    t = step_size
    history = [loss]
    best_bases, best_loss = bases, loss
    it = 0
    while it < max_iters and loss > stop_loss:
        gg = float(np.vdot(g, g).real)
        if gg < 1e-32:
            break
        while True:
            cand = _move(bases, -t * g, active)
            new_loss = _loss_only(cand, s, w)
            if new_loss <= max(history[-memory:]) - 1e-4 * t * gg:
                break
            t *= 0.5
            if t < 1e-16:
                return DescentResult(best_bases, best_loss, it)
        new_loss, new_g = _loss_grad(cand, s, w)
        new_g[~active] = 0.0
        step = -t * g
        sy = float(np.vdot(step, new_g - g).real)
        t = float(np.clip(np.vdot(step, step).real / sy, 1e-8, 1e4)) if sy > 0 else 2 * t
        bases, loss, g = cand, new_loss, new_g
        it += 1
        history.append(loss)
        if loss < best_loss:
            best_bases, best_loss = bases, loss
        # stop when a whole window brought less than 0.1% improvement
        if it > stall_window and (min(history[-stall_window:])
                                  > (1 - 1e-3) * min(history[:-stall_window])):
            break
    return DescentResult(best_bases, best_loss, it)


def optimize_joint(d: int, kind: Kind, k: int, rng: np.random.Generator, *,
                   max_iters: int = 2000, step_size: float = 0.1,
                   stop_loss: float = 1e-20, initial=()) -> DescentResult:
    """Minimize the loss over ``k`` members jointly from a random start.

    No bound check is done here; :class:`SearchConfig` is the gate.
    """
    initial = list(initial)[:k]
    bases = [structured_factor(op, kind) for op in initial]
    bases += [haar_unitary(d, rng) for _ in range(k - len(bases))]
    return descend(np.stack(bases), kind, max_iters=max_iters, step_size=step_size,
                   stop_loss=stop_loss)


# -- configuration and reports ---------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    dim: int
    kind: Kind
    target_k: int
    restarts: int = 8
    max_iters: int = 2000
    step_size: float = 0.1
    tol_loss: float = 1e-12
    seed: int = 0
    strategy: Strategy = "joint"
    workers: int = 1
    check_gradient: bool = False
    n_candidates: int = 4

    def __post_init__(self):
        check_kind(self.kind)
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if self.kind == "skew" and self.dim % 2:
            raise BoundError(f"skew conjugations exist in even dimension only, got d={self.dim}")
        if self.target_k < 2:
            raise ValueError("target_k must be at least 2")
        limit = bound(self.dim, self.kind)
        if self.target_k > limit:
            raise BoundError(f"target_k={self.target_k} exceeds the bound {limit} "
                             f"= d(d{'+' if self.kind == 'conjugation' else '-'}1)/2 "
                             f"for d={self.dim}")
        if self.restarts < 1 or self.max_iters < 1 or self.n_candidates < 1:
            raise ValueError("restarts, max_iters and n_candidates must be positive")
        if not (self.step_size > 0 and self.tol_loss > 0):
            raise ValueError("step_size and tol_loss must be positive")
        if self.strategy not in ("joint", "greedy"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.workers < 1:
            raise ValueError("workers must be positive")

    @property
    def stop_loss(self) -> float:
        # push past tol_loss so the witness also verifies at 1e-6
        return min(self.tol_loss * 1e-6, 1e-18)


@dataclass
class Certificate:
    dim: int
    kind: str
    k: int
    max_structure_residual: float
    max_offdiag_gram: float
    max_diag_deviation: float
    gram: GramMatrix
    passed: bool
    tol: float
    notes: list = field(default_factory=list)

    def summary(self) -> str:
        lines = [
            f"dim={self.dim} kind={self.kind} k={self.k} tol={self.tol:g}",
            f"max_structure_residual={self.max_structure_residual:.3e}",
            f"max_offdiag_gram={self.max_offdiag_gram:.3e}",
            f"max_diag_deviation={self.max_diag_deviation:.3e}",
        ]
        lines += [f"note: {n}" for n in self.notes]
        lines.append("PASSED" if self.passed else "FAILED")
        return "\n".join(lines)


@dataclass
class SearchReport:
    config: SearchConfig
    best_loss: float
    achieved: Optional[OrthoSet]
    iterations_used: int
    per_restart_losses: list
    wall_time_s: float = 0.0
    gradient_check_errors: Optional[list] = None
    budget_exhausted: bool = False
    prefix_verified: Optional[bool] = None

    @property
    def success(self) -> bool:
        return self.achieved is not None

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "config": asdict(self.config),
            "success": self.success,
            "best_loss": self.best_loss if np.isfinite(self.best_loss) else None,
            "iterations_used": self.iterations_used,
            "per_restart_losses": list(self.per_restart_losses),
            "budget_exhausted": self.budget_exhausted,
            "prefix_verified": self.prefix_verified,
            "gradient_check_errors": self.gradient_check_errors,
            "achieved": (OperatorSetFile.from_set(self.achieved, tol=1e-6).to_dict()
                         if self.achieved is not None else None),
        }
        if include_timing:
            out["wall_time_s"] = self.wall_time_s
        return out


# -- verification -----------------------------------------------------------

def verify_set(ops, tol: float = 1e-10, kind: Optional[Kind] = None) -> Certificate:
    """Certify that ``ops`` are mutually orthogonal (skew) conjugations.

    Checks per member ``||M -+ M^T||_F`` and ``||M M^H - I||_F``, every
    off-diagonal Gram entry, and that each diagonal entry equals ``+d``
    (conjugations) or ``-d`` (skew conjugations), all against ``tol``.
    """
    if isinstance(ops, OrthoSet):
        kind = kind or ops.kind
        ops = ops.ops
    kind = check_kind(kind or "conjugation")
    ops = matrices_to_ops(ops)
    if not ops:
        raise ValueError("nothing to verify")
    mats = stack(ops)
    d = ops[0].dim
    sym = hermitian_residual if kind == "conjugation" else skew_residual
    structure = max(max(sym(op), unitarity_residual(op)) for op in ops)
    g = gram_of_stack(mats)
    gm = GramMatrix(g)
    target = d if kind == "conjugation" else -d
    diag_dev = float(np.max(np.abs(np.diag(g) - target)))
    notes = []
    passed = structure <= tol and gm.max_offdiag() <= tol and diag_dev <= tol
    if kind == "skew" and d % 2:
        notes.append("odd dimension: an antisymmetric matrix of odd size has "
                     "det M = det(-M^T) = -det M = 0, so it cannot be unitary; "
                     "no skew conjugation exists")
        passed = False
    limit = bound(d, kind)
    if len(ops) > limit:
        notes.append(f"{len(ops)} operators exceed the bound {limit}; they cannot be orthogonal")
        passed = False
    return Certificate(d, kind, len(ops), structure, gm.max_offdiag(), diag_dev, gm,
                       bool(passed), tol, notes)


# -- restarts ---------------------------------------------------------------

@dataclass
class _RestartResult:
    loss: float
    mats: np.ndarray
    iterations: int
    gradcheck: Optional[float]


def _joint_restart(cfg: SearchConfig, rng, initial) -> _RestartResult:
    d, k = cfg.dim, cfg.target_k
    init = list(initial)[:k]
    bases = [structured_factor(op, cfg.kind) for op in init]
    bases += [haar_unitary(d, rng) for _ in range(k - len(bases))]
    bases = np.stack(bases)
    gc = gradient_check(bases, cfg.kind) if cfg.check_gradient else None
    res = descend(bases, cfg.kind, max_iters=cfg.max_iters, step_size=cfg.step_size,
                  stop_loss=cfg.stop_loss)
    return _RestartResult(res.loss, _assemble(res.bases, _form(d, cfg.kind)), res.iterations, gc)


def _greedy_restart(cfg: SearchConfig, rng, initial) -> _RestartResult:
    d, k = cfg.dim, cfg.target_k
    bases = [structured_factor(op, cfg.kind) for op in list(initial)[:k]]
    if not bases:
        bases.append(haar_unitary(d, rng))
    accept = cfg.tol_loss / k ** 2
    stop = min(accept * 1e-6, 1e-18)
    iters = 0
    gc = None
    while len(bases) < k:
        n = len(bases) + 1
        active = np.zeros(n, dtype=bool)
        active[-1] = True
        best = None
        for _ in range(cfg.n_candidates):
            trial = np.stack(bases + [haar_unitary(d, rng)])
            if cfg.check_gradient and gc is None:
                gc = gradient_check(trial, cfg.kind, _pair_weights(n, active))
            res = descend(trial, cfg.kind, active=active, max_iters=cfg.max_iters,
                          step_size=cfg.step_size, stop_loss=stop)
            iters += res.iterations
            if best is None or res.loss < best.loss:
                best = res
            if res.loss <= accept:
                break
        bases = list(best.bases)
    bases = np.stack(bases)
    mats = _assemble(bases, _form(d, cfg.kind))
    return _RestartResult(orthogonality_loss(list(mats)), mats, iters, gc)


def _run_restart(cfg: SearchConfig, seed_seq: np.random.SeedSequence, initial) -> _RestartResult:
    rng = np.random.default_rng(seed_seq)
    if cfg.strategy == "joint":
        return _joint_restart(cfg, rng, initial)
    return _greedy_restart(cfg, rng, initial)


def restart_seeds(seed: int, restarts: int) -> list[np.random.SeedSequence]:
    """Per-restart streams split off one master seed by spawn counter."""
    return np.random.SeedSequence(seed).spawn(restarts)


def search_max_set(config: SearchConfig, initial: Sequence[AntiLinearOp] = (),
                   deadline: Optional[float] = None) -> SearchReport:
    """Search for ``config.target_k`` mutually orthogonal (skew) conjugations.

    Args:
        config: validated search configuration.
        initial: optional warm-start members (kept first, then free to move
            under ``joint``; kept fixed under ``greedy``).
        deadline: ``time.monotonic()`` value after which no new restart is
            started.  Only used by sweeps; makes results timing dependent.

    Returns:
        A :class:`SearchReport`; ``achieved`` is set when the best restart
        reaches ``config.tol_loss``.
    """
    start = time.monotonic()
    seeds = restart_seeds(config.seed, config.restarts)
    initial = [op.mat if isinstance(op, AntiLinearOp) else np.asarray(op) for op in initial]
    initial_ops = [AntiLinearOp(m) for m in initial]
    exhausted = False
    results: list[_RestartResult] = []
    if config.workers > 1 and deadline is None:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_restart, [config] * len(seeds), seeds,
                                    [initial_ops] * len(seeds)))
    else:
        for ss in seeds:
            if deadline is not None and time.monotonic() > deadline:
                exhausted = True
                break
            results.append(_run_restart(config, ss, initial_ops))

    losses = [r.loss for r in results]
    gcs = [r.gradcheck for r in results] if config.check_gradient else None
    if gcs is not None:
        bad = [e for e in gcs if e is not None and e > GRADCHECK_TOL]
        if bad:
            raise GradientCheckError(f"analytic gradient disagrees with finite differences: {bad}")
    if results:
        best_i = int(np.argmin(losses))
        best = results[best_i]
        best_loss = best.loss
    else:
        best, best_loss = None, float("inf")
    achieved = None
    if best is not None and best_loss <= config.tol_loss:
        achieved = OrthoSet(config.dim, config.kind,
                            tuple(AntiLinearOp(m) for m in best.mats), "search")
    report = SearchReport(config, best_loss, achieved, sum(r.iterations for r in results),
                          losses, time.monotonic() - start, gcs, exhausted)
    log.info("d=%d kind=%s k=%d best_loss=%.3e", config.dim, config.kind,
             config.target_k, best_loss)
    return report


@dataclass(frozen=True)
class Budget:
    """Shared settings and limits for a sweep over set sizes."""

    restarts: int = 8
    max_iters: int = 2000
    time_s: Optional[float] = None
    seed: int = 0
    tol_loss: float = 1e-12
    strategy: Strategy = "joint"
    step_size: float = 0.1
    workers: int = 1


def explore_dimension(d: int, kind: Kind, k_min: int, k_max: int,
                      budget: Budget = Budget()) -> list[SearchReport]:
    """Run :func:`search_max_set` for every size in ``[k_min, k_max]``.

    Reports come back in ascending ``k``.  When ``budget.time_s`` runs out
    the sweep stops early and the last report is flagged ``budget_exhausted``.
    Each size uses its own seed derived from ``budget.seed``.
    """
    if k_min < 2:
        raise ValueError("k_min must be at least 2")
    if k_max < k_min:
        raise ValueError("empty size range")
    limit = bound(d, kind)
    if k_max > limit:
        raise BoundError(f"k_max={k_max} exceeds the bound {limit} for d={d}, kind={kind}")
    deadline = None if budget.time_s is None else time.monotonic() + budget.time_s
    size_seeds = np.random.SeedSequence(budget.seed).generate_state(k_max - k_min + 1)
    reports = []
    for i, k in enumerate(range(k_min, k_max + 1)):
        cfg = SearchConfig(d, kind, k, restarts=budget.restarts, max_iters=budget.max_iters,
                           step_size=budget.step_size, tol_loss=budget.tol_loss,
                           seed=int(size_seeds[i]), strategy=budget.strategy,
                           workers=budget.workers)
        if deadline is not None and time.monotonic() > deadline:
            if reports:
                reports[-1].budget_exhausted = True
            break
        rep = search_max_set(cfg, deadline=deadline)
        if rep.achieved is not None:
            prefix = rep.achieved.ops[:k - 1]
            rep.prefix_verified = verify_set(prefix, tol=1e-6, kind=kind).passed
        reports.append(rep)
        if rep.budget_exhausted:
            break
    return reports
