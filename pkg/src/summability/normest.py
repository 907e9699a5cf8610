"""Norm of a multilinear map on a product of l_p balls.

``estimate_norm`` runs alternating maximization: with every slot but one
fixed, ``x_j -> T(..., x_j, ...)`` is a linear functional whose supremum over
the ``l_{p_j}`` ball is a dual norm with a closed-form maximizer.  Each slot
update is therefore exact and the objective never decreases.  All restarts
are advanced together as a batch.  The result is a lower bound on ``||T||``.

``brute_force_norm`` is the independent test oracle: a deterministic grid on
the phases and magnitudes of each l_p sphere, one slot solved exactly by
duality, and a quasi-Newton polish of the best grid points.
"""

from __future__ import annotations

import logging
import math
import string
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import InvalidParams, NotVectorValued, TooLarge
from .exponents import DomainVector, ExtExponent, as_exponent
from .tensors import CoefficientTensor, MultilinearSpec, as_tensor, evaluate, lq_norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimatorConfig:
    restarts: int = 64
    max_sweeps: int = 200
    rel_tol: float = 1e-10
    seed: int = 42

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidParams("restarts must be >= 1")
        if self.max_sweeps < 1:
            raise InvalidParams("max_sweeps must be >= 1")
        if not self.rel_tol > 0:
            raise InvalidParams("rel_tol must be positive")


@dataclass(frozen=True)
class NormEstimate:
    value: float
    maximizer: tuple
    restarts_used: int
    converged: bool
    iterations: int
    # objective after every slot update of the winning restart
    history: tuple = field(default=(), repr=False)


def _unit_phase(c: np.ndarray) -> np.ndarray:
    a = np.abs(c)
    # zero coefficients get weight 0, so c = e_k yields x = e_k for every p
    return np.where(a > 0, np.conj(c) / np.where(a > 0, a, 1.0), 0.0)


def _dual_rows(C: np.ndarray, p: ExtExponent) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise dual maximizer: ``C`` has shape ``(R, n)``."""
    R, n = C.shape
    a = np.abs(C)
    peak = a.max(axis=1)
    zero = peak == 0
    if p.recip == 1:
        k = np.argmax(a, axis=1)
        X = np.zeros_like(C)
        rows = np.arange(R)
        X[rows, k] = _unit_phase(C[rows, k])
        values = a[rows, k]
    elif p.is_infinite:
        X = _unit_phase(C)
        values = a.sum(axis=1)
    else:
        pc = p.conjugate()
        expo = float(pc.value) - 1.0
        w = (a / np.where(zero, 1.0, peak)[:, None]) ** expo
        nw = lq_norm(w, p, axis=1)
        w = w / np.where(nw > 0, nw, 1.0)[:, None]
        X = _unit_phase(C) * w
        values = lq_norm(C, pc, axis=1)
    if zero.any():
        X[zero] = 0
        X[zero, 0] = 1
        values = np.where(zero, 0.0, values)
    return np.asarray(values, dtype=float), X


def dual_maximizer(c, p) -> tuple[float, np.ndarray]:
    """``max |sum c_i x_i|`` over ``||x||_p <= 1`` and a maximizing ``x``.

    The value is ``||c||_{p'}``.  For ``p = 1`` the maximizer is a unit mass at
    the first index of largest ``|c_i|``; a zero ``c`` gives ``(0, e_1)``.
    """
    c = np.asarray(c, dtype=np.complex128).reshape(1, -1)
    values, X = _dual_rows(c, as_exponent(p))
    return float(values[0]), X[0]


def scalarize(T: CoefficientTensor, spec: MultilinearSpec) -> tuple[CoefficientTensor, DomainVector]:
    """Turn ``T: ... -> l_u`` into the scalar (m+1)-linear form on
    ``l_p1 x ... x l_pm x l_{u'}`` with the same norm."""
    T = as_tensor(T)
    if not T.is_vector or spec.u is None:
        raise NotVectorValued("scalarize needs a vector-valued tensor and spec.u")
    return CoefficientTensor(T.entries, 0), DomainVector(spec.ps.ps + (spec.u.conjugate(),))


def _as_scalar_problem(T, spec):
    T = as_tensor(T)
    spec.check(T)
    if T.is_vector:
        return scalarize(T, spec)
    return T, spec.ps


def _normalize_rows(X: np.ndarray, p: ExtExponent) -> np.ndarray:
    nrm = lq_norm(X, p, axis=1)
    return X / np.where(nrm > 0, nrm, 1.0)[:, None]


class _Contractor:
    """Batched ``C[r, :] = T(x_1[r], ..., x_{j-1}[r], . , x_{j+1}[r], ...)``."""

    def __init__(self, A: np.ndarray):
        self.A = A
        m = A.ndim
        letters = string.ascii_letters[:m]
        batch = "Z" if "Z" not in letters else "z"
        self.specs = []
        for j in range(m):
            others = [k for k in range(m) if k != j]
            subs = letters + "".join(f",{batch}{letters[k]}" for k in others)
            self.specs.append((f"{subs}->{batch}{letters[j]}", others))
        self.paths: dict[tuple[int, int], list] = {}

    def __call__(self, j: int, X: list[np.ndarray]) -> np.ndarray:
        spec, others = self.specs[j]
        ops = [self.A] + [X[k] for k in others]
        if not others:
            return np.broadcast_to(self.A, (X[j].shape[0],) + self.A.shape).copy()
        key = (j, X[j].shape[0])
        if key not in self.paths:
            self.paths[key] = np.einsum_path(spec, *ops, optimize="greedy")[0]
        return np.einsum(spec, *ops, optimize=self.paths[key])


def estimate_norm(T, spec: MultilinearSpec, cfg: EstimatorConfig | None = None) -> NormEstimate:
    """Best-of-restarts alternating maximization; a lower bound on ``||T||``."""
    cfg = cfg or EstimatorConfig()
    B, ps = _as_scalar_problem(T, spec)
    A = B.entries
    dims = A.shape
    m = len(dims)

    if not np.any(A):
        e1 = tuple(np.eye(n, dtype=np.complex128)[0] for n in dims)
        return NormEstimate(0.0, e1, cfg.restarts, True, 0, (0.0,))

    rng = np.random.default_rng(cfg.seed)
    R = cfg.restarts
    X = []
    for n, p in zip(dims, ps):
        G = rng.standard_normal((R, n)) + 1j * rng.standard_normal((R, n))
        X.append(_normalize_rows(G, p))

    contract = _Contractor(A)
    vals = np.abs(np.einsum("ri,ri->r", contract(0, X), X[0]))
    history = [vals.copy()]
    active = np.ones(R, dtype=bool)
    converged = np.zeros(R, dtype=bool)
    sweeps = np.zeros(R, dtype=int)

    for _ in range(cfg.max_sweeps):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xa = [x[idx] for x in X]
        start = vals[idx].copy()
        v = start
        for j in range(m):
            C = contract(j, Xa)
            v, Xa[j] = _dual_rows(C, ps[j])
            vals[idx] = v
            history.append(vals.copy())
        for j in range(m):
            X[j][idx] = Xa[j]
        sweeps[idx] += 1
        done = (v - start) <= cfg.rel_tol * np.maximum(v, np.finfo(float).tiny)
        converged[idx[done]] = True
        active[idx[done]] = False

    best = int(np.argmax(vals))
    maximizer = tuple(x[best].copy() for x in X)
    value = abs(evaluate(B, maximizer))
    logger.debug("estimate_norm: best restart %d value %.12g after %d sweeps", best, value, sweeps[best])
    return NormEstimate(
        value=float(value),
        maximizer=maximizer,
        restarts_used=R,
        converged=bool(converged[best]),
        iterations=int(sweeps[best]),
        history=tuple(float(h[best]) for h in history),
    )


# -- brute-force oracle ------------------------------------------------------


class _SphereChart:
    """Parametrization of the l_p unit sphere of ``C^d`` (up to global phase)."""

    def __init__(self, d: int, p: ExtExponent, density: int):
        self.d, self.p = d, p
        if d == 1:
            self.n_mag, self.n_phase = 0, 0
        elif p.recip == 1:
            self.n_mag, self.n_phase = 0, 0
        elif p.is_infinite:
            self.n_mag, self.n_phase = 0, d - 1
        else:
            self.n_mag, self.n_phase = d - 1, d - 1
        self.n_params = self.n_mag + self.n_phase
        self.density = density
        # grid size, known before anything is allocated
        self.count = d if (d > 1 and p.recip == 1) else density**self.n_params
        self._cache = None

    @property
    def grid(self) -> np.ndarray:
        if self._cache is None:
            self._cache = self._grid(self.density)
        return self._cache

    def _grid(self, density: int) -> np.ndarray:
        if self.d > 1 and self.p.recip == 1:
            return np.zeros((self.d, 0))
        axes = [np.linspace(0.0, np.pi / 2, density)] * self.n_mag
        axes += [2 * np.pi * np.arange(density) / density] * self.n_phase
        if not axes:
            return np.zeros((1, 0))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.reshape(-1) for g in mesh], axis=1)

    def vectors(self, params: np.ndarray, basis_index=None) -> np.ndarray:
        """Map parameter rows ``(K, n_params)`` to unit vectors ``(K, d)``."""
        K = params.shape[0]
        if self.d == 1:
            return np.ones((K, 1), dtype=np.complex128)
        if self.p.recip == 1:
            return np.eye(self.d, dtype=np.complex128)[basis_index]
        theta = params[:, : self.n_mag]
        phi = params[:, self.n_mag :]
        if self.n_mag:
            w = np.ones((K, self.d))
            s = np.ones(K)
            for k in range(self.n_mag):
                w[:, k] = s * np.abs(np.cos(theta[:, k]))
                s = s * np.abs(np.sin(theta[:, k]))
            w[:, -1] = s
            mag = w ** (2.0 * float(self.p.recip))
        else:
            mag = np.ones((K, self.d))
        phases = np.concatenate([np.zeros((K, 1)), phi], axis=1)
        return mag * np.exp(1j * phases)


def brute_force_norm(
    T,
    spec: MultilinearSpec,
    grid_density: int = 8,
    *,
    max_entries: int = 64,
    max_evaluations: int = 4_000_000,
    polish: int = 6,
) -> float:
    """Grid search plus local polish; an oracle for tiny tensors only.

    Scalar maps: the largest slot is solved exactly as a dual norm and the
    others are gridded.  Vector-valued maps: every domain slot is gridded and
    the output's ``l_u`` norm is taken directly (no scalarization).
    """
    T = as_tensor(T)
    spec.check(T)
    if math.prod(T.dims) > max_entries:
        raise TooLarge(f"prod(dims)={math.prod(T.dims)} exceeds the oracle cap {max_entries}")
    if grid_density < 2:
        raise InvalidParams("grid_density must be >= 2")
    A = T.entries
    if not np.any(A):
        return 0.0

    if T.is_vector:
        grid_slots = list(range(T.m))
        final_exp = spec.u
    else:
        exact = int(np.argmax(T.dims))
        grid_slots = [j for j in range(T.m) if j != exact]
        final_exp = spec.ps[exact].conjugate()

    if not grid_slots:
        return float(lq_norm(A, final_exp))

    charts = [_SphereChart(T.dims[j], spec.ps[j], grid_density) for j in grid_slots]
    counts = [c.count for c in charts]
    remaining = A.shape[-1] if T.is_vector else T.dims[exact]
    if math.prod(counts) * remaining > max_evaluations:
        raise TooLarge(
            f"grid of {math.prod(counts)} points is too large; lower grid_density"
        )

    def slot_vectors(ci, params, choice):
        chart = charts[ci]
        if chart.p.recip == 1 and chart.d > 1:
            return chart.vectors(params, np.atleast_1d(choice))
        return chart.vectors(params)

    # contract gridded slots one after another, keeping a grid axis per slot;
    # slots are in increasing order so the leading tensor axis is always next
    Y = A[np.newaxis]
    for ci, j in enumerate(grid_slots):
        chart = charts[ci]
        if chart.p.recip == 1 and chart.d > 1:
            V = chart.vectors(chart.grid, np.arange(chart.d))
        else:
            V = chart.vectors(chart.grid)
        lead = 1 + (j - sum(1 for k in grid_slots[:ci]))
        Y = np.moveaxis(Y, lead, 1)
        Y = np.einsum("kc,bc...->bk...", V, Y)
        Y = Y.reshape((-1,) + Y.shape[2:])
    values = lq_norm(Y.reshape(Y.shape[0], -1), final_exp, axis=1)
    best_value = float(values.max())

    def objective(flat, choices):
        vecs = []
        pos = 0
        for ci, chart in enumerate(charts):
            prm = flat[pos : pos + chart.n_params].reshape(1, -1)
            pos += chart.n_params
            vecs.append(slot_vectors(ci, prm, choices[ci])[0])
        out = A
        # contract from the last gridded slot backwards so axis indices stay valid
        for ci in reversed(range(len(grid_slots))):
            out = np.tensordot(out, vecs[ci], axes=([grid_slots[ci]], [0]))
        return float(lq_norm(out.reshape(-1), final_exp))

    order = np.argsort(-values, kind="stable")[: max(polish, 1)]
    for flat_idx in order:
        multi = np.unravel_index(int(flat_idx), counts)
        x0, choices = [], []
        for ci, chart in enumerate(charts):
            if chart.p.recip == 1 and chart.d > 1:
                choices.append(int(multi[ci]))
            else:
                choices.append(None)
                x0.append(chart.grid[multi[ci]])
        x0 = np.concatenate(x0) if x0 else np.zeros(0)
        if x0.size == 0:
            continue
        f = lambda z: -objective(z, choices)  # noqa: E731
        res = optimize.minimize(f, x0, method="BFGS", options={"gtol": 1e-12, "maxiter": 500})
        res = optimize.minimize(
            f,
            res.x,
            method="Nelder-Mead",
            options={"xatol": 1e-11, "fatol": 1e-14, "maxfev": 4000},
        )
        best_value = max(best_value, -float(res.fun))
    return best_value
