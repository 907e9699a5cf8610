"""Extremal families that witness sharpness of the summability exponents."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, PreconditionViolated
from .exponents import HALF, ExtExponent, as_domain, as_exponent, lambda_exponent
from .tensors import CoefficientTensor, MultilinearSpec


@dataclass(frozen=True, eq=False)
class ConstructionOutput:
    tensor: CoefficientTensor
    spec: MultilinearSpec
    norm_upper_bound: float | None
    norm_upper_bound_formula: str
    family: str = ""
    n: int = 0


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidParams(f"n={n} must be >= 1")


def _diagonal(n: int, m: int) -> np.ndarray:
    a = np.zeros((n,) * m, dtype=np.complex128)
    idx = np.arange(n)
    a[(idx,) * m] = 1.0
    return a


def diagonal_scalar(n: int, ps) -> ConstructionOutput:
    """``Phi_n(x^1, ..., x^m) = sum_i x^1_i ... x^m_i`` with ``||Phi_n|| = n^(1/lambda)``.

    The bound is attained at ``x_j = n^(-1/p_j) (1, ..., 1)``.
    """
    _check_n(n)
    ps = as_domain(ps)
    lam = lambda_exponent(1, ps)
    return ConstructionOutput(
        tensor=CoefficientTensor(_diagonal(n, ps.m)),
        spec=MultilinearSpec(ps),
        norm_upper_bound=float(n ** float(lam.recip)),
        norm_upper_bound_formula="n^(1/lambda), 1/lambda = 1 - sum 1/p_j",
        family="diagonal",
        n=n,
    )


def diagonal_vector(n: int, ps, u, *, q=None) -> ConstructionOutput:
    """``T(x^1, ..., x^m) = sum_j x^1_j ... x^m_j e_j`` into ``l_u``."""
    _check_n(n)
    ps = as_domain(ps)
    u = as_exponent(u)
    s = ps.sum_recip()
    if not s < u.recip:
        raise PreconditionViolated(f"need sum 1/p_j < 1/u, got {s} >= {u.recip}")
    a = np.zeros((n,) * (ps.m + 1), dtype=np.complex128)
    idx = np.arange(n)
    a[(idx,) * (ps.m + 1)] = 1.0
    return ConstructionOutput(
        tensor=CoefficientTensor(a, target_dim=n),
        spec=MultilinearSpec(ps, u, q),
        norm_upper_bound=float(n ** float(u.recip - s)),
        norm_upper_bound_formula="n^(1/u - sum 1/p_j)",
        family="diagonal-vector",
        n=n,
    )


def fourier_matrix(n: int, base: int = 1) -> np.ndarray:
    """``a_kl = exp(2 pi i k l / n)`` with ``k, l`` running from ``base``."""
    k = np.arange(base, base + n)
    return np.exp(2j * np.pi * np.outer(k, k) / n)


def fourier_vector(n: int, ps, u, *, q=None, base: int = 1) -> ConstructionOutput:
    """``T(x^1, ..., x^m) = sum_i sum_j a_ij x^1_j ... x^m_j e_i`` into ``l_u``.

    ``T(e_i, ..., e_i)`` is column ``i`` of the Fourier matrix; every
    off-diagonal coefficient vanishes.
    """
    _check_n(n)
    ps = as_domain(ps)
    u = as_exponent(u)
    s = ps.sum_recip()
    if not s < HALF:
        raise PreconditionViolated(f"need sum 1/p_j < 1/2, got {s}")
    if u.recip < HALF:
        raise PreconditionViolated(f"need 1 <= u <= 2, got u={u}")
    F = fourier_matrix(n, base)
    a = np.zeros((n,) * ps.m + (n,), dtype=np.complex128)
    idx = np.arange(n)
    a[(idx,) * ps.m] = F.T  # row i of F.T is column i of F
    return ConstructionOutput(
        tensor=CoefficientTensor(a, target_dim=n),
        spec=MultilinearSpec(ps, u, q),
        norm_upper_bound=float(n ** float(HALF + u.recip - s)),
        norm_upper_bound_formula="n^(1/2 + 1/u - sum 1/p_j)",
        family="fourier",
        n=n,
    )


def random_sign_tensor(n: int, m: int, rng_seed: int) -> CoefficientTensor:
    """Full ``n^m`` tensor of i.i.d. Rademacher signs from a seeded generator."""
    _check_n(n)
    if m < 1:
        raise InvalidParams(f"m={m} must be >= 1")
    rng = np.random.default_rng(rng_seed)
    signs = rng.integers(0, 2, size=(n,) * m) * 2 - 1
    return CoefficientTensor(signs.astype(np.complex128))


def random_sign(n: int, ps, rng_seed: int) -> ConstructionOutput:
    ps = as_domain(ps)
    return ConstructionOutput(
        tensor=random_sign_tensor(n, ps.m, rng_seed),
        spec=MultilinearSpec(ps),
        norm_upper_bound=None,
        norm_upper_bound_formula="none",
        family="random-sign",
        n=n,
    )


FAMILIES = ("diagonal", "diagonal-vector", "fourier", "random-sign")


def build(family: str, n: int, ps, u=None, q=None, seed: int = 42) -> ConstructionOutput:
    if family == "diagonal":
        return diagonal_scalar(n, ps)
    if family == "diagonal-vector":
        return diagonal_vector(n, ps, _need(u, family), q=q)
    if family == "fourier":
        return fourier_vector(n, ps, _need(u, family), q=q)
    if family == "random-sign":
        return random_sign(n, ps, seed)
    raise InvalidParams(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def _need(u, family: str) -> ExtExponent:
    if u is None:
        raise InvalidParams(f"family {family!r} needs a target exponent u")
    return as_exponent(u)
