"""Dense coefficient tensors of m-linear maps between finite l_p spaces.

A map ``T: C^{n_1} x ... x C^{n_m} -> C`` (or ``-> C^d``) is stored through
its coefficients ``a[i_1, ..., i_m] = T(e_{i_1}, ..., e_{i_m})``.  For a
vector-valued map the trailing axis holds the ``d`` target coordinates.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, InvalidParams
from .exponents import DomainVector, ExtExponent, as_domain, as_exponent


@dataclass(frozen=True, eq=False)
class CoefficientTensor:
    """Immutable dense complex coefficient array.

    ``target_dim == 0`` means scalar-valued; otherwise the last axis of
    ``entries`` has length ``target_dim``.
    """

    entries: np.ndarray
    target_dim: int = 0

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128, order="C", copy=True)
        if self.target_dim < 0:
            raise InvalidParams("target_dim must be >= 0")
        min_ndim = 2 if self.target_dim else 1
        if arr.ndim < min_ndim:
            raise DimensionMismatch(f"entries need at least {min_ndim} axes")
        if self.target_dim and arr.shape[-1] != self.target_dim:
            raise DimensionMismatch(
                f"last axis has length {arr.shape[-1]}, expected target_dim={self.target_dim}"
            )
        if any(n < 1 for n in arr.shape):
            raise DimensionMismatch("every extent must be positive")
        if not np.all(np.isfinite(arr)):
            raise InvalidParams("tensor entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def is_vector(self) -> bool:
        return self.target_dim > 0

    @property
    def m(self) -> int:
        return self.entries.ndim - (1 if self.is_vector else 0)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.entries.shape[: self.m])

    def scale(self, c: complex) -> "CoefficientTensor":
        return CoefficientTensor(self.entries * c, self.target_dim)

    def to_dict(self) -> dict:
        flat = self.entries.reshape(-1)
        return {
            "m": self.m,
            "dims": list(self.dims),
            "target_dim": self.target_dim,
            "entries": [[float(z.real), float(z.imag)] for z in flat],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CoefficientTensor":
        try:
            m = int(data["m"])
            dims = [int(n) for n in data["dims"]]
            target_dim = int(data.get("target_dim", 0))
            raw = np.asarray(data["entries"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed tensor document: {exc}") from exc
        if len(dims) != m:
            raise ValueError(f"m={m} but {len(dims)} dims given")
        shape = tuple(dims) + ((target_dim,) if target_dim else ())
        expected = int(np.prod(shape))
        if raw.shape != (expected, 2):
            raise ValueError(f"expected {expected} [re, im] pairs, got array of shape {raw.shape}")
        return cls((raw[:, 0] + 1j * raw[:, 1]).reshape(shape), target_dim)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CoefficientTensor":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValueError("tensor document must be a JSON object")
        return cls.from_dict(data)


def as_tensor(obj) -> CoefficientTensor:
    if isinstance(obj, CoefficientTensor):
        return obj
    tensor = getattr(obj, "tensor", None)
    if isinstance(tensor, CoefficientTensor):
        return tensor
    return CoefficientTensor(obj)


@dataclass(frozen=True)
class MultilinearSpec:
    """Domain exponents and target descriptor.

    ``u is None`` means scalar-valued.  ``q`` is the norm the coefficient
    vectors are measured in; it defaults to ``u``.
    """

    ps: DomainVector
    u: ExtExponent | None = None
    q: ExtExponent | None = None

    def __post_init__(self):
        object.__setattr__(self, "ps", as_domain(self.ps))
        if self.u is not None:
            u = as_exponent(self.u)
            object.__setattr__(self, "u", u)
            q = u if self.q is None else as_exponent(self.q)
            if q < u:
                raise InvalidParams(f"need u <= q, got u={u}, q={q}")
            object.__setattr__(self, "q", q)
        elif self.q is not None:
            object.__setattr__(self, "q", as_exponent(self.q))

    @property
    def m(self) -> int:
        return self.ps.m

    @property
    def is_vector(self) -> bool:
        return self.u is not None

    def check(self, T: CoefficientTensor) -> None:
        if T.m != self.m:
            raise DimensionMismatch(f"tensor has arity {T.m}, spec has {self.m} exponents")
        if T.is_vector != self.is_vector:
            kind = "vector" if T.is_vector else "scalar"
            raise DimensionMismatch(f"{kind}-valued tensor does not match the spec's target")


@dataclass(frozen=True)
class MixedSumReport:
    j: int
    inner_exponent: ExtExponent
    outer_exponent: ExtExponent
    value: float


def lq_norm(v, q, axis=None) -> float | np.ndarray:
    """``(sum |v_i|^q)^(1/q)``; ``q = inf`` gives the max modulus.

    With ``axis`` set the reduction runs along that axis only.
    """
    q = as_exponent(q)
    a = np.abs(np.asarray(v, dtype=np.complex128))
    if a.size == 0:
        return 0.0
    if q.is_infinite:
        return a.max(axis=axis)
    # rescale by the max modulus to keep |v|^q representable
    peak = a.max(axis=axis, keepdims=True)
    safe = np.where(peak > 0, peak, 1.0)
    ratio = (a / safe) ** float(q.value)
    out = np.sum(ratio, axis=axis, keepdims=True) ** float(q.recip) * peak
    if axis is None:
        return float(out.reshape(()))
    return np.squeeze(out, axis=axis)


def fiber_norms(T: CoefficientTensor, spec: MultilinearSpec | None = None) -> np.ndarray:
    """Array of shape ``dims`` with ``|a_i|`` or ``||a_i||_{l_q}``."""
    if not T.is_vector:
        return np.abs(T.entries)
    if spec is None or spec.q is None:
        raise InvalidParams("vector-valued coefficient norms need spec.q")
    return lq_norm(T.entries, spec.q, axis=-1)


def evaluate(T: CoefficientTensor, xs: Sequence) -> complex | np.ndarray:
    """``sum a_{i_1..i_m} x^1_{i_1} ... x^m_{i_m}`` (a vector if ``T`` is)."""
    T = as_tensor(T)
    if len(xs) != T.m:
        raise DimensionMismatch(f"expected {T.m} arguments, got {len(xs)}")
    out = T.entries
    for j, x in enumerate(xs):
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (T.dims[j],):
            raise DimensionMismatch(f"argument {j + 1} has shape {x.shape}, expected ({T.dims[j]},)")
        out = np.tensordot(x, out, axes=(0, 0))
    if T.is_vector:
        return np.asarray(out)
    return complex(out)


def coefficient_sum(T: CoefficientTensor, spec: MultilinearSpec | None, t) -> float:
    """``(sum_i ||a_i||^t)^(1/t)`` over all multi-indices."""
    T = as_tensor(T)
    return float(lq_norm(fiber_norms(T, spec), t))


def mixed_sum(T: CoefficientTensor, spec: MultilinearSpec | None, j: int, q, lam) -> MixedSumReport:
    """Fix index position ``j`` (1-based), take the ``l_q`` norm over all the
    other indices, then the ``l_lam`` norm over the fixed index."""
    T = as_tensor(T)
    if not 1 <= j <= T.m:
        raise IndexOutOfRange(f"j={j} outside 1..{T.m}")
    q = as_exponent(q)
    lam = as_exponent(lam)
    f = np.moveaxis(fiber_norms(T, spec), j - 1, 0)
    inner = lq_norm(f.reshape(f.shape[0], -1), q, axis=1)
    return MixedSumReport(j, q, lam, float(lq_norm(inner, lam)))


def report_to_csv(pairs: Mapping | Sequence[tuple]) -> str:
    """Header row then one ``name,value`` line per entry."""
    items = pairs.items() if isinstance(pairs, Mapping) else pairs
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "value"])
    for name, value in items:
        w.writerow([name, value])
    return buf.getvalue()
