"""Dimension sweeps, inequality ratios and log-log growth fits.

Optimality is read off the slope of ``log(ratio)`` against ``log(n)``: at the
optimal exponent the ratio stays bounded (slope ~ 0), below it the ratio
grows like a positive power of ``n``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import constructions
from .constructions import ConstructionOutput
from .errors import Degenerate, InvalidParams, PreconditionViolated
from .exponents import (
    HALF,
    ExponentResult,
    ExtExponent,
    as_domain,
    as_exponent,
    lambda_exponent,
    lp_valued_exponent,
    praciano_exponent,
)
from .normest import EstimatorConfig, brute_force_norm, estimate_norm
from .tensors import CoefficientTensor, MultilinearSpec, coefficient_sum, mixed_sum

DEFAULT_GRID = (4, 8, 16, 32)
SLOPE_TOL = 0.05
RATIO_TOL = 1.05


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    max_residual: float


@dataclass(frozen=True)
class SweepResult:
    n_values: tuple
    lhs_values: tuple
    norm_values: tuple
    ratio_values: tuple
    norm_source: str = "estimate"

    def __post_init__(self):
        k = len(self.n_values)
        if not (len(self.lhs_values) == len(self.norm_values) == len(self.ratio_values) == k):
            raise InvalidParams("sweep columns must have equal length")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "lhs", "norm", "ratio"])
        for row in zip(self.n_values, self.lhs_values, self.norm_values, self.ratio_values):
            w.writerow([row[0]] + [repr(float(v)) for v in row[1:]])
        return buf.getvalue()


def fit_growth(xs: Sequence, ys: Sequence) -> GrowthFit:
    """Least-squares line through ``(log x, log y)``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise Degenerate("need at least 3 (x, y) pairs of equal length")
    if np.any(np.diff(x) <= 0) or np.any(x <= 0):
        raise Degenerate("xs must be positive and strictly increasing")
    if np.any(~np.isfinite(y)) or np.any(y <= 0):
        raise Degenerate("ys must be finite and positive")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return GrowthFit(float(slope), float(intercept), float(np.max(np.abs(resid))))


def _norm_value(T, spec, source, cfg, bound, grid_density):
    if source == "estimate":
        return estimate_norm(T, spec, cfg).value
    if source == "analytic":
        if bound is None:
            raise InvalidParams("no analytic norm bound available for this input")
        return bound
    if source == "oracle":
        return brute_force_norm(T, spec, grid_density)
    raise InvalidParams(f"unknown norm source {source!r}")


def verify_inequality(
    construction,
    t,
    cfg: EstimatorConfig | None = None,
    *,
    spec: MultilinearSpec | None = None,
    norm: str = "estimate",
    grid_density: int = 8,
) -> float:
    """``coefficient_sum(T, t) / ||T||``.

    ``norm`` picks the denominator: ``"estimate"`` (a lower bound on the
    norm, so the ratio is conservative), ``"analytic"`` (the construction's
    upper bound) or ``"oracle"`` (brute force, tiny tensors only).
    """
    if isinstance(construction, ConstructionOutput):
        T, spec, bound = construction.tensor, construction.spec, construction.norm_upper_bound
    else:
        T, bound = construction, None
        if spec is None:
            raise InvalidParams("a bare tensor needs an explicit spec")
    lhs = coefficient_sum(T, spec, t)
    if lhs == 0:
        return 0.0
    return lhs / _norm_value(T, spec, norm, cfg, bound, grid_density)


@dataclass(frozen=True)
class Family:
    """A construction family with fixed exponents, instantiated per ``n``."""

    name: str
    ps: object
    u: object = None
    q: object = None
    seed: int = 42

    def __post_init__(self):
        if self.name not in constructions.FAMILIES:
            raise InvalidParams(f"unknown family {self.name!r}")
        object.__setattr__(self, "ps", as_domain(self.ps))
        if self.u is not None:
            object.__setattr__(self, "u", as_exponent(self.u))
            object.__setattr__(self, "q", as_exponent(self.u if self.q is None else self.q))
        elif self.name in ("diagonal-vector", "fourier"):
            raise InvalidParams(f"family {self.name!r} needs u")

    def build(self, n: int) -> ConstructionOutput:
        return constructions.build(self.name, n, self.ps, self.u, self.q, seed=self.seed + n)

    @property
    def has_analytic_bound(self) -> bool:
        return self.name != "random-sign"

    def predicted(self) -> ExponentResult:
        """The optimal exponent from the calculus for this family's setting."""
        if self.name in ("diagonal", "random-sign"):
            return praciano_exponent(self.ps)
        return lp_valued_exponent(self.u, self.q, self.ps)

    def witness_exponent(self) -> ExtExponent:
        """Exponent at which coefficient sum and analytic bound grow alike."""
        s = self.ps.sum_recip()
        if self.name == "diagonal":
            return lambda_exponent(1, self.ps)
        if self.name == "diagonal-vector":
            return ExtExponent(self.u.recip - s)
        if self.name == "fourier":
            return ExtExponent(HALF + self.u.recip - self.q.recip - s)
        return praciano_exponent(self.ps).rho

    def params(self) -> dict:
        out = {"p": str(self.ps)}
        if self.u is not None:
            out.update(u=str(self.u), q=str(self.q))
        if self.name == "random-sign":
            out["seed"] = self.seed
        return out


def sweep(
    family: Family,
    t,
    n_grid: Sequence[int] = DEFAULT_GRID,
    cfg: EstimatorConfig | None = None,
    norm: str | None = None,
) -> SweepResult:
    """Coefficient sums, norms and ratios of ``family`` over ``n_grid``."""
    if len(n_grid) < 3:
        raise InvalidParams("a sweep needs at least 3 dimensions")
    norm = norm or ("analytic" if family.has_analytic_bound else "estimate")
    lhs, nrm = [], []
    for n in n_grid:
        c = family.build(n)
        lhs.append(coefficient_sum(c.tensor, c.spec, t))
        nrm.append(_norm_value(c.tensor, c.spec, norm, cfg, c.norm_upper_bound, 8))
    ratios = [a / b for a, b in zip(lhs, nrm)]
    return SweepResult(tuple(n_grid), tuple(lhs), tuple(nrm), tuple(ratios), norm)


def optimality_slope(
    family: Family,
    t,
    n_grid: Sequence[int] = DEFAULT_GRID,
    cfg: EstimatorConfig | None = None,
    norm: str | None = None,
) -> GrowthFit:
    """Slope of ``log(ratio)`` against ``log(n)``; analytic bounds when available."""
    if len(n_grid) < 4:
        raise InvalidParams("optimality_slope needs a grid of at least 4 dimensions")
    res = sweep(family, t, n_grid, cfg, norm)
    return fit_growth(res.n_values, res.ratio_values)


def _random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def mixed_sum_check(
    ps,
    q,
    trials: int,
    n: int,
    cfg: EstimatorConfig | None = None,
    *,
    norm: str = "estimate",
    grid_density: int = 8,
) -> float:
    """Worst ``max_j mixed_sum(j, q, lambda) / ||T||`` over random scalar tensors.

    ``lambda`` comes from ``1/lambda = 1 - sum 1/p_j``.  For scalars the
    ratio should stay below ``sqrt(2)^(m-1)``.
    """
    cfg = cfg or EstimatorConfig()
    ps = as_domain(ps)
    q = as_exponent(q)
    s = ps.sum_recip()
    if not s < 1 - q.recip:
        raise PreconditionViolated(f"need sum 1/p_j < 1 - 1/q, got {s}")
    lam = lambda_exponent(1, ps)
    spec = MultilinearSpec(ps)
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(trials):
        T = CoefficientTensor(_random_complex(rng, (n,) * ps.m))
        denom = _norm_value(T, spec, norm, cfg, None, grid_density)
        top = max(mixed_sum(T, spec, j, q, lam).value for j in range(1, ps.m + 1))
        worst = max(worst, top / denom)
    return worst


def chevet_bound_exponent(ps) -> Fraction | float:
    """``1/lambda + (m-1)/2``: growth bound for random-sign form norms."""
    ps = as_domain(ps)
    return lambda_exponent(1, ps).recip + Fraction(ps.m - 1, 2)


def sample_seed(base: int, n: int, k: int) -> int:
    return int(np.random.SeedSequence([base, n, k]).generate_state(1)[0])


def chevet_growth(
    m: int,
    ps,
    n_grid: Sequence[int] = DEFAULT_GRID,
    samples: int = 32,
    cfg: EstimatorConfig | None = None,
) -> GrowthFit:
    """Fit the growth of the mean norm of random-sign m-linear forms."""
    cfg = cfg or EstimatorConfig()
    ps = as_domain(ps)
    if ps.m != m:
        raise InvalidParams(f"got {ps.m} exponents for m={m}")
    if any(not p.recip < HALF for p in ps):
        raise PreconditionViolated("every p_j must exceed 2")
    spec = MultilinearSpec(ps)
    means = []
    for n in n_grid:
        vals = [
            estimate_norm(constructions.random_sign_tensor(n, m, sample_seed(cfg.seed, n, k)), spec, cfg).value
            for k in range(samples)
        ]
        means.append(float(np.mean(vals)))
    return fit_growth(n_grid, means)


@dataclass
class GrowthReport:
    family: str
    params: dict
    t: str
    slope: float
    expected_exponent: str
    expected_slope: float | None
    norm_source: str
    bounded: bool
    pass_: bool = field(default=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("pass_")
        return d


def growth_report(
    family: Family,
    t,
    n_grid: Sequence[int] = DEFAULT_GRID,
    cfg: EstimatorConfig | None = None,
) -> tuple[GrowthReport, SweepResult]:
    """Sweep, fit and compare against the calculus.

    ``pass`` means the ratio stays bounded (slope <= SLOPE_TOL); below the
    optimal exponent a failing result is the expected outcome.
    """
    t = as_exponent(t)
    res = sweep(family, t, n_grid, cfg)
    fit = fit_growth(res.n_values, res.ratio_values)
    expected_slope = None
    if res.norm_source == "analytic":
        expected_slope = float(t.recip) - float(family.witness_exponent().recip)
    try:
        expected = str(family.predicted().rho)
    except (PreconditionViolated, InvalidParams) as exc:
        expected = f"undefined ({exc})"
    bounded = fit.slope <= SLOPE_TOL
    report = GrowthReport(
        family=family.name,
        params=family.params(),
        t=str(t),
        slope=fit.slope,
        expected_exponent=expected,
        expected_slope=expected_slope,
        norm_source=res.norm_source,
        bounded=bounded,
        pass_=bounded,
    )
    return report, res


def ratios_nonincreasing(ratios: Sequence[float], rel: float = RATIO_TOL - 1) -> bool:
    """Each ratio is at most ``(1 + rel)`` times its predecessor."""
    return all(b <= a * (1 + rel) for a, b in zip(ratios, ratios[1:]))
