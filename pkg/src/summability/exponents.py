"""Closed-form exponent calculus for coefficient summability on l_p spaces.

Every exponent ``p`` in ``[1, inf]`` is carried as its reciprocal ``1/p`` in
``[0, 1]`` so that ``p = inf`` is just ``recip == 0``.  Reciprocals are
``Fraction`` whenever the inputs were exact; floats are accepted as a
fallback, in which case region membership is decided with an absolute
tolerance of ``TOL`` on the reciprocal scale.

Region boundaries follow the strict/non-strict inequalities of each case
verbatim, so a tie at a closed endpoint goes to the case that owns it.  When
two enumerated cases overlap (e.g. ``q = 2`` belongs to both the ``q <= 2``
and the ``u <= 2 <= q`` tables) the later case in the enumeration supplies
the label; the formulas agree on every overlap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Sequence, Union

from .errors import InvalidParams, OutOfRegion, PreconditionViolated

TOL = 1e-12
HALF = Fraction(1, 2)

Recip = Union[Fraction, float]


def _exact(*xs: Recip) -> bool:
    return not any(isinstance(x, float) for x in xs)


def _lt(x: Recip, y: Recip) -> bool:
    if isinstance(x, float) or isinstance(y, float):
        return x < y - TOL
    return x < y


def _le(x: Recip, y: Recip) -> bool:
    if isinstance(x, float) or isinstance(y, float):
        return x <= y + TOL
    return x <= y


def _normalize_recip(r) -> Recip:
    if type(r) is Fraction:
        # integer comparison is much cheaper than Fraction ordering
        if not 0 <= r.numerator <= r.denominator:
            raise InvalidParams(f"reciprocal {r} outside [0, 1]")
        return r
    if isinstance(r, bool):
        raise TypeError("exponent reciprocal cannot be a bool")
    if isinstance(r, int):
        r = Fraction(r)
    if isinstance(r, Fraction):
        if not 0 <= r <= 1:
            raise InvalidParams(f"reciprocal {r} outside [0, 1]")
        return r
    r = float(r)
    if math.isnan(r) or r < -TOL or r > 1 + TOL:
        raise InvalidParams(f"reciprocal {r} outside [0, 1]")
    return min(max(r, 0.0), 1.0)


@total_ordering
@dataclass(frozen=True)
class ExtExponent:
    """An exponent ``p`` in ``[1, inf]`` stored as ``recip = 1/p``.

    Ordering and comparisons are by ``p`` itself, so ``ExtExponent.of(2) <
    ExtExponent.INF``.
    """

    recip: Recip

    def __post_init__(self):
        object.__setattr__(self, "recip", _normalize_recip(self.recip))

    @classmethod
    def of(cls, p) -> "ExtExponent":
        """Build from the exponent value ``p`` (number, ``"a/b"``, ``"inf"``)."""
        if isinstance(p, ExtExponent):
            return p
        if isinstance(p, str):
            return cls.parse(p)
        if isinstance(p, bool):
            raise TypeError("exponent cannot be a bool")
        if isinstance(p, (int, Fraction)):
            if p < 1:
                raise InvalidParams(f"exponent {p} is below 1")
            return cls(Fraction(1) / Fraction(p))
        p = float(p)
        if math.isinf(p) and p > 0:
            return cls(Fraction(0))
        if math.isnan(p) or p < 1 - TOL:
            raise InvalidParams(f"exponent {p} is below 1")
        return cls(1.0 / p)

    @classmethod
    def parse(cls, text: str) -> "ExtExponent":
        s = text.strip().lower()
        if s in ("inf", "infinity", "+inf", "oo", "∞"):
            return cls(Fraction(0))
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParams(f"cannot parse exponent {text!r}") from exc
        return cls.of(value)

    @property
    def is_infinite(self) -> bool:
        return self.recip == 0

    @property
    def is_exact(self) -> bool:
        return isinstance(self.recip, Fraction)

    @property
    def value(self):
        """The exponent ``p`` itself: Fraction, float, or ``math.inf``."""
        if self.recip == 0:
            return math.inf
        if isinstance(self.recip, Fraction):
            return 1 / self.recip
        return 1.0 / self.recip

    def conjugate(self) -> "ExtExponent":
        return ExtExponent(1 - self.recip)

    def __float__(self) -> float:
        return float(self.value)

    def __lt__(self, other) -> bool:
        if not isinstance(other, ExtExponent):
            other = ExtExponent.of(other)
        return self.recip > other.recip

    def __str__(self) -> str:
        if self.recip == 0:
            return "inf"
        v = self.value
        if isinstance(v, Fraction):
            return str(v)
        return repr(v)


INF = ExtExponent(Fraction(0))
ONE = ExtExponent(Fraction(1))
TWO = ExtExponent(HALF)


def as_exponent(x) -> ExtExponent:
    return ExtExponent.of(x)


@dataclass(frozen=True)
class DomainVector:
    """Domain exponents ``(p_1, ..., p_m)``."""

    ps: tuple

    def __post_init__(self):
        ps = tuple(as_exponent(p) for p in self.ps)
        if not ps:
            raise InvalidParams("a domain vector needs at least one exponent")
        object.__setattr__(self, "ps", ps)

    @classmethod
    def parse(cls, text: str) -> "DomainVector":
        return cls(tuple(ExtExponent.parse(t) for t in text.split(",") if t.strip()))

    @classmethod
    def uniform(cls, p, m: int) -> "DomainVector":
        if m < 1:
            raise InvalidParams(f"arity m={m} must be >= 1")
        return cls((as_exponent(p),) * m)

    @property
    def m(self) -> int:
        return len(self.ps)

    def sum_recip(self) -> Recip:
        total: Recip = Fraction(0)
        for p in self.ps:
            total = total + p.recip
        return total

    def __len__(self) -> int:
        return len(self.ps)

    def __iter__(self):
        return iter(self.ps)

    def __getitem__(self, i):
        return self.ps[i]

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.ps)


def as_domain(ps) -> DomainVector:
    if isinstance(ps, DomainVector):
        return ps
    if isinstance(ps, str):
        return DomainVector.parse(ps)
    return DomainVector(tuple(ps))


class Case(str, enum.Enum):
    I_A = "I_A"
    I_B = "I_B"
    II_A = "II_A"
    II_B = "II_B"
    III = "III"
    LAMBDA_REGIME = "LAMBDA_REGIME"
    MU_REGIME = "MU_REGIME"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ExponentResult:
    rho: ExtExponent | None
    case: Case
    optimality_known: bool
    applicability: bool = True


def _from_recip(r: Recip) -> ExtExponent:
    return ExtExponent(r)


def _maybe_exponent(r: Recip) -> ExtExponent | None:
    # formulas evaluated outside their region can leave [0, 1]
    if type(r) is Fraction:
        if not 0 <= r.numerator <= r.denominator:
            return None
    elif _lt(r, 0) or _lt(1, r):
        return None
    return ExtExponent(r)


# -- basic identities -------------------------------------------------------


def lambda_exponent(r, ps) -> ExtExponent:
    """``1/lambda = 1/r - sum 1/p_j``; requires ``sum 1/p_j < 1/r``."""
    r = as_exponent(r)
    ps = as_domain(ps)
    s = ps.sum_recip()
    if not _lt(s, r.recip):
        raise PreconditionViolated(
            f"sum of 1/p_j = {s} must be strictly below 1/r = {r.recip}"
        )
    return _from_recip(r.recip - s)


def mu_exponent(lam, q, m: int) -> ExtExponent:
    """``1/mu = 1/(m lambda) + (m-1)/(m q)``."""
    if m < 1:
        raise InvalidParams(f"arity m={m} must be >= 1")
    lam = as_exponent(lam)
    q = as_exponent(q)
    return _from_recip(lam.recip / m + (m - 1) * q.recip / m)


def multilinear_exponent(r, q, ps) -> ExponentResult:
    """Summability exponent for ``v`` ``(r,1)``-summing into a cotype ``q`` space.

    Returns ``lambda`` (tag ``LAMBDA_REGIME``) when ``lambda >= q`` and ``mu``
    (tag ``MU_REGIME``) otherwise.
    """
    r = as_exponent(r)
    q = as_exponent(q)
    ps = as_domain(ps)
    if _lt(r.recip, q.recip):
        raise InvalidParams(f"need r <= q, got r={r}, q={q}")
    lam = lambda_exponent(r, ps)
    if _le(lam.recip, q.recip):
        return ExponentResult(lam, Case.LAMBDA_REGIME, False)
    return ExponentResult(mu_exponent(lam, q, ps.m), Case.MU_REGIME, False)


def bennett_carl_r(u, q) -> ExtExponent:
    """Optimal ``r`` such that the inclusion ``l_u -> l_q`` is ``(r,1)``-summing."""
    u = as_exponent(u)
    q = as_exponent(q)
    if _lt(u.recip, q.recip):
        raise InvalidParams(f"need u <= q, got u={u}, q={q}")
    if _lt(HALF, q.recip):
        return _from_recip(HALF + u.recip - q.recip)
    return u


def cotype_of_lq(q) -> ExtExponent:
    """``max(q, 2)``.  ``q = inf`` gives ``INF``: check ``.is_infinite``."""
    q = as_exponent(q)
    return _from_recip(min(q.recip, HALF))


def zalduendo_exponent(p, m: int) -> ExtExponent:
    """Diagonal exponent ``p/(p-m)`` for ``sum |P(e_i)|``; equals 1 on ``c_0``."""
    if m < 1:
        raise InvalidParams(f"degree m={m} must be >= 1")
    p = as_exponent(p)
    if not _lt(m * p.recip, 1):
        raise PreconditionViolated(f"need m < p, got p={p}, m={m}")
    return _from_recip(1 - m * p.recip)


# -- case tables -------------------------------------------------------------


def praciano_exponent(ps) -> ExponentResult:
    """Optimal exponent for scalar m-linear forms on ``l_p1 x ... x l_pm``."""
    ps = as_domain(ps)
    s = ps.sum_recip()
    if not _lt(s, 1):
        raise PreconditionViolated(
            f"sum of 1/p_j = {s} >= 1: the diagonal form has infinitely many "
            "unit coefficients, so no summability exponent exists "
            "(the condition sum 1/p_j < 1 is necessary)"
        )
    res = multilinear_exponent(ONE, TWO, ps)
    return ExponentResult(res.rho, res.case, True)


def _scaled(a, b, rs):
    """Recips as integers over a common even denominator ``d`` when all are exact.

    Falls back to ``d = 1`` with the values themselves; either way
    ``value / d`` recovers the reciprocal.
    """
    if type(a) is Fraction and type(b) is Fraction and all(type(r) is Fraction for r in rs):
        d = math.lcm(2, a.denominator, b.denominator, *(r.denominator for r in rs))
        ints = [x.numerator * (d // x.denominator) for x in (a, b, *rs)]
        return ints[0], ints[1], sum(ints[2:]), d
    return a, b, sum(rs, Fraction(0)), 1


def _unscale(x, d):
    return Fraction(x, d) if type(x) is int else x / d


def _lp_rows(u, q, ps):
    """``(case, formula, optimal, applicable)`` rows; formulas stay unevaluated."""
    u = as_exponent(u)
    q = as_exponent(q)
    ps = as_domain(ps)
    if _lt(u.recip, q.recip):
        raise InvalidParams(f"need u <= q, got u={u}, q={q}")
    # everything below is scaled by d; h is one half
    a, b, s, d = _scaled(u.recip, q.recip, [p.recip for p in ps.ps])
    m = ps.m
    h = d / 2 if d == 1 else d // 2
    ab, ah = a - b, a - h

    table_1 = _le(h, b)  # 1 <= u <= q <= 2
    table_2 = _le(h, a) and _le(b, h)  # u <= 2 <= q
    table_3 = _le(a, h)  # 2 <= u <= q
    s_lt_a = _lt(s, a)
    return [
        (Case.I_A, lambda: _unscale(h * m + ab - s, d * m), True, table_1 and _lt(s, ab)),
        (
            Case.I_B,
            lambda: _unscale(h + ab - s, d),
            _lt(s, h),
            table_1 and _le(ab, s) and _lt(s, h + ab),
        ),
        (Case.II_A, lambda: _unscale(h * m + ah - s, d * m), False, table_2 and _lt(s, ah)),
        (Case.II_B, lambda: _unscale(a - s, d), True, table_2 and _le(ah, s) and s_lt_a),
        (Case.III, lambda: _unscale(a - s, d), True, table_3 and s_lt_a),
    ]


def _evaluate_rows(rows, only_applicable: bool) -> list[ExponentResult]:
    return [
        ExponentResult(_maybe_exponent(f()), case, opt, ok)
        for case, f, opt, ok in rows
        if ok or not only_applicable
    ]


def lp_valued_cases(u, q, ps) -> list[ExponentResult]:
    """Evaluate every case formula of the ``l_u``-valued table.

    Each entry carries its own ``applicability``; ``rho`` is ``None`` when
    the formula leaves ``[1, inf]`` at these parameters.  Used both for
    selection and for boundary-continuity checks.
    """
    return _evaluate_rows(_lp_rows(u, q, ps), False)


def _select(cases: Sequence[ExponentResult], what: str) -> ExponentResult:
    hits = [c for c in cases if c.applicability and c.rho is not None]
    if not hits:
        raise OutOfRegion(f"no case of the {what} table applies to these parameters")
    chosen = hits[-1]
    # overlapping cases share the formula; any optimal one certifies it
    optimal = any(c.optimality_known for c in hits)
    return ExponentResult(chosen.rho, chosen.case, optimal, True)


def lp_valued_exponent(u, q, ps) -> ExponentResult:
    """Exponent ``rho`` for ``T: l_p1 x ... x l_pm -> l_u`` measured in ``l_q``."""
    return _select(_evaluate_rows(_lp_rows(u, q, ps), True), "l_u-valued")


def polynomial_exponent(u, q, p, m: int) -> ExponentResult:
    """Same table for m-homogeneous polynomials on ``l_p``: all ``p_j = p``."""
    if m < 1:
        raise InvalidParams(f"degree m={m} must be >= 1")
    return lp_valued_exponent(u, q, DomainVector.uniform(p, m))


def kwapien_r(q) -> ExtExponent:
    """Every operator ``l_1 -> l_q`` is ``(r,1)``-summing, ``1/r = 1 - |1/q - 1/2|``."""
    q = as_exponent(q)
    return _from_recip(1 - abs(q.recip - HALF))


def kwapien_cases(q, ps) -> list[ExponentResult]:
    q = as_exponent(q)
    ps = as_domain(ps)
    b, s, m = q.recip, ps.sum_recip(), ps.m
    table_1 = _le(HALF, b)
    table_2 = _le(b, HALF)
    return [
        ExponentResult(
            _maybe_exponent((m + 2 - 2 * (b + s)) / (2 * m)),
            Case.I_A,
            False,
            table_1 and _lt(s, 1 - b),
        ),
        ExponentResult(
            _maybe_exponent(Fraction(3, 2) - b - s),
            Case.I_B,
            False,
            table_1 and _le(1 - b, s) and _lt(s, Fraction(3, 2) - b),
        ),
        ExponentResult(
            _maybe_exponent((HALF + m * b - s) / m),
            Case.II_A,
            False,
            table_2 and _lt(s, HALF),
        ),
        ExponentResult(
            _maybe_exponent(HALF + b - s),
            Case.II_B,
            False,
            table_2 and _le(HALF, s) and _lt(s, HALF + b),
        ),
    ]


def kwapien_exponent(q, ps) -> ExponentResult:
    """Exponent for ``v a_i`` with ``T`` into ``l_1`` and any ``v: l_1 -> l_q``."""
    return _select(kwapien_cases(q, ps), "Kwapien")


__all__ = [
    "TOL",
    "ExtExponent",
    "DomainVector",
    "Case",
    "ExponentResult",
    "INF",
    "ONE",
    "TWO",
    "as_exponent",
    "as_domain",
    "lambda_exponent",
    "mu_exponent",
    "multilinear_exponent",
    "bennett_carl_r",
    "cotype_of_lq",
    "zalduendo_exponent",
    "praciano_exponent",
    "lp_valued_cases",
    "lp_valued_exponent",
    "polynomial_exponent",
    "kwapien_r",
    "kwapien_cases",
    "kwapien_exponent",
]
