"""Classical exact bounds: one-sided limits, Clopper-Pearson, tail p-values.

The upper bound b_alpha(x) is the unique theta with F_theta(x) = alpha
(+inf when x is the support maximum); the lower bound a_alpha(x) solves
P_theta(X >= x) = alpha (-inf when x is the support minimum). Both come from
a bracketed bisection on theta: F_theta(x) is continuous and strictly
decreasing in theta, so the initial bracket grows from the plateau endpoints
by doubling unit steps until it straddles the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadAlpha, DivergentSearch, OutOfSupport
from .family import LatticeFamily, plateau
from .models import Model

THETA_TOL = 1e-10
CDF_TOL = 1e-12


def _unpack(obj) -> tuple[LatticeFamily, callable]:
    if isinstance(obj, Model):
        return obj.family, obj.to_natural
    if isinstance(obj, LatticeFamily):
        return obj, lambda t: t
    raise TypeError(f"expected a Model or LatticeFamily, got {type(obj).__name__}")


def _family(obj) -> LatticeFamily:
    return _unpack(obj)[0]


def _check_alpha(alpha) -> float:
    if not isinstance(alpha, (int, float)) or not 0.0 < float(alpha) < 1.0:
        raise BadAlpha(f"alpha must lie strictly between 0 and 1, got {alpha!r}")
    return float(alpha)


@dataclass(frozen=True)
class ConfidenceInterval:
    """A closed parameter interval on both the canonical and natural scales.

    ``pvalue_lo`` / ``pvalue_hi`` hold the p-values achieved at the two
    endpoints; for root endpoints they sit at the target level, for jump
    endpoints of the Sterne construction they are the one-sided limit values.
    """

    method: str
    alpha: float
    theta_lo: float
    theta_hi: float
    natural_lo: float
    natural_hi: float
    pvalue_lo: float | None = None
    pvalue_hi: float | None = None
    delta: float | None = None


def _solve_decreasing_cdf(family: LatticeFamily, x: int, target: float, pivot: int) -> float:
    """Solve F_theta(x) = target in theta; F is strictly decreasing in theta.

    The bracket starts at the finite plateau endpoints of ``pivot`` and grows
    outward by doubling steps of size 1, then plain bisection runs to
    THETA_TOL on theta with early exit at CDF_TOL on the cdf gap.
    """
    p_lo, p_hi = plateau(family, pivot)
    lo = p_lo if math.isfinite(p_lo) else (p_hi - 1.0 if math.isfinite(p_hi) else -1.0)
    hi = p_hi if math.isfinite(p_hi) else (p_lo + 1.0 if math.isfinite(p_lo) else 1.0)

    step = 1.0
    while family.distribution(lo).cdf(x) < target:
        lo -= step
        step *= 2.0
        if step > 2.0**80:
            raise DivergentSearch("no lower bracket for the cdf equation")
    step = 1.0
    while family.distribution(hi).cdf(x) > target:
        hi += step
        step *= 2.0
        if step > 2.0**80:
            raise DivergentSearch("no upper bracket for the cdf equation")

    while hi - lo > THETA_TOL:
        mid = 0.5 * (lo + hi)
        val = family.distribution(mid).cdf(x)
        if abs(val - target) <= CDF_TOL:
            return mid
        if val > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def upper_bound(fam_or_model, x: int, alpha: float) -> float:
    """Exact upper confidence bound: the theta with F_theta(x) = alpha."""
    family = _family(fam_or_model)
    alpha = _check_alpha(alpha)
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    if x == family.support.hi:
        return math.inf
    return _solve_decreasing_cdf(family, int(x), alpha, int(x))


def lower_bound(fam_or_model, x: int, alpha: float) -> float:
    """Exact lower confidence bound: the theta with P_theta(X >= x) = alpha."""
    family = _family(fam_or_model)
    alpha = _check_alpha(alpha)
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    if x == family.support.lo:
        return -math.inf
    return _solve_decreasing_cdf(family, int(x) - 1, 1.0 - alpha, int(x))


def pvalue_left(fam_or_model, x: int, theta: float) -> float:
    """P_theta(X <= x), the left tail at the observed outcome."""
    family = _family(fam_or_model)
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    return family.distribution(theta).cdf(int(x))


def pvalue_right(fam_or_model, x: int, theta: float) -> float:
    """P_theta(X >= x), the right tail at the observed outcome."""
    family = _family(fam_or_model)
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    return family.distribution(theta).sf(int(x))


def pvalue_two(fam_or_model, x: int, theta: float) -> float:
    """Twice the smaller tail, capped at 1."""
    return min(
        1.0,
        2.0 * min(pvalue_left(fam_or_model, x, theta), pvalue_right(fam_or_model, x, theta)),
    )


def clopper_pearson(fam_or_model, x: int, alpha: float, **_ignored) -> ConfidenceInterval:
    """Equal-tail exact interval [a_{alpha/2}(x), b_{alpha/2}(x)]."""
    family, to_natural = _unpack(fam_or_model)
    alpha = _check_alpha(alpha)
    a = lower_bound(family, x, alpha / 2.0)
    b = upper_bound(family, x, alpha / 2.0)
    return ConfidenceInterval(
        method="clopper_pearson",
        alpha=alpha,
        theta_lo=a,
        theta_hi=b,
        natural_lo=to_natural(a),
        natural_hi=to_natural(b),
        pvalue_lo=pvalue_two(family, x, a),
        pvalue_hi=pvalue_two(family, x, b),
    )


def _admissible(family: LatticeFamily, theta: float) -> bool:
    if theta == math.inf:
        return family.support.bounded_above
    if theta == -math.inf:
        return family.support.bounded_below
    return True


def one_sided_interval(fam_or_model, x: int, alpha: float, side: str) -> ConfidenceInterval:
    """[a_alpha(x), +inf) for side="lower", (-inf, b_alpha(x)] for side="upper"."""
    family, to_natural = _unpack(fam_or_model)
    alpha = _check_alpha(alpha)
    if side == "lower":
        a, b = lower_bound(family, x, alpha), math.inf
        p_lo = pvalue_right(family, x, a) if _admissible(family, a) else None
        p_hi = pvalue_right(family, x, b) if _admissible(family, b) else None
    elif side == "upper":
        a, b = -math.inf, upper_bound(family, x, alpha)
        p_lo = pvalue_left(family, x, a) if _admissible(family, a) else None
        p_hi = pvalue_left(family, x, b) if _admissible(family, b) else None
    else:
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    return ConfidenceInterval(
        method=side,
        alpha=alpha,
        theta_lo=a,
        theta_hi=b,
        natural_lo=to_natural(a),
        natural_hi=to_natural(b),
        pvalue_lo=p_lo,
        pvalue_hi=p_hi,
    )
