"""Minimum-likelihood (Sterne) p-values and confidence bounds.

The two-sided p-value of an outcome x at parameter eta is the total mass of
all outcomes no more probable than x:

    pi(x, eta) = sum_y 1[f_eta(y) <= f_eta(x)] f_eta(y).

Under strict log-concavity of the weights, pi(x, .) is piecewise smooth with
one piece per support point k: on the closed plateau
[theta_{x-1,x}, theta_{x+1,x}] it equals 1; for k > x + 1 it equals
P(X >= k) + F(x) on (theta_{k-1,x}, theta_{k,x}]; for k < x - 1 it equals
P(X >= x) + F(k) on [theta_{k,x}, theta_{k+1,x}); past the last special
parameter only the single tail survives. At each special parameter the
function jumps down by the mass of the outcome k that enters the
more-probable set, so the confidence set {eta : pi(x, eta) > alpha} has its
endpoints either at a jump or at a root of the smooth piece.

``sterne_upper`` finds the upper endpoint in two stages: an integer binary
search over k for the last jump value above alpha (``stage_one``), then a
real bisection inside the following piece (``stage_two``) that stops once
both the bracket width and the p-value gap fall below delta. Lower endpoints
reuse the same machinery on the reflected family. The returned interval is
the closed hull of the confidence set, so its coverage is never below the
nominal level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import ConfidenceInterval, _check_alpha, _unpack, upper_bound
from .errors import BadDelta, DivergentSearch, OutOfSupport
from .family import LatticeFamily, reflect, special_param
from .models import Model

DEFAULT_DELTA = 1e-8
PROBE_CAP = 1 << 40


@dataclass(frozen=True)
class PValueEvaluation:
    """pi(x, eta) together with the piece that produced it.

    ``segment`` is the index k of the piece containing eta (k = x on the
    plateau, hi + 1 or lo - 1 past the last jump of a bounded side);
    ``at_jump`` flags eta lying exactly on a special parameter.
    """

    value: float
    segment: int
    at_jump: bool


@dataclass(frozen=True)
class SterneResult:
    """One confidence bound with the bracket that certified it.

    ``bound`` is the returned endpoint. For an upper bound it lies in
    [b, b + delta] where b is the exact endpoint, and ``achieved`` (the
    p-value at ``bound``, right limit at a jump) lies in [alpha - delta,
    alpha]; mirrored for lower bounds. ``at_jump`` marks endpoints returned
    exactly as a special parameter theta_{k_star, x}.
    """

    k_star: int | None
    bound: float
    bracket: tuple[float, float]
    bracket_pvalues: tuple[float, float]
    achieved: float
    at_jump: bool
    delta: float | None


def _check_delta(delta) -> float:
    if not isinstance(delta, (int, float)) or not math.isfinite(delta) or delta <= 0:
        raise BadDelta(f"delta must be a finite positive number, got {delta!r}")
    return float(delta)


def _clip(p: float) -> float:
    return min(1.0, max(0.0, p))


def sterne_pvalue(fam_or_model, x: int, eta: float) -> PValueEvaluation:
    """Evaluate pi(x, eta) through the piecewise form.

    eta may be +/-inf where the matching support endpoint is finite; there the
    family is a point mass and pi is 1 if x is that endpoint, else 0.
    """
    family, _ = _unpack(fam_or_model)
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    x = int(x)
    lo, hi = family.support.lo, family.support.hi
    if math.isinf(eta):
        # forces the admissibility check
        family.distribution(eta)
        if eta > 0:
            return PValueEvaluation(1.0 if x == hi else 0.0, int(hi) + 1, False)
        return PValueEvaluation(1.0 if x == lo else 0.0, int(lo) - 1, False)

    t_lo = special_param(family, x, x - 1)
    t_hi = special_param(family, x, x + 1)
    if t_lo <= eta <= t_hi:
        return PValueEvaluation(1.0, x, eta == t_lo or eta == t_hi)

    if eta > t_hi:
        k = _first_k_at_or_above(family, x, eta)
        d = family.distribution(eta)
        value = _clip(d.sf(k) + d.cdf(x))
        at = k <= hi and special_param(family, x, k) == eta
        return PValueEvaluation(value, k, at)

    k = _last_k_at_or_below(family, x, eta)
    d = family.distribution(eta)
    value = _clip(d.sf(x) + d.cdf(k))
    at = k >= lo and special_param(family, x, k) == eta
    return PValueEvaluation(value, k, at)


def _first_k_at_or_above(family: LatticeFamily, x: int, eta: float) -> int:
    """Smallest k >= x + 2 with theta_{k,x} >= eta (hi + 1 when none)."""
    hi = family.support.hi
    t = lambda k: special_param(family, x, k)
    lo_k = x + 2
    if family.support.bounded_above:
        hi_k = int(hi) + 1  # sentinel, theta = +inf >= eta always
        if lo_k > int(hi) or t(lo_k) >= eta:
            return min(lo_k, int(hi) + 1)
    else:
        if t(lo_k) >= eta:
            return lo_k
        step = 1
        while t(x + 2 + step) < eta:
            lo_k = x + 2 + step
            step *= 2
            if step > PROBE_CAP:
                raise DivergentSearch("special parameters do not reach eta")
        hi_k = x + 2 + step
    # t(lo_k) < eta <= t(hi_k)
    while hi_k - lo_k > 1:
        mid = (lo_k + hi_k) // 2
        if t(mid) >= eta:
            hi_k = mid
        else:
            lo_k = mid
    return hi_k


def _last_k_at_or_below(family: LatticeFamily, x: int, eta: float) -> int:
    """Largest k <= x - 2 with theta_{k,x} <= eta (lo - 1 when none)."""
    lo = family.support.lo
    t = lambda k: special_param(family, x, k)
    hi_k = x - 2
    if family.support.bounded_below:
        lo_k = int(lo) - 1  # sentinel, theta = -inf <= eta always
        if hi_k < int(lo) or t(hi_k) <= eta:
            return max(hi_k, int(lo) - 1)
    else:
        if t(hi_k) <= eta:
            return hi_k
        step = 1
        while t(x - 2 - step) > eta:
            hi_k = x - 2 - step
            step *= 2
            if step > PROBE_CAP:
                raise DivergentSearch("special parameters do not reach eta")
        lo_k = x - 2 - step
    # t(lo_k) <= eta < t(hi_k)
    while hi_k - lo_k > 1:
        mid = (lo_k + hi_k) // 2
        if t(mid) <= eta:
            lo_k = mid
        else:
            hi_k = mid
    return lo_k


def sterne_pvalue_oracle(fam_or_model, x: int, eta: float) -> float:
    """Direct summation of the defining formula over the summation window.

    Kept deliberately naive as a cross-check for :func:`sterne_pvalue`.
    """
    family, _ = _unpack(fam_or_model)
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    d = family.distribution(float(eta))
    lp = d.logpmf_values
    ix = int(x) - int(d.xs[0])
    if not 0 <= ix < len(d.xs):
        raise OutOfSupport(f"x = {x} fell outside the summation window")
    mask = lp <= lp[ix]
    return _clip(float(d.pmf_values[mask].sum()))


def _pvalue_at_jump(family: LatticeFamily, x: int, k: int) -> float:
    """pi(x, theta_{k,x}) for k > x, where outcome k is still tied with x."""
    d = family.distribution(special_param(family, x, k))
    return _clip(d.sf(k) + d.cdf(x))


def stage_one(fam_or_model, x: int, alpha: float, probe_cap: int = PROBE_CAP) -> int:
    """Largest k > x whose jump value pi(x, theta_{k,x}) is still >= alpha.

    Bounded supports use a pure integer bisection from max(X); unbounded ones
    first find a failing probe by doubling k - x, which must succeed for any
    family whose jump values decay to zero (cap ``probe_cap``, default 2^40).
    """
    family, _ = _unpack(fam_or_model)
    alpha = _check_alpha(alpha)
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    x = int(x)
    if x == family.support.hi:
        raise ValueError("x is the support maximum; the upper bound is +inf")

    if family.support.bounded_above:
        k_bad = int(family.support.hi)
        if _pvalue_at_jump(family, x, k_bad) >= alpha:
            return k_bad
        k_ok = x + 1  # pi(x, theta_{x+1,x}) = 1 on the plateau edge
    else:
        k_ok = x + 1
        step = 1
        while True:
            if step > probe_cap:
                raise DivergentSearch(
                    f"jump values stayed above alpha out to k = x + {step // 2}"
                )
            k_bad = x + step
            if k_bad > k_ok and _pvalue_at_jump(family, x, k_bad) < alpha:
                break
            k_ok = max(k_ok, k_bad)
            step *= 2

    while k_bad > k_ok + 1:
        mid = (k_ok + k_bad) // 2
        if _pvalue_at_jump(family, x, mid) >= alpha:
            k_ok = mid
        else:
            k_bad = mid
    return k_ok


def stage_two(fam_or_model, x: int, k: int, alpha: float, delta: float = DEFAULT_DELTA) -> SterneResult:
    """Bisect for the upper endpoint inside the piece following theta_{k,x}.

    On (theta_{k,x}, theta_{k+1,x}] the p-value equals
    pi_k(eta) = P_eta(X >= k + 1) + F_eta(x), and its limit from the right at
    theta_{k,x} is pi_k(theta_{k,x}). If that limit is already <= alpha the
    endpoint is the jump itself and is returned exactly; otherwise bisection
    shrinks a bracket [b', b] with pi_k(b') > alpha >= pi_k(b) until both
    b - b' <= delta and pi_k(b') - pi_k(b) <= delta.
    """
    family, _ = _unpack(fam_or_model)
    alpha = _check_alpha(alpha)
    delta = _check_delta(delta)
    if x not in family.support or k not in family.support:
        raise OutOfSupport(f"x = {x}, k = {k} must lie in the support")
    x, k = int(x), int(k)
    if k <= x:
        raise ValueError("stage_two expects k > x")

    def piece(t: float) -> float:
        d = family.distribution(t)
        return _clip(d.sf(k + 1) + d.cdf(x))

    b_lo = special_param(family, x, k)
    p_lo = piece(b_lo)
    if p_lo <= alpha:
        return SterneResult(
            k_star=k,
            bound=b_lo,
            bracket=(b_lo, b_lo),
            bracket_pvalues=(p_lo, p_lo),
            achieved=p_lo,
            at_jump=True,
            delta=delta,
        )
    b_hi = special_param(family, x, k + 1)
    p_hi = piece(b_hi)
    iterations = 0
    while b_hi - b_lo > delta or p_lo - p_hi > delta:
        mid = 0.5 * (b_lo + b_hi) if math.isfinite(b_hi) else b_lo + 1.0
        p_mid = piece(mid)
        if p_mid > alpha:
            b_lo, p_lo = mid, p_mid
        else:
            b_hi, p_hi = mid, p_mid
        iterations += 1
        if iterations > 5000:
            raise DivergentSearch("stage-two bisection failed to converge")
    return SterneResult(
        k_star=k,
        bound=b_hi,
        bracket=(b_lo, b_hi),
        bracket_pvalues=(p_lo, p_hi),
        achieved=p_hi,
        at_jump=False,
        delta=delta,
    )


def _upper_result(family: LatticeFamily, x: int, alpha: float, delta: float) -> SterneResult:
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    x = int(x)
    hi = family.support.hi
    if x == hi:
        return SterneResult(
            k_star=None,
            bound=math.inf,
            bracket=(math.inf, math.inf),
            bracket_pvalues=(1.0, 1.0),
            achieved=1.0,
            at_jump=False,
            delta=delta,
        )
    k = stage_one(family, x, alpha)
    if family.support.bounded_above and k == int(hi):
        # past the last jump only the left tail F_eta(x) remains
        t = special_param(family, x, k)
        p_t = family.distribution(t).cdf(x)
        if p_t <= alpha:
            return SterneResult(
                k_star=k,
                bound=t,
                bracket=(t, t),
                bracket_pvalues=(p_t, p_t),
                achieved=p_t,
                at_jump=True,
                delta=delta,
            )
        b = upper_bound(family, x, alpha)
        p_b = family.distribution(b).cdf(x)
        return SterneResult(
            k_star=k,
            bound=b,
            bracket=(b, b),
            bracket_pvalues=(p_b, p_b),
            achieved=p_b,
            at_jump=False,
            delta=delta,
        )
    return stage_two(family, x, k, alpha, delta)


def _lower_result(family: LatticeFamily, x: int, alpha: float, delta: float) -> SterneResult:
    r = _upper_result(reflect(family), -int(x), alpha, delta)
    return SterneResult(
        k_star=None if r.k_star is None else -r.k_star,
        bound=-r.bound,
        bracket=(-r.bracket[1], -r.bracket[0]),
        bracket_pvalues=(r.bracket_pvalues[1], r.bracket_pvalues[0]),
        achieved=r.achieved,
        at_jump=r.at_jump,
        delta=r.delta,
    )


def sterne_upper(fam_or_model, x: int, alpha: float, delta: float = DEFAULT_DELTA) -> float:
    """Upper endpoint of the Sterne confidence set (+inf at the support max)."""
    family, _ = _unpack(fam_or_model)
    return _upper_result(family, int(x), _check_alpha(alpha), _check_delta(delta)).bound


def sterne_lower(fam_or_model, x: int, alpha: float, delta: float = DEFAULT_DELTA) -> float:
    """Lower endpoint of the Sterne confidence set (-inf at the support min)."""
    family, _ = _unpack(fam_or_model)
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    return _lower_result(family, int(x), _check_alpha(alpha), _check_delta(delta)).bound


def sterne_interval(fam_or_model, x: int, alpha: float, delta: float = DEFAULT_DELTA):
    """Closed hull of {eta : pi(x, eta) > alpha} on both parameter scales."""
    family, to_natural = _unpack(fam_or_model)
    alpha = _check_alpha(alpha)
    delta = _check_delta(delta)
    lo = _lower_result(family, int(x), alpha, delta)
    hi = _upper_result(family, int(x), alpha, delta)
    return ConfidenceInterval(
        method="sterne",
        alpha=alpha,
        theta_lo=lo.bound,
        theta_hi=hi.bound,
        natural_lo=to_natural(lo.bound),
        natural_hi=to_natural(hi.bound),
        pvalue_lo=lo.achieved,
        pvalue_hi=hi.achieved,
        delta=delta,
    )


def jump_limits(fam_or_model, x: int, k: int) -> tuple[float, float, float]:
    """(theta_{k,x}, left limit, right limit) of pi(x, .) at the jump.

    For k > x the left limit equals the value at the point; for k < x the
    right limit does.
    """
    family, _ = _unpack(fam_or_model)
    x, k = int(x), int(k)
    t = special_param(family, x, k)
    d = family.distribution(t)
    if k > x:
        left = _clip(d.sf(k) + d.cdf(x)) if k > x + 1 else 1.0
        right = _clip(d.sf(k + 1) + d.cdf(x))
    else:
        left = _clip(d.sf(x) + d.cdf(k - 1))
        right = _clip(d.sf(x) + d.cdf(k)) if k < x - 1 else 1.0
    return t, left, right
