"""Discrete log-concave exponential families on integer lattices.

A family is a set of positive probability weights w_x on an interval of
integers, tilted exponentially by a canonical parameter theta:

    f_theta(x) = w_x exp(theta x) / sum_y w_y exp(theta y).

The weights must be strictly log-concave (w_{x+1} / w_x strictly decreasing),
which is what gives the two-sided p-value in :mod:`exactci.sterne` its
piecewise structure. Extended parameters are plain IEEE floats: theta = -inf
means the point mass at a finite lower support endpoint, theta = +inf the
point mass at a finite upper endpoint; an infinite theta on an unbounded side
is inadmissible.

All evaluation happens in log space with max-shifted sums. For supports that
are unbounded on one side, sums are truncated where the log summand has
dropped ``TAIL_DROP`` natural-log units below its maximum, and never inside
the window promised by the family's ``tail_floor`` witness; for the shipped
models the neglected tail mass is below 1e-18 in relative terms. Tail
probabilities are accumulated from the near end (upper tails are summed
downward, never computed as one minus a cdf), so jump heights of order the
smallest pmf value survive in float arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from .errors import (
    DivergentSearch,
    EmptySupport,
    InadmissibleInfiniteTheta,
    KEqualsX,
    NotLogConcave,
    OutOfSupport,
    UnboundedEnumeration,
)

# Truncation rule for unbounded supports: stop once the log summand is this far
# below the running maximum (and past the tail_floor witness).
TAIL_DROP = 45.0

# Hard caps so a misdeclared family fails loudly instead of hanging.
_MAX_WINDOW = 2_000_000
_MAX_STEP = 1 << 42


def _is_int(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


@dataclass(frozen=True)
class LatticeSupport:
    """An interval of integers, possibly unbounded on either side.

    ``lo`` is an int or -inf, ``hi`` an int or +inf. Membership tests use
    exact integer arithmetic; non-integers are never members.
    """

    lo: int | float
    hi: int | float

    def __post_init__(self):
        if not (_is_int(self.lo) or (isinstance(self.lo, float) and self.lo == -math.inf)):
            raise ValueError("lo must be an integer or -inf")
        if not (_is_int(self.hi) or (isinstance(self.hi, float) and self.hi == math.inf)):
            raise ValueError("hi must be an integer or +inf")
        if self.lo > self.hi:
            raise EmptySupport(f"empty support: lo = {self.lo} > hi = {self.hi}")

    @property
    def bounded_below(self) -> bool:
        return self.lo != -math.inf

    @property
    def bounded_above(self) -> bool:
        return self.hi != math.inf

    @property
    def bounded(self) -> bool:
        return self.bounded_below and self.bounded_above

    def __contains__(self, x) -> bool:
        return _is_int(x) and self.lo <= x <= self.hi

    def points(self) -> np.ndarray:
        if not self.bounded:
            raise UnboundedEnumeration("cannot enumerate an unbounded support")
        return np.arange(int(self.lo), int(self.hi) + 1)


@dataclass(frozen=True)
class Distribution:
    """The family at a fixed theta, tabulated on its summation window.

    ``cdf`` is exactly 0 below the support and exactly 1 at or above its
    maximum; ``sf(x)`` is the inclusive upper tail P(X >= x). Outcomes beyond
    a truncated window fall into tail regions carrying < 1e-18 relative mass
    and are mapped to 0/1 accordingly.
    """

    support: LatticeSupport
    theta: float
    xs: np.ndarray
    log_norm: float
    logpmf_values: np.ndarray
    _log_weight: Callable | None = field(repr=False, default=None)

    @cached_property
    def pmf_values(self) -> np.ndarray:
        return np.exp(self.logpmf_values)

    @cached_property
    def _cum(self) -> np.ndarray:
        return np.minimum(np.cumsum(self.pmf_values), 1.0)

    @cached_property
    def _tail(self) -> np.ndarray:
        return np.minimum(np.cumsum(self.pmf_values[::-1])[::-1], 1.0)

    def _index(self, x: int) -> int:
        return int(x) - int(self.xs[0])

    def logpmf(self, x) -> float:
        if x not in self.support:
            raise OutOfSupport(f"x = {x} is not in the support")
        if math.isinf(self.theta):
            return 0.0 if int(x) == int(self.xs[0]) else -math.inf
        i = self._index(x)
        if 0 <= i < len(self.xs):
            return float(self.logpmf_values[i])
        # off-window point deep in a truncated tail
        g = float(self._log_weight(np.asarray([x], dtype=float))[0]) + self.theta * int(x)
        return g - self.log_norm

    def pmf(self, x) -> float:
        return math.exp(self.logpmf(x))

    def cdf(self, x) -> float:
        """P(X <= x) for any integer x."""
        if x < self.support.lo:
            return 0.0
        if x >= self.support.hi:
            return 1.0
        if x < self.xs[0]:
            return 0.0
        if x >= self.xs[-1]:
            return 1.0
        return float(self._cum[self._index(x)])

    def sf(self, x) -> float:
        """P(X >= x) for any integer x, summed from the tail inward."""
        if x <= self.support.lo:
            return 1.0
        if x > self.support.hi:
            return 0.0
        if x <= self.xs[0]:
            return 1.0
        if x > self.xs[-1]:
            return 0.0
        return float(self._tail[self._index(x)])


@dataclass(frozen=True)
class LatticeFamily:
    """Weights w_x > 0 on a lattice support, given as ``log_weight``.

    ``log_weight`` must accept a float ndarray of support points and return
    log w_x elementwise. It must be a total function on the support. Families
    with an unbounded side should supply ``tail_floor``, a map from theta to
    a support index the truncation window must reach on that side; without it
    the window is cut purely by the TAIL_DROP rule.
    """

    support: LatticeSupport
    log_weight: Callable
    tail_floor: Callable | None = None

    def __post_init__(self):
        if self.support.bounded and self.support.lo == self.support.hi:
            raise EmptySupport("support has a single point; intervals are degenerate")

    @cached_property
    def _table(self) -> np.ndarray:
        # bounded supports keep the full log-weight table around
        return np.asarray(self.log_weight(self.support.points().astype(float)), dtype=float)

    def _logw(self, x: int) -> float:
        if self.support.bounded:
            return float(self._table[int(x) - int(self.support.lo)])
        return float(self.log_weight(np.asarray([x], dtype=float))[0])

    def _score(self, x: int, theta: float) -> float:
        return self._logw(x) + theta * int(x)

    def _mode(self, theta: float) -> int:
        """Argmax of log w_x + theta x; the difference sequence is strictly decreasing."""
        lo, hi = self.support.lo, self.support.hi

        def d(x: int) -> float:
            return self._logw(x + 1) - self._logw(x) + theta

        anchor = 0
        if self.support.bounded_below:
            anchor = max(anchor, int(lo))
        if self.support.bounded_above:
            anchor = min(anchor, int(hi) - 1)
        if d(anchor) <= 0.0:
            # mode is at or left of anchor; find largest x with d(x) > 0
            if self.support.bounded_below and anchor == int(lo):
                return int(lo)
            right = anchor
            step = 1
            while True:
                left = right - step
                if self.support.bounded_below and left <= int(lo):
                    left = int(lo)
                    if d(left) <= 0.0:
                        return int(lo)
                    break
                if d(left) > 0.0:
                    break
                right = left
                step *= 2
                if step > _MAX_STEP:
                    raise DivergentSearch("could not bracket the summand mode")
            # d(left) > 0 >= d(right)
            while right - left > 1:
                mid = (left + right) // 2
                if d(mid) > 0.0:
                    left = mid
                else:
                    right = mid
            return right
        # mode is right of anchor; find smallest x with d(x) <= 0
        left = anchor
        step = 1
        while True:
            right = left + step
            if self.support.bounded_above and right >= int(hi):
                if d(int(hi) - 1) > 0.0:
                    return int(hi)
                right = int(hi) - 1
                if d(right) <= 0.0 and right - left <= 1:
                    return right
                break
            if d(right) <= 0.0:
                break
            left = right
            step *= 2
            if step > _MAX_STEP:
                raise DivergentSearch("could not bracket the summand mode")
        while right - left > 1:
            mid = (left + right) // 2
            if d(mid) <= 0.0:
                right = mid
            else:
                left = mid
        return right

    def _tail_cut(self, theta: float, mode: int, g_mode: float, direction: int) -> int:
        """First point past the mode whose log summand sits TAIL_DROP below it."""

        def deficit(x: int) -> float:
            return g_mode - self._score(x, theta)

        step = 8
        near = mode
        while deficit(mode + direction * step) <= TAIL_DROP:
            near = mode + direction * step
            step *= 2
            if step > _MAX_STEP:
                raise DivergentSearch("tail of the summand does not decay")
        far = mode + direction * step
        while abs(far - near) > 1:
            mid = (near + far) // 2
            if deficit(mid) <= TAIL_DROP:
                near = mid
            else:
                far = mid
        return far

    def _window(self, theta: float) -> tuple[int, int]:
        lo, hi = self.support.lo, self.support.hi
        if self.support.bounded:
            return int(lo), int(hi)
        m = self._mode(theta)
        gm = self._score(m, theta)
        if self.support.bounded_below:
            a = int(lo)
        else:
            a = self._tail_cut(theta, m, gm, -1)
            if self.tail_floor is not None:
                a = min(a, int(self.tail_floor(theta)))
        if self.support.bounded_above:
            b = int(hi)
        else:
            b = self._tail_cut(theta, m, gm, +1)
            if self.tail_floor is not None:
                b = max(b, int(self.tail_floor(theta)))
        if b - a + 1 > _MAX_WINDOW:
            raise UnboundedEnumeration(
                f"summation window [{a}, {b}] at theta = {theta} is too large"
            )
        return a, b

    def distribution(self, theta: float) -> Distribution:
        """Tabulate the family at theta (extended values included)."""
        if isinstance(theta, (int, np.integer)):
            theta = float(theta)
        if not isinstance(theta, float) or math.isnan(theta):
            raise ValueError(f"theta must be a float, got {theta!r}")
        if math.isinf(theta):
            endpoint = self.support.lo if theta < 0 else self.support.hi
            if not _is_int(endpoint):
                raise InadmissibleInfiniteTheta(
                    f"theta = {theta} is inadmissible: that support end is unbounded"
                )
            xs = np.asarray([int(endpoint)])
            return Distribution(self.support, theta, xs, 0.0, np.asarray([0.0]), self.log_weight)
        a, b = self._window(theta)
        xs = np.arange(a, b + 1)
        if self.support.bounded:
            logw = self._table
        else:
            logw = np.asarray(self.log_weight(xs.astype(float)), dtype=float)
        g = logw + theta * xs
        log_norm = float(logsumexp(g))
        return Distribution(self.support, theta, xs, log_norm, g - log_norm, self.log_weight)


def validate(family: LatticeFamily) -> None:
    """Check strict log-concavity of the stored weight range.

    For bounded supports the whole table is checked; for unbounded supports
    only the summation window at theta = 0 (tail behaviour is the
    constructor's responsibility). Raises :class:`NotLogConcave` carrying the
    first violating interior index.
    """
    if family.support.bounded:
        xs = family.support.points()
        logw = family._table
    else:
        a, b = family._window(0.0)
        xs = np.arange(a, b + 1)
        logw = np.asarray(family.log_weight(xs.astype(float)), dtype=float)
    if not np.all(np.isfinite(logw)):
        i = int(np.nonzero(~np.isfinite(logw))[0][0])
        raise NotLogConcave(int(xs[i]))
    d = np.diff(logw)
    bad = np.nonzero(d[1:] >= d[:-1])[0]
    if bad.size:
        raise NotLogConcave(int(xs[bad[0] + 1]))


def log_pmf(family: LatticeFamily, theta: float, x: int) -> float:
    """log f_theta(x); x must lie in the support."""
    return family.distribution(theta).logpmf(x)


def cdf(family: LatticeFamily, theta: float, x: int) -> float:
    """F_theta(x) = P(X <= x) for any integer x; 0 below, 1 at or above the support."""
    return family.distribution(theta).cdf(x)


def special_param(family: LatticeFamily, x: int, k: int) -> float:
    """The parameter where f_theta(k) = f_theta(x):

        theta_{k,x} = (log w_x - log w_k) / (k - x),

    strictly increasing in k. The sentinels k = lo - 1 and k = hi + 1 (for
    finite endpoints) give -inf and +inf.
    """
    if x not in family.support:
        raise OutOfSupport(f"x = {x} is not in the support")
    if k == x:
        raise KEqualsX("theta_{k,x} is undefined for k = x")
    lo, hi = family.support.lo, family.support.hi
    if family.support.bounded_below and k == int(lo) - 1:
        return -math.inf
    if family.support.bounded_above and k == int(hi) + 1:
        return math.inf
    if k not in family.support:
        raise OutOfSupport(f"k = {k} is not in the support (nor a sentinel)")
    return (family._logw(x) - family._logw(k)) / (int(k) - int(x))


@dataclass(frozen=True)
class SpecialParamLadder:
    """theta_{k,x} for a fixed x, keyed by k; strictly increasing in k."""

    x: int
    entries: dict[int, float]

    def ks(self) -> list[int]:
        return sorted(self.entries)


def ladder(
    family: LatticeFamily,
    x: int,
    k_min: int | None = None,
    k_max: int | None = None,
) -> SpecialParamLadder:
    """Materialize the special parameters for one x, sentinels included.

    Unbounded sides need an explicit k_min / k_max.
    """
    lo, hi = family.support.lo, family.support.hi
    if k_min is None:
        if not family.support.bounded_below:
            raise UnboundedEnumeration("k_min required for a support unbounded below")
        k_min = int(lo) - 1
    if k_max is None:
        if not family.support.bounded_above:
            raise UnboundedEnumeration("k_max required for a support unbounded above")
        k_max = int(hi) + 1
    entries = {}
    for k in range(int(k_min), int(k_max) + 1):
        if k == x:
            continue
        entries[k] = special_param(family, x, k)
    return SpecialParamLadder(x=int(x), entries=entries)


def plateau(family: LatticeFamily, x: int) -> tuple[float, float]:
    """The closed parameter interval on which the two-sided p-value of x is 1.

    Equals [theta_{x-1,x}, theta_{x+1,x}] with infinite sentinels at the
    support ends.
    """
    return special_param(family, x, x - 1), special_param(family, x, x + 1)


def reflect(family: LatticeFamily) -> LatticeFamily:
    """The family of -X; lower-bound searches run upward in the reflection."""
    orig_logw = family.log_weight
    orig_floor = family.tail_floor

    def logw(z):
        return orig_logw(-np.asarray(z))

    floor = None
    if orig_floor is not None:
        def floor(theta):
            return -orig_floor(-theta)

    return LatticeFamily(
        support=LatticeSupport(
            lo=-family.support.hi if family.support.bounded_above else -math.inf,
            hi=-family.support.lo if family.support.bounded_below else math.inf,
        ),
        log_weight=logw,
        tail_floor=floor,
    )


def truncated_geometric_variance(delta: float, m: int) -> float:
    """Variance of a geometric-weight distribution on {0, ..., m}.

    Weights are proportional to exp(delta * x). For delta = 0 this is the
    uniform variance m (m + 2) / 12; otherwise

        B^2 - B - (m + 1)^2 / (2 cosh((m + 1) delta) - 2),   B = e^d / (e^d - 1),

    written below in a cancellation-safe form. Strictly increasing in m.
    """
    if not _is_int(m) or m < 0:
        raise ValueError("m must be a nonnegative integer")
    if not math.isfinite(delta):
        raise ValueError("delta must be finite")
    if delta == 0.0:
        return m * (m + 2) / 12.0
    b1 = 1.0 / math.expm1(delta)  # B - 1
    half = 2.0 * math.sinh((m + 1) * delta / 2.0)  # sqrt(2 cosh((m+1)d) - 2), signed
    return (1.0 + b1) * b1 - ((m + 1) / half) ** 2
