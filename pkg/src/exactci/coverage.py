"""Exact coverage audit by enumeration of outcomes.

For each parameter on a grid, the coverage of an interval method is the
exact probability that the interval of a random outcome contains it:

    c(eta) = sum_x f_eta(x) 1[eta in C(x)].

Intervals are closed, so the exact methods here never fall below the nominal
level. The audited grid is the user grid plus every finite interval endpoint
inside its span, which makes the reported minimum exact over the span: the
coverage function only changes where an endpoint is crossed.

Unbounded supports are handled by truncating the outcome sum per parameter at
the 1 - 1e-14 quantile, which can only understate coverage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import _unpack, clopper_pearson, lower_bound, upper_bound
from .errors import UnboundedEnumeration
from .sterne import DEFAULT_DELTA, sterne_interval

_TAIL = 1e-14

METHODS = ("sterne", "clopper_pearson", "lower", "upper")


def _canon_method(method: str) -> str:
    name = {"cp": "clopper_pearson"}.get(method, method)
    if name not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS + ('cp',)}")
    return name


@dataclass(frozen=True)
class CoverageReport:
    """Exact coverage (and natural-scale expected length) over a grid."""

    method: str
    alpha: float
    grid: np.ndarray
    natural: np.ndarray
    coverage: np.ndarray
    expected_length: np.ndarray | None
    min_coverage: float


def interval_bounds(fam_or_model, method: str, x: int, alpha: float, delta: float = DEFAULT_DELTA):
    """(theta_lo, theta_hi, natural_lo, natural_hi) for one outcome."""
    family, to_natural = _unpack(fam_or_model)
    method = _canon_method(method)
    if method == "sterne":
        ci = sterne_interval(fam_or_model, x, alpha, delta)
        return ci.theta_lo, ci.theta_hi, ci.natural_lo, ci.natural_hi
    if method == "clopper_pearson":
        ci = clopper_pearson(fam_or_model, x, alpha)
        return ci.theta_lo, ci.theta_hi, ci.natural_lo, ci.natural_hi
    if method == "lower":
        a = lower_bound(family, x, alpha)
        return a, math.inf, to_natural(a), to_natural(math.inf)
    a = upper_bound(family, x, alpha)
    return -math.inf, a, to_natural(-math.inf), to_natural(a)


def exact_coverage(
    fam_or_model,
    method: str,
    alpha: float,
    eta_grid,
    delta: float = DEFAULT_DELTA,
    include_endpoints: bool = True,
) -> CoverageReport:
    """Audit one method over a grid of canonical parameters.

    ``eta_grid`` may contain -inf/+inf where the matching support endpoint is
    finite. Expected lengths are reported for bounded supports only.
    """
    family, to_natural = _unpack(fam_or_model)
    method = _canon_method(method)
    grid = [float(v) for v in eta_grid]
    if not grid:
        raise ValueError("eta_grid must not be empty")

    if family.support.bounded:
        xs = [int(v) for v in family.support.points()]
    else:
        if not family.support.bounded_below:
            raise UnboundedEnumeration(
                "coverage enumeration needs a support bounded below"
            )
        finite = [v for v in grid if math.isfinite(v)]
        if not finite:
            xs = [int(family.support.lo)]
        else:
            top = max(finite)
            d = family.distribution(top)
            i = min(int(np.searchsorted(d._cum, 1.0 - _TAIL)), len(d.xs) - 1)
            xs = list(range(int(family.support.lo), int(d.xs[i]) + 1))

    per_x = {x: interval_bounds(fam_or_model, method, x, alpha, delta) for x in xs}
    t_lo = np.asarray([per_x[x][0] for x in xs])
    t_hi = np.asarray([per_x[x][1] for x in xs])
    n_lo = np.asarray([per_x[x][2] for x in xs])
    n_hi = np.asarray([per_x[x][3] for x in xs])

    full = list(grid)
    if include_endpoints:
        span_lo, span_hi = min(grid), max(grid)
        for t in np.concatenate([t_lo, t_hi]):
            if math.isfinite(t) and span_lo <= t <= span_hi:
                full.append(float(t))
    full = sorted(set(full))

    lengths = None
    want_lengths = family.support.bounded
    if want_lengths:
        lengths = []
        len_x = n_hi - n_lo
        len_finite = np.isfinite(len_x)
    coverage = []
    for eta in full:
        d = family.distribution(eta)
        pmf = np.asarray([d.pmf(x) for x in xs])
        member = (t_lo <= eta) & (eta <= t_hi)
        coverage.append(float(pmf[member].sum()))
        if want_lengths:
            val = float(np.dot(pmf[len_finite], len_x[len_finite]))
            if np.any(~len_finite & (pmf > 0.0)):
                val = math.inf
            lengths.append(val)

    coverage = np.asarray(coverage)
    return CoverageReport(
        method=method,
        alpha=float(alpha),
        grid=np.asarray(full),
        natural=np.asarray([to_natural(v) for v in full]),
        coverage=coverage,
        expected_length=None if lengths is None else np.asarray(lengths),
        min_coverage=float(coverage.min()),
    )


def length_table(fam_or_model, methods, alpha: float, xs, delta: float = DEFAULT_DELTA) -> dict:
    """Natural-scale interval lengths per outcome, one array per method.

    Infinite lengths are reported as inf.
    """
    out = {}
    for method in methods:
        name = _canon_method(method)
        rows = []
        for x in xs:
            _, _, nat_lo, nat_hi = interval_bounds(fam_or_model, name, int(x), alpha, delta)
            rows.append(nat_hi - nat_lo)
        out[name] = np.asarray(rows)
    return out


def write_csv(report: CoverageReport, fh) -> None:
    """Emit a report as CSV: eta, natural_param, coverage, expected_length."""
    fh.write("eta,natural_param,coverage,expected_length\n")
    for i in range(len(report.grid)):
        length = ""
        if report.expected_length is not None:
            length = repr(float(report.expected_length[i]))
        eta = repr(float(report.grid[i]))
        nat = repr(float(report.natural[i]))
        cov = repr(float(report.coverage[i]))
        fh.write(f"{eta},{nat},{cov},{length}\n")
