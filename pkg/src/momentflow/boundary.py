"""Heat distance to the moment-cone boundary and the boundary projection (n = 1).

Backward heat evolution of an interior 1-D sequence leaves the cone at a
finite time: the heat distance.  It is located as the first zero crossing of
the minimal Hankel eigenvalue along ``t -> p_s(-t)``, bracketed by a scan of
the a-priori interval ``[0, upper_bound]`` and refined by bisection.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import MomentSequence
from .flows import MomentFlow, evaluate_flow, heat_flow
from .hankel import (
    PSD_SINGULAR,
    POSITIVE_DEFINITE,
    PsdReport,
    build_hankel,
    classify_psd,
    kernel_polynomial,
)

DEFAULT_BISECT_TOL = 1e-10
DEFAULT_MEMBERSHIP_TOL = 1e-6


class NotInteriorError(ValueError):
    """The input sequence is not an interior point of the moment cone."""


class BracketingError(RuntimeError):
    """No sign change of the minimal eigenvalue inside the scan interval."""


@dataclass(frozen=True)
class BoundaryReport:
    """Result of the boundary search.

    ``interval_closed`` distinguishes whether the cone-stay interval contains
    its left endpoint, i.e. whether the backward-evolved boundary sequence is
    itself a moment sequence.  Trivial inputs (degree < 2 or the zero
    sequence) never leave the cone; they report an infinite distance.
    """

    distance: float
    interval_closed: bool
    boundary_sequence: MomentSequence
    kernel_poly: np.ndarray | None
    upper_bound: float
    truncated_odd: bool = False


def distance_upper_bound(s: MomentSequence, nu: float) -> float:
    """A-priori bound ``sum_i s_{2 e_i} / (2 n s_0 nu)`` on the heat distance.

    Derived from positivity of the evolved second moments.  Degrees 0 and 1
    impose no constraint and give infinity.
    """
    if not nu > 0.0:
        raise ValueError(f"nu must be > 0, got {nu}")
    if s.degree < 2:
        return math.inf
    s0 = s[(0,) * s.n]
    if s0 <= 0.0:
        raise ValueError(f"upper bound requires s_0 > 0, got {s0}")
    second = math.fsum(
        s[tuple(2 if i == j else 0 for i in range(s.n))] for j in range(s.n)
    )
    return second / (2.0 * s.n * s0 * nu)


def _lambda_min(F: MomentFlow, order: int, t: float) -> float:
    H = build_hankel(evaluate_flow(F, -t), order)
    return float(np.linalg.eigvalsh(H.entries)[0])


def lambda_min_profile(
    s: MomentSequence, nu: float, ts: np.ndarray
) -> list[tuple[float, float, float]]:
    """Diagnostics: ``(t, lambda_min, det)`` of the backward-evolved Hankel."""
    order = s.degree // 2
    F = heat_flow(s, nu)
    out = []
    for t in ts:
        H = build_hankel(evaluate_flow(F, -float(t)), order)
        out.append((float(t), float(np.linalg.eigvalsh(H.entries)[0]), H.determinant()))
    return out


def _kernel_report_at_boundary(H, tol: float) -> PsdReport:
    # at the bisected crossing the smallest eigenvalue is zero only up to the
    # bisection resolution; widen the classification window, and as a last
    # resort treat the bottom eigenvector as the kernel
    for factor in (1.0, 100.0):
        rep = classify_psd(H, tol=tol * factor)
        if rep.status == PSD_SINGULAR:
            return rep
    w, v = np.linalg.eigh(H.entries)
    return PsdReport(PSD_SINGULAR, float(w[0]), (v[:, 0].copy(),))


def _boundary_membership(
    seq: MomentSequence, kernel_poly: np.ndarray, mem_tol: float
) -> bool:
    """Test whether the boundary sequence is represented by atoms on the kernel roots.

    Membership requires real roots, nonnegative weights, reproduction of the
    moments below the top one, and a vanishing top-moment slack.  A strictly
    positive slack marks a PSD-singular sequence that is not a moment
    sequence, i.e. an open cone-stay interval.
    """
    vals = seq.as_1d_tuple()
    d = seq.degree
    v = np.asarray(kernel_poly, dtype=float)
    nz = np.nonzero(v)[0]
    if nz.size == 0 or nz.max() < 1:
        return False
    deg = int(nz.max())
    roots = np.roots(v[: deg + 1][::-1])
    if np.any(np.abs(roots.imag) > 1e-8 * (1.0 + np.abs(roots.real))):
        return False
    xs = np.sort(roots.real)
    mscale = 1.0 + max(abs(x) for x in vals)
    A = np.vander(xs, N=d, increasing=True).T  # rows are moments 0 .. d-1
    b = np.array(vals[:d])
    w, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.any(w < -mem_tol * mscale):
        return False
    if float(np.max(np.abs(A @ w - b))) > mem_tol * mscale:
        return False
    slack = vals[d] - math.fsum(wi * xi**d for wi, xi in zip(w, xs))
    return -mem_tol * mscale <= slack <= mem_tol * mscale


def _trivial_report(s: MomentSequence, nu: float, truncated: bool) -> BoundaryReport:
    try:
        ub = distance_upper_bound(s, nu) if not s.is_zero() else math.inf
    except ValueError:
        ub = math.inf
    return BoundaryReport(
        distance=math.inf,
        interval_closed=True,
        boundary_sequence=s,
        kernel_poly=None,
        upper_bound=ub,
        truncated_odd=truncated,
    )


def heat_distance_1d(
    s: MomentSequence,
    nu: float,
    tol: float = DEFAULT_BISECT_TOL,
    scan_points: int = 128,
    membership_tol: float = DEFAULT_MEMBERSHIP_TOL,
) -> BoundaryReport:
    """Locate the heat distance of an interior 1-D sequence.

    Scans ``lambda_min`` of the backward-evolved Hankel matrix over
    ``[0, upper_bound]`` with ``scan_points`` cells and bisects the first
    sign change down to width ``tol``.  Sequences of odd top degree are
    truncated to the even part (flagged on the report).
    """
    if s.n != 1:
        raise ValueError("heat distance is implemented for n = 1 only")
    truncated = False
    if s.degree % 2 == 1:
        warnings.warn(
            f"odd top degree {s.degree}: dropping the top moment for Hankel analysis",
            stacklevel=2,
        )
        s = s.truncate(s.degree - 1)
        truncated = True
    if s.degree < 2 or s.is_zero():
        return _trivial_report(s, nu, truncated)

    order = s.degree // 2
    start = classify_psd(build_hankel(s, order))
    if start.status != POSITIVE_DEFINITE:
        raise NotInteriorError(
            f"not interior: Hankel classification is {start.status} "
            f"(min eigenvalue {start.min_eigenvalue:.3e})"
        )
    ub = distance_upper_bound(s, nu)
    F = heat_flow(s, nu)

    lo, hi = 0.0, None
    g_lo = start.min_eigenvalue
    for i in range(1, scan_points + 1):
        t = ub * i / scan_points
        g = _lambda_min(F, order, t)
        if g <= 0.0:
            lo, hi = ub * (i - 1) / scan_points, t
            break
        g_lo = g
    if hi is None:
        prof = lambda_min_profile(s, nu, np.array([0.0, ub]))
        raise BracketingError(
            "root bracketing failed: no sign change of lambda_min in "
            f"[0, {ub}]; endpoints (t, lambda_min, det): {prof}"
        )

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _lambda_min(F, order, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    distance = hi  # the side at or past the crossing, so the kernel is visible

    boundary_seq = evaluate_flow(F, -distance)
    H_b = build_hankel(boundary_seq, order)
    rep = _kernel_report_at_boundary(H_b, tol=max(1e-10, 100.0 * tol))
    kpoly = kernel_polynomial(rep)
    closed = _boundary_membership(boundary_seq, kpoly, membership_tol)
    return BoundaryReport(
        distance=distance,
        interval_closed=closed,
        boundary_sequence=boundary_seq,
        kernel_poly=kpoly,
        upper_bound=ub,
        truncated_odd=truncated,
    )


def boundary_project(
    s: MomentSequence, nu: float, tol: float = DEFAULT_BISECT_TOL
) -> tuple[MomentSequence, float]:
    """Project to the cone boundary: returns ``(boundary sequence, distance)``.

    Forward heat evolution of the boundary sequence by the returned distance
    reproduces ``s``.
    """
    report = heat_distance_1d(s, nu, tol=tol)
    return report.boundary_sequence, report.distance
