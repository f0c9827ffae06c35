"""One-dimensional numerical integration.

Two routes are provided on purpose: an adaptive Gauss-Kronrod bisection
scheme used throughout the package, and a fixed-grid composite Simpson
rule kept strictly as an independent cross-check oracle.  The adaptive
rule never samples interval endpoints (Kronrod nodes are interior), so
integrable logarithmic endpoint singularities are handled by plain
bisection without special weights.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

__all__ = [
    "QuadratureSpec",
    "QuadratureConvergenceError",
    "integrate_adaptive",
    "integrate_fixed",
]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 60

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol > 0.0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


class QuadratureConvergenceError(RuntimeError):
    """Raised when the error bound cannot be met; carries the best estimate."""

    def __init__(self, estimate: float, error_bound: float, subdivisions: int):
        super().__init__(
            f"quadrature did not converge after {subdivisions} subdivisions: "
            f"estimate={estimate!r}, error bound={error_bound!r}"
        )
        self.estimate = estimate
        self.error_bound = error_bound
        self.subdivisions = subdivisions


# 15-point Kronrod extension of 7-point Gauss on [-1, 1].  The Gauss
# nodes are the odd-indexed Kronrod abscissae.
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)


def _gk15(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """Kronrod-15 estimate and |K15 - G7| error bound on [lo, hi]."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    fc = f(c)
    resk = _WGK[7] * fc
    resg = _WG[3] * fc
    for j in range(7):
        dx = h * _XGK[j]
        f1 = f(c - dx)
        f2 = f(c + dx)
        resk += _WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg += _WG[j // 2] * (f1 + f2)
    return resk * h, abs((resk - resg) * h)


def integrate_adaptive(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Adaptive bisection integral of f on [lo, hi].

    The result I satisfies |I - I_true| <= max(abs_tol, rel_tol*|I_true|)
    for smooth integrands and for integrands with at most logarithmic
    endpoint singularities.  Worst-interval-first bisection; raises
    QuadratureConvergenceError when max_subdivisions splits are exhausted.
    """
    if lo > hi:
        raise ValueError(f"require lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return 0.0

    val, err = _gk15(f, lo, hi)
    # heap entries: (-err, lo, hi, val, err); seq breaks ties deterministically
    heap = [(-err, 0, lo, hi, val, err)]
    total_val = val
    total_err = err
    seq = 0
    splits = 0
    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total_val)):
        if splits >= spec.max_subdivisions:
            raise QuadratureConvergenceError(total_val, total_err, splits)
        _, _, a, b, v, e = heapq.heappop(heap)
        m = 0.5 * (a + b)
        v1, e1 = _gk15(f, a, m)
        v2, e2 = _gk15(f, m, b)
        total_val += v1 + v2 - v
        total_err += e1 + e2 - e
        seq += 1
        heapq.heappush(heap, (-e1, seq, a, m, v1, e1))
        seq += 1
        heapq.heappush(heap, (-e2, seq, m, b, v2, e2))
        splits += 1
    return total_val


def integrate_fixed(
    f: Callable[[float], float], lo: float, hi: float, n_panels: int
) -> float:
    """Composite Simpson estimate with n_panels panels (rounded up to even).

    Cross-check oracle only; evaluates f at the endpoints, so it is not
    suitable for integrands singular at lo or hi.
    """
    if n_panels < 2:
        raise ValueError("n_panels must be >= 2")
    n = n_panels + (n_panels % 2)
    h = (hi - lo) / n
    acc = f(lo) + f(hi)
    for i in range(1, n):
        acc += (4.0 if i % 2 else 2.0) * f(lo + i * h)
    return acc * h / 3.0
